//! Orthonormal bases of symmetric and skew-symmetric `n²`-vectors and the
//! matching half-vectorizations.
//!
//! Column order follows the column-major lower triangle: pairs `(i, j)` with
//! `i <= j` in lexicographic order, so for `n = 3` the symmetric columns are
//! `(0,0) (0,1) (0,2) (1,1) (1,2) (2,2)`. Skew columns use the same order with
//! the diagonal pairs removed, and column `(i, j)` of `Q̃` is
//! `(e_i ⊗ e_j - e_j ⊗ e_i) / √2`.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::dense::DenseMatrix;
use crate::eigen::{sym_eigen, DEFAULT_EIGEN_TOL};
use crate::error::{Error, Result};

/// `n(n+1)/2`
pub fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// `n(n-1)/2`
pub fn skew_dim(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Pairs `(i, j)`, `i <= j`, in basis-column order.
pub fn sym_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Pairs `(i, j)`, `i < j`, in basis-column order.
pub fn skew_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

#[derive(Debug, Clone)]
pub struct ParityBasis {
    pub n: usize,
    /// `Q`, `n² x s(n)`.
    pub sym_basis: DenseMatrix,
    /// `Q̃`, `n² x t(n)`.
    pub skew_basis: DenseMatrix,
    pub sym_order: Vec<(usize, usize)>,
    pub skew_order: Vec<(usize, usize)>,
}

pub fn parity_basis(n: usize) -> ParityBasis {
    let sym_order = sym_pairs(n);
    let skew_order = skew_pairs(n);
    let mut q = DenseMatrix::zeros(n * n, sym_order.len());
    for (col, &(i, j)) in sym_order.iter().enumerate() {
        if i == j {
            q.set(i * n + i, col, 1.0);
        } else {
            q.set(i * n + j, col, FRAC_1_SQRT_2);
            q.set(j * n + i, col, FRAC_1_SQRT_2);
        }
    }
    let mut qt = DenseMatrix::zeros(n * n, skew_order.len());
    for (col, &(i, j)) in skew_order.iter().enumerate() {
        qt.set(i * n + j, col, FRAC_1_SQRT_2);
        qt.set(j * n + i, col, -FRAC_1_SQRT_2);
    }
    ParityBasis {
        n,
        sym_basis: q,
        skew_basis: qt,
        sym_order,
        skew_order,
    }
}

/// Eigenspace bases of a symmetric involution `P`.
#[derive(Debug, Clone)]
pub struct InvolutionBasis {
    pub p: DenseMatrix,
    /// `Θ`, with `PΘ = Θ`.
    pub theta: DenseMatrix,
    /// `Θ̃`, with `PΘ̃ = -Θ̃`.
    pub theta_tilde: DenseMatrix,
    pub s: usize,
    pub t: usize,
}

const INVOLUTION_TOL: f64 = 1e-10;

pub fn involution_basis(p: &DenseMatrix) -> Result<InvolutionBasis> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            rows: p.rows(),
            cols: p.cols(),
        });
    }
    let asym = p.asymmetry();
    if asym > INVOLUTION_TOL {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let sq = p * p;
    let deviation = (&sq - &DenseMatrix::identity(p.rows())).max_abs();
    if deviation > INVOLUTION_TOL {
        return Err(Error::NotInvolutory { deviation });
    }
    let eig = sym_eigen(p, DEFAULT_EIGEN_TOL)?;
    let (plus, minus): (Vec<usize>, Vec<usize>) =
        (0..eig.values.len()).partition(|&k| eig.values[k] >= 0.0);
    let cols = |idx: &[usize]| {
        let v: Vec<Vec<f64>> = idx.iter().map(|&k| eig.vector(k)).collect();
        DenseMatrix::from_columns(p.rows(), &v)
    };
    Ok(InvolutionBasis {
        p: p.clone(),
        theta: cols(&plus),
        theta_tilde: cols(&minus),
        s: plus.len(),
        t: minus.len(),
    })
}

/// Smallest `n >= min_n` with `dim(n) == len`.
fn side_from_len(len: usize, dim: fn(usize) -> usize, min_n: usize, what: &'static str) -> Result<usize> {
    let mut n = min_n;
    while dim(n) < len {
        n += 1;
    }
    if dim(n) == len {
        Ok(n)
    } else {
        Err(Error::BadLength { len, what })
    }
}

/// `Qᵀ vec(X)`: diagonal entries as-is, off-diagonal entries scaled by `√2`,
/// so `||svec(X)||_2 = ||X||_F`.
pub fn svec(x: &DenseMatrix) -> Result<Vec<f64>> {
    if !x.is_symmetric(1e-12) {
        return Err(Error::NotSymmetric {
            asymmetry: if x.is_square() { x.asymmetry() } else { f64::INFINITY },
        });
    }
    Ok(sym_pairs(x.rows())
        .into_iter()
        .map(|(i, j)| if i == j { x.get(i, i) } else { SQRT_2 * x.get(i, j) })
        .collect())
}

pub fn smat(v: &[f64]) -> Result<DenseMatrix> {
    let n = side_from_len(v.len(), sym_dim, 0, "smat")?;
    let mut x = DenseMatrix::zeros(n, n);
    for (k, (i, j)) in sym_pairs(n).into_iter().enumerate() {
        if i == j {
            x.set(i, i, v[k]);
        } else {
            x.set(i, j, v[k] * FRAC_1_SQRT_2);
            x.set(j, i, v[k] * FRAC_1_SQRT_2);
        }
    }
    Ok(x)
}

/// `Q̃ᵀ vec(W)`; the entry for pair `(i, j)` is `(W[j,i] - W[i,j]) / √2`.
pub fn skvec(w: &DenseMatrix) -> Result<Vec<f64>> {
    if !w.is_skew(1e-12) {
        return Err(Error::NotSkew {
            deviation: if w.is_square() { w.skewness_defect() } else { f64::INFINITY },
        });
    }
    Ok(skew_pairs(w.rows())
        .into_iter()
        .map(|(i, j)| (w.get(j, i) - w.get(i, j)) * FRAC_1_SQRT_2)
        .collect())
}

pub fn skmat(v: &[f64]) -> Result<DenseMatrix> {
    let n = side_from_len(v.len(), skew_dim, 1, "skmat")?;
    let mut w = DenseMatrix::zeros(n, n);
    for (k, (i, j)) in skew_pairs(n).into_iter().enumerate() {
        w.set(i, j, -v[k] * FRAC_1_SQRT_2);
        w.set(j, i, v[k] * FRAC_1_SQRT_2);
    }
    Ok(w)
}

/// Orthogonal projection of `vec(X)` on the symmetric subspace, `QQᵀ vec(X)`,
/// evaluated as `vec((X + Xᵀ)/2)`.
pub fn project_symmetric(v: &[f64], n: usize) -> Vec<f64> {
    let t = crate::dense::transpose_vec(v, n);
    v.iter().zip(&t).map(|(a, b)| 0.5 * (a + b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::{commutation_matrix, vec};

    fn close(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn n2_columns() {
        let b = parity_basis(2);
        let h = FRAC_1_SQRT_2;
        let q = DenseMatrix::from_rows(&[
            [1.0, 0.0, 0.0],
            [0.0, h, 0.0],
            [0.0, h, 0.0],
            [0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(b.sym_basis, q);
        let qt = DenseMatrix::from_rows(&[[0.0], [h], [-h], [0.0]]).unwrap();
        assert_eq!(b.skew_basis, qt);
    }

    #[test]
    fn n3_orthonormal_and_complementary() {
        let b = parity_basis(3);
        let q = &b.sym_basis;
        let qt = &b.skew_basis;
        assert!(close(&(&q.transpose() * q), &DenseMatrix::identity(6), 1e-12));
        assert!(close(&(&qt.transpose() * qt), &DenseMatrix::identity(3), 1e-12));
        let sum = &(q * &q.transpose()) + &(qt * &qt.transpose());
        assert!(close(&sum, &DenseMatrix::identity(9), 1e-12));
    }

    #[test]
    fn n4_parity_under_commutation() {
        let b = parity_basis(4);
        let t = commutation_matrix(4);
        assert!(close(&(&t * &b.skew_basis), &-&b.skew_basis, 1e-12));
        assert!(close(&(&t * &b.sym_basis), &b.sym_basis, 1e-12));
    }

    #[test]
    fn n1_has_empty_skew_part() {
        let b = parity_basis(1);
        assert_eq!(b.sym_basis, DenseMatrix::identity(1));
        assert_eq!(b.skew_basis.cols(), 0);
    }

    #[test]
    fn involution_recovers_commutation_split() {
        let ib = involution_basis(&commutation_matrix(2)).unwrap();
        assert_eq!((ib.s, ib.t), (3, 1));
        // span(Θ) = span(Q): projectors agree
        let q = parity_basis(2).sym_basis;
        let p1 = &ib.theta * &ib.theta.transpose();
        let p2 = &q * &q.transpose();
        assert!(close(&p1, &p2, 1e-10));

        let ib = involution_basis(&DenseMatrix::identity(4)).unwrap();
        assert_eq!((ib.s, ib.t), (4, 0));
        assert_eq!(ib.theta_tilde.cols(), 0);
    }

    #[test]
    fn involution_rejects_bad_input() {
        let p = DenseMatrix::diag(&[1.0, 2.0]);
        assert!(matches!(involution_basis(&p), Err(Error::NotInvolutory { .. })));
        let p = DenseMatrix::from_rows(&[[0.0, 1.0], [0.5, 0.0]]).unwrap();
        assert!(matches!(involution_basis(&p), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn exchange_tensor_exchange() {
        // J ⊗ J with J the 2x2 exchange: eigenvalues of J are ±1, so J ⊗ J has
        // +1 with multiplicity 2 and -1 with multiplicity 2.
        let j = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let p = crate::dense::kron(&j, &j);
        let oracle = sym_eigen(&p, DEFAULT_EIGEN_TOL).unwrap();
        let plus = oracle.values.iter().filter(|&&x| x > 0.0).count();
        let ib = involution_basis(&p).unwrap();
        assert_eq!((ib.s, ib.t), (plus, 4 - plus));
        assert_eq!(plus, 2);
        assert!(close(&(&p * &ib.theta), &ib.theta, 1e-10));
        assert!(close(&(&p * &ib.theta_tilde), &-&ib.theta_tilde, 1e-10));
    }

    #[test]
    fn svec_examples() {
        assert_eq!(svec(&DenseMatrix::identity(2)).unwrap(), vec![1.0, 0.0, 1.0]);
        let x = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(svec(&x).unwrap(), vec![0.0, SQRT_2, 0.0]);
        let bad = DenseMatrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(matches!(svec(&bad), Err(Error::NotSymmetric { .. })));
        assert!(matches!(smat(&[1.0, 2.0]), Err(Error::BadLength { .. })));
    }

    #[test]
    fn skvec_examples() {
        let w = DenseMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let v = skvec(&w).unwrap();
        assert_eq!(v.len(), 1);
        assert!((v[0] + SQRT_2).abs() < 1e-15);
        assert_eq!(skvec(&DenseMatrix::zeros(3, 3)).unwrap(), vec![0.0; 3]);
        assert!(matches!(skvec(&DenseMatrix::identity(2)), Err(Error::NotSkew { .. })));
        assert!(matches!(skmat(&[1.0, 2.0]), Err(Error::BadLength { .. })));
    }

    #[test]
    fn half_vectorizations_match_basis_compression() {
        let x = DenseMatrix::from_rows(&[[1.0, 2.0, -3.0], [2.0, 5.0, 0.5], [-3.0, 0.5, 4.0]]).unwrap();
        let w = DenseMatrix::from_rows(&[[0.0, 2.0, -3.0], [-2.0, 0.0, 0.5], [3.0, -0.5, 0.0]]).unwrap();
        let b = parity_basis(3);
        let via_q = b.sym_basis.transpose().mul_vec(&vec(&x));
        let via_qt = b.skew_basis.transpose().mul_vec(&vec(&w));
        for (a, c) in svec(&x).unwrap().iter().zip(&via_q) {
            assert!((a - c).abs() < 1e-14);
        }
        for (a, c) in skvec(&w).unwrap().iter().zip(&via_qt) {
            assert!((a - c).abs() < 1e-14);
        }
    }
}
