//! Jordan-Kronecker products `A⊗B + B⊗A` and their even/odd spectra.
//!
//! The even (odd) spectrum is the set of eigenvalues carried by symmetric
//! (skew-symmetric) eigenvectors. Both are computed in the compressed spaces
//! `Qᵀ(A⊗B)Q` and `Q̃ᵀ(A⊗B)Q̃`, so the parity of every reported eigenvector is
//! structural even when an eigenvalue occurs in both spectra.

use serde::{Deserialize, Serialize};

use crate::bases::{parity_basis, project_symmetric, InvolutionBasis};
use crate::dense::{kron, norm2, transpose_vec, DenseMatrix};
use crate::eigen::{sym_eigen, DEFAULT_EIGEN_TOL};
use crate::error::{Error, Result};

/// Default tolerance for [`classify_parity`].
pub const DEFAULT_PARITY_TOL: f64 = 1e-8;
/// Relative tolerance for deciding whether an input is symmetric or skew.
pub const CLASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryClass {
    Symmetric,
    Skew,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// Common symmetry class of a pair. A zero matrix belongs to both classes.
pub fn pair_class(a: &DenseMatrix, b: &DenseMatrix) -> Result<SymmetryClass> {
    for m in [a, b] {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
    }
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let classes = |m: &DenseMatrix| (m.is_symmetric(CLASS_TOL), m.is_skew(CLASS_TOL));
    let (a_sym, a_skew) = classes(a);
    let (b_sym, b_skew) = classes(b);
    if !(a_sym || a_skew) || !(b_sym || b_skew) {
        return Err(Error::NoSymmetryClass);
    }
    if a_sym && b_sym {
        Ok(SymmetryClass::Symmetric)
    } else if a_skew && b_skew {
        Ok(SymmetryClass::Skew)
    } else {
        Err(Error::MixedSymmetryClass)
    }
}

/// `A⊗B + B⊗A`.
pub fn jordan_kron(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    pair_class(a, b)?;
    Ok(&kron(a, b) + &kron(b, a))
}

/// `A⊗B - B⊗A`.
pub fn lie_kron(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    pair_class(a, b)?;
    Ok(&kron(a, b) - &kron(b, a))
}

/// Symmetric Kronecker product `Qᵀ(A⊗B)Q`.
pub fn sym_kron(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    pair_class(a, b)?;
    let q = parity_basis(a.rows()).sym_basis;
    Ok(symmetrize(&kron(a, b).congruence(&q)))
}

/// Skew-symmetric Kronecker product `Q̃ᵀ(A⊗B)Q̃`.
pub fn skew_kron(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    pair_class(a, b)?;
    let qt = parity_basis(a.rows()).skew_basis;
    Ok(symmetrize(&kron(a, b).congruence(&qt)))
}

// Congruences of a symmetric matrix are symmetric up to rounding in the
// product order; averaging removes that last-bit drift before eigensolving.
fn symmetrize(m: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(m.rows(), m.cols(), |i, j| 0.5 * (m.get(i, j) + m.get(j, i)))
}

#[derive(Debug, Clone)]
pub struct SpectrumSplit {
    /// Descending.
    pub even_values: Vec<f64>,
    /// Descending.
    pub odd_values: Vec<f64>,
    /// Column `k` is the symmetric `n²`-vector for `even_values[k]`.
    pub even_vectors: DenseMatrix,
    /// Column `k` is the skew `n²`-vector for `odd_values[k]`.
    pub odd_vectors: DenseMatrix,
    pub source_dims: usize,
    pub classification_tol: f64,
    /// Largest eigenpair residual of the two compressed eigensolves.
    pub solver_residual: f64,
}

impl SpectrumSplit {
    pub fn min_even(&self) -> Option<f64> {
        self.even_values.last().copied()
    }

    pub fn max_even(&self) -> Option<f64> {
        self.even_values.first().copied()
    }

    pub fn min_odd(&self) -> Option<f64> {
        self.odd_values.last().copied()
    }

    pub fn max_odd(&self) -> Option<f64> {
        self.odd_values.first().copied()
    }

    /// `||C||_F`, recovered from the full spectrum.
    pub fn c_norm(&self) -> f64 {
        self.even_values
            .iter()
            .chain(&self.odd_values)
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }

    /// Every eigenvalue of `C`, descending.
    pub fn all_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.even_values.iter().chain(&self.odd_values).copied().collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// Parity of the eigenvector carrying the smallest eigenvalue. Even wins ties
    /// within `tol`.
    pub fn min_parity(&self, tol: f64) -> Parity {
        match (self.min_even(), self.min_odd()) {
            (Some(e), Some(o)) if o < e - tol => Parity::Odd,
            (None, Some(_)) => Parity::Odd,
            _ => Parity::Even,
        }
    }

    /// Parity of the eigenvector carrying the largest eigenvalue. Even wins ties
    /// within `tol`.
    pub fn max_parity(&self, tol: f64) -> Parity {
        match (self.max_even(), self.max_odd()) {
            (Some(e), Some(o)) if o > e + tol => Parity::Odd,
            (None, Some(_)) => Parity::Odd,
            _ => Parity::Even,
        }
    }

    pub fn min_even_vector(&self) -> Option<Vec<f64>> {
        (!self.even_values.is_empty()).then(|| self.even_vectors.column(self.even_values.len() - 1))
    }

    pub fn min_odd_vector(&self) -> Option<Vec<f64>> {
        (!self.odd_values.is_empty()).then(|| self.odd_vectors.column(self.odd_values.len() - 1))
    }
}

fn split_from_compressions(
    kab: &DenseMatrix,
    plus: &DenseMatrix,
    minus: &DenseMatrix,
    n: usize,
    eigen_tol: f64,
    classification_tol: f64,
) -> Result<SpectrumSplit> {
    let even = sym_eigen(&symmetrize(&kab.congruence(plus)), eigen_tol)?;
    let odd = sym_eigen(&symmetrize(&kab.congruence(minus)), eigen_tol)?;
    Ok(SpectrumSplit {
        even_values: even.values.iter().map(|x| 2.0 * x).collect(),
        odd_values: odd.values.iter().map(|x| 2.0 * x).collect(),
        even_vectors: plus * &even.vectors,
        odd_vectors: minus * &odd.vectors,
        source_dims: n,
        classification_tol,
        solver_residual: 2.0 * even.residual.max(odd.residual),
    })
}

/// Even/odd split of `A⊗B + B⊗A` (eigenvalues of `2 A⊗ˢB` and `2 A⊗ŝB`).
pub fn spectrum_split(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> Result<SpectrumSplit> {
    spectrum_split_with(a, b, DEFAULT_EIGEN_TOL, tol)
}

pub fn spectrum_split_with(
    a: &DenseMatrix,
    b: &DenseMatrix,
    eigen_tol: f64,
    classification_tol: f64,
) -> Result<SpectrumSplit> {
    pair_class(a, b)?;
    let n = a.rows();
    let basis = parity_basis(n);
    split_from_compressions(
        &kron(a, b),
        &basis.sym_basis,
        &basis.skew_basis,
        n,
        eigen_tol,
        classification_tol,
    )
}

#[derive(Debug, Clone)]
pub struct GeneralizedSplit {
    /// `A⊗B + P(A⊗B)P`.
    pub matrix: DenseMatrix,
    pub split: SpectrumSplit,
    /// `||Θᵀ C Θ̃||_F`.
    pub block_residual: f64,
}

/// Split of `A⊗B + P(A⊗B)P` along the `±1` eigenspaces of a symmetric involution.
pub fn generalized_jordan(
    a: &DenseMatrix,
    b: &DenseMatrix,
    basis: &InvolutionBasis,
) -> Result<GeneralizedSplit> {
    pair_class(a, b)?;
    let n = a.rows();
    if basis.p.rows() != n * n {
        return Err(Error::DimensionMismatch(format!(
            "involution of size {} for n = {n}",
            basis.p.rows()
        )));
    }
    let kab = kron(a, b);
    let matrix = &kab + &(&(&basis.p * &kab) * &basis.p);
    let cross = &(&basis.theta.transpose() * &matrix) * &basis.theta_tilde;
    let split = split_from_compressions(
        &kab,
        &basis.theta,
        &basis.theta_tilde,
        n,
        DEFAULT_EIGEN_TOL,
        DEFAULT_PARITY_TOL,
    )?;
    Ok(GeneralizedSplit {
        matrix,
        split,
        block_residual: cross.frobenius_norm(),
    })
}

pub fn classify_parity(v: &[f64], tol: f64) -> Result<Parity> {
    let n = (v.len() as f64).sqrt().round() as usize;
    if n * n != v.len() {
        return Err(Error::BadLength {
            len: v.len(),
            what: "an n²-vector",
        });
    }
    let norm = norm2(v);
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let tv = transpose_vec(v, n);
    let plus: Vec<f64> = tv.iter().zip(v).map(|(a, b)| a - b).collect();
    let minus: Vec<f64> = tv.iter().zip(v).map(|(a, b)| a + b).collect();
    Ok(if norm2(&plus) <= tol * norm {
        Parity::Even
    } else if norm2(&minus) <= tol * norm {
        Parity::Odd
    } else {
        Parity::Mixed
    })
}

#[derive(Debug, Clone)]
pub struct LiePair {
    /// Positive eigenvalue `λ`.
    pub value: f64,
    /// Eigenvector for `λ`.
    pub vector: Vec<f64>,
    /// `T v`, an eigenvector for `-λ`.
    pub partner: Vec<f64>,
    /// `max(||Lv - λv||, ||L(Tv) + λTv||) / ||L||_F`.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct LieSpectrum {
    pub pairs: Vec<LiePair>,
    /// Orthonormal symmetric vectors spanning the symmetric part of `ker L`.
    pub null_sym: Vec<Vec<f64>>,
    /// Dimension of `ker L` as counted by the zero cutoff.
    pub kernel_dim: usize,
    /// Positive eigenvalues with no negative partner within the pairing tolerance.
    pub unpaired: usize,
}

impl LieSpectrum {
    pub fn max_residual(&self) -> f64 {
        self.pairs.iter().fold(0.0, |m, p| m.max(p.residual))
    }
}

/// Spectrum of `A⊗B - B⊗A`: `±λ` pairs linked by `T`, and a symmetric kernel basis.
///
/// Eigenvalues with `|λ| <= tol * ||L||_F` count as zero; the same scaled value
/// is the pairing tolerance.
pub fn lie_spectrum(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> Result<LieSpectrum> {
    let l = lie_kron(a, b)?;
    let n = a.rows();
    let scale = l.frobenius_norm();
    let zero = tol * scale;
    let eig = sym_eigen(&l, DEFAULT_EIGEN_TOL)?;

    let residual = |lambda: f64, v: &[f64]| -> f64 {
        let lv = l.mul_vec(v);
        norm2(&lv.iter().zip(v).map(|(y, x)| y - lambda * x).collect::<Vec<_>>())
    };

    let negatives: Vec<f64> = eig.values.iter().copied().filter(|&x| x < -zero).collect();
    let mut used = vec![false; negatives.len()];
    let mut pairs = Vec::new();
    let mut unpaired = 0;
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda <= zero {
            continue;
        }
        let best = negatives
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, &mu)| (i, (mu + lambda).abs()))
            .filter(|&(_, gap)| gap <= zero.max(f64::MIN_POSITIVE))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((i, _)) => used[i] = true,
            None => {
                unpaired += 1;
                continue;
            }
        }
        let v = eig.vector(k);
        let tv = transpose_vec(&v, n);
        let r = residual(lambda, &v).max(residual(-lambda, &tv)) / scale;
        pairs.push(LiePair {
            value: lambda,
            vector: v,
            partner: tv,
            residual: r,
        });
    }

    let kernel: Vec<usize> = (0..eig.values.len())
        .filter(|&k| eig.values[k].abs() <= zero)
        .collect();
    let mut null_sym: Vec<Vec<f64>> = Vec::new();
    for &k in &kernel {
        let mut u = project_symmetric(&eig.vector(k), n);
        for q in &null_sym {
            let c = crate::dense::dot(q, &u);
            for (ui, qi) in u.iter_mut().zip(q) {
                *ui -= c * qi;
            }
        }
        let norm = norm2(&u);
        if norm > 1e-6 {
            null_sym.push(u.into_iter().map(|x| x / norm).collect());
        }
    }

    Ok(LieSpectrum {
        pairs,
        null_sym,
        kernel_dim: kernel.len(),
        unpaired,
    })
}

/// Serializable summary of a split, with the block-diagonalization residual
/// `||Qᵀ C Q̃||_F`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub class: SymmetryClass,
    pub even_values: Vec<f64>,
    pub odd_values: Vec<f64>,
    pub min_parity: Parity,
    pub max_parity: Parity,
    pub c_norm: f64,
    pub block_residual: f64,
    pub solver_residual: f64,
}

/// `tol` is the tie tolerance for the extreme parities, relative to `||C||_F`.
pub fn spectrum_report(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> Result<SpectrumReport> {
    let class = pair_class(a, b)?;
    let split = spectrum_split(a, b, DEFAULT_PARITY_TOL)?;
    let c = jordan_kron(a, b)?;
    let basis = parity_basis(a.rows());
    let cross = &(&basis.sym_basis.transpose() * &c) * &basis.skew_basis;
    let abs_tol = tol * split.c_norm();
    Ok(SpectrumReport {
        n: a.rows(),
        class,
        min_parity: split.min_parity(abs_tol),
        max_parity: split.max_parity(abs_tol),
        c_norm: split.c_norm(),
        block_residual: cross.frobenius_norm(),
        solver_residual: split.solver_residual,
        even_values: split.even_values,
        odd_values: split.odd_values,
    })
}

#[cfg(test)]
mod tests {

    #[test]
    fn report_for_diagonal_pair() {
        let r = spectrum_report(&d(&[1.0, 2.0]), &d(&[3.0, 4.0]), 1e-8).unwrap();
        assert_eq!(r.class, SymmetryClass::Symmetric);
        assert!(r.block_residual < 1e-12);
        let close = |x: &[f64], y: &[f64]| x.len() == y.len() && x.iter().zip(y).all(|(a, b)| (a - b).abs() < 1e-12);
        assert!(close(&r.even_values, &[16.0, 10.0, 6.0]));
        assert!(close(&r.odd_values, &[10.0]));
        assert_eq!(r.max_parity, Parity::Even);
    }

    use super::*;
    use crate::dense::commutation_matrix;
    use crate::eigen::sym_eigenvalues;

    fn d(v: &[f64]) -> DenseMatrix {
        DenseMatrix::diag(v)
    }

    #[test]
    fn jordan_kron_examples() {
        let i2 = DenseMatrix::identity(2);
        assert_eq!(jordan_kron(&i2, &i2).unwrap(), DenseMatrix::identity(4).scale(2.0));
        assert_eq!(
            jordan_kron(&d(&[1.0, 2.0]), &d(&[3.0, 4.0])).unwrap(),
            d(&[6.0, 10.0, 10.0, 16.0])
        );
    }

    #[test]
    fn class_errors() {
        let s = d(&[1.0, 2.0]);
        let w = DenseMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let neither = DenseMatrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert_eq!(jordan_kron(&s, &w), Err(Error::MixedSymmetryClass));
        assert_eq!(jordan_kron(&s, &neither), Err(Error::NoSymmetryClass));
        assert!(matches!(jordan_kron(&s, &d(&[1.0, 2.0, 3.0])), Err(Error::DimensionMismatch(_))));
        // zero pairs with either class
        assert_eq!(pair_class(&DenseMatrix::zeros(2, 2), &w), Ok(SymmetryClass::Skew));
        assert_eq!(pair_class(&DenseMatrix::zeros(2, 2), &s), Ok(SymmetryClass::Symmetric));
    }

    #[test]
    fn compressions_of_diagonal_pair() {
        // diag(1,2) ⊗ diag(3,4) = diag(3,4,6,8); the symmetric columns pick
        // 3, (4+6)/2, 8 and the skew column picks (4+6)/2.
        let sk = sym_kron(&d(&[1.0, 2.0]), &d(&[3.0, 4.0])).unwrap();
        assert!((&sk - &d(&[3.0, 5.0, 8.0])).max_abs() < 1e-15);
        let kk = skew_kron(&d(&[1.0, 2.0]), &d(&[3.0, 4.0])).unwrap();
        assert!((&kk - &d(&[5.0])).max_abs() < 1e-15);
        let i3 = DenseMatrix::identity(3);
        assert!((&sym_kron(&i3, &i3).unwrap() - &DenseMatrix::identity(6)).max_abs() < 1e-15);
        assert!((&skew_kron(&i3, &i3).unwrap() - &DenseMatrix::identity(3)).max_abs() < 1e-15);
    }

    #[test]
    fn split_of_diagonal_pair_with_shared_value() {
        let s = spectrum_split(&d(&[1.0, 2.0]), &d(&[3.0, 4.0]), DEFAULT_PARITY_TOL).unwrap();
        let close = |a: &[f64], b: &[f64]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
        assert!(close(&s.even_values, &[16.0, 10.0, 6.0]));
        assert!(close(&s.odd_values, &[10.0]));
        for k in 0..3 {
            assert_eq!(classify_parity(&s.even_vectors.column(k), 1e-8).unwrap(), Parity::Even);
        }
        assert_eq!(classify_parity(&s.odd_vectors.column(0), 1e-8).unwrap(), Parity::Odd);
        let direct = sym_eigenvalues(&jordan_kron(&d(&[1.0, 2.0]), &d(&[3.0, 4.0])).unwrap()).unwrap();
        assert!(close(&s.all_values(), &direct));
    }

    #[test]
    fn split_of_identity_pair() {
        let i3 = DenseMatrix::identity(3);
        let s = spectrum_split(&i3, &i3, DEFAULT_PARITY_TOL).unwrap();
        assert_eq!(s.even_values.len(), 6);
        assert_eq!(s.odd_values.len(), 3);
        assert!(s.even_values.iter().chain(&s.odd_values).all(|x| (x - 2.0).abs() < 1e-14));
    }

    #[test]
    fn perfect_shuffle_exact_for_integers() {
        let a = DenseMatrix::from_rows(&[[1.0, -2.0, 3.0], [-2.0, 0.0, 5.0], [3.0, 5.0, -4.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[[2.0, 1.0, 0.0], [1.0, -3.0, 7.0], [0.0, 7.0, 1.0]]).unwrap();
        let c = jordan_kron(&a, &b).unwrap();
        let t = commutation_matrix(3);
        assert_eq!(&(&t * &c) * &t, c);
    }

    #[test]
    fn generalized_specializations() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, -1.0]]).unwrap();
        let b = DenseMatrix::from_rows(&[[3.0, 0.5], [0.5, 2.0]]).unwrap();
        let g = generalized_jordan(&a, &b, &crate::bases::involution_basis(&commutation_matrix(2)).unwrap()).unwrap();
        let s = spectrum_split(&a, &b, DEFAULT_PARITY_TOL).unwrap();
        for (x, y) in g.split.even_values.iter().zip(&s.even_values) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in g.split.odd_values.iter().zip(&s.odd_values) {
            assert!((x - y).abs() < 1e-12);
        }
        assert_eq!(g.matrix, jordan_kron(&a, &b).unwrap());

        let g = generalized_jordan(&a, &b, &crate::bases::involution_basis(&DenseMatrix::identity(4)).unwrap()).unwrap();
        assert!(g.split.odd_values.is_empty());
        let full = sym_eigenvalues(&kron(&a, &b).scale(2.0)).unwrap();
        for (x, y) in g.split.even_values.iter().zip(&full) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn parity_examples() {
        assert_eq!(classify_parity(&[1.0, 0.0, 0.0, 1.0], 1e-8).unwrap(), Parity::Even);
        assert_eq!(classify_parity(&[0.0, -1.0, 1.0, 0.0], 1e-8).unwrap(), Parity::Odd);
        assert_eq!(classify_parity(&[0.0, 0.0, 1.0, 0.0], 1e-8).unwrap(), Parity::Mixed);
        assert_eq!(classify_parity(&[0.0; 4], 1e-8), Err(Error::ZeroVector));
        assert!(matches!(classify_parity(&[1.0; 3], 1e-8), Err(Error::BadLength { .. })));
    }

    #[test]
    fn lie_of_diagonal_pair() {
        let l = lie_kron(&d(&[1.0, 2.0]), &d(&[3.0, 4.0])).unwrap();
        assert_eq!(l, d(&[0.0, -2.0, 2.0, 0.0]));
        let spec = lie_spectrum(&d(&[1.0, 2.0]), &d(&[3.0, 4.0]), 1e-8).unwrap();
        assert_eq!(spec.pairs.len(), 1);
        let p = &spec.pairs[0];
        assert!((p.value - 2.0).abs() < 1e-14);
        assert!((p.vector[2].abs() - 1.0).abs() < 1e-14);
        assert!((p.partner[1].abs() - 1.0).abs() < 1e-14);
        assert_eq!(spec.null_sym.len(), 2);
        assert_eq!(spec.unpaired, 0);
    }

    #[test]
    fn lie_of_equal_arguments_vanishes() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 5.0]]).unwrap();
        assert_eq!(lie_kron(&a, &a).unwrap(), DenseMatrix::zeros(4, 4));
        let spec = lie_spectrum(&a, &a, 1e-8).unwrap();
        assert!(spec.pairs.is_empty());
        assert_eq!(spec.kernel_dim, 4);
        assert_eq!(spec.null_sym.len(), 3);
    }
}
