//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use crate::dense::{norm2, DenseMatrix};
use crate::error::{Error, Result};

/// Sweep limit for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;
/// Default stopping threshold: off-diagonal Frobenius norm relative to `||M||_F`.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-13;
/// Entry check: `max |M - Mᵀ| <= SYMMETRY_TOL * (1 + ||M||_F)`.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues, descending.
    pub values: Vec<f64>,
    /// Column `i` pairs with `values[i]`.
    pub vectors: DenseMatrix,
    /// `max_i ||M v_i - λ_i v_i||_2`.
    pub residual: f64,
    pub sweeps: usize,
}

impl EigenDecomposition {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i)
    }

    /// `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        DenseMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v.get(i, k) * self.values[k] * v.get(j, k)).sum()
        })
    }
}

/// Eigendecomposition of a symmetric matrix. `tol` is the off-diagonal stopping
/// threshold relative to `||M||_F` (see [`DEFAULT_EIGEN_TOL`]).
///
/// Asymmetric input is rejected rather than symmetrized.
pub fn sym_eigen(m: &DenseMatrix, tol: f64) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let asym = m.asymmetry();
    if asym > SYMMETRY_TOL * (1.0 + m.frobenius_norm()) {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }

    let n = m.rows();
    let mut a: Vec<f64> = m.as_slice().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = tol * m.frobenius_norm();

    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep Jacobi output order
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |r, c| v[r * n + order[c]]);

    let mut residual = 0.0f64;
    for (k, &lambda) in values.iter().enumerate() {
        let x = vectors.column(k);
        let mx = m.mul_vec(&x);
        let r: Vec<f64> = mx.iter().zip(&x).map(|(y, xi)| y - lambda * xi).collect();
        residual = residual.max(norm2(&r));
    }

    Ok(EigenDecomposition {
        values,
        vectors,
        residual,
        sweeps,
    })
}

/// Eigenvalues only, descending, at the default tolerance.
pub fn sym_eigenvalues(m: &DenseMatrix) -> Result<Vec<f64>> {
    Ok(sym_eigen(m, DEFAULT_EIGEN_TOL)?.values)
}

/// Numerical rank of a symmetric matrix: eigenvalues with
/// `|λ| > cutoff * max |λ|`.
pub fn symmetric_rank(m: &DenseMatrix, cutoff: f64) -> Result<usize> {
    let values = sym_eigenvalues(m)?;
    let top = values.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if top == 0.0 {
        return Ok(0);
    }
    Ok(values.iter().filter(|x| x.abs() > cutoff * top).count())
}

/// Numerical rank of any square matrix, via the symmetric dilation
/// `[[0, M], [Mᵀ, 0]]` whose eigenvalues are `±σ_i(M)`.
pub fn rank(m: &DenseMatrix, cutoff: f64) -> Result<usize> {
    let n = m.rows();
    let mt = m.transpose();
    let dilation = DenseMatrix::from_fn(n + m.cols(), n + m.cols(), |i, j| {
        match (i < n, j < n) {
            (true, false) => m.get(i, j - n),
            (false, true) => mt.get(i - n, j),
            _ => 0.0,
        }
    });
    Ok(symmetric_rank(&dilation, cutoff)? / 2)
}
