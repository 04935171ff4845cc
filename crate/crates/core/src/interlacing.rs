//! Weak, full and strong interlacing checks on an even/odd split, plus the
//! structural tools used to reason about them.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::bases::sym_pairs;
use crate::dense::DenseMatrix;
use crate::eigen::{sym_eigen, DEFAULT_EIGEN_TOL};
use crate::error::{Error, Result};
use crate::spectra::{pair_class, skew_kron, sym_kron, Parity, SpectrumSplit};

/// Default interlacing tolerance factor, applied to `||C||_F`.
pub const DEFAULT_INTERLACE_FACTOR: f64 = 1e-8;
/// Entrywise tolerance for [`embed_skew_in_sym`], relative to `1 + max|entry|`.
pub const EMBED_TOL: f64 = 1e-10;

/// `1e-8 * ||C||_F` for the split's Jordan-Kronecker product.
pub fn default_tol(split: &SpectrumSplit) -> f64 {
    DEFAULT_INTERLACE_FACTOR * split.c_norm()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakVerdict {
    pub holds: bool,
    pub min_side_holds: bool,
    pub max_side_holds: bool,
    pub lhs_min_even: Option<f64>,
    pub rhs_min_odd: Option<f64>,
    pub lhs_max_odd: Option<f64>,
    pub rhs_max_even: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullViolation {
    /// 1-based index into the descending odd values.
    pub i: usize,
    /// `λ_{s-t+i}`
    pub lower: f64,
    /// `β_i`
    pub beta: f64,
    /// `λ_i`
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullVerdict {
    pub holds: bool,
    pub first_violation: Option<FullViolation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongVerdict {
    pub holds: bool,
    /// 1-based position in the merged descending spectrum (ties even first).
    pub first_violation: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterlaceReport {
    pub weak: WeakVerdict,
    pub full: FullVerdict,
    pub strong: StrongVerdict,
    pub tol: f64,
}

impl InterlaceReport {
    pub fn all_hold(&self) -> bool {
        self.weak.holds && self.full.holds && self.strong.holds
    }
}

pub fn check_weak(split: &SpectrumSplit, tol: f64) -> WeakVerdict {
    let (min_e, min_o) = (split.min_even(), split.min_odd());
    let (max_e, max_o) = (split.max_even(), split.max_odd());
    let min_side_holds = match (min_e, min_o) {
        (Some(e), Some(o)) => e <= o + tol,
        _ => true,
    };
    let max_side_holds = match (max_e, max_o) {
        (Some(e), Some(o)) => o <= e + tol,
        _ => true,
    };
    WeakVerdict {
        holds: min_side_holds && max_side_holds,
        min_side_holds,
        max_side_holds,
        lhs_min_even: min_e,
        rhs_min_odd: min_o,
        lhs_max_odd: max_o,
        rhs_max_even: max_e,
    }
}

pub fn check_interlacing(split: &SpectrumSplit, tol: f64) -> FullVerdict {
    let lam = &split.even_values;
    let beta = &split.odd_values;
    let (s, t) = (lam.len(), beta.len());
    let first_violation = (0..t.min(s)).find_map(|i| {
        let lower = lam[s - t + i];
        let upper = lam[i];
        let b = beta[i];
        (b < lower - tol || b > upper + tol).then_some(FullViolation {
            i: i + 1,
            lower,
            beta: b,
            upper,
        })
    });
    FullVerdict {
        holds: first_violation.is_none(),
        first_violation,
    }
}

/// Merged spectrum, descending, ties ordered even before odd.
pub fn merged_spectrum(split: &SpectrumSplit) -> Vec<(f64, Parity)> {
    let mut merged: Vec<(f64, Parity)> = split
        .even_values
        .iter()
        .map(|&x| (x, Parity::Even))
        .chain(split.odd_values.iter().map(|&x| (x, Parity::Odd)))
        .collect();
    merged.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then_with(|| (a.1 == Parity::Odd).cmp(&(b.1 == Parity::Odd)))
    });
    merged
}

/// Strong interlacing: every odd eigenvalue of the merged spectrum has even
/// neighbours on both sides. An odd value at either end has a missing
/// neighbour and so violates the property.
///
/// Values within `tol` of each other may be reordered; the property holds if
/// any such ordering satisfies the adjacency condition.
pub fn check_strong(split: &SpectrumSplit, tol: f64) -> StrongVerdict {
    let merged = merged_spectrum(split);
    if merged.is_empty() {
        return StrongVerdict {
            holds: true,
            first_violation: None,
        };
    }

    // clusters of chained near-ties: (evens, odds)
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut prev = f64::INFINITY;
    for &(x, p) in &merged {
        if clusters.is_empty() || prev - x > tol {
            clusters.push((0, 0));
        }
        let c = clusters.last_mut().unwrap();
        match p {
            Parity::Odd => c.1 += 1,
            _ => c.0 += 1,
        }
        prev = x;
    }

    // state: parity of the last placed entry (false = even, true = odd), or
    // None before anything is placed
    let shapes = |e: usize, o: usize| -> Vec<(bool, bool)> {
        let mut v = Vec::new();
        if (o == 1 && e == 0) || (o >= 2 && e + 1 >= o) {
            v.push((true, true));
        }
        if o >= 1 && e >= o {
            v.push((true, false));
            v.push((false, true));
        }
        if e > o {
            v.push((false, false));
        }
        v
    };
    let mut states: Vec<Option<bool>> = vec![None];
    for &(e, o) in &clusters {
        let mut next: Vec<Option<bool>> = Vec::new();
        for &st in &states {
            for (first, last) in shapes(e, o) {
                let ok = match st {
                    None => !first,
                    Some(prev_odd) => !(prev_odd && first),
                };
                if ok && !next.contains(&Some(last)) {
                    next.push(Some(last));
                }
            }
        }
        states = next;
        if states.is_empty() {
            break;
        }
    }
    let holds = states.contains(&Some(false));

    let first_violation = if holds {
        None
    } else {
        let len = merged.len();
        let odd = |k: usize| merged[k].1 == Parity::Odd;
        (0..len)
            .find(|&k| odd(k) && (k == 0 || k + 1 == len || odd(k - 1) || odd(k + 1)))
            .map(|k| k + 1)
    };
    StrongVerdict {
        holds,
        first_violation,
    }
}

pub fn interlace_report(split: &SpectrumSplit, tol: f64) -> InterlaceReport {
    InterlaceReport {
        weak: check_weak(split, tol),
        full: check_interlacing(split, tol),
        strong: check_strong(split, tol),
        tol,
    }
}

/// Sign vector `σ` with `D_σ (A⊗ŝB) D_σ` equal to the principal submatrix of
/// `A⊗ˢB` on the off-diagonal columns.
///
/// Tries `σ = -1` on the first `n-1` skew columns, then solves the sign
/// constraints exactly: every nonzero entry fixes `σ_k σ_l`, so a solution is
/// a two-colouring of the constraint graph.
pub fn embed_skew_in_sym(a: &DenseMatrix, b: &DenseMatrix) -> Result<Vec<i8>> {
    pair_class(a, b)?;
    let n = a.rows();
    let skew = skew_kron(a, b)?;
    let sym = sym_kron(a, b)?;
    let off: Vec<usize> = sym_pairs(n)
        .iter()
        .enumerate()
        .filter(|(_, (i, j))| i != j)
        .map(|(k, _)| k)
        .collect();
    let target = sym.select(&off, &off);
    let t = off.len();
    let tol = EMBED_TOL * (1.0 + skew.max_abs().max(target.max_abs()));

    let works = |sigma: &[i8]| {
        (0..t).all(|k| {
            (0..t).all(|l| {
                let s = f64::from(sigma[k] * sigma[l]);
                (s * skew.get(k, l) - target.get(k, l)).abs() <= tol
            })
        })
    };

    let phi: Vec<i8> = (0..t).map(|k| if k + 1 < n { -1 } else { 1 }).collect();
    if works(&phi) {
        return Ok(phi);
    }

    // relation[k][l]: Some(+1 / -1) when the entry fixes σ_k σ_l
    let mut relation = vec![vec![None; t]; t];
    for k in 0..t {
        for l in 0..t {
            let (x, y) = (skew.get(k, l), target.get(k, l));
            if x.abs() <= tol && y.abs() <= tol {
                continue;
            }
            if (x - y).abs() <= tol {
                relation[k][l] = Some(1i8);
            } else if (x + y).abs() <= tol {
                relation[k][l] = Some(-1i8);
            } else {
                return Err(Error::NoEmbedding);
            }
        }
    }
    let mut sigma = vec![0i8; t];
    for root in 0..t {
        if sigma[root] != 0 {
            continue;
        }
        sigma[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(k) = queue.pop_front() {
            for l in 0..t {
                let Some(r) = relation[k][l] else { continue };
                let want = sigma[k] * r;
                if sigma[l] == 0 {
                    sigma[l] = want;
                    queue.push_back(l);
                } else if sigma[l] != want {
                    return Err(Error::NoEmbedding);
                }
            }
        }
    }
    if works(&sigma) {
        Ok(sigma)
    } else {
        Err(Error::NoEmbedding)
    }
}

#[derive(Debug, Clone)]
pub struct ExtremeTrace {
    pub max: f64,
    pub argmax: DenseMatrix,
    pub min: f64,
    pub argmin: DenseMatrix,
}

/// Extremes of `trace(UAU)` over unit-Frobenius symmetric `U`, attained at
/// `v₁v₁ᵀ` and `v_nv_nᵀ`.
pub fn extreme_sym_trace(a: &DenseMatrix) -> Result<ExtremeTrace> {
    let e = sym_eigen(a, DEFAULT_EIGEN_TOL)?;
    let n = a.rows();
    if n == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    let outer = |v: Vec<f64>| DenseMatrix::from_fn(n, n, |i, j| v[i] * v[j]);
    Ok(ExtremeTrace {
        max: e.values[0],
        argmax: outer(e.vector(0)),
        min: e.values[n - 1],
        argmin: outer(e.vector(n - 1)),
    })
}

#[derive(Debug, Clone)]
pub struct CommutingPrediction {
    /// Descending.
    pub even: Vec<f64>,
    /// Descending.
    pub odd: Vec<f64>,
    /// Eigenvalues of `A` on the common eigenbasis.
    pub lambdas: Vec<f64>,
    /// Eigenvalues of `B` on the same basis.
    pub mus: Vec<f64>,
}

/// Common orthonormal eigenbasis of a commuting symmetric pair (columns).
pub fn common_eigenbasis(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.rows();
    let ea = sym_eigen(a, DEFAULT_EIGEN_TOL)?;
    let scale = ea.values.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let gap = 1e-8 * scale;
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && ea.values[end - 1] - ea.values[end] <= gap {
            end += 1;
        }
        let idx: Vec<usize> = (start..end).collect();
        let v = ea.vectors.select(&(0..n).collect::<Vec<_>>(), &idx);
        let inner = b.congruence(&v);
        let inner = DenseMatrix::from_fn(inner.rows(), inner.cols(), |i, j| {
            0.5 * (inner.get(i, j) + inner.get(j, i))
        });
        let eb = sym_eigen(&inner, DEFAULT_EIGEN_TOL)?;
        let rotated = &v * &eb.vectors;
        for c in 0..rotated.cols() {
            columns.push(rotated.column(c));
        }
        start = end;
    }
    Ok(DenseMatrix::from_columns(n, &columns))
}

/// Even/odd spectrum of `A⊗B + B⊗A` predicted from a common eigenbasis:
/// `λᵢμⱼ + λⱼμᵢ` over `i ≤ j` (even) and `i < j` (odd).
pub fn commuting_spectrum(
    a: &DenseMatrix,
    b: &DenseMatrix,
    tol: f64,
) -> Result<CommutingPrediction> {
    pair_class(a, b)?;
    let commutator = (&(a * b) - &(b * a)).frobenius_norm();
    if commutator > tol * a.frobenius_norm() * b.frobenius_norm() {
        return Err(Error::NotCommuting { commutator });
    }
    let v = common_eigenbasis(a, b)?;
    let n = a.rows();
    let quad = |m: &DenseMatrix, x: &[f64]| crate::dense::dot(x, &m.mul_vec(x));
    let lambdas: Vec<f64> = (0..n).map(|i| quad(a, &v.column(i))).collect();
    let mus: Vec<f64> = (0..n).map(|i| quad(b, &v.column(i))).collect();
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for i in 0..n {
        for j in i..n {
            let x = lambdas[i] * mus[j] + lambdas[j] * mus[i];
            even.push(x);
            if i < j {
                odd.push(x);
            }
        }
    }
    even.sort_by(|x, y| y.total_cmp(x));
    odd.sort_by(|x, y| y.total_cmp(x));
    Ok(CommutingPrediction {
        even,
        odd,
        lambdas,
        mus,
    })
}

/// `(VᵀAV, D)` with `B = V D Vᵀ` and `D` descending.
pub fn reduce_b_diagonal(a: &DenseMatrix, b: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    pair_class(a, b)?;
    let e = sym_eigen(b, DEFAULT_EIGEN_TOL)?;
    let abar = a.congruence(&e.vectors);
    let abar = DenseMatrix::from_fn(abar.rows(), abar.cols(), |i, j| {
        0.5 * (abar.get(i, j) + abar.get(j, i))
    });
    Ok((abar, DenseMatrix::diag(&e.values)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{spectrum_split, DEFAULT_PARITY_TOL};
    use proptest::prelude::*;

    fn split_from(even: &[f64], odd: &[f64]) -> SpectrumSplit {
        SpectrumSplit {
            even_values: even.to_vec(),
            odd_values: odd.to_vec(),
            even_vectors: DenseMatrix::zeros(0, 0),
            odd_vectors: DenseMatrix::zeros(0, 0),
            source_dims: 0,
            classification_tol: DEFAULT_PARITY_TOL,
            solver_residual: 0.0,
        }
    }

    #[test]
    fn diagonal_example_holds_everywhere() {
        let s = split_from(&[16.0, 10.0, 6.0], &[10.0]);
        let r = interlace_report(&s, 1e-9);
        assert!(r.all_hold());
        assert_eq!(r.weak.lhs_min_even, Some(6.0));
        assert_eq!(r.weak.rhs_max_even, Some(16.0));
    }

    #[test]
    fn weak_sides() {
        let s = split_from(&[5.0, 1.0], &[0.0]);
        let w = check_weak(&s, 1e-12);
        assert!(!w.holds && !w.min_side_holds && w.max_side_holds);
        let s = split_from(&[5.0, 1.0], &[6.0]);
        let w = check_weak(&s, 1e-12);
        assert!(!w.holds && w.min_side_holds && !w.max_side_holds);
        assert!(check_weak(&split_from(&[1.0], &[]), 0.0).holds);
    }

    #[test]
    fn full_violation_reported() {
        // s = 3, t = 2: need λ₂ ≤ β₁ ≤ λ₁ and λ₃ ≤ β₂ ≤ λ₂
        let s = split_from(&[9.0, 5.0, 1.0], &[7.0, 6.0]);
        let f = check_interlacing(&s, 1e-12);
        assert!(!f.holds);
        let v = f.first_violation.unwrap();
        assert_eq!((v.i, v.lower, v.beta, v.upper), (2, 1.0, 6.0, 5.0));
        // weak still holds here
        assert!(check_weak(&s, 1e-12).holds);
    }

    #[test]
    fn strong_adjacent_odds_fail() {
        let s = split_from(&[9.0, 8.0, 2.0, 1.0], &[7.0, 6.0]);
        assert!(check_interlacing(&s, 1e-12).holds);
        let v = check_strong(&s, 1e-12);
        assert!(!v.holds);
        assert_eq!(v.first_violation, Some(3));
    }

    #[test]
    fn strong_endpoint_odd_fails() {
        let s = split_from(&[5.0, 1.0], &[0.0]);
        let v = check_strong(&s, 1e-12);
        assert_eq!(v, StrongVerdict { holds: false, first_violation: Some(3) });
    }

    #[test]
    fn strong_ties_are_existential() {
        // 4ᵉ 4ᵉ 4ᵒ 4ᵒ 1ᵉ: reorder the tie as 4ᵉ 4ᵒ 4ᵉ 4ᵒ 1ᵉ
        let s = split_from(&[4.0, 4.0, 1.0], &[4.0, 4.0]);
        assert!(check_strong(&s, 1e-9).holds);
        // with a visible gap the odd pair cannot be split
        let s = split_from(&[4.2, 4.1, 1.0], &[4.0, 3.9]);
        assert!(!check_strong(&s, 1e-9).holds);
        // all equal: even at both ends needs one spare even
        assert!(check_strong(&split_from(&[2.0; 6], &[2.0; 3]), 1e-9).holds);
        assert!(!check_strong(&split_from(&[2.0; 2], &[2.0; 2]), 1e-9).holds);
    }

    #[test]
    fn embed_scalar_case() {
        let a = DenseMatrix::diag(&[1.0, 2.0]);
        let b = DenseMatrix::diag(&[3.0, 4.0]);
        assert_eq!(embed_skew_in_sym(&a, &b).unwrap(), vec![-1]);
    }

    #[test]
    fn embed_rank_two_diagonal() {
        let a = DenseMatrix::from_rows(&[
            [1.0, -2.0, 3.0, 0.5],
            [-2.0, 4.0, 1.0, -1.0],
            [3.0, 1.0, -3.0, 2.0],
            [0.5, -1.0, 2.0, 1.0],
        ])
        .unwrap();
        let b = DenseMatrix::diag(&[2.0, -3.0, 0.0, 0.0]);
        let sigma = embed_skew_in_sym(&a, &b).unwrap();
        assert_eq!(sigma, vec![-1, -1, -1, 1, 1, 1]);
    }

    #[test]
    fn extreme_trace_small() {
        let r = extreme_sym_trace(&DenseMatrix::diag(&[5.0, -2.0])).unwrap();
        assert_eq!((r.max, r.min), (5.0, -2.0));
        assert_eq!(r.argmax, DenseMatrix::diag(&[1.0, 0.0]));
        assert_eq!(r.argmin, DenseMatrix::diag(&[0.0, 1.0]));
        let r = extreme_sym_trace(&DenseMatrix::identity(3)).unwrap();
        assert_eq!((r.max, r.min), (1.0, 1.0));
        assert_eq!(r.argmax, DenseMatrix::diag(&[1.0, 0.0, 0.0]));
    }

    #[test]
    fn commuting_diagonal() {
        let p = commuting_spectrum(&DenseMatrix::diag(&[1.0, 2.0]), &DenseMatrix::diag(&[3.0, 4.0]), 1e-12)
            .unwrap();
        assert_eq!(p.even, vec![16.0, 10.0, 6.0]);
        assert_eq!(p.odd, vec![10.0]);
        let i = DenseMatrix::identity(3);
        let p = commuting_spectrum(&i, &i, 1e-12).unwrap();
        assert!(p.even.iter().chain(&p.odd).all(|&x| (x - 2.0).abs() < 1e-14));
        let a = DenseMatrix::from_rows(&[[1.0, 1.0], [1.0, 0.0]]).unwrap();
        let b = DenseMatrix::diag(&[1.0, 2.0]);
        assert!(matches!(commuting_spectrum(&a, &b, 1e-12), Err(Error::NotCommuting { .. })));
    }

    #[test]
    fn commuting_with_repeated_eigenvalue() {
        // A = I has a full eigenspace; the basis must diagonalize B inside it
        let a = DenseMatrix::identity(2);
        let b = DenseMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let p = commuting_spectrum(&a, &b, 1e-12).unwrap();
        let s = spectrum_split(&a, &b, DEFAULT_PARITY_TOL).unwrap();
        for (x, y) in p.even.iter().zip(&s.even_values) {
            assert!((x - y).abs() < 1e-10);
        }
        for (x, y) in p.odd.iter().zip(&s.odd_values) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn reduce_already_diagonal() {
        let a = DenseMatrix::from_rows(&[[1.0, 2.0], [2.0, 3.0]]).unwrap();
        let b = DenseMatrix::diag(&[4.0, 1.0]);
        let (abar, d) = reduce_b_diagonal(&a, &b).unwrap();
        assert_eq!(d, b);
        for i in 0..2 {
            for j in 0..2 {
                assert!((abar.get(i, j).abs() - a.get(i, j).abs()).abs() < 1e-14);
            }
        }
    }

    fn sym_matrix(n: usize) -> impl Strategy<Value = DenseMatrix> {
        prop::collection::vec(-9i32..=9, n * n).prop_map(move |v| {
            DenseMatrix::from_fn(n, n, |i, j| {
                let (i, j) = if i <= j { (i, j) } else { (j, i) };
                f64::from(v[i * n + j])
            })
        })
    }

    fn sym_pair() -> impl Strategy<Value = (DenseMatrix, DenseMatrix)> {
        (2usize..=4).prop_flat_map(|n| (sym_matrix(n), sym_matrix(n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn implication_chain((a, b) in sym_pair()) {
            let s = spectrum_split(&a, &b, DEFAULT_PARITY_TOL).unwrap();
            let r = interlace_report(&s, default_tol(&s));
            prop_assert!(!r.full.holds || r.weak.holds);
            prop_assert!(!r.strong.holds || r.full.holds);
        }

        #[test]
        fn verdicts_invariant_under_positive_scaling((a, b) in sym_pair(), c in 0.1f64..10.0) {
            let s = spectrum_split(&a, &b, DEFAULT_PARITY_TOL).unwrap();
            let sc = spectrum_split(&a.scale(c), &b, DEFAULT_PARITY_TOL).unwrap();
            for (x, y) in s.even_values.iter().zip(&sc.even_values) {
                prop_assert!((c * x - y).abs() <= 1e-9 * (1.0 + y.abs()));
            }
            let r = interlace_report(&s, default_tol(&s));
            let rc = interlace_report(&sc, default_tol(&sc));
            prop_assert_eq!(r.weak.holds, rc.weak.holds);
            prop_assert_eq!(r.full.holds, rc.full.holds);
            prop_assert_eq!(r.strong.holds, rc.strong.holds);
        }

        #[test]
        fn two_by_two_pairs_satisfy_everything((a, b) in (sym_matrix(2), sym_matrix(2))) {
            let s = spectrum_split(&a, &b, DEFAULT_PARITY_TOL).unwrap();
            prop_assert!(interlace_report(&s, default_tol(&s)).all_hold());
        }
    }
}
