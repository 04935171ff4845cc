//! Exact rational linear algebra for positive-definiteness certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bases::sym_pairs;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exact value of a float that holds an integer; anything else is rejected.
pub fn promote_integer(x: f64) -> Result<Rational> {
    if !x.is_finite() || x.fract() != 0.0 || x.abs() > 2f64.powi(53) {
        return Err(Error::NotRational(format!("{x} is not an exactly representable integer")));
    }
    Ok(Rational::from_integer(BigInt::from(x as i64)))
}

/// Parses `"-12"`, `"3.25"`, `"1e-3"`, `"-9523/1002"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::NotRational(format!("`{s}` is not a decimal or fraction literal"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty()
        || !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all = format!("{whole}{frac}");
    let mut value = Rational::from_integer(all.parse::<BigInt>().map_err(|_| bad())?);
    let shift = exponent - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    for _ in 0..shift.unsigned_abs() {
        value = if shift > 0 { value * &ten } else { value / &ten };
    }
    Ok(if neg { -value } else { value })
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter: `{"num": "...", "den": "..."}`.
pub mod rational_json {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Repr {
        num: String,
        den: String,
    }

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        Repr {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let r = Repr::deserialize(d)?;
        let num: BigInt = r.num.parse().map_err(serde::de::Error::custom)?;
        let den: BigInt = r.den.parse().map_err(serde::de::Error::custom)?;
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(num, den))
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let reprs: Vec<Repr> = v
                .iter()
                .map(|x| Repr {
                    num: x.numer().to_string(),
                    den: x.denom().to_string(),
                })
                .collect();
            reprs.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            let reprs = Vec::<Repr>::deserialize(d)?;
            reprs
                .into_iter()
                .map(|r| {
                    let num: BigInt = r.num.parse().map_err(serde::de::Error::custom)?;
                    let den: BigInt = r.den.parse().map_err(serde::de::Error::custom)?;
                    if den.is_zero() {
                        return Err(serde::de::Error::custom("zero denominator"));
                    }
                    Ok(Rational::new(num, den))
                })
                .collect()
        }
    }
}

/// Dense row-major matrix of reduced rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl std::fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RationalMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_integers<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self::from_fn(rows.len(), cols, |i, j| int(rows[i].as_ref()[j])))
    }

    /// Promotes a float matrix whose entries are all integers.
    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        let data = m.as_slice().iter().map(|&x| promote_integer(x)).collect::<Result<Vec<_>>>()?;
        Self::new(m.rows(), m.cols(), data)
    }

    pub fn parse_rows<R: AsRef<[S]>, S: AsRef<str>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            for s in r.as_ref() {
                data.push(parse_rational(s.as_ref())?);
            }
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows, self.cols, |i, j| rational_to_f64(self.get(i, j)))
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..=i).all(|j| *self.get(i, j) == -self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * s)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                let x = self.get(i, k);
                if !x.is_zero() {
                    acc += x * other.get(k, j);
                }
            }
            acc
        }))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("operand shapes differ".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j)))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("operand shapes differ".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j)))
    }

    /// `xᵀ M x`.
    pub fn quadratic_form(&self, x: &[Rational]) -> Result<Rational> {
        if !self.is_square() || x.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a {}x{} form",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        let mut acc = Rational::zero();
        for i in 0..self.rows {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.cols {
                acc += &x[i] * self.get(i, j) * &x[j];
            }
        }
        Ok(acc)
    }
}

fn require_square(m: &RationalMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        })
    }
}

fn require_symmetric(m: &RationalMatrix) -> Result<()> {
    require_square(m)?;
    if m.is_symmetric() {
        Ok(())
    } else {
        let asymmetry = (0..m.rows)
            .flat_map(|i| (0..m.cols).map(move |j| (i, j)))
            .map(|(i, j)| rational_to_f64(&(m.get(i, j) - m.get(j, i))).abs())
            .fold(0.0, f64::max);
        Err(Error::NotSymmetric { asymmetry })
    }
}

pub fn exact_kron(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    RationalMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        a.get(i / b.rows, j / b.cols) * b.get(i % b.rows, j % b.cols)
    })
}

/// Column-stacking `vec`.
pub fn exact_vec(x: &RationalMatrix) -> Vec<Rational> {
    (0..x.cols)
        .flat_map(|c| (0..x.rows).map(move |r| (r, c)))
        .map(|(r, c)| x.get(r, c).clone())
        .collect()
}

/// `vec(W)ᵀ (A⊗B) vec(W) / vec(W)ᵀ vec(W)`.
pub fn exact_rayleigh(a: &RationalMatrix, b: &RationalMatrix, w: &RationalMatrix) -> Result<Rational> {
    require_square(a)?;
    require_square(b)?;
    let n = a.rows;
    if b.rows != n || w.rows != n || w.cols != n {
        return Err(Error::DimensionMismatch(format!(
            "A {}x{}, B {}x{}, W {}x{}",
            a.rows, a.cols, b.rows, b.cols, w.rows, w.cols
        )));
    }
    let x = exact_vec(w);
    let norm: Rational = x.iter().map(|v| v * v).sum();
    if norm.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(exact_kron(a, b).quadratic_form(&x)? / norm)
}

/// `n² x d` map from free entries (`u₁₁, u₂₁, …, u_{n1}, u₂₂, …`) to `vec(U)`.
fn free_entry_embedding(n: usize) -> Vec<Vec<usize>> {
    // entry k lists the vec positions that hold x_k
    sym_pairs(n)
        .into_iter()
        .map(|(c, r)| {
            if r == c {
                vec![c * n + r]
            } else {
                vec![c * n + r, r * n + c]
            }
        })
        .collect()
}

/// `Mᵀ K M` for the free-entry embedding `M`.
fn gather(k: &RationalMatrix, n: usize) -> RationalMatrix {
    let m = free_entry_embedding(n);
    RationalMatrix::from_fn(m.len(), m.len(), |p, q| {
        let mut acc = Rational::zero();
        for &i in &m[p] {
            for &j in &m[q] {
                acc += k.get(i, j);
            }
        }
        acc
    })
}

/// `H` with `vec(U)ᵀ(A⊗B)vec(U) + shift·||U||_F² = ½ xᵀHx` for every symmetric
/// `U`, where `x` lists the free entries column by column down the lower
/// triangle.
pub fn compress_shifted_form(a: &RationalMatrix, b: &RationalMatrix, shift: &Rational) -> Result<RationalMatrix> {
    require_symmetric(a)?;
    require_symmetric(b)?;
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!("n = {} and n = {}", a.rows, b.rows)));
    }
    let n = a.rows;
    let k = exact_kron(a, b);
    let gathered = gather(&k, n);
    let two = int(2);
    let mult = free_entry_embedding(n);
    Ok(RationalMatrix::from_fn(gathered.rows, gathered.cols, |p, q| {
        let mut h = &gathered.get(p, q).clone() * &two;
        if p == q {
            h += &two * shift * int(mult[p].len() as i64);
        }
        h
    }))
}

/// `Mᵀ(A⊗B)M + diag_weight·I`: the free-entry gathering with a flat diagonal shift.
pub fn gathered_form(a: &RationalMatrix, b: &RationalMatrix, diag_weight: &Rational) -> Result<RationalMatrix> {
    require_symmetric(a)?;
    require_symmetric(b)?;
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!("n = {} and n = {}", a.rows, b.rows)));
    }
    let g = gather(&exact_kron(a, b), a.rows);
    Ok(RationalMatrix::from_fn(g.rows, g.cols, |p, q| {
        if p == q {
            g.get(p, q) + diag_weight
        } else {
            g.get(p, q).clone()
        }
    }))
}

/// Free entries of a symmetric `U` in the order used by [`compress_shifted_form`].
pub fn free_entries(u: &RationalMatrix) -> Vec<Rational> {
    sym_pairs(u.rows)
        .into_iter()
        .map(|(c, r)| u.get(r, c).clone())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PdVerdict {
    PositiveDefinite,
    NotPD,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdCertificate {
    pub verdict: PdVerdict,
    /// `D_k / D_{k-1}` for each leading principal minor `D_k`, up to the
    /// first nonpositive one.
    #[serde(with = "rational_json::vec")]
    pub pivot_chain: Vec<Rational>,
    #[serde(with = "rational_json::vec")]
    pub leading_minors: Vec<Rational>,
    /// For `NotPD`: a vector with `xᵀMx <= 0`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vec")]
    pub witness: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rat")]
    pub witness_value: Option<Rational>,
}

mod opt_vec {
    use super::*;
    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => rational_json::vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Rational>>, D::Error> {
        rational_json::vec::deserialize(d).map(Some)
    }
}

mod opt_rat {
    use super::*;
    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => rational_json::serialize(v, s),
            None => s.serialize_none(),
        }
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        rational_json::deserialize(d).map(Some)
    }
}

fn common_denominator(m: &RationalMatrix) -> BigInt {
    m.data.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

/// Fraction-free (Bareiss) elimination of `L·M` with `L` the common
/// denominator, no pivoting. Returns the leading minors of `M` that were
/// reached; stops after the first nonpositive one.
fn leading_minors_until_nonpositive(m: &RationalMatrix) -> Vec<Rational> {
    let n = m.rows;
    let l = common_denominator(m);
    let mut a: Vec<BigInt> = m
        .data
        .iter()
        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    let mut l_pow = Rational::one();
    let l_rat = Rational::from_integer(l);
    for k in 0..n {
        let pivot = a[k * n + k].clone();
        l_pow *= &l_rat;
        // pivot = k+1'th leading minor of L·M
        let minor = Rational::from_integer(pivot.clone()) / &l_pow;
        let positive = minor.is_positive();
        minors.push(minor);
        if !positive {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i * n + j] * &pivot - &a[i * n + k] * &a[k * n + j]) / &prev;
                a[i * n + j] = v;
            }
        }
        prev = pivot;
    }
    minors
}

/// Exact solve of `X y = r` for square nonsingular `X` (Gaussian elimination
/// with row pivoting on nonzero entries).
pub fn exact_solve(x: &RationalMatrix, r: &RationalMatrix) -> Result<RationalMatrix> {
    require_square(x)?;
    let n = x.rows;
    if r.rows != n {
        return Err(Error::DimensionMismatch(format!("{n}x{n} system with {} rows", r.rows)));
    }
    let m = r.cols;
    let w = n + m;
    let mut aug: Vec<Vec<Rational>> = (0..n)
        .map(|i| x.row(i).iter().chain(r.row(i)).cloned().collect())
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !aug[i][k].is_zero()).ok_or(Error::LeadingBlockNotPd)?;
        aug.swap(k, p);
        let inv = aug[k][k].recip();
        for j in k..w {
            aug[k][j] = &aug[k][j] * &inv;
        }
        for i in 0..n {
            if i != k && !aug[i][k].is_zero() {
                let f = aug[i][k].clone();
                for j in k..w {
                    let delta = &f * &aug[k][j];
                    aug[i][j] -= delta;
                }
            }
        }
    }
    Ok(RationalMatrix::from_fn(n, m, |i, j| aug[i][n + j].clone()))
}

pub fn exact_det(m: &RationalMatrix) -> Result<Rational> {
    require_square(m)?;
    let n = m.rows;
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != k {
            a.swap(k, p);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let delta = &f * &a[k][j];
                a[i][j] -= delta;
            }
        }
    }
    Ok(det)
}

pub fn exact_pd(m: &RationalMatrix) -> Result<PdCertificate> {
    require_symmetric(m)?;
    let n = m.rows;
    let minors = leading_minors_until_nonpositive(m);
    let mut pivots = Vec::with_capacity(minors.len());
    let mut prev = Rational::one();
    for d in &minors {
        pivots.push(d / &prev);
        prev = d.clone();
    }
    let failed = minors.last().is_some_and(|d| !d.is_positive());
    if !failed {
        return Ok(PdCertificate {
            verdict: PdVerdict::PositiveDefinite,
            pivot_chain: pivots,
            leading_minors: minors,
            witness: None,
            witness_value: None,
        });
    }
    // leading (k-1) block is PD; x = (-X⁻¹y, 1, 0, ...) gives xᵀMx = pivot_k
    let k = minors.len();
    let mut x = vec![Rational::zero(); n];
    x[k - 1] = Rational::one();
    if k > 1 {
        let lead: Vec<usize> = (0..k - 1).collect();
        let xb = m.select(&lead, &lead);
        let y = m.select(&lead, &[k - 1]);
        let sol = exact_solve(&xb, &y)?;
        for i in 0..k - 1 {
            x[i] = -sol.get(i, 0).clone();
        }
    }
    let value = m.quadratic_form(&x)?;
    Ok(PdCertificate {
        verdict: PdVerdict::NotPD,
        pivot_chain: pivots,
        leading_minors: minors,
        witness: Some(x),
        witness_value: Some(value),
    })
}

/// `Z - Yᵀ X⁻¹ Y` for the leading `split x split` block `X`, which must be
/// positive definite.
pub fn exact_schur(m: &RationalMatrix, split: usize) -> Result<RationalMatrix> {
    require_symmetric(m)?;
    let n = m.rows;
    if split == 0 || split >= n {
        return Err(Error::DimensionMismatch(format!("split {split} for a {n}x{n} matrix")));
    }
    let lead: Vec<usize> = (0..split).collect();
    let tail: Vec<usize> = (split..n).collect();
    let x = m.select(&lead, &lead);
    if exact_pd(&x)?.verdict != PdVerdict::PositiveDefinite {
        return Err(Error::LeadingBlockNotPd);
    }
    let y = m.select(&lead, &tail);
    let z = m.select(&tail, &tail);
    let xinv_y = exact_solve(&x, &y)?;
    z.try_sub(&y.transpose().try_mul(&xinv_y)?)
}

/// `(det X, det X · (Z - Yᵀ X⁻¹ Y))`: the Schur complement cleared of the
/// leading block's determinant.
pub fn scaled_schur(m: &RationalMatrix, split: usize) -> Result<(Rational, RationalMatrix)> {
    let s = exact_schur(m, split)?;
    let lead: Vec<usize> = (0..split).collect();
    let det = exact_det(&m.select(&lead, &lead))?;
    let scaled = s.scale(&det);
    Ok((det, scaled))
}

/// `u_kk · U(1:k-1, 1:k-1) - U(k, 1:k-1)ᵀ U(k, 1:k-1)` with `k` the last index:
/// the Schur complement of the trailing entry, scaled by that entry.
pub fn trailing_scaled_schur(u: &RationalMatrix) -> Result<RationalMatrix> {
    require_symmetric(u)?;
    let k = u.rows;
    if k < 2 {
        return Err(Error::DimensionMismatch("need at least a 2x2 matrix".into()));
    }
    let last = k - 1;
    let ukk = u.get(last, last);
    Ok(RationalMatrix::from_fn(last, last, |i, j| {
        ukk * u.get(i, j) - u.get(last, i) * u.get(last, j)
    }))
}

/// Every diagonal entry is positive and exceeds its row's off-diagonal
/// absolute sum.
pub fn diag_dominant(m: &RationalMatrix) -> bool {
    m.is_square()
        && (0..m.rows).all(|i| {
            let d = m.get(i, i);
            let off: Rational = (0..m.cols).filter(|&j| j != i).map(|j| m.get(i, j).abs()).sum();
            d.is_positive() && *d > off
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    MinEigvecSkew,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleCertificate {
    pub pair_id: String,
    #[serde(with = "rational_json")]
    pub skew_rayleigh: Rational,
    /// Every symmetric `u` has `uᵀ(A⊗B)u / uᵀu` strictly above this bound.
    #[serde(with = "rational_json")]
    pub even_lower_bound: Rational,
    #[serde(with = "rational_json")]
    pub shift: Rational,
    pub pd_evidence: PdCertificate,
    pub conclusion: Conclusion,
}

/// Certifies that the smallest eigenvalue of `A⊗B + B⊗A` belongs to a skew
/// eigenvector: `ρ_W < -shift` exactly, and the compressed form of
/// `uᵀ(A⊗B)u + shift·uᵀu` is positive definite, so every even eigenvalue
/// exceeds `-2·shift` while some odd eigenvalue is at most `2ρ_W`.
pub fn certify_skew_extremal(
    pair_id: &str,
    a: &RationalMatrix,
    b: &RationalMatrix,
    w: &RationalMatrix,
    shift: &Rational,
) -> Result<CounterexampleCertificate> {
    require_square(a)?;
    require_square(b)?;
    if a.is_skew() && b.is_skew() && !(a.is_zero() && b.is_zero()) {
        return Err(Error::Unsupported(format!(
            "`{pair_id}` is a skew pair; exact certificates cover symmetric pairs"
        )));
    }
    require_symmetric(a)?;
    require_symmetric(b)?;
    require_square(w)?;
    if !w.is_skew() {
        let deviation = (0..w.rows)
            .flat_map(|i| (0..w.cols).map(move |j| (i, j)))
            .map(|(i, j)| rational_to_f64(&(w.get(i, j) + w.get(j, i))).abs())
            .fold(0.0, f64::max);
        return Err(Error::NotSkew { deviation });
    }
    let rho = exact_rayleigh(a, b, w)?;
    let bound = -shift.clone();
    if rho >= bound {
        return Err(Error::CertificateFails {
            stage: "skew_rayleigh".into(),
            detail: format!("rho_w = {rho} is not below -shift = {bound}"),
        });
    }
    let h = compress_shifted_form(a, b, shift)?;
    let pd = exact_pd(&h)?;
    if pd.verdict != PdVerdict::PositiveDefinite {
        let detail = match &pd.witness_value {
            Some(v) => format!(
                "compressed form is not positive definite (pivot {} gives xᵀHx = {v})",
                pd.pivot_chain.len()
            ),
            None => "compressed form is not positive definite".into(),
        };
        return Err(Error::CertificateFails {
            stage: "pd_evidence".into(),
            detail,
        });
    }
    Ok(CounterexampleCertificate {
        pair_id: pair_id.to_string(),
        skew_rayleigh: rho,
        even_lower_bound: bound,
        shift: shift.clone(),
        pd_evidence: pd,
        conclusion: Conclusion::MinEigvecSkew,
    })
}
