//! Printed fixtures and seeded generator families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dense::{kron, DenseMatrix};
use crate::eigen::{rank, sym_eigenvalues};
use crate::error::{Error, Result};
use crate::interlacing::{check_weak, default_tol};
use crate::spectra::{spectrum_split, Parity, SymmetryClass, DEFAULT_PARITY_TOL};

/// Cutoff for rank checks, relative to the largest singular value.
pub const RANK_CUTOFF: f64 = 1e-9;
/// Default ladder perturbation.
pub const DEFAULT_EPS: f64 = 1e-3;
const MAX_HALVINGS: usize = 40;
const MU_LIMIT: f64 = 1_152_921_504_606_846_976.0; // 2^60
const MAX_RESAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedVerdicts {
    pub weak_holds: bool,
    pub min_parity: Parity,
    /// Only set where a claim about the largest eigenvalue is made.
    pub max_side_holds: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub id: &'static str,
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    pub witness: Option<DenseMatrix>,
    pub expected: ExpectedVerdicts,
}

pub const FIXTURE_IDS: [&str; 3] = ["A0B0", "Anonneg", "Askew"];

fn int_matrix<const N: usize>(rows: [[i32; N]; N]) -> DenseMatrix {
    DenseMatrix::from_fn(N, N, |i, j| f64::from(rows[i][j]))
}

pub fn a0() -> DenseMatrix {
    int_matrix([[2, 0, -1, 3], [0, 0, -2, 6], [-1, -2, 1, 2], [3, 6, 2, 4]])
}

pub fn b0() -> DenseMatrix {
    DenseMatrix::diag(&[2.0, -1.0, -2.0, 0.0])
}

pub fn w0() -> DenseMatrix {
    int_matrix([[0, -15, -24, 10], [15, 0, -36, -2], [24, 36, 0, 53], [-10, 2, -53, 0]])
}

pub fn fixture(id: &str) -> Result<Fixture> {
    match id {
        "A0B0" => Ok(Fixture {
            id: "A0B0",
            a: a0(),
            b: b0(),
            witness: Some(w0()),
            expected: ExpectedVerdicts {
                weak_holds: false,
                min_parity: Parity::Odd,
                max_side_holds: None,
            },
        }),
        "Anonneg" => Ok(Fixture {
            id: "Anonneg",
            a: int_matrix([[98, 48, 88, 31], [48, 33, 91, 116], [88, 91, 91, 45], [31, 116, 45, 139]]),
            b: int_matrix([[35, 23, 78, 125], [23, 100, 91, 152], [78, 91, 1, 120], [125, 152, 120, 187]]),
            witness: None,
            expected: ExpectedVerdicts {
                weak_holds: false,
                min_parity: Parity::Odd,
                max_side_holds: Some(true),
            },
        }),
        "Askew" => Ok(Fixture {
            id: "Askew",
            a: int_matrix([
                [0, 85, -36, -113, -84, 306],
                [-85, 0, 88, -23, 218, 57],
                [36, -88, 0, 122, -48, 29],
                [113, 23, -122, 0, 105, -3],
                [84, -218, 48, -105, 0, -41],
                [-306, -57, -29, 3, 41, 0],
            ]),
            b: int_matrix([
                [0, -92, 44, -124, 38, -44],
                [92, 0, 94, 11, -227, -51],
                [-44, -94, 0, -59, 286, 71],
                [124, -11, 59, 0, 69, -191],
                [-38, 227, -286, -69, 0, 13],
                [44, 51, -71, 191, -13, 0],
            ]),
            witness: None,
            expected: ExpectedVerdicts {
                weak_holds: false,
                min_parity: Parity::Odd,
                max_side_holds: None,
            },
        }),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    RankK,
    Commuting,
    DiagAntiBand,
    TridiagDiag,
    PerturbHolds,
    PerturbFails,
    Ladder,
    PosDef,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Params {
    /// Rank of `A` (RankK), band index (DiagAntiBand), or smaller ladder rank.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Rank of `B` (RankK), or larger ladder rank.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<SymmetryClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    /// 1-based `(r, s)` for the moved tridiagonal entry.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moved: Option<(usize, usize)>,
    /// `"i"`–`"iv"` for PerturbHolds, `"1"`, `"1b"` or `"2"` for PerturbFails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circulant: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    #[serde(default)]
    pub params: Params,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            seed,
            params: Params::default(),
        }
    }

    pub fn with_params(mut self, params: Params) -> Self {
        self.params = params;
        self
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedPair {
    pub a: DenseMatrix,
    pub b: DenseMatrix,
    /// Perturbation size for the doubling families.
    pub mu: Option<f64>,
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small(rng: &mut impl Rng) -> f64 {
    f64::from(rng.gen_range(-9i32..=9))
}

fn small_nonzero(rng: &mut impl Rng) -> f64 {
    loop {
        let x = small(rng);
        if x != 0.0 {
            return x;
        }
    }
}

fn small_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| small(rng)).collect()
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    let v: Vec<f64> = (0..n * n).map(|_| small(rng)).collect();
    DenseMatrix::from_fn(n, n, |i, j| if i <= j { v[i * n + j] } else { v[j * n + i] })
}

pub fn random_diagonal(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    DenseMatrix::diag(&small_vector(rng, n))
}

/// `Σ αᵢ vᵢvᵢᵀ` (symmetric) or `Σ αᵢ(xᵢyᵢᵀ - yᵢxᵢᵀ)` (skew) with exact rank `k`.
pub fn random_rank(rng: &mut impl Rng, n: usize, k: usize, class: SymmetryClass) -> Result<DenseMatrix> {
    match class {
        SymmetryClass::Symmetric if k > n => {
            return Err(Error::BadRank(format!("rank {k} exceeds n = {n}")));
        }
        SymmetryClass::Skew if k % 2 == 1 || k > n => {
            return Err(Error::BadRank(format!("skew rank {k} must be even and at most n = {n}")));
        }
        _ => {}
    }
    for _ in 0..MAX_RESAMPLES {
        let mut m = DenseMatrix::zeros(n, n);
        match class {
            SymmetryClass::Symmetric => {
                for _ in 0..k {
                    let alpha = small_nonzero(rng);
                    let v = small_vector(rng, n);
                    m = &m + &DenseMatrix::from_fn(n, n, |i, j| alpha * v[i] * v[j]);
                }
            }
            SymmetryClass::Skew => {
                for _ in 0..k / 2 {
                    let alpha = small_nonzero(rng);
                    let x = small_vector(rng, n);
                    let y = small_vector(rng, n);
                    m = &m + &DenseMatrix::from_fn(n, n, |i, j| alpha * (x[i] * y[j] - y[i] * x[j]));
                }
            }
        }
        if rank(&m, RANK_CUTOFF)? == k {
            return Ok(m);
        }
    }
    Err(Error::ConstructionFailed(format!("no rank-{k} sample in {MAX_RESAMPLES} draws")))
}

/// RankK family: `A` of rank `k`, `B` of rank `m` (default `n`).
pub fn random_pair(spec: &GeneratorSpec) -> Result<(DenseMatrix, DenseMatrix)> {
    let n = spec.n;
    let class = spec.params.class.unwrap_or(SymmetryClass::Symmetric);
    let k = spec.params.k.ok_or_else(|| Error::Config("RankK needs params.k".into()))?;
    let default_m = match class {
        SymmetryClass::Symmetric => n,
        SymmetryClass::Skew => n - n % 2,
    };
    let m = spec.params.m.unwrap_or(default_m);
    if k == 0 || m == 0 {
        return Err(Error::BadRank("ranks must be positive".into()));
    }
    let mut rng = rng_for(spec.seed);
    let a = random_rank(&mut rng, n, k, class)?;
    let b = random_rank(&mut rng, n, m, class)?;
    verify_class(&a, &b, class)?;
    verify_rank(&a, k, "A")?;
    verify_rank(&b, m, "B")?;
    Ok((a, b))
}

fn verify_class(a: &DenseMatrix, b: &DenseMatrix, class: SymmetryClass) -> Result<()> {
    let ok = match class {
        SymmetryClass::Symmetric => a.is_symmetric(0.0) && b.is_symmetric(0.0),
        SymmetryClass::Skew => a.is_skew(0.0) && b.is_skew(0.0),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::ContractViolation(format!("pair is not {class:?}")))
    }
}

fn verify_rank(m: &DenseMatrix, want: usize, name: &str) -> Result<()> {
    let got = rank(m, RANK_CUTOFF)?;
    if got == want {
        Ok(())
    } else {
        Err(Error::ContractViolation(format!("rank({name}) = {got}, expected {want}")))
    }
}

/// `Ã = A + Σ_{i ≤ ⌊k/2⌋} αᵢ(E_{i,k-i+1} + E_{k-i+1,i})` for diagonal `A`, `B`.
pub fn diag_antiband(a_diag: &[f64], k: usize, alphas: &[f64]) -> Result<DenseMatrix> {
    let n = a_diag.len();
    if k == 0 || k > n {
        return Err(Error::BadBandIndex(format!("k = {k} for n = {n}")));
    }
    if alphas.len() != k / 2 {
        return Err(Error::BadBandIndex(format!(
            "{} coefficients for k = {k} (need {})",
            alphas.len(),
            k / 2
        )));
    }
    let mut data = DenseMatrix::diag(a_diag).as_slice().to_vec();
    for (i, &alpha) in alphas.iter().enumerate() {
        let j = k - 1 - i;
        data[i * n + j] = alpha;
        data[j * n + i] = alpha;
    }
    DenseMatrix::new(n, n, data)
}

pub fn diag_antiband_pair(spec: &GeneratorSpec) -> Result<(DenseMatrix, DenseMatrix)> {
    let n = spec.n;
    let mut rng = rng_for(spec.seed);
    let k = match spec.params.k {
        Some(k) => k,
        None => rng.gen_range(1..=n.max(1)),
    };
    let a_diag = small_vector(&mut rng, n);
    let b = random_diagonal(&mut rng, n);
    let alphas = match &spec.params.alphas {
        Some(v) => v.clone(),
        None => (0..k / 2).map(|_| small(&mut rng)).collect(),
    };
    let a = diag_antiband(&a_diag, k, &alphas)?;
    for i in 0..n {
        for j in 0..n {
            let allowed = i == j || (i + j + 1 == k && i != j);
            if !allowed && a.get(i, j) != 0.0 {
                return Err(Error::ContractViolation(format!("entry ({}, {}) outside the band", i + 1, j + 1)));
            }
        }
    }
    if !b.is_diagonal() {
        return Err(Error::ContractViolation("B is not diagonal".into()));
    }
    Ok((a, b))
}

/// Random symmetric tridiagonal `A` and diagonal `B`. With `moved = (r, s)`
/// (1-based, `r > s + 1`) the entry `(s+1, s)` is cleared and `(r, s)` set.
pub fn tridiag_pair(spec: &GeneratorSpec, moved: Option<(usize, usize)>) -> Result<(DenseMatrix, DenseMatrix)> {
    let n = spec.n;
    if let Some((r, s)) = moved {
        if s == 0 || r <= s + 1 || r > n {
            return Err(Error::BadMoveIndex(format!("(r, s) = ({r}, {s}) needs 1 <= s, s + 1 < r <= n = {n}")));
        }
    }
    let mut rng = rng_for(spec.seed);
    let diag = small_vector(&mut rng, n);
    let off = small_vector(&mut rng, n.saturating_sub(1));
    let b = random_diagonal(&mut rng, n);
    let mut a = DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else if i == j + 1 {
            off[j]
        } else if j == i + 1 {
            off[i]
        } else {
            0.0
        }
    });
    if let Some((r, s)) = moved {
        let value = small_nonzero(&mut rng);
        let (r0, s0) = (r - 1, s - 1);
        let mut data = a.as_slice().to_vec();
        data[s0 * n + s0 + 1] = 0.0;
        data[(s0 + 1) * n + s0] = 0.0;
        data[r0 * n + s0] = value;
        data[s0 * n + r0] = value;
        a = DenseMatrix::new(n, n, data)?;
    }
    for i in 0..n {
        for j in 0..n {
            let band = i.abs_diff(j) <= 1;
            let moved_here = moved.is_some_and(|(r, s)| (i + 1, j + 1) == (r, s) || (j + 1, i + 1) == (r, s));
            if !band && !moved_here && a.get(i, j) != 0.0 {
                return Err(Error::ContractViolation(format!("entry ({}, {}) off the pattern", i + 1, j + 1)));
            }
        }
    }
    if let Some((_, s)) = moved {
        if a.get(s, s - 1) != 0.0 {
            return Err(Error::ContractViolation("moved entry's source is nonzero".into()));
        }
    }
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq)]
pub enum HoldsVariant {
    /// `(A + μI, B)`
    I,
    /// `(A + βB, B + μA)`
    Ii { beta: f64 },
    /// `(A + μD, B)` with `B`, `D` diagonal
    Iii { d: DenseMatrix },
    /// `(A + μD₁, B + μD₂)`
    Iv { d1: DenseMatrix, d2: DenseMatrix },
}

/// Indefinite with a simple largest and a simple smallest eigenvalue.
fn indefinite_simple_extremes(values: &[f64]) -> bool {
    let len = values.len();
    if len < 2 {
        return false;
    }
    let scale = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let gap = 1e-9 * scale.max(f64::MIN_POSITIVE);
    values[0] > gap
        && values[len - 1] < -gap
        && values[0] - values[1] > gap
        && values[len - 2] - values[len - 1] > gap
}

fn weak_holds(a: &DenseMatrix, b: &DenseMatrix) -> Result<bool> {
    let s = spectrum_split(a, b, DEFAULT_PARITY_TOL)?;
    Ok(check_weak(&s, default_tol(&s)).holds)
}

fn double_until(
    mut build: impl FnMut(f64) -> (DenseMatrix, DenseMatrix),
    want_weak: bool,
) -> Result<(DenseMatrix, DenseMatrix, f64)> {
    let mut mu = 1.0;
    while mu <= MU_LIMIT {
        let (a, b) = build(mu);
        if weak_holds(&a, &b)? == want_weak {
            return Ok((a, b, mu));
        }
        mu *= 2.0;
    }
    Err(Error::MuOverflow)
}

/// Perturbations for which weak interlacing holds once `μ` is large; `μ` is
/// found by doubling from 1.
pub fn perturb_holds(a: &DenseMatrix, b: &DenseMatrix, variant: &HoldsVariant) -> Result<(DenseMatrix, DenseMatrix, f64)> {
    crate::spectra::pair_class(a, b)?;
    let n = a.rows();
    let precondition = |m: &DenseMatrix, what: &str| -> Result<()> {
        if indefinite_simple_extremes(&sym_eigenvalues(m)?) {
            Ok(())
        } else {
            Err(Error::PreconditionFail(format!(
                "{what} must be indefinite with simple extreme eigenvalues"
            )))
        }
    };
    match variant {
        HoldsVariant::I => {
            precondition(b, "B")?;
            let id = DenseMatrix::identity(n);
            double_until(|mu| (a + &id.scale(mu), b.clone()), true)
        }
        HoldsVariant::Ii { beta } => {
            let shifted = a + &b.scale(*beta);
            precondition(&shifted, "A + βB")?;
            double_until(|mu| (shifted.clone(), b + &a.scale(mu)), true)
        }
        HoldsVariant::Iii { d } => {
            if !b.is_diagonal() || !d.is_diagonal() || d.rows() != n {
                return Err(Error::PreconditionFail("B and D must be diagonal n x n".into()));
            }
            precondition(&kron(b, d), "B ⊗ D")?;
            double_until(|mu| (a + &d.scale(mu), b.clone()), true)
        }
        HoldsVariant::Iv { d1, d2 } => {
            if d1.rows() != n || d2.rows() != n || !d1.is_symmetric(0.0) || !d2.is_symmetric(0.0) {
                return Err(Error::PreconditionFail("D₁, D₂ must be symmetric n x n".into()));
            }
            precondition(&kron(d1, d2), "D₁ ⊗ D₂")?;
            double_until(|mu| (a + &d1.scale(mu), b + &d2.scale(mu)), true)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FailsVariant {
    /// `(A + μĀ, B̄)`
    One,
    /// `(A + βμĀ, B + μB̄)`, `β > 0`
    OneJoint { beta: f64 },
    /// `(A + μB̄, B + μĀ)`
    Two,
}

/// Perturbations of a weak-failing `(Ā, B̄)` that keep failing once `μ` is
/// large; `μ` is found by doubling from 1.
pub fn perturb_fails(
    abar: &DenseMatrix,
    bbar: &DenseMatrix,
    a: &DenseMatrix,
    b: &DenseMatrix,
    variant: FailsVariant,
) -> Result<(DenseMatrix, DenseMatrix, f64)> {
    crate::spectra::pair_class(abar, bbar)?;
    crate::spectra::pair_class(a, b)?;
    if abar.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!("n = {} and n = {}", abar.rows(), a.rows())));
    }
    if abar.rows() < 4 {
        return Err(Error::PreconditionFail("n must be at least 4".into()));
    }
    if weak_holds(abar, bbar)? {
        return Err(Error::PreconditionFail("weak interlacing holds for (Ā, B̄)".into()));
    }
    match variant {
        FailsVariant::One => double_until(|mu| (a + &abar.scale(mu), bbar.clone()), false),
        FailsVariant::OneJoint { beta } => {
            if beta <= 0.0 {
                return Err(Error::PreconditionFail("β must be positive".into()));
            }
            double_until(|mu| (a + &abar.scale(beta * mu), b + &bbar.scale(mu)), false)
        }
        FailsVariant::Two => double_until(|mu| (a + &bbar.scale(mu), b + &abar.scale(mu)), false),
    }
}

/// `A₀` with `a₁₂ = a₂₁ = 2`: exact rank 3, and weak interlacing still fails
/// against `B₀`. The printed `A₀` itself has full rank.
pub fn a3() -> DenseMatrix {
    int_matrix([[2, 2, -1, 3], [2, 0, -2, 6], [-1, -2, 1, 2], [3, 6, 2, 4]])
}

/// Pair with `rank(A) = k`, `rank(B) = m` and weak interlacing failing, built
/// from the rank-3 and rank-4 bases `A₃`, `A₀`, `B₀`, `B₀ + εI` by padding
/// with `εI` and zeros.
pub fn ladder(k: usize, m: usize, n: usize, eps: f64) -> Result<(DenseMatrix, DenseMatrix)> {
    if k < 3 || m < k || m > n || n < 4.max(k) {
        return Err(Error::BadRank(format!(
            "(k, m, n) = ({k}, {m}, {n}) needs 3 <= k <= m <= n and n >= 4"
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Config(format!("eps = {eps} must be positive")));
    }
    let build = |eps: f64| -> (DenseMatrix, DenseMatrix) {
        let pad = |r: usize| -> DenseMatrix {
            DenseMatrix::diag(&(4..n).map(|i| if i < r { eps } else { 0.0 }).collect::<Vec<_>>())
        };
        let a_head = if k == 3 { a3() } else { a0() };
        let b_head = if m == 3 { b0() } else { &b0() + &DenseMatrix::identity(4).scale(eps) };
        (
            DenseMatrix::block_diag(&[&a_head, &pad(k)]),
            DenseMatrix::block_diag(&[&b_head, &pad(m)]),
        )
    };
    let mut eps = eps;
    for _ in 0..=MAX_HALVINGS {
        let (a, b) = build(eps);
        if rank(&a, RANK_CUTOFF)? == k && rank(&b, RANK_CUTOFF)? == m && !weak_holds(&a, &b)? {
            return Ok((a, b));
        }
        eps /= 2.0;
    }
    Err(Error::ConstructionFailed(format!("ladder ({k}, {m}, {n}) after {MAX_HALVINGS} halvings")))
}

/// Random orthogonal matrix: Gram-Schmidt on integer columns.
fn random_orthogonal(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    'draw: loop {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        for _ in 0..n {
            let mut v = small_vector(rng, n);
            for _ in 0..2 {
                for q in &cols {
                    let c = crate::dense::dot(q, &v);
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= c * qi;
                    }
                }
            }
            let norm = crate::dense::norm2(&v);
            if norm < 1e-6 {
                continue 'draw;
            }
            cols.push(v.into_iter().map(|x| x / norm).collect());
        }
        return DenseMatrix::from_columns(n, &cols);
    }
}

/// Symmetric circulant with first row `c`, `c_j = c_{n-j}`.
fn symmetric_circulant(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    let half: Vec<f64> = small_vector(rng, n / 2 + 1);
    let c: Vec<f64> = (0..n).map(|j| half[j.min(n - j)]).collect();
    DenseMatrix::from_fn(n, n, |i, j| c[(j + n - i) % n])
}

/// `A = VΛVᵀ`, `B = VMVᵀ` with a shared random orthogonal `V`, or two
/// symmetric circulants.
pub fn commuting_pair(n: usize, seed: u64, circulant: bool) -> Result<(DenseMatrix, DenseMatrix)> {
    if n == 0 {
        return Err(Error::DimensionMismatch("n must be positive".into()));
    }
    let mut rng = rng_for(seed);
    let (a, b) = if circulant {
        (symmetric_circulant(&mut rng, n), symmetric_circulant(&mut rng, n))
    } else {
        let v = random_orthogonal(&mut rng, n);
        let lam = small_vector(&mut rng, n);
        let mu = small_vector(&mut rng, n);
        let build = |d: &[f64]| {
            let m = &(&v * &DenseMatrix::diag(d)) * &v.transpose();
            DenseMatrix::from_fn(n, n, |i, j| 0.5 * (m.get(i, j) + m.get(j, i)))
        };
        (build(&lam), build(&mu))
    };
    let commutator = (&(&a * &b) - &(&b * &a)).frobenius_norm();
    if commutator > 1e-10 * (1.0 + a.frobenius_norm() * b.frobenius_norm()) {
        return Err(Error::ContractViolation(format!("commutator {commutator:e}")));
    }
    Ok((a, b))
}

/// `GGᵀ + δI` with `δ = 1e-3·||GGᵀ||_F`.
pub fn random_posdef(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    loop {
        let g = DenseMatrix::from_fn(n, n, |_, _| small(rng));
        let ggt = &g * &g.transpose();
        let norm = ggt.frobenius_norm();
        if norm == 0.0 {
            continue;
        }
        return &ggt + &DenseMatrix::identity(n).scale(1e-3 * norm);
    }
}

fn holds_variant_from(spec: &GeneratorSpec, rng: &mut impl Rng) -> Result<HoldsVariant> {
    let n = spec.n;
    Ok(match spec.params.variant.as_deref().unwrap_or("i") {
        "i" => HoldsVariant::I,
        "ii" => HoldsVariant::Ii {
            beta: spec.params.beta.unwrap_or(1.0),
        },
        "iii" => HoldsVariant::Iii {
            d: random_diagonal(rng, n),
        },
        "iv" => HoldsVariant::Iv {
            d1: random_diagonal(rng, n),
            d2: random_diagonal(rng, n),
        },
        other => return Err(Error::Config(format!("unknown PerturbHolds variant `{other}`"))),
    })
}

/// Deterministic pair for a generator spec.
pub fn generate(spec: &GeneratorSpec) -> Result<GeneratedPair> {
    let n = spec.n;
    if n == 0 {
        return Err(Error::Config("n must be positive".into()));
    }
    let plain = |(a, b): (DenseMatrix, DenseMatrix)| GeneratedPair { a, b, mu: None };
    match spec.family {
        Family::RankK => random_pair(spec).map(plain),
        Family::Commuting => commuting_pair(n, spec.seed, spec.params.circulant.unwrap_or(false)).map(plain),
        Family::DiagAntiBand => diag_antiband_pair(spec).map(plain),
        Family::TridiagDiag => tridiag_pair(spec, spec.params.moved).map(plain),
        Family::Ladder => {
            let k = spec.params.k.unwrap_or(3);
            let m = spec.params.m.unwrap_or(k);
            ladder(k, m, n, spec.params.eps.unwrap_or(DEFAULT_EPS)).map(plain)
        }
        Family::PosDef => {
            let mut rng = rng_for(spec.seed);
            let a = random_posdef(&mut rng, n);
            let b = random_posdef(&mut rng, n);
            Ok(plain((a, b)))
        }
        Family::PerturbHolds => {
            let mut rng = rng_for(spec.seed);
            for _ in 0..MAX_RESAMPLES {
                let a = random_symmetric(&mut rng, n);
                let b = match spec.params.variant.as_deref() {
                    Some("iii") => random_diagonal(&mut rng, n),
                    _ => random_symmetric(&mut rng, n),
                };
                let variant = holds_variant_from(spec, &mut rng)?;
                match perturb_holds(&a, &b, &variant) {
                    Ok((a, b, mu)) => return Ok(GeneratedPair { a, b, mu: Some(mu) }),
                    Err(Error::PreconditionFail(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(Error::ConstructionFailed("no sample met the variant's precondition".into()))
        }
        Family::PerturbFails => {
            if n < 4 {
                return Err(Error::Config("PerturbFails needs n >= 4".into()));
            }
            let (abar, bbar) = ladder(3, 3, n, DEFAULT_EPS)?;
            let mut rng = rng_for(spec.seed);
            let a = random_symmetric(&mut rng, n);
            let b = random_symmetric(&mut rng, n);
            let variant = match spec.params.variant.as_deref().unwrap_or("1") {
                "1" => FailsVariant::One,
                "1b" => FailsVariant::OneJoint {
                    beta: spec.params.beta.unwrap_or(1.0),
                },
                "2" => FailsVariant::Two,
                other => return Err(Error::Config(format!("unknown PerturbFails variant `{other}`"))),
            };
            let (a, b, mu) = perturb_fails(&abar, &bbar, &a, &b, variant)?;
            Ok(GeneratedPair { a, b, mu: Some(mu) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::classify_parity;

    #[test]
    fn printed_entries() {
        let f = fixture("A0B0").unwrap();
        assert_eq!(f.a.get(3, 1), 6.0);
        // det(A₀) = -200
        assert_eq!(rank(&f.a, RANK_CUTOFF).unwrap(), 4);
        assert_eq!(rank(&f.b, RANK_CUTOFF).unwrap(), 3);
        assert_eq!(rank(&a3(), RANK_CUTOFF).unwrap(), 3);
        let s = fixture("Askew").unwrap();
        assert!(s.a.is_skew(0.0) && s.b.is_skew(0.0));
        assert_eq!(s.a.get(0, 5), 306.0);
        assert_eq!(s.a.rows(), 6);
        let p = fixture("Anonneg").unwrap();
        assert!(p.a.as_slice().iter().chain(p.b.as_slice()).all(|&x| x >= 0.0));
        assert!(matches!(fixture("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn example_pair_minimum_is_odd() {
        let f = fixture("A0B0").unwrap();
        let s = spectrum_split(&f.a, &f.b, DEFAULT_PARITY_TOL).unwrap();
        assert!(s.min_odd().unwrap() < s.min_even().unwrap() - 1e-6);
        let v = s.min_odd_vector().unwrap();
        assert_eq!(classify_parity(&v, 1e-8).unwrap(), Parity::Odd);
    }

    #[test]
    fn rank_k_pairs() {
        let spec = GeneratorSpec::new(Family::RankK, 4, 7).with_params(Params {
            k: Some(2),
            ..Params::default()
        });
        let (a, b) = random_pair(&spec).unwrap();
        assert_eq!(rank(&a, RANK_CUTOFF).unwrap(), 2);
        assert_eq!(rank(&b, RANK_CUTOFF).unwrap(), 4);
        let (a2, b2) = random_pair(&spec).unwrap();
        assert_eq!((a.as_slice(), b.as_slice()), (a2.as_slice(), b2.as_slice()));

        let spec = GeneratorSpec::new(Family::RankK, 3, 1).with_params(Params {
            k: Some(3),
            ..Params::default()
        });
        assert_eq!(rank(&random_pair(&spec).unwrap().0, RANK_CUTOFF).unwrap(), 3);

        let skew = |k| {
            GeneratorSpec::new(Family::RankK, 4, 3).with_params(Params {
                k: Some(k),
                class: Some(SymmetryClass::Skew),
                ..Params::default()
            })
        };
        assert!(matches!(random_pair(&skew(1)), Err(Error::BadRank(_))));
        let (a, b) = random_pair(&skew(2)).unwrap();
        assert!(a.is_skew(0.0) && b.is_skew(0.0));
        assert_eq!(rank(&a, RANK_CUTOFF).unwrap(), 2);
        assert_eq!(rank(&b, RANK_CUTOFF).unwrap(), 4);
    }

    #[test]
    fn antiband_pattern() {
        let a = diag_antiband(&[1.0, 2.0, 3.0, 4.0], 4, &[5.0, 6.0]).unwrap();
        let want = int_matrix([[1, 0, 0, 5], [0, 2, 6, 0], [0, 6, 3, 0], [5, 0, 0, 4]]);
        assert_eq!(a, want);
        let a = diag_antiband(&[1.0, 2.0, 3.0, 4.0], 3, &[7.0]).unwrap();
        assert_eq!(a.get(0, 2), 7.0);
        assert_eq!(a.get(1, 1), 2.0);
        assert_eq!(diag_antiband(&[1.0, 2.0], 2, &[0.0]).unwrap(), DenseMatrix::diag(&[1.0, 2.0]));
        assert!(matches!(diag_antiband(&[1.0, 2.0], 3, &[1.0]), Err(Error::BadBandIndex(_))));
    }

    #[test]
    fn tridiagonal_and_moved() {
        let spec = GeneratorSpec::new(Family::TridiagDiag, 5, 11);
        let (a, b) = tridiag_pair(&spec, None).unwrap();
        assert!(b.is_diagonal());
        assert_eq!(a.get(0, 2), 0.0);
        let (m, _) = tridiag_pair(&spec, Some((4, 1))).unwrap();
        assert_eq!(m.get(1, 0), 0.0);
        assert_ne!(m.get(3, 0), 0.0);
        assert_eq!(m.get(3, 0), m.get(0, 3));
        assert!(matches!(tridiag_pair(&spec, Some((2, 1))), Err(Error::BadMoveIndex(_))));
    }

    #[test]
    fn perturb_holds_variants() {
        let b = DenseMatrix::diag(&[3.0, 1.0, -1.0, -2.0]);
        let (a2, b2, mu) = perturb_holds(&a0(), &b, &HoldsVariant::I).unwrap();
        assert!(mu >= 1.0 && weak_holds(&a2, &b2).unwrap());
        assert!(matches!(
            perturb_holds(&a0(), &DenseMatrix::identity(4), &HoldsVariant::I),
            Err(Error::PreconditionFail(_))
        ));
        let d1 = DenseMatrix::diag(&[3.0, 1.0, -1.0, -2.0]);
        let d2 = DenseMatrix::diag(&[2.0, 1.0, 1.0, 1.0]);
        let (a2, b2, _) = perturb_holds(&a0(), &b0(), &HoldsVariant::Iv { d1, d2 }).unwrap();
        assert!(weak_holds(&a2, &b2).unwrap());
    }

    #[test]
    fn perturb_fails_variants() {
        let z = DenseMatrix::zeros(4, 4);
        let (a, b, mu) = perturb_fails(&a0(), &b0(), &z, &z, FailsVariant::One).unwrap();
        assert_eq!(mu, 1.0);
        assert_eq!((a, b), (a0(), b0()));
        let mut rng = rng_for(5);
        let a = random_symmetric(&mut rng, 4);
        let b = random_symmetric(&mut rng, 4);
        for v in [FailsVariant::One, FailsVariant::OneJoint { beta: 0.5 }, FailsVariant::Two] {
            let (x, y, _) = perturb_fails(&a0(), &b0(), &a, &b, v).unwrap();
            assert!(!weak_holds(&x, &y).unwrap(), "{v:?}");
        }
        assert!(matches!(
            perturb_fails(&DenseMatrix::identity(4), &DenseMatrix::identity(4), &a, &b, FailsVariant::One),
            Err(Error::PreconditionFail(_))
        ));
    }

    #[test]
    fn ladder_base_and_small_cases() {
        let (a, b) = ladder(3, 3, 4, 0.5).unwrap();
        assert_eq!((a, b), (a3(), b0()));
        let (a, b) = ladder(3, 4, 4, DEFAULT_EPS).unwrap();
        assert_eq!(a, a3());
        assert_eq!(b, &b0() + &DenseMatrix::identity(4).scale(DEFAULT_EPS));
        let (a, _) = ladder(4, 4, 4, DEFAULT_EPS).unwrap();
        assert_eq!(a, a0());
        let (a, b) = ladder(4, 5, 6, DEFAULT_EPS).unwrap();
        assert_eq!(rank(&a, RANK_CUTOFF).unwrap(), 4);
        assert_eq!(rank(&b, RANK_CUTOFF).unwrap(), 5);
        assert!(matches!(ladder(2, 3, 4, DEFAULT_EPS), Err(Error::BadRank(_))));
        assert!(matches!(ladder(4, 5, 4, DEFAULT_EPS), Err(Error::BadRank(_))));
    }

    #[test]
    fn commuting_pairs() {
        for circulant in [false, true] {
            let (a, b) = commuting_pair(3, 9, circulant).unwrap();
            assert!((&(&a * &b) - &(&b * &a)).frobenius_norm() <= 1e-10);
            assert!(a.is_symmetric(0.0) && b.is_symmetric(0.0));
        }
        let (a, _) = commuting_pair(4, 9, true).unwrap();
        assert_eq!(a.get(0, 1), a.get(1, 2));
        assert_eq!(a.get(0, 1), a.get(0, 3));
    }

    #[test]
    fn spec_json_round_trip() {
        let json = r#"{"family":"RankK","n":4,"seed":7,"params":{"k":2}}"#;
        let spec: GeneratorSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.params.k, Some(2));
        assert_eq!(serde_json::to_string(&spec).unwrap(), json);
        let g1 = generate(&spec).unwrap();
        let g2 = generate(&spec).unwrap();
        assert_eq!(g1.a.as_slice(), g2.a.as_slice());
        let spec: GeneratorSpec = serde_json::from_str(r#"{"family":"Ladder","n":4,"seed":0}"#).unwrap();
        assert_eq!(generate(&spec).unwrap().a, a3());
    }

    #[test]
    fn generated_families_meet_contracts() {
        for family in [
            Family::Commuting,
            Family::DiagAntiBand,
            Family::TridiagDiag,
            Family::PosDef,
            Family::PerturbHolds,
            Family::PerturbFails,
        ] {
            for seed in 0..3 {
                let g = generate(&GeneratorSpec::new(family, 4, seed)).unwrap();
                assert!(g.a.is_symmetric(1e-12) && g.b.is_symmetric(1e-12), "{family:?}");
            }
        }
    }

    #[test]
    fn posdef_is_definite() {
        let mut rng = rng_for(3);
        for _ in 0..10 {
            let m = random_posdef(&mut rng, 4);
            assert!(*sym_eigenvalues(&m).unwrap().last().unwrap() > 0.0);
        }
    }
}
