//! Seeded randomized search for interlacing violations.
//!
//! Trial `i` draws its dimension, ranks and generator seed from a ChaCha8
//! stream keyed by `(seed, i)`, so trials are independent of execution order
//! and each record can be replayed from its echoed generator spec alone.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{generate, Family, GeneratorSpec, Params};
use crate::eigen::DEFAULT_EIGEN_TOL;
use crate::error::{Error, Result};
use crate::interlacing::{check_interlacing, check_strong, check_weak, DEFAULT_INTERLACE_FACTOR};
use crate::spectra::{spectrum_split_with, Parity, SpectrumSplit, SymmetryClass, DEFAULT_PARITY_TOL};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Weak,
    Interlacing,
    Strong,
}

impl Property {
    pub const ALL: [Property; 3] = [Property::Weak, Property::Interlacing, Property::Strong];

    pub fn name(self) -> &'static str {
        match self {
            Property::Weak => "weak",
            Property::Interlacing => "interlacing",
            Property::Strong => "strong",
        }
    }
}

impl std::str::FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(Property::Weak),
            "interlacing" => Ok(Property::Interlacing),
            "strong" => Ok(Property::Strong),
            other => Err(Error::Config(format!("unknown property `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Inclusive.
    pub n_range: (usize, usize),
    /// Inclusive rank range for `A`, and for `B` unless `b_rank_range` is set.
    pub rank_range: (usize, usize),
    /// Inclusive rank range for `B`; the upper bound is clipped to `n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_rank_range: Option<(usize, usize)>,
    pub symmetry_class: SymmetryClass,
    pub trials: usize,
    pub seed: u64,
    pub properties: Vec<Property>,
    /// Interlacing tolerance factor, applied to `||C||_F`.
    pub tol: f64,
    /// Positive definite pairs only; records whether the minimum is odd.
    pub conjecture_mode: bool,
    /// Worker threads; `None` uses the rayon default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            n_range: (4, 4),
            rank_range: (3, 3),
            b_rank_range: None,
            symmetry_class: SymmetryClass::Symmetric,
            trials: 100,
            seed: 0,
            properties: Property::ALL.to_vec(),
            tol: DEFAULT_INTERLACE_FACTOR,
            conjecture_mode: false,
            jobs: None,
        }
    }
}

fn max_rank(n: usize, class: SymmetryClass) -> usize {
    match class {
        SymmetryClass::Symmetric => n,
        SymmetryClass::Skew => n - n % 2,
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        let (nl, nh) = self.n_range;
        if nl == 0 || nl > nh {
            return bad(format!("empty dimension range [{nl}, {nh}]"));
        }
        if self.properties.is_empty() {
            return bad("no properties requested".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tol = {} must be positive", self.tol));
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1".into());
        }
        if self.conjecture_mode {
            return Ok(());
        }
        let ranges = std::iter::once(("rank", self.rank_range)).chain(self.b_rank_range.map(|r| ("B rank", r)));
        for (what, (lo, hi)) in ranges {
            if lo == 0 || lo > hi {
                return bad(format!("empty {what} range [{lo}, {hi}]"));
            }
            if self.symmetry_class == SymmetryClass::Skew && (lo % 2 == 1 || hi % 2 == 1) {
                return bad(format!("skew {what} range [{lo}, {hi}] must have even bounds"));
            }
            if lo > max_rank(nl, self.symmetry_class) {
                return bad(format!("{what} {lo} is not attainable at n = {nl}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interlacing: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strong: Option<bool>,
}

impl Verdicts {
    pub fn get(&self, p: Property) -> Option<bool> {
        match p {
            Property::Weak => self.weak,
            Property::Interlacing => self.interlacing,
            Property::Strong => self.strong,
        }
    }

    fn set(&mut self, p: Property, v: bool) {
        match p {
            Property::Weak => self.weak = Some(v),
            Property::Interlacing => self.interlacing = Some(v),
            Property::Strong => self.strong = Some(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub spec: GeneratorSpec,
    pub verdicts: Verdicts,
    pub min_parity: Parity,
    pub max_parity: Parity,
    /// `min odd - min even`; negative when the minimum is odd.
    pub margin_min: Option<f64>,
    /// `max even - max odd`; negative when the maximum is odd.
    pub margin_max: Option<f64>,
    /// Conjecture mode: the minimum eigenvalue belongs to an odd eigenvector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjecture_violation: Option<bool>,
    pub wall_time_us: u64,
}

impl TrialRecord {
    /// JSON line; `wall_time_us` is zeroed when `timing` is false.
    pub fn to_json_line(&self, timing: bool) -> String {
        let mut r = self.clone();
        if !timing {
            r.wall_time_us = 0;
        }
        serde_json::to_string(&r).expect("record serialization cannot fail")
    }

    pub fn csv_header() -> &'static str {
        "trial_index,n,seed,k,m,weak,interlacing,strong,min_parity,max_parity,margin_min,margin_max,conjecture_violation,wall_time_us"
    }

    pub fn to_csv_row(&self) -> String {
        let opt_b = |v: Option<bool>| v.map_or(String::new(), |b| b.to_string());
        let opt_f = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:e}"));
        let opt_u = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
        let parity = |p: Parity| match p {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "mixed",
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.trial_index,
            self.spec.n,
            self.spec.seed,
            opt_u(self.spec.params.k),
            opt_u(self.spec.params.m),
            opt_b(self.verdicts.weak),
            opt_b(self.verdicts.interlacing),
            opt_b(self.verdicts.strong),
            parity(self.min_parity),
            parity(self.max_parity),
            opt_f(self.margin_min),
            opt_f(self.margin_max),
            opt_b(self.conjecture_violation),
            self.wall_time_us
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationCounts {
    pub weak: usize,
    pub interlacing: usize,
    pub strong: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub schema_version: u32,
    pub config: SearchConfig,
    pub trials: usize,
    pub violations: ViolationCounts,
    /// Trial indices with at least one confirmed violation.
    pub violating_trials: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjecture_violations: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Sorted by `trial_index`.
    pub records: Vec<TrialRecord>,
    pub summary: SearchSummary,
}

/// RNG for trial `index`: stream `index` of the ChaCha8 generator seeded by `seed`.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Generator spec for trial `index`.
pub fn trial_spec(config: &SearchConfig, index: usize) -> GeneratorSpec {
    let mut rng = trial_rng(config.seed, index);
    let n = rng.gen_range(config.n_range.0..=config.n_range.1);
    let gen_seed: u64 = rng.gen();
    if config.conjecture_mode {
        return GeneratorSpec::new(Family::PosDef, n, gen_seed);
    }
    let class = config.symmetry_class;
    let top = max_rank(n, class);
    let step = if class == SymmetryClass::Skew { 2 } else { 1 };
    let draw = |rng: &mut ChaCha8Rng, (lo, hi): (usize, usize)| {
        let hi = hi.min(top).max(lo);
        lo + step * rng.gen_range(0..=(hi - lo) / step)
    };
    let k = draw(&mut rng, config.rank_range);
    let m = draw(&mut rng, config.b_rank_range.unwrap_or(config.rank_range));
    GeneratorSpec::new(Family::RankK, n, gen_seed).with_params(Params {
        k: Some(k),
        m: Some(m),
        class: Some(class),
        ..Params::default()
    })
}

fn evaluate(split: &SpectrumSplit, p: Property, tol: f64) -> bool {
    match p {
        Property::Weak => check_weak(split, tol).holds,
        Property::Interlacing => check_interlacing(split, tol).holds,
        Property::Strong => check_strong(split, tol).holds,
    }
}

fn min_is_odd(split: &SpectrumSplit, tol: f64) -> bool {
    split.min_parity(tol) == Parity::Odd
}

/// Runs one trial from its spec. A failing property is recomputed with a
/// tenfold tighter eigensolver and interlacing tolerance and recorded as a
/// violation only if it fails again.
pub fn run_spec(config: &SearchConfig, index: usize, spec: GeneratorSpec) -> Result<TrialRecord> {
    let start = Instant::now();
    let pair = generate(&spec)?;
    let split = spectrum_split_with(&pair.a, &pair.b, DEFAULT_EIGEN_TOL, DEFAULT_PARITY_TOL)?;
    let tol = config.tol * split.c_norm();
    let mut strict: Option<SpectrumSplit> = None;
    let mut strict_split = || -> Result<SpectrumSplit> {
        if strict.is_none() {
            strict = Some(spectrum_split_with(&pair.a, &pair.b, DEFAULT_EIGEN_TOL / 10.0, DEFAULT_PARITY_TOL)?);
        }
        Ok(strict.clone().expect("just set"))
    };

    let mut verdicts = Verdicts::default();
    for &p in &config.properties {
        let mut holds = evaluate(&split, p, tol);
        if !holds {
            holds = evaluate(&strict_split()?, p, tol / 10.0);
        }
        verdicts.set(p, holds);
    }
    let conjecture_violation = if config.conjecture_mode {
        Some(min_is_odd(&split, tol) && min_is_odd(&strict_split()?, tol / 10.0))
    } else {
        None
    };
    let margin_min = split.min_odd().zip(split.min_even()).map(|(o, e)| o - e);
    let margin_max = split.max_even().zip(split.max_odd()).map(|(e, o)| e - o);
    Ok(TrialRecord {
        trial_index: index,
        spec,
        verdicts,
        min_parity: split.min_parity(tol),
        max_parity: split.max_parity(tol),
        margin_min,
        margin_max,
        conjecture_violation,
        wall_time_us: start.elapsed().as_micros() as u64,
    })
}

pub fn run_trial(config: &SearchConfig, index: usize) -> Result<TrialRecord> {
    run_spec(config, index, trial_spec(config, index))
}

/// Recomputes a record from its echoed spec.
pub fn replay(config: &SearchConfig, record: &TrialRecord) -> Result<TrialRecord> {
    run_spec(config, record.trial_index, record.spec.clone())
}

pub fn summarize(config: &SearchConfig, records: &[TrialRecord]) -> SearchSummary {
    let mut violations = ViolationCounts::default();
    let mut violating_trials = Vec::new();
    for r in records {
        let mut any = false;
        for (p, count) in [
            (Property::Weak, &mut violations.weak),
            (Property::Interlacing, &mut violations.interlacing),
            (Property::Strong, &mut violations.strong),
        ] {
            if r.verdicts.get(p) == Some(false) {
                *count += 1;
                any = true;
            }
        }
        if any {
            violating_trials.push(r.trial_index);
        }
    }
    let conjecture_violations = config
        .conjecture_mode
        .then(|| records.iter().filter(|r| r.conjecture_violation == Some(true)).count());
    SearchSummary {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        trials: records.len(),
        violations,
        violating_trials,
        conjecture_violations,
    }
}

pub fn run_search(config: &SearchConfig) -> Result<SearchOutcome> {
    config.validate()?;
    let work = || -> Result<Vec<TrialRecord>> {
        (0..config.trials).into_par_iter().map(|i| run_trial(config, i)).collect()
    };
    let mut records = match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    records.sort_by_key(|r| r.trial_index);
    let summary = summarize(config, &records);
    Ok(SearchOutcome { records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SearchConfig {
        SearchConfig {
            n_range: (3, 4),
            rank_range: (1, 3),
            trials: 24,
            seed: 5,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn validation() {
        assert!(small_config().validate().is_ok());
        let mut c = small_config();
        c.trials = 0;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = small_config();
        c.n_range = (5, 4);
        assert!(c.validate().is_err());
        let mut c = small_config();
        c.symmetry_class = SymmetryClass::Skew;
        c.rank_range = (2, 3);
        assert!(c.validate().is_err());
        c.rank_range = (2, 4);
        assert!(c.validate().is_ok());
        let mut c = small_config();
        c.rank_range = (5, 5);
        assert!(c.validate().is_err());
    }

    #[test]
    fn trial_specs_respect_ranges() {
        let c = small_config();
        for i in 0..50 {
            let s = trial_spec(&c, i);
            assert!((3..=4).contains(&s.n));
            let k = s.params.k.unwrap();
            assert!((1..=3).contains(&k) && k <= s.n);
            assert!((1..=3).contains(&s.params.m.unwrap()) && s.params.m.unwrap() <= s.n);
        }
        let mut wide = small_config();
        wide.b_rank_range = Some((1, 9));
        for i in 0..50 {
            assert!(trial_spec(&wide, i).params.m.unwrap() <= trial_spec(&wide, i).n);
        }
        let mut skew = small_config();
        skew.symmetry_class = SymmetryClass::Skew;
        skew.n_range = (4, 6);
        skew.rank_range = (2, 4);
        for i in 0..50 {
            let s = trial_spec(&skew, i);
            assert_eq!(s.params.k.unwrap() % 2, 0);
            assert_eq!(s.params.m.unwrap() % 2, 0);
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let mut c = small_config();
        c.jobs = Some(1);
        let one = run_search(&c).unwrap();
        c.jobs = Some(4);
        let four = run_search(&c).unwrap();
        let lines = |o: &SearchOutcome| o.records.iter().map(|r| r.to_json_line(false)).collect::<Vec<_>>();
        assert_eq!(lines(&one), lines(&four));
        assert_eq!(one.summary.violations, four.summary.violations);
    }

    #[test]
    fn records_replay() {
        let c = small_config();
        let out = run_search(&c).unwrap();
        for r in &out.records {
            let again = replay(&c, r).unwrap();
            assert_eq!(again.verdicts, r.verdicts);
            assert_eq!(again.min_parity, r.min_parity);
        }
    }

    #[test]
    fn small_rank_has_no_interlacing_violations() {
        let c = SearchConfig {
            n_range: (3, 6),
            rank_range: (1, 2),
            trials: 40,
            seed: 17,
            properties: vec![Property::Interlacing],
            ..SearchConfig::default()
        };
        assert_eq!(run_search(&c).unwrap().summary.violations.interlacing, 0);
    }

    #[test]
    fn conjecture_mode_records_flag() {
        let c = SearchConfig {
            n_range: (3, 4),
            trials: 10,
            conjecture_mode: true,
            properties: vec![Property::Weak],
            ..SearchConfig::default()
        };
        let out = run_search(&c).unwrap();
        assert!(out.records.iter().all(|r| r.spec.family == Family::PosDef));
        assert!(out.summary.conjecture_violations.is_some());
    }

    #[test]
    fn summary_json_has_schema_version() {
        let out = run_search(&small_config()).unwrap();
        let v = serde_json::to_value(&out.summary).unwrap();
        assert_eq!(v["schema_version"], 1);
        let line = out.records[0].to_json_line(false);
        let back: TrialRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back.wall_time_us, 0);
        assert_eq!(back.spec, out.records[0].spec);
    }
}
