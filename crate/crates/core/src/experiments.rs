//! Seeded randomized studies.
//!
//! Trial `k` of a study with seed `s` draws from ChaCha20 seeded with `s` on stream `k`, so a
//! report depends only on its configuration, whether trials run serially or in parallel.

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::MoebiusMap;
use crate::numkernel::{CMatrix, CVector, Cx};
use crate::phases::{cr_equivalent, PhaseSet};
use crate::prcore::{decide_theta_pr, DecisionReport, EngineOptions, VectorSystem, Witness};

/// Recorded in every report.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha), seed_from_u64(seed), stream = trial index";

const MAX_EXAMPLE_WITNESSES: usize = 3;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `(X + iY) / sqrt(2)` with `X, Y` independent standard normals.
pub fn complex_gaussian<R: Rng>(rng: &mut R) -> Cx {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Cx::new(re, im) / 2f64.sqrt()
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, d: usize) -> CVector {
    CVector::new((0..d).map(|_| complex_gaussian(rng)).collect())
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// How study systems are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemFamily {
    /// I.i.d. standard complex Gaussian entries.
    Gaussian,
    /// Columns mixing a shared hyperplane, scaled repeats, zeros and Gaussians, so that
    /// both outcomes of the decision occur with positive probability.
    Structured,
}

pub fn draw_system<R: Rng>(rng: &mut R, family: SystemFamily, d: usize, m: usize) -> Result<VectorSystem> {
    if d == 0 || m == 0 {
        return Err(Error::invalid("d and m must be at least 1"));
    }
    let cols = match family {
        SystemFamily::Gaussian => (0..m).map(|_| gaussian_vector(rng, d)).collect(),
        SystemFamily::Structured => {
            let plane = gaussian_matrix(rng, d, d.saturating_sub(1).max(1));
            let mut cols: Vec<CVector> = Vec::with_capacity(m);
            for _ in 0..m {
                let u: f64 = rng.random();
                let col = if u < 0.4 && d > 1 {
                    plane.mul_vec(&gaussian_vector(rng, plane.cols()))?
                } else if u < 0.6 && !cols.is_empty() {
                    let k = rng.random_range(0..cols.len());
                    cols[k].scale(complex_gaussian(rng))
                } else if u < 0.65 {
                    CVector::zeros(d)
                } else {
                    gaussian_vector(rng, d)
                };
                cols.push(col);
            }
            cols
        }
    };
    VectorSystem::from_columns(d, cols)
}

/// An i.i.d. complex Gaussian `d x m` system, fixed by `seed`.
pub fn random_system(d: usize, m: usize, seed: u64) -> Result<VectorSystem> {
    draw_system(&mut trial_rng(seed, 0), SystemFamily::Gaussian, d, m)
}

pub fn random_u11_map_with<R: Rng>(rng: &mut R) -> MoebiusMap {
    let phase = rng.random_range(-PI..PI);
    let b = complex_gaussian(rng);
    MoebiusMap::u11(phase, b).expect("U(1,1) matrices are invertible")
}

/// `(a, b; conj b, conj a)` with `|a|^2 - |b|^2 = 1`, fixed by `seed`.
pub fn random_u11_map(seed: u64) -> MoebiusMap {
    random_u11_map_with(&mut trial_rng(seed, 0))
}

/// The two sizes below the minimal one at which random systems must fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "2d-2")]
    TwoDMinusTwo,
    #[serde(rename = "2d-1")]
    TwoDMinusOne,
}

impl Regime {
    pub fn m(self, d: usize) -> usize {
        match self {
            Regime::TwoDMinusTwo => 2 * d - 2,
            Regime::TwoDMinusOne => 2 * d - 1,
        }
    }

    pub fn min_phases(self) -> usize {
        match self {
            Regime::TwoDMinusTwo => 2,
            Regime::TwoDMinusOne => 3,
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2d-2" => Ok(Regime::TwoDMinusTwo),
            "2d-1" => Ok(Regime::TwoDMinusOne),
            other => Err(Error::invalid(format!("unknown regime {other:?}, expected 2d-2 or 2d-1"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub study: String,
    pub d: usize,
    pub m: usize,
    pub phases: PhaseSet,
    pub trials: usize,
    pub seed: u64,
    pub family: SystemFamily,
    pub engine: EngineOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub does_pr: bool,
    pub matched: bool,
    pub assignments_checked: u64,
}

/// `pass_count` counts trials that met the study's expectation and `fail_count` those that
/// did not, so `pass_count + fail_count = trials`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub rng: String,
    pub expectation: String,
    pub pass_count: usize,
    pub fail_count: usize,
    pub does_pr_count: usize,
    pub assignments_checked: u64,
    pub example_witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cr_equivalent_all: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<Vec<TrialOutcome>>,
    #[serde(skip)]
    pub elapsed: f64,
}

impl ExperimentReport {
    pub fn all_passed(&self) -> bool {
        self.fail_count == 0
    }
}

struct Trial {
    outcome: TrialOutcome,
    witness: Option<Witness>,
    cr_equivalent: Option<bool>,
}

fn run_trials<F>(config: &ExperimentConfig, f: F) -> Result<Vec<Trial>>
where
    F: Fn(usize, &mut ChaCha20Rng, &EngineOptions) -> Result<Trial> + Sync,
{
    let inner = EngineOptions { threads: 1, ..config.engine };
    let one = |k: usize| f(k, &mut trial_rng(config.seed, k as u64), &inner);
    if config.engine.threads == 1 {
        (0..config.trials).map(one).collect()
    } else {
        (0..config.trials).into_par_iter().map(one).collect()
    }
}

fn assemble(config: ExperimentConfig, expectation: &str, trials: Vec<Trial>, verbose: bool, start: Instant) -> ExperimentReport {
    let pass_count = trials.iter().filter(|t| t.outcome.matched).count();
    let cr = trials.iter().map(|t| t.cr_equivalent).collect::<Option<Vec<bool>>>();
    ExperimentReport {
        rng: RNG_ALGORITHM.to_string(),
        expectation: expectation.to_string(),
        pass_count,
        fail_count: trials.len() - pass_count,
        does_pr_count: trials.iter().filter(|t| t.outcome.does_pr).count(),
        assignments_checked: trials.iter().map(|t| t.outcome.assignments_checked).sum(),
        example_witnesses: trials.iter().filter_map(|t| t.witness.clone()).take(MAX_EXAMPLE_WITNESSES).collect(),
        cr_equivalent_all: cr.filter(|v| !v.is_empty()).map(|v| v.iter().all(|&b| b)),
        outcomes: verbose.then(|| trials.iter().map(|t| t.outcome.clone()).collect()),
        config,
        elapsed: start.elapsed().as_secs_f64(),
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::invalid("at least one trial is required"));
    }
    Ok(())
}

/// Decides `trials` random systems of size `d x m` and compares each with `expect_pr`.
pub fn run_fixed_size_study(config: ExperimentConfig, expect_pr: bool, verbose: bool) -> Result<ExperimentReport> {
    check_trials(config.trials)?;
    let start = Instant::now();
    let trials = run_trials(&config, |k, rng, opts| {
        let g = draw_system(rng, config.family, config.d, config.m)?;
        let r: DecisionReport = decide_theta_pr(&g, &config.phases, opts)?;
        Ok(Trial {
            outcome: TrialOutcome {
                trial: k,
                does_pr: r.does_pr,
                matched: r.does_pr == expect_pr,
                assignments_checked: r.assignments_checked,
            },
            witness: r.witness,
            cr_equivalent: None,
        })
    })?;
    let expectation = if expect_pr { "does Θ-PR" } else { "fails Θ-PR" };
    Ok(assemble(config, expectation, trials, verbose, start))
}

fn config(study: &str, d: usize, m: usize, t: &PhaseSet, trials: usize, seed: u64, opts: &EngineOptions) -> ExperimentConfig {
    ExperimentConfig {
        study: study.to_string(),
        d,
        m,
        phases: t.clone(),
        trials,
        seed,
        family: SystemFamily::Gaussian,
        engine: *opts,
    }
}

/// Gaussian systems inside a failure regime; every trial is expected to fail.
pub fn run_threshold_study(
    d: usize,
    regime: Regime,
    t: &PhaseSet,
    trials: usize,
    seed: u64,
    opts: &EngineOptions,
) -> Result<ExperimentReport> {
    let m = regime.m(d.max(1));
    if d == 0 || m == 0 {
        return Err(Error::invalid("the regime leaves no vectors for this d"));
    }
    if t.len() < regime.min_phases() {
        return Err(Error::invalid(format!(
            "regime needs |Θ| >= {}, got {}",
            regime.min_phases(),
            t.len()
        )));
    }
    run_fixed_size_study(config("threshold", d, m, t, trials, seed, opts), false, false)
}

/// Gaussian `d x m` systems expected to do Θ-PR, for sizes outside the failure regimes.
pub fn run_control_study(d: usize, m: usize, t: &PhaseSet, trials: usize, seed: u64, opts: &EngineOptions) -> Result<ExperimentReport> {
    run_fixed_size_study(config("control", d, m, t, trials, seed, opts), true, false)
}

/// Gaussian systems with `m >= 2d`; every trial is expected to do Θ-PR.
pub fn run_genericity_study(d: usize, m: usize, t: &PhaseSet, trials: usize, seed: u64, opts: &EngineOptions) -> Result<ExperimentReport> {
    if m < 2 * d {
        return Err(Error::invalid(format!("genericity needs m >= 2d = {}, got {m}", 2 * d)));
    }
    run_fixed_size_study(config("genericity", d, m, t, trials, seed, opts), true, false)
}

/// `d` for one phase, `2d - 1` for two and `2d` for three or more.
pub fn theoretical_minimal_size(d: usize, phases: usize) -> usize {
    match phases {
        0 | 1 => d,
        2 => 2 * d - 1,
        _ => 2 * d,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalityRow {
    pub m: usize,
    pub trials: usize,
    pub does_pr_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub d: usize,
    pub phases: PhaseSet,
    pub trials: usize,
    pub seed: u64,
    pub rng: String,
    /// First `m` at which some random system does Θ-PR, if any up to `2d + 1`.
    pub empirical_n: Option<usize>,
    pub theoretical_n: usize,
    /// Every trial at `empirical_n - 1` failed.
    pub confirmed_below: bool,
    pub rows: Vec<MinimalityRow>,
    #[serde(skip)]
    pub elapsed: f64,
}

impl MinimalityReport {
    pub fn matches_theory(&self) -> bool {
        self.empirical_n == Some(self.theoretical_n) && self.confirmed_below
    }
}

/// Scans `m = 1, ..., 2d + 1` with Gaussian systems and records the first size at which
/// some trial does Θ-PR.
pub fn run_minimality_study(d: usize, t: &PhaseSet, trials: usize, seed: u64, opts: &EngineOptions) -> Result<MinimalityReport> {
    check_trials(trials)?;
    if d == 0 {
        return Err(Error::invalid("d must be at least 1"));
    }
    let start = Instant::now();
    let mut rows: Vec<MinimalityRow> = Vec::new();
    let mut empirical_n = None;
    for m in 1..=2 * d + 1 {
        let cfg = ExperimentConfig { seed: seed.wrapping_add(m as u64), ..config("minimality", d, m, t, trials, seed, opts) };
        let r = run_fixed_size_study(cfg, true, false)?;
        rows.push(MinimalityRow { m, trials, does_pr_count: r.does_pr_count });
        if r.does_pr_count > 0 {
            empirical_n = Some(m);
            break;
        }
    }
    let confirmed_below = match empirical_n {
        Some(1) => true,
        Some(n) => rows.iter().find(|r| r.m == n - 1).is_some_and(|r| r.does_pr_count == 0),
        None => false,
    };
    Ok(MinimalityReport {
        d,
        phases: t.clone(),
        trials,
        seed,
        rng: RNG_ALGORITHM.to_string(),
        empirical_n,
        theoretical_n: theoretical_minimal_size(d, t.len()),
        confirmed_below,
        rows,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// For each trial compares the decision for `Θ` and for `M(Θ)` with a fresh `U(1,1)` map `M`.
/// Systems come from `family`; a trial passes when both decisions agree. For four phases the
/// report also records whether every `M(Θ)` shares a cross ratio with `Θ`.
pub fn run_moebius_invariance_study(
    d: usize,
    m: usize,
    t: &PhaseSet,
    trials: usize,
    seed: u64,
    family: SystemFamily,
    opts: &EngineOptions,
) -> Result<ExperimentReport> {
    check_trials(trials)?;
    let cfg = ExperimentConfig { family, ..config("invariance", d, m, t, trials, seed, opts) };
    let start = Instant::now();
    let trials_out = run_trials(&cfg, |k, rng, opts| {
        let g = draw_system(rng, family, d, m)?;
        let map = random_u11_map_with(rng);
        let t2 = map.map_phase_set(t)?;
        let a = decide_theta_pr(&g, t, opts)?;
        let b = decide_theta_pr(&g, &t2, opts)?;
        let cr = if t.len() == 4 { Some(cr_equivalent(t, &t2)?) } else { None };
        Ok(Trial {
            outcome: TrialOutcome {
                trial: k,
                does_pr: a.does_pr,
                matched: a.does_pr == b.does_pr,
                assignments_checked: a.assignments_checked + b.assignments_checked,
            },
            witness: a.witness,
            cr_equivalent: cr,
        })
    })?;
    Ok(assemble(cfg, "decision for Θ equals decision for M(Θ)", trials_out, false, start))
}

/// One CSV row per report: `study,d,m,phases,trials,seed,pass,fail,does_pr`.
pub fn write_summary_csv<W: Write>(reports: &[ExperimentReport], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "study,d,m,phases,trials,seed,pass,fail,does_pr")?;
    for r in reports {
        let c = &r.config;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            c.study,
            c.d,
            c.m,
            c.phases.len(),
            c.trials,
            c.seed,
            r.pass_count,
            r.fail_count,
            r.does_pr_count
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prcore::{is_complete, is_full_spark};
    use crate::Tolerance;

    #[test]
    fn random_systems_are_reproducible() {
        assert_eq!(random_system(3, 5, 11).unwrap(), random_system(3, 5, 11).unwrap());
        assert_ne!(random_system(3, 5, 11).unwrap(), random_system(3, 5, 12).unwrap());
        let a = trial_rng(4, 0).random::<u64>();
        let b = trial_rng(4, 1).random::<u64>();
        assert_ne!(a, b);
    }

    #[test]
    fn random_systems_are_generic() {
        let tol = Tolerance::default();
        for seed in 0..100 {
            assert!(is_full_spark(&random_system(3, 6, seed).unwrap(), &tol).unwrap());
            assert!(!is_complete(&random_system(3, 2, seed).unwrap(), &tol).unwrap());
            assert!(is_complete(&random_system(4, 4, seed).unwrap(), &tol).unwrap());
        }
    }

    #[test]
    fn u11_maps() {
        for seed in 0..100 {
            assert!(random_u11_map(seed).is_circle_preserving());
        }
        let rot = MoebiusMap::u11(0.3, Cx::new(0.0, 0.0)).unwrap();
        let z = Cx::from_polar(1.0, 1.0);
        assert!((rot.apply(z).finite().unwrap() - Cx::from_polar(1.0, 1.6)).norm() < 1e-12);
        assert!(MoebiusMap::u11(0.0, Cx::new(0.0, 0.0)).unwrap().projectively_equal(&MoebiusMap::identity(), 1e-15));
    }

    #[test]
    fn regime_validation() {
        let two = PhaseSet::roots_of_unity(2).unwrap();
        let opts = EngineOptions::default();
        assert!(run_threshold_study(2, Regime::TwoDMinusOne, &two, 5, 0, &opts).is_err());
        assert!("2d".parse::<Regime>().is_err());
        assert!(run_genericity_study(2, 3, &two, 5, 0, &opts).is_err());
    }

    #[test]
    fn reports_are_deterministic_across_thread_counts() {
        let t = PhaseSet::roots_of_unity(3).unwrap();
        let serial = EngineOptions::default();
        let parallel = EngineOptions { threads: 4, ..serial };
        let a = run_threshold_study(2, Regime::TwoDMinusOne, &t, 20, 7, &serial).unwrap();
        let b = run_threshold_study(2, Regime::TwoDMinusOne, &t, 20, 7, &parallel).unwrap();
        let strip = |r: &ExperimentReport| {
            let mut v = serde_json::to_value(r).unwrap();
            v["config"]["engine"]["threads"] = 0.into();
            v.to_string()
        };
        assert_eq!(strip(&a), strip(&b));
        let again = run_threshold_study(2, Regime::TwoDMinusOne, &t, 20, 7, &serial).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&again).unwrap());
        assert_eq!(a.fail_count, 0);
    }

    #[test]
    fn summary_csv_has_header() {
        let t = PhaseSet::roots_of_unity(2).unwrap();
        let r = run_control_study(2, 3, &t, 4, 1, &EngineOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_summary_csv(&[r], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("study,d,m,phases,trials,seed,pass,fail,does_pr\ncontrol,2,3,2,4,1,4,0,4"));
    }
}
