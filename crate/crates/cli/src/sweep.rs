//! Parameter sweeps over lens spaces, driven by a flat TOML manifest.
//!
//! ```toml
//! p_min = 1
//! p_max = 30
//! n_values = [2]
//! weight_mode = "exhaustive"   # or "random" with seed and count
//! checks = ["determinant", "periodicity"]
//! ```

use std::fmt;
use std::path::PathBuf;

use lensreeb::chen_ruan::cr_degree;
use lensreeb::{LensSpace, Rational, ToricModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Determinant,
    BasisIdentity,
    Kernel,
    Periodicity,
    Bezout,
    CrBounds,
    Sandwich,
    Sphere,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Determinant,
        Suite::BasisIdentity,
        Suite::Kernel,
        Suite::Periodicity,
        Suite::Bezout,
        Suite::CrBounds,
        Suite::Sandwich,
        Suite::Sphere,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        write!(f, "{}", s.as_str().expect("string"))
    }
}

fn all_suites() -> Vec<Suite> {
    Suite::ALL.to_vec()
}

fn default_max_iter() -> u64 {
    100
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub p_min: u64,
    pub p_max: u64,
    pub n_values: Vec<usize>,
    pub weight_mode: WeightMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default = "all_suites")]
    pub checks: Vec<Suite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default = "default_max_iter")]
    pub max_iter: u64,
    #[serde(default)]
    pub fail_fast: bool,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<SweepConfig, CliError> {
        let config: SweepConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: &str| Err(CliError::Config(msg.to_string()));
        if self.p_min == 0 {
            return bad("p_min must be at least 1");
        }
        if self.p_min > self.p_max {
            return bad("p_min must not exceed p_max");
        }
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            return bad("n_values must be a non-empty list of positive integers");
        }
        if self.checks.is_empty() {
            return bad("checks must name at least one suite");
        }
        if self.weight_mode == WeightMode::Random {
            if self.seed.is_none() {
                return bad("weight_mode = \"random\" requires a seed");
            }
            if self.count.is_none() {
                return bad("weight_mode = \"random\" requires a count");
            }
        }
        Ok(())
    }
}

fn units(p: u64) -> Vec<i64> {
    if p == 1 {
        return vec![1];
    }
    (1..p as i64).filter(|&w| gcd(w as u64, p) == 1).collect()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Parameter points `(p, weights)`, sorted.
pub fn points(config: &SweepConfig) -> Vec<(u64, Vec<i64>)> {
    let mut out = Vec::new();
    match config.weight_mode {
        WeightMode::Exhaustive => {
            for p in config.p_min..=config.p_max {
                let u = units(p);
                for &n in &config.n_values {
                    let mut idx = vec![0usize; n + 1];
                    loop {
                        out.push((p, idx.iter().map(|&i| u[i]).collect()));
                        // odometer increment
                        let mut pos = 0;
                        while pos <= n && idx[pos] + 1 == u.len() {
                            idx[pos] = 0;
                            pos += 1;
                        }
                        if pos > n {
                            break;
                        }
                        idx[pos] += 1;
                    }
                }
            }
        }
        WeightMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.expect("validated"));
            for _ in 0..config.count.expect("validated") {
                let p = rng.gen_range(config.p_min..=config.p_max);
                let n = config.n_values[rng.gen_range(0..config.n_values.len())];
                let u = units(p);
                let w = (0..=n).map(|_| u[rng.gen_range(0..u.len())]).collect();
                out.push((p, w));
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Outcome {
    Pass,
    Fail(String),
    Skip,
}

impl Outcome {
    fn code(&self) -> char {
        match self {
            Outcome::Pass => 'P',
            Outcome::Fail(_) => 'F',
            Outcome::Skip => 'S',
        }
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(msg())
    }
}

fn from_result<T, E: fmt::Display>(r: Result<T, E>) -> Outcome {
    match r {
        Ok(_) => Outcome::Pass,
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn run_suite(suite: Suite, space: &LensSpace, model: &Result<ToricModel, String>, max_iter: u64) -> Outcome {
    let p = space.p();
    let n = space.n() as u64;
    if suite == Suite::CrBounds {
        let top = Rational::from(2 * n + 2);
        let degrees: Vec<Rational> = space.classes().map(|k| cr_degree(space, k)).collect();
        if !degrees[0].is_zero() {
            return Outcome::Fail(format!("d_0 = {}", degrees[0]));
        }
        return match degrees.iter().skip(1).find(|d| !d.is_positive() || **d >= top) {
            Some(d) => Outcome::Fail(format!("degree {d} outside (0, {top})")),
            None => Outcome::Pass,
        };
    }
    if suite == Suite::Sphere && p != 1 {
        return Outcome::Skip;
    }
    let model = match model {
        Ok(m) => m,
        Err(e) => return Outcome::Fail(e.clone()),
    };
    match suite {
        Suite::Determinant => from_result(model.verify_determinant()),
        Suite::BasisIdentity => from_result(model.verify_basis_identity()),
        Suite::Kernel => from_result(model.verify_kernel_generator()),
        Suite::Periodicity => from_result(model.verify_periodicity(max_iter.max(p + 1))),
        Suite::Bezout => {
            let reference: Vec<Rational> = (1..=max_iter).map(|nn| model.cz_index(nn)).collect();
            for (c, d) in model.bezout_pairs(5) {
                let other = match model.with_bezout(c.clone(), d.clone()) {
                    Ok(o) => o,
                    Err(e) => return Outcome::Fail(e.to_string()),
                };
                if let Some(nn) = (1..=max_iter).find(|&nn| other.cz_index(nn) != reference[nn as usize - 1]) {
                    return Outcome::Fail(format!("(c, d) = ({c}, {d}) changes mu at N = {nn}"));
                }
            }
            Outcome::Pass
        }
        Suite::Sandwich => {
            let delta = model.mean_index();
            let bound = Rational::from(n);
            let neg = -bound.clone();
            for nn in 1..=max_iter {
                let gap = model.cz_index(nn) - Rational::from(nn) * &delta;
                if gap <= neg || gap > bound {
                    return Outcome::Fail(format!("mu - N Delta = {gap} at N = {nn}"));
                }
            }
            Outcome::Pass
        }
        Suite::Sphere => {
            let bad = (1..=max_iter).find(|&nn| model.cz_index(nn) != Rational::from(n + 2 * nn));
            check(bad.is_none(), || format!("mu(gamma^{}) != n + 2N", bad.unwrap()))
        }
        Suite::CrBounds => unreachable!("handled above"),
    }
}

fn evaluate(config: &SweepConfig, p: u64, weights: &[i64]) -> Vec<Outcome> {
    let space = match LensSpace::new(p, weights.to_vec()) {
        Ok(s) => s,
        Err(e) => return config.checks.iter().map(|_| Outcome::Fail(e.to_string())).collect(),
    };
    let model = ToricModel::build(&space.normalize().0).map_err(|e| e.to_string());
    config
        .checks
        .iter()
        .map(|&suite| run_suite(suite, &space, &model, config.max_iter))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub p: u64,
    pub weights: Vec<i64>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    pub first_counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub points: usize,
    pub evaluated: usize,
    pub failures: u64,
    pub aborted: bool,
    pub suites: Vec<SuiteReport>,
    /// SHA-256 over the per-point outcome codes, in point order.
    pub digest: String,
}

pub fn sweep(config: &SweepConfig) -> SweepReport {
    let pts = points(config);
    let results: Vec<Vec<Outcome>> = if config.fail_fast {
        let mut out = Vec::new();
        for (p, w) in &pts {
            let r = evaluate(config, *p, w);
            let failed = r.iter().any(|o| matches!(o, Outcome::Fail(_)));
            out.push(r);
            if failed {
                break;
            }
        }
        out
    } else {
        pts.par_iter().map(|(p, w)| evaluate(config, *p, w)).collect()
    };

    let mut suites: Vec<SuiteReport> = config
        .checks
        .iter()
        .map(|&suite| SuiteReport {
            suite,
            checked: 0,
            passed: 0,
            failed: 0,
            skipped: 0,
            first_counterexample: None,
        })
        .collect();
    let mut hasher = Sha256::new();
    for ((p, w), outcomes) in pts.iter().zip(&results) {
        let codes: String = outcomes.iter().map(Outcome::code).collect();
        hasher.update(format!("{p}:{w:?}:{codes}\n").as_bytes());
        for (report, outcome) in suites.iter_mut().zip(outcomes) {
            match outcome {
                Outcome::Pass => {
                    report.checked += 1;
                    report.passed += 1;
                }
                Outcome::Fail(msg) => {
                    report.checked += 1;
                    report.failed += 1;
                    report.first_counterexample.get_or_insert_with(|| Counterexample {
                        p: *p,
                        weights: w.clone(),
                        message: msg.clone(),
                    });
                }
                Outcome::Skip => report.skipped += 1,
            }
        }
    }
    let digest = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();
    SweepReport {
        config: config.clone(),
        points: pts.len(),
        evaluated: results.len(),
        failures: suites.iter().map(|s| s.failed).sum(),
        aborted: results.len() < pts.len(),
        suites,
        digest,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> SweepConfig {
        SweepConfig::parse(text).unwrap()
    }

    #[test]
    fn parses_minimal_config() {
        let c = config("p_min = 1\np_max = 5\nn_values = [2]\nweight_mode = \"exhaustive\"\n");
        assert_eq!(c.checks, Suite::ALL.to_vec());
        assert_eq!(c.max_iter, 100);
        assert!(!c.fail_fast);
    }

    #[test]
    fn rejects_bad_configs() {
        for text in [
            "p_min = 1\np_max = 5\nn_values = [2]\nweight_mode = \"random\"\ncount = 3\n",
            "p_min = 1\np_max = 5\nn_values = [2]\nweight_mode = \"random\"\nseed = 3\n",
            "p_min = 0\np_max = 5\nn_values = [2]\nweight_mode = \"exhaustive\"\n",
            "p_min = 6\np_max = 5\nn_values = [2]\nweight_mode = \"exhaustive\"\n",
            "p_min = 1\np_max = 5\nn_values = []\nweight_mode = \"exhaustive\"\n",
            "p_min = 1\np_max = 5\nn_values = [2]\nweight_mode = \"exhaustive\"\nchecks = [\"nope\"]\n",
            "p_min = 1\np_max = 5\nn_values = [2]\nweight_mode = \"exhaustive\"\nextra = 1\n",
        ] {
            assert!(matches!(SweepConfig::parse(text), Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn exhaustive_points_count() {
        let c = config("p_min = 1\np_max = 7\nn_values = [1, 2]\nweight_mode = \"exhaustive\"\n");
        let expected: usize = (1..=7u64).map(|p| units(p).len().pow(2) + units(p).len().pow(3)).sum();
        let pts = points(&c);
        assert_eq!(pts.len(), expected);
        assert!(pts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn random_points_are_seeded() {
        let text = "p_min = 2\np_max = 60\nn_values = [2, 3]\nweight_mode = \"random\"\nseed = 42\ncount = 50\n";
        assert_eq!(points(&config(text)), points(&config(text)));
        let other = text.replace("seed = 42", "seed = 43");
        assert_ne!(points(&config(text)), points(&config(&other)));
    }

    #[test]
    fn small_sweep_passes_and_covers_sphere() {
        let c = config("p_min = 1\np_max = 6\nn_values = [2]\nweight_mode = \"exhaustive\"\nmax_iter = 30\n");
        let r = sweep(&c);
        assert_eq!(r.failures, 0);
        let sphere = r.suites.iter().find(|s| s.suite == Suite::Sphere).unwrap();
        assert_eq!(sphere.checked, 1);
        assert_eq!(sphere.skipped as usize, r.points - 1);
        assert_eq!(r.digest.len(), 64);
    }
}
