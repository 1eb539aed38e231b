//! Check reports and the seeded trial runner shared by every law suite.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::env::Env;
use crate::error::{Error, Result};
use crate::hilbert::Tolerance;
use crate::random::{rng, trial_seed, Rng, RNG_NAME};

/// Outcome of one law or identity check.
///
/// `pass` holds iff `max_residual <= tolerance.atol + tolerance.rtol * scale`,
/// where `scale` is the largest per-trial scale seen.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub rng: String,
    pub max_residual: f64,
    pub tolerance: Tolerance,
    pub scale: f64,
    pub pass: bool,
    #[serde(serialize_with = "serialize_env")]
    pub counterexample: Option<Env>,
    pub wall_time_ms: u64,
}

fn serialize_env<S: serde::Serializer>(env: &Option<Env>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match env {
        Some(e) => e.to_json_value().serialize(s),
        None => s.serialize_none(),
    }
}

impl CheckReport {
    /// Fails with margin (residual above ten times the bound).
    pub fn fails_clearly(&self) -> bool {
        self.tolerance.clearly_rejects(self.max_residual, self.scale)
    }

    /// Key-sorted JSON value.
    pub fn to_json_value(&self) -> serde_json::Value {
        // serde_json's default map is ordered, so converting through Value sorts keys
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("value serializes")
    }

    /// JSON with `wall_time_ms` removed, for byte-level determinism checks.
    pub fn to_json_without_timing(&self) -> String {
        let mut v = self.to_json_value();
        if let Some(map) = v.as_object_mut() {
            map.remove("wall_time_ms");
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        format!(
            "{} {} dim={} trials={} seed={} max_residual={:.3e} bound={:.3e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.dim,
            self.trials,
            self.seed,
            self.max_residual,
            self.tolerance.bound(self.scale),
        )
    }
}

/// One sampled trial: residual between the two sides, the scale the residual
/// is measured against (max of the sides' norms) and the sampled inputs.
pub struct Sample {
    pub residual: f64,
    pub scale: f64,
    pub witness: Env,
}

impl Sample {
    pub fn new(residual: f64, scale: f64, witness: Env) -> Self {
        Sample {
            residual,
            scale,
            witness,
        }
    }
}

/// Common parameters of a randomized law check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckParams {
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub tol: Tolerance,
    /// Sample the repeated/distinguished argument normalized.
    pub normalized: bool,
}

impl CheckParams {
    pub fn new(dim: usize, trials: u64, seed: u64) -> Self {
        CheckParams {
            dim,
            trials,
            seed,
            tol: Tolerance::default(),
            normalized: false,
        }
    }

    pub fn with_tol(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    pub fn normalized(mut self, normalized: bool) -> Self {
        self.normalized = normalized;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument {
                detail: "trials must be at least 1".into(),
            });
        }
        if self.dim == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(())
    }
}

/// Runs `trial` once per seed `params.seed + i` for `i < params.trials` and
/// folds the outcomes by max. Trials run in parallel; the result does not
/// depend on scheduling. The counterexample is the lowest-index trial that
/// fails on its own scale.
pub fn run_trials<F>(name: &str, params: &CheckParams, trial: F) -> Result<CheckReport>
where
    F: Fn(&mut Rng) -> Result<Sample> + Sync,
{
    params.validate()?;
    let start = Instant::now();
    let tol = params.tol;
    let outcomes: Vec<(f64, f64, Option<Env>)> = (0..params.trials)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(trial_seed(params.seed, i));
            let s = trial(&mut r)?;
            let failing = !tol.accepts(s.residual, s.scale);
            Ok((s.residual, s.scale, failing.then_some(s.witness)))
        })
        .collect::<Result<_>>()?;

    let max_residual = outcomes.iter().map(|o| o.0).fold(0.0, f64::max);
    let scale = outcomes.iter().map(|o| o.1).fold(0.0, f64::max);
    let pass = tol.accepts(max_residual, scale) && outcomes.iter().all(|o| !o.0.is_nan());
    let counterexample = if pass {
        None
    } else {
        outcomes.into_iter().find_map(|o| o.2)
    };
    Ok(CheckReport {
        name: name.to_string(),
        dim: params.dim,
        trials: params.trials,
        seed: params.seed,
        rng: RNG_NAME.to_string(),
        max_residual,
        tolerance: tol,
        scale,
        pass,
        counterexample,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::uniform;

    #[test]
    fn counterexample_is_first_failing_trial() {
        let params = CheckParams::new(1, 50, 10);
        let report = run_trials("t", &params, |r| {
            let x = uniform(r);
            let env = Env::new(1)?.with_scalar("x", crate::hilbert::Complex::new(x, 0.0))?;
            Ok(Sample::new(if x > 0.5 { 1.0 } else { 0.0 }, 1.0, env))
        })
        .unwrap();
        assert!(!report.pass);
        assert_eq!(report.max_residual, 1.0);
        let witness = report.counterexample.unwrap();
        let expected = (0..50)
            .map(|i| uniform(&mut rng(10 + i)))
            .find(|&x| x > 0.5)
            .unwrap();
        assert_eq!(
            witness.lookup("x"),
            Some(crate::env::Binding::Scalar(crate::hilbert::Complex::new(expected, 0.0)))
        );
    }

    #[test]
    fn zero_trials_is_rejected() {
        let params = CheckParams::new(2, 0, 0);
        assert!(run_trials("t", &params, |_| unreachable!()).is_err());
    }

    #[test]
    fn json_is_key_sorted_and_timing_can_be_stripped() {
        let params = CheckParams::new(1, 3, 0);
        let report = run_trials("t", &params, |_| Ok(Sample::new(0.0, 1.0, Env::new(1)?))).unwrap();
        let text = report.to_json_string();
        let keys = ["counterexample", "dim", "max_residual", "name", "pass", "rng", "scale", "seed"];
        let positions: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        assert!(!report.to_json_without_timing().contains("wall_time_ms"));
    }
}
