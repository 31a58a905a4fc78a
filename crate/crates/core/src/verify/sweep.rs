//! Seeded sweeps of the verifiers over random formulas.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use super::identities::{verify, VerifyOptions};
use super::VerificationReport;
use crate::error::{Error, Result};
use crate::reduction::Variant;
use crate::rng::SweepRng;
use crate::sat::{random_formula, PartitionedFormula};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub seed: u64,
    pub trials: u64,
    pub k1: RangeInclusive<u32>,
    pub k2: RangeInclusive<u32>,
    pub k3: RangeInclusive<u32>,
    pub variants: Vec<Variant>,
    pub options: VerifyOptions,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let empty = |r: &RangeInclusive<u32>| r.is_empty();
        if empty(&self.k1) || empty(&self.k2) || empty(&self.k3) {
            return Err(Error::InvalidInput("sweep ranges must be nonempty".into()));
        }
        if *self.k1.start() < 2 || *self.k3.start() < 2 {
            return Err(Error::InvalidInput(
                "sweep ranges need k1 >= 2 and k3 >= 2".into(),
            ));
        }
        if self.variants.is_empty() {
            return Err(Error::InvalidInput("select at least one variant".into()));
        }
        Ok(())
    }
}

/// One formula and what every selected verifier said about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialResult {
    pub trial: u64,
    /// Seed handed to the formula generator.
    pub seed: u64,
    pub k: (u32, u32, u32),
    pub formula: Option<PartitionedFormula>,
    pub reports: Vec<VerificationReport>,
    /// Errors (budget refusals, impossible shapes) recorded per trial.
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SweepSummary {
    pub trials: u64,
    pub reports: u64,
    pub checks: u64,
    pub checks_passed: u64,
    pub mandatory_failures: u64,
    pub informational_mismatches: u64,
    pub errors: u64,
}

impl SweepSummary {
    pub fn all_mandatory_pass(&self) -> bool {
        self.mandatory_failures == 0 && self.errors == 0
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let fields = [
            ("trials", self.trials),
            ("reports", self.reports),
            ("checks", self.checks),
            ("checks_passed", self.checks_passed),
            ("mandatory_failures", self.mandatory_failures),
            ("informational_mismatches", self.informational_mismatches),
            ("errors", self.errors),
        ];
        for (k, v) in fields {
            writeln!(s, "{k}: {v}").unwrap();
        }
        writeln!(
            s,
            "verdict: {}",
            if self.all_mandatory_pass() {
                "pass"
            } else {
                "fail"
            }
        )
        .unwrap();
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOutcome {
    /// Ordered by trial index.
    pub trials: Vec<TrialResult>,
    pub summary: SweepSummary,
}

/// Trial parameters are drawn sequentially from one generator, so the plan
/// does not depend on scheduling; trials then run in parallel.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let mut rng = SweepRng::new(cfg.seed);
    let pick = |rng: &mut SweepRng, r: &RangeInclusive<u32>| {
        rng.in_range(*r.start() as u64, *r.end() as u64) as u32
    };
    let plan: Vec<(u64, u64, (u32, u32, u32))> = (0..cfg.trials)
        .map(|t| {
            let k = (
                pick(&mut rng, &cfg.k1),
                pick(&mut rng, &cfg.k2),
                pick(&mut rng, &cfg.k3),
            );
            (t, rng.next_u64(), k)
        })
        .collect();
    let trials: Vec<TrialResult> = plan
        .into_par_iter()
        .map(|(trial, seed, k)| run_trial(cfg, trial, seed, k))
        .collect();

    let mut summary = SweepSummary {
        trials: trials.len() as u64,
        ..Default::default()
    };
    for t in &trials {
        summary.errors += t.errors.len() as u64;
        for r in &t.reports {
            summary.reports += 1;
            for c in &r.checks {
                summary.checks += 1;
                match (c.pass, c.mandatory) {
                    (true, _) => summary.checks_passed += 1,
                    (false, true) => summary.mandatory_failures += 1,
                    (false, false) => summary.informational_mismatches += 1,
                }
            }
        }
    }
    Ok(SweepOutcome { trials, summary })
}

fn run_trial(cfg: &SweepConfig, trial: u64, seed: u64, k: (u32, u32, u32)) -> TrialResult {
    let mut result = TrialResult {
        trial,
        seed,
        k,
        formula: None,
        reports: Vec::new(),
        errors: Vec::new(),
    };
    let phi = match random_formula(seed, k.0, k.1, k.2) {
        Ok(phi) => phi,
        Err(e) => {
            result.errors.push(e.to_string());
            return result;
        }
    };
    for &variant in &cfg.variants {
        match verify(&phi, variant, &cfg.options) {
            Ok(r) => result.reports.push(r),
            Err(e) => result.errors.push(format!("{variant}: {e}")),
        }
    }
    result.formula = Some(phi);
    result
}
