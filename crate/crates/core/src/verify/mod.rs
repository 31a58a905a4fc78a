//! Exact checks of the count identities behind the reductions, and a seeded
//! sweep over random formulas.
//!
//! Every check compares two integers. Set-valued claims are phrased as
//! "number of violations equals 0" and list the offending elements.

mod carry;
mod identities;
mod sweep;

use std::time::Duration;

use num_bigint::BigUint;

use crate::reduction::Variant;
use crate::sat::PartitionedFormula;

pub use identities::{verify, verify_bounded, verify_gaps, verify_nonrep, VerifyOptions};
pub use sweep::{sweep, SweepConfig, SweepOutcome, SweepSummary, TrialResult};

/// Counterexample lists are truncated to this many elements.
pub const MAX_DETAIL: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub pass: bool,
    /// Counterexample integers; empty whenever `pass` holds.
    pub detail: Vec<BigUint>,
    /// Informational checks are reported but never fail a report.
    pub mandatory: bool,
}

impl IdentityCheck {
    /// Passes iff `lhs == rhs`; `detail` is kept only on failure.
    pub fn new(
        name: &str,
        lhs: impl Into<BigUint>,
        rhs: impl Into<BigUint>,
        detail: Vec<u64>,
    ) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let pass = lhs == rhs;
        IdentityCheck {
            name: name.to_string(),
            pass,
            detail: if pass {
                Vec::new()
            } else {
                detail
                    .into_iter()
                    .take(MAX_DETAIL)
                    .map(BigUint::from)
                    .collect()
            },
            lhs,
            rhs,
            mandatory: true,
        }
    }

    /// `|violations| = 0`, listing the violations.
    pub fn no_violations(name: &str, violations: Vec<u64>) -> Self {
        Self::new(name, violations.len() as u64, 0u64, violations)
    }

    pub fn informational(mut self) -> Self {
        self.mandatory = false;
        self
    }
}

/// Outcome of one verifier on one formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub variant: Variant,
    pub formula: PartitionedFormula,
    pub checks: Vec<IdentityCheck>,
    /// Named quantities worth printing next to the checks (|N(s₀)|, λ, ...).
    pub quantities: Vec<(String, BigUint)>,
    /// Gaps of the target generator set inside [λ, μ].
    pub interval_gaps: Vec<u64>,
    /// Wall time per phase. Kept out of serialized output so reports stay reproducible.
    pub timings: Vec<(String, Duration)>,
}

impl VerificationReport {
    pub fn all_mandatory_pass(&self) -> bool {
        self.checks.iter().filter(|c| c.mandatory).all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn quantity(&self, name: &str) -> Option<&BigUint> {
        self.quantities
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }
}

/// Elements of sorted `a` missing from sorted `b`.
pub(crate) fn sorted_difference(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            out.push(x);
        }
    }
    out
}

pub(crate) fn symmetric_difference(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = sorted_difference(a, b);
    out.extend(sorted_difference(b, a));
    out.sort_unstable();
    out
}

/// The four conditions of a strong relaxed subtractive reduction for witness
/// sets given as sorted slices: `W_F ⊆ W_B(t0)`, `W_B(t1) ⊆ W_B(t0)`,
/// `W_B(t1) ∩ W_F = ∅` and `|W_A| = |W_B(t0)| - |W_B(t1)| - |W_F|`.
pub fn check_relaxed_subtractive(
    w_a: u64,
    w_b0: &[u64],
    w_b1: &[u64],
    w_f: &[u64],
) -> Vec<IdentityCheck> {
    let f_outside = sorted_difference(w_f, w_b0);
    let t1_outside = sorted_difference(w_b1, w_b0);
    let overlap: Vec<u64> = sorted_difference(w_f, &sorted_difference(w_f, w_b1));
    let difference = w_b0.len() as i128 - w_b1.len() as i128 - w_f.len() as i128;
    let count = if difference < 0 {
        // Impossible once the inclusions hold; report it as a failure with the sizes.
        let mut c = IdentityCheck::new("count-identity", w_a, 0u64, vec![]);
        c.pass = false;
        c.detail = [w_b0.len(), w_b1.len(), w_f.len()]
            .map(|n| BigUint::from(n as u64))
            .to_vec();
        c
    } else {
        IdentityCheck::new(
            "count-identity",
            w_a,
            difference as u64,
            vec![w_b0.len() as u64, w_b1.len() as u64, w_f.len() as u64],
        )
    };
    vec![
        IdentityCheck::no_violations("f-within-t0", f_outside),
        IdentityCheck::no_violations("t1-within-t0", t1_outside),
        IdentityCheck::no_violations("t1-disjoint-from-f", overlap),
        count,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_helpers() {
        assert_eq!(sorted_difference(&[1, 2, 5, 9], &[2, 3, 9]), vec![1, 5]);
        assert_eq!(symmetric_difference(&[1, 2], &[2, 3]), vec![1, 3]);
        assert!(sorted_difference(&[], &[1]).is_empty());
    }

    #[test]
    fn relaxed_subtractive_conditions() {
        let all_pass = |v: &[IdentityCheck]| v.iter().all(|c| c.pass);
        // Parsimonious: t1 and F empty.
        assert!(all_pass(&check_relaxed_subtractive(
            3,
            &[1, 2, 3],
            &[],
            &[]
        )));
        assert!(!all_pass(&check_relaxed_subtractive(
            2,
            &[1, 2, 3],
            &[],
            &[]
        )));
        // Subtractive: F empty.
        assert!(all_pass(&check_relaxed_subtractive(
            1,
            &[1, 2, 3],
            &[2, 3],
            &[]
        )));
        // Relaxed.
        let checks = check_relaxed_subtractive(1, &[1, 2, 3, 4], &[4], &[1, 2]);
        assert!(all_pass(&checks));
        let bad = check_relaxed_subtractive(1, &[1, 2, 3], &[3, 7], &[3]);
        assert_eq!(bad[1].detail, vec![BigUint::from(7u32)]);
        assert_eq!(bad[2].detail, vec![BigUint::from(3u32)]);
        assert!(!bad[3].pass);
    }

    #[test]
    fn details_only_on_failure() {
        assert!(IdentityCheck::new("x", 2u64, 2u64, vec![1, 2])
            .detail
            .is_empty());
        assert_eq!(IdentityCheck::new("x", 2u64, 3u64, vec![1]).detail.len(), 1);
    }
}
