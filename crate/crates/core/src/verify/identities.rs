//! The three per-formula verifiers.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::carry::CarryFreeSearch;
use super::{
    check_relaxed_subtractive, sorted_difference, symmetric_difference, IdentityCheck,
    VerificationReport,
};
use crate::error::{Error, Result};
use crate::reduction::{
    build_bounded, build_gaps_bundle, enumerate_f_witness_sums, reduce_to_nonrep, ReductionBundle,
    Variant,
};
use crate::sat::{count_pi1_one_in_three, pi1_witnesses, PartitionedFormula};
use crate::semigroup::{GeneratorSet, RepresentabilityTable, DEFAULT_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Largest representability table (in entries) any single step may build.
    pub budget_entries: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget_entries: DEFAULT_BUDGET,
        }
    }
}

/// Runs the verifier matching `variant`.
pub fn verify(
    phi: &PartitionedFormula,
    variant: Variant,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    match variant {
        Variant::NonRep => verify_nonrep(phi, opts),
        Variant::BoundedGap => verify_bounded(phi, opts),
        Variant::Gaps => verify_gaps(phi, opts),
    }
}

struct Timer {
    last: Instant,
    laps: Vec<(String, Duration)>,
}

impl Timer {
    fn new() -> Self {
        Timer {
            last: Instant::now(),
            laps: Vec::new(),
        }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.laps.push((name.to_string(), now - self.last));
        self.last = now;
    }
}

fn index(n: &BigUint, budget: u64) -> Result<u64> {
    match n.to_u64() {
        Some(v) if v < budget => Ok(v),
        _ => Err(Error::budget("representability table", n + 1u32, budget)),
    }
}

fn as_u64s(set: &GeneratorSet) -> Vec<u64> {
    set.iter()
        .map(|g| g.to_u64().expect("checked against the table budget"))
        .collect()
}

/// Shared state of the interval checks.
struct Interval {
    lambda: u64,
    mu: u64,
    d0: u64,
    low_width: u32,
}

impl Interval {
    fn of(bundle: &ReductionBundle, budget: u64) -> Result<Self> {
        Ok(Interval {
            lambda: index(&bundle.lambda, budget)?,
            mu: index(&bundle.mu, budget)?,
            d0: index(&bundle.d0(), budget)?,
            low_width: bundle.layout.low_width(),
        })
    }
}

/// Interval gaps, the Π₁ count against them, the witness bijection and the
/// carry-free representation property for one generator set.
fn interval_checks(
    phi: &PartitionedFormula,
    iv: &Interval,
    generators: &GeneratorSet,
    table: &RepresentabilityTable,
    checks: &mut Vec<IdentityCheck>,
    count_name: &str,
    witnesses: &[u64],
) -> Result<Vec<u64>> {
    let gaps: Vec<u64> = table.gaps_in(iv.lambda, iv.mu).collect();
    let pi1 = count_pi1_one_in_three(phi)?;
    let expected: Vec<u64> = witnesses.iter().map(|x| iv.lambda + x).collect();
    checks.push(IdentityCheck::new(
        count_name,
        pi1,
        gaps.len() as u64,
        symmetric_difference(&expected, &gaps),
    ));
    checks.push(IdentityCheck::no_violations(
        "witness-bijection",
        symmetric_difference(&expected, &gaps),
    ));
    let search = CarryFreeSearch::new(&as_u64s(generators), iv.low_width);
    let disagreements = (iv.lambda..=iv.mu)
        .filter(|&n| search.representable(n) != table.contains(n))
        .collect();
    checks.push(IdentityCheck::no_violations(
        "carry-free-representations",
        disagreements,
    ));
    Ok(gaps)
}

fn endpoint_quantities(bundle: &ReductionBundle) -> Vec<(String, BigUint)> {
    vec![
        ("d0".to_string(), bundle.d0()),
        ("lambda".to_string(), bundle.lambda.clone()),
        ("mu".to_string(), bundle.mu.clone()),
    ]
}

/// Π₁ count = |N(H ∪ {d0}) ∩ [λ, μ]|, with the gaps matched one by one to the
/// X-assignments lacking an exactly-one extension.
pub fn verify_nonrep(phi: &PartitionedFormula, opts: &VerifyOptions) -> Result<VerificationReport> {
    let budget = opts.budget_entries;
    let mut timer = Timer::new();
    let bundle = reduce_to_nonrep(phi);
    let iv = Interval::of(&bundle, budget)?;
    let witnesses = pi1_witnesses(phi)?;
    timer.lap("formula");
    let generators = bundle.nonrep_generators();
    let table = generators.representability_prefix(iv.mu, budget)?;
    timer.lap("table");
    let mut checks = Vec::new();
    let gaps = interval_checks(
        phi,
        &iv,
        &generators,
        &table,
        &mut checks,
        "pi1-vs-interval-gaps",
        &witnesses,
    )?;
    timer.lap("checks");
    Ok(VerificationReport {
        variant: Variant::NonRep,
        formula: phi.clone(),
        checks,
        quantities: endpoint_quantities(&bundle),
        interval_gaps: gaps,
        timings: timer.laps,
    })
}

/// Π₁ count = |N(s₀) ∩ [λ, ∞)|, certified by a fully representable tail
/// `[μ+1, μ+d0]`, plus agreement with the unbounded-interval construction.
pub fn verify_bounded(
    phi: &PartitionedFormula,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let budget = opts.budget_entries;
    let mut timer = Timer::new();
    let bundle = build_bounded(phi);
    let iv = Interval::of(&bundle, budget)?;
    let tail_end = index(&(&bundle.mu + bundle.d0()), budget)?;
    let witnesses = pi1_witnesses(phi)?;
    timer.lap("formula");
    let s0 = bundle.s0()?;
    let table = s0.representability_prefix(tail_end, budget)?;
    let h_set = bundle.nonrep_generators();
    let h_table = h_set.representability_prefix(iv.mu, budget)?;
    timer.lap("tables");

    let mut checks = Vec::new();
    let gaps = interval_checks(
        phi,
        &iv,
        &s0,
        &table,
        &mut checks,
        "pi1-vs-gaps-from-lambda",
        &witnesses,
    )?;
    // min(s₀) = d0, so d0 consecutive representable integers settle everything above.
    let tail_gaps: Vec<u64> = table.gaps_in(iv.mu + 1, tail_end).collect();
    checks.push(IdentityCheck::no_violations(
        "tail-representable",
        tail_gaps,
    ));
    let h_gaps: Vec<u64> = h_table.gaps_in(iv.lambda, iv.mu).collect();
    checks.push(IdentityCheck::no_violations(
        "interval-gaps-agree",
        symmetric_difference(&h_gaps, &gaps),
    ));
    let not_monotone: Vec<u64> = table
        .gaps_in(1, iv.mu)
        .filter(|&n| h_table.contains(n))
        .collect();
    checks.push(IdentityCheck::no_violations(
        "s0-gaps-within-h-gaps",
        not_monotone,
    ));
    checks.push(gcd_check("gcd-s0", &s0));
    debug_assert_eq!(iv.d0, s0.min().to_u64().unwrap());
    timer.lap("checks");

    let mut quantities = endpoint_quantities(&bundle);
    quantities.push(("generators_s0".to_string(), BigUint::from(s0.len())));
    Ok(VerificationReport {
        variant: Variant::BoundedGap,
        formula: phi.clone(),
        checks,
        quantities,
        interval_gaps: gaps,
        timings: timer.laps,
    })
}

fn gcd_check(name: &str, set: &GeneratorSet) -> IdentityCheck {
    IdentityCheck::new(name, set.gcd(), 1u64, vec![])
}

/// Π₁ count = |N(s₀)| − |N(s₁)| − |F|, with F taken as the s₀-only gaps below
/// λ; the closed form for |F| and the literal F-witness sums are compared
/// against it and reported without affecting the verdict.
pub fn verify_gaps(phi: &PartitionedFormula, opts: &VerifyOptions) -> Result<VerificationReport> {
    let budget = opts.budget_entries;
    let mut timer = Timer::new();
    let bundle = build_gaps_bundle(phi);
    let iv = Interval::of(&bundle, budget)?;
    let pi1 = count_pi1_one_in_three(phi)?;
    timer.lap("formula");

    let s0 = bundle.s0()?;
    let s1 = bundle.s1()?;
    let (stable0, mut t0) = s0.stabilized_table(budget)?;
    let (stable1, mut t1) = s1.stabilized_table(budget)?;
    let top = t0.bound().max(t1.bound()).max(iv.mu);
    t0.extend_to(top, budget)?;
    t1.extend_to(top, budget)?;
    timer.lap("tables");

    let n0: Vec<u64> = t0.gaps_in(1, top).collect();
    let n1: Vec<u64> = t1.gaps_in(1, top).collect();
    let f_emp: Vec<u64> = sorted_difference(&n0, &n1)
        .into_iter()
        .take_while(|&n| n < iv.lambda)
        .collect();

    let mut checks = Vec::new();
    let relaxed = check_relaxed_subtractive(pi1, &n0, &n1, &f_emp);
    let names = [
        "f-emp-within-s0-gaps",
        "s1-gaps-within-s0-gaps",
        "f-emp-disjoint-from-s1-gaps",
        "pi1-vs-gap-difference",
    ];
    for (mut c, name) in relaxed.into_iter().zip(names) {
        c.name = name.to_string();
        checks.push(c);
    }
    checks.push(IdentityCheck::no_violations(
        "no-s1-gaps-from-lambda",
        n1.iter().copied().filter(|&n| n >= iv.lambda).collect(),
    ));
    let f_closed = bundle.f_closed_form.clone().expect("gaps bundle");
    let witness_sums = enumerate_f_witness_sums(phi).ok();
    let below: Vec<u64> = witness_sums
        .as_ref()
        .map(|w| w.sums.iter().copied().filter(|&s| s < iv.lambda).collect())
        .unwrap_or_default();
    let f_detail = if witness_sums.is_some() {
        symmetric_difference(&f_emp, &below)
    } else {
        f_emp.clone()
    };
    checks.push(
        IdentityCheck::new(
            "f-emp-vs-closed-form",
            f_emp.len() as u64,
            f_closed.clone(),
            f_detail,
        )
        .informational(),
    );
    if let Some(w) = &witness_sums {
        checks.push(
            IdentityCheck::new(
                "f-witness-sums-below-lambda-vs-f-emp",
                below.len() as u64,
                f_emp.len() as u64,
                symmetric_difference(&below, &f_emp),
            )
            .informational(),
        );
        checks.push(
            IdentityCheck::no_violations(
                "f-witness-sums-from-lambda",
                w.sums.iter().copied().filter(|&s| s >= iv.lambda).collect(),
            )
            .informational(),
        );
        checks.push(
            IdentityCheck::new(
                "f-witness-sums-distinct",
                w.sums.len() as u64,
                w.selections,
                vec![],
            )
            .informational(),
        );
    }
    let limit = iv.mu + iv.d0 + iv.d0;
    checks.push(IdentityCheck::no_violations(
        "stabilization-s0-within-bound",
        if stable0 <= limit {
            vec![]
        } else {
            vec![stable0]
        },
    ));
    checks.push(IdentityCheck::no_violations(
        "stabilization-s1-within-bound",
        if stable1 <= limit {
            vec![]
        } else {
            vec![stable1]
        },
    ));
    checks.push(gcd_check("gcd-s0", &s0));
    checks.push(gcd_check("gcd-s1", &s1));
    timer.lap("checks");

    let mut quantities = endpoint_quantities(&bundle);
    let extra = [
        ("gaps_s0", n0.len() as u64),
        ("gaps_s1", n1.len() as u64),
        ("f_emp", f_emp.len() as u64),
        ("stabilization_s0", stable0),
        ("stabilization_s1", stable1),
    ];
    quantities.extend(
        extra
            .iter()
            .map(|(n, v)| (n.to_string(), BigUint::from(*v))),
    );
    quantities.push(("f_closed_form".to_string(), f_closed));
    if let Some(w) = &witness_sums {
        quantities.push((
            "f_witness_selections".to_string(),
            BigUint::from(w.selections),
        ));
        quantities.push((
            "f_witness_sums_distinct".to_string(),
            BigUint::from(w.sums.len()),
        ));
    }
    let interval_gaps = t0.gaps_in(iv.lambda, iv.mu).collect();
    Ok(VerificationReport {
        variant: Variant::Gaps,
        formula: phi.clone(),
        checks,
        quantities,
        interval_gaps,
        timings: timer.laps,
    })
}
