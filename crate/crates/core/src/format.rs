//! Versioned JSON documents for reduction instances and verification reports,
//! a tab-separated check stream, and plain-text renderings.
//!
//! Big integers always travel as decimal strings.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::reduction::{ReductionBundle, Variant};
use crate::sat::PartitionedFormula;
use crate::semigroup::GeneratorSet;
use crate::verify::{IdentityCheck, SweepConfig, SweepOutcome, VerificationReport};

pub const INSTANCE_SCHEMA: &str = "gapcount-instance/1";
pub const REPORT_SCHEMA: &str = "gapcount-report/1";

pub(crate) fn ser_biguint<S: Serializer>(
    n: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_str_radix(10))
}

pub(crate) fn ser_opt_biguint<S: Serializer>(
    n: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match n {
        Some(n) => ser_biguint(n, s),
        None => s.serialize_none(),
    }
}

fn dec(n: &BigUint) -> String {
    n.to_str_radix(10)
}

fn parse_dec(field: &str, s: &str) -> Result<BigUint> {
    BigUint::parse_bytes(s.as_bytes(), 10)
        .ok_or_else(|| Error::InvalidInput(format!("{field}: `{s}` is not a decimal integer")))
}

fn formula_lines(phi: &PartitionedFormula) -> Vec<String> {
    phi.clauses().iter().map(|c| c.to_string()).collect()
}

/// A reduction instance as written by `reduce` and read back by `verify --instance`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub schema: String,
    pub variant: String,
    pub k1: u32,
    pub k2: u32,
    pub k3: u32,
    /// One clause per entry in the formula text format.
    pub formula: Vec<String>,
    pub d0: String,
    /// The generator set whose gaps are counted: H ∪ {d0} or s₀.
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators_s1: Option<Vec<String>>,
    pub lambda: String,
    pub mu: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_closed_form: Option<String>,
}

impl InstanceDocument {
    pub fn from_bundle(b: &ReductionBundle) -> Self {
        let strings = |g: GeneratorSet| g.iter().map(dec).collect::<Vec<_>>();
        InstanceDocument {
            schema: INSTANCE_SCHEMA.to_string(),
            variant: b.variant.name().to_string(),
            k1: b.layout.k1,
            k2: b.layout.k2,
            k3: b.layout.k3,
            formula: formula_lines(&b.formula),
            d0: dec(&b.d0()),
            generators: strings(b.target_generators()),
            generators_s1: b.s1().ok().map(strings),
            lambda: dec(&b.lambda),
            mu: dec(&b.mu),
            f_closed_form: b.f_closed_form.as_ref().map(dec),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: InstanceDocument = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("instance document: {e}")))?;
        if doc.schema != INSTANCE_SCHEMA {
            return Err(Error::InvalidInput(format!(
                "unsupported schema `{}` (expected {INSTANCE_SCHEMA})",
                doc.schema
            )));
        }
        Ok(doc)
    }

    pub fn variant(&self) -> Result<Variant> {
        self.variant.parse()
    }

    pub fn formula(&self) -> Result<PartitionedFormula> {
        let phi = PartitionedFormula::parse(&self.formula.join("\n"))?;
        if (phi.k1(), phi.k2(), phi.k3()) != (self.k1, self.k2, self.k3) {
            return Err(Error::InvalidInput(
                "block sizes disagree with the formula".into(),
            ));
        }
        Ok(phi)
    }

    pub fn generators(&self) -> Result<Vec<BigUint>> {
        self.generators
            .iter()
            .map(|s| parse_dec("generators", s))
            .collect()
    }

    pub fn generators_s1(&self) -> Result<Option<Vec<BigUint>>> {
        self.generators_s1
            .as_ref()
            .map(|v| v.iter().map(|s| parse_dec("generators_s1", s)).collect())
            .transpose()
    }

    /// Rebuilds the bundle from the embedded formula and checks that every
    /// stored number matches it.
    pub fn rebuild(&self) -> Result<ReductionBundle> {
        let bundle = crate::reduction::build(&self.formula()?, self.variant()?);
        let fresh = InstanceDocument::from_bundle(&bundle);
        let mismatch = |what: &str| {
            Error::InvalidInput(format!("stored {what} differs from the rebuilt instance"))
        };
        let stored = self.generators()?;
        let rebuilt: Vec<BigUint> = bundle.target_generators().elements().to_vec();
        let mut sorted = stored.clone();
        sorted.sort();
        if sorted != rebuilt {
            return Err(mismatch("generator set"));
        }
        if let Some(mut s1) = self.generators_s1()? {
            s1.sort();
            if Some(s1) != bundle.s1().ok().map(|g| g.elements().to_vec()) {
                return Err(mismatch("s1 generator set"));
            }
        }
        for (name, a, b) in [
            ("lambda", &self.lambda, &fresh.lambda),
            ("mu", &self.mu, &fresh.mu),
            ("d0", &self.d0, &fresh.d0),
        ] {
            if parse_dec(name, a)? != parse_dec(name, b)? {
                return Err(mismatch(name));
            }
        }
        Ok(bundle)
    }
}

#[derive(Serialize)]
struct CheckDoc<'a> {
    name: &'a str,
    #[serde(serialize_with = "ser_biguint")]
    lhs: &'a BigUint,
    #[serde(serialize_with = "ser_biguint")]
    rhs: &'a BigUint,
    pass: bool,
    mandatory: bool,
    detail: Vec<String>,
}

impl<'a> From<&'a IdentityCheck> for CheckDoc<'a> {
    fn from(c: &'a IdentityCheck) -> Self {
        CheckDoc {
            name: &c.name,
            lhs: &c.lhs,
            rhs: &c.rhs,
            pass: c.pass,
            mandatory: c.mandatory,
            detail: c.detail.iter().map(dec).collect(),
        }
    }
}

#[derive(Serialize)]
struct QuantityDoc<'a> {
    name: &'a str,
    value: String,
}

#[derive(Serialize)]
struct ReportDoc<'a> {
    variant: &'static str,
    k1: u32,
    k2: u32,
    k3: u32,
    formula: Vec<String>,
    all_mandatory_pass: bool,
    checks: Vec<CheckDoc<'a>>,
    quantities: Vec<QuantityDoc<'a>>,
    interval_gaps: Vec<String>,
}

impl<'a> From<&'a VerificationReport> for ReportDoc<'a> {
    fn from(r: &'a VerificationReport) -> Self {
        ReportDoc {
            variant: r.variant.name(),
            k1: r.formula.k1(),
            k2: r.formula.k2(),
            k3: r.formula.k3(),
            formula: formula_lines(&r.formula),
            all_mandatory_pass: r.all_mandatory_pass(),
            checks: r.checks.iter().map(CheckDoc::from).collect(),
            quantities: r
                .quantities
                .iter()
                .map(|(n, v)| QuantityDoc {
                    name: n,
                    value: dec(v),
                })
                .collect(),
            interval_gaps: r.interval_gaps.iter().map(u64::to_string).collect(),
        }
    }
}

#[derive(Serialize)]
struct SingleReportFile<'a> {
    schema: &'static str,
    #[serde(flatten)]
    report: ReportDoc<'a>,
}

/// A single verification report as a JSON document. Timings are omitted.
pub fn report_json(report: &VerificationReport) -> String {
    let doc = SingleReportFile {
        schema: REPORT_SCHEMA,
        report: report.into(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data") + "\n"
}

#[derive(Serialize)]
struct SweepConfigDoc {
    seed: String,
    trials: u64,
    k1: [u32; 2],
    k2: [u32; 2],
    k3: [u32; 2],
    variants: Vec<&'static str>,
    budget_entries: String,
}

#[derive(Serialize)]
struct TrialDoc<'a> {
    trial: u64,
    seed: String,
    k1: u32,
    k2: u32,
    k3: u32,
    reports: Vec<ReportDoc<'a>>,
    errors: &'a [String],
}

#[derive(Serialize)]
struct SummaryDoc {
    trials: u64,
    reports: u64,
    checks: u64,
    checks_passed: u64,
    mandatory_failures: u64,
    informational_mismatches: u64,
    errors: u64,
    all_mandatory_pass: bool,
}

#[derive(Serialize)]
struct SweepFile<'a> {
    schema: &'static str,
    config: SweepConfigDoc,
    summary: SummaryDoc,
    trials: Vec<TrialDoc<'a>>,
}

/// A sweep (configuration, summary and every trial) as a JSON document.
pub fn sweep_json(cfg: &SweepConfig, out: &SweepOutcome) -> String {
    let range = |r: &std::ops::RangeInclusive<u32>| [*r.start(), *r.end()];
    let s = &out.summary;
    let doc = SweepFile {
        schema: REPORT_SCHEMA,
        config: SweepConfigDoc {
            seed: cfg.seed.to_string(),
            trials: cfg.trials,
            k1: range(&cfg.k1),
            k2: range(&cfg.k2),
            k3: range(&cfg.k3),
            variants: cfg.variants.iter().map(|v| v.name()).collect(),
            budget_entries: cfg.options.budget_entries.to_string(),
        },
        summary: SummaryDoc {
            trials: s.trials,
            reports: s.reports,
            checks: s.checks,
            checks_passed: s.checks_passed,
            mandatory_failures: s.mandatory_failures,
            informational_mismatches: s.informational_mismatches,
            errors: s.errors,
            all_mandatory_pass: s.all_mandatory_pass(),
        },
        trials: out
            .trials
            .iter()
            .map(|t| TrialDoc {
                trial: t.trial,
                seed: t.seed.to_string(),
                k1: t.k.0,
                k2: t.k.1,
                k3: t.k.2,
                reports: t.reports.iter().map(ReportDoc::from).collect(),
                errors: &t.errors,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data") + "\n"
}

pub const TSV_HEADER: &str = "trial\tcheck\tlhs\trhs\tpass\n";

/// One line per check: `trial`, `variant/check`, `lhs`, `rhs`, `pass`. No header.
pub fn tsv_lines(trial: u64, report: &VerificationReport) -> String {
    let mut s = String::new();
    for c in &report.checks {
        writeln!(
            s,
            "{trial}\t{}/{}\t{}\t{}\t{}",
            report.variant, c.name, c.lhs, c.rhs, c.pass
        )
        .unwrap();
    }
    s
}

pub fn sweep_tsv(out: &SweepOutcome) -> String {
    let mut s = TSV_HEADER.to_string();
    for t in &out.trials {
        for r in &t.reports {
            s.push_str(&tsv_lines(t.trial, r));
        }
    }
    s
}

/// Human-readable report.
pub fn report_text(report: &VerificationReport) -> String {
    let mut s = String::new();
    writeln!(s, "variant: {}", report.variant).unwrap();
    writeln!(s, "formula:").unwrap();
    for line in formula_lines(&report.formula) {
        writeln!(s, "  {line}").unwrap();
    }
    for (name, v) in &report.quantities {
        writeln!(s, "{name}: {v}").unwrap();
    }
    let gaps: Vec<String> = report.interval_gaps.iter().map(u64::to_string).collect();
    writeln!(s, "interval gaps: {}", gaps.join(" ")).unwrap();
    for c in &report.checks {
        let status = match (c.pass, c.mandatory) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "DIFF",
        };
        write!(s, "{status} {} lhs={} rhs={}", c.name, c.lhs, c.rhs).unwrap();
        if !c.detail.is_empty() {
            let d: Vec<String> = c.detail.iter().map(dec).collect();
            write!(s, " detail=[{}]", d.join(" ")).unwrap();
        }
        s.push('\n');
    }
    writeln!(
        s,
        "verdict: {}",
        if report.all_mandatory_pass() {
            "pass"
        } else {
            "fail"
        }
    )
    .unwrap();
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{build, build_gaps_bundle};
    use crate::sat::fixtures::phi2;
    use crate::verify::{verify_nonrep, VerifyOptions};

    #[test]
    fn instance_round_trip() {
        for variant in [Variant::NonRep, Variant::BoundedGap, Variant::Gaps] {
            let b = build(&phi2(), variant);
            let text = InstanceDocument::from_bundle(&b).to_json();
            let doc = InstanceDocument::from_json(&text).unwrap();
            let rebuilt = doc.rebuild().unwrap();
            assert_eq!(rebuilt.target_generators(), b.target_generators());
            assert_eq!(doc.variant().unwrap(), variant);
        }
    }

    #[test]
    fn instance_fields() {
        let doc = InstanceDocument::from_bundle(&build_gaps_bundle(&phi2()));
        assert_eq!(doc.schema, "gapcount-instance/1");
        assert_eq!(doc.lambda, "245756");
        assert_eq!(doc.generators.len(), 35);
        assert_eq!(doc.generators_s1.as_ref().map(Vec::len), Some(37));
        assert_eq!(doc.f_closed_form.as_deref(), Some("4096"));
        assert_eq!(doc.formula, vec!["-x1 x2 y1", "x1 x2 y2"]);
    }

    #[test]
    fn tampered_instances_are_rejected() {
        let mut doc = InstanceDocument::from_bundle(&build(&phi2(), Variant::NonRep));
        doc.generators[0] = "92182".into();
        assert!(doc.rebuild().is_err());
        let text = InstanceDocument::from_bundle(&build(&phi2(), Variant::NonRep))
            .to_json()
            .replace("gapcount-instance/1", "gapcount-instance/9");
        assert!(InstanceDocument::from_json(&text).is_err());
    }

    #[test]
    fn report_renderings() {
        let r = verify_nonrep(&phi2(), &VerifyOptions::default()).unwrap();
        let json: serde_json::Value = serde_json::from_str(&report_json(&r)).unwrap();
        assert_eq!(json["schema"], "gapcount-report/1");
        assert_eq!(json["interval_gaps"][0], "245758");
        assert_eq!(json["checks"][0]["lhs"], "2");
        let tsv = tsv_lines(0, &r);
        assert!(tsv.starts_with("0\tnonrep/pi1-vs-interval-gaps\t2\t2\ttrue\n"));
        assert!(report_text(&r).ends_with("verdict: pass\n"));
    }
}
