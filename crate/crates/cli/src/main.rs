use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use gapcount::format::{self, InstanceDocument};
use gapcount::reduction::{
    build, dummy_rows, endpoint_rows, extra_s1_rows, literal_rows, render_zone_table, Variant,
};
use gapcount::sat::{witness_matrix, PartitionedFormula};
use gapcount::semigroup::{GapReport, GeneratorSet};
use gapcount::verify::{self, SweepConfig, VerificationReport, VerifyOptions};

/// Tables above this many entries need `--slow`.
const FAST_BUDGET: u64 = 1 << 28;
const SLOW_BUDGET: u64 = 1 << 31;

#[derive(Parser)]
#[command(
    name = "gapcount",
    version,
    about = "Gap counting in numerical semigroups and its reductions from one-in-three SAT"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest representability table any step may build, in entries.
    #[arg(long, global = true)]
    budget_entries: Option<u64>,

    /// Allow tables above 2^28 entries (minutes of work, up to ~270 MB).
    #[arg(long, global = true)]
    slow: bool,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Tabular,
    Structured,
}

#[derive(Args)]
struct GeneratorArgs {
    /// Generators as decimal integers.
    generators: Vec<String>,

    /// File with further generators separated by whitespace; `#` starts a comment.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Nonrep,
    Bounded,
    Gaps,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Nonrep => Variant::NonRep,
            VariantArg::Bounded => Variant::BoundedGap,
            VariantArg::Gaps => Variant::Gaps,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List every gap of a coprime generator set.
    Gaps(GeneratorArgs),
    /// Print the Frobenius number of a coprime generator set.
    Frobenius(GeneratorArgs),
    /// List the gaps inside [lo, hi].
    Nonrep {
        #[command(flatten)]
        set: GeneratorArgs,
        #[arg(long)]
        lo: String,
        #[arg(long)]
        hi: String,
    },
    /// List the gaps at or above a bound.
    Bounded {
        #[command(flatten)]
        set: GeneratorArgs,
        #[arg(long)]
        from: String,
    },
    /// Emit the reduction instance built from a formula file.
    Reduce {
        #[arg(long, value_enum)]
        variant: VariantArg,
        formula: PathBuf,
    },
    /// Check the count identity of one reduction on a formula.
    Verify {
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        /// Formula file; alternatively use --instance.
        #[arg(required_unless_present = "instance", conflicts_with = "instance")]
        formula: Option<PathBuf>,
        /// Instance document written by `reduce`.
        #[arg(long)]
        instance: Option<PathBuf>,
    },
    /// Verify many seeded random formulas.
    Sweep {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        /// Range such as `2..3` or a single value.
        #[arg(long, default_value = "2..3", value_parser = parse_range)]
        k1: RangeInclusive<u32>,
        #[arg(long, default_value = "2..3", value_parser = parse_range)]
        k2: RangeInclusive<u32>,
        #[arg(long, default_value = "2", value_parser = parse_range)]
        k3: RangeInclusive<u32>,
        /// Verifiers to run; repeat or separate with commas.
        #[arg(long, value_enum, value_delimiter = ',', default_values = ["nonrep", "bounded"])]
        variant: Vec<VariantArg>,
    },
    /// Render the witness matrix and the zone tables of a formula.
    Table { formula: PathBuf },
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<u32>, String> {
    let bad = || format!("`{s}` is not a range like 2..3");
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.trim_start_matches('=');
            Ok(a.parse().map_err(|_| bad())?..=b.parse().map_err(|_| bad())?)
        }
        None => {
            let v = s.parse().map_err(|_| bad())?;
            Ok(v..=v)
        }
    }
}

/// Usage mistakes the argument parser cannot catch.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli, &mut std::io::stdout().lock()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_status(&err))
        }
    }
}

fn exit_status(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<gapcount::Error>() {
            return match e {
                gapcount::Error::Budget { .. } => 3,
                _ => 2,
            };
        }
    }
    2
}

fn budget(cli: &Cli) -> Result<u64> {
    let requested = cli
        .budget_entries
        .unwrap_or(if cli.slow { SLOW_BUDGET } else { FAST_BUDGET });
    if requested > FAST_BUDGET && !cli.slow {
        return Err(usage(format!(
            "--budget-entries above {FAST_BUDGET} needs --slow"
        )));
    }
    Ok(requested)
}

/// Executes one command, writing its result to `out`; returns the exit status.
fn run(cli: &Cli, out: &mut impl Write) -> Result<u8> {
    let budget = budget(cli)?;
    match &cli.command {
        Command::Gaps(set) => {
            let report = read_generators(set)?.count_all_gaps(budget)?;
            write_gap_report(out, cli.format, &report)?;
        }
        Command::Frobenius(set) => {
            let g = read_generators(set)?.frobenius_number(budget)?;
            writeln!(out, "{g}")?;
        }
        Command::Nonrep { set, lo, hi } => {
            let (lo, hi) = (parse_big("--lo", lo)?, parse_big("--hi", hi)?);
            let report = read_generators(set)?.gaps_in_interval(&lo, &hi, budget)?;
            write_gap_report(out, cli.format, &report)?;
        }
        Command::Bounded { set, from } => {
            let from = parse_big("--from", from)?;
            let report = read_generators(set)?.count_gaps_from(&from, budget)?;
            write_gap_report(out, cli.format, &report)?;
        }
        Command::Reduce { variant, formula } => {
            let bundle = build(&read_formula(formula)?, (*variant).into());
            out.write_all(InstanceDocument::from_bundle(&bundle).to_json().as_bytes())?;
        }
        Command::Verify {
            variant,
            formula,
            instance,
        } => {
            let (phi, variant) = match (formula, instance) {
                (Some(path), None) => {
                    let variant = variant
                        .ok_or_else(|| usage("--variant is required with a formula file"))?;
                    (read_formula(path)?, Variant::from(variant))
                }
                (None, Some(path)) => {
                    let doc = InstanceDocument::from_json(&read(path)?)?;
                    let bundle = doc.rebuild()?;
                    if let Some(v) = variant {
                        if Variant::from(*v) != bundle.variant {
                            return Err(usage("--variant disagrees with the instance document"));
                        }
                    }
                    (bundle.formula, bundle.variant)
                }
                _ => return Err(usage("give exactly one of a formula file or --instance")),
            };
            let started = Instant::now();
            let report = verify::verify(
                &phi,
                variant,
                &VerifyOptions {
                    budget_entries: budget,
                },
            )?;
            for (phase, d) in &report.timings {
                eprintln!("timing {phase}: {:.3} s", d.as_secs_f64());
            }
            eprintln!("timing total: {:.3} s", started.elapsed().as_secs_f64());
            write_report(out, cli.format, &report)?;
            if !report.all_mandatory_pass() {
                return Ok(1);
            }
        }
        Command::Sweep {
            seed,
            trials,
            k1,
            k2,
            k3,
            variant,
        } => {
            let cfg = SweepConfig {
                seed: *seed,
                trials: *trials,
                k1: k1.clone(),
                k2: k2.clone(),
                k3: k3.clone(),
                variants: variant.iter().map(|&v| v.into()).collect(),
                options: VerifyOptions {
                    budget_entries: budget,
                },
            };
            cfg.validate().map_err(|e| usage(e.to_string()))?;
            let started = Instant::now();
            let outcome = verify::sweep(&cfg)?;
            eprintln!("timing total: {:.3} s", started.elapsed().as_secs_f64());
            match cli.format {
                OutputFormat::Text => out.write_all(outcome.summary.render().as_bytes())?,
                OutputFormat::Tabular => out.write_all(format::sweep_tsv(&outcome).as_bytes())?,
                OutputFormat::Structured => {
                    out.write_all(format::sweep_json(&cfg, &outcome).as_bytes())?
                }
            }
            if !outcome.summary.all_mandatory_pass() {
                return Ok(1);
            }
        }
        Command::Table { formula } => {
            let phi = read_formula(formula)?;
            write_tables(out, &phi)?;
        }
    }
    Ok(0)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_formula(path: &Path) -> Result<PartitionedFormula> {
    PartitionedFormula::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn parse_big(what: &str, s: &str) -> Result<BigUint> {
    BigUint::parse_bytes(s.trim().as_bytes(), 10)
        .ok_or_else(|| usage(format!("{what}: `{s}` is not a nonnegative integer")))
}

fn read_generators(args: &GeneratorArgs) -> Result<GeneratorSet> {
    let mut values = args
        .generators
        .iter()
        .map(|s| parse_big("generator", s))
        .collect::<Result<Vec<_>>>()?;
    if let Some(path) = &args.file {
        let text = read(path)?;
        for token in text
            .lines()
            .flat_map(|l| l.split('#').next().unwrap_or("").split_whitespace())
        {
            values.push(parse_big("generator", token)?);
        }
    }
    if values.is_empty() {
        bail!(usage("no generators given"));
    }
    Ok(GeneratorSet::new(values)?)
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_gap_report(out: &mut impl Write, fmt: OutputFormat, report: &GapReport) -> Result<()> {
    match fmt {
        OutputFormat::Text => {
            writeln!(out, "gaps: {}", join(&report.gaps))?;
            writeln!(out, "count: {}", report.count)?;
        }
        OutputFormat::Tabular => {
            writeln!(out, "gap")?;
            for g in &report.gaps {
                writeln!(out, "{g}")?;
            }
        }
        OutputFormat::Structured => {
            writeln!(out, "{}", serde_json::to_string_pretty(report)?)?;
        }
    }
    Ok(())
}

fn write_report(
    out: &mut impl Write,
    fmt: OutputFormat,
    report: &VerificationReport,
) -> Result<()> {
    let text = match fmt {
        OutputFormat::Text => format::report_text(report),
        OutputFormat::Tabular => format!("{}{}", format::TSV_HEADER, format::tsv_lines(0, report)),
        OutputFormat::Structured => format::report_json(report),
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn write_tables(out: &mut impl Write, phi: &PartitionedFormula) -> Result<()> {
    writeln!(out, "Clauses with exactly one true literal")?;
    out.write_all(witness_matrix(phi)?.render().as_bytes())?;
    let b = build(phi, Variant::Gaps);
    let sections = [
        ("Literal integers", literal_rows(&b)),
        ("Interval endpoints", endpoint_rows(&b)),
        ("Dummy integers", dummy_rows(&b, false)),
        ("Dummy integers raised by d0", dummy_rows(&b, true)),
        ("Extra generators of s1", extra_s1_rows(&b)),
    ];
    for (title, rows) in sections {
        writeln!(out, "\n{title}")?;
        out.write_all(render_zone_table(&b.layout, &rows).as_bytes())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Parses and runs like `main`, returning the exit status and stdout.
    fn exec(args: &[&str]) -> (u8, String) {
        let cli = match Cli::try_parse_from(std::iter::once("gapcount").chain(args.iter().copied()))
        {
            Ok(cli) => cli,
            Err(e) => return (e.exit_code() as u8, String::new()),
        };
        let mut out = Vec::new();
        let code = run(&cli, &mut out).unwrap_or_else(|e| exit_status(&e));
        (code, String::from_utf8(out).unwrap())
    }

    fn temp_file(name: &str, contents: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("gapcount-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        fs::write(&path, contents).unwrap();
        path
    }

    const PHI2: &str = "-x1 x2 y1\nx1 x2 y2\n";

    #[test]
    fn gaps_prints_list_and_count() {
        let (code, text) = exec(&["gaps", "12", "19", "51", "53"]);
        assert_eq!(code, 0);
        assert!(text.starts_with("gaps: 1 2 3"), "{text}");
        assert!(text.ends_with("count: 60\n"), "{text}");
    }

    #[test]
    fn frobenius_of_four_generators() {
        assert_eq!(exec(&["frobenius", "12", "19", "51", "53"]).1.trim(), "109");
    }

    #[test]
    fn structured_gap_output_is_json() {
        let (_, text) = exec(&["--format", "structured", "gaps", "3", "5"]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["count"], 4);
        assert_eq!(v["gaps"], serde_json::json!([1, 2, 4, 7]));
    }

    #[test]
    fn generators_from_a_file() {
        let path = temp_file("gens.txt", "12 19\n51 53\n");
        let (code, text) = exec(&["frobenius", "--file", path.to_str().unwrap()]);
        assert_eq!((code, text.trim()), (0, "109"));
    }

    #[test]
    fn non_coprime_set_is_a_precondition_error() {
        assert_eq!(exec(&["frobenius", "4", "6"]).0, 2);
    }

    #[test]
    fn bad_arguments_exit_with_usage_status() {
        assert_eq!(exec(&["gaps", "7"]).0, 2);
        assert_eq!(exec(&["gaps", "abc", "5"]).0, 2);
        assert_eq!(exec(&["no-such-command"]).0, 2);
        assert_eq!(exec(&["sweep", "--k1", "3..2"]).0, 2);
    }

    #[test]
    fn large_budgets_need_the_slow_flag() {
        assert_eq!(
            exec(&["--budget-entries", "536870912", "gaps", "3", "5"]).0,
            2
        );
        assert_eq!(
            exec(&["--slow", "--budget-entries", "536870912", "gaps", "3", "5"]).0,
            0
        );
    }

    #[test]
    fn exceeding_the_budget_has_its_own_status() {
        let args = [
            "nonrep",
            "--lo",
            "1",
            "--hi",
            "1000",
            "--budget-entries",
            "100",
            "4",
            "6",
        ];
        assert_eq!(exec(&args).0, 3);
    }

    #[test]
    fn verify_passes_on_the_small_example() {
        let path = temp_file("phi2.txt", PHI2);
        let (code, text) = exec(&["verify", "--variant", "nonrep", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{text}");
        assert!(text.contains("verdict: pass"));
    }

    #[test]
    fn reduce_then_verify_instance_round_trip() {
        let path = temp_file("phi2-rt.txt", PHI2);
        let (code, json) = exec(&["reduce", "--variant", "bounded", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(doc["lambda"], "245756");
        let inst = temp_file("phi2.json", &json);
        let (code, text) = exec(&["verify", "--instance", inst.to_str().unwrap()]);
        assert_eq!(code, 0, "{text}");
        assert_eq!(
            exec(&[
                "verify",
                "--variant",
                "gaps",
                "--instance",
                inst.to_str().unwrap()
            ])
            .0,
            2
        );
    }

    #[test]
    fn unparsable_formula_exits_with_usage_status() {
        let path = temp_file("bad.txt", "x1 x2\n");
        assert_eq!(
            exec(&["verify", "--variant", "nonrep", path.to_str().unwrap()]).0,
            2
        );
    }

    #[test]
    fn sweep_output_is_deterministic() {
        let args = [
            "--format",
            "tabular",
            "sweep",
            "--seed",
            "7",
            "--trials",
            "4",
            "--k1",
            "2",
            "--k2",
            "1",
            "--variant",
            "nonrep",
        ];
        let (a, b) = (exec(&args), exec(&args));
        assert_eq!(a, b);
        assert!(a.1.starts_with("trial\tcheck\tlhs\trhs\tpass\n"));
    }

    #[test]
    fn table_renders_the_witness_matrix() {
        let path = temp_file("phi2-table.txt", PHI2);
        let (code, text) = exec(&["table", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(text.contains("x\\y"), "{text}");
    }
}
