//! Command-line front end.
//!
//! Reports use 1-based row and column numbers. JSON reports carry every
//! exact value twice: as a decimal string and as a reduced `p/q` ratio.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::cheb::{nabla_rhs, rhs_cheb_report, RhsChebReport};
use crate::decimal::{approx_decimal, exact_decimal};
use crate::dual::{dual_optimal_pairs, dual_repair, nabla_inf};
use crate::error::Error;
use crate::matrix::{UnitMatrix, UnitVector};
use crate::norm::{Distance, Distances, Norm, L2_DIGITS};
use crate::repair::{
    mdelta_inf, optimal_pairs, ModificationSet, PairSequence, RepairCandidate, RepairOptions,
    DEFAULT_CAP,
};
use crate::solve::check_consistency;
use crate::system::{Composition, System};
use crate::unit::{parse_unit, UnitValue};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "fuzzyrel",
    version,
    about = "Solve, diagnose and repair fuzzy relational equation systems"
)]
struct Args {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test consistency and print the extremal solution candidate.
    Check { file: PathBuf },
    /// Chebyshev distance of the right-hand side and its extremal approximation.
    Cheb { file: PathBuf },
    /// Minimally modify the matrix so the system becomes consistent.
    Repair {
        file: PathBuf,
        #[arg(long, default_value = "linf", value_parser = parse_norm)]
        norm: Norm,
        /// List every optimal candidate found by exhaustive search.
        #[arg(long)]
        all: bool,
        /// Maximum number of column tuples to scan.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Smallest L∞ repair distance from the closed formula.
    Mdelta { file: PathBuf },
}

fn parse_norm(s: &str) -> Result<Norm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Input file layout for JSON systems. Values may be strings or numbers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemDocument {
    pub matrix: Vec<Vec<serde_json::Value>>,
    pub rhs: Vec<serde_json::Value>,
    pub composition: String,
}

impl SystemDocument {
    pub fn from_system(system: &System) -> Self {
        let text = |v: &UnitValue| serde_json::Value::String(v.to_string());
        Self {
            matrix: system
                .matrix()
                .row_iter()
                .map(|r| r.iter().map(text).collect())
                .collect(),
            rhs: system.rhs().iter().map(text).collect(),
            composition: system.composition().name().to_string(),
        }
    }

    pub fn to_system(&self) -> crate::Result<System> {
        let rows = self
            .matrix
            .iter()
            .map(|row| row.iter().map(json_unit).collect())
            .collect::<crate::Result<Vec<Vec<_>>>>()?;
        let rhs = self
            .rhs
            .iter()
            .map(json_unit)
            .collect::<crate::Result<Vec<_>>>()?;
        System::new(
            UnitMatrix::from_rows(rows)?,
            UnitVector::new(rhs)?,
            self.composition.parse()?,
        )
    }
}

fn json_unit(value: &serde_json::Value) -> crate::Result<UnitValue> {
    match value {
        serde_json::Value::String(s) => parse_unit(s),
        // Arbitrary precision keeps the literal text of the number.
        serde_json::Value::Number(n) => parse_unit(&n.to_string()),
        other => Err(Error::Malformed {
            token: other.to_string(),
            reason: "expected a number or a decimal string".into(),
        }),
    }
}

/// Reads a system from CSV text: a `composition=...` header line, then one
/// line per equation with the right-hand side in the last column.
pub fn parse_csv(text: &str) -> crate::Result<System> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let malformed = |token: &str, reason: &str| Error::Malformed {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    let header = match records.next() {
        Some(record) => record.map_err(|e| malformed("<csv>", &e.to_string()))?,
        None => return Err(malformed("<csv>", "empty input")),
    };
    let first = header.get(0).unwrap_or_default();
    let composition = first
        .strip_prefix("composition=")
        .ok_or_else(|| {
            malformed(
                first,
                "first line must be `composition=max-min` or `composition=min-max`",
            )
        })?
        .parse::<Composition>()?;

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for record in records {
        let record = record.map_err(|e| malformed("<csv>", &e.to_string()))?;
        let values = record
            .iter()
            .map(parse_unit)
            .collect::<crate::Result<Vec<_>>>()?;
        if values.len() < 2 {
            return Err(Error::DimensionMismatch(
                "each line needs at least one matrix entry and a right-hand side".into(),
            ));
        }
        let mut values = values;
        rhs.push(values.pop().expect("len >= 2"));
        rows.push(values);
    }
    System::new(
        UnitMatrix::from_rows(rows)?,
        UnitVector::new(rhs)?,
        composition,
    )
}

pub fn parse_json(text: &str) -> crate::Result<System> {
    let doc: SystemDocument = serde_json::from_str(text).map_err(|e| Error::Malformed {
        token: "<json>".into(),
        reason: e.to_string(),
    })?;
    doc.to_system()
}

/// Loads a `.csv` file as CSV and anything else as JSON.
pub fn load_system(path: &Path) -> Result<System, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_INPUT,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let is_csv = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
    let parsed = if is_csv {
        parse_csv(&text)
    } else {
        parse_json(&text)
    };
    parsed.map_err(|e| Failure {
        code: exit_code(&e),
        message: format!("{}: {e}", path.display()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    pub decimal: String,
    pub ratio: String,
}

impl ExactValue {
    fn from_ratio(r: &BigRational) -> Self {
        Self {
            decimal: exact_decimal(r).unwrap_or_else(|| approx_decimal(r, L2_DIGITS)),
            ratio: format!("{}/{}", r.numer(), r.denom()),
        }
    }
}

impl From<&UnitValue> for ExactValue {
    fn from(v: &UnitValue) -> Self {
        Self::from_ratio(v.as_ratio())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceOut {
    pub norm: String,
    pub decimal: String,
    /// Exact value; absent for L2.
    pub ratio: Option<String>,
    /// Exact sum of squares; present for L2 only.
    pub squared: Option<ExactValue>,
}

impl From<&Distance> for DistanceOut {
    fn from(d: &Distance) -> Self {
        let exact = d.exact().map(ExactValue::from_ratio);
        Self {
            norm: d.norm().name().to_string(),
            decimal: d.to_decimal(),
            ratio: exact.map(|e| e.ratio),
            squared: (d.norm() == Norm::L2).then(|| ExactValue::from_ratio(d.key())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistancesOut {
    pub l1: DistanceOut,
    pub l2: DistanceOut,
    pub linf: DistanceOut,
}

impl From<&Distances> for DistancesOut {
    fn from(d: &Distances) -> Self {
        Self {
            l1: (&d.l1).into(),
            l2: (&d.l2).into(),
            linf: (&d.linf).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairOut {
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModificationsOut {
    pub direct: Vec<PairOut>,
    pub spill: Vec<PairOut>,
    pub all: Vec<PairOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateOut {
    pub pairs: Vec<PairOut>,
    pub matrix: Vec<Vec<ExactValue>>,
    pub modifications: ModificationsOut,
    pub distances: DistancesOut,
    /// Whether every pair uses a per-row best column.
    pub optimal_pair_member: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: u32,
    pub command: String,
    pub composition: String,
    pub consistent: bool,
    pub extremal: Vec<ExactValue>,
    pub residual: Vec<ExactValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChebReport {
    pub schema: u32,
    pub command: String,
    pub composition: String,
    pub delta: ExactValue,
    pub row_deltas: Vec<ExactValue>,
    pub shifted_rhs: Vec<ExactValue>,
    pub b_hat: Vec<ExactValue>,
    pub eta: Vec<ExactValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairReport {
    pub schema: u32,
    pub command: String,
    pub composition: String,
    pub norm: String,
    pub distance: DistanceOut,
    pub repaired: CandidateOut,
    pub candidates: Option<Vec<CandidateOut>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdeltaReport {
    pub schema: u32,
    pub command: String,
    pub composition: String,
    pub mdelta: ExactValue,
}

fn vector_out(v: &UnitVector) -> Vec<ExactValue> {
    v.iter().map(ExactValue::from).collect()
}

fn matrix_out(m: &UnitMatrix) -> Vec<Vec<ExactValue>> {
    m.row_iter()
        .map(|r| r.iter().map(ExactValue::from).collect())
        .collect()
}

fn pairs_out<'a>(pairs: impl IntoIterator<Item = &'a (usize, usize)>) -> Vec<PairOut> {
    pairs
        .into_iter()
        .map(|&(row, col)| PairOut {
            row: row + 1,
            col: col + 1,
        })
        .collect()
}

fn modifications_out(set: &ModificationSet) -> ModificationsOut {
    ModificationsOut {
        direct: pairs_out(set.direct()),
        spill: pairs_out(set.spill()),
        all: pairs_out(set.all()),
    }
}

fn sequence_out(pairs: &PairSequence) -> Vec<PairOut> {
    pairs_out(&pairs.iter().collect::<Vec<_>>())
}

fn candidate_out(c: &RepairCandidate, member: bool) -> CandidateOut {
    CandidateOut {
        pairs: sequence_out(&c.pairs),
        matrix: matrix_out(&c.matrix),
        modifications: modifications_out(&c.modifications),
        distances: (&c.distances).into(),
        optimal_pair_member: member,
    }
}

pub fn check_report(system: &System) -> CheckReport {
    let report = check_consistency(system);
    CheckReport {
        schema: SCHEMA_VERSION,
        command: "check".into(),
        composition: system.composition().name().into(),
        consistent: report.consistent,
        extremal: vector_out(&report.extremal),
        residual: vector_out(&report.residual),
    }
}

pub fn cheb_report(system: &System) -> crate::Result<ChebReport> {
    let report: RhsChebReport = match system.composition() {
        Composition::MaxMin => rhs_cheb_report(system)?,
        Composition::MinMax => nabla_rhs(system)?,
    };
    Ok(ChebReport {
        schema: SCHEMA_VERSION,
        command: "cheb".into(),
        composition: system.composition().name().into(),
        delta: (&report.delta).into(),
        row_deltas: vector_out(&report.row_deltas),
        shifted_rhs: vector_out(&report.shifted_rhs),
        b_hat: vector_out(&report.b_hat),
        eta: vector_out(&report.eta),
    })
}

pub fn repair_report(system: &System, options: &RepairOptions) -> crate::Result<RepairReport> {
    let (a, b) = (system.matrix(), system.rhs());
    let (outcome, optimal) = match system.composition() {
        Composition::MaxMin => (crate::repair::repair(a, b, options)?, optimal_pairs(a, b)),
        Composition::MinMax => (dual_repair(a, b, options)?, dual_optimal_pairs(a, b)),
    };
    let member = |c: &RepairCandidate| optimal.consistent() || optimal.contains(&c.pairs);
    Ok(RepairReport {
        schema: SCHEMA_VERSION,
        command: "repair".into(),
        composition: system.composition().name().into(),
        norm: options.norm.name().into(),
        distance: (&outcome.distance).into(),
        repaired: candidate_out(&outcome.best, member(&outcome.best)),
        candidates: options.collect_all.then(|| {
            outcome
                .ties
                .iter()
                .map(|c| candidate_out(c, member(c)))
                .collect()
        }),
    })
}

pub fn mdelta_report(system: &System) -> MdeltaReport {
    let (a, b) = (system.matrix(), system.rhs());
    let value = match system.composition() {
        Composition::MaxMin => mdelta_inf(a, b),
        Composition::MinMax => nabla_inf(a, b),
    };
    MdeltaReport {
        schema: SCHEMA_VERSION,
        command: "mdelta".into(),
        composition: system.composition().name().into(),
        mdelta: (&value).into(),
    }
}

fn join(values: &[ExactValue]) -> String {
    let parts: Vec<&str> = values.iter().map(|v| v.decimal.as_str()).collect();
    format!("[{}]", parts.join(", "))
}

fn join_pairs(pairs: &[PairOut]) -> String {
    let parts: Vec<String> = pairs
        .iter()
        .map(|p| format!("({}, {})", p.row, p.col))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn pretty_matrix(out: &mut String, rows: &[Vec<ExactValue>]) {
    for row in rows {
        out.push_str("  ");
        out.push_str(&join(row));
        out.push('\n');
    }
}

fn pretty_candidate(out: &mut String, c: &CandidateOut) {
    let rows: Vec<String> = c.pairs.iter().map(|p| p.row.to_string()).collect();
    let cols: Vec<String> = c.pairs.iter().map(|p| p.col.to_string()).collect();
    out.push_str(&format!(
        "rows: ({})\ncols: ({})\n",
        rows.join(", "),
        cols.join(", ")
    ));
    out.push_str("matrix:\n");
    pretty_matrix(out, &c.matrix);
    out.push_str(&format!(
        "modified: {} (direct {}, spill {})\n",
        join_pairs(&c.modifications.all),
        join_pairs(&c.modifications.direct),
        join_pairs(&c.modifications.spill)
    ));
    out.push_str(&format!(
        "distances: l1 {}, l2 {}, linf {}\n",
        c.distances.l1.decimal, c.distances.l2.decimal, c.distances.linf.decimal
    ));
}

fn render<T: Serialize>(format: Format, report: &T, pretty: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
            text.push('\n');
            text
        }
        Format::Pretty => pretty(report),
    }
}

fn execute(command: Command, format: Format) -> Result<(String, i32), Failure> {
    match command {
        Command::Check { file } => {
            let report = check_report(&load_system(&file)?);
            let code = if report.consistent {
                EXIT_OK
            } else {
                EXIT_INCONSISTENT
            };
            let text = render(format, &report, |r| {
                format!(
                    "composition: {}\nconsistent: {}\nextremal: {}\nresidual: {}\n",
                    r.composition,
                    r.consistent,
                    join(&r.extremal),
                    join(&r.residual)
                )
            });
            Ok((text, code))
        }
        Command::Cheb { file } => {
            let report = cheb_report(&load_system(&file)?)?;
            let text = render(format, &report, |r| {
                format!(
                    "composition: {}\ndelta: {}\nrow deltas: {}\nshifted rhs: {}\napproximation: {}\napproximate solution: {}\n",
                    r.composition,
                    r.delta.decimal,
                    join(&r.row_deltas),
                    join(&r.shifted_rhs),
                    join(&r.b_hat),
                    join(&r.eta)
                )
            });
            Ok((text, EXIT_OK))
        }
        Command::Repair {
            file,
            norm,
            all,
            cap,
        } => {
            let options = RepairOptions::new(norm).with_cap(cap).with_all(all);
            let report = repair_report(&load_system(&file)?, &options)?;
            let text = render(format, &report, |r| {
                let mut out = format!(
                    "composition: {}\nnorm: {}\ndistance: {}\n",
                    r.composition, r.norm, r.distance.decimal
                );
                pretty_candidate(&mut out, &r.repaired);
                if let Some(candidates) = &r.candidates {
                    out.push_str(&format!("\noptimal candidates: {}\n", candidates.len()));
                    for (n, c) in candidates.iter().enumerate() {
                        let tag = if c.optimal_pair_member {
                            ""
                        } else {
                            " (not built from best columns)"
                        };
                        out.push_str(&format!("\ncandidate {}{tag}\n", n + 1));
                        pretty_candidate(&mut out, c);
                    }
                }
                out
            });
            Ok((text, EXIT_OK))
        }
        Command::Mdelta { file } => {
            let report = mdelta_report(&load_system(&file)?);
            let text = render(format, &report, |r| {
                format!(
                    "composition: {}\nmdelta: {}\n",
                    r.composition, r.mdelta.decimal
                )
            });
            Ok((text, EXIT_OK))
        }
    }
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(args.command, args.format) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            code
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decimal::parse_rational;

    const E2_JSON: &str = r#"{
        "matrix": [["0.04", "0.73", "0.50"], [0.33, 0.35, 0.94], ["0.55", "0.90", "0.35"]],
        "rhs": ["0.30", "0.42", "0.76"],
        "composition": "max-min"
    }"#;

    #[test]
    fn json_accepts_strings_and_numbers() {
        let s = parse_json(E2_JSON).unwrap();
        assert_eq!(s.matrix().get(1, 2).to_string(), "0.94");
        assert_eq!(s.composition(), Composition::MaxMin);
    }

    #[test]
    fn json_requires_composition() {
        let missing = r#"{"matrix": [["0.1"]], "rhs": ["0.1"]}"#;
        assert!(matches!(parse_json(missing), Err(Error::Malformed { .. })));
    }

    #[test]
    fn json_rejects_bad_values() {
        let bad = r#"{"matrix": [["1.5"]], "rhs": ["0.1"], "composition": "max-min"}"#;
        assert!(matches!(parse_json(bad), Err(Error::OutOfRange { .. })));
        let ragged = r#"{"matrix": [["0.1"], ["0.1", "0.2"]], "rhs": ["0.1", "0.2"], "composition": "max-min"}"#;
        assert!(parse_json(ragged).is_err());
        let short = r#"{"matrix": [["0.1"]], "rhs": ["0.1", "0.2"], "composition": "max-min"}"#;
        assert!(matches!(
            parse_json(short),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let text = "composition=max-min\n0.04,0.73,0.50,0.30\n0.33, 0.35, 0.94, 0.42\n0.55,0.90,0.35,0.76\n";
        assert_eq!(parse_csv(text).unwrap(), parse_json(E2_JSON).unwrap());
        assert!(parse_csv("0.1,0.2\n").is_err());
        assert!(parse_csv("composition=min-max\n0.5\n").is_err());
    }

    #[test]
    fn document_round_trip() {
        let s = parse_json(E2_JSON).unwrap();
        let doc = SystemDocument::from_system(&s);
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(parse_json(&text).unwrap(), s);
    }

    #[test]
    fn reports_round_trip_exactly() {
        let s = parse_json(E2_JSON).unwrap();
        let report = repair_report(&s, &RepairOptions::new(Norm::L2).with_all(true)).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let back: RepairReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        let squared = back.distance.squared.unwrap();
        assert_eq!(
            parse_rational(&squared.ratio).unwrap(),
            parse_rational("0.0522").unwrap()
        );
        assert_eq!(
            parse_rational(&squared.decimal).unwrap(),
            parse_rational(&squared.ratio).unwrap()
        );
    }

    #[test]
    fn exact_value_for_repeating_decimal() {
        let third = ExactValue::from_ratio(&parse_rational("1/3").unwrap());
        assert_eq!(third.ratio, "1/3");
        assert_eq!(third.decimal, "0.333333333333");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            exit_code(&Error::BudgetExceeded { m: 3, h: 2, cap: 1 }),
            EXIT_BUDGET
        );
        assert_eq!(exit_code(&Error::Internal("x".into())), EXIT_INTERNAL);
        assert_eq!(
            exit_code(&Error::OutOfRange { token: "2".into() }),
            EXIT_INPUT
        );
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(
            run(["fuzzyrel", "frobnicate"], &mut out, &mut err),
            EXIT_USAGE
        );
        assert_eq!(
            run(
                ["fuzzyrel", "check", "/nonexistent/x.json"],
                &mut out,
                &mut err
            ),
            EXIT_INPUT
        );
    }
}
