//! Command-line front end for the genus0 workbench: prints the character
//! tables, runs the consistency suites, and exports rows as JSON.
//!
//! Exit codes: 0 on success, 1 when a verification comparison fails (or a
//! series cannot be built), 2 on usage errors.

use std::fs;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use genus0::arnold::{betti_config, contraction_kernel, equivariant_characteristic};
use genus0::duality::pairing_and_ranks;
use genus0::operads::{
    ch_braid, ch_classical, ch_grav, ch_hycom, ch_moduli_open, euler_frobenius,
    hycom_substitution_report, poincare_polynomial, reference_compact_rows, reference_open_rows,
    verify_identity, ClassicalOperad, OperadCharTable, OperadIdentity, Space,
};
use genus0::partition::Partition;
use genus0::ratfun::RatFun;
use genus0::symseries::{Basis, SymSeries};
use genus0::trees::{count_stable_trees_by_edges, count_t1, stratification_euler_check};

#[derive(Parser)]
#[command(name = "genus0", version, about = "Exact character tables for the genus-zero operads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a character table, one arity per line.
    Table {
        which: TableKind,
        /// Largest arity to print.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=12))]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = BasisArg::Schur)]
        basis: BasisArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Space for `betti`: config, open, or compact.
        #[arg(long)]
        space: Option<SpaceArg>,
        /// Number of points (config) or marked points (open, compact) for `betti`.
        #[arg(long)]
        n: Option<u32>,
    },
    /// Recompute a suite of identities and report one line per comparison.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Largest arity the arity-indexed comparisons reach.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(2..=10))]
        n_max: u32,
        /// Weight cap for the assembled-series identities.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(4..=12))]
        deg_max: u32,
        /// Worker threads; output order stays fixed by suite position.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=64))]
        jobs: u32,
    },
    /// Serialize one table row as symseries-v1 JSON.
    Export {
        which: RowKind,
        /// Arity of the row.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12))]
        n: u32,
        #[arg(long, value_enum, default_value_t = BasisArg::Schur)]
        basis: BasisArg,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    ModuliOpen,
    ModuliCompact,
    Grav,
    Braid,
    Lie,
    Betti,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RowKind {
    ModuliOpen,
    ModuliCompact,
    Grav,
    Braid,
    Lie,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Schur,
    Power,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Config,
    Open,
    Compact,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Tables,
    Identities,
    Trees,
    Duality,
    Arnold,
    All,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    std::process::exit(code);
}

fn run(command: Command) -> anyhow::Result<i32> {
    match command {
        Command::Table { which, n_max, basis, format, out, space, n } => {
            run_table(which, n_max, basis, format, out, space, n)
        }
        Command::Verify { suite, n_max, deg_max, jobs } => {
            run_verify(suite, n_max, deg_max, jobs as usize)
        }
        Command::Export { which, n, basis, out } => run_export(which, n, basis, out),
    }
}

/// Prints a usage complaint and exits with the usage code, mirroring how
/// the argument parser reports its own errors.
fn usage_error(message: &str) -> ! {
    eprintln!("error: {message}");
    std::process::exit(2);
}

fn emit(out: Option<PathBuf>, text: String) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text + "\n")?,
        None => {
            // A reader that stops early (`head`, a closed pager) is not an
            // error worth reporting.
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = writeln!(stdout, "{text}") {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    std::process::exit(0);
                }
                return Err(e.into());
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// table

fn run_table(
    which: TableKind,
    n_max: u32,
    basis: BasisArg,
    format: FormatArg,
    out: Option<PathBuf>,
    space: Option<SpaceArg>,
    n: Option<u32>,
) -> anyhow::Result<i32> {
    if which == TableKind::Betti {
        let (Some(space), Some(n)) = (space, n) else {
            usage_error("`table betti` needs both --space and --n");
        };
        let space = match space {
            SpaceArg::Config => Space::Config,
            SpaceArg::Open => Space::Open,
            SpaceArg::Compact => Space::Compact,
        };
        let poly = poincare_polynomial(space, n)?;
        let text = match format {
            FormatArg::Text => poly.to_string(),
            FormatArg::Json => serde_json::to_string_pretty(&json_ratfun(&poly))?,
        };
        emit(out, text)?;
        return Ok(0);
    }
    if space.is_some() || n.is_some() {
        usage_error("--space and --n apply only to `table betti`");
    }
    let table = build_table(which, n_max)?;
    let mut rows = Vec::new();
    for (arity, row) in table.iter() {
        if arity > n_max {
            continue;
        }
        let row = convert(row, basis)?;
        rows.push((arity, row));
    }
    let text = match format {
        FormatArg::Text => {
            let lines: Vec<String> =
                rows.iter().map(|(a, r)| format!("{a}: {r}")).collect();
            lines.join("\n")
        }
        FormatArg::Json => {
            let entries: Vec<JsonRow> = rows
                .iter()
                .map(|(a, r)| JsonRow { n: *a, series: json_series(r) })
                .collect();
            serde_json::to_string_pretty(&entries)?
        }
    };
    emit(out, text)?;
    Ok(0)
}

fn build_table(which: TableKind, n_max: u32) -> genus0::Result<OperadCharTable> {
    let cap = n_max.max(3);
    match which {
        TableKind::ModuliOpen => ch_moduli_open(cap),
        TableKind::ModuliCompact => ch_hycom(cap),
        TableKind::Grav => ch_grav(cap),
        TableKind::Braid => ch_braid(cap),
        TableKind::Lie => ch_classical(ClassicalOperad::Lie, cap),
        TableKind::Betti => unreachable!("betti is handled before the table build"),
    }
}

fn convert(row: &SymSeries, basis: BasisArg) -> genus0::Result<SymSeries> {
    match basis {
        BasisArg::Schur => row.to_schur(),
        BasisArg::Power => row.to_power(),
    }
}

// ---------------------------------------------------------------------------
// export

#[derive(Serialize, Deserialize)]
struct JsonRow {
    n: u32,
    series: JsonSeries,
}

#[derive(Serialize, Deserialize)]
struct JsonSeries {
    schema: String,
    basis: String,
    degree_cap: u32,
    terms: Vec<JsonTerm>,
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    partition: Vec<u32>,
    coeff: JsonCoeff,
}

/// Numerator and denominator coefficients in ascending t-degree, as decimal
/// strings so arbitrary-precision integers survive the trip.
#[derive(Serialize, Deserialize)]
struct JsonCoeff {
    num: Vec<String>,
    den: Vec<String>,
}

fn json_ratfun(c: &RatFun) -> JsonCoeff {
    let (num, den) = c.fraction_coeffs();
    JsonCoeff {
        num: num.iter().map(BigInt::to_string).collect(),
        den: den.iter().map(BigInt::to_string).collect(),
    }
}

fn json_series(series: &SymSeries) -> JsonSeries {
    let basis = match series.basis() {
        Basis::Schur => "schur",
        Basis::Power => "power",
        Basis::Complete => "complete",
        Basis::Elementary => "elementary",
    };
    JsonSeries {
        schema: "symseries-v1".to_string(),
        basis: basis.to_string(),
        degree_cap: series.cap(),
        terms: series
            .iter()
            .map(|(lam, c)| JsonTerm { partition: lam.parts().to_vec(), coeff: json_ratfun(c) })
            .collect(),
    }
}

fn parse_bigints(strings: &[String]) -> anyhow::Result<Vec<BigInt>> {
    strings
        .iter()
        .map(|s| BigInt::from_str(s).map_err(|e| anyhow::anyhow!("bad integer {s:?}: {e}")))
        .collect()
}

fn series_from_json(json: &JsonSeries) -> anyhow::Result<SymSeries> {
    if json.schema != "symseries-v1" {
        anyhow::bail!("unsupported schema {:?}", json.schema);
    }
    let basis = match json.basis.as_str() {
        "schur" => Basis::Schur,
        "power" => Basis::Power,
        "complete" => Basis::Complete,
        "elementary" => Basis::Elementary,
        other => anyhow::bail!("unsupported basis {other:?}"),
    };
    let mut series = SymSeries::zero(basis, json.degree_cap);
    for term in &json.terms {
        let lam = Partition::from_unsorted(term.partition.clone())?;
        let coeff =
            RatFun::from_fraction_coeffs(parse_bigints(&term.coeff.num)?, parse_bigints(&term.coeff.den)?)?;
        series.insert(lam, coeff)?;
    }
    Ok(series)
}

fn run_export(which: RowKind, n: u32, basis: BasisArg, out: Option<PathBuf>) -> anyhow::Result<i32> {
    let table_kind = match which {
        RowKind::ModuliOpen => TableKind::ModuliOpen,
        RowKind::ModuliCompact => TableKind::ModuliCompact,
        RowKind::Grav => TableKind::Grav,
        RowKind::Braid => TableKind::Braid,
        RowKind::Lie => TableKind::Lie,
    };
    let table = match build_table(table_kind, n) {
        Ok(table) => table,
        Err(genus0::Error::ArityOutOfRange(_, detail)) => usage_error(&detail),
        Err(e) => return Err(e.into()),
    };
    let row = match table.row(n) {
        Ok(row) => convert(row, basis)?,
        Err(genus0::Error::ArityOutOfRange(_, detail)) => usage_error(&detail),
        Err(e) => return Err(e.into()),
    };
    emit(out, serde_json::to_string_pretty(&json_series(&row))?)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify

/// One recomputation with a fixed name; `Ok` carries the detail to print on
/// a pass, `Err` the first disagreement.
struct Check {
    name: String,
    run: Box<dyn Fn() -> Result<String, String> + Send + Sync>,
}

impl Check {
    fn new(
        name: impl Into<String>,
        run: impl Fn() -> Result<String, String> + Send + Sync + 'static,
    ) -> Check {
        Check { name: name.into(), run: Box::new(run) }
    }
}

fn es(e: genus0::Error) -> String {
    e.to_string()
}

fn run_verify(suite: SuiteArg, n_max: u32, deg_max: u32, jobs: usize) -> anyhow::Result<i32> {
    let label = match suite {
        SuiteArg::Tables => "tables",
        SuiteArg::Identities => "identities",
        SuiteArg::Trees => "trees",
        SuiteArg::Duality => "duality",
        SuiteArg::Arnold => "arnold",
        SuiteArg::All => "all",
    };
    let mut checks = Vec::new();
    if matches!(suite, SuiteArg::Tables | SuiteArg::All) {
        table_checks(&mut checks, n_max)?;
    }
    if matches!(suite, SuiteArg::Identities | SuiteArg::All) {
        identity_checks(&mut checks, deg_max);
    }
    if matches!(suite, SuiteArg::Trees | SuiteArg::All) {
        tree_checks(&mut checks, n_max);
    }
    if matches!(suite, SuiteArg::Duality | SuiteArg::All) {
        duality_checks(&mut checks, n_max);
    }
    if matches!(suite, SuiteArg::Arnold | SuiteArg::All) {
        arnold_checks(&mut checks, n_max);
    }
    if matches!(suite, SuiteArg::All) {
        checks.push(Check::new("export/round trip", round_trip_check));
    }
    let results = run_checks(&checks, jobs);
    let mut failed = 0usize;
    let mut report = String::new();
    for (check, result) in checks.iter().zip(&results) {
        match result {
            Ok(detail) => report.push_str(&format!("PASS {}: {detail}\n", check.name)),
            Err(detail) => {
                failed += 1;
                report.push_str(&format!("FAIL {}: {detail}\n", check.name));
            }
        }
    }
    report.push_str(&format!(
        "suite {label}: {} comparisons, {}",
        results.len(),
        if failed == 0 { "all passed".to_string() } else { format!("{failed} failed") }
    ));
    let code = if failed == 0 { 0 } else { 1 };
    // The verdict is settled before printing starts, so a reader that hangs
    // up mid-report still sees the right exit code.
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = writeln!(stdout, "{report}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(code);
        }
        return Err(e.into());
    }
    Ok(code)
}

/// Runs every check and returns results in suite order regardless of which
/// worker finished first.
fn run_checks(checks: &[Check], jobs: usize) -> Vec<Result<String, String>> {
    if jobs <= 1 || checks.len() <= 1 {
        return checks.iter().map(|c| (c.run)()).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<String, String>>>> =
        checks.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(checks.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= checks.len() {
                    break;
                }
                let result = (checks[i].run)();
                *slots[i].lock().expect("result slot") = Some(result);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().expect("result slot").expect("worker stored a result"))
        .collect()
}

/// Every arity-indexed row with a frozen literal: open and compact rows up
/// to arity 6, the lowest gravity row, the lowest braid row.
fn table_checks(checks: &mut Vec<Check>, n_max: u32) -> anyhow::Result<()> {
    for (n, want) in reference_open_rows()? {
        if n > n_max {
            continue;
        }
        checks.push(Check::new(format!("tables/open row {n}"), move || {
            let got = ch_moduli_open(n).and_then(|t| t.row(n)?.to_schur()).map_err(es)?;
            match got.first_mismatch(&want) {
                None => got.schur_text().map_err(es),
                Some((lam, a, b)) => Err(format!("coefficient of s_{lam}: {a} vs {b}")),
            }
        }));
    }
    for (n, want) in reference_compact_rows()? {
        if n > n_max {
            continue;
        }
        checks.push(Check::new(format!("tables/compact row {n}"), move || {
            let got = ch_hycom(n).and_then(|t| t.row(n)?.to_schur()).map_err(es)?;
            match got.first_mismatch(&want) {
                None => got.schur_text().map_err(es),
                Some((lam, a, b)) => Err(format!("coefficient of s_{lam}: {a} vs {b}")),
            }
        }));
    }
    if n_max >= 3 {
        checks.push(Check::new("tables/grav row 3", || {
            let got = ch_grav(3).and_then(|t| t.row(3)?.to_schur()).map_err(es)?;
            let want = SymSeries::e(3, 3).and_then(|e| e.to_schur()).map_err(es)?;
            match got.first_mismatch(&want) {
                None => got.schur_text().map_err(es),
                Some((lam, a, b)) => Err(format!("coefficient of s_{lam}: {a} vs {b}")),
            }
        }));
    }
    checks.push(Check::new("tables/braid row 2", || {
        let got = ch_braid(2).and_then(|t| t.row(2)?.to_schur()).map_err(es)?;
        let want = SymSeries::h(2, 2)
            .and_then(|h| h.to_schur())
            .map(|h| h.scale(&RatFun::poly(&[1, -1])))
            .map_err(es)?;
        match got.first_mismatch(&want) {
            None => got.schur_text().map_err(es),
            Some((lam, a, b)) => Err(format!("coefficient of s_{lam}: {a} vs {b}")),
        }
    }));
    Ok(())
}

fn identity_checks(checks: &mut Vec<Check>, deg_max: u32) {
    let identities = [
        (OperadIdentity::PoincareBirkhoffWitt, "identities/pbw factorization"),
        (OperadIdentity::BraidFactorization, "identities/braid product"),
        (OperadIdentity::OpenClosed, "identities/open-closed residue"),
        (OperadIdentity::GravityConsistency, "identities/gravity suspension"),
    ];
    for (which, name) in identities {
        checks.push(Check::new(name, move || {
            let report = verify_identity(which, deg_max).map_err(es)?;
            if report.passed {
                Ok(report.detail)
            } else {
                Err(report
                    .first_mismatch
                    .map(|m| m.describe())
                    .unwrap_or(report.detail))
            }
        }));
    }
    checks.push(Check::new("identities/euler at t = 1", move || {
        euler_frobenius(deg_max).map_err(es)?;
        Ok(format!("closed form matches t = 1 of every open row through arity {deg_max}"))
    }));
    checks.push(Check::new("identities/compact stratification", move || {
        let report = hycom_substitution_report(deg_max).map_err(es)?;
        let refuted =
            report.candidates.iter().filter(|c| c.first_mismatch.is_some()).count();
        if report.stratification_matches_tables {
            Ok(format!(
                "stratification rows match the reference tables; {refuted}/{} closed-form substitutions refuted",
                report.candidates.len()
            ))
        } else {
            Err("stratification rows disagree with the reference tables".to_string())
        }
    }));
}

fn double_factorial(k: i64) -> BigInt {
    let mut out = BigInt::from(1);
    let mut i = k;
    while i > 1 {
        out *= i;
        i -= 2;
    }
    out
}

fn tree_checks(checks: &mut Vec<Check>, n_max: u32) {
    const TOTALS: [u64; 6] = [1, 4, 26, 236, 2752, 39208];
    for n in 3..=n_max.min(8) {
        checks.push(Check::new(format!("trees/edge counts n = {n}"), move || {
            let counts = count_stable_trees_by_edges(n).map_err(es)?;
            if counts[0] != BigInt::from(1) {
                return Err(format!("{} corollas", counts[0]));
            }
            if n >= 4 {
                let want = count_t1(n).map_err(es)?;
                if counts[1] != want {
                    return Err(format!("one-edge count {} vs {want}", counts[1]));
                }
            }
            let trivalent = counts.last().expect("arity three and up has a corolla");
            let want = double_factorial(2 * n as i64 - 5);
            if *trivalent != want {
                return Err(format!("trivalent count {trivalent} vs {want}"));
            }
            let total: BigInt = counts.iter().sum();
            if total != BigInt::from(TOTALS[(n - 3) as usize]) {
                return Err(format!("total {total} vs {}", TOTALS[(n - 3) as usize]));
            }
            Ok(format!("one-edge {}, trivalent {trivalent}, total {total}", counts[1.min(counts.len() - 1)]))
        }));
    }
    for n in 3..=n_max.min(7) {
        checks.push(Check::new(format!("trees/stratification n = {n}"), move || {
            for p in 0..=n - 3 {
                let report = stratification_euler_check(n, p).map_err(es)?;
                if report.open_side != report.tree_side {
                    return Err(format!(
                        "p = {p}: open side {} vs tree side {}",
                        report.open_side, report.tree_side
                    ));
                }
            }
            Ok(format!("Euler numbers agree for p = 0..={}", n - 3))
        }));
    }
}

fn duality_checks(checks: &mut Vec<Check>, n_max: u32) {
    for n in 4..=n_max.min(7) {
        checks.push(Check::new(format!("duality/n = {n}"), move || {
            let report = pairing_and_ranks(n).map_err(es)?;
            let dim = (1usize << (n - 1)) - n as usize - 1;
            let hycom = (n as usize - 1) * (n as usize - 2) / 2 - 1;
            let detail = format!(
                "(dim_basis, grav_span, hycom_span, pairing_rank) = ({}, {}, {}, {})",
                report.dim_basis, report.grav_span, report.hycom_span, report.pairing_rank
            );
            let ok = report.dim_basis == dim
                && report.hycom_span == hycom
                && report.grav_span == dim - hycom
                && report.pairing_rank == 0;
            if ok {
                Ok(detail)
            } else {
                Err(detail)
            }
        }));
    }
}

fn arnold_checks(checks: &mut Vec<Check>, n_max: u32) {
    let points_max = n_max.saturating_sub(1).min(6);
    for points in 2..=points_max {
        checks.push(Check::new(format!("arnold/betti {points} points"), move || {
            betti_config(points).map(|poly| poly.to_string()).map_err(es)
        }));
        checks.push(Check::new(format!("arnold/kernel {points} points"), move || {
            let layers = contraction_kernel(points).map_err(es)?;
            let dims: Vec<String> =
                layers.iter().map(|l| l.basis.len().to_string()).collect();
            Ok(format!("dimensions {}", dims.join(", ")))
        }));
        checks.push(Check::new(format!("arnold/characters {points} points"), move || {
            let row = equivariant_characteristic(points).map_err(es)?;
            row.schur_text().map_err(es)
        }));
    }
}

fn round_trip_check() -> Result<String, String> {
    let schur = ch_moduli_open(5)
        .and_then(|t| t.row(5)?.to_schur())
        .map_err(es)?;
    let power = ch_braid(4).and_then(|t| t.row(4)?.to_power()).map_err(es)?;
    for (label, row) in [("schur", &schur), ("power", &power)] {
        let text = serde_json::to_string(&json_series(row)).map_err(|e| e.to_string())?;
        let parsed: JsonSeries = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let back = series_from_json(&parsed).map_err(|e| e.to_string())?;
        if back.basis() != row.basis() || back.cap() != row.cap() {
            return Err(format!("{label} row changed basis or cap"));
        }
        if let Some((lam, a, b)) = row.first_mismatch(&back) {
            return Err(format!("{label} row coefficient of {lam}: {a} vs {b}"));
        }
    }
    Ok("schur and power rows survive the JSON round trip".to_string())
}
