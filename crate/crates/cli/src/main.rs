//! `rbsa` — Rota-Baxter operators on small semigroup algebras.
//!
//! Subcommands: `catalog`, `equations`, `verify-matrix`, `verify-families`,
//! `solve-modp`, `check`, `enumerate`. Exit codes: 0 success/pass,
//! 1 verification fail, 2 not associative, 3 bad input, 4 unsupported
//! parameter. All output is deterministic for a fixed invocation.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rbsa_core::families::{
    family_catalog, load_families, verify_family, FamilyError, ParametricFamily,
};
use rbsa_core::field::Rational;
use rbsa_core::oracle::{completeness_check, solve_modp, ClassificationReport, OracleError};
use rbsa_core::rbsystem::{
    export_system, generate_system, rb_defect, ExportFormat, OperatorMatrix, RbError,
};
use rbsa_core::semigroup::{
    catalog, catalog_entry, classify, enumerate_semigroups, CayleyTable, ClassifyMode,
    SemigroupError,
};
use rbsa_core::Rationals;

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_NOT_ASSOCIATIVE: u8 = 2;
const EXIT_BAD_INPUT: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "rbsa",
    about = "Rota-Baxter operators on semigroup algebras of order two and three",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the 22 cataloged semigroups with order, commutativity and
    /// solution-family count.
    Catalog,
    /// Generate the defining polynomial system for a semigroup algebra.
    Equations(EquationsArgs),
    /// Check one operator matrix against the Rota-Baxter identity.
    #[command(name = "verify-matrix")]
    VerifyMatrix(VerifyMatrixArgs),
    /// Verify solution families symbolically (zero residuals).
    #[command(name = "verify-families")]
    VerifyFamilies(VerifyFamiliesArgs),
    /// Exhaustively solve the system over a small prime field.
    #[command(name = "solve-modp")]
    SolveModp(SolveArgs),
    /// Compare the exhaustive solution set against the family union.
    Check(CheckArgs),
    /// Enumerate all semigroups of a given order and count classes.
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// Catalog id (e.g. N2, CS(1), NCS(5)) or "all" where supported.
    selector: Option<String>,
    /// Catalog id (alternative to the positional selector).
    #[arg(long)]
    sg: Option<String>,
    /// Path to a Cayley-table JSON file: {"n": 2, "table": [[1,1],[2,2]]}.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct EquationsArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Rota-Baxter weight λ, as a rational literal like 0, 1 or -1/2.
    #[arg(long, default_value = "0")]
    weight: String,
    /// Output format: text, json, latex or cas.
    #[arg(long, default_value = "text")]
    format: String,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyMatrixArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Path to an operator-matrix JSON file:
    /// {"n": 2, "c": [["1","-1/3"],["3","-1"]]}.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, default_value = "0")]
    weight: String,
}

#[derive(Args)]
struct VerifyFamiliesArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Verify families from this JSON file instead of the built-in catalog.
    #[arg(long)]
    families: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Prime field characteristic (7, 11 or 13).
    #[arg(long, default_value_t = 7)]
    prime: u64,
    #[arg(long, default_value = "0")]
    weight: String,
    /// Output format: text or json.
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the scan (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 7)]
    prime: u64,
    /// Write the JSON reports to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Semigroup order (1..=3).
    order: usize,
}

/// A failure carrying its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn bad_input(message: impl Into<String>) -> Failure {
    Failure::new(EXIT_BAD_INPUT, message)
}

impl From<RbError> for Failure {
    fn from(e: RbError) -> Self {
        let code = match e {
            RbError::NotAssociative => EXIT_NOT_ASSOCIATIVE,
            RbError::UnsupportedFormat(_) => EXIT_UNSUPPORTED,
            _ => EXIT_BAD_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match &e {
            OracleError::UnsupportedPrime(_) => EXIT_UNSUPPORTED,
            OracleError::Rb(RbError::NotAssociative) => EXIT_NOT_ASSOCIATIVE,
            OracleError::Family(FamilyError::UnsupportedPrime(_)) => EXIT_UNSUPPORTED,
            _ => EXIT_BAD_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        let code = match &e {
            FamilyError::UnsupportedPrime(_) => EXIT_UNSUPPORTED,
            _ => EXIT_BAD_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<SemigroupError> for Failure {
    fn from(e: SemigroupError) -> Self {
        Failure::new(EXIT_BAD_INPUT, e.to_string())
    }
}

/// What a source argument resolved to.
enum Source {
    One(String, CayleyTable),
    Table(CayleyTable),
    All,
}

impl SourceArgs {
    fn resolve(&self, allow_all: bool, default_all: bool) -> Result<Source, Failure> {
        let mut picks = 0;
        picks += usize::from(self.selector.is_some());
        picks += usize::from(self.sg.is_some());
        picks += usize::from(self.table.is_some());
        if picks > 1 {
            return Err(bad_input("give exactly one of: a selector, --sg, --table"));
        }
        if picks == 0 {
            return if default_all {
                Ok(Source::All)
            } else {
                Err(bad_input("no semigroup given: pass an id, --sg or --table"))
            };
        }
        if let Some(path) = &self.table {
            let text = fs::read_to_string(path)
                .map_err(|e| bad_input(format!("cannot read {}: {e}", path.display())))?;
            let table: CayleyTable = serde_json::from_str(&text)
                .map_err(|e| bad_input(format!("bad table JSON: {e}")))?;
            return Ok(Source::Table(table));
        }
        let id = self.selector.clone().or_else(|| self.sg.clone()).unwrap();
        if id == "all" {
            if allow_all {
                return Ok(Source::All);
            }
            return Err(bad_input("\"all\" is not valid for this command"));
        }
        let entry =
            catalog_entry(&id).ok_or_else(|| bad_input(format!("unknown semigroup id: {id}")))?;
        Ok(Source::One(id, entry.table))
    }
}

fn parse_weight(text: &str) -> Result<Rational, Failure> {
    text.parse()
        .map_err(|e| bad_input(format!("bad weight '{text}': {e}")))
}

fn write_output(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| bad_input(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| bad_input(format!("cannot write stdout: {e}"))),
    }
}

fn configure_pool(jobs: Option<usize>) -> Result<(), Failure> {
    if let Some(k) = jobs {
        if k == 0 {
            return Err(bad_input("--jobs must be at least 1"));
        }
        rbsa_core::oracle::set_worker_threads(k)
            .map_err(|e| bad_input(format!("cannot configure worker pool: {e}")))?;
    }
    Ok(())
}

fn cmd_catalog() -> CmdResult {
    let families = family_catalog();
    for entry in catalog() {
        let count = families.iter().filter(|f| f.semigroup == entry.id).count();
        let kind = if entry.commutative {
            "commutative"
        } else {
            "noncommutative"
        };
        println!(
            "{} order={} {} families={}",
            entry.id,
            entry.table.order(),
            kind,
            count
        );
    }
    Ok(EXIT_OK)
}

fn cmd_equations(args: &EquationsArgs) -> CmdResult {
    let table = match args.source.resolve(false, false)? {
        Source::One(_, t) | Source::Table(t) => t,
        Source::All => unreachable!(),
    };
    let weight = parse_weight(&args.weight)?;
    let format: ExportFormat = args.format.parse().map_err(|_| {
        Failure::new(
            EXIT_UNSUPPORTED,
            format!("unsupported format: {}", args.format),
        )
    })?;
    let system = generate_system(&table, Rationals, &weight)?;
    let bytes = export_system(&system, format);
    write_output(&args.out, &bytes)?;
    Ok(EXIT_OK)
}

fn cmd_verify_matrix(args: &VerifyMatrixArgs) -> CmdResult {
    let table = match args.source.resolve(false, false)? {
        Source::One(_, t) | Source::Table(t) => t,
        Source::All => unreachable!(),
    };
    let weight = parse_weight(&args.weight)?;
    let text = fs::read_to_string(&args.matrix)
        .map_err(|e| bad_input(format!("cannot read {}: {e}", args.matrix.display())))?;
    let matrix: OperatorMatrix<Rationals> =
        serde_json::from_str(&text).map_err(|e| bad_input(format!("bad matrix JSON: {e}")))?;
    let defects = rb_defect(&table, &matrix, &weight)?;
    let n = table.order();
    let mut all_zero = true;
    for i in 1..=n {
        for j in 1..=n {
            let d = &defects[i - 1][j - 1];
            if d.iter().all(|x| x.is_zero()) {
                println!("defect[{i},{j}]: zero");
            } else {
                all_zero = false;
                let coords: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                println!("defect[{i},{j}]: nonzero ({})", coords.join(", "));
            }
        }
    }
    if all_zero {
        println!("verdict: Rota-Baxter operator (weight {weight})");
        Ok(EXIT_OK)
    } else {
        println!("verdict: not a Rota-Baxter operator (weight {weight})");
        Ok(EXIT_FAIL)
    }
}

fn cmd_verify_families(args: &VerifyFamiliesArgs) -> CmdResult {
    let families: Vec<ParametricFamily> = match &args.families {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| bad_input(format!("cannot read {}: {e}", path.display())))?;
            load_families(&text)?
        }
        None => family_catalog(),
    };
    let families: Vec<ParametricFamily> = match args.source.resolve(true, true)? {
        Source::All => families,
        Source::One(id, _) => families.into_iter().filter(|f| f.semigroup == id).collect(),
        Source::Table(_) => {
            return Err(bad_input(
                "--table is not valid here: families refer to catalog semigroups",
            ))
        }
    };
    if families.is_empty() {
        return Err(bad_input("no families selected"));
    }
    let total = families.len();
    let mut passed = 0usize;
    for family in &families {
        let report = verify_family(family)?;
        if report.pass {
            passed += 1;
            println!("family {} [{}]: pass", family.id, family.semigroup);
        } else {
            println!("family {} [{}]: FAIL", family.id, family.semigroup);
            for ((i, j, m), residual) in report.nonzero_residuals().take(3) {
                println!("  residual E[{i},{j},{m}]: {residual}");
            }
        }
    }
    println!("{passed}/{total} pass");
    Ok(if passed == total { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_solve(args: &SolveArgs) -> CmdResult {
    configure_pool(args.jobs)?;
    let weight = parse_weight(&args.weight)?;
    let (label, table) = match args.source.resolve(false, false)? {
        Source::One(id, t) => (id, t),
        Source::Table(t) => ("user-table".to_string(), t),
        Source::All => unreachable!(),
    };
    let solutions = solve_modp(&table, args.prime, &weight)?;
    match args.format.as_str() {
        "text" => {
            let mut out = String::new();
            out.push_str(&format!(
                "{label}: {} solutions over F_{} (weight {weight})\n",
                solutions.len(),
                args.prime
            ));
            for m in &solutions {
                let rows: Vec<String> = m
                    .rows()
                    .iter()
                    .map(|r| {
                        let vals: Vec<String> = r.iter().map(|x| x.value.to_string()).collect();
                        format!("[{}]", vals.join(","))
                    })
                    .collect();
                out.push_str(&format!("[{}]\n", rows.join(",")));
            }
            write_output(&args.out, out.as_bytes())?;
        }
        "json" => {
            let js = serde_json::json!({
                "semigroup": label,
                "p": args.prime,
                "weight": weight.to_string(),
                "count": solutions.len(),
                "solutions": solutions,
            });
            let mut bytes = serde_json::to_vec_pretty(&js).expect("serializable");
            bytes.push(b'\n');
            write_output(&args.out, &bytes)?;
        }
        other => {
            return Err(Failure::new(
                EXIT_UNSUPPORTED,
                format!("unsupported format: {other}"),
            ))
        }
    }
    Ok(EXIT_OK)
}

fn cmd_check(args: &CheckArgs) -> CmdResult {
    configure_pool(args.jobs)?;
    let ids: Vec<String> = match args.source.resolve(true, true)? {
        Source::All => catalog().iter().map(|e| e.id.to_string()).collect(),
        Source::One(id, _) => vec![id],
        Source::Table(_) => {
            return Err(bad_input(
                "--table is not valid here: the check needs cataloged families",
            ))
        }
    };
    let mut reports: Vec<ClassificationReport> = Vec::with_capacity(ids.len());
    println!("semigroup  p   bruteforce  family-union  missing  spurious  status");
    let mut all_pass = true;
    for id in &ids {
        let report = completeness_check(id, args.prime)?;
        println!(
            "{:<10} {:<3} {:<11} {:<13} {:<8} {:<9} {}",
            report.semigroup,
            report.p,
            report.bruteforce_count,
            report.family_union_count,
            report.missing.len(),
            report.spurious.len(),
            if report.pass { "pass" } else { "FAIL" }
        );
        all_pass &= report.pass;
        reports.push(report);
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    println!("summary: {passed}/{} pass", reports.len());
    if let Some(path) = &args.out {
        let mut bytes = serde_json::to_vec_pretty(&reports).expect("serializable");
        bytes.push(b'\n');
        fs::write(path, bytes)
            .map_err(|e| bad_input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_enumerate(args: &EnumerateArgs) -> CmdResult {
    let tables = enumerate_semigroups(args.order).map_err(|e| match e {
        SemigroupError::UnsupportedOrder(n) => {
            bad_input(format!("order {n} is out of range (supported: 1..=3)"))
        }
        other => Failure::from(other),
    })?;
    let iso = classify(&tables, ClassifyMode::Iso);
    let both = classify(&tables, ClassifyMode::IsoAndAnti);
    println!("order {}: associative tables: {}", args.order, tables.len());
    println!("classes up to isomorphism: {}", iso.len());
    println!(
        "classes up to isomorphism and anti-isomorphism: {}",
        both.len()
    );
    // Match each class to the catalog when the whole order is cataloged.
    let entries: Vec<_> = catalog()
        .into_iter()
        .filter(|e| e.table.order() == args.order)
        .collect();
    if !entries.is_empty() {
        let mut matched = 0usize;
        for rep in &both {
            let hits = entries
                .iter()
                .filter(|e| {
                    rep.find_isomorphism(&e.table)
                        .expect("same order")
                        .is_some()
                        || rep
                            .find_anti_isomorphism(&e.table)
                            .expect("same order")
                            .is_some()
                })
                .count();
            if hits == 1 {
                matched += 1;
            }
        }
        println!("catalog match: {matched}/{}", both.len());
    }
    Ok(EXIT_OK)
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Catalog => cmd_catalog(),
        Command::Equations(args) => cmd_equations(args),
        Command::VerifyMatrix(args) => cmd_verify_matrix(args),
        Command::VerifyFamilies(args) => cmd_verify_families(args),
        Command::SolveModp(args) => cmd_solve(args),
        Command::Check(args) => cmd_check(args),
        Command::Enumerate(args) => cmd_enumerate(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_BAD_INPUT,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
