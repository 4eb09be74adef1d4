//! Command-line front end: argument parsing, file formats and exit codes.
//!
//! Exit codes are 0 for success, 1 when methods disagree or checks fail, 2 for bad
//! input and 3 for internal invariant violations.

pub mod files;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cyclotomic::{alpha_solve, check_parameters, AlphaMap, CycError};
use crate::group::{GroupError, MaxClassGroup};
use crate::homology::{b0_oracle_with, HomologyError, OracleOptions};
use crate::multiplier::{b0_coinvariants, bounds_check, reconcile, theorem3_formula, B0Report, Method, MultiplierError};
use crate::verify::{check_group, fixtures, Check, VerifyOptions};
use files::{
    format_invariants, AlphaSolutionRecord, AlphaSolutionsFile, GroupSpecFile, ReportFile, ReportRecord,
    SkippedMethod, TableRow, ALPHA_SOLUTIONS_SCHEMA,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error("{0}")]
    Invariant(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadInput(_) | CliError::Io(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<CycError> for CliError {
    fn from(e: CycError) -> Self {
        match e {
            CycError::PrecisionMismatch { .. } | CycError::NotDivisible => CliError::Invariant(e.to_string()),
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::ModelInvalid(_) => CliError::Invariant(e.to_string()),
            GroupError::Cyc(c) => c.into(),
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

impl From<MultiplierError> for CliError {
    fn from(e: MultiplierError) -> Self {
        match e {
            MultiplierError::Disagreement(_) => CliError::Invariant(e.to_string()),
            MultiplierError::Group(g) => g.into(),
            MultiplierError::Cyc(c) => c.into(),
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Invariant(_) => CliError::Invariant(e.to_string()),
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "maxclass", version, about = "Bogomolov multipliers of p-groups of maximal class")]
pub struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build and validate a group, print its summary and write its spec file.
    Construct {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the Bogomolov multiplier by one or more methods.
    B0 {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Coinvariants)]
        method: MethodArg,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Printed closed formula against the computed values over a grid.
    Table {
        #[arg(long)]
        p: u32,
        /// Inclusive range `A..B`; `n` runs over `m+1..=2m-2` for each `m`.
        #[arg(long)]
        m_range: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property suite for one group, or the fixture set.
    Verify {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long)]
        fixtures: bool,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Replace the carry rule by a wrong one (negative control).
        #[arg(long, hide = true)]
        inject_wrong_carry: bool,
    },
    /// Print the relators of the finite presentation.
    Present {
        #[command(flatten)]
        case: CaseArgs,
        /// Evaluate every relator in the group.
        #[arg(long)]
        check: bool,
    },
    /// List the admissible commutator maps for given parameters.
    AlphaSolve {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write each basis map as its own spec file into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Largest solution group searched for a surjective example.
        #[arg(long, default_value_t = 100_000)]
        limit: u64,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct CaseArgs {
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Exponent of the canonical map.
    #[arg(long, conflicts_with = "alpha_file")]
    pub a: Option<u32>,
    /// Group spec file (as written by `construct` or `alpha-solve --out-dir`).
    #[arg(long)]
    pub alpha_file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OracleArgs {
    /// Largest order accepted by the homology oracle.
    #[arg(long)]
    pub oracle_cap: Option<usize>,
    /// Allow oracle runs above order 128.
    #[arg(long)]
    pub allow_large: bool,
}

impl OracleArgs {
    fn options(&self) -> OracleOptions {
        let mut o = OracleOptions::from_env().allow_large(self.allow_large);
        if let Some(cap) = self.oracle_cap {
            o.cap = cap;
        }
        o
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Formula,
    Coinvariants,
    Oracle,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl CaseArgs {
    fn is_empty(&self) -> bool {
        self.p.is_none() && self.n.is_none() && self.m.is_none() && self.alpha_file.is_none()
    }

    /// The requested spec, before validation against the group model.
    pub fn spec(&self) -> Result<GroupSpecFile, CliError> {
        if let Some(path) = &self.alpha_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::BadInput(format!("cannot read {}: {e}", path.display())))?;
            let spec = GroupSpecFile::from_json(&text)
                .map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))?;
            for (flag, given, found) in [
                ("--p", self.p.map(|x| x as usize), spec.p as usize),
                ("--n", self.n, spec.n),
                ("--m", self.m, spec.m),
            ] {
                if given.is_some_and(|g| g != found) {
                    return Err(CliError::BadInput(format!(
                        "{flag} {} disagrees with {} in {}",
                        given.unwrap(),
                        found,
                        path.display()
                    )));
                }
            }
            return Ok(spec);
        }
        let (Some(p), Some(n), Some(m)) = (self.p, self.n, self.m) else {
            return Err(CliError::BadInput("--p, --n and --m are required without --alpha-file".into()));
        };
        check_parameters(p, m, n)?;
        if p < 5 {
            return Err(CliError::BadInput(format!(
                "p = {p} has no canonical commutator map; run `maxclass alpha-solve --p {p} --m {m} --n {n} --out-dir DIR` \
                 and pass one of the written files with --alpha-file"
            )));
        }
        let alpha = match self.a {
            Some(a) => AlphaMap::canonical_with_a(p, m, n, a)?,
            None => AlphaMap::canonical(p, m, n)?,
        };
        Ok(GroupSpecFile::from_alpha(&alpha, None))
    }

    pub fn group(&self) -> Result<(GroupSpecFile, MaxClassGroup), CliError> {
        let spec = self.spec()?;
        check_parameters(spec.p, spec.m, spec.n)?;
        let alpha = spec.to_alpha()?;
        let g = MaxClassGroup::new(spec.p, spec.n, spec.m, alpha)?;
        Ok((spec.canonicalize()?, g))
    }
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the command, writing to `out`.
/// Returns the exit code for completed runs.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<i32, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::BadInput(e.to_string()))?;
    execute(&cli, out)
}

/// Entry point for the binary.
pub fn main_entry() -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Construct { case, out: path } => cmd_construct(case, path.as_deref(), out),
        Command::B0 {
            case,
            method,
            oracle,
            out: path,
        } => cmd_b0(case, *method, &oracle.options(), path.as_deref(), out),
        Command::Table {
            p,
            m_range,
            format,
            out: path,
        } => cmd_table(*p, m_range, *format, path.as_deref(), out),
        Command::Verify {
            case,
            fixtures,
            oracle,
            inject_wrong_carry,
        } => cmd_verify(case, *fixtures, oracle, *inject_wrong_carry, cli.seed, out),
        Command::Present { case, check } => cmd_present(case, *check, out),
        Command::AlphaSolve {
            p,
            m,
            n,
            out: path,
            out_dir,
            limit,
        } => cmd_alpha_solve(*p, *m, *n, path.as_deref(), out_dir.as_deref(), *limit, out),
    }
}

fn cmd_construct(case: &CaseArgs, path: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let (spec, g) = case.group()?;
    let (p, n, m) = (g.p(), g.n(), g.m());
    writeln!(out, "group          p = {p}, n = {n}, m = {m}")?;
    writeln!(out, "order          {p}^{n}")?;
    writeln!(out, "class          {}", n - 1)?;
    writeln!(out, "commutativity  {}", g.degree_of_commutativity())?;
    writeln!(out, "[P1,P1]        P_{}", g.derived_level()?)?;
    writeln!(out, "P1 class       {}", g.p1_class())?;
    writeln!(out, "[P1,P1] = [P1,P_(n-2)]  {}", g.theorem1_predicate())?;
    match path {
        Some(_) => write_output(path, &spec.to_json(), out)?,
        None => out.write_all(spec.to_json().as_bytes())?,
    }
    Ok(0)
}

fn oracle_report(g: &MaxClassGroup, opts: &OracleOptions) -> Result<B0Report, CliError> {
    let start = Instant::now();
    if g.order() > opts.cap as u128 {
        return Err(HomologyError::TooLarge {
            order: usize::try_from(g.order()).unwrap_or(usize::MAX),
            cap: opts.cap,
        }
        .into());
    }
    let table = g.to_multiplication_table_capped(opts.cap)?;
    let r = b0_oracle_with(&table, opts)?;
    Ok(B0Report {
        p: g.p(),
        n: g.n(),
        m: g.m(),
        derived_m: g.derived_level()?,
        a: g.alpha().a(),
        method: Method::Oracle,
        invariants: r.b0,
        strategies: Vec::new(),
        elapsed: start.elapsed(),
    })
}

/// Runs the requested methods and fills in the pairwise agreement flags.
pub fn b0_report_file(case: &CaseArgs, method: MethodArg, opts: &OracleOptions) -> Result<ReportFile, CliError> {
    let (_, g) = case.group()?;
    let methods: Vec<Method> = match method {
        MethodArg::Formula => vec![Method::Formula],
        MethodArg::Coinvariants => vec![Method::Coinvariants],
        MethodArg::Oracle => vec![Method::Oracle],
        MethodArg::All => vec![Method::Formula, Method::Coinvariants, Method::Oracle],
    };
    let all = method == MethodArg::All;
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for m in methods {
        let r: Result<B0Report, CliError> = match m {
            Method::Formula if !g.alpha().is_canonical() => Err(CliError::BadInput(
                "the closed formula describes canonical maps only".into(),
            )),
            Method::Formula => theorem3_formula(g.p(), g.m(), g.n()).map_err(Into::into),
            Method::Coinvariants => b0_coinvariants(&g).map_err(Into::into),
            Method::Oracle => oracle_report(&g, opts),
        };
        match r {
            Ok(r) => reports.push(r),
            Err(CliError::BadInput(reason)) if all && m != Method::Coinvariants => skipped.push(SkippedMethod {
                method: m.as_str().to_string(),
                reason,
            }),
            Err(e) => return Err(e),
        }
    }
    let mut records: Vec<ReportRecord> = reports.iter().map(|r| ReportRecord::from_report(r, &g)).collect();
    for i in 0..records.len() {
        for j in 0..records.len() {
            if i != j {
                let agree = reports[i].invariants == reports[j].invariants;
                let key = records[j].method.clone();
                records[i].agree_flags.insert(key, agree);
            }
        }
        records[i].agree_flags.insert("bounds".into(), bounds_check(&reports[i]));
    }
    let mut file = ReportFile::new(records);
    file.skipped = skipped;
    Ok(file)
}

fn cmd_b0(
    case: &CaseArgs,
    method: MethodArg,
    opts: &OracleOptions,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let file = b0_report_file(case, method, opts)?;
    write_output(path, &file.to_json(), out)?;
    let disagree = file
        .records
        .iter()
        .any(|r| r.agree_flags.iter().any(|(k, v)| k != "bounds" && !v));
    Ok(if disagree { 1 } else { 0 })
}

fn parse_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::BadInput(format!("range {s:?} is not of the form A..B"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Rows of the grid comparison, ordered by `m` then `n`.
pub fn table_rows(p: u32, lo: usize, hi: usize) -> Result<Vec<TableRow>, CliError> {
    let mut rows = Vec::new();
    for m in lo..=hi {
        for n in m + 1..=2 * m - 2 {
            let r = reconcile(p, m, n)?;
            let mut computed = theorem3_formula(p, m, n)?;
            computed.invariants = r.computed.clone();
            computed.method = Method::Coinvariants;
            if !bounds_check(&computed) {
                return Err(CliError::Invariant(format!(
                    "computed value {} at m = {m}, n = {n} breaks the rank or exponent bound",
                    r.computed
                )));
            }
            rows.push(TableRow {
                p,
                m,
                n,
                x: r.x,
                y: r.y,
                formula_invariants: format_invariants(&r.formula.torsion_u64()),
                computed_invariants: format_invariants(&r.computed.torsion_u64()),
                agree: r.agree,
            });
        }
    }
    Ok(rows)
}

fn cmd_table(p: u32, range: &str, format: Format, path: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let (lo, hi) = parse_range(range)?;
    let rows = table_rows(p, lo, hi)?;
    let text = match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(|e| CliError::Invariant(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Invariant(e.to_string()))?)
                .expect("utf-8")
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("serializable");
            s.push('\n');
            s
        }
    };
    write_output(path, &text, out)?;
    Ok(0)
}

fn cmd_verify(
    case: &CaseArgs,
    run_fixtures: bool,
    oracle: &OracleArgs,
    wrong: bool,
    seed: u64,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if !run_fixtures && case.is_empty() {
        return Err(CliError::BadInput("give case flags or --fixtures".into()));
    }
    let mut opts = VerifyOptions {
        seed,
        oracle: oracle.options(),
        ..Default::default()
    };
    if wrong {
        opts.carry_override = Some(Vec::new());
    }
    let mut checks: Vec<Check> = Vec::new();
    if run_fixtures {
        checks.extend(fixtures(&opts));
    }
    if !case.is_empty() {
        let (_, g) = case.group()?;
        checks.extend(check_group(&g, &opts));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    writeln!(out, "{} passed, {failed} failed", checks.len() - failed)?;
    Ok(if failed == 0 { 0 } else { 1 })
}

fn cmd_present(case: &CaseArgs, check: bool, out: &mut dyn Write) -> Result<i32, CliError> {
    let (_, g) = case.group()?;
    let pres = g.emit_presentation()?;
    out.write_all(pres.to_text().as_bytes())?;
    if check {
        let (a, b, c) = pres.census();
        for w in pres.relators() {
            if g.evaluate(w) != g.identity() {
                return Err(CliError::Invariant(format!("relator {w} does not evaluate to the identity")));
            }
        }
        eprintln!("checked {} relators ({a} + {b} + {c}): all evaluate to the identity", a + b + c);
    }
    Ok(0)
}

fn cmd_alpha_solve(
    p: u32,
    m: usize,
    n: usize,
    path: Option<&Path>,
    out_dir: Option<&Path>,
    limit: u64,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let file = alpha_solutions_file(p, m, n, limit)?;
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        for (i, rec) in file.basis.iter().enumerate() {
            std::fs::write(dir.join(format!("basis-{i}.json")), rec.spec.to_json())?;
        }
        if let Some(s) = &file.surjective_example {
            std::fs::write(dir.join("surjective.json"), s.to_json())?;
        }
    }
    let mut text = serde_json::to_string_pretty(&file).expect("serializable");
    text.push('\n');
    write_output(path, &text, out)?;
    Ok(0)
}

pub fn alpha_solutions_file(p: u32, m: usize, n: usize, limit: u64) -> Result<AlphaSolutionsFile, CliError> {
    let sols = alpha_solve(p, m, n)?;
    let basis: Vec<AlphaSolutionRecord> = sols
        .generators
        .iter()
        .enumerate()
        .map(|(i, s)| AlphaSolutionRecord {
            order: s.order,
            surjective: s.surjective,
            spec: GroupSpecFile::from_alpha(&s.alpha.as_custom(), Some(format!("basis {i}"))),
        })
        .collect();
    let surjective_example = if basis.iter().any(|b| b.surjective) {
        None
    } else {
        sols.enumerate(limit)
            .ok()
            .and_then(|all| all.into_iter().find(|a| a.is_surjective()))
            .map(|a| GroupSpecFile::from_alpha(&a.as_custom(), Some("surjective".into())))
    };
    Ok(AlphaSolutionsFile {
        schema: ALPHA_SOLUTIONS_SCHEMA.to_string(),
        p,
        m,
        n,
        count: sols.count().to_string(),
        basis,
        surjective_example,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (Result<i32, CliError>, String) {
        let mut buf = Vec::new();
        let r = run(std::iter::once("maxclass").chain(args.iter().copied()), &mut buf);
        (r, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn construct_summary() {
        let (r, text) = run_str(&["construct", "--p", "5", "--m", "4", "--n", "6"]);
        assert_eq!(r.unwrap(), 0);
        assert!(text.contains("commutativity  1"), "{text}");
    }

    #[test]
    fn construct_errors() {
        let (r, _) = run_str(&["construct", "--p", "3", "--m", "4", "--n", "5"]);
        let e = r.unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("alpha-solve"));
        let (r, _) = run_str(&["construct", "--p", "5", "--m", "4", "--n", "9"]);
        assert_eq!(r.unwrap_err().exit_code(), 2);
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("4..8").unwrap(), (4, 8));
        assert_eq!(parse_range("4..=8").unwrap(), (4, 8));
        assert!(parse_range("8..4").is_err());
        assert!(parse_range("x").is_err());
    }
}
