//! `superalg`: build catalog superalgebras, emit dimension tables, series and
//! growth data, and run the verification suites.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage or configuration error,
//! 3 invariant violation or counterexample, 4 truncation too small for the
//! requested degree bound.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use superalg::catalog::{self, ExampleName, ExampleSpec};
use superalg::doubles::{Hamiltonian, StructureTable};
use superalg::generate::SCHEMA_VERSION;
use superalg::identities::{IdentityReport, Verdict};
use superalg::scalar::{Field, FieldSpec};
use superalg::series::TruncatedSeries;
use superalg::suites::{self, Suite, SuiteReport};
use superalg::{with_field, Error};

#[derive(Parser)]
#[command(name = "superalg", version, about = "Exact computations with Lie, Poisson and Jordan superalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension table per multidegree and per total degree.
    Dims {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        output: Output,
    },
    /// Hilbert series, plus the Jordan-double transfer check for Lie examples.
    Series {
        #[command(flatten)]
        target: Target,
        /// Also compare the bivariate series in (X-degree, 1b-degree).
        #[arg(long)]
        bivariate: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run an identity suite on an example or on a structure-constant table.
    Verify {
        #[command(flatten)]
        target: Target,
        /// lie, jordan, poisson, nil, recursion or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Structure-table JSON to check instead of a catalog example.
        #[arg(long, conflicts_with = "example")]
        table: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Growth function, ratios, slope estimate and Jordan growth bounds.
    Growth {
        #[command(flatten)]
        target: Target,
        /// Slope window `n0,n1` with 2 <= n0 < n1 <= D.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        window: Option<Vec<usize>>,
        #[command(flatten)]
        output: Output,
    },
    /// Catalog of named examples.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List every example with its default N, D and grading.
    List {
        #[command(flatten)]
        output: Output,
    },
    /// Export the structure constants of H1, H2, H3 or Toy as JSON.
    Table {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Target {
    /// Example name, see `catalog list`.
    #[arg(long)]
    example: Option<String>,
    /// Coefficient field: Q or Fp for a supported prime p >= 5.
    #[arg(long, default_value = "Q")]
    field: String,
    /// Number of Grassmann variables.
    #[arg(long = "N", value_name = "N")]
    n: Option<usize>,
    /// Degree bound.
    #[arg(long = "D", value_name = "D")]
    d: Option<u32>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; defaults to stdout, or to a file in SUPERALG_OUT_DIR.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for output files when --out is not given.
    #[arg(long, env = "SUPERALG_OUT_DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

/// A validated run: the example and field are known to be usable.
struct RunConfig {
    spec: ExampleSpec,
    field: FieldSpec,
}

impl Target {
    fn field(&self) -> Result<FieldSpec, Failure> {
        Ok(FieldSpec::from_str(&self.field)?)
    }

    fn config(&self, default: Option<&str>) -> Result<RunConfig, Failure> {
        let field = self.field()?;
        let name = self
            .example
            .as_deref()
            .or(default)
            .ok_or_else(|| Failure::Usage("--example is required; see `catalog list`".into()))?;
        let spec = ExampleName::from_str(name)?.spec(self.n, self.d)?;
        Ok(RunConfig { spec, field })
    }
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Parse(_) | Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            Error::Structural(_) | Error::Overflow { .. } => Failure::Internal(e.to_string()),
        }
    }
}

/// Outcome of a command whose output was written.
enum Status {
    Ok,
    Violation(String),
    Unreliable(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation(msg)) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(3)
        }
        Ok(Status::Unreliable(msg)) => {
            eprintln!("reliability failure: {msg}");
            ExitCode::from(4)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<Status, Failure> {
    match cmd {
        Command::Dims { target, output } => {
            let cfg = target.config(None)?;
            with_field!(cfg.field, F => dims::<F>(&cfg.spec, &output))
        }
        Command::Series { target, bivariate, output } => {
            let cfg = target.config(None)?;
            with_field!(cfg.field, F => series::<F>(&cfg.spec, bivariate, &output))
        }
        Command::Verify { target, suite, seed, table, output } => {
            let suite = Suite::from_str(&suite)?;
            match table {
                Some(path) => {
                    let field = target.field()?;
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
                    with_field!(field, F => verify_table::<F>(&text, suite, seed, &output))
                }
                None => {
                    let default = (suite == Suite::Recursion).then_some("R");
                    let cfg = target.config(default)?;
                    with_field!(cfg.field, F => verify::<F>(&cfg.spec, suite, seed, &output))
                }
            }
        }
        Command::Growth { target, window, output } => {
            let window = match window.as_deref() {
                None => None,
                Some(&[a, b]) => Some([a, b]),
                Some(_) => return Err(Failure::Usage("--window takes two values `n0,n1`".into())),
            };
            let cfg = target.config(None)?;
            with_field!(cfg.field, F => growth::<F>(&cfg.spec, window, &output))
        }
        Command::Catalog { command: CatalogCommand::List { output } } => catalog_list(&output),
        Command::Catalog { command: CatalogCommand::Table { target, output } } => {
            let cfg = target.config(None)?;
            with_field!(cfg.field, F => catalog_table::<F>(&cfg.spec, &output))
        }
    }
}

fn emit(output: &Output, stem: &str, body: &str) -> Result<(), Failure> {
    let path = match (&output.out, &output.out_dir) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => Some(dir.join(format!("{stem}.{}", output.format.ext()))),
        (None, None) => None,
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", parent.display())))?;
            }
            std::fs::write(&p, body).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            eprintln!("wrote {}", p.display());
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn stem(cmd: &str, algebra: &str, field: &str) -> String {
    let clean: String = algebra.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    format!("{cmd}-{clean}-{field}")
}

fn json_line(s: String) -> String {
    s + "\n"
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn reliability(reliable: u32, wanted: u32, what: &str, n: usize) -> Status {
    if reliable < wanted {
        Status::Unreliable(format!(
            "{what} is reliable only up to degree {reliable} < {wanted} at N = {n}; increase N"
        ))
    } else {
        Status::Ok
    }
}

fn dims<F: Field>(spec: &ExampleSpec, output: &Output) -> Result<Status, Failure> {
    let t = catalog::example_dims::<F>(spec)?;
    let body = match output.format {
        Format::Json => json_line(serde_json::to_string_pretty(&t).expect("tables serialize")),
        Format::Csv => t.to_csv(),
        Format::Text => t.to_text(),
    };
    emit(output, &stem("dims", &spec.name, &t.field), &body)?;
    Ok(reliability(t.reliable_degree, t.d, &spec.name, spec.n))
}

fn series_csv(out: &mut String, name: &str, s: &TruncatedSeries) {
    for (e, c) in s.terms() {
        let exp: Vec<String> = e.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "{name},{},{c}", exp.join(" "));
    }
}

fn series<F: Field>(spec: &ExampleSpec, bivariate: bool, output: &Output) -> Result<Status, Failure> {
    let b = catalog::series_bundle::<F>(spec, bivariate)?;
    let body = match output.format {
        Format::Json => json_line(serde_json::to_string_pretty(&b).expect("series serialize")),
        Format::Csv => {
            let mut out = String::from("series,exponent,coeff\n");
            series_csv(&mut out, "hilbert", &b.hilbert);
            if let Some(j) = &b.jordan {
                series_csv(&mut out, "jordan_direct", &j.direct);
                series_csv(&mut out, "jordan_formula", &j.formula);
                if let Some(bv) = &j.bivariate {
                    series_csv(&mut out, "bivariate_direct", &bv.direct);
                    series_csv(&mut out, "bivariate_formula", &bv.formula);
                }
            }
            out
        }
        Format::Text => {
            let mut out = format!("{} over {} (N = {}, D = {})\n", b.algebra, b.field, b.n, b.d);
            let _ = writeln!(out, "H(L, t) = {}", b.hilbert);
            if let Some(j) = &b.jordan {
                let _ = writeln!(out, "H(J, t) direct  = {}", j.direct);
                let _ = writeln!(out, "H(J, t) formula = {}", j.formula);
                let t = &j.transfer;
                if t.diff.is_empty() {
                    let _ = writeln!(out, "transfer: coefficients agree on degrees 0..={}", t.window);
                } else {
                    for (k, f, d) in &t.diff {
                        let _ = writeln!(out, "transfer: degree {k}: formula {f}, direct {d}");
                    }
                }
                let bad = t.gamma.iter().filter(|r| !r.holds).count();
                let _ = writeln!(out, "counting identities: {} of {} rows hold", t.gamma.len() - bad, t.gamma.len());
                if let Some(bv) = &j.bivariate {
                    let _ = writeln!(out, "H(J, t1, t2) direct  = {}", bv.direct);
                    let _ = writeln!(out, "H(J, t1, t2) formula = {}", bv.formula);
                    let _ = writeln!(out, "bivariate differences: {}", bv.diff.len());
                }
            }
            out
        }
    };
    emit(output, &stem("series", &spec.name, &b.field), &body)?;
    if let Some(j) = &b.jordan {
        if !j.holds() {
            return Ok(Status::Violation(format!("transfer formula disagrees with Jor({}) counts", b.algebra)));
        }
        if j.direct.truncation() < j.d as i64 {
            return Ok(reliability(j.direct.truncation().max(0) as u32, j.d, &format!("Jor({})", b.algebra), b.n));
        }
    }
    Ok(reliability(b.hilbert.truncation().max(0) as u32, b.d, &b.algebra, b.n))
}

fn identity_csv(out: &mut String, kind: &str, r: &IdentityReport) {
    let verdict = match r.verdict {
        Verdict::HoldsOnSample => "holds_on_sample",
        Verdict::Counterexample => "counterexample",
    };
    let _ = writeln!(
        out,
        "{kind},{},{},{},{},{verdict}",
        csv_field(&r.identity),
        csv_field(&r.algebra),
        r.tested,
        r.violation_count
    );
}

fn render_suite(rep: &SuiteReport, format: Format) -> String {
    match format {
        Format::Json => json_line(rep.to_json()),
        Format::Csv => {
            let mut out = String::from("kind,check,algebra,tested,violations,verdict\n");
            rep.identities.iter().for_each(|r| identity_csv(&mut out, "identity", r));
            rep.probes.iter().for_each(|r| identity_csv(&mut out, "probe", r));
            for s in &rep.solvability {
                let verdict = match s.length {
                    Some(l) => format!("length_{l}"),
                    None => "not_solvable".into(),
                };
                let _ = writeln!(out, "solvability,derived series,{},{},0,{verdict}", csv_field(&s.algebra), s.dims.len());
            }
            for r in &rep.recursions {
                let verdict = if r.holds { "holds" } else { "fails" };
                let _ = writeln!(out, "recursion,{},N={},1,{},{verdict}", csv_field(&r.identity), r.n, u8::from(!r.holds));
            }
            out
        }
        Format::Text => {
            let mut out = format!("suite {} on {} over {} (seed {})\n", rep.suite, rep.algebra, rep.field, rep.seed);
            for line in rep.summary() {
                let _ = writeln!(out, "  {line}");
            }
            let _ = writeln!(out, "verdict: {}", if rep.holds() { "holds" } else { "COUNTEREXAMPLE" });
            out
        }
    }
}

fn suite_status(rep: &SuiteReport) -> Status {
    if rep.holds() {
        eprintln!("suite {} on {}: holds", rep.suite, rep.algebra);
        Status::Ok
    } else {
        Status::Violation(format!("suite {} on {} found a counterexample", rep.suite, rep.algebra))
    }
}

fn verify<F: Field>(spec: &ExampleSpec, suite: Suite, seed: u64, output: &Output) -> Result<Status, Failure> {
    let rep = suites::run_suite::<F>(suite, spec, seed)?;
    emit(output, &stem(&format!("verify-{suite}"), &spec.name, &rep.field), &render_suite(&rep, output.format))?;
    Ok(suite_status(&rep))
}

fn verify_table<F: Field>(text: &str, suite: Suite, seed: u64, output: &Output) -> Result<Status, Failure> {
    let table = StructureTable::<F>::from_json(text)?;
    let rep = suites::run_table_suite::<F>(suite, &table, seed)?;
    emit(output, &stem(&format!("verify-{suite}"), &table.name, &rep.field), &render_suite(&rep, output.format))?;
    Ok(suite_status(&rep))
}

fn growth<F: Field>(spec: &ExampleSpec, window: Option<[usize; 2]>, output: &Output) -> Result<Status, Failure> {
    let g = catalog::growth_report::<F>(spec, window)?;
    let body = match output.format {
        Format::Json => json_line(serde_json::to_string_pretty(&g).expect("growth serializes")),
        Format::Csv => {
            let mut out = String::from("n,dim,gamma,ratio\n");
            for n in 1..=g.d as usize {
                let _ = writeln!(out, "{n},{},{},{}", g.dims[n - 1], g.gamma[n], g.ratio[n - 1]);
            }
            out
        }
        Format::Text => {
            let mut out = format!("{} over {} (N = {}, D = {})\n", g.algebra, g.field, g.n, g.d);
            let _ = writeln!(out, "  {:>4} {:>6} {:>8} {:>8}", "n", "dim", "gamma", "gamma/n");
            for n in 1..=g.d as usize {
                let _ = writeln!(out, "  {n:>4} {:>6} {:>8} {:>8.3}", g.dims[n - 1], g.gamma[n], g.ratio[n - 1]);
            }
            if let Some(s) = &g.slope {
                let _ = writeln!(out, "slope of ln gamma over [{}, {}]: {:.4}", s.window[0], s.window[1], s.slope);
            }
            match g.period {
                Some(p) => {
                    let _ = writeln!(out, "dimensions repeat with period {p} on the window");
                }
                None => {
                    let _ = writeln!(out, "no period found on the window");
                }
            }
            if let Some(j) = &g.jordan {
                let bad = j.inequalities.iter().filter(|r| !r.holds).count();
                let _ = writeln!(
                    out,
                    "Jordan bounds gamma_J(n) <= 2 + 2 gamma_L(n), gamma_L(n) <= gamma_J(3n): {} of {} hold",
                    j.inequalities.len() - bad,
                    j.inequalities.len()
                );
            }
            out
        }
    };
    emit(output, &stem("growth", &spec.name, &g.field), &body)?;
    if !g.holds() {
        return Ok(Status::Violation(format!("growth bounds between {} and its Jordan double fail", g.algebra)));
    }
    Ok(reliability(g.reliable_degree, g.d, &g.algebra, g.n))
}

fn catalog_list(output: &Output) -> Result<Status, Failure> {
    let list = catalog::catalog_list();
    let body = match output.format {
        Format::Json => json_line(
            serde_json::to_string_pretty(&serde_json::json!({ "schema_version": SCHEMA_VERSION, "examples": list }))
                .expect("catalog serializes"),
        ),
        Format::Csv => {
            let mut out = String::from("name,N,D,grading,description\n");
            for e in &list {
                let _ = writeln!(out, "{},{},{},{},{}", e.name, e.n, e.d, e.grading, csv_field(&e.description));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for e in &list {
                let _ = writeln!(out, "{:<6} N={:<3} D={:<3} {:<9} {}", e.name, e.n, e.d, e.grading, e.description);
            }
            out
        }
    };
    emit(output, "catalog", &body)?;
    Ok(Status::Ok)
}

fn catalog_table<F: Field>(spec: &ExampleSpec, output: &Output) -> Result<Status, Failure> {
    if output.format != Format::Json {
        return Err(Failure::Usage("structure tables are only written as JSON".into()));
    }
    let table = match spec.example {
        ExampleName::H(k) => {
            let h = Hamiltonian::<F>::new(k)?;
            let vars = h.vars().clone();
            StructureTable::from_poisson(&h, |m| {
                let names: Vec<&str> = m.indices().map(|i| vars.name(i)).collect();
                if names.is_empty() { "1".into() } else { names.join(" ") }
            })?
        }
        ExampleName::Toy => superalg::doubles::toy_lie_table::<F>(),
        other => {
            return Err(Failure::Usage(format!("{other} has no finite structure table; use H1, H2, H3 or Toy")));
        }
    };
    emit(output, &stem("table", &spec.name, &F::label()), &json_line(table.to_json()))?;
    Ok(Status::Ok)
}
