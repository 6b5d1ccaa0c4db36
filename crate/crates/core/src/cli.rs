//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 usage or parse error, 3 input validation error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::driver::{bench, betti_numbers, graded_betti, DriverError, Mode, ModeTag};
use crate::field::{FieldElement, FieldSpec};
use crate::grading::{make_grading, Grading, GradingError};
use crate::io::{
    bench_csv, graded_csv, parse_algebra_file, per_n_csv, verdict_csv, ConfigEcho, GradedRow,
    IoError, ReportDocument,
};
use crate::lie::{
    builtin_algebra, make_module, BuiltinKind, CartanTag, GModule, LieAlgebra, LieError, ModuleSpec,
};
use crate::suites::{run_borel_suite, run_suite, Outcome, Suite, SuiteContext};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "liecohom",
    version,
    about = "Exact Lie algebra cohomology over Q and F_p"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Betti numbers of the full or degree-zero complex.
    Betti(Common),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Betti numbers split by degree vector.
    Gradedbetti(GradedArgs),
    /// Full versus degree-zero complex sizes and timings.
    Bench(Common),
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Builtin `name:param` (sl, borel-sl, nilpotent-sl, cartan-sl, abelian, heisenberg) or a JSON file.
    #[arg(long)]
    pub algebra: Option<String>,
    /// trivial or adjoint; defaults to the file's module, else trivial.
    #[arg(long)]
    pub module: Option<String>,
    /// Q or Fp:<p>.
    #[arg(long)]
    pub field: Option<String>,
    /// `cartan` or `sigma:c1,c2,...`; repeat for several commuting elements.
    #[arg(long)]
    pub reduce: Vec<String>,
    /// Highest cochain degree to compute; defaults to dim g.
    #[arg(long = "max-n")]
    pub max_n: Option<usize>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write the CSV table here (`-` for stdout).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Include cocycle representatives in the JSON report.
    #[arg(long)]
    pub witness: bool,
}

#[derive(Debug, Args, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Suite name or `all`; repeatable.
    #[arg(long)]
    pub suite: Vec<String>,
    /// N for the borel suite.
    #[arg(long = "N")]
    pub n_param: Option<usize>,
    /// Random cocycles per degree in the corollary1 suite.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Debug, Args, Clone)]
pub struct GradedArgs {
    #[command(flatten)]
    pub common: Common,
    /// Single cohomological degree; all degrees up to max-n when omitted.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Verification(_) => EXIT_VERIFICATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Validation(_) => Failure::Validation(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<LieError> for Failure {
    fn from(e: LieError) -> Self {
        match e {
            LieError::InvalidParameter(_) | LieError::Field(_) => Failure::Usage(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<GradingError> for Failure {
    fn from(e: GradingError) -> Self {
        match e {
            GradingError::Internal(_) => Failure::Verification(e.to_string()),
            GradingError::Lie(l) => l.into(),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<DriverError> for Failure {
    fn from(e: DriverError) -> Self {
        match e {
            DriverError::Grading(g) => g.into(),
            DriverError::Lie(l) => l.into(),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

struct Loaded {
    algebra: LieAlgebra,
    module: GModule,
    tag: CartanTag,
    field: FieldSpec,
}

fn parse_field(s: Option<&str>) -> Result<Option<FieldSpec>, Failure> {
    s.map(|s| {
        s.parse::<FieldSpec>()
            .map_err(|e| Failure::Usage(format!("--field: {e}")))
    })
    .transpose()
}

fn module_spec(name: &str) -> Result<ModuleSpec, Failure> {
    match name.to_ascii_lowercase().as_str() {
        "trivial" => Ok(ModuleSpec::Trivial),
        "adjoint" => Ok(ModuleSpec::Adjoint),
        other => Err(Failure::Usage(format!(
            "--module: expected trivial or adjoint, got {other:?}"
        ))),
    }
}

fn load(common: &Common) -> Result<Loaded, Failure> {
    let source = common
        .algebra
        .as_deref()
        .ok_or_else(|| Failure::Usage("--algebra is required".into()))?;
    let field_arg = parse_field(common.field.as_deref())?;
    let path = Path::new(source);
    let (algebra, module, tag) = if path.is_file() || source.ends_with(".json") {
        let (g, m, tag) = parse_algebra_file(path)?;
        if let Some(f) = field_arg {
            if f != g.field() {
                return Err(Failure::Usage(format!(
                    "--field {f} disagrees with the file's field {}",
                    g.field()
                )));
            }
        }
        let m = match &common.module {
            Some(name) => make_module(&module_spec(name)?, &g)?,
            None => m,
        };
        (g, m, tag)
    } else {
        let (name, param) = match source.split_once(':') {
            Some((n, p)) => {
                let p = p.parse::<usize>().map_err(|_| {
                    Failure::Usage(format!("--algebra: bad parameter in {source:?}"))
                })?;
                (n, p)
            }
            None if source.eq_ignore_ascii_case("heisenberg") => (source, 1),
            None => {
                return Err(Failure::Usage(format!(
                    "--algebra: expected name:param or a file, got {source:?}"
                )))
            }
        };
        let kind: BuiltinKind = name
            .parse()
            .map_err(|e: LieError| Failure::Usage(e.to_string()))?;
        let (g, tag) = builtin_algebra(kind, param, field_arg.unwrap_or(FieldSpec::RATIONALS))?;
        let m = make_module(
            &module_spec(common.module.as_deref().unwrap_or("trivial"))?,
            &g,
        )?;
        (g, m, tag)
    };
    let field = algebra.field();
    Ok(Loaded {
        algebra,
        module,
        tag,
        field,
    })
}

fn parse_sigma(spec: &str, field: FieldSpec, dim: usize) -> Result<Vec<FieldElement>, Failure> {
    let body = spec.strip_prefix("sigma:").ok_or_else(|| {
        Failure::Usage(format!(
            "--reduce: expected cartan or sigma:..., got {spec:?}"
        ))
    })?;
    let v = body
        .split(',')
        .map(|s| {
            field
                .parse_element(s.trim())
                .map_err(|e| Failure::Usage(format!("--reduce: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != dim {
        return Err(Failure::Usage(format!(
            "--reduce: sigma has {} entries, algebra has dimension {dim}",
            v.len()
        )));
    }
    Ok(v)
}

/// Grading elements from `--reduce`; an empty list with `default_cartan`
/// falls back to the Cartan tag.
fn sigmas(
    common: &Common,
    l: &Loaded,
    default_cartan: bool,
) -> Result<Vec<Vec<FieldElement>>, Failure> {
    let mut out = Vec::new();
    if common.reduce.is_empty() && default_cartan {
        return Ok(l.tag.elements(&l.algebra));
    }
    for r in &common.reduce {
        if r.eq_ignore_ascii_case("cartan") {
            out.extend(l.tag.elements(&l.algebra));
        } else {
            out.push(parse_sigma(r, l.field, l.algebra.dim())?);
        }
    }
    Ok(out)
}

fn grading_for(
    common: &Common,
    l: &Loaded,
    default_cartan: bool,
) -> Result<Option<Grading>, Failure> {
    let s = sigmas(common, l, default_cartan)?;
    if s.is_empty() {
        return Ok(None);
    }
    Ok(Some(make_grading(&l.algebra, &l.module, &s)?))
}

fn echo(command: &str, common: &Common, l: Option<&Loaded>) -> ConfigEcho {
    ConfigEcho {
        command: command.to_string(),
        algebra: l
            .map(|l| l.algebra.label().to_string())
            .or_else(|| common.algebra.clone()),
        module: l.map(|l| l.module.kind().to_string()),
        field: l.map_or_else(
            || common.field.clone().unwrap_or_else(|| "Q".into()),
            |l| l.field.to_string(),
        ),
        reduce: common.reduce.clone(),
        max_n: common.max_n,
        suites: Vec::new(),
        n_param: None,
        witness: common.witness,
    }
}

fn emit(target: &Path, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    if target.as_os_str() == "-" {
        out.write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(e.to_string()))
    } else {
        std::fs::write(target, text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", target.display())))
    }
}

fn finish(
    common: &Common,
    doc: &ReportDocument,
    csv: String,
    text: String,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let mut quiet = false;
    if let Some(p) = &common.json {
        emit(p, &(doc.to_json() + "\n"), out)?;
        quiet |= p.as_os_str() == "-";
    }
    if let Some(p) = &common.csv {
        emit(p, &csv, out)?;
        quiet |= p.as_os_str() == "-";
    }
    if !quiet {
        out.write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn cmd_betti(common: &Common, out: &mut dyn Write) -> Result<i32, Failure> {
    let l = load(common)?;
    let grading = grading_for(common, &l, false)?;
    let mode = grading.map_or(Mode::Full, Mode::Reduced);
    let report = betti_numbers(&l.algebra, &l.module, &mode, common.max_n, common.witness)?;
    let doc = ReportDocument::new(echo("betti", common, Some(&l))).with_cohomology(&report);
    let mut text = format!(
        "{} with {} coefficients over {} ({} complex)\n{:>3} {:>10} {:>10} {:>10} {:>10} {:>6}\n",
        report.algebra,
        report.module,
        report.field,
        match report.mode {
            ModeTag::Full => "full",
            ModeTag::Reduced => "degree-zero",
        },
        "n",
        "dimC",
        "dimC_red",
        "dimZ",
        "dimB",
        "betti"
    );
    for p in &doc.per_n {
        let red = p.dim_c_reduced.map_or("-".to_string(), |d| d.to_string());
        text += &format!(
            "{:>3} {:>10} {:>10} {:>10} {:>10} {:>6}\n",
            p.n, p.dim_c_full, red, p.dim_z, p.dim_b, p.betti
        );
    }
    finish(common, &doc, per_n_csv(&doc.per_n), text, out)?;
    Ok(EXIT_OK)
}

fn cmd_graded(args: &GradedArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let common = &args.common;
    let l = load(common)?;
    let grading = grading_for(common, &l, true)?.ok_or_else(|| {
        Failure::Usage("gradedbetti needs --reduce or an algebra with a Cartan tag".into())
    })?;
    let top = common.max_n.unwrap_or(l.algebra.dim()).min(l.algebra.dim());
    let degrees: Vec<usize> = match args.n {
        Some(n) => vec![n],
        None => (0..=top).collect(),
    };
    let mut doc = ReportDocument::new(echo("gradedbetti", common, Some(&l)));
    doc.basis_order = l.algebra.basis_names().to_vec();
    doc.sigmas = grading
        .sigmas()
        .iter()
        .map(|s| s.iter().map(ToString::to_string).collect())
        .collect();
    let mut text = format!(
        "{} graded Betti numbers over {}\n",
        l.algebra.label(),
        l.field
    );
    for n in degrees {
        let start = std::time::Instant::now();
        let map = graded_betti(&l.algebra, &l.module, &grading, n)?;
        doc.timings_ms
            .insert(format!("n={n:02}"), start.elapsed().as_secs_f64() * 1e3);
        for (deg, b) in map {
            text += &format!("n={n} degree {deg}: {b}\n");
            doc.graded.push(GradedRow {
                n,
                degree: deg.entries().iter().map(ToString::to_string).collect(),
                betti: b,
            });
        }
    }
    finish(common, &doc, graded_csv(&doc.graded), text, out)?;
    Ok(EXIT_OK)
}

fn cmd_bench(common: &Common, out: &mut dyn Write) -> Result<i32, Failure> {
    let l = load(common)?;
    let grading = grading_for(common, &l, true)?.ok_or_else(|| {
        Failure::Usage("bench needs --reduce or an algebra with a Cartan tag".into())
    })?;
    let report = bench(&l.algebra, &l.module, &grading, common.max_n)?;
    let doc = ReportDocument::new(echo("bench", common, Some(&l))).with_bench(&report);
    let mut text = format!(
        "{} over {}: full vs degree-zero complex\n{:>3} {:>10} {:>10} {:>10} {:>10} {:>6}\n",
        report.algebra, report.field, "n", "full_cols", "red_cols", "full_ms", "red_ms", "betti"
    );
    for r in &report.rows {
        text += &format!(
            "{:>3} {:>10} {:>10} {:>10.2} {:>10.2} {:>6}\n",
            r.n, r.full_cols, r.reduced_cols, r.full_ms, r.reduced_ms, r.betti
        );
    }
    let mid = report.middle();
    let ratio = if mid.reduced_cols == 0 {
        "all columns removed".to_string()
    } else {
        format!(
            "{:.1}x fewer columns",
            mid.full_cols as f64 / mid.reduced_cols as f64
        )
    };
    text += &format!(
        "middle degree n={}: {} vs {} ({ratio})\n",
        mid.n, mid.full_cols, mid.reduced_cols
    );
    let total = |f: fn(&crate::driver::BenchRow) -> f64| report.rows.iter().map(f).sum::<f64>();
    text += &format!(
        "total time: full {:.1} ms, reduced {:.1} ms\n",
        total(|r| r.full_ms),
        total(|r| r.reduced_ms)
    );
    finish(
        common,
        &doc,
        bench_csv(&doc.bench, &doc.timings_ms),
        text,
        out,
    )?;
    Ok(EXIT_OK)
}

fn parse_suites(names: &[String]) -> Result<Vec<Suite>, Failure> {
    let mut out = Vec::new();
    for name in names {
        if name.eq_ignore_ascii_case("all") {
            out.extend(Suite::ALL.into_iter().filter(|s| *s != Suite::Borel));
        } else {
            out.push(name.parse::<Suite>().map_err(Failure::Usage)?);
        }
    }
    if out.is_empty() {
        out.extend(Suite::ALL.into_iter().filter(|s| *s != Suite::Borel));
    }
    out.dedup();
    Ok(out)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let common = &args.common;
    let suites = parse_suites(&args.suite)?;
    let needs_algebra = suites.iter().any(|s| *s != Suite::Borel);
    let loaded = if needs_algebra {
        Some(load(common)?)
    } else {
        None
    };
    let mut config = echo("verify", common, loaded.as_ref());
    config.suites = suites.iter().map(|s| s.name().to_string()).collect();
    config.n_param = args.n_param;
    let mut doc = ReportDocument::new(config);
    let grading = match &loaded {
        Some(l) => {
            doc.basis_order = l.algebra.basis_names().to_vec();
            grading_for(common, l, true)?
        }
        None => None,
    };
    for suite in &suites {
        let start = std::time::Instant::now();
        let verdict = if *suite == Suite::Borel {
            let n = args
                .n_param
                .ok_or_else(|| Failure::Usage("the borel suite needs --N".into()))?;
            if n < 2 {
                return Err(Failure::Usage("--N must be at least 2".into()));
            }
            let field = parse_field(common.field.as_deref())?.unwrap_or(FieldSpec::RATIONALS);
            run_borel_suite(n, field)?
        } else {
            let l = loaded.as_ref().expect("loaded");
            let mut ctx = SuiteContext::new(&l.algebra, &l.module, grading.as_ref());
            ctx.max_n = common.max_n;
            ctx.samples = args.samples;
            run_suite(*suite, &ctx)?
        };
        doc.timings_ms.insert(
            suite.name().to_string(),
            start.elapsed().as_secs_f64() * 1e3,
        );
        doc.verdicts.push(verdict);
    }
    let mut text = String::new();
    for v in &doc.verdicts {
        text += &format!(
            "{:<20} {:<8} {}\n",
            v.suite.name(),
            format!("{:?}", v.outcome()).to_uppercase(),
            v.subject
        );
        for c in &v.checks {
            text += &format!(
                "    {:<16} {:<8} {}\n",
                c.name,
                format!("{:?}", c.outcome).to_lowercase(),
                c.detail
            );
        }
    }
    let failed = doc.verdicts.iter().any(|v| v.outcome() == Outcome::Fail);
    finish(common, &doc, verdict_csv(&doc.verdicts), text, out)?;
    Ok(if failed { EXIT_VERIFICATION } else { EXIT_OK })
}

/// Runs a parsed command line, writing human output to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Betti(c) => cmd_betti(c, out),
        Command::Verify(v) => cmd_verify(v, out),
        Command::Gradedbetti(g) => cmd_graded(g, out),
        Command::Bench(c) => cmd_bench(c, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            code
        }
    }
}
