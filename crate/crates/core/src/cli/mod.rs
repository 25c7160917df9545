//! Command-line front end. Reports go to the given writer; progress and
//! timings go to the log (stderr).

mod report;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::canonical::{orientation_character, Mode};
use crate::complexes::{
    build_decorated_gk_from, graph_complex, hairy_surviving_count, labeled_antiinvariant_count, total_complex,
    ChainComplexQ, Family, TotalOptions,
};
use crate::decorations::{load_decoration, synthetic_decoration, trivial_decoration, validate_decoration, DecorationSystem};
use crate::enumeration::{enumerate_cached, max_edge_count, Enumeration};
use crate::error::{check_stable_range, Error, Result};
use crate::linalg::{betti_table, BettiReport, RankPolicy};

pub use report::Report;

/// Exit status for usage errors.
pub const EXIT_USAGE: i32 = 1;
/// Exit status for invalid parameters or unreadable inputs.
pub const EXIT_PARAMETER: i32 = 2;
/// Exit status for internal consistency failures.
pub const EXIT_CONSISTENCY: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "gkgraph", version, about = "Stable graph complexes with exact cohomology")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for enumeration caches.
    #[arg(long, global = true, env = crate::enumeration::CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long, global = true, value_enum, default_value_t = RankArg::Certified)]
    pub rank: RankArg,
    /// Matrices with more stored entries use modular rank under `--rank auto`.
    #[arg(long, global = true, default_value_t = 200_000)]
    pub auto_threshold: usize,
    /// Add wall time to the report (makes it run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Progress messages on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Count isomorphism classes of stable graphs by edge number.
    Enumerate(GraphArgs),
    /// Dimensions, ranks and Betti numbers of a complex.
    Betti(ComplexArgs),
    /// Dimensions and Euler characteristic of a complex.
    Euler(ComplexArgs),
    /// Consistency checks.
    Check(CheckArgs),
    /// Compare two computations that must agree.
    Compare(CompareArgs),
    /// Cohomology of the total complex built from hairy graphs.
    Total(TotalArgs),
    /// Write a complex with its basis labels and matrices as JSON.
    Export(ExportArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    #[arg(short = 'g', long)]
    pub genus: u32,
    #[arg(short = 'n', long, default_value_t = 0)]
    pub marks: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Labeled)]
    pub mode: ModeArg,
    /// Stop at this many edges; the last degree is then flagged truncated.
    #[arg(long)]
    pub max_edges: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct ComplexArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = ComplexKind::W0gk)]
    pub complex: ComplexKind,
    /// Decoration file, or `trivial` / `synthetic` for the built-in ones.
    #[arg(long)]
    pub decoration_file: Option<String>,
    /// Internal weight for decorated complexes.
    #[arg(long, default_value_t = 0)]
    pub weight: u32,
    /// Largest total degree for `chi` and `total`.
    #[arg(long)]
    pub max_degree: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    #[command(flatten)]
    pub complex: ComplexArgs,
    /// d∘d = 0 for the selected complex (the default check).
    #[arg(long)]
    pub d2: bool,
    /// Recompute the orientation character of every class.
    #[arg(long)]
    pub orientation: bool,
    /// Validate the decoration given by `--decoration-file`.
    #[arg(long)]
    pub decoration: bool,
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    #[arg(short = 'g', long)]
    pub genus: u32,
    #[arg(short = 'n', long, default_value_t = 0)]
    pub marks: usize,
    #[arg(long, value_enum)]
    pub left: Side,
    #[arg(long, value_enum)]
    pub right: Side,
}

#[derive(Args, Debug, Clone)]
pub struct TotalArgs {
    #[arg(short = 'g', long)]
    pub genus: u32,
    #[arg(long)]
    pub max_degree: usize,
    /// Use only the hair-adding part of the differential.
    #[arg(long)]
    pub chi_only: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ExportArgs {
    #[command(flatten)]
    pub complex: ComplexArgs,
    /// Output file (default: standard output).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankArg {
    Certified,
    Auto,
    Modular,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Labeled,
    Hairy,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Labeled => Mode::Labeled,
            ModeArg::Hairy => Mode::Hairy,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexKind {
    /// Weight-zero GK complex (all stable graphs).
    W0gk,
    /// Loopless graphs with all weights zero.
    Hgc,
    /// Hair-adding differential alone, on the hairy total space.
    Chi,
    /// Vertex splitting plus hair adding.
    Total,
    /// Decorated GK complex.
    Decorated,
}

impl ComplexKind {
    fn name(self) -> &'static str {
        match self {
            ComplexKind::W0gk => "w0gk",
            ComplexKind::Hgc => "hgc",
            ComplexKind::Chi => "chi",
            ComplexKind::Total => "total",
            ComplexKind::Decorated => "decorated",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    W0gk,
    Hgc,
    LabeledAntiinvariants,
    Hairy,
}

/// Parses `args`, runs the command, writes the report to `out` and returns
/// the exit status.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Consistency(_) => EXIT_CONSISTENCY,
        _ => EXIT_PARAMETER,
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
}

impl Ctx<'_> {
    fn enumerate(&self, g: u32, n: usize, mode: Mode, max_edges: Option<usize>) -> Result<Enumeration> {
        enumerate_cached(g, n, mode, max_edges, self.cli.cache_dir.as_deref())
    }

    fn policy(&self) -> RankPolicy {
        match self.cli.rank {
            RankArg::Certified => RankPolicy::Certified,
            RankArg::Auto => RankPolicy::Auto {
                threshold: self.cli.auto_threshold,
            },
            RankArg::Modular => RankPolicy::Modular,
        }
    }
}

/// Runs a parsed command. `Ok(code)` carries the exit status of checks that
/// completed but found a failure.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Error::Parameter("--threads must be positive".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let ctx = Ctx { cli };
    let start = Instant::now();
    let (mut report, code) = match &cli.command {
        Command::Enumerate(a) => (enumerate_report(&ctx, a)?, 0),
        Command::Betti(a) => betti_report(&ctx, a, "betti")?,
        Command::Euler(a) => (euler_report(&ctx, a)?, 0),
        Command::Check(a) => check_report(&ctx, a)?,
        Command::Compare(a) => compare_report(&ctx, a)?,
        Command::Total(a) => {
            let args = ComplexArgs {
                graph: GraphArgs {
                    genus: a.genus,
                    marks: 0,
                    mode: ModeArg::Hairy,
                    max_edges: None,
                },
                complex: if a.chi_only { ComplexKind::Chi } else { ComplexKind::Total },
                decoration_file: None,
                weight: 0,
                max_degree: Some(a.max_degree),
            };
            betti_report(&ctx, &args, "total")?
        }
        Command::Export(a) => {
            let c = build_complex(&ctx, &a.complex)?;
            let text = serde_json::to_string_pretty(&c).expect("serializable") + "\n";
            match &a.output {
                Some(p) => std::fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            return Ok(0);
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    log::info!("{} finished in {elapsed:.3} s", report.command);
    if cli.timing {
        report.summary("wall_time_s", (elapsed * 1000.0).round() / 1000.0);
    }
    report.render(cli.format, out)?;
    Ok(code)
}

fn graph_params(r: &mut Report, a: &GraphArgs) {
    r.param("g", a.genus).param("n", a.marks).param("mode", Mode::from(a.mode).to_string());
    if let Some(m) = a.max_edges {
        r.param("max_edges", m);
    }
}

fn enumerate_report(ctx: &Ctx, a: &GraphArgs) -> Result<Report> {
    check_stable_range(a.genus, a.marks)?;
    let e = ctx.enumerate(a.genus, a.marks, a.mode.into(), a.max_edges)?;
    let mut r = Report::new("enumerate");
    graph_params(&mut r, a);
    r.columns(&["edges", "classes", "surviving", "loopless_weight0"]);
    for k in 0..=e.top_edges() {
        let cs = e.with_edges(k);
        r.row(vec![
            k.into(),
            cs.len().into(),
            cs.iter().filter(|c| c.survives()).count().into(),
            cs.iter().filter(|c| c.survives() && c.is_loopless_weight_zero()).count().into(),
        ]);
    }
    r.summary("total_classes", e.classes.len());
    Ok(r)
}

fn load_named_decoration(source: &str, g: u32, n: usize) -> Result<DecorationSystem> {
    let legs = crate::complexes::legs_needed(g, n);
    match source {
        "trivial" => Ok(trivial_decoration(g, legs)),
        "synthetic" => Ok(synthetic_decoration(g, legs)),
        path => load_decoration(std::path::Path::new(path)),
    }
}

fn validate_args(a: &ComplexArgs) -> Result<()> {
    let g = &a.graph;
    match a.complex {
        ComplexKind::Chi | ComplexKind::Total => {
            if a.max_degree.is_none() {
                return Err(Error::Parameter(format!("--complex {} needs --max-degree", a.complex.name())));
            }
            if g.max_edges.is_some() {
                return Err(Error::Parameter("--max-edges does not apply to total complexes".into()));
            }
            Ok(())
        }
        ComplexKind::Decorated => {
            if a.decoration_file.is_none() {
                return Err(Error::Parameter("--complex decorated needs --decoration-file".into()));
            }
            if g.mode != ModeArg::Labeled {
                return Err(Error::Parameter("decorated complexes use labeled mode".into()));
            }
            check_stable_range(g.genus, g.marks)
        }
        ComplexKind::W0gk | ComplexKind::Hgc => check_stable_range(g.genus, g.marks),
    }
}

fn build_complex(ctx: &Ctx, a: &ComplexArgs) -> Result<ChainComplexQ> {
    validate_args(a)?;
    let g = &a.graph;
    let mode: Mode = g.mode.into();
    match a.complex {
        ComplexKind::W0gk | ComplexKind::Hgc => {
            let family = if a.complex == ComplexKind::W0gk { Family::Full } else { Family::Reduced };
            let e = ctx.enumerate(g.genus, g.marks, mode, g.max_edges)?;
            Ok(graph_complex(&e, family, a.complex.name()))
        }
        ComplexKind::Chi | ComplexKind::Total => {
            let opts = TotalOptions {
                family: Family::Reduced,
                include_delta: a.complex == ComplexKind::Total,
                include_chi: true,
            };
            let enumerate = |g, n, m, me| ctx_enumerate(ctx.cli, g, n, m, me);
            total_complex(g.genus, a.max_degree.unwrap_or(0), opts, a.complex.name(), &enumerate)
        }
        ComplexKind::Decorated => {
            let source = a.decoration_file.as_deref().unwrap_or("trivial");
            let ds = load_named_decoration(source, g.genus, g.marks)?;
            let v = validate_decoration(&ds);
            if let Some(x) = v.violations.first() {
                return Err(Error::Decoration(format!(
                    "'{}' fails validation: {} at {}: {}",
                    ds.name, x.check, x.location, x.detail
                )));
            }
            let e = ctx.enumerate(g.genus, g.marks, Mode::Labeled, g.max_edges)?;
            Ok(build_decorated_gk_from(&e, &ds, a.weight)?.0)
        }
    }
}

fn ctx_enumerate(cli: &Cli, g: u32, n: usize, mode: Mode, max_edges: Option<usize>) -> Result<Enumeration> {
    enumerate_cached(g, n, mode, max_edges, cli.cache_dir.as_deref())
}

fn complex_params(r: &mut Report, a: &ComplexArgs) {
    r.param("complex", a.complex.name());
    match a.complex {
        ComplexKind::Chi | ComplexKind::Total => {
            r.param("g", a.graph.genus).param("max_degree", a.max_degree.unwrap_or(0));
        }
        _ => graph_params(r, &a.graph),
    }
    if a.complex == ComplexKind::Decorated {
        r.param("decoration", a.decoration_file.clone().unwrap_or_default()).param("weight", a.weight);
    }
}

fn betti_rows(r: &mut Report, b: &BettiReport) {
    r.columns(&["degree", "dim", "rank", "betti", "truncated"]);
    for row in &b.rows {
        r.row(vec![
            row.degree.into(),
            row.dim.into(),
            row.rank.into(),
            row.betti.into(),
            row.truncated.into(),
        ]);
    }
    let nonzero: Vec<Value> = b
        .nonzero()
        .iter()
        .map(|&(d, x)| Value::String(format!("H^{d}={x}")))
        .collect();
    r.summary("nonzero", Value::Array(nonzero))
        .summary("euler_from_dims", b.euler_from_dims)
        .summary("euler_from_betti", b.euler_from_betti)
        .summary("certified", b.certified)
        .summary("probabilistic", !b.certified);
}

fn betti_report(ctx: &Ctx, a: &ComplexArgs, command: &str) -> Result<(Report, i32)> {
    let c = build_complex(ctx, a)?;
    let mut r = Report::new(command);
    complex_params(&mut r, a);
    r.param("rank", format!("{:?}", ctx.cli.rank).to_lowercase());
    let b = betti_table(&c.complex, ctx.policy())?;
    betti_rows(&mut r, &b);
    Ok((r, 0))
}

fn euler_report(ctx: &Ctx, a: &ComplexArgs) -> Result<Report> {
    let c = build_complex(ctx, a)?;
    let mut r = Report::new("euler");
    complex_params(&mut r, a);
    r.columns(&["degree", "dim", "truncated"]);
    for (&d, &dim) in c.complex.degrees.iter().zip(&c.complex.dims) {
        r.row(vec![d.into(), dim.into(), c.complex.truncated.contains(&d).into()]);
    }
    r.summary("euler", c.complex.euler_from_dims());
    Ok(r)
}

fn check_report(ctx: &Ctx, a: &CheckArgs) -> Result<(Report, i32)> {
    let d2 = a.d2 || !(a.orientation || a.decoration);
    let mut r = Report::new("check");
    r.columns(&["check", "location", "result"]);
    let mut failed = false;
    if a.decoration {
        let source = a
            .complex
            .decoration_file
            .as_deref()
            .ok_or_else(|| Error::Parameter("--decoration needs --decoration-file".into()))?;
        let ds = load_named_decoration(source, a.complex.graph.genus, a.complex.graph.marks)?;
        r.param("decoration", ds.name.clone());
        let v = validate_decoration(&ds);
        for x in &v.violations {
            r.row(vec![x.check.clone().into(), x.location.clone().into(), x.detail.clone().into()]);
        }
        r.summary("decoration_violations", v.violations.len())
            .summary("two_edge_graphs", v.two_edge_graphs);
        failed |= !v.is_clean();
    }
    if d2 || a.orientation {
        complex_params(&mut r, &a.complex);
    }
    if d2 {
        let c = build_complex(ctx, &a.complex)?;
        for (i, d) in c.complex.differentials.iter().enumerate() {
            let next = match c.complex.differentials.get(i + 1) {
                Some(n) => n,
                None => break,
            };
            let ok = next.mul(d).is_zero();
            failed |= !ok;
            r.row(vec![
                "d2".into(),
                format!("degree {}", c.complex.degrees[i]).into(),
                (if ok { "ok" } else { "FAIL" }).into(),
            ]);
        }
        r.summary("d2", if c.complex.d2_failure().is_none() { "ok" } else { "FAIL" });
    }
    if a.orientation {
        let g = &a.complex.graph;
        check_stable_range(g.genus, g.marks)?;
        let mode: Mode = g.mode.into();
        let e = ctx.enumerate(g.genus, g.marks, mode, g.max_edges)?;
        let mut mismatches = 0;
        for k in 0..=e.top_edges() {
            let bad = e
                .with_edges(k)
                .iter()
                .filter(|c| orientation_character(&c.graph, mode) != c.aut.orientation)
                .count();
            mismatches += bad;
            r.row(vec![
                "orientation".into(),
                format!("{k} edges").into(),
                (if bad == 0 { "ok".to_string() } else { format!("FAIL ({bad} classes)") }).into(),
            ]);
        }
        failed |= mismatches > 0;
        r.summary("orientation_mismatches", mismatches);
    }
    r.summary("status", if failed { "FAIL" } else { "OK" });
    Ok((r, if failed { EXIT_CONSISTENCY } else { 0 }))
}

fn compare_report(ctx: &Ctx, a: &CompareArgs) -> Result<(Report, i32)> {
    check_stable_range(a.genus, a.marks)?;
    let mut r = Report::new("compare");
    r.param("g", a.genus)
        .param("n", a.marks)
        .param("left", side_name(a.left))
        .param("right", side_name(a.right));
    let pair = |x, y| (a.left == x && a.right == y) || (a.left == y && a.right == x);
    let equal = if pair(Side::W0gk, Side::Hgc) {
        let e = ctx.enumerate(a.genus, a.marks, Mode::Labeled, None)?;
        let left = betti_table(&graph_complex(&e, Family::Full, "w0gk").complex, ctx.policy())?;
        let right = betti_table(&graph_complex(&e, Family::Reduced, "hgc").complex, ctx.policy())?;
        r.columns(&["degree", "w0gk", "hgc"]);
        let mut equal = true;
        for (x, y) in left.rows.iter().zip(&right.rows) {
            equal &= x.betti == y.betti;
            r.row(vec![x.degree.into(), x.betti.into(), y.betti.into()]);
        }
        equal && left.rows.len() == right.rows.len()
    } else if pair(Side::LabeledAntiinvariants, Side::Hairy) {
        let lab = ctx.enumerate(a.genus, a.marks, Mode::Labeled, None)?;
        let hairy = ctx.enumerate(a.genus, a.marks, Mode::Hairy, None)?;
        r.columns(&["edges", "labeled_antiinvariants", "hairy"]);
        let mut equal = true;
        for k in 0..=max_edge_count(a.genus, a.marks) {
            let x = labeled_antiinvariant_count(&lab, k)?;
            let y = hairy_surviving_count(&hairy, k);
            equal &= x == y;
            r.row(vec![k.into(), x.into(), y.into()]);
        }
        equal
    } else {
        return Err(Error::Parameter(
            "comparable pairs: w0gk with hgc, labeled-antiinvariants with hairy".into(),
        ));
    };
    r.summary("result", if equal { "EQUAL" } else { "DIFFERENT" });
    Ok((r, if equal { 0 } else { EXIT_CONSISTENCY }))
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::W0gk => "w0gk",
        Side::Hgc => "hgc",
        Side::LabeledAntiinvariants => "labeled-antiinvariants",
        Side::Hairy => "hairy",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(std::iter::once("gkgraph").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["betti", "-g", "1", "-n", "1"]).0, 0);
        assert_eq!(run_args(&["betti", "--bogus"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["betti", "-g", "0", "-n", "2"]).0, EXIT_PARAMETER);
        assert_eq!(run_args(&["compare", "-g", "1", "-n", "1", "--left", "w0gk", "--right", "hairy"]).0, EXIT_PARAMETER);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn betti_table_output() {
        let (code, out, _) = run_args(&["betti", "--complex", "w0gk", "-g", "1", "-n", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("nonzero: []"), "{out}");
        let (_, out, _) = run_args(&["betti", "-g", "1", "-n", "1", "--format", "csv"]);
        assert_eq!(out, "degree,dim,rank,betti,truncated\n0,1,1,0,false\n1,1,0,0,false\n");
    }
}
