//! The `exclusivity` command-line tool.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 a bound was left open by
//! its budget (unconverged ϑ or inexact α), 3 a validation or table check
//! failed.

pub mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use exclusivity::graph::{self, io as gio};
use exclusivity::witness::{self, ScanOptions, TableRow};
use exclusivity::{
    extract_representation, jsonfmt, max_independent_set, simulate_game, solve_theta, two_value_representation,
    validate_representation, Error, GameConfig, Graph, OrthonormalRepresentation, SubsetFamilySpec, ThetaConfig,
    ThetaResult,
};

pub use config::{FileConfig, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_OPEN: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

const DEFAULT_ALPHA_BUDGET: f64 = 600.0;
const DEFAULT_TABLE_ALPHA_BUDGET: f64 = 120.0;
const DEFAULT_VALIDATION_TOLERANCE: f64 = 1e-6;
const DEFAULT_ROUNDS: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "exclusivity", version, about = "Independence numbers, Lovász theta and contextuality witnesses")]
pub struct Cli {
    /// JSON settings file; flags take precedence over it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Format of what is printed on standard output [default: text].
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph and write it to a file.
    Gen(GenArgs),
    /// Independence number with a certified bracket.
    Alpha(AlphaArgs),
    /// Lovász theta with a certified bracket.
    Theta(ThetaArgs),
    /// Full witness report (α, ϑ, ratio, predicted profit).
    Witness(WitnessArgs),
    /// Build an orthonormal representation.
    Repr(ReprArgs),
    /// Check a representation against a graph.
    ValidateRepr(ValidateArgs),
    /// Maximum ϑ/α over all labeled graphs on n vertices.
    Scan(ScanArgs),
    /// Recompute the G(q, s) table.
    Table(TableArgs),
    /// Simulate the bookmaker game for a representation.
    Game(GameArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Cycle,
    Complete,
    Gqs,
    AlonR2,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dimacs,
    Json,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    /// Edge probability for `random`.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to JSON for a `.json` path and DIMACS otherwise.
    #[arg(long, value_enum)]
    pub graph_format: Option<GraphFormat>,
}

#[derive(Debug, Args)]
pub struct ThetaFlags {
    /// Certified gap at which the solver stops.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AlphaArgs {
    /// Graph file (DIMACS or JSON).
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Search budget in seconds.
    #[arg(long)]
    pub budget: Option<f64>,
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[command(flatten)]
    pub theta: ThetaFlags,
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
    /// Write the full result, including both certificate matrices.
    #[arg(long, value_name = "FILE")]
    pub certificate: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long)]
    pub budget: Option<f64>,
    #[command(flatten)]
    pub theta: ThetaFlags,
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReprArgs {
    /// Graph file; the representation is read off an optimal ϑ solution.
    #[arg(long = "in", value_name = "FILE", required_unless_present = "two_value", conflicts_with = "two_value")]
    pub input: Option<PathBuf>,
    /// Use the explicit construction for G(q, s) instead.
    #[arg(long, requires_all = ["q", "s"])]
    pub two_value: bool,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[command(flatten)]
    pub theta: ThetaFlags,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub repr: PathBuf,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write one CSV row per graph visited.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Allow n = 7.
    #[arg(long)]
    pub long_run: bool,
    #[command(flatten)]
    pub theta: ThetaFlags,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Independence search budget per row, in seconds.
    #[arg(long)]
    pub alpha_budget: Option<f64>,
    #[command(flatten)]
    pub theta: ThetaFlags,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    /// Representation JSON supplying the probabilities.
    #[arg(long, value_name = "FILE")]
    pub repr: PathBuf,
    /// The bound the bookmaker trusts.
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub rounds: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub stake: Option<f64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli) {
        Ok(report) => {
            let _ = out.write_all(report.stdout.as_bytes());
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

struct Report {
    stdout: String,
    code: i32,
}

struct Context {
    file: FileConfig,
    format: Format,
}

impl Context {
    fn theta(&self, flags: &ThetaFlags) -> exclusivity::Result<ThetaConfig> {
        let mut cfg = ThetaConfig::default();
        self.file.theta.apply(&mut cfg);
        if let Some(v) = flags.tolerance {
            cfg.tolerance = v;
        }
        if let Some(v) = flags.max_iterations {
            cfg.max_iterations = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn budget(&self, flag: Option<f64>, file: Option<f64>, default: f64) -> exclusivity::Result<Duration> {
        config::seconds("budget", flag.or(file).unwrap_or(default))
    }
}

fn execute(cli: Cli) -> exclusivity::Result<Report> {
    let file = match &cli.config {
        Some(path) => FileConfig::parse(&read(path)?)?,
        None => FileConfig::default(),
    };
    let format = cli.format.or(file.format).unwrap_or(Format::Text);
    let ctx = Context { file, format };
    match cli.command {
        Command::Gen(a) => gen(&ctx, a),
        Command::Alpha(a) => alpha(&ctx, a),
        Command::Theta(a) => theta(&ctx, a),
        Command::Witness(a) => witness_cmd(&ctx, a),
        Command::Repr(a) => repr(&ctx, a),
        Command::ValidateRepr(a) => validate(&ctx, a),
        Command::Scan(a) => scan(&ctx, a),
        Command::Table(a) => table(&ctx, a),
        Command::Game(a) => game(&ctx, a),
    }
}

fn read(path: &Path) -> exclusivity::Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> exclusivity::Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> exclusivity::Result<Graph> {
    gio::read_auto(&read(path)?)
}

fn r5(x: f64) -> String {
    format!("{x:.5}")
}

fn no_csv(ctx: &Context, what: &str) -> exclusivity::Result<()> {
    if ctx.format == Format::Csv {
        return Err(Error::Input(format!("csv output is available for scan and table, not {what}")));
    }
    Ok(())
}

/// Writes `value` as JSON to `path` when given, and returns what belongs on
/// standard output: the same JSON, or the text rendering.
fn emit<T: Serialize>(ctx: &Context, value: &T, path: Option<&Path>, text: String) -> exclusivity::Result<String> {
    let json = jsonfmt::to_string(value)?;
    if let Some(p) = path {
        write(p, &json)?;
    }
    Ok(match ctx.format {
        Format::Json => json,
        _ => text,
    })
}

fn gen(ctx: &Context, a: GenArgs) -> exclusivity::Result<Report> {
    no_csv(ctx, "gen")?;
    let need =
        |v: Option<usize>, name: &str| v.ok_or_else(|| Error::Input(format!("--{name} is required for this family")));
    let g = match a.family {
        Family::Cycle => graph::cycle(need(a.n, "n")?)?,
        Family::Complete => graph::complete(need(a.n, "n")?)?,
        Family::Gqs => graph::intersection_family(SubsetFamilySpec::new(need(a.q, "q")?, need(a.s, "s")?)?)?,
        Family::AlonR2 => graph::alon_r2(),
        Family::Random => {
            let p = a.p.ok_or_else(|| Error::input("--p is required for the random family"))?;
            let seed = a.seed.or(ctx.file.seed).unwrap_or(0);
            graph::random_graph(need(a.n, "n")?, p, seed)?
        }
    };
    let as_json = match a.graph_format {
        Some(f) => f == GraphFormat::Json,
        None => a.out.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")),
    };
    let text = if as_json { gio::write_json(&g) } else { gio::write_dimacs(&g) };
    write(&a.out, &text)?;
    #[derive(Serialize)]
    struct Summary {
        n: usize,
        m: usize,
    }
    let summary = Summary { n: g.n(), m: g.edge_count() };
    let stdout = emit(ctx, &summary, None, format!("wrote {} (n={}, m={})\n", a.out.display(), g.n(), g.edge_count()))?;
    Ok(Report { stdout, code: EXIT_OK })
}

#[derive(Serialize)]
struct AlphaOutput<'a> {
    lower_bound: usize,
    upper_bound: usize,
    exact: bool,
    witness_set: &'a [usize],
}

fn alpha(ctx: &Context, a: AlphaArgs) -> exclusivity::Result<Report> {
    no_csv(ctx, "alpha")?;
    let g = read_graph(&a.input)?;
    let budget = ctx.budget(a.budget, ctx.file.alpha_budget, DEFAULT_ALPHA_BUDGET)?;
    let r = max_independent_set(&g, budget);
    // search time and node counts stay out of the file so reruns match byte for byte
    let view = AlphaOutput {
        lower_bound: r.lower_bound,
        upper_bound: r.upper_bound,
        exact: r.exact,
        witness_set: &r.witness_set,
    };
    let text = if r.exact {
        format!("alpha = {}\nset = {:?}\n", r.lower_bound, r.witness_set)
    } else {
        format!("alpha in [{}, {}] (budget exhausted)\nset = {:?}\n", r.lower_bound, r.upper_bound, r.witness_set)
    };
    let stdout = emit(ctx, &view, a.json.as_deref(), text)?;
    Ok(Report { stdout, code: if r.exact { EXIT_OK } else { EXIT_OPEN } })
}

#[derive(Serialize)]
struct ThetaSummary {
    lower_bound: f64,
    upper_bound: f64,
    status: exclusivity::ThetaStatus,
    iterations: usize,
    primal_residual: f64,
    dual_residual: f64,
}

impl From<&ThetaResult> for ThetaSummary {
    fn from(t: &ThetaResult) -> Self {
        ThetaSummary {
            lower_bound: t.lower_bound,
            upper_bound: t.upper_bound,
            status: t.status,
            iterations: t.iterations,
            primal_residual: t.primal_residual,
            dual_residual: t.dual_residual,
        }
    }
}

fn theta(ctx: &Context, a: ThetaArgs) -> exclusivity::Result<Report> {
    no_csv(ctx, "theta")?;
    let g = read_graph(&a.input)?;
    let t = solve_theta(&g, &ctx.theta(&a.theta)?)?;
    if let Some(p) = &a.certificate {
        write(p, &jsonfmt::to_string(&t)?)?;
    }
    let text = format!(
        "theta in [{}, {}]\nstatus = {}\niterations = {}\n",
        r5(t.lower_bound),
        r5(t.upper_bound),
        status_name(t.status),
        t.iterations
    );
    let stdout = emit(ctx, &ThetaSummary::from(&t), a.json.as_deref(), text)?;
    Ok(Report { stdout, code: if t.converged() { EXIT_OK } else { EXIT_OPEN } })
}

fn status_name(s: exclusivity::ThetaStatus) -> &'static str {
    match s {
        exclusivity::ThetaStatus::Exact => "exact",
        exclusivity::ThetaStatus::Converged => "converged",
        exclusivity::ThetaStatus::Unconverged => "unconverged",
    }
}

fn witness_cmd(ctx: &Context, a: WitnessArgs) -> exclusivity::Result<Report> {
    no_csv(ctx, "witness")?;
    let g = read_graph(&a.input)?;
    let budget = ctx.budget(a.budget, ctx.file.alpha_budget, DEFAULT_ALPHA_BUDGET)?;
    let r = witness::witness_report(&g, &ctx.theta(&a.theta)?, budget)?;
    let mut text = String::new();
    let _ = writeln!(text, "n = {}", r.n);
    if r.alpha.exact {
        let _ = writeln!(text, "alpha = {}", r.alpha.lb);
    } else {
        let _ = writeln!(text, "alpha in [{}, {}]", r.alpha.lb, r.alpha.ub);
    }
    let _ = writeln!(text, "theta in [{}, {}]", r5(r.theta.lb), r5(r.theta.ub));
    let _ = writeln!(text, "ratio in [{}, {}]", r5(r.ratio.lb), r5(r.ratio.ub));
    let _ = writeln!(text, "witness = {}", r.is_witness);
    let _ = writeln!(text, "amc fraction = {}", r5(r.amc_fraction));
    let _ = writeln!(text, "predicted profit = {}", r5(r.predicted_profit));
    let stdout = emit(ctx, &r, a.json.as_deref(), text)?;
    Ok(Report { stdout, code: if r.settled() { EXIT_OK } else { EXIT_OPEN } })
}

fn repr(ctx: &Context, a: ReprArgs) -> exclusivity::Result<Report> {
    no_csv(ctx, "repr")?;
    let (rep, code) = if a.two_value {
        let spec = SubsetFamilySpec::new(a.q.unwrap_or(0), a.s.unwrap_or(0))?;
        (two_value_representation(spec)?, EXIT_OK)
    } else {
        let path = a.input.as_deref().ok_or_else(|| Error::input("--in is required"))?;
        let g = read_graph(path)?;
        let t = solve_theta(&g, &ctx.theta(&a.theta)?)?;
        let code = if t.converged() { EXIT_OK } else { EXIT_OPEN };
        (extract_representation(&g, &t)?, code)
    };
    let text = format!("dimension = {}\nvalue = {}\n", rep.dimension, r5(rep.value));
    let stdout = emit(ctx, &rep, a.out.as_deref(), text)?;
    Ok(Report { stdout, code })
}

fn validate(ctx: &Context, a: ValidateArgs) -> exclusivity::Result<Report> {
    no_csv(ctx, "validate-repr")?;
    let g = read_graph(&a.input)?;
    let rep = OrthonormalRepresentation::from_json(&read(&a.repr)?)?;
    let tol = a.tolerance.or(ctx.file.validation_tolerance).unwrap_or(DEFAULT_VALIDATION_TOLERANCE);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Input(format!("tolerance must be positive, got {tol}")));
    }
    let v = validate_representation(&g, &rep, tol)?;
    let text = format!(
        "{}\nmax norm error = {:e}\nmax edge overlap = {:e}\nmax probability error = {:e}\nvalue = {}\n",
        if v.passed { "PASS" } else { "FAIL" },
        v.max_norm_error,
        v.max_edge_overlap,
        v.max_probability_error,
        r5(v.recomputed_value)
    );
    let stdout = emit(ctx, &v, a.json.as_deref(), text)?;
    Ok(Report { stdout, code: if v.passed { EXIT_OK } else { EXIT_CHECK } })
}

fn scan(ctx: &Context, a: ScanArgs) -> exclusivity::Result<Report> {
    let opts = ScanOptions { workers: a.workers.or(ctx.file.workers).unwrap_or(1), allow_long_run: a.long_run };
    let s = witness::exhaustive_ratio_scan(a.n, &ctx.theta(&a.theta)?, &opts)?;
    let csv = witness::scan_csv(&s.rows);
    if let Some(p) = &a.csv {
        write(p, &csv)?;
    }
    #[derive(Serialize)]
    struct Summary {
        n: usize,
        max_ratio: f64,
        argmax_bitmask: u32,
        argmax_edges: Vec<(usize, usize)>,
        graphs: u64,
        solved: u64,
        pruned: u64,
        unconverged: u64,
    }
    let summary = Summary {
        n: s.n,
        max_ratio: s.max_ratio,
        argmax_bitmask: s.argmax_bitmask,
        argmax_edges: s.argmax.edges(),
        graphs: s.stats.graphs,
        solved: s.stats.solved,
        pruned: s.stats.pruned,
        unconverged: s.stats.unconverged,
    };
    let stdout = match ctx.format {
        Format::Csv => csv,
        Format::Json => jsonfmt::to_string(&summary)?,
        Format::Text => format!(
            "n = {}\nmax ratio = {}\nargmax edges = {:?}\ngraphs = {} (solved {}, pruned {}, unconverged {})\n",
            s.n,
            r5(s.max_ratio),
            summary.argmax_edges,
            s.stats.graphs,
            s.stats.solved,
            s.stats.pruned,
            s.stats.unconverged
        ),
    };
    let code = if s.stats.unconverged == 0 { EXIT_OK } else { EXIT_OPEN };
    Ok(Report { stdout, code })
}

fn table_text(rows: &[TableRow]) -> String {
    let mut t =
        String::from("q  s    n  alpha        theta                    two-value   alpha-check     theta-check\n");
    for r in rows {
        let a = &r.report.alpha;
        let alpha = if a.exact { a.lb.to_string() } else { format!("[{}, {}]", a.lb, a.ub) };
        let theta = format!("[{}, {}]", r5(r.report.theta.lb), r5(r.report.theta.ub));
        let two = r.two_value.map(r5).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            t,
            "{:<2} {:<2} {:>4}  {:<12} {:<24} {:<11} {:<15} {}",
            r.q,
            r.s,
            r.report.n,
            alpha,
            theta,
            two,
            r.alpha_check.label(),
            r.theta_check.label()
        );
    }
    for r in rows {
        if let Some(note) = &r.note {
            let _ = writeln!(t, "note ({}, {}): {note}", r.q, r.s);
        }
    }
    let failed = rows.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(t, "{}", if failed == 0 { "PASS".to_string() } else { format!("FAIL ({failed} rows)") });
    t
}

fn table(ctx: &Context, a: TableArgs) -> exclusivity::Result<Report> {
    let budget = ctx.budget(a.alpha_budget, ctx.file.table_alpha_budget, DEFAULT_TABLE_ALPHA_BUDGET)?;
    let rows = witness::reproduce_table(&ctx.theta(&a.theta)?, budget)?;
    let csv = witness::table_csv(&rows);
    if let Some(p) = &a.csv {
        write(p, &csv)?;
    }
    let stdout = match ctx.format {
        Format::Csv => csv,
        Format::Json => jsonfmt::to_string(&rows)?,
        Format::Text => table_text(&rows),
    };
    let code = if rows.iter().all(TableRow::passed) { EXIT_OK } else { EXIT_CHECK };
    Ok(Report { stdout, code })
}

fn game(ctx: &Context, a: GameArgs) -> exclusivity::Result<Report> {
    no_csv(ctx, "game")?;
    let rep = OrthonormalRepresentation::from_json(&read(&a.repr)?)?;
    let f = &ctx.file;
    let mut cfg = GameConfig::uniform(
        rep.probabilities.clone(),
        a.alpha,
        a.epsilon.or(f.epsilon).unwrap_or(0.0),
        a.rounds.or(f.rounds).unwrap_or(DEFAULT_ROUNDS),
        a.seed.or(f.seed).unwrap_or(0),
    );
    cfg.stake = a.stake.or(f.stake).unwrap_or(1.0);
    cfg.workers = a.workers.or(f.workers).unwrap_or(1);
    let r = simulate_game(&cfg)?;
    let text = format!(
        "empirical profit = {} ± {}\nanalytic profit = {}\nrounds = {}\n",
        r5(r.empirical_profit_per_unit),
        r5(r.standard_error),
        r5(r.analytic_expectation),
        r.rounds
    );
    let stdout = emit(ctx, &r, a.json.as_deref(), text)?;
    Ok(Report { stdout, code: EXIT_OK })
}
