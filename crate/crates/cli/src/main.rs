mod args;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use parabolica::construction::{
    default_t_sweep, reproduce_theorem, ChartSearch, ConstructionError, ReproduceConfig,
    DEFAULT_MAX_DEGREE,
};
use parabolica::interval::Rect;
use parabolica::parabolic::build_system;
use parabolica::patchwork::{patchworking_polynomial, regular_subdivision, Lifting};
use parabolica::plot::render_system;
use parabolica::poly::{Rational, SparsePoly};
use parabolica::solver::{isolate_tspp, SolverConfig, SolverError};

use args::{parse_rational, parse_rect, read_param, read_poly};

#[derive(Parser)]
#[command(name = "parabolica", version, about = "Certified special parabolic points and patchworking")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "PARABOLICA_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isolate and certify the transversal special parabolic points of f.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        solve: SolveOpts,
        #[command(flatten)]
        output: OutputOpts,
        /// Also search on the coordinate axes.
        #[arg(long)]
        with_axes: bool,
    },
    /// Build the patchworking polynomial f_t of f for an integer lifting.
    Patchwork {
        #[command(flatten)]
        input: Input,
        /// CSV file with lines `i,j,lambda`.
        #[arg(long)]
        lifting: PathBuf,
        /// Print the specialization at this value (repeatable).
        #[arg(long = "t", value_parser = parse_rational, allow_hyphen_values = true)]
        t: Vec<Rational>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Glue tile counts for the degree-d construction and check the bound.
    Reproduce {
        d: u32,
        /// Parameter values (repeatable); defaults to +-2^-k, k = 4..=16.
        #[arg(long = "t", value_parser = parse_rational, allow_hyphen_values = true)]
        t: Vec<Rational>,
        #[command(flatten)]
        solve: SolveOpts,
        #[command(flatten)]
        output: OutputOpts,
        /// Search each face chart over the whole box instead of near the
        /// tile points.
        #[arg(long)]
        full_charts: bool,
        /// Half-width of the local chart boxes.
        #[arg(long, value_parser = parse_rational, default_value = "1/4")]
        chart_radius: Rational,
        /// Also search f_t itself over the whole box.
        #[arg(long)]
        identity_chart: bool,
        /// Raise the degree guard.
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: u32,
        /// Polynomial file whose terms replace the unit coefficients of f.
        #[arg(long)]
        coefficients: Option<PathBuf>,
        /// Write one SVG per parameter value into this directory.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[command(flatten)]
        view: ViewOpts,
    },
    /// Draw the zero curves of H, E1 and E2 as SVG.
    Plot {
        #[command(flatten)]
        input: Input,
        /// Value substituted for t when f depends on it.
        #[arg(long = "t", value_parser = parse_rational, allow_hyphen_values = true)]
        t: Option<Rational>,
        #[command(flatten)]
        view: ViewOpts,
        /// Skip the certified point markers.
        #[arg(long)]
        no_points: bool,
        #[command(flatten)]
        solve: SolveOpts,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    /// Polynomial expression, e.g. "x^2*y^2*(1+x+y)".
    #[arg(allow_hyphen_values = true, required_unless_present = "file")]
    poly: Option<String>,
    /// Read the polynomial from a file: an expression or exchange lines.
    #[arg(long, short, conflicts_with = "poly")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct SolveOpts {
    /// Search box: `r` for [-r,r]^2, or `x0,x1,y0,y1`.
    #[arg(long = "box", value_parser = parse_rect, allow_hyphen_values = true, default_value = "10")]
    search: Rect,
    /// Minimum box width.
    #[arg(long, value_parser = parse_rational)]
    eps: Option<Rational>,
    /// Maximum subdivision depth.
    #[arg(long)]
    depth: Option<u32>,
}

#[derive(Args)]
struct ViewOpts {
    /// Plot window, same syntax as --box.
    #[arg(long, value_parser = parse_rect, allow_hyphen_values = true, default_value = "2")]
    window: Rect,
    /// Grid cells per side.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(2..=4000))]
    res: u32,
}

#[derive(Args)]
struct OutputOpts {
    /// Output format; `text` is the default for patchwork, `json` otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

/// Exit with 1 on bad input, 2 when a claim is not certified.
enum Failure {
    Input(String),
    Unconfirmed(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl SolveOpts {
    fn config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        if let Some(e) = &self.eps {
            cfg.min_width = args::to_f64(e);
        }
        if let Some(d) = self.depth {
            cfg.max_depth = d;
        }
        cfg
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn solver_failure(e: SolverError) -> Failure {
    Failure::Input(e.to_string())
}

fn analyze(input: &Input, solve: &SolveOpts, output: &OutputOpts, with_axes: bool) -> Result<(), Failure> {
    let f = read_poly(input.poly.as_deref(), input.file.as_deref())?;
    let mut cfg = solve.config();
    cfg.off_axes = !with_axes;
    let sys = build_system(&f);
    let rep = isolate_tspp(&sys, &solve.search, &cfg).map_err(solver_failure)?;
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => report::pretty(&report::analyze_json(&f, &solve.search, &cfg, &rep)),
        Format::Csv | Format::Text => report::analyze_csv(&rep),
    };
    emit(&text, output.out.as_deref())?;
    if rep.is_complete() {
        Ok(())
    } else {
        Err(Failure::Unconfirmed(format!(
            "{} unresolved cluster(s) remain",
            rep.unresolved.len()
        )))
    }
}

fn patchwork(input: &Input, lifting: &Path, ts: &[Rational], output: &OutputOpts) -> Result<(), Failure> {
    let f = read_poly(input.poly.as_deref(), input.file.as_deref())?;
    let lift = Lifting::from_csv(&fs::read_to_string(lifting)?).map_err(|e| Failure::Input(e.to_string()))?;
    let ft = patchworking_polynomial(&f, &lift).map_err(|e| Failure::Input(e.to_string()))?;
    let text = match output.format.unwrap_or(Format::Text) {
        Format::Json => {
            let sub = regular_subdivision(&lift).map_err(|e| Failure::Input(e.to_string()))?;
            report::pretty(&report::patchwork_json(&ft, &sub, ts))
        }
        Format::Csv => report::patchwork_csv(&ft, ts),
        Format::Text => {
            let mut s = format!("{ft}\n");
            for t in ts {
                s.push_str(&format!("t={t}: {}\n", ft.specialize(t)));
            }
            s
        }
    };
    emit(&text, output.out.as_deref())
}

#[allow(clippy::too_many_arguments)]
fn reproduce(
    d: u32,
    ts: &[Rational],
    cfg: &ReproduceConfig,
    output: &OutputOpts,
    plot: Option<&Path>,
    view: &ViewOpts,
) -> Result<(), Failure> {
    let ts = if ts.is_empty() { default_t_sweep() } else { ts.to_vec() };
    let rep = reproduce_theorem(d, &ts, cfg).map_err(|e| match e {
        ConstructionError::DegreeTooSmall(_) | ConstructionError::DegreeTooLarge { .. } => {
            Failure::Input(e.to_string())
        }
        ConstructionError::ZeroParameter => Failure::Input(e.to_string()),
        other => Failure::Unconfirmed(other.to_string()),
    })?;
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => report::pretty(&report::reproduce_json(&rep)),
        Format::Csv | Format::Text => rep.summary_csv(),
    };
    emit(&text, output.out.as_deref())?;
    if let Some(dir) = plot {
        fs::create_dir_all(dir)?;
        for r in &rep.reports {
            let f: SparsePoly = rep.construction.patchwork.specialize(&r.t);
            let markers: Vec<(f64, f64)> = r.points.iter().map(|p| p.center_f64()).collect();
            let svg = render_system(&build_system(&f), &view.window, view.res, &markers);
            let name = format!("d{}_t{}.svg", d, r.t.to_string().replace('/', "_"));
            fs::write(dir.join(name), svg)?;
        }
    }
    if rep.any_holds() {
        Ok(())
    } else {
        Err(Failure::Unconfirmed(format!(
            "no tested t reaches the bound {}",
            rep.bound
        )))
    }
}

fn plot(input: &Input, t: Option<&Rational>, view: &ViewOpts, no_points: bool, solve: &SolveOpts, out: Option<&Path>) -> Result<(), Failure> {
    let fp = read_param(input.poly.as_deref(), input.file.as_deref())?;
    let f = match t {
        Some(t) => fp.specialize(t),
        None if fp.terms().all(|(_, c)| c.degree().unwrap_or(0) == 0) => fp.specialize(&Rational::from_integer(0.into())),
        None => return Err(Failure::Input("the polynomial depends on t; pass --t".into())),
    };
    let sys = build_system(&f);
    let markers = if no_points {
        Vec::new()
    } else {
        match isolate_tspp(&sys, &view.window, &solve.config()) {
            Ok(r) => r.points.iter().filter(|p| p.is_tspp()).map(|p| p.approx).collect(),
            Err(SolverError::Degenerate(_)) => Vec::new(),
            Err(e) => return Err(solver_failure(e)),
        }
    };
    emit(&render_system(&sys, &view.window, view.res, &markers), out)
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    match &cli.command {
        Command::Analyze { input, solve, output, with_axes } => analyze(input, solve, output, *with_axes),
        Command::Patchwork { input, lifting, t, output } => patchwork(input, lifting, t, output),
        Command::Reproduce {
            d,
            t,
            solve,
            output,
            full_charts,
            chart_radius,
            identity_chart,
            max_degree,
            coefficients,
            plot: plot_dir,
            view,
        } => {
            let chart_search = if *full_charts {
                ChartSearch::Full
            } else {
                ChartSearch::Local(chart_radius.clone())
            };
            let coefficients = match coefficients {
                Some(path) => args::read_poly(None, Some(path))?
                    .terms()
                    .map(|(m, c)| ((m.i as i64, m.j as i64), c.clone()))
                    .collect(),
                None => Default::default(),
            };
            let cfg = ReproduceConfig {
                solver: solve.config(),
                search: solve.search.clone(),
                chart_search,
                max_degree: *max_degree,
                identity_chart: *identity_chart,
                coefficients,
            };
            reproduce(*d, t, &cfg, output, plot_dir.as_deref(), view)
        }
        Command::Plot { input, t, view, no_points, solve, out } => {
            plot(input, t.as_ref(), view, *no_points, solve, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Unconfirmed(msg)) => {
            eprintln!("not confirmed: {msg}");
            ExitCode::from(2)
        }
    }
}
