use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qgraph::asymptotics::{self, Quantity, ReferenceMode};
use qgraph::fermi::FermiProblem;
use qgraph::fixtures::{self, Fixture};
use qgraph::format::{float, row};
use qgraph::orbits::{format_term, PseudoOrbits};
use qgraph::roots::{find_roots, SearchRegion};
use qgraph::secular::{Analytic, GraphSecular, Variant};
use qgraph::{graph, EdgeLengthSchedule, MetricGraph, Parallelism, ScatteringModel, C64};

#[derive(Parser)]
#[command(name = "qgraph", version, about = "Resonances of quantum graphs")]
struct Cli {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Locate resonances in a rectangle of the complex k plane.
    Resonances {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        re: (f64, f64),
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-3:0.05")]
        im: (f64, f64),
        #[arg(long, default_value_t = 1e-10, value_parser = parse_tol)]
        tol: f64,
        #[arg(long, default_value = "cleared")]
        variant: Variant,
    },
    /// Evaluate the resonance condition.
    Secular {
        #[command(subcommand)]
        action: SecularAction,
    },
    /// List the irreducible pseudo-orbits.
    Orbits {
        #[command(flatten)]
        source: Source,
    },
    /// First and second derivatives of an embedded eigenvalue's trajectory.
    Fermi {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        motion: Motion,
    },
    /// Follow a resonance as the edge lengths move.
    Trajectory {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        motion: Motion,
        #[arg(long, value_parser = parse_t_range, allow_hyphen_values = true, default_value = "-0.2:0.2")]
        t: (f64, f64),
        #[arg(long, default_value_t = 400)]
        steps: usize,
    },
    /// Windowed high-energy scans against a reference spectrum, with decay fits.
    Asymptotics {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        mode: ReferenceMode,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        /// Depth of the scan below the real axis (default depends on the mode).
        #[arg(long)]
        im_depth: Option<f64>,
    },
    /// Built-in example graphs.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand)]
enum SecularAction {
    Eval {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = parse_k, allow_hyphen_values = true)]
        k: C64,
        #[arg(long, default_value = "cleared")]
        variant: Variant,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    /// Names and descriptions of the example graphs.
    List {
        /// Include the numbered aliases (fig1..fig9).
        #[arg(long)]
        all: bool,
    },
    /// Print a fixture as a graph document.
    Dump { name: String },
    /// Print a fixture's length schedule.
    Schedule { name: String },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args)]
struct Motion {
    #[arg(long)]
    schedule: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    k0: Option<f64>,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected `a:b`, got `{s}`"))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("`{a}`: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("`{b}`: {e}"))?;
    if !a.is_finite() || !b.is_finite() {
        return Err("range bounds must be finite".into());
    }
    Ok((a, b))
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = parse_pair(s)?;
    if a >= b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

fn parse_t_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = parse_pair(s)?;
    if a > b {
        return Err(format!("reversed range {a}:{b}"));
    }
    Ok((a, b))
}

fn parse_k(s: &str) -> Result<C64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let re: f64 = re.trim().parse().map_err(|e| format!("`{re}`: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("`{im}`: {e}"))?;
    Ok(C64::new(re, im))
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("`{s}`: {e}"))?;
    if !(x > 0.0 && x.is_finite()) {
        return Err("tolerance must be positive".into());
    }
    Ok(x)
}

/// Failures after argument parsing: bad input files are usage errors (exit
/// 2), numerical failures are computation errors (exit 1).
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<qgraph::Error> for Failure {
    fn from(e: qgraph::Error) -> Self {
        use qgraph::Error::*;
        match e {
            Document(_)
            | DanglingReference { .. }
            | DuplicateVertex(_)
            | InvalidLength { .. }
            | IsolatedVertex { .. }
            | RobinDegree { .. }
            | CouplingSize { .. }
            | NonUnitary { .. }
            | UnknownFixture(_)
            | InvalidRegion(_)
            | InvalidSchedule(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

struct Loaded {
    graph: MetricGraph,
    fixture: Option<Fixture>,
}

fn load(source: &Source) -> Result<Loaded, Failure> {
    if let Some(name) = &source.fixture {
        let fx = fixtures::load_fixture(name)?;
        return Ok(Loaded { graph: fx.graph.clone(), fixture: Some(fx) });
    }
    let path = source.graph.as_ref().expect("clap enforces one source");
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(Loaded { graph: graph::build_graph(&text)?, fixture: None })
}

fn motion(loaded: &Loaded, m: &Motion) -> Result<(EdgeLengthSchedule, f64), Failure> {
    let schedule = match (&m.schedule, &loaded.fixture) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            EdgeLengthSchedule::from_json(&text)?
        }
        (None, Some(fx)) => fx.schedule.clone(),
        (None, None) => EdgeLengthSchedule::constant(&loaded.graph),
    };
    let k0 =
        m.k0.or_else(|| loaded.fixture.as_ref().and_then(|f| f.k0))
            .ok_or_else(|| Failure::Usage("--k0 is required for this graph".into()))?;
    Ok((schedule, k0))
}

fn resonances(source: &Source, re: (f64, f64), im: (f64, f64), tol: f64, variant: Variant) -> Outcome {
    let model = ScatteringModel::new(load(source)?.graph)?;
    let f = GraphSecular::new(&model, variant)?;
    let region = SearchRegion::new(re.0, re.1, im.0, im.1)?;
    let mut out = String::from("re_k,im_k,residual,winding,suspect\n");
    for r in find_roots(&f, &region, tol)? {
        out += &row([float(r.k.re), float(r.k.im), float(r.residual), r.winding.to_string(), r.suspect.to_string()]);
        out.push('\n');
    }
    Ok(out)
}

fn secular_eval(source: &Source, k: C64, variant: Variant) -> Outcome {
    let model = ScatteringModel::new(load(source)?.graph)?;
    let v = GraphSecular::new(&model, variant)?.eval(k)?;
    Ok(format!("{} {}\n", float(v.re), float(v.im)))
}

fn orbits(source: &Source) -> Outcome {
    let model = ScatteringModel::new(load(source)?.graph)?;
    let po = PseudoOrbits::new(model.bonds())?;
    Ok(po.terms.iter().map(|t| format_term(model.bonds(), t) + "\n").collect())
}

fn fermi(source: &Source, m: &Motion) -> Outcome {
    let loaded = load(source)?;
    let (schedule, k0) = motion(&loaded, m)?;
    let e = FermiProblem::new(&loaded.graph, &schedule)?.expansion(C64::new(k0, 0.0))?;
    Ok(format!("kdot={}, re_kddot={}, im_kddot={}\n", float(e.kdot.re), float(e.kddot.re), float(e.kddot.im)))
}

fn trajectory(source: &Source, m: &Motion, t: (f64, f64), steps: usize) -> Outcome {
    let loaded = load(source)?;
    let (schedule, k0) = motion(&loaded, m)?;
    let points = FermiProblem::new(&loaded.graph, &schedule)?.trace(C64::new(k0, 0.0), t.0, t.1, steps)?;
    let mut out = String::from("t,re_k,im_k,residual\n");
    for p in points {
        out += &row([float(p.t), float(p.k.re), float(p.k.im), float(p.residual)]);
        out.push('\n');
    }
    Ok(out)
}

fn asymptotics(source: &Source, mode: ReferenceMode, n_min: usize, n_max: usize, im_depth: Option<f64>) -> Outcome {
    let g = load(source)?.graph;
    let depth = im_depth.unwrap_or_else(|| mode.default_im_depth());
    if depth.is_nan() || depth <= 0.0 {
        return Err(Failure::Usage("--im-depth must be positive".into()));
    }
    let windows = asymptotics::windows(&g, n_min, n_max);
    let scans = asymptotics::scan_windows(&g, &windows, mode, depth, Parallelism::default())?;
    let opt = |x: Option<f64>| x.map(float).unwrap_or_default();
    let mut out =
        String::from("n,re_min,re_max,resonances,median_re,median_imag,median_pair_distance,median_real_offset\n");
    for s in &scans {
        out += &row([
            s.window.n.to_string(),
            float(s.window.re_min),
            float(s.window.re_max),
            s.resonances.len().to_string(),
            opt(s.median_re()),
            opt(s.median_imag()),
            opt(s.median_pair_distance()),
            opt(s.median_real_offset()),
        ]);
        out.push('\n');
    }
    out += "\nquantity,slope,intercept,r2\n";
    for q in Quantity::ALL {
        match asymptotics::fit_decay(&scans, q) {
            Ok(fit) => out += &row([q.name().to_string(), float(fit.slope), float(fit.intercept), float(fit.r2)]),
            Err(_) => out += &row([q.name(), "", "", ""]),
        }
        out.push('\n');
    }
    Ok(out)
}

fn fixture_action(action: &FixtureAction) -> Outcome {
    match action {
        FixtureAction::List { all } => {
            let names: &[&str] = if *all { &fixtures::ALL } else { &fixtures::PRIMARY };
            let mut out = String::from("name,description\n");
            for name in names {
                let fx = fixtures::load_fixture(name)?;
                out += &format!("{},\"{}\"\n", fx.name, fx.description);
            }
            Ok(out)
        }
        FixtureAction::Dump { name } => Ok(fixtures::load_fixture(name)?.graph.to_json() + "\n"),
        FixtureAction::Schedule { name } => Ok(fixtures::load_fixture(name)?.schedule.to_json() + "\n"),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Resonances { source, re, im, tol, variant } => resonances(source, *re, *im, *tol, *variant),
        Command::Secular { action: SecularAction::Eval { source, k, variant } } => secular_eval(source, *k, *variant),
        Command::Orbits { source } => orbits(source),
        Command::Fermi { source, motion } => fermi(source, motion),
        Command::Trajectory { source, motion, t, steps } => trajectory(source, motion, *t, *steps),
        Command::Asymptotics { source, mode, n_min, n_max, im_depth } => {
            asymptotics(source, *mode, *n_min, *n_max, *im_depth)
        }
        Command::Fixtures { action } => fixture_action(action),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("QGRAPH_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("QGRAPH_THREADS must be a non-negative integer, got `{value}`")))?;
    #[cfg(feature = "parallel")]
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Compute(e.to_string()))?;
    }
    let _ = n;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| run(&cli)).and_then(|text| {
        match &cli.output {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(String::new())
    });
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
