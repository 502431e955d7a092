mod cmd;
mod input;
mod report;
mod svg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cmd::{Ctx, Output};

#[derive(Parser)]
#[command(name = "newton-forge", version, about = "Exact Newton-polytope tools for monotone ReLU networks and ICNNs")]
struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true, env = "NEWTON_FORGE_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the JSON output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write a static SVG figure here.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Write the report's results and assertions as CSV here.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Worker threads for commands that take several fixtures.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Record wall-clock time. Reports are no longer byte-identical.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a network, circuit or function at a point.
    Eval {
        file: PathBuf,
        /// Comma-separated rationals, e.g. `1,1/2,-3`.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Network to polytope circuit, or circuit back to network.
    Convert { file: PathBuf },
    /// Depth-2 monotone network for a planar function with positive edges.
    Synth2d { function: PathBuf },
    /// Split a polygon into segments and triangles.
    Decompose { polygon: PathBuf },
    /// Build a fixture.
    #[command(subcommand)]
    Build(Build),
    /// Check a property of one or more inputs.
    #[command(subcommand)]
    Check(Check),
    /// Play the coloring game on lattice balls.
    Game {
        #[arg(long, required = true, num_args = 1..)]
        r: Vec<usize>,
        #[arg(long, value_enum, default_value = "separator")]
        strategy: StrategyName,
    },
    /// Smallest vertex boundary over subsets of a lattice ball.
    IsoScan {
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: IsoModeName,
        /// Sets grown in sample mode.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Same as `build ball`.
    Ball {
        #[arg(long)]
        r: usize,
    },
    /// Same as `build realize`.
    Realize {
        #[arg(long)]
        r: usize,
    },
    /// Exact mean distance to max(x1, x2) on the unit square.
    Inapprox {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Build {
    /// m_n, the depth-n monotone network.
    Mn {
        #[arg(long)]
        n: usize,
        /// Emit the polytope circuit instead of the network.
        #[arg(long)]
        circuit: bool,
    },
    /// max(x_1, .., x_n) as an ICNN.
    Maxicnn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        circuit: bool,
    },
    /// The pyramid function, or with --circuit its ICNN circuit.
    Pyramid {
        #[arg(long)]
        circuit: bool,
    },
    /// The lattice ball B_r.
    Ball {
        #[arg(long)]
        r: usize,
    },
    /// The lifted polytope P_r with its face certificate.
    Realize {
        #[arg(long)]
        r: usize,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Isotonic subgradient map, exactly and on sampled pairs.
    Isotonic {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Monotone network discipline and its consequences.
    Monotone {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// ICNN discipline and convexity.
    Icnn {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum StrategyName {
    Optimal,
    Separator,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum IsoModeName {
    Exhaustive,
    Sample,
}

fn dispatch(cli: &Cli, ctx: &Ctx) -> Result<(Output, Option<String>)> {
    match &cli.command {
        Command::Eval { file, x } => cmd::eval(ctx, file, x),
        Command::Convert { file } => cmd::convert(file),
        Command::Synth2d { function } => cmd::synth2d(function),
        Command::Decompose { polygon } => cmd::decompose(polygon),
        Command::Build(b) => match b {
            Build::Mn { n, circuit } => cmd::build_mn(*n, *circuit),
            Build::Maxicnn { n, circuit } => cmd::build_maxicnn(*n, *circuit),
            Build::Pyramid { circuit } => cmd::build_pyramid(*circuit),
            Build::Ball { r } => cmd::lattice::build_ball(*r),
            Build::Realize { r } => cmd::lattice::realize(*r),
        },
        Command::Check(c) => match c {
            Check::Isotonic { files, samples } => cmd::check::isotonic(ctx, files, *samples),
            Check::Monotone { files, samples } => cmd::check::monotone(ctx, files, *samples),
            Check::Icnn { files, samples } => cmd::check::icnn(ctx, files, *samples),
        },
        Command::Game { r, strategy } => cmd::lattice::game(ctx, r, *strategy),
        Command::IsoScan { r, mode, samples } => cmd::lattice::iso_scan(ctx, *r, *mode, *samples),
        Command::Ball { r } => cmd::lattice::build_ball(*r),
        Command::Realize { r } => cmd::lattice::realize(*r),
        Command::Inapprox { files } => cmd::check::inapprox(ctx, files),
    }
}

fn write_to(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if cli.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build()?;
    let ctx = Ctx { command: std::env::args().skip(1).collect(), seed: cli.seed };
    let start = Instant::now();
    let (output, figure) = pool.install(|| dispatch(&cli, &ctx))?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let (text, ok) = match output {
        Output::Artifact { text, ok } => {
            if cli.csv.is_some() {
                bail!("--csv applies only to commands that produce a report");
            }
            if cli.timing {
                eprintln!("wall clock: {elapsed:.3} ms");
            }
            (text, ok)
        }
        Output::Report(mut rep) => {
            if cli.timing {
                rep.wall_clock_ms = Some(elapsed);
            }
            if let Some(p) = &cli.csv {
                let f = std::fs::File::create(p).with_context(|| format!("writing {}", p.display()))?;
                rep.write_csv(f)?;
            }
            (serde_json::to_string_pretty(&rep)?, rep.passed)
        }
    };
    write_to(&cli.out, &(text + "\n"))?;
    match (&cli.svg, figure) {
        (Some(p), Some(s)) => std::fs::write(p, s).with_context(|| format!("writing {}", p.display()))?,
        (Some(_), None) => bail!("this command has no figure"),
        _ => {}
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
            let diag = serde_json::json!({ "error": { "message": e.to_string(), "causes": &chain[1..] } });
            eprintln!("{}", serde_json::to_string_pretty(&diag).unwrap_or_else(|_| e.to_string()));
            ExitCode::from(2)
        }
    }
}
