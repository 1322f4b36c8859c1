//! Command-line front end: exact solves, simulations, region scans, volume
//! estimates, orbit counts and ergodicity checks.

mod config;
mod parse;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use parrondo::exact::{GameSpec, Params, DEFAULT_EXACT_CAP};
use parrondo::lattice::LatticeDims;
use parrondo::regions::{
    Axis, Condition, ConditionGame, CrossSectionSpec, GameC, ProbeMode, SimBudget,
};
use parrondo::simulate::{default_block_constant, default_warmup, InitialState, SimConfig};

use config::{
    CheckRun, Command, ExactRun, FractionRun, GridFormat, OrbitsRun, ProbeRun, RunConfig, ScanRun,
    SimulateRun, VolumeRun, SCHEMA,
};

/// Invalid input detected after argument parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

// Aliases keep clap from treating these comma lists as repeated flags.
type Assignments = Vec<(usize, f64)>;
type Coordinates = Vec<usize>;
type DimsList = Vec<LatticeDims>;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_CAPACITY: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "parrondo",
    version,
    about = "Spatially dependent Parrondo games on a torus"
)]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Worker threads for parallel scans and sampling (default: all cores).
    #[arg(long, env = "PARRONDO_WORKERS", global = true)]
    workers: Option<usize>,

    /// Write the main output here instead of standard output; the run
    /// config is written to `<out>.config.json`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Re-run a config file written by an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Exact equilibrium mean and variance of profit per turn.
    Exact(ExactArgs),
    /// Monte Carlo estimate of the mean and variance of profit per turn.
    Simulate(SimulateArgs),
    /// Classify a grid over a parameter cross-section.
    Scan(ScanArgs),
    /// Monte Carlo volume of the Parrondo and anti-Parrondo regions.
    Volume(VolumeArgs),
    /// Count symmetry classes of lattice states.
    Orbits(OrbitsArgs),
    /// Evaluate the ergodicity sufficient conditions.
    Check(CheckArgs),
    /// Mean profits across lattice sizes.
    Probe(ProbeArgs),
}

#[derive(Args, Debug)]
struct GameArgs {
    /// Lattice shape, e.g. 3x4.
    #[arg(long, value_parser = parse::dims)]
    dims: LatticeDims,
    /// Game: B, mix:GAMMA or pat:R,S.
    #[arg(long)]
    game: String,
    /// Coin probabilities p0..p4, decimals or fractions (e.g. 1/20,3/20,8/13,3/4,9/10).
    #[arg(long, value_parser = parse::params)]
    p: Params<f64>,
}

#[derive(Args, Debug)]
struct CapArg {
    /// Largest M*N solved exactly (at most 25).
    #[arg(long, env = "PARRONDO_EXACT_CAP", default_value_t = DEFAULT_EXACT_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[command(flatten)]
    game: GameArgs,
    #[command(flatten)]
    cap: CapArg,
    /// Do not use transposition symmetry on square lattices.
    #[arg(long)]
    no_transpose: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Counted turns (scientific notation allowed).
    #[arg(long, value_parser = parse::count)]
    n: u64,
    /// Warm-up turns discarded first (default: 10 times the game-A mixing bound).
    #[arg(long, value_parser = parse::count)]
    warmup: Option<u64>,
    /// Block-size constant c in b = floor(c n^(1/3)) (default: 10, or sqrt(MN) above 100 sites).
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Initial state: zeros or ones.
    #[arg(long, default_value = "zeros", value_parser = ["zeros", "ones"])]
    initial: String,
    /// Write (turn, S_n) rows to this CSV file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Turns between trace rows (default: n / 1000).
    #[arg(long, value_parser = parse::count)]
    trace_stride: Option<u64>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, value_parser = parse::dims)]
    dims: LatticeDims,
    /// Fixed coordinates, e.g. p0=0.1,p4=0.9.
    #[arg(long, value_parser = parse::assignments)]
    fix: Assignments,
    /// Free coordinates, slowest first, e.g. p1,p3,p2.
    #[arg(long, value_parser = parse::coordinates)]
    axes: Coordinates,
    /// Grid points per free axis.
    #[arg(long, default_value_t = 21)]
    points: usize,
    /// Game C: mix:GAMMA or pat:R,S.
    #[arg(long, default_value = "mix:0.5")]
    game: String,
    /// Output format.
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
    #[command(flatten)]
    cap: CapArg,
    /// Simulate each cell for this many turns instead of solving exactly.
    #[arg(long, value_parser = parse::count)]
    turns: Option<u64>,
    /// Warm-up turns for simulated cells.
    #[arg(long, value_parser = parse::count, requires = "turns")]
    warmup: Option<u64>,
    #[arg(long, default_value_t = 0, requires = "turns")]
    seed: u64,
}

#[derive(Args, Debug)]
struct VolumeArgs {
    #[arg(long, value_parser = parse::dims)]
    dims: LatticeDims,
    #[arg(long, value_parser = parse::probability)]
    p0: f64,
    #[arg(long, value_parser = parse::probability)]
    p4: f64,
    /// Game C: mix:GAMMA or pat:R,S.
    #[arg(long)]
    game: String,
    #[arg(long, value_parser = parse::count)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    cap: CapArg,
}

#[derive(Args, Debug)]
struct OrbitsArgs {
    #[arg(long, value_parser = parse::dims)]
    dims: LatticeDims,
    /// Include transposition (square lattices only).
    #[arg(long)]
    transpose: bool,
    /// Write the class table (index, representative, size) as CSV.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("what").required(true).multiple(true).args(["p", "fraction"]))]
struct CheckArgs {
    /// Coin probabilities p0..p4.
    #[arg(long, value_parser = parse::params)]
    p: Option<Params<f64>>,
    /// Also estimate the volume fraction where a condition holds:
    /// basic, annihilating or either.
    #[arg(long)]
    fraction: Option<String>,
    /// Game for the fraction estimate: B or half-mixture.
    #[arg(long, default_value = "B", requires = "fraction")]
    game: String,
    #[arg(long, value_parser = parse::count, default_value = "1000000", requires = "fraction")]
    samples: u64,
    #[arg(long, default_value_t = 0, requires = "fraction")]
    seed: u64,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[arg(long, value_parser = parse::params)]
    p: Params<f64>,
    /// Game C: mix:GAMMA or pat:R,S.
    #[arg(long, default_value = "mix:0.5")]
    game: String,
    /// Comma-separated lattice shapes, e.g. 3x3,3x4,4x4.
    #[arg(long, value_parser = parse::dims_list)]
    sizes: DimsList,
    /// exact or simulate.
    #[arg(long, default_value = "exact", value_parser = ["exact", "simulate"])]
    mode: String,
    /// Counted turns per simulation.
    #[arg(long, value_parser = parse::count)]
    n: Option<u64>,
    #[arg(long, value_parser = parse::count)]
    warmup: Option<u64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    cap: CapArg,
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn game_spec(kind: &str, p: Params<f64>) -> Result<GameSpec<f64>> {
    if kind == "B" || kind == "b" {
        return Ok(GameSpec::B { p });
    }
    let c = game_c(kind)?;
    Ok(c.with_params(p))
}

fn game_c(kind: &str) -> Result<GameC> {
    let parsed = match kind.strip_prefix("mix:") {
        Some(g) => parse::probability(g)
            .map(|gamma| GameC::Mixture { gamma })
            .map_err(usage)?,
        None => kind.parse::<GameC>().map_err(|e| usage(e.to_string()))?,
    };
    Ok(parsed)
}

fn checked(game: GameSpec<f64>) -> Result<GameSpec<f64>> {
    game.validate().map_err(|e| usage(e.to_string()))?;
    Ok(game)
}

fn build(cmd: Cmd) -> Result<Command> {
    Ok(match cmd {
        Cmd::Exact(a) => Command::Exact(ExactRun {
            dims: a.game.dims,
            game: checked(game_spec(&a.game.game, a.game.p)?)?,
            cap: a.cap.cap,
            transpose: !a.no_transpose,
        }),
        Cmd::Simulate(a) => {
            let dims = a.game.dims;
            if a.n == 0 {
                return Err(usage("--n must be at least 1"));
            }
            let initial = match a.initial.as_str() {
                "ones" => InitialState::AllOnes,
                _ => InitialState::AllZeros,
            };
            let sim = SimConfig {
                n: a.n,
                warmup: a.warmup.unwrap_or_else(|| default_warmup(dims)),
                block_constant: a.c.unwrap_or_else(|| default_block_constant(dims)),
                seed: a.seed,
                initial,
            };
            sim.validate().map_err(|e| usage(e.to_string()))?;
            Command::Simulate(SimulateRun {
                dims,
                game: checked(game_spec(&a.game.game, a.game.p)?)?,
                sim,
                trace_stride: a.trace_stride.unwrap_or((a.n / 1000).max(1)).max(1),
                trace: a.trace,
            })
        }
        Cmd::Scan(a) => {
            let fixed: Vec<(usize, f64)> = a.fix;
            let axes: Vec<usize> = a.axes;
            if a.points < 2 {
                return Err(usage("--points must be at least 2"));
            }
            let spec = CrossSectionSpec {
                dims: a.dims,
                fixed,
                axes: axes.into_iter().map(|i| Axis::unit(i, a.points)).collect(),
                game_c: game_c(&a.game)?,
            };
            spec.validate().map_err(|e| usage(e.to_string()))?;
            Command::Scan(ScanRun {
                spec,
                cap: a.cap.cap,
                budget: a.turns.map(|n| SimBudget {
                    n,
                    warmup: a.warmup,
                    block_constant: None,
                    seed: a.seed,
                }),
                format: if a.format == "json" {
                    GridFormat::Json
                } else {
                    GridFormat::Csv
                },
            })
        }
        Cmd::Volume(a) => Command::Volume(VolumeRun {
            dims: a.dims,
            p0: a.p0,
            p4: a.p4,
            game: game_c(&a.game)?,
            samples: a.samples,
            seed: a.seed,
            cap: a.cap.cap,
        }),
        Cmd::Orbits(a) => {
            if a.transpose && !a.dims.is_square() {
                return Err(usage(format!(
                    "--transpose needs a square lattice, got {}",
                    a.dims
                )));
            }
            Command::Orbits(OrbitsRun {
                dims: a.dims,
                transpose: a.transpose,
                table: a.table,
            })
        }
        Cmd::Check(a) => {
            let fraction = match a.fraction {
                Some(c) => Some(FractionRun {
                    condition: c.parse::<Condition>().map_err(|e| usage(e.to_string()))?,
                    game: a
                        .game
                        .parse::<ConditionGame>()
                        .map_err(|e| usage(e.to_string()))?,
                    samples: a.samples,
                    seed: a.seed,
                }),
                None => None,
            };
            Command::Check(CheckRun {
                params: a.p,
                fraction,
            })
        }
        Cmd::Probe(a) => {
            let sizes: Vec<LatticeDims> = a.sizes.into_iter().collect();
            if sizes.is_empty() {
                return Err(usage("--sizes is required"));
            }
            let mode = match a.mode.as_str() {
                "simulate" => ProbeMode::Simulate {
                    n: a.n
                        .ok_or_else(|| usage("--n is required with --mode simulate"))?,
                    seed: a.seed,
                    warmup: a.warmup,
                    block_constant: a.c,
                },
                _ => ProbeMode::Exact,
            };
            Command::Probe(ProbeRun {
                params: a.p,
                game: game_c(&a.game)?,
                sizes,
                mode,
                cap: a.cap.cap,
            })
        }
    })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.chain().any(|e| e.is::<UsageError>()) {
        return EXIT_USAGE;
    }
    match err
        .chain()
        .find_map(|e| e.downcast_ref::<parrondo::Error>())
    {
        Some(e) if e.is_capacity() => EXIT_CAPACITY,
        Some(e) if e.is_domain() => EXIT_DOMAIN,
        Some(
            parrondo::Error::InvalidConfig(_)
            | parrondo::Error::InvalidDims { .. }
            | parrondo::Error::BlockTooLarge { .. }
            | parrondo::Error::TransposeNonSquare { .. },
        ) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.workers {
        if n == 0 {
            bail!(usage("--workers must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("starting worker pool")?;
    }
    let mut config = match (cli.config, cli.command) {
        (Some(path), None) => config::read_config(&path)?,
        (None, Some(cmd)) => RunConfig {
            schema: SCHEMA,
            command: build(cmd)?,
            out: None,
        },
        _ => return Err(usage("give either a command or --config")),
    };
    if cli.out.is_some() {
        config.out = cli.out;
    }
    let output = config.execute()?;
    for (path, bytes) in &output.files {
        std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    }
    match &config.out {
        Some(path) => {
            std::fs::write(path, &output.body)
                .with_context(|| format!("writing {}", path.display()))?;
            config::write_config(&config, &config::config_path(path))?;
        }
        None => std::io::stdout().write_all(&output.body)?,
    }
    eprintln!("{}", output.summary);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
