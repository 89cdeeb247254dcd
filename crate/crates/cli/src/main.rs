use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use monounion::engine::DEFAULT_DEPTH_BOUND;
use monounion::fixtures::SearchParams;
use monounion::growth::DEFAULT_M_MAX;
use monounion::persistence::{DEFAULT_HORIZON, DEFAULT_RETURN_BOUND};
use monounion::pipeline::Config;
use monounion::validate::DEFAULT_WINDOW;
use monounion_cli::commands::{
    cmd_analyze, cmd_certify, cmd_fixture, cmd_growth, cmd_search, cmd_validate, CmdOutput, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "monounion",
    version,
    about = "Linear-growth certificates for unions of free monogenic semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Bounds {
    /// Exponent window for the associativity and monotonicity checks.
    #[arg(long, default_value_t = DEFAULT_WINDOW, value_parser = clap::value_parser!(u64).range(1..))]
    window: u64,
    /// Step budget per top-level product.
    #[arg(long, default_value_t = DEFAULT_DEPTH_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
    depth_bound: u64,
    /// Trajectory length for structure checks and K.
    #[arg(long, default_value_t = DEFAULT_HORIZON, value_parser = clap::value_parser!(u64).range(2..))]
    horizon: u64,
    #[arg(long, default_value_t = DEFAULT_RETURN_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
    t_max: u64,
    #[arg(long, default_value_t = DEFAULT_RETURN_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
    q_max: u64,
    /// Largest ball radius to certify.
    #[arg(long, default_value_t = DEFAULT_M_MAX, value_parser = clap::value_parser!(u64).range(1..))]
    m_max: u64,
    /// Worker threads (1 = sequential, 0 = all cores).
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check table totality, associativity and exponent monotonicity.
    Validate {
        spec: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Persistence graph, condensation and weights.
    Analyze {
        spec: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Full pipeline; writes the certificate and the ball table.
    Certify {
        spec: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Ball sizes |J(m)| by breadth-first enumeration only.
    Growth {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_M_MAX, value_parser = clap::value_parser!(u64).range(1..))]
        max_len: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Enumerate small pair tables and keep the valid ones.
    Search {
        #[arg(long, default_value_t = 2)]
        alphabet_size: usize,
        #[arg(long, default_value_t = 2)]
        max_exp: u64,
        #[arg(long, default_value_t = 6)]
        window: u64,
        /// Ball radius used when certifying survivors.
        #[arg(long, default_value_t = 8)]
        m_max: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Write survivors as a JSON list of spec documents.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print a built-in fixture as a spec document.
    Fixture { name: String },
}

fn run_config(b: &Bounds, output: Option<PathBuf>, csv: Option<PathBuf>) -> RunConfig {
    RunConfig {
        core: Config {
            window: b.window,
            depth_bound: b.depth_bound,
            horizon: b.horizon,
            t_max: b.t_max,
            q_max: b.q_max,
            m_max: b.m_max,
            ..Config::default()
        },
        threads: b.threads,
        output,
        csv,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out: CmdOutput = match cli.command {
        Command::Validate { spec, bounds, report } => cmd_validate(&spec, &run_config(&bounds, report, None)),
        Command::Analyze { spec, bounds, output } => cmd_analyze(&spec, &run_config(&bounds, output, None)),
        Command::Certify {
            spec,
            bounds,
            output,
            csv,
        } => cmd_certify(&spec, &run_config(&bounds, output, csv)),
        Command::Growth {
            spec,
            max_len,
            csv,
            bounds,
        } => cmd_growth(&spec, max_len, &run_config(&bounds, None, csv)),
        Command::Search {
            alphabet_size,
            max_exp,
            window,
            m_max,
            threads,
            output,
        } => {
            let params = SearchParams {
                alphabet_size,
                max_result_exp: max_exp,
                window,
                m_max,
                ..SearchParams::default()
            };
            let cfg = RunConfig {
                threads,
                output,
                ..RunConfig::new()
            };
            cmd_search(&params, &cfg)
        }
        Command::Fixture { name } => cmd_fixture(&name),
    };
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
