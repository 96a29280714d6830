//! Batch front end: each subcommand runs one family of checks or bound
//! calculations and emits a CSV or JSON report.
//!
//! Exit status: 0 all checks passed, 1 falsification witness found, 2 budget
//! exhausted before a verdict, 64 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use dimgrowth::Rational;

mod commands;
mod registry;
mod report;

use registry::{GroupDesc, SpaceDesc};
use report::{Format, Status};

const EXIT_USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(name = "dimgrowth", version, about = "Verifications and bound calculators for dimension growth")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Seed for every random choice; a fixed seed gives byte-identical reports.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of evaluations (sets, elements, points) per check.
    #[arg(long, global = true, default_value_t = 1 << 24)]
    pub budget: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| format!("`{s}` is not a rational number: {e}"))
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Vertex expansion of small-diameter subsets of the hypercube.
    CubeExpansion(CubeArgs),
    /// Second-boundary inequality on small-diameter subsets of the hypercube.
    Boundary2(CubeArgs),
    /// Exact minimum number of colors for a (lambda, D)-coloring.
    MinColors {
        #[arg(long)]
        space: SpaceDesc,
        #[arg(long, value_parser = rational)]
        lambda: Rational,
        #[arg(long = "D", alias = "d", value_parser = rational)]
        d: Rational,
        /// Largest color count tried.
        #[arg(long, default_value_t = dimgrowth::cluster::DEFAULT_EXACT_CAP)]
        cap: usize,
    },
    /// Exact coloring of a Hex board at scale 2.
    Hex1 {
        #[arg(long)]
        k: usize,
        /// Board side length.
        #[arg(long)]
        s: i64,
        #[arg(long = "D", alias = "d", value_parser = rational, default_value = "1")]
        d: Rational,
        #[arg(long, default_value_t = dimgrowth::cluster::DEFAULT_EXACT_CAP)]
        cap: usize,
    },
    /// Wreath product word length against a breadth-first oracle.
    Parry {
        /// lamplighter (z2wrz), zwrz, or bk:k.
        #[arg(long)]
        instance: GroupDesc,
        #[arg(long)]
        radius: u32,
        #[arg(long, value_enum, default_value_t = commands::Oracle::Bfs)]
        oracle: commands::Oracle,
    },
    /// Lower bound on colors of an iterated wreath product.
    BkLower {
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = rational)]
        lambda: Rational,
        /// Also report whether this control is admissible.
        #[arg(long, value_parser = rational)]
        control: Option<Rational>,
    },
    /// Lower bound on colors of Z wr G from the growth of G.
    ZwgLower {
        #[arg(long)]
        group: GroupDesc,
        #[arg(long, value_parser = rational)]
        lambda: Rational,
        #[arg(long, value_parser = rational)]
        control: Option<Rational>,
    },
    /// Lattice points of a dilated cross-polytope by three routes.
    Ehrhart {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u64,
    },
    /// Diagram cells against word length on a ball of Thompson's group F.
    ThompsonBurillo {
        #[arg(long, default_value_t = 6)]
        radius: u32,
    },
    /// Cell counts and distortion of the embedding of Z^(2^n) into F.
    ThompsonEmbed {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 200)]
        samples: u64,
        /// Exponents are drawn from -spread..=spread.
        #[arg(long, default_value_t = 3)]
        spread: i64,
        /// Check this single exponent vector instead of random ones.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        kvec: Option<Vec<i64>>,
    },
    /// Kolmogorov-Ostrand coloring of a segment of the line.
    KoLine {
        #[arg(long)]
        lambda: i64,
        #[arg(long)]
        m: usize,
        /// Number of periods covered, starting at 0.
        #[arg(long, default_value_t = 10)]
        periods: i64,
        #[arg(long, value_enum, default_value_t = commands::Rule::Staggered)]
        rule: commands::Rule,
    },
    /// Coloring of a box in Z^n with n+1 colors.
    KoGrid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: i64,
        /// Box side; defaults to three times the control.
        #[arg(long)]
        side: Option<i64>,
    },
    /// Power of a line coloring, validated on a box.
    KoPower {
        #[arg(long)]
        lambda: i64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        periods: i64,
    },
    /// Palette and control recursion for iterated wreath products.
    KoBk {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        m: u64,
    },
    /// Expansion of small-diameter vertex sets in a graph.
    PropertyP {
        /// cycle:n, complete:n, or file:<edge list>.
        #[arg(long)]
        graph: commands::GraphDesc,
        #[arg(long, value_parser = rational)]
        epsilon: Rational,
        #[arg(long, value_parser = rational)]
        r: Rational,
        /// Sample this many sets instead of enumerating.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Re-check a JSON coloring against a space.
    Validate {
        #[arg(long)]
        space: SpaceDesc,
        #[arg(long, value_parser = rational)]
        lambda: Rational,
        #[arg(long = "D", alias = "d", value_parser = rational)]
        d: Rational,
        #[arg(long)]
        coloring: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CubeArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub r: u32,
    /// Sample this many subsets instead of enumerating.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Allow a nonpositive constant.
    #[arg(long)]
    pub exploratory: bool,
    /// Check only this subset, given as a hex bitmap.
    #[arg(long)]
    pub subset: Option<String>,
}

fn dispatch(command: Command, cfg: &RunConfig) -> anyhow::Result<report::Report> {
    use commands as c;
    match command {
        Command::CubeExpansion(a) => c::cube(&a, cfg, c::CubeCheckKind::Expansion),
        Command::Boundary2(a) => c::cube(&a, cfg, c::CubeCheckKind::Boundary2),
        Command::MinColors { space, lambda, d, cap } => c::min_colors(&space, lambda, d, cap, cfg),
        Command::Hex1 { k, s, d, cap } => c::hex1(k, s, d, cap, cfg),
        Command::Parry { instance, radius, oracle } => c::parry(&instance, radius, oracle, cfg),
        Command::BkLower { k, lambda, control } => c::bk_lower(k, lambda, control),
        Command::ZwgLower { group, lambda, control } => c::zwg_lower(&group, lambda, control, cfg),
        Command::Ehrhart { k, r } => c::ehrhart(k, r, cfg),
        Command::ThompsonBurillo { radius } => c::thompson_burillo(radius, cfg),
        Command::ThompsonEmbed { n, samples, spread, kvec } => c::thompson_embed(n, samples, spread, kvec, cfg),
        Command::KoLine { lambda, m, periods, rule } => c::ko_line(lambda, m, periods, rule),
        Command::KoGrid { n, lambda, side } => c::ko_grid(n, lambda, side, cfg),
        Command::KoPower { lambda, m, k, periods } => c::ko_power(lambda, m, k, periods, cfg),
        Command::KoBk { k, lambda, m } => c::ko_bk(k, lambda, m),
        Command::PropertyP { graph, epsilon, r, samples } => c::property_p(&graph, epsilon, r, samples, cfg),
        Command::Validate { space, lambda, d, coloring } => c::validate(&space, lambda, d, &coloring, cfg),
    }
}

/// Exhausted budgets are indeterminate, unsound constructions are witnesses,
/// and everything else stems from the arguments.
fn error_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<dimgrowth::Error>() {
        Some(dimgrowth::Error::ResourceLimit { .. }) => Status::Indeterminate.exit_code(),
        Some(dimgrowth::Error::Unsound(_)) => Status::Witness.exit_code(),
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = cli.run;
    let result = dispatch(cli.command, &cfg).and_then(|report| {
        let text = report.render(cfg.format)?;
        match &cfg.output {
            Some(path) => {
                std::fs::write(path, &text).with_context(|| format!("--output: cannot write {}", path.display()))?;
                eprintln!("{}: {}", report.command, report.status);
            }
            None => print!("{text}"),
        }
        Ok(report.status)
    });
    match result {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}
