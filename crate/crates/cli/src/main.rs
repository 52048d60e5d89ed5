use std::path::PathBuf;
use std::process::ExitCode;

use apollonius_cli::commands::{self, Outcome};
use apollonius_cli::{CliError, FieldSpec, ProblemConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "apollonius", version, about = "Exact tangent circles and their enriched count")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Problem file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the field: Q or Fp:p.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// The eight tangent circles.
    Solve(Common),
    /// Σβ against the expected hyperbolic form.
    Verify(Common),
    /// θ matrices, the cube check and the conditional sum checks.
    Duality {
        #[command(flatten)]
        common: Common,
        /// Also test this many seeded random configurations.
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        sabotage_labeling: bool,
    },
    /// Verify over each prime in a range.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// lo..hi, inclusive.
        #[arg(long)]
        primes: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare against enumeration of P^3(Fp).
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, hide = true)]
        corrupt_equation: bool,
    },
    /// Draw the inputs and the real tangent circles.
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long, default_value_t = 800)]
        width: u32,
    },
}

fn load(c: &Common) -> Result<(ProblemConfig, apollonius_core::solver::Configuration), CliError> {
    let mut pc = ProblemConfig::load(&c.config)?;
    if let Some(f) = &c.field {
        pc.field = FieldSpec::parse(f)?;
    }
    let cfg = pc.build()?;
    Ok((pc, cfg))
}

fn run(cli: Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    Ok(match cli.cmd {
        Cmd::Solve(c) => {
            let (pc, cfg) = load(&c)?;
            (commands::solve(&pc, &cfg)?, c.out)
        }
        Cmd::Verify(c) => {
            let (pc, cfg) = load(&c)?;
            (commands::verify(&pc, &cfg)?, c.out)
        }
        Cmd::Duality { common, trials, seed, sabotage_labeling } => {
            let (pc, cfg) = load(&common)?;
            (commands::duality(&pc, &cfg, trials, seed, sabotage_labeling)?, common.out)
        }
        Cmd::Sweep { common, primes, csv } => {
            let pc = ProblemConfig::load(&common.config)?;
            (commands::sweep(&pc, &primes, csv.as_deref())?, common.out)
        }
        Cmd::Oracle { common, corrupt_equation } => {
            let (_, cfg) = load(&common)?;
            (commands::oracle(&cfg, corrupt_equation)?, common.out)
        }
        Cmd::Render { common, svg, width } => {
            let (pc, cfg) = load(&common)?;
            (commands::render_cmd(&cfg, pc.branches(), &svg, width)?, common.out)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((outcome, out)) => {
            let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text + "\n") {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => println!("{text}"),
            }
            for line in &outcome.summary {
                eprintln!("{line}");
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
