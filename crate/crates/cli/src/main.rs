use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polarlab_cli::config::{parse_mask_spec, Scenario};
use polarlab_cli::scenario::run_scenario;
use polarlab_cli::suite::{run_property_suite, SuiteHooks};
use polarlab_cli::{CliError, EXIT_ASSERTION, EXIT_OK};

#[derive(Parser)]
#[command(name = "polarlab", version, about = "Extremal weighted eigenvalues on masked grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its artifacts.
    Run {
        config: PathBuf,
        /// Output directory (default: `out` key, else `out/<name>`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the `seed` key.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the randomized invariant batteries.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases per battery.
        #[arg(long, default_value_t = 200)]
        counts: usize,
    },
    /// Domain mask utilities.
    Mask {
        #[command(subcommand)]
        command: MaskCommand,
    },
}

#[derive(Subcommand)]
enum MaskCommand {
    /// Print the mask for a spec such as `annulus,grid=96,R=1,r=0.3,t=0.2`.
    Gen {
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(config: PathBuf, out: Option<PathBuf>, seed: Option<u64>) -> Result<i32, CliError> {
    let mut sc = Scenario::from_file(&config)?;
    if let Some(s) = seed {
        sc.seed = s;
    }
    let dir = out.or_else(|| sc.out.clone()).unwrap_or_else(|| PathBuf::from("out").join(&sc.name));
    let outcome = run_scenario(&sc, &dir)?;
    let rep = &outcome.report;
    println!(
        "{}: lambda0 = {}, lambda = {}, {} iterations, {:?}",
        rep.name, rep.lambda0, rep.lambda, rep.iterations, rep.status
    );
    for c in &rep.checks {
        let tag = if c.pass { "PASS" } else { "FAIL" };
        println!("  {tag} {}: expected {}, got {}", c.check, c.expected, c.actual);
    }
    println!("artifacts in {}", outcome.out_dir.display());
    Ok(if rep.passed { EXIT_OK } else { EXIT_ASSERTION })
}

fn mask_gen(spec: &str, out: Option<PathBuf>) -> Result<i32, CliError> {
    let (domain, grid) = parse_mask_spec(spec)?;
    let text = domain.build(grid)?.to_text();
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, seed } => run(config, out, seed),
        Command::Suite { seed, counts } => {
            let rep = run_property_suite(seed, counts, &SuiteHooks::default());
            print!("{}", rep.table());
            Ok(if rep.passed() { EXIT_OK } else { EXIT_ASSERTION })
        }
        Command::Mask { command: MaskCommand::Gen { spec, out } } => mask_gen(&spec, out),
    };
    let code = result.unwrap_or_else(|e| {
        eprintln!("polarlab: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
