use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use adaptt::chartime::{kl_char_time_bernoulli, private_char_time, tv_char_time, MirrorAscentConfig};
use adaptt::harness::{resolve_instance, run_suite, sweep_to_dir, Suite, SweepConfig, DESK_EPSILONS};
use adaptt::{Algorithm, Error, RunConfig};

#[derive(Parser)]
#[command(name = "adaptt", version, about = "Private best-arm identification experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an instance x algorithm x epsilon grid and write CSV/JSON results.
    Sweep {
        /// `mu1`..`mu6` or comma-separated means.
        #[arg(long)]
        instance: String,
        #[arg(long, value_delimiter = ',', default_value = "adap-tt")]
        algo: Vec<Algorithm>,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000_000)]
        cap: u64,
        #[arg(long, default_value_t = 2.0)]
        s: f64,
        /// Release unclipped private means.
        #[arg(long)]
        no_clip: bool,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Print the characteristic times of an instance as JSON.
    Chartime {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Run a property audit.
    Check {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn exit_code(e: &Error) -> ExitCode {
    match e {
        Error::Config(_) => ExitCode::from(2),
        _ => ExitCode::FAILURE,
    }
}

fn execute(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Sweep { instance, algo, eps, delta, beta, runs, seed, cap, s, no_clip, out } => {
            let (label, inst) = resolve_instance(&instance)?;
            let config = SweepConfig {
                algorithms: algo,
                epsilons: eps.unwrap_or_else(|| DESK_EPSILONS.to_vec()),
                delta,
                beta,
                runs,
                seed,
                cap,
                s,
                clip: !no_clip,
                ..SweepConfig::new(label, &inst)
            };
            let summary = sweep_to_dir(&config, &out)?;
            for c in &summary.cells {
                println!(
                    "{:<11} eps={:<8} mean_tau={:<14.1} std={:<14.1} err={:.3}",
                    c.algo, c.epsilon, c.mean_tau, c.std_tau, c.error_rate
                );
            }
            if let Some(a) = &summary.annotation {
                println!("regime boundary eps* = {:.4}", a.boundary);
            }
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Chartime { instance, eps } => {
            let (label, inst) = resolve_instance(&instance)?;
            if let Some(e) = eps {
                RunConfig { epsilon: e, ..RunConfig::default() }.validate()?;
            }
            let cfg = MirrorAscentConfig::default();
            let tv = tv_char_time(&inst)?;
            let kl = kl_char_time_bernoulli(&inst, &cfg)?;
            let private = eps.map(|e| private_char_time(&inst, e, &cfg)).transpose()?;
            let doc = json!({
                "instance": label,
                "means": inst.means(),
                "epsilon": eps,
                "tv": tv,
                "kl": kl,
                "private": private,
                "regime_boundary": tv.value / (6.0 * kl.value),
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { suite, runs, seed } => {
            let runs = runs.unwrap_or(match suite {
                Suite::Invariants => 10,
                Suite::Correctness => 100,
            });
            if runs == 0 {
                return Err(Error::Config("runs must be at least 1".into()));
            }
            let lines = run_suite(suite, runs, seed)?;
            for l in &lines {
                println!("{l}");
            }
            Ok(if lines.iter().all(|l| l.passed) { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
