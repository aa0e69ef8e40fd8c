use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nlevel_gauge::cli::{self, RunOptions, OUTPUT_DIR_ENV};
use nlevel_gauge::verify::resolve_sign_convention;

#[derive(Parser)]
#[command(
    name = "nlevel-gauge",
    version,
    about = "Generate and certify exact n-level solutions by gauge transformation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, certify and write trajectory and report files.
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
        #[command(flatten)]
        flags: Flags,
        /// Scenario files processed concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Certify only; prints the report.
    Certify {
        config: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Print the oracle-determined sign of the dα/dt term.
    ResolveSign,
}

#[derive(Args)]
struct Flags {
    /// Interior points of the residual grid.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    rtol: Option<f64>,
    #[arg(long)]
    atol: Option<f64>,
    #[arg(long, env = OUTPUT_DIR_ENV)]
    output_dir: Option<PathBuf>,
}

impl Flags {
    fn options(self, report_only: bool) -> RunOptions {
        RunOptions {
            grid: self.grid,
            rtol: self.rtol,
            atol: self.atol,
            output_dir: self.output_dir,
            report_only,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let code = match cli.command {
        Command::Run {
            configs,
            flags,
            jobs,
        } => {
            let results = cli::run_many(&configs, &flags.options(false), jobs);
            for (config, r) in configs.iter().zip(&results) {
                match r {
                    Ok(o) => {
                        let status = if o.report.pass { "pass" } else { "FAIL" };
                        println!(
                            "{}: {status} residual={:.3e} report={}",
                            config.display(),
                            o.report.max_schrodinger_residual,
                            o.report_path.display()
                        );
                        if let Some(d) = &o.report.diagnostic {
                            eprintln!("{}: {d}", config.display());
                        }
                    }
                    Err(e) => eprintln!("{}: {e}", config.display()),
                }
            }
            cli::combined_exit_code(&results)
        }
        Command::Certify { config, flags } => {
            let result = cli::run_scenario(&config, &flags.options(true));
            match &result {
                Ok(o) => println!(
                    "{}",
                    serde_json::to_string_pretty(&o.report).expect("report serializes")
                ),
                Err(e) => eprintln!("{}: {e}", config.display()),
            }
            cli::exit_code(&result)
        }
        Command::ResolveSign => match resolve_sign_convention() {
            Ok(sign) => {
                println!("{sign}");
                0
            }
            Err(e) => {
                eprintln!("{e}");
                2
            }
        },
    };
    ExitCode::from(code as u8)
}
