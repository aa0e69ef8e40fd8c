//! Runs the shipped rotating-field scenario through the scenario runner and
//! prints the head of the trajectory it writes.

use std::path::Path;

use nlevel_gauge::cli::{run_scenario, RunOptions};

fn main() {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/constant_to_rotating.toml");
    let opts = RunOptions {
        output_dir: Some(std::env::temp_dir().join("nlevel-gauge-example")),
        ..RunOptions::default()
    };
    match run_scenario(&config, &opts) {
        Ok(outcome) => {
            println!(
                "pass: {}  (exit code {})",
                outcome.report.pass,
                outcome.exit_code()
            );
            println!("report: {}", outcome.report_path.display());
            if let Some(path) = &outcome.trajectory_path {
                println!("trajectory: {}", path.display());
                let text = std::fs::read_to_string(path).expect("trajectory readable");
                for line in text.lines().take(3) {
                    println!("  {line}");
                }
            }
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
