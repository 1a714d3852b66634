//! Run a small end-to-end experiment (Jones growth rows, squeeze
//! proxies, extrapolation, critical point, property checks) and print
//! the JSON report exactly as the `twistvol verify` command writes it.
//!
//! Run with: cargo run --release --example convergence_report

use twistvol::conjecture::{run_experiment, ExperimentConfig};
use twistvol::report::render_report_json;

fn main() {
    let config = ExperimentConfig::new(2, vec![10, 20, 30, 40]).unwrap();
    let report = run_experiment(&config).unwrap();
    print!("{}", render_report_json(&report));
}
