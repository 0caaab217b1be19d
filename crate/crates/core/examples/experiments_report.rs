//! A seeded threshold study and a genericity study, printed as JSON and CSV.

use thetapr::experiments::{run_genericity_study, run_threshold_study, write_summary_csv, Regime};
use thetapr::{EngineOptions, PhaseSet};

fn main() -> thetapr::Result<()> {
    let opts = EngineOptions { threads: 0, ..EngineOptions::default() };
    let t = PhaseSet::roots_of_unity(3)?;
    let below = run_threshold_study(2, Regime::TwoDMinusOne, &t, 25, 9, &opts)?;
    let at = run_genericity_study(2, 4, &t, 25, 9, &opts)?;
    println!("{}", serde_json::to_string_pretty(&at).expect("serializable"));
    write_summary_csv(&[below, at], &mut std::io::stdout()).expect("stdout");
    Ok(())
}
