//! Empirical minimal number of random vectors for Θ-PR in C^d, next to the predicted value.

use thetapr::experiments::run_minimality_study;
use thetapr::{EngineOptions, PhaseSet};

fn main() -> thetapr::Result<()> {
    let opts = EngineOptions { threads: 0, ..EngineOptions::default() };
    println!("{:>2} {:>4} {:>9} {:>9}", "d", "|Θ|", "empirical", "predicted");
    for d in [2usize, 3] {
        for k in [1usize, 2, 3, 4] {
            let r = run_minimality_study(d, &PhaseSet::roots_of_unity(k)?, 20, 1, &opts)?;
            let emp = r.empirical_n.map_or("-".to_string(), |n| n.to_string());
            println!("{d:>2} {k:>4} {emp:>9} {:>9}", r.theoretical_n);
        }
    }
    Ok(())
}
