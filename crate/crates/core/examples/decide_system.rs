//! Decide Θ-PR for a random system in C^2 at and below the minimal size, and inspect the
//! witness when the decision is negative.

use thetapr::experiments::random_system;
use thetapr::prcore::witness_independence;
use thetapr::{decide_theta_pr, verify_witness, EngineOptions, PhaseSet};

fn main() -> thetapr::Result<()> {
    let t = PhaseSet::roots_of_unity(3)?;
    let opts = EngineOptions::default();
    for m in [3, 4] {
        let g = random_system(2, m, 42)?;
        let rep = decide_theta_pr(&g, &t, &opts)?;
        println!("d = 2, m = {m}, |Θ| = 3: does Θ-PR = {} after {} assignments", rep.does_pr, rep.assignments_checked);
        if let Some(w) = &rep.witness {
            println!("  assignment {:?}", w.assignment.indices);
            println!("  residual {:.2e}, Gram {:.3}", w.residual, witness_independence(w));
            println!("  verified independently: {}", verify_witness(&g, &t, w, 1e-8));
        }
    }
    Ok(())
}
