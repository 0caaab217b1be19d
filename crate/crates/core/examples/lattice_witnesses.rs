//! Band-limited witnesses that coincide up to n-th roots of unity on a lattice of density
//! above n, with the residuals of every identity they must satisfy.

use thetapr::expwitness::{witness_report, GridSpec};

fn main() -> thetapr::Result<()> {
    println!("{:>2} {:>5} {:>10} {:>10} {:>10} {:>10}", "n", "alpha", "recurrence", "vanishing", "gram", "leakage");
    for n in [2usize, 3, 4] {
        for alpha in [n as f64 + 1.0, 2.0 * n as f64] {
            let grid = GridSpec::for_lattice(n, alpha)?;
            let r = witness_report(n, alpha, &grid, 8)?;
            println!(
                "{n:>2} {alpha:>5} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e}",
                r.recurrence_residual, r.vanishing_residual, r.gram_det_x1_x2, r.bump_leakage
            );
        }
    }
    Ok(())
}
