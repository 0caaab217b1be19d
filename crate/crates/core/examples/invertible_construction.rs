//! Explicit systems whose constraint matrix is invertible for a prescribed phase
//! assignment, and the rejection of assignments that repeat one value too often.

use thetapr::numkernel::determinant;
use thetapr::prcore::{build_constraint_matrix, construct_invertible_system, expected_determinant, matching_partition};
use thetapr::{Assignment, PhaseSet};

fn main() -> thetapr::Result<()> {
    let t = PhaseSet::roots_of_unity(3)?;
    for idx in [vec![0, 0, 1, 2], vec![0, 1, 1, 2, 2, 0], vec![0, 0, 0, 1]] {
        let a = Assignment::new(idx.clone());
        let theta = a.values(&t);
        let d = idx.len() / 2;
        match matching_partition(&theta, d) {
            Ok(pairs) => {
                let g = construct_invertible_system(&theta, d)?;
                let det = determinant(&build_constraint_matrix(&g, &t, &a)?)?;
                println!("{idx:?}: pairs {pairs:?}, |det| = {:.6}, expected {:.6}", det.norm(), expected_determinant(&theta, &pairs).norm());
            }
            Err(e) => println!("{idx:?}: {e}"),
        }
    }
    Ok(())
}
