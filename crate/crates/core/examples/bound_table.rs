//! The lower bound on the number of vectors for phase retrieval in C^d, for small d.

use thetapr::prcore::{heinosaari_case, heinosaari_lower_bound};

fn main() -> thetapr::Result<()> {
    for d in 2..=16u64 {
        let b = heinosaari_lower_bound(d)?;
        let c = [2, 3, 1][heinosaari_case(d)];
        println!("d = {d:>2}: at least {b:>2} vectors (4d - 4 = {:>2}, correction +{c})", 4 * d - 4);
    }
    Ok(())
}
