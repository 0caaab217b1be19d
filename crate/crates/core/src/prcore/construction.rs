use super::system::VectorSystem;
use crate::error::{Error, Result};
use crate::numkernel::{CVector, Cx};

const SAME_PHASE_TOL: f64 = 1e-10;

/// Groups equal values, largest group first and ties by first appearance.
fn blocks(theta: &[Cx]) -> Vec<Vec<usize>> {
    let mut groups: Vec<(Cx, Vec<usize>)> = Vec::new();
    for (j, &z) in theta.iter().enumerate() {
        match groups.iter_mut().find(|(w, _)| (w - z).norm() <= SAME_PHASE_TOL) {
            Some((_, idx)) => idx.push(j),
            None => groups.push((z, vec![j])),
        }
    }
    let mut out: Vec<Vec<usize>> = groups.into_iter().map(|(_, idx)| idx).collect();
    out.sort_by_key(|b| std::cmp::Reverse(b.len()));
    out
}

/// Splits `0..2d` into `d` pairs `(π(r), π(r + d))` with distinct values in each pair, where
/// `π` lists the blocks of equal values one after another. Needs every value to occur at
/// most `d` times.
pub fn matching_partition(theta: &[Cx], d: usize) -> Result<Vec<(usize, usize)>> {
    if d == 0 || theta.len() != 2 * d {
        return Err(Error::invalid(format!("need 2d = {} values, got {}", 2 * d, theta.len())));
    }
    let bl = blocks(theta);
    let s1 = bl[0].len();
    if s1 > d {
        return Err(Error::InfeasibleInput(format!(
            "a value repeats {s1} times, more than d = {d}"
        )));
    }
    let pi: Vec<usize> = bl.into_iter().flatten().collect();
    Ok((0..d).map(|r| (pi[r], pi[r + d])).collect())
}

/// The system with `g_j = g_k = e_r` for the `r`-th pair `(j, k)` of [`matching_partition`].
pub fn construct_invertible_system(theta: &[Cx], d: usize) -> Result<VectorSystem> {
    let pairs = matching_partition(theta, d)?;
    let mut cols = vec![CVector::zeros(d); 2 * d];
    for (r, &(j, k)) in pairs.iter().enumerate() {
        cols[j] = CVector::unit(d, r);
        cols[k] = CVector::unit(d, r);
    }
    VectorSystem::from_columns(d, cols)
}

/// `conj(∏_r (θ_{j_r} - θ_{k_r}))`, the constraint determinant up to sign.
pub fn expected_determinant(theta: &[Cx], pairs: &[(usize, usize)]) -> Cx {
    pairs.iter().map(|&(j, k)| theta[j] - theta[k]).product::<Cx>().conj()
}

/// `4d - 4 - 2α + c` with `α` the number of ones in the binary expansion of `d - 1` and
/// `c = 2` for odd `d` with `α ≡ 2 (mod 4)`, `c = 3` for odd `d` with `α ≡ 3 (mod 4)`,
/// and `c = 1` otherwise.
pub fn heinosaari_lower_bound(d: u64) -> Result<u64> {
    if d < 2 {
        return Err(Error::invalid("the bound is stated for d >= 2"));
    }
    let alpha = u64::from((d - 1).count_ones());
    let c = match (d % 2, alpha % 4) {
        (1, 2) => 2,
        (1, 3) => 3,
        _ => 1,
    };
    Ok(4 * d - 4 - 2 * alpha + c)
}

/// Which of the three cases of [`heinosaari_lower_bound`] applies: 0, 1 or 2 for the
/// `+2`, `+3` and `+1` branches.
pub fn heinosaari_case(d: u64) -> usize {
    let alpha = u64::from((d - 1).count_ones());
    match (d % 2, alpha % 4) {
        (1, 2) => 0,
        (1, 3) => 1,
        _ => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{determinant, ONE};
    use crate::phases::PhaseSet;
    use crate::prcore::engine::constraint_matrix;

    fn det_of(theta: &[Cx], d: usize) -> (Cx, Cx) {
        let g = construct_invertible_system(theta, d).unwrap();
        let pairs = matching_partition(theta, d).unwrap();
        (determinant(&constraint_matrix(&g, theta)).unwrap(), expected_determinant(theta, &pairs))
    }

    #[test]
    fn partition_of_two_blocks() {
        let theta = [ONE, ONE, -ONE, -ONE];
        assert_eq!(matching_partition(&theta, 2).unwrap(), vec![(0, 2), (1, 3)]);
    }

    #[test]
    fn partition_rejects_dominant_value() {
        assert!(matches!(matching_partition(&[ONE; 4], 2), Err(Error::InfeasibleInput(_))));
        assert!(matches!(matching_partition(&[ONE; 3], 2), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn partition_of_distinct_values() {
        let t = PhaseSet::roots_of_unity(6).unwrap();
        let pairs = matching_partition(t.values(), 3).unwrap();
        for (j, k) in pairs {
            assert_ne!(t.get(j), t.get(k));
        }
    }

    #[test]
    fn determinant_of_sign_pattern() {
        let (det, expect) = det_of(&[ONE, ONE, -ONE, -ONE], 2);
        assert!((det.norm() - 4.0).abs() < 1e-12);
        assert!((det - expect).norm() < 1e-12 || (det + expect).norm() < 1e-12);
    }

    #[test]
    fn determinant_of_fourth_roots() {
        let t = PhaseSet::roots_of_unity(4).unwrap();
        let (det, expect) = det_of(t.values(), 2);
        assert!((det.norm() - expect.norm()).abs() < 1e-12);
    }

    #[test]
    fn bound_spot_values() {
        assert_eq!(heinosaari_lower_bound(2).unwrap(), 3);
        assert_eq!(heinosaari_lower_bound(3).unwrap(), 7);
        // d = 7: d - 1 = 110b, α = 2, odd d.
        assert_eq!(heinosaari_lower_bound(7).unwrap(), 28 - 4 - 4 + 2);
        // d = 15: d - 1 = 1110b, α = 3, odd d.
        assert_eq!(heinosaari_lower_bound(15).unwrap(), 60 - 4 - 6 + 3);
        assert!(heinosaari_lower_bound(1).is_err());
    }

    #[test]
    fn bound_stays_below_trivial() {
        for d in 2..=64 {
            let b = heinosaari_lower_bound(d).unwrap();
            assert!(b <= 4 * d - 4);
            assert!(b as f64 >= 4.0 * d as f64 - 4.0 - 2.0 * (d as f64).log2() - 3.0);
        }
    }
}
