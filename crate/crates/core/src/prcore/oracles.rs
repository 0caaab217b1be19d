use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::engine::{independent_pair, EngineOptions};
use super::system::VectorSystem;
use crate::error::{Error, Result};
use crate::numkernel::{null_space_basis, rank, CMatrix, CVector, Cx, Tolerance, ZERO};
use crate::phases::{cr_orderings, PhaseSet, CR_MATCH_TOL};

const COMPLEMENT_MAX_M: usize = 24;
const SPARK_MAX_SUBSETS: u128 = 1_000_000;
const C2_EQ_REL: f64 = 1e-10;
const REAL_TOL: f64 = 1e-10;

/// Whether the columns span `C^d`.
pub fn is_complete(g: &VectorSystem, tol: &Tolerance) -> Result<bool> {
    Ok(rank(g.matrix(), tol)? == g.d())
}

/// Whether the selected columns span `C^d`; the empty selection spans `{0}`.
pub fn is_complete_subset(g: &VectorSystem, idx: &[usize], tol: &Tolerance) -> Result<bool> {
    if idx.is_empty() {
        return Ok(false);
    }
    if idx.iter().any(|&j| j >= g.m()) {
        return Err(Error::invalid("column index out of range"));
    }
    Ok(rank(&g.matrix().select_columns(idx), tol)? == g.d())
}

/// Every bipartition has a complete side. Scans the `2^{m-1}` splits that keep the last
/// column on the right.
pub fn has_complement_property(g: &VectorSystem, tol: &Tolerance) -> Result<bool> {
    let m = g.m();
    if m > COMPLEMENT_MAX_M {
        return Err(Error::ResourceLimit {
            message: format!("complement property needs m <= {COMPLEMENT_MAX_M}, got {m}"),
            checked: 0,
        });
    }
    for mask in 0u64..(1u64 << (m - 1)) {
        let (left, right): (Vec<usize>, Vec<usize>) = (0..m).partition(|&j| mask >> j & 1 == 1);
        if !is_complete_subset(g, &left, tol)? && !is_complete_subset(g, &right, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Every `d` columns are linearly independent.
pub fn is_full_spark(g: &VectorSystem, tol: &Tolerance) -> Result<bool> {
    let (d, m) = (g.d(), g.m());
    if m < d {
        return Err(Error::invalid(format!("full spark needs m >= d, got m = {m} < d = {d}")));
    }
    let count = binomial(m, d);
    if count > SPARK_MAX_SUBSETS {
        return Err(Error::ResourceLimit {
            message: format!("C({m}, {d}) = {count} subsets exceeds {SPARK_MAX_SUBSETS}"),
            checked: 0,
        });
    }
    for idx in (0..m).combinations(d) {
        if rank(&g.matrix().select_columns(&idx), tol)? < d {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Failure of sign retrieval (any two-element Θ), through the complement property.
pub fn fails_2pr_oracle(g: &VectorSystem, tol: &Tolerance) -> Result<bool> {
    Ok(!has_complement_property(g, tol)?)
}

/// A certificate for failure with three phases: a labelling of the columns into
/// `G_1, G_2, G_3` and nonzero `x_j ⊥ G_j` with `x_1, x_2` independent and
/// `x_3 = x_1 + x_2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover3 {
    pub labels: Vec<u8>,
    pub x1: CVector,
    pub x2: CVector,
    pub x3: CVector,
}

impl Cover3 {
    /// Largest `|<x_j, g>| / (‖x_j‖ ‖g‖)` over labelled columns.
    pub fn orthogonality_residual(&self, g: &VectorSystem) -> f64 {
        let xs = [&self.x1, &self.x2, &self.x3];
        (0..g.m())
            .map(|j| {
                let gj = g.column(j);
                let x = xs[(self.labels[j] - 1) as usize];
                let s = x.norm() * gj.norm();
                if s == 0.0 {
                    0.0
                } else {
                    x.inner(&gj).norm() / s
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Searches all `3^m` labellings for a [`Cover3`]. Any nonzero `x_3 = a x_1 + b x_2`
/// reduces to `a = b = 1` after rescaling, or to a labelling with an empty third class,
/// so the linear system in `(conj x_1, conj x_2)` is exhaustive.
pub fn fails_3pr_cover(g: &VectorSystem, t: &PhaseSet, opts: &EngineOptions) -> Result<Option<Cover3>> {
    if t.len() != 3 {
        return Err(Error::invalid(format!("the cover oracle needs |Θ| = 3, got {}", t.len())));
    }
    let (d, m) = (g.d(), g.m());
    if d < 2 {
        return Err(Error::invalid("the cover oracle needs d >= 2"));
    }
    let total = 3u64.checked_pow(m as u32).filter(|&n| n <= opts.budget).ok_or_else(|| {
        Error::ResourceLimit { message: format!("3^{m} labellings exceed the budget {}", opts.budget), checked: 0 }
    })?;
    let f = g.matrix();
    for k in 0..total {
        let labels: Vec<u8> = super::system::Assignment::from_index(k, 3, m)
            .indices
            .iter()
            .map(|&i| i as u8 + 1)
            .collect();
        let mat = CMatrix::from_fn(m, 2 * d, |j, c| {
            let (left, i) = if c < d { (true, c) } else { (false, c - d) };
            match (labels[j], left) {
                (1, true) | (2, false) | (3, _) => f.get(i, j),
                _ => ZERO,
            }
        });
        let basis = null_space_basis(&mat, &opts.tol)?;
        if let Some(v) = independent_pair(&basis, opts.pair_tol) {
            let (top, bottom) = v.entries().split_at(d);
            let x1 = CVector::new(top.to_vec()).conj();
            let x2 = CVector::new(bottom.to_vec()).conj();
            let x3 = x1.add(&x2);
            return Ok(Some(Cover3 { labels, x1, x2, x3 }));
        }
    }
    Ok(None)
}

fn c2_scale(a: Cx, b: Cx, c: Cx) -> f64 {
    C2_EQ_REL * 1f64.max(a.norm()).max(b.norm()).max(c.norm())
}

fn any_coincidence(a: Cx, b: Cx, c: Cx) -> bool {
    let eps = c2_scale(a, b, c);
    (a - b).norm() <= eps || (b - c).norm() <= eps || (a - c).norm() <= eps
}

/// Closed form for `G(a, b, c)` with `|Θ| ∈ {2, 3, 4}`; returns whether Θ-PR holds.
pub fn c2_oracle(a: Cx, b: Cx, c: Cx, t: &PhaseSet) -> Result<bool> {
    let eps = c2_scale(a, b, c);
    match t.len() {
        2 => Ok(!((a - b).norm() <= eps && (b - c).norm() <= eps && (a - c).norm() <= eps)),
        3 => Ok(!any_coincidence(a, b, c)),
        4 => {
            if any_coincidence(a, b, c) {
                return Ok(false);
            }
            let ratio = (c - a) / (b - a);
            let hit = cr_orderings(t)?
                .iter()
                .any(|cr| (ratio - cr.conj()).norm() <= CR_MATCH_TOL * cr.norm().max(1.0));
            Ok(!hit)
        }
        n => Err(Error::invalid(format!("closed form covers |Θ| in {{2, 3, 4}}, got {n}"))),
    }
}

/// Closed form for phase retrieval over the whole circle in `C^2`.
pub fn c2_pr_oracle(a: Cx, b: Cx, c: Cx) -> bool {
    if (b - a).norm() <= c2_scale(a, b, c) {
        return false;
    }
    ((c - a) / (b - a)).im.abs() >= REAL_TOL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::ONE;
    use crate::prcore::system::c2_system;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn sys(d: usize, cols: &[&[Cx]]) -> VectorSystem {
        VectorSystem::from_columns(d, cols.iter().map(|c| CVector::new(c.to_vec())).collect()).unwrap()
    }

    #[test]
    fn completeness_examples() {
        assert!(is_complete(&VectorSystem::standard_basis(3).unwrap(), &tol()).unwrap());
        let two = sys(3, &[&[ONE, ZERO, ZERO], &[ZERO, ONE, ZERO]]);
        assert!(!is_complete(&two, &tol()).unwrap());
        assert!(!is_complete_subset(&two, &[], &tol()).unwrap());
    }

    #[test]
    fn complement_property_examples() {
        let e = sys(2, &[&[ONE, ZERO], &[ZERO, ONE]]);
        assert!(!has_complement_property(&e, &tol()).unwrap());
        assert!(fails_2pr_oracle(&e, &tol()).unwrap());
        let mb = sys(2, &[&[ONE, ZERO], &[ZERO, ONE], &[ONE, ONE]]);
        assert!(has_complement_property(&mb, &tol()).unwrap());
        let big = VectorSystem::from_columns(1, vec![CVector::new(vec![ONE]); 25]).unwrap();
        assert!(matches!(has_complement_property(&big, &tol()), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn full_spark_examples() {
        let mb = sys(2, &[&[ONE, ZERO], &[ZERO, ONE], &[ONE, ONE]]);
        assert!(is_full_spark(&mb, &tol()).unwrap());
        let rep = sys(2, &[&[ONE, ZERO], &[ZERO, ONE], &[ONE, ZERO]]);
        assert!(!is_full_spark(&rep, &tol()).unwrap());
        let short = sys(2, &[&[ONE, ZERO]]);
        assert!(matches!(is_full_spark(&short, &tol()), Err(Error::InvalidInput(_))));
        let wide = VectorSystem::from_columns(10, vec![CVector::unit(10, 0); 40]).unwrap();
        assert!(matches!(is_full_spark(&wide, &tol()), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn cover_for_coinciding_parameters() {
        let g = c2_system(ZERO, ZERO, ONE);
        let t = PhaseSet::roots_of_unity(3).unwrap();
        let cover = fails_3pr_cover(&g, &t, &EngineOptions::default()).unwrap().unwrap();
        assert!(cover.orthogonality_residual(&g) < 1e-10);
        for x in [&cover.x1, &cover.x2, &cover.x3] {
            assert!(x.norm() > 1e-6);
        }
    }

    #[test]
    fn no_cover_for_distinct_parameters() {
        let g = c2_system(ZERO, ONE, Cx::new(0.3, 0.8));
        let t = PhaseSet::roots_of_unity(3).unwrap();
        assert!(fails_3pr_cover(&g, &t, &EngineOptions::default()).unwrap().is_none());
        let t2 = PhaseSet::roots_of_unity(2).unwrap();
        assert!(fails_3pr_cover(&g, &t2, &EngineOptions::default()).is_err());
    }

    #[test]
    fn c2_closed_form_examples() {
        let t2 = PhaseSet::roots_of_unity(2).unwrap();
        let t3 = PhaseSet::roots_of_unity(3).unwrap();
        let t4 = PhaseSet::roots_of_unity(4).unwrap();
        assert!(!c2_oracle(ZERO, ZERO, ZERO, &t2).unwrap());
        assert!(c2_oracle(ZERO, ZERO, ONE, &t2).unwrap());
        assert!(!c2_oracle(ZERO, ZERO, ONE, &t3).unwrap());
        assert!(!c2_oracle(ZERO, ONE, -ONE, &t4).unwrap());
        assert!(c2_oracle(ZERO, ONE, Cx::new(0.2, 0.9), &t4).unwrap());
        assert!(c2_oracle(ZERO, ONE, ONE, &PhaseSet::roots_of_unity(5).unwrap()).is_err());
    }

    #[test]
    fn c2_phase_retrieval_examples() {
        assert!(!c2_pr_oracle(ZERO, ONE, Cx::new(2.0, 0.0)));
        assert!(c2_pr_oracle(ZERO, ONE, Cx::new(0.0, 1.0)));
        assert!(!c2_pr_oracle(ZERO, ZERO, Cx::new(0.4, -3.0)));
    }
}
