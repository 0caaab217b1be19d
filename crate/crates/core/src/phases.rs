//! Phase sets, roots of unity, arcs and cross ratios.

use std::f64::consts::{PI, TAU};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{is_finite, Cx};

const UNIMODULAR_TOL: f64 = 1e-12;
const DISTINCT_TOL: f64 = 1e-10;
const CR_DISTINCT_TOL: f64 = 1e-12;
/// Matching tolerance for cross-ratio comparisons.
pub const CR_MATCH_TOL: f64 = 1e-9;

/// A finite, ordered set of pairwise distinct unit complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSet {
    values: Vec<Cx>,
}

impl PhaseSet {
    pub fn new(values: Vec<Cx>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("phase set must be nonempty"));
        }
        for (k, z) in values.iter().enumerate() {
            if !is_finite(*z) {
                return Err(Error::invalid(format!("phase {k} is not finite")));
            }
            if (z.norm() - 1.0).abs() > UNIMODULAR_TOL {
                return Err(Error::invalid(format!("phase {k} = {z} is not unimodular")));
            }
        }
        for (i, j) in (0..values.len()).tuple_combinations() {
            if (values[i] - values[j]).norm() <= DISTINCT_TOL {
                return Err(Error::invalid(format!("phases {i} and {j} coincide")));
            }
        }
        Ok(PhaseSet { values })
    }

    /// The `n`-th roots of unity `e^{2 pi i k / n}`, `k = 0..n-1`. Quarter turns are exact.
    pub fn roots_of_unity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("roots_of_unity needs n >= 1"));
        }
        let values = (0..n)
            .map(|k| {
                if (4 * k) % n == 0 {
                    [Cx::new(1.0, 0.0), Cx::new(0.0, 1.0), Cx::new(-1.0, 0.0), Cx::new(0.0, -1.0)]
                        [4 * k / n]
                } else {
                    Cx::from_polar(1.0, TAU * k as f64 / n as f64)
                }
            })
            .collect();
        PhaseSet::new(values)
    }

    pub fn from_angles(radians: &[f64]) -> Result<Self> {
        if radians.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("angles must be finite"));
        }
        PhaseSet::new(radians.iter().map(|&t| Cx::from_polar(1.0, t)).collect())
    }

    pub fn from_angles_degrees(degrees: &[f64]) -> Result<Self> {
        Self::from_angles(&degrees.iter().map(|d| d.to_radians()).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Cx] {
        &self.values
    }

    pub fn get(&self, k: usize) -> Cx {
        self.values[k]
    }

    /// The image of the set under a pointwise map, revalidated.
    pub fn map(&self, f: impl Fn(Cx) -> Option<Cx>) -> Result<PhaseSet> {
        let values = self
            .values
            .iter()
            .map(|&z| f(z).ok_or_else(|| Error::degenerate("phase mapped to infinity")))
            .collect::<Result<Vec<_>>>()?;
        PhaseSet::new(values)
    }

    pub fn subset(&self, idx: &[usize]) -> Result<PhaseSet> {
        if idx.iter().any(|&k| k >= self.len()) {
            return Err(Error::invalid("subset index out of range"));
        }
        PhaseSet::new(idx.iter().map(|&k| self.values[k]).collect())
    }
}

/// JSON forms accepted for a phase set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum PhaseSpec {
    Explicit { phases: Vec<[f64; 2]> },
    RootsOfUnity { roots_of_unity: usize },
    Degrees { angles_degrees: Vec<f64> },
    Radians { angles_radians: Vec<f64> },
}

impl PhaseSpec {
    pub fn to_phase_set(&self) -> Result<PhaseSet> {
        match self {
            PhaseSpec::Explicit { phases } => {
                PhaseSet::new(phases.iter().map(|[re, im]| Cx::new(*re, *im)).collect())
            }
            PhaseSpec::RootsOfUnity { roots_of_unity } => PhaseSet::roots_of_unity(*roots_of_unity),
            PhaseSpec::Degrees { angles_degrees } => PhaseSet::from_angles_degrees(angles_degrees),
            PhaseSpec::Radians { angles_radians } => PhaseSet::from_angles(angles_radians),
        }
    }
}

impl From<&PhaseSet> for PhaseSpec {
    fn from(p: &PhaseSet) -> Self {
        PhaseSpec::Explicit { phases: p.values.iter().map(|z| [z.re, z.im]).collect() }
    }
}

impl Serialize for PhaseSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PhaseSpec::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PhaseSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = PhaseSpec::deserialize(d)?;
        spec.to_phase_set().map_err(serde::de::Error::custom)
    }
}

/// The closed arc `{e^{it} : t in [start, start + length]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub length: f64,
}

impl Arc {
    pub fn new(start: f64, length: f64) -> Result<Self> {
        if !start.is_finite() || !(length > 0.0 && length < TAU) {
            return Err(Error::invalid(format!("arc length {length} must lie in (0, 2pi)")));
        }
        Ok(Arc { start, length })
    }

    pub fn start_point(&self) -> Cx {
        Cx::from_polar(1.0, self.start)
    }

    pub fn end_point(&self) -> Cx {
        Cx::from_polar(1.0, self.start + self.length)
    }

    /// The point at fraction `s in [0, 1]` along the arc.
    pub fn point(&self, s: f64) -> Cx {
        Cx::from_polar(1.0, self.start + s * self.length)
    }

    /// Whether `z` lies on the arc, up to `tol` radians at either end.
    pub fn contains(&self, z: Cx, tol: f64) -> bool {
        let offset = (z.arg() - self.start).rem_euclid(TAU);
        offset <= self.length + tol || offset >= TAU - tol
    }
}

/// `CR(z1, z2; z3, z4) = (z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3))`.
pub fn cross_ratio(z1: Cx, z2: Cx, z3: Cx, z4: Cx) -> Result<Cx> {
    let zs = [z1, z2, z3, z4];
    if zs.iter().any(|z| !is_finite(*z)) {
        return Err(Error::invalid("cross ratio of non-finite points"));
    }
    for (i, j) in (0..4).tuple_combinations() {
        if (zs[i] - zs[j]).norm() <= CR_DISTINCT_TOL {
            return Err(Error::degenerate(format!("points {} and {} coincide", i + 1, j + 1)));
        }
    }
    Ok((z1 - z3) * (z2 - z4) / ((z1 - z4) * (z2 - z3)))
}

fn require_four(t: &PhaseSet) -> Result<()> {
    if t.len() != 4 {
        return Err(Error::invalid(format!("expected 4 phases, got {}", t.len())));
    }
    Ok(())
}

/// Cross ratios of all 24 orderings of a four-element set, permutations in
/// lexicographic order of indices.
pub fn cr_orderings(t: &PhaseSet) -> Result<Vec<Cx>> {
    require_four(t)?;
    let v = t.values();
    (0..4)
        .permutations(4)
        .map(|p| cross_ratio(v[p[0]], v[p[1]], v[p[2]], v[p[3]]))
        .collect()
}

/// Whether two four-element sets share a cross-ratio value under some orderings.
pub fn cr_equivalent(t: &PhaseSet, t2: &PhaseSet) -> Result<bool> {
    let a = cr_orderings(t)?;
    let b = cr_orderings(t2)?;
    Ok(a.iter().any(|x| b.iter().any(|y| (x - y).norm() <= CR_MATCH_TOL)))
}

/// The six values of the cross-ratio orbit of `lambda` under reordering.
pub fn cr_orbit(lambda: Cx) -> [Cx; 6] {
    let one = Cx::new(1.0, 0.0);
    [
        lambda,
        one / lambda,
        one - lambda,
        one / (one - lambda),
        lambda / (lambda - one),
        (lambda - one) / lambda,
    ]
}

/// Wraps an angle to `(-pi, pi]`.
pub fn wrap_angle(t: f64) -> f64 {
    let w = (t + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}
