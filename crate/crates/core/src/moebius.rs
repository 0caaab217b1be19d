//! Möbius maps of the extended plane that preserve the unit circle.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{is_finite, Cx, ONE, ZERO};
use crate::phases::{Arc, PhaseSet};

const I: Cx = Cx::new(0.0, 1.0);
const SINGULAR_TOL: f64 = 1e-12;
const INFINITY_REL: f64 = 1e-14;
const CIRCLE_TOL: f64 = 1e-9;
/// Tolerance for projective equality of matrices.
pub const PROJECTIVE_TOL: f64 = 1e-9;

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtPoint {
    Finite(Cx),
    Infinity,
}

impl ExtPoint {
    pub fn finite(self) -> Option<Cx> {
        match self {
            ExtPoint::Finite(z) => Some(z),
            ExtPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtPoint::Infinity)
    }
}

impl From<Cx> for ExtPoint {
    fn from(z: Cx) -> Self {
        ExtPoint::Finite(z)
    }
}

/// `z -> (a z + b) / (c z + d)`, stored as `[a, b, c, d]` up to a nonzero scalar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub struct MoebiusMap {
    m: [Cx; 4],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapRepr {
    matrix: [Cx; 4],
}

impl TryFrom<MapRepr> for MoebiusMap {
    type Error = Error;
    fn try_from(r: MapRepr) -> Result<Self> {
        MoebiusMap::new(r.matrix[0], r.matrix[1], r.matrix[2], r.matrix[3])
    }
}

impl From<MoebiusMap> for MapRepr {
    fn from(m: MoebiusMap) -> Self {
        MapRepr { matrix: m.m }
    }
}

impl MoebiusMap {
    /// Rejects `|ad - bc| <= 1e-12` relative to the squared entry scale.
    pub fn new(a: Cx, b: Cx, c: Cx, d: Cx) -> Result<Self> {
        let m = [a, b, c, d];
        if m.iter().any(|z| !is_finite(*z)) {
            return Err(Error::invalid("Möbius matrix has non-finite entries"));
        }
        let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 || (a * d - b * c).norm() <= SINGULAR_TOL * scale * scale {
            return Err(Error::degenerate("Möbius matrix is singular"));
        }
        Ok(MoebiusMap { m })
    }

    pub fn identity() -> Self {
        MoebiusMap { m: [ONE, ZERO, ZERO, ONE] }
    }

    /// `z -> e^{i t} z`.
    pub fn rotation(t: f64) -> Self {
        MoebiusMap { m: [Cx::from_polar(1.0, t), ZERO, ZERO, ONE] }
    }

    /// `z -> z + b`.
    pub fn translation(b: Cx) -> Self {
        MoebiusMap { m: [ONE, b, ZERO, ONE] }
    }

    /// `C(z) = i (1 + z) / (1 - z)`.
    pub fn cayley_map() -> Self {
        MoebiusMap { m: [I, I, -ONE, ONE] }
    }

    /// `C^{-1}(w) = (w - i) / (w + i)`.
    pub fn cayley_inverse_map() -> Self {
        MoebiusMap { m: [ONE, -I, ONE, I] }
    }

    /// The matrix `(a, b; conj b, conj a)` with `|a|^2 - |b|^2 = 1` after normalizing `a`.
    /// `a` only contributes its phase.
    pub fn u11(a_phase: f64, b: Cx) -> Result<Self> {
        if !a_phase.is_finite() || !is_finite(b) {
            return Err(Error::invalid("U(1,1) parameters must be finite"));
        }
        let a = Cx::from_polar((1.0 + b.norm_sqr()).sqrt(), a_phase);
        MoebiusMap::new(a, b, b.conj(), a.conj())
    }

    pub fn matrix(&self) -> [Cx; 4] {
        self.m
    }

    pub fn apply(&self, z: Cx) -> ExtPoint {
        let [a, b, c, d] = self.m;
        let den = c * z + d;
        if den.norm() <= INFINITY_REL * (c.norm() * z.norm() + d.norm()) {
            ExtPoint::Infinity
        } else {
            ExtPoint::Finite((a * z + b) / den)
        }
    }

    pub fn apply_ext(&self, p: ExtPoint) -> ExtPoint {
        match p {
            ExtPoint::Finite(z) => self.apply(z),
            ExtPoint::Infinity => {
                let [a, _, c, _] = self.m;
                if c.norm() <= INFINITY_REL * a.norm() {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::Finite(a / c)
                }
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        let m = [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h];
        let s = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        MoebiusMap { m: m.map(|z| z / s) }
    }

    pub fn invert(&self) -> Result<MoebiusMap> {
        let [a, b, c, d] = self.m;
        MoebiusMap::new(d, -b, -c, a)
    }

    /// Proportionality of the matrices within `tol`, relative to the entry scale.
    pub fn projectively_equal(&self, other: &MoebiusMap, tol: f64) -> bool {
        let (p, q) = (self.m, other.m);
        let k = (0..4).max_by(|&i, &j| q[i].norm().total_cmp(&q[j].norm())).unwrap_or(0);
        let lambda = p[k] / q[k];
        let scale = p.iter().map(|z| z.norm()).fold(0.0, f64::max);
        (0..4).all(|i| (p[i] - lambda * q[i]).norm() <= tol * scale)
    }

    /// Three-point test: `1`, `i`, `-1` land on the unit circle within 1e-9.
    pub fn is_circle_preserving(&self) -> bool {
        [ONE, I, -ONE].iter().all(|&z| match self.apply(z) {
            ExtPoint::Finite(w) => (w.norm() - 1.0).abs() < CIRCLE_TOL,
            ExtPoint::Infinity => false,
        })
    }

    /// The image of a phase set, renormalized onto the circle.
    pub fn map_phase_set(&self, t: &PhaseSet) -> Result<PhaseSet> {
        t.map(|z| {
            self.apply(z).finite().filter(|w| (w.norm() - 1.0).abs() < CIRCLE_TOL).map(|w| w / w.norm())
        })
    }
}

pub fn cayley(z: Cx) -> ExtPoint {
    MoebiusMap::cayley_map().apply(z)
}

pub fn cayley_inverse(w: ExtPoint) -> Cx {
    MoebiusMap::cayley_inverse_map()
        .apply_ext(w)
        .finite()
        .expect("inverse Cayley is finite off -i")
}

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

/// A map of the circle carrying arc `a` onto arc `b`, start to start and end to end.
pub fn arc_to_arc(a: &Arc, b: &Arc) -> Result<MoebiusMap> {
    let a = Arc::new(a.start, a.length)?;
    let b = Arc::new(b.start, b.length)?;
    let shift = cot(a.length / 2.0) - cot(b.length / 2.0);
    let m = MoebiusMap::rotation(b.start)
        .compose(&MoebiusMap::cayley_inverse_map())
        .compose(&MoebiusMap::translation(Cx::new(shift, 0.0)))
        .compose(&MoebiusMap::cayley_map())
        .compose(&MoebiusMap::rotation(-a.start));
    Ok(m)
}

/// `m(x) = e^{iβ} (x + i v1)(x - i v2) / ((x - i v1)(x + i v2))` on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealLineArcMap {
    pub v1: f64,
    pub v2: f64,
    pub beta: f64,
    /// Half-width of the image arc, centred at `e^{iβ}`.
    pub half_width: f64,
}

impl RealLineArcMap {
    pub fn eval(&self, x: f64) -> Cx {
        let x = Cx::new(x, 0.0);
        let (v1, v2) = (Cx::new(0.0, self.v1), Cx::new(0.0, self.v2));
        Cx::from_polar(1.0, self.beta) * (x + v1) * (x - v2) / ((x - v1) * (x + v2))
    }

    /// `arg m(x) - β` as a continuous odd function vanishing at 0.
    pub fn phase_offset(&self, x: f64) -> f64 {
        if x == 0.0 {
            0.0
        } else {
            2.0 * (self.v1 / x).atan() - 2.0 * (self.v2 / x).atan()
        }
    }

    /// The points `±sqrt(v1 v2)` where the offset reaches `±half_width`.
    pub fn extremum(&self) -> f64 {
        (self.v1 * self.v2).sqrt()
    }

    /// The image arc `[β - L, β + L]`.
    pub fn image_arc(&self) -> Arc {
        Arc { start: self.beta - self.half_width, length: 2.0 * self.half_width }
    }
}

/// Requires `v1 > v2 > 0`; the half-width is `4 atan(sqrt(v1 / v2)) - π`.
pub fn real_line_to_arc(v1: f64, v2: f64, beta: f64) -> Result<RealLineArcMap> {
    if !(v1.is_finite() && v2.is_finite() && beta.is_finite()) {
        return Err(Error::invalid("arc map parameters must be finite"));
    }
    if !(v2 > 0.0 && v1 > v2) {
        return Err(Error::invalid(format!("need v1 > v2 > 0, got v1 = {v1}, v2 = {v2}")));
    }
    let half_width = 4.0 * (v1 / v2).sqrt().atan() - PI;
    Ok(RealLineArcMap { v1, v2, beta, half_width })
}
