//! Sampled band-limited functions: lattice witnesses for roots-of-unity phases, the
//! convolution identity behind sufficiency, and the arc counterexample on the line.
//!
//! A bump `φ` supported in `[-r, r]` is turned into `Φ(t) = Σ_l φ(s_l) e^{2πi s_l t} ds`
//! over the frequency grid `s_l = l / (2T)`. This is a finite exponential sum with every
//! frequency inside `[-r, r]`, so all functions built from it are band-limited exactly, and
//! the fast transform evaluates it on the time grid without approximation.

use std::f64::consts::PI;
use std::io::Write;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::{real_line_to_arc, RealLineArcMap};
use crate::numkernel::{is_finite, Cx, ONE, ZERO};
use crate::phases::wrap_angle;

/// Default number of grid points.
pub const DEFAULT_POINTS: usize = 1 << 14;

/// `points` samples `t_k = -T + k dt`, `dt = 2T / points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points: usize,
    pub half_width: f64,
}

impl GridSpec {
    pub fn new(points: usize, half_width: f64) -> Result<Self> {
        if points < 8 || !points.is_multiple_of(2) {
            return Err(Error::invalid("grid needs an even number of at least 8 points"));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::invalid("grid half-width must be positive"));
        }
        Ok(GridSpec { points, half_width })
    }

    /// `2^14` points over `[-4 n α, 4 n α]`.
    pub fn for_lattice(n: usize, alpha: f64) -> Result<Self> {
        GridSpec::new(DEFAULT_POINTS, 4.0 * n as f64 * alpha)
    }

    pub fn dt(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn t0(&self) -> f64 {
        -self.half_width
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.points).map(|k| self.t0() + k as f64 * self.dt()).collect()
    }
}

/// Samples of a complex function on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub t0: f64,
    pub dt: f64,
    pub samples: Vec<Cx>,
}

impl GridFunction {
    pub fn new(t0: f64, dt: f64, samples: Vec<Cx>) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0 && t0.is_finite()) {
            return Err(Error::invalid("grid step must be positive"));
        }
        if samples.is_empty() || samples.iter().any(|z| !is_finite(*z)) {
            return Err(Error::invalid("grid function needs finite samples"));
        }
        Ok(GridFunction { t0, dt, samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.t(self.len() - 1)
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        self.len() == other.len()
            && (self.t0 - other.t0).abs() <= 1e-12 * self.dt
            && (self.dt - other.dt).abs() <= 1e-12 * self.dt
    }

    fn zip_with(&self, other: &GridFunction, f: impl Fn(Cx, Cx) -> Cx) -> GridFunction {
        GridFunction {
            t0: self.t0,
            dt: self.dt,
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    /// Four-point Lagrange interpolation; exact at grid points. The stencil is shifted
    /// inward at the ends.
    pub fn value_at(&self, t: f64) -> Result<Cx> {
        let n = self.len();
        let u = (t - self.t0) / self.dt;
        let slack = 1e-9;
        if !u.is_finite() || u < -slack || u > (n - 1) as f64 + slack {
            return Err(Error::invalid(format!(
                "t = {t} lies outside the grid [{}, {}]",
                self.t0,
                self.t_end()
            )));
        }
        let nearest = u.round();
        if (u - nearest).abs() <= slack {
            return Ok(self.samples[(nearest as usize).min(n - 1)]);
        }
        if n < 4 {
            return Err(Error::invalid("cubic interpolation needs at least 4 samples"));
        }
        let base = (u.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let x = u - base as f64;
        let mut acc = ZERO;
        for i in 0..4 {
            let mut w = 1.0;
            for k in 0..4 {
                if k != i {
                    w *= (x - k as f64) / (i as f64 - k as f64);
                }
            }
            acc += self.samples[base + i] * w;
        }
        Ok(acc)
    }
}

/// `Λ = αZ`, with sublattices `Λ_j = α(nZ + j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub alpha: f64,
}

impl Lattice {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid("lattice spacing must be positive"));
        }
        Ok(Lattice { alpha })
    }

    pub fn density(&self) -> f64 {
        1.0 / self.alpha
    }

    /// The first `count` points `α(nk + j)` of `Λ_j`, `k = 0, -1, 1, -2, 2, ...`.
    pub fn sublattice_points(&self, n: usize, j: usize, count: usize) -> Vec<f64> {
        (0..count as i64)
            .map(|i| if i % 2 == 0 { i / 2 } else { -(i + 1) / 2 })
            .map(|k| self.alpha * (n as f64 * k as f64 + j as f64))
            .collect()
    }
}

/// `exp(-1 / (1 - (s/r)^2))` on `|s| < r`, zero elsewhere.
pub fn bump_profile(s: f64, r: f64) -> f64 {
    let u = s / r;
    if u.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - u * u)).exp()
    }
}

fn signed_frequency(l: usize, n: usize) -> f64 {
    if l < n / 2 {
        l as f64
    } else {
        l as f64 - n as f64
    }
}

/// `Φ` for the bump of radius `r`, sampled on the grid.
fn bump_transform(r: f64, grid: &GridSpec) -> GridFunction {
    let n = grid.points;
    let ds = 1.0 / (2.0 * grid.half_width);
    let mut buf: Vec<Cx> = (0..n)
        .map(|l| {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            Cx::new(sign * bump_profile(signed_frequency(l, n) * ds, r) * ds, 0.0)
        })
        .collect();
    FftPlanner::<f64>::new().plan_fft_inverse(n).process(&mut buf);
    GridFunction { t0: grid.t0(), dt: grid.dt(), samples: buf }
}

/// The transform of the bump with radius `1/2 - xi`.
pub fn build_bump(xi: f64, grid: &GridSpec) -> Result<GridFunction> {
    if !(xi > 0.0 && xi < 0.5) {
        return Err(Error::invalid(format!("xi = {xi} must lie in (0, 1/2)")));
    }
    Ok(bump_transform(0.5 - xi, grid))
}

/// Fraction of spectral energy of `phi` at frequencies beyond `r`.
pub fn spectral_leakage(phi: &GridFunction, r: f64) -> f64 {
    let n = phi.len();
    let ds = 1.0 / (n as f64 * phi.dt);
    let mut buf = phi.samples.clone();
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    let (mut outside, mut total) = (0.0, 0.0);
    for (l, z) in buf.iter().enumerate() {
        let e = z.norm_sqr();
        total += e;
        if signed_frequency(l, n).abs() * ds > r {
            outside += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        outside / total
    }
}

/// `x_0, ..., x_{n+1}` with `x_j = ζ^j sin(2πξt - jπ/n) Φ(t)`, `ξ = 1/(2nα)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessBundle {
    pub n: usize,
    pub xi: f64,
    pub omega: Cx,
    pub zeta: Cx,
    pub xs: Vec<GridFunction>,
    pub lattice: Lattice,
    pub phi: GridFunction,
    /// Set when `α <= n`: the construction is feasible but lies outside the regime the
    /// necessity argument is stated for.
    pub outside_stated_hypothesis: bool,
}

/// Builds the witnesses for `n`-th roots of unity on `αZ`. Needs `ξ = 1/(2nα) ∈ (0, 1/2)`.
pub fn build_lattice_witnesses(n: usize, alpha: f64, grid: &GridSpec) -> Result<WitnessBundle> {
    if n < 2 {
        return Err(Error::invalid("lattice witnesses need n >= 2"));
    }
    let lattice = Lattice::new(alpha)?;
    let xi = 1.0 / (2.0 * n as f64 * alpha);
    let phi = build_bump(xi, grid)?;
    let omega = Cx::from_polar(1.0, 2.0 * PI / n as f64);
    let zeta = Cx::from_polar(1.0, PI / n as f64);
    let xs = (0..n + 2)
        .map(|j| {
            let zj = zeta.powu(j as u32);
            let samples = phi
                .samples
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    let t = phi.t(k);
                    zj * (2.0 * PI * xi * t - j as f64 * PI / n as f64).sin() * p
                })
                .collect();
            GridFunction { t0: phi.t0, dt: phi.dt, samples }
        })
        .collect();
    Ok(WitnessBundle { n, xi, omega, zeta, xs, lattice, phi, outside_stated_hypothesis: alpha <= n as f64 })
}

/// `max_j sup |x_j - (1 + ω) x_{j-1} + ω x_{j-2}|` over `j >= 2`, divided by `max_j sup |x_j|`.
pub fn verify_recurrence(w: &WitnessBundle) -> f64 {
    let scale = w.xs.iter().map(GridFunction::sup_norm).fold(0.0, f64::max);
    if scale == 0.0 || w.xs.len() < 3 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for j in 2..w.xs.len() {
        for k in 0..w.xs[j].len() {
            let r = w.xs[j].samples[k] - (ONE + w.omega) * w.xs[j - 1].samples[k]
                + w.omega * w.xs[j - 2].samples[k];
            worst = worst.max(r.norm());
        }
    }
    worst / scale
}

/// `max |x_j(λ)| / sup |x_j|` over `j < n` and the first `count` points of `Λ_j`.
pub fn verify_vanishing(w: &WitnessBundle, count: usize) -> Result<f64> {
    verify_vanishing_on(w, &w.lattice, count)
}

/// As [`verify_vanishing`], against an arbitrary lattice.
pub fn verify_vanishing_on(w: &WitnessBundle, lattice: &Lattice, count: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for j in 0..w.n {
        let x = &w.xs[j];
        let sup = x.sup_norm();
        for lam in lattice.sublattice_points(w.n, j, count) {
            let v = x.value_at(lam)?;
            if sup > 0.0 {
                worst = worst.max(v.norm() / sup);
            }
        }
    }
    Ok(worst)
}

/// Normalized Gram determinant of two grid functions viewed as vectors.
pub fn gram_independence(a: &GridFunction, b: &GridFunction) -> f64 {
    let aa: f64 = a.samples.iter().map(|z| z.norm_sqr()).sum();
    let bb: f64 = b.samples.iter().map(|z| z.norm_sqr()).sum();
    if aa == 0.0 || bb == 0.0 {
        return 0.0;
    }
    let ab: Cx = a.samples.iter().zip(&b.samples).map(|(x, y)| x * y.conj()).sum();
    ((aa * bb - ab.norm_sqr()) / (aa * bb)).max(0.0)
}

/// Residuals gathered for one `(n, α)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub n: usize,
    pub alpha: f64,
    pub xi: f64,
    pub grid: GridSpec,
    pub omega: Cx,
    pub zeta: Cx,
    pub recurrence_residual: f64,
    pub vanishing_residual: f64,
    pub vanishing_points_per_class: usize,
    pub gram_det_x1_x2: f64,
    pub bump_leakage: f64,
    pub outside_stated_hypothesis: bool,
}

pub fn witness_report(n: usize, alpha: f64, grid: &GridSpec, count: usize) -> Result<WitnessReport> {
    let w = build_lattice_witnesses(n, alpha, grid)?;
    Ok(WitnessReport {
        n,
        alpha,
        xi: w.xi,
        grid: *grid,
        omega: w.omega,
        zeta: w.zeta,
        recurrence_residual: verify_recurrence(&w),
        vanishing_residual: verify_vanishing(&w, count)?,
        vanishing_points_per_class: count,
        gram_det_x1_x2: gram_independence(&w.xs[1], &w.xs[2]),
        bump_leakage: spectral_leakage(&w.phi, 0.5 - w.xi),
        outside_stated_hypothesis: w.outside_stated_hypothesis,
    })
}

/// Writes `t,re_x0,im_x0,...` followed by one row per grid point.
pub fn write_bundle_csv<W: Write>(w: &WitnessBundle, out: &mut W) -> std::io::Result<()> {
    let header: Vec<String> = std::iter::once("t".to_string())
        .chain((0..w.xs.len()).flat_map(|j| [format!("re_x{j}"), format!("im_x{j}")]))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for k in 0..w.phi.len() {
        write!(out, "{:e}", w.phi.t(k))?;
        for x in &w.xs {
            let z = x.samples[k];
            write!(out, ",{:e},{:e}", z.re, z.im)?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionReport {
    pub n: usize,
    pub support_start: f64,
    pub support_end: f64,
    /// Fraction of `Σ|p|^2` on grid points outside `[n a, n b]`.
    pub mass_outside: f64,
    /// `max |P - Π P_j| / max |P|` over the zero-padded transforms; 0 when `p ≡ 0`.
    pub transform_residual: f64,
    pub p_sup: f64,
    pub p: GridFunction,
}

fn convolve(a: &[Cx], b: &[Cx]) -> Vec<Cx> {
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            out[i + k] += x * y;
        }
    }
    out
}

fn padded_fft(x: &[Cx], len: usize, planner: &mut FftPlanner<f64>) -> Vec<Cx> {
    let mut buf = x.to_vec();
    buf.resize(len, ZERO);
    planner.plan_fft_forward(len).process(&mut buf);
    buf
}

/// Convolves `p_j = f - ω_j h`, `ω_j = e^{2πij/n}`, `j = 0..n-1`, and checks the result
/// against the product of the transforms of the factors.
pub fn convolution_support_demo(f: &GridFunction, h: &GridFunction, n: usize) -> Result<ConvolutionReport> {
    if n == 0 {
        return Err(Error::invalid("need at least one factor"));
    }
    if !f.same_grid(h) {
        return Err(Error::invalid("f and h must share a grid"));
    }
    let factors: Vec<Vec<Cx>> = (0..n)
        .map(|j| {
            let w = Cx::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
            f.zip_with(h, |a, b| a - w * b).samples
        })
        .collect();
    let mut p = factors[0].clone();
    for q in &factors[1..] {
        p = convolve(&p, q);
    }
    let out = GridFunction { t0: n as f64 * f.t0, dt: f.dt, samples: p };
    let (lo, hi) = (n as f64 * f.t0, n as f64 * f.t_end());
    let total: f64 = out.samples.iter().map(|z| z.norm_sqr()).sum();
    let outside: f64 = out
        .samples
        .iter()
        .enumerate()
        .filter(|(k, _)| out.t(*k) < lo - 1e-9 * f.dt || out.t(*k) > hi + 1e-9 * f.dt)
        .map(|(_, z)| z.norm_sqr())
        .sum();
    let len = out.len();
    let mut planner = FftPlanner::new();
    let big = padded_fft(&out.samples, len, &mut planner);
    let mut prod = vec![ONE; len];
    for q in &factors {
        for (acc, z) in prod.iter_mut().zip(padded_fft(q, len, &mut planner)) {
            *acc *= z;
        }
    }
    let scale = big.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let diff = big.iter().zip(&prod).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(ConvolutionReport {
        n,
        support_start: out.t0,
        support_end: out.t_end(),
        mass_outside: if total == 0.0 { 0.0 } else { outside / total },
        transform_residual: if scale == 0.0 { diff } else { diff / scale },
        p_sup: out.sup_norm(),
        p: out,
    })
}

/// `f = (t + iv1)(t - iv2) S` and `h = e^{-iβ}(t - iv1)(t + iv2) S` with `S` the transform
/// of a bump supported in `[-1/2, 1/2]`, so that `f = m h` for the map onto an arc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcCounterexample {
    pub f: GridFunction,
    pub h: GridFunction,
    pub map: RealLineArcMap,
    pub half_width: f64,
}

pub fn build_arc_counterexample(v1: f64, v2: f64, beta: f64, grid: &GridSpec) -> Result<ArcCounterexample> {
    let map = real_line_to_arc(v1, v2, beta)?;
    let s = bump_transform(0.5, grid);
    let (iv1, iv2) = (Cx::new(0.0, v1), Cx::new(0.0, v2));
    let rot = Cx::from_polar(1.0, -beta);
    let mut f = Vec::with_capacity(s.len());
    let mut h = Vec::with_capacity(s.len());
    for (k, sk) in s.samples.iter().enumerate() {
        let t = Cx::new(s.t(k), 0.0);
        f.push((t + iv1) * (t - iv2) * sk);
        h.push(rot * (t - iv1) * (t + iv2) * sk);
    }
    Ok(ArcCounterexample {
        f: GridFunction { t0: s.t0, dt: s.dt, samples: f },
        h: GridFunction { t0: s.t0, dt: s.dt, samples: h },
        map,
        half_width: map.half_width,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcCheck {
    /// `max_t |f - m h| / (|f| + |h| + ε)`.
    pub identity_residual: f64,
    /// Extreme values of `arg(f/h) - β` where `|h| > 1e-8 sup |h|`.
    pub offset_min: f64,
    pub offset_max: f64,
    pub half_width: f64,
}

impl ArcCheck {
    pub fn contained(&self, tol: f64) -> bool {
        self.offset_min >= -self.half_width - tol && self.offset_max <= self.half_width + tol
    }

    pub fn spread(&self) -> f64 {
        self.offset_max - self.offset_min
    }
}

pub fn check_arc_counterexample(c: &ArcCounterexample) -> ArcCheck {
    let hsup = c.h.sup_norm();
    let mut identity_residual: f64 = 0.0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..c.f.len() {
        let (f, h) = (c.f.samples[k], c.h.samples[k]);
        let m = c.map.eval(c.f.t(k));
        let r = (f - m * h).norm() / (f.norm() + h.norm() + f64::MIN_POSITIVE);
        identity_residual = identity_residual.max(r);
        if h.norm() > 1e-8 * hsup {
            let off = wrap_angle((f / h).arg() - c.map.beta);
            lo = lo.min(off);
            hi = hi.max(off);
        }
    }
    ArcCheck { identity_residual, offset_min: lo, offset_max: hi, half_width: c.half_width }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> GridSpec {
        GridSpec::new(1 << 12, 40.0).unwrap()
    }

    #[test]
    fn bump_is_real_and_even() {
        let g = small_grid();
        let phi = build_bump(0.25, &g).unwrap();
        let sup = phi.sup_norm();
        let mid = g.points / 2;
        assert!((phi.value_at(0.0).unwrap() - phi.samples[mid]).norm() == 0.0);
        for k in 1..mid {
            let (a, b) = (phi.samples[mid + k], phi.samples[mid - k]);
            assert!(a.im.abs() < 1e-12 * sup);
            assert!((a - b).norm() < 1e-12 * sup);
        }
        assert!(phi.samples[mid].norm() > 0.1 * sup);
        assert!(spectral_leakage(&phi, 0.25) < 1e-10);
        assert!(build_bump(0.5, &g).is_err());
        assert!(build_bump(0.0, &g).is_err());
    }

    #[test]
    fn cubic_interpolation_is_exact_on_cubics() {
        let samples = (0..10).map(|k| Cx::new((k as f64).powi(3) - 2.0 * k as f64, 1.0)).collect();
        let g = GridFunction::new(0.0, 1.0, samples).unwrap();
        for t in [0.3, 4.5, 8.7] {
            let expect = t * t * t - 2.0 * t;
            assert!((g.value_at(t).unwrap().re - expect).abs() < 1e-9);
        }
        assert!(g.value_at(9.5).is_err());
        assert!(g.value_at(-0.1).is_err());
    }

    #[test]
    fn phase_constants() {
        for n in 2..=12 {
            let w = build_lattice_witnesses(n, n as f64 + 1.0, &small_grid()).unwrap();
            assert!((w.zeta * w.zeta - w.omega).norm() < 1e-12);
            let lhs = w.zeta * 2.0 * (PI / n as f64).cos();
            assert!((lhs - (ONE + w.omega)).norm() < 1e-12);
        }
    }

    #[test]
    fn period_two_for_sign_phases() {
        let w = build_lattice_witnesses(2, 3.0, &small_grid()).unwrap();
        assert!((w.omega + ONE).norm() < 1e-12);
        for j in 0..2 {
            for k in 0..w.xs[j].len() {
                assert!((w.xs[j + 2].samples[k] - w.xs[j].samples[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn broken_bundle_is_detected() {
        let mut w = build_lattice_witnesses(3, 4.0, &small_grid()).unwrap();
        assert!(verify_recurrence(&w) < 1e-10);
        for z in w.xs[2].samples.iter_mut() {
            *z *= 2.0;
        }
        assert!(verify_recurrence(&w) > 0.1);
    }

    #[test]
    fn vanishing_edge_cases() {
        let w = build_lattice_witnesses(2, 3.0, &small_grid()).unwrap();
        assert_eq!(verify_vanishing(&w, 0).unwrap(), 0.0);
        assert!(verify_vanishing(&w, 40).is_err());
        assert!(build_lattice_witnesses(2, 0.25, &small_grid()).is_err());
        assert!(build_lattice_witnesses(3, 2.0, &small_grid()).unwrap().outside_stated_hypothesis);
    }

    #[test]
    fn convolution_examples() {
        let samples = |c: f64| (0..65).map(|k| Cx::new((c * k as f64).sin(), (k as f64 * 0.1).cos())).collect();
        let f = GridFunction::new(0.0, 1.0 / 64.0, samples(0.3)).unwrap();
        let h = GridFunction::new(0.0, 1.0 / 64.0, samples(0.7)).unwrap();
        let one = convolution_support_demo(&f, &h, 1).unwrap();
        assert!(one.transform_residual < 1e-12);
        assert!((one.p.samples[3] - (f.samples[3] - h.samples[3])).norm() == 0.0);
        let three = convolution_support_demo(&f, &h, 3).unwrap();
        assert!(three.transform_residual < 1e-8);
        assert!((three.support_end - 3.0).abs() < 1e-12);
        assert_eq!(three.mass_outside, 0.0);
        let same = convolution_support_demo(&f, &f, 2).unwrap();
        assert_eq!(same.p_sup, 0.0);
        let other = GridFunction::new(0.5, 1.0 / 64.0, samples(0.7)).unwrap();
        assert!(convolution_support_demo(&f, &other, 2).is_err());
    }

    #[test]
    fn arc_counterexample_properties() {
        let c = build_arc_counterexample(3.0, 1.0, 0.0, &GridSpec::new(1 << 12, 60.0).unwrap()).unwrap();
        let mid = c.f.len() / 2;
        assert!((c.f.samples[mid] / c.h.samples[mid] - ONE).norm() < 1e-12);
        let chk = check_arc_counterexample(&c);
        assert!(chk.identity_residual < 1e-10);
        assert!(chk.contained(1e-6));
        assert!(chk.spread() > chk.half_width / 2.0);
        assert!(build_arc_counterexample(1.0, 3.0, 0.0, &small_grid()).is_err());
    }
}
