use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oracles::is_complete;
use super::system::{Assignment, VectorSystem};
use crate::error::{Error, Result};
use crate::numkernel::{null_space_basis, rank, singular_values, CMatrix, CVector, Cx, Tolerance};
use crate::phases::PhaseSet;

const PARALLEL_CHUNK: u64 = 1024;

/// Engine knobs. `budget` caps the number of assignments scanned; `threads = 1` is the
/// sequential mode and `0` uses every available core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineOptions {
    pub tol: Tolerance,
    pub pair_tol: f64,
    pub witness_tol: f64,
    pub budget: u64,
    pub threads: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            tol: Tolerance::default(),
            pair_tol: 1e-9,
            witness_tol: 1e-8,
            budget: 10_000_000,
            threads: 1,
        }
    }
}

/// A pair `(f, h)` with `<f, g_j> = θ_j <h, g_j>` for all `j` and `f ≠ θ h` for every `θ ∈ Θ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub f: CVector,
    pub h: CVector,
    pub assignment: Assignment,
    /// `max_j |<f, g_j> - θ_j <h, g_j>|`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub does_pr: bool,
    pub witness: Option<Witness>,
    pub assignments_checked: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    /// Wall-clock seconds; excluded from JSON so reports are reproducible.
    #[serde(skip)]
    pub elapsed: f64,
}

/// The `m x 2d` matrix with rows `(g_j^T, -conj(θ_j) g_j^T)`.
///
/// Row `j` applied to `(conj f, conj h)` equals `conj(<f, g_j> - θ_j <h, g_j>)`.
pub fn build_constraint_matrix(g: &VectorSystem, t: &PhaseSet, a: &Assignment) -> Result<CMatrix> {
    a.validate(t, g.m())?;
    let thetas = a.values(t);
    Ok(constraint_matrix(g, &thetas))
}

pub(crate) fn constraint_matrix(g: &VectorSystem, thetas: &[Cx]) -> CMatrix {
    let d = g.d();
    let f = g.matrix();
    CMatrix::from_fn(g.m(), 2 * d, |j, k| {
        if k < d {
            f.get(k, j)
        } else {
            -thetas[j].conj() * f.get(k - d, j)
        }
    })
}

/// The sum of squared 2x2 minors of `[a b]`, i.e. `|a|^2 |b|^2 - |<a,b>|^2`.
fn minor_energy(a: &[Cx], b: &[Cx]) -> f64 {
    let aa: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let bb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    let ab: Cx = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
    (aa * bb - ab.norm_sqr()).max(0.0)
}

fn max_minor(a: &[Cx], b: &[Cx]) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..a.len() {
        for k in i + 1..a.len() {
            best = best.max((a[i] * b[k] - a[k] * b[i]).norm());
        }
    }
    best
}

/// Finds `v = (conj f, conj h)` in the span of an orthonormal `basis` of `C^{2d}` with
/// `f`, `h` independent, using the same default threshold as the engine.
pub fn subspace_contains_independent_pair(basis: &[CVector]) -> Option<CVector> {
    independent_pair(basis, EngineOptions::default().pair_tol)
}

/// Each 2x2 minor of `[f h]` is a quadratic form in the span coordinates. A quadratic form
/// vanishes on the span iff it vanishes at every `u_s` and every `u_s + u_t`, so those
/// points decide the question. The evaluation point with the largest normalized minor is
/// returned.
pub fn independent_pair(basis: &[CVector], pair_tol: f64) -> Option<CVector> {
    let first = basis.first()?;
    if first.dim() % 2 != 0 {
        return None;
    }
    let d = first.dim() / 2;
    let mut best: Option<(f64, CVector)> = None;
    let mut consider = |v: CVector| {
        let nv = norm_sq(&v);
        if nv == 0.0 {
            return;
        }
        let (top, bottom) = v.entries().split_at(d);
        let score = max_minor(top, bottom) / nv;
        if score > pair_tol && best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, v));
        }
    };
    for (s, us) in basis.iter().enumerate() {
        consider(us.clone());
        for ut in &basis[s + 1..] {
            consider(us.add(ut));
        }
    }
    best.map(|(_, v)| {
        let n = v.norm();
        v.scale(Cx::new(1.0 / n, 0.0))
    })
}

fn norm_sq(v: &CVector) -> f64 {
    v.entries().iter().map(|z| z.norm_sqr()).sum()
}

fn residual(g: &VectorSystem, thetas: &[Cx], f: &CVector, h: &CVector) -> f64 {
    (0..g.m())
        .map(|j| {
            let gj = g.column(j);
            (f.inner(&gj) - thetas[j] * h.inner(&gj)).norm()
        })
        .fold(0.0, f64::max)
}

/// Checks one assignment and returns a witness if its constraint null space holds an
/// independent pair. Requires `d >= 2`.
pub fn witness_for_assignment(
    g: &VectorSystem,
    t: &PhaseSet,
    a: &Assignment,
    opts: &EngineOptions,
) -> Result<Option<Witness>> {
    a.validate(t, g.m())?;
    if g.d() < 2 {
        return Err(Error::invalid("per-assignment witnesses need d >= 2"));
    }
    Ok(Search::new(g, t, opts, false).check(a.clone()))
}

struct Search<'a> {
    g: &'a VectorSystem,
    t: &'a PhaseSet,
    opts: &'a EngineOptions,
    skip_constant: bool,
}

impl<'a> Search<'a> {
    fn new(g: &'a VectorSystem, t: &'a PhaseSet, opts: &'a EngineOptions, skip_constant: bool) -> Self {
        Search { g, t, opts, skip_constant }
    }

    fn check_index(&self, k: u64) -> Option<Witness> {
        self.check(Assignment::from_index(k, self.t.len(), self.g.m()))
    }

    fn check(&self, a: Assignment) -> Option<Witness> {
        if self.skip_constant && a.is_constant() {
            return None;
        }
        let d = self.g.d();
        let thetas = a.values(self.t);
        let m = constraint_matrix(self.g, &thetas);
        if m.rows() >= m.cols() {
            let sv = singular_values(&m).ok()?;
            let smax = sv[0];
            let thr = self.opts.tol.rank_rel * smax * m.rows().max(m.cols()) as f64;
            if smax > 0.0 && sv[m.cols() - 1] > thr {
                return None;
            }
        }
        let basis = null_space_basis(&m, &self.opts.tol).ok()?;
        let v = independent_pair(&basis, self.opts.pair_tol)?;
        let (top, bottom) = v.entries().split_at(d);
        let f = CVector::new(top.to_vec()).conj();
        let h = CVector::new(bottom.to_vec()).conj();
        let residual = residual(self.g, &thetas, &f, &h);
        Some(Witness { f, h, assignment: a, residual })
    }

    fn scan(&self, limit: u64) -> Option<(u64, Witness)> {
        let threads = self.opts.threads;
        if threads == 1 || limit <= PARALLEL_CHUNK {
            return (0..limit).find_map(|k| self.check_index(k).map(|w| (k, w)));
        }
        let chunks = limit.div_ceil(PARALLEL_CHUNK);
        let run = || {
            (0..chunks).into_par_iter().find_map_first(|c| {
                let lo = c * PARALLEL_CHUNK;
                let hi = (lo + PARALLEL_CHUNK).min(limit);
                (lo..hi).find_map(|k| self.check_index(k).map(|w| (k, w)))
            })
        };
        if threads == 0 {
            return run();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    }
}

fn total_assignments(n: usize, m: usize) -> Option<u64> {
    (n as u64).checked_pow(u32::try_from(m).ok()?)
}

/// Decides whether `g` does Θ-PR by scanning `Θ^m` in lexicographic order.
///
/// When `|Θ|^m` exceeds the budget, the first `budget` assignments are scanned; a witness
/// found there is still conclusive, otherwise a `ResourceLimit` error is returned.
pub fn decide_theta_pr(g: &VectorSystem, t: &PhaseSet, opts: &EngineOptions) -> Result<DecisionReport> {
    let start = Instant::now();
    let warnings: Vec<String> = g
        .zero_columns()
        .into_iter()
        .map(|j| format!("vector {j} is zero and imposes no constraint"))
        .collect();
    let finish = |does_pr: bool, witness: Option<Witness>, checked: u64, warnings: Vec<String>| {
        DecisionReport {
            does_pr,
            witness,
            assignments_checked: checked,
            warnings,
            elapsed: start.elapsed().as_secs_f64(),
        }
    };

    if g.d() == 1 {
        // In C^1, <f,g> = θ<h,g> with g ≠ 0 forces f = θh; with every g = 0 the pair (2, 1) fails.
        if rank(g.matrix(), &opts.tol)? > 0 {
            return Ok(finish(true, None, 0, warnings));
        }
        let w = Witness {
            f: CVector::new(vec![Cx::new(2.0, 0.0)]),
            h: CVector::new(vec![Cx::new(1.0, 0.0)]),
            assignment: Assignment::new(vec![0; g.m()]),
            residual: 0.0,
        };
        return Ok(finish(false, Some(w), 1, warnings));
    }

    let total = total_assignments(t.len(), g.m());
    let limit = match total {
        Some(n) if n <= opts.budget => n,
        _ => opts.budget,
    };
    let search = Search::new(g, t, opts, is_complete(g, &opts.tol)?);
    match search.scan(limit) {
        Some((k, w)) => Ok(finish(false, Some(w), k + 1, warnings)),
        None if Some(limit) == total => Ok(finish(true, None, limit, warnings)),
        None => Err(Error::ResourceLimit {
            message: format!(
                "|Θ|^m = {}^{} exceeds the assignment budget {}",
                t.len(),
                g.m(),
                opts.budget
            ),
            checked: limit,
        }),
    }
}

/// Re-checks a witness against the definition: the relative residual is at most `tol` and
/// `min_θ ‖f - θ h‖ / max(‖f‖, ‖h‖) > 10 tol`.
pub fn verify_witness(g: &VectorSystem, t: &PhaseSet, w: &Witness, tol: f64) -> bool {
    if w.assignment.validate(t, g.m()).is_err() || w.f.dim() != g.d() || w.h.dim() != g.d() {
        return false;
    }
    if !w.f.is_finite() || !w.h.is_finite() {
        return false;
    }
    let scale = w.f.norm().max(w.h.norm());
    if scale == 0.0 {
        return false;
    }
    let thetas = w.assignment.values(t);
    let gmax = g.max_column_norm().max(f64::MIN_POSITIVE);
    if residual(g, &thetas, &w.f, &w.h) > tol * scale * gmax {
        return false;
    }
    let separation = t
        .values()
        .iter()
        .map(|&th| w.f.sub(&w.h.scale(th)).norm())
        .fold(f64::INFINITY, f64::min);
    separation / scale > 10.0 * tol
}

/// Normalized Gram determinant of the witness pair, 0 for dependent vectors.
pub fn witness_independence(w: &Witness) -> f64 {
    let a: Vec<Cx> = w.f.entries().to_vec();
    let b: Vec<Cx> = w.h.entries().to_vec();
    let (na, nb) = (norm_sq(&w.f), norm_sq(&w.h));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    minor_energy(&a, &b) / (na * nb)
}
