use proptest::prelude::*;
use rand::Rng;

use thetapr::experiments::{
    complex_gaussian, draw_system, gaussian_matrix, random_u11_map_with, run_threshold_study, trial_rng, Regime,
    SystemFamily,
};
use thetapr::expwitness::{build_lattice_witnesses, verify_vanishing_on, GridSpec, Lattice};
use thetapr::numkernel::{determinant, null_space_basis, rank};
use thetapr::prcore::{
    c2_oracle, c2_system, decide_theta_pr, fails_2pr_oracle, fails_3pr_cover, has_complement_property,
    witness_independence,
};
use thetapr::{CMatrix, Cx, EngineOptions, PhaseSet, Tolerance, VectorSystem};

fn roots(n: usize) -> PhaseSet {
    PhaseSet::roots_of_unity(n).unwrap()
}

/// Random matrix of prescribed rank `r` as a product of `rows x r` and `r x cols` factors.
fn low_rank(seed: u64, rows: usize, cols: usize, r: usize) -> CMatrix {
    let mut rng = trial_rng(seed, 7);
    let a = gaussian_matrix(&mut rng, rows, r.max(1));
    let b = gaussian_matrix(&mut rng, r.max(1), cols);
    let p = a.matmul(&b).unwrap();
    if r == 0 {
        CMatrix::zeros(rows, cols)
    } else {
        p
    }
}

#[test]
fn rank_nullity_on_random_matrices() {
    let tol = Tolerance::default();
    for k in 0..500u64 {
        let mut rng = trial_rng(11, k);
        let rows = rng.random_range(1..=8);
        let cols = rng.random_range(1..=12);
        let r = rng.random_range(0..=rows.min(cols));
        let m = low_rank(k, rows, cols, r);
        let got = rank(&m, &tol).unwrap();
        assert_eq!(got, r, "matrix {k}: {rows}x{cols}");
        assert_eq!(rank(&m.transpose(), &tol).unwrap(), got);
        assert_eq!(rank(&m.conj(), &tol).unwrap(), got);
        let basis = null_space_basis(&m, &tol).unwrap();
        assert_eq!(basis.len() + got, cols);
        for v in &basis {
            let mv = m.mul_vec(v).unwrap();
            assert!(mv.norm() < 1e-9 * m.max_abs().max(1.0));
        }
    }
}

#[test]
fn determinant_is_multiplicative() {
    for k in 0..100u64 {
        let mut rng = trial_rng(12, k);
        let a = gaussian_matrix(&mut rng, 6, 6);
        let b = gaussian_matrix(&mut rng, 6, 6);
        let lhs = determinant(&a.matmul(&b).unwrap()).unwrap();
        let rhs = determinant(&a).unwrap() * determinant(&b).unwrap();
        assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0));
    }
}

fn structured(seed: u64, trial: u64, d: usize, m: usize) -> VectorSystem {
    draw_system(&mut trial_rng(seed, trial), SystemFamily::Structured, d, m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engine_matches_complement_oracle(seed in any::<u64>(), d in 1usize..=3, m in 1usize..=6) {
        let g = structured(seed, 0, d, m);
        let tol = Tolerance::default();
        let fails = fails_2pr_oracle(&g, &tol).unwrap();
        prop_assert_eq!(has_complement_property(&g, &tol).unwrap(), !fails);
        let rep = decide_theta_pr(&g, &roots(2), &EngineOptions::default()).unwrap();
        prop_assert_eq!(rep.does_pr, !fails);
    }

    #[test]
    fn engine_matches_cover_oracle(seed in any::<u64>(), d in 2usize..=3, m in 2usize..=6) {
        let g = structured(seed, 1, d, m);
        let t = PhaseSet::from_angles(&[0.3, 2.0, 4.4]).unwrap();
        let opts = EngineOptions::default();
        let cover = fails_3pr_cover(&g, &t, &opts).unwrap();
        prop_assert_eq!(decide_theta_pr(&g, &t, &opts).unwrap().does_pr, cover.is_none());
    }

    #[test]
    fn engine_matches_c2_closed_form(seed in any::<u64>(), n in 2usize..=4, kind in 0usize..4) {
        let mut rng = trial_rng(seed, 2);
        let a = complex_gaussian(&mut rng);
        let b = complex_gaussian(&mut rng);
        let c = match kind {
            0 => complex_gaussian(&mut rng),
            1 => b,
            2 => a + (b - a) * rng.random_range(-2.0..2.0),
            _ => a,
        };
        let t = roots(n);
        let rep = decide_theta_pr(&c2_system(a, b, c), &t, &EngineOptions::default()).unwrap();
        prop_assert_eq!(rep.does_pr, c2_oracle(a, b, c, &t).unwrap());
    }

    #[test]
    fn adding_vectors_preserves_pr(seed in any::<u64>(), d in 1usize..=3, n in 2usize..=3) {
        let mut rng = trial_rng(seed, 3);
        let t = roots(n);
        let opts = EngineOptions::default();
        let mut g = draw_system(&mut rng, SystemFamily::Structured, d, d).unwrap();
        let mut was = decide_theta_pr(&g, &t, &opts).unwrap().does_pr;
        for _ in 0..d + 2 {
            g = g.with_column(thetapr::experiments::gaussian_vector(&mut rng, d)).unwrap();
            let now = decide_theta_pr(&g, &t, &opts).unwrap().does_pr;
            prop_assert!(now || !was, "a superset lost the property");
            was = now;
        }
    }

    #[test]
    fn invariant_under_invertible_maps_and_rescaling(seed in any::<u64>(), d in 1usize..=3, extra in 0usize..=2) {
        let mut rng = trial_rng(seed, 4);
        let m = 2 * d - 1 + extra;
        let g = draw_system(&mut rng, SystemFamily::Structured, d, m).unwrap();
        let t = roots(3);
        let opts = EngineOptions::default();
        let base = decide_theta_pr(&g, &t, &opts).unwrap().does_pr;
        let tm = loop {
            let tm = gaussian_matrix(&mut rng, d, d);
            if determinant(&tm).unwrap().norm() > 0.1 {
                break tm;
            }
        };
        prop_assert_eq!(decide_theta_pr(&g.transform(&tm).unwrap(), &t, &opts).unwrap().does_pr, base);
        let scales: Vec<Cx> = (0..m).map(|_| {
            let z = complex_gaussian(&mut rng);
            z / z.norm() * rng.random_range(0.3..3.0)
        }).collect();
        prop_assert_eq!(decide_theta_pr(&g.rescale_columns(&scales).unwrap(), &t, &opts).unwrap().does_pr, base);
    }

    #[test]
    fn witnesses_verify_and_are_independent(seed in any::<u64>(), d in 2usize..=3, n in 2usize..=4) {
        let m = if n == 2 { 2 * d - 2 } else { 2 * d - 1 };
        let g = draw_system(&mut trial_rng(seed, 5), SystemFamily::Gaussian, d, m).unwrap();
        let t = roots(n);
        let rep = decide_theta_pr(&g, &t, &EngineOptions::default()).unwrap();
        let w = rep.witness.expect("below the minimal size a witness exists");
        prop_assert!(thetapr::verify_witness(&g, &t, &w, 1e-8));
        prop_assert!(witness_independence(&w) > 1e-12);
    }
}

#[test]
fn moebius_images_preserve_decisions() {
    let opts = EngineOptions::default();
    let t = roots(3);
    for k in 0..50u64 {
        let mut rng = trial_rng(13, k);
        let family = if k % 2 == 0 { SystemFamily::Gaussian } else { SystemFamily::Structured };
        let g = draw_system(&mut rng, family, 2, 4).unwrap();
        let map = random_u11_map_with(&mut rng);
        let t2 = map.map_phase_set(&t).unwrap();
        let a = decide_theta_pr(&g, &t, &opts).unwrap().does_pr;
        let b = decide_theta_pr(&g, &t2, &opts).unwrap().does_pr;
        assert_eq!(a, b, "trial {k}");
    }
}

#[test]
fn below_threshold_sizes_fail() {
    for d in [2usize, 3] {
        for (regime, n) in [(Regime::TwoDMinusTwo, 2usize), (Regime::TwoDMinusOne, 3)] {
            let r = run_threshold_study(d, regime, &roots(n), 30, 14, &EngineOptions::default()).unwrap();
            assert_eq!(r.does_pr_count, 0);
        }
    }
}

#[test]
fn runs_are_deterministic_across_thread_counts() {
    let t = roots(3);
    let seq = EngineOptions::default();
    let par = EngineOptions { threads: 4, ..seq };
    let a = run_threshold_study(3, Regime::TwoDMinusOne, &t, 10, 15, &seq).unwrap();
    let b = run_threshold_study(3, Regime::TwoDMinusOne, &t, 10, 15, &seq).unwrap();
    let c = run_threshold_study(3, Regime::TwoDMinusOne, &t, 10, 15, &par).unwrap();
    let json = |r: &thetapr::experiments::ExperimentReport| serde_json::to_string(r).unwrap();
    assert_eq!(json(&a), json(&b));
    assert_eq!(a.example_witnesses, c.example_witnesses);
    assert_eq!((a.does_pr_count, a.assignments_checked), (c.does_pr_count, c.assignments_checked));
}

#[test]
fn detuned_lattice_breaks_vanishing() {
    for n in [2usize, 3, 4] {
        for alpha in [n as f64 + 0.5, n as f64 + 1.0, 2.0 * n as f64] {
            let grid = GridSpec::for_lattice(n, alpha).unwrap();
            let w = build_lattice_witnesses(n, alpha, &grid).unwrap();
            let tuned = verify_vanishing_on(&w, &w.lattice, 7).unwrap();
            let off = verify_vanishing_on(&w, &Lattice::new(alpha * 1.01).unwrap(), 7).unwrap();
            assert!(tuned < 1e-8, "n={n} α={alpha}: tuned {tuned:e}");
            assert!(off > 1e-5, "n={n} α={alpha}: detuned {off:e}");
        }
    }
}
