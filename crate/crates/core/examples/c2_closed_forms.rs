//! Closed forms for the four-vector systems G(a, b, c) in C^2, compared against the engine.

use thetapr::prcore::{c2_oracle, c2_pr_oracle, c2_system};
use thetapr::phases::cr_orderings;
use thetapr::{decide_theta_pr, Cx, EngineOptions, PhaseSet};

fn main() -> thetapr::Result<()> {
    let t4 = PhaseSet::roots_of_unity(4)?;
    let cr = cr_orderings(&t4)?[0];
    let (a, b) = (Cx::new(0.3, -0.2), Cx::new(1.1, 0.5));
    let cases = [
        ("generic", Cx::new(-0.7, 1.9)),
        ("c = b", b),
        ("real ratio", a + (b - a) * 2.5),
        ("cross-ratio hit", a + (b - a) * cr.conj()),
    ];
    let opts = EngineOptions::default();
    for (name, c) in cases {
        let g = c2_system(a, b, c);
        print!("{name:>16}: full circle {}", c2_pr_oracle(a, b, c));
        for n in [2, 3, 4] {
            let t = PhaseSet::roots_of_unity(n)?;
            let closed = c2_oracle(a, b, c, &t)?;
            let engine = decide_theta_pr(&g, &t, &opts)?.does_pr;
            assert_eq!(closed, engine);
            print!(", |Θ|={n} {closed}");
        }
        println!();
    }
    Ok(())
}
