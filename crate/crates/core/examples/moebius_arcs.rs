//! Circle-preserving Möbius maps: arc-to-arc maps, cross-ratio invariance, and the
//! image of a phase set.

use std::f64::consts::PI;

use thetapr::experiments::random_u11_map;
use thetapr::moebius::{arc_to_arc, real_line_to_arc};
use thetapr::phases::{cr_equivalent, cross_ratio};
use thetapr::{Arc, PhaseSet};

fn main() -> thetapr::Result<()> {
    let from = Arc::new(0.0, PI / 2.0)?;
    let to = Arc::new(PI, PI / 6.0)?;
    let m = arc_to_arc(&from, &to)?;
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let w = m.apply(from.point(s)).finite().expect("finite image");
        println!("arc point {s:.2} -> angle {:8.4} deg", w.arg().to_degrees());
    }

    let t = PhaseSet::from_angles(&[0.1, 1.2, 2.9, 4.4])?;
    let u = random_u11_map(7);
    let t2 = u.map_phase_set(&t)?;
    let [z1, z2, z3, z4] = [t.get(0), t.get(1), t.get(2), t.get(3)];
    let [w1, w2, w3, w4] = [t2.get(0), t2.get(1), t2.get(2), t2.get(3)];
    println!("CR before {:.12}", cross_ratio(z1, z2, z3, z4)?);
    println!("CR after  {:.12}", cross_ratio(w1, w2, w3, w4)?);
    println!("cross-ratio equivalent: {}", cr_equivalent(&t, &t2)?);

    let r = real_line_to_arc(9.0, 1.0, 0.0)?;
    println!(
        "real line onto arc of half-width {:.6} rad, reached at x = ±{:.3}",
        r.half_width,
        r.extremum()
    );
    Ok(())
}
