//! Two band-limited functions whose ratio stays on a prescribed arc of the circle, so
//! that arc-valued phases alone cannot separate them.

use thetapr::expwitness::{build_arc_counterexample, check_arc_counterexample, GridSpec};

fn main() -> thetapr::Result<()> {
    let grid = GridSpec::new(1 << 14, 80.0)?;
    for (v1, v2) in [(1.5, 1.0), (4.0, 0.5), (50.0, 0.1)] {
        let c = build_arc_counterexample(v1, v2, 0.3, &grid)?;
        let chk = check_arc_counterexample(&c);
        println!(
            "v1 = {v1:>5}, v2 = {v2:>4}: arc half-width {:.4}, observed offsets [{:+.4}, {:+.4}], f - m h residual {:.1e}",
            chk.half_width, chk.offset_min, chk.offset_max, chk.identity_residual
        );
    }
    Ok(())
}
