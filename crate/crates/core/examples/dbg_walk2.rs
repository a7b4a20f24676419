use rollgait_core::fixtures::reference_design;
use rollgait_core::geometry::Side;
use rollgait_core::sim::{ContactSolver, Terrain};
use rollgait_core::vec2::{Rot, Vec2};

fn main() {
    let design = reference_design();
    let solver = ContactSolver::new(&design);
    let terrain = Terrain::flat(1.0);
    // Sweep the rear leg from closed to open at fixed front, tracking where
    // each leg's lowest point sits in the BODY frame (y of contact relative
    // to origin) at the stance-balanced theta.
    let (_lo, hi) = design.dphi_range();
    let closed = design.dphi_range().0;
    println!("rear_dphi  theta*   front_contact_y  rear_contact_y (body-frame-ish world, origin fixed)");
    for k in 0..12 {
        let dr = closed + (hi - closed) * k as f64 / 11.0;
        let df = -0.093f64; // mid
        // crude theta solve: scan
        let mut best = (f64::MAX, 0.0);
        for i in 0..1800 {
            let th = -0.9 + 1.8 * i as f64 / 1799.0;
            let (_, cf) = solver_leg(&solver, Side::Front, th, df, &terrain);
            let (_, cr) = solver_leg(&solver, Side::Rear, th, dr, &terrain);
            let d = (cf - cr).abs();
            if d < best.0 {
                best = (d, th);
            }
        }
        let th = best.1;
        let (pf, _) = solver_leg(&solver, Side::Front, th, df, &terrain);
        let (pr, _) = solver_leg(&solver, Side::Rear, th, dr, &terrain);
        println!("{dr:8.3} {th:8.3} {pf:15.4} {pr:15.4}");
    }

    fn solver_leg(solver: &ContactSolver, side: Side, th: f64, d: f64, terrain: &Terrain) -> (f64, f64) {
        let origin = Vec2::ZERO;
        let (p, c) = solver.leg_clearance(side, origin, th, d, terrain);
        (p.y, c)
    }
    let _ = Rot::new(0.0);
}
