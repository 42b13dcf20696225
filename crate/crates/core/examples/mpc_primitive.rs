//! Constant-jerk motion primitives: pick the cheapest one that stays in a
//! cell and respects velocity, acceleration and jerk limits.

use voronoi_pursuit::dynamics::{
    select_primitive_mpc, step_triple_integrator, DynamicLimits, FullState, MpcWeights,
};
use voronoi_pursuit::geometry::{ConvexPolygon, Point2, Vec2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cell = ConvexPolygon::rectangle(Point2::new(-1.0, -1.0), Point2::new(2.0, 1.0));
    let limits = DynamicLimits::new(1.0, 3.0, 10.0)?;
    let weights = MpcWeights::default();
    let goal = Point2::new(1.5, 0.5);

    let mut x = FullState {
        p: Point2::new(0.0, 0.0),
        v: Vec2::new(0.0, -0.5),
        a: Vec2::ZERO,
    };
    for tick in 0..20 {
        let sol = select_primitive_mpc(&x, &cell, goal, &limits, &weights, 1.0, 10)?;
        x = step_triple_integrator(&sol.primitive, 0.1, &limits);
        if tick % 4 == 0 {
            println!(
                "t={:.1}: p ({:.3}, {:.3}) |v| {:.3} jerk ({:.2}, {:.2}) cost {:.4}",
                (tick + 1) as f64 * 0.1,
                x.p.x,
                x.p.y,
                x.v.norm(),
                sol.primitive.jerk.x,
                sol.primitive.jerk.y,
                sol.cost
            );
        }
    }
    Ok(())
}
