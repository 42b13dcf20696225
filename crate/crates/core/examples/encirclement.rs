//! Encirclement and capture tests, and how the region shrinks once the
//! evader is enclosed.

use voronoi_pursuit::cells::bounding_region_with_floor;
use voronoi_pursuit::geometry::Point2;
use voronoi_pursuit::strategy::{encirclement_status, shrink_amount, shrink_region, ShrinkPolicy};

fn main() {
    let r_c = 1.0;
    let evader = Point2::new(0.0, 0.0);
    let open = [
        Point2::new(2.0, 1.0),
        Point2::new(3.0, -1.0),
        Point2::new(4.0, 0.5),
    ];
    let closed = [
        Point2::new(-3.0, -2.0),
        Point2::new(3.0, -2.0),
        Point2::new(0.0, 3.0),
    ];
    for (name, team) in [("open", &open), ("closed", &closed)] {
        let s = encirclement_status(team, evader, r_c);
        println!(
            "{name}: d_e {:+.3}, d_c {:.3}, encircled {}, captured {}",
            s.d_e, s.d_c, s.encircled, s.captured
        );
    }

    let policy = ShrinkPolicy::min_displacement(r_c);
    let mut region = bounding_region_with_floor(evader, &closed, r_c);
    for step in 0..6 {
        let d = shrink_amount(&policy, &[0.1, 0.08, 0.09], 0.1);
        region = shrink_region(&region, d, policy.floor);
        println!(
            "step {step}: half-widths {:.2} x {:.2}",
            region.half_x, region.half_y
        );
    }
}
