//! Separating half-planes between a robot and convex obstacles, checked
//! against brute-force enumeration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use voronoi_pursuit::cells::oracle::fuzz_separating_qp;
use voronoi_pursuit::cells::{obstacle_halfplane, separating_qp, Obstacle};
use voronoi_pursuit::geometry::{ConvexPolygon, Point2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let square = Obstacle::new(ConvexPolygon::rectangle(
        Point2::new(2.0, -1.0),
        Point2::new(4.0, 1.0),
    ))?;
    let p = Point2::new(0.0, 0.0);
    let (a, b) = separating_qp(p, &square)?;
    println!("raw normal ({:.3}, {:.3}), tight offset {b:.3}", a.x, a.y);
    let plane = obstacle_halfplane(p, &square, 0.15)?;
    println!(
        "buffered plane: ({:.3}, {:.3})·q <= {:.3}",
        plane.normal.x, plane.normal.y, plane.offset
    );

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let checks = fuzz_separating_qp(&mut rng, 500);
    let worst = checks.iter().map(|c| c.deviation).fold(0.0, f64::max);
    let tightest = checks.iter().map(|c| c.separation).fold(f64::INFINITY, f64::min);
    println!(
        "{} random instances: max deviation {worst:.2e}, min separation {tightest:.2e}",
        checks.len()
    );
    Ok(())
}
