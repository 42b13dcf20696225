//! Buffered, obstacle-aware cells of three pursuers around an evader.

use voronoi_pursuit::cells::{bounding_region, build_evader_cell, build_pursuer_cell, Obstacle};
use voronoi_pursuit::geometry::{polygon_mass_centroid, Point2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pursuers = [
        Point2::new(-3.0, -2.0),
        Point2::new(3.0, -2.0),
        Point2::new(0.0, 3.0),
    ];
    let evader = Point2::new(0.2, 0.1);
    let radii = [0.15; 3];
    let obstacles = [Obstacle::regular(Point2::new(-1.5, 1.0), 0.6, 6, 0.0)?];

    let region = bounding_region(evader, &pursuers)?;
    println!(
        "region centred at ({:.2}, {:.2}), half-widths {:.2} x {:.2}",
        region.center.x, region.center.y, region.half_x, region.half_y
    );
    for i in 0..pursuers.len() {
        let cell = build_pursuer_cell(i, &pursuers, evader, &radii, &obstacles, &region)?;
        let (area, c) = polygon_mass_centroid(&cell.polygon)?;
        println!(
            "pursuer {i}: {} constraints, area {area:.3} m², centroid ({:.3}, {:.3})",
            cell.constraints.len(),
            c.x,
            c.y
        );
    }
    let cell = build_evader_cell(&pursuers, evader, &obstacles, &region)?;
    println!("evader cell area {:.3} m²", cell.polygon.area());
    Ok(())
}
