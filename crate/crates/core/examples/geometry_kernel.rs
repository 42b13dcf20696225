//! Convex polygon basics: clipping, moments, hulls and distances.

use voronoi_pursuit::geometry::{
    clip_halfplane, convex_hull, dist_point_convex, polygon_mass_centroid, polygon_second_moment,
    polytope_min_distance, signed_hull_distance, ConvexPolygon, HalfPlane, Point2, Vec2,
};

fn main() {
    let square = ConvexPolygon::rectangle(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0));
    let cut = HalfPlane::new(Vec2::new(1.0, 0.0), 0.5).expect("non-zero normal");
    let half = clip_halfplane(&square, &cut);
    println!("clipped square: {:?}", half.vertices());

    let (mass, centroid) = polygon_mass_centroid(&square).expect("square has area");
    println!("mass {mass}, centroid ({}, {})", centroid.x, centroid.y);
    for probe in [centroid, Point2::new(0.0, 0.0)] {
        let h = polygon_second_moment(&square, probe).expect("square has area");
        println!("second moment about ({}, {}): {h:.6}", probe.x, probe.y);
    }

    let points = [
        Point2::new(0.0, 0.0),
        Point2::new(2.0, 0.0),
        Point2::new(2.0, 2.0),
        Point2::new(0.0, 2.0),
        Point2::new(1.0, 1.0),
    ];
    let hull = convex_hull(&points);
    println!("hull keeps {} of {} points", hull.len(), points.len());
    for p in [Point2::new(1.0, 1.0), Point2::new(3.0, 1.0)] {
        let d = signed_hull_distance(&hull, p).expect("hull is a square");
        println!("signed distance of ({}, {}) to the hull: {d}", p.x, p.y);
    }

    let obstacle = ConvexPolygon::rectangle(Point2::new(2.0, -1.0), Point2::new(4.0, 1.0));
    println!(
        "origin to obstacle: {}",
        dist_point_convex(Point2::new(0.0, 0.0), &obstacle)
    );
    println!(
        "square to obstacle: {}",
        polytope_min_distance(&square, &obstacle)
    );
}
