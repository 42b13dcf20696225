use proptest::prelude::*;
use voronoi_pursuit::geometry::{
    clip_halfplane, convex_hull, dist_point_convex, polygon_mass_centroid, polygon_second_moment,
    polytope_min_distance, signed_hull_distance, ConvexPolygon, HalfPlane, Point2, Vec2,
};

fn point(range: f64) -> impl Strategy<Value = Point2> {
    (-range..range, -range..range).prop_map(|(x, y)| Point2::new(x, y))
}

/// Convex polygons from sorted angles on a circle.
fn polygon() -> impl Strategy<Value = ConvexPolygon> {
    (
        point(5.0),
        0.2..3.0f64,
        prop::collection::vec(0.0..std::f64::consts::TAU, 3..10),
    )
        .prop_filter_map("needs area", |(c, r, mut angles)| {
            angles.sort_by(f64::total_cmp);
            let pts = angles
                .iter()
                .map(|a| c + Point2::new(a.cos(), a.sin()) * r)
                .collect();
            ConvexPolygon::new(pts).ok().filter(|p| p.area() > 1e-3)
        })
}

fn half_plane() -> impl Strategy<Value = HalfPlane> {
    (0.0..std::f64::consts::TAU, -6.0..6.0f64)
        .prop_map(|(a, b)| HalfPlane::new(Vec2::new(a.cos(), a.sin()), b).expect("unit normal"))
}

/// Distance from `p` to the polygon boundary sampled densely along edges.
fn boundary_distance_by_sampling(poly: &ConvexPolygon, p: Point2, per_edge: usize) -> f64 {
    poly.edges()
        .flat_map(|(a, b)| (0..=per_edge).map(move |k| a + (b - a) * (k as f64 / per_edge as f64)))
        .map(|q| q.distance(p))
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn clipping_is_idempotent(poly in polygon(), h in half_plane()) {
        let once = clip_halfplane(&poly, &h);
        let twice = clip_halfplane(&once, &h);
        prop_assert_eq!(once.len(), twice.len());
        for (a, b) in once.vertices().iter().zip(twice.vertices()) {
            prop_assert!(a.distance(*b) <= 1e-9);
        }
    }

    #[test]
    fn clipping_never_grows_area(poly in polygon(), h in half_plane()) {
        prop_assert!(clip_halfplane(&poly, &h).area() <= poly.area() + 1e-12);
    }

    #[test]
    fn clipped_vertices_satisfy_the_plane(poly in polygon(), h in half_plane()) {
        for &v in clip_halfplane(&poly, &h).vertices() {
            prop_assert!(h.value(v) <= 1e-9);
        }
    }

    #[test]
    fn centroid_lies_strictly_inside(poly in polygon()) {
        let (mass, c) = polygon_mass_centroid(&poly).unwrap();
        prop_assert!((mass - poly.area()).abs() <= 1e-9);
        prop_assert!(poly.strictly_contains(c, 0.0));
    }

    #[test]
    fn centroid_minimises_second_moment(poly in polygon(), probes in prop::collection::vec(point(8.0), 100)) {
        let (_, c) = polygon_mass_centroid(&poly).unwrap();
        let at_centroid = polygon_second_moment(&poly, c).unwrap();
        for p in probes {
            prop_assert!(at_centroid <= polygon_second_moment(&poly, p).unwrap() + 1e-9);
        }
    }

    #[test]
    fn second_moment_parallel_axis(poly in polygon(), p in point(8.0)) {
        // H(p) = H(C) + M‖p − C‖²
        let (m, c) = polygon_mass_centroid(&poly).unwrap();
        let lhs = polygon_second_moment(&poly, p).unwrap();
        let rhs = polygon_second_moment(&poly, c).unwrap() + m * p.distance(c).powi(2);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.max(1.0));
    }

    #[test]
    fn hull_contains_every_input(points in prop::collection::vec(point(5.0), 3..20)) {
        let hull = convex_hull(&points);
        if !hull.is_degenerate() {
            for p in points {
                prop_assert!(signed_hull_distance(&hull, p).unwrap() <= 1e-9);
            }
        }
    }

    #[test]
    fn signed_distance_matches_exterior_distance(poly in polygon(), p in point(9.0)) {
        let d = signed_hull_distance(&poly, p).unwrap();
        let sampled = boundary_distance_by_sampling(&poly, p, 2000);
        prop_assert!((d.abs() - sampled).abs() <= 5e-3);
        if d > 0.0 {
            prop_assert!((d - dist_point_convex(p, &poly)).abs() <= 1e-9);
        } else {
            prop_assert_eq!(dist_point_convex(p, &poly), 0.0);
        }
    }

    #[test]
    fn polytope_distance_matches_dense_discretisation(a in polygon(), b in polygon()) {
        let exact = polytope_min_distance(&a, &b);
        let overlap = a.vertices().iter().any(|&v| b.contains(v)) || b.vertices().iter().any(|&v| a.contains(v));
        let sampled = a
            .edges()
            .flat_map(|(p, q)| (0..=400).map(move |k| p + (q - p) * (k as f64 / 400.0)))
            .map(|s| dist_point_convex(s, &b))
            .fold(f64::INFINITY, f64::min);
        if overlap {
            prop_assert_eq!(exact, 0.0);
        } else if sampled > 0.0 {
            // The edge samples bracket the true minimum from above.
            prop_assert!(exact <= sampled + 1e-6);
            prop_assert!(sampled - exact <= 0.02);
        }
    }
}

#[test]
fn polytope_distance_against_dense_discretisation_tightly() {
    let a = ConvexPolygon::regular(Point2::new(0.0, 0.0), 1.0, 7, 0.3);
    let b = ConvexPolygon::regular(Point2::new(3.1, 0.7), 0.8, 5, 1.1);
    let n = 20_000;
    let sampled = a
        .edges()
        .flat_map(|(p, q)| (0..=n).map(move |k| p + (q - p) * (k as f64 / n as f64)))
        .map(|s| dist_point_convex(s, &b))
        .fold(f64::INFINITY, f64::min);
    assert!((polytope_min_distance(&a, &b) - sampled).abs() <= 1e-6);
}
