mod support;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use voronoi_pursuit::cells::oracle::{brute_force_min_norm, fuzz_separating_qp, random_convex_polygon};
use voronoi_pursuit::cells::{obstacle_halfplane, separating_qp, BoundingRegion, Obstacle};
use voronoi_pursuit::geometry::{ConvexPolygon, Point2, Vec2};
use voronoi_pursuit::strategy::{
    encirclement_status, evader_velocity_command, greedy_baseline_command, pursuer_velocity_command,
    shrink_amount, shrink_region, ShrinkMode, ShrinkPolicy,
};

use support::{cell_margins, random_safe_config};

#[test]
fn equal_radius_cells_contain_their_owners_and_keep_clear() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let m = cell_margins(&random_safe_config(&mut rng, true));
        assert!(m.owner_outside <= 1e-9, "{m:?}");
        assert!(m.pair_slack >= -1e-6, "{m:?}");
        assert!(m.obstacle_slack >= -1e-6, "{m:?}");
    }
}

#[test]
fn unequal_radius_cells_keep_pair_and_obstacle_margins() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..300 {
        let m = cell_margins(&random_safe_config(&mut rng, false));
        assert!(m.pair_slack >= -1e-6, "{m:?}");
        assert!(m.obstacle_slack >= -1e-6, "{m:?}");
    }
}

#[test]
fn separating_qp_matches_enumeration_across_seeds() {
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in fuzz_separating_qp(&mut rng, 200) {
            assert!(c.deviation <= 1e-6, "deviation {} at {:?}", c.deviation, c.point);
            assert!(c.separation > 0.0);
        }
    }
}

#[test]
fn buffered_obstacle_plane_keeps_the_robot_and_clears_the_obstacle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut checked = 0;
    while checked < 500 {
        let obs = Obstacle::new(random_convex_polygon(&mut rng, Point2::new(0.0, 0.0))).unwrap();
        let p = Point2::new(rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0));
        let r = rng.random_range(0.05..0.5);
        if obs.distance_to(p) <= r + 1e-6 {
            continue;
        }
        let h = obstacle_halfplane(p, &obs, r).unwrap();
        assert!(h.contains(p));
        let unit = h.normalized();
        for &v in obs.hull().vertices() {
            assert!(-unit.slack(v) >= r - 1e-9, "vertex within the buffer");
        }
        let (a, _) = separating_qp(p, &obs).unwrap();
        let g: Vec<Vec2> = obs.hull().vertices().iter().map(|&v| v - p).collect();
        assert!((a - brute_force_min_norm(&g).unwrap()).norm() <= 1e-9);
        checked += 1;
    }
}

/// Point-in-hull by Carathéodory: inside the hull iff inside some triangle
/// of the points, tested with barycentric coordinates.
fn inside_some_triangle(points: &[Point2], p: Point2) -> bool {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (points[i], points[j], points[k]);
                let det = (b - a).cross(c - a);
                if det.abs() < 1e-12 {
                    continue;
                }
                let l1 = (b - p).cross(c - p) / det;
                let l2 = (c - p).cross(a - p) / det;
                let l3 = 1.0 - l1 - l2;
                if l1 >= 0.0 && l2 >= 0.0 && l3 >= 0.0 {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn encirclement_agrees_with_barycentric_containment() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut inside = 0;
    for _ in 0..1000 {
        let n = rng.random_range(3..=8);
        let pursuers: Vec<Point2> = (0..n)
            .map(|_| Point2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)))
            .collect();
        let evader = Point2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let s = encirclement_status(&pursuers, evader, 1.0);
        if s.d_e.abs() < 1e-9 {
            continue;
        }
        assert_eq!(
            s.encircled,
            inside_some_triangle(&pursuers, evader),
            "{pursuers:?} {evader:?}"
        );
        if s.encircled {
            inside += 1;
        }
    }
    assert!(inside > 100);
}

#[test]
fn few_pursuers_never_encircle() {
    let s = encirclement_status(
        &[Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0)],
        Point2::new(0.0, 0.0),
        0.5,
    );
    assert!(!s.encircled);
    assert!(s.d_e.is_infinite());
}

fn pt() -> impl Strategy<Value = Point2> {
    (-20.0..20.0f64, -20.0..20.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

proptest! {
    #[test]
    fn shrinking_is_monotone_and_floored(
        hx in 0.5..30.0f64,
        hy in 0.5..30.0f64,
        floor in 0.1..2.0f64,
        steps in prop::collection::vec(0.0..0.5f64, 1..200),
    ) {
        let policy = ShrinkPolicy::new(ShrinkMode::MinDisplacement, 1.0, floor).unwrap();
        let mut region = BoundingRegion { center: Point2::new(0.0, 0.0), half_x: hx.max(floor), half_y: hy.max(floor) };
        for d in steps {
            let amount = shrink_amount(&policy, &[d, d + 0.1], 0.1);
            let next = shrink_region(&region, amount, floor);
            prop_assert!(next.half_x <= region.half_x && next.half_y <= region.half_y);
            prop_assert!(next.half_x >= floor && next.half_y >= floor);
            region = next;
        }
    }

    #[test]
    fn commands_respect_the_speed_limit(p in pt(), target in pt(), v in 0.01..5.0f64) {
        prop_assert!(pursuer_velocity_command(p, target, v).norm() <= v + 1e-12);
        prop_assert!(greedy_baseline_command(p, target, v).norm() <= v + 1e-12);
    }

    #[test]
    fn evader_command_is_translation_invariant(
        e in pt(),
        pursuers in prop::collection::vec(pt(), 1..6),
        shift in pt(),
        v in 0.1..2.0f64,
        obstacle_at in pt(),
    ) {
        prop_assume!(pursuers.iter().all(|p| p.distance(e) > 1e-3));
        let obstacles = vec![Obstacle::new(ConvexPolygon::regular(obstacle_at, 0.5, 5, 0.2)).unwrap()];
        prop_assume!(obstacles[0].distance_to(e) > 1e-3);
        let base = evader_velocity_command(e, &pursuers, &obstacles, 50.0, v);
        let moved: Vec<Point2> = pursuers.iter().map(|&p| p + shift).collect();
        let moved_obstacles = vec![Obstacle::new(obstacles[0].hull().translated(shift)).unwrap()];
        let shifted = evader_velocity_command(e + shift, &moved, &moved_obstacles, 50.0, v);
        prop_assert!((base - shifted).norm() <= 1e-6, "{:?} vs {:?}", base, shifted);
        prop_assert!(base.norm() <= v + 1e-12);
    }
}
