//! Brute-force reference for the separating QP.
//!
//! In the plane the optimum of `min ‖a‖² s.t. g_l·a ≥ 1` has one or two
//! active constraints. Enumerating every single constraint
//! (`a = g / ‖g‖²`) and every independent pair (the unique point with both
//! tight), keeping the feasible candidate of least norm, gives the optimum
//! without any iterative solver. Used by the `oracle-qp` command and the
//! test suites to cross-check [`super::qp::solve_min_norm`].

use rand::Rng;

use crate::geometry::{dist_point_convex, ConvexPolygon, Point2, Vec2};

use super::{obstacle_halfplane, separating_qp, Obstacle};

const FEAS_TOL: f64 = 1e-9;

/// Minimum-norm feasible `a` by active-set enumeration, or `None` when no
/// candidate is feasible.
pub fn brute_force_min_norm(g: &[Vec2]) -> Option<Vec2> {
    let feasible = |a: Vec2| g.iter().all(|gl| gl.dot(a) >= 1.0 - FEAS_TOL);
    let mut best: Option<Vec2> = None;
    let mut consider = |a: Vec2| {
        if a.is_finite() && feasible(a) && best.is_none_or(|b| a.norm_sq() < b.norm_sq()) {
            best = Some(a);
        }
    };
    for gl in g {
        let n2 = gl.norm_sq();
        if n2 > 0.0 {
            consider(*gl / n2);
        }
    }
    for (l, gl) in g.iter().enumerate() {
        for gm in &g[l + 1..] {
            let det = gl.cross(*gm);
            if det.abs() <= 1e-12 * gl.norm() * gm.norm() {
                continue;
            }
            // [gl; gm] a = [1; 1]
            let a = Vec2::new((gm.y - gl.y) / det, (gl.x - gm.x) / det);
            consider(a);
        }
    }
    best
}

/// Outcome of one fuzzed QP comparison.
#[derive(Clone, Debug)]
pub struct QpCheck {
    pub point: Point2,
    pub obstacle: Obstacle,
    /// `‖a_solver − a_oracle‖`.
    pub deviation: f64,
    /// Smallest `a·ψ_l − a·p` over vertices for the unit-normal plane; the
    /// point is strictly separated when this is positive.
    pub separation: f64,
}

/// Random convex polygon: a jittered regular polygon, radius in `[0.3, 2]`.
pub fn random_convex_polygon<R: Rng>(rng: &mut R, center: Point2) -> ConvexPolygon {
    let sides = rng.random_range(3..=10);
    let radius = rng.random_range(0.3..2.0);
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let step = std::f64::consts::TAU / sides as f64;
    let verts: Vec<Point2> = (0..sides)
        .map(|k| {
            let ang = phase + step * (k as f64 + rng.random_range(-0.3..0.3));
            center + Point2::new(ang.cos(), ang.sin()) * radius
        })
        .collect();
    // Points on a circle in angular order are always in convex position.
    ConvexPolygon::new(verts).expect("points on a circle are convex")
}

/// Draws `count` (point, polygon) pairs with the point strictly outside and
/// compares the active-set solver against enumeration.
pub fn fuzz_separating_qp<R: Rng>(rng: &mut R, count: usize) -> Vec<QpCheck> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let center = Point2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let hull = random_convex_polygon(rng, center);
        let point = Point2::new(rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0));
        if dist_point_convex(point, &hull) <= 1e-3 {
            continue;
        }
        let obstacle = Obstacle::new(hull).expect("random polygon is non-degenerate");
        let g: Vec<Vec2> = obstacle.hull().vertices().iter().map(|&v| v - point).collect();
        let (a, _) = separating_qp(point, &obstacle).expect("point is outside");
        let reference = brute_force_min_norm(&g).expect("point is outside");
        let plane = obstacle_halfplane(point, &obstacle, 0.0).expect("point is outside");
        let separation = obstacle
            .hull()
            .vertices()
            .iter()
            .map(|&v| plane.normal.dot(v - point))
            .fold(f64::INFINITY, f64::min);
        out.push(QpCheck {
            point,
            obstacle,
            deviation: (a - reference).norm(),
            separation,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_from_origin() {
        let g = [
            Vec2::new(2.0, -1.0),
            Vec2::new(4.0, -1.0),
            Vec2::new(4.0, 1.0),
            Vec2::new(2.0, 1.0),
        ];
        let a = brute_force_min_norm(&g).unwrap();
        assert!((a - Vec2::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn enclosed_origin_has_no_candidate() {
        let g = [Vec2::new(1.0, 0.0), Vec2::new(-1.0, 1.0), Vec2::new(-1.0, -1.0)];
        assert!(brute_force_min_norm(&g).is_none());
    }
}
