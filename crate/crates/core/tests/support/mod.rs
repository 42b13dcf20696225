//! Shared fixtures and independent checkers for the integration tests.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use voronoi_pursuit::cells::oracle::random_convex_polygon;
use voronoi_pursuit::cells::{bounding_region, build_pursuer_cell, Obstacle};
use voronoi_pursuit::dynamics::{
    candidate_jerks, generate_primitive, primitive_cost, select_primitive_mpc, DynamicLimits, FullState,
    MotionPrimitive, MpcWeights,
};
use voronoi_pursuit::engine::Scenario;
use voronoi_pursuit::geometry::{
    dist_point_convex, polygon_mass_centroid, polytope_min_distance, ConvexPolygon, Point2, Vec2,
};
use voronoi_pursuit::io::parse_scenario;

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples/scenarios")
        .join(name)
}

pub fn load_scenario(name: &str) -> Scenario {
    let path = scenario_path(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_scenario(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// A random configuration where every pursuer is clear of every other
/// pursuer by `r_i + r_j` and of every obstacle by `r_i`.
#[derive(Clone, Debug)]
pub struct SafeConfig {
    pub pursuers: Vec<Point2>,
    pub radii: Vec<f64>,
    pub evader: Point2,
    pub obstacles: Vec<Obstacle>,
}

pub fn random_safe_config<R: Rng>(rng: &mut R, equal_radii: bool) -> SafeConfig {
    'retry: loop {
        let obstacles: Vec<Obstacle> = (0..rng.random_range(0..=4))
            .map(|_| {
                let c = Point2::new(rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0));
                Obstacle::new(random_convex_polygon(rng, c)).expect("random polygon has area")
            })
            .collect();
        let n = rng.random_range(2..=7);
        let common = rng.random_range(0.05..0.5);
        let mut pursuers = Vec::new();
        let mut radii = Vec::new();
        let mut attempts = 0;
        while pursuers.len() < n {
            attempts += 1;
            if attempts > 1000 {
                continue 'retry;
            }
            let p = Point2::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
            let r = if equal_radii {
                common
            } else {
                rng.random_range(0.05..0.5)
            };
            let clear_of_obstacles = obstacles.iter().all(|o| o.distance_to(p) > r + 1e-3);
            let clear_of_pursuers = pursuers
                .iter()
                .zip(&radii)
                .all(|(q, rq): (&Point2, &f64)| p.distance(*q) > r + rq + 1e-3);
            if clear_of_obstacles && clear_of_pursuers {
                pursuers.push(p);
                radii.push(r);
            }
        }
        let evader = loop {
            let e = Point2::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
            if pursuers.iter().all(|p| p.distance(e) > 1e-3)
                && obstacles.iter().all(|o| o.distance_to(e) > 1e-3)
            {
                break e;
            }
        };
        return SafeConfig {
            pursuers,
            radii,
            evader,
            obstacles,
        };
    }
}

/// Worst violations of the cell guarantees for one configuration.
#[derive(Clone, Copy, Debug, Default)]
pub struct CellMargins {
    /// Largest distance from a feasible cell's owner to that cell.
    pub owner_outside: f64,
    /// Smallest `gap(cell_i, cell_j) − (r_i + r_j)`.
    pub pair_slack: f64,
    /// Smallest `gap(cell_i, obstacle) − r_i`.
    pub obstacle_slack: f64,
}

pub fn cell_margins(cfg: &SafeConfig) -> CellMargins {
    let region = bounding_region(cfg.evader, &cfg.pursuers).expect("distinct positions");
    let cells: Vec<ConvexPolygon> = (0..cfg.pursuers.len())
        .map(|i| {
            build_pursuer_cell(i, &cfg.pursuers, cfg.evader, &cfg.radii, &cfg.obstacles, &region)
                .expect("safe configuration")
                .polygon
        })
        .collect();
    let mut m = CellMargins {
        owner_outside: 0.0,
        pair_slack: f64::INFINITY,
        obstacle_slack: f64::INFINITY,
    };
    for (i, cell) in cells.iter().enumerate() {
        if cell.is_empty() {
            continue;
        }
        m.owner_outside = m.owner_outside.max(dist_point_convex(cfg.pursuers[i], cell));
        for (j, other) in cells.iter().enumerate().skip(i + 1) {
            if !other.is_empty() {
                let gap = polytope_min_distance(cell, other);
                m.pair_slack = m.pair_slack.min(gap - cfg.radii[i] - cfg.radii[j]);
            }
        }
        for o in &cfg.obstacles {
            m.obstacle_slack = m
                .obstacle_slack
                .min(polytope_min_distance(cell, o.hull()) - cfg.radii[i]);
        }
    }
    m
}

/// Random convex cell and a state inside it with bounded velocity and
/// acceleration.
pub struct MpcInstance {
    pub cell: ConvexPolygon,
    pub state: FullState,
    pub goal: Point2,
    pub limits: DynamicLimits,
}

pub fn random_mpc_instance<R: Rng>(rng: &mut R) -> MpcInstance {
    let limits = DynamicLimits::new(
        rng.random_range(0.3..2.0),
        rng.random_range(1.0..5.0),
        rng.random_range(2.0..20.0),
    )
    .expect("positive limits");
    let cell = random_convex_polygon(rng, Point2::new(0.0, 0.0));
    let (_, centroid) = polygon_mass_centroid(&cell).expect("random polygon has area");
    let p = loop {
        let t = rng.random_range(0.0..0.9);
        let v = cell.vertices()[rng.random_range(0..cell.len())];
        let p = centroid + (v - centroid) * t;
        if cell.contains(p) {
            break p;
        }
    };
    let dir = |rng: &mut R| {
        let ang: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        Vec2::new(ang.cos(), ang.sin())
    };
    let v = dir(rng) * rng.random_range(0.0..limits.v_max);
    let a = dir(rng) * rng.random_range(0.0..0.5 * limits.a_max);
    let goal = if rng.random_bool(0.5) {
        centroid
    } else {
        cell.vertices()[0] + (centroid - cell.vertices()[0]) * 0.2
    };
    MpcInstance {
        cell,
        state: FullState { p, v, a },
        goal,
        limits,
    }
}

/// Classical RK4 on `ṗ = v, v̇ = a, ȧ = j` with constant `j`.
pub fn rk4(x0: FullState, jerk: Vec2, t: f64, steps: usize) -> FullState {
    let f = |x: &FullState| FullState {
        p: x.v,
        v: x.a,
        a: jerk,
    };
    let add = |x: &FullState, k: &FullState, h: f64| FullState {
        p: x.p + k.p * h,
        v: x.v + k.v * h,
        a: x.a + k.a * h,
    };
    let h = t / steps as f64;
    let mut x = x0;
    for _ in 0..steps {
        let k1 = f(&x);
        let k2 = f(&add(&x, &k1, h / 2.0));
        let k3 = f(&add(&x, &k2, h / 2.0));
        let k4 = f(&add(&x, &k3, h));
        x = FullState {
            p: x.p + (k1.p + k2.p * 2.0 + k3.p * 2.0 + k4.p) * (h / 6.0),
            v: x.v + (k1.v + k2.v * 2.0 + k3.v * 2.0 + k4.v) * (h / 6.0),
            a: x.a + (k1.a + k2.a * 2.0 + k3.a * 2.0 + k4.a) * (h / 6.0),
        };
    }
    x
}

/// Outcome of checking one MPC solve against exhaustive re-evaluation.
#[derive(Clone, Copy, Debug, Default)]
pub struct MpcCheck {
    pub feasible: bool,
    /// Returned cost minus the best admissible cost found independently.
    pub optimality_gap: f64,
    /// Largest signed distance of a sample outside the cell.
    pub containment: f64,
    /// Largest excess of a sample over the speed/acceleration/jerk limits.
    pub limit_excess: f64,
    /// Largest deviation from RK4 integration at the samples.
    pub rk4_error: f64,
}

const TOL: f64 = 1e-9;

fn sample_outside(cell: &ConvexPolygon, p: Point2) -> f64 {
    cell.half_planes()
        .iter()
        .map(|h| -h.slack(p))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn limit_excess(prim: &MotionPrimitive, limits: &DynamicLimits) -> f64 {
    prim.samples
        .iter()
        .map(|s| (s.v.norm() - limits.v_max).max(s.a.norm() - limits.a_max))
        .fold(prim.jerk.norm() - limits.j_max, f64::max)
}

fn dense_outside(inst: &MpcInstance, jerk: Vec2, horizon: f64) -> f64 {
    (0..=400)
        .map(|k| inst.state.advance(jerk, horizon * k as f64 / 400.0).p)
        .map(|p| sample_outside(&inst.cell, p))
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn check_mpc(inst: &MpcInstance, horizon: f64, substeps: usize) -> MpcCheck {
    let weights = MpcWeights::default();
    let sol = select_primitive_mpc(
        &inst.state,
        &inst.cell,
        inst.goal,
        &inst.limits,
        &weights,
        horizon,
        substeps,
    )
    .expect("start inside the cell");
    let mut best = f64::INFINITY;
    for jerk in candidate_jerks(&inst.state, inst.goal, &inst.limits, horizon, substeps) {
        let prim =
            generate_primitive(inst.state, jerk, horizon, substeps, inst.limits.j_max).expect("valid jerk");
        // Clearly admissible by dense sampling: inside with room to spare.
        if dense_outside(inst, jerk, horizon) <= -1e-7 && limit_excess(&prim, &inst.limits) <= TOL {
            best = best.min(primitive_cost(&prim, inst.goal, &weights));
        }
    }
    let prim = &sol.primitive;
    let rk4_error = if sol.feasible {
        prim.samples
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let t = horizon * k as f64 / substeps as f64;
                let r = rk4(inst.state, prim.jerk, t, 8);
                (s.p - r.p).norm().max((s.v - r.v).norm()).max((s.a - r.a).norm())
            })
            .fold(0.0, f64::max)
    } else {
        0.0
    };
    MpcCheck {
        feasible: sol.feasible,
        optimality_gap: if sol.feasible {
            sol.cost - best
        } else if best.is_finite() {
            f64::INFINITY
        } else {
            0.0
        },
        containment: prim.samples.iter().map(|s| sample_outside(&inst.cell, s.p)).fold(
            if sol.feasible {
                dense_outside(inst, prim.jerk, horizon)
            } else {
                f64::NEG_INFINITY
            },
            f64::max,
        ),
        limit_excess: if sol.feasible {
            limit_excess(prim, &inst.limits)
        } else {
            0.0
        },
        rk4_error,
    }
}
