use crate::cells::{
    bounding_region_with_floor, build_pursuer_cell_with, obstacle_halfplane, pursuer_constraints,
    BoundingRegion, Constraint, ConstraintSource, Obstacle, VoronoiCell,
};
use crate::dynamics::{
    select_primitive_mpc, step_triple_integrator, DynamicLimits, FullState, MotionPrimitive,
};
use crate::geometry::{
    clip_halfplane, closest_point_convex, polygon_mass_centroid, ConvexPolygon, HalfPlane, Point2, Vec2,
};
use crate::strategy::{
    encirclement_status, evader_escape_cell, greedy_baseline_command, pursuer_velocity_command,
    shrink_amount, shrink_region, CAPTURE_PHASE_HYSTERESIS, VELOCITY_DEAD_BAND,
};

use super::metrics::{tick_distances, TickDistances};
use super::scenario::{Arena, Boundary, DynamicsMode, EvaderPolicy, PursuerPolicy, Scenario, ScenarioError};

/// Motion is stopped this far short of every safety half-plane (m), so the
/// clearances stay strict.
pub const MOTION_MARGIN: f64 = 1e-9;

/// Half-width of the box that bounds an agent's admissible polygon in
/// triple-integrator mode when no cell boundary is nearer (m).
const FREE_SPACE_HALF_WIDTH: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Encircling,
    Capturing,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Encircling => "encircling",
            Phase::Capturing => "capturing",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Captured,
    Timeout,
    /// The evader crossed an exit boundary.
    Escaped,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Captured => "captured",
            Outcome::Timeout => "timeout",
            Outcome::Escaped => "escaped",
        }
    }
}

/// State of the world at one tick plus what the planners saw.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub pursuers: Vec<FullState>,
    pub evader: FullState,
    /// `None` when the policy does not use a bounding region.
    pub region: Option<BoundingRegion>,
    /// Planning cell per pursuer; empty when infeasible or unused.
    pub cells: Vec<ConvexPolygon>,
    /// Whether each pursuer's buffered cell was non-empty.
    pub cell_feasible: Vec<bool>,
    pub phase: Phase,
    pub d_e: f64,
    pub d_c: f64,
    pub distances: TickDistances,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub scenario: Scenario,
    pub trace: Vec<Snapshot>,
    pub outcome: Outcome,
    /// First time the evader was inside the pursuers' hull.
    pub t_e: Option<f64>,
    pub t_c: Option<f64>,
    /// Minimum pursuer-obstacle distance over the run; `+∞` if undefined.
    pub d_mo: f64,
    /// Minimum pursuer-pursuer distance over the run; `+∞` if undefined.
    pub d_mp: f64,
    /// Ticks with a clearance at or below the safety radii.
    pub safety_violations: usize,
    /// Ticks in which some pursuer's buffered cell was empty.
    pub infeasible_ticks: usize,
    /// Triple-integrator plans that fell back to the emergency stop.
    pub emergency_stops: usize,
}

impl SimResult {
    pub fn captured(&self) -> bool {
        self.outcome == Outcome::Captured
    }

    /// Evader-at-or-after-encirclement ordering check.
    pub fn encircled_before_capture(&self) -> bool {
        matches!((self.t_e, self.t_c), (Some(e), Some(c)) if e < c)
    }
}

/// Largest fraction of `step` that keeps `p` inside every half-plane with
/// [`MOTION_MARGIN`] to spare. Zero if `p` already violates one the step
/// moves further into.
pub fn admissible_fraction(p: Point2, step: Vec2, planes: &[HalfPlane]) -> f64 {
    let mut t: f64 = 1.0;
    for h in planes {
        let norm = h.normal.norm();
        let toward = h.normal.dot(step) / norm;
        if toward <= 0.0 {
            continue;
        }
        let room = h.slack(p) - MOTION_MARGIN;
        t = t.min((room / toward).max(0.0));
    }
    t
}

fn arena_planes(arena: &Arena) -> [HalfPlane; 4] {
    [
        HalfPlane {
            normal: Vec2::new(1.0, 0.0),
            offset: arena.max.x,
        },
        HalfPlane {
            normal: Vec2::new(0.0, 1.0),
            offset: arena.max.y,
        },
        HalfPlane {
            normal: Vec2::new(-1.0, 0.0),
            offset: -arena.min.x,
        },
        HalfPlane {
            normal: Vec2::new(0.0, -1.0),
            offset: -arena.min.y,
        },
    ]
}

fn clip_all(mut poly: ConvexPolygon, planes: &[HalfPlane]) -> ConvexPolygon {
    for h in planes {
        if poly.is_empty() {
            break;
        }
        poly = clip_halfplane(&poly, h);
    }
    poly
}

fn centroid(poly: &ConvexPolygon) -> Option<Point2> {
    polygon_mass_centroid(poly).ok().map(|(_, c)| c)
}

/// One agent's plan for the coming step.
struct Plan {
    target: Option<Point2>,
    /// Half-planes the agent's position must keep satisfying.
    safe: Vec<HalfPlane>,
    cell: ConvexPolygon,
    feasible: bool,
}

struct World<'a> {
    sc: &'a Scenario,
    pursuers: Vec<Point2>,
    evader: Point2,
}

impl World<'_> {
    fn pursuer_plan(&self, i: usize, region: Option<&BoundingRegion>) -> Plan {
        let sc = self.sc;
        let greedy = sc.pursuer_policy == PursuerPolicy::Greedy;
        let safe: Vec<HalfPlane> = match pursuer_constraints(
            i,
            &self.pursuers,
            self.evader,
            &sc.pursuer_radii,
            &sc.obstacles,
            true,
        ) {
            Ok(cs) => cs
                .iter()
                .filter(|c| !(greedy && c.source == ConstraintSource::Evader))
                .map(|c| c.plane)
                .collect(),
            // Only reachable if a clearance was already lost; stand still.
            Err(_) => {
                return Plan {
                    target: None,
                    safe: Vec::new(),
                    cell: ConvexPolygon::empty(),
                    feasible: false,
                }
            }
        };
        if greedy {
            return Plan {
                target: Some(self.evader),
                safe,
                cell: ConvexPolygon::empty(),
                feasible: true,
            };
        }
        let region = region.expect("cell policies always have a region");
        let cell = build_pursuer_cell_with(
            i,
            &self.pursuers,
            self.evader,
            &sc.pursuer_radii,
            &sc.obstacles,
            region,
            true,
        )
        .unwrap_or_else(|_| VoronoiCell::from_constraints(ConvexPolygon::empty(), Vec::new()));
        if cell.feasible {
            return Plan {
                target: centroid(&cell.polygon),
                safe,
                cell: cell.polygon,
                feasible: true,
            };
        }
        // Buffered cell is empty: aim for the unbuffered cell, still moving
        // only inside the buffered safe set.
        let target = build_pursuer_cell_with(
            i,
            &self.pursuers,
            self.evader,
            &sc.pursuer_radii,
            &sc.obstacles,
            region,
            false,
        )
        .ok()
        .filter(|c| c.feasible)
        .and_then(|c| centroid(&c.polygon));
        Plan {
            target,
            safe,
            cell: ConvexPolygon::empty(),
            feasible: false,
        }
    }

    fn evader_plan(&self) -> Plan {
        let sc = self.sc;
        let arena = sc
            .arena
            .as_ref()
            .filter(|a| a.boundary == Boundary::Wall)
            .map(arena_planes);
        let mut safe: Vec<HalfPlane> = sc
            .obstacles
            .iter()
            .filter_map(|o| {
                obstacle_halfplane(self.evader, o, sc.evader_radius)
                    .or_else(|_| obstacle_halfplane(self.evader, o, 0.0))
                    .ok()
            })
            .collect();
        if let Some(planes) = &arena {
            safe.extend_from_slice(planes);
        }
        let target = match sc.evader_policy {
            EvaderPolicy::VoronoiEscape => {
                let seen: &[Obstacle] = if sc.evader_obstacle_aware {
                    &sc.obstacles
                } else {
                    &[]
                };
                evader_escape_cell(self.evader, &self.pursuers, seen, sc.evader_work_radius)
                    .map(|c| match &arena {
                        Some(planes) => clip_all(c.polygon, planes),
                        None => c.polygon,
                    })
                    .and_then(|poly| centroid(&poly))
            }
            EvaderPolicy::Scripted { velocity } => {
                let v = velocity.clamp_norm(sc.evader_limits.v_max);
                Some(self.evader + v * sc.mpc.horizon.max(sc.dt))
            }
        };
        Plan {
            target,
            safe,
            cell: ConvexPolygon::empty(),
            feasible: true,
        }
    }
}

/// Displacement actually taken for a requested `step`: the step itself when
/// its end is admissible, otherwise the projection of the end point onto
/// the admissible set (sliding along the binding constraints), which is
/// never longer than the request. Falls back to truncating the step when
/// the projection is unavailable.
pub fn safe_displacement(p: Point2, step: Vec2, planes: &[HalfPlane]) -> Vec2 {
    let inner: Vec<HalfPlane> = planes
        .iter()
        .map(|h| h.normalized().retracted(MOTION_MARGIN))
        .collect();
    let q = p + step;
    if inner.iter().all(|h| h.value(q) <= 0.0) {
        return step;
    }
    let len = step.norm();
    if len > 0.0 && inner.iter().all(|h| h.value(p) <= 1e-12) {
        let space = clip_all(ConvexPolygon::square(p, 2.0 * len), &inner);
        if let Some(x) = closest_point_convex(q, &space) {
            let d = x - p;
            if d.norm() <= len && inner.iter().all(|h| h.value(x) <= 1e-12) {
                return d;
            }
        }
    }
    step * admissible_fraction(p, step, planes)
}

fn velocity_step(p: Point2, v: Vec2, dt: f64, safe: &[HalfPlane]) -> FullState {
    let d = safe_displacement(p, v * dt, safe);
    FullState {
        p: p + d,
        v: d / dt,
        a: Vec2::ZERO,
    }
}

/// Triple-integrator step. Returns the new state and whether the planner
/// had to stop.
fn triple_step(
    x: &FullState,
    target: Option<Point2>,
    safe: &[HalfPlane],
    limits: &DynamicLimits,
    sc: &Scenario,
) -> (FullState, bool) {
    let shrunk: Vec<HalfPlane> = safe
        .iter()
        .map(|h| h.normalized().retracted(MOTION_MARGIN))
        .collect();
    let space = clip_all(ConvexPolygon::square(x.p, FREE_SPACE_HALF_WIDTH), &shrunk);
    let goal = target.unwrap_or(x.p);
    match select_primitive_mpc(
        x,
        &space,
        goal,
        limits,
        &sc.mpc.weights,
        sc.mpc.horizon,
        sc.mpc.substeps,
    ) {
        Ok(sol) if sol.feasible => (step_triple_integrator(&sol.primitive, sc.dt, limits), false),
        _ => {
            let hold = MotionPrimitive::hold(x.p, sc.mpc.horizon, sc.mpc.substeps);
            (hold.start, true)
        }
    }
}

/// Runs the synchronous pursuit loop until capture or `max_time`.
///
/// Each tick: build the region around the evader, build every cell from
/// the same snapshot, move all agents at once, then update the phase and
/// shrink the region when the evader is enclosed.
pub fn run_simulation(scenario: &Scenario) -> Result<SimResult, ScenarioError> {
    scenario.validate()?;
    let sc = scenario;
    let n = sc.pursuer_count();
    let mut pursuers: Vec<FullState> = sc.pursuer_starts.iter().map(|&p| FullState::at_rest(p)).collect();
    let mut evader = FullState::at_rest(sc.evader_start);
    let uses_region = sc.pursuer_policy == PursuerPolicy::OaEcbvc;

    let mut phase = Phase::Encircling;
    let mut latched: Option<BoundingRegion> = None;
    let mut last_displacements: Vec<f64> = Vec::new();
    let mut trace = Vec::new();
    let mut t_e = None;
    let mut t_c = None;
    let mut safety_violations = 0;
    let mut infeasible_ticks = 0;
    let mut emergency_stops = 0;
    let max_ticks = (sc.max_time / sc.dt - 1e-9).ceil().max(0.0) as usize;

    let mut k = 0usize;
    let outcome = loop {
        let time = k as f64 * sc.dt;
        let positions: Vec<Point2> = pursuers.iter().map(|s| s.p).collect();
        let status = encirclement_status(&positions, evader.p, sc.capture_radius);

        match phase {
            Phase::Encircling if status.encircled => {
                phase = Phase::Capturing;
                t_e.get_or_insert(time);
                latched = Some(bounding_region_with_floor(evader.p, &positions, sc.shrink.floor));
            }
            Phase::Capturing if status.d_e > CAPTURE_PHASE_HYSTERESIS => {
                phase = Phase::Encircling;
                latched = None;
            }
            Phase::Capturing => {
                let d = shrink_amount(&sc.shrink, &last_displacements, sc.dt);
                latched = latched.map(|r| shrink_region(&r, d, sc.shrink.floor));
            }
            Phase::Encircling => {}
        }
        let region = uses_region.then(|| match (phase, latched) {
            (Phase::Capturing, Some(r)) => r.recentered(evader.p),
            _ => bounding_region_with_floor(evader.p, &positions, sc.shrink.floor),
        });

        let world = World {
            sc,
            pursuers: positions.clone(),
            evader: evader.p,
        };
        let plans: Vec<Plan> = (0..n).map(|i| world.pursuer_plan(i, region.as_ref())).collect();
        let distances = tick_distances(&positions, &sc.obstacles);
        if distances.violates(&sc.pursuer_radii) {
            safety_violations += 1;
        }
        if plans.iter().any(|p| !p.feasible) {
            infeasible_ticks += 1;
        }
        trace.push(Snapshot {
            time,
            pursuers: pursuers.clone(),
            evader,
            region,
            cell_feasible: plans.iter().map(|p| p.feasible).collect(),
            cells: plans.iter().map(|p| p.cell.clone()).collect(),
            phase,
            d_e: status.d_e,
            d_c: status.d_c,
            distances,
        });

        if status.captured {
            t_c = Some(time);
            break Outcome::Captured;
        }
        if sc
            .arena
            .is_some_and(|a| a.boundary == Boundary::Exit && !a.contains(evader.p))
        {
            break Outcome::Escaped;
        }
        if k >= max_ticks {
            break Outcome::Timeout;
        }

        let evader_plan = world.evader_plan();
        let (next_pursuers, next_evader) = match sc.dynamics {
            DynamicsMode::Single => {
                let ps = pursuers
                    .iter()
                    .zip(&plans)
                    .map(|(s, plan)| {
                        let v_max = sc.pursuer_limits.v_max;
                        match sc.pursuer_policy {
                            PursuerPolicy::OaEcbvc => {
                                let v = plan
                                    .target
                                    .map_or(Vec2::ZERO, |c| pursuer_velocity_command(s.p, c, v_max));
                                velocity_step(s.p, v, sc.dt, &plan.safe)
                            }
                            PursuerPolicy::Greedy => {
                                let v = greedy_baseline_command(s.p, evader.p, v_max);
                                velocity_step(s.p, v, sc.dt, &plan.safe)
                            }
                        }
                    })
                    .collect::<Vec<_>>();
                let v_e = sc.evader_limits.v_max;
                let v = match sc.evader_policy {
                    EvaderPolicy::Scripted { velocity } => velocity.clamp_norm(v_e),
                    EvaderPolicy::VoronoiEscape => evader_plan
                        .target
                        .map_or(Vec2::ZERO, |c| pursuer_velocity_command(evader.p, c, v_e)),
                };
                let e = velocity_step(evader.p, v, sc.dt, &evader_plan.safe);
                (ps, e)
            }
            DynamicsMode::Triple => {
                let mut ps = Vec::with_capacity(n);
                for (s, plan) in pursuers.iter().zip(&plans) {
                    let (next, stopped) = triple_step(s, plan.target, &plan.safe, &sc.pursuer_limits, sc);
                    emergency_stops += stopped as usize;
                    ps.push(next);
                }
                let (e, stopped) = triple_step(
                    &evader,
                    evader_plan.target,
                    &evader_plan.safe,
                    &sc.evader_limits,
                    sc,
                );
                emergency_stops += stopped as usize;
                (ps, e)
            }
        };
        // Pursuers holding on an empty cell are not tracking the region and
        // do not limit how fast it shrinks.
        last_displacements = pursuers
            .iter()
            .zip(&next_pursuers)
            .zip(&plans)
            .filter(|(_, plan)| plan.feasible)
            .map(|((a, b), _)| {
                let d = a.p.distance(b.p);
                if d <= VELOCITY_DEAD_BAND * sc.dt {
                    0.0
                } else {
                    d
                }
            })
            .collect();
        pursuers = next_pursuers;
        evader = next_evader;
        k += 1;
    };

    let (d_mo, d_mp) = super::metrics::compute_safety_metrics(&trace);
    Ok(SimResult {
        scenario: scenario.clone(),
        trace,
        outcome,
        t_e,
        t_c,
        d_mo,
        d_mp,
        safety_violations,
        infeasible_ticks,
        emergency_stops,
    })
}

/// Constraints seen by pursuer `i` for the given positions, useful for
/// inspecting a single tick.
pub fn pursuer_safe_set(
    scenario: &Scenario,
    i: usize,
    pursuers: &[Point2],
    evader: Point2,
) -> Result<Vec<Constraint>, crate::cells::CellError> {
    pursuer_constraints(
        i,
        pursuers,
        evader,
        &scenario.pursuer_radii,
        &scenario.obstacles,
        true,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;

    fn pt(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn straight_line_capture_bound() {
        let mut s = Scenario::with_defaults(vec![pt(0.0, 0.0)], pt(5.0, 0.0));
        s.evader_policy = EvaderPolicy::Scripted { velocity: Vec2::ZERO };
        let r = run_simulation(&s).unwrap();
        assert_eq!(r.outcome, Outcome::Captured);
        let bound = (5.0 - 1.0) / 1.0 + 2.0 * 0.1;
        assert!(r.t_c.unwrap() <= bound, "t_c = {:?}", r.t_c);
        assert_eq!(r.d_mo, f64::INFINITY);
        assert_eq!(r.d_mp, f64::INFINITY);
    }

    #[test]
    fn no_pursuers_times_out() {
        let mut s = Scenario::with_defaults(vec![], pt(0.0, 0.0));
        s.max_time = 1.0;
        let r = run_simulation(&s).unwrap();
        assert_eq!(r.outcome, Outcome::Timeout);
        assert_eq!(r.t_c, None);
        assert_eq!(r.d_mp, f64::INFINITY);
        assert_eq!(r.trace.len(), 11);
        assert!((r.trace.last().unwrap().time - 1.0).abs() < 1e-12);
    }

    #[test]
    fn admissible_fraction_stops_at_plane() {
        let h = HalfPlane {
            normal: Vec2::new(2.0, 0.0),
            offset: 2.0,
        };
        let t = admissible_fraction(pt(0.0, 0.0), Vec2::new(2.0, 0.0), &[h]);
        assert!((t - 0.5).abs() < 1e-8 && t < 0.5);
        assert_eq!(admissible_fraction(pt(0.0, 0.0), Vec2::new(-2.0, 0.0), &[h]), 1.0);
        assert_eq!(admissible_fraction(pt(2.0, 0.0), Vec2::new(1.0, 0.0), &[h]), 0.0);
    }

    #[test]
    fn invalid_scenario_is_rejected() {
        let s = Scenario::with_defaults(vec![pt(0.0, 0.0), pt(0.1, 0.0)], pt(5.0, 0.0));
        assert!(run_simulation(&s).is_err());
    }
}
