//! Agent dynamics and the motion-primitive MPC.
//!
//! Triple-integrator primitives hold the jerk constant over the horizon, so
//! every trajectory is a cubic polynomial in time and can be evaluated in
//! closed form. Containment of a candidate in a convex polygon is checked
//! exactly: each edge constraint along the trajectory is a cubic whose
//! maximum on `[0, T]` sits at an endpoint or a root of its derivative.

use thiserror::Error;

use crate::geometry::{ConvexPolygon, HalfPlane, Point2, Vec2};

/// Limit tolerance used when filtering candidates and clamping states.
pub const LIMIT_TOL: f64 = 1e-9;

/// Containment tolerance for primitive positions (m).
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// Default number of samples per primitive horizon (excluding t = 0).
pub const DEFAULT_SUBSTEPS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("jerk {norm:.4} m/s^3 exceeds limit {limit:.4} m/s^3")]
    JerkExceedsLimit { norm: f64, limit: f64 },
    #[error("start position lies outside the admissible polygon by {violation:.3e} m")]
    NoFeasiblePrimitive { violation: f64 },
    #[error("invalid {what}: {value}")]
    InvalidParameter { what: &'static str, value: f64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FullState {
    pub p: Point2,
    pub v: Vec2,
    pub a: Vec2,
}

impl FullState {
    pub fn at_rest(p: Point2) -> Self {
        Self {
            p,
            v: Vec2::ZERO,
            a: Vec2::ZERO,
        }
    }

    /// Exact state after holding `jerk` for `t` seconds.
    pub fn advance(&self, jerk: Vec2, t: f64) -> Self {
        let (t2, t3) = (t * t, t * t * t);
        Self {
            p: self.p + self.v * t + self.a * (t2 / 2.0) + jerk * (t3 / 6.0),
            v: self.v + self.a * t + jerk * (t2 / 2.0),
            a: self.a + jerk * t,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynamicLimits {
    pub v_max: f64,
    pub a_max: f64,
    pub j_max: f64,
}

impl DynamicLimits {
    pub fn new(v_max: f64, a_max: f64, j_max: f64) -> Result<Self, DynamicsError> {
        for (what, value) in [("v_max", v_max), ("a_max", a_max), ("j_max", j_max)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(DynamicsError::InvalidParameter { what, value });
            }
        }
        Ok(Self { v_max, a_max, j_max })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MpcWeights {
    /// Control-effort weight.
    pub lambda_u: f64,
    /// Centroid-tracking weight.
    pub lambda_p: f64,
}

impl MpcWeights {
    pub fn new(lambda_u: f64, lambda_p: f64) -> Result<Self, DynamicsError> {
        if !(lambda_u >= 0.0) {
            return Err(DynamicsError::InvalidParameter {
                what: "lambda_u",
                value: lambda_u,
            });
        }
        if !(lambda_p >= 0.0) || lambda_u + lambda_p == 0.0 {
            return Err(DynamicsError::InvalidParameter {
                what: "lambda_p",
                value: lambda_p,
            });
        }
        Ok(Self { lambda_u, lambda_p })
    }
}

impl Default for MpcWeights {
    fn default() -> Self {
        Self {
            lambda_u: 0.01,
            lambda_p: 1.0,
        }
    }
}

/// Constant-jerk trajectory sampled at `substeps + 1` uniform times
/// including both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct MotionPrimitive {
    pub start: FullState,
    pub jerk: Vec2,
    pub horizon: f64,
    pub samples: Vec<FullState>,
}

impl MotionPrimitive {
    fn build(start: FullState, jerk: Vec2, horizon: f64, substeps: usize) -> Self {
        let samples = (0..=substeps)
            .map(|k| start.advance(jerk, horizon * k as f64 / substeps as f64))
            .collect();
        Self {
            start,
            jerk,
            horizon,
            samples,
        }
    }

    /// Stationary primitive at `p` with zero velocity and acceleration.
    pub fn hold(p: Point2, horizon: f64, substeps: usize) -> Self {
        Self::build(FullState::at_rest(p), Vec2::ZERO, horizon, substeps.max(1))
    }

    pub fn state_at(&self, t: f64) -> FullState {
        self.start.advance(self.jerk, t)
    }

    pub fn end(&self) -> FullState {
        *self.samples.last().expect("primitives have at least two samples")
    }

    pub fn sample_dt(&self) -> f64 {
        self.horizon / (self.samples.len() - 1) as f64
    }
}

/// `p' = p + v·dt`.
pub fn step_single_integrator(p: Point2, v: Vec2, dt: f64) -> Point2 {
    p + v * dt
}

pub fn generate_primitive(
    x0: FullState,
    jerk: Vec2,
    horizon: f64,
    substeps: usize,
    j_max: f64,
) -> Result<MotionPrimitive, DynamicsError> {
    let norm = jerk.norm();
    if norm > j_max * (1.0 + LIMIT_TOL) {
        return Err(DynamicsError::JerkExceedsLimit { norm, limit: j_max });
    }
    if !(horizon > 0.0) {
        return Err(DynamicsError::InvalidParameter {
            what: "horizon",
            value: horizon,
        });
    }
    if substeps < 2 {
        return Err(DynamicsError::InvalidParameter {
            what: "substeps",
            value: substeps as f64,
        });
    }
    Ok(MotionPrimitive::build(x0, jerk, horizon, substeps))
}

/// Exact state of `prim` after `dt` seconds with velocity and acceleration
/// clamped to the limits. `dt` beyond the horizon is capped.
pub fn step_triple_integrator(prim: &MotionPrimitive, dt: f64, limits: &DynamicLimits) -> FullState {
    let mut s = prim.state_at(dt.min(prim.horizon));
    s.v = s.v.clamp_norm(limits.v_max);
    s.a = s.a.clamp_norm(limits.a_max);
    s
}

/// Largest value of `h(p(t))` over `t ∈ [0, T]` for the cubic trajectory
/// of `start` under `jerk`.
fn max_constraint_value(h: &HalfPlane, start: &FullState, jerk: Vec2, horizon: f64) -> f64 {
    let n = h.normal;
    let f = |t: f64| h.value(start.advance(jerk, t).p);
    let mut best = f(0.0).max(f(horizon));
    // f'(t) = n·v0 + (n·a0) t + (n·j / 2) t²
    let (qa, qb, qc) = (0.5 * n.dot(jerk), n.dot(start.a), n.dot(start.v));
    let mut roots = [f64::NAN; 2];
    if qa.abs() > 1e-15 {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            roots = [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)];
        }
    } else if qb.abs() > 1e-15 {
        roots[0] = -qc / qb;
    }
    for t in roots {
        if t > 0.0 && t < horizon {
            best = best.max(f(t));
        }
    }
    best
}

/// Worst containment violation (m) of the continuous trajectory; non-positive
/// means it stays inside `polygon` for the whole horizon.
pub fn trajectory_violation(polygon: &ConvexPolygon, prim: &MotionPrimitive) -> f64 {
    let planes = polygon.half_planes();
    if planes.is_empty() {
        return f64::INFINITY;
    }
    planes
        .iter()
        .map(|h| max_constraint_value(h, &prim.start, prim.jerk, prim.horizon) / h.normal.norm())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Samples respect the speed limit and the acceleration limit (the latter is
/// exact: acceleration is affine in time, its norm is convex).
pub fn within_limits(prim: &MotionPrimitive, limits: &DynamicLimits) -> bool {
    prim.samples
        .iter()
        .all(|s| s.v.norm() <= limits.v_max + LIMIT_TOL && s.a.norm() <= limits.a_max + LIMIT_TOL)
}

/// Trapezoid-rule cost `∫ λ_u‖j‖² + λ_p‖p(t) − C‖² dt` over the samples.
pub fn primitive_cost(prim: &MotionPrimitive, centroid: Point2, weights: &MpcWeights) -> f64 {
    let h = prim.sample_dt();
    let effort = weights.lambda_u * prim.jerk.norm_sq();
    let last = prim.samples.len() - 1;
    prim.samples
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let w = if k == 0 || k == last { 0.5 * h } else { h };
            w * (effort + weights.lambda_p * (s.p - centroid).norm_sq())
        })
        .sum()
}

/// Candidate jerks in evaluation order.
///
/// 1. The 5×5 grid over `{−J, −J/2, 0, J/2, J}²`.
/// 2. Finer levels `±J/4, ±J/8, ±J/16` completing an 11×11 grid, so that
///    candidates exist when the velocity or acceleration limit rules out
///    every coarse jerk over a long horizon.
/// 3. The centroid-seeded jerk (endpoint lands on the centroid).
/// 4. The braking jerk (zero velocity at the horizon).
/// 5. The seeded and braking jerks shrunk to the largest multiple that
///    respects the limits.
///
/// Grid points outside the jerk disc are pulled radially onto it.
pub fn candidate_jerks(
    x0: &FullState,
    centroid: Point2,
    limits: &DynamicLimits,
    horizon: f64,
    substeps: usize,
) -> Vec<Vec2> {
    let j = limits.j_max;
    let coarse = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let all = [
        -1.0, -0.5, -0.25, -0.125, -0.0625, 0.0, 0.0625, 0.125, 0.25, 0.5, 1.0,
    ];
    let mut out = Vec::with_capacity(all.len() * all.len() + 4);
    for &sx in &coarse {
        for &sy in &coarse {
            out.push(Vec2::new(sx * j, sy * j).clamp_norm(j));
        }
    }
    let is_coarse = |s: f64| coarse.contains(&s);
    for &sx in &all {
        for &sy in &all {
            if !(is_coarse(sx) && is_coarse(sy)) {
                out.push(Vec2::new(sx * j, sy * j).clamp_norm(j));
            }
        }
    }
    let t = horizon;
    let drift = x0.p + x0.v * t + x0.a * (t * t / 2.0);
    let seeded = ((centroid - drift) * (6.0 / (t * t * t))).clamp_norm(j);
    let braking = braking_jerk(x0, limits, horizon);
    out.push(seeded);
    out.push(braking);
    for dir in [seeded, braking] {
        out.push(dir * limit_scale(x0, dir, limits, horizon, substeps));
    }
    out
}

/// Largest `s ∈ [0, 1]` (by bisection) such that jerk `s·dir` keeps the
/// samples within the velocity and acceleration limits; 0 if even zero jerk
/// does not.
fn limit_scale(x0: &FullState, dir: Vec2, limits: &DynamicLimits, horizon: f64, substeps: usize) -> f64 {
    let ok = |s: f64| within_limits(&MotionPrimitive::build(*x0, dir * s, horizon, substeps), limits);
    if ok(1.0) {
        return 1.0;
    }
    if !ok(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Jerk that brings the velocity to zero at the end of the horizon, clamped
/// to the jerk limit.
pub fn braking_jerk(x0: &FullState, limits: &DynamicLimits, horizon: f64) -> Vec2 {
    let t = horizon;
    ((x0.v + x0.a * t) * (-2.0 / (t * t))).clamp_norm(limits.j_max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MpcSolution {
    pub primitive: MotionPrimitive,
    pub cost: f64,
    /// False when no candidate was admissible and the emergency stop was
    /// returned instead.
    pub feasible: bool,
    /// Index into [`candidate_jerks`] of the selected candidate.
    pub candidate: Option<usize>,
}

/// Picks the cheapest admissible constant-jerk primitive.
///
/// A candidate is admissible when its continuous trajectory stays inside
/// `polygon` and its samples respect `limits`. Ties go to the lowest
/// candidate index. If nothing is admissible, the emergency stop (hold at
/// `x0.p` with zero velocity and acceleration) is returned with
/// `feasible = false`.
pub fn select_primitive_mpc(
    x0: &FullState,
    polygon: &ConvexPolygon,
    centroid: Point2,
    limits: &DynamicLimits,
    weights: &MpcWeights,
    horizon: f64,
    substeps: usize,
) -> Result<MpcSolution, DynamicsError> {
    let start_violation = polygon.half_planes().iter().map(|h| -h.slack(x0.p)).fold(
        if polygon.len() < 3 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        },
        f64::max,
    );
    if start_violation > CONTAINMENT_TOL {
        return Err(DynamicsError::NoFeasiblePrimitive {
            violation: start_violation,
        });
    }
    let mut best: Option<(usize, MotionPrimitive, f64)> = None;
    for (idx, jerk) in candidate_jerks(x0, centroid, limits, horizon, substeps)
        .into_iter()
        .enumerate()
    {
        let prim = generate_primitive(*x0, jerk, horizon, substeps, limits.j_max)?;
        if !within_limits(&prim, limits) || trajectory_violation(polygon, &prim) > CONTAINMENT_TOL {
            continue;
        }
        let cost = primitive_cost(&prim, centroid, weights);
        if best.as_ref().is_none_or(|(_, _, c)| cost < *c) {
            best = Some((idx, prim, cost));
        }
    }
    Ok(match best {
        Some((idx, primitive, cost)) => MpcSolution {
            primitive,
            cost,
            feasible: true,
            candidate: Some(idx),
        },
        None => {
            let primitive = MotionPrimitive::hold(x0.p, horizon, substeps);
            let cost = primitive_cost(&primitive, centroid, weights);
            MpcSolution {
                primitive,
                cost,
                feasible: false,
                candidate: None,
            }
        }
    })
}
