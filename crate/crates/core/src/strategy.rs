//! Encirclement and capture logic plus velocity-level policies.

use thiserror::Error;

use crate::cells::{evader_constraints, pairwise_halfplane, BoundingRegion, Obstacle, VoronoiCell};
use crate::geometry::{
    convex_hull, polygon_mass_centroid, signed_hull_distance, ConvexPolygon, Point2, Vec2,
};

/// Targets closer than this produce a zero command (m).
pub const VELOCITY_DEAD_BAND: f64 = 1e-6;

/// Once in the capture phase, the encirclement distance may rise this far
/// above zero before the phase is abandoned (m).
pub const CAPTURE_PHASE_HYSTERESIS: f64 = 0.1;

/// Default half-width of the box that bounds the evader's escape cell (m).
pub const DEFAULT_WORK_RADIUS: f64 = 50.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error("shrink rate must be positive, got {0}")]
    NonPositiveRate(f64),
    #[error("shrink floor must be positive, got {0}")]
    NonPositiveFloor(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EncirclementStatus {
    /// Signed distance from the evader to the pursuer hull boundary;
    /// `+∞` when the hull is degenerate.
    pub d_e: f64,
    /// Distance from the evader to the nearest pursuer; `+∞` without
    /// pursuers.
    pub d_c: f64,
    pub encircled: bool,
    pub captured: bool,
    pub hull: ConvexPolygon,
    pub hull_size: usize,
}

pub fn encirclement_status(pursuers: &[Point2], evader: Point2, r_c: f64) -> EncirclementStatus {
    let hull = convex_hull(pursuers);
    let d_e = signed_hull_distance(&hull, evader).unwrap_or(f64::INFINITY);
    let d_c = pursuers
        .iter()
        .map(|p| p.distance(evader))
        .fold(f64::INFINITY, f64::min);
    EncirclementStatus {
        d_e,
        d_c,
        encircled: d_e <= 0.0,
        captured: d_c <= r_c,
        hull_size: hull.len(),
        hull,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShrinkMode {
    /// Smallest pursuer displacement over the last step.
    MinDisplacement,
    /// `rate · dt` every step.
    FixedRate,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShrinkPolicy {
    pub mode: ShrinkMode,
    /// m/s, used by [`ShrinkMode::FixedRate`].
    pub rate: f64,
    /// Minimum region half-width (m).
    pub floor: f64,
}

impl ShrinkPolicy {
    pub fn new(mode: ShrinkMode, rate: f64, floor: f64) -> Result<Self, StrategyError> {
        if !(rate > 0.0) {
            return Err(StrategyError::NonPositiveRate(rate));
        }
        if !(floor > 0.0) {
            return Err(StrategyError::NonPositiveFloor(floor));
        }
        Ok(Self { mode, rate, floor })
    }

    /// Minimum-displacement shrinking with the floor at the capture radius.
    pub fn min_displacement(capture_radius: f64) -> Self {
        Self {
            mode: ShrinkMode::MinDisplacement,
            rate: 1.0,
            floor: capture_radius,
        }
    }
}

/// Shrink distance `D` for one step; never negative.
pub fn shrink_amount(policy: &ShrinkPolicy, displacements: &[f64], dt: f64) -> f64 {
    let d = match policy.mode {
        ShrinkMode::MinDisplacement => {
            if displacements.is_empty() {
                0.0
            } else {
                displacements.iter().copied().fold(f64::INFINITY, f64::min)
            }
        }
        ShrinkMode::FixedRate => policy.rate * dt,
    };
    d.max(0.0)
}

/// Shrinks both half-widths by `d`, not below `floor`. The centre is kept.
pub fn shrink_region(region: &BoundingRegion, d: f64, floor: f64) -> BoundingRegion {
    BoundingRegion {
        center: region.center,
        half_x: (region.half_x - d).max(floor),
        half_y: (region.half_y - d).max(floor),
    }
}

fn head_toward(from: Point2, to: Point2, v_max: f64) -> Vec2 {
    let delta = to - from;
    let dist = delta.norm();
    if dist <= VELOCITY_DEAD_BAND {
        Vec2::ZERO
    } else {
        delta * (v_max / dist)
    }
}

/// Full-speed command toward the cell centroid.
pub fn pursuer_velocity_command(p: Point2, centroid: Point2, v_max: f64) -> Vec2 {
    head_toward(p, centroid, v_max)
}

/// Straight-line pursuit of the evader.
pub fn greedy_baseline_command(p: Point2, p_e: Point2, v_max: f64) -> Vec2 {
    head_toward(p, p_e, v_max)
}

/// The evader's escape cell: its standard Voronoi cell with respect to the
/// pursuers, clipped to a square of half-width `work_radius` around it and
/// cut by `obstacles` (pass an empty slice for the obstacle-free variant).
pub fn evader_escape_cell(
    p_e: Point2,
    pursuers: &[Point2],
    obstacles: &[Obstacle],
    work_radius: f64,
) -> Option<VoronoiCell> {
    let constraints = evader_constraints(pursuers, p_e, obstacles).ok()?;
    let base = BoundingRegion {
        center: p_e,
        half_x: work_radius,
        half_y: work_radius,
    };
    let cell = VoronoiCell::from_constraints(base.polygon(), constraints);
    cell.feasible.then_some(cell)
}

/// Centroid of [`evader_escape_cell`], if the cell is non-empty.
pub fn evader_escape_target(
    p_e: Point2,
    pursuers: &[Point2],
    obstacles: &[Obstacle],
    work_radius: f64,
) -> Option<Point2> {
    let cell = evader_escape_cell(p_e, pursuers, obstacles, work_radius)?;
    polygon_mass_centroid(&cell.polygon).ok().map(|(_, c)| c)
}

/// Full-speed command toward the centroid of the escape cell; zero when the
/// cell is empty.
pub fn evader_velocity_command(
    p_e: Point2,
    pursuers: &[Point2],
    obstacles: &[Obstacle],
    work_radius: f64,
    v_max: f64,
) -> Vec2 {
    match evader_escape_target(p_e, pursuers, obstacles, work_radius) {
        Some(c) => head_toward(p_e, c, v_max),
        None => Vec2::ZERO,
    }
}

/// Whether `p` lies in the standard (unbounded, obstacle-free) Voronoi cell
/// of `owner` among `sites`.
pub fn in_standard_cell(owner: Point2, sites: &[Point2], p: Point2) -> bool {
    sites
        .iter()
        .filter(|&&s| s != owner)
        .all(|&s| pairwise_halfplane(owner, s, 0.0).map_or(true, |h| h.contains(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn square_pursuers() -> Vec<Point2> {
        vec![pt(2.0, 2.0), pt(-2.0, 2.0), pt(-2.0, -2.0), pt(2.0, -2.0)]
    }

    #[test]
    fn encircled_not_captured() {
        let s = encirclement_status(&square_pursuers(), pt(0.0, 0.0), 1.0);
        assert_eq!(s.d_e, -2.0);
        assert!((s.d_c - 8f64.sqrt()).abs() < 1e-15);
        assert!(s.encircled && !s.captured);
        assert_eq!(s.hull_size, 4);
    }

    #[test]
    fn outside_hull() {
        let s = encirclement_status(&square_pursuers(), pt(5.0, 0.0), 1.0);
        assert_eq!(s.d_e, 3.0);
        assert!(!s.encircled);
    }

    #[test]
    fn two_pursuers_never_encircle() {
        let s = encirclement_status(&[pt(-1.0, 0.0), pt(1.0, 0.0)], pt(0.0, 0.0), 1.0);
        assert!(!s.encircled);
        assert_eq!(s.d_e, f64::INFINITY);
        assert!(s.captured, "proximity capture still counts");
    }

    #[test]
    fn shrink_amount_modes() {
        let p = ShrinkPolicy::min_displacement(1.0);
        assert_eq!(shrink_amount(&p, &[0.08, 0.10, 0.05], 0.1), 0.05);
        assert_eq!(shrink_amount(&p, &[], 0.1), 0.0);
        let fixed = ShrinkPolicy::new(ShrinkMode::FixedRate, 1.0, 1.0).unwrap();
        assert!((shrink_amount(&fixed, &[0.01], 0.1) - 0.1).abs() < 1e-15);
        assert!(ShrinkPolicy::new(ShrinkMode::FixedRate, 0.0, 1.0).is_err());
        assert!(ShrinkPolicy::new(ShrinkMode::FixedRate, 1.0, -1.0).is_err());
    }

    #[test]
    fn shrink_region_examples() {
        let r = BoundingRegion::new(pt(0.0, 0.0), 3.0, 1.05).unwrap();
        let s = shrink_region(&r, 0.1, 1.0);
        assert!((s.half_x - 2.9).abs() < 1e-15);
        assert_eq!(s.half_y, 1.0);
        assert_eq!(shrink_region(&r, 0.0, 1.0), r);
    }

    #[test]
    fn pursuer_command_examples() {
        let v = pursuer_velocity_command(pt(0.0, 0.0), pt(3.0, 4.0), 1.0);
        assert!((v - pt(0.6, 0.8)).norm() < 1e-15);
        assert_eq!(
            pursuer_velocity_command(pt(1.0, 1.0), pt(1.0, 1.0), 1.0),
            Vec2::ZERO
        );
        let v = pursuer_velocity_command(pt(0.0, 0.0), pt(7.0, 0.0), 0.3);
        assert!((v - pt(0.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn greedy_command_examples() {
        let v = greedy_baseline_command(pt(0.0, 0.0), pt(3.0, 4.0), 1.0);
        assert!((v - pt(0.6, 0.8)).norm() < 1e-15);
        assert_eq!(
            greedy_baseline_command(pt(2.0, 2.0), pt(2.0, 2.0), 1.0),
            Vec2::ZERO
        );
        let v = greedy_baseline_command(pt(1.0, 0.0), pt(5.0, 0.0), 0.3);
        assert!((v - pt(0.3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn evader_runs_from_single_pursuer() {
        // Cell is [-10, 1] × [-10, 10]; centroid (-4.5, 0).
        let c = evader_escape_target(pt(0.0, 0.0), &[pt(2.0, 0.0)], &[], 10.0).unwrap();
        assert!((c - pt(-4.5, 0.0)).norm() < 1e-12);
        let v = evader_velocity_command(pt(0.0, 0.0), &[pt(2.0, 0.0)], &[], 10.0, 0.9);
        assert!((v - pt(-0.9, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn lone_evader_stays_put() {
        let v = evader_velocity_command(pt(3.0, -1.0), &[], &[], 50.0, 0.9);
        assert_eq!(v, Vec2::ZERO);
    }

    #[test]
    fn standard_cell_membership() {
        let sites = [pt(0.0, 0.0), pt(2.0, 0.0)];
        assert!(in_standard_cell(sites[0], &sites, pt(0.9, 5.0)));
        assert!(!in_standard_cell(sites[0], &sites, pt(1.1, 0.0)));
    }
}
