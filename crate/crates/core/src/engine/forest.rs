use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cells::Obstacle;
use crate::geometry::{polytope_min_distance, Point2};

use super::scenario::{Scenario, PAPER_SAFETY_RADIUS};

/// Total rejections allowed before giving up on a layout.
pub const PLACEMENT_BUDGET: usize = 10_000;

/// Axis-aligned sampling box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleBox {
    pub min: Point2,
    pub max: Point2,
}

impl SampleBox {
    pub fn new(min: Point2, max: Point2) -> Self {
        Self { min, max }
    }

    pub fn square(lo: f64, hi: f64) -> Self {
        Self::new(Point2::new(lo, lo), Point2::new(hi, hi))
    }

    fn is_valid(&self) -> bool {
        self.min.is_finite() && self.max.is_finite() && self.min.x <= self.max.x && self.min.y <= self.max.y
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Point2 {
        Point2::new(
            uniform(rng, self.min.x, self.max.x),
            uniform(rng, self.min.y, self.max.y),
        )
    }
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// Random forest layout: regular polygons scattered over a field, plus
/// start boxes for both sides.
#[derive(Clone, Debug, PartialEq)]
pub struct ForestParams {
    /// Obstacles lie entirely inside this box.
    pub field: SampleBox,
    pub obstacle_count: usize,
    /// Circumradius range (m).
    pub obstacle_radius: (f64, f64),
    /// Side-count range, inclusive.
    pub obstacle_sides: (usize, usize),
    /// Minimum gap between any two obstacles (m).
    pub min_clearance: f64,
    pub pursuer_count: usize,
    pub pursuer_box: SampleBox,
    pub evader_box: SampleBox,
    /// Extra distance each start keeps beyond the bare invariants (m).
    pub start_margin: f64,
}

impl ForestParams {
    /// 20 m × 20 m field, pursuers drawn in [10, 15]², evader anywhere in
    /// the field with a 2 m border, obstacles of 0.3 to 1.0 m circumradius
    /// at least `4·r` apart.
    pub fn reference(pursuer_count: usize, obstacle_count: usize) -> Self {
        Self {
            field: SampleBox::square(0.0, 20.0),
            obstacle_count,
            obstacle_radius: (0.3, 1.0),
            obstacle_sides: (3, 8),
            min_clearance: 4.0 * PAPER_SAFETY_RADIUS,
            pursuer_count,
            pursuer_box: SampleBox::square(10.0, 15.0),
            evader_box: SampleBox::square(2.0, 18.0),
            start_margin: 0.2,
        }
    }

    fn check(&self) -> Result<(), ForestError> {
        let (rlo, rhi) = self.obstacle_radius;
        let (slo, shi) = self.obstacle_sides;
        let ok = self.field.is_valid()
            && self.pursuer_box.is_valid()
            && self.evader_box.is_valid()
            && rlo > 0.0
            && rhi >= rlo
            && rhi.is_finite()
            && slo >= 3
            && shi >= slo
            && self.min_clearance >= 0.0
            && self.start_margin >= 0.0
            && 2.0 * rhi <= (self.field.max.x - self.field.min.x).min(self.field.max.y - self.field.min.y);
        if ok {
            Ok(())
        } else {
            Err(ForestError::InvalidParams)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ForestError {
    #[error("forest parameters are inconsistent")]
    InvalidParams,
    #[error("could not place {what} after {budget} rejections")]
    PlacementFailed { what: &'static str, budget: usize },
}

/// Draws a layout and starts from `seed` and applies them to `template`.
/// The template supplies every physical parameter; its pursuer radius
/// (first entry, or 0.15 m) is used for all generated pursuers.
pub fn generate_forest_scenario(
    template: &Scenario,
    params: &ForestParams,
    seed: u64,
) -> Result<Scenario, ForestError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rejections = 0usize;
    let mut reject = |what| {
        rejections += 1;
        if rejections >= PLACEMENT_BUDGET {
            Err(ForestError::PlacementFailed {
                what,
                budget: PLACEMENT_BUDGET,
            })
        } else {
            Ok(())
        }
    };

    let mut obstacles: Vec<Obstacle> = Vec::with_capacity(params.obstacle_count);
    while obstacles.len() < params.obstacle_count {
        let radius = uniform(&mut rng, params.obstacle_radius.0, params.obstacle_radius.1);
        let sides = rng.random_range(params.obstacle_sides.0..=params.obstacle_sides.1);
        let phase = uniform(&mut rng, 0.0, std::f64::consts::TAU);
        let inner = SampleBox::new(
            params.field.min + Point2::new(radius, radius),
            params.field.max - Point2::new(radius, radius),
        );
        let center = inner.sample(&mut rng);
        let candidate = match Obstacle::regular(center, radius, sides, phase) {
            Ok(o) => o,
            Err(_) => {
                reject("obstacle")?;
                continue;
            }
        };
        let clear = obstacles
            .iter()
            .all(|o| polytope_min_distance(o.hull(), candidate.hull()) >= params.min_clearance);
        if clear {
            obstacles.push(candidate);
        } else {
            reject("obstacle")?;
        }
    }

    let r = template
        .pursuer_radii
        .first()
        .copied()
        .unwrap_or(PAPER_SAFETY_RADIUS);
    let r_e = template.evader_radius;
    let margin = params.start_margin;
    let free = |p: Point2, radius: f64| obstacles.iter().all(|o| o.distance_to(p) > radius + margin);

    let mut pursuers: Vec<Point2> = Vec::with_capacity(params.pursuer_count);
    while pursuers.len() < params.pursuer_count {
        let p = params.pursuer_box.sample(&mut rng);
        if free(p, r) && pursuers.iter().all(|q| q.distance(p) > 2.0 * r + margin) {
            pursuers.push(p);
        } else {
            reject("pursuer")?;
        }
    }

    let evader = loop {
        let p = params.evader_box.sample(&mut rng);
        let clear_of_pursuers = pursuers
            .iter()
            .all(|q| q.distance(p) > template.capture_radius.max(r + r_e) + margin);
        if free(p, r_e) && clear_of_pursuers {
            break p;
        }
        reject("evader")?;
    };

    let mut scenario = template.clone();
    scenario.pursuer_starts = pursuers;
    scenario.pursuer_radii = vec![r; params.pursuer_count];
    scenario.evader_start = evader;
    scenario.obstacles = obstacles;
    scenario.forest = Some(params.clone());
    scenario.seed = seed;
    Ok(scenario)
}
