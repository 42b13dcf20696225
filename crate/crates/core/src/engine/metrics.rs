use crate::cells::Obstacle;
use crate::geometry::Point2;

use super::sim::Snapshot;

/// Closest pursuer-obstacle and pursuer-pursuer clearances at one tick.
#[derive(Clone, Debug, PartialEq)]
pub struct TickDistances {
    /// `min_i d_io`, `+∞` without obstacles or pursuers.
    pub min_obstacle: f64,
    /// Pursuer attaining `min_obstacle`.
    pub obstacle_pursuer: Option<usize>,
    /// `min_{i≠j} d_ij`, `+∞` with fewer than two pursuers.
    pub min_pair: f64,
    pub pair: Option<(usize, usize)>,
    per_pursuer_obstacle: Vec<f64>,
    pair_distances: Vec<(usize, usize, f64)>,
}

impl TickDistances {
    /// Whether any clearance is at or below the summed safety radii.
    pub fn violates(&self, radii: &[f64]) -> bool {
        self.per_pursuer_obstacle.iter().zip(radii).any(|(&d, &r)| d <= r)
            || self
                .pair_distances
                .iter()
                .any(|&(i, j, d)| d <= radii[i] + radii[j])
    }

    /// Smallest clearance minus the safety radii over all pursuers and
    /// pairs; positive when the tick is safe.
    pub fn worst_margin(&self, radii: &[f64]) -> f64 {
        let obs = self.per_pursuer_obstacle.iter().zip(radii).map(|(&d, &r)| d - r);
        let pairs = self
            .pair_distances
            .iter()
            .map(|&(i, j, d)| d - radii[i] - radii[j]);
        obs.chain(pairs).fold(f64::INFINITY, f64::min)
    }
}

pub fn tick_distances(pursuers: &[Point2], obstacles: &[Obstacle]) -> TickDistances {
    let per_pursuer_obstacle: Vec<f64> = pursuers
        .iter()
        .map(|&p| {
            obstacles
                .iter()
                .map(|o| o.distance_to(p))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let (mut min_obstacle, mut obstacle_pursuer) = (f64::INFINITY, None);
    for (i, &d) in per_pursuer_obstacle.iter().enumerate() {
        if d < min_obstacle {
            min_obstacle = d;
            obstacle_pursuer = Some(i);
        }
    }
    let mut pair_distances = Vec::new();
    let (mut min_pair, mut pair) = (f64::INFINITY, None);
    for i in 0..pursuers.len() {
        for j in i + 1..pursuers.len() {
            let d = pursuers[i].distance(pursuers[j]);
            pair_distances.push((i, j, d));
            if d < min_pair {
                min_pair = d;
                pair = Some((i, j));
            }
        }
    }
    TickDistances {
        min_obstacle,
        obstacle_pursuer,
        min_pair,
        pair,
        per_pursuer_obstacle,
        pair_distances,
    }
}

/// `(d_mo, d_mp)`: minima over every tick of the trace, `+∞` when
/// undefined.
pub fn compute_safety_metrics(trace: &[Snapshot]) -> (f64, f64) {
    trace.iter().fold((f64::INFINITY, f64::INFINITY), |(mo, mp), s| {
        (mo.min(s.distances.min_obstacle), mp.min(s.distances.min_pair))
    })
}
