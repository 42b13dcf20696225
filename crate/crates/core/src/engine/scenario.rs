use thiserror::Error;

use crate::cells::{AgentRef, Obstacle};
use crate::dynamics::{DynamicLimits, MpcWeights, DEFAULT_SUBSTEPS};
use crate::geometry::{Point2, Vec2};
use crate::strategy::{ShrinkPolicy, DEFAULT_WORK_RADIUS};

use super::forest::ForestParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DynamicsMode {
    Single,
    Triple,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EvaderPolicy {
    /// Head for the centroid of the evader's standard Voronoi cell.
    VoronoiEscape,
    /// Constant commanded velocity (m/s); zero for a stationary evader.
    Scripted { velocity: Vec2 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PursuerPolicy {
    /// Track the centroid of the obstacle-aware evader-centred cell.
    OaEcbvc,
    /// Head straight for the evader (collision constraints still apply).
    Greedy,
}

impl PursuerPolicy {
    pub fn name(self) -> &'static str {
        match self {
            PursuerPolicy::OaEcbvc => "oa-ecbvc",
            PursuerPolicy::Greedy => "greedy",
        }
    }
}

impl std::str::FromStr for PursuerPolicy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "oa-ecbvc" => Ok(PursuerPolicy::OaEcbvc),
            "greedy" => Ok(PursuerPolicy::Greedy),
            other => Err(format!("unknown policy `{other}` (expected oa-ecbvc or greedy)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MpcSettings {
    pub weights: MpcWeights,
    /// Primitive horizon (s), at least one replanning step.
    pub horizon: f64,
    pub substeps: usize,
}

impl Default for MpcSettings {
    fn default() -> Self {
        Self {
            weights: MpcWeights::default(),
            horizon: 1.0,
            substeps: DEFAULT_SUBSTEPS,
        }
    }
}

/// What the arena boundary means for the evader.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// A wall the evader cannot cross; its escape cell is clipped to it.
    Wall,
    /// Crossing it ends the run as an escape.
    Exit,
}

/// Axis-aligned box around the game. Pursuers are not restricted by it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arena {
    pub min: Point2,
    pub max: Point2,
    pub boundary: Boundary,
}

impl Arena {
    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

/// Complete description of one pursuit run.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub pursuer_starts: Vec<Point2>,
    pub evader_start: Point2,
    pub obstacles: Vec<Obstacle>,
    pub pursuer_radii: Vec<f64>,
    pub evader_radius: f64,
    pub capture_radius: f64,
    pub pursuer_limits: DynamicLimits,
    pub evader_limits: DynamicLimits,
    /// Replanning step (s).
    pub dt: f64,
    pub max_time: f64,
    pub dynamics: DynamicsMode,
    pub shrink: ShrinkPolicy,
    pub evader_policy: EvaderPolicy,
    pub pursuer_policy: PursuerPolicy,
    /// Cut the evader's escape cell by obstacle half-planes.
    pub evader_obstacle_aware: bool,
    pub evader_work_radius: f64,
    pub mpc: MpcSettings,
    pub arena: Option<Arena>,
    /// Generator parameters when the layout is drawn per seed.
    pub forest: Option<ForestParams>,
    pub seed: u64,
}

/// Speed of pursuers (m/s) in the simulation studies.
pub const PAPER_PURSUER_SPEED: f64 = 1.0;
/// Speed of the evader (m/s) in the simulation studies.
pub const PAPER_EVADER_SPEED: f64 = 0.9;
/// Safety radius of every robot (m).
pub const PAPER_SAFETY_RADIUS: f64 = 0.15;
pub const PAPER_CAPTURE_RADIUS: f64 = 1.0;
pub const PAPER_DT: f64 = 0.1;
/// Acceleration and jerk limits shared by both sides in triple-integrator
/// runs; not fixed by the reference setup.
pub const DEFAULT_A_MAX: f64 = 3.0;
pub const DEFAULT_J_MAX: f64 = 10.0;
pub const DEFAULT_MAX_TIME: f64 = 60.0;

impl Scenario {
    /// Simulation-study defaults around the given starts: r = 0.15 m,
    /// r_c = 1 m, dt = 0.1 s, v_p = 1.0, v_e = 0.9, 60 s timeout.
    pub fn with_defaults(pursuer_starts: Vec<Point2>, evader_start: Point2) -> Self {
        let n = pursuer_starts.len();
        let limits = |v| DynamicLimits {
            v_max: v,
            a_max: DEFAULT_A_MAX,
            j_max: DEFAULT_J_MAX,
        };
        Self {
            pursuer_starts,
            evader_start,
            obstacles: Vec::new(),
            pursuer_radii: vec![PAPER_SAFETY_RADIUS; n],
            evader_radius: PAPER_SAFETY_RADIUS,
            capture_radius: PAPER_CAPTURE_RADIUS,
            pursuer_limits: limits(PAPER_PURSUER_SPEED),
            evader_limits: limits(PAPER_EVADER_SPEED),
            dt: PAPER_DT,
            max_time: DEFAULT_MAX_TIME,
            dynamics: DynamicsMode::Single,
            shrink: ShrinkPolicy::min_displacement(PAPER_CAPTURE_RADIUS),
            evader_policy: EvaderPolicy::VoronoiEscape,
            pursuer_policy: PursuerPolicy::OaEcbvc,
            evader_obstacle_aware: false,
            evader_work_radius: DEFAULT_WORK_RADIUS,
            mpc: MpcSettings::default(),
            arena: None,
            forest: None,
            seed: 0,
        }
    }

    pub fn pursuer_count(&self) -> usize {
        self.pursuer_starts.len()
    }

    /// Checks every invariant, reporting the first one broken.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let positive = |field: &'static str, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(ScenarioError::NotPositive { field, value })
            }
        };
        positive("dt_s", self.dt)?;
        positive("max_time_s", self.max_time)?;
        positive("capture_radius_m", self.capture_radius)?;
        positive("evader_radius_m", self.evader_radius)?;
        positive("evader_work_radius_m", self.evader_work_radius)?;
        positive("shrink.rate_mps", self.shrink.rate)?;
        positive("shrink.floor_m", self.shrink.floor)?;
        for (side, l) in [("pursuer", &self.pursuer_limits), ("evader", &self.evader_limits)] {
            DynamicLimits::new(l.v_max, l.a_max, l.j_max).map_err(|e| ScenarioError::Limits {
                side,
                reason: e.to_string(),
            })?;
        }
        MpcWeights::new(self.mpc.weights.lambda_u, self.mpc.weights.lambda_p)
            .map_err(|e| ScenarioError::Mpc(e.to_string()))?;
        if self.mpc.horizon < self.dt || !self.mpc.horizon.is_finite() {
            return Err(ScenarioError::Mpc(format!(
                "horizon {} s is shorter than the replanning step {} s",
                self.mpc.horizon, self.dt
            )));
        }
        if self.mpc.substeps < 2 {
            return Err(ScenarioError::Mpc(format!(
                "substeps must be at least 2, got {}",
                self.mpc.substeps
            )));
        }
        if self.pursuer_radii.len() != self.pursuer_starts.len() {
            return Err(ScenarioError::RadiiCount {
                pursuers: self.pursuer_starts.len(),
                radii: self.pursuer_radii.len(),
            });
        }
        for &r in &self.pursuer_radii {
            positive("pursuer_radii_m", r)?;
        }
        let agents = self
            .pursuer_starts
            .iter()
            .enumerate()
            .map(|(i, &p)| (AgentRef::Pursuer(i), p, self.pursuer_radii[i]))
            .chain(std::iter::once((
                AgentRef::Evader,
                self.evader_start,
                self.evader_radius,
            )))
            .collect::<Vec<_>>();
        for &(agent, p, _) in &agents {
            if !p.is_finite() {
                return Err(ScenarioError::NonFinite { agent });
            }
        }
        for (i, &r) in self.pursuer_radii.iter().enumerate() {
            let required = r + self.evader_radius;
            if !(self.capture_radius > required) {
                return Err(ScenarioError::CaptureRadiusTooSmall {
                    pursuer: i,
                    capture_radius: self.capture_radius,
                    required,
                });
            }
        }
        for (k, &(a, pa, ra)) in agents.iter().enumerate() {
            for &(b, pb, rb) in &agents[k + 1..] {
                let distance = pa.distance(pb);
                if !(distance > ra + rb) {
                    return Err(ScenarioError::StartsOverlap {
                        first: a,
                        second: b,
                        distance,
                        required: ra + rb,
                    });
                }
            }
            for (o, obs) in self.obstacles.iter().enumerate() {
                let distance = obs.distance_to(pa);
                if !(distance > ra) {
                    return Err(ScenarioError::StartInsideObstacle {
                        agent: a,
                        obstacle: o,
                        distance,
                        radius: ra,
                    });
                }
            }
        }
        let d_c = self
            .pursuer_starts
            .iter()
            .map(|p| p.distance(self.evader_start))
            .fold(f64::INFINITY, f64::min);
        if d_c <= self.capture_radius {
            return Err(ScenarioError::InitiallyCaptured {
                d_c,
                capture_radius: self.capture_radius,
            });
        }
        if let Some(arena) = &self.arena {
            if !arena.contains(self.evader_start) {
                return Err(ScenarioError::EvaderOutsideArena);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("`{field}` must be positive and finite, got {value}")]
    NotPositive { field: &'static str, value: f64 },
    #[error("{side} limits: {reason}")]
    Limits { side: &'static str, reason: String },
    #[error("mpc: {0}")]
    Mpc(String),
    #[error("{pursuers} pursuers but {radii} radii")]
    RadiiCount { pursuers: usize, radii: usize },
    #[error("{agent} start is not finite")]
    NonFinite { agent: AgentRef },
    #[error("capture radius {capture_radius} m must exceed r_{pursuer} + r_e = {required} m")]
    CaptureRadiusTooSmall {
        pursuer: usize,
        capture_radius: f64,
        required: f64,
    },
    #[error(
        "starts of {first} and {second} overlap: distance {distance:.4} m, need more than {required:.4} m"
    )]
    StartsOverlap {
        first: AgentRef,
        second: AgentRef,
        distance: f64,
        required: f64,
    },
    #[error(
        "{agent} starts {distance:.4} m from obstacle {obstacle}, need more than its radius {radius:.4} m"
    )]
    StartInsideObstacle {
        agent: AgentRef,
        obstacle: usize,
        distance: f64,
        radius: f64,
    },
    #[error("evader starts captured: d_c = {d_c:.4} m <= r_c = {capture_radius} m")]
    InitiallyCaptured { d_c: f64, capture_radius: f64 },
    #[error("evader starts outside the arena")]
    EvaderOutsideArena,
}
