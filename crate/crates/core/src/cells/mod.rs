//! Evader-centred bounded Voronoi cells with safety buffers and obstacle
//! awareness.
//!
//! A pursuer's cell is the bounding rectangle `E` around the evader cut by
//!
//! * one buffered bisector half-plane per other pursuer,
//! * one buffered separating half-plane per obstacle,
//! * the unbuffered bisector with the evader.
//!
//! The evader's cell uses the same construction without buffers. Every
//! half-plane is oriented so that the cell owner satisfies it.

pub mod oracle;
pub mod qp;

use std::fmt;

use thiserror::Error;

use crate::geometry::{
    clip_halfplane, dist_point_convex, ConvexPolygon, GeometryError, HalfPlane, Point2, Vec2, MIN_AREA,
};

pub use qp::{solve_min_norm, QpError, QpSolution};

/// Agents closer than this are considered coincident (m).
pub const COINCIDENT_TOL: f64 = 1e-9;

/// Region half-widths below this are degenerate (m).
pub const REGION_MIN_HALF_WIDTH: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AgentRef {
    Pursuer(usize),
    Evader,
}

impl fmt::Display for AgentRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentRef::Pursuer(i) => write!(f, "pursuer {i}"),
            AgentRef::Evader => write!(f, "evader"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CellError {
    #[error("bounding region is degenerate along {axis:?} (half-width {half_width:.3e} m)")]
    DegenerateRegion { axis: Axis, half_width: f64 },
    #[error("bounding region needs at least one pursuer")]
    NoPursuers,
    #[error("coincident agents{}: distance {distance:.3e} m", pair_label(.pair))]
    CoincidentAgents {
        pair: Option<(AgentRef, AgentRef)>,
        distance: f64,
    },
    #[error("{agent} is within {distance:.4} m of obstacle {obstacle}, buffer is {buffer:.4} m")]
    RobotInsideObstacle {
        agent: AgentRef,
        obstacle: usize,
        distance: f64,
        buffer: f64,
    },
    #[error("invalid obstacle: {0}")]
    InvalidObstacle(GeometryError),
    #[error("agent index {index} out of range ({count} pursuers)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error(transparent)]
    Qp(#[from] QpError),
}

fn pair_label(pair: &Option<(AgentRef, AgentRef)>) -> String {
    match pair {
        Some((a, b)) => format!(" {a} and {b}"),
        None => String::new(),
    }
}

/// Axis-aligned rectangle `E` centred on the evader.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundingRegion {
    pub center: Point2,
    pub half_x: f64,
    pub half_y: f64,
}

impl BoundingRegion {
    pub fn new(center: Point2, half_x: f64, half_y: f64) -> Result<Self, CellError> {
        if !(half_x >= REGION_MIN_HALF_WIDTH) {
            return Err(CellError::DegenerateRegion {
                axis: Axis::X,
                half_width: half_x,
            });
        }
        if !(half_y >= REGION_MIN_HALF_WIDTH) {
            return Err(CellError::DegenerateRegion {
                axis: Axis::Y,
                half_width: half_y,
            });
        }
        Ok(Self {
            center,
            half_x,
            half_y,
        })
    }

    /// Lower corner `s_l`.
    pub fn lower(&self) -> Point2 {
        self.center - Vec2::new(self.half_x, self.half_y)
    }

    /// Upper corner `s_u`.
    pub fn upper(&self) -> Point2 {
        self.center + Vec2::new(self.half_x, self.half_y)
    }

    pub fn polygon(&self) -> ConvexPolygon {
        ConvexPolygon::rectangle(self.lower(), self.upper())
    }

    pub fn contains(&self, p: Point2) -> bool {
        (p.x - self.center.x).abs() <= self.half_x + 1e-9 && (p.y - self.center.y).abs() <= self.half_y + 1e-9
    }

    /// Same region with both half-widths raised to at least `floor`.
    pub fn with_floor(&self, floor: f64) -> Self {
        Self {
            center: self.center,
            half_x: self.half_x.max(floor),
            half_y: self.half_y.max(floor),
        }
    }

    /// Same half-widths around a new centre.
    pub fn recentered(&self, center: Point2) -> Self {
        Self { center, ..*self }
    }

    fn half_planes(&self) -> [HalfPlane; 4] {
        let (lo, hi) = (self.lower(), self.upper());
        [
            HalfPlane {
                normal: Vec2::new(1.0, 0.0),
                offset: hi.x,
            },
            HalfPlane {
                normal: Vec2::new(0.0, 1.0),
                offset: hi.y,
            },
            HalfPlane {
                normal: Vec2::new(-1.0, 0.0),
                offset: -lo.x,
            },
            HalfPlane {
                normal: Vec2::new(0.0, -1.0),
                offset: -lo.y,
            },
        ]
    }
}

fn raw_extent(evader: Point2, pursuers: &[Point2]) -> Option<(f64, f64)> {
    if pursuers.is_empty() {
        return None;
    }
    let hx = pursuers
        .iter()
        .map(|p| (p.x - evader.x).abs())
        .fold(0.0, f64::max);
    let hy = pursuers
        .iter()
        .map(|p| (p.y - evader.y).abs())
        .fold(0.0, f64::max);
    Some((hx, hy))
}

/// Smallest evader-centred rectangle holding every pursuer.
pub fn bounding_region(evader: Point2, pursuers: &[Point2]) -> Result<BoundingRegion, CellError> {
    let (hx, hy) = raw_extent(evader, pursuers).ok_or(CellError::NoPursuers)?;
    BoundingRegion::new(evader, hx, hy)
}

/// [`bounding_region`] with half-widths clamped below at `floor` (> 0).
pub fn bounding_region_with_floor(evader: Point2, pursuers: &[Point2], floor: f64) -> BoundingRegion {
    let (hx, hy) = raw_extent(evader, pursuers).unwrap_or((floor, floor));
    BoundingRegion {
        center: evader,
        half_x: hx.max(floor),
        half_y: hy.max(floor),
    }
}

/// Convex obstacle, at least a triangle with positive area.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstacle {
    hull: ConvexPolygon,
}

impl Obstacle {
    pub fn new(hull: ConvexPolygon) -> Result<Self, CellError> {
        if hull.is_degenerate() {
            return Err(CellError::InvalidObstacle(GeometryError::DegeneratePolygon {
                area: hull.area(),
            }));
        }
        Ok(Self { hull })
    }

    /// Regular polygon approximation of a disc (circumscribed by `radius`).
    pub fn regular(center: Point2, radius: f64, sides: usize, phase: f64) -> Result<Self, CellError> {
        Self::new(ConvexPolygon::regular(center, radius, sides, phase))
    }

    pub fn hull(&self) -> &ConvexPolygon {
        &self.hull
    }

    pub fn distance_to(&self, p: Point2) -> f64 {
        dist_point_convex(p, &self.hull)
    }
}

/// Where a cell constraint came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintSource {
    Pursuer(usize),
    Evader,
    Obstacle(usize),
    Region,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constraint {
    pub plane: HalfPlane,
    pub source: ConstraintSource,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VoronoiCell {
    pub polygon: ConvexPolygon,
    pub constraints: Vec<Constraint>,
    pub feasible: bool,
}

impl VoronoiCell {
    /// Clips `base` by every constraint. A degenerate remainder counts as
    /// empty.
    pub fn from_constraints(base: ConvexPolygon, constraints: Vec<Constraint>) -> Self {
        let mut polygon = base;
        for c in &constraints {
            if polygon.is_empty() {
                break;
            }
            polygon = clip_halfplane(&polygon, &c.plane);
        }
        if polygon.area() <= MIN_AREA {
            polygon = ConvexPolygon::empty();
        }
        let feasible = !polygon.is_empty();
        Self {
            polygon,
            constraints,
            feasible,
        }
    }

    /// Constraints other than the bounding region.
    pub fn safety_constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints
            .iter()
            .filter(|c| c.source != ConstraintSource::Region)
    }
}

/// Bisector half-plane keeping `p_self` on its own side, retracted by
/// `buffer_radius` meters toward `p_self`.
///
/// `a = p_other − p_self`, `b = a·(p_self + p_other)/2 − buffer_radius·‖a‖`.
pub fn pairwise_halfplane(
    p_self: Point2,
    p_other: Point2,
    buffer_radius: f64,
) -> Result<HalfPlane, CellError> {
    let a = p_other - p_self;
    let distance = a.norm();
    if distance <= COINCIDENT_TOL {
        return Err(CellError::CoincidentAgents { pair: None, distance });
    }
    let b = a.dot((p_self + p_other) * 0.5);
    Ok(HalfPlane {
        normal: a,
        offset: b - buffer_radius * distance,
    })
}

/// Raw separating-QP normal `a` and tight offset `b = min_l a·ψ_l`.
pub fn separating_qp(p: Point2, obs: &Obstacle) -> Result<(Vec2, f64), CellError> {
    let g: Vec<Vec2> = obs.hull.vertices().iter().map(|&v| v - p).collect();
    let sol = solve_min_norm(&g)?;
    let b = obs
        .hull
        .vertices()
        .iter()
        .map(|&v| sol.a.dot(v))
        .fold(f64::INFINITY, f64::min);
    Ok((sol.a, b))
}

/// Unit-normal half-plane containing `p` whose boundary lies
/// `buffer_radius` meters off the obstacle.
pub fn obstacle_halfplane(p: Point2, obs: &Obstacle, buffer_radius: f64) -> Result<HalfPlane, CellError> {
    let distance = obs.distance_to(p);
    if distance <= buffer_radius || distance <= COINCIDENT_TOL {
        return Err(CellError::RobotInsideObstacle {
            agent: AgentRef::Evader,
            obstacle: 0,
            distance,
            buffer: buffer_radius,
        });
    }
    let (a, b) = separating_qp(p, obs)?;
    let n = a.norm();
    Ok(HalfPlane {
        normal: a / n,
        offset: b / n - buffer_radius,
    })
}

fn with_agent(err: CellError, agent: AgentRef, obstacle: usize) -> CellError {
    match err {
        CellError::RobotInsideObstacle { distance, buffer, .. } => CellError::RobotInsideObstacle {
            agent,
            obstacle,
            distance,
            buffer,
        },
        other => other,
    }
}

fn obstacle_constraints(
    agent: AgentRef,
    p: Point2,
    obstacles: &[Obstacle],
    buffer: f64,
) -> Result<Vec<Constraint>, CellError> {
    obstacles
        .iter()
        .enumerate()
        .map(|(o, obs)| {
            obstacle_halfplane(p, obs, buffer)
                .map(|plane| Constraint {
                    plane,
                    source: ConstraintSource::Obstacle(o),
                })
                .map_err(|e| with_agent(e, agent, o))
        })
        .collect()
}

fn region_constraints(region: &BoundingRegion) -> impl Iterator<Item = Constraint> {
    region.half_planes().into_iter().map(|plane| Constraint {
        plane,
        source: ConstraintSource::Region,
    })
}

/// Neighbour, obstacle and evader half-planes for pursuer `i`. With
/// `buffered` false the radii are ignored.
pub fn pursuer_constraints(
    i: usize,
    pursuers: &[Point2],
    evader: Point2,
    radii: &[f64],
    obstacles: &[Obstacle],
    buffered: bool,
) -> Result<Vec<Constraint>, CellError> {
    if i >= pursuers.len() || i >= radii.len() {
        return Err(CellError::IndexOutOfRange {
            index: i,
            count: pursuers.len(),
        });
    }
    let p = pursuers[i];
    let r = if buffered { radii[i] } else { 0.0 };
    let mut out = Vec::with_capacity(pursuers.len() + obstacles.len());
    for (j, &q) in pursuers.iter().enumerate() {
        if j == i {
            continue;
        }
        let plane = pairwise_halfplane(p, q, r).map_err(|e| match e {
            CellError::CoincidentAgents { distance, .. } => CellError::CoincidentAgents {
                pair: Some((AgentRef::Pursuer(i), AgentRef::Pursuer(j))),
                distance,
            },
            other => other,
        })?;
        out.push(Constraint {
            plane,
            source: ConstraintSource::Pursuer(j),
        });
    }
    out.extend(obstacle_constraints(AgentRef::Pursuer(i), p, obstacles, r)?);
    let plane = pairwise_halfplane(p, evader, 0.0).map_err(|e| match e {
        CellError::CoincidentAgents { distance, .. } => CellError::CoincidentAgents {
            pair: Some((AgentRef::Pursuer(i), AgentRef::Evader)),
            distance,
        },
        other => other,
    })?;
    out.push(Constraint {
        plane,
        source: ConstraintSource::Evader,
    });
    Ok(out)
}

/// Buffered obstacle-aware cell of pursuer `i`.
pub fn build_pursuer_cell(
    i: usize,
    pursuers: &[Point2],
    evader: Point2,
    radii: &[f64],
    obstacles: &[Obstacle],
    region: &BoundingRegion,
) -> Result<VoronoiCell, CellError> {
    build_pursuer_cell_with(i, pursuers, evader, radii, obstacles, region, true)
}

/// [`build_pursuer_cell`] with buffering switchable, for the empty-cell
/// fallback.
pub fn build_pursuer_cell_with(
    i: usize,
    pursuers: &[Point2],
    evader: Point2,
    radii: &[f64],
    obstacles: &[Obstacle],
    region: &BoundingRegion,
    buffered: bool,
) -> Result<VoronoiCell, CellError> {
    let mut constraints: Vec<Constraint> = region_constraints(region).collect();
    constraints.extend(pursuer_constraints(
        i, pursuers, evader, radii, obstacles, buffered,
    )?);
    Ok(VoronoiCell::from_constraints(region.polygon(), constraints))
}

/// Unbuffered bisector and obstacle half-planes for the evader.
pub fn evader_constraints(
    pursuers: &[Point2],
    evader: Point2,
    obstacles: &[Obstacle],
) -> Result<Vec<Constraint>, CellError> {
    let mut out = Vec::with_capacity(pursuers.len() + obstacles.len());
    for (i, &q) in pursuers.iter().enumerate() {
        let plane = pairwise_halfplane(evader, q, 0.0).map_err(|e| match e {
            CellError::CoincidentAgents { distance, .. } => CellError::CoincidentAgents {
                pair: Some((AgentRef::Evader, AgentRef::Pursuer(i))),
                distance,
            },
            other => other,
        })?;
        out.push(Constraint {
            plane,
            source: ConstraintSource::Pursuer(i),
        });
    }
    out.extend(obstacle_constraints(AgentRef::Evader, evader, obstacles, 0.0)?);
    Ok(out)
}

/// Obstacle-aware evader cell inside `region` (no buffers).
pub fn build_evader_cell(
    pursuers: &[Point2],
    evader: Point2,
    obstacles: &[Obstacle],
    region: &BoundingRegion,
) -> Result<VoronoiCell, CellError> {
    let mut constraints: Vec<Constraint> = region_constraints(region).collect();
    constraints.extend(evader_constraints(pursuers, evader, obstacles)?);
    Ok(VoronoiCell::from_constraints(region.polygon(), constraints))
}
