//! TOML scenario documents. Every key carries its unit in its name.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cells::{AgentRef, Obstacle};
use crate::dynamics::{DynamicLimits, MpcWeights};
use crate::engine::scenario::PAPER_SAFETY_RADIUS;
use crate::engine::{
    Arena, Boundary, DynamicsMode, EvaderPolicy, ForestParams, MpcSettings, PursuerPolicy, SampleBox,
    Scenario, ScenarioError,
};
use crate::geometry::{ConvexPolygon, Point2, Vec2};
use crate::strategy::{ShrinkMode, ShrinkPolicy};

/// Sides used for obstacles given as a centre and radius without `sides`.
pub const DEFAULT_OBSTACLE_SIDES: usize = 16;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("obstacle {index}: {reason}")]
    Obstacle { index: usize, reason: String },
    /// `line` is the line of the offending key, or 0 when the value came
    /// from a default.
    #[error("line {line}: invalid scenario: {source}")]
    Invalid { line: usize, source: ScenarioError },
    #[error("cannot serialize scenario: {0}")]
    Serialize(#[from] toml::ser::Error),
}

type Xy = [f64; 2];

fn pt(xy: Xy) -> Point2 {
    Point2::new(xy[0], xy[1])
}

fn xy(p: Point2) -> Xy {
    [p.x, p.y]
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct LimitsDoc {
    v_max_mps: f64,
    #[serde(default = "default_a_max")]
    a_max_mps2: f64,
    #[serde(default = "default_j_max")]
    j_max_mps3: f64,
}

fn default_a_max() -> f64 {
    crate::engine::scenario::DEFAULT_A_MAX
}

fn default_j_max() -> f64 {
    crate::engine::scenario::DEFAULT_J_MAX
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct ShrinkDoc {
    mode: String,
    #[serde(default = "one")]
    rate_mps: f64,
    floor_m: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct MpcDoc {
    horizon_s: f64,
    substeps: usize,
    lambda_u: f64,
    lambda_p: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct ArenaDoc {
    min_m: Xy,
    max_m: Xy,
    boundary: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct ObstacleDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices_m: Option<Vec<Xy>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    center_m: Option<Xy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sides: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rotation_rad: Option<f64>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct ForestDoc {
    field_min_m: Xy,
    field_max_m: Xy,
    obstacle_count: usize,
    obstacle_radius_m: Xy,
    obstacle_sides: [usize; 2],
    min_clearance_m: f64,
    pursuer_count: usize,
    pursuer_box_min_m: Xy,
    pursuer_box_max_m: Xy,
    evader_box_min_m: Xy,
    evader_box_max_m: Xy,
    start_margin_m: f64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    #[serde(default)]
    pursuer_starts_m: Vec<Xy>,
    evader_start_m: Xy,
    /// One value per pursuer, or a single value for all (0.15 m if absent).
    #[serde(default)]
    pursuer_radii_m: Vec<f64>,
    evader_radius_m: f64,
    capture_radius_m: f64,
    dt_s: f64,
    #[serde(default = "default_max_time")]
    max_time_s: f64,
    #[serde(default = "default_dynamics")]
    dynamics: String,
    #[serde(default = "default_pursuer_policy")]
    pursuer_policy: String,
    #[serde(default = "default_evader_policy")]
    evader_policy: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    evader_velocity_mps: Option<Xy>,
    #[serde(default)]
    evader_obstacle_aware: bool,
    #[serde(default = "default_work_radius")]
    evader_work_radius_m: f64,
    #[serde(default)]
    seed: u64,
    pursuer_limits: LimitsDoc,
    evader_limits: LimitsDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    shrink: Option<ShrinkDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mpc: Option<MpcDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    arena: Option<ArenaDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    forest: Option<ForestDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    obstacles: Vec<ObstacleDoc>,
}

fn default_max_time() -> f64 {
    crate::engine::scenario::DEFAULT_MAX_TIME
}

fn default_dynamics() -> String {
    "single".into()
}

fn default_pursuer_policy() -> String {
    "oa-ecbvc".into()
}

fn default_evader_policy() -> String {
    "voronoi-escape".into()
}

fn default_work_radius() -> f64 {
    crate::strategy::DEFAULT_WORK_RADIUS
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn syntax(text: &str, err: toml::de::Error) -> ConfigError {
    let (line, column) = err.span().map_or((0, 0), |s| line_col(text, s.start));
    ConfigError::Syntax {
        line,
        column,
        message: err.message().trim().to_string(),
    }
}

/// Byte offset of the first line starting with `key`.
fn key_offset(text: &str, key: &str) -> Option<usize> {
    text.lines()
        .scan(0usize, |pos, l| {
            let start = *pos;
            *pos += l.len() + 1;
            Some((start, l))
        })
        .find(|(_, l)| l.trim_start().starts_with(key))
        .map(|(start, l)| start + (l.len() - l.trim_start().len()))
}

/// Error for a bad enumerated value, located at the key's first occurrence.
fn bad_value(text: &str, key: &str, message: String) -> ConfigError {
    let (line, column) = line_col(text, key_offset(text, key).unwrap_or(0));
    ConfigError::Syntax {
        line,
        column,
        message,
    }
}

/// Locates a semantic error at the key it is about.
fn invalid(text: &str, source: ScenarioError) -> ConfigError {
    let start_key = |agent: &AgentRef| match agent {
        AgentRef::Pursuer(_) => "pursuer_starts_m",
        AgentRef::Evader => "evader_start_m",
    };
    let key = match &source {
        ScenarioError::NotPositive { field, .. } => field.rsplit('.').next().unwrap_or(field),
        ScenarioError::Limits { side: "evader", .. } => "[evader_limits]",
        ScenarioError::Limits { .. } => "[pursuer_limits]",
        ScenarioError::Mpc(_) => "[mpc]",
        ScenarioError::RadiiCount { .. } => "pursuer_radii_m",
        ScenarioError::NonFinite { agent } => start_key(agent),
        ScenarioError::CaptureRadiusTooSmall { .. } => "capture_radius_m",
        ScenarioError::StartsOverlap { first, second, .. } => {
            if *first == AgentRef::Evader || *second == AgentRef::Evader {
                "evader_start_m"
            } else {
                "pursuer_starts_m"
            }
        }
        ScenarioError::StartInsideObstacle { .. } => "[[obstacles]]",
        ScenarioError::InitiallyCaptured { .. } | ScenarioError::EvaderOutsideArena => "evader_start_m",
    };
    let line = key_offset(text, key).map_or(0, |offset| line_col(text, offset).0);
    ConfigError::Invalid { line, source }
}

fn limits(doc: &LimitsDoc) -> DynamicLimits {
    DynamicLimits {
        v_max: doc.v_max_mps,
        a_max: doc.a_max_mps2,
        j_max: doc.j_max_mps3,
    }
}

fn limits_doc(l: &DynamicLimits) -> LimitsDoc {
    LimitsDoc {
        v_max_mps: l.v_max,
        a_max_mps2: l.a_max,
        j_max_mps3: l.j_max,
    }
}

fn obstacle(index: usize, doc: &ObstacleDoc) -> Result<Obstacle, ConfigError> {
    let fail = |reason: String| ConfigError::Obstacle { index, reason };
    let hull = match (&doc.vertices_m, doc.center_m, doc.radius_m) {
        (Some(vs), None, None) => {
            if doc.sides.is_some() || doc.rotation_rad.is_some() {
                return Err(fail(
                    "`sides`/`rotation_rad` only apply to center/radius obstacles".into(),
                ));
            }
            ConvexPolygon::new(vs.iter().copied().map(pt).collect()).map_err(|e| fail(e.to_string()))?
        }
        (None, Some(c), Some(r)) => {
            if !(r > 0.0 && r.is_finite()) {
                return Err(fail(format!("radius_m must be positive, got {r}")));
            }
            let sides = doc.sides.unwrap_or(DEFAULT_OBSTACLE_SIDES);
            if sides < 3 {
                return Err(fail(format!("sides must be at least 3, got {sides}")));
            }
            ConvexPolygon::regular(pt(c), r, sides, doc.rotation_rad.unwrap_or(0.0))
        }
        _ => {
            return Err(fail(
                "give either `vertices_m` or both `center_m` and `radius_m`".into(),
            ))
        }
    };
    Obstacle::new(hull).map_err(|e| fail(e.to_string()))
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, ConfigError> {
    let doc: ScenarioDoc = toml::from_str(text).map_err(|e| syntax(text, e))?;

    let dynamics = match doc.dynamics.as_str() {
        "single" => DynamicsMode::Single,
        "triple" => DynamicsMode::Triple,
        other => {
            return Err(bad_value(
                text,
                "dynamics",
                format!("unknown dynamics `{other}` (expected single or triple)"),
            ))
        }
    };
    let pursuer_policy: PursuerPolicy = doc
        .pursuer_policy
        .parse()
        .map_err(|m| bad_value(text, "pursuer_policy", m))?;
    let evader_policy = match (doc.evader_policy.as_str(), doc.evader_velocity_mps) {
        ("voronoi-escape", None) => EvaderPolicy::VoronoiEscape,
        ("scripted", v) => EvaderPolicy::Scripted {
            velocity: v.map_or(Vec2::ZERO, pt),
        },
        ("voronoi-escape", Some(_)) => {
            return Err(bad_value(
                text,
                "evader_velocity_mps",
                "evader_velocity_mps requires evader_policy = \"scripted\"".into(),
            ))
        }
        (other, _) => {
            return Err(bad_value(
                text,
                "evader_policy",
                format!("unknown evader policy `{other}` (expected voronoi-escape or scripted)"),
            ))
        }
    };
    let shrink = match &doc.shrink {
        None => ShrinkPolicy::min_displacement(doc.capture_radius_m),
        Some(s) => {
            let mode = match s.mode.as_str() {
                "min-displacement" => ShrinkMode::MinDisplacement,
                "fixed-rate" => ShrinkMode::FixedRate,
                other => {
                    return Err(bad_value(
                        text,
                        "mode",
                        format!("unknown shrink mode `{other}` (expected min-displacement or fixed-rate)"),
                    ))
                }
            };
            ShrinkPolicy {
                mode,
                rate: s.rate_mps,
                floor: s.floor_m.unwrap_or(doc.capture_radius_m),
            }
        }
    };
    let mpc = doc
        .mpc
        .as_ref()
        .map_or_else(MpcSettings::default, |m| MpcSettings {
            weights: MpcWeights {
                lambda_u: m.lambda_u,
                lambda_p: m.lambda_p,
            },
            horizon: m.horizon_s,
            substeps: m.substeps,
        });
    let arena = match &doc.arena {
        None => None,
        Some(a) => {
            let boundary = match a.boundary.as_str() {
                "wall" => Boundary::Wall,
                "exit" => Boundary::Exit,
                other => {
                    return Err(bad_value(
                        text,
                        "boundary",
                        format!("unknown boundary `{other}` (expected wall or exit)"),
                    ))
                }
            };
            Some(Arena {
                min: pt(a.min_m),
                max: pt(a.max_m),
                boundary,
            })
        }
    };
    let forest = doc.forest.as_ref().map(|f| ForestParams {
        field: SampleBox::new(pt(f.field_min_m), pt(f.field_max_m)),
        obstacle_count: f.obstacle_count,
        obstacle_radius: (f.obstacle_radius_m[0], f.obstacle_radius_m[1]),
        obstacle_sides: (f.obstacle_sides[0], f.obstacle_sides[1]),
        min_clearance: f.min_clearance_m,
        pursuer_count: f.pursuer_count,
        pursuer_box: SampleBox::new(pt(f.pursuer_box_min_m), pt(f.pursuer_box_max_m)),
        evader_box: SampleBox::new(pt(f.evader_box_min_m), pt(f.evader_box_max_m)),
        start_margin: f.start_margin_m,
    });
    let obstacles = doc
        .obstacles
        .iter()
        .enumerate()
        .map(|(i, o)| obstacle(i, o))
        .collect::<Result<Vec<_>, _>>()?;

    let n = doc.pursuer_starts_m.len();
    let pursuer_radii = match doc.pursuer_radii_m.as_slice() {
        [] => vec![PAPER_SAFETY_RADIUS; n],
        [r] if n != 1 => vec![*r; n],
        rs => rs.to_vec(),
    };
    let scenario = Scenario {
        pursuer_starts: doc.pursuer_starts_m.iter().copied().map(pt).collect(),
        evader_start: pt(doc.evader_start_m),
        obstacles,
        pursuer_radii,
        evader_radius: doc.evader_radius_m,
        capture_radius: doc.capture_radius_m,
        pursuer_limits: limits(&doc.pursuer_limits),
        evader_limits: limits(&doc.evader_limits),
        dt: doc.dt_s,
        max_time: doc.max_time_s,
        dynamics,
        shrink,
        evader_policy,
        pursuer_policy,
        evader_obstacle_aware: doc.evader_obstacle_aware,
        evader_work_radius: doc.evader_work_radius_m,
        mpc,
        arena,
        forest,
        seed: doc.seed,
    };
    scenario.validate().map_err(|e| invalid(text, e))?;
    Ok(scenario)
}

/// Serializes a scenario; [`parse_scenario`] of the output gives back an
/// identical scenario.
pub fn serialize_scenario(s: &Scenario) -> Result<String, ConfigError> {
    let doc = ScenarioDoc {
        pursuer_starts_m: s.pursuer_starts.iter().copied().map(xy).collect(),
        evader_start_m: xy(s.evader_start),
        pursuer_radii_m: s.pursuer_radii.clone(),
        evader_radius_m: s.evader_radius,
        capture_radius_m: s.capture_radius,
        dt_s: s.dt,
        max_time_s: s.max_time,
        dynamics: match s.dynamics {
            DynamicsMode::Single => "single",
            DynamicsMode::Triple => "triple",
        }
        .into(),
        pursuer_policy: s.pursuer_policy.name().into(),
        evader_policy: match s.evader_policy {
            EvaderPolicy::VoronoiEscape => "voronoi-escape",
            EvaderPolicy::Scripted { .. } => "scripted",
        }
        .into(),
        evader_velocity_mps: match s.evader_policy {
            EvaderPolicy::Scripted { velocity } => Some(xy(velocity)),
            EvaderPolicy::VoronoiEscape => None,
        },
        evader_obstacle_aware: s.evader_obstacle_aware,
        evader_work_radius_m: s.evader_work_radius,
        seed: s.seed,
        pursuer_limits: limits_doc(&s.pursuer_limits),
        evader_limits: limits_doc(&s.evader_limits),
        shrink: Some(ShrinkDoc {
            mode: match s.shrink.mode {
                ShrinkMode::MinDisplacement => "min-displacement",
                ShrinkMode::FixedRate => "fixed-rate",
            }
            .into(),
            rate_mps: s.shrink.rate,
            floor_m: Some(s.shrink.floor),
        }),
        mpc: Some(MpcDoc {
            horizon_s: s.mpc.horizon,
            substeps: s.mpc.substeps,
            lambda_u: s.mpc.weights.lambda_u,
            lambda_p: s.mpc.weights.lambda_p,
        }),
        arena: s.arena.map(|a| ArenaDoc {
            min_m: xy(a.min),
            max_m: xy(a.max),
            boundary: match a.boundary {
                Boundary::Wall => "wall",
                Boundary::Exit => "exit",
            }
            .into(),
        }),
        forest: s.forest.as_ref().map(|f| ForestDoc {
            field_min_m: xy(f.field.min),
            field_max_m: xy(f.field.max),
            obstacle_count: f.obstacle_count,
            obstacle_radius_m: [f.obstacle_radius.0, f.obstacle_radius.1],
            obstacle_sides: [f.obstacle_sides.0, f.obstacle_sides.1],
            min_clearance_m: f.min_clearance,
            pursuer_count: f.pursuer_count,
            pursuer_box_min_m: xy(f.pursuer_box.min),
            pursuer_box_max_m: xy(f.pursuer_box.max),
            evader_box_min_m: xy(f.evader_box.min),
            evader_box_max_m: xy(f.evader_box.max),
            start_margin_m: f.start_margin,
        }),
        obstacles: s
            .obstacles
            .iter()
            .map(|o| ObstacleDoc {
                vertices_m: Some(o.hull().vertices().iter().copied().map(xy).collect()),
                center_m: None,
                radius_m: None,
                sides: None,
                rotation_rad: None,
            })
            .collect(),
    };
    Ok(toml::to_string(&doc)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAPER: &str = r#"
pursuer_starts_m = [[0.0, 0.0], [4.0, 0.0], [0.0, 4.0]]
evader_start_m = [2.0, 2.0]
pursuer_radii_m = [0.15]
evader_radius_m = 0.15
capture_radius_m = 1.0
dt_s = 0.1

[pursuer_limits]
v_max_mps = 1.0

[evader_limits]
v_max_mps = 0.9
"#;

    #[test]
    fn paper_defaults_parse() {
        let s = parse_scenario(PAPER).unwrap();
        assert_eq!(s.pursuer_radii, vec![0.15; 3]);
        assert_eq!(s.capture_radius, 1.0);
        assert_eq!(s.pursuer_limits.v_max, 1.0);
        assert_eq!(s.evader_limits.v_max, 0.9);
        assert_eq!(s.shrink.floor, 1.0);
        assert_eq!(s.max_time, 60.0);
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = PAPER.replace("dt_s = 0.1", "dt_s = 0.1\ncapture_radius = 2.0");
        match parse_scenario(&text) {
            Err(ConfigError::Syntax { line, message, .. }) => {
                assert_eq!(line, 8);
                assert!(message.contains("capture_radius"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_enum_reports_line() {
        let text = PAPER.replace("dt_s = 0.1", "dt_s = 0.1\ndynamics = \"quad\"");
        match parse_scenario(&text) {
            Err(ConfigError::Syntax { line, .. }) => assert_eq!(line, 8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn obstacles_by_vertices_or_radius() {
        let text = format!(
            "{PAPER}\n[[obstacles]]\nvertices_m = [[6.0, 6.0], [7.0, 6.0], [7.0, 7.0]]\n\n[[obstacles]]\ncenter_m = [-3.0, -3.0]\nradius_m = 0.5\n"
        );
        let s = parse_scenario(&text).unwrap();
        assert_eq!(s.obstacles.len(), 2);
        assert_eq!(s.obstacles[1].hull().len(), DEFAULT_OBSTACLE_SIDES);
        let bad = format!("{PAPER}\n[[obstacles]]\nradius_m = 0.5\n");
        assert!(matches!(
            parse_scenario(&bad),
            Err(ConfigError::Obstacle { index: 0, .. })
        ));
    }

    #[test]
    fn semantic_errors_point_at_their_key() {
        let text = PAPER.replace("[4.0, 0.0]", "[0.1, 0.0]");
        match parse_scenario(&text) {
            Err(ConfigError::Invalid { line, source }) => {
                assert_eq!(line, 2);
                assert!(matches!(source, ScenarioError::StartsOverlap { .. }), "{source}");
            }
            other => panic!("{other:?}"),
        }
        let text = PAPER.replace("dt_s = 0.1", "dt_s = -0.1");
        assert!(matches!(
            parse_scenario(&text),
            Err(ConfigError::Invalid { line: 7, .. })
        ));
    }
}
