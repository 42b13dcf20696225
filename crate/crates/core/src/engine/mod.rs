//! Scenarios, the synchronous simulation loop, forest generation, safety
//! metrics and batch studies.

pub mod batch;
pub mod forest;
pub mod metrics;
pub mod scenario;
pub mod sim;

pub use batch::{run_batch, trial_scenario, BatchError, BatchStats, Quantiles, TrialSummary};
pub use forest::{generate_forest_scenario, ForestError, ForestParams, SampleBox, PLACEMENT_BUDGET};
pub use metrics::{compute_safety_metrics, tick_distances, TickDistances};
pub use scenario::{
    Arena, Boundary, DynamicsMode, EvaderPolicy, MpcSettings, PursuerPolicy, Scenario, ScenarioError,
};
pub use sim::{
    admissible_fraction, run_simulation, safe_displacement, Outcome, Phase, SimResult, Snapshot,
    MOTION_MARGIN,
};
