//! Multi-pursuer, single-evader pursuit with obstacle-aware, evader-centred
//! buffered Voronoi cells.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: convex polygon kernel (clipping, moments, hulls, distances).
//! * [`cells`]: bounding region, bisector and obstacle half-planes, the
//!   separating-hyperplane QP and per-agent cell construction.
//! * [`strategy`]: encirclement/capture detection, region shrinking and the
//!   velocity-level pursuer, evader and greedy baseline policies.
//! * [`dynamics`]: single- and triple-integrator propagation and the
//!   motion-primitive MPC.
//! * [`engine`]: scenarios, the synchronous simulation loop, forest
//!   generation, safety metrics and batch studies.
//! * [`io`]: scenario documents, trace CSV and SVG rendering.
//!
//! See the `examples/` directory for one runnable program per capability.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cells;
pub mod dynamics;
pub mod engine;
pub mod geometry;
pub mod io;
pub mod strategy;
