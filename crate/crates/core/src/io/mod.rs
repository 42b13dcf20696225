//! Scenario documents, trace CSV, batch tables and SVG rendering.

pub mod config;
pub mod report;
pub mod svg;
pub mod trace;

pub use config::{parse_scenario, serialize_scenario, ConfigError};
pub use report::{write_summary_csv, write_trials_csv, SUMMARY_HEADER, TRIALS_HEADER};
pub use svg::{render_svg, SvgOptions};
pub use trace::{format_sig, trace_csv_string, write_trace_csv, TRACE_HEADER};
