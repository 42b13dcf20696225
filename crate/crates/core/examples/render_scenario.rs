//! Loads a scenario document, runs it and renders the cells at a chosen tick.
//!
//! Usage: `cargo run --example render_scenario <scenario.toml> [tick] [out.svg]`

use std::fs;

use voronoi_pursuit::engine::{run_simulation, trial_scenario};
use voronoi_pursuit::io::{parse_scenario, render_svg, SvgOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/examples/scenarios/paper_defaults.toml"
        )
        .into()
    });
    let tick: Option<usize> = args.next().map(|s| s.parse()).transpose()?;
    let out = args.next().unwrap_or_else(|| "run.svg".into());

    let base = parse_scenario(&fs::read_to_string(&path)?)?;
    let scenario = trial_scenario(&base, base.seed, 0, base.pursuer_policy)?;
    let result = run_simulation(&scenario)?;
    let options = SvgOptions {
        cells_at: tick,
        ..SvgOptions::default()
    };
    fs::write(&out, render_svg(&result, &options))?;
    println!(
        "{}: {} after {} ticks, wrote {out}",
        path,
        result.outcome.name(),
        result.trace.len()
    );
    Ok(())
}
