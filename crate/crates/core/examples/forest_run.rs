//! One seeded run in a random forest, written out as a trace CSV and an SVG.
//!
//! Usage: `cargo run --example forest_run [seed] [out_dir]`

use std::fs;
use std::path::PathBuf;

use voronoi_pursuit::engine::{
    generate_forest_scenario, run_simulation, Arena, Boundary, ForestParams, Scenario,
};
use voronoi_pursuit::geometry::Point2;
use voronoi_pursuit::io::{render_svg, trace_csv_string, SvgOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(Ok(2000), |s| s.parse())?;
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out/forest_run".into()));

    let mut template = Scenario::with_defaults(vec![], Point2::new(10.0, 10.0));
    template.arena = Some(Arena {
        min: Point2::new(0.1, 0.1),
        max: Point2::new(19.9, 19.9),
        boundary: Boundary::Wall,
    });
    let params = ForestParams::reference(4, 16);
    let scenario = generate_forest_scenario(&template, &params, seed)?;
    let result = run_simulation(&scenario)?;

    println!(
        "seed {seed}: {} at t_c {:?}, encircled at {:?}",
        result.outcome.name(),
        result.t_c,
        result.t_e
    );
    println!(
        "closest approach: obstacles {:.3} m, pursuer pairs {:.3} m, violations {}",
        result.d_mo, result.d_mp, result.safety_violations
    );
    fs::create_dir_all(&out)?;
    fs::write(out.join("trace.csv"), trace_csv_string(&result))?;
    fs::write(out.join("run.svg"), render_svg(&result, &SvgOptions::default()))?;
    println!("wrote {}", out.display());
    Ok(())
}
