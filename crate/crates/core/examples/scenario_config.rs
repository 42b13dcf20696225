//! Scenario documents: parse, inspect, serialize, and see what a bad
//! document reports.

use voronoi_pursuit::io::{parse_scenario, serialize_scenario};

const DOC: &str = r#"
pursuer_starts_m = [[0.0, -0.8], [0.0, 0.8], [-1.0, 0.0]]
evader_start_m = [3.0, 0.0]
pursuer_radii_m = [0.3]
evader_radius_m = 0.3
capture_radius_m = 1.0
dt_s = 0.25

[pursuer_limits]
v_max_mps = 0.3

[evader_limits]
v_max_mps = 0.2
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = parse_scenario(DOC)?;
    println!(
        "{} pursuers, dt {} s, v_p {} m/s, v_e {} m/s",
        scenario.pursuer_count(),
        scenario.dt,
        scenario.pursuer_limits.v_max,
        scenario.evader_limits.v_max
    );
    let text = serialize_scenario(&scenario)?;
    assert_eq!(parse_scenario(&text)?, scenario);
    println!("round trip ok ({} bytes)", text.len());

    let typo = DOC.replace("dt_s", "dt_seconds");
    match parse_scenario(&typo) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    let overlap = DOC.replace("[0.0, 0.8]", "[0.0, -0.6]");
    match parse_scenario(&overlap) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
