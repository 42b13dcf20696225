//! Success rate of the cell-based pursuers against straight-line pursuit as
//! the number of obstacles grows.
//!
//! Usage: `cargo run --release --example batch_study [trials]`

use voronoi_pursuit::engine::{run_batch, Arena, Boundary, ForestParams, PursuerPolicy, Scenario};
use voronoi_pursuit::geometry::Point2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trials: usize = std::env::args().nth(1).map_or(Ok(20), |s| s.parse())?;
    let mut base = Scenario::with_defaults(vec![], Point2::new(10.0, 10.0));
    base.arena = Some(Arena {
        min: Point2::new(0.1, 0.1),
        max: Point2::new(19.9, 19.9),
        boundary: Boundary::Wall,
    });

    println!(
        "{:>9} {:>9} {:>8} {:>10} {:>10}",
        "obstacles", "policy", "success", "median t_c", "violations"
    );
    for m in [0, 8, 16, 24] {
        base.forest = Some(ForestParams::reference(4, m));
        for policy in [PursuerPolicy::OaEcbvc, PursuerPolicy::Greedy] {
            let s = run_batch(&base, trials, 3000, policy)?;
            let median = s.t_c.map_or("-".into(), |q| format!("{:.1} s", q.median));
            println!(
                "{m:>9} {:>9} {:>8.3} {median:>10} {:>10}",
                policy.name(),
                s.success_rate,
                s.safety_violations
            );
        }
    }
    Ok(())
}
