//! Batch study tables.

use std::io::Write;

use super::trace::format_sig;
use crate::engine::BatchStats;

pub const TRIALS_HEADER: [&str; 12] = [
    "policy",
    "obstacles",
    "trial",
    "seed",
    "outcome",
    "t_e_s",
    "t_c_s",
    "d_mo_m",
    "d_mp_m",
    "safety_violations",
    "infeasible_ticks",
    "ticks",
];

pub const SUMMARY_HEADER: [&str; 13] = [
    "policy",
    "obstacles",
    "trials",
    "captures",
    "success_rate",
    "encircled_first",
    "t_c_median_s",
    "t_c_min_s",
    "t_c_max_s",
    "min_d_mo_m",
    "mean_d_mo_m",
    "min_d_mp_m",
    "mean_d_mp_m",
];

fn num(x: f64) -> String {
    format_sig(x, 9)
}

fn opt(x: Option<f64>) -> String {
    x.map_or(String::new(), num)
}

/// One row per trial, for each `(obstacle count, stats)` group in order.
pub fn write_trials_csv<W: Write>(groups: &[(usize, BatchStats)], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(out);
    w.write_record(TRIALS_HEADER)?;
    for (obstacles, stats) in groups {
        for (i, r) in stats.results.iter().enumerate() {
            w.write_record([
                stats.policy.name().to_string(),
                obstacles.to_string(),
                i.to_string(),
                r.seed.to_string(),
                r.outcome.name().to_string(),
                opt(r.t_e),
                opt(r.t_c),
                num(r.d_mo),
                num(r.d_mp),
                r.safety_violations.to_string(),
                r.infeasible_ticks.to_string(),
                r.ticks.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One aggregate row per `(obstacle count, stats)` group.
pub fn write_summary_csv<W: Write>(groups: &[(usize, BatchStats)], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for (obstacles, s) in groups {
        w.write_record([
            s.policy.name().to_string(),
            obstacles.to_string(),
            s.trials.to_string(),
            s.captures.to_string(),
            num(s.success_rate),
            s.encircled_first.to_string(),
            opt(s.t_c.map(|q| q.median)),
            opt(s.t_c.map(|q| q.min)),
            opt(s.t_c.map(|q| q.max)),
            num(s.min_d_mo),
            num(s.mean_d_mo),
            num(s.min_d_mp),
            num(s.mean_d_mp),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Outcome, PursuerPolicy, TrialSummary};

    fn stats() -> BatchStats {
        let trial = |seed, outcome, t_c| TrialSummary {
            seed,
            outcome,
            t_e: Some(1.0),
            t_c,
            d_mo: f64::INFINITY,
            d_mp: 0.5,
            safety_violations: 0,
            infeasible_ticks: 2,
            ticks: 30,
        };
        BatchStats::from_results(
            PursuerPolicy::Greedy,
            vec![
                trial(7, Outcome::Captured, Some(2.5)),
                trial(8, Outcome::Timeout, None),
            ],
        )
    }

    #[test]
    fn trial_rows() {
        let mut buf = Vec::new();
        write_trials_csv(&[(3, stats())], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.split("\r\n").collect();
        assert_eq!(lines[0], TRIALS_HEADER.join(","));
        assert_eq!(lines[1], "greedy,3,0,7,captured,1,2.5,inf,0.5,0,2,30");
        assert_eq!(lines[2], "greedy,3,1,8,timeout,1,,inf,0.5,0,2,30");
    }

    #[test]
    fn summary_row() {
        let mut buf = Vec::new();
        write_summary_csv(&[(0, stats())], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.split("\r\n").nth(1).unwrap(),
            "greedy,0,2,1,0.5,1,2.5,2.5,2.5,inf,inf,0.5,0.5"
        );
    }
}
