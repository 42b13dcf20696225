//! Per-tick, per-agent trace export.

use std::io::Write;

use crate::engine::SimResult;

pub const TRACE_HEADER: [&str; 11] = [
    "time_s",
    "agent_id",
    "role",
    "x_m",
    "y_m",
    "vx",
    "vy",
    "phase",
    "cell_feasible",
    "d_e",
    "d_c",
];

/// `%.{digits}g`-style formatting: `digits` significant digits, trailing
/// zeros dropped, exponent form outside `[1e-4, 10^digits)`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn num(x: f64) -> String {
    format_sig(x, 9)
}

/// Writes one row per (tick, agent): pursuers `0..n` then the evader with
/// id `n`. The evader's `cell_feasible` column is left empty.
pub fn write_trace_csv<W: Write>(result: &SimResult, out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for snap in &result.trace {
        let n = snap.pursuers.len();
        let agents = snap
            .pursuers
            .iter()
            .enumerate()
            .map(|(i, s)| (i, "pursuer", s, Some(snap.cell_feasible[i])))
            .chain(std::iter::once((n, "evader", &snap.evader, None)));
        for (id, role, state, feasible) in agents {
            w.write_record([
                num(snap.time),
                id.to_string(),
                role.to_string(),
                num(state.p.x),
                num(state.p.y),
                num(state.v.x),
                num(state.v.y),
                snap.phase.name().to_string(),
                feasible.map_or(String::new(), |f| f.to_string()),
                num(snap.d_e),
                num(snap.d_c),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn trace_csv_string(result: &SimResult) -> String {
    let mut buf = Vec::new();
    write_trace_csv(result, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.1, 9), "0.1");
        assert_eq!(format_sig(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(format_sig(12345.678912345, 9), "12345.6789");
        assert_eq!(format_sig(-2.5, 9), "-2.5");
        assert_eq!(format_sig(1.5e-7, 9), "1.5e-07");
        assert_eq!(format_sig(1.0e12, 9), "1e+12");
        assert_eq!(format_sig(9.9999999999, 9), "10");
        assert_eq!(format_sig(f64::INFINITY, 9), "inf");
        assert_eq!(format_sig(0.0, 9), "0");
        assert_eq!(format_sig(-0.0, 9), "0");
    }
}
