//! Parsers for the textual parameter forms accepted on the command line.

use crate::error::{Error, Result};

/// Hard ceiling on the number of values a range or grid may expand to.
pub const MAX_EXPANSION: usize = 100_000;

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|e| bad(format!("{what} {s:?}: {e}")))
}

fn parse_real(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|e| bad(format!("number {s:?}: {e}")))?;
    if !v.is_finite() {
        return Err(bad(format!("number {s:?} is not finite")));
    }
    Ok(v)
}

/// `"A"`, `"A:B"` or `"A:B:step"`, inclusive of both ends.
pub fn parse_n_range(text: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = text.split(':').collect();
    let (a, b, step) = match parts.as_slice() {
        [a] => {
            let a = parse_usize(a, "start")?;
            (a, a, 1)
        }
        [a, b] => (parse_usize(a, "start")?, parse_usize(b, "end")?, 1),
        [a, b, s] => (parse_usize(a, "start")?, parse_usize(b, "end")?, parse_usize(s, "step")?),
        _ => return Err(bad(format!("range {text:?}: expected A:B:step"))),
    };
    if step == 0 {
        return Err(bad("range step must be positive"));
    }
    if a == 0 {
        return Err(bad("range must start at 1 or above"));
    }
    if b < a {
        return Err(bad(format!("range {text:?} is empty")));
    }
    if (b - a) / step >= MAX_EXPANSION {
        return Err(bad(format!("range {text:?} expands past {MAX_EXPANSION} values")));
    }
    Ok((a..=b).step_by(step).collect())
}

/// Comma-separated reals, or `"lo:hi:count"` for `count` evenly spaced values.
pub fn parse_real_grid(text: &str) -> Result<Vec<f64>> {
    let t = text.trim();
    if t.is_empty() {
        return Err(bad("empty grid"));
    }
    if t.contains(':') {
        let parts: Vec<&str> = t.split(':').collect();
        let [lo, hi, count] = parts.as_slice() else {
            return Err(bad(format!("grid {text:?}: expected lo:hi:count")));
        };
        let (lo, hi) = (parse_real(lo)?, parse_real(hi)?);
        let count = parse_usize(count, "count")?;
        if count == 0 || count > MAX_EXPANSION {
            return Err(bad(format!("grid count must lie in 1..={MAX_EXPANSION}")));
        }
        if hi < lo {
            return Err(bad(format!("grid {text:?} has hi < lo")));
        }
        if count == 1 {
            return Ok(vec![lo]);
        }
        return Ok((0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect());
    }
    let out = t.split(',').map(parse_real).collect::<Result<Vec<_>>>()?;
    if out.len() > MAX_EXPANSION {
        return Err(bad("grid too long"));
    }
    Ok(out)
}
