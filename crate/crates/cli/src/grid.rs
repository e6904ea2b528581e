//! Parsers for list and range arguments: `a,b,c`, `lo:hi:step`, or a mix.

use std::str::FromStr;

fn split(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

/// Real-valued list. A `lo:hi:step` item expands to `lo + i·step` for every
/// `i` with `lo + i·step <= hi` (up to rounding).
pub fn parse_reals(s: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in split(s) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(real(x)?),
            [lo, hi, step] => {
                let (lo, hi, step) = (real(lo)?, real(hi)?, real(step)?);
                if step <= 0.0 || hi < lo {
                    return Err(format!("range `{item}` needs lo <= hi and step > 0"));
                }
                let n = ((hi - lo) / step + 1e-9).floor() as u64;
                if n > 100_000 {
                    return Err(format!("range `{item}` has too many points"));
                }
                out.extend((0..=n).map(|i| lo + i as f64 * step));
            }
            _ => return Err(format!("`{item}` is neither a number nor lo:hi:step")),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

fn real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// Integer list; ranges are `lo:hi` or `lo:hi:step`, inclusive.
pub fn parse_counts(s: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for item in split(s) {
        let parts: Vec<&str> = item.split(':').collect();
        let int = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("`{t}` is not a non-negative integer"))
        };
        match parts.as_slice() {
            [x] => out.push(int(x)?),
            [lo, hi] | [lo, hi, _] => {
                let step = if parts.len() == 3 { int(parts[2])? } else { 1 };
                let (lo, hi) = (int(lo)?, int(hi)?);
                if step == 0 || hi < lo {
                    return Err(format!("range `{item}` needs lo <= hi and step > 0"));
                }
                out.extend((lo..=hi).step_by(step as usize));
            }
            _ => return Err(format!("`{item}` is neither an integer nor lo:hi[:step]")),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

/// List of enumerated names; `all` expands to `every`. Duplicates are dropped
/// keeping first occurrence.
pub fn parse_names<T>(s: &str, every: &[T]) -> Result<Vec<T>, String>
where
    T: FromStr + Copy + PartialEq,
    T::Err: std::fmt::Display,
{
    let mut out: Vec<T> = Vec::new();
    for item in split(s) {
        let batch = if item.eq_ignore_ascii_case("all") {
            every.to_vec()
        } else {
            vec![item.parse::<T>().map_err(|e| e.to_string())?]
        };
        for v in batch {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}
