//! Value parsers for command-line flags.

use parrondo::exact::Params;
use parrondo::lattice::LatticeDims;

/// A probability written as a decimal or a fraction such as `8/13`.
pub fn probability(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let num = integer_or_decimal(a)?;
            let den = integer_or_decimal(b)?;
            if den == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            num / den
        }
        None => integer_or_decimal(s)?,
    };
    if !(0.0..=1.0).contains(&v) {
        return Err(format!("{s:?} is not a probability in [0, 1]"));
    }
    Ok(v)
}

fn integer_or_decimal(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Ok(i) = s.parse::<i64>() {
        return Ok(i as f64);
    }
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("cannot read {s:?} as a number"))
}

/// Five comma-separated probabilities.
pub fn params(s: &str) -> Result<Params<f64>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        return Err(format!(
            "expected 5 comma-separated probabilities, got {}",
            parts.len()
        ));
    }
    let mut p = [0.0; 5];
    for (slot, part) in p.iter_mut().zip(parts) {
        *slot = probability(part)?;
    }
    Ok(Params(p))
}

/// A nonnegative integer count, also accepting scientific notation (`1e9`).
pub fn count(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| format!("cannot read {s:?} as a count"))?;
    if v >= 0.0 && v.fract() == 0.0 && v <= 9.007_199_254_740_992e15 {
        Ok(v as u64)
    } else {
        Err(format!("{s:?} is not a nonnegative integer"))
    }
}

pub fn dims(s: &str) -> Result<LatticeDims, String> {
    s.parse().map_err(|e: parrondo::Error| e.to_string())
}

pub fn dims_list(s: &str) -> Result<Vec<LatticeDims>, String> {
    s.split(',').map(dims).collect()
}

/// `p0=0.1,p4=9/10` style assignments of fixed coordinates.
pub fn assignments(s: &str) -> Result<Vec<(usize, f64)>, String> {
    s.split(',')
        .map(|part| {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected pM=value, got {part:?}"))?;
            Ok((coordinate(name)?, probability(value)?))
        })
        .collect()
}

/// `p0`..`p4` to its index.
pub fn coordinate(s: &str) -> Result<usize, String> {
    match s.trim() {
        "p0" => Ok(0),
        "p1" => Ok(1),
        "p2" => Ok(2),
        "p3" => Ok(3),
        "p4" => Ok(4),
        other => Err(format!("unknown coordinate {other:?} (p0..p4)")),
    }
}

pub fn coordinates(s: &str) -> Result<Vec<usize>, String> {
    s.split(',').map(coordinate).collect()
}
