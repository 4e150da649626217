//! Number formatting and output helpers shared by the CSV writers.

use std::fs;
use std::path::Path;

use crate::error::Result;

/// Rounds to 10 significant digits and prints the shortest decimal that
/// reads back to the rounded value.
pub fn sig(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.9e}").parse().unwrap_or(x);
    if rounded == 0.0 {
        return "0".into();
    }
    let a = rounded.abs();
    if (1e-6..1e15).contains(&a) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

/// Full-precision form used for phase vectors and path parameters.
pub fn full(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `content` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(10.0), "10");
        assert_eq!(sig(-2.5), "-2.5");
        assert_eq!(sig(1.0 / 3.0), "0.3333333333");
        assert_eq!(sig(123456.789012345), "123456.789");
        assert_eq!(sig(2.0e-9), "2e-9");
        assert_eq!(sig(0.0), "0");
        assert_eq!(sig(f64::NAN), "nan");
    }

    #[test]
    fn full_precision_roundtrips() {
        let x = std::f64::consts::PI / 7.0;
        assert_eq!(full(x).parse::<f64>().unwrap(), x);
    }
}
