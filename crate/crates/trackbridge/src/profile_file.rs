//! Two-column rail irregularity tables.
//!
//! One `position ordinate` pair per line, whitespace separated, SI units.
//! Blank lines and lines starting with `#` are skipped. Positions must start
//! at 0 and be uniformly spaced.

use std::path::Path;

use trackbridge_core::irregularity::Profile;

use crate::{Error, Result};

pub fn load(path: &Path) -> Result<Profile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, path)
}

pub fn parse(text: &str, path: &Path) -> Result<Profile> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |msg: &str| Error::parse(path, format!("line {}: {msg}", lineno + 1));
        let mut cols = line.split_whitespace();
        let (Some(x), Some(y), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(at("expected two columns"));
        };
        let x: f64 = x.parse().map_err(|_| at("position is not a number"))?;
        let y: f64 = y.parse().map_err(|_| at("ordinate is not a number"))?;
        xs.push((x, lineno + 1));
        ys.push(y);
    }
    if xs.len() < 4 {
        return Err(Error::parse(path, format!("need at least 4 samples, found {}", xs.len())));
    }
    let h = xs[1].0 - xs[0].0;
    if xs[0].0.abs() > 1e-9 * h.abs().max(1.0) {
        return Err(Error::parse(path, format!("line {}: first position must be 0", xs[0].1)));
    }
    if h <= 0.0 {
        return Err(Error::parse(path, "positions must increase"));
    }
    for (i, &(x, line)) in xs.iter().enumerate() {
        if (x - i as f64 * h).abs() > 1e-6 * h {
            return Err(Error::parse(path, format!("line {line}: positions must be uniformly spaced by {h}")));
        }
    }
    Ok(Profile::sampled(h, ys)?)
}

pub fn write(profile_spacing: f64, ordinates: &[f64], out: &mut impl std::io::Write) -> std::io::Result<()> {
    writeln!(out, "# position [m]  ordinate [m]")?;
    for (i, y) in ordinates.iter().enumerate() {
        writeln!(out, "{:.16e} {:.16e}", i as f64 * profile_spacing, y)?;
    }
    Ok(())
}
