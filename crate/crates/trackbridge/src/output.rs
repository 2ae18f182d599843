//! Text output: time-history tables and sparse matrix dumps.

use std::io::{self, Write};

use nalgebra::DMatrix;
use trackbridge_core::sim::TimeHistory;

/// Writes `# ` metadata lines, a `name [unit]` header row and one
/// comma-separated row per recorded instant, each value to 17 significant
/// digits.
pub fn write_history<W: Write>(out: &mut W, meta: &[String], history: &TimeHistory) -> io::Result<()> {
    for line in meta {
        for part in line.lines() {
            writeln!(out, "# {part}")?;
        }
    }
    write!(out, "time [s]")?;
    for col in &history.columns {
        write!(out, ",{} [{}]", col.name, col.unit)?;
    }
    writeln!(out)?;
    for (i, t) in history.times.iter().enumerate() {
        write!(out, "{t:.16e}")?;
        for col in &history.columns {
            write!(out, ",{:.16e}", col.values[i])?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Coordinate-format dump: `row col value` with 1-based indices, nonzero
/// entries only, row-major.
pub fn write_sparse<W: Write>(out: &mut W, m: &DMatrix<f64>) -> io::Result<()> {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            if v != 0.0 {
                writeln!(out, "{} {} {}", i + 1, j + 1, format_g17(v))?;
            }
        }
    }
    Ok(())
}

/// `printf("%.17g")`.
pub fn format_g17(v: f64) -> String {
    const P: i32 = 17;
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // The exponent after rounding to P digits decides between styles.
    let sci = format!("{:.*e}", (P - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..P).contains(&exp) {
        let fixed = format!("{:.*}", (P - 1 - exp) as usize, v);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use trackbridge_core::sim::Series;

    #[test]
    fn g17_matches_printf() {
        let cases = [
            (1.0, "1"),
            (-2.5, "-2.5"),
            (0.1, "0.10000000000000001"),
            (1e13, "10000000000000"),
            (1e17, "1e+17"),
            (1.5e-5, "1.5e-05"),
            (0.0001, "0.0001"),
            (123456789.0, "123456789"),
            (6.758e-8, "6.758e-08"), (1.0 / 3.0, "0.33333333333333331"),
            (-1.595e6, "-1595000"),
        ];
        for (v, want) in cases {
            assert_eq!(format_g17(v), want, "{v}");
        }
    }

    #[test]
    fn g17_round_trips() {
        for v in [std::f64::consts::PI, 1.0 / 3.0, 2.303e3 * 3.0 / 35.0, -7.1e-300, 9.87e250] {
            assert_eq!(format_g17(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn sparse_skips_zeros() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -3.0]);
        let mut buf = Vec::new();
        write_sparse(&mut buf, &m).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1 1 1\n2 2 -3\n");
    }

    #[test]
    fn history_layout() {
        let h = TimeHistory {
            times: vec![0.0, 0.5],
            columns: vec![Series {
                name: "body.acceleration".into(),
                unit: "m/s^2",
                values: vec![0.0, -1.25],
            }],
        };
        let mut buf = Vec::new();
        write_history(&mut buf, &["a = 1\nb = 2".into()], &h).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "# a = 1");
        assert_eq!(lines[1], "# b = 2");
        assert_eq!(lines[2], "time [s],body.acceleration [m/s^2]");
        assert_eq!(lines[4], "5.0000000000000000e-1,-1.2500000000000000e0");
    }
}
