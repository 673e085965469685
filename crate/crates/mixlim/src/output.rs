//! CSV and JSON writers.
//!
//! CSV always carries a header row, uses LF line endings and prints numbers
//! with 17 significant digits so equal values give equal bytes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// `x` with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn write_values_csv<W: Write + ?Sized>(w: &mut W, values: &[f64]) -> io::Result<()> {
    writeln!(w, "replicate,value")?;
    for (k, v) in values.iter().enumerate() {
        writeln!(w, "{},{}", k, num(*v))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ValuesJson<'a> {
    schema: u32,
    n: u64,
    values: &'a [f64],
}

pub fn write_values_json<W: Write + ?Sized>(w: &mut W, n: u64, values: &[f64]) -> io::Result<()> {
    serde_json::to_writer_pretty(
        &mut *w,
        &ValuesJson {
            schema: 1,
            n,
            values,
        },
    )
    .map_err(io::Error::other)?;
    writeln!(w)
}

pub fn write_json<W: Write + ?Sized, T: Serialize>(w: &mut W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(io::Error::other)?;
    writeln!(w)
}

/// Create `path` and fill it through `body`, attaching the path to errors.
pub fn write_file<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> io::Result<()>,
{
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_values_csv(&mut buf, &[1.0, -0.1]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(
            s,
            "replicate,value\n0,1.0000000000000000e0\n1,-1.0000000000000001e-1\n"
        );
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for &x in &[0.1, 1.0 / 3.0, 123456.789e-200, -2.5e300] {
            let back: f64 = num(x).parse().unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn json_has_schema() {
        let mut buf = Vec::new();
        write_values_json(&mut buf, 10, &[0.5]).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["values"][0], 0.5);
    }
}
