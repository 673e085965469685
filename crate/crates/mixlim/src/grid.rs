//! Regime maps over a rectangular `(gamma1, gamma2)` grid.

use std::io::{self, Write};
use std::str::FromStr;

use mixlim_core::regimes::{classify, RegimeReport};

use crate::output::num;

/// `a:b:step`, the values `a + i*step` up to `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:step, got '{s}'"));
        }
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
        let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(format!("range '{s}' is not finite"));
        }
        if !(step > 0.0) {
            return Err(format!("step must be positive in '{s}'"));
        }
        if !(stop > start) || step > stop - start {
            return Err(format!("range '{s}' is empty"));
        }
        Ok(Range { start, stop, step })
    }
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let limit = self.stop + 1e-9 * self.step;
        (0..)
            .map(|i| self.start + i as f64 * self.step)
            .take_while(|&v| v <= limit)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub gamma1: f64,
    pub gamma2: f64,
    pub report: RegimeReport,
}

impl Cell {
    /// Zone label, with 0 for boundary cells and points outside the zone map.
    pub fn zone(&self) -> u8 {
        if self.report.is_interior() {
            self.report.zone.unwrap_or(0)
        } else {
            0
        }
    }
}

/// Cells in row-major order, `gamma1` outer.
pub fn phase_grid(alpha: f64, g1: &Range, g2: &Range) -> Vec<Cell> {
    let g2_values = g2.values();
    g1.values()
        .into_iter()
        .flat_map(|a| {
            g2_values.iter().map(move |&b| Cell {
                gamma1: a,
                gamma2: b,
                report: classify(alpha, a, b),
            })
        })
        .collect()
}

pub fn write_csv<W: Write + ?Sized>(w: &mut W, cells: &[Cell]) -> io::Result<()> {
    writeln!(w, "gamma1,gamma2,zone,fluctuation,lln")?;
    for c in cells {
        writeln!(
            w,
            "{},{},{},{},{}",
            num(c.gamma1),
            num(c.gamma2),
            c.zone(),
            c.report.fluctuation.as_str(),
            c.report.lln.as_str()
        )?;
    }
    Ok(())
}
