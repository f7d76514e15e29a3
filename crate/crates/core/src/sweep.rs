//! Order parameter over a regular grid on the probability simplex.
//!
//! Grid points are `counts / R` with non-negative integer `counts` summing to
//! the resolution `R`. They are visited in descending lexicographic order of
//! `counts`, starting at `(R, 0, …, 0)`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::branching::BranchingData;
use crate::channels::SectorState;
use crate::entropy::{order_parameter, LogBase};
use crate::error::{Error, Result};

pub const MAX_GRID_POINTS: u64 = 10_000_000;

/// Maxima closer than this to the running maximum keep the earlier argmax.
const ARGMAX_TIE: f64 = 1e-12;

/// `C(R + k − 1, k − 1)`, or `None` on overflow.
pub fn grid_size(sectors: usize, resolution: u32) -> Option<u64> {
    if sectors == 0 {
        return Some(0);
    }
    let r = u64::from(resolution);
    let k = sectors as u64 - 1;
    let mut acc: u64 = 1;
    for i in 1..=k.min(r) {
        // acc = C(max(r, k) + i, i), integral at every step
        acc = acc.checked_mul(r.max(k) + i)?;
        acc /= i;
    }
    Some(acc)
}

/// Compositions of `resolution` into `sectors` parts, in sweep order.
#[derive(Debug, Clone)]
pub struct SimplexGrid {
    counts: Vec<u32>,
    done: bool,
}

impl SimplexGrid {
    pub fn new(sectors: usize, resolution: u32) -> Self {
        let mut counts = vec![0; sectors];
        if let Some(first) = counts.first_mut() {
            *first = resolution;
        }
        SimplexGrid {
            done: sectors == 0,
            counts,
        }
    }
}

impl Iterator for SimplexGrid {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let current = self.counts.clone();
        let k = self.counts.len();
        // Move one unit from the rightmost movable position to its neighbour
        // and collect everything after it there.
        match (0..k.saturating_sub(1)).rev().find(|&i| self.counts[i] > 0) {
            Some(i) => {
                let tail: u32 = self.counts[i + 1..].iter().sum();
                self.counts[i] -= 1;
                for c in &mut self.counts[i + 1..] {
                    *c = 0;
                }
                self.counts[i + 1] = tail + 1;
            }
            None => self.done = true,
        }
        Some(current)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub probs: Vec<f64>,
    pub order_parameter: f64,
    pub bound: f64,
    pub formula_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub points: u64,
    pub max_order_parameter: f64,
    pub argmax: Vec<f64>,
    pub bound: f64,
    pub log_base: LogBase,
}

/// Evaluates every grid point and hands each row to `on_row` in sweep order.
pub fn sweep(
    b: &BranchingData,
    resolution: u32,
    base: LogBase,
    mut on_row: impl FnMut(&SweepRow) -> Result<()>,
) -> Result<SweepSummary> {
    let k = b.source().len();
    if resolution == 0 {
        return Err(Error::malformed("grid_resolution", "must be ≥ 1"));
    }
    match grid_size(k, resolution) {
        Some(n) if n <= MAX_GRID_POINTS => {}
        size => return Err(Error::SearchTooLarge(format!(
            "{} grid points for {k} sectors at resolution {resolution}, cap is {MAX_GRID_POINTS}",
            size.map_or_else(|| "more than 2^64".to_owned(), |n| n.to_string())
        ))),
    }

    let r = f64::from(resolution);
    let mut points = 0;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut bound = 0.0;
    for counts in SimplexGrid::new(k, resolution) {
        let probs: Vec<f64> = counts.iter().map(|&c| f64::from(c) / r).collect();
        let rho = SectorState::from_parts(b.source().clone(), probs);
        let report = order_parameter(b, &rho, base)?;
        let row = SweepRow {
            probs: rho.probs().to_vec(),
            order_parameter: report.order_parameter,
            bound: report.bound,
            formula_residual: report.formula_residual,
        };
        bound = report.bound;
        points += 1;
        if best
            .as_ref()
            .is_none_or(|(m, _)| row.order_parameter > m + ARGMAX_TIE)
        {
            best = Some((row.order_parameter, row.probs.clone()));
        }
        on_row(&row)?;
    }
    let (max_order_parameter, argmax) = best.expect("resolution ≥ 1 gives at least one point");
    Ok(SweepSummary {
        points,
        max_order_parameter,
        argmax,
        bound,
        log_base: base,
    })
}

/// Collects the rows as well as the summary.
pub fn sweep_rows(
    b: &BranchingData,
    resolution: u32,
    base: LogBase,
) -> Result<(Vec<SweepRow>, SweepSummary)> {
    let mut rows = Vec::new();
    let summary = sweep(b, resolution, base, |row| {
        rows.push(row.clone());
        Ok(())
    })?;
    Ok((rows, summary))
}

fn io_error(e: std::io::Error) -> Error {
    Error::Io {
        path: "<csv output>".into(),
        source: e,
    }
}

/// Writes the sweep as CSV.
///
/// Columns: one per source label, then `S`, `bound`, `residual`. The final
/// line is a comment `# max_S=…,argmax=…,bound=…` with `argmax` entries joined
/// by `;`.
pub fn write_csv(
    b: &BranchingData,
    resolution: u32,
    base: LogBase,
    mut out: impl Write,
) -> Result<SweepSummary> {
    let mut header = b.source().label_names();
    header.extend(["S".to_owned(), "bound".to_owned(), "residual".to_owned()]);
    writeln!(out, "{}", header.join(",")).map_err(io_error)?;
    let summary = sweep(b, resolution, base, |row| {
        let mut fields: Vec<String> = row.probs.iter().map(f64::to_string).collect();
        fields.push(row.order_parameter.to_string());
        fields.push(row.bound.to_string());
        fields.push(row.formula_residual.to_string());
        writeln!(out, "{}", fields.join(",")).map_err(io_error)
    })?;
    let argmax: Vec<String> = summary.argmax.iter().map(f64::to_string).collect();
    writeln!(
        out,
        "# max_S={},argmax={},bound={}",
        summary.max_order_parameter,
        argmax.join(";"),
        summary.bound
    )
    .map_err(io_error)?;
    Ok(summary)
}
