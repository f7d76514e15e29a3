//! Exhaustive search for integer branching matrices with a prescribed algebra.
//!
//! Condensed sectors other than the vacuum are interchangeable, so a solution
//! is a multiset of `(d_t, column)` pairs. Columns are generated once, sorted,
//! and combined in non-decreasing order; each multiset is therefore visited
//! exactly once and the output is already canonical.

use std::sync::Arc;

use crate::branching::{BranchingData, CondensableAlgebraView};
use crate::error::{Error, Result};
use crate::system::{AnyonSystem, Tolerance};

/// Non-vacuum condensed sector: integer dimension and its column of `n`.
pub type Column = (u32, Vec<u32>);

/// Label of the condensed vacuum in enumerated systems.
pub const CONDENSED_VACUUM: &str = "phi";

pub fn enumerate_branchings(
    source: impl Into<Arc<AnyonSystem>>,
    algebra: &CondensableAlgebraView,
    max_sectors: usize,
    max_dim: u32,
) -> Result<Vec<BranchingData>> {
    let source = source.into();
    if max_sectors == 0 || max_dim == 0 {
        return Err(Error::malformed(
            "bounds",
            "max_sectors and max_dim must be ≥ 1",
        ));
    }
    let dims = integer_dims(&source)?;
    let vacuum_column = CondensableAlgebraView::new(&source, algebra.coefficients().to_vec())?
        .coefficients()
        .to_vec();

    if let Some(twist) = source.twist() {
        if vacuum_column
            .iter()
            .zip(twist)
            .any(|(&v, t)| v > 0 && !t.is_integer())
        {
            return Ok(Vec::new());
        }
    }

    let mut residual = Vec::with_capacity(dims.len());
    for (&d, &v) in dims.iter().zip(&vacuum_column) {
        match d.checked_sub(u64::from(v)) {
            Some(r) => residual.push(r),
            None => return Ok(Vec::new()),
        }
    }
    let index: u64 = dims
        .iter()
        .zip(&vacuum_column)
        .map(|(d, &v)| d * u64::from(v))
        .sum();

    let candidates = candidate_columns(&dims, &residual, source.vacuum(), index, max_dim);
    let mut solutions = Vec::new();
    let mut chosen = Vec::new();
    search(
        &candidates,
        0,
        &mut residual,
        max_sectors - 1,
        &mut chosen,
        &mut solutions,
    );
    // Multisets are emitted in depth-first order; sort into lexicographic order.
    solutions.sort();

    let tol = Tolerance::DEFAULT;
    let mut out = Vec::with_capacity(solutions.len());
    for columns in solutions {
        let b = assemble(&source, &vacuum_column, &columns)?;
        if b.validate(tol).is_valid() {
            out.push(b);
        }
    }
    Ok(out)
}

fn integer_dims(source: &AnyonSystem) -> Result<Vec<u64>> {
    source
        .labels()
        .iter()
        .zip(source.dims())
        .map(|(label, &d)| {
            let r = d.round();
            if !d.is_finite() || (d - r).abs() > 1e-9 || r < 1.0 {
                Err(Error::NonIntegerDimension {
                    label: label.to_string(),
                    dim: d,
                })
            } else {
                Ok(r as u64)
            }
        })
        .collect()
}

/// Every column admissible on its own: zero on the source vacuum, entries
/// bounded by `residual_a / d_t`, and `Σ_a c_a d_a = λ d_t`.
fn candidate_columns(
    dims: &[u64],
    residual: &[u64],
    vacuum: usize,
    index: u64,
    max_dim: u32,
) -> Vec<Column> {
    let mut out = Vec::new();
    for dt in 1..=max_dim {
        let target = index * u64::from(dt);
        let bounds: Vec<u64> = residual
            .iter()
            .enumerate()
            .map(|(a, &r)| if a == vacuum { 0 } else { r / u64::from(dt) })
            .collect();
        let mut column = vec![0u32; dims.len()];
        fill_column(dims, &bounds, 0, target, &mut column, dt, &mut out);
    }
    out.sort();
    out
}

fn fill_column(
    dims: &[u64],
    bounds: &[u64],
    row: usize,
    remaining: u64,
    column: &mut Vec<u32>,
    dt: u32,
    out: &mut Vec<Column>,
) {
    if row == dims.len() {
        if remaining == 0 && column.iter().any(|&c| c > 0) {
            out.push((dt, column.clone()));
        }
        return;
    }
    let max = bounds[row].min(remaining / dims[row]);
    for c in 0..=max {
        column[row] = c as u32;
        fill_column(
            dims,
            bounds,
            row + 1,
            remaining - c * dims[row],
            column,
            dt,
            out,
        );
    }
    column[row] = 0;
}

fn search(
    candidates: &[Column],
    start: usize,
    residual: &mut [u64],
    slots: usize,
    chosen: &mut Vec<Column>,
    solutions: &mut Vec<Vec<Column>>,
) {
    if residual.iter().all(|&r| r == 0) {
        solutions.push(chosen.clone());
        return;
    }
    if slots == 0 {
        return;
    }
    for (i, cand) in candidates.iter().enumerate().skip(start) {
        let (dt, col) = cand;
        let fits = col
            .iter()
            .zip(residual.iter())
            .all(|(&c, &r)| u64::from(c) * u64::from(*dt) <= r);
        if !fits {
            continue;
        }
        for (r, &c) in residual.iter_mut().zip(col) {
            *r -= u64::from(c) * u64::from(*dt);
        }
        chosen.push(cand.clone());
        search(candidates, i, residual, slots - 1, chosen, solutions);
        chosen.pop();
        for (r, &c) in residual.iter_mut().zip(col) {
            *r += u64::from(c) * u64::from(*dt);
        }
    }
}

fn assemble(
    source: &Arc<AnyonSystem>,
    vacuum_column: &[u32],
    columns: &[Column],
) -> Result<BranchingData> {
    let mut labels = vec![CONDENSED_VACUUM.to_owned()];
    let mut dims = vec![1.0];
    for (k, (dt, _)) in columns.iter().enumerate() {
        labels.push(format!("t{}", k + 1));
        dims.push(f64::from(*dt));
    }
    let condensed = AnyonSystem::new(labels, dims, CONDENSED_VACUUM)?;
    let n = (0..source.len())
        .map(|a| {
            std::iter::once(vacuum_column[a])
                .chain(columns.iter().map(|(_, c)| c[a]))
                .collect()
        })
        .collect();
    BranchingData::new(source.clone(), condensed, n)
}

/// Non-vacuum condensed sectors of `b` as sorted `(dim, column)` pairs, or
/// `None` if some condensed dimension is not an integer.
pub fn canonical_columns(b: &BranchingData) -> Option<Vec<Column>> {
    let cnd = b.condensed();
    let phi = cnd.vacuum();
    let mut cols = Vec::with_capacity(cnd.len().saturating_sub(1));
    for t in (0..cnd.len()).filter(|&t| t != phi) {
        let d = cnd.dim(t);
        if (d - d.round()).abs() > 1e-9 || d < 0.5 {
            return None;
        }
        cols.push((d.round() as u32, b.n().iter().map(|row| row[t]).collect()));
    }
    cols.sort();
    Some(cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toric() -> Arc<AnyonSystem> {
        Arc::new(AnyonSystem::new(["1", "Y", "X", "Z"], vec![1.0; 4], "1").unwrap())
    }

    fn rep_s3() -> Arc<AnyonSystem> {
        Arc::new(AnyonSystem::new(["1", "X", "Y"], vec![1.0, 1.0, 2.0], "1").unwrap())
    }

    #[test]
    fn toric_code_has_the_single_expected_solution() {
        let src = toric();
        let alg = CondensableAlgebraView::new(&src, vec![1, 1, 0, 0]).unwrap();
        let found = enumerate_branchings(src, &alg, 4, 2).unwrap();
        assert_eq!(found.len(), 1);
        let b = &found[0];
        assert_eq!(b.condensed().label_names(), vec!["phi", "t1"]);
        assert_eq!(b.n(), &[vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]]);
    }

    #[test]
    fn rep_s3_splits_y_into_two_sectors() {
        let src = rep_s3();
        let alg = CondensableAlgebraView::new(&src, vec![1, 1, 0]).unwrap();
        let found = enumerate_branchings(src, &alg, 4, 2).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].condensed().dims(), &[1.0, 1.0, 1.0]);
        assert_eq!(found[0].n()[2], vec![0, 1, 1]);
    }

    #[test]
    fn vacuum_only_algebra_contains_identity() {
        for src in [toric(), rep_s3()] {
            let mut v = vec![0; src.len()];
            v[src.vacuum()] = 1;
            let alg = CondensableAlgebraView::new(&src, v).unwrap();
            let found = enumerate_branchings(src.clone(), &alg, src.len(), 2).unwrap();
            let identity = found.iter().any(|b| {
                b.n().iter().enumerate().all(|(a, row)| {
                    row.iter().filter(|&&x| x != 0).count() == 1
                        && row.iter().sum::<u32>() == 1
                        && b.condensed().dim(row.iter().position(|&x| x == 1).unwrap())
                            == src.dim(a)
                }) && b.condensed().len() == src.len()
            });
            assert!(identity, "{found:?}");
        }
    }

    #[test]
    fn lagrangian_algebra_has_trivial_condensed_theory() {
        let src = rep_s3();
        let alg = CondensableAlgebraView::new(&src, vec![1, 1, 2]).unwrap();
        let found = enumerate_branchings(src, &alg, 4, 2).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].condensed().len(), 1);
    }

    #[test]
    fn rejects_bad_inputs() {
        let src = Arc::new(AnyonSystem::new(["1", "s"], vec![1.0, 2f64.sqrt()], "1").unwrap());
        let alg = CondensableAlgebraView::new(&src, vec![1, 0]).unwrap();
        assert!(matches!(
            enumerate_branchings(src, &alg, 3, 2),
            Err(Error::NonIntegerDimension { .. })
        ));

        let src = toric();
        let alg = CondensableAlgebraView::new(&src, vec![1, 1, 0, 0]).unwrap();
        assert!(enumerate_branchings(src.clone(), &alg, 0, 2).is_err());
        // a view built for a different system
        let other = CondensableAlgebraView::new(&rep_s3(), vec![1, 1, 0]).unwrap();
        assert!(matches!(
            enumerate_branchings(src, &other, 3, 2),
            Err(Error::InvalidVacuumColumn(_))
        ));
    }

    #[test]
    fn fermion_cannot_condense() {
        use num_rational::Rational64;
        let src = AnyonSystem::new(["1", "Y", "X", "Z"], vec![1.0; 4], "1")
            .unwrap()
            .with_twist([
                ("1", Rational64::from_integer(0)),
                ("Y", Rational64::from_integer(0)),
                ("X", Rational64::new(1, 2)),
                ("Z", Rational64::from_integer(0)),
            ])
            .unwrap();
        let src = Arc::new(src);
        let alg = CondensableAlgebraView::new(&src, vec![1, 0, 1, 0]).unwrap();
        assert!(enumerate_branchings(src.clone(), &alg, 4, 2)
            .unwrap()
            .is_empty());
        let alg = CondensableAlgebraView::new(&src, vec![1, 1, 0, 0]).unwrap();
        assert_eq!(enumerate_branchings(src, &alg, 4, 2).unwrap().len(), 1);
    }

    #[test]
    fn output_is_sorted_and_canonical() {
        let src = Arc::new(
            AnyonSystem::new(["1", "a", "b", "c"], vec![1.0, 1.0, 2.0, 2.0], "1").unwrap(),
        );
        let alg = CondensableAlgebraView::new(&src, vec![1, 0, 0, 0]).unwrap();
        let found = enumerate_branchings(src, &alg, 5, 2).unwrap();
        assert!(!found.is_empty());
        let keys: Vec<_> = found
            .iter()
            .map(|b| canonical_columns(b).unwrap())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted);
    }
}
