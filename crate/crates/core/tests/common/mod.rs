//! Brute-force enumeration oracle, independent of the backtracking solver.
//!
//! It tries every condensed dimension vector and every matrix with entries
//! `0 ≤ n[a][t] ≤ d_a`, keeps those satisfying the dimension and index
//! equations, and canonicalizes by sorting the non-vacuum columns.

#![allow(dead_code)]

use std::collections::BTreeSet;

use anyon_condensation::AnyonSystem;

pub type Canonical = Vec<(u32, Vec<u32>)>;

fn odometer(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// All canonical solutions with at most `max_sectors` condensed sectors
/// (including the vacuum) and condensed dimensions at most `max_dim`.
pub fn brute_force(
    source: &AnyonSystem,
    vacuum_column: &[u32],
    max_sectors: usize,
    max_dim: u32,
) -> BTreeSet<Canonical> {
    let d: Vec<u32> = source.dims().iter().map(|x| x.round() as u32).collect();
    let vac = source.vacuum();
    let lambda: u32 = d.iter().zip(vacuum_column).map(|(x, v)| x * v).sum();
    let d_sq_a: u32 = d.iter().map(|x| x * x).sum();

    // candidate columns ignore nothing but the vacuum row, which must be zero
    let column_bounds: Vec<u32> = (0..d.len())
        .map(|a| if a == vac { 0 } else { d[a] })
        .collect();
    let columns = odometer(&column_bounds);

    let mut found = BTreeSet::new();
    for extra in 0..max_sectors {
        for dims in odometer(&vec![max_dim - 1; extra]) {
            let dims: Vec<u32> = dims.iter().map(|x| x + 1).collect();
            let mut pick = vec![0usize; extra];
            loop {
                let cols: Vec<&Vec<u32>> = pick.iter().map(|&i| &columns[i]).collect();
                if accepts(&d, vacuum_column, lambda, d_sq_a, &dims, &cols) {
                    let mut canon: Canonical = dims
                        .iter()
                        .copied()
                        .zip(cols.into_iter().cloned())
                        .collect();
                    canon.sort();
                    found.insert(canon);
                }
                // next tuple of column indices
                let mut k = 0;
                while k < extra {
                    pick[k] += 1;
                    if pick[k] < columns.len() {
                        break;
                    }
                    pick[k] = 0;
                    k += 1;
                }
                if k == extra {
                    break;
                }
            }
        }
    }
    found
}

fn accepts(
    d: &[u32],
    vacuum_column: &[u32],
    lambda: u32,
    d_sq_a: u32,
    dims: &[u32],
    cols: &[&Vec<u32>],
) -> bool {
    if cols.iter().any(|c| c.iter().all(|&x| x == 0)) {
        return false;
    }
    // d_a = n[a][φ] + Σ_t n[a][t] d_t
    for a in 0..d.len() {
        let total: u32 =
            vacuum_column[a] + cols.iter().zip(dims).map(|(c, dt)| c[a] * dt).sum::<u32>();
        if total != d[a] {
            return false;
        }
    }
    // λ d_t = Σ_a n[a][t] d_a
    for (c, dt) in cols.iter().zip(dims) {
        let total: u32 = c.iter().zip(d).map(|(x, da)| x * da).sum();
        if total != lambda * dt {
            return false;
        }
    }
    // λ = D²_A / D²_T
    let d_sq_t: u32 = 1 + dims.iter().map(|x| x * x).sum::<u32>();
    lambda * d_sq_t == d_sq_a
}
