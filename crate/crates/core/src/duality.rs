//! Permutation dualities between two condensations of the same source system.
//!
//! A pair `(σ, τ)` relates `B` to `A` when `n_B[a][τ(t)] = n_A[σ(a)][t]` for
//! all `a` and `t`. Then `ε_B(ρ)` equals `ε_A(σ·ρ)` up to relabeling the
//! condensed sectors by `τ`.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::branching::BranchingData;
use crate::channels::{ensure_same, restrict, SectorState};
use crate::error::{Error, Result};
use crate::sampling::random_state;
use crate::system::{AnyonSystem, Tolerance};

/// Default cap on the number of labels for the factorial search.
pub const DEFAULT_SEARCH_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct PermutationDuality {
    source: Arc<AnyonSystem>,
    condensed_from: Arc<AnyonSystem>,
    condensed_to: Arc<AnyonSystem>,
    /// `source_perm[a] = σ(a)`.
    source_perm: Vec<usize>,
    /// `condensed_perm[t] = τ(t)`, from the condensed sectors of `A` to those of `B`.
    condensed_perm: Vec<usize>,
}

impl PermutationDuality {
    /// `σ` must fix the vacuum and preserve dimensions (and twists when
    /// present); `τ` must send `φ_A` to `φ_B` and preserve dimensions.
    pub fn new(
        a: &BranchingData,
        b: &BranchingData,
        source_perm: Vec<usize>,
        condensed_perm: Vec<usize>,
    ) -> Result<Self> {
        ensure_same(a.source(), b.source())?;
        let tol = Tolerance::DEFAULT;
        check_perm(a.source(), a.source(), &source_perm, tol, "source")?;
        check_perm(
            a.condensed(),
            b.condensed(),
            &condensed_perm,
            tol,
            "condensed",
        )?;
        Ok(PermutationDuality {
            source: a.source().clone(),
            condensed_from: a.condensed().clone(),
            condensed_to: b.condensed().clone(),
            source_perm,
            condensed_perm,
        })
    }

    pub fn identity(a: &BranchingData) -> Self {
        PermutationDuality {
            source: a.source().clone(),
            condensed_from: a.condensed().clone(),
            condensed_to: a.condensed().clone(),
            source_perm: (0..a.source().len()).collect(),
            condensed_perm: (0..a.condensed().len()).collect(),
        }
    }

    pub fn source_perm(&self) -> &[usize] {
        &self.source_perm
    }

    pub fn condensed_perm(&self) -> &[usize] {
        &self.condensed_perm
    }

    /// `(σ⁻¹, τ⁻¹)`, a duality from `B` to `A`.
    pub fn inverse(&self) -> Self {
        PermutationDuality {
            source: self.source.clone(),
            condensed_from: self.condensed_to.clone(),
            condensed_to: self.condensed_from.clone(),
            source_perm: invert(&self.source_perm),
            condensed_perm: invert(&self.condensed_perm),
        }
    }

    pub fn source_map(&self) -> Vec<(String, String)> {
        label_map(&self.source, &self.source, &self.source_perm)
    }

    pub fn condensed_map(&self) -> Vec<(String, String)> {
        label_map(
            &self.condensed_from,
            &self.condensed_to,
            &self.condensed_perm,
        )
    }
}

fn check_perm(
    from: &AnyonSystem,
    to: &AnyonSystem,
    perm: &[usize],
    tol: Tolerance,
    what: &str,
) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidDuality(format!("{what} permutation: {msg}")));
    if perm.len() != from.len() || from.len() != to.len() {
        return bad(format!(
            "{} images for {} → {} sectors",
            perm.len(),
            from.len(),
            to.len()
        ));
    }
    let mut seen = vec![false; to.len()];
    for &p in perm {
        if p >= to.len() || std::mem::replace(&mut seen[p], true) {
            return bad("not a bijection".into());
        }
    }
    if perm[from.vacuum()] != to.vacuum() {
        return bad("does not fix the vacuum".into());
    }
    for (i, &p) in perm.iter().enumerate() {
        if !tol.close(from.dim(i), to.dim(p)) {
            return bad(format!(
                "{} and {} have different dimensions",
                from.label(i),
                to.label(p)
            ));
        }
        if let (Some(tf), Some(tt)) = (from.twist(), to.twist()) {
            if tf[i] != tt[p] {
                return bad(format!(
                    "{} and {} have different twists",
                    from.label(i),
                    to.label(p)
                ));
            }
        }
    }
    Ok(())
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

fn label_map(from: &AnyonSystem, to: &AnyonSystem, perm: &[usize]) -> Vec<(String, String)> {
    perm.iter()
        .enumerate()
        .map(|(i, &p)| (from.label(i).to_string(), to.label(p).to_string()))
        .collect()
}

/// Relabels a source state: `p'_{σ(a)} = p_a`.
pub fn apply_permutation(d: &PermutationDuality, rho: &SectorState) -> Result<SectorState> {
    ensure_same(&d.source, rho.system())?;
    let mut probs = vec![0.0; rho.probs().len()];
    for (a, &p) in rho.probs().iter().enumerate() {
        probs[d.source_perm[a]] = p;
    }
    SectorState::new(rho.system().clone(), probs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityCheck {
    /// `n_B[a][τ(t)] = n_A[σ(a)][t]` for all entries.
    pub coefficient_identity: bool,
    /// Largest `|ε_B(ρ)_{τ(t)} − ε_A(σ·ρ)_t|` over the sampled states.
    pub residual: f64,
}

impl DualityCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.coefficient_identity && self.residual <= tol
    }
}

fn coefficient_identity(
    a: &BranchingData,
    b: &BranchingData,
    sigma: &[usize],
    tau: &[usize],
) -> bool {
    (0..a.source().len())
        .all(|s| (0..a.condensed().len()).all(|t| b.entry(s, tau[t]) == a.entry(sigma[s], t)))
}

/// Checks `d` between `a` and `b` on the coefficient level and on `trials`
/// random source states.
pub fn verify_duality<R: Rng + ?Sized>(
    a: &BranchingData,
    b: &BranchingData,
    d: &PermutationDuality,
    trials: usize,
    rng: &mut R,
) -> Result<DualityCheck> {
    ensure_same(a.source(), b.source())?;
    ensure_same(&d.source, a.source())?;
    ensure_same(&d.condensed_from, a.condensed())?;
    ensure_same(&d.condensed_to, b.condensed())?;

    let identity = coefficient_identity(a, b, &d.source_perm, &d.condensed_perm);
    let mut residual: f64 = 0.0;
    for _ in 0..trials {
        let rho = random_state(a.source().clone(), rng);
        let eb = restrict(b, &rho)?;
        let ea = restrict(a, &apply_permutation(d, &rho)?)?;
        for (t, &tt) in d.condensed_perm.iter().enumerate() {
            residual = residual.max((eb.probs()[tt] - ea.probs()[t]).abs());
        }
    }
    Ok(DualityCheck {
        coefficient_identity: identity,
        residual,
    })
}

/// All `(σ, τ)` satisfying the coefficient identity, in lexicographic order of
/// `(σ, τ)` as image vectors.
pub fn find_dualities(
    a: &BranchingData,
    b: &BranchingData,
    cap: usize,
) -> Result<Vec<PermutationDuality>> {
    ensure_same(a.source(), b.source())?;
    for (what, len) in [
        ("source", a.source().len()),
        ("condensed", a.condensed().len().max(b.condensed().len())),
    ] {
        if len > cap {
            return Err(Error::SearchTooLarge(format!(
                "{what} system has {len} labels, cap is {cap}"
            )));
        }
    }
    if a.condensed().len() != b.condensed().len() {
        return Ok(Vec::new());
    }
    let tol = Tolerance::DEFAULT;
    let sigmas = admissible_perms(a.source(), a.source(), tol);
    let taus = admissible_perms(a.condensed(), b.condensed(), tol);
    let mut out = Vec::new();
    for sigma in &sigmas {
        for tau in &taus {
            if coefficient_identity(a, b, sigma, tau) {
                out.push(PermutationDuality {
                    source: a.source().clone(),
                    condensed_from: a.condensed().clone(),
                    condensed_to: b.condensed().clone(),
                    source_perm: sigma.clone(),
                    condensed_perm: tau.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Vacuum-fixing, dimension- and twist-preserving bijections, in
/// lexicographic order.
fn admissible_perms(from: &AnyonSystem, to: &AnyonSystem, tol: Tolerance) -> Vec<Vec<usize>> {
    let allowed = |i: usize, j: usize| {
        (i == from.vacuum()) == (j == to.vacuum())
            && tol.close(from.dim(i), to.dim(j))
            && match (from.twist(), to.twist()) {
                (Some(tf), Some(tt)) => tf[i] == tt[j],
                _ => true,
            }
    };
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(from.len());
    let mut used = vec![false; to.len()];
    fn rec(
        i: usize,
        n: usize,
        allowed: &dyn Fn(usize, usize) -> bool,
        current: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == n {
            out.push(current.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] && allowed(i, j) {
                used[j] = true;
                current.push(j);
                rec(i + 1, n, allowed, current, used, out);
                current.pop();
                used[j] = false;
            }
        }
    }
    rec(0, from.len(), &allowed, &mut current, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn entry(id: &str) -> BranchingData {
        catalog::entry(id).unwrap().branching
    }

    #[test]
    fn apply_permutation_examples() {
        let a = entry("toric-1Y");
        let rho = SectorState::new(a.source().clone(), vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        // (1, Y, X, Z): swap Y and Z
        let swap = PermutationDuality::new(&a, &a, vec![0, 3, 2, 1], vec![0, 1]).unwrap();
        let out = apply_permutation(&swap, &rho).unwrap();
        assert_eq!(out.probs(), &[0.1, 0.4, 0.3, 0.2]);
        assert_eq!(apply_permutation(&swap, &out).unwrap(), rho);
        let id = PermutationDuality::identity(&a);
        assert_eq!(apply_permutation(&id, &rho).unwrap(), rho);
    }

    #[test]
    fn toric_electric_magnetic_duality() {
        let a = entry("toric-1Y");
        let b = entry("toric-1Z");
        let found = find_dualities(&a, &b, DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!(found.len(), 1);
        let d = &found[0];
        assert_eq!(d.source_perm(), &[0, 3, 2, 1]);
        assert_eq!(d.condensed_perm(), &[0, 1]);

        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let check = verify_duality(&a, &b, d, 100, &mut rng).unwrap();
        assert!(check.holds(1e-12), "{check:?}");

        let back = find_dualities(&b, &a, DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!(back, vec![d.inverse()]);
    }

    #[test]
    fn identity_is_a_self_duality() {
        for e in catalog::catalog() {
            let b = e.branching;
            let found = find_dualities(&b, &b, DEFAULT_SEARCH_CAP).unwrap();
            assert!(
                found.contains(&PermutationDuality::identity(&b)),
                "{}",
                e.id
            );
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            let check =
                verify_duality(&b, &b, &PermutationDuality::identity(&b), 10, &mut rng).unwrap();
            assert_eq!(check.residual, 0.0);
        }
    }

    #[test]
    fn wrong_permutation_fails() {
        let a = entry("toric-1Y");
        let b = entry("toric-1Z");
        let id = PermutationDuality::new(&a, &b, vec![0, 1, 2, 3], vec![0, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let check = verify_duality(&a, &b, &id, 20, &mut rng).unwrap();
        assert!(!check.coefficient_identity);
        assert!(check.residual > 0.0);
    }

    #[test]
    fn different_index_means_no_duality() {
        let a = entry("repS3-1X");
        let b = entry("repS3-1Y");
        assert!(find_dualities(&a, &b, DEFAULT_SEARCH_CAP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn permutation_invariants_enforced() {
        let a = entry("toric-1Y");
        // X is a fermion, Y a boson
        assert!(PermutationDuality::new(&a, &a, vec![0, 2, 1, 3], vec![0, 1]).is_err());
        assert!(PermutationDuality::new(&a, &a, vec![1, 0, 2, 3], vec![0, 1]).is_err());
        assert!(PermutationDuality::new(&a, &a, vec![0, 0, 2, 3], vec![0, 1]).is_err());
        let r = entry("repS3-1X");
        assert!(PermutationDuality::new(&r, &r, vec![0, 2, 1], vec![0, 1, 2]).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let a = entry("z5-full");
        assert!(matches!(
            find_dualities(&a, &a, 4),
            Err(Error::SearchTooLarge(_))
        ));
    }

    #[test]
    fn different_sources_are_rejected() {
        assert!(find_dualities(&entry("toric-1Y"), &entry("repS3-1X"), 8).is_err());
    }
}
