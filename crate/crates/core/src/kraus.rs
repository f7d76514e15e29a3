//! Explicit matrix realization of the restriction and lifting maps.
//!
//! Operators act on the block space with one basis vector per source sector
//! followed by one per condensed sector. `Λ_{t,a}` is the matrix unit `|t⟩⟨a|`.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::branching::BranchingData;
use crate::channels::{ensure_same, SectorState};
use crate::error::Result;

type CMatrix = DMatrix<Complex<f64>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KrausDirection {
    Restriction,
    Lifting,
}

/// One operator per source sector, on the `|A| + |T|` block space.
#[derive(Debug, Clone)]
pub struct KrausSet {
    operators: Vec<CMatrix>,
    direction: KrausDirection,
    source_len: usize,
    condensed_len: usize,
}

impl KrausSet {
    /// `K_a = Σ_t √(n[a][t] d_t / d_a) |t⟩⟨a|`.
    pub fn restriction(b: &BranchingData) -> Self {
        Self::build(b, KrausDirection::Restriction)
    }

    /// `L_a = Σ_t √(n[a][t] d_a / (λ d_t)) |a⟩⟨t|`.
    pub fn lifting(b: &BranchingData) -> Self {
        Self::build(b, KrausDirection::Lifting)
    }

    fn build(b: &BranchingData, direction: KrausDirection) -> Self {
        let src = b.source();
        let cnd = b.condensed();
        let (na, nt) = (src.len(), cnd.len());
        let dim = na + nt;
        let lambda = b.jones_index();
        let operators = (0..na)
            .map(|a| {
                let mut k = CMatrix::zeros(dim, dim);
                for t in 0..nt {
                    let n = b.weight(a, t);
                    if n == 0.0 {
                        continue;
                    }
                    match direction {
                        KrausDirection::Restriction => {
                            k[(na + t, a)] =
                                Complex::new((n * cnd.dim(t) / src.dim(a)).sqrt(), 0.0);
                        }
                        KrausDirection::Lifting => {
                            k[(a, na + t)] =
                                Complex::new((n * src.dim(a) / (lambda * cnd.dim(t))).sqrt(), 0.0);
                        }
                    }
                }
                k
            })
            .collect();
        KrausSet {
            operators,
            direction,
            source_len: na,
            condensed_len: nt,
        }
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn direction(&self) -> KrausDirection {
        self.direction
    }

    pub fn block_dim(&self) -> usize {
        self.source_len + self.condensed_len
    }

    /// `Σ_i K_i ρ K_i†`.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        self.operators
            .iter()
            .fold(CMatrix::zeros(rho.nrows(), rho.ncols()), |acc, k| {
                acc + k * rho * k.adjoint()
            })
    }

    /// Places a source-sector state on the source block.
    pub fn embed_source(&self, b: &BranchingData, rho: &SectorState) -> Result<CMatrix> {
        ensure_same(b.source(), rho.system())?;
        Ok(self.embed_at(0, rho.probs()))
    }

    /// Places a condensed-sector state on the condensed block.
    pub fn embed_condensed(&self, b: &BranchingData, sigma: &SectorState) -> Result<CMatrix> {
        ensure_same(b.condensed(), sigma.system())?;
        Ok(self.embed_at(self.source_len, sigma.probs()))
    }

    fn embed_at(&self, offset: usize, probs: &[f64]) -> CMatrix {
        let mut m = CMatrix::zeros(self.block_dim(), self.block_dim());
        for (i, &p) in probs.iter().enumerate() {
            m[(offset + i, offset + i)] = Complex::new(p, 0.0);
        }
        m
    }

    /// Real diagonal of the source block.
    pub fn source_diagonal(&self, m: &CMatrix) -> Vec<f64> {
        (0..self.source_len).map(|i| m[(i, i)].re).collect()
    }

    /// Real diagonal of the condensed block.
    pub fn condensed_diagonal(&self, m: &CMatrix) -> Vec<f64> {
        (0..self.condensed_len)
            .map(|t| m[(self.source_len + t, self.source_len + t)].re)
            .collect()
    }

    /// Max-norm distance of `Σ K†K` from the projector onto the source block.
    pub fn completeness_residual(&self) -> f64 {
        let dim = self.block_dim();
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, k| acc + k.adjoint() * k);
        let mut residual: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let target = if i == j && i < self.source_len {
                    1.0
                } else {
                    0.0
                };
                residual = residual.max((sum[(i, j)] - Complex::new(target, 0.0)).norm());
            }
        }
        residual
    }

    /// `Σ_i tr(K_i K_i†)`; for the lifting set this equals `|T|`.
    pub fn trace_sum(&self) -> f64 {
        self.operators
            .iter()
            .map(|k| (k * k.adjoint()).trace().re)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::channels::{lift, restrict};

    #[test]
    fn toric_restriction_operators() {
        let b = catalog::entry("toric-1Y").unwrap().branching;
        let k = KrausSet::restriction(&b);
        assert_eq!(k.operators().len(), 4);
        assert_eq!(k.block_dim(), 6);
        for op in k.operators() {
            let nonzero: Vec<_> = op.iter().filter(|z| z.norm() > 0.0).collect();
            assert!(nonzero.len() <= 2);
            assert!(nonzero.iter().all(|z| **z == Complex::new(1.0, 0.0)));
        }
        assert_eq!(k.completeness_residual(), 0.0);
    }

    #[test]
    fn toric_lifting_trace_identity() {
        let b = catalog::entry("toric-1Y").unwrap().branching;
        let l = KrausSet::lifting(&b);
        assert!((l.trace_sum() - 2.0).abs() <= 1e-15);
    }

    #[test]
    fn matrices_reproduce_diagonal_channels() {
        for entry in catalog::catalog() {
            let b = &entry.branching;
            let rho = SectorState::new(
                b.source().clone(),
                (1..=b.source().len())
                    .map(|i| i as f64)
                    .map({
                        let total = (b.source().len() * (b.source().len() + 1) / 2) as f64;
                        move |x| x / total
                    })
                    .collect(),
            )
            .unwrap();
            let k = KrausSet::restriction(b);
            let out = k.apply(&k.embed_source(b, &rho).unwrap());
            let expected = restrict(b, &rho).unwrap();
            for (x, y) in k.condensed_diagonal(&out).iter().zip(expected.probs()) {
                assert!((x - y).abs() <= 1e-14, "{}", entry.id);
            }
            assert!(k.source_diagonal(&out).iter().all(|x| *x == 0.0));

            let l = KrausSet::lifting(b);
            let lifted = l.apply(&l.embed_condensed(b, &expected).unwrap());
            let want = lift(b, &expected).unwrap();
            for (x, y) in l.source_diagonal(&lifted).iter().zip(want.probs()) {
                assert!((x - y).abs() <= 1e-14, "{}", entry.id);
            }
        }
    }

    #[test]
    fn split_sector_produces_coherence_between_branches() {
        // Matrix units put Y's weight on |t1⟩ + |t2⟩, so the condensed block
        // carries a coherence; its diagonal still matches the channel.
        let b = catalog::entry("repS3-1X").unwrap().branching;
        let k = KrausSet::restriction(&b);
        let rho = SectorState::point(b.source().clone(), 2);
        let out = k.apply(&k.embed_source(&b, &rho).unwrap());
        for (x, y) in k.condensed_diagonal(&out).iter().zip([0.0, 0.5, 0.5]) {
            assert!((x - y).abs() < 1e-15);
        }
        assert!((out[(4, 5)].re - 0.5).abs() < 1e-15);
    }
}
