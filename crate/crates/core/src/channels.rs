//! Restriction (conditional expectation) and lifting (coarse-graining) on
//! superselected states `ρ = Σ_a p_a Π_a`.
//!
//! With `n` the branching matrix, `d` the quantum dimensions and `λ` the Jones
//! index:
//!
//! ```text
//! restrict:    p_t = Σ_a n[a][t] (d_t / d_a) p_a
//! lift:        p̃_a = (1/λ) Σ_t n[a][t] (d_a / d_t) p_t
//! lift_coarse: p̃_a = (1/λ) Σ_b M'[a][b] (d_a / d_b) p_b
//! ```

use std::sync::Arc;

use nalgebra::{Complex, DMatrix};

use crate::branching::BranchingData;
use crate::error::{Error, Result};
use crate::system::{AnyonSystem, Tolerance};

/// Diagonal density matrix: a probability per sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorState {
    system: Arc<AnyonSystem>,
    probs: Vec<f64>,
}

impl SectorState {
    pub fn new(system: impl Into<Arc<AnyonSystem>>, probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(system, probs, Tolerance::DEFAULT)
    }

    /// Probabilities must be finite, non-negative and sum to one within `tol`.
    pub fn with_tolerance(
        system: impl Into<Arc<AnyonSystem>>,
        probs: Vec<f64>,
        tol: Tolerance,
    ) -> Result<Self> {
        let system = system.into();
        if probs.len() != system.len() {
            return Err(Error::InvalidState(format!(
                "{} probabilities for {} sectors",
                probs.len(),
                system.len()
            )));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0)
        {
            return Err(Error::InvalidState(format!(
                "probability of {} is {p}",
                system.label(i)
            )));
        }
        let total: f64 = probs.iter().sum();
        if !tol.close(total, 1.0) {
            return Err(Error::InvalidState(format!("probabilities sum to {total}")));
        }
        Ok(SectorState { system, probs })
    }

    pub(crate) fn from_parts(system: Arc<AnyonSystem>, probs: Vec<f64>) -> Self {
        debug_assert_eq!(system.len(), probs.len());
        SectorState { system, probs }
    }

    /// All weight on one sector.
    pub fn point(system: impl Into<Arc<AnyonSystem>>, index: usize) -> Self {
        let system = system.into();
        let mut probs = vec![0.0; system.len()];
        probs[index] = 1.0;
        SectorState { system, probs }
    }

    pub fn uniform(system: impl Into<Arc<AnyonSystem>>) -> Self {
        let system = system.into();
        let n = system.len();
        SectorState {
            system,
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Reads the diagonal of a density matrix on the sector basis.
    ///
    /// Coherences between sectors are forbidden by superselection, so any
    /// off-diagonal entry larger than `tol` is rejected rather than dropped.
    pub fn from_density_matrix(
        system: impl Into<Arc<AnyonSystem>>,
        rho: &DMatrix<Complex<f64>>,
        tol: Tolerance,
    ) -> Result<Self> {
        let system = system.into();
        if rho.nrows() != system.len() || rho.ncols() != system.len() {
            return Err(Error::InvalidState(format!(
                "{}x{} matrix for {} sectors",
                rho.nrows(),
                rho.ncols(),
                system.len()
            )));
        }
        for i in 0..rho.nrows() {
            for j in 0..rho.ncols() {
                let magnitude = rho[(i, j)].norm();
                if i != j && magnitude > tol.value() {
                    return Err(Error::OffDiagonal {
                        row: i,
                        col: j,
                        magnitude,
                    });
                }
            }
            if rho[(i, i)].im.abs() > tol.value() {
                return Err(Error::InvalidState(format!(
                    "diagonal entry {i} has imaginary part {}",
                    rho[(i, i)].im
                )));
            }
        }
        let probs = (0..rho.nrows()).map(|i| rho[(i, i)].re).collect();
        Self::with_tolerance(system, probs, tol)
    }

    pub fn system(&self) -> &Arc<AnyonSystem> {
        &self.system
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, label: &str) -> Option<f64> {
        self.system.index_of(label).map(|i| self.probs[i])
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Largest absolute difference between matching probabilities.
    pub fn max_diff(&self, other: &SectorState) -> f64 {
        max_abs_diff(&self.probs, &other.probs)
    }
}

/// A diagonal operator `m = Σ_d m_d Π_d`; coefficients need not be a distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    system: Arc<AnyonSystem>,
    coeffs: Vec<f64>,
}

impl DiagonalOperator {
    pub fn new(system: impl Into<Arc<AnyonSystem>>, coeffs: Vec<f64>) -> Result<Self> {
        let system = system.into();
        if coeffs.len() != system.len() {
            return Err(Error::InvalidState(format!(
                "{} coefficients for {} sectors",
                coeffs.len(),
                system.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidState("non-finite coefficient".into()));
        }
        Ok(DiagonalOperator { system, coeffs })
    }

    pub fn identity(system: impl Into<Arc<AnyonSystem>>) -> Self {
        let system = system.into();
        let coeffs = vec![1.0; system.len()];
        DiagonalOperator { system, coeffs }
    }

    pub fn system(&self) -> &Arc<AnyonSystem> {
        &self.system
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Pointwise product, the operator product of two diagonal operators.
    pub fn product(&self, other: &DiagonalOperator) -> Result<DiagonalOperator> {
        ensure_same(&self.system, &other.system)?;
        Ok(DiagonalOperator {
            system: self.system.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| x * y)
                .collect(),
        })
    }
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub(crate) fn ensure_same(expected: &Arc<AnyonSystem>, found: &Arc<AnyonSystem>) -> Result<()> {
    if Arc::ptr_eq(expected, found) || expected == found {
        Ok(())
    } else {
        Err(Error::SystemMismatch {
            expected: expected.label_names(),
            found: found.label_names(),
        })
    }
}

fn restrict_coeffs(b: &BranchingData, coeffs: &[f64]) -> Vec<f64> {
    let src = b.source();
    let cnd = b.condensed();
    (0..cnd.len())
        .map(|t| {
            (0..src.len())
                .map(|a| b.weight(a, t) * (cnd.dim(t) / src.dim(a)) * coeffs[a])
                .sum()
        })
        .collect()
}

fn lift_coeffs(b: &BranchingData, coeffs: &[f64]) -> Vec<f64> {
    let src = b.source();
    let cnd = b.condensed();
    let lambda = b.jones_index();
    (0..src.len())
        .map(|a| {
            let s: f64 = (0..cnd.len())
                .map(|t| b.weight(a, t) * (src.dim(a) / cnd.dim(t)) * coeffs[t])
                .sum();
            s / lambda
        })
        .collect()
}

/// Conditional expectation `ε(ρ)`.
pub fn restrict(b: &BranchingData, rho: &SectorState) -> Result<SectorState> {
    ensure_same(b.source(), &rho.system)?;
    Ok(SectorState::from_parts(
        b.condensed().clone(),
        restrict_coeffs(b, &rho.probs),
    ))
}

/// Coarse-graining `α(σ)` of a condensed state back onto the source sectors.
pub fn lift(b: &BranchingData, sigma: &SectorState) -> Result<SectorState> {
    ensure_same(b.condensed(), &sigma.system)?;
    Ok(SectorState::from_parts(
        b.source().clone(),
        lift_coeffs(b, &sigma.probs),
    ))
}

/// `ρ̃ = α(ε(ρ))`.
pub fn round_trip(b: &BranchingData, rho: &SectorState) -> Result<SectorState> {
    lift(b, &restrict(b, rho)?)
}

/// `ρ̃` computed in one step through `M' = n nᵀ`.
pub fn lift_coarse(b: &BranchingData, rho: &SectorState) -> Result<SectorState> {
    ensure_same(b.source(), &rho.system)?;
    let src = b.source();
    let m = b.mprime_matrix();
    let lambda = b.jones_index();
    let probs = (0..src.len())
        .map(|a| {
            let s: f64 = (0..src.len())
                .map(|c| m[a][c] as f64 * (src.dim(a) / src.dim(c)) * rho.probs[c])
                .sum();
            s / lambda
        })
        .collect();
    Ok(SectorState::from_parts(src.clone(), probs))
}

/// Max-norm distance between `ε(α(ε(ρ)))` and `ε(ρ)`.
pub fn verify_idempotence(b: &BranchingData, rho: &SectorState) -> Result<f64> {
    let once = restrict(b, rho)?;
    let twice = restrict(b, &round_trip(b, rho)?)?;
    Ok(once.max_diff(&twice))
}

/// `ε` applied to a diagonal operator of the source algebra.
pub fn condition(b: &BranchingData, m: &DiagonalOperator) -> Result<DiagonalOperator> {
    ensure_same(b.source(), &m.system)?;
    Ok(DiagonalOperator {
        system: b.condensed().clone(),
        coeffs: restrict_coeffs(b, &m.coeffs),
    })
}

/// Unital embedding of a condensed operator into the source algebra,
/// `p̃ = Σ_a K_a† p K_a`, so that `p̃_a = Σ_t n[a][t] (d_t/d_a) p_t`.
pub fn embed(b: &BranchingData, p: &DiagonalOperator) -> Result<DiagonalOperator> {
    ensure_same(b.condensed(), &p.system)?;
    let src = b.source();
    let cnd = b.condensed();
    let coeffs = (0..src.len())
        .map(|a| {
            (0..cnd.len())
                .map(|t| b.weight(a, t) * (cnd.dim(t) / src.dim(a)) * p.coeffs[t])
                .sum()
        })
        .collect();
    Ok(DiagonalOperator {
        system: src.clone(),
        coeffs,
    })
}

/// Max-norm distance between `ε(p̃ m q̃)` and `p ε(m) q`.
///
/// Both sides are diagonal over the condensed sectors. The identity holds
/// exactly when every source sector restricts onto a single condensed sector;
/// a sector that splits over several condensed sectors cannot carry distinct
/// values of `p` in a diagonal embedding, and the residual is then nonzero in
/// general.
pub fn verify_bimodule(
    b: &BranchingData,
    p: &DiagonalOperator,
    q: &DiagonalOperator,
    m: &DiagonalOperator,
) -> Result<f64> {
    let p_lift = embed(b, p)?;
    let q_lift = embed(b, q)?;
    let lhs = condition(b, &p_lift.product(m)?.product(&q_lift)?)?;
    let rhs = p.product(&condition(b, m)?)?.product(q)?;
    Ok(max_abs_diff(&lhs.coeffs, &rhs.coeffs))
}
