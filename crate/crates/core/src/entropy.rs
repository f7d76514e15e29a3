//! Shannon and relative entropies, and the condensation order parameter
//! `S(ρ‖ρ̃)` with its upper bound `log λ`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::branching::BranchingData;
use crate::channels::{ensure_same, round_trip, SectorState};
use crate::error::{Error, Result};
use crate::system::{AnyonSystem, Tolerance};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogBase {
    #[default]
    Natural,
    Bits,
}

impl LogBase {
    /// Converts a value in nats to this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Natural => nats,
            LogBase::Bits => nats / std::f64::consts::LN_2,
        }
    }
}

/// `H(p) = −Σ p log p` in nats, with `0 log 0 = 0`.
pub fn shannon(p: &SectorState) -> f64 {
    shannon_of(p.probs())
}

fn shannon_of(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

/// `S(p‖q) = Σ_{p_a > 0} p_a log(p_a / q_a)` in nats.
///
/// Returns `f64::INFINITY` when `p` puts weight where `q` has none.
pub fn relative_entropy(p: &SectorState, q: &SectorState) -> Result<f64> {
    ensure_same(p.system(), q.system())?;
    Ok(relative_terms(p.probs(), q.probs()).iter().sum())
}

fn relative_terms(p: &[f64], q: &[f64]) -> Vec<f64> {
    p.iter()
        .zip(q)
        .map(|(&pa, &qa)| {
            if pa <= 0.0 {
                0.0
            } else if qa <= 0.0 {
                f64::INFINITY
            } else {
                pa * (pa / qa).ln()
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorContribution {
    pub label: String,
    pub value: f64,
}

/// Order parameter of one state under one condensation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub order_parameter: f64,
    /// `log λ`.
    pub bound: f64,
    /// `p_a log(p_a / p̃_a)` for each source sector.
    pub per_sector: Vec<SectorContribution>,
    /// Difference between the direct sum and the `M'` closed form.
    pub formula_residual: f64,
    pub log_base: LogBase,
}

impl EntropyReport {
    /// `0 ≤ S ≤ log λ + tol` and the two formulas agree within `tol`.
    pub fn within_bound(&self, tol: Tolerance) -> bool {
        self.order_parameter >= -tol.value() && self.order_parameter <= self.bound + tol.value()
    }
}

/// Relative entropy between `ρ` and `ρ̃ = α(ε(ρ))`.
///
/// Evaluated twice: directly as `Σ p log(p/p̃)`, and as
/// `log λ − H(p) − Σ_a p_a log Σ_b M'[a][b] (d_a/d_b) p_b`.
pub fn order_parameter(
    b: &BranchingData,
    rho: &SectorState,
    base: LogBase,
) -> Result<EntropyReport> {
    let lifted = round_trip(b, rho)?;
    let terms = relative_terms(rho.probs(), lifted.probs());
    let direct: f64 = terms.iter().sum();

    let src = b.source();
    let m = b.mprime_matrix();
    let lambda = b.jones_index();
    let p = rho.probs();
    let cross: f64 = (0..src.len())
        .filter(|&a| p[a] > 0.0)
        .map(|a| {
            let inner: f64 = (0..src.len())
                .map(|c| m[a][c] as f64 * (src.dim(a) / src.dim(c)) * p[c])
                .sum();
            p[a] * inner.ln()
        })
        .sum();
    let coarse = lambda.ln() - shannon_of(p) - cross;

    Ok(EntropyReport {
        order_parameter: base.from_nats(direct),
        bound: base.from_nats(lambda.ln()),
        per_sector: src
            .labels()
            .iter()
            .zip(&terms)
            .map(|(l, &v)| SectorContribution {
                label: l.to_string(),
                value: base.from_nats(v),
            })
            .collect(),
        formula_residual: base.from_nats((direct - coarse).abs()),
        log_base: base,
    })
}

/// `p_a = N_a d_a / Σ_b N_b d_b`.
pub fn infinite_temperature_state(
    sys: impl Into<Arc<AnyonSystem>>,
    multiplicities: &[i64],
) -> Result<SectorState> {
    let sys = sys.into();
    if multiplicities.len() != sys.len() {
        return Err(Error::InvalidState(format!(
            "{} multiplicities for {} sectors",
            multiplicities.len(),
            sys.len()
        )));
    }
    if let Some((i, &v)) = multiplicities.iter().enumerate().find(|(_, &v)| v <= 0) {
        return Err(Error::NonPositiveMultiplicity {
            label: sys.label(i).to_string(),
            value: v,
        });
    }
    let weights: Vec<f64> = multiplicities
        .iter()
        .zip(sys.dims())
        .map(|(&n, d)| n as f64 * d)
        .collect();
    let total: f64 = weights.iter().sum();
    let probs = weights.into_iter().map(|w| w / total).collect();
    Ok(SectorState::from_parts(sys, probs))
}

/// `p̄_a = d_a² / D²`.
pub fn symmetric_state(sys: impl Into<Arc<AnyonSystem>>) -> SectorState {
    let sys = sys.into();
    let total = sys.total_dim_sq();
    let probs = sys.dims().iter().map(|d| d * d / total).collect();
    SectorState::from_parts(sys, probs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub direction: usize,
    pub epsilon: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationScan {
    /// Ordered by direction index, then by the order of the requested epsilons.
    pub points: Vec<ScanPoint>,
    /// Least-squares slope of `ln S` against `ln |ε|` per direction; `None`
    /// when fewer than two points have `S > 0` and `ε ≠ 0`.
    pub exponents: Vec<Option<f64>>,
}

/// Order parameter along `base + ε·direction` for every direction and epsilon.
pub fn perturbation_scan(
    b: &BranchingData,
    base: &SectorState,
    directions: &[Vec<f64>],
    epsilons: &[f64],
) -> Result<PerturbationScan> {
    ensure_same(b.source(), base.system())?;
    let tol = Tolerance::DEFAULT;
    let mut points = Vec::with_capacity(directions.len() * epsilons.len());
    let mut exponents = Vec::with_capacity(directions.len());
    for (k, dir) in directions.iter().enumerate() {
        if dir.len() != base.probs().len() {
            return Err(Error::InvalidState(format!(
                "direction {k} has {} entries for {} sectors",
                dir.len(),
                base.probs().len()
            )));
        }
        let sum: f64 = dir.iter().sum();
        if !tol.close(sum, 0.0) {
            return Err(Error::InvalidState(format!(
                "direction {k} sums to {sum}, expected 0"
            )));
        }
        let mut fit = Vec::new();
        for &eps in epsilons {
            let probs: Vec<f64> = base
                .probs()
                .iter()
                .zip(dir)
                .map(|(p, d)| p + eps * d)
                .collect();
            if let Some(i) = probs.iter().position(|x| !(0.0..=1.0).contains(x)) {
                return Err(Error::SimplexViolation(format!(
                    "direction {k}, epsilon {eps}: coordinate {i} is {}",
                    probs[i]
                )));
            }
            let state = SectorState::from_parts(base.system().clone(), probs);
            let s = order_parameter(b, &state, LogBase::Natural)?.order_parameter;
            if eps != 0.0 && s > 0.0 {
                fit.push((eps.abs().ln(), s.ln()));
            }
            points.push(ScanPoint {
                direction: k,
                epsilon: eps,
                entropy: s,
            });
        }
        exponents.push(least_squares_slope(&fit));
    }
    Ok(PerturbationScan { points, exponents })
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}
