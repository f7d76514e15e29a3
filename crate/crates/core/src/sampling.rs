//! Seeded random states and operators for property checks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::channels::{DiagonalOperator, SectorState};
use crate::system::AnyonSystem;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point on the probability simplex (normalized exponentials).
pub fn random_state<R: Rng + ?Sized>(
    system: impl Into<Arc<AnyonSystem>>,
    rng: &mut R,
) -> SectorState {
    let system = system.into();
    loop {
        let draws: Vec<f64> = (0..system.len()).map(|_| Exp1.sample(rng)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 {
            let probs = draws.into_iter().map(|x| x / total).collect();
            return SectorState::from_parts(system, probs);
        }
    }
}

/// Diagonal operator with coefficients uniform in `[-1, 1)`.
pub fn random_operator<R: Rng + ?Sized>(
    system: impl Into<Arc<AnyonSystem>>,
    rng: &mut R,
) -> DiagonalOperator {
    let system = system.into();
    let coeffs = (0..system.len())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    DiagonalOperator::new(system, coeffs).expect("finite coefficients of the right length")
}
