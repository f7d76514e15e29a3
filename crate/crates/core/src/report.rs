use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// One violated invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EmptyLabel {
        index: usize,
    },
    DuplicateLabel {
        label: String,
    },
    VacuumDimension {
        dim: f64,
    },
    DimensionBelowOne {
        label: String,
        dim: f64,
    },
    NonFiniteDimension {
        label: String,
    },
    DualNotInvolutive {
        label: String,
    },
    DualDimensionMismatch {
        label: String,
        dual: String,
    },
    DualOfVacuum {
        dual: String,
    },
    VacuumTwist {
        twist: String,
    },
    /// The source or condensed system itself is invalid; nested entries follow.
    System {
        role: String,
        violation: Box<Violation>,
    },
    /// Row of the source vacuum is not the indicator of `φ`.
    VacuumRow {
        condensed: String,
        value: u32,
    },
    /// `d_a = Σ_t n[a][t] d_t` fails for source sector `a`.
    RestrictionDimension {
        label: String,
        expected: f64,
        found: f64,
    },
    /// `λ d_t = Σ_a n[a][t] d_a` fails for condensed sector `t`.
    LiftDimension {
        label: String,
        expected: f64,
        found: f64,
    },
    /// `λ` differs from `D²_A / D²_T`.
    IndexMismatch {
        index: f64,
        ratio: f64,
    },
    AntiparticleSymmetry {
        source: String,
        condensed: String,
    },
    BosonCondition {
        label: String,
        twist: String,
    },
    EmptyColumn {
        label: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyLabel { index } => write!(f, "label #{index} is empty"),
            Violation::DuplicateLabel { label } => {
                write!(f, "label {label} appears more than once")
            }
            Violation::VacuumDimension { dim } => write!(f, "vacuum dimension ≠ 1 (got {dim})"),
            Violation::DimensionBelowOne { label, dim } => {
                write!(f, "dimension of {label} is {dim} < 1")
            }
            Violation::NonFiniteDimension { label } => {
                write!(f, "dimension of {label} is not finite")
            }
            Violation::DualNotInvolutive { label } => {
                write!(f, "dual of dual of {label} is not {label}")
            }
            Violation::DualDimensionMismatch { label, dual } => {
                write!(f, "{label} and its dual {dual} have different dimensions")
            }
            Violation::DualOfVacuum { dual } => write!(f, "dual of the vacuum is {dual}"),
            Violation::VacuumTwist { twist } => write!(f, "vacuum twist is {twist}, expected 0"),
            Violation::System { role, violation } => write!(f, "{role} system: {violation}"),
            Violation::VacuumRow { condensed, value } => write!(
                f,
                "source vacuum restricts onto {condensed} with multiplicity {value}"
            ),
            Violation::RestrictionDimension {
                label,
                expected,
                found,
            } => write!(
                f,
                "restriction dimension fails for {label}: d = {expected}, Σ n d_t = {found}"
            ),
            Violation::LiftDimension {
                label,
                expected,
                found,
            } => write!(
                f,
                "lift dimension fails for {label}: d = {expected}, (1/λ) Σ n d_a = {found}"
            ),
            Violation::IndexMismatch { index, ratio } => {
                write!(f, "index {index} differs from D²_A/D²_T = {ratio}")
            }
            Violation::AntiparticleSymmetry { source, condensed } => write!(
                f,
                "n[{source}][{condensed}] differs from the entry of the antiparticles"
            ),
            Violation::BosonCondition { label, twist } => {
                write!(f, "{label} condenses but has twist {twist}")
            }
            Violation::EmptyColumn { label } => {
                write!(f, "condensed sector {label} receives no restriction")
            }
        }
    }
}

/// Result of a validation pass.
///
/// Optional data that was not supplied is listed under `unchecked`; it never
/// counts as passed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub unchecked: Vec<String>,
    pub residuals: BTreeMap<String, f64>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, violation: Violation) {
        self.violations.push(violation);
    }

    pub(crate) fn unchecked(&mut self, what: impl Into<String>) {
        self.unchecked.push(what.into());
    }
}
