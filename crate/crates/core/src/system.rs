//! Anyon systems: ordered sector labels with quantum dimensions, plus optional
//! antiparticle map and topological twists.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{ValidationReport, Violation};

/// Absolute tolerance used by every consistency check.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance(1e-9);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Tolerance(value))
        } else {
            Err(Error::malformed(
                "tolerance",
                format!("must be > 0, got {value}"),
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn close(self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SectorLabel(String);

impl SectorLabel {
    pub fn new(name: impl Into<String>) -> Self {
        SectorLabel(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for SectorLabel {
    fn from(s: &str) -> Self {
        SectorLabel(s.to_owned())
    }
}

impl From<String> for SectorLabel {
    fn from(s: String) -> Self {
        SectorLabel(s)
    }
}

/// A set of superselection sectors.
///
/// Label order is fixed at construction; every vector or matrix in the crate
/// that is indexed by sectors uses this order.
#[derive(Debug, Clone, PartialEq)]
pub struct AnyonSystem {
    labels: Vec<SectorLabel>,
    dims: Vec<f64>,
    vacuum: usize,
    dual: Option<Vec<usize>>,
    twist: Option<Vec<Rational64>>,
}

impl AnyonSystem {
    pub fn new<L: Into<SectorLabel>>(
        labels: impl IntoIterator<Item = L>,
        dims: Vec<f64>,
        vacuum: &str,
    ) -> Result<Self> {
        let labels: Vec<SectorLabel> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::malformed(
                "labels",
                "at least the vacuum is required",
            ));
        }
        if labels.len() != dims.len() {
            return Err(Error::malformed(
                "dims",
                format!("{} dims for {} labels", dims.len(), labels.len()),
            ));
        }
        let vacuum = labels
            .iter()
            .position(|l| l.as_str() == vacuum)
            .ok_or_else(|| Error::malformed("vacuum", format!("{vacuum:?} is not a label")))?;
        Ok(AnyonSystem {
            labels,
            dims,
            vacuum,
            dual: None,
            twist: None,
        })
    }

    /// Attaches the antiparticle map; every label must appear exactly once as a key.
    pub fn with_dual<'a>(
        mut self,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut dual = vec![None; self.len()];
        for (from, to) in pairs {
            let i = self.require("dual", from)?;
            let j = self.require("dual", to)?;
            if dual[i].replace(j).is_some() {
                return Err(Error::malformed("dual", format!("{from} listed twice")));
            }
        }
        let dual = self.complete("dual", dual)?;
        self.dual = Some(dual);
        Ok(self)
    }

    /// Attaches twists as fractions of a full turn, `θ_a = exp(2πi·twist)`.
    pub fn with_twist<'a>(
        mut self,
        twists: impl IntoIterator<Item = (&'a str, Rational64)>,
    ) -> Result<Self> {
        let mut twist = vec![None; self.len()];
        for (label, value) in twists {
            let i = self.require("twist", label)?;
            if twist[i].replace(value).is_some() {
                return Err(Error::malformed("twist", format!("{label} listed twice")));
            }
        }
        let twist = self.complete("twist", twist)?;
        self.twist = Some(twist);
        Ok(self)
    }

    /// Same data as `self` but without the antiparticle map and twists.
    pub fn bare(&self) -> Self {
        AnyonSystem {
            dual: None,
            twist: None,
            ..self.clone()
        }
    }

    fn require(&self, field: &str, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::malformed(field, format!("unknown label {label:?}")))
    }

    fn complete<T>(&self, field: &str, values: Vec<Option<T>>) -> Result<Vec<T>> {
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    Error::malformed(
                        field,
                        format!("missing label {:?}", self.labels[i].as_str()),
                    )
                })
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[SectorLabel] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &SectorLabel {
        &self.labels[index]
    }

    pub fn label_names(&self) -> Vec<String> {
        self.labels.iter().map(|l| l.0.clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.as_str() == label)
    }

    pub fn dims(&self) -> &[f64] {
        &self.dims
    }

    pub fn dim(&self, index: usize) -> f64 {
        self.dims[index]
    }

    pub fn vacuum(&self) -> usize {
        self.vacuum
    }

    pub fn vacuum_label(&self) -> &SectorLabel {
        &self.labels[self.vacuum]
    }

    /// Index of the antiparticle, when the map is present.
    pub fn dual(&self) -> Option<&[usize]> {
        self.dual.as_deref()
    }

    pub fn twist(&self) -> Option<&[Rational64]> {
        self.twist.as_deref()
    }

    /// `true` iff the twist of `index` is a whole number of turns. `None` when
    /// twists were not supplied.
    pub fn is_boson(&self, index: usize) -> Option<bool> {
        self.twist.as_ref().map(|t| is_integral(&t[index]))
    }

    /// `D² = Σ_a d_a²`.
    pub fn total_dim_sq(&self) -> f64 {
        self.dims.iter().map(|d| d * d).sum()
    }

    /// Checks every invariant of the system. An empty report means valid.
    pub fn validate(&self, tol: Tolerance) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut seen = HashSet::new();
        for (i, label) in self.labels.iter().enumerate() {
            if label.as_str().is_empty() {
                report.push(Violation::EmptyLabel { index: i });
            } else if !seen.insert(label.as_str()) {
                report.push(Violation::DuplicateLabel {
                    label: label.0.clone(),
                });
            }
        }

        for (label, &dim) in self.labels.iter().zip(&self.dims) {
            if !dim.is_finite() {
                report.push(Violation::NonFiniteDimension {
                    label: label.0.clone(),
                });
            } else if dim < 1.0 - tol.value() {
                report.push(Violation::DimensionBelowOne {
                    label: label.0.clone(),
                    dim,
                });
            }
        }
        let vacuum_dim = self.dims[self.vacuum];
        if !tol.close(vacuum_dim, 1.0) {
            report.push(Violation::VacuumDimension { dim: vacuum_dim });
        }

        match &self.dual {
            Some(dual) => {
                for (a, &abar) in dual.iter().enumerate() {
                    if dual[abar] != a {
                        report.push(Violation::DualNotInvolutive {
                            label: self.labels[a].0.clone(),
                        });
                    }
                    if !tol.close(self.dims[a], self.dims[abar]) {
                        report.push(Violation::DualDimensionMismatch {
                            label: self.labels[a].0.clone(),
                            dual: self.labels[abar].0.clone(),
                        });
                    }
                }
                if dual[self.vacuum] != self.vacuum {
                    report.push(Violation::DualOfVacuum {
                        dual: self.labels[dual[self.vacuum]].0.clone(),
                    });
                }
            }
            None => report.unchecked("antiparticle map"),
        }

        match &self.twist {
            Some(twist) => {
                if !is_integral(&twist[self.vacuum]) {
                    report.push(Violation::VacuumTwist {
                        twist: twist[self.vacuum].to_string(),
                    });
                }
            }
            None => report.unchecked("twists"),
        }
        report
    }

    /// Antiparticle map as label pairs, for serialization.
    pub fn dual_pairs(&self) -> Option<Vec<(String, String)>> {
        self.dual.as_ref().map(|d| {
            d.iter()
                .enumerate()
                .map(|(a, &b)| (self.labels[a].0.clone(), self.labels[b].0.clone()))
                .collect()
        })
    }

    pub fn twist_pairs(&self) -> Option<Vec<(String, Rational64)>> {
        self.twist.as_ref().map(|t| {
            t.iter()
                .enumerate()
                .map(|(a, &v)| (self.labels[a].0.clone(), v))
                .collect()
        })
    }

    /// Reorders the sectors: sector `order[i]` of `self` becomes sector `i`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let mut inverse = HashMap::new();
        for (new, &old) in order.iter().enumerate() {
            if old >= self.len() || inverse.insert(old, new).is_some() {
                return Err(Error::malformed("order", "not a permutation"));
            }
        }
        if inverse.len() != self.len() {
            return Err(Error::malformed("order", "not a permutation"));
        }
        Ok(AnyonSystem {
            labels: order.iter().map(|&i| self.labels[i].clone()).collect(),
            dims: order.iter().map(|&i| self.dims[i]).collect(),
            vacuum: inverse[&self.vacuum],
            dual: self
                .dual
                .as_ref()
                .map(|d| order.iter().map(|&i| inverse[&d[i]]).collect()),
            twist: self
                .twist
                .as_ref()
                .map(|t| order.iter().map(|&i| t[i]).collect()),
        })
    }
}

fn is_integral(r: &Rational64) -> bool {
    r.is_integer()
}
