//! Branching data of a condensable algebra.
#![allow(clippy::needless_range_loop)]

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::{ValidationReport, Violation};
use crate::system::{AnyonSystem, Tolerance};

/// Restriction multiplicities `n[a][t]` from a source system `A` onto a
/// condensed system `T`.
///
/// Rows are indexed by source sectors and columns by condensed sectors, both in
/// label order. Construction only checks the shape; call
/// [`BranchingData::validate`] for the consistency equations.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchingData {
    source: Arc<AnyonSystem>,
    condensed: Arc<AnyonSystem>,
    n: Vec<Vec<u32>>,
}

impl BranchingData {
    pub fn new(
        source: impl Into<Arc<AnyonSystem>>,
        condensed: impl Into<Arc<AnyonSystem>>,
        n: Vec<Vec<u32>>,
    ) -> Result<Self> {
        let source = source.into();
        let condensed = condensed.into();
        if n.len() != source.len() {
            return Err(Error::malformed(
                "n",
                format!("{} rows for {} source labels", n.len(), source.len()),
            ));
        }
        if let Some((a, row)) = n
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != condensed.len())
        {
            return Err(Error::malformed(
                format!("n[{a}]"),
                format!(
                    "{} entries for {} condensed labels",
                    row.len(),
                    condensed.len()
                ),
            ));
        }
        Ok(BranchingData {
            source,
            condensed,
            n,
        })
    }

    pub fn source(&self) -> &Arc<AnyonSystem> {
        &self.source
    }

    pub fn condensed(&self) -> &Arc<AnyonSystem> {
        &self.condensed
    }

    pub fn n(&self) -> &[Vec<u32>] {
        &self.n
    }

    pub fn entry(&self, a: usize, t: usize) -> u32 {
        self.n[a][t]
    }

    /// Multiplicity as a float, for channel arithmetic.
    pub(crate) fn weight(&self, a: usize, t: usize) -> f64 {
        f64::from(self.n[a][t])
    }

    /// The algebra object `Σ_a n[a][φ] a`.
    pub fn algebra(&self) -> CondensableAlgebraView {
        let phi = self.condensed.vacuum();
        CondensableAlgebraView {
            coefficients: self.n.iter().map(|row| row[phi]).collect(),
        }
    }

    /// Jones index `λ = Σ_a n[a][φ] d_a`, the quantum dimension of the condensate.
    pub fn jones_index(&self) -> f64 {
        let phi = self.condensed.vacuum();
        self.n
            .iter()
            .zip(self.source.dims())
            .map(|(row, d)| f64::from(row[phi]) * d)
            .sum()
    }

    /// `D²_A / D²_T`, which must agree with [`jones_index`](Self::jones_index).
    pub fn index_ratio(&self) -> f64 {
        self.source.total_dim_sq() / self.condensed.total_dim_sq()
    }

    /// `M'[a][b] = Σ_t n[a][t] n[b][t]`.
    pub fn mprime_matrix(&self) -> Vec<Vec<u64>> {
        let rows = self.source.len();
        let mut m = vec![vec![0u64; rows]; rows];
        for a in 0..rows {
            for b in a..rows {
                let v: u64 = self.n[a]
                    .iter()
                    .zip(&self.n[b])
                    .map(|(&x, &y)| u64::from(x) * u64::from(y))
                    .sum();
                m[a][b] = v;
                m[b][a] = v;
            }
        }
        m
    }

    /// A Lagrangian algebra condenses every source sector and has `λ = D²_A`.
    pub fn is_lagrangian(&self, tol: Tolerance) -> bool {
        let phi = self.condensed.vacuum();
        self.n.iter().all(|row| row[phi] != 0)
            && tol.close(self.jones_index(), self.source.total_dim_sq())
    }

    /// Checks every branching invariant.
    ///
    /// The residual `|λ − D²_A/D²_T|` is always recorded under `"index"`.
    pub fn validate(&self, tol: Tolerance) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (role, sys) in [("source", &self.source), ("condensed", &self.condensed)] {
            let inner = sys.validate(tol);
            for v in inner.violations {
                report.push(Violation::System {
                    role: role.to_owned(),
                    violation: Box::new(v),
                });
            }
        }

        let src = &self.source;
        let cnd = &self.condensed;
        let phi = cnd.vacuum();
        let one = src.vacuum();

        for (t, &v) in self.n[one].iter().enumerate() {
            let expected = u32::from(t == phi);
            if v != expected {
                report.push(Violation::VacuumRow {
                    condensed: cnd.label(t).to_string(),
                    value: v,
                });
            }
        }

        for a in 0..src.len() {
            let found: f64 = (0..cnd.len()).map(|t| self.weight(a, t) * cnd.dim(t)).sum();
            if !tol.close(found, src.dim(a)) {
                report.push(Violation::RestrictionDimension {
                    label: src.label(a).to_string(),
                    expected: src.dim(a),
                    found,
                });
            }
        }

        let lambda = self.jones_index();
        for t in 0..cnd.len() {
            let weighted: f64 = (0..src.len()).map(|a| self.weight(a, t) * src.dim(a)).sum();
            let found = weighted / lambda;
            if !tol.close(found, cnd.dim(t)) {
                report.push(Violation::LiftDimension {
                    label: cnd.label(t).to_string(),
                    expected: cnd.dim(t),
                    found,
                });
            }
            if weighted == 0.0 {
                report.push(Violation::EmptyColumn {
                    label: cnd.label(t).to_string(),
                });
            }
        }

        let ratio = self.index_ratio();
        let residual = (lambda - ratio).abs();
        report.residuals.insert("index".to_owned(), residual);
        if residual.is_nan() || residual > tol.value() {
            report.push(Violation::IndexMismatch {
                index: lambda,
                ratio,
            });
        }

        match (src.dual(), cnd.dual()) {
            (Some(sd), Some(cd)) => {
                for a in 0..src.len() {
                    for t in 0..cnd.len() {
                        if self.n[a][t] != self.n[sd[a]][cd[t]] {
                            report.push(Violation::AntiparticleSymmetry {
                                source: src.label(a).to_string(),
                                condensed: cnd.label(t).to_string(),
                            });
                        }
                    }
                }
            }
            _ => report.unchecked("antiparticle symmetry of n"),
        }

        match src.twist() {
            Some(twist) => {
                for a in 0..src.len() {
                    if self.n[a][phi] > 0 && !twist[a].is_integer() {
                        report.push(Violation::BosonCondition {
                            label: src.label(a).to_string(),
                            twist: twist[a].to_string(),
                        });
                    }
                }
            }
            None => report.unchecked("boson condition"),
        }
        report
    }
}

/// Coefficients of the algebra object `Σ_a n_a a`, i.e. the `φ` column of a
/// branching matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensableAlgebraView {
    coefficients: Vec<u32>,
}

impl CondensableAlgebraView {
    /// The coefficient of the source vacuum must be 1.
    pub fn new(source: &AnyonSystem, coefficients: Vec<u32>) -> Result<Self> {
        if coefficients.len() != source.len() {
            return Err(Error::InvalidVacuumColumn(format!(
                "{} coefficients for {} labels",
                coefficients.len(),
                source.len()
            )));
        }
        if coefficients[source.vacuum()] != 1 {
            return Err(Error::InvalidVacuumColumn(format!(
                "coefficient of the vacuum {} is {}, expected 1",
                source.vacuum_label(),
                coefficients[source.vacuum()]
            )));
        }
        Ok(CondensableAlgebraView { coefficients })
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.coefficients
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn toric() -> AnyonSystem {
        AnyonSystem::new(["1", "Y", "X", "Z"], vec![1.0; 4], "1").unwrap()
    }

    fn z2_condensed() -> AnyonSystem {
        AnyonSystem::new(["phi", "XX"], vec![1.0; 2], "phi").unwrap()
    }

    #[test]
    fn index_values() {
        let tol = Tolerance::DEFAULT;
        for (id, expected) in [
            ("toric-1Y", 2.0),
            ("repS3-1X", 2.0),
            ("repS3-1Y", 3.0),
            ("repS3-lagrangian", 6.0),
        ] {
            let b = catalog::entry(id).unwrap().branching;
            assert_eq!(b.jones_index(), expected, "{id}");
            assert!(tol.close(b.index_ratio(), expected));
        }
    }

    #[test]
    fn toric_branching_is_valid() {
        let b = BranchingData::new(
            toric(),
            z2_condensed(),
            vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        let report = b.validate(Tolerance::DEFAULT);
        assert!(report.is_valid(), "{report:?}");
        assert_eq!(report.residuals["index"], 0.0);
        assert!(report.unchecked.contains(&"boson condition".to_owned()));
    }

    #[test]
    fn wrong_restriction_breaks_lift_equation() {
        // Y restricted onto the non-vacuum sector: λ drops to 1 and d_φ, d_XX no longer balance.
        let b = BranchingData::new(
            toric(),
            z2_condensed(),
            vec![vec![1, 0], vec![0, 1], vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        let report = b.validate(Tolerance::DEFAULT);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::LiftDimension { label, .. } if label == "XX")));
    }

    #[test]
    fn rep_s3_splitting_is_valid() {
        let b = catalog::entry("repS3-1X").unwrap().branching;
        assert!(b.validate(Tolerance::DEFAULT).is_valid());
        let y = b.source().index_of("Y").unwrap();
        assert_eq!(b.n()[y], vec![0, 1, 1]);
    }

    #[test]
    fn vacuum_row_and_empty_column_reported() {
        let cnd = AnyonSystem::new(["phi", "t", "u"], vec![1.0; 3], "phi").unwrap();
        let b = BranchingData::new(
            toric(),
            cnd,
            vec![vec![1, 1, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 1, 0]],
        )
        .unwrap();
        let report = b.validate(Tolerance::DEFAULT);
        assert!(report.violations.iter().any(
            |v| matches!(v, Violation::VacuumRow { condensed, value: 1 } if condensed == "t")
        ));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::EmptyColumn { label } if label == "u")));
    }

    #[test]
    fn boson_condition_uses_twists() {
        use num_rational::Rational64;
        let src = toric()
            .with_twist([
                ("1", Rational64::from_integer(0)),
                ("Y", Rational64::from_integer(0)),
                ("X", Rational64::new(1, 2)),
                ("Z", Rational64::from_integer(0)),
            ])
            .unwrap();
        // condensing the fermion X
        let b = BranchingData::new(
            src,
            z2_condensed(),
            vec![vec![1, 0], vec![0, 1], vec![1, 0], vec![0, 1]],
        )
        .unwrap();
        let report = b.validate(Tolerance::DEFAULT);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::BosonCondition { label, .. } if label == "X")));
    }

    #[test]
    fn antiparticle_symmetry_checked_when_both_duals_present() {
        let src = toric()
            .with_dual([("1", "1"), ("Y", "Y"), ("X", "X"), ("Z", "Z")])
            .unwrap();
        let cnd = z2_condensed()
            .with_dual([("phi", "XX"), ("XX", "phi")])
            .unwrap();
        let b = BranchingData::new(
            src,
            cnd,
            vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        let report = b.validate(Tolerance::DEFAULT);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::AntiparticleSymmetry { .. })));
    }

    #[test]
    fn shape_is_checked() {
        let err = BranchingData::new(toric(), z2_condensed(), vec![vec![1, 0]; 3]).unwrap_err();
        assert!(err.to_string().contains("3 rows"));
        let err = BranchingData::new(
            toric(),
            z2_condensed(),
            vec![vec![1, 0], vec![1], vec![0, 1], vec![0, 1]],
        )
        .unwrap_err();
        assert!(err.to_string().contains("n[1]"));
    }

    #[test]
    fn mprime_examples() {
        let toric = catalog::entry("toric-1Y").unwrap().branching;
        assert_eq!(
            toric.mprime_matrix(),
            vec![
                vec![1, 1, 0, 0],
                vec![1, 1, 0, 0],
                vec![0, 0, 1, 1],
                vec![0, 0, 1, 1]
            ]
        );
        let z4 = catalog::entry("z4-full").unwrap().branching;
        assert!(z4.mprime_matrix().iter().flatten().all(|&v| v == 1));
        let trivial = catalog::entry("repS3-trivial").unwrap().branching;
        let m = trivial.mprime_matrix();
        for (a, row) in m.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                assert_eq!(v, u64::from(a == b));
            }
        }
    }

    #[test]
    fn lagrangian_classification() {
        let tol = Tolerance::DEFAULT;
        assert!(catalog::entry("repS3-lagrangian")
            .unwrap()
            .branching
            .is_lagrangian(tol));
        assert!(!catalog::entry("toric-1Y")
            .unwrap()
            .branching
            .is_lagrangian(tol));
        assert!(catalog::entry("z5-full")
            .unwrap()
            .branching
            .is_lagrangian(tol));
    }

    #[test]
    fn algebra_view_requires_unit_vacuum() {
        let sys = toric();
        assert!(CondensableAlgebraView::new(&sys, vec![1, 1, 0, 0]).is_ok());
        assert!(CondensableAlgebraView::new(&sys, vec![2, 1, 0, 0]).is_err());
        assert!(CondensableAlgebraView::new(&sys, vec![1, 1, 0]).is_err());
    }
}
