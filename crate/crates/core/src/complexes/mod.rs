//! Complexes of differential operators: the registered ones, the complex
//! and homogeneity checks, and reduction by a commuting coordinate symmetry.

mod registry;

pub use registry::{complex_registry, COMPLEX_NAMES};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::Space;
use crate::weyl::{DiffOp, OpMatrix, OpWeight};

/// One summand of a slot. A polynomial `p` placed here has total degree
/// `wdeg(p) + offset`, and every differential preserves total degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub label: String,
    pub offset: i64,
}

#[derive(Clone, Debug)]
pub struct ComplexSpec {
    pub name: String,
    /// Frame whose fields the operators are written in.
    pub frame: String,
    pub space: Space,
    pub slots: Vec<Vec<Component>>,
    /// `differentials[i]` maps slot `i` to slot `i + 1`.
    pub differentials: Vec<OpMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionCheck {
    pub index: usize,
    pub zero: bool,
    /// `(row, col, normal form)` for each nonzero entry of the composition.
    pub offending: Vec<(usize, usize, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionReport {
    pub complex: String,
    pub checks: Vec<CompositionCheck>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryWeight {
    pub differential: usize,
    pub row: usize,
    pub col: usize,
    /// `None` for the zero operator or an inhomogeneous entry.
    pub weight: Option<i64>,
    pub zero: bool,
    pub expected: i64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomogeneityReport {
    pub complex: String,
    pub entries: Vec<EntryWeight>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexDiff {
    pub identical: bool,
    pub differences: Vec<String>,
}

impl ComplexSpec {
    pub fn new(
        name: &str,
        frame: &str,
        space: Space,
        slots: Vec<Vec<Component>>,
        differentials: Vec<OpMatrix>,
    ) -> Result<Self> {
        if differentials.len() + 1 != slots.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} slots need {} differentials, got {}",
                slots.len(),
                slots.len().saturating_sub(1),
                differentials.len()
            )));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.cols() != slots[i].len() || d.rows() != slots[i + 1].len() {
                return Err(Error::DimensionMismatch(format!(
                    "differential {i} is {}x{}, slots are {} -> {}",
                    d.rows(),
                    d.cols(),
                    slots[i].len(),
                    slots[i + 1].len()
                )));
            }
            if d.nvars() != space.dim() {
                return Err(Error::VariableMismatch {
                    left: space.dim(),
                    right: d.nvars(),
                });
            }
        }
        Ok(ComplexSpec {
            name: name.into(),
            frame: frame.into(),
            space,
            slots,
            differentials,
        })
    }

    pub fn slot_sizes(&self) -> Vec<usize> {
        self.slots.iter().map(Vec::len).collect()
    }

    pub fn offsets(&self) -> Vec<Vec<i64>> {
        self.slots
            .iter()
            .map(|s| s.iter().map(|c| c.offset).collect())
            .collect()
    }

    pub fn max_offset(&self) -> i64 {
        self.slots
            .iter()
            .flatten()
            .map(|c| c.offset)
            .max()
            .unwrap_or(0)
    }

    /// Normal form of every adjacent composition.
    pub fn verify_complex(&self) -> Result<CompositionReport> {
        let mut checks = Vec::new();
        for (i, pair) in self.differentials.windows(2).enumerate() {
            let comp = pair[1].compose(&pair[0])?;
            let offending = comp
                .iter()
                .filter(|(_, _, op)| !op.is_zero())
                .map(|(r, c, op)| (r, c, op.display(&self.space.names)))
                .collect::<Vec<_>>();
            checks.push(CompositionCheck {
                index: i,
                zero: offending.is_empty(),
                offending,
            });
        }
        let passed = checks.iter().all(|c| c.zero);
        Ok(CompositionReport {
            complex: self.name.clone(),
            checks,
            passed,
        })
    }

    /// Entry weight must equal `source offset − target offset`.
    pub fn verify_homogeneity(&self) -> Result<HomogeneityReport> {
        let mut entries = Vec::new();
        for (i, d) in self.differentials.iter().enumerate() {
            for (r, c, op) in d.iter() {
                let expected = self.slots[i][c].offset - self.slots[i + 1][r].offset;
                let w = op.weight(&self.space.weights)?;
                entries.push(EntryWeight {
                    differential: i,
                    row: r,
                    col: c,
                    weight: w.value(),
                    zero: w == OpWeight::Zero,
                    expected,
                    ok: w.fits(expected),
                });
            }
        }
        let passed = entries.iter().all(|e| e.ok);
        Ok(HomogeneityReport {
            complex: self.name.clone(),
            entries,
            passed,
        })
    }

    /// Restricts to functions independent of the killed coordinates by the
    /// substitution `∂_v ↦ 0`. Requires every coefficient to be independent
    /// of the killed variables and every operator to commute with `∂_v`.
    pub fn symmetry_reduce(&self, killed: &[&str]) -> Result<ComplexSpec> {
        let mut idx = killed
            .iter()
            .map(|v| self.space.index(v))
            .collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        let n = self.space.dim();
        for (i, d) in self.differentials.iter().enumerate() {
            for (r, c, op) in d.iter() {
                for &v in &idx {
                    if op.terms().any(|(_, p)| p.depends_on(v)) {
                        return Err(Error::Reduction(format!(
                            "differential {i} entry ({r},{c}) has a coefficient depending on {}",
                            self.space.names[v]
                        )));
                    }
                    let dv = DiffOp::partial(n, v);
                    if !op.bracket(&dv)?.is_zero() {
                        return Err(Error::Reduction(format!(
                            "differential {i} entry ({r},{c}) does not commute with ∂{}",
                            self.space.names[v]
                        )));
                    }
                }
            }
        }
        let differentials = self
            .differentials
            .iter()
            .map(|d| d.reduce(&idx))
            .collect::<Result<Vec<_>>>()?;
        let reduced = ComplexSpec {
            name: format!("{}/{}", self.name, killed.join(",")),
            frame: format!("{}/{}", self.frame, killed.join(",")),
            space: self.space.without(&idx),
            slots: self.slots.clone(),
            differentials,
        };
        let report = reduced.verify_complex()?;
        if let Some(bad) = report.checks.iter().find(|c| !c.zero) {
            return Err(Error::CompositionFailure {
                index: bad.index,
                next: bad.index + 1,
            });
        }
        Ok(reduced)
    }

    /// Structural comparison: coordinates, slot shapes, offsets and every
    /// operator entry in normal form. Labels are not compared.
    pub fn compare(&self, other: &ComplexSpec) -> ComplexDiff {
        let mut differences = Vec::new();
        if self.space != other.space {
            differences.push(format!(
                "coordinates differ: {:?}{:?} vs {:?}{:?}",
                self.space.names, self.space.weights, other.space.names, other.space.weights
            ));
        }
        if self.offsets() != other.offsets() {
            differences.push(format!(
                "slot offsets differ: {:?} vs {:?}",
                self.offsets(),
                other.offsets()
            ));
        }
        if differences.is_empty() {
            for (i, (a, b)) in self
                .differentials
                .iter()
                .zip(&other.differentials)
                .enumerate()
            {
                for (r, c, op) in a.iter() {
                    let theirs = b.get(r, c);
                    if op != theirs {
                        differences.push(format!(
                            "differential {i} entry ({r},{c}): {} vs {}",
                            op.display(&self.space.names),
                            theirs.display(&other.space.names)
                        ));
                    }
                }
            }
        }
        ComplexDiff {
            identical: differences.is_empty(),
            differences,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_complexes_are_complexes() {
        for name in COMPLEX_NAMES {
            let spec = complex_registry(name).unwrap();
            let report = spec.verify_complex().unwrap();
            assert!(report.passed, "{name}: {:?}", report.checks);
            assert_eq!(report.checks.len(), spec.slots.len() - 2);
            let hom = spec.verify_homogeneity().unwrap();
            assert!(
                hom.passed,
                "{name}: {:?}",
                hom.entries.iter().filter(|e| !e.ok).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn mutated_grushin1_is_caught() {
        let mut spec = complex_registry("grushin1").unwrap();
        let frame = crate::frames::frame_registry("grushin1").unwrap();
        // drop the Z from −(XY + Z)
        spec.differentials[1].set(0, 0, frame.op("-XY").unwrap());
        let report = spec.verify_complex().unwrap();
        assert!(!report.passed);
        let bad = &report.checks[0];
        assert!(!bad.zero);
        assert_eq!(bad.offending.len(), 1);
        assert_eq!(bad.offending[0].0, 0);
    }

    #[test]
    fn homogeneity_weights() {
        let engel = complex_registry("engel").unwrap();
        let hom = engel.verify_homogeneity().unwrap();
        let first: Vec<Option<i64>> = hom
            .entries
            .iter()
            .filter(|e| e.differential == 0)
            .map(|e| e.weight)
            .collect();
        assert_eq!(first, vec![Some(-1), Some(-1)]);

        let g2 = complex_registry("grushin2").unwrap();
        let hom = g2.verify_homogeneity().unwrap();
        for e in hom.entries.iter().filter(|e| e.differential == 1) {
            let want = if e.row == 0 { -3 } else { -2 };
            assert_eq!(e.weight, Some(want), "entry ({}, {})", e.row, e.col);
        }
    }

    #[test]
    fn wrong_offset_is_caught() {
        let mut spec = complex_registry("rumin").unwrap();
        spec.slots[2][1].offset = 4;
        let hom = spec.verify_homogeneity().unwrap();
        assert!(!hom.passed);
        assert!(hom
            .entries
            .iter()
            .any(|e| !e.ok && e.differential == 1 && e.row == 1));
    }

    #[test]
    fn reductions_land_on_registry_complexes() {
        let cases = [
            ("rumin", vec!["t"], "grushin1"),
            ("engel", vec!["t"], "martinet"),
            ("engel", vec!["z", "t"], "grushin2"),
        ];
        for (from, kill, to) in cases {
            let reduced = complex_registry(from)
                .unwrap()
                .symmetry_reduce(&kill)
                .unwrap();
            let diff = reduced.compare(&complex_registry(to).unwrap());
            assert!(diff.identical, "{from} / {kill:?}: {:?}", diff.differences);
        }
    }

    #[test]
    fn reduction_rejects_dependence() {
        // x appears in the coefficients of the Engel operators
        let err = complex_registry("engel")
            .unwrap()
            .symmetry_reduce(&["x"])
            .unwrap_err();
        assert!(matches!(err, Error::Reduction(_)));
        assert!(complex_registry("engel")
            .unwrap()
            .symmetry_reduce(&["q"])
            .is_err());
    }
}
