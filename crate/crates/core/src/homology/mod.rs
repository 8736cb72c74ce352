//! Graded polynomial cohomology of a complex by exact linear algebra.
//!
//! Every differential preserves total degree (weighted degree plus slot
//! offset), so the complex splits into finite-dimensional pieces, one per
//! degree `g`, and everything here is computed degree by degree.

mod solve;

pub use solve::{
    check_integrability, condition_labels, random_polynomial, roundtrip, solve_named,
    solve_potential, split_cocycle, IntegrabilityReport, NamedConstant, NamedSolution, Potential,
    RoundtripReport, SplitConstant, SplitResult,
};

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::complexes::ComplexSpec;
use crate::error::{Error, Result};
use crate::exactalg::{
    monomials_of_weighted_degree, Monomial, Polynomial, Rational, RationalMatrix,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BasisOrder {
    /// Components ascending, monomials in descending graded-lex order.
    #[default]
    Standard,
    Reversed,
}

/// The monomial basis of one slot in one total degree.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub slot: usize,
    pub degree: u64,
    /// `(component, monomial)` with `wdeg(monomial) + offset = degree`.
    pub elements: Vec<(usize, Monomial)>,
    ncomps: usize,
    nvars: usize,
    index: BTreeMap<(usize, Monomial), usize>,
}

impl GradedBasis {
    pub fn new(spec: &ComplexSpec, slot: usize, degree: u64, order: BasisOrder) -> Self {
        let mut elements = Vec::new();
        for (j, comp) in spec.slots[slot].iter().enumerate() {
            let w = degree as i64 - comp.offset;
            if w < 0 {
                continue;
            }
            for m in monomials_of_weighted_degree(&spec.space.weights, w as u64) {
                elements.push((j, m));
            }
        }
        if order == BasisOrder::Reversed {
            elements.reverse();
        }
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        GradedBasis {
            slot,
            degree,
            elements,
            ncomps: spec.slots[slot].len(),
            nvars: spec.space.dim(),
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Coordinates of a slot element; fails when a term lies outside this
    /// degree.
    pub fn coordinates(&self, v: &[Polynomial]) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.len()];
        for (j, p) in v.iter().enumerate() {
            for (m, c) in p.terms() {
                let &i = self.index.get(&(j, m.clone())).ok_or_else(|| {
                    Error::Inhomogeneous(format!(
                        "term {m:?} in component {j} is not of total degree {}",
                        self.degree
                    ))
                })?;
                out[i] = c.clone();
            }
        }
        Ok(out)
    }

    pub fn element(&self, coords: &[Rational]) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(self.nvars); self.ncomps];
        for ((j, m), c) in self.elements.iter().zip(coords) {
            if !c.is_zero() {
                out[*j] = &out[*j] + &Polynomial::term(m.clone(), c.clone());
            }
        }
        out
    }
}

/// Matrix of `D_i` from `src` (slot `i`) to `dst` (slot `i + 1`).
pub fn differential_matrix(
    spec: &ComplexSpec,
    i: usize,
    src: &GradedBasis,
    dst: &GradedBasis,
) -> Result<RationalMatrix> {
    let d = &spec.differentials[i];
    let mut columns = Vec::with_capacity(src.len());
    for (j, m) in &src.elements {
        let mono = Polynomial::term(m.clone(), crate::exactalg::one());
        let mut image = vec![Polynomial::zero(spec.space.dim()); d.rows()];
        for (r, slot) in image.iter_mut().enumerate() {
            let op = d.get(r, *j);
            if !op.is_zero() {
                *slot = op.apply(&mono)?;
            }
        }
        columns.push(dst.coordinates(&image)?);
    }
    RationalMatrix::from_columns(dst.len(), &columns)
}

#[derive(Clone, Debug, Serialize)]
pub struct SlotCohomology {
    pub dim: usize,
    pub kernel: usize,
    pub image: usize,
    pub cohomology: usize,
    /// Cocycles spanning a complement of the image in the kernel.
    pub representatives: Vec<Vec<Polynomial>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeCohomology {
    pub degree: u64,
    pub slots: Vec<SlotCohomology>,
}

impl DegreeCohomology {
    /// `Σ(−1)^i dim C_i = Σ(−1)^i dim H^i`.
    pub fn euler_holds(&self) -> bool {
        let alt = |f: &dyn Fn(&SlotCohomology) -> usize| -> i64 {
            self.slots
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    if i % 2 == 0 {
                        f(s) as i64
                    } else {
                        -(f(s) as i64)
                    }
                })
                .sum()
        };
        alt(&|s| s.dim) == alt(&|s| s.cohomology)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub complex: String,
    pub max_degree: u64,
    pub degrees: Vec<DegreeCohomology>,
    /// `Σ_{g ≤ G} dim H^i(g)` per slot.
    pub totals: Vec<usize>,
}

impl CohomologyReport {
    /// `(degree, representative)` pairs of one slot.
    pub fn representatives(&self, slot: usize) -> Vec<(u64, &Vec<Polynomial>)> {
        self.degrees
            .iter()
            .flat_map(|d| {
                d.slots[slot]
                    .representatives
                    .iter()
                    .map(move |r| (d.degree, r))
            })
            .collect()
    }

    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.degrees
            .iter()
            .map(|d| d.slots.iter().map(|s| s.cohomology).collect())
            .collect()
    }
}

/// Brings the rows to reduced echelon form and drops zero rows.
fn row_space(rows: Vec<Vec<Rational>>, width: usize) -> Result<(Vec<Vec<Rational>>, Vec<usize>)> {
    if rows.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let r = RationalMatrix::from_rows(rows)?.rref();
    let basis = (0..r.pivots.len())
        .map(|k| r.matrix.row(k).to_vec())
        .collect();
    debug_assert!(r.matrix.cols() == width);
    Ok((basis, r.pivots))
}

/// Cohomology of slot `i` given the matrices of the incoming and outgoing
/// differentials at one degree.
fn slot_cohomology(
    basis: &GradedBasis,
    incoming: Option<&RationalMatrix>,
    outgoing: Option<&RationalMatrix>,
) -> Result<SlotCohomology> {
    let dim = basis.len();
    let (rank_out, kernel_basis) = match outgoing {
        Some(m) => m.rank_nullspace(),
        None => (
            0,
            (0..dim)
                .map(|k| {
                    let mut e = vec![Rational::zero(); dim];
                    e[k] = crate::exactalg::one();
                    e
                })
                .collect(),
        ),
    };
    let image_rows = match incoming {
        Some(m) => (0..m.cols()).map(|c| m.column(c)).collect(),
        None => Vec::new(),
    };
    let (image, pivots) = row_space(image_rows, dim)?;
    let kernel = dim - rank_out;
    let cohomology = kernel
        .checked_sub(image.len())
        .ok_or_else(|| Error::CompositionFailure {
            index: basis.slot.saturating_sub(1),
            next: basis.slot,
        })?;
    // reduce the kernel modulo the image, then take a reduced echelon basis
    // of what is left: image pivots are the earliest coordinates, so the
    // survivors are supported on the latest ones
    let mut reduced = Vec::new();
    for mut v in kernel_basis {
        for (row, &p) in image.iter().zip(&pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            reduced.push(v);
        }
    }
    // for a genuine complex this has exactly `cohomology` rows; when the
    // image leaves the kernel it spans (ker + im)/im instead
    let (reps, _) = row_space(reduced, dim)?;
    Ok(SlotCohomology {
        dim,
        kernel,
        image: image.len(),
        cohomology,
        representatives: reps.iter().map(|v| basis.element(v)).collect(),
    })
}

fn require_homogeneous(spec: &ComplexSpec) -> Result<()> {
    let hom = spec.verify_homogeneity()?;
    if let Some(bad) = hom.entries.iter().find(|e| !e.ok) {
        return Err(Error::Inhomogeneous(format!(
            "{}: differential {} entry ({}, {}) has weight {:?}, expected {}",
            spec.name, bad.differential, bad.row, bad.col, bad.weight, bad.expected
        )));
    }
    Ok(())
}

/// All slots at a single total degree.
pub fn degree_cohomology(
    spec: &ComplexSpec,
    degree: u64,
    order: BasisOrder,
) -> Result<DegreeCohomology> {
    let n = spec.slots.len();
    let bases: Vec<GradedBasis> = (0..n)
        .map(|i| GradedBasis::new(spec, i, degree, order))
        .collect();
    let mats = (0..n - 1)
        .map(|i| differential_matrix(spec, i, &bases[i], &bases[i + 1]))
        .collect::<Result<Vec<_>>>()?;
    let slots = (0..n)
        .map(|i| {
            let inc = if i > 0 { Some(&mats[i - 1]) } else { None };
            slot_cohomology(&bases[i], inc, mats.get(i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DegreeCohomology { degree, slots })
}

/// Representatives of slot `i` at one degree, without touching the other
/// slots.
pub(crate) fn slot_at_degree(
    spec: &ComplexSpec,
    i: usize,
    degree: u64,
) -> Result<(GradedBasis, SlotCohomology)> {
    let here = GradedBasis::new(spec, i, degree, BasisOrder::Standard);
    let inc = if i > 0 {
        let prev = GradedBasis::new(spec, i - 1, degree, BasisOrder::Standard);
        Some(differential_matrix(spec, i - 1, &prev, &here)?)
    } else {
        None
    };
    let out = if i + 1 < spec.slots.len() {
        let next = GradedBasis::new(spec, i + 1, degree, BasisOrder::Standard);
        Some(differential_matrix(spec, i, &here, &next)?)
    } else {
        None
    };
    let sc = slot_cohomology(&here, inc.as_ref(), out.as_ref())?;
    Ok((here, sc))
}

pub fn cohomology(spec: &ComplexSpec, max_degree: u64) -> Result<CohomologyReport> {
    cohomology_with_order(spec, max_degree, BasisOrder::Standard)
}

pub fn cohomology_with_order(
    spec: &ComplexSpec,
    max_degree: u64,
    order: BasisOrder,
) -> Result<CohomologyReport> {
    require_homogeneous(spec)?;
    let degrees = (0..=max_degree)
        .into_par_iter()
        .map(|g| degree_cohomology(spec, g, order))
        .collect::<Result<Vec<_>>>()?;
    let mut totals = vec![0; spec.slots.len()];
    for d in &degrees {
        for (t, s) in totals.iter_mut().zip(&d.slots) {
            *t += s.cohomology;
        }
    }
    Ok(CohomologyReport {
        complex: spec.name.clone(),
        max_degree,
        degrees,
        totals,
    })
}

pub fn euler_check(spec: &ComplexSpec, degree: u64) -> Result<bool> {
    require_homogeneous(spec)?;
    Ok(degree_cohomology(spec, degree, BasisOrder::Standard)?.euler_holds())
}
