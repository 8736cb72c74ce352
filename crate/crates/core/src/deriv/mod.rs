//! Exterior calculus over a coframe and the cancellation construction that
//! turns the de Rham complex into the Rumin and Engel complexes.
//!
//! A [`BundleComplex`] is a complex whose components are oriented coframe
//! basis forms. [`cancel_pair`] removes a pair of components `A ⊂ C_i`,
//! `A' ⊂ C_{i+1}` joined by an invertible block `α` of the differential and
//! replaces the middle map by `δ − γ α⁻¹ β`:
//!
//! ```text
//!           [δ γ]
//!  B ⊕ A ───[β α]──→ B' ⊕ A'      becomes      B ──(δ − γα⁻¹β)──→ B'
//! ```
//!
//! The incoming differential is projected onto `B` and the outgoing one is
//! restricted to `B'`.

mod cancel;
mod forms;

pub use cancel::{
    cancel_pair, derive_complex, invert_unipotent, CancellationRecord, CancellationStep,
    Derivation, DerivationComparison, DeriveTarget, EntryRelation, Relation,
};
pub use forms::{exterior_d, rumin_lift, sort_with_sign, Form};

use crate::complexes::{ComplexSpec, Component};
use crate::error::{Error, Result};
use crate::frames::{Frame, Space};
use crate::weyl::{DiffOp, OpMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleComponent {
    pub label: String,
    /// Coframe indices in the orientation used for this component.
    pub basis: Vec<usize>,
    pub offset: i64,
}

#[derive(Clone, Debug)]
pub struct BundleComplex {
    pub frame: String,
    pub space: Space,
    pub coframe_labels: Vec<String>,
    pub slots: Vec<Vec<BundleComponent>>,
    pub differentials: Vec<OpMatrix>,
}

fn form_label(labels: &[String], basis: &[usize]) -> String {
    if basis.is_empty() {
        "1".into()
    } else {
        basis
            .iter()
            .map(|&i| labels[i].as_str())
            .collect::<Vec<_>>()
            .join("∧")
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The de Rham complex written in the coframe basis: slot `k` holds the
/// `k`-element index sets in lexicographic order, and the differentials are
/// first-order operators in the frame fields.
pub fn de_rham_complex(frame: &Frame) -> Result<BundleComplex> {
    let cf = frame.coframe()?;
    let n = frame.nvars();
    let m = cf.len();
    let weights = cf.weights(frame);
    let slots: Vec<Vec<BundleComponent>> = (0..=m)
        .map(|k| {
            combinations(m, k)
                .into_iter()
                .map(|basis| BundleComponent {
                    label: form_label(&cf.labels, &basis),
                    offset: basis.iter().map(|&i| weights[i]).sum(),
                    basis,
                })
                .collect()
        })
        .collect();
    let mut differentials = Vec::with_capacity(m);
    for k in 0..m {
        let (src, dst) = (&slots[k], &slots[k + 1]);
        let mut d = OpMatrix::zeros(dst.len(), src.len(), n);
        for (c, comp) in src.iter().enumerate() {
            for i in 0..m {
                let mut key = vec![i];
                key.extend(&comp.basis);
                if let Some((sorted, sign)) = sort_with_sign(&key) {
                    let r = dst
                        .iter()
                        .position(|t| t.basis == sorted)
                        .expect("basis present");
                    d.add_to(r, c, &frame.fields[i].op.scale(&crate::exactalg::int(sign)));
                }
            }
            let dsig = forms::d_basis(frame, &comp.basis)?;
            for (key, g) in dsig.terms() {
                let r = dst
                    .iter()
                    .position(|t| &t.basis == key)
                    .expect("basis present");
                d.add_to(r, c, &DiffOp::multiplication(g.clone()));
            }
        }
        differentials.push(d);
    }
    let complex = BundleComplex {
        frame: frame.name.clone(),
        space: frame.space.clone(),
        coframe_labels: cf.labels.clone(),
        slots,
        differentials,
    };
    complex.check_zero_composition()?;
    Ok(complex)
}

impl BundleComplex {
    pub fn slot_sizes(&self) -> Vec<usize> {
        self.slots.iter().map(Vec::len).collect()
    }

    pub fn check_zero_composition(&self) -> Result<()> {
        for (i, pair) in self.differentials.windows(2).enumerate() {
            if !pair[1].compose(&pair[0])?.is_zero() {
                return Err(Error::CompositionFailure {
                    index: i,
                    next: i + 1,
                });
            }
        }
        Ok(())
    }

    /// Index of the component spanned by the given coframe indices (as a
    /// set, ignoring orientation).
    pub fn find(&self, slot: usize, basis: &[usize]) -> Option<usize> {
        let target = sort_with_sign(basis)?.0;
        self.slots[slot]
            .iter()
            .position(|c| sort_with_sign(&c.basis).map(|s| s.0) == Some(target.clone()))
    }

    /// Changes the orientation of a component to `basis` (a permutation of
    /// its current indices), flipping the signs of the adjacent
    /// differentials when the permutation is odd.
    pub fn reorient(&mut self, slot: usize, comp: usize, basis: &[usize]) -> Result<()> {
        let current = &self.slots[slot][comp].basis;
        let (a, sa) = sort_with_sign(current).expect("component bases have distinct indices");
        let (b, sb) = sort_with_sign(basis)
            .ok_or_else(|| Error::Parse(format!("repeated index in {basis:?}")))?;
        if a != b {
            return Err(Error::Parse(format!(
                "{basis:?} is not a reordering of {current:?}"
            )));
        }
        if sa != sb {
            let minus = -crate::exactalg::one();
            if slot > 0 {
                self.differentials[slot - 1].scale_row(comp, &minus);
            }
            if slot < self.differentials.len() {
                self.differentials[slot].scale_col(comp, &minus);
            }
        }
        let c = &mut self.slots[slot][comp];
        c.basis = basis.to_vec();
        c.label = form_label(&self.coframe_labels, basis);
        Ok(())
    }

    pub fn to_spec(&self, name: &str) -> Result<ComplexSpec> {
        let slots = self
            .slots
            .iter()
            .map(|s| {
                s.iter()
                    .map(|c| Component {
                        label: c.label.clone(),
                        offset: c.offset,
                    })
                    .collect()
            })
            .collect();
        ComplexSpec::new(
            name,
            &self.frame,
            self.space.clone(),
            slots,
            self.differentials.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Polynomial;
    use crate::frames::frame_registry;

    #[test]
    fn de_rham_slot_sizes() {
        let h = de_rham_complex(&frame_registry("heisenberg").unwrap()).unwrap();
        assert_eq!(h.slot_sizes(), vec![1, 3, 3, 1]);
        let e = de_rham_complex(&frame_registry("engel").unwrap()).unwrap();
        assert_eq!(e.slot_sizes(), vec![1, 4, 6, 4, 1]);
        assert!(de_rham_complex(&frame_registry("martinet").unwrap()).is_err());
    }

    #[test]
    fn de_rham_matches_exterior_d() {
        let f = frame_registry("engel").unwrap();
        let c = de_rham_complex(&f).unwrap();
        let g = f.space.poly("x^2*t + z*y - 3*x*z^2").unwrap();
        let h = f.space.poly("y^2 + x").unwrap();
        for k in 0..c.differentials.len() {
            for (j, comp) in c.slots[k].iter().enumerate() {
                let form = Form::basis(&comp.basis, g.clone());
                let form = if j == 0 {
                    form.add(&Form::basis(&c.slots[k].last().unwrap().basis, h.clone()))
                } else {
                    form
                };
                let mut input = vec![Polynomial::zero(4); c.slots[k].len()];
                for (i, cc) in c.slots[k].iter().enumerate() {
                    input[i] = form.coefficient(&cc.basis);
                }
                let image = c.differentials[k].apply(&input).unwrap();
                let d = exterior_d(&f, &form).unwrap();
                for (r, target) in c.slots[k + 1].iter().enumerate() {
                    assert_eq!(
                        image[r],
                        d.coefficient(&target.basis),
                        "slot {k}, target {}",
                        target.label
                    );
                }
            }
        }
    }

    #[test]
    fn flat_de_rham_is_the_plane_complex() {
        // the flat plane has no coframe registered; the Heisenberg Λ⁰ → Λ¹
        // piece still has the (X, Y, Z) shape
        let h = de_rham_complex(&frame_registry("heisenberg").unwrap()).unwrap();
        let f = frame_registry("heisenberg").unwrap();
        let d0 = &h.differentials[0];
        assert_eq!(d0.get(0, 0), f.field("X"));
        assert_eq!(d0.get(1, 0), f.field("Y"));
        assert_eq!(d0.get(2, 0), f.field("Z"));
    }

    #[test]
    fn reorientation_flips_signs() {
        let f = frame_registry("heisenberg").unwrap();
        let mut c = de_rham_complex(&f).unwrap();
        let before = c.differentials[0].get(1, 0).clone();
        let idx = c.find(2, &[1, 0]).unwrap();
        c.reorient(2, idx, &[1, 0]).unwrap();
        assert_eq!(c.slots[2][idx].label, "η∧ξ");
        c.check_zero_composition().unwrap();
        assert_eq!(c.differentials[0].get(1, 0), &before);
        assert!(c.reorient(2, idx, &[2, 0]).is_err());
    }
}
