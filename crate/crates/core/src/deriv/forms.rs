use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactalg::{Polynomial, Rational};
use crate::frames::Frame;

/// Sorts an index list, returning the permutation sign. `None` when an index
/// repeats, i.e. the wedge product vanishes.
pub fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = indices.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Exterior form `Σ_I g_I σ^I` over a coframe, keyed by strictly increasing
/// index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    nvars: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Polynomial>,
}

impl Form {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        Form {
            nvars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// `g · σ^{i_1}∧…∧σ^{i_k}` with the indices in any order.
    pub fn basis(indices: &[usize], g: Polynomial) -> Self {
        let mut f = Form::zero(g.nvars(), indices.len());
        if let Some((sorted, sign)) = sort_with_sign(indices) {
            f.add_term(sorted, g.scale(&Rational::from_integer(sign.into())));
        }
        f
    }

    fn add_term(&mut self, key: Vec<usize>, g: Polynomial) {
        if g.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&key) {
            Some(old) => &old + &g,
            None => g,
        };
        if !sum.is_zero() {
            self.coeffs.insert(key, sum);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Polynomial)> + '_ {
        self.coeffs.iter()
    }

    /// Coefficient against the oriented basis element `σ^{i_1}∧…` (indices
    /// in the given order).
    pub fn coefficient(&self, indices: &[usize]) -> Polynomial {
        match sort_with_sign(indices) {
            Some((sorted, sign)) => self.coeffs.get(&sorted).map_or_else(
                || Polynomial::zero(self.nvars),
                |g| g.scale(&Rational::from_integer(sign.into())),
            ),
            None => Polynomial::zero(self.nvars),
        }
    }

    pub fn add(&self, other: &Form) -> Form {
        assert_eq!(
            self.degree, other.degree,
            "adding forms of different degree"
        );
        let mut out = self.clone();
        for (k, g) in &other.coeffs {
            out.add_term(k.clone(), g.clone());
        }
        out
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Form {
        let mut out = Form::zero(self.nvars, self.degree);
        for (k, g) in &self.coeffs {
            out.add_term(k.clone(), g * p);
        }
        out
    }

    pub fn wedge(&self, other: &Form) -> Form {
        let mut out = Form::zero(self.nvars, self.degree + other.degree);
        for (i, g) in &self.coeffs {
            for (j, h) in &other.coeffs {
                let joined: Vec<usize> = i.iter().chain(j).copied().collect();
                if let Some((sorted, sign)) = sort_with_sign(&joined) {
                    out.add_term(sorted, (g * h).scale(&Rational::from_integer(sign.into())));
                }
            }
        }
        out
    }
}

/// `dσ^k` from the frame's declared structure equations.
fn d_coframe(frame: &Frame, k: usize) -> Result<Form> {
    let cf = frame.coframe()?;
    let n = frame.nvars();
    let mut f = Form::zero(n, 2);
    for ((i, j), c) in &cf.structure[k] {
        f = f.add(&Form::basis(&[*i, *j], Polynomial::constant(n, c.clone())));
    }
    Ok(f)
}

/// `d(σ^{i_1}∧…∧σ^{i_k}) = Σ_m (−1)^m σ^{i_1}∧…∧dσ^{i_m}∧…∧σ^{i_k}`.
pub(crate) fn d_basis(frame: &Frame, indices: &[usize]) -> Result<Form> {
    let n = frame.nvars();
    let mut total = Form::zero(n, indices.len() + 1);
    for m in 0..indices.len() {
        let mut piece = Form::basis(&[], Polynomial::one(n));
        for (k, &idx) in indices.iter().enumerate() {
            let factor = if k == m {
                d_coframe(frame, idx)?
            } else {
                Form::basis(&[idx], Polynomial::one(n))
            };
            piece = piece.wedge(&factor);
        }
        if m % 2 == 1 {
            piece = piece.mul_poly(&Polynomial::constant(n, -Rational::one()));
        }
        total = total.add(&piece);
    }
    Ok(total)
}

/// Exterior derivative in the coframe basis:
/// `d(g σ_I) = Σ_i (E_i g) σ^i∧σ_I + g dσ_I`.
pub fn exterior_d(frame: &Frame, form: &Form) -> Result<Form> {
    let cf = frame.coframe()?;
    let n = frame.nvars();
    if form.nvars != n {
        return Err(Error::VariableMismatch {
            left: n,
            right: form.nvars,
        });
    }
    let mut out = Form::zero(n, form.degree + 1);
    for (idx, g) in &form.coeffs {
        for i in 0..cf.len() {
            let eg = frame.fields[i].op.apply(g)?;
            if eg.is_zero() {
                continue;
            }
            let mut key = vec![i];
            key.extend(idx);
            out = out.add(&Form::basis(&key, eg));
        }
        let dsig = d_basis(frame, idx)?;
        if !dsig.is_zero() {
            out = out.add(&dsig.mul_poly(g));
        }
    }
    Ok(out)
}

/// Contact lift `aξ + bη + (Xb − Ya)ζ` on the Heisenberg frame: the unique
/// lift of `aξ + bη` whose derivative has no `η∧ξ` part.
pub fn rumin_lift(frame: &Frame, a: &Polynomial, b: &Polynomial) -> Result<Form> {
    if frame.name != "heisenberg" {
        return Err(Error::Parse(format!(
            "rumin_lift needs the heisenberg frame, got {}",
            frame.name
        )));
    }
    let x = frame.field("X");
    let y = frame.field("Y");
    let c = &x.apply(b)? - &y.apply(a)?;
    Ok(Form::basis(&[0], a.clone())
        .add(&Form::basis(&[1], b.clone()))
        .add(&Form::basis(&[2], c)))
}
