//! Differential operators with polynomial coefficients in normal form
//! `Σ p_α ∂^α` (all derivatives to the right of all coefficients).

mod matrix;

pub use matrix::OpMatrix;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{Monomial, Polynomial, Rational, WeightedDegree};

/// Largest derivative order a composition may produce.
pub const MAX_ORDER: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOp {
    nvars: usize,
    /// Derivative multi-index → coefficient. No zero coefficients.
    terms: BTreeMap<Monomial, Polynomial>,
}

/// Weight of an operator under a variable weighting: the shift it applies to
/// weighted degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpWeight {
    /// The zero operator, homogeneous of every weight.
    Zero,
    Weight(i64),
    Inhomogeneous(BTreeMap<i64, DiffOp>),
}

impl OpWeight {
    pub fn value(&self) -> Option<i64> {
        match self {
            OpWeight::Weight(w) => Some(*w),
            _ => None,
        }
    }

    /// Whether an operator of this weight may sit in a slot with the given
    /// weight; zero fits everywhere.
    pub fn fits(&self, expected: i64) -> bool {
        match self {
            OpWeight::Zero => true,
            OpWeight::Weight(w) => *w == expected,
            OpWeight::Inhomogeneous(_) => false,
        }
    }
}

impl DiffOp {
    pub fn zero(nvars: usize) -> Self {
        DiffOp {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(nvars: usize) -> Self {
        Self::multiplication(Polynomial::one(nvars))
    }

    pub fn scalar(nvars: usize, c: Rational) -> Self {
        Self::multiplication(Polynomial::constant(nvars, c))
    }

    /// The order-zero operator `f ↦ p·f`.
    pub fn multiplication(p: Polynomial) -> Self {
        let nvars = p.nvars();
        let mut op = DiffOp::zero(nvars);
        op.add_term(Monomial::one(nvars), p);
        op
    }

    /// `∂/∂x_i`.
    pub fn partial(nvars: usize, i: usize) -> Self {
        let mut op = DiffOp::zero(nvars);
        op.add_term(Monomial::var(nvars, i), Polynomial::one(nvars));
        op
    }

    /// `Σ p_i ∂_i` from `(coefficient, variable)` pairs.
    pub fn vector_field(nvars: usize, components: &[(Polynomial, usize)]) -> Self {
        let mut op = DiffOp::zero(nvars);
        for (p, i) in components {
            op.add_term(Monomial::var(nvars, *i), p.clone());
        }
        op
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, Polynomial)>,
    ) -> Result<Self> {
        let mut op = DiffOp::zero(nvars);
        for (alpha, p) in terms {
            if alpha.nvars() != nvars || p.nvars() != nvars {
                return Err(Error::VariableMismatch {
                    left: nvars,
                    right: if alpha.nvars() != nvars {
                        alpha.nvars()
                    } else {
                        p.nvars()
                    },
                });
            }
            op.add_term(alpha, p);
        }
        Ok(op)
    }

    fn add_term(&mut self, alpha: Monomial, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Polynomial)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &Monomial) -> Polynomial {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    /// Largest `|α|` present; zero for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Every term is first order.
    pub fn is_vector_field(&self) -> bool {
        self.terms.keys().all(|a| a.total_degree() == 1)
    }

    /// Constant term of the order-zero coefficient.
    pub fn scalar_part(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.nvars))
            .map_or_else(Rational::zero, Polynomial::constant_term)
    }

    /// A purely scalar operator `c·id`.
    pub fn as_scalar(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            let p = self.terms.get(&Monomial::one(self.nvars))?;
            if p.is_constant() {
                return Some(p.constant_term());
            }
        }
        None
    }

    fn check_vars(&self, n: usize) -> Result<()> {
        if self.nvars != n {
            return Err(Error::VariableMismatch {
                left: self.nvars,
                right: n,
            });
        }
        Ok(())
    }

    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        self.check_vars(f.nvars())?;
        let mut out = Polynomial::zero(self.nvars);
        for (alpha, p) in &self.terms {
            let df = f.derivative_multi(alpha);
            if !df.is_zero() {
                out = &out + &(p * &df);
            }
        }
        Ok(out)
    }

    /// `self ∘ other` in normal form, reordering with
    /// `∂^α ∘ q = Σ_{γ≤α} C(α,γ) (∂^γ q) ∂^{α-γ}`.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check_vars(other.nvars)?;
        let mut out = DiffOp::zero(self.nvars);
        for (alpha, p) in &self.terms {
            for gamma in alpha.divisors() {
                let rest = alpha.checked_div(&gamma).expect("gamma divides alpha");
                let binom = multi_binomial(alpha, &gamma);
                for (beta, q) in &other.terms {
                    let dq = q.derivative_multi(&gamma);
                    if dq.is_zero() {
                        continue;
                    }
                    let coeff = (p * &dq).scale(&binom);
                    out.add_term(rest.mul(beta), coeff);
                }
            }
        }
        let order = out.order();
        if order > MAX_ORDER {
            return Err(Error::OrderCap {
                order,
                cap: MAX_ORDER,
            });
        }
        Ok(out)
    }

    /// Commutator `self∘other − other∘self`.
    pub fn bracket(&self, other: &DiffOp) -> Result<DiffOp> {
        Ok(&self.compose(other)? - &other.compose(self)?)
    }

    pub fn weight(&self, weights: &[u32]) -> Result<OpWeight> {
        self.check_vars(weights.len())?;
        let mut parts: BTreeMap<i64, DiffOp> = BTreeMap::new();
        for (alpha, p) in &self.terms {
            let shift = -(alpha.weighted_degree(weights) as i64);
            let pieces = match p.weighted_degree(weights)? {
                WeightedDegree::Zero => continue,
                WeightedDegree::Degree(d) => BTreeMap::from([(d, p.clone())]),
                WeightedDegree::Inhomogeneous(parts) => parts,
            };
            for (d, piece) in pieces {
                parts
                    .entry(d as i64 + shift)
                    .or_insert_with(|| DiffOp::zero(self.nvars))
                    .add_term(alpha.clone(), piece);
            }
        }
        Ok(match parts.len() {
            0 => OpWeight::Zero,
            1 => OpWeight::Weight(*parts.keys().next().unwrap()),
            _ => OpWeight::Inhomogeneous(parts),
        })
    }

    pub fn scale(&self, c: &Rational) -> DiffOp {
        let mut out = DiffOp::zero(self.nvars);
        for (a, p) in &self.terms {
            out.add_term(a.clone(), p.scale(c));
        }
        out
    }

    /// Coefficients of `∂_i` evaluated at a point; the order-one part of the
    /// operator as a tangent vector.
    pub fn vector_at(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        (0..self.nvars)
            .map(|i| self.coefficient(&Monomial::var(self.nvars, i)).eval(point))
            .collect()
    }

    /// Substitutes `∂_v ↦ 0` for each killed variable and drops those
    /// variables from the coefficients. Fails if a surviving coefficient
    /// depends on a killed variable.
    pub fn reduce(&self, killed: &[usize]) -> Result<DiffOp> {
        let nvars = self.nvars - killed.len();
        let mut out = DiffOp::zero(nvars);
        for (alpha, p) in &self.terms {
            if killed.iter().any(|&v| alpha.exponents()[v] > 0) {
                continue;
            }
            let q = p.remove_vars(killed).ok_or_else(|| {
                Error::Reduction(format!(
                    "coefficient of ∂^{:?} depends on a killed variable",
                    alpha.exponents()
                ))
            })?;
            out.add_term(alpha.remove_vars(killed), q);
        }
        Ok(out)
    }

    /// Exact ratio `self / other` when one is a rational multiple of the
    /// other.
    pub fn scalar_ratio(&self, other: &DiffOp) -> Option<Rational> {
        if self.terms.len() != other.terms.len() || other.is_zero() {
            return None;
        }
        let (a0, p0) = other.terms.iter().next()?;
        let r = self.terms.get(a0)?.scalar_ratio(p0)?;
        (other.scale(&r) == *self).then_some(r)
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (alpha, p)) in self.terms.iter().rev().enumerate() {
            let mut coeff = p.display(names);
            let neg = p.len() == 1 && coeff.starts_with('-');
            if neg {
                coeff = (-p).display(names);
            }
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            let deriv: String = alpha
                .exponents()
                .iter()
                .zip(names)
                .filter(|(e, _)| **e > 0)
                .map(|(e, n)| {
                    if *e == 1 {
                        format!("∂{n}")
                    } else {
                        format!("∂{n}^{e}")
                    }
                })
                .collect::<Vec<_>>()
                .join("");
            if deriv.is_empty() {
                let _ = write!(s, "{coeff}");
            } else if coeff == "1" {
                s.push_str(&deriv);
            } else if p.len() == 1 {
                let _ = write!(s, "{coeff}*{deriv}");
            } else {
                let _ = write!(s, "({coeff})*{deriv}");
            }
        }
        s
    }
}

fn multi_binomial(alpha: &Monomial, gamma: &Monomial) -> Rational {
    let mut acc = BigInt::one();
    for (&a, &g) in alpha.exponents().iter().zip(gamma.exponents()) {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for k in 0..g {
            num *= a - k;
            den *= k + 1;
        }
        acc *= num / den;
    }
    Rational::from_integer(acc)
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        assert_eq!(
            self.nvars, rhs.nvars,
            "operator addition over different variable lists"
        );
        let mut out = self.clone();
        for (a, p) in &rhs.terms {
            out.add_term(a.clone(), p.clone());
        }
        out
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        self + &-rhs
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, p)| (a.clone(), -p)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn poly(s: &str, vars: &[&str]) -> Polynomial {
        Polynomial::parse(s, &names(vars)).unwrap()
    }

    #[test]
    fn leibniz_reorders() {
        // ∂x ∘ x = x∂x + 1
        let dx = DiffOp::partial(1, 0);
        let x = DiffOp::multiplication(Polynomial::var(1, 0));
        let expected =
            &DiffOp::vector_field(1, &[(Polynomial::var(1, 0), 0)]) + &DiffOp::identity(1);
        assert_eq!(dx.compose(&x).unwrap(), expected);
    }

    #[test]
    fn grushin1_x_after_y() {
        // X ∘ Y = x∂x∂y + ∂y, with X = ∂x, Y = x∂y
        let v = ["x", "y"];
        let x_field = DiffOp::partial(2, 0);
        let y_field = DiffOp::vector_field(2, &[(poly("x", &v), 1)]);
        let xy = x_field.compose(&y_field).unwrap();
        let expected = DiffOp::from_terms(
            2,
            [
                (Monomial::new(vec![1, 1]), poly("x", &v)),
                (Monomial::new(vec![0, 1]), poly("1", &v)),
            ],
        )
        .unwrap();
        assert_eq!(xy, expected);
        // oracle: apply both sides to every monomial of degree ≤ 4
        for d in 0..=4u32 {
            for i in 0..=d {
                let f = Polynomial::term(Monomial::new(vec![i, d - i]), int(1));
                let lhs = xy.apply(&f).unwrap();
                let rhs = x_field.apply(&y_field.apply(&f).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn application_examples() {
        let v = ["x", "y"];
        assert_eq!(
            DiffOp::partial(2, 0).apply(&poly("x^2*y", &v)).unwrap(),
            poly("2*x*y", &v)
        );
        // Martinet Y = ∂z + x^2∂y over (x, z, y)
        let m = ["x", "z", "y"];
        let y_field = DiffOp::vector_field(3, &[(poly("1", &m), 1), (poly("x^2", &m), 2)]);
        assert_eq!(y_field.apply(&poly("x^2*y", &m)).unwrap(), poly("x^4", &m));
        assert!(y_field.apply(&Polynomial::zero(3)).unwrap().is_zero());
        assert!(y_field.apply(&Polynomial::zero(2)).is_err());
    }

    #[test]
    fn weights() {
        let v = ["x", "y"];
        let y2 = DiffOp::vector_field(2, &[(poly("x^2", &v), 1)]);
        assert_eq!(y2.weight(&[1, 3]).unwrap(), OpWeight::Weight(-1));
        let mixed = &DiffOp::partial(2, 0) + &DiffOp::partial(2, 1);
        assert!(
            matches!(mixed.weight(&[1, 2]).unwrap(), OpWeight::Inhomogeneous(p) if p.len() == 2)
        );
        assert_eq!(DiffOp::zero(2).weight(&[1, 2]).unwrap(), OpWeight::Zero);
        // Engel Z = ∂t + 2x∂y over (x, z, t, y)
        let e = ["x", "z", "t", "y"];
        let z = DiffOp::vector_field(4, &[(poly("1", &e), 2), (poly("2*x", &e), 3)]);
        assert_eq!(z.weight(&[1, 1, 2, 3]).unwrap(), OpWeight::Weight(-2));
    }

    #[test]
    fn order_cap_enforced() {
        let dx = DiffOp::partial(1, 0);
        let mut op = dx.clone();
        for _ in 0..7 {
            op = op.compose(&dx).unwrap();
        }
        assert_eq!(op.order(), 8);
        assert!(matches!(
            op.compose(&dx),
            Err(Error::OrderCap { order: 9, cap: 8 })
        ));
    }

    #[test]
    fn reduction_drops_killed_derivatives() {
        // Heisenberg Y = ∂t + x∂y over (x, t, y); killing t leaves x∂y
        let h = ["x", "t", "y"];
        let y_field = DiffOp::vector_field(3, &[(poly("1", &h), 1), (poly("x", &h), 2)]);
        let reduced = y_field.reduce(&[1]).unwrap();
        assert_eq!(
            reduced,
            DiffOp::vector_field(2, &[(poly("x", &["x", "y"]), 1)])
        );
        let bad = DiffOp::vector_field(3, &[(poly("t", &h), 0)]);
        assert!(matches!(bad.reduce(&[1]), Err(Error::Reduction(_))));
    }

    #[test]
    fn display_is_readable() {
        let v = ["x", "y"];
        let op = &DiffOp::vector_field(2, &[(poly("x", &v), 1)]) + &DiffOp::scalar(2, int(2));
        assert_eq!(op.display(&names(&v)), "x*∂y + 2");
    }
}
