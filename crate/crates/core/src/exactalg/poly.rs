use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{parse_rational, Monomial, Rational};
use crate::error::{Error, Result};

/// Multivariate polynomial with exact rational coefficients.
///
/// Terms live in a `BTreeMap` keyed by [`Monomial`], so the representation
/// is canonical: graded-lex ordered, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

/// Weighted degree of a polynomial.
///
/// `Zero` sits below every integer degree; the zero polynomial counts as
/// homogeneous of every degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightedDegree {
    Zero,
    Degree(u64),
    Inhomogeneous(BTreeMap<u64, Polynomial>),
}

impl WeightedDegree {
    pub fn is_homogeneous(&self) -> bool {
        !matches!(self, WeightedDegree::Inhomogeneous(_))
    }
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    /// Canonicalizes an arbitrary term list: merges repeated monomials and
    /// drops zero coefficients.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::VariableMismatch {
                    left: nvars,
                    right: m.nvars(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.nvars))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_vars(other)?;
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Mixed partial `∂^alpha`.
    pub fn derivative_multi(&self, alpha: &Monomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let Some(rest) = m.checked_div(alpha) else {
                continue;
            };
            let mut factor = c.clone();
            for (&e, &a) in m.exponents().iter().zip(alpha.exponents()) {
                for k in 0..a {
                    factor *= Rational::from_integer((e - k).into());
                }
            }
            out.add_term(rest, factor);
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    v *= x;
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> Result<WeightedDegree> {
        if weights.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} variables",
                weights.len(),
                self.nvars
            )));
        }
        let parts = self.homogeneous_parts(weights);
        Ok(match parts.len() {
            0 => WeightedDegree::Zero,
            1 => WeightedDegree::Degree(*parts.keys().next().unwrap()),
            _ => WeightedDegree::Inhomogeneous(parts),
        })
    }

    /// Splits into weighted-homogeneous parts keyed by degree.
    pub fn homogeneous_parts(&self, weights: &[u32]) -> BTreeMap<u64, Polynomial> {
        let mut parts: BTreeMap<u64, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.weighted_degree(weights))
                .or_insert_with(|| Polynomial::zero(self.nvars))
                .add_term(m.clone(), c.clone());
        }
        parts
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponents()[var] > 0)
    }

    /// Drops the listed variables; `None` if any term involves one of them.
    pub fn remove_vars(&self, killed: &[usize]) -> Option<Polynomial> {
        if killed.iter().any(|&v| self.depends_on(v)) {
            return None;
        }
        Some(Polynomial {
            nvars: self.nvars - killed.len(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.remove_vars(killed), c.clone()))
                .collect(),
        })
    }

    /// Exact ratio `self / other` when `self` is a rational multiple of
    /// `other`.
    pub fn scalar_ratio(&self, other: &Polynomial) -> Option<Rational> {
        if self.nvars != other.nvars || self.len() != other.len() {
            return None;
        }
        let (m0, c0) = other.terms.iter().next()?;
        let r = self.terms.get(m0)? / c0;
        (other.scale(&r) == *self).then_some(r)
    }

    pub fn display(&self, names: &[String]) -> String {
        let mut s = String::new();
        self.fmt_with(names, &mut s)
            .expect("writing to a String cannot fail");
        s
    }

    pub(crate) fn fmt_with(&self, names: &[String], f: &mut impl fmt::Write) -> fmt::Result {
        if self.is_zero() {
            return f.write_char('0');
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    f.write_char('-')?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                m.fmt_with(names, f)?;
            }
        }
        Ok(())
    }

    /// Parses polynomial text such as `"2*x^2*y - 1/2*t + 3"` over the given
    /// variable names.
    pub fn parse(text: &str, names: &[String]) -> Result<Polynomial> {
        let nvars = names.len();
        let mut out = Polynomial::zero(nvars);
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && !(i > 0 && cur.ends_with('^')) {
                if !cur.is_empty() {
                    chunks.push((neg, std::mem::take(&mut cur)));
                } else if i > 0 {
                    return Err(Error::Parse(format!("dangling sign in `{text}`")));
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("trailing sign in `{text}`")));
        }
        chunks.push((neg, cur));
        for (neg, chunk) in chunks {
            let mut coeff = Rational::one();
            let mut exps = vec![0u32; nvars];
            for factor in chunk.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in `{chunk}`")));
                }
                if factor.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff *= parse_rational(factor)
                        .ok_or_else(|| Error::Parse(format!("bad coefficient `{factor}`")))?;
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
                    ),
                    None => (factor, 1),
                };
                let idx = names
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
                exps[idx] += e;
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(Monomial::new(exps), coeff);
        }
        Ok(out)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs)
            .expect("polynomial addition over different variable lists")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs)
            .expect("polynomial subtraction over different variable lists")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs)
            .expect("polynomial multiplication over different variable lists")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s, &names(&["x", "y"])).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p("x") + &p("x"), p("2*x"));
        assert_eq!(&p("x + y") * &p("x - y"), p("x^2 - y^2"));
        assert_eq!(p("x^2").scale(&rat(1, 2)), p("1/2*x^2"));
    }

    #[test]
    fn mismatched_variables_rejected() {
        let a = Polynomial::var(2, 0);
        let b = Polynomial::var(3, 0);
        assert!(matches!(a.try_add(&b), Err(Error::VariableMismatch { .. })));
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn weighted_degree_examples() {
        assert_eq!(
            p("x^2*y").weighted_degree(&[1, 2]).unwrap(),
            WeightedDegree::Degree(4)
        );
        match p("x + y").weighted_degree(&[1, 3]).unwrap() {
            WeightedDegree::Inhomogeneous(parts) => {
                assert_eq!(parts[&1], p("x"));
                assert_eq!(parts[&3], p("y"));
            }
            other => panic!("expected split, got {other:?}"),
        }
        assert_eq!(
            Polynomial::zero(2).weighted_degree(&[1, 3]).unwrap(),
            WeightedDegree::Zero
        );
        assert!(p("x").weighted_degree(&[1]).is_err());
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("x^2*y").derivative(0), p("2*x*y"));
        let alpha = Monomial::new(vec![2, 1]);
        assert_eq!(p("x^3*y^2").derivative_multi(&alpha), p("12*x*y"));
        assert!(p("x*y").derivative_multi(&alpha).is_zero());
    }

    #[test]
    fn display_and_parse_agree() {
        let n = names(&["x", "y"]);
        let q = p("-1/2*x^2*y + 3*y - 7");
        assert_eq!(q.display(&n), "-1/2*x^2*y + 3*y - 7");
        assert_eq!(Polynomial::parse(&q.display(&n), &n).unwrap(), q);
        assert!(Polynomial::parse("x + q", &n).is_err());
        assert!(Polynomial::parse("x +", &n).is_err());
    }

    #[test]
    fn eval_and_ratio() {
        assert_eq!(p("x^2 + y").eval(&[int(2), int(3)]).unwrap(), int(7));
        assert_eq!(p("2*x + 4").scalar_ratio(&p("x + 2")), Some(int(2)));
        assert_eq!(p("2*x + 4").scalar_ratio(&p("x + 1")), None);
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let raw = vec![
            (Monomial::new(vec![1, 0]), int(2)),
            (Monomial::new(vec![0, 1]), int(1)),
            (Monomial::new(vec![1, 0]), int(-2)),
        ];
        let once = Polynomial::from_terms(2, raw).unwrap();
        assert_eq!(once, p("y"));
        let twice =
            Polynomial::from_terms(2, once.terms().map(|(m, c)| (m.clone(), c.clone()))).unwrap();
        assert_eq!(once, twice);
    }
}
