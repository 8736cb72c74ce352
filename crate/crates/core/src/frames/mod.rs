//! The registered geometries: vector-field frames with their bracket tables,
//! variable weights, degeneracy loci and, for the regular models, dual
//! coframes.

mod coframe;
mod registry;

pub use coframe::{Coframe, CoframeReport, TwoForm};
pub use registry::{frame_registry, FRAME_NAMES};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Polynomial, Rational, RationalMatrix};
use crate::weyl::{DiffOp, OpWeight};

/// Named coordinates with positive integer weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Space {
    pub names: Vec<String>,
    pub weights: Vec<u32>,
}

impl Space {
    pub fn new(vars: &[(&str, u32)]) -> Self {
        Space {
            names: vars.iter().map(|(n, _)| n.to_string()).collect(),
            weights: vars.iter().map(|(_, w)| *w).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn var(&self, name: &str) -> Polynomial {
        Polynomial::var(self.dim(), self.index(name).expect("known variable"))
    }

    pub fn poly(&self, text: &str) -> Result<Polynomial> {
        Polynomial::parse(text, &self.names)
    }

    /// Space with the listed coordinates removed.
    pub fn without(&self, killed: &[usize]) -> Space {
        let keep = |i: &usize| !killed.contains(i);
        Space {
            names: (0..self.dim())
                .filter(keep)
                .map(|i| self.names[i].clone())
                .collect(),
            weights: (0..self.dim())
                .filter(keep)
                .map(|i| self.weights[i])
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Field {
    pub name: String,
    pub op: DiffOp,
}

/// `[left, right] = expected`.
#[derive(Clone, Debug)]
pub struct BracketDecl {
    pub left: usize,
    pub right: usize,
    pub expected: DiffOp,
    /// `"Z"`, `"W"` or `"0"`.
    pub label: String,
}

/// Where the span of `fields` loses rank.
#[derive(Clone, Debug)]
pub enum DegenerateLocus {
    Empty,
    /// `{var = 0}`.
    Hyperplane {
        var: usize,
        fields: Vec<usize>,
        description: String,
    },
}

impl DegenerateLocus {
    pub fn contains(&self, point: &[Rational]) -> bool {
        match self {
            DegenerateLocus::Empty => false,
            DegenerateLocus::Hyperplane { var, .. } => point[*var].is_zero(),
        }
    }

    pub fn description(&self) -> &str {
        match self {
            DegenerateLocus::Empty => "none: the frame has constant rank",
            DegenerateLocus::Hyperplane { description, .. } => description,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Frame {
    pub name: String,
    pub space: Space,
    /// Generators first (`X`, `Y`), then derived fields.
    pub fields: Vec<Field>,
    pub brackets: Vec<BracketDecl>,
    pub locus: DegenerateLocus,
    pub coframe: Option<Coframe>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketCheck {
    pub pair: (String, String),
    pub declared: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketReport {
    pub frame: String,
    pub checks: Vec<BracketCheck>,
    pub passed: bool,
}

impl Frame {
    pub fn nvars(&self) -> usize {
        self.space.dim()
    }

    pub fn field_index(&self, name: &str) -> Result<usize> {
        self.fields
            .iter()
            .position(|f| f.name == name)
            .ok_or_else(|| Error::Parse(format!("frame {} has no field `{name}`", self.name)))
    }

    pub fn field(&self, name: &str) -> &DiffOp {
        &self.fields[self.field_index(name).expect("known field")].op
    }

    /// Evaluates an operator expression in the frame's field names, such as
    /// `"XXY + XZ + W"` or `"-2YX"`. Juxtaposition is composition, leftmost
    /// applied last; `1` is the identity.
    pub fn op(&self, expr: &str) -> Result<DiffOp> {
        let n = self.nvars();
        let cleaned: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty operator expression".into()));
        }
        let mut total = DiffOp::zero(n);
        let mut chars = cleaned.chars().peekable();
        while chars.peek().is_some() {
            let mut sign = Rational::from_integer(1.into());
            while let Some(&c) = chars.peek() {
                match c {
                    '+' => {}
                    '-' => sign = -sign,
                    _ => break,
                }
                chars.next();
            }
            let mut digits = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() || c == '/' {
                    digits.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            let mut term = DiffOp::identity(n);
            let mut has_factor = !digits.is_empty();
            if has_factor {
                let c = crate::exactalg::parse_rational(&digits)
                    .ok_or_else(|| Error::Parse(format!("bad coefficient `{digits}`")))?;
                term = term.scale(&c);
            }
            while let Some(&c) = chars.peek() {
                if c == '+' || c == '-' {
                    break;
                }
                let idx = self.field_index(&c.to_string())?;
                term = term.compose(&self.fields[idx].op)?;
                has_factor = true;
                chars.next();
            }
            if !has_factor {
                return Err(Error::Parse(format!("empty term in `{expr}`")));
            }
            total = &total + &term.scale(&sign);
        }
        Ok(total)
    }

    /// Checks every pairwise bracket of the declared fields against the
    /// declaration, in normal form.
    pub fn verify_brackets(&self) -> Result<BracketReport> {
        let mut checks = Vec::new();
        for decl in &self.brackets {
            let computed = self.fields[decl.left]
                .op
                .bracket(&self.fields[decl.right].op)?;
            checks.push(BracketCheck {
                pair: (
                    self.fields[decl.left].name.clone(),
                    self.fields[decl.right].name.clone(),
                ),
                declared: decl.label.clone(),
                computed: computed.display(&self.space.names),
                pass: computed == decl.expected,
            });
        }
        let passed = checks.iter().all(|c| c.pass);
        Ok(BracketReport {
            frame: self.name.clone(),
            checks,
            passed,
        })
    }

    /// Dimension of the span of the chosen fields at a rational point.
    pub fn span_dim_at(&self, fields: &[usize], point: &[Rational]) -> Result<usize> {
        if point.len() != self.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, frame {} has {}",
                point.len(),
                self.name,
                self.nvars()
            )));
        }
        let rows = fields
            .iter()
            .map(|&i| self.fields[i].op.vector_at(point))
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Ok(0);
        }
        Ok(RationalMatrix::from_rows(rows)?.rank())
    }

    pub fn generic_point(&self) -> Vec<Rational> {
        vec![Rational::from_integer(1.into()); self.nvars()]
    }

    /// Iterated brackets of the generators until no new direction appears at
    /// the generic point; returns the closure.
    pub fn bracket_closure(&self) -> Result<Vec<DiffOp>> {
        let point = self.generic_point();
        let mut set: Vec<DiffOp> = self.fields.iter().take(2).map(|f| f.op.clone()).collect();
        let mut frontier = set.clone();
        let span = |ops: &[DiffOp]| -> Result<usize> {
            let rows = ops
                .iter()
                .map(|op| op.vector_at(&point))
                .collect::<Result<Vec<_>>>()?;
            Ok(RationalMatrix::from_rows(rows)?.rank())
        };
        for _ in 0..=self.nvars() {
            let mut next = Vec::new();
            for a in &frontier {
                for b in &set.clone() {
                    let c = a.bracket(b)?;
                    if c.is_zero() || set.iter().chain(&next).any(|s| c.scalar_ratio(s).is_some()) {
                        continue;
                    }
                    next.push(c);
                }
            }
            if next.is_empty() {
                break;
            }
            set.extend(next.iter().cloned());
            frontier = next;
            if span(&set)? == self.nvars() {
                break;
            }
        }
        Ok(set)
    }

    pub fn is_bracket_generating(&self) -> Result<bool> {
        let closure = self.bracket_closure()?;
        let point = self.generic_point();
        let rows = closure
            .iter()
            .map(|op| op.vector_at(&point))
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalMatrix::from_rows(rows)?.rank() == self.nvars())
    }

    /// Weight of every field under the frame's weights.
    pub fn field_weights(&self) -> Result<Vec<(String, OpWeight)>> {
        self.fields
            .iter()
            .map(|f| Ok((f.name.clone(), f.op.weight(&self.space.weights)?)))
            .collect()
    }

    pub fn coframe(&self) -> Result<&Coframe> {
        self.coframe
            .as_ref()
            .ok_or_else(|| Error::MissingCoframe(self.name.clone()))
    }
}
