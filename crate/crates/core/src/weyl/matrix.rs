use super::DiffOp;
use crate::error::{Error, Result};
use crate::exactalg::{Polynomial, Rational, RationalMatrix};

/// Matrix of differential operators acting on column vectors of
/// polynomials: `(M v)_r = Σ_c M[r][c](v_c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<DiffOp>,
}

impl OpMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        OpMatrix {
            rows,
            cols,
            nvars,
            entries: vec![DiffOp::zero(nvars); rows * cols],
        }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let mut m = Self::zeros(n, n, nvars);
        for i in 0..n {
            m.set(i, i, DiffOp::identity(nvars));
        }
        m
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<DiffOp>>) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged operator matrix".into()));
        }
        if let Some(op) = rows.iter().flatten().find(|op| op.nvars() != nvars) {
            return Err(Error::VariableMismatch {
                left: nvars,
                right: op.nvars(),
            });
        }
        Ok(OpMatrix {
            rows: rows.len(),
            cols: ncols,
            nvars,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Embeds a rational matrix as scalar operators.
    pub fn from_scalars(m: &RationalMatrix, nvars: usize) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols(), nvars);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, DiffOp::scalar(nvars, m[(i, j)].clone()));
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, r: usize, c: usize) -> &DiffOp {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, op: DiffOp) {
        assert_eq!(
            op.nvars(),
            self.nvars,
            "operator over a different variable list"
        );
        self.entries[r * self.cols + c] = op;
    }

    pub fn add_to(&mut self, r: usize, c: usize, op: &DiffOp) {
        let sum = self.get(r, c) + op;
        self.set(r, c, sum);
    }

    pub fn row(&self, r: usize) -> &[DiffOp] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &DiffOp)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, op)| (k / self.cols, k % self.cols, op))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(DiffOp::is_zero)
    }

    /// Positions of nonzero entries.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize)> {
        self.iter()
            .filter(|(_, _, op)| !op.is_zero())
            .map(|(r, c, _)| (r, c))
            .collect()
    }

    /// `self ∘ other`: entry `(i,j)` is `Σ_k self[i,k] ∘ other[k,j]`.
    pub fn compose(&self, other: &OpMatrix) -> Result<OpMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let mut out = OpMatrix::zeros(self.rows, other.cols, self.nvars);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = DiffOp::zero(self.nvars);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &a.compose(b)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        (0..self.rows)
            .map(|r| {
                let mut acc = Polynomial::zero(self.nvars);
                for (op, f) in self.row(r).iter().zip(v) {
                    acc = &acc + &op.apply(f)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> OpMatrix {
        let mut out = OpMatrix::zeros(rows.len(), cols.len(), self.nvars);
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn scale_row(&mut self, r: usize, c: &Rational) {
        for j in 0..self.cols {
            let op = self.get(r, j).scale(c);
            self.set(r, j, op);
        }
    }

    pub fn scale_col(&mut self, col: usize, c: &Rational) {
        for i in 0..self.rows {
            let op = self.get(i, col).scale(c);
            self.set(i, col, op);
        }
    }

    /// Scalar parts of every entry.
    pub fn scalar_part(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.rows, self.cols);
        for (r, c, op) in self.iter() {
            m[(r, c)] = op.scalar_part();
        }
        m
    }

    /// Entrywise symmetry reduction, see [`DiffOp::reduce`].
    pub fn reduce(&self, killed: &[usize]) -> Result<OpMatrix> {
        let nvars = self.nvars - killed.len();
        let entries = self
            .entries
            .iter()
            .map(|op| op.reduce(killed))
            .collect::<Result<_>>()?;
        Ok(OpMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars,
            entries,
        })
    }

    pub fn max_order(&self) -> u32 {
        self.entries.iter().map(DiffOp::order).max().unwrap_or(0)
    }
}

impl std::ops::Sub for &OpMatrix {
    type Output = OpMatrix;
    fn sub(self, rhs: &OpMatrix) -> OpMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "shape mismatch"
        );
        OpMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Add for &OpMatrix {
    type Output = OpMatrix;
    fn add(self, rhs: &OpMatrix) -> OpMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "shape mismatch"
        );
        OpMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Neg for &OpMatrix {
    type Output = OpMatrix;
    fn neg(self) -> OpMatrix {
        OpMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }
}
