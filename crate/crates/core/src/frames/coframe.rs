use num_traits::Zero;
use serde::Serialize;

use super::Frame;
use crate::exactalg::{Polynomial, Rational};

/// Constant-coefficient 2-form `Σ c_ij σ^i∧σ^j` with `i < j`.
pub type TwoForm = Vec<((usize, usize), Rational)>;

/// Coframe `σ^k = Σ_a θ^k_a dx_a` dual to the leading fields of a frame.
#[derive(Clone, Debug)]
pub struct Coframe {
    pub labels: Vec<String>,
    /// `matrix[k][a]` is the `dx_a` coefficient of `σ^k`.
    pub matrix: Vec<Vec<Polynomial>>,
    /// Declared `dσ^k`.
    pub structure: Vec<TwoForm>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoframeReport {
    pub dual: bool,
    pub structure_matches: bool,
    pub mismatches: Vec<String>,
}

impl Coframe {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Weight of each coframe element: minus the weight of its dual field.
    pub fn weights(&self, frame: &Frame) -> Vec<i64> {
        frame.fields[..self.len()]
            .iter()
            .map(|f| {
                -f.op
                    .weight(&frame.space.weights)
                    .ok()
                    .and_then(|w| w.value())
                    .unwrap_or(0)
            })
            .collect()
    }

    /// `σ^k(E_j)` as a polynomial matrix.
    pub fn pairing(&self, frame: &Frame) -> Vec<Vec<Polynomial>> {
        let n = frame.nvars();
        self.matrix
            .iter()
            .map(|row| {
                frame.fields[..self.len()]
                    .iter()
                    .map(|field| {
                        let v = field
                            .op
                            .terms()
                            .fold(Polynomial::zero(n), |acc, (alpha, p)| {
                                let a = alpha
                                    .exponents()
                                    .iter()
                                    .position(|&e| e == 1)
                                    .expect("frame fields are first order");
                                &acc + &(&row[a] * p)
                            });
                        v
                    })
                    .collect()
            })
            .collect()
    }

    /// `dσ^k(E_i, E_j)` computed from the coordinate expression of `σ^k`,
    /// independently of the declared structure equations.
    pub fn structure_from_coordinates(
        &self,
        frame: &Frame,
    ) -> Vec<Vec<((usize, usize), Polynomial)>> {
        let n = frame.nvars();
        let comps: Vec<Vec<Polynomial>> = frame.fields[..self.len()]
            .iter()
            .map(|f| {
                (0..n)
                    .map(|a| f.op.coefficient(&crate::exactalg::Monomial::var(n, a)))
                    .collect()
            })
            .collect();
        self.matrix
            .iter()
            .map(|theta| {
                let mut out = Vec::new();
                for i in 0..self.len() {
                    for j in i + 1..self.len() {
                        let mut acc = Polynomial::zero(n);
                        for a in 0..n {
                            for b in 0..n {
                                let curl = &theta[b].derivative(a) - &theta[a].derivative(b);
                                if curl.is_zero() {
                                    continue;
                                }
                                acc = &acc + &(&(&comps[i][a] * &comps[j][b]) * &curl);
                            }
                        }
                        if !acc.is_zero() {
                            out.push(((i, j), acc));
                        }
                    }
                }
                out
            })
            .collect()
    }

    pub fn verify(&self, frame: &Frame) -> CoframeReport {
        let n = frame.nvars();
        let pairing = self.pairing(frame);
        let dual = pairing.iter().enumerate().all(|(k, row)| {
            row.iter().enumerate().all(|(j, p)| {
                if k == j {
                    *p == Polynomial::one(n)
                } else {
                    p.is_zero()
                }
            })
        });
        let computed = self.structure_from_coordinates(frame);
        let mut mismatches = Vec::new();
        for (k, (declared, found)) in self.structure.iter().zip(&computed).enumerate() {
            let declared: Vec<((usize, usize), Polynomial)> = declared
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(ij, c)| (*ij, Polynomial::constant(n, c.clone())))
                .collect();
            if declared != *found {
                mismatches.push(format!(
                    "d{} differs from its coordinate expression",
                    self.labels[k]
                ));
            }
        }
        CoframeReport {
            dual,
            structure_matches: mismatches.is_empty(),
            mismatches,
        }
    }

    /// Renders `dσ^k` with the orientation used in the declaration.
    pub fn structure_display(&self, k: usize) -> String {
        if self.structure[k].is_empty() {
            return format!("d{} = 0", self.labels[k]);
        }
        let terms: Vec<String> = self.structure[k]
            .iter()
            .map(|((i, j), c)| {
                let one = Rational::from_integer(1.into());
                if *c == -one.clone() {
                    format!("{}∧{}", self.labels[*j], self.labels[*i])
                } else if *c == one {
                    format!("{}∧{}", self.labels[*i], self.labels[*j])
                } else {
                    format!("{c}·{}∧{}", self.labels[*i], self.labels[*j])
                }
            })
            .collect();
        format!("d{} = {}", self.labels[k], terms.join(" + "))
    }
}
