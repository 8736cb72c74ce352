//! Inputs shared by the engine benchmarks.

use grushin_core::exactalg::rat;
use grushin_core::{frame_registry, DiffOp, Polynomial, RationalMatrix};

/// An `n`×`n` rational matrix of rank `n - 1` with dense, non-integer entries.
pub fn dense_matrix(n: usize) -> RationalMatrix {
    let mut rows: Vec<Vec<_>> = (0..n - 1)
        .map(|i| {
            (0..n)
                .map(|j| rat(((i * 7 + j * 3) % 11) as i64 - 5, (1 + (i + j) % 4) as i64))
                .collect()
        })
        .collect();
    let last = (0..n).map(|j| &rows[0][j] + &rows[1][j]).collect();
    rows.push(last);
    RationalMatrix::from_rows(rows).expect("rectangular")
}

/// The Engel fields X and Y and the operator X²Y + XZ + W.
pub fn engel_operators() -> (DiffOp, DiffOp, DiffOp) {
    let f = frame_registry("engel").expect("registered");
    (
        f.op("X").unwrap(),
        f.op("Y").unwrap(),
        f.op("XXY + XZ + W").unwrap(),
    )
}

/// A dense polynomial in the Engel coordinates, all exponents up to `d`.
pub fn engel_polynomial(d: u32) -> Polynomial {
    let f = frame_registry("engel").expect("registered");
    let mut terms = Vec::new();
    for a in 0..=d {
        for b in 0..=d {
            terms.push((
                grushin_core::Monomial::new(vec![a, b, (a + b) % 3, 1]),
                rat(a as i64 + 1, b as i64 + 1),
            ));
        }
    }
    Polynomial::from_terms(f.nvars(), terms).unwrap()
}
