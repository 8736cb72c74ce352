//! JSON records shared by the command-line tool.
//!
//! A polynomial is a list of `{"exponents", "num", "den"}` records in
//! graded-lex order, with numerator and denominator as decimal strings. A
//! differential operator is a list of `{"alpha", "coeff"}` records and an
//! operator matrix is a row-major nested list of operators.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactalg::{Monomial, Polynomial, Rational};
use crate::weyl::{DiffOp, OpMatrix};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OpTermRecord {
    pub alpha: Vec<u32>,
    pub coeff: Vec<TermRecord>,
}

pub fn rational_string<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn poly_records(p: &Polynomial) -> Vec<TermRecord> {
    p.terms()
        .map(|(m, c)| TermRecord {
            exponents: m.exponents().to_vec(),
            num: c.numer().to_string(),
            den: c.denom().to_string(),
        })
        .collect()
}

fn parse_int(s: &str, what: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what} {s:?} is not a decimal integer")))
}

/// Rebuilds a polynomial in `nvars` variables; repeated monomials are summed
/// and fractions reduced.
pub fn poly_from_records(records: &[TermRecord], nvars: usize) -> Result<Polynomial> {
    let mut terms = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        if r.exponents.len() != nvars {
            return Err(Error::Parse(format!(
                "term {i} has {} exponents, expected {nvars}",
                r.exponents.len()
            )));
        }
        let den = parse_int(&r.den, "denominator")?;
        if den.is_zero() {
            return Err(Error::Parse(format!("term {i} has a zero denominator")));
        }
        let num = parse_int(&r.num, "numerator")?;
        terms.push((Monomial::new(r.exponents.clone()), Rational::new(num, den)));
    }
    Polynomial::from_terms(nvars, terms)
}

pub fn parse_pjson(text: &str, nvars: usize) -> Result<Polynomial> {
    let records: Vec<TermRecord> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("polynomial file: {e}")))?;
    poly_from_records(&records, nvars)
}

pub fn to_pjson(p: &Polynomial) -> String {
    serde_json::to_string_pretty(&poly_records(p)).expect("records serialize")
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let records = poly_records(self);
        let mut seq = s.serialize_seq(Some(records.len()))?;
        for r in &records {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}

pub fn op_records(op: &DiffOp) -> Vec<OpTermRecord> {
    op.terms()
        .map(|(alpha, p)| OpTermRecord {
            alpha: alpha.exponents().to_vec(),
            coeff: poly_records(p),
        })
        .collect()
}

pub fn op_from_records(records: &[OpTermRecord], nvars: usize) -> Result<DiffOp> {
    let mut terms = Vec::with_capacity(records.len());
    for r in records {
        if r.alpha.len() != nvars {
            return Err(Error::Parse(format!(
                "alpha {:?} has the wrong length, expected {nvars}",
                r.alpha
            )));
        }
        terms.push((
            Monomial::new(r.alpha.clone()),
            poly_from_records(&r.coeff, nvars)?,
        ));
    }
    DiffOp::from_terms(nvars, terms)
}

impl Serialize for DiffOp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        op_records(self).serialize(s)
    }
}

impl Serialize for OpMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[DiffOp]> = (0..self.rows()).map(|r| self.row(r)).collect();
        rows.serialize(s)
    }
}

pub fn opmatrix_from_json(value: &serde_json::Value, nvars: usize) -> Result<OpMatrix> {
    let rows: Vec<Vec<Vec<OpTermRecord>>> = serde_json::from_value(value.clone())
        .map_err(|e| Error::Parse(format!("operator matrix: {e}")))?;
    let rows = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|op| op_from_records(op, nvars))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    OpMatrix::from_rows(nvars, rows)
}

/// `{"version": 1, "kind": kind, "data": payload}`
pub fn versioned<T: Serialize>(kind: &str, payload: &T) -> serde_json::Value {
    serde_json::json!({
        "version": SCHEMA_VERSION,
        "kind": kind,
        "data": payload,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::frame_registry;

    #[test]
    fn polynomial_round_trip() {
        let f = frame_registry("engel").unwrap();
        let p = f.space.poly("-1/2*x^2*y + 3*z - 7").unwrap();
        let text = to_pjson(&p);
        assert_eq!(parse_pjson(&text, 4).unwrap(), p);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        // graded-lex ascending: the constant comes first
        assert_eq!(v[0]["exponents"], serde_json::json!([0, 0, 0, 0]));
        assert_eq!(v[0]["num"], "-7");
        assert_eq!(v[2]["den"], "2");
        assert_eq!(serde_json::to_value(&p).unwrap(), v);
    }

    #[test]
    fn bad_polynomial_files() {
        assert!(parse_pjson("[{\"exponents\":[1],\"num\":\"1\",\"den\":\"0\"}]", 1).is_err());
        assert!(parse_pjson("[{\"exponents\":[1,0],\"num\":\"1\",\"den\":\"1\"}]", 1).is_err());
        assert!(parse_pjson("[{\"exponents\":[1],\"num\":\"x\",\"den\":\"1\"}]", 1).is_err());
        assert!(parse_pjson("{}", 1).is_err());
        assert!(parse_pjson("[]", 3).unwrap().is_zero());
        // unreduced and repeated input is canonicalized
        let p = parse_pjson(
            "[{\"exponents\":[1],\"num\":\"2\",\"den\":\"4\"},{\"exponents\":[1],\"num\":\"1\",\"den\":\"2\"}]",
            1,
        )
        .unwrap();
        assert_eq!(p, Polynomial::var(1, 0));
    }

    #[test]
    fn operator_round_trip() {
        let f = frame_registry("heisenberg").unwrap();
        let m = OpMatrix::from_rows(3, vec![vec![f.op("XY + Z").unwrap(), f.op("-2").unwrap()]])
            .unwrap();
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(opmatrix_from_json(&v, 3).unwrap(), m);
        assert!(opmatrix_from_json(&v, 2).is_err());
        let wrapped = versioned("test", &m);
        assert_eq!(wrapped["version"], 1);
    }
}
