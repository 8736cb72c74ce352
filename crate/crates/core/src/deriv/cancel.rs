use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::{de_rham_complex, BundleComplex};
use crate::complexes::complex_registry;
use crate::error::{Error, Result};
use crate::frames::frame_registry;
use crate::weyl::OpMatrix;

/// Cancel components `a` of slot `slot` against components `a_prime` of
/// slot `slot + 1` (indices into the slots, in the order that pairs them).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CancellationStep {
    pub slot: usize,
    pub a: Vec<usize>,
    pub a_prime: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CancellationRecord {
    pub step: CancellationStep,
    pub removed: Vec<String>,
    pub removed_next: Vec<String>,
    /// `A → A'`
    pub alpha: OpMatrix,
    pub alpha_inv: OpMatrix,
    /// `B → A'`
    pub beta: OpMatrix,
    /// `A → B'`
    pub gamma: OpMatrix,
    /// `B → B'`
    pub delta: OpMatrix,
}

/// Inverse of `S + N` with `S` an invertible scalar matrix and `S⁻¹N`
/// nilpotent, by the finite Neumann series `Σ (−S⁻¹N)^k S⁻¹`.
pub fn invert_unipotent(a: &OpMatrix) -> Result<OpMatrix> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} is not square",
            a.rows(),
            a.cols()
        )));
    }
    let nv = a.nvars();
    let s = a.scalar_part();
    let s_inv = s
        .inverse()
        .ok_or_else(|| Error::NotInvertible("scalar part is singular".into()))?;
    let s_inv = OpMatrix::from_scalars(&s_inv, nv);
    let nil = a - &OpMatrix::from_scalars(&s, nv);
    let m = -&s_inv.compose(&nil)?;
    let mut power = OpMatrix::identity(n, nv);
    let mut sum = OpMatrix::identity(n, nv);
    let mut nilpotent = false;
    for _ in 0..n {
        power = power.compose(&m)?;
        if power.is_zero() {
            nilpotent = true;
            break;
        }
        sum = &sum + &power;
    }
    if !nilpotent {
        return Err(Error::NotInvertible(format!(
            "S⁻¹N is not nilpotent within {n} steps"
        )));
    }
    let inv = sum.compose(&s_inv)?;
    let id = OpMatrix::identity(n, nv);
    if a.compose(&inv)? != id || inv.compose(a)? != id {
        return Err(Error::NotInvertible(
            "Neumann series failed the two-sided check".into(),
        ));
    }
    Ok(inv)
}

fn complement(len: usize, removed: &[usize]) -> Vec<usize> {
    (0..len).filter(|i| !removed.contains(i)).collect()
}

/// One step of homological Gaussian elimination; see the module docs.
pub fn cancel_pair(
    c: &BundleComplex,
    step: &CancellationStep,
) -> Result<(BundleComplex, CancellationRecord)> {
    let i = step.slot;
    if i >= c.differentials.len() {
        return Err(Error::DimensionMismatch(format!(
            "no differential leaves slot {i}"
        )));
    }
    if step.a.len() != step.a_prime.len() || step.a.is_empty() {
        return Err(Error::DimensionMismatch(
            "A and A' must be nonempty and of equal size".into(),
        ));
    }
    let (n_src, n_dst) = (c.slots[i].len(), c.slots[i + 1].len());
    if step.a.iter().any(|&k| k >= n_src) || step.a_prime.iter().any(|&k| k >= n_dst) {
        return Err(Error::DimensionMismatch(
            "component index out of range".into(),
        ));
    }
    let b = complement(n_src, &step.a);
    let b_prime = complement(n_dst, &step.a_prime);
    let d = &c.differentials[i];
    let alpha = d.submatrix(&step.a_prime, &step.a);
    let beta = d.submatrix(&step.a_prime, &b);
    let gamma = d.submatrix(&b_prime, &step.a);
    let delta = d.submatrix(&b_prime, &b);
    let alpha_inv = invert_unipotent(&alpha)?;
    let middle = &delta - &gamma.compose(&alpha_inv)?.compose(&beta)?;

    let mut out = c.clone();
    out.differentials[i] = middle;
    if i > 0 {
        let inc = &c.differentials[i - 1];
        let cols: Vec<usize> = (0..inc.cols()).collect();
        out.differentials[i - 1] = inc.submatrix(&b, &cols);
    }
    if i + 1 < c.differentials.len() {
        let outg = &c.differentials[i + 1];
        let rows: Vec<usize> = (0..outg.rows()).collect();
        out.differentials[i + 1] = outg.submatrix(&rows, &b_prime);
    }
    out.slots[i] = b.iter().map(|&k| c.slots[i][k].clone()).collect();
    out.slots[i + 1] = b_prime.iter().map(|&k| c.slots[i + 1][k].clone()).collect();
    // a failure here is a bug in the elimination, not bad input
    out.check_zero_composition()?;
    let record = CancellationRecord {
        step: step.clone(),
        removed: step
            .a
            .iter()
            .map(|&k| c.slots[i][k].label.clone())
            .collect(),
        removed_next: step
            .a_prime
            .iter()
            .map(|&k| c.slots[i + 1][k].label.clone())
            .collect(),
        alpha,
        alpha_inv,
        beta,
        gamma,
        delta,
    };
    Ok((out, record))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeriveTarget {
    Rumin,
    Engel,
}

impl DeriveTarget {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "rumin" => Ok(DeriveTarget::Rumin),
            "engel" => Ok(DeriveTarget::Engel),
            other => Err(Error::UnknownComplex(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DeriveTarget::Rumin => "rumin",
            DeriveTarget::Engel => "engel",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "factor", rename_all = "lowercase")]
pub enum Relation {
    Equal,
    Negated,
    Scaled(String),
    Different,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryRelation {
    pub differential: usize,
    pub row: usize,
    pub col: usize,
    pub derived: String,
    pub registry: String,
    pub relation: Relation,
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivationComparison {
    pub registry: String,
    pub shape_matches: bool,
    pub offsets_match: bool,
    /// Every entry equal in normal form.
    pub exact: bool,
    /// Every entry equal or negated.
    pub up_to_sign: bool,
    /// Component signs `s` with `derived[r][c] = s_target(r) s_source(c) registry[r][c]`
    /// for every entry, when such signs exist.
    pub component_signs: Option<Vec<Vec<i64>>>,
    pub entries: Vec<EntryRelation>,
}

impl DerivationComparison {
    pub fn summary(&self) -> String {
        if self.exact {
            "exact".into()
        } else if self.component_signs.is_some() {
            "equal up to component signs".into()
        } else if self.up_to_sign {
            "equal up to per-entry signs".into()
        } else {
            "different".into()
        }
    }
}

#[derive(Clone, Debug)]
pub struct Derivation {
    pub target: DeriveTarget,
    pub de_rham: BundleComplex,
    pub complex: BundleComplex,
    pub steps: Vec<CancellationRecord>,
    /// Orientation choices made along the way, in order.
    pub orientations: Vec<String>,
    pub comparison: DerivationComparison,
}

fn reorient_by_set(
    c: &mut BundleComplex,
    slot: usize,
    basis: &[usize],
    notes: &mut Vec<String>,
) -> Result<usize> {
    let idx = c
        .find(slot, basis)
        .ok_or_else(|| Error::Reduction(format!("no component {basis:?} in slot {slot}")))?;
    c.reorient(slot, idx, basis)?;
    notes.push(format!("slot {slot}: {}", c.slots[slot][idx].label));
    Ok(idx)
}

fn cancel_sets(
    c: &BundleComplex,
    slot: usize,
    a: &[&[usize]],
    a_prime: &[&[usize]],
) -> Result<(BundleComplex, CancellationRecord)> {
    let look = |s: usize, b: &[usize]| {
        c.find(s, b)
            .ok_or_else(|| Error::Reduction(format!("no component {b:?} in slot {s}")))
    };
    let step = CancellationStep {
        slot,
        a: a.iter().map(|b| look(slot, b)).collect::<Result<_>>()?,
        a_prime: a_prime
            .iter()
            .map(|b| look(slot + 1, b))
            .collect::<Result<_>>()?,
    };
    cancel_pair(c, &step)
}

// coframe indices: ξ 0, η 1, ζ 2, ω 3
const XI: usize = 0;
const ETA: usize = 1;
const ZETA: usize = 2;
const OMEGA: usize = 3;

/// Builds the target complex from de Rham by cancellation and compares it
/// with the registered complex of the same name.
pub fn derive_complex(target: DeriveTarget) -> Result<Derivation> {
    let mut notes = Vec::new();
    let mut steps = Vec::new();
    let (de_rham, mut c) = match target {
        DeriveTarget::Rumin => {
            let frame = frame_registry("heisenberg")?;
            let dr = de_rham_complex(&frame)?;
            let mut c = dr.clone();
            reorient_by_set(&mut c, 2, &[ETA, XI], &mut notes)?;
            let (mut c, rec) = cancel_sets(&c, 1, &[&[ZETA]], &[&[ETA, XI]])?;
            steps.push(rec);
            reorient_by_set(&mut c, 2, &[ZETA, ETA], &mut notes)?;
            reorient_by_set(&mut c, 3, &[ETA, XI, ZETA], &mut notes)?;
            (dr, c)
        }
        DeriveTarget::Engel => {
            let frame = frame_registry("engel")?;
            let dr = de_rham_complex(&frame)?;
            let mut c = dr.clone();
            reorient_by_set(&mut c, 2, &[ETA, XI], &mut notes)?;
            reorient_by_set(&mut c, 2, &[ZETA, XI], &mut notes)?;
            let (mut c, rec) =
                cancel_sets(&c, 1, &[&[ZETA], &[OMEGA]], &[&[ETA, XI], &[ZETA, XI]])?;
            steps.push(rec);
            reorient_by_set(&mut c, 2, &[OMEGA, ETA], &mut notes)?;
            reorient_by_set(&mut c, 2, &[OMEGA, ZETA], &mut notes)?;
            let (mut c, rec) = cancel_sets(
                &c,
                2,
                &[&[OMEGA, ETA], &[OMEGA, ZETA]],
                &[&[XI, ETA, ZETA], &[XI, ETA, OMEGA]],
            )?;
            steps.push(rec);
            for basis in ENGEL_KEPT {
                reorient_by_set(&mut c, basis.0, basis.1, &mut notes)?;
            }
            (dr, c)
        }
    };
    c.check_zero_composition()?;
    c.frame = de_rham.frame.clone();
    let comparison = compare_with_registry(&c, target.name())?;
    Ok(Derivation {
        target,
        de_rham,
        complex: c,
        steps,
        orientations: notes,
        comparison,
    })
}

/// Orientations of the components the Engel derivation keeps in slots 2-4.
const ENGEL_KEPT: &[(usize, &[usize])] = &[
    (2, &[XI, OMEGA]),
    (2, &[ZETA, ETA]),
    (3, &[ZETA, XI, OMEGA]),
    (3, &[ZETA, ETA, OMEGA]),
    (4, &[ETA, XI, ZETA, OMEGA]),
];

fn relation(derived: &crate::weyl::DiffOp, registry: &crate::weyl::DiffOp) -> Relation {
    if derived == registry {
        Relation::Equal
    } else if *derived == -registry {
        Relation::Negated
    } else {
        match derived.scalar_ratio(registry) {
            Some(q) => Relation::Scaled(q.to_string()),
            None => Relation::Different,
        }
    }
}

/// (slot, component) node of the sign graph.
type Node = (usize, usize);

/// Solves `s_target(r) s_source(c) = sign(r, c)` over all nonzero entries by
/// propagation; `None` when the constraints are inconsistent.
fn component_signs(sizes: &[usize], entries: &[EntryRelation]) -> Option<Vec<Vec<i64>>> {
    let mut edges: BTreeMap<Node, Vec<(Node, i64)>> = BTreeMap::new();
    for e in entries {
        let s = match e.relation {
            Relation::Equal => 1,
            Relation::Negated => -1,
            Relation::Scaled(_) | Relation::Different => return None,
        };
        if e.derived == "0" {
            continue;
        }
        let u = (e.differential, e.col);
        let v = (e.differential + 1, e.row);
        edges.entry(u).or_default().push((v, s));
        edges.entry(v).or_default().push((u, s));
    }
    let mut signs: Vec<Vec<i64>> = sizes.iter().map(|&n| vec![0; n]).collect();
    for slot in 0..sizes.len() {
        for comp in 0..sizes[slot] {
            if signs[slot][comp] != 0 {
                continue;
            }
            signs[slot][comp] = 1;
            let mut queue = VecDeque::from([(slot, comp)]);
            while let Some(u) = queue.pop_front() {
                for &(v, s) in edges.get(&u).into_iter().flatten() {
                    let want = signs[u.0][u.1] * s;
                    match signs[v.0][v.1] {
                        0 => {
                            signs[v.0][v.1] = want;
                            queue.push_back(v);
                        }
                        got if got != want => return None,
                        _ => {}
                    }
                }
            }
        }
    }
    Some(signs)
}

fn compare_with_registry(c: &BundleComplex, name: &str) -> Result<DerivationComparison> {
    let reg = complex_registry(name)?;
    let shape_matches = c.slot_sizes() == reg.slot_sizes();
    let ours: Vec<Vec<i64>> = c
        .slots
        .iter()
        .map(|s| s.iter().map(|k| k.offset).collect())
        .collect();
    let offsets_match = ours == reg.offsets();
    let mut entries = Vec::new();
    if shape_matches {
        let names = &reg.space.names;
        for (i, (a, b)) in c.differentials.iter().zip(&reg.differentials).enumerate() {
            for (r, col, op) in a.iter() {
                let theirs = b.get(r, col);
                entries.push(EntryRelation {
                    differential: i,
                    row: r,
                    col,
                    derived: op.display(names),
                    registry: theirs.display(names),
                    relation: relation(op, theirs),
                });
            }
        }
    }
    let exact = shape_matches && entries.iter().all(|e| e.relation == Relation::Equal);
    let up_to_sign = shape_matches
        && entries
            .iter()
            .all(|e| matches!(e.relation, Relation::Equal | Relation::Negated));
    let component_signs = if up_to_sign {
        component_signs(&c.slot_sizes(), &entries)
    } else {
        None
    };
    Ok(DerivationComparison {
        registry: name.into(),
        shape_matches,
        offsets_match,
        exact: exact && offsets_match,
        up_to_sign,
        component_signs,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Polynomial;
    use crate::weyl::DiffOp;

    fn heis() -> crate::frames::Frame {
        frame_registry("heisenberg").unwrap()
    }

    #[test]
    fn inverse_of_identity_and_triangular() {
        let f = heis();
        let id = OpMatrix::identity(2, 3);
        assert_eq!(invert_unipotent(&id).unwrap(), id);
        let x = f.field("X").clone();
        let a = OpMatrix::from_rows(
            3,
            vec![
                vec![DiffOp::identity(3), DiffOp::zero(3)],
                vec![-&x, DiffOp::identity(3)],
            ],
        )
        .unwrap();
        let want = OpMatrix::from_rows(
            3,
            vec![
                vec![DiffOp::identity(3), DiffOp::zero(3)],
                vec![x, DiffOp::identity(3)],
            ],
        )
        .unwrap();
        assert_eq!(invert_unipotent(&a).unwrap(), want);
    }

    #[test]
    fn inverse_three_by_three() {
        let f = frame_registry("engel").unwrap();
        let o = |s: &str| f.op(s).unwrap();
        let a = OpMatrix::from_rows(
            4,
            vec![
                vec![o("2"), o("XY"), o("Z + 3")],
                vec![o("0"), o("-1"), o("W")],
                vec![o("0"), o("0"), o("1")],
            ],
        )
        .unwrap();
        let inv = invert_unipotent(&a).unwrap();
        let id = OpMatrix::identity(3, 4);
        assert_eq!(a.compose(&inv).unwrap(), id);
        assert_eq!(inv.compose(&a).unwrap(), id);
    }

    #[test]
    fn non_nilpotent_and_singular_are_rejected() {
        let f = heis();
        let x = f.field("X").clone();
        let a = OpMatrix::from_rows(3, vec![vec![&DiffOp::identity(3) + &x]]).unwrap();
        assert!(matches!(invert_unipotent(&a), Err(Error::NotInvertible(_))));
        let z = OpMatrix::zeros(1, 1, 3);
        assert!(matches!(invert_unipotent(&z), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn rumin_cancellation_blocks() {
        let d = derive_complex(DeriveTarget::Rumin).unwrap();
        let rec = &d.steps[0];
        assert_eq!(rec.alpha, OpMatrix::identity(1, 3));
        assert_eq!(rec.removed, vec!["ζ"]);
        assert_eq!(rec.removed_next, vec!["η∧ξ"]);
        let f = heis();
        let mid = &d.complex.differentials[1];
        // X²b − (XY+Z)a and Y²a − (YX−Z)b
        assert_eq!(mid.get(0, 1), &f.op("XX").unwrap());
        assert_eq!(mid.get(0, 0), &f.op("-XY - Z").unwrap());
        assert_eq!(mid.get(1, 0), &f.op("YY").unwrap());
        assert_eq!(mid.get(1, 1), &f.op("-YX + Z").unwrap());
        assert!(d.comparison.exact, "{:?}", d.comparison.entries);
        assert_eq!(d.complex.slot_sizes(), vec![1, 2, 2, 1]);
        let labels: Vec<&str> = d.complex.slots[2]
            .iter()
            .map(|c| c.label.as_str())
            .collect();
        assert_eq!(labels, vec!["ξ∧ζ", "ζ∧η"]);
    }

    #[test]
    fn rumin_spec_matches_registry() {
        let d = derive_complex(DeriveTarget::Rumin).unwrap();
        let spec = d.complex.to_spec("rumin").unwrap();
        let diff = spec.compare(&complex_registry("rumin").unwrap());
        assert!(diff.identical, "{:?}", diff.differences);
    }

    #[test]
    fn lift_identity_symbolically() {
        // d(aξ + bη + (Xb − Ya)ζ) as an operator on (a, b): compose the de Rham
        // d₁ with the lift matrix [1 0; 0 1; −Y X]
        let f = heis();
        let dr = de_rham_complex(&f).unwrap();
        let o = |s: &str| f.op(s).unwrap();
        let lift = OpMatrix::from_rows(
            3,
            vec![
                vec![o("1"), o("0")],
                vec![o("0"), o("1")],
                vec![o("-Y"), o("X")],
            ],
        )
        .unwrap();
        let d = dr.differentials[1].compose(&lift).unwrap();
        let ix = |b: &[usize]| dr.find(2, b).unwrap();
        assert!(d.row(ix(&[0, 1])).iter().all(DiffOp::is_zero));
        // ξ∧ζ: X(Xb − Ya) − Za ; ζ∧η = −(η∧ζ): Y(Ya − Xb) + Zb
        assert_eq!(d.get(ix(&[0, 2]), 0), &o("-XY - Z"));
        assert_eq!(d.get(ix(&[0, 2]), 1), &o("XX"));
        assert_eq!(&-d.get(ix(&[1, 2]), 0), &o("YY"));
        assert_eq!(&-d.get(ix(&[1, 2]), 1), &o("-YX + Z"));
    }

    #[test]
    fn lift_is_unique() {
        let f = heis();
        let s = &f.space;
        for t in ["1", "x", "y*t - 2"] {
            let lift =
                super::super::rumin_lift(&f, &s.poly("y").unwrap(), &Polynomial::zero(3)).unwrap();
            let bumped = lift.add(&super::super::Form::basis(&[2], s.poly(t).unwrap()));
            let d = super::super::exterior_d(&f, &bumped).unwrap();
            assert!(!d.coefficient(&[1, 0]).is_zero(), "t = {t}");
        }
    }

    #[test]
    fn engel_derivation_is_a_complex() {
        let d = derive_complex(DeriveTarget::Engel).unwrap();
        assert_eq!(d.complex.slot_sizes(), vec![1, 2, 2, 2, 1]);
        assert_eq!(d.steps.len(), 2);
        let first = &d.steps[0];
        assert_eq!(first.alpha.get(0, 0), &DiffOp::identity(4));
        assert!(first.alpha.get(1, 0).order() == 1);
        assert!(d.comparison.offsets_match);
        let id = OpMatrix::identity(2, 4);
        for rec in &d.steps {
            assert_eq!(rec.alpha.compose(&rec.alpha_inv).unwrap(), id);
        }
        let f = frame_registry("engel").unwrap();
        // X³b − (X²Y + XZ + W)a
        let mid = &d.complex.differentials[1];
        assert_eq!(mid.get(0, 1), &f.op("XXX").unwrap());
        assert_eq!(mid.get(0, 0), &f.op("-XXY - XZ - W").unwrap());
    }

    #[test]
    fn engel_comparison() {
        let d = derive_complex(DeriveTarget::Engel).unwrap();
        let c = &d.comparison;
        assert!(c.exact, "{}: {:?}", c.summary(), c.entries);
        let spec = d.complex.to_spec("engel").unwrap();
        assert!(spec.compare(&complex_registry("engel").unwrap()).identical);
        let labels: Vec<&str> = d.complex.slots[3]
            .iter()
            .map(|k| k.label.as_str())
            .collect();
        assert_eq!(labels, vec!["ζ∧ξ∧ω", "ζ∧η∧ω"]);
    }
}
