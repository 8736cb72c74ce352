use super::{ComplexSpec, Component};
use crate::error::{Error, Result};
use crate::frames::frame_registry;
use crate::weyl::OpMatrix;

pub const COMPLEX_NAMES: [&str; 6] = [
    "deRham2", "rumin", "engel", "grushin1", "grushin2", "martinet",
];

/// Operators of the contact (Rumin) shape, written in `X, Y, Z`.
const RUMIN_SHAPE: &[&[&[&str]]] = &[
    &[&["X"], &["Y"]],
    &[&["-XY - Z", "XX"], &["YY", "-YX + Z"]],
    &[&["Y", "X"]],
];

/// Operators of the Engel shape, written in `X, Y, Z, W`.
const ENGEL_SHAPE: &[&[&[&str]]] = &[
    &[&["X"], &["Y"]],
    &[&["-XXY - XZ - W", "XXX"], &["YY", "-YX + Z"]],
    &[&["XY + Z", "XXX"], &["YY", "YXX - ZX + W"]],
    &[&["-Y", "X"]],
];

const RUMIN_SLOTS: &[&[(&str, i64)]] = &[
    &[("f", 0)],
    &[("a", 1), ("b", 1)],
    &[("c", 3), ("d", 3)],
    &[("e", 4)],
];

const ENGEL_SLOTS: &[&[(&str, i64)]] = &[
    &[("f", 0)],
    &[("a", 1), ("b", 1)],
    &[("c", 4), ("d", 3)],
    &[("g", 6), ("h", 6)],
    &[("k", 7)],
];

pub fn complex_registry(name: &str) -> Result<ComplexSpec> {
    match name {
        "deRham2" => build(
            "deRham2",
            "flat2",
            &[&[("f", 0)], &[("a", 1), ("b", 1)], &[("c", 2)]],
            &[&[&["X"], &["Y"]], &[&["-Y", "X"]]],
        ),
        "rumin" => build("rumin", "heisenberg", RUMIN_SLOTS, RUMIN_SHAPE),
        "grushin1" => build("grushin1", "grushin1", RUMIN_SLOTS, RUMIN_SHAPE),
        "engel" => build("engel", "engel", ENGEL_SLOTS, ENGEL_SHAPE),
        "martinet" => build("martinet", "martinet", ENGEL_SLOTS, ENGEL_SHAPE),
        "grushin2" => build("grushin2", "grushin2", ENGEL_SLOTS, ENGEL_SHAPE),
        other => Err(Error::UnknownComplex(other.to_string())),
    }
}

fn build(
    name: &str,
    frame_name: &str,
    slots: &[&[(&str, i64)]],
    ops: &[&[&[&str]]],
) -> Result<ComplexSpec> {
    let frame = frame_registry(frame_name)?;
    let n = frame.nvars();
    let slots = slots
        .iter()
        .map(|s| {
            s.iter()
                .map(|(l, o)| Component {
                    label: l.to_string(),
                    offset: *o,
                })
                .collect()
        })
        .collect();
    let differentials = ops
        .iter()
        .map(|rows| {
            let rows = rows
                .iter()
                .map(|row| row.iter().map(|e| frame.op(e)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            OpMatrix::from_rows(n, rows)
        })
        .collect::<Result<Vec<_>>>()?;
    ComplexSpec::new(name, frame_name, frame.space.clone(), slots, differentials)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(
            complex_registry("deRham2").unwrap().slot_sizes(),
            vec![1, 2, 1]
        );
        assert_eq!(
            complex_registry("rumin").unwrap().slot_sizes(),
            vec![1, 2, 2, 1]
        );
        let g2 = complex_registry("grushin2").unwrap();
        assert_eq!(g2.slot_sizes(), vec![1, 2, 2, 2, 1]);
        assert_eq!(
            g2.offsets(),
            vec![vec![0], vec![1, 1], vec![4, 3], vec![6, 6], vec![7]]
        );
        assert!(matches!(
            complex_registry("bgg"),
            Err(Error::UnknownComplex(_))
        ));
    }

    #[test]
    fn rumin_middle_operator_matches_display() {
        let spec = complex_registry("rumin").unwrap();
        let h = frame_registry("heisenberg").unwrap();
        let d = &spec.differentials[1];
        // [a; b] ↦ [X²b − (XY+Z)a ; Y²a − (YX−Z)b]
        assert_eq!(d.get(0, 1), &h.op("XX").unwrap());
        assert_eq!(d.get(0, 0), &(-&h.op("XY + Z").unwrap()));
        assert_eq!(d.get(1, 0), &h.op("YY").unwrap());
        assert_eq!(d.get(1, 1), &(-&h.op("YX - Z").unwrap()));
    }
}
