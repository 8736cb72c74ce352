use super::{BracketDecl, Coframe, DegenerateLocus, Field, Frame, Space};
use crate::error::{Error, Result};
use crate::exactalg::{int, rat, Polynomial};
use crate::weyl::DiffOp;

pub const FRAME_NAMES: [&str; 7] = [
    "flat2",
    "heisenberg",
    "engel",
    "grushin1",
    "grushin2",
    "martinet",
    "engel_alt",
];

pub fn frame_registry(name: &str) -> Result<Frame> {
    match name {
        "flat2" => Ok(flat2()),
        "heisenberg" => Ok(heisenberg()),
        "engel" => Ok(engel()),
        "grushin1" => Ok(grushin1()),
        "grushin2" => Ok(grushin2()),
        "martinet" => Ok(martinet()),
        "engel_alt" => Ok(engel_alt()),
        other => Err(Error::UnknownFrame(other.to_string())),
    }
}

/// `Σ coeff ∂_var` from textual coefficients.
fn vf(space: &Space, parts: &[(&str, &str)]) -> DiffOp {
    let comps: Vec<(Polynomial, usize)> = parts
        .iter()
        .map(|(coeff, var)| {
            (
                space.poly(coeff).expect("registry literal"),
                space.index(var).unwrap(),
            )
        })
        .collect();
    DiffOp::vector_field(space.dim(), &comps)
}

fn fields(list: Vec<(&str, DiffOp)>) -> Vec<Field> {
    list.into_iter()
        .map(|(name, op)| Field {
            name: name.into(),
            op,
        })
        .collect()
}

/// Bracket table over all pairs `i < j`: `relations` lists the nonzero ones
/// as `(left, right, result)`, everything else is declared zero.
fn table(fields: &[Field], relations: &[(&str, &str, &str)]) -> Vec<BracketDecl> {
    let n = fields[0].op.nvars();
    let idx = |name: &str| fields.iter().position(|f| f.name == name).unwrap();
    let mut out = Vec::new();
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            let hit = relations
                .iter()
                .find(|(l, r, _)| idx(l) == i && idx(r) == j);
            let (expected, label) = match hit {
                Some((_, _, res)) => (fields[idx(res)].op.clone(), res.to_string()),
                None => (DiffOp::zero(n), "0".to_string()),
            };
            out.push(BracketDecl {
                left: i,
                right: j,
                expected,
                label,
            });
        }
    }
    out
}

fn hyperplane_x(fields: Vec<usize>, description: &str) -> DegenerateLocus {
    DegenerateLocus::Hyperplane {
        var: 0,
        fields,
        description: description.into(),
    }
}

fn flat2() -> Frame {
    let space = Space::new(&[("x", 1), ("y", 1)]);
    let f = fields(vec![
        ("X", vf(&space, &[("1", "x")])),
        ("Y", vf(&space, &[("1", "y")])),
    ]);
    let brackets = table(&f, &[]);
    Frame {
        name: "flat2".into(),
        space,
        fields: f,
        brackets,
        locus: DegenerateLocus::Empty,
        coframe: None,
    }
}

fn heisenberg() -> Frame {
    let space = Space::new(&[("x", 1), ("t", 1), ("y", 2)]);
    let f = fields(vec![
        ("X", vf(&space, &[("1", "x")])),
        ("Y", vf(&space, &[("1", "t"), ("x", "y")])),
        ("Z", vf(&space, &[("1", "y")])),
    ]);
    let brackets = table(&f, &[("X", "Y", "Z")]);
    let p = |s: &str| space.poly(s).unwrap();
    // ξ = dx, η = dt, ζ = dy − x dt; dζ = η∧ξ
    let coframe = Coframe {
        labels: vec!["ξ".into(), "η".into(), "ζ".into()],
        matrix: vec![
            vec![p("1"), p("0"), p("0")],
            vec![p("0"), p("1"), p("0")],
            vec![p("0"), p("-x"), p("1")],
        ],
        structure: vec![vec![], vec![], vec![((0, 1), int(-1))]],
    };
    Frame {
        name: "heisenberg".into(),
        space,
        fields: f,
        brackets,
        locus: DegenerateLocus::Empty,
        coframe: Some(coframe),
    }
}

fn engel() -> Frame {
    let space = Space::new(&[("x", 1), ("z", 1), ("t", 2), ("y", 3)]);
    let f = fields(vec![
        ("X", vf(&space, &[("1", "x")])),
        ("Y", vf(&space, &[("1", "z"), ("x", "t"), ("x^2", "y")])),
        ("Z", vf(&space, &[("1", "t"), ("2*x", "y")])),
        ("W", vf(&space, &[("2", "y")])),
    ]);
    let brackets = table(&f, &[("X", "Y", "Z"), ("X", "Z", "W")]);
    let p = |s: &str| space.poly(s).unwrap();
    // ξ = dx, η = dz, ζ = dt − x dz, ω = ½(dy − 2x dt + x² dz);
    // dζ = η∧ξ, dω = ζ∧ξ
    let coframe = Coframe {
        labels: vec!["ξ".into(), "η".into(), "ζ".into(), "ω".into()],
        matrix: vec![
            vec![p("1"), p("0"), p("0"), p("0")],
            vec![p("0"), p("1"), p("0"), p("0")],
            vec![p("0"), p("-x"), p("1"), p("0")],
            vec![
                p("0"),
                p("1/2*x^2"),
                p("-x"),
                Polynomial::constant(4, rat(1, 2)),
            ],
        ],
        structure: vec![
            vec![],
            vec![],
            vec![((0, 1), int(-1))],
            vec![((0, 2), int(-1))],
        ],
    };
    Frame {
        name: "engel".into(),
        space,
        fields: f,
        brackets,
        locus: DegenerateLocus::Empty,
        coframe: Some(coframe),
    }
}

fn engel_alt() -> Frame {
    let space = Space::new(&[("x", 1), ("z", 1), ("t", 2), ("y", 3)]);
    let f = fields(vec![
        ("X", vf(&space, &[("1", "x"), ("-z", "t"), ("-t", "y")])),
        ("Y", vf(&space, &[("1", "z")])),
        ("Z", vf(&space, &[("1", "t")])),
        ("W", vf(&space, &[("1", "y")])),
    ]);
    // computed, not assumed: with these signs the relations come out the
    // same as for `engel`
    let brackets = table(&f, &[("X", "Y", "Z"), ("X", "Z", "W")]);
    Frame {
        name: "engel_alt".into(),
        space,
        fields: f,
        brackets,
        locus: DegenerateLocus::Empty,
        coframe: None,
    }
}

fn grushin1() -> Frame {
    let space = Space::new(&[("x", 1), ("y", 2)]);
    let f = fields(vec![
        ("X", vf(&space, &[("1", "x")])),
        ("Y", vf(&space, &[("x", "y")])),
        ("Z", vf(&space, &[("1", "y")])),
    ]);
    let brackets = table(&f, &[("X", "Y", "Z")]);
    Frame {
        name: "grushin1".into(),
        space,
        fields: f,
        brackets,
        locus: hyperplane_x(vec![0, 1], "span{X, Y} drops rank along the y-axis {x = 0}"),
        coframe: None,
    }
}

fn grushin2() -> Frame {
    let space = Space::new(&[("x", 1), ("y", 3)]);
    let f = fields(vec![
        ("X", vf(&space, &[("1", "x")])),
        ("Y", vf(&space, &[("x^2", "y")])),
        ("Z", vf(&space, &[("2*x", "y")])),
        ("W", vf(&space, &[("2", "y")])),
    ]);
    let brackets = table(&f, &[("X", "Y", "Z"), ("X", "Z", "W")]);
    Frame {
        name: "grushin2".into(),
        space,
        fields: f,
        brackets,
        locus: hyperplane_x(
            vec![0, 1, 2],
            "span{X, Y} and span{X, Y, Z} drop rank along the y-axis {x = 0}",
        ),
        coframe: None,
    }
}

fn martinet() -> Frame {
    let space = Space::new(&[("x", 1), ("z", 1), ("y", 3)]);
    let f = fields(vec![
        ("X", vf(&space, &[("1", "x")])),
        ("Y", vf(&space, &[("1", "z"), ("x^2", "y")])),
        ("Z", vf(&space, &[("2*x", "y")])),
        ("W", vf(&space, &[("2", "y")])),
    ]);
    let brackets = table(&f, &[("X", "Y", "Z"), ("X", "Z", "W")]);
    Frame {
        name: "martinet".into(),
        space,
        fields: f,
        brackets,
        locus: hyperplane_x(
            vec![0, 1, 2],
            "span{X, Y, Z} drops rank along the (y, z)-plane {x = 0}",
        ),
        coframe: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::OpWeight;

    #[test]
    fn every_frame_passes_its_bracket_table() {
        for name in FRAME_NAMES {
            let f = frame_registry(name).unwrap();
            let report = f.verify_brackets().unwrap();
            assert!(report.passed, "{name}: {:?}", report.checks);
        }
    }

    #[test]
    fn bracket_table_sizes() {
        let count = |n: &str| frame_registry(n).unwrap().brackets.len();
        assert_eq!(count("flat2"), 1);
        assert_eq!(count("heisenberg"), 3);
        assert_eq!(count("grushin1"), 3);
        assert_eq!(count("grushin2"), 6);
        assert_eq!(count("engel"), 6);
    }

    #[test]
    fn weights_make_fields_negative_and_homogeneous() {
        let expect = |name: &str, w: &[i64]| {
            let f = frame_registry(name).unwrap();
            let got: Vec<OpWeight> = f
                .field_weights()
                .unwrap()
                .into_iter()
                .map(|(_, w)| w)
                .collect();
            let want: Vec<OpWeight> = w.iter().map(|&v| OpWeight::Weight(v)).collect();
            assert_eq!(got, want, "{name}");
        };
        expect("flat2", &[-1, -1]);
        expect("heisenberg", &[-1, -1, -2]);
        expect("grushin1", &[-1, -1, -2]);
        expect("grushin2", &[-1, -1, -2, -3]);
        expect("martinet", &[-1, -1, -2, -3]);
        expect("engel", &[-1, -1, -2, -3]);
        expect("engel_alt", &[-1, -1, -2, -3]);
    }

    #[test]
    fn coframes_are_dual_with_declared_structure() {
        for name in ["heisenberg", "engel"] {
            let f = frame_registry(name).unwrap();
            let report = f.coframe().unwrap().verify(&f);
            assert!(report.dual, "{name} coframe not dual");
            assert!(report.structure_matches, "{name}: {:?}", report.mismatches);
        }
        let e = frame_registry("engel").unwrap();
        let c = e.coframe().unwrap();
        assert_eq!(c.structure_display(2), "dζ = η∧ξ");
        assert_eq!(c.structure_display(3), "dω = ζ∧ξ");
        assert!(frame_registry("grushin1").unwrap().coframe().is_err());
    }

    #[test]
    fn all_frames_bracket_generate() {
        for name in FRAME_NAMES {
            assert!(
                frame_registry(name)
                    .unwrap()
                    .is_bracket_generating()
                    .unwrap(),
                "{name}"
            );
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(frame_registry("sl3"), Err(Error::UnknownFrame(_))));
    }
}
