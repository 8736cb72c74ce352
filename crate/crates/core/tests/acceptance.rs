//! Acceptance criteria, one line per criterion. Every comparison is exact.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use grushin_core::deriv::{derive_complex, DeriveTarget};
use grushin_core::exactalg::int;
use grushin_core::homology::{
    check_integrability, cohomology, euler_check, roundtrip, solve_potential,
};
use grushin_core::{
    complex_registry, frame_registry, DiffOp, Polynomial, COMPLEX_NAMES, FRAME_NAMES,
};

type Check = Result<String, String>;
/// (left, right, Σ (coefficient, variable)) for one nonzero bracket.
type Bracket<'a> = (&'a str, &'a str, &'a [(&'a str, &'a str)]);
type Criterion = (&'static str, &'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// `Σ c ∂_v` built from raw partials, independent of the registry fields.
fn field(frame: &str, parts: &[(&str, &str)]) -> DiffOp {
    let f = frame_registry(frame).unwrap();
    let s = &f.space;
    let mut op = DiffOp::zero(s.dim());
    for (coeff, var) in parts {
        let d = DiffOp::partial(s.dim(), s.index(var).unwrap());
        op = &op
            + &DiffOp::multiplication(s.poly(coeff).unwrap())
                .compose(&d)
                .unwrap();
    }
    op
}

fn ac1() -> Check {
    let displayed: &[(&str, &[Bracket])] = &[
        ("flat2", &[]),
        ("heisenberg", &[("X", "Y", &[("1", "y")])]),
        ("grushin1", &[("X", "Y", &[("1", "y")])]),
        (
            "grushin2",
            &[("X", "Y", &[("2*x", "y")]), ("X", "Z", &[("2", "y")])],
        ),
        (
            "martinet",
            &[("X", "Y", &[("2*x", "y")]), ("X", "Z", &[("2", "y")])],
        ),
        (
            "engel",
            &[
                ("X", "Y", &[("1", "t"), ("2*x", "y")]),
                ("X", "Z", &[("2", "y")]),
            ],
        ),
        (
            "engel_alt",
            &[("X", "Y", &[("1", "t")]), ("X", "Z", &[("1", "y")])],
        ),
    ];
    let mut checked = 0;
    for &(name, relations) in displayed {
        let f = frame_registry(name).map_err(|e| e.to_string())?;
        let report = f.verify_brackets().map_err(|e| e.to_string())?;
        ensure(report.passed, format!("{name}: declared table fails"))?;
        let n = f.fields.len();
        for i in 0..n {
            for j in i + 1..n {
                let (l, r) = (&f.fields[i], &f.fields[j]);
                let got = l.op.bracket(&r.op).unwrap();
                let want = relations
                    .iter()
                    .find(|(a, b, _)| *a == l.name && *b == r.name)
                    .map_or_else(
                        || DiffOp::zero(f.nvars()),
                        |(_, _, parts)| field(name, parts),
                    );
                ensure(
                    got == want,
                    format!(
                        "{name}: [{}, {}] = {}",
                        l.name,
                        r.name,
                        got.display(&f.space.names)
                    ),
                )?;
                checked += 1;
            }
        }
    }
    ensure(FRAME_NAMES.len() == displayed.len(), "frame list changed")?;
    Ok(format!(
        "{checked} brackets over {} frames",
        displayed.len()
    ))
}

fn ac2() -> Check {
    let mut caught = 0;
    for name in COMPLEX_NAMES {
        let spec = complex_registry(name).map_err(|e| e.to_string())?;
        let r = spec.verify_complex().map_err(|e| e.to_string())?;
        ensure(r.passed, format!("{name} does not compose to zero"))?;
        // negative control: double one entry of the second-to-last map
        // (for deRham2, the first), which must break some composition
        let mut bad = spec.clone();
        let k = if bad.differentials.len() > 2 { 1 } else { 0 };
        let e = bad.differentials[k].get(0, 0).scale(&int(2));
        bad.differentials[k].set(0, 0, e);
        ensure(
            !bad.verify_complex().unwrap().passed,
            format!("{name}: mutation not caught"),
        )?;
        caught += 1;
    }
    Ok(format!(
        "{} complexes zero, {caught} mutations caught",
        COMPLEX_NAMES.len()
    ))
}

fn ac3() -> Check {
    let d = derive_complex(DeriveTarget::Rumin).map_err(|e| e.to_string())?;
    let h = frame_registry("heisenberg").unwrap();
    let mid = &d.complex.differentials[1];
    // X²b − (XY+Z)a and Y²a − (YX−Z)b
    ensure(mid.get(0, 1) == &h.op("XX").unwrap(), "X^2 b")?;
    ensure(mid.get(0, 0) == &-&h.op("XY + Z").unwrap(), "-(XY+Z) a")?;
    ensure(mid.get(1, 0) == &h.op("YY").unwrap(), "Y^2 a")?;
    ensure(mid.get(1, 1) == &-&h.op("YX - Z").unwrap(), "-(YX-Z) b")?;
    ensure(d.comparison.exact, d.comparison.summary())?;
    let spec = d.complex.to_spec("rumin").unwrap();
    let diff = spec.compare(&complex_registry("rumin").unwrap());
    ensure(diff.identical, format!("{:?}", diff.differences))?;
    Ok("all entries equal in normal form".into())
}

fn ac4() -> Check {
    let d = derive_complex(DeriveTarget::Engel).map_err(|e| e.to_string())?;
    ensure(d.complex.slot_sizes() == vec![1, 2, 2, 2, 1], "slot sizes")?;
    d.complex
        .check_zero_composition()
        .map_err(|e| e.to_string())?;
    let derived =
        cohomology(&d.complex.to_spec("engel-derived").unwrap(), 8).map_err(|e| e.to_string())?;
    let registry = cohomology(&complex_registry("engel").unwrap(), 8).map_err(|e| e.to_string())?;
    ensure(derived.dims() == registry.dims(), "cohomology differs")?;
    let c = &d.comparison;
    ensure(c.up_to_sign || c.component_signs.is_some(), c.summary())?;
    Ok(format!(
        "cohomology agrees for g <= 8; operators {}",
        c.summary()
    ))
}

fn ac5() -> Check {
    for (from, kill, to) in [
        ("rumin", vec!["t"], "grushin1"),
        ("engel", vec!["t"], "martinet"),
        ("engel", vec!["z", "t"], "grushin2"),
    ] {
        let r = complex_registry(from)
            .unwrap()
            .symmetry_reduce(&kill)
            .map_err(|e| e.to_string())?;
        let diff = r.compare(&complex_registry(to).unwrap());
        ensure(
            diff.identical,
            format!("{from}/{kill:?}: {:?}", diff.differences),
        )?;
    }
    Ok("three reductions identical".into())
}

fn ac6() -> Check {
    let want: &[(&str, &[usize])] = &[
        ("rumin", &[1, 0, 0, 0]),
        ("engel", &[1, 0, 0, 0, 0]),
        ("grushin1", &[1, 1, 0, 0]),
        ("martinet", &[1, 1, 0, 0, 0]),
        ("grushin2", &[1, 2, 1, 0, 0]),
    ];
    for (name, totals) in want {
        let r = cohomology(&complex_registry(name).unwrap(), 12).map_err(|e| e.to_string())?;
        ensure(r.totals == *totals, format!("{name}: {:?}", r.totals))?;
    }
    Ok("totals match for five complexes".into())
}

fn ac7() -> Check {
    let reps = |name: &str, slot: usize| -> Vec<Vec<Polynomial>> {
        let r = cohomology(&complex_registry(name).unwrap(), 12).unwrap();
        r.representatives(slot)
            .into_iter()
            .map(|(_, v)| v.clone())
            .collect()
    };
    let vecs = |name: &str, list: &[[&str; 2]]| -> Vec<Vec<Polynomial>> {
        let s = complex_registry(name).unwrap().space;
        list.iter()
            .map(|pair| pair.iter().map(|t| s.poly(t).unwrap()).collect())
            .collect()
    };
    ensure(
        reps("grushin1", 1) == vecs("grushin1", &[["0", "1"]]),
        "grushin1 H1",
    )?;
    ensure(
        reps("martinet", 1) == vecs("martinet", &[["0", "x"]]),
        "martinet H1",
    )?;
    let mut g2 = reps("grushin2", 1);
    let mut want = vecs("grushin2", &[["0", "x"], ["0", "1"]]);
    g2.sort_by_key(|v| v[1].display(&["x".into(), "y".into()]));
    want.sort_by_key(|v| v[1].display(&["x".into(), "y".into()]));
    ensure(g2 == want, "grushin2 H1")?;
    ensure(
        reps("grushin2", 2) == vecs("grushin2", &[["0", "1"]]),
        "grushin2 H2",
    )?;
    Ok("(0,1); (0,x); {(0,x),(0,1)}; H2 (0,1)".into())
}

fn ac8() -> Check {
    let mut total = 0;
    for name in ["grushin1", "martinet", "grushin2"] {
        let r = roundtrip(name, 100, 0).map_err(|e| e.to_string())?;
        ensure(r.passed == 100, format!("{name}: {:?}", r.failures))?;
        total += r.passed;
    }
    Ok(format!("{total}/300 cases recovered"))
}

fn ac9() -> Check {
    let spec = complex_registry("grushin1").unwrap();
    let p = |t: &str| spec.space.poly(t).unwrap();
    let r = check_integrability(&spec, 1, &[p("0"), p("y")]).map_err(|e| e.to_string())?;
    ensure(!r.holds, "accepted")?;
    ensure(r.residuals[0].is_zero(), "first condition should hold")?;
    ensure(
        r.residuals[1] == p("-1"),
        format!("residual {}", r.residuals[1].display(&spec.space.names)),
    )?;
    ensure(
        solve_potential("grushin1", &p("0"), &p("y")).is_err(),
        "solver accepted",
    )?;
    Ok(format!("rejected, {}: residual -1", r.conditions[1]))
}

fn ac10() -> Check {
    let mut n = 0;
    for name in COMPLEX_NAMES {
        let spec = complex_registry(name).unwrap();
        for g in 0..=10 {
            ensure(
                euler_check(&spec, g).map_err(|e| e.to_string())?,
                format!("{name} degree {g}"),
            )?;
            n += 1;
        }
    }
    Ok(format!("{n} (complex, degree) pairs"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1", "bracket tables", ac1),
        ("AC2", "complex property", ac2),
        ("AC3", "rumin derivation", ac3),
        ("AC4", "engel derivation", ac4),
        ("AC5", "symmetry reduction", ac5),
        ("AC6", "cohomology totals", ac6),
        ("AC7", "representatives", ac7),
        ("AC8", "round-trip solver", ac8),
        ("AC9", "negative integrability", ac9),
        ("AC10", "euler consistency", ac10),
    ];
    let mut failed = 0;
    for (id, title, run) in criteria {
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("{id} PASS {title}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("{id} FAIL {title}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
