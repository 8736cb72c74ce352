use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Context as _;
use serde_json::json;

use grushin_core::deriv::{derive_complex, DeriveTarget};
use grushin_core::homology::{
    check_integrability, cohomology_with_order, roundtrip as run_roundtrip, solve_named,
    solve_potential, split_cocycle, BasisOrder,
};
use grushin_core::serial::{parse_pjson, versioned};
use grushin_core::{complex_registry, frame_registry, Polynomial, COMPLEX_NAMES, FRAME_NAMES};

use crate::render::{cohomology_csv, cohomology_text, json as to_json, op_matrix, tuple};
use crate::{Format, Report};

/// Bad invocation that clap cannot catch; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn no_csv(format: Format, command: &str) -> anyhow::Result<()> {
    if format == Format::Csv {
        anyhow::bail!(UsageError(format!("{command} has no csv output")));
    }
    Ok(())
}

pub fn verify(
    complex: Option<&str>,
    frame: Option<&str>,
    all: bool,
    format: Format,
) -> anyhow::Result<Report> {
    no_csv(format, "verify")?;
    let (frames, complexes): (Vec<&str>, Vec<&str>) = match (complex, frame, all) {
        (_, _, true) => (FRAME_NAMES.to_vec(), COMPLEX_NAMES.to_vec()),
        (Some(c), None, false) => (vec![], vec![c]),
        (None, Some(f), false) => (vec![f], vec![]),
        _ => anyhow::bail!(UsageError("give one of --complex, --frame or --all".into())),
    };
    let mut ok = true;
    let mut text = String::new();
    let mut records = Vec::new();
    for name in frames {
        let f = frame_registry(name)?;
        let rep = f.verify_brackets()?;
        let cof = f.coframe.as_ref().map(|c| c.verify(&f));
        let generating = f.is_bracket_generating()?;
        let pass =
            rep.passed && generating && cof.as_ref().is_none_or(|c| c.dual && c.structure_matches);
        ok &= pass;
        let _ = writeln!(text, "frame {name}: {} bracket checks", rep.checks.len());
        for c in &rep.checks {
            let _ = writeln!(
                text,
                "  [{}, {}] = {:<3} {}  (computed {})",
                c.pair.0,
                c.pair.1,
                c.declared,
                if c.pass { "ok" } else { "FAIL" },
                c.computed
            );
        }
        let _ = writeln!(
            text,
            "  bracket generating: {}",
            if generating { "yes" } else { "no" }
        );
        if let Some(c) = &cof {
            let _ = writeln!(
                text,
                "  coframe: dual {}, structure equations {}",
                if c.dual { "ok" } else { "FAIL" },
                if c.structure_matches { "ok" } else { "FAIL" }
            );
        }
        let _ = writeln!(text, "  {}", if pass { "PASS" } else { "FAIL" });
        records.push(json!({"frame": name, "brackets": rep, "bracket_generating": generating, "coframe": cof, "passed": pass}));
    }
    for name in complexes {
        let spec = complex_registry(name)?;
        let comp = spec.verify_complex()?;
        let hom = spec.verify_homogeneity()?;
        let pass = comp.passed && hom.passed;
        ok &= pass;
        let _ = writeln!(
            text,
            "complex {name}: {} differentials, {} compositions checked",
            spec.differentials.len(),
            comp.checks.len()
        );
        for c in &comp.checks {
            let _ = writeln!(
                text,
                "  D{}∘D{} {}",
                c.index + 1,
                c.index,
                if c.zero { "= 0 ok" } else { "≠ 0 FAIL" }
            );
            for (r, col, op) in &c.offending {
                let _ = writeln!(text, "    entry ({r},{col}): {op}");
            }
        }
        let bad = hom.entries.iter().filter(|e| !e.ok).count();
        let _ = writeln!(
            text,
            "  homogeneity: {} entries, {}",
            hom.entries.len(),
            if bad == 0 {
                "ok".to_string()
            } else {
                format!("{bad} FAIL")
            }
        );
        let _ = writeln!(text, "  {}", if pass { "PASS" } else { "FAIL" });
        records.push(
            json!({"complex": name, "compositions": comp, "homogeneity": hom, "passed": pass}),
        );
    }
    let body = match format {
        Format::Json => to_json(&versioned(
            "verify",
            &json!({"passed": ok, "items": records}),
        )),
        _ => {
            let _ = writeln!(
                text,
                "{}",
                if ok {
                    "all checks passed"
                } else {
                    "some checks FAILED"
                }
            );
            text
        }
    };
    Ok(Report { body, ok })
}

pub fn cohomology(
    complex: &str,
    max_degree: u64,
    reversed: bool,
    format: Format,
) -> anyhow::Result<Report> {
    let spec = complex_registry(complex)?;
    let order = if reversed {
        BasisOrder::Reversed
    } else {
        BasisOrder::Standard
    };
    let r = cohomology_with_order(&spec, max_degree, order)?;
    let body = match format {
        Format::Text => cohomology_text(&r, &spec.space.names),
        Format::Csv => cohomology_csv(&r),
        Format::Json => to_json(&versioned("cohomology", &r)),
    };
    Ok(Report { body, ok: true })
}

fn read_poly(path: Option<PathBuf>, flag: &str, nvars: usize) -> anyhow::Result<Polynomial> {
    let path = path.ok_or_else(|| UsageError(format!("missing --{flag}")))?;
    let text =
        std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    parse_pjson(&text, nvars).with_context(|| format!("parsing {}", path.display()))
}

pub fn solve(
    complex: &str,
    level: usize,
    first: Option<PathBuf>,
    second: Option<PathBuf>,
    format: Format,
) -> anyhow::Result<Report> {
    no_csv(format, "solve")?;
    let spec = complex_registry(complex)?;
    let names = &spec.space.names;
    let n = spec.space.dim();
    let flags = if level == 1 { ["a", "b"] } else { ["c", "d"] };
    let v = vec![
        read_poly(first, flags[0], n)?,
        read_poly(second, flags[1], n)?,
    ];
    if spec.slots.get(level).map(Vec::len) != Some(2) {
        anyhow::bail!(UsageError(format!(
            "slot {level} of {complex} does not have two components"
        )));
    }
    let integ = check_integrability(&spec, level, &v)?;
    if !integ.holds {
        let failed = integ.failures(names);
        let body = match format {
            Format::Json => to_json(&versioned(
                "solve",
                &json!({"complex": complex, "level": level, "integrable": false, "integrability": integ, "failed": failed}),
            )),
            _ => {
                let mut s = format!("{complex}: input is not integrable\n");
                for f in &failed {
                    let _ = writeln!(s, "  {f}");
                }
                s
            }
        };
        return Ok(Report { body, ok: false });
    }
    let named = matches!(
        (complex, level),
        ("grushin1" | "martinet" | "grushin2", 1) | ("grushin2", 2)
    );
    let body = if named && level == 1 {
        let p = solve_potential(complex, &v[0], &v[1])?;
        match format {
            Format::Json => to_json(&versioned(
                "solve",
                &json!({"complex": complex, "level": 1, "integrable": true, "f": p.f, "constants": p.constants, "certificate": p.certificate}),
            )),
            _ => {
                let mut s = format!("{complex}: f = {}\n", p.f.display(names));
                for k in &p.constants {
                    let _ = writeln!(s, "{} = {}", k.name, k.value);
                }
                let _ = writeln!(s, "certificate:");
                for line in &p.certificate {
                    let _ = writeln!(s, "  {line}");
                }
                s
            }
        }
    } else if named {
        let sol = solve_named(complex, level, &v)?;
        match format {
            Format::Json => to_json(&versioned(
                "solve",
                &json!({"complex": complex, "level": level, "integrable": true, "potential": sol.potential, "constants": sol.constants}),
            )),
            _ => {
                let mut s = format!("{complex}: potential = {}\n", tuple(&sol.potential, names));
                for k in &sol.constants {
                    let _ = writeln!(
                        s,
                        "{} = {}  (representative {})",
                        k.name,
                        k.value,
                        tuple(&k.representative, names)
                    );
                }
                s
            }
        }
    } else {
        let split = split_cocycle(&spec, level, &v)?;
        match format {
            Format::Json => to_json(&versioned(
                "solve",
                &json!({"complex": complex, "level": level, "integrable": true, "split": split}),
            )),
            _ => {
                let mut s = format!(
                    "{complex}: potential = {}\n",
                    tuple(&split.potential, names)
                );
                for k in split.constants.iter().filter(|k| k.value != num_zero()) {
                    let _ = writeln!(
                        s,
                        "constant {} against {} (degree {})",
                        k.value,
                        tuple(&k.representative, names),
                        k.degree
                    );
                }
                s
            }
        }
    };
    Ok(Report { body, ok: true })
}

fn num_zero() -> grushin_core::Rational {
    grushin_core::Rational::from_integer(0.into())
}

pub fn roundtrip(complex: &str, cases: usize, seed: u64, format: Format) -> anyhow::Result<Report> {
    no_csv(format, "solve")?;
    if !["grushin1", "martinet", "grushin2"].contains(&complex) {
        anyhow::bail!(UsageError(format!("no round-trip suite for {complex}")));
    }
    let r = run_roundtrip(complex, cases, seed)?;
    let ok = r.failures.is_empty();
    let body = match format {
        Format::Json => to_json(&versioned("roundtrip", &r)),
        _ => {
            let mut s = format!(
                "{complex}: round-trip {}/{} passed (seed {seed})\n",
                r.passed, r.cases
            );
            for f in &r.failures {
                let _ = writeln!(s, "  {f}");
            }
            s
        }
    };
    Ok(Report { body, ok })
}

pub fn derive(target: &str, format: Format) -> anyhow::Result<Report> {
    no_csv(format, "derive")?;
    let t = DeriveTarget::parse(target)?;
    let d = derive_complex(t)?;
    let c = &d.complex;
    let names = &c.space.names;
    let cmp = &d.comparison;
    let ok = cmp.exact;
    let body = match format {
        Format::Json => {
            let slots: Vec<_> = c
                .slots
                .iter()
                .map(|s| {
                    s.iter()
                        .map(|k| json!({"label": k.label, "basis": k.basis, "offset": k.offset}))
                        .collect::<Vec<_>>()
                })
                .collect();
            let steps: Vec<_> = d
                .steps
                .iter()
                .map(|r| json!({"slot": r.step.slot, "removed": r.removed, "removed_next": r.removed_next, "alpha": r.alpha, "alpha_inverse": r.alpha_inv}))
                .collect();
            to_json(&versioned(
                "derive",
                &json!({
                    "target": target,
                    "frame": c.frame,
                    "variables": c.space,
                    "slots": slots,
                    "differentials": c.differentials,
                    "steps": steps,
                    "orientations": d.orientations,
                    "comparison": cmp,
                    "matches_registry": cmp.summary(),
                }),
            ))
        }
        _ => {
            let mut s = format!(
                "derived {target} from the de Rham complex of {}\n",
                d.de_rham.frame
            );
            for (k, r) in d.steps.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "cancellation {}: slot {} {{{}}} against slot {} {{{}}}",
                    k + 1,
                    r.step.slot,
                    r.removed.join(", "),
                    r.step.slot + 1,
                    r.removed_next.join(", ")
                );
            }
            let _ = writeln!(s, "orientations: {}", d.orientations.join("; "));
            for (i, slot) in c.slots.iter().enumerate() {
                let comps: Vec<String> = slot
                    .iter()
                    .map(|k| format!("{} (offset {})", k.label, k.offset))
                    .collect();
                let _ = writeln!(s, "slot {i}: {}", comps.join(", "));
            }
            for (i, m) in c.differentials.iter().enumerate() {
                s.push_str(&op_matrix(&format!("D{i}"), m, names));
            }
            let _ = writeln!(s, "zero composition: verified");
            if !cmp.exact {
                for e in cmp
                    .entries
                    .iter()
                    .filter(|e| e.relation != grushin_core::deriv::Relation::Equal)
                {
                    let _ = writeln!(
                        s,
                        "  D{} [{}][{}]: {:?}: derived {} vs registry {}",
                        e.differential, e.row, e.col, e.relation, e.derived, e.registry
                    );
                }
            }
            let _ = writeln!(s, "matches registry: {}", cmp.summary());
            s
        }
    };
    Ok(Report { body, ok })
}

pub fn reduce(
    from: &str,
    kill: &[String],
    compare: Option<&str>,
    format: Format,
) -> anyhow::Result<Report> {
    no_csv(format, "reduce")?;
    let spec = complex_registry(from)?;
    let killed: Vec<&str> = kill.iter().map(|s| s.trim()).collect();
    let reduced = spec.symmetry_reduce(&killed)?;
    let names = &reduced.space.names;
    let diff = match compare {
        Some(other) => Some(reduced.compare(&complex_registry(other)?)),
        None => None,
    };
    let ok = diff.as_ref().is_none_or(|d| d.identical);
    let body = match format {
        Format::Json => to_json(&versioned(
            "reduce",
            &json!({
                "from": from,
                "killed": killed,
                "variables": reduced.space,
                "slots": reduced.slots,
                "differentials": reduced.differentials,
                "compare": compare,
                "identical": diff.as_ref().map(|d| d.identical),
                "differences": diff.as_ref().map(|d| &d.differences),
            }),
        )),
        _ => {
            let vars: Vec<String> = names
                .iter()
                .zip(&reduced.space.weights)
                .map(|(n, w)| format!("{n}:{w}"))
                .collect();
            let mut s = format!("{} on ({})\n", reduced.name, vars.join(", "));
            for (i, m) in reduced.differentials.iter().enumerate() {
                s.push_str(&op_matrix(&format!("D{i}"), m, names));
            }
            if let (Some(other), Some(d)) = (compare, &diff) {
                if d.identical {
                    let _ = writeln!(s, "compared with {other}: identical");
                } else {
                    let _ = writeln!(s, "compared with {other}: different");
                    for line in &d.differences {
                        let _ = writeln!(s, "  {line}");
                    }
                }
            }
            s
        }
    };
    Ok(Report { body, ok })
}

pub fn frames(name: Option<&str>, format: Format) -> anyhow::Result<Report> {
    no_csv(format, "frames")?;
    let list: Vec<&str> = match name {
        Some(n) => vec![n],
        None => FRAME_NAMES.to_vec(),
    };
    let mut text = String::new();
    let mut records = Vec::new();
    for n in list {
        let f = frame_registry(n)?;
        let names = &f.space.names;
        let vars: Vec<String> = names
            .iter()
            .zip(&f.space.weights)
            .map(|(v, w)| format!("{v}:{w}"))
            .collect();
        let fields: Vec<(String, String)> = f
            .fields
            .iter()
            .map(|x| (x.name.clone(), x.op.display(names)))
            .collect();
        let brackets: Vec<String> = f
            .brackets
            .iter()
            .map(|b| {
                format!(
                    "[{}, {}] = {}",
                    f.fields[b.left].name, f.fields[b.right].name, b.label
                )
            })
            .collect();
        let structure: Option<Vec<String>> = f
            .coframe
            .as_ref()
            .map(|c| (0..c.len()).map(|k| c.structure_display(k)).collect());
        let _ = writeln!(text, "{n} ({})", vars.join(", "));
        if name.is_some() {
            for (fname, op) in &fields {
                let _ = writeln!(text, "  {fname} = {op}");
            }
            for b in &brackets {
                let _ = writeln!(text, "  {b}");
            }
            let _ = writeln!(text, "  degenerate locus: {}", f.locus.description());
            match &structure {
                Some(eqs) => {
                    let _ = writeln!(text, "  coframe: {}", eqs.join(", "));
                }
                None => {
                    let _ = writeln!(text, "  coframe: none");
                }
            }
        }
        records.push(json!({
            "name": n,
            "variables": f.space,
            "fields": fields.iter().map(|(a, b)| json!({"name": a, "operator": b})).collect::<Vec<_>>(),
            "brackets": brackets,
            "degenerate_locus": f.locus.description(),
            "coframe": structure,
        }));
    }
    let body = match format {
        Format::Json => to_json(&versioned("frames", &records)),
        _ => text,
    };
    Ok(Report { body, ok: true })
}
