use std::fmt::Write as _;

use grushin_core::homology::CohomologyReport;
use grushin_core::{OpMatrix, Polynomial};

pub fn tuple(v: &[Polynomial], names: &[String]) -> String {
    let parts: Vec<String> = v.iter().map(|p| p.display(names)).collect();
    format!("({})", parts.join(", "))
}

pub fn op_matrix(name: &str, m: &OpMatrix, names: &[String]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{name} ({}x{}):", m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let _ = writeln!(s, "  [{r}][{c}] = {}", m.get(r, c).display(names));
        }
    }
    s
}

pub fn cohomology_text(r: &CohomologyReport, names: &[String]) -> String {
    let n = r.totals.len();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "complex {}: cohomology by total degree 0..={}",
        r.complex, r.max_degree
    );
    let header: Vec<String> = (0..n).map(|i| format!("H{i}")).collect();
    let _ = writeln!(
        s,
        "{:<8}{}",
        "degree",
        header.iter().map(|h| format!("{h:>5}")).collect::<String>()
    );
    for d in &r.degrees {
        let row: String = d
            .slots
            .iter()
            .map(|x| format!("{:>5}", x.cohomology))
            .collect();
        let _ = writeln!(s, "{:<8}{row}", d.degree);
    }
    let tot: String = r.totals.iter().map(|t| format!("{t:>5}")).collect();
    let _ = writeln!(s, "{:<8}{tot}", "totals");
    let _ = writeln!(s, "representatives:");
    for i in 0..n {
        for (g, h) in r.representatives(i) {
            let _ = writeln!(s, "  H{i} degree {g}: {}", tuple(h, names));
        }
    }
    s
}

pub fn cohomology_csv(r: &CohomologyReport) -> String {
    let n = r.totals.len();
    let mut s = String::from("degree");
    for i in 0..n {
        let _ = write!(s, ",slot{i}");
    }
    s.push('\n');
    for d in &r.degrees {
        let _ = write!(s, "{}", d.degree);
        for x in &d.slots {
            let _ = write!(s, ",{}", x.cohomology);
        }
        s.push('\n');
    }
    s.push_str("totals");
    for t in &r.totals {
        let _ = write!(s, ",{t}");
    }
    s.push('\n');
    s
}

pub fn json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
