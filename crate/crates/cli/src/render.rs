//! Text and JSON documents. Numbers are rounded to 12 significant digits and
//! indices are 1-based.

use std::fmt::Write;

use serde_json::{json, Value};

use su2ym_core::atlas::AtlasEntry;
use su2ym_core::classify::{ClassParams, Condition, Family, ShapeCheck, Solution, SolutionReport};
use su2ym_core::linalg::{RealMatrix, Signature};
use su2ym_core::verify::residual;

/// Rounds to 12 significant digits; `-0` becomes `0`.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn num(x: f64) -> String {
    let r = round12(x);
    if r != 0.0 && (r.abs() < 1e-6 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn num_json(x: f64) -> Value {
    json!(round12(x))
}

fn matrix_json(a: &RealMatrix) -> Value {
    Value::Array(
        (0..a.rows())
            .map(|r| Value::Array((0..a.cols()).map(|c| num_json(a[(r, c)])).collect()))
            .collect(),
    )
}

fn class_json(c: ClassParams) -> Value {
    json!({"d": c.d, "x": c.x, "y": c.y})
}

fn sig_json(s: Signature) -> Value {
    json!({"p": s.p(), "q": s.q()})
}

/// A sampled family member.
pub struct Sample {
    pub t: f64,
    pub a: RealMatrix,
    pub f2: f64,
    pub residual: f64,
}

/// Deterministic parameter values for family samples.
pub fn sample_parameters(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let m = 1.0 + (k / 2) as f64 * 0.5;
            if k % 2 == 0 {
                m
            } else {
                -m
            }
        })
        .collect()
}

pub fn sample_family(f: &Family, report: &SolutionReport, n: usize) -> Vec<Sample> {
    sample_parameters(n)
        .into_iter()
        .filter_map(|t| {
            let a = f.member(t).ok()?;
            let f2 = su2ym_core::classify::strength_of(&a, report.sig).ok()?.f2;
            let res = residual(&a, &report.current, report.sig).ok()?.max_abs;
            Some(Sample {
                t,
                a,
                f2,
                residual: res,
            })
        })
        .collect()
}

/// Optional pieces of a solve document.
pub struct Extras<'a> {
    pub samples: Vec<Vec<Sample>>,
    pub oracle: Option<&'a [ShapeCheck]>,
    pub transform: Option<(&'a RealMatrix, &'a RealMatrix)>,
}

fn solution_json(s: &Solution) -> Value {
    let nz: Vec<Value> = s
        .strength
        .nonzero(1e-12)
        .into_iter()
        .map(|(mu, nu, c, v)| json!({"mu": mu + 1, "nu": nu + 1, "c": c + 1, "value": num_json(v)}))
        .collect();
    json!({
        "row": s.row,
        "branch": s.branch,
        "class": class_json(s.potential.params),
        "A": matrix_json(&s.potential.a),
        "strength": {"nonzero": nz, "f2": num_json(s.strength.f2)},
        "residual": {
            "max_abs": num_json(s.residual.max_abs),
            "per_equation": s.residual.per_equation.iter().map(|&v| num_json(v)).collect::<Vec<_>>(),
        },
    })
}

pub fn solve_json(r: &SolutionReport, x: &Extras) -> Value {
    let families: Vec<Value> = r
        .families
        .iter()
        .zip(x.samples.iter().map(Some).chain(std::iter::repeat(None)))
        .map(|(f, samples)| {
            let samples: Vec<Value> = samples
                .map(|v| {
                    v.iter()
                        .map(|s| {
                            json!({"a1": num_json(s.t), "A": matrix_json(&s.a), "f2": num_json(s.f2), "residual": num_json(s.residual)})
                        })
                        .collect()
                })
                .unwrap_or_default();
            json!({
                "row": f.row,
                "class": class_json(f.params),
                "parameter": f.parameter(),
                "domain": f.domain().to_string(),
                "generator": f.description(),
                "samples": samples,
            })
        })
        .collect();
    let mut doc = json!({
        "signature": sig_json(r.sig),
        "class": {
            "d": r.class.current.d,
            "x": r.class.current.x,
            "y": r.class.current.y,
            "subcase": r.class.subcase_label(),
        },
        "hyperbolic_singular_values": r.class.jvals.iter().map(|&v| num_json(v)).collect::<Vec<_>>(),
        "frame": r.frame.to_string(),
        "count_label": r.count_label().to_string(),
        "rows": r.rows,
        "current": matrix_json(&r.current),
        "solutions": r.exact.iter().map(solution_json).collect::<Vec<_>>(),
        "families": families,
        "notes": r.notes,
        "warnings": r.warnings,
    });
    if let Some((q, p)) = x.transform {
        doc["transform"] = json!({"Q": matrix_json(q), "P": matrix_json(p)});
    }
    if let Some(checks) = x.oracle {
        doc["oracle"] = Value::Array(
            checks
                .iter()
                .map(|c| {
                    json!({
                        "shape": c.shape.to_string(),
                        "match": c.report.is_match(),
                        "count": c.report.count(),
                        "verdict": c.report.to_string(),
                        "starts": c.oracle.starts_used,
                        "seed": c.oracle.seed,
                    })
                })
                .collect(),
        );
    }
    doc
}

fn matrix_text(out: &mut String, a: &RealMatrix, indent: &str) {
    let cells: Vec<Vec<String>> = (0..a.rows())
        .map(|r| (0..a.cols()).map(|c| num(a[(r, c)])).collect())
        .collect();
    let w = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "{indent}[ {} ]", line.join("  "));
    }
}

pub fn solve_text(r: &SolutionReport, x: &Extras) -> String {
    let mut o = String::new();
    let c = r.class.current;
    let _ = writeln!(o, "signature (p, q) = {}", r.sig);
    let _ = writeln!(o, "current class (d, x, y) = ({}, {}, {}), subcase: {}", c.d, c.x, c.y, r.class.subcase_label());
    let vals: Vec<String> = r.class.jvals.iter().map(|&v| num(v)).collect();
    let _ = writeln!(o, "hyperbolic singular values: [{}]", vals.join(", "));
    let _ = writeln!(o, "table rows: {}", r.rows.join(", "));
    let _ = writeln!(o, "frame: {}", r.frame);
    let count = r.count_label();
    let _ = match count {
        su2ym_core::classify::CountLabel::Empty => writeln!(o, "solutions: 0 (no solution)"),
        su2ym_core::classify::CountLabel::Infinite => writeln!(
            o,
            "solutions: {count} ({} isolated, {} families)",
            r.exact.len(),
            r.families.len()
        ),
        _ => writeln!(o, "solutions: {count}"),
    };
    if let Some((q, p)) = x.transform {
        let _ = writeln!(o, "\nframe change J = Q^-1 Sigma P^-1 with");
        let _ = writeln!(o, "  Q =");
        matrix_text(&mut o, q, "    ");
        let _ = writeln!(o, "  P =");
        matrix_text(&mut o, p, "    ");
    }
    for (i, s) in r.exact.iter().enumerate() {
        let _ = writeln!(
            o,
            "\nsolution {} [row {}, branch {}], class {}",
            i + 1,
            s.row,
            s.branch,
            s.potential.params
        );
        let _ = writeln!(o, "  A =");
        matrix_text(&mut o, &s.potential.a, "    ");
        let nz = s.strength.nonzero(1e-12);
        if nz.is_empty() {
            let _ = writeln!(o, "  F = 0");
        }
        for (mu, nu, c, v) in nz {
            let _ = writeln!(o, "  F^{{{} {}}}_{} = {}", mu + 1, nu + 1, c + 1, num(v));
        }
        let _ = writeln!(o, "  f2 = {}", num(s.strength.f2));
        let _ = writeln!(o, "  residual = {}", num(s.residual.max_abs));
    }
    for (i, f) in r.families.iter().enumerate() {
        let _ = writeln!(o, "\nfamily {} [row {}], class {}", i + 1, f.row, f.params);
        let _ = writeln!(o, "  {}", f.description());
        if let Some(samples) = x.samples.get(i) {
            for s in samples {
                let _ = writeln!(o, "  sample a1 = {}: f2 = {}, residual = {}", num(s.t), num(s.f2), num(s.residual));
                matrix_text(&mut o, &s.a, "    ");
            }
        }
    }
    if let Some(checks) = x.oracle {
        let _ = writeln!(o, "\noracle:");
        if checks.is_empty() {
            let _ = writeln!(o, "  no reduced system for this class");
        }
        for c in checks {
            let _ = writeln!(o, "  {}: {}", c.shape, c.report);
        }
    }
    if !r.notes.is_empty() {
        let _ = writeln!(o, "\nnotes:");
        for n in &r.notes {
            let _ = writeln!(o, "  {n}");
        }
    }
    if !r.warnings.is_empty() {
        let _ = writeln!(o, "\nwarnings:");
        for w in &r.warnings {
            let _ = writeln!(o, "  {w}");
        }
    }
    o
}

fn condition(e: &AtlasEntry) -> String {
    match e.row.condition {
        Condition::Any => "-".into(),
        Condition::Is(_) => e.key.subcase_label(),
    }
}

pub const ATLAS_HEADER: &str = "p\tq\trow\tcurrent\tcondition\tpotential\tcount\tmeasured\tf2_distinct\tf2_values";

pub fn atlas_tsv(entries: &[AtlasEntry]) -> String {
    if entries.is_empty() {
        return String::new();
    }
    let mut o = String::new();
    let _ = writeln!(o, "{ATLAS_HEADER}");
    for e in entries {
        let potential = e.row.potential.map_or("-".to_string(), |c| c.to_string());
        let measured: Vec<String> = e.measured.iter().map(|c| c.to_string()).collect();
        let f2: Vec<String> = e.f2.iter().map(|&v| num(v)).collect();
        let _ = writeln!(
            o,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            e.sig.p(),
            e.sig.q(),
            e.row.id,
            e.row.current,
            condition(e),
            potential,
            e.count,
            if measured.is_empty() { "-".into() } else { measured.join(",") },
            if e.row.is_empty() { "-".into() } else { e.f2.len().to_string() },
            if f2.is_empty() { "-".into() } else { f2.join(",") },
        );
    }
    o
}

pub fn atlas_json(entries: &[AtlasEntry]) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|e| {
                json!({
                    "signature": sig_json(e.sig),
                    "row": e.row.id,
                    "current": class_json(e.row.current),
                    "condition": condition(e),
                    "potential": e.row.potential.map(class_json),
                    "count": e.count,
                    "measured": e.measured.iter().map(|&c| class_json(c)).collect::<Vec<_>>(),
                    "jvals": e.key.jvals.iter().map(|&v| num_json(v)).collect::<Vec<_>>(),
                    "f2_values": e.f2.iter().map(|&v| num_json(v)).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}
