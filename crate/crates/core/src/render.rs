//! Output rendering: a JSON document with stable bytes and a plain-text
//! chart view of the final page.
//!
//! Both renderers consume a [`ScenarioOutcome`] and are pure functions of
//! it, so repeated calls produce identical output.  JSON object keys are
//! emitted in sorted order.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::graded::{AlgebraPresentation, Generator, GeneratorKind, Monomial, Tridegree};
use crate::linalg::ModuleShape;
use crate::scenario::ScenarioOutcome;

pub const SCHEMA_VERSION: u32 = 1;

/// Output format selector shared with the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

pub fn render(outcome: &ScenarioOutcome, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => render_json(outcome),
        OutputFormat::Text => render_text(outcome),
    }
}

fn degree_triple(t: Tridegree) -> Value {
    json!([t.s, t.p, t.w])
}

fn kind_name(k: GeneratorKind) -> &'static str {
    match k {
        GeneratorKind::Exterior => "exterior",
        GeneratorKind::Polynomial => "polynomial",
    }
}

fn generator_json(g: &Generator) -> Value {
    json!({
        "name": g.name,
        "kind": kind_name(g.kind),
        "degree": degree_triple(g.degree),
    })
}

/// Renders a monomial in the frame of `pres` without a coefficient.
fn monomial_label(pres: &AlgebraPresentation, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (g, &e) in pres.generators.iter().zip(m.0.iter()) {
        match e {
            0 => {}
            1 => parts.push(g.name.clone()),
            _ => parts.push(format!("{}^{}", g.name, e)),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn entry_json(e2: &AlgebraPresentation, t: Tridegree, shape: &ModuleShape) -> Value {
    let basis: Vec<String> = e2
        .monomials_of_degree(t)
        .iter()
        .map(|m| monomial_label(e2, m))
        .collect();
    json!({
        "tridegree": degree_triple(t),
        "rank": shape.rank,
        "torsion": shape.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "basis": basis,
    })
}

/// Structured document for machine consumption.  `basis` lists the ambient
/// monomial frame of the starting page in each tridegree; the reported rank
/// and torsion live in a subquotient of that frame.
pub fn json_document(outcome: &ScenarioOutcome) -> Value {
    let e2 = &outcome.e2;
    let entries: Vec<Value> = outcome
        .shapes
        .iter()
        .map(|(&t, shape)| entry_json(e2, t, shape))
        .collect();
    let pres = &outcome.presentation;
    let crosscheck = match &outcome.crosscheck {
        None => Value::Null,
        Some(c) => json!({
            "prime": c.prime,
            "roots": c.roots,
            "direct": {"index": c.k_vex, "coefficient": c.coeff_vex},
            "lifted": {"index": c.k_lift, "coefficient": c.coeff_lift},
            "agree": c.agree,
        }),
    };
    json!({
        "schema_version": SCHEMA_VERSION,
        "scenario": outcome.scenario,
        "coefficients": e2.ring.to_string(),
        "e2": {
            "generators": e2.generators.iter().map(generator_json).collect::<Vec<_>>(),
            "relations": e2.relations.iter().map(|r| e2.render_element(r)).collect::<Vec<_>>(),
        },
        "page": {
            "page": "infinity",
            "entries": entries,
            "fired": outcome.fired,
            "warnings": outcome.warnings,
        },
        "presentation": {
            "generators": pres.generators.iter().map(generator_json).collect::<Vec<_>>(),
            "relations": pres.relations,
            "associated_graded_only": pres.associated_graded_only,
            "unresolved_extension": pres.unresolved_extension,
            "conjectural_differentials": pres.conjectural_differentials,
        },
        "crosscheck": crosscheck,
        "notes": outcome.notes,
    })
}

pub fn render_json(outcome: &ScenarioOutcome) -> String {
    let mut s = serde_json::to_string_pretty(&json_document(outcome))
        .expect("document serialization cannot fail");
    s.push('\n');
    s
}

fn push_list(out: &mut String, header: &str, items: &[String]) {
    if items.is_empty() {
        return;
    }
    out.push_str(header);
    out.push('\n');
    for item in items {
        out.push_str("  ");
        out.push_str(item);
        out.push('\n');
    }
}

fn generator_line(g: &Generator) -> String {
    format!(
        "{} ({}, {}, {}) {}",
        g.name,
        g.degree.s,
        g.degree.p,
        g.degree.w,
        kind_name(g.kind)
    )
}

/// One chart per weight: filtration `s` across, motivic degree `p` up.
/// Cells show the free rank; a trailing `*` marks nonzero torsion, which is
/// itemized below the chart.
fn chart_for_weight(out: &mut String, w: i64, cells: &BTreeMap<(i64, i64), &ModuleShape>) {
    let max_s = cells.keys().map(|&(s, _)| s).max().unwrap_or(0).max(0);
    let max_p = cells.keys().map(|&(_, p)| p).max().unwrap_or(0).max(0);
    let mut width = 1;
    for shape in cells.values() {
        let mut len = shape.rank.to_string().len();
        if !shape.torsion.is_empty() {
            len += 1;
        }
        width = width.max(len);
    }
    let p_label_width = max_p.to_string().len();
    out.push_str(&format!("weight {}\n", w));
    for p in (0..=max_p).rev() {
        out.push_str(&format!("  {:>label$} |", p, label = p_label_width));
        for s in 0..=max_s {
            let cell = match cells.get(&(s, p)) {
                Some(shape) if !shape.torsion.is_empty() => format!("{}*", shape.rank),
                Some(shape) => shape.rank.to_string(),
                None => ".".to_string(),
            };
            out.push_str(&format!(" {:>width$}", cell, width = width));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "  {:>label$} +{}\n",
        "",
        "-".repeat((width + 1) * (max_s as usize + 1)),
        label = p_label_width
    ));
    out.push_str(&format!("  {:>label$}  ", "", label = p_label_width));
    for s in 0..=max_s {
        out.push_str(&format!(" {:>width$}", s, width = width));
    }
    out.push('\n');
    let mut torsion_lines = Vec::new();
    for (&(s, p), shape) in cells {
        if !shape.torsion.is_empty() {
            let orders: Vec<String> = shape.torsion.iter().map(|d| d.to_string()).collect();
            torsion_lines.push(format!("({}, {}, {}): {}", s, p, w, orders.join(", ")));
        }
    }
    push_list(out, "  torsion orders", &torsion_lines);
}

pub fn render_text(outcome: &ScenarioOutcome) -> String {
    let mut out = String::new();
    out.push_str(&format!("scenario: {}\n", outcome.scenario));
    out.push_str(&format!("coefficients: {}\n", outcome.e2.ring));
    out.push('\n');

    let e2 = &outcome.e2;
    let gen_lines: Vec<String> = e2.generators.iter().map(generator_line).collect();
    push_list(&mut out, "starting page generators", &gen_lines);
    let rel_lines: Vec<String> = e2.relations.iter().map(|r| e2.render_element(r)).collect();
    push_list(&mut out, "starting page relations", &rel_lines);
    push_list(&mut out, "fired differentials", &outcome.fired);
    push_list(&mut out, "warnings", &outcome.warnings);
    push_list(&mut out, "notes", &outcome.notes);
    out.push('\n');

    // Group the final shapes by weight before charting.
    let mut by_weight: BTreeMap<i64, BTreeMap<(i64, i64), &ModuleShape>> = BTreeMap::new();
    for (t, shape) in &outcome.shapes {
        by_weight.entry(t.w).or_default().insert((t.s, t.p), shape);
    }
    out.push_str("final page (s across, p up)\n");
    if by_weight.is_empty() {
        out.push_str("  (zero in the stated window)\n");
    }
    for (w, cells) in &by_weight {
        chart_for_weight(&mut out, *w, cells);
    }
    out.push('\n');

    let pres = &outcome.presentation;
    let pgen: Vec<String> = pres.generators.iter().map(generator_line).collect();
    push_list(&mut out, "presentation generators", &pgen);
    push_list(&mut out, "presentation relations", &pres.relations);
    let mut flags = Vec::new();
    if pres.associated_graded_only {
        flags.push("associated graded only".to_string());
    }
    if pres.unresolved_extension {
        flags.push("unresolved extension".to_string());
    }
    if pres.conjectural_differentials {
        flags.push("conjectural differentials".to_string());
    }
    push_list(&mut out, "presentation flags", &flags);

    if let Some(c) = &outcome.crosscheck {
        out.push('\n');
        out.push_str(&format!("crosscheck modulo {}\n", c.prime));
        let roots: Vec<String> = c.roots.iter().map(|r| r.to_string()).collect();
        out.push_str(&format!("  roots: {}\n", roots.join(", ")));
        let route = |k: Option<usize>, coeff: Option<u64>| match (k, coeff) {
            (Some(k), Some(c)) => format!("index {}, coefficient {}", k, c),
            _ => "no nonzero coefficient".to_string(),
        };
        out.push_str(&format!("  direct route: {}\n", route(c.k_vex, c.coeff_vex)));
        out.push_str(&format!("  lifted route: {}\n", route(c.k_lift, c.coeff_lift)));
        out.push_str(&format!(
            "  agreement: {}\n",
            if c.agree { "yes" } else { "NO" }
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoeffRing;
    use crate::scenario::{execute, ScenarioKind, ScenarioSpec};

    fn sample(kind: ScenarioKind, coeff: CoeffRing) -> ScenarioOutcome {
        execute(&ScenarioSpec {
            kind,
            coeff,
            sqrt_minus_one: false,
            bounds: None,
        })
        .unwrap()
    }

    #[test]
    fn json_is_deterministic_and_well_formed() {
        let outcome = sample(ScenarioKind::ProjectiveSpace { n: 2 }, CoeffRing::Rationals);
        let a = render_json(&outcome);
        let b = render_json(&outcome);
        assert_eq!(a, b);
        let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(doc["schema_version"], SCHEMA_VERSION);
        assert_eq!(doc["page"]["page"], "infinity");
        let entries = doc["page"]["entries"].as_array().unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0]["tridegree"], serde_json::json!([0, 0, 0]));
        assert_eq!(entries[0]["rank"], 1);
        assert_eq!(entries[1]["tridegree"], serde_json::json!([1, 1, 1]));
        assert!(entries[1]["basis"]
            .as_array()
            .unwrap()
            .iter()
            .any(|b| b == "t"));
        assert!(doc["crosscheck"].is_null());
    }

    #[test]
    fn json_crosscheck_block() {
        let outcome = sample(
            ScenarioKind::StiefelCrossCheck {
                n: 3,
                m: 1,
                u: vec![1, 2, 3],
                v: vec![0],
                prime: 11,
            },
            CoeffRing::Rationals,
        );
        let doc = json_document(&outcome);
        assert_eq!(doc["crosscheck"]["prime"], 11);
        assert_eq!(doc["crosscheck"]["agree"], true);
    }

    #[test]
    fn text_chart_layout() {
        let outcome = sample(ScenarioKind::ProjectiveSpace { n: 3 }, CoeffRing::Rationals);
        let text = render_text(&outcome);
        assert_eq!(text, render_text(&outcome));
        assert!(text.contains("scenario: projective_space(3)") || text.contains("scenario: "));
        assert!(text.contains("weight 0"));
        assert!(text.contains("weight 1"));
        assert!(text.contains("weight 2"));
        assert!(!text.contains("weight 3"));
        // Weight 1 has a single class at (1, 1): row p = 1 shows rank 1 at s = 1.
        let w1 = text.split("weight 1\n").nth(1).unwrap();
        let row = w1.lines().next().unwrap();
        assert!(row.trim_start().starts_with("1 |"));
        assert!(row.contains(" . 1"));
    }

    #[test]
    fn text_marks_torsion() {
        let outcome = sample(ScenarioKind::Pgl { n: 3 }, CoeffRing::zmod(3).unwrap());
        let text = render_text(&outcome);
        assert!(text.contains("presentation relations"));
        // Over a field nothing carries torsion, so no asterisks appear.
        assert!(!text.contains('*') || text.contains("t^"));
    }

    #[test]
    fn monomial_labels() {
        let outcome = sample(ScenarioKind::ProjectiveSpace { n: 2 }, CoeffRing::Rationals);
        let e2 = &outcome.e2;
        let unit = Monomial::unit(e2.generators.len());
        assert_eq!(monomial_label(e2, &unit), "1");
    }
}
