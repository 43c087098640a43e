//! Deterministic DOT renderings: precedence diagrams of complexes, grids of
//! double categories, and decomposition colimit diagrams.

use graycat::adc::Adc;
use graycat::doublecat::FiniteDoubleCat;
use graycat::graymaps::DecompositionWitness;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// Hasse-style precedence diagram: one node per basis element, one edge per
/// precedence pair, ranked by degree.
pub fn adc_dot(adc: &Adc) -> String {
    let mut out = String::from("digraph precedence {\n  rankdir=BT;\n");
    for (label, degree) in adc.basis() {
        out.push_str(&format!(
            "  {} [label={}];\n",
            quote(&label.to_string()),
            quote(&format!("{label} : {degree}"))
        ));
    }
    for (a, b) in adc.precedence_edges() {
        out.push_str(&format!("  {} -> {};\n", quote(&a.to_string()), quote(&b.to_string())));
    }
    out.push_str("}\n");
    out
}

/// Objects with horizontal (dashed) and vertical (solid) cells, plus a
/// legend of squares with their boundaries.
pub fn double_dot(d: &FiniteDoubleCat) -> String {
    let mut out = String::from("digraph double {\n");
    for name in &d.objects {
        out.push_str(&format!("  {};\n", quote(name)));
    }
    for (i, e) in d.hcells.iter().enumerate() {
        if d.hid.contains(&i) {
            continue;
        }
        out.push_str(&format!(
            "  {} -> {} [style=dashed, label={}];\n",
            quote(&d.objects[e.src]),
            quote(&d.objects[e.tgt]),
            quote(&e.name)
        ));
    }
    for (i, e) in d.vcells.iter().enumerate() {
        if d.vid.contains(&i) {
            continue;
        }
        out.push_str(&format!(
            "  {} -> {} [style=solid, label={}];\n",
            quote(&d.objects[e.src]),
            quote(&d.objects[e.tgt]),
            quote(&e.name)
        ));
    }
    let mut legend = String::new();
    for (i, s) in d.squares.iter().enumerate() {
        if d.sq_vid.contains(&i) || d.sq_hid.contains(&i) {
            continue;
        }
        legend.push_str(&format!(
            "{}: {} / {} | {} \\\\ {}\\l",
            s.name, d.hcells[s.top].name, d.hcells[s.bottom].name, d.vcells[s.left].name,
            d.vcells[s.right].name
        ));
    }
    if !legend.is_empty() {
        out.push_str(&format!(
            "  squares [shape=box, label={}];\n",
            quote(&format!("squares\\l{legend}"))
        ));
    }
    out.push_str("}\n");
    out
}

/// The computed colimit with its legs and the comparison into the target.
pub fn witness_dot(w: &DecompositionWitness) -> String {
    let mut out = String::from("digraph decomposition {\n  rankdir=LR;\n");
    out.push_str(&format!(
        "  colimit [label={}];\n",
        quote(&format!("colimit ({} basis elements)", w.colimit.len()))
    ));
    out.push_str(&format!(
        "  target [label={}];\n",
        quote(&format!("target ({} basis elements)", w.comparison.target().len()))
    ));
    for (i, leg) in w.legs.iter().enumerate() {
        out.push_str(&format!(
            "  leg{i} [label={}];\n  leg{i} -> colimit;\n",
            quote(&format!("leg {i} ({} basis elements)", leg.source().len()))
        ));
    }
    out.push_str("  colimit -> target [label=\"comparison\"];\n");
    out.push_str("  target -> colimit [label=\"inverse\"];\n");
    out.push_str("}\n");
    out
}
