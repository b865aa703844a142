//! Fiber-graph files and DOT export.

use std::fmt::Write;

use crate::dualgraph::FiberGraph;
use crate::error::{Error, Result};

pub fn to_json(g: &FiberGraph) -> String {
    let mut s = serde_json::to_string_pretty(g).expect("fiber graphs always serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<FiberGraph> {
    serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per component labelled `id [mult, self_int]`, one edge per
/// branch pair at each point labelled by the local intersection multiplicity.
pub fn to_dot(g: &FiberGraph) -> String {
    let mut s = String::from("graph fiber {\n");
    for c in &g.components {
        let label = format!("{} [{}, {}]", c.id, c.mult, c.self_int);
        let _ = writeln!(s, "  {} [label={}];", quote(&c.id), quote(&label));
    }
    for p in &g.points {
        for (i, j, m) in p.pairs() {
            let _ = writeln!(
                s,
                "  {} -- {} [label=\"{}\"];",
                quote(&p.branches[i].component),
                quote(&p.branches[j].component),
                m
            );
        }
    }
    s.push_str("}\n");
    s
}
