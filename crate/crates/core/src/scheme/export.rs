use std::fmt::Write;

use crate::words::{FactorOracle, Rope};

use super::model::{Role, Scheme};
use super::paths::{back, front};

/// Letters shown per word in DOT labels.
pub const DOT_WORD_WIDTH: u64 = 12;

fn short(oracle: &FactorOracle, r: &Rope) -> String {
    let shown = r.len().min(DOT_WORD_WIDTH);
    let mut s = oracle.materialize_rope(&r.slice(0, shown), shown).map(|w| oracle.render(&w)).unwrap_or_default();
    if r.len() > shown {
        s.push_str(&format!("...({})", r.len()));
    }
    s
}

/// Graphviz rendering: collecting vertices as boxes, distributing as ellipses,
/// edges labelled `number: front / back`.
pub fn scheme_to_dot(s: &Scheme, oracle: &FactorOracle) -> String {
    let mut out = String::from("digraph scheme {\n");
    for (i, v) in s.vertices().iter().enumerate() {
        let shape = match v.role {
            Role::Collecting => "box",
            Role::Distributing => "ellipse",
        };
        let label = short(oracle, &Rope::from_factor(v.label));
        let _ = writeln!(out, "  v{i} [shape={shape}, label=\"{label}\"];");
    }
    for e in s.edges() {
        let f = front(s, e.number).map(|r| short(oracle, &r)).unwrap_or_else(|_| "?".into());
        let b = back(s, e.number).map(|r| short(oracle, &r)).unwrap_or_else(|_| "?".into());
        let _ = writeln!(out, "  v{} -> v{} [label=\"{}: {f} / {b}\"];", e.tail, e.head, e.number);
    }
    out.push_str("}\n");
    out
}
