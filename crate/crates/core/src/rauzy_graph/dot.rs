use std::fmt::Write;

use super::RauzyGraph;
use crate::words::Alphabet;

/// Graphviz rendering: vertices labelled by factors, edges by the extension letter.
pub fn to_dot(g: &RauzyGraph, alphabet: &Alphabet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph G{} {{", g.k);
    for (i, v) in g.vertices.iter().enumerate() {
        let _ = writeln!(out, "  v{i} [label=\"{}\"];", alphabet.render(v));
    }
    for e in &g.edges {
        let letter = alphabet.render(&e.word[g.k..]);
        let _ = writeln!(out, "  v{} -> v{} [label=\"{letter}\"];", e.tail, e.head);
    }
    out.push_str("}\n");
    out
}
