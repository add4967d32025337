use super::*;
use crate::error::Error;
use crate::scheme::{
    build_scheme_from_rauzy, validate_scheme, Role, Scheme, SchemeEdge, SchemeVertex, ValidationBounds,
};
use crate::words::{Factor, FactorOracle, Morphism, Rope, WordSource};

fn fib() -> (FactorOracle, Scheme) {
    let mut o = FactorOracle::new(WordSource::fibonacci()).unwrap();
    let s = build_scheme_from_rauzy(&mut o, 2).unwrap();
    (o, s)
}

#[test]
fn fibonacci_support_and_scale() {
    let (_, s) = fib();
    assert_eq!(support_edges(&s).unwrap(), vec![1]);
    assert_eq!(scale(&s).unwrap(), 3);
}

#[test]
fn first_fibonacci_step() {
    let (mut o, s) = fib();
    let ev = evolve_keyed(&s, 1, &mut o).unwrap();
    // edges: 1 = aba, 2 = baab, 3 = bab; the composite bab·aba·bab = babab is not a factor
    assert_eq!(ev.rejected, vec![(3, 3)]);
    assert_eq!(ev.admissible, vec![(2, 2), (2, 3), (3, 2)]);
    assert_eq!((ev.scheme.vertex_count(), ev.scheme.edge_count()), (2, 3));
    assert_eq!(ev.keys, vec![EdgeKey::Surviving(2), EdgeKey::Surviving(3), EdgeKey::New(2, 2)]);
    let words: Vec<String> = ev
        .scheme
        .edges()
        .iter()
        .map(|e| o.render(&o.materialize_rope(&Rope::from_factor(e.word), 100).unwrap()))
        .collect();
    assert_eq!(words[0], "abaaba");
    assert!(scale(&ev.scheme).unwrap() > 3);
    assert!(validate_scheme(&ev.scheme, &mut o, ValidationBounds::default()).passed());
}

#[test]
fn evolve_requires_support_edge() {
    let (mut o, s) = fib();
    assert_eq!(evolve(&s, 2, &mut o), Err(Error::NotSupportEdge(2)));
}

#[test]
fn all_composites_admissible_count() {
    let mut o = FactorOracle::new(WordSource::thue_morse()).unwrap();
    let k = crate::scheme::find_clean_order(&mut o, 1).unwrap();
    let s = build_scheme_from_rauzy(&mut o, k).unwrap();
    for v in s.support_edges() {
        let ev = evolve_keyed(&s, v, &mut o).unwrap();
        let e = s.edge(v).unwrap();
        let total = s.in_edges(e.tail).len() * s.out_edges(e.head).len();
        assert_eq!(ev.admissible.len() + ev.rejected.len(), total);
    }
}

#[test]
fn single_loop_is_degenerate() {
    // two vertices joined by the support edge and two parallel return edges
    // of the Fibonacci scheme, with a return edge sharing the support word
    let (mut o, s) = fib();
    let v = *s.edge(1).unwrap();
    let vertices: Vec<SchemeVertex> = s.vertices().to_vec();
    let edges = vec![
        SchemeEdge { number: 1, ..v },
        SchemeEdge { number: 2, tail: v.head, head: v.tail, word: s.edge(3).unwrap().word },
        SchemeEdge { number: 3, tail: v.head, head: v.tail, word: s.edge(3).unwrap().word },
    ];
    let broken = Scheme::from_parts(2, vertices, edges).unwrap();
    assert!(matches!(evolve(&broken, 1, &mut o), Err(Error::DegenerateResult(_) | Error::TraceMismatch(_))));
    let _ = (Role::Collecting, Factor::new(0, 0));
}

#[test]
fn fibonacci_test_words() {
    let phi = Morphism::fibonacci();
    let ws = test_words(&phi, None, 0, 1).unwrap();
    let alpha = phi.domain().clone();
    let r: Vec<String> = ws.iter().map(|w| alpha.render(w)).collect();
    assert_eq!(r, ["ab", "a", "abab", "aba", "aab"]);
    let ws0 = test_words(&phi, None, 0, 0).unwrap();
    let r0: Vec<String> = ws0.iter().map(|w| alpha.render(w)).collect();
    assert_eq!(r0, ["a", "b", "aa", "ab", "ba"]);
}

#[test]
fn rigging_of_fibonacci_scheme() {
    let (o, s) = fib();
    let aba = o.parse("aba").unwrap();
    let r = rigging(&s, &[aba, o.parse("ab").unwrap()], 0, &o, RiggingBounds::default()).unwrap();
    assert_eq!(r.sets[0], vec![RiggedPath { edges: vec![1], maximal: true }]);
    assert!(r.sets[1].is_empty());
    assert_eq!(r.size, 1);
}

#[test]
fn protocol_is_deterministic() {
    let run = || {
        let mut o = FactorOracle::new(WordSource::fibonacci()).unwrap();
        run_protocol(&mut o, 2, 12)
    };
    let (a, b) = (run(), run());
    assert!(a.error.is_none(), "{:?}", a.error);
    assert_eq!(a.entries.len(), 12);
    assert_eq!(a, b);
    assert_eq!(serde_json::to_string(&a.steps()).unwrap(), serde_json::to_string(&b.steps()).unwrap());
}

#[test]
fn periodic_source_fails_at_construction() {
    let mut o = FactorOracle::new(WordSource::periodic("", "ab").unwrap()).unwrap();
    let p = run_protocol(&mut o, 1, 5);
    assert!(p.entries.is_empty());
    assert!(p.error.is_some());
}
