use super::*;
use crate::error::Error;
use crate::rauzy_graph::{build_rauzy_graph, path_of_word, Direction};
use crate::words::{FactorOracle, Rope, WordSource};

fn fib() -> (FactorOracle, Scheme) {
    let mut o = FactorOracle::new(WordSource::fibonacci()).unwrap();
    let s = build_scheme_from_rauzy(&mut o, 2).unwrap();
    (o, s)
}

fn text(o: &FactorOracle, r: &Rope) -> String {
    o.render(&o.materialize_rope(r, 1 << 20).unwrap())
}

#[test]
fn fibonacci_order_two() {
    let (o, s) = fib();
    assert_eq!((s.vertex_count(), s.edge_count()), (2, 3));
    let words: Vec<String> = s.edges().iter().map(|e| text(&o, &Rope::from_factor(e.word))).collect();
    assert_eq!(words, ["aba", "baab", "bab"]);
    let fb: Vec<(String, String)> =
        (1..=3).map(|n| (text(&o, &front(&s, n).unwrap()), text(&o, &back(&s, n).unwrap()))).collect();
    assert_eq!(fb, [("aba".into(), "aba".into()), ("aba".into(), "aba".into()), ("ba".into(), "ab".into())]);
    assert_eq!(s.support_edges(), vec![1]);
}

#[test]
fn path_words_on_symmetric_paths() {
    let (o, s) = fib();
    let (f, b) = path_words(&s, &[1]).unwrap();
    assert_eq!((text(&o, &f), text(&o, &b)), ("aba".into(), "aba".into()));
    let (f, b) = path_words(&s, &[1, 3, 1]).unwrap();
    assert_eq!((text(&o, &f), text(&o, &b)), ("ababa".into(), "ababa".into()));
    assert!(matches!(path_words(&s, &[1, 1]), Err(Error::InvalidPath(_))));
}

#[test]
fn natural_extensions_in_scheme() {
    let (o, s) = fib();
    let right = natural_extension(&s, &[3], Direction::Right).unwrap();
    assert_eq!(right, vec![3, 1]);
    assert_eq!(text(&o, &path_word(&s, &right)), "baba");
    assert_eq!(natural_extension(&s, &[3], Direction::Left).unwrap(), vec![1, 3]);
    assert_eq!(natural_extension(&s, &[1], Direction::Right).unwrap(), vec![1]);
}

#[test]
fn construction_errors() {
    let mut o = FactorOracle::new(WordSource::fibonacci()).unwrap();
    assert_eq!(build_scheme_from_rauzy(&mut o, 1), Err(Error::BispecialAtOrder(1)));
    assert_eq!(find_clean_order(&mut o, 1), Ok(2));
    let mut p = FactorOracle::new(WordSource::periodic("", "ab").unwrap()).unwrap();
    assert_eq!(build_scheme_from_rauzy(&mut p, 1), Err(Error::GraphIsCycle));
    assert!(find_clean_order(&mut p, 1).unwrap_err().is_horizon());
}

#[test]
fn fresh_scheme_validates() {
    let (mut o, s) = fib();
    let r = validate_scheme(&s, &mut o, ValidationBounds::default());
    assert!(r.fully_verified(), "{r:?}");
}

#[test]
fn perturbed_front_fails_property_two() {
    let (mut o, s) = fib();
    let bab = s.edge(3).unwrap().word;
    let broken = s.with_edge_word(2, bab).unwrap();
    let r = validate_scheme(&broken, &mut o, ValidationBounds::default());
    match r.verdict(2) {
        Verdict::Fail(msg) => assert!(msg.starts_with("vertex "), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn admissibility() {
    let (mut o, s) = fib();
    assert!(admissible(&s, &[1], &mut o).unwrap());
    assert!(admissible(&s, &[1, 3, 1], &mut o).unwrap());
    // ababababa contains (ab)^4, which the Fibonacci word avoids
    let long = [1, 3, 1, 3, 1, 3, 1];
    assert_eq!(text(&o, &path_words(&s, &long).unwrap().0), "ababababa");
    assert!(!admissible(&s, &long, &mut o).unwrap());
    assert!(matches!(admissible(&s, &[3], &mut o), Err(Error::InvalidPath(_))));
}

#[test]
fn fronts_agree_with_rauzy_graph() {
    let (mut o, s) = fib();
    let g = build_rauzy_graph(&mut o, 2).unwrap();
    for p in symmetric_paths(&s, 6).into_iter().chain([vec![3], vec![2, 1, 3]]) {
        let word = o.materialize_rope(&path_word(&s, &p), 1 << 20).unwrap();
        let Ok(gp) = path_of_word(&g, &word) else { continue };
        let (f, _) = path_words(&s, &p).unwrap();
        assert_eq!(o.materialize_rope(&f, 1 << 20).unwrap(), g.front_word(&gp).unwrap(), "path {p:?}");
    }
}

#[test]
fn json_round_trip() {
    let (_, s) = fib();
    let json = serde_json::to_string(&s).unwrap();
    let back: Scheme = serde_json::from_str(&json).unwrap();
    assert_eq!(back, s);
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
}

#[test]
fn dot_shapes() {
    let (o, s) = fib();
    let dot = scheme_to_dot(&s, &o);
    assert!(dot.contains("shape=box") && dot.contains("shape=ellipse"));
    assert!(dot.contains("1: aba / aba"));
}
