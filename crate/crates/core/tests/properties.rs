use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rauzy_core::analysis::complexity_profile;
use rauzy_core::evolution::{evolution_method, run_protocol, LightScheme};
use rauzy_core::rauzy_graph::{build_rauzy_graph, path_of_word, word_of_path, RauzyGraph};
use rauzy_core::scheme::{build_scheme_from_rauzy, Scheme};
use rauzy_core::words::{
    apply_morphism, factor_query, DigitStream, FactorAnswer, FactorOracle, FactorQuery, Letter, Morphism, WordSource,
};

fn sources() -> Vec<(&'static str, WordSource)> {
    vec![
        ("fibonacci", WordSource::fibonacci()),
        ("tribonacci", WordSource::tribonacci()),
        ("thue-morse", WordSource::thue_morse()),
        ("sturmian-thue-morse", WordSource::sturmian(DigitStream::ThueMorse)),
        ("periodic", WordSource::periodic("ab", "aab").unwrap()),
    ]
}

fn morphisms() -> Vec<Morphism> {
    vec![
        Morphism::from_rules(&[('a', "ab"), ('b', "a")]).unwrap(),
        Morphism::from_rules(&[('a', "ab"), ('b', "ac"), ('c', "a")]).unwrap(),
        Morphism::from_rules(&[('a', "ab"), ('b', "ba")]).unwrap(),
        Morphism::from_rules(&[('a', "aab"), ('b', "")]).unwrap(),
    ]
}

fn word_over(sigma: u8, max: usize) -> impl Strategy<Value = Vec<Letter>> {
    proptest::collection::vec(0..sigma, 0..max)
}

proptest! {
    #[test]
    fn morphisms_are_homomorphisms(idx in 0usize..4, u in word_over(2, 24), v in word_over(2, 24)) {
        let phi = &morphisms()[idx];
        let sigma = phi.domain().len() as u8;
        let u: Vec<Letter> = u.into_iter().map(|l| l % sigma).collect();
        let v: Vec<Letter> = v.into_iter().map(|l| l % sigma).collect();
        let mut uv = u.clone();
        uv.extend_from_slice(&v);
        let mut expected = apply_morphism(phi, &u).unwrap();
        expected.extend(apply_morphism(phi, &v).unwrap());
        prop_assert_eq!(apply_morphism(phi, &uv).unwrap(), expected);
    }

    #[test]
    fn fixed_points_are_fixed(idx in 0usize..3, n in 1usize..2000) {
        let src = [WordSource::fibonacci(), WordSource::tribonacci(), WordSource::thue_morse()][idx].clone();
        let (phi, _, _) = src.morphic_parts().unwrap();
        let phi = phi.clone();
        let mut o = FactorOracle::new(src).unwrap();
        let w = o.prefix(n).unwrap();
        let image = apply_morphism(&phi, &w).unwrap();
        prop_assert_eq!(&image[..n], &w[..]);
    }

    #[test]
    fn letter_and_hash_access_agree_with_the_prefix(idx in 0usize..5, pos in 0u64..5000, len in 0u64..300) {
        let (_, src) = sources().swap_remove(idx);
        let mut o = FactorOracle::new(src).unwrap();
        let w = o.prefix(6000).unwrap();
        let f = rauzy_core::words::Factor::new(pos, len);
        let slice = &w[pos as usize..(pos + len) as usize];
        prop_assert_eq!(o.materialize(f).unwrap(), slice.to_vec());
        prop_assert_eq!(o.hash(f).unwrap(), rauzy_core::words::hash::Hashed::of_letters(slice));
        prop_assert_eq!(o.letter_at(pos).unwrap(), w[pos as usize]);
    }
}

#[test]
fn sturmian_with_unit_digits_is_the_fibonacci_word() {
    let mut fib = FactorOracle::new(WordSource::fibonacci()).unwrap();
    let mut st = FactorOracle::new(WordSource::sturmian(DigitStream::constant(1))).unwrap();
    assert_eq!(fib.prefix(10_000).unwrap(), st.prefix(10_000).unwrap());
}

#[test]
fn membership_agrees_with_a_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (name, src) in sources() {
        let mut o = FactorOracle::new(src).unwrap();
        let sigma = o.alphabet().len() as u8;
        let buf = o.prefix(1 << 16).unwrap();
        for i in 0..200 {
            let len = rng.gen_range(1..=10);
            let u: Vec<Letter> = if i % 2 == 0 {
                let p = rng.gen_range(0..buf.len() - len);
                buf[p..p + len].to_vec()
            } else {
                (0..len).map(|_| rng.gen_range(0..sigma)).collect()
            };
            let scan = buf.windows(len).any(|w| w == u.as_slice());
            let answer = factor_query(&mut o, &u, FactorQuery::Membership).unwrap();
            assert_eq!(answer, FactorAnswer::Member(scan), "{name}: {}", o.render(&u));
        }
    }
}

#[test]
fn paths_and_words_round_trip() {
    for (name, src) in sources() {
        let mut o = FactorOracle::new(src).unwrap();
        for k in 1..=5 {
            let g = build_rauzy_graph(&mut o, k).unwrap();
            for len in k..=k + 6 {
                for w in o.factor_set(len).unwrap().iter() {
                    let p = path_of_word(&g, w).unwrap();
                    assert_eq!(p.edges.len(), len - k, "{name}");
                    assert_eq!(&word_of_path(&g, &p).unwrap(), w, "{name} k={k}");
                }
            }
        }
    }
}

#[test]
fn complexity_is_monotone_for_infinite_words() {
    for (name, src) in sources() {
        let mut o = FactorOracle::new(src).unwrap();
        let p = complexity_profile(&mut o, 60).unwrap();
        assert!(p.differences().iter().all(|&d| d >= 0), "{name}");
    }
}

#[test]
fn protocols_are_deterministic() {
    for src in [WordSource::fibonacci(), WordSource::thue_morse(), WordSource::tribonacci()] {
        let a = run_protocol(&mut FactorOracle::new(src.clone()).unwrap(), 1, 20);
        let b = run_protocol(&mut FactorOracle::new(src).unwrap(), 1, 20);
        assert_eq!(a.entries, b.entries);
        assert_eq!(a.stats, b.stats);
        for s in &a.schemes {
            let l = LightScheme::of(s);
            assert_eq!(evolution_method(&l).unwrap(), evolution_method(&l.clone()).unwrap());
        }
    }
}

#[test]
fn serialized_structures_reach_a_fixpoint() {
    let mut o = FactorOracle::new(WordSource::thue_morse()).unwrap();
    let g = build_rauzy_graph(&mut o, 5).unwrap();
    let text = serde_json::to_string(&g).unwrap();
    let back: RauzyGraph = serde_json::from_str(&text).unwrap();
    assert_eq!(back, g);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);

    let s = build_scheme_from_rauzy(&mut o, 5).unwrap();
    let text = serde_json::to_string(&s).unwrap();
    let back: Scheme = serde_json::from_str(&text).unwrap();
    assert_eq!(back, s);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);

    let p = run_protocol(&mut o, 5, 8);
    let text = serde_json::to_string(&p.entries).unwrap();
    let back: Vec<rauzy_core::evolution::ProtocolEntry> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, p.entries);
}
