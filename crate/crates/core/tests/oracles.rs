use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use bolza_core::intersection::{intersection_number, self_intersection_by_lifts};
use bolza_core::model::Bolza;
use bolza_core::spectrum::{class_from_word, enumerate_classes, CurveClass, Enumeration, SearchOptions};
use bolza_core::systems::Systems;
use bolza_core::walk::Walker;
use bolza_core::word::Word;
use bolza_core::Config;
use proptest::prelude::*;

fn model() -> &'static Bolza<f64> {
    static M: OnceLock<Bolza<f64>> = OnceLock::new();
    M.get_or_init(|| Bolza::new(Config::default()).unwrap())
}

fn upto7() -> &'static Enumeration {
    static E: OnceLock<Enumeration> = OnceLock::new();
    E.get_or_init(|| enumerate_classes(model(), 7.0, SearchOptions::default()).unwrap())
}

/// Primitive classes reached by all Dehn-reduced words up to `n` letters.
fn brute_force(max_length: f64, n: usize) -> BTreeSet<Word> {
    let m = model();
    let walker = Walker::new(m);
    let mut out = BTreeSet::new();
    for w in m.pres.enumerate_words(n) {
        let w = m.pres.cyclic_dehn_reduce(&w);
        if w.is_empty() {
            continue;
        }
        let g = m.eval(&w);
        if g.trace().abs() <= 2.0 + 1e-9 || g.translation_length_unchecked() > max_length + 1e-9 {
            continue;
        }
        let (key, walk) = walker.key_with_walk(&w).unwrap();
        if walk.power == 1 {
            out.insert(key.word);
        }
    }
    out
}

#[test]
fn enumeration_matches_brute_force_words() {
    for (max_length, n) in [(4.9, 6), (6.0, 7)] {
        let e = enumerate_classes(model(), max_length, SearchOptions::default()).unwrap();
        let dfs: BTreeSet<Word> = e.classes.iter().map(|c| c.word.clone()).collect();
        assert_eq!(dfs.len(), e.classes.len(), "duplicate classes at {max_length}");
        let brute = brute_force(max_length, n);
        assert_eq!(brute, dfs, "cutoff {max_length}");
    }
}

#[test]
fn length_spectrum_opens_with_the_systoles() {
    let e = upto7();
    let mut mult: BTreeMap<String, usize> = BTreeMap::new();
    for c in &e.classes {
        *mult.entry(format!("{:.9}", c.length)).or_default() += 1;
    }
    let rows: Vec<(&String, &usize)> = mult.iter().take(2).collect();
    assert_eq!(rows[0], (&"3.057141839".to_string(), &12));
    assert_eq!(rows[1], (&"4.896904895".to_string(), &12));
}

#[test]
fn self_intersections_agree_with_lift_count() {
    let m = model();
    for c in &upto7().classes {
        for frac in [0.3, 0.7] {
            assert_eq!(self_intersection_by_lifts(m, c, frac).unwrap(), c.self_intersections, "{} at {frac}", c.word);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn self_intersection_is_independent_of_the_basepoint(i in 0usize..10_000, frac in 0.05f64..0.95) {
        let e = upto7();
        let c = &e.classes[i % e.classes.len()];
        prop_assert_eq!(self_intersection_by_lifts(model(), c, frac).unwrap(), c.self_intersections);
    }
}

fn by_key(e: &Enumeration) -> BTreeMap<Word, &CurveClass> {
    e.classes.iter().map(|c| (c.word.clone(), c)).collect()
}

#[test]
fn isometries_permute_classes() {
    let m = model();
    let walker = Walker::new(m);
    let table = by_key(upto7());
    let maps: [(&str, fn(&Bolza<f64>, &Word) -> Word); 3] =
        [("R", |m, w| m.rot_word(w)), ("J", |m, w| m.inv_word(w)), ("L", |m, w| m.ord3_word(w))];
    for c in table.values() {
        for (name, f) in maps {
            let key = walker.conjugacy_key(&f(m, &c.word)).unwrap().word;
            let image = table.get(&key).unwrap_or_else(|| panic!("{name}({}) = {key} missing", c.word));
            assert!((image.length - c.length).abs() < 1e-9, "{name} {}", c.word);
            assert_eq!(image.self_intersections, c.self_intersections, "{name} {}", c.word);
        }
    }
}

#[test]
fn intersection_numbers_are_isometry_invariant() {
    let m = model();
    let walker = Walker::new(m);
    let s = Systems::load(m).unwrap();
    let class = |w: Word| class_from_word(m, &walker, walker.conjugacy_key(&w).unwrap().word, true).unwrap();
    let curves: Vec<&CurveClass> = s.sys.classes.iter().chain(&s.second.classes).collect();
    for (i, a) in curves.iter().enumerate() {
        for b in &curves[i + 1..] {
            let n = intersection_number(m, a, b).unwrap().count;
            assert_eq!(n, intersection_number(m, b, a).unwrap().count);
            for f in [Bolza::rot_word, Bolza::ord3_word] {
                let (fa, fb) = (class(f(m, &a.word)), class(f(m, &b.word)));
                assert_eq!(intersection_number(m, &fa, &fb).unwrap().count, n, "{} {}", a.word, b.word);
            }
        }
    }
}
