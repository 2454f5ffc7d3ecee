//! The distinguished curve systems: the two halves of the systolic set, the systolic set
//! itself and the second systoles. Representative words are derived once from the
//! enumeration and frozen in `data/curve_systems.txt`; loading re-certifies them.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::crossings::{chords_of_word, crossings, Chord};
use crate::error::{Error, Result};
use crate::model::Bolza;
use crate::par::Exec;
use crate::quad::QuadInt;
use crate::real::Real;
use crate::spectrum::{class_from_word, enumerate_classes, CurveClass, SearchOptions};
use crate::walk::Walker;
use crate::word::Word;

pub const DATA_VERSION: u32 = 1;
pub const FROZEN: &str = include_str!("../data/curve_systems.txt");

/// `2 arccosh(1 + sqrt 2)`.
pub fn systole_length() -> f64 {
    2.0 * (1.0 + 2f64.sqrt()).acosh()
}

/// `2 arccosh(3 + 2 sqrt 2)`.
pub fn second_systole_length() -> f64 {
    2.0 * (3.0 + 2.0 * 2f64.sqrt()).acosh()
}

/// A named collection of pairwise distinct unoriented classes.
#[derive(Debug, Clone, Serialize)]
pub struct CurveSystem {
    pub name: String,
    pub names: Vec<String>,
    pub classes: Vec<CurveClass>,
    pub expected: usize,
}

impl CurveSystem {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn words(&self) -> Vec<Word> {
        self.classes.iter().map(|c| c.word.clone()).collect()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.classes.iter().any(|c| &c.word == w)
    }

    /// Members picked by name, e.g. `["a", "b"]`.
    pub fn subset(&self, name: &str, members: &[&str]) -> Result<CurveSystem> {
        let mut out = CurveSystem { name: name.into(), names: Vec::new(), classes: Vec::new(), expected: members.len() };
        for m in members {
            let i = self
                .names
                .iter()
                .position(|n| n == m)
                .ok_or_else(|| Error::Domain(format!("{m} is not a member of {}", self.name)))?;
            out.names.push(self.names[i].clone());
            out.classes.push(self.classes[i].clone());
        }
        Ok(out)
    }

    pub fn union(&self, name: &str, other: &CurveSystem) -> CurveSystem {
        let mut out = self.clone();
        out.name = name.into();
        for (n, c) in other.names.iter().zip(&other.classes) {
            if !out.contains(&c.word) {
                out.names.push(n.clone());
                out.classes.push(c.clone());
            }
        }
        out.expected = out.classes.len();
        out
    }

    /// Builds a system from words, computing each class record.
    pub fn from_words<R: Real>(model: &Bolza<R>, name: &str, words: &[Word]) -> Result<CurveSystem> {
        let walker = Walker::new(model);
        let mut out = CurveSystem { name: name.into(), names: Vec::new(), classes: Vec::new(), expected: words.len() };
        for (i, w) in words.iter().enumerate() {
            let key = walker.conjugacy_key(w)?;
            out.names.push(format!("{name}{}", i + 1));
            out.classes.push(class_from_word(model, &walker, key.word, true)?);
        }
        Ok(out)
    }
}

/// One line of the frozen data file.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemRecord {
    pub system: String,
    pub name: String,
    pub word: Word,
    pub trace: QuadInt,
    pub length: f64,
}

pub fn parse_records(text: &str) -> Result<Vec<SystemRecord>> {
    let bad = |n: usize, why: &str| Error::Certificate(format!("curve system data line {n}: {why}"));
    let mut out = Vec::new();
    let mut version = None;
    for (n, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f[0] == "version" {
            version = f.get(1).and_then(|v| v.parse::<u32>().ok());
            continue;
        }
        if f.len() != 6 {
            return Err(bad(n, "expected: system name word p q length"));
        }
        out.push(SystemRecord {
            system: f[0].into(),
            name: f[1].into(),
            word: f[2].parse()?,
            trace: QuadInt::new(f[3].parse().map_err(|_| bad(n, "p"))?, f[4].parse().map_err(|_| bad(n, "q"))?),
            length: f[5].parse().map_err(|_| bad(n, "length"))?,
        });
    }
    if version != Some(DATA_VERSION) {
        return Err(Error::Certificate(format!("curve system data version {version:?}, expected {DATA_VERSION}")));
    }
    Ok(out)
}

pub fn format_records(records: &[SystemRecord]) -> String {
    let mut s = String::from("# Representative words of the distinguished curve systems.\n");
    s.push_str("# Regenerate with `bolza verify --rebuild-certificates`.\n");
    s.push_str("# system name word trace_p trace_q length\n");
    let _ = writeln!(s, "version {DATA_VERSION}");
    for r in records {
        let _ = writeln!(s, "{} {} {} {} {} {:.12}", r.system, r.name, r.word, r.trace.p, r.trace.q, r.length);
    }
    s
}

fn right_angled(x: &crate::crossings::Crossing) -> bool {
    let d = (x.dirs.0 - x.dirs.1).abs();
    (d.min(std::f64::consts::PI - d) - std::f64::consts::FRAC_PI_2).abs() < 1e-6
}

/// Quadruples of systoles meeting only at right angles, each member crossing exactly two
/// others: the candidates for the system cut out by the right-angled octagon tessellation.
pub fn orthogonal_quadruples<R: Real>(model: &Bolza<R>, sys: &[CurveClass]) -> Result<Vec<[usize; 4]>> {
    let walker = Walker::new(model);
    let chords: Vec<Vec<Chord<R>>> = sys.iter().map(|c| chords_of_word(&walker, &c.word)).collect::<Result<_>>()?;
    let n = sys.len();
    // 0: disjoint, 1: orthogonal single crossing, 2: anything else.
    let mut rel = vec![vec![0u8; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let x = crossings(model, &chords[i], Some(&chords[j]));
            let r = match x.as_slice() {
                [] => 0,
                [x] if right_angled(x) => 1,
                _ => 2,
            };
            rel[i][j] = r;
            rel[j][i] = r;
        }
    }
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let q = [a, b, c, d];
                    let ok = q.iter().all(|&i| {
                        let row = q.iter().filter(|&&j| j != i).map(|&j| rel[i][j]);
                        row.clone().all(|r| r < 2) && row.filter(|&r| r == 1).count() == 2
                    });
                    if ok {
                        out.push(q);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Derives the records from scratch: systoles and second systoles from the enumeration,
/// the right-angled half by the orthogonality test (least candidate in word order).
pub fn derive_records<R: Real>(model: &Bolza<R>, exec: Exec) -> Result<Vec<SystemRecord>> {
    let opts = SearchOptions { exec, ..SearchOptions::default() };
    let l2 = second_systole_length();
    let e = enumerate_classes(model, l2 + 1e-6, opts)?;
    let simple: Vec<&CurveClass> = e.classes.iter().filter(|c| c.simple).collect();
    let sys: Vec<CurveClass> = simple.iter().filter(|c| c.trace_exact == Some(QuadInt::new(2, 2))).map(|&c| c.clone()).collect();
    let second: Vec<CurveClass> = simple.iter().filter(|c| c.trace_exact == Some(QuadInt::new(6, 4))).map(|&c| c.clone()).collect();
    let quads = orthogonal_quadruples(model, &sys)?;
    let best = quads
        .iter()
        .map(|q| {
            let mut ws: Vec<Word> = q.iter().map(|&i| sys[i].word.clone()).collect();
            ws.sort();
            (ws, *q)
        })
        .min()
        .ok_or_else(|| Error::Construction("no right-angled quadruple of systoles".into()))?;
    let omega1: BTreeSet<usize> = best.1.iter().copied().collect();
    let rec = |system: &str, name: String, c: &CurveClass| SystemRecord {
        system: system.into(),
        name,
        word: c.word.clone(),
        trace: c.trace_exact.unwrap_or(QuadInt::ZERO),
        length: c.length,
    };
    let mut out = Vec::new();
    let mut o1: Vec<&CurveClass> = omega1.iter().map(|&i| &sys[i]).collect();
    o1.sort_by(|a, b| a.word.cmp(&b.word));
    for (c, name) in o1.iter().zip(["a", "b", "c", "d"]) {
        out.push(rec("omega1", name.into(), c));
    }
    let o2 = (0..sys.len()).filter(|i| !omega1.contains(i));
    for (k, i) in o2.enumerate() {
        out.push(rec("omega2", format!("e{}", k + 1), &sys[i]));
    }
    for (k, c) in second.iter().enumerate() {
        out.push(rec("second", format!("s{}", k + 1), c));
    }
    Ok(out)
}

/// The frozen systems, re-certified against the model.
#[derive(Debug, Clone)]
pub struct Systems {
    pub omega1: CurveSystem,
    pub omega2: CurveSystem,
    pub sys: CurveSystem,
    pub second: CurveSystem,
}

impl Systems {
    pub fn load<R: Real>(model: &Bolza<R>) -> Result<Systems> {
        Self::from_records(model, &parse_records(FROZEN)?)
    }

    pub fn from_records<R: Real>(model: &Bolza<R>, records: &[SystemRecord]) -> Result<Systems> {
        let walker = Walker::new(model);
        let fail = |why: String| Error::Certificate(why);
        let build = |system: &str, expected: usize, length: f64, trace: QuadInt| -> Result<CurveSystem> {
            let mut out = CurveSystem { name: system.into(), names: Vec::new(), classes: Vec::new(), expected };
            for r in records.iter().filter(|r| r.system == system) {
                let key = walker.conjugacy_key(&r.word)?;
                if key.word != r.word {
                    return Err(fail(format!("{} is not in canonical form ({})", r.word, key.word)));
                }
                let c = class_from_word(model, &walker, r.word.clone(), true)?;
                if c.trace_exact != Some(trace) || r.trace != trace {
                    return Err(fail(format!("{} has trace {:?}", r.word, c.trace_exact)));
                }
                if (c.length - length).abs() > 1e-9 || (r.length - length).abs() > 1e-9 {
                    return Err(fail(format!("{} has length {}", r.word, c.length)));
                }
                if !c.simple {
                    return Err(fail(format!("{} is not simple", r.word)));
                }
                if out.contains(&c.word) {
                    return Err(fail(format!("{} listed twice", r.word)));
                }
                out.names.push(r.name.clone());
                out.classes.push(c);
            }
            if out.len() != expected {
                return Err(fail(format!("{system} has {} classes, expected {expected}", out.len())));
            }
            Ok(out)
        };
        let (l1, l2) = (systole_length(), second_systole_length());
        let omega1 = build("omega1", 4, l1, QuadInt::new(2, 2))?;
        let omega2 = build("omega2", 8, l1, QuadInt::new(2, 2))?;
        let second = build("second", 12, l2, QuadInt::new(6, 4))?;
        let sys = omega1.union("sys", &omega2);
        if sys.len() != 12 {
            return Err(fail("the two systolic halves overlap".into()));
        }
        Ok(Systems { omega1, omega2, sys, second })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use std::sync::OnceLock;

    fn model() -> &'static Bolza<f64> {
        static M: OnceLock<Bolza<f64>> = OnceLock::new();
        M.get_or_init(|| Bolza::new(Config::default()).unwrap())
    }

    #[test]
    fn frozen_file_matches_derivation() {
        let m = model();
        let derived = derive_records(m, Exec::Sequential).unwrap();
        let frozen = parse_records(FROZEN).unwrap();
        assert_eq!(derived.len(), frozen.len());
        for (d, f) in derived.iter().zip(&frozen) {
            assert_eq!((&d.system, &d.name, &d.word, d.trace), (&f.system, &f.name, &f.word, f.trace));
            assert!((d.length - f.length).abs() < 1e-9);
        }
    }

    #[test]
    fn systems_certify() {
        let s = Systems::load(model()).unwrap();
        assert_eq!((s.omega1.len(), s.omega2.len(), s.sys.len(), s.second.len()), (4, 8, 12, 12));
        for c in s.sys.classes.iter().chain(&s.second.classes) {
            assert!(c.simple);
            assert_eq!(c.separating, Some(false));
        }
    }

    #[test]
    fn three_right_angled_quadruples_partition_the_systoles() {
        let m = model();
        let s = Systems::load(m).unwrap();
        let q = orthogonal_quadruples(m, &s.sys.classes).unwrap();
        assert_eq!(q.len(), 3);
        let mut all: Vec<usize> = q.iter().flatten().copied().collect();
        all.sort();
        assert_eq!(all, (0..12).collect::<Vec<_>>());
    }

    #[test]
    fn round_trip() {
        let r = parse_records(FROZEN).unwrap();
        assert_eq!(parse_records(&format_records(&r)).unwrap(), r);
        assert!(parse_records("omega1 a A 2 2 3.0").is_err());
    }

    #[test]
    fn tampered_word_is_rejected() {
        let m = model();
        let mut r = parse_records(FROZEN).unwrap();
        r[0].word = "AB".parse().unwrap();
        assert!(Systems::from_records(m, &r).is_err());
    }
}
