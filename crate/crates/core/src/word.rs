//! Words in the surface group: letters, free and Dehn reduction, enumeration,
//! abelianization and cyclic canonical forms.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Letter code `2k + s` for `g_k^{(-1)^s}`; the code order is the key order A < a < B < ...
pub type Letter = u8;

pub const NUM_LETTERS: u8 = 8;

#[inline]
pub fn inv(l: Letter) -> Letter {
    l ^ 1
}

#[inline]
pub fn generator(l: Letter) -> usize {
    (l >> 1) as usize
}

#[inline]
pub fn is_inverse(l: Letter) -> bool {
    l & 1 == 1
}

pub fn letter_char(l: Letter) -> char {
    let base = b'A' + (l >> 1);
    if is_inverse(l) {
        (base + 32) as char
    } else {
        base as char
    }
}

pub fn letter_from_char(ch: char) -> Option<Letter> {
    match ch {
        'A'..='D' => Some(2 * (ch as u8 - b'A')),
        'a'..='d' => Some(2 * (ch as u8 - b'a') + 1),
        _ => None,
    }
}

/// Freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word, freely reducing the input.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            assert!(l < NUM_LETTERS, "letter code out of range");
            if out.last() == Some(&inv(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| inv(l)).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, k: usize) -> Word {
        Word::new(std::iter::repeat_n(self.0.iter().copied(), k).flatten())
    }

    /// Conjugate `h w h^-1`.
    pub fn conjugate(&self, h: &Word) -> Word {
        h.concat(self).concat(&h.inverse())
    }

    /// Removes cancelling letters at the two ends; returns the core and the stripped conjugator.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let v = &self.0;
        let mut i = 0;
        let mut j = v.len();
        while j > i + 1 && v[i] == inv(v[j - 1]) {
            i += 1;
            j -= 1;
        }
        (Word(v[i..j].to_vec()), Word(v[..i].to_vec()))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != inv(self.0[self.0.len() - 1])
    }

    pub fn rotate(&self, k: usize) -> Word {
        let n = self.0.len();
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Shortlex comparison: length first, then letter codes.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }

    /// Smallest period `p` with `w = u^(n/p)`; equals `len` for primitive cyclic words.
    pub fn cyclic_period(&self) -> usize {
        let n = self.0.len();
        (1..=n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| self.0[i] == self.0[i - p])).unwrap_or(n)
    }

    pub fn is_proper_power(&self) -> bool {
        let n = self.0.len();
        n > 0 && self.cyclic_period() < n
    }

    pub fn abelianize(&self) -> [i64; 4] {
        let mut e = [0i64; 4];
        for &l in &self.0 {
            e[generator(l)] += if is_inverse(l) { -1 } else { 1 };
        }
        e
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shortlex_cmp(other)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.0 {
            write!(f, "{}", letter_char(l))?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Word::empty());
        }
        let letters = s
            .chars()
            .map(|ch| letter_from_char(ch).ok_or_else(|| Error::Word(format!("bad letter {ch:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::new(letters))
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = Error;
    fn try_from(s: String) -> Result<Word> {
        s.parse()
    }
}

/// Start index of the least rotation of a cyclic sequence (two-pointer minimum expression).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        match s[(i + k) % n].cmp(&s[(j + k) % n]) {
            Ordering::Equal => k += 1,
            ord => {
                if ord == Ordering::Greater {
                    i += k + 1;
                } else {
                    j += k + 1;
                }
                if i == j {
                    j += 1;
                }
                k = 0;
            }
        }
    }
    i.min(j).min(n.saturating_sub(1))
}

pub fn min_rotation<T: Ord + Clone>(s: &[T]) -> Vec<T> {
    let k = least_rotation(s);
    s[k..].iter().chain(s[..k].iter()).cloned().collect()
}

/// Canonical form of an unoriented free-homotopy class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicKey {
    pub word: Word,
    /// True when the canonical form was obtained from the inverse orientation.
    pub reversed: bool,
}

impl fmt::Display for CyclicKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word)
    }
}

/// The one-relator presentation with the Dehn rewriting tables.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub relator: Word,
    /// Cyclic rotations of the relator and its inverse.
    pub cyclic: Vec<Vec<Letter>>,
    /// Subwords of length > 4 of cyclic relators, keyed by packed letters, mapped to the
    /// inverse of the complementary piece.
    table: HashMap<u64, Vec<Letter>>,
}

fn pack(s: &[Letter]) -> u64 {
    s.iter().fold(s.len() as u64, |acc, &l| (acc << 4) | l as u64)
}

impl Presentation {
    pub fn new(relator: Word) -> Result<Self> {
        let n = relator.len();
        if n != 8 || !relator.is_cyclically_reduced() {
            return Err(Error::Word(format!("relator {relator} must be cyclically reduced of length 8")));
        }
        let mut cyclic = Vec::with_capacity(2 * n);
        for r in [relator.clone(), relator.inverse()] {
            for k in 0..n {
                cyclic.push(r.rotate(k).0);
            }
        }
        let mut table = HashMap::new();
        for c in &cyclic {
            for len in 5..=n {
                let piece = &c[..len];
                let rest: Vec<Letter> = c[len..].iter().rev().map(|&l| inv(l)).collect();
                table.insert(pack(piece), rest);
            }
        }
        Ok(Presentation { relator, cyclic, table })
    }

    /// Replacement for a subword that is more than half of a cyclic relator.
    #[inline]
    pub fn long_piece(&self, s: &[Letter]) -> Option<&Vec<Letter>> {
        if s.len() < 5 || s.len() > 8 {
            return None;
        }
        self.table.get(&pack(s))
    }

    /// Whether `s` is a subword of some cyclic relator.
    pub fn is_relator_piece(&self, s: &[Letter]) -> bool {
        s.len() <= 8 && self.cyclic.iter().any(|c| c.starts_with(s))
    }

    /// Dehn's algorithm: scans longest-first, leftmost-first.
    pub fn dehn_reduce(&self, w: &Word) -> Word {
        let mut cur = w.0.clone();
        'outer: loop {
            cur = Word::new(cur).0;
            for len in (5..=8).rev() {
                if cur.len() < len {
                    continue;
                }
                for i in 0..=cur.len() - len {
                    if let Some(rep) = self.long_piece(&cur[i..i + len]) {
                        let mut next = cur[..i].to_vec();
                        next.extend_from_slice(rep);
                        next.extend_from_slice(&cur[i + len..]);
                        cur = next;
                        continue 'outer;
                    }
                }
            }
            return Word(cur);
        }
    }

    /// Whether the word contains no subword longer than half a relator.
    pub fn is_dehn_reduced(&self, w: &Word) -> bool {
        let v = &w.0;
        (5..=8).all(|len| v.len() < len || (0..=v.len() - len).all(|i| self.long_piece(&v[i..i + len]).is_none()))
    }

    /// Dehn reduction on the cyclic word: repeats cyclic reduction and relator
    /// substitution across the wrap point until neither applies.
    pub fn cyclic_dehn_reduce(&self, w: &Word) -> Word {
        let mut cur = self.dehn_reduce(w).cyclic_reduce().0;
        loop {
            let n = cur.len();
            let mut changed = false;
            for len in (5..=8).rev() {
                if n < len {
                    continue;
                }
                for i in 0..n {
                    let s: Vec<Letter> = (0..len).map(|j| cur.0[(i + j) % n]).collect();
                    if let Some(rep) = self.long_piece(&s) {
                        let rot = cur.rotate(i);
                        let mut next = rep.clone();
                        next.extend_from_slice(&rot.0[len..]);
                        cur = self.dehn_reduce(&Word::new(next)).cyclic_reduce().0;
                        changed = true;
                        break;
                    }
                }
                if changed {
                    break;
                }
            }
            if !changed {
                return cur;
            }
        }
    }

    /// All Dehn-reduced words of length `1..=max_len` in shortlex order.
    pub fn enumerate_words(&self, max_len: usize) -> WordStream<'_> {
        WordStream { pres: self, max_len, layer: vec![Vec::new()], idx: 0, len: 0 }
    }
}

/// Breadth-first stream of Dehn-reduced words.
pub struct WordStream<'a> {
    pres: &'a Presentation,
    max_len: usize,
    layer: Vec<Vec<Letter>>,
    idx: usize,
    len: usize,
}

impl Iterator for WordStream<'_> {
    type Item = Word;
    fn next(&mut self) -> Option<Word> {
        loop {
            if self.len > 0 && self.idx < self.layer.len() {
                self.idx += 1;
                return Some(Word(self.layer[self.idx - 1].clone()));
            }
            if self.len >= self.max_len {
                return None;
            }
            let mut next = Vec::new();
            for w in &self.layer {
                for l in 0..NUM_LETTERS {
                    if w.last() == Some(&inv(l)) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(l);
                    // Prefixes are already reduced, so only suffixes can hold a long piece.
                    let n = v.len();
                    if (5..=8.min(n)).any(|len| self.pres.long_piece(&v[n - len..]).is_some()) {
                        continue;
                    }
                    next.push(v);
                }
            }
            self.layer = next;
            self.idx = 0;
            self.len += 1;
        }
    }
}
