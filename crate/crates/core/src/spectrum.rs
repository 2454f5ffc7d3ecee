//! Enumeration of closed geodesics up to a length cutoff.
//!
//! Candidates are cutting sequences read from the fundamental octagon, grown letter by
//! letter in a depth-first search. A prefix survives only if some geodesic can cross the
//! tessellation lines it passes in that order, and if every portal stays within reach of
//! the first one. A complete word is emitted when it is the least rotation of its own
//! cutting sequence over both orientations, so every unoriented primitive class appears
//! exactly once.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use serde::Serialize;

use crate::crossings::{chords_of, crossings};
use crate::error::{Error, Result};
use crate::hyp::{arg, cis, cosh_distance, line_through, Frame, Isometry, C};
use crate::model::{letter_side, Bolza};
use crate::par::{self, Exec};
use crate::quad::QuadInt;
use crate::real::Real;
use crate::walk::Walker;
use crate::word::{inv, min_rotation, CyclicKey, Letter, Word};

/// An unoriented primitive closed geodesic.
#[derive(Debug, Clone, Serialize)]
pub struct CurveClass {
    pub key: CyclicKey,
    /// Representative word: the canonical cutting sequence.
    pub word: Word,
    #[serde(skip)]
    pub matrix: Isometry<f64>,
    pub trace_exact: Option<QuadInt>,
    /// |trace| in the working precision, rounded to f64.
    pub trace: f64,
    pub length: f64,
    pub primitive: bool,
    pub self_intersections: usize,
    pub simple: bool,
    /// Only recorded for simple classes.
    pub separating: Option<bool>,
}

impl CurveClass {
    /// Exact order used for tables: length, exact trace, then word.
    pub fn cmp_canonical(&self, other: &Self) -> Ordering {
        match (self.trace_exact, other.trace_exact) {
            (Some(a), Some(b)) if a != b => a.cmp(&b),
            (Some(_), Some(_)) => self.word.cmp(&other.word),
            _ => self.length.total_cmp(&other.length).then_with(|| self.word.cmp(&other.word)),
        }
    }
}

/// Result of an enumeration run.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub max_length: f64,
    pub classes: Vec<CurveClass>,
    /// Word-length bound of the final run.
    pub bound: usize,
    /// No search branch was cut by the word-length bound, so raising it changes nothing.
    pub saturated: bool,
    pub nodes: u64,
}

/// Tuning of the search.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub exec: Exec,
    /// Extra rounds of raising the word bound by 2 before giving up.
    pub max_raises: usize,
    /// Skip self-intersection counts (they dominate the cost at long cutoffs).
    pub with_intersections: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { exec: Exec::from_jobs(0), max_raises: 24, with_intersections: true }
    }
}

/// Heuristic word bound: `ceil(L / s_min) + 2` with `s_min` half the systole.
pub fn word_bound(max_length: f64) -> usize {
    let s_min = 2.0 * (1.0 + 2f64.sqrt()).acosh() / 2.0;
    (max_length / s_min).ceil() as usize + 2
}

/// Exact trace of a real trace value.
pub fn snap_trace(t: f64) -> Result<QuadInt> {
    QuadInt::snap(t, 1e-6)
}

/// Arc of the unit circle, counterclockwise from `start`.
#[derive(Debug, Clone, Copy)]
struct Arc {
    start: f64,
    len: f64,
}

const ARC_SLACK: f64 = 1e-12;

impl Arc {
    const FULL: Arc = Arc { start: 0.0, len: TAU };

    fn between(a: C<f64>, b: C<f64>) -> Arc {
        let s = arg(a);
        Arc { start: s, len: (arg(b) - s).rem_euclid(TAU) }
    }

    fn is_full(&self) -> bool {
        self.len >= TAU
    }

    /// Intersection, or its hull when it has two components.
    fn meet(&self, o: &Arc) -> Option<Arc> {
        if self.is_full() {
            return Some(*o);
        }
        if o.is_full() {
            return Some(*self);
        }
        let d = (o.start - self.start).rem_euclid(TAU);
        let lo1 = d;
        let hi1 = (d + o.len).min(self.len);
        let first = (hi1 >= lo1 - ARC_SLACK && lo1 <= self.len + ARC_SLACK).then_some((lo1.min(self.len), hi1));
        let wrap = d + o.len - TAU;
        let second = (wrap >= -ARC_SLACK).then_some((0.0, wrap.min(self.len)));
        let (lo, hi) = match (first, second) {
            (Some(a), Some(b)) => (b.0, a.1.max(b.1)),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => return None,
        };
        if hi - lo < ARC_SLACK {
            return None;
        }
        Some(Arc { start: self.start + lo, len: hi - lo })
    }

    fn image(&self, g: &Isometry<f64>) -> Arc {
        if self.is_full() {
            return *self;
        }
        let a = g.apply_c(cis(self.start));
        let b = g.apply_c(cis(self.start + self.len));
        let s = arg(a);
        let mut len = (arg(b) - s).rem_euclid(TAU);
        // Tiny arcs may wrap to almost TAU through rounding.
        if len > TAU - ARC_SLACK && self.len < 1.0 {
            len = 0.0;
        }
        Arc { start: s, len }
    }
}

/// Upper half-plane chart in which a segment lies on the imaginary axis.
#[derive(Debug, Clone, Copy)]
struct SideFrame {
    frame: Frame<f64>,
    lo: f64,
    hi: f64,
}

impl SideFrame {
    fn new(a: C<f64>, b: C<f64>) -> Self {
        let (u, v) = line_through(a, b);
        let frame = Frame::new(u, v);
        let (ha, hb) = (frame.to_h(a).im, frame.to_h(b).im);
        SideFrame { frame, lo: ha.min(hb), hi: ha.max(hb) }
    }

    /// cosh of the distance from `z` to the segment.
    fn cosh_to(&self, z: C<f64>, ends: (C<f64>, C<f64>)) -> f64 {
        let w = self.frame.to_h(z);
        let r = w.norm();
        if r >= self.lo && r <= self.hi {
            // Distance to the imaginary axis: sinh d = |x| / y.
            let s = w.re.abs() / w.im;
            (1.0 + s * s).sqrt()
        } else {
            cosh_distance(z, ends.0).min(cosh_distance(z, ends.1))
        }
    }
}

/// cosh of the distance between two non-crossing segments, the second given by its chart.
fn segment_cosh_distance(q: (C<f64>, C<f64>), side: &SideFrame, ends: (C<f64>, C<f64>)) -> f64 {
    let a = side.cosh_to(q.0, ends).min(side.cosh_to(q.1, ends));
    if q.0 == q.1 {
        return a;
    }
    let qf = SideFrame::new(q.0, q.1);
    a.min(qf.cosh_to(ends.0, q)).min(qf.cosh_to(ends.1, q))
}

/// Search state shared by all shards.
struct Search<'a, R: Real> {
    model: &'a Bolza<R>,
    walker: Walker<'a, R>,
    cosh_reach: f64,
    trace_max: f64,
    bound: usize,
    ginv64: [Isometry<f64>; 8],
    mids: [C<f64>; 8],
    verts: [C<f64>; 8],
    side_frames: [SideFrame; 8],
    /// Midpoint distances that decide the reach test without the exact segment distance.
    cosh_near: f64,
    cosh_far: f64,
    fwd_cut: [Arc; 8],
    bwd_cut: [Arc; 8],
}

#[derive(Clone, Copy)]
struct Node<R: Real> {
    p: Isometry<R>,
    fwd: Arc,
    bwd: Arc,
    /// Endpoints of the first portal, in the coordinates of the current tile.
    q: (C<f64>, C<f64>),
    period: usize,
}

#[derive(Default)]
struct ShardOut {
    found: Vec<(Vec<Letter>, bool)>,
    nodes: u64,
    bound_hit: bool,
}

impl<'a, R: Real> Search<'a, R> {
    fn new(model: &'a Bolza<R>, max_length: f64, bound: usize) -> Self {
        let carriers: [(C<f64>, C<f64>); 8] = std::array::from_fn(|s| {
            let (a, b) = model.octagon.poly.carriers[s];
            (C::new(a.re.to_f64(), a.im.to_f64()), C::new(b.re.to_f64(), b.im.to_f64()))
        });
        let side = model.octagon.side_length(0).to_f64();
        let tol = 1e-9 * max_length.max(1.0);
        Search {
            model,
            walker: Walker::new(model),
            cosh_reach: (max_length + tol).cosh() * (1.0 + 1e-9),
            cosh_near: (max_length - 1e-6).max(0.0).cosh(),
            cosh_far: (max_length + side + tol).cosh() * (1.0 + 1e-9),
            trace_max: (max_length / 2.0 + tol).cosh(),
            bound,
            ginv64: std::array::from_fn(|l| model.gens[l].cast::<f64>().inverse()),
            mids: std::array::from_fn(|s| {
                let m = model.octagon.midpoint(s);
                C::new(m.re.to_f64(), m.im.to_f64())
            }),
            verts: std::array::from_fn(|i| {
                let v = model.octagon.vertex(i);
                C::new(v.re.to_f64(), v.im.to_f64())
            }),
            side_frames: std::array::from_fn(|i| {
                let v = |k: usize| {
                    let z = model.octagon.vertex(k % 8);
                    C::new(z.re.to_f64(), z.im.to_f64())
                };
                SideFrame::new(v(i), v(i + 1))
            }),
            // Leaving through side s: ahead lies the right of its carrier, behind the left.
            fwd_cut: std::array::from_fn(|s| Arc::between(carriers[s].0, carriers[s].1)),
            bwd_cut: std::array::from_fn(|s| Arc::between(carriers[s].1, carriers[s].0)),
        }
    }

    /// Child of `node` after appending `l` to `word`, if it survives the prunes.
    fn step(&self, node: &Node<R>, word: &[Letter], l: Letter) -> Option<Node<R>> {
        let n = word.len();
        let mut period = node.period;
        if let Some(&last) = word.last() {
            if l == inv(last) {
                return None;
            }
            match l.cmp(&word[n - period]) {
                Ordering::Less => return None,
                Ordering::Equal => {}
                Ordering::Greater => period = n + 1,
            }
        } else {
            period = 1;
        }
        if n >= 4 {
            let mut piece = [0u8; 5];
            piece[..4].copy_from_slice(&word[n - 4..]);
            piece[4] = l;
            if self.model.pres.is_relator_piece(&piece) {
                return None;
            }
        }
        let s = letter_side(l);
        let fwd = node.fwd.meet(&self.fwd_cut[s])?;
        let bwd = node.bwd.meet(&self.bwd_cut[s])?;
        let gi = &self.ginv64[l as usize];
        let e = (s + 4) % 8;
        let q = if n == 0 {
            (self.verts[(e + 1) % 8], self.verts[e])
        } else {
            (gi.apply_c(node.q.0), gi.apply_c(node.q.1))
        };
        if n > 0 && self.too_far(q, e) {
            return None;
        }
        Some(Node { p: node.p * self.model.gens[l as usize], fwd: fwd.image(gi), bwd: bwd.image(gi), q, period })
    }

    /// Whether the segment `q` is farther than the reach from side `e` of the octagon.
    fn too_far(&self, q: (C<f64>, C<f64>), e: usize) -> bool {
        let mid = (q.0 + q.1) * 0.5;
        let dm = cosh_distance(self.mids[e], mid);
        if dm <= self.cosh_near {
            return false;
        }
        if dm > self.cosh_far {
            return true;
        }
        segment_cosh_distance(q, &self.side_frames[e], (self.verts[e], self.verts[(e + 1) % 8])) > self.cosh_reach
    }

    /// Emission test for a complete word whose tile product is `node.p`.
    fn leaf(&self, node: &Node<R>, word: &[Letter]) -> Option<bool> {
        let n = word.len();
        if node.period != n || (n > 1 && word[n - 1] == inv(word[0])) {
            return None;
        }
        let t = node.p.a.re.to_f64().abs();
        if t <= 1.0 + 1e-12 || t > self.trace_max {
            return None;
        }
        let ties = self.walker.cutting_sequence_ties(&node.p, word)?;
        let rev: Vec<Letter> = if ties {
            self.walker.walk(&Word::new(word.iter().copied()).inverse()).ok()?.letters
        } else {
            word.iter().rev().map(|&l| inv(l)).collect()
        };
        let rk = min_rotation(&rev);
        match word.cmp(&rk[..]) {
            Ordering::Greater => None,
            _ => Some(ties),
        }
    }

    fn dfs(&self, node: &Node<R>, word: &mut Vec<Letter>, out: &mut ShardOut) {
        out.nodes += 1;
        if let Some(ties) = self.leaf(node, word) {
            out.found.push((word.clone(), ties));
        }
        for l in 0..8u8 {
            let Some(child) = self.step(node, word, l) else { continue };
            if word.len() + 1 > self.bound {
                out.bound_hit = true;
                continue;
            }
            word.push(l);
            self.dfs(&child, word, out);
            word.pop();
        }
    }

    fn root(&self) -> Node<R> {
        Node { p: Isometry::identity(), fwd: Arc::FULL, bwd: Arc::FULL, q: (C::new(0.0, 0.0), C::new(0.0, 0.0)), period: 0 }
    }

    /// Shards: all surviving two-letter prefixes; single letters are handled directly.
    fn run(&self, exec: Exec) -> ShardOut {
        let root = self.root();
        let mut out = ShardOut::default();
        let mut shards = Vec::new();
        out.nodes += 1;
        for a in 0..8u8 {
            let Some(na) = self.step(&root, &[], a) else { continue };
            out.nodes += 1;
            if let Some(t) = self.leaf(&na, &[a]) {
                out.found.push((vec![a], t));
            }
            for b in 0..8u8 {
                if let Some(nb) = self.step(&na, &[a], b) {
                    if self.bound < 2 {
                        out.bound_hit = true;
                    } else {
                        shards.push((vec![a, b], nb));
                    }
                }
            }
        }
        let results = par::map(exec, shards, |(mut w, n)| {
            let mut o = ShardOut::default();
            self.dfs(&n, &mut w, &mut o);
            o
        });
        for r in results {
            out.found.extend(r.found);
            out.nodes += r.nodes;
            out.bound_hit |= r.bound_hit;
        }
        out
    }
}

/// Raw search: cutting-sequence words of all classes up to `max_length`.
pub fn search_words<R: Real>(model: &Bolza<R>, max_length: f64, bound: usize, exec: Exec) -> (Vec<Word>, bool, u64) {
    let s = Search::new(model, max_length, bound);
    let out = s.run(exec);
    let mut words: Vec<Word> = out.found.into_iter().map(|(w, _)| Word::new(w)).collect();
    words.sort();
    (words, !out.bound_hit, out.nodes)
}

/// Builds the full record of a class from its canonical word.
pub fn class_from_word<R: Real>(model: &Bolza<R>, walker: &Walker<'_, R>, word: Word, with_intersections: bool) -> Result<CurveClass> {
    let m = model.eval(&word);
    let tr = m.a.re.abs() * R::from_f64(2.0);
    let length = m.translation_length_unchecked().to_f64();
    let trace_exact = QuadInt::snap(tr, model.cfg.tol.snap).ok();
    let self_intersections = if with_intersections {
        let walk = walker.walk(&word).map_err(|e| Error::Ambiguity(format!("walk of {word}: {e}")))?;
        crossings(model, &chords_of(&walk), None).len()
    } else {
        0
    };
    let simple = with_intersections && self_intersections == 0;
    let separating = simple.then(|| word.abelianize() == [0; 4]);
    Ok(CurveClass {
        key: CyclicKey { word: word.clone(), reversed: false },
        word,
        matrix: m.cast(),
        trace_exact,
        trace: tr.to_f64(),
        length,
        primitive: true,
        self_intersections,
        simple,
        separating,
    })
}

/// Every unoriented primitive class of length at most `max_length`, each exactly once.
/// Errors with `Incomplete` if the word bound never saturates.
pub fn enumerate_classes<R: Real>(model: &Bolza<R>, max_length: f64, opts: SearchOptions) -> Result<Enumeration> {
    let e = enumerate_unchecked(model, max_length, opts)?;
    if !e.saturated {
        return Err(Error::Incomplete { bound: e.bound });
    }
    Ok(e)
}

/// Like `enumerate_classes` but returns an unsaturated result instead of failing.
pub fn enumerate_unchecked<R: Real>(model: &Bolza<R>, max_length: f64, opts: SearchOptions) -> Result<Enumeration> {
    if !(max_length > 0.0) {
        return Err(Error::Domain("length cutoff must be positive".into()));
    }
    let mut bound = word_bound(max_length);
    let mut nodes = 0;
    let mut raises = 0;
    let (words, saturated) = loop {
        let (words, sat, n) = search_words(model, max_length, bound, opts.exec);
        nodes += n;
        if sat || raises >= opts.max_raises {
            break (words, sat);
        }
        bound += 2;
        raises += 1;
    };
    let walker = Walker::new(model);
    let classes = par::map(opts.exec, words, |w| class_from_word(model, &walker, w, opts.with_intersections));
    let mut classes = classes.into_iter().collect::<Result<Vec<_>>>()?;
    classes.sort_by(|a, b| a.cmp_canonical(b));
    Ok(Enumeration { max_length, classes, bound, saturated, nodes })
}

/// Self-intersection number of the closed geodesic of a primitive class.
pub fn self_intersection<R: Real>(model: &Bolza<R>, word: &Word) -> Result<usize> {
    let walker = Walker::new(model);
    let walk = walker.walk(word)?;
    if walk.power != 1 {
        return Err(Error::Domain("self-intersection of a non-primitive class".into()));
    }
    Ok(crossings(model, &chords_of(&walk), None).len())
}

/// One row of the length spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub length: f64,
    pub trace: Option<QuadInt>,
    pub mult_total: usize,
    pub mult_simple: usize,
    pub words: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumTable {
    pub max_length: f64,
    pub certified: bool,
    pub rows: Vec<SpectrumRow>,
    /// Index of the first and second simple rows.
    pub l1: Option<usize>,
    pub l2: Option<usize>,
}

/// Groups classes by length into spectrum rows.
pub fn spectrum_table(e: &Enumeration, merge: f64) -> SpectrumTable {
    let mut rows: Vec<SpectrumRow> = Vec::new();
    for c in &e.classes {
        match rows.last_mut() {
            Some(r) if (r.length - c.length).abs() <= merge * c.length.max(1.0) && r.trace == c.trace_exact => {
                r.mult_total += 1;
                r.mult_simple += c.simple as usize;
                r.words.push(c.word.to_string());
            }
            _ => rows.push(SpectrumRow {
                length: c.length,
                trace: c.trace_exact,
                mult_total: 1,
                mult_simple: c.simple as usize,
                words: vec![c.word.to_string()],
            }),
        }
    }
    let mut simple_rows = rows.iter().enumerate().filter(|(_, r)| r.mult_simple > 0).map(|(i, _)| i);
    let l1 = simple_rows.next();
    let l2 = simple_rows.next();
    SpectrumTable { max_length: e.max_length, certified: e.saturated, rows, l1, l2 }
}

/// Length spectrum up to `max_length`.
pub fn length_spectrum<R: Real>(model: &Bolza<R>, max_length: f64, opts: SearchOptions) -> Result<SpectrumTable> {
    let e = enumerate_classes(model, max_length, opts)?;
    Ok(spectrum_table(&e, model.cfg.tol.merge))
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
    fn arcs() {
        let a = Arc { start: 0.0, len: 1.0 };
        let b = Arc { start: 0.5, len: 1.0 };
        let m = a.meet(&b).unwrap();
        assert!((m.start - 0.5).abs() < 1e-15 && (m.len - 0.5).abs() < 1e-15);
        let c = Arc { start: 2.0, len: 1.0 };
        assert!(a.meet(&c).is_none());
        let w = Arc { start: 6.0, len: 1.0 };
        let m = a.meet(&w).unwrap();
        assert!(m.start.abs() < 1e-15 && (m.len - (7.0 - TAU)).abs() < 1e-12);
        // Two components: the hull is kept.
        let big = Arc { start: 0.8, len: TAU - 0.6 };
        let m = a.meet(&big).unwrap();
        assert!((m.len - 1.0).abs() < 1e-12);
    }

    #[test]
    fn snap_examples() {
        assert_eq!(snap_trace(4.8284271247).unwrap(), QuadInt::new(2, 2));
        assert_eq!(snap_trace(11.6568542494).unwrap(), QuadInt::new(6, 4));
        assert_eq!(snap_trace(0.0).unwrap(), QuadInt::new(0, 0));
    }

    #[test]
    fn below_systole_is_empty() {
        let e = enumerate_classes(model(), 1.0, SearchOptions::default()).unwrap();
        assert!(e.classes.is_empty());
        assert!(e.saturated);
    }

    #[test]
    fn systoles() {
        let e = enumerate_classes(model(), 3.06, SearchOptions::default()).unwrap();
        assert_eq!(e.classes.len(), 12);
        let l1 = 2.0 * (1.0 + 2f64.sqrt()).acosh();
        for c in &e.classes {
            assert!(c.simple, "{}", c.word);
            assert!((c.length - l1).abs() < 1e-9);
            assert_eq!(c.trace_exact, Some(QuadInt::new(2, 2)));
        }
    }
}
