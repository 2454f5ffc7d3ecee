//! Intersection numbers between closed geodesics and against curve systems, the
//! complexity table `T_k` and the exceptional set of curves meeting the right-angled
//! systolic graph only at its vertices.

use serde::Serialize;

use crate::crossings::{chords_of_word, crossings, Chord, Crossing};
use crate::error::{Error, Result};
use num_traits::Zero;

use crate::hyp::{cabs, c, Frame, Isometry, C};
use crate::model::Bolza;
use crate::par::{self, Exec};
use crate::real::Real;
use crate::spectrum::{class_from_word, enumerate_classes, search_words, CurveClass, SearchOptions};
use crate::systems::{systole_length, CurveSystem, Systems};
use crate::walk::Walker;
use crate::word::Word;

/// Crossings of a pair of classes (or of a class with a system) on the quotient.
#[derive(Debug, Clone, Serialize)]
pub struct IntersectionRecord {
    pub first: String,
    pub second: String,
    pub count: usize,
    /// Canonical points in the closed fundamental octagon.
    pub points: Vec<(f64, f64)>,
    /// Whether each point is a vertex: a Weierstrass point for a pair of classes, a
    /// crossing of two members for a system.
    pub vertex_incident: Vec<bool>,
}

fn point<R: Real>(p: &Crossing) -> C<R> {
    c(R::from_f64(p.point.0), R::from_f64(p.point.1))
}

fn record<R: Real>(first: String, second: String, x: &[Crossing], is_vertex: impl Fn(C<R>) -> Result<bool>) -> Result<IntersectionRecord> {
    let vertex_incident = x.iter().map(|p| is_vertex(point(p))).collect::<Result<Vec<_>>>()?;
    Ok(IntersectionRecord { first, second, count: x.len(), points: x.iter().map(|p| p.point).collect(), vertex_incident })
}

/// Geometric intersection number of two distinct unoriented classes.
pub fn intersection_number<R: Real>(model: &Bolza<R>, c1: &CurveClass, c2: &CurveClass) -> Result<IntersectionRecord> {
    if c1.key == c2.key {
        return Err(Error::Domain(format!("intersection of {} with itself", c1.word)));
    }
    let walker = Walker::new(model);
    let a = chords_of_word(&walker, &c1.word)?;
    let b = chords_of_word(&walker, &c2.word)?;
    let tol = model.cfg.tol.vertex;
    record(c1.word.to_string(), c2.word.to_string(), &crossings(model, &a, Some(&b)), |z| Ok(model.weierstrass_index(z, tol)?.is_some()))
}

/// A curve system with the chords of its members precomputed.
#[derive(Debug, Clone)]
pub struct PreparedSystem<R: Real> {
    pub system: CurveSystem,
    chords: Vec<Vec<Chord<R>>>,
    /// Crossings between members, in the closed octagon.
    pub vertices: Vec<C<R>>,
}

impl<R: Real> PreparedSystem<R> {
    pub fn new(model: &Bolza<R>, system: &CurveSystem) -> Result<Self> {
        let walker = Walker::new(model);
        let chords: Vec<Vec<Chord<R>>> = system.classes.iter().map(|c| chords_of_word(&walker, &c.word)).collect::<Result<_>>()?;
        let mut vertices: Vec<C<R>> = Vec::new();
        for i in 0..chords.len() {
            for j in i + 1..chords.len() {
                for x in crossings(model, &chords[i], Some(&chords[j])) {
                    let z = point::<R>(&x);
                    if !vertices.iter().any(|&v| model.quotient_distance(v, z).is_ok_and(|d| d.to_f64() < model.cfg.tol.vertex)) {
                        vertices.push(z);
                    }
                }
            }
        }
        Ok(PreparedSystem { system: system.clone(), chords, vertices })
    }

    fn is_vertex(&self, model: &Bolza<R>, z: C<R>) -> Result<bool> {
        for &v in &self.vertices {
            if model.quotient_distance(v, z)?.to_f64() < model.cfg.tol.vertex {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Intersection of a class with every member of a system.
#[derive(Debug, Clone, Serialize)]
pub struct SystemIntersection {
    pub total: usize,
    pub per_member: Vec<usize>,
    /// Every crossing sits at a crossing of two members.
    pub vertex_only: bool,
    pub records: Vec<IntersectionRecord>,
}

/// `sum over members a of i(a, c)`, counted per crossed member at shared points.
pub fn intersection_with_system<R: Real>(model: &Bolza<R>, c: &CurveClass, s: &PreparedSystem<R>) -> Result<SystemIntersection> {
    if s.system.contains(&c.word) {
        return Err(Error::Domain(format!("{} is a member of {}", c.word, s.system.name)));
    }
    let walker = Walker::new(model);
    intersection_with_chords(model, &c.word, &chords_of_word(&walker, &c.word)?, s)
}

fn intersection_with_chords<R: Real>(model: &Bolza<R>, word: &Word, ch: &[Chord<R>], s: &PreparedSystem<R>) -> Result<SystemIntersection> {
    let mut out = SystemIntersection { total: 0, per_member: Vec::new(), vertex_only: true, records: Vec::new() };
    for (name, sc) in s.system.names.iter().zip(&s.chords) {
        let r = record(word.to_string(), name.clone(), &crossings(model, ch, Some(sc)), |z| s.is_vertex(model, z))?;
        out.total += r.count;
        out.per_member.push(r.count);
        out.vertex_only &= r.vertex_incident.iter().all(|&v| v);
        out.records.push(r);
    }
    Ok(out)
}

/// Lines of the lifted system meeting the closed fundamental octagon.
fn lines_meeting_domain<R: Real>(model: &Bolza<R>, s: &CurveSystem) -> Result<Vec<(C<R>, C<R>)>> {
    let walker = Walker::new(model);
    let tol = model.cfg.tol.merge;
    let poly = &model.octagon.poly;
    let meets = |u: C<R>, v: C<R>| {
        let f = Frame::new(u, v);
        poly.carriers.iter().any(|&(e1, e2)| {
            let same = (cabs(e1 - u) + cabs(e2 - v)).to_f64().min((cabs(e1 - v) + cabs(e2 - u)).to_f64()) < tol;
            same || f.crossing(e1, e2).is_some_and(|x| poly.contains(f.point_at(x.y2.sqrt()), tol))
        })
    };
    let mut lines: Vec<(C<R>, C<R>)> = Vec::new();
    let mut push = |u: C<R>, v: C<R>| {
        let dup = lines
            .iter()
            .any(|&(a, b)| (cabs(a - u) + cabs(b - v)).to_f64().min((cabs(a - v) + cabs(b - u)).to_f64()) < tol);
        if !dup && meets(u, v) {
            lines.push((u, v));
        }
    };
    for cl in &s.classes {
        for v in walker.walk(&cl.word)?.visits {
            push(v.u, v.v);
            for (g, _) in &model.neighbors {
                push(g.apply_c(v.u), g.apply_c(v.v));
            }
        }
    }
    Ok(lines)
}

/// Crossing of the marched geodesic with a lifted line: parameter and line endpoints.
#[derive(Debug, Clone, Copy)]
struct LiftEvent<R: Real> {
    t: f64,
    u: C<R>,
    v: C<R>,
}

/// Walks the tiles met by the geodesic `(u, v)` for parameters in `[t_lo, t_hi]` (arclength
/// from the point at height `y0` of its frame) and collects every crossing with a lifted line.
fn march<R: Real>(
    model: &Bolza<R>,
    lines: &[(C<R>, C<R>)],
    axis: (C<R>, C<R>),
    y0: R,
    t_lo: f64,
    t_hi: f64,
) -> Result<Vec<LiftEvent<R>>> {
    let g = Frame::new(axis.0, axis.1);
    let tol = model.cfg.tol.merge;
    let vtol = model.cfg.tol.vertex;
    let at = |t: f64| g.point_at(y0 * R::from_f64(t).exp());
    let param = |y2: R| (y2.ln() / R::from_f64(2.0) - y0.ln()).to_f64();
    let mut events: Vec<LiftEvent<R>> = Vec::new();
    let mut cur = t_lo;
    let mut tiles = 0usize;
    while cur < t_hi {
        tiles += 1;
        if tiles > model.cfg.reduce_cap {
            return Err(Error::NonTermination { iterations: tiles });
        }
        // Near a vertex the probe point can reduce into a tile the axis only grazes; probe
        // further along until the tile extends past `cur`. When the axis passes through a
        // vertex up to rounding, the last resort drops bounds that contradict the probe point.
        let mut found = None;
        for (probe, lenient) in [(1e-7, false), (1e-6, false), (1e-5, false), (1e-4, false), (1e-6, true), (1e-5, true)] {
            let red = model.reduce_to_domain(at(cur + probe))?;
            let back = red.element.inverse();
            // Height interval of the axis inside this tile.
            let centre = g.to_h(back.apply_c(C::zero()));
            let (mut lo, mut hi) = (R::zero(), R::from_f64(f64::INFINITY));
            for &(e1, e2) in &model.octagon.poly.carriers {
                let (w1, w2) = (back.apply_c(e1), back.apply_c(e2));
                // An axis running along a side is bounded by the other sides only.
                if (cabs(w1 - axis.0) + cabs(w2 - axis.1)).to_f64().min((cabs(w1 - axis.1) + cabs(w2 - axis.0)).to_f64()) < tol {
                    continue;
                }
                let (p1, p2) = (g.boundary(w1), g.boundary(w2));
                if p1 * p2 >= R::zero() {
                    continue;
                }
                let y2 = -(p1 * p2);
                let mid = (p1 + p2) / R::from_f64(2.0);
                let rad = (p1 - p2).abs() / R::from_f64(2.0);
                let below = (centre - c(mid, R::zero())).norm_sqr() < rad * rad;
                let t = param(y2);
                if below {
                    if y2 < hi && (!lenient || t > cur + probe) {
                        hi = y2;
                    }
                } else if y2 > lo && (!lenient || t < cur + probe) {
                    lo = y2;
                }
            }
            let (a, b) = (param(lo), param(hi));
            // The tile must also start at `cur`, or crossings in a skipped tile would be lost.
            if b > cur && b.is_finite() && a <= cur + 1e-6 {
                found = Some((back, a, b));
                break;
            }
        }
        let Some((back, a, b)) = found else {
            return Err(Error::Ambiguity(format!("tile march stalled at parameter {cur}")));
        };
        for &(e1, e2) in lines {
            let (w1, w2) = (back.apply_c(e1), back.apply_c(e2));
            let same = (cabs(w1 - axis.0) + cabs(w2 - axis.1)).to_f64().min((cabs(w1 - axis.1) + cabs(w2 - axis.0)).to_f64()) < tol;
            if same {
                continue;
            }
            let Some(x) = g.crossing(w1, w2) else { continue };
            let t = param(x.y2);
            // Crossings on a tile boundary show up in both tiles, within vertex tolerance.
            if t < a - vtol || t > b + vtol || t < t_lo - tol || t > t_hi + tol {
                continue;
            }
            let dup = events.iter().rev().take(64).any(|e| {
                (e.t - t).abs() < vtol && (cabs(e.u - w1) + cabs(e.v - w2)).to_f64().min((cabs(e.u - w2) + cabs(e.v - w1)).to_f64()) < tol
            });
            if !dup {
                events.push(LiftEvent { t, u: w1, v: w2 });
            }
        }
        cur = b;
    }
    events.sort_by(|x, y| x.t.total_cmp(&y.t));
    Ok(events)
}

/// Axis of `m` conjugated so that the point at parameter `t` lands in the domain, together
/// with the height of that point in the new frame.
fn recentre<R: Real>(model: &Bolza<R>, m: &Isometry<R>, y0: R, t: f64) -> Result<(Isometry<R>, R)> {
    let (u, v) = m.fixed_points_unchecked();
    let g = Frame::new(u, v);
    let z = g.point_at(y0 * R::from_f64(t).exp());
    let red = model.reduce_to_domain(z)?;
    let m2 = m.conjugate_by(&red.element);
    let (u2, v2) = m2.fixed_points_unchecked();
    let y = g_height(&Frame::new(u2, v2), red.point);
    Ok((m2, y))
}

fn g_height<R: Real>(f: &Frame<R>, z: C<R>) -> R {
    f.to_h(z).im
}

/// `|p^-1(S) meets the lift| - 1` for a fundamental path lift starting on a lifted line of
/// `S` away from its vertices. Computed by marching through tiles along the axis, without
/// reference to cutting sequences.
pub fn lift_count<R: Real>(model: &Bolza<R>, c: &CurveClass, s: &CurveSystem) -> Result<usize> {
    lift_count_at(model, c, s, 0.5)
}

/// [`lift_count`] with the path start at fraction `frac` of the widest crossing gap.
pub fn lift_count_at<R: Real>(model: &Bolza<R>, c: &CurveClass, s: &CurveSystem, frac: f64) -> Result<usize> {
    if s.contains(&c.word) {
        return Err(Error::Domain(format!("{} is a member of {}", c.word, s.name)));
    }
    let lines = lines_meeting_domain(model, s)?;
    lift_count_with(model, &c.word, &lines, frac)?
        .ok_or_else(|| Error::Ambiguity(format!("{}: no crossing with {} on one period", c.word, s.name)))
}

/// Self-intersection number from the lifts of `c` crossing one fundamental path of its own
/// axis: every double point is met twice per period. `frac` in (0, 1) places the start of
/// the path inside the widest gap between consecutive crossings.
pub fn self_intersection_by_lifts<R: Real>(model: &Bolza<R>, c: &CurveClass, frac: f64) -> Result<usize> {
    let own = CurveSystem { name: "self".into(), names: vec![c.word.to_string()], classes: vec![c.clone()], expected: 1 };
    let lines = lines_meeting_domain(model, &own)?;
    let n = lift_count_with(model, &c.word, &lines, frac)?.unwrap_or(0);
    if n % 2 != 0 {
        return Err(Error::Ambiguity(format!("{}: odd number {n} of self-crossings on one period", c.word)));
    }
    Ok(n / 2)
}

fn lift_count_with<R: Real>(model: &Bolza<R>, word: &Word, lines: &[(C<R>, C<R>)], frac: f64) -> Result<Option<usize>> {
    let m = model.eval(word);
    let len = m.translation_length_unchecked().to_f64();
    let tol = model.cfg.tol.merge;
    // Start near the origin so that one period stays well conditioned.
    let (u, v) = m.fixed_points_unchecked();
    let f = Frame::new(u, v);
    // The foot of the perpendicular from the origin sits at height |w(0)|.
    let y_foot = cabs(f.to_h(C::zero()));
    let (m1, y1) = recentre(model, &m, y_foot, 0.0)?;
    let (u1, v1) = m1.fixed_points_unchecked();
    let ev = march(model, lines, (u1, v1), y1, -len / 2.0, len / 2.0)?;
    // Start the fundamental path between two crossing points, away from every line.
    let groups = group_events(&ev, tol);
    // Widest gap in one period, wrapping around, so the start stays clear of close pairs.
    let first = match groups.first() {
        Some(g) => g.0,
        None => return Ok(None),
    };
    let (g0, gap) = groups
        .iter()
        .zip(groups.iter().skip(1).map(|h| h.0).chain([first + len]))
        .map(|(g, h)| (g.0, h - g.0))
        .fold((first, 0.0), |best, c| if c.1 > best.1 { c } else { best });
    let s0 = g0 + frac * gap;
    // Centre the fundamental path [s0, s0 + len] on the domain and count its crossings.
    let (m2, y2) = recentre(model, &m1, y1, s0 + len / 2.0)?;
    let (u2, v2) = m2.fixed_points_unchecked();
    let ev = march(model, lines, (u2, v2), y2, -len / 2.0, len / 2.0)?;
    let near_ends = ev.iter().filter(|e| (e.t.abs() - len / 2.0).abs() < 1e-6).count();
    if near_ends != 0 {
        return Err(Error::Ambiguity(format!("{word}: fundamental path endpoint lies on a line")));
    }
    Ok(Some(ev.len()))
}

/// Crossing parameters with the number of lines through each point.
fn group_events<R: Real>(ev: &[LiftEvent<R>], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for e in ev {
        match out.last_mut() {
            Some(g) if (e.t - g.0).abs() <= tol => g.1 += 1,
            _ => out.push((e.t, 1)),
        }
    }
    out
}

/// A simple non-systolic class with its intersections against the two systolic halves.
#[derive(Debug, Clone, Serialize)]
pub struct SweptClass {
    pub class: CurveClass,
    pub omega1: usize,
    pub omega2: usize,
    /// Every crossing with the first quadruple sits at a crossing of two of its members.
    pub omega1_vertex_only: bool,
}

impl SweptClass {
    pub fn sys(&self) -> usize {
        self.omega1 + self.omega2
    }
}

/// Simple non-systolic classes of a certified search, with their system intersections.
#[derive(Debug, Clone, Serialize)]
pub struct Sweep {
    pub max_length: f64,
    /// Cutting-sequence bound when the search was cut by crossings rather than saturated.
    pub crossing_bound: Option<usize>,
    pub certified: bool,
    /// Number of classes examined (all primitive classes of the search).
    pub scanned: usize,
    pub classes: Vec<SweptClass>,
}

impl Sweep {
    /// Whether every simple class with `i(c, Sys) <= k` is guaranteed to be present.
    pub fn covers(&self, k: usize) -> bool {
        self.certified && k as f64 * (systole_length() / 2.0) <= self.max_length + 1e-12 && self.crossing_bound.is_none_or(|b| k <= b)
    }
}

fn sweep_classes<R: Real>(model: &Bolza<R>, systems: &Systems, classes: Vec<CurveClass>, exec: Exec) -> Result<Vec<SweptClass>> {
    let o1 = PreparedSystem::new(model, &systems.omega1)?;
    let o2 = PreparedSystem::new(model, &systems.omega2)?;
    let todo: Vec<CurveClass> = classes.into_iter().filter(|c| c.simple && !systems.sys.contains(&c.word)).collect();
    let walker = Walker::new(model);
    par::map(exec, todo, |c| {
        let ch = chords_of_word(&walker, &c.word)?;
        let a = intersection_with_chords(model, &c.word, &ch, &o1)?;
        let b = intersection_with_chords(model, &c.word, &ch, &o2)?;
        Ok(SweptClass { omega1: a.total, omega2: b.total, omega1_vertex_only: a.vertex_only, class: c })
    })
    .into_iter()
    .collect()
}

/// All simple classes up to `max_length` from the saturated enumeration.
pub fn sweep_by_length<R: Real>(model: &Bolza<R>, systems: &Systems, max_length: f64, exec: Exec) -> Result<Sweep> {
    let e = enumerate_classes(model, max_length, SearchOptions { exec, ..SearchOptions::default() })?;
    let scanned = e.classes.len();
    let classes = sweep_classes(model, systems, e.classes, exec)?;
    Ok(Sweep { max_length, crossing_bound: None, certified: e.saturated, scanned, classes })
}

/// All simple classes with at most `k` crossings with the systolic set. Every octagon side
/// lies on a systole and a vertex passage crosses all four lines there, so the cutting
/// sequence of such a class has at most `k` letters; its length is at most
/// `k arccosh(1 + sqrt 2)`. Both bounds prune the search.
pub fn sweep_by_crossings<R: Real>(model: &Bolza<R>, systems: &Systems, k: usize, exec: Exec) -> Result<Sweep> {
    let max_length = k as f64 * systole_length() / 2.0 + 1e-9;
    let (words, _, _) = search_words(model, max_length, k, exec);
    let walker = Walker::new(model);
    let classes = par::map(exec, words, |w| class_from_word(model, &walker, w, true)).into_iter().collect::<Result<Vec<_>>>()?;
    let scanned = classes.len();
    let classes = sweep_classes(model, systems, classes, exec)?;
    Ok(Sweep { max_length, crossing_bound: Some(k), certified: true, scanned, classes })
}

/// One row of the complexity table.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexityRow {
    pub k: usize,
    pub t_k: usize,
    pub certified: bool,
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub word: String,
    pub intersections: usize,
    pub length: f64,
    pub separating: bool,
}

/// `T_k(Sys)` for `k = 1..=k_max`: simple non-systolic classes with `i(c, Sys) <= k`.
pub fn complexity_table(sweep: &Sweep, k_max: usize) -> Vec<ComplexityRow> {
    (1..=k_max)
        .map(|k| {
            let witnesses: Vec<Witness> = sweep
                .classes
                .iter()
                .filter(|c| c.sys() <= k)
                .map(|c| Witness {
                    word: c.class.word.to_string(),
                    intersections: c.sys(),
                    length: c.class.length,
                    separating: c.class.separating.unwrap_or(false),
                })
                .collect();
            ComplexityRow { k, t_k: witnesses.len(), certified: sweep.covers(k), witnesses }
        })
        .collect()
}

/// Simple non-systolic classes of the sweep that meet the graph of the first right-angled
/// quadruple only at its vertices: closed chains of vertex-to-vertex diagonals of its
/// right-angled octagons.
pub fn gamma_set(sweep: &Sweep) -> CurveSystem {
    let mut out = CurveSystem { name: "gamma".into(), names: Vec::new(), classes: Vec::new(), expected: 16 };
    for (i, c) in sweep.classes.iter().filter(|c| c.omega1_vertex_only && c.omega1 > 0).enumerate() {
        out.names.push(format!("g{}", i + 1));
        out.classes.push(c.class.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::spectrum::class_from_word;
    use std::sync::OnceLock;

    fn model() -> &'static Bolza<f64> {
        static M: OnceLock<Bolza<f64>> = OnceLock::new();
        M.get_or_init(|| Bolza::new(Config::default()).unwrap())
    }

    fn systems() -> &'static Systems {
        static S: OnceLock<Systems> = OnceLock::new();
        S.get_or_init(|| Systems::load(model()).unwrap())
    }

    fn class(s: &str) -> CurveClass {
        let m = model();
        let wk = Walker::new(m);
        let k = wk.conjugacy_key(&s.parse().unwrap()).unwrap();
        class_from_word(m, &wk, k.word, true).unwrap()
    }

    #[test]
    fn centre_diagonals_meet_at_the_centre_and_the_vertex() {
        let m = model();
        // All octagon vertices are one point of the surface, so two diagonals through the
        // centre meet there as well.
        let r = intersection_number(m, &class("ABcD"), &class("AbCD")).unwrap();
        assert_eq!(r.count, 2);
        assert!(r.vertex_incident.iter().all(|&v| v));
        assert!(r.points.iter().any(|p| p.0.abs() < 1e-12 && p.1.abs() < 1e-12));
        let at_vertex = |p: &(f64, f64)| (0..8).any(|i| {
            let v = m.octagon.vertex(i);
            (p.0 - v.re).abs() < 1e-9 && (p.1 - v.im).abs() < 1e-9
        });
        assert!(r.points.iter().any(at_vertex));
        assert!(intersection_number(m, &class("AC"), &class("AC")).is_err());
    }

    #[test]
    fn symmetric_counts() {
        let m = model();
        let ws = ["A", "AC", "AbD", "AB", "ABc", "AAC"];
        for a in ws {
            for b in ws {
                if a != b {
                    let x = intersection_number(m, &class(a), &class(b)).unwrap().count;
                    let y = intersection_number(m, &class(b), &class(a)).unwrap().count;
                    assert_eq!(x, y, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn lift_count_matches_pairwise_count_on_short_classes() {
        let m = model();
        let s = systems();
        let o1 = PreparedSystem::new(m, &s.omega1).unwrap();
        let sys = PreparedSystem::new(m, &s.sys).unwrap();
        for w in ["AC", "AB", "ABc", "AAC", "AbAC", "ABab", "AAbD"] {
            let c = class(w);
            let i1 = intersection_with_system(m, &c, &o1).unwrap().total;
            let is = intersection_with_system(m, &c, &sys).unwrap().total;
            assert_eq!(lift_count(m, &c, &s.omega1).unwrap(), i1, "{w} omega1");
            assert_eq!(lift_count(m, &c, &s.sys).unwrap(), is, "{w} sys");
        }
    }

    #[test]
    fn second_systoles_against_systoles() {
        let m = model();
        let s = systems();
        let o1 = PreparedSystem::new(m, &s.omega1).unwrap();
        let o2 = PreparedSystem::new(m, &s.omega2).unwrap();
        for c in &s.second.classes {
            let a = intersection_with_system(m, c, &o1).unwrap().total;
            let b = intersection_with_system(m, c, &o2).unwrap().total;
            assert!(a >= 2 && a % 2 == 0, "{} {a}", c.word);
            assert!(b % 2 == 0, "{} {b}", c.word);
        }
    }

    #[test]
    fn members_are_rejected() {
        let m = model();
        let s = systems();
        let sys = PreparedSystem::new(m, &s.sys).unwrap();
        assert!(intersection_with_system(m, &s.omega1.classes[0], &sys).is_err());
        assert!(lift_count(m, &s.omega1.classes[0], &s.sys).is_err());
    }

    #[test]
    fn short_complexity_rows_vanish() {
        let m = model();
        let sw = sweep_by_crossings(m, systems(), 9, Exec::Sequential).unwrap();
        for r in complexity_table(&sw, 9) {
            assert_eq!(r.t_k, 0, "k = {}", r.k);
            assert!(r.certified);
        }
    }

    #[test]
    fn exceptional_curves_meet_the_first_quadruple_at_its_vertices() {
        let m = model();
        let s = systems();
        let o1 = PreparedSystem::new(m, &s.omega1).unwrap();
        let sys = PreparedSystem::new(m, &s.sys).unwrap();
        assert_eq!(o1.vertices.len(), 4);
        for (w, inside, total) in [("AC", true, 10), ("Abb", true, 12), ("AbAcD", true, 12), ("BD", false, 10), ("AbCbD", false, 12)] {
            let c = class(w);
            let a = intersection_with_system(m, &c, &o1).unwrap();
            assert_eq!(a.vertex_only, inside, "{w}");
            assert_eq!(intersection_with_system(m, &c, &sys).unwrap().total, total, "{w}");
            assert_eq!(lift_count(m, &c, &s.sys).unwrap(), total, "{w}");
        }
    }
}
