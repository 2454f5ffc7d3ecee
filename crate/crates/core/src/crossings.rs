//! Crossings between closed geodesics, counted on the quotient. Each closed geodesic is
//! represented by its chords in the fundamental octagon, one per tile of its cutting
//! sequence; a crossing on the octagon boundary shows up in several tiles and is merged
//! by its canonical point and the pair of strand directions there.

use crate::error::Result;
use crate::hyp::{arg, cabs, direction_on, Frame, C};
use crate::model::Bolza;
use crate::real::Real;
use crate::walk::{Walk, Walker};

/// Chord of a closed geodesic inside the fundamental octagon.
#[derive(Debug, Clone, Copy)]
pub struct Chord<R: Real> {
    pub frame: Frame<R>,
    pub y2_in: R,
    pub y2_out: R,
}

impl<R: Real> Chord<R> {
    pub fn endpoints(&self) -> (C<R>, C<R>) {
        (self.frame.point_at(self.y2_in.sqrt()), self.frame.point_at(self.y2_out.sqrt()))
    }
}

pub fn chords_of<R: Real>(walk: &Walk<R>) -> Vec<Chord<R>> {
    walk.visits
        .iter()
        .map(|v| Chord { frame: v.frame(), y2_in: v.key_in.y2, y2_out: v.key_out.y2 })
        .collect()
}

/// Chords of the closed geodesic of `m` (the primitive root's).
pub fn chords_of_word<R: Real>(walker: &Walker<'_, R>, w: &crate::word::Word) -> Result<Vec<Chord<R>>> {
    Ok(chords_of(&walker.walk(w)?))
}

/// A crossing point on the quotient with the two strand directions (mod pi) there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// Canonical representative in the closed octagon.
    pub point: (f64, f64),
    pub dirs: (f64, f64),
    pub on_boundary: bool,
}

fn within<R: Real>(y2: R, lo: R, hi: R, tol: R) -> bool {
    y2 >= lo - tol * lo && y2 <= hi + tol * hi
}

fn coincident<R: Real>(a: &Frame<R>, b: &Frame<R>, tol: f64) -> bool {
    let d1 = cabs(a.u - b.u) + cabs(a.v - b.v);
    let d2 = cabs(a.u - b.v) + cabs(a.v - b.u);
    d1.min(d2).to_f64() < tol
}

fn dir_mod_pi(d: f64) -> f64 {
    let t = d.rem_euclid(std::f64::consts::PI);
    if std::f64::consts::PI - t < 1e-9 {
        0.0
    } else {
        t
    }
}

/// Crossing of two chords inside the closed octagon.
pub fn chord_crossing<R: Real>(a: &Chord<R>, b: &Chord<R>, tol: f64) -> Option<C<R>> {
    chord_crossing_heights(a, b, tol).map(|x| x.0)
}

/// Crossing point of two chords with its squared height on each frame.
pub fn chord_crossing_heights<R: Real>(a: &Chord<R>, b: &Chord<R>, tol: f64) -> Option<(C<R>, R, R)> {
    if coincident(&a.frame, &b.frame, tol) {
        return None;
    }
    let t = R::from_f64(tol);
    let xa = a.frame.crossing(b.frame.u, b.frame.v)?;
    if !within(xa.y2, a.y2_in, a.y2_out, t) {
        return None;
    }
    let xb = b.frame.crossing(a.frame.u, a.frame.v)?;
    if !within(xb.y2, b.y2_in, b.y2_out, t) {
        return None;
    }
    Some((a.frame.point_at(xa.y2.sqrt()), xa.y2, xb.y2))
}

/// Whether `z` is strictly inside the octagon, away from the boundary by more than `tol`.
fn strictly_inside<R: Real>(model: &Bolza<R>, z: C<R>, tol: f64) -> bool {
    model.octagon.poly.carriers.iter().all(|&(u, v)| {
        let w = Frame::new(u, v).to_h(z);
        w.re.to_f64() < -tol * (1.0 + cabs(w).to_f64())
    })
}

/// Deduplicated crossings of two chord families (`b = None`: self-crossings of `a`).
pub fn crossings<R: Real>(model: &Bolza<R>, a: &[Chord<R>], b: Option<&[Chord<R>]>) -> Vec<Crossing> {
    let tol = model.cfg.tol.merge;
    let mut found = Vec::new();
    let mut push = |ca: &Chord<R>, cb: &Chord<R>, symmetric: bool| {
        let Some(z) = chord_crossing(ca, cb, tol) else { return };
        if strictly_inside(model, z, tol) {
            let (da, db) = (arg(direction_on(ca.frame.u, ca.frame.v, z)).to_f64(), arg(direction_on(cb.frame.u, cb.frame.v, z)).to_f64());
            let (x, y) = (z.re.to_f64(), z.im.to_f64());
            let mut dirs = (dir_mod_pi(da), dir_mod_pi(db));
            if symmetric && dirs.0 > dirs.1 {
                dirs = (dirs.1, dirs.0);
            }
            found.push(Crossing { point: (x, y), dirs, on_boundary: false });
            return;
        }
        let (w, g) = model.canonical_in_domain(z);
        let dg = g.derivative(z);
        let da = arg(dg * direction_on(ca.frame.u, ca.frame.v, z)).to_f64();
        let db = arg(dg * direction_on(cb.frame.u, cb.frame.v, z)).to_f64();
        let mut dirs = (dir_mod_pi(da), dir_mod_pi(db));
        if symmetric && dirs.0 > dirs.1 {
            dirs = (dirs.1, dirs.0);
        }
        found.push(Crossing { point: (w.re.to_f64(), w.im.to_f64()), dirs, on_boundary: true });
    };
    match b {
        None => {
            for i in 0..a.len() {
                for j in i + 1..a.len() {
                    push(&a[i], &a[j], true);
                }
            }
        }
        Some(b) => {
            for ca in a {
                for cb in b {
                    push(ca, cb, false);
                }
            }
        }
    }
    // Points and directions are stored in f64, so the merge radius cannot go below its resolution.
    dedupe(found, model.cfg.tol.vertex.max(1e-9))
}

fn close(a: &Crossing, b: &Crossing, tol: f64) -> bool {
    let ang = |x: f64, y: f64| {
        let d = (x - y).abs();
        d.min(std::f64::consts::PI - d)
    };
    (a.point.0 - b.point.0).abs() < tol
        && (a.point.1 - b.point.1).abs() < tol
        && ang(a.dirs.0, b.dirs.0) < tol
        && ang(a.dirs.1, b.dirs.1) < tol
}

fn dedupe(mut v: Vec<Crossing>, tol: f64) -> Vec<Crossing> {
    let mut out: Vec<Crossing> = Vec::with_capacity(v.len());
    v.sort_by(|a, b| a.point.partial_cmp(&b.point).unwrap());
    for c in v {
        if !c.on_boundary || !out.iter().rev().take_while(|o| (o.point.0 - c.point.0).abs() < tol).any(|o| o.on_boundary && close(o, &c, tol)) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::word::Word;
    use std::sync::OnceLock;

    fn model() -> &'static Bolza<f64> {
        static M: OnceLock<Bolza<f64>> = OnceLock::new();
        M.get_or_init(|| Bolza::new(Config::default()).unwrap())
    }

    fn chords(s: &str) -> Vec<Chord<f64>> {
        let m = model();
        let w: Word = s.parse().unwrap();
        chords_of_word(&Walker::new(m), &w).unwrap()
    }

    #[test]
    fn generators_are_simple() {
        let m = model();
        for s in ["A", "B", "C", "D"] {
            assert!(crossings(m, &chords(s), None).is_empty(), "{s}");
        }
    }

    #[test]
    fn diameters_cross_once_at_center() {
        let m = model();
        let x = crossings(m, &chords("A"), Some(&chords("B")));
        assert_eq!(x.len(), 1);
        assert!(x[0].point.0.abs() < 1e-12 && x[0].point.1.abs() < 1e-12);
        let y = crossings(m, &chords("B"), Some(&chords("A")));
        assert_eq!(y.len(), 1);
    }
}
