//! Cutting sequences: the ordered list of octagon sides crossed by the axis of a
//! hyperbolic element over one period. Axes through vertices or along sides are
//! resolved by pushing the axis infinitesimally to its left, which makes the
//! sequence a conjugacy invariant of the oriented class.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hyp::{c, cabs, Frame, Isometry, C};
use crate::model::{letter_side, side_letter, Bolza};
use crate::real::Real;
use crate::word::{min_rotation, CyclicKey, Letter, Word};

/// Crossing of the axis with a side carrier, in the frame of the axis.
#[derive(Debug, Clone, Copy)]
pub struct Key<R: Real> {
    pub y2: R,
    pub psum: R,
}

/// One tile traversed by the axis, in the coordinates of the fundamental octagon.
#[derive(Debug, Clone)]
pub struct Visit<R: Real> {
    /// Axis endpoints pulled back into the octagon: repelling, attracting.
    pub u: C<R>,
    pub v: C<R>,
    pub entry: usize,
    pub exit: usize,
    pub key_in: Key<R>,
    pub key_out: Key<R>,
    /// Tile element: the visit happens in `tile * F`.
    pub tile: Isometry<R>,
}

impl<R: Real> Visit<R> {
    pub fn frame(&self) -> Frame<R> {
        Frame::new(self.u, self.v)
    }

    pub fn point_in(&self) -> C<R> {
        self.frame().point_at(self.key_in.y2.sqrt())
    }

    pub fn point_out(&self) -> C<R> {
        self.frame().point_at(self.key_out.y2.sqrt())
    }

    /// Whether the chord has zero length (a push-left detour around a vertex).
    pub fn is_degenerate(&self, tie: f64) -> bool {
        (self.key_out.y2 - self.key_in.y2).to_f64() <= tie * self.key_out.y2.to_f64()
    }
}

/// Cutting sequence of the primitive root of a hyperbolic element.
#[derive(Debug, Clone)]
pub struct Walk<R: Real> {
    pub letters: Vec<Letter>,
    pub visits: Vec<Visit<R>>,
    /// `element = root^power` up to conjugacy.
    pub power: usize,
    /// Whether any vertex tie was resolved during the walk.
    pub ties: bool,
}

impl<R: Real> Walk<R> {
    pub fn word(&self) -> Word {
        Word::new(self.letters.iter().copied())
    }
}

/// Geometry of the octagon sides used by the walk.
pub struct Walker<'a, R: Real> {
    pub model: &'a Bolza<R>,
    carriers: [(C<R>, C<R>); 8],
    tie: R,
    coincide: R,
    step_cap: usize,
}

impl<'a, R: Real> Walker<'a, R> {
    pub fn new(model: &'a Bolza<R>) -> Self {
        let carriers = std::array::from_fn(|s| model.octagon.poly.carriers[s]);
        Walker {
            model,
            carriers,
            tie: R::from_f64(model.cfg.tol.merge),
            coincide: R::from_f64(model.cfg.tol.vertex),
            step_cap: 100_000,
        }
    }

    /// Key order with the push-left tie break.
    #[inline]
    pub fn cmp_keys(&self, a: &Key<R>, b: &Key<R>) -> Ordering {
        let m = a.y2.max(b.y2);
        if (a.y2 - b.y2).abs() <= self.tie * m {
            // Lines through a common point: ascending cot(angle), i.e. descending psum.
            b.psum.partial_cmp(&a.psum).unwrap_or(Ordering::Equal)
        } else {
            a.y2.partial_cmp(&b.y2).unwrap_or(Ordering::Equal)
        }
    }

    #[inline]
    fn is_tie(&self, a: &Key<R>, b: &Key<R>) -> bool {
        (a.y2 - b.y2).abs() <= self.tie * a.y2.max(b.y2)
    }

    /// Whether side `s` carries the axis itself.
    #[inline]
    fn coincident(&self, s: usize, u: C<R>, v: C<R>) -> bool {
        let (e1, e2) = self.carriers[s];
        let d1 = cabs(e1 - u) + cabs(e2 - v);
        let d2 = cabs(e1 - v) + cabs(e2 - u);
        d1.min(d2) < self.coincide
    }

    /// Crossing key of side `s` with the frame geodesic, if they cross transversally.
    #[inline]
    pub fn side_key(&self, f: &Frame<R>, s: usize) -> Option<Key<R>> {
        if self.coincident(s, f.u, f.v) {
            return None;
        }
        let (e1, e2) = self.carriers[s];
        f.crossing(e1, e2).map(|x| Key { y2: x.y2, psum: x.psum })
    }

    /// Whether the octagon lies below (before) the crossing with side `s`.
    #[inline]
    fn octagon_below(&self, f: &Frame<R>, s: usize) -> bool {
        let (e1, e2) = self.carriers[s];
        let p1 = f.boundary(e1);
        let p2 = f.boundary(e2);
        let two = R::from_f64(2.0);
        let cc = (p1 + p2) / two;
        let rr = (p1 - p2).abs() / two;
        let w0 = f.to_h(C::zero());
        (w0 - c(cc, R::zero())).norm_sqr() < rr * rr
    }

    /// Next side crossed after the crossing `after`.
    pub fn exit_side(&self, f: &Frame<R>, entry: usize, after: &Key<R>) -> Option<(usize, Key<R>, bool)> {
        let mut best: Option<(usize, Key<R>)> = None;
        let mut tie = false;
        for s in 0..8 {
            if s == entry {
                continue;
            }
            let Some(k) = self.side_key(f, s) else { continue };
            if self.cmp_keys(&k, after) != Ordering::Greater {
                continue;
            }
            match best {
                Some((_, bk)) if self.cmp_keys(&k, &bk) != Ordering::Less => {}
                _ => best = Some((s, k)),
            }
        }
        if let Some((_, bk)) = best {
            tie = self.is_tie(&bk, after);
        }
        best.map(|(s, k)| (s, k, tie))
    }

    /// Entry of the axis into the octagon: the last entering crossing, if the chord is proper.
    fn chord(&self, f: &Frame<R>) -> Option<(usize, Key<R>, usize, Key<R>)> {
        let mut entry: Option<(usize, Key<R>)> = None;
        let mut exit: Option<(usize, Key<R>)> = None;
        for s in 0..8 {
            let Some(k) = self.side_key(f, s) else { continue };
            if self.octagon_below(f, s) {
                if exit.is_none_or(|(_, e)| self.cmp_keys(&k, &e) == Ordering::Less) {
                    exit = Some((s, k));
                }
            } else if entry.is_none_or(|(_, e)| self.cmp_keys(&k, &e) == Ordering::Greater) {
                entry = Some((s, k));
            }
        }
        let ((es, ek), (xs, xk)) = (entry?, exit?);
        if self.cmp_keys(&ek, &xk) != Ordering::Less {
            return None;
        }
        Some((es, ek, xs, xk))
    }

    /// Locates a tile in which the axis `u -> v` has a proper chord, keeping the axis on
    /// the octagon's left when it runs along a side. Returns the tile's word and entry side.
    fn start(&self, u: C<R>, v: C<R>) -> Result<(Word, usize)> {
        let gf = Frame::new(u, v);
        let y0 = cabs(gf.to_h(C::zero()));
        for k in 0..64 {
            let shift = R::from_f64(0.0917 * k as f64).exp();
            let z = gf.point_at(y0 * shift);
            let red = self.model.reduce_to_domain(z)?;
            let mut tile = red.word.inverse();
            let mut lu = red.element.apply_c(u);
            let mut lv = red.element.apply_c(v);
            lu = lu / cabs(lu);
            lv = lv / cabs(lv);
            // If the axis runs along a side with the octagon on its right, step across.
            for s in 0..8 {
                if self.coincident(s, lu, lv) {
                    let f = Frame::new(lu, lv);
                    if f.to_h(C::zero()).re > R::zero() {
                        let l = side_letter(s);
                        tile = tile.concat(&Word::new([l]));
                        let gi = self.model.gens[l as usize].inverse();
                        lu = gi.apply_c(lu);
                        lv = gi.apply_c(lv);
                        lu = lu / cabs(lu);
                        lv = lv / cabs(lv);
                    }
                    break;
                }
            }
            let f = Frame::new(lu, lv);
            if let Some((es, ek, _, xk)) = self.chord(&f) {
                let ratio = (xk.y2 / ek.y2).to_f64();
                if ratio > 1.0 + 1e-6 {
                    return Ok((tile, es));
                }
            }
        }
        Err(Error::Ambiguity("no proper chord found along the axis".into()))
    }

    /// Walks one period of the primitive root of the class of `w`.
    ///
    /// The element seen from each tile is re-evaluated from its Dehn-reduced word: updating
    /// it by conjugation, or pulling the endpoints back, amplifies rounding errors by the
    /// generator norms at every step.
    pub fn walk(&self, w: &Word) -> Result<Walk<R>> {
        let pres = &self.model.pres;
        let w = pres.cyclic_dehn_reduce(w);
        let m = self.model.eval(&w);
        let tau = self.model.cfg.tol.merge;
        let (u, v) = m.fixed_points(tau)?;
        let (t0, e0) = self.start(u, v)?;
        let mut tile = self.model.eval(&t0);
        let mut wj = pres.dehn_reduce(&w.conjugate(&t0.inverse()));
        let (u0, v0) = self.model.eval(&wj).fixed_points_unchecked();
        let (mut lu, mut lv) = (u0, v0);
        let mut entry = e0;
        let mut key_in = self
            .side_key(&Frame::new(u0, v0), e0)
            .ok_or_else(|| Error::Ambiguity("lost the entry crossing".into()))?;
        let mut letters = Vec::new();
        let mut visits = Vec::new();
        let mut ties = false;
        for _ in 0..self.step_cap {
            let f = Frame::new(lu, lv);
            let (exit, key_out, tie) = self
                .exit_side(&f, entry, &key_in)
                .ok_or_else(|| Error::Ambiguity(format!("axis of {w} has no exit from a tile")))?;
            ties |= tie;
            visits.push(Visit { u: lu, v: lv, entry, exit, key_in, key_out, tile });
            let l = side_letter(exit);
            letters.push(l);
            tile = tile * self.model.gens[l as usize];
            let lw = Word::new([l]);
            wj = pres.dehn_reduce(&lw.inverse().concat(&wj).concat(&lw));
            (lu, lv) = self.model.eval(&wj).fixed_points_unchecked();
            entry = (exit + 4) % 8;
            key_in = self
                .side_key(&Frame::new(lu, lv), entry)
                .ok_or_else(|| Error::Ambiguity(format!("axis of {w} lost its entry crossing")))?;
            if entry == e0 && cabs(lu - u0).to_f64() + cabs(lv - v0).to_f64() < 1e3 * self.coincide.to_f64() {
                let root = Word::new(letters.iter().copied());
                let lr = self.model.eval(&root).translation_length_unchecked().to_f64();
                let lm = m.translation_length_unchecked().to_f64();
                let power = (lm / lr).round().max(1.0) as usize;
                if ((power as f64) * lr - lm).abs() > 1e-6 * lm.max(1.0) {
                    return Err(Error::Ambiguity(format!("walk period of {w} does not divide its length")));
                }
                return Ok(Walk { letters, visits, power, ties });
            }
        }
        Err(Error::NonTermination { iterations: self.step_cap })
    }

    /// Checks that `letters` is the cutting sequence of `m` read from the fundamental
    /// octagon, entering through the side opposite to the last letter. Returns whether a
    /// vertex tie occurred, or `None` when the sequence is not the cutting sequence.
    pub fn cutting_sequence_ties(&self, m: &Isometry<R>, letters: &[Letter]) -> Option<bool> {
        let &last = letters.last()?;
        let (u, v) = m.fixed_points_unchecked();
        let mut entry = (letter_side(last) + 4) % 8;
        let f = Frame::new(u, v);
        let mut key = self.side_key(&f, entry)?;
        // The claimed entry must be the real one: entering, and the last such crossing.
        if self.octagon_below(&f, entry) {
            return None;
        }
        for s in 0..8 {
            if s == entry {
                continue;
            }
            if let Some(k) = self.side_key(&f, s) {
                if !self.octagon_below(&f, s) && self.cmp_keys(&k, &key) == Ordering::Greater {
                    return None;
                }
            }
        }
        let mut ties = false;
        let (mut lu, mut lv) = (u, v);
        let n = letters.len();
        for (j, &l) in letters.iter().enumerate() {
            let f = Frame::new(lu, lv);
            let (exit, _, tie) = self.exit_side(&f, entry, &key)?;
            if exit != letter_side(l) {
                return None;
            }
            ties |= tie;
            // The element seen from the next tile is a rotation of the sequence itself.
            let mut mj = Isometry::identity();
            for k in 0..n {
                mj = mj * self.model.gens[letters[(j + 1 + k) % n] as usize];
            }
            (lu, lv) = mj.fixed_points_unchecked();
            entry = (exit + 4) % 8;
            key = self.side_key(&Frame::new(lu, lv), entry)?;
        }
        Some(ties)
    }

    /// Canonical key of the unoriented class of `w`, with the walk realizing it.
    pub fn key_with_walk(&self, w: &Word) -> Result<(CyclicKey, Walk<R>)> {
        let fwd = self.walk(w)?;
        let rev = self.walk(&w.inverse())?;
        let kf = min_rotation(&fwd.letters);
        let kr = min_rotation(&rev.letters);
        let (k, reversed, wk) = if kr < kf { (kr, true, rev) } else { (kf, false, fwd) };
        let base = Word::new(k.iter().copied());
        Ok((CyclicKey { word: base.pow(wk.power), reversed }, wk))
    }

    /// Canonical key of the class of a word; the identity is rejected.
    pub fn conjugacy_key(&self, w: &Word) -> Result<CyclicKey> {
        if self.model.pres.cyclic_dehn_reduce(w).is_empty() {
            return Err(Error::Domain("the identity has no conjugacy key".into()));
        }
        Ok(self.key_with_walk(w)?.0)
    }
}
