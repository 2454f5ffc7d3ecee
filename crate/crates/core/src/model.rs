//! The Bolza group: generators, fundamental octagon, point reduction,
//! the normalizing isometries R, L, J and the Weierstrass points.

use num_traits::Zero;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::hyp::{c, cabs, cis, cosh_distance, direction, sinh_half_distance, ConvexPolygon, Isometry, C};
use crate::quad::QuadInt;
use crate::real::Real;
use crate::word::{generator, inv, is_inverse, Letter, Presentation, Word, NUM_LETTERS};

/// Side of the fundamental octagon crossed when moving from `F` to `g_l F`.
#[inline]
pub fn letter_side(l: Letter) -> usize {
    generator(l) + if is_inverse(l) { 4 } else { 0 }
}

/// Letter whose tile lies across side `s` of the fundamental octagon.
#[inline]
pub fn side_letter(s: usize) -> Letter {
    if s < 4 {
        (2 * s) as Letter
    } else {
        (2 * (s - 4) + 1) as Letter
    }
}

/// Regular octagon with interior angles pi/4 centered at the origin.
/// Polygon vertex `i` sits at angle `(2i - 1) pi / 8`, so side `i` has its midpoint at angle `i pi / 4`.
#[derive(Debug, Clone)]
pub struct Octagon<R: Real> {
    pub poly: ConvexPolygon<R>,
    pub vertex_radius: R,
    pub midpoint_radius: R,
}

impl<R: Real> Octagon<R> {
    pub fn new() -> Self {
        let sqrt2 = R::sqrt2();
        let vertex_radius = (sqrt2 / R::from_f64(2.0)).sqrt();
        let midpoint_radius = (sqrt2 - R::one()).sqrt();
        let eighth = R::pi() / R::from_f64(8.0);
        let vertices = (0..8).map(|i| cis(eighth * R::from_i64(2 * i - 1)) * vertex_radius).collect();
        Octagon { poly: ConvexPolygon::new(vertices), vertex_radius, midpoint_radius }
    }

    pub fn vertex(&self, i: usize) -> C<R> {
        self.poly.vertices[i % 8]
    }

    pub fn midpoint(&self, s: usize) -> C<R> {
        cis(R::pi() / R::from_f64(4.0) * R::from_i64(s as i64)) * self.midpoint_radius
    }

    /// Interior angle at polygon vertex `i`.
    pub fn interior_angle(&self, i: usize) -> R {
        let v = self.vertex(i);
        let a = direction(v, self.vertex(i + 1));
        let b = direction(v, self.vertex(i + 7));
        let cr = a.conj() * b;
        cr.im.atan2(cr.re).abs()
    }

    pub fn side_length(&self, s: usize) -> R {
        crate::hyp::distance(
            crate::hyp::DiscPoint { z: self.vertex(s) },
            crate::hyp::DiscPoint { z: self.vertex(s + 1) },
        )
    }
}

impl<R: Real> Default for Octagon<R> {
    fn default() -> Self {
        Self::new()
    }
}

/// Result of reducing a point into the closed fundamental octagon.
#[derive(Debug, Clone)]
pub struct Reduced<R: Real> {
    pub point: C<R>,
    /// Group element with `element * p = point`.
    pub element: Isometry<R>,
    pub word: Word,
}

/// Generator matrix `g_k`, optionally perturbed for negative-control runs.
fn generator_matrix<R: Real>(k: usize, perturb: f64) -> Isometry<R> {
    let a = R::one() + R::sqrt2();
    let alpha = (R::from_f64(2.0) + R::from_f64(2.0) * R::sqrt2()).sqrt();
    let phase = cis(R::pi() / R::from_f64(4.0) * R::from_i64(k as i64));
    let b = phase * (alpha + if k == 0 { R::from_f64(perturb) } else { R::zero() });
    Isometry::new(c(a, R::zero()), b)
}

/// Searches all arrangements of the eight letters for a cyclically reduced product equal to +-I
/// and returns the shortlex-least one.
pub fn discover_relator(gens: &[Isometry<f64>; 8], tol: f64) -> Option<Word> {
    fn rec(gens: &[Isometry<f64>; 8], used: u8, cur: &mut Vec<Letter>, m: Isometry<f64>, tol: f64, best: &mut Option<Word>) {
        if cur.len() == 8 {
            let w = Word::new(cur.iter().copied());
            if w.len() == 8 && w.is_cyclically_reduced() && m.dist_to_identity() < tol && best.as_ref().is_none_or(|b| w < *b) {
                *best = Some(w);
            }
            return;
        }
        for l in 0..NUM_LETTERS {
            if used & (1 << l) != 0 || cur.last() == Some(&inv(l)) {
                continue;
            }
            cur.push(l);
            rec(gens, used | (1 << l), cur, m * gens[l as usize], tol, best);
            cur.pop();
        }
    }
    let mut best = None;
    rec(gens, 0, &mut Vec::with_capacity(8), Isometry::identity(), tol, &mut best);
    best
}

/// The Bolza surface as the quotient of the disc by the group generated by `g_0..g_3`.
#[derive(Debug, Clone)]
pub struct Bolza<R: Real> {
    pub cfg: Config,
    /// Generator matrices indexed by letter code.
    pub gens: [Isometry<R>; 8],
    pub pres: Presentation,
    pub octagon: Octagon<R>,
    /// Rotation by pi/4 about the center (order 8).
    pub rot: Isometry<R>,
    /// Order-3 rotation about the incenter of a (4,4,4) triangle.
    pub ord3: Isometry<R>,
    /// Central symmetry `z -> -z`, the hyperelliptic involution.
    pub inv: Isometry<R>,
    /// Representatives of the closure of {R, L} modulo the group.
    pub closure: Vec<Isometry<R>>,
    /// Conjugation action of R on letters: `R g_l R^-1 = g_{rot_action[l]}`.
    pub rot_action: [Letter; 8],
    /// Words for `L g_l L^-1`.
    pub ord3_action: Vec<Word>,
    /// Center, the vertex class and the four midpoint classes.
    pub weierstrass: [C<R>; 6],
    /// Group elements whose tiles touch the fundamental octagon (identity excluded).
    pub neighbors: Vec<(Isometry<R>, Word)>,
}

impl<R: Real> Bolza<R> {
    pub fn new(cfg: Config) -> Result<Self> {
        Self::build(cfg, 0.0)
    }

    /// Construction with the off-diagonal entry of `g_0` shifted by `perturb` (negative control).
    pub fn with_perturbation(cfg: Config, perturb: f64) -> Result<Self> {
        Self::build(cfg, perturb)
    }

    fn build(cfg: Config, perturb: f64) -> Result<Self> {
        let mk = |l: Letter| {
            let g = generator_matrix::<R>(generator(l), perturb);
            if is_inverse(l) {
                g.inverse()
            } else {
                g
            }
        };
        let gens: [Isometry<R>; 8] = std::array::from_fn(|l| mk(l as Letter));
        let gens64: [Isometry<f64>; 8] = std::array::from_fn(|l| gens[l].cast());
        let relator = discover_relator(&gens64, 1e-8)
            .ok_or_else(|| Error::Construction("no length-8 relator among the generator arrangements".into()))?;
        let pres = Presentation::new(relator.clone())?;
        let octagon = Octagon::new();

        let mut model = Bolza {
            cfg,
            gens,
            pres,
            octagon,
            rot: Isometry::new(cis(R::pi() / R::from_f64(8.0)), C::zero()),
            ord3: Isometry::identity(),
            inv: Isometry::new(c(R::zero(), R::one()), C::zero()),
            closure: Vec::new(),
            rot_action: [0; 8],
            ord3_action: Vec::new(),
            weierstrass: [C::zero(); 6],
            neighbors: Vec::new(),
        };
        let m = model.eval(&relator);
        let resid = m.dist_to_identity();
        if resid > cfg.tol.identity {
            return Err(Error::Construction(format!("relator {relator} misses the identity by {resid:e}")));
        }
        for l in 0..8 {
            let t = QuadInt::snap(model.gens[l].trace(), cfg.tol.snap)?;
            if t.abs() != QuadInt::new(2, 2) {
                return Err(Error::Construction(format!("generator trace {t} differs from 2+2*sqrt2")));
            }
        }
        model.neighbors = model.compute_neighbors()?;
        model.rot_action = model.compute_rot_action()?;
        model.ord3 = model.construct_ord3();
        model.ord3_action = (0..8).map(|l| model.word_of(&model.gens[l].conjugate_by(&model.ord3))).collect::<Result<_>>()?;
        model.closure = model.compute_closure()?;
        let o = &model.octagon;
        model.weierstrass = [C::zero(), o.vertex(1), o.midpoint(0), o.midpoint(1), o.midpoint(2), o.midpoint(3)];
        Ok(model)
    }

    /// Matrix of a word (left-to-right product).
    pub fn eval(&self, w: &Word) -> Isometry<R> {
        w.letters().iter().fold(Isometry::identity(), |m, &l| m * self.gens[l as usize])
    }

    pub fn relator(&self) -> &Word {
        &self.pres.relator
    }

    /// Greedy descent towards the origin through the side pairings.
    pub fn reduce_to_domain(&self, p: C<R>) -> Result<Reduced<R>> {
        let mut z = p;
        let mut element = Isometry::identity();
        let mut letters: Vec<Letter> = Vec::new();
        let slack = R::from_f64(self.cfg.tol.boundary);
        for _ in 0..self.cfg.reduce_cap {
            let cur = cosh_distance(z, C::zero());
            let mut best: Option<(R, Letter, C<R>)> = None;
            for l in 0..NUM_LETTERS {
                let w = self.gens[l as usize].apply_c(z);
                let d = cosh_distance(w, C::zero());
                if d < cur - slack * cur && best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, l, w));
                }
            }
            match best {
                None => {
                    letters.reverse();
                    return Ok(Reduced { point: z, element, word: Word::new(letters) });
                }
                Some((_, l, w)) => {
                    z = w;
                    element = self.gens[l as usize] * element;
                    letters.push(l);
                }
            }
        }
        Err(Error::NonTermination { iterations: self.cfg.reduce_cap })
    }

    /// Whether `z` lies in the closed fundamental octagon up to `tol` (relative, in cosh distance).
    pub fn in_closed_domain(&self, z: C<R>, tol: f64) -> bool {
        let cur = cosh_distance(z, C::zero());
        let t = R::from_f64(tol);
        self.gens.iter().all(|g| cosh_distance(g.apply_c(z), C::zero()) >= cur - t * cur)
    }

    /// Group word of an element of the group, found by reducing the image of the origin.
    pub fn word_of(&self, h: &Isometry<R>) -> Result<Word> {
        let red = self.reduce_to_domain(h.apply_c(C::zero()))?;
        let m = red.element * *h;
        let scale = 1.0 + h.a.norm_sqr().to_f64();
        let tol = (self.cfg.tol.merge * scale).max(self.cfg.tol.identity);
        if cabs(red.point).to_f64() > tol.sqrt() || m.dist_to_identity() > tol.sqrt() {
            return Err(Error::Domain("isometry is not an element of the group".into()));
        }
        Ok(self.pres.dehn_reduce(&red.word.inverse()))
    }

    /// Whether `h` is an element of the group.
    pub fn contains(&self, h: &Isometry<R>) -> bool {
        self.word_of(h).is_ok()
    }

    fn compute_neighbors(&self) -> Result<Vec<(Isometry<R>, Word)>> {
        let tol = R::from_f64(1e-6);
        let mut out: Vec<(Isometry<R>, Word)> = Vec::new();
        for w in self.pres.enumerate_words(4) {
            let g = self.eval(&w);
            let touches = (0..8).any(|j| {
                let gv = g.apply_c(self.octagon.vertex(j));
                (0..8).any(|i| cabs(gv - self.octagon.vertex(i)) < tol)
            });
            if touches && !out.iter().any(|(h, _)| h.approx_eq(&g, 1e-6)) {
                out.push((g, w));
            }
        }
        if out.len() != 48 {
            return Err(Error::Construction(format!("{} tiles touch the octagon, expected 48", out.len())));
        }
        Ok(out)
    }

    fn compute_rot_action(&self) -> Result<[Letter; 8]> {
        let mut act = [0; 8];
        for l in 0..8 {
            let h = self.gens[l].conjugate_by(&self.rot);
            act[l] = (0..NUM_LETTERS)
                .find(|&m| self.gens[m as usize].approx_eq(&h, 1e-9))
                .ok_or_else(|| Error::Construction("R does not permute the generators".into()))?;
        }
        Ok(act)
    }

    /// Rotation by 2 pi / 3 about the incenter of the triangle (0, m_0, m_1).
    fn construct_ord3(&self) -> Isometry<R> {
        let three = R::from_f64(3.0);
        let ch = (R::one() + R::sqrt2()) / three.sqrt();
        let radius = ((ch - R::one()) / (ch + R::one())).sqrt();
        let center = cis(R::pi() / R::from_f64(8.0)) * radius;
        let t = Isometry::translation_to(center);
        let rot = Isometry::rotation(R::pi() * R::from_f64(2.0) / three);
        t * rot * t.inverse()
    }

    /// Whether `f` and `g` agree modulo the group.
    pub fn same_coset(&self, f: &Isometry<R>, g: &Isometry<R>) -> bool {
        self.contains(&(*f * g.inverse()))
    }

    /// Representative of `f` modulo the group that maps the origin into the octagon.
    fn coset_rep(&self, f: &Isometry<R>) -> Result<Isometry<R>> {
        let red = self.reduce_to_domain(f.apply_c(C::zero()))?;
        Ok(red.element * *f)
    }

    fn compute_closure(&self) -> Result<Vec<Isometry<R>>> {
        let mut elems = vec![Isometry::identity()];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for g in [self.rot, self.ord3] {
                let y = self.coset_rep(&(g * x))?;
                if !elems.iter().any(|e| self.same_coset(e, &y)) {
                    elems.push(y);
                    if elems.len() > 1000 {
                        return Err(Error::Construction("closure of R and L is not finite".into()));
                    }
                }
            }
            i += 1;
        }
        Ok(elems)
    }

    /// Images of a point of the quotient inside the closed octagon, reduced first.
    pub fn domain_images(&self, z: C<R>) -> Result<Vec<C<R>>> {
        let red = self.reduce_to_domain(z)?;
        let mut out = vec![red.point];
        let tol = self.cfg.tol.merge;
        for (g, _) in &self.neighbors {
            let w = g.apply_c(red.point);
            if self.in_closed_domain(w, tol) && out.iter().all(|&o| cosh_distance(o, w).to_f64() - 1.0 > tol * tol) {
                out.push(w);
            }
        }
        Ok(out)
    }

    /// Canonical representative in the closed octagon: the image of least argument.
    pub fn canonical_point(&self, z: C<R>) -> Result<C<R>> {
        let imgs = self.domain_images(z)?;
        let key = |w: &C<R>| {
            if cabs(*w).to_f64() < self.cfg.tol.merge {
                0.0
            } else {
                crate::hyp::arg(*w).to_f64()
            }
        };
        Ok(imgs
            .into_iter()
            .min_by(|a, b| key(a).partial_cmp(&key(b)).unwrap())
            .expect("at least one image"))
    }

    /// Canonical image of a point of the closed octagon, with the element realizing it.
    pub fn canonical_in_domain(&self, z: C<R>) -> (C<R>, Isometry<R>) {
        let tol = self.cfg.tol.merge;
        // Angles are compared in f64, so the wrap-around tolerance cannot go below its epsilon.
        let atol = tol.max(1e-12);
        let key = |w: &C<R>| {
            let a = crate::hyp::arg(*w).to_f64();
            if cabs(*w).to_f64() < tol || a > std::f64::consts::TAU - atol {
                0.0
            } else {
                a
            }
        };
        let mut best = (z, Isometry::identity());
        let mut bk = key(&z);
        for (g, _) in &self.neighbors {
            let w = g.apply_c(z);
            if self.in_closed_domain(w, tol) {
                let k = key(&w);
                if k < bk - atol {
                    best = (w, *g);
                    bk = k;
                }
            }
        }
        best
    }

    /// Distance on the surface between two points, valid below the injectivity radius.
    pub fn quotient_distance(&self, p: C<R>, q: C<R>) -> Result<R> {
        let a = self.reduce_to_domain(p)?.point;
        let b = self.reduce_to_domain(q)?.point;
        let mut best = sinh_half_distance(a, b);
        for (g, _) in &self.neighbors {
            let d = sinh_half_distance(a, g.apply_c(b));
            if d < best {
                best = d;
            }
        }
        Ok(best.asinh() * R::from_f64(2.0))
    }

    /// Weierstrass point index of `z`, if it is one.
    pub fn weierstrass_index(&self, z: C<R>, tol: f64) -> Result<Option<usize>> {
        for (i, &w) in self.weierstrass.iter().enumerate() {
            if self.quotient_distance(z, w)?.to_f64() < tol {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Word of `phi g_w phi^-1` for a normalizing isometry.
    pub fn conjugate_word(&self, phi: &Isometry<R>, w: &Word) -> Result<Word> {
        self.word_of(&self.eval(w).conjugate_by(phi))
    }

    /// Image of a word under R, by letter substitution.
    pub fn rot_word(&self, w: &Word) -> Word {
        Word::new(w.letters().iter().map(|&l| self.rot_action[l as usize]))
    }

    /// Image of a word under J: every letter inverted in place.
    pub fn inv_word(&self, w: &Word) -> Word {
        Word::new(w.letters().iter().map(|&l| inv(l)))
    }

    /// Image of a word under L, by substituting the conjugated generator words.
    pub fn ord3_word(&self, w: &Word) -> Word {
        let mut out = Word::empty();
        for &l in w.letters() {
            out = out.concat(&self.ord3_action[l as usize]);
        }
        self.pres.dehn_reduce(&out)
    }
}

/// Identity check up to sign with an absolute tolerance.
pub fn is_projective_identity<R: Real>(m: &Isometry<R>, tol: f64) -> bool {
    m.dist_to_identity() < tol
}

/// `m^n` by repeated multiplication.
pub fn power<R: Real>(m: &Isometry<R>, n: usize) -> Isometry<R> {
    (0..n).fold(Isometry::identity(), |acc, _| acc * *m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Precision;
    use crate::hyp::{distance, DiscPoint};
    use crate::real::Hp;
    use std::f64::consts::PI;
    use std::sync::OnceLock;

    pub fn model() -> &'static Bolza<f64> {
        static M: OnceLock<Bolza<f64>> = OnceLock::new();
        M.get_or_init(|| Bolza::new(Config::default()).unwrap())
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn relator_is_discovered() {
        let m = model();
        assert_eq!(m.relator().to_string(), "AbCdaBcD");
        assert!(m.eval(m.relator()).dist_to_identity() < 1e-10);
    }

    #[test]
    fn generator_invariants() {
        let m = model();
        for l in 0..8 {
            let g = m.gens[l];
            assert!((g.det() - 1.0).abs() < 1e-12);
            assert!((g.trace().abs() - 2.0 * (1.0 + 2f64.sqrt())).abs() < 1e-12);
        }
        let t = m.gens[0].translation_length(1e-9).unwrap();
        assert!((t - 2.0 * (1.0 + 2f64.sqrt()).acosh()).abs() < 1e-12);
        assert!((t - 3.0571418).abs() < 1e-7);
        // g_0(0) = alpha / (1 + sqrt 2).
        let z = m.gens[0].apply_c(C::zero());
        let alpha = (2.0 + 2.0 * 2f64.sqrt()).sqrt();
        assert!((z.re - alpha / (1.0 + 2f64.sqrt())).abs() < 1e-15 && z.im.abs() < 1e-15);
        // Direct 2x2 multiplication oracle for g_0^2: trace (tr g_0)^2 - 2.
        let g2 = m.gens[0] * m.gens[0];
        let tr = 2.0 * (1.0 + 2f64.sqrt());
        assert!((g2.trace() - (tr * tr - 2.0)).abs() < 1e-12);
        assert!((g2.translation_length(1e-9).unwrap() - 2.0 * t).abs() < 1e-12);
    }

    #[test]
    fn side_pairing() {
        let m = model();
        let o = &m.octagon;
        for s in 0..8 {
            let g = m.gens[side_letter(s) as usize];
            // g maps side s + 4 onto side s, reversing orientation along the boundary.
            let a = g.apply_c(o.vertex(s + 4));
            let b = g.apply_c(o.vertex(s + 5));
            assert!((a - o.vertex(s + 1)).norm() < 1e-12, "side {s}");
            assert!((b - o.vertex(s)).norm() < 1e-12, "side {s}");
            assert_eq!(letter_side(side_letter(s)), s);
        }
    }

    #[test]
    fn octagon_geometry() {
        let o = Octagon::<f64>::new();
        let l2 = 2.0 * (3.0 + 2.0 * 2f64.sqrt()).acosh();
        for i in 0..8 {
            assert!((o.interior_angle(i) - PI / 4.0).abs() < 1e-9);
            assert!((o.side_length(i) - 2.0 * (1.0 + 2f64.sqrt()).acosh()).abs() < 1e-9);
            let dv = distance(DiscPoint::origin(), DiscPoint { z: o.vertex(i) });
            assert!((dv - (3.0 + 2.0 * 2f64.sqrt()).acosh()).abs() < 1e-12);
            assert!((dv - 2.4484524).abs() < 1e-6);
        }
        let diag = distance(DiscPoint { z: o.vertex(0) }, DiscPoint { z: o.vertex(4) });
        assert!((diag - l2).abs() < 1e-9);
        // Right triangle (pi/8, pi/8, pi/2): cosh(half side) = cos(pi/8) / sin(pi/8).
        let half = ((PI / 8.0).cos() / (PI / 8.0).sin()).acosh();
        assert!((o.side_length(0) / 2.0 - half).abs() < 1e-9);
    }

    #[test]
    fn reduction_examples() {
        let m = model();
        let r = m.reduce_to_domain(C::zero()).unwrap();
        assert_eq!(r.word, Word::empty());
        let r = m.reduce_to_domain(m.gens[0].apply_c(C::zero())).unwrap();
        assert!(r.point.norm() < 1e-12);
        assert_eq!(r.word, w("a"));
        let deep = DiscPoint::<f64>::polar(10.0, 0.77).z;
        let r = m.reduce_to_domain(deep).unwrap();
        assert!(distance(DiscPoint::origin(), DiscPoint { z: r.point }) <= (3.0 + 2.0 * 2f64.sqrt()).acosh() + 1e-9);
        assert!((r.element.apply_c(deep) - r.point).norm() < 1e-9);
        assert!(m.eval(&r.word).approx_eq(&r.element, 1e-6));
    }

    fn check_tiling<R: Real>(m: &Bolza<R>, word_len: usize, samples: usize, tol: f64) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let words: Vec<Word> = m.pres.enumerate_words(word_len).filter(|x| x.len() == word_len).step_by(97).collect();
        for _ in 0..samples {
            let p = DiscPoint::<R>::polar(R::from_f64(rng.random_range(0.0..3.0)), R::from_f64(rng.random_range(0.0..2.0 * PI))).z;
            let r = m.reduce_to_domain(p).unwrap();
            assert!(m.in_closed_domain(r.point, m.cfg.tol.merge));
            let g = &words[rng.random_range(0..words.len())];
            let q = m.eval(g).apply_c(p);
            let qd = m.quotient_distance(p, q).unwrap().to_f64();
            assert!(qd < tol, "{qd} {g}");
        }
    }

    // Double precision resolves points out to roughly distance 13 at the merge tolerance,
    // so long words are exercised in high precision.
    #[test]
    fn tiling_soundness() {
        check_tiling(model(), 4, 1000, 1e-9);
    }

    #[test]
    fn tiling_soundness_high_precision() {
        let m = Bolza::<Hp>::new(Config::new(Precision::High)).unwrap();
        check_tiling(&m, 8, 1000, 1e-30);
    }

    #[test]
    fn normalizer_action() {
        let m = model();
        // R g_k R^-1 = g_{k+1}, R g_3 R^-1 = g_0^-1.
        assert_eq!(m.rot_action, [2, 3, 4, 5, 6, 7, 1, 0]);
        for l in 0..8 {
            let h = m.gens[l].conjugate_by(&m.inv);
            assert!(h.approx_eq(&m.gens[l].inverse(), 1e-9));
        }
        assert!(power(&m.rot, 8).dist_to_identity() < 1e-12);
        assert!(power(&m.ord3, 3).dist_to_identity() < 1e-9);
        assert!((m.inv * m.inv).dist_to_identity() < 1e-12);
        assert!(m.inv.approx_eq(&power(&m.rot, 4), 1e-12));
        for l in 0..8 {
            let lhs = m.gens[l].conjugate_by(&m.ord3);
            assert!(m.eval(&m.ord3_action[l]).approx_eq(&lhs, 1e-6));
        }
    }

    #[test]
    fn closure_has_order_48() {
        assert_eq!(model().closure.len(), 48);
    }

    #[test]
    fn weierstrass_points() {
        let m = model();
        for &p in &m.weierstrass {
            let jp = m.inv.apply_c(p);
            assert!(m.quotient_distance(jp, p).unwrap() < 1e-9);
            let r = m.reduce_to_domain(jp).unwrap();
            assert!((m.canonical_point(r.point).unwrap() - m.canonical_point(p).unwrap()).norm() < 1e-12);
        }
        for i in 0..6 {
            for j in 0..i {
                assert!(m.quotient_distance(m.weierstrass[i], m.weierstrass[j]).unwrap() > 0.1);
            }
        }
        // Midpoint of side 0 goes to midpoint of side 4, identified through g_0.
        let m0 = m.octagon.midpoint(0);
        let m4 = m.inv.apply_c(m0);
        assert!((m4 - m.octagon.midpoint(4)).norm() < 1e-12);
        assert!((m.gens[0].apply_c(m4) - m0).norm() < 1e-12);
    }

    #[test]
    fn vertices_form_one_class() {
        let m = model();
        let v0 = m.octagon.vertex(0);
        for i in 1..8 {
            assert!(m.quotient_distance(m.octagon.vertex(i), v0).unwrap() < 1e-9);
        }
    }

    #[test]
    fn traces_snap_to_length_8() {
        let m = model();
        for g in m.pres.enumerate_words(8).step_by(7) {
            QuadInt::snap(m.eval(&g).trace(), 1e-9).unwrap();
        }
    }

    #[test]
    fn perturbed_generator_fails_construction() {
        assert!(matches!(Bolza::<f64>::with_perturbation(Config::default(), 1e-6), Err(Error::Construction(_))));
    }

    #[test]
    fn high_precision_model() {
        let m = Bolza::<Hp>::new(Config::new(Precision::High)).unwrap();
        assert!(m.eval(m.relator()).dist_to_identity() < 1e-30);
        assert_eq!(m.closure.len(), 48);
        let t = m.eval(&w("AB")).trace();
        assert!(QuadInt::snap(t, 1e-25).is_ok());
    }
}
