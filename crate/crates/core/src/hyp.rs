//! Poincaré disc primitives: points, isometries in SU(1,1) form, geodesics,
//! distances, crossings and clipping against convex polygons.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::real::Real;

pub type C<R> = Complex<R>;

#[inline]
pub fn c<R: Real>(re: R, im: R) -> C<R> {
    Complex::new(re, im)
}

#[inline]
pub fn cf<R: Real>(re: f64, im: f64) -> C<R> {
    Complex::new(R::from_f64(re), R::from_f64(im))
}

#[inline]
pub fn cis<R: Real>(theta: R) -> C<R> {
    let (s, co) = theta.sin_cos();
    Complex::new(co, s)
}

#[inline]
pub fn cabs<R: Real>(z: C<R>) -> R {
    z.norm_sqr().sqrt()
}

/// Angle of `z` normalized to [0, 2pi).
pub fn arg<R: Real>(z: C<R>) -> R {
    let t = z.im.atan2(z.re);
    if t < R::zero() {
        t + R::pi() + R::pi()
    } else {
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint<R: Real> {
    pub z: C<R>,
}

impl<R: Real> DiscPoint<R> {
    /// Checked constructor: rejects points within `eps_boundary` of the unit circle.
    pub fn new(z: C<R>, eps_boundary: f64) -> Result<Self> {
        let lim = R::one() - R::from_f64(eps_boundary);
        if z.norm_sqr() < lim * lim {
            Ok(DiscPoint { z })
        } else {
            Err(Error::Precision(format!("point |z|={} too close to the boundary", cabs(z).to_f64())))
        }
    }

    pub fn origin() -> Self {
        DiscPoint { z: C::zero() }
    }

    /// Point at hyperbolic distance `t` from the origin in direction `theta`.
    pub fn polar(t: R, theta: R) -> Self {
        DiscPoint { z: cis(theta) * (t / R::from_f64(2.0)).tanh() }
    }

    pub fn to_f64(self) -> (f64, f64) {
        (self.z.re.to_f64(), self.z.im.to_f64())
    }
}

/// Point on the circle at infinity. Stores the normalized angle and its unit vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint<R: Real> {
    pub theta: R,
    pub u: C<R>,
}

impl<R: Real> BoundaryPoint<R> {
    pub fn from_angle(theta: R) -> Self {
        let two_pi = R::pi() + R::pi();
        let mut t = theta;
        while t < R::zero() {
            t = t + two_pi;
        }
        while t >= two_pi {
            t = t - two_pi;
        }
        BoundaryPoint { theta: t, u: cis(t) }
    }

    pub fn from_unit(u: C<R>) -> Self {
        let n = cabs(u);
        let u = u / n;
        BoundaryPoint { theta: arg(u), u }
    }
}

/// Hyperbolic distance in the disc.
pub fn distance<R: Real>(p: DiscPoint<R>, q: DiscPoint<R>) -> R {
    sinh_half_distance(p.z, q.z).asinh() * R::from_f64(2.0)
}

/// sinh of half the hyperbolic distance; accurate for nearby points.
#[inline]
pub fn sinh_half_distance<R: Real>(p: C<R>, q: C<R>) -> R {
    let one = R::one();
    cabs(p - q) / ((one - p.norm_sqr()) * (one - q.norm_sqr())).sqrt()
}

/// cosh of the hyperbolic distance between two disc coordinates.
#[inline]
pub fn cosh_distance<R: Real>(p: C<R>, q: C<R>) -> R {
    let one = R::one();
    let two = R::from_f64(2.0);
    one + two * (p - q).norm_sqr() / ((one - p.norm_sqr()) * (one - q.norm_sqr()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// Orientation-preserving isometry `z -> (a z + b) / (conj(b) z + conj(a))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry<R: Real> {
    pub a: C<R>,
    pub b: C<R>,
}

impl<R: Real> Isometry<R> {
    pub fn new(a: C<R>, b: C<R>) -> Self {
        Isometry { a, b }
    }

    pub fn identity() -> Self {
        Isometry { a: C::one(), b: C::zero() }
    }

    /// Rotation about the origin by `phi`.
    pub fn rotation(phi: R) -> Self {
        let h = phi / R::from_f64(2.0);
        Isometry { a: cis(h), b: C::zero() }
    }

    /// The isometry `z -> (z + p) / (1 + conj(p) z)`, taking 0 to `p`.
    pub fn translation_to(p: C<R>) -> Self {
        let s = (R::one() - p.norm_sqr()).sqrt();
        Isometry { a: C::one() / s, b: p / s }
    }

    pub fn det(&self) -> R {
        self.a.norm_sqr() - self.b.norm_sqr()
    }

    /// Checked composition `f * g` (apply `g` first).
    pub fn compose(&self, g: &Self, drift_tol: f64) -> Result<Self> {
        let r = *self * *g;
        let drift = (r.det() - R::one()).abs().to_f64();
        if drift > drift_tol {
            return Err(Error::NumericDegradation { drift });
        }
        Ok(r)
    }

    #[inline]
    pub fn inverse(&self) -> Self {
        Isometry { a: self.a.conj(), b: -self.b }
    }

    #[inline]
    pub fn apply_c(&self, z: C<R>) -> C<R> {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    /// Image of a point; fails when the image is numerically on the boundary.
    pub fn apply(&self, p: DiscPoint<R>, eps_boundary: f64) -> Result<DiscPoint<R>> {
        DiscPoint::new(self.apply_c(p.z), eps_boundary)
    }

    pub fn apply_boundary(&self, e: BoundaryPoint<R>) -> BoundaryPoint<R> {
        BoundaryPoint::from_unit(self.apply_c(e.u))
    }

    /// Derivative of the Möbius map at `z`.
    #[inline]
    pub fn derivative(&self, z: C<R>) -> C<R> {
        let d = self.b.conj() * z + self.a.conj();
        C::<R>::one() / (d * d)
    }

    /// Matrix trace `2 Re a`.
    #[inline]
    pub fn trace(&self) -> R {
        self.a.re + self.a.re
    }

    pub fn classify(&self, tau: f64) -> Kind {
        let t = self.trace().abs().to_f64();
        if t > 2.0 + tau {
            Kind::Hyperbolic
        } else if t < 2.0 - tau {
            Kind::Elliptic
        } else if self.b.norm_sqr().to_f64().sqrt() < tau && (self.a.im.to_f64()).abs() < tau {
            Kind::Identity
        } else {
            Kind::Parabolic
        }
    }

    pub fn translation_length(&self, tau: f64) -> Result<R> {
        if self.classify(tau) != Kind::Hyperbolic {
            return Err(Error::Domain(format!("not hyperbolic (|tr| = {})", self.trace().abs().to_f64())));
        }
        Ok(self.translation_length_unchecked())
    }

    #[inline]
    pub fn translation_length_unchecked(&self) -> R {
        let x = self.a.re.abs();
        (x.acosh()) * R::from_f64(2.0)
    }

    /// Repelling and attracting fixed points on the boundary.
    pub fn fixed_points(&self, tau: f64) -> Result<(C<R>, C<R>)> {
        if self.classify(tau) != Kind::Hyperbolic {
            return Err(Error::Domain("axis of a non-hyperbolic isometry".into()));
        }
        Ok(self.fixed_points_unchecked())
    }

    pub fn fixed_points_unchecked(&self) -> (C<R>, C<R>) {
        let ia = c(R::zero(), self.a.im);
        let disc = (self.a.re * self.a.re - R::one()).max(R::zero()).sqrt();
        let bc = self.b.conj();
        let z1 = (ia + disc) / bc;
        let z2 = (ia - disc) / bc;
        // Normalize onto the circle to absorb rounding.
        let z1 = z1 / cabs(z1);
        let z2 = z2 / cabs(z2);
        let m1 = cabs(bc * z1 + self.a.conj());
        if m1 > R::one() {
            (z2, z1)
        } else {
            (z1, z2)
        }
    }

    pub fn axis(&self, tau: f64) -> Result<Geodesic<R>> {
        let (r, a) = self.fixed_points(tau)?;
        Geodesic::new(BoundaryPoint::from_unit(r), BoundaryPoint::from_unit(a), 0.0)
    }

    /// Projective equality: `self = +-other` entrywise within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let d1 = (self.a - other.a).norm_sqr() + (self.b - other.b).norm_sqr();
        let d2 = (self.a + other.a).norm_sqr() + (self.b + other.b).norm_sqr();
        d1.min(d2).to_f64().sqrt() < tol
    }

    /// Projective distance to the identity.
    pub fn dist_to_identity(&self) -> f64 {
        let d1 = (self.a - C::one()).norm_sqr() + self.b.norm_sqr();
        let d2 = (self.a + C::one()).norm_sqr() + self.b.norm_sqr();
        d1.min(d2).to_f64().sqrt()
    }

    pub fn conjugate_by(&self, h: &Self) -> Self {
        *h * *self * h.inverse()
    }

    pub fn cast<S: Real>(&self) -> Isometry<S> {
        Isometry {
            a: c(S::from_f64(self.a.re.to_f64()), S::from_f64(self.a.im.to_f64())),
            b: c(S::from_f64(self.b.re.to_f64()), S::from_f64(self.b.im.to_f64())),
        }
    }
}

impl<R: Real> std::ops::Mul for Isometry<R> {
    type Output = Isometry<R>;
    #[inline]
    fn mul(self, g: Isometry<R>) -> Isometry<R> {
        Isometry {
            a: self.a * g.a + self.b * g.b.conj(),
            b: self.a * g.b + self.b * g.a.conj(),
        }
    }
}

/// Complete geodesic, stored as an unordered endpoint pair with the smaller angle first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic<R: Real> {
    pub lo: BoundaryPoint<R>,
    pub hi: BoundaryPoint<R>,
}

impl<R: Real> Geodesic<R> {
    pub fn new(p: BoundaryPoint<R>, q: BoundaryPoint<R>, eps_angle: f64) -> Result<Self> {
        let d = (p.theta - q.theta).abs().to_f64();
        let d = d.min(2.0 * std::f64::consts::PI - d);
        if d <= eps_angle || d == 0.0 {
            return Err(Error::Domain("geodesic endpoints coincide".into()));
        }
        if p.theta < q.theta {
            Ok(Geodesic { lo: p, hi: q })
        } else {
            Ok(Geodesic { lo: q, hi: p })
        }
    }

    /// Geodesic through two distinct disc points.
    pub fn through(p: C<R>, q: C<R>) -> Result<Self> {
        let (u, v) = line_through(p, q);
        Geodesic::new(BoundaryPoint::from_unit(u), BoundaryPoint::from_unit(v), 1e-14)
    }

    pub fn image(&self, f: &Isometry<R>) -> Self {
        let p = f.apply_boundary(self.lo);
        let q = f.apply_boundary(self.hi);
        if p.theta < q.theta {
            Geodesic { lo: p, hi: q }
        } else {
            Geodesic { lo: q, hi: p }
        }
    }

    /// Exact interleaving predicate on endpoint angles.
    pub fn interleaves(&self, other: &Self) -> bool {
        let inside = |t: R| self.lo.theta < t && t < self.hi.theta;
        inside(other.lo.theta) != inside(other.hi.theta)
            && other.lo.theta != self.lo.theta
            && other.lo.theta != self.hi.theta
            && other.hi.theta != self.lo.theta
            && other.hi.theta != self.hi.theta
    }

    /// Euclidean data of the carrier: `Some((center, radius))` for a circle,
    /// `None` for a diameter.
    pub fn circle(&self) -> Option<(C<R>, R)> {
        let s = self.lo.u + self.hi.u;
        let n2 = s.norm_sqr();
        if n2.to_f64() < 1e-24 {
            return None;
        }
        let center = s * (R::from_f64(2.0) / n2);
        let r = (center.norm_sqr() - R::one()).max(R::zero()).sqrt();
        Some((center, r))
    }

    /// Residual of `z` against the carrier equation (0 on the geodesic).
    pub fn residual(&self, z: C<R>) -> R {
        match self.circle() {
            Some((c0, r)) => (cabs(z - c0) - r).abs(),
            None => {
                let d = self.lo.u;
                (d.re * z.im - d.im * z.re).abs()
            }
        }
    }
}

/// Unit tangent at `from` of the geodesic towards `to`.
pub fn direction<R: Real>(from: C<R>, to: C<R>) -> C<R> {
    let d = (to - from) / (C::<R>::one() - from.conj() * to);
    d / cabs(d)
}

/// Unit tangent at `z` of the geodesic running from boundary point `u` to boundary point `v`.
pub fn direction_on<R: Real>(u: C<R>, v: C<R>, z: C<R>) -> C<R> {
    let d = direction(z, v) - direction(z, u);
    d / cabs(d)
}

/// Boundary endpoints of the geodesic through `p` and `q`, ordered from behind `p` to beyond `q`.
pub fn line_through<R: Real>(p: C<R>, q: C<R>) -> (C<R>, C<R>) {
    let tp = Isometry::translation_to(p);
    let qq = tp.inverse().apply_c(q);
    let e = qq / cabs(qq);
    let u = tp.apply_c(-e);
    let v = tp.apply_c(e);
    (u / cabs(u), v / cabs(v))
}

/// Upper half-plane chart adapted to an oriented geodesic `u -> v`:
/// `w(z) = lambda (z - u) / (v - z)` sends `u` to 0, `v` to infinity and the disc to Im w > 0.
/// Along the geodesic, `w = i y` with `ln y` the arclength parameter.
#[derive(Debug, Clone, Copy)]
pub struct Frame<R: Real> {
    pub u: C<R>,
    pub v: C<R>,
    lambda: C<R>,
}

impl<R: Real> Frame<R> {
    pub fn new(u: C<R>, v: C<R>) -> Self {
        // lambda = +-sqrt(v / u) makes the boundary real.
        let mut lambda = sqrt_unit(v / u);
        let w0 = lambda * (-u) / v;
        if w0.im < R::zero() {
            lambda = -lambda;
        }
        Frame { u, v, lambda }
    }

    #[inline]
    pub fn to_h(&self, z: C<R>) -> C<R> {
        self.lambda * (z - self.u) / (self.v - z)
    }

    #[inline]
    pub fn from_h(&self, w: C<R>) -> C<R> {
        (w * self.v + self.lambda * self.u) / (w + self.lambda)
    }

    /// Real coordinate of a boundary point other than `v`.
    #[inline]
    pub fn boundary(&self, e: C<R>) -> R {
        self.to_h(e).re
    }

    /// Disc point on the geodesic at height `y` (`w = i y`).
    #[inline]
    pub fn point_at(&self, y: R) -> C<R> {
        self.from_h(c(R::zero(), y))
    }
}

/// Principal square root of a unit complex number.
fn sqrt_unit<R: Real>(r: C<R>) -> C<R> {
    // sqrt(e^{it}) = (1 + e^{it}) / |1 + e^{it}| when t is not pi.
    let s = C::<R>::one() + r;
    let n = s.norm_sqr();
    if n.to_f64() < 1e-20 {
        c(R::zero(), R::one())
    } else {
        s / n.sqrt()
    }
}

/// Data of a transverse crossing of another geodesic `(e1, e2)` with the frame geodesic.
#[derive(Debug, Clone, Copy)]
pub struct FrameCrossing<R: Real> {
    /// Squared height `y^2 = -P1 P2` of the crossing on the imaginary axis.
    pub y2: R,
    /// Sum `P1 + P2`, which orders lines through a common point (push-left convention).
    pub psum: R,
}

impl<R: Real> Frame<R> {
    /// Crossing of the boundary pair `(e1, e2)` with the frame geodesic, if they interleave.
    #[inline]
    pub fn crossing(&self, e1: C<R>, e2: C<R>) -> Option<FrameCrossing<R>> {
        let p1 = self.boundary(e1);
        let p2 = self.boundary(e2);
        let prod = p1 * p2;
        if prod < R::zero() {
            Some(FrameCrossing { y2: -prod, psum: p1 + p2 })
        } else {
            None
        }
    }
}

/// Transverse crossing of two geodesics: point and angle in (0, pi) from the direction
/// of `u` (lo -> hi) counterclockwise to the carrier of `v`.
pub fn geodesic_cross<R: Real>(u: &Geodesic<R>, v: &Geodesic<R>, eps_boundary: f64) -> Result<Option<(DiscPoint<R>, R)>> {
    if u == v {
        return Err(Error::Domain("crossing of a geodesic with itself".into()));
    }
    if !u.interleaves(v) {
        return Ok(None);
    }
    let f = Frame::new(u.lo.u, u.hi.u);
    let p1 = f.boundary(v.lo.u);
    let p2 = f.boundary(v.hi.u);
    let y2 = -(p1 * p2);
    let y = y2.max(R::zero()).sqrt();
    let cc = (p1 + p2) / R::from_f64(2.0);
    let z = f.point_at(y);
    let angle = y.atan2(-cc);
    Ok(Some((DiscPoint::new(z, eps_boundary)?, angle)))
}

/// Geodesic segment between two points on a common carrier.
#[derive(Debug, Clone, Copy)]
pub struct Segment<R: Real> {
    pub geodesic: Geodesic<R>,
    pub p: DiscPoint<R>,
    pub q: DiscPoint<R>,
}

impl<R: Real> Segment<R> {
    pub fn new(geodesic: Geodesic<R>, p: DiscPoint<R>, q: DiscPoint<R>, tol: f64) -> Result<Self> {
        if (p.z - q.z).norm_sqr().to_f64() == 0.0 {
            return Err(Error::Domain("degenerate segment".into()));
        }
        for z in [p.z, q.z] {
            if geodesic.residual(z).to_f64() > tol {
                return Err(Error::Domain("segment endpoint off its carrier".into()));
            }
        }
        Ok(Segment { geodesic, p, q })
    }

    pub fn length(&self) -> R {
        distance(self.p, self.q)
    }
}

/// Convex geodesic polygon given by its vertices in counterclockwise order;
/// side `i` joins vertex `i` to vertex `i + 1`.
#[derive(Debug, Clone)]
pub struct ConvexPolygon<R: Real> {
    pub vertices: Vec<C<R>>,
    /// Boundary endpoints of each side carrier, oriented along the side.
    pub carriers: Vec<(C<R>, C<R>)>,
    /// A point of the interior.
    pub interior: C<R>,
}

impl<R: Real> ConvexPolygon<R> {
    pub fn new(vertices: Vec<C<R>>) -> Self {
        let n = vertices.len();
        let carriers = (0..n).map(|i| line_through(vertices[i], vertices[(i + 1) % n])).collect();
        // The Euclidean centroid in the Klein model is interior for convex polygons.
        let two = R::from_f64(2.0);
        let mut k = C::zero();
        for &v in &vertices {
            k = k + v * (two / (R::one() + v.norm_sqr()));
        }
        k = k / R::from_i64(n as i64);
        let kk = k.norm_sqr();
        let interior = k / (R::one() + (R::one() - kk).sqrt());
        ConvexPolygon { vertices, carriers, interior }
    }

    pub fn image(&self, f: &Isometry<R>) -> Self {
        ConvexPolygon::new(self.vertices.iter().map(|&v| f.apply_c(v)).collect())
    }

    /// Whether `z` lies in the closed polygon up to `tol` in frame coordinates.
    pub fn contains(&self, z: C<R>, tol: f64) -> bool {
        self.carriers.iter().all(|&(u, v)| {
            // Interior is on the left of each counterclockwise side.
            let f = Frame::new(u, v);
            f.to_h(z).re.to_f64() <= tol * (1.0 + f.to_h(z).norm_sqr().to_f64().sqrt())
        })
    }
}

/// Chord of a geodesic inside a convex polygon.
#[derive(Debug, Clone, Copy)]
pub struct Clip<R: Real> {
    pub segment: Segment<R>,
    /// Side index carrying each endpoint.
    pub side_p: usize,
    pub side_q: usize,
    /// Vertex index matched by each endpoint, if any.
    pub vertex_p: Option<usize>,
    pub vertex_q: Option<usize>,
}

/// Clip `g` (oriented lo -> hi) to the convex polygon `poly`.
pub fn clip_to_polygon<R: Real>(g: &Geodesic<R>, poly: &ConvexPolygon<R>, eps_vertex: f64) -> Result<Option<Clip<R>>> {
    let f = Frame::new(g.lo.u, g.hi.u);
    let w0 = f.to_h(poly.interior);
    let zero = R::zero();
    let mut lo: Option<(R, usize)> = None;
    let mut hi: Option<(R, usize)> = None;
    for (s, &(e1, e2)) in poly.carriers.iter().enumerate() {
        let p1 = f.boundary(e1);
        let p2 = f.boundary(e2);
        let cc = (p1 + p2) / R::from_f64(2.0);
        let rr = (p1 - p2).abs() / R::from_f64(2.0);
        let inside = (w0 - c(cc, zero)).norm_sqr() < rr * rr;
        let prod = p1 * p2;
        let coincident = (cabs(e1 - g.lo.u) + cabs(e2 - g.hi.u)).to_f64().min((cabs(e1 - g.hi.u) + cabs(e2 - g.lo.u)).to_f64()) < 1e-12;
        if coincident {
            // The geodesic carries this side.
            let a = poly.vertices[s];
            let b = poly.vertices[(s + 1) % poly.vertices.len()];
            let (a, b, va, vb) = if f.to_h(a).im < f.to_h(b).im { (a, b, s, (s + 1) % poly.vertices.len()) } else { (b, a, (s + 1) % poly.vertices.len(), s) };
            let seg = Segment { geodesic: *g, p: DiscPoint { z: a }, q: DiscPoint { z: b } };
            return Ok(Some(Clip { segment: seg, side_p: s, side_q: s, vertex_p: Some(va), vertex_q: Some(vb) }));
        }
        if prod < zero {
            let y2 = -prod;
            if inside {
                // Keep heights below the crossing.
                if hi.is_none_or(|(h, _)| y2 < h) {
                    hi = Some((y2, s));
                }
            } else if lo.is_none_or(|(l, _)| y2 > l) {
                lo = Some((y2, s));
            }
        } else if inside {
            return Ok(None);
        }
    }
    let (Some((l2, sl)), Some((h2, sh))) = (lo, hi) else {
        return Ok(None);
    };
    if l2 >= h2 {
        return Ok(None);
    }
    let pz = f.point_at(l2.sqrt());
    let qz = f.point_at(h2.sqrt());
    let len = (h2 / l2).ln().to_f64() / 2.0;
    let near_vertex = |z: C<R>| {
        poly.vertices
            .iter()
            .position(|&v| cosh_distance(z, v).to_f64() - 1.0 < eps_vertex * eps_vertex)
    };
    let vp = near_vertex(pz);
    let vq = near_vertex(qz);
    if len < eps_vertex {
        return Err(Error::Ambiguity("grazing contact with polygon".into()));
    }
    let segment = Segment { geodesic: *g, p: DiscPoint { z: pz }, q: DiscPoint { z: qz } };
    Ok(Some(Clip { segment, side_p: sl, side_q: sh, vertex_p: vp, vertex_q: vq }))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::real::Hp;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    pub fn random_isometry(t: f64, phi: f64, psi: f64) -> Isometry<f64> {
        Isometry::new(cis(phi) * t.cosh(), cis(psi) * t.sinh())
    }

    fn pt(r: f64, th: f64) -> C<f64> {
        cis(th) * r
    }

    #[test]
    fn identity_and_inverse() {
        let g = random_isometry(1.3, 0.4, 2.0);
        let i = Isometry::identity();
        assert!(i.compose(&g, 1e-9).unwrap().approx_eq(&g, 1e-12));
        assert!(g.compose(&g.inverse(), 1e-9).unwrap().approx_eq(&i, 1e-12));
    }

    #[test]
    fn compose_reports_drift() {
        let g = Isometry::new(cf::<f64>(2.0, 0.0), cf(1.0, 0.0));
        assert!(matches!(g.compose(&g, 1e-9), Err(Error::NumericDegradation { .. })));
    }

    #[test]
    fn apply_central_symmetry() {
        let j = Isometry::new(cf::<f64>(0.0, 1.0), C::zero());
        let z = cf(0.3, -0.2);
        assert!((j.apply_c(z) + z).norm() < 1e-15);
        assert!(Isometry::<f64>::identity().apply(DiscPoint::origin(), 1e-12).unwrap().z.norm() == 0.0);
    }

    #[test]
    fn apply_near_boundary_is_error() {
        let g = Isometry::translation_to(cf::<f64>(1.0 - 1e-14, 0.0));
        assert!(g.apply(DiscPoint::origin(), 1e-12).is_err());
    }

    #[test]
    fn classify_trichotomy() {
        assert_eq!(Isometry::<f64>::identity().classify(1e-9), Kind::Identity);
        assert_eq!(Isometry::<f64>::rotation(PI / 4.0).classify(1e-9), Kind::Elliptic);
        assert_eq!(random_isometry(1.0, 0.0, 0.3).classify(1e-9), Kind::Hyperbolic);
        // Parabolic: a = 1 + i, b = i... |a|^2 - |b|^2 = 1 with Re a = 1.
        let p = Isometry::new(cf::<f64>(1.0, 1.0), cf(1.0, 0.0));
        assert_eq!(p.classify(1e-9), Kind::Parabolic);
        assert!(Isometry::<f64>::rotation(1.0).translation_length(1e-9).is_err());
    }

    #[test]
    fn radial_distance() {
        for th in [0.0, 1.0, 4.0] {
            let d = distance(DiscPoint::origin(), DiscPoint { z: pt((1.7f64 / 2.0).tanh(), th) });
            assert!((d - 1.7).abs() < 1e-12);
        }
        assert_eq!(distance(DiscPoint::<f64>::origin(), DiscPoint::origin()), 0.0);
    }

    #[test]
    fn axis_of_real_translation_is_real_diameter() {
        let g = Isometry::new(cf::<f64>(2.0f64.sqrt(), 0.0), cf(1.0, 0.0));
        let ax = g.axis(1e-9).unwrap();
        assert!(ax.lo.theta.abs() < 1e-12);
        assert!((ax.hi.theta - PI).abs() < 1e-12);
        let (rep, att) = g.fixed_points(1e-9).unwrap();
        // g(0) > 0 so the attracting point is +1.
        assert!((att - cf(1.0, 0.0)).norm() < 1e-12 && (rep + cf(1.0, 0.0)).norm() < 1e-12);
        let gi = g.inverse().axis(1e-9).unwrap();
        assert!((gi.lo.theta - ax.lo.theta).abs() < 1e-12 && (gi.hi.theta - ax.hi.theta).abs() < 1e-12);
    }

    #[test]
    fn diameters_cross_at_origin() {
        let u = Geodesic::new(BoundaryPoint::from_angle(0.0), BoundaryPoint::from_angle(PI), 1e-10).unwrap();
        let v = Geodesic::new(BoundaryPoint::from_angle(PI / 2.0), BoundaryPoint::from_angle(1.5 * PI), 1e-10).unwrap();
        let (p, ang) = geodesic_cross(&u, &v, 1e-12).unwrap().unwrap();
        assert!(p.z.norm() < 1e-12);
        assert!((ang - PI / 2.0).abs() < 1e-12);
        assert!(geodesic_cross(&u, &u, 1e-12).is_err());
    }

    #[test]
    fn frame_maps_boundary_to_real_line() {
        let f = Frame::new(cis(0.3), cis(2.9));
        for k in 0..20 {
            let e = cis(0.1 + k as f64 * 0.31);
            let w = f.to_h(e);
            if (e - f.v).norm() > 1e-3 {
                assert!(w.im.abs() < 1e-9 * (1.0 + w.norm()), "{w}");
            }
        }
        assert!(f.to_h(C::zero()).im > 0.0);
        let z = cf(0.2, -0.4);
        assert!((f.from_h(f.to_h(z)) - z).norm() < 1e-13);
    }

    #[test]
    fn clip_diameter_to_regular_octagon() {
        let r = 2f64.powf(-0.25);
        let verts: Vec<C<f64>> = (0..8).map(|k| cis(PI / 8.0 + k as f64 * PI / 4.0 - PI / 4.0) * r).collect();
        let poly = ConvexPolygon::new(verts);
        let g = Geodesic::new(BoundaryPoint::from_angle(0.0), BoundaryPoint::from_angle(PI), 1e-10).unwrap();
        let clip = clip_to_polygon(&g, &poly, 1e-7).unwrap().unwrap();
        // Opposite side midpoints at distance arccosh(1 + sqrt 2) from the center.
        let h = (1.0 + 2f64.sqrt()).acosh();
        assert!((distance(DiscPoint::origin(), clip.segment.p) - h).abs() < 1e-12);
        assert!((distance(DiscPoint::origin(), clip.segment.q) - h).abs() < 1e-12);
        assert!(clip.vertex_p.is_none() && clip.vertex_q.is_none());
        // Diagonal through opposite vertices.
        let d = Geodesic::new(BoundaryPoint::from_angle(PI / 8.0), BoundaryPoint::from_angle(PI / 8.0 + PI), 1e-10).unwrap();
        let clip = clip_to_polygon(&d, &poly, 1e-7).unwrap().unwrap();
        assert!(clip.vertex_p.is_some() && clip.vertex_q.is_some());
        // Far away geodesic.
        let far = Geodesic::new(BoundaryPoint::from_angle(0.0), BoundaryPoint::from_angle(0.05), 1e-10).unwrap();
        assert!(clip_to_polygon(&far, &poly, 1e-7).unwrap().is_none());
    }

    #[test]
    fn high_precision_geometry_agrees() {
        let g: Isometry<Hp> = random_isometry(0.9, 0.2, 1.1).cast();
        let z: C<Hp> = cf(0.1, 0.35);
        let w = g.apply_c(z);
        let gd = random_isometry(0.9, 0.2, 1.1);
        let wd = gd.apply_c(cf(0.1, 0.35));
        assert!((w.re.to_f64() - wd.re).abs() < 1e-14);
        let back = g.inverse().apply_c(w);
        assert!((back - z).norm_sqr().to_f64() < 1e-60);
    }

    /// Independent crossing oracle: Euclidean circle-circle intersection.
    fn circle_oracle(u: &Geodesic<f64>, v: &Geodesic<f64>) -> Option<C<f64>> {
        let cu = u.circle()?;
        let cv = v.circle()?;
        let d = (cv.0 - cu.0).norm();
        if d > cu.1 + cv.1 || d < (cu.1 - cv.1).abs() {
            return None;
        }
        let a = (cu.1 * cu.1 - cv.1 * cv.1 + d * d) / (2.0 * d);
        let h = (cu.1 * cu.1 - a * a).max(0.0).sqrt();
        let dir = (cv.0 - cu.0) / d;
        let m = cu.0 + dir * a;
        let perp = cf(-dir.im, dir.re);
        [m + perp * h, m - perp * h].into_iter().find(|z| z.norm() < 1.0)
    }

    #[test]
    fn interleaving_matches_circle_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut agree = 0;
        for _ in 0..10_000 {
            let mut g = || {
                let a: f64 = rng.random_range(0.0..2.0 * PI);
                let b: f64 = rng.random_range(0.0..2.0 * PI);
                Geodesic::new(BoundaryPoint::from_angle(a), BoundaryPoint::from_angle(b), 1e-3)
            };
            let (Ok(u), Ok(v)) = (g(), g()) else { continue };
            let (Some(_), Some(_)) = (u.circle(), v.circle()) else { continue };
            let pred = geodesic_cross(&u, &v, 1e-14).unwrap();
            let orc = circle_oracle(&u, &v);
            assert_eq!(pred.is_some(), orc.is_some());
            if let (Some((p, _)), Some(q)) = (pred, orc) {
                assert!((p.z - q).norm() < 1e-7);
            }
            agree += 1;
        }
        assert!(agree > 9000);
    }

    proptest! {
        #[test]
        fn metric_preserved(t in 0.0f64..3.0, phi in 0.0..6.3, psi in 0.0..6.3,
                            r1 in 0.0f64..0.9, a1 in 0.0..6.3, r2 in 0.0f64..0.9, a2 in 0.0..6.3) {
            let f = random_isometry(t, phi, psi);
            let p = DiscPoint { z: pt(r1, a1) };
            let q = DiscPoint { z: pt(r2, a2) };
            let d0 = distance(p, q);
            let d1 = distance(DiscPoint { z: f.apply_c(p.z) }, DiscPoint { z: f.apply_c(q.z) });
            prop_assert!((d0 - d1).abs() < 1e-9);
        }

        #[test]
        fn trace_conjugacy_invariant(t in 0.0f64..3.0, phi in 0.0..6.3, psi in 0.0..6.3, s in 0.0f64..2.0, x in 0.0..6.3, y in 0.0..6.3) {
            let g = random_isometry(t, phi, psi);
            let h = random_isometry(s, x, y);
            prop_assert!((g.conjugate_by(&h).trace() - g.trace()).abs() < 1e-9);
        }

        #[test]
        fn crossing_equivariant(a in 0.0f64..6.28, b in 0.0f64..6.28, c0 in 0.0f64..6.28, d in 0.0f64..6.28,
                                t in 0.0f64..2.0, phi in 0.0..6.3, psi in 0.0..6.3) {
            let mk = |x: f64, y: f64| Geodesic::new(BoundaryPoint::from_angle(x), BoundaryPoint::from_angle(y), 1e-2);
            let (Ok(u), Ok(v)) = (mk(a, b), mk(c0, d)) else { return Ok(()) };
            prop_assume!(u != v);
            let h = random_isometry(t, phi, psi);
            let x0 = geodesic_cross(&u, &v, 1e-14).unwrap();
            let x1 = geodesic_cross(&u.image(&h), &v.image(&h), 1e-14).unwrap();
            prop_assert_eq!(x0.is_some(), x1.is_some());
            if let (Some((p0, ang0)), Some((p1, ang1))) = (x0, x1) {
                prop_assume!(p0.z.norm() < 0.99);
                prop_assert!((h.apply_c(p0.z) - p1.z).norm() < 1e-7);
                let da = (ang0 - ang1).abs();
                prop_assert!(da < 1e-7 || (PI - da).abs() < 1e-7);
            }
        }
    }
}
