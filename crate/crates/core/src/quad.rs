//! Exact arithmetic in Z[sqrt 2].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// The element `p + q*sqrt(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct QuadInt {
    pub p: i64,
    pub q: i64,
}

impl QuadInt {
    pub const ZERO: QuadInt = QuadInt { p: 0, q: 0 };
    pub const ONE: QuadInt = QuadInt { p: 1, q: 0 };
    pub const SQRT2: QuadInt = QuadInt { p: 0, q: 1 };

    pub const fn new(p: i64, q: i64) -> Self {
        QuadInt { p, q }
    }

    /// Galois conjugate `p - q*sqrt(2)`.
    pub fn conj(self) -> Self {
        QuadInt::new(self.p, -self.q)
    }

    /// Field norm `p^2 - 2 q^2`.
    pub fn norm(self) -> i128 {
        let p = self.p as i128;
        let q = self.q as i128;
        p * p - 2 * q * q
    }

    /// Exact sign of the real number `p + q*sqrt(2)`.
    pub fn signum(self) -> i32 {
        let sp = self.p.signum() as i32;
        let sq = self.q.signum() as i32;
        if sp == sq || sq == 0 {
            return sp;
        }
        if sp == 0 {
            return sq;
        }
        // Opposite signs: compare p^2 against 2 q^2.
        let p2 = (self.p as i128) * (self.p as i128);
        let q2 = 2 * (self.q as i128) * (self.q as i128);
        match p2.cmp(&q2) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self
        }
    }

    pub fn to_real<R: Real>(self) -> R {
        R::from_i64(self.p) + R::from_i64(self.q) * R::sqrt2()
    }

    pub fn to_f64(self) -> f64 {
        self.p as f64 + self.q as f64 * std::f64::consts::SQRT_2
    }

    /// Snap a real number to the element of Z[sqrt 2] it approximates.
    ///
    /// Traces of the surface group have Galois conjugate of absolute value at
    /// most 2, which leaves at most two candidate values of `q`. Inputs that are
    /// not traces still snap when a candidate lies within `tol`.
    pub fn snap<R: Real>(t: R, tol: f64) -> Result<QuadInt> {
        let tf = t.to_f64();
        if !tf.is_finite() || tf.abs() > 1e15 {
            return Err(Error::NoSnap { value: tf, residual: f64::INFINITY });
        }
        let s2 = std::f64::consts::SQRT_2;
        let slack = 1e-6;
        let qlo = ((tf - 2.0 - slack) / (2.0 * s2)).ceil() as i64;
        let qhi = ((tf + 2.0 + slack) / (2.0 * s2)).floor() as i64;
        let mut best: Option<(QuadInt, R)> = None;
        for q in qlo..=qhi {
            let p = (tf - q as f64 * s2).round() as i64;
            let cand = QuadInt::new(p, q);
            let r = (t - cand.to_real::<R>()).abs();
            match best {
                Some((_, br)) if br <= r => {}
                _ => best = Some((cand, r)),
            }
        }
        match best {
            Some((c, r)) if r.to_f64() < tol => Ok(c),
            Some((_, r)) => Err(Error::NoSnap { value: tf, residual: r.to_f64() }),
            None => Err(Error::NoSnap { value: tf, residual: f64::INFINITY }),
        }
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, o: QuadInt) -> QuadInt {
        QuadInt::new(self.p + o.p, self.q + o.q)
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, o: QuadInt) -> QuadInt {
        QuadInt::new(self.p - o.p, self.q - o.q)
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, o: QuadInt) -> QuadInt {
        QuadInt::new(self.p * o.p + 2 * self.q * o.q, self.p * o.q + self.q * o.p)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(-self.p, -self.q)
    }
}

impl PartialOrd for QuadInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by real value.
impl Ord for QuadInt {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p, self.q) {
            (p, 0) => write!(f, "{p}"),
            (0, q) => write!(f, "{q}*sqrt2"),
            (p, q) if q < 0 => write!(f, "{p}-{}*sqrt2", -q),
            (p, q) => write!(f, "{p}+{q}*sqrt2"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Hp;
    use proptest::prelude::*;

    #[test]
    fn snaps_known_traces() {
        assert_eq!(QuadInt::snap(4.8284271247_f64, 1e-6).unwrap(), QuadInt::new(2, 2));
        assert_eq!(QuadInt::snap(11.6568542494_f64, 1e-6).unwrap(), QuadInt::new(6, 4));
        assert_eq!(QuadInt::snap(0.0_f64, 1e-6).unwrap(), QuadInt::ZERO);
        assert!(QuadInt::snap(std::f64::consts::PI, 1e-6).is_err());
    }

    #[test]
    fn snap_in_high_precision() {
        let t = <Hp as Real>::from_i64(6) + <Hp as Real>::from_i64(4) * <Hp as Real>::sqrt2();
        assert_eq!(QuadInt::snap(t, 1e-25).unwrap(), QuadInt::new(6, 4));
    }

    #[test]
    fn generator_determinant_is_exactly_one() {
        let a = QuadInt::new(1, 1);
        let alpha2 = QuadInt::new(2, 2);
        assert_eq!(a * a - alpha2, QuadInt::ONE);
    }

    proptest! {
        #[test]
        fn ring_ops_match_floats(p1 in -1000i64..1000, q1 in -1000i64..1000, p2 in -1000i64..1000, q2 in -1000i64..1000) {
            let x = QuadInt::new(p1, q1);
            let y = QuadInt::new(p2, q2);
            let tol = 1e-9 * (1.0 + x.to_f64().abs() * y.to_f64().abs());
            prop_assert!(((x * y).to_f64() - x.to_f64() * y.to_f64()).abs() < tol);
            prop_assert!(((x + y).to_f64() - (x.to_f64() + y.to_f64())).abs() < 1e-9);
            prop_assert_eq!((x * y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn exact_order_matches_float_order(p1 in -10000i64..10000, q1 in -10000i64..10000, p2 in -10000i64..10000, q2 in -10000i64..10000) {
            let x = QuadInt::new(p1, q1);
            let y = QuadInt::new(p2, q2);
            let d = x.to_f64() - y.to_f64();
            if d.abs() > 1e-6 {
                prop_assert_eq!(x.cmp(&y), d.partial_cmp(&0.0).unwrap());
            }
        }

        #[test]
        fn snap_recovers_small_elements(q in -20000i64..20000, off in -2i64..=2) {
            let p = (q as f64 * std::f64::consts::SQRT_2).round() as i64 + off;
            let x = QuadInt::new(p, q);
            // Only elements whose conjugate is within the trace window are recoverable.
            prop_assume!(x.conj().to_f64().abs() <= 2.0);
            prop_assert_eq!(QuadInt::snap(x.to_f64(), 1e-6).unwrap(), x);
        }
    }
}
