//! Scalar abstraction over the two numeric modes: IEEE double and a
//! 237-bit software float used for high-precision certification runs.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use ::f256::{consts, f256};
use num_traits::Num;

/// Real scalar used by every geometric routine in the crate.
pub trait Real:
    Copy
    + Debug
    + Display
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Num
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Short label echoed in reports.
    const MODE: &'static str;
    /// Significand bits.
    const MANTISSA_BITS: u32;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn ln(self) -> Self;
    fn exp(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn atan2(self, x: Self) -> Self;
    fn pi() -> Self;

    fn from_i64(x: i64) -> Self {
        Self::from_f64(x as f64)
    }

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn max(self, other: Self) -> Self {
        if self < other {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn acosh(self) -> Self {
        let one = Self::one();
        (self + (self * self - one).sqrt()).ln()
    }

    fn asinh(self) -> Self {
        let one = Self::one();
        let a = self.abs();
        let r = (a + (a * a + one).sqrt()).ln();
        if self < Self::zero() {
            -r
        } else {
            r
        }
    }

    fn cosh(self) -> Self {
        let e = self.exp();
        (e + Self::one() / e) / Self::from_f64(2.0)
    }

    fn sinh(self) -> Self {
        let e = self.exp();
        (e - Self::one() / e) / Self::from_f64(2.0)
    }

    fn tanh(self) -> Self {
        let e2 = (self + self).exp();
        (e2 - Self::one()) / (e2 + Self::one())
    }

    fn sqrt2() -> Self {
        Self::from_f64(2.0).sqrt()
    }
}

impl Real for f64 {
    const MODE: &'static str = "double";
    const MANTISSA_BITS: u32 = 53;

    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    #[inline]
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
    #[inline]
    fn pi() -> Self {
        std::f64::consts::PI
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn acosh(self) -> Self {
        f64::acosh(self)
    }
    #[inline]
    fn asinh(self) -> Self {
        f64::asinh(self)
    }
    #[inline]
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    #[inline]
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    #[inline]
    fn tanh(self) -> Self {
        f64::tanh(self)
    }
    #[inline]
    fn sqrt2() -> Self {
        std::f64::consts::SQRT_2
    }
}

/// High-precision scalar (237-bit significand).
pub type Hp = f256;

impl Real for f256 {
    const MODE: &'static str = "high";
    const MANTISSA_BITS: u32 = f256::MANTISSA_DIGITS;

    fn from_f64(x: f64) -> Self {
        f256::from(x)
    }

    fn from_i64(x: i64) -> Self {
        f256::from(x)
    }

    fn to_f64(self) -> f64 {
        let (sign, exp, (hi, lo)) = self.as_sign_exp_signif();
        if hi == 0 && lo == 0 {
            return 0.0;
        }
        // Keep the leading 64 bits of the 256-bit significand.
        let (top, shift) = if hi != 0 {
            let lz = hi.leading_zeros();
            let top128 = if lz == 0 { hi } else { (hi << lz) | (lo >> (128 - lz)) };
            ((top128 >> 64) as u64, 192 - lz as i32)
        } else {
            let lz = lo.leading_zeros();
            (((lo << lz) >> 64) as u64, 64 - lz as i32)
        };
        let mut v = top as f64;
        let mut e = exp + shift;
        while e > 0 {
            let step = e.min(1000);
            v *= 2f64.powi(step);
            e -= step;
        }
        while e < 0 {
            let step = (-e).min(1000);
            v /= 2f64.powi(step);
            e += step;
        }
        if sign == 1 {
            -v
        } else {
            v
        }
    }

    fn sqrt(self) -> Self {
        f256::sqrt(self)
    }
    fn ln(self) -> Self {
        f256::ln(&self)
    }
    fn exp(self) -> Self {
        f256::exp(&self)
    }
    fn sin_cos(self) -> (Self, Self) {
        f256::sin_cos(&self)
    }
    fn atan2(self, x: Self) -> Self {
        // f256 returns +-pi/2 on the diagonals |y| = |x|.
        if self.abs() == x.abs() && !x.eq_zero() {
            let q = consts::FRAC_PI_4;
            let a = if x.is_sign_positive() { q } else { consts::PI - q };
            return if self.is_sign_negative() { -a } else { a };
        }
        f256::atan2(&self, &x)
    }
    fn pi() -> Self {
        consts::PI
    }
    fn sqrt2() -> Self {
        consts::SQRT_2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f256_round_trips_through_f64() {
        for &x in &[1.0, -2.5, 3.0571418, 1e-30, 7.25e40, 0.1, -1e-300] {
            let y = <Hp as Real>::from_f64(x).to_f64();
            assert_eq!(x, y, "{x}");
        }
        assert_eq!(<Hp as Real>::from_f64(0.0).to_f64(), 0.0);
    }

    #[test]
    fn high_precision_sqrt2_is_accurate() {
        let s = <Hp as Real>::sqrt2();
        let resid = s * s - <Hp as Real>::from_f64(2.0);
        assert!(resid.abs().to_f64() < 1e-70);
    }

    #[test]
    fn default_methods_agree_between_modes() {
        let x = 3.0_f64 + 2.0 * std::f64::consts::SQRT_2;
        let hp = <Hp as Real>::from_f64(x);
        assert!((Real::acosh(hp).to_f64() - x.acosh()).abs() < 1e-14);
        assert!((Real::asinh(-hp).to_f64() + x.asinh()).abs() < 1e-14);
        assert!((Real::tanh(hp / <Hp as Real>::from_f64(7.0)).to_f64() - (x / 7.0).tanh()).abs() < 1e-15);
    }

    #[test]
    fn high_precision_atan2_on_diagonals() {
        let h = <Hp as Real>::from_f64;
        for (y, x) in [(1.0, 1.0), (-0.5, -0.5), (2.0, -2.0), (-3.0, 3.0), (1.0, 2.0), (0.0, -1.0)] {
            assert!((Real::atan2(h(y), h(x)).to_f64() - f64::atan2(y, x)).abs() < 1e-15, "{y} {x}");
        }
    }
}
