//! Scalar abstraction shared by `f64` and the extended-precision [`ExtReal`].
//!
//! Design matrices, the Jacobi solvers and the Schur construction are generic
//! over [`Real`], so the same code runs in double precision for quick checks
//! and at 60+ significant digits when singular values span dozens of decades.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::ops::{BitTest, UnsignedAbs};
use dashu_int::Sign;
use num_traits::Float;

/// Ordered field operations plus the handful of transcendental pieces the
/// solvers need.
pub trait Real:
    Clone
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whatever is needed to create new values (the precision for `ExtReal`).
    type Ctx: Copy + fmt::Debug;

    fn context(&self) -> Self::Ctx;
    fn from_f64(x: f64, ctx: Self::Ctx) -> Self;
    fn from_i64(n: i64, ctx: Self::Ctx) -> Self;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;

    /// `log10(|x|)` without overflowing through `f64`.
    fn log10_abs(&self) -> f64 {
        self.to_f64().abs().log10()
    }

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_i64(0, ctx)
    }

    fn one(ctx: Self::Ctx) -> Self {
        Self::from_i64(1, ctx)
    }

    fn powi(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.context());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            n >>= 1;
        }
        acc
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    /// Inner product of two equally long slices.
    fn dot(a: &[Self], b: &[Self]) -> Self {
        let ctx = a.first().map(Real::context).expect("dot of empty slices");
        a.iter()
            .zip(b)
            .fold(Self::zero(ctx), |acc, (x, y)| acc + x.clone() * y.clone())
    }

    /// Plane rotation in place: `x ← c·x − s·y`, `y ← s·x + c·y`.
    fn rotate(x: &mut [Self], y: &mut [Self], c: &Self, s: &Self) {
        for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
            let nx = c.clone() * xi.clone() - s.clone() * yi.clone();
            let ny = s.clone() * xi.clone() + c.clone() * yi.clone();
            *xi = nx;
            *yi = ny;
        }
    }
}

impl Real for f64 {
    type Ctx = ();

    fn context(&self) {}
    fn from_f64(x: f64, _: ()) -> f64 {
        x
    }
    fn from_i64(n: i64, _: ()) -> f64 {
        n as f64
    }
    fn sqrt(&self) -> f64 {
        Float::sqrt(*self)
    }
    fn abs(&self) -> f64 {
        Float::abs(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }
    fn rotate(x: &mut [f64], y: &mut [f64], c: &f64, s: &f64) {
        for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
            let (a, b) = (*xi, *yi);
            *xi = c * a - s * b;
            *yi = s * a + c * b;
        }
    }
}

/// Working precision of an [`ExtReal`], stored in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    bits: usize,
}

impl Precision {
    /// Precision holding at least `digits` significant decimal digits.
    pub fn digits(digits: u32) -> Self {
        let bits = (digits as f64 * core::f64::consts::LOG2_10).ceil() as usize;
        Precision { bits: bits.max(8) }
    }

    pub fn bits(self) -> usize {
        self.bits
    }

    /// Significant decimal digits carried (rounded down).
    pub fn decimal_digits(self) -> u32 {
        (self.bits as f64 / core::f64::consts::LOG2_10).floor() as u32
    }
}

type Big = FBig<HalfEven, 2>;

/// Binary floating-point number with a configurable, correctly rounded
/// precision.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct ExtReal(Big);

impl ExtReal {
    pub fn new(x: f64, precision: Precision) -> Self {
        <Self as Real>::from_f64(x, precision)
    }

    pub fn precision(&self) -> Precision {
        Precision {
            bits: self.0.precision(),
        }
    }

    /// Scientific notation with `digits` significant digits, e.g.
    /// `1.2500000000000000e-3`.
    pub fn to_scientific(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.0.repr().significand().is_zero() {
            return alloc::format!("{:.*e}", digits - 1, 0.0f64);
        }
        let dec = self
            .0
            .clone()
            .with_base::<10>()
            .value()
            .with_precision(digits)
            .value();
        let repr = dec.repr();
        let sig = repr.significand();
        let negative = self.0.repr().sign() == Sign::Negative;
        let mut text = alloc::format!("{}", sig.clone().unsigned_abs());
        // significand * 10^exponent, normalise to d.ddd
        let exp10 = repr.exponent() + text.len() as isize - 1;
        while text.len() < digits {
            text.push('0');
        }
        let (head, tail) = text.split_at(1);
        let sign = if negative { "-" } else { "" };
        if tail.is_empty() {
            alloc::format!("{sign}{head}e{exp10}")
        } else {
            alloc::format!("{sign}{head}.{tail}e{exp10}")
        }
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.precision().decimal_digits().max(1) as usize;
        f.write_str(&self.to_scientific(digits))
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

macro_rules! ext_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for ExtReal {
            type Output = ExtReal;
            fn $method(self, rhs: ExtReal) -> ExtReal {
                ExtReal(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a ExtReal> for &'a ExtReal {
            type Output = ExtReal;
            fn $method(self, rhs: &'a ExtReal) -> ExtReal {
                ExtReal(&self.0 $op &rhs.0)
            }
        }
    };
}

ext_binop!(Add, add, +);
ext_binop!(Sub, sub, -);
ext_binop!(Mul, mul, *);
ext_binop!(Div, div, /);

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        ExtReal(-self.0)
    }
}

impl Real for ExtReal {
    type Ctx = Precision;

    fn context(&self) -> Precision {
        self.precision()
    }

    fn from_f64(x: f64, ctx: Precision) -> Self {
        let v = Big::try_from(x).expect("ExtReal::from_f64 requires a finite value");
        ExtReal(v.with_precision(ctx.bits).value())
    }

    fn from_i64(n: i64, ctx: Precision) -> Self {
        ExtReal(Big::from(n).with_precision(ctx.bits).value())
    }

    fn sqrt(&self) -> Self {
        ExtReal(self.0.sqrt())
    }

    fn abs(&self) -> Self {
        if self.0.repr().sign() == Sign::Negative {
            ExtReal(-self.0.clone())
        } else {
            self.clone()
        }
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    fn is_zero(&self) -> bool {
        self.0.repr().significand().is_zero()
    }

    fn log10_abs(&self) -> f64 {
        let repr = self.0.repr();
        if repr.significand().is_zero() {
            return f64::NEG_INFINITY;
        }
        let sig = repr.significand();
        let bits = sig.clone().unsigned_abs().bit_len() as isize;
        // sig = m * 2^(bits - 53) with m < 2^53
        let shift = (bits - 53).max(0);
        let m = (sig.clone().unsigned_abs() >> shift as usize).to_f64().value();
        m.log10() + (repr.exponent() + shift) as f64 * core::f64::consts::LOG10_2
    }

    fn dot(a: &[Self], b: &[Self]) -> Self {
        let ctx = a.first().map(Real::context).expect("dot of empty slices");
        let mut acc = Self::zero(ctx).0;
        for (x, y) in a.iter().zip(b) {
            acc += &x.0 * &y.0;
        }
        ExtReal(acc)
    }

    fn rotate(x: &mut [Self], y: &mut [Self], c: &Self, s: &Self) {
        for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
            let nx = &c.0 * &xi.0 - &s.0 * &yi.0;
            let ny = &s.0 * &xi.0 + &c.0 * &yi.0;
            xi.0 = nx;
            yi.0 = ny;
        }
    }
}

/// Total order helper for sorting values known to be comparable.
#[allow(dead_code)]
pub(crate) fn cmp_desc<T: PartialOrd>(a: &T, b: &T) -> Ordering {
    b.partial_cmp(a).unwrap_or(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: u32) -> Precision {
        Precision::digits(d)
    }

    #[test]
    fn precision_conversions() {
        assert_eq!(Precision::digits(60).bits(), 200);
        assert!(Precision::digits(60).decimal_digits() >= 60);
    }

    #[test]
    fn arithmetic_keeps_precision() {
        let a = ExtReal::new(2.0, p(60));
        let b = ExtReal::new(3.0, p(60));
        let q = &a / &b;
        assert_eq!(q.precision(), p(60));
        let back = q * b;
        assert_eq!(back.to_f64(), 2.0);
        let r = a.sqrt();
        let err = (r.clone() * r - ExtReal::new(2.0, p(60))).abs();
        assert!(err.log10_abs() < -58.0);
    }

    #[test]
    fn scientific_formatting() {
        let x = ExtReal::new(0.00125, p(30));
        assert_eq!(x.to_scientific(5), "1.2500e-3");
        let y = ExtReal::new(-12345.0, p(30));
        assert_eq!(y.to_scientific(3), "-1.23e4");
        assert_eq!(ExtReal::new(0.0, p(30)).to_scientific(3), "0.00e0");
        assert_eq!(ExtReal::new(7.0, p(30)).to_scientific(1), "7e0");
        let third = ExtReal::one(p(60)) / ExtReal::from_i64(3, p(60));
        assert_eq!(third.to_scientific(20), "3.3333333333333333333e-1");
    }

    #[test]
    fn log10_of_tiny_values() {
        let tiny = ExtReal::new(1e-300, p(60));
        let t2 = &tiny * &tiny;
        assert_eq!(t2.to_f64(), 0.0);
        assert!((t2.log10_abs() + 600.0).abs() < 1e-9);
        assert!((ExtReal::new(-1000.0, p(40)).log10_abs() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn generic_helpers_agree() {
        let xs = [1.0, 2.0, 3.0];
        let ys = [4.0, -5.0, 6.0];
        let ex: alloc::vec::Vec<ExtReal> = xs.iter().map(|&v| ExtReal::new(v, p(40))).collect();
        let ey: alloc::vec::Vec<ExtReal> = ys.iter().map(|&v| ExtReal::new(v, p(40))).collect();
        assert_eq!(f64::dot(&xs, &ys), 12.0);
        assert_eq!(ExtReal::dot(&ex, &ey).to_f64(), 12.0);
        assert_eq!(ExtReal::new(1.5, p(30)).powi(3).to_f64(), 3.375);
        assert_eq!(ExtReal::new(-2.0, p(30)).abs().to_f64(), 2.0);
    }
}
