//! Scalar rings for jet propagation: plain `f64`, and truncated power
//! series in a second variable (used for mixed partial derivatives).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::Float;

use crate::{Error, Result};

/// The arithmetic the jet engines need.
pub trait Ring:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// The constant `c` in the same ring as `like`.
    fn constant(c: f64, like: &Self) -> Self;
    fn scale(&self, c: f64) -> Self;
    fn exp(&self) -> Self;
    fn recip(&self) -> Result<Self>;
    /// Constant term.
    fn lead(&self) -> f64;
    /// Largest coefficient magnitude.
    fn norm(&self) -> f64;
    fn is_finite(&self) -> bool;
}

impl Ring for f64 {
    fn constant(c: f64, _: &f64) -> f64 {
        c
    }
    fn scale(&self, c: f64) -> f64 {
        self * c
    }
    fn exp(&self) -> f64 {
        Float::exp(*self)
    }
    fn recip(&self) -> Result<f64> {
        if *self == 0.0 {
            return Err(Error::Evaluation("division by zero".into()));
        }
        Ok(1.0 / self)
    }
    fn lead(&self) -> f64 {
        *self
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn is_finite(&self) -> bool {
        Float::is_finite(*self)
    }
}

/// `Σ_{k≤K} c_k v^k`, truncated at a fixed order `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    coeffs: Vec<f64>,
}

impl Series {
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Series { coeffs }
    }

    pub fn constant_of_order(c: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = c;
        Series { coeffs }
    }

    /// `c0 + c1·v`.
    pub fn linear(c0: f64, c1: f64, order: usize) -> Self {
        let mut s = Self::constant_of_order(c0, order);
        if order >= 1 {
            s.coeffs[1] = c1;
        }
        s
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn zip(&self, other: &Series, f: impl Fn(f64, f64) -> f64) -> Series {
        let n = self.coeffs.len().min(other.coeffs.len());
        Series {
            coeffs: (0..n).map(|k| f(self.coeffs[k], other.coeffs[k])).collect(),
        }
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        self.zip(&rhs, |a, b| a + b)
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        self.zip(&rhs, |a, b| a - b)
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, &a) in self.coeffs[..n].iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.coeffs[..n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Series { coeffs: out }
    }
}

impl Ring for Series {
    fn constant(c: f64, like: &Series) -> Series {
        Series::constant_of_order(c, like.order())
    }

    fn scale(&self, c: f64) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    fn exp(&self) -> Series {
        let a = &self.coeffs;
        let mut b = vec![0.0; a.len()];
        b[0] = a[0].exp();
        for k in 1..a.len() {
            let acc: f64 = (1..=k).map(|m| m as f64 * a[m] * b[k - m]).sum();
            b[k] = acc / k as f64;
        }
        Series { coeffs: b }
    }

    fn recip(&self) -> Result<Series> {
        let a = &self.coeffs;
        if a[0] == 0.0 {
            return Err(Error::Evaluation("division by a series with zero constant term".into()));
        }
        let mut b = vec![0.0; a.len()];
        b[0] = 1.0 / a[0];
        for k in 1..a.len() {
            let acc: f64 = (1..=k).map(|m| a[m] * b[k - m]).sum();
            b[k] = -acc / a[0];
        }
        Ok(Series { coeffs: b })
    }

    fn lead(&self) -> f64 {
        self.coeffs[0]
    }

    fn norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

/// Cauchy product of two coefficient sequences, `(a ⋆ b)_k` for `k < len`.
pub(crate) fn convolve_at<R: Ring>(a: &[R], b: &[R], k: usize) -> R {
    let mut acc = a[0].clone() * b[k].clone();
    for m in 1..=k {
        acc = acc + a[m].clone() * b[k - m].clone();
    }
    acc
}
