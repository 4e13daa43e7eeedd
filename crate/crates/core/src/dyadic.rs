//! Exact complex dyadic rationals `(re + i*im) * 2^exp` over big integers.
//!
//! Every finite `f64` is a dyadic rational, so products and sums of float
//! inputs can be carried out without rounding. Used where a residual must be
//! resolved far below double-precision noise.

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct DyadicComplex {
    re: BigInt,
    im: BigInt,
    exp: i64,
}

/// Splits a finite float into `mantissa * 2^exp`.
fn decompose(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    assert!(x.is_finite(), "non-finite float in exact arithmetic");
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), raw_exp - 1075)
    };
    (BigInt::from(mant) * sign, exp)
}

impl DyadicComplex {
    pub(crate) fn zero() -> Self {
        DyadicComplex {
            re: BigInt::zero(),
            im: BigInt::zero(),
            exp: 0,
        }
    }

    pub(crate) fn one() -> Self {
        DyadicComplex {
            re: BigInt::from(1),
            im: BigInt::zero(),
            exp: 0,
        }
    }

    pub(crate) fn from_complex(z: Complex64) -> Self {
        let (mr, er) = decompose(z.re);
        let (mi, ei) = decompose(z.im);
        let exp = er.min(ei);
        DyadicComplex {
            re: mr << (er - exp) as usize,
            im: mi << (ei - exp) as usize,
            exp,
        }
        .normalized()
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Strips common trailing zero bits from the mantissas.
    fn normalized(mut self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let tz = match (self.re.trailing_zeros(), self.im.trailing_zeros()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => 0,
        };
        if tz > 0 {
            self.re >>= tz as usize;
            self.im >>= tz as usize;
            self.exp += tz as i64;
        }
        self
    }

    #[cfg(test)]
    pub(crate) fn conj(&self) -> Self {
        DyadicComplex {
            re: self.re.clone(),
            im: -&self.im,
            exp: self.exp,
        }
    }

    pub(crate) fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        DyadicComplex {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
            exp: self.exp + other.exp,
        }
        .normalized()
    }

    pub(crate) fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(other.exp);
        let a = (self.exp - exp) as usize;
        let b = (other.exp - exp) as usize;
        DyadicComplex {
            re: (&self.re << a) + (&other.re << b),
            im: (&self.im << a) + (&other.im << b),
            exp,
        }
        .normalized()
    }

    pub(crate) fn sub(&self, other: &Self) -> Self {
        let neg = DyadicComplex {
            re: -&other.re,
            im: -&other.im,
            exp: other.exp,
        };
        self.add(&neg)
    }

    /// `|z|^2` as an exact non-negative dyadic real.
    pub(crate) fn norm_sqr(&self) -> DyadicReal {
        DyadicReal {
            mant: &self.re * &self.re + &self.im * &self.im,
            exp: 2 * self.exp,
        }
    }
}

/// Non-negative exact dyadic real `mant * 2^exp`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct DyadicReal {
    mant: BigInt,
    exp: i64,
}

impl DyadicReal {
    pub(crate) fn zero() -> Self {
        DyadicReal {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub(crate) fn add(&self, other: &Self) -> Self {
        if self.mant.is_zero() {
            return other.clone();
        }
        if other.mant.is_zero() {
            return self.clone();
        }
        let exp = self.exp.min(other.exp);
        DyadicReal {
            mant: (&self.mant << (self.exp - exp) as usize) + (&other.mant << (other.exp - exp) as usize),
            exp,
        }
    }

    /// Natural logarithm; `-inf` for zero.
    pub(crate) fn ln(&self) -> f64 {
        if self.mant.is_zero() {
            return f64::NEG_INFINITY;
        }
        debug_assert!(self.mant.sign() == Sign::Plus);
        let bits = self.mant.bits() as i64;
        let keep = bits.min(64);
        let top: BigInt = self.mant.abs() >> (bits - keep) as usize;
        let (_, digits) = top.to_u64_digits();
        // top / 2^keep lies in [1/2, 1), so neither term loses digits to the other
        let frac = digits.first().copied().unwrap_or(0) as f64 / (keep as f64).exp2();
        frac.ln() + (bits + self.exp) as f64 * std::f64::consts::LN_2
    }
}

/// Compares `sum(plus) - sum(minus)` with `target` exactly.
pub(crate) fn sum_cmp(plus: &[f64], minus: &[f64], target: f64) -> std::cmp::Ordering {
    let real = |x: f64| DyadicComplex::from_complex(Complex64::new(x, 0.0));
    let mut acc = real(-target);
    for &x in plus {
        acc = acc.add(&real(x));
    }
    for &x in minus {
        acc = acc.sub(&real(x));
    }
    acc.re.sign().cmp(&Sign::NoSign)
}
