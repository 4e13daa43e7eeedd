//! Complex scalars stored as (natural-log magnitude, phase).
//!
//! Products of many weights, `n!` and towers like `2^(2^k)` leave the `f64`
//! range long before they leave the range of their logarithm. Every magnitude
//! in the crate is carried in this form and only materialized as a float when
//! it is known to be of moderate size.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Entries whose magnitude falls below this fraction of the larger summand are
/// treated as exact cancellation by [`LogScalar::add`].
pub const CANCEL_REL: f64 = 1e-15;

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_phase(phase: f64) -> f64 {
    if !phase.is_finite() {
        return 0.0;
    }
    if phase > -PI && phase <= PI {
        return phase;
    }
    let t = (phase + PI).rem_euclid(TAU) - PI;
    if t <= -PI {
        PI
    } else {
        t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogScalar {
    log_mag: f64,
    phase: f64,
    zero: bool,
}

impl LogScalar {
    pub const ZERO: LogScalar = LogScalar {
        log_mag: 0.0,
        phase: 0.0,
        zero: true,
    };

    pub const ONE: LogScalar = LogScalar {
        log_mag: 0.0,
        phase: 0.0,
        zero: false,
    };

    /// Builds `exp(log_mag) * exp(i*phase)`. A `-inf` log-magnitude maps to zero.
    pub fn from_log(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        debug_assert!(!log_mag.is_nan(), "NaN log-magnitude");
        LogScalar {
            log_mag,
            phase: wrap_phase(phase),
            zero: false,
        }
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x > 0.0 {
            Self::from_log(x.ln(), 0.0)
        } else {
            Self::from_log((-x).ln(), PI)
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        // hypot().ln() loses nothing for moderate values; scale extreme ones.
        let m = z.re.abs().max(z.im.abs());
        let log_mag = if m > 1e150 || m < 1e-150 {
            let s = z / m;
            m.ln() + s.norm().ln()
        } else {
            z.norm().ln()
        };
        Self::from_log(log_mag, z.im.atan2(z.re))
    }

    /// The unimodular scalar `exp(i*theta)`.
    pub fn unimodular(theta: f64) -> Self {
        Self::from_log(0.0, theta)
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn log_mag(&self) -> f64 {
        if self.zero {
            f64::NEG_INFINITY
        } else {
            self.log_mag
        }
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Magnitude as a float (may overflow to `inf` or underflow to 0).
    pub fn abs(&self) -> f64 {
        if self.zero {
            0.0
        } else {
            self.log_mag.exp()
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.zero {
            return Complex64::new(0.0, 0.0);
        }
        let m = self.log_mag.exp();
        // Axis-aligned phases stay exact.
        match self.phase {
            p if p == 0.0 => Complex64::new(m, 0.0),
            p if p == PI => Complex64::new(-m, 0.0),
            p if p == 0.5 * PI => Complex64::new(0.0, m),
            p if p == -0.5 * PI => Complex64::new(0.0, -m),
            p => Complex64::from_polar(m, p),
        }
    }

    pub fn conj(&self) -> Self {
        if self.zero {
            *self
        } else {
            Self::from_log(self.log_mag, -self.phase)
        }
    }

    /// Multiplicative inverse. Zero has no inverse and maps to itself.
    pub fn recip(&self) -> Self {
        if self.zero {
            *self
        } else {
            Self::from_log(-self.log_mag, -self.phase)
        }
    }

    /// `self^n` for a (possibly huge) integer power; `0^0 = 1`.
    pub fn powi(&self, n: u64) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.zero {
            return *self;
        }
        let nf = n as f64;
        Self::from_log(self.log_mag * nf, self.phase * nf)
    }

    /// Multiply by the positive real `exp(log_factor)`.
    pub fn scale_log(&self, log_factor: f64) -> Self {
        if self.zero {
            *self
        } else {
            Self::from_log(self.log_mag + log_factor, self.phase)
        }
    }

    /// Log-domain addition. Results below [`CANCEL_REL`] of the larger summand
    /// are flushed to zero.
    pub fn add(&self, other: &Self) -> Self {
        if self.zero {
            return *other;
        }
        if other.zero {
            return *self;
        }
        let (big, small) = if self.log_mag >= other.log_mag {
            (self, other)
        } else {
            (other, self)
        };
        let gap = small.log_mag - big.log_mag;
        // Below ~2^-60 relative the smaller term cannot change the float sum.
        if gap < -42.0 {
            return *big;
        }
        let a = Complex64::from_polar(1.0, big.phase);
        let b = Complex64::from_polar(gap.exp(), small.phase);
        let s = a + b;
        let r = s.norm();
        if r < CANCEL_REL {
            return Self::ZERO;
        }
        Self::from_log(big.log_mag + r.ln(), s.im.atan2(s.re))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&-*other)
    }
}

pub fn log_mul(a: LogScalar, b: LogScalar) -> LogScalar {
    a * b
}

impl Mul for LogScalar {
    type Output = LogScalar;

    fn mul(self, rhs: LogScalar) -> LogScalar {
        if self.zero || rhs.zero {
            return LogScalar::ZERO;
        }
        LogScalar::from_log(self.log_mag + rhs.log_mag, self.phase + rhs.phase)
    }
}

impl Div for LogScalar {
    type Output = LogScalar;

    /// Division by zero yields zero; callers check divisors where it matters.
    fn div(self, rhs: LogScalar) -> LogScalar {
        if self.zero || rhs.zero {
            return LogScalar::ZERO;
        }
        LogScalar::from_log(self.log_mag - rhs.log_mag, self.phase - rhs.phase)
    }
}

impl Neg for LogScalar {
    type Output = LogScalar;

    fn neg(self) -> LogScalar {
        if self.zero {
            self
        } else {
            LogScalar::from_log(self.log_mag, self.phase + PI)
        }
    }
}

impl From<f64> for LogScalar {
    fn from(x: f64) -> Self {
        LogScalar::from_real(x)
    }
}

impl From<Complex64> for LogScalar {
    fn from(z: Complex64) -> Self {
        LogScalar::from_complex(z)
    }
}

impl fmt::Display for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "0")
        } else {
            write!(f, "exp({})*e^(i*{})", self.log_mag, self.phase)
        }
    }
}

/// Numerically stable `ln(exp(a) + exp(b))`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_zero() {
        let s = LogScalar::from_log(3.5, -1.2);
        assert_eq!(LogScalar::ONE * s, s);
        assert!((LogScalar::ZERO * s).is_zero());
        assert_eq!(LogScalar::ZERO.phase(), 0.0);
    }

    #[test]
    fn exact_log_doubling() {
        let s = LogScalar::from_log(1024.0 * std::f64::consts::LN_2, 0.0);
        let p = log_mul(s, s);
        assert_eq!(p.log_mag(), 2048.0 * std::f64::consts::LN_2);
    }

    #[test]
    fn phase_wraps_into_half_open_interval() {
        assert_eq!(wrap_phase(-PI), PI);
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(-3.5 * PI) - 0.5 * PI).abs() < 1e-12);
        let p = LogScalar::unimodular(PI) * LogScalar::unimodular(PI);
        assert!(p.phase().abs() < 1e-15);
    }

    #[test]
    fn complex_round_trip() {
        for &(re, im) in &[(1.0, 0.0), (-2.5, 0.1), (1e-200, -3e-201), (4e250, 1e250), (0.0, -7.0)] {
            let z = Complex64::new(re, im);
            let back = LogScalar::from_complex(z).to_complex();
            assert!((back - z).norm() <= 1e-12 * z.norm(), "{z} -> {back}");
        }
    }

    #[test]
    fn addition_and_cancellation() {
        let a = LogScalar::from_real(2.0);
        let b = LogScalar::from_real(1.0);
        assert!((a.add(&b).to_complex().re - 3.0).abs() < 1e-14);
        assert!(a.sub(&a).is_zero());
        let huge = LogScalar::from_log(5000.0, 0.3);
        let sum = huge.add(&huge);
        assert!((sum.log_mag() - (5000.0 + std::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn log_add_exp_handles_infinities() {
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 2.0), 2.0);
        assert!((log_add_exp(0.0, 0.0) - std::f64::consts::LN_2).abs() < 1e-15);
    }
}
