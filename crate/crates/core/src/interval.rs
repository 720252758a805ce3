//! Outward-rounded interval arithmetic.
//!
//! Integer and rational quantities in this crate are carried exactly; the
//! only values that cannot be are the analytic ones (Dedekind zeta values,
//! covolumes, and everything derived from them). Those are carried as a
//! [`BoundedValue`], a closed interval known to contain the true real
//! number. Every operation widens the result by at least one ulp on each
//! side, so enclosures stay enclosures under composition. Transcendental
//! functions from libm are not correctly rounded, so they get a two-ulp
//! margin.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// A real value enclosed by the closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundedValue {
    pub lo: f64,
    pub hi: f64,
}

fn dn(x: f64) -> f64 {
    x.next_down()
}

fn up(x: f64) -> f64 {
    x.next_up()
}

/// Two ulps down, for values produced by libm rather than IEEE ops.
fn dn2(x: f64) -> f64 {
    x.next_down().next_down()
}

fn up2(x: f64) -> f64 {
    x.next_up().next_up()
}

impl BoundedValue {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        BoundedValue { lo, hi }
    }

    /// Point interval for a value that is exact in f64.
    pub fn exact(x: f64) -> Self {
        BoundedValue { lo: x, hi: x }
    }

    /// Enclosure of an exact rational number.
    pub fn from_rational(q: &BigRational) -> Self {
        // Ratio::to_f64 is accurate to an ulp or so; pad by two on each side.
        let approx = q.to_f64().expect("rational out of f64 range");
        BoundedValue {
            lo: dn2(approx),
            hi: up2(approx),
        }
    }

    /// Enclosure of sqrt(x) for exact nonnegative x. IEEE sqrt is correctly
    /// rounded, so one ulp each way suffices.
    pub fn sqrt_of(x: f64) -> Self {
        assert!(x >= 0.0);
        let s = x.sqrt();
        BoundedValue {
            lo: dn(s).max(0.0),
            hi: up(s),
        }
    }

    /// Enclosure of base^e for exact positive base and arbitrary exact e.
    pub fn pow_of(base: f64, e: f64) -> Self {
        assert!(base > 0.0);
        let v = base.powf(e);
        BoundedValue {
            lo: dn2(v).max(0.0),
            hi: up2(v),
        }
    }

    /// Enclosure of pi.
    pub fn pi() -> Self {
        BoundedValue {
            lo: dn(std::f64::consts::PI),
            hi: up(std::f64::consts::PI),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &BoundedValue) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn add(&self, rhs: &BoundedValue) -> Self {
        BoundedValue {
            lo: dn(self.lo + rhs.lo),
            hi: up(self.hi + rhs.hi),
        }
    }

    pub fn sub(&self, rhs: &BoundedValue) -> Self {
        BoundedValue {
            lo: dn(self.lo - rhs.hi),
            hi: up(self.hi - rhs.lo),
        }
    }

    pub fn mul(&self, rhs: &BoundedValue) -> Self {
        let cands = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = cands.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = cands.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        BoundedValue {
            lo: dn(lo),
            hi: up(hi),
        }
    }

    /// Division by an interval that does not contain zero.
    pub fn div(&self, rhs: &BoundedValue) -> Self {
        assert!(
            rhs.lo > 0.0 || rhs.hi < 0.0,
            "division by interval containing zero"
        );
        let cands = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        let lo = cands.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = cands.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        BoundedValue {
            lo: dn(lo),
            hi: up(hi),
        }
    }

    /// Reciprocal of a strictly positive interval.
    pub fn recip_positive(&self) -> Self {
        assert!(self.lo > 0.0, "recip_positive needs lo > 0");
        BoundedValue {
            lo: dn(1.0 / self.hi),
            hi: up(1.0 / self.lo),
        }
    }

    /// Integer power. Negative exponents require a sign-definite interval.
    pub fn powi(&self, k: i32) -> Self {
        if k == 0 {
            return BoundedValue::exact(1.0);
        }
        if k < 0 {
            return self.powi(-k).recip_positive();
        }
        let mut acc = BoundedValue::exact(1.0);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Enclosure of x^e for a positive interval and exact exponent e,
    /// using monotonicity of t -> t^e.
    pub fn powf(&self, e: f64) -> Self {
        assert!(self.lo > 0.0, "powf needs a positive interval");
        let a = BoundedValue::pow_of(self.lo, e);
        let b = BoundedValue::pow_of(self.hi, e);
        BoundedValue {
            lo: a.lo.min(b.lo),
            hi: a.hi.max(b.hi),
        }
    }

    /// Enclosure of exp over the interval.
    pub fn exp(&self) -> Self {
        BoundedValue {
            lo: dn2(self.lo.exp()),
            hi: up2(self.hi.exp()),
        }
    }

    /// Widen an approximate value into an interval by a relative margin.
    /// Used for documented approximations (e.g. the Lanczos gamma series).
    pub fn with_relative_margin(x: f64, rel: f64) -> Self {
        let pad = x.abs() * rel;
        BoundedValue {
            lo: dn(x - pad),
            hi: up(x + pad),
        }
    }
}

impl std::fmt::Display for BoundedValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:.12e}, {:.12e}]", self.lo, self.hi)
    }
}
