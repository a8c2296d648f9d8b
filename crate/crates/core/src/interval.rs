//! Directed-rounding interval arithmetic.
//!
//! Every operation returns an interval guaranteed to contain the exact
//! real-arithmetic image of its operands. Endpoints are computed in
//! round-to-nearest and stepped outward by one ulp unless the endpoint
//! operation is provably exact (residual probes in [`crate::scalar`]), so the
//! per-endpoint overestimation never exceeds one ulp and no global rounding
//! mode is touched.
//!
//! Unbounded endpoints (`hi = +inf`) are tolerated as saturation artifacts
//! and as integration-domain markers; they are never *required* to behave
//! like numbers, and division guards reject intervals containing zero.

use crate::error::{Error, Result};
use crate::scalar::{
    add_with_exactness, div_with_exactness, mul_with_exactness, sqrt_with_exactness, Scalar,
};
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

/// Closed interval `[lo, hi]` with outward-rounded endpoints.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval<F: Scalar> {
    lo: F,
    hi: F,
}

#[inline]
fn round_down<F: Scalar>((value, exact): (F, bool)) -> F {
    if exact {
        value
    } else {
        value.next_down()
    }
}

#[inline]
fn round_up<F: Scalar>((value, exact): (F, bool)) -> F {
    if exact {
        value
    } else {
        value.next_up()
    }
}

impl<F: Scalar> Interval<F> {
    /// Checked constructor: requires `lo <= hi` and non-NaN endpoints.
    pub fn new(lo: F, hi: F) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::domain("interval endpoint is NaN"));
        }
        if lo > hi {
            return Err(Error::domain("interval endpoints out of order"));
        }
        Ok(Self { lo, hi })
    }

    /// Internal constructor for endpoints already known to be ordered.
    #[inline]
    pub(crate) fn raw(lo: F, hi: F) -> Self {
        debug_assert!(!(lo.is_nan() || hi.is_nan()), "NaN interval endpoint");
        debug_assert!(lo <= hi, "unordered interval endpoints");
        Self { lo, hi }
    }

    /// Degenerate (point) interval.
    pub fn point(x: F) -> Self {
        debug_assert!(!x.is_nan());
        Self { lo: x, hi: x }
    }

    /// Exact zero.
    #[inline]
    pub fn zero() -> Self {
        Self::point(F::zero())
    }

    /// Exact one.
    #[inline]
    pub fn one() -> Self {
        Self::point(F::one())
    }

    /// Enclosure of an integer (exact whenever the scalar can represent it).
    pub fn from_int(n: i64) -> Self {
        let x = F::from(n).unwrap_or_else(|| {
            if n >= 0 {
                F::max_value()
            } else {
                -F::max_value()
            }
        });
        // the comparison below is exact for |n| <= 2^53, which covers every
        // integer constant this crate constructs
        let exact = n.abs() <= (1i64 << 53) && x.to_f64().map(|v| v == n as f64).unwrap_or(false);
        if exact {
            Self::point(x)
        } else {
            Self::raw(x.next_down(), x.next_up())
        }
    }

    /// Enclosure of the rational `num/den`.
    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        Self::from_int(num).checked_div(Self::from_int(den))
    }

    /// Enclosure of an `f64` parameter value (exact for `F = f64`).
    pub fn from_f64(x: f64) -> Self {
        let v = F::from_f64(x);
        if v.to_f64().map(|back| back == x).unwrap_or(false) {
            Self::point(v)
        } else {
            Self::raw(v.next_down(), v.next_up())
        }
    }

    #[inline]
    pub fn lo(&self) -> F {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> F {
        self.hi
    }

    /// Upper bound on the diameter `hi - lo`.
    pub fn width(&self) -> F {
        if self.lo == self.hi {
            F::zero()
        } else {
            round_up(add_with_exactness(self.hi, -self.lo))
        }
    }

    /// A representable point inside the interval.
    pub fn midpoint(&self) -> F {
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return if self.lo.is_finite() {
                self.lo
            } else if self.hi.is_finite() {
                self.hi
            } else {
                F::zero()
            };
        }
        let half = F::from_f64(0.5);
        let m = self.lo * half + self.hi * half;
        if m >= self.lo && m <= self.hi {
            m
        } else {
            self.lo
        }
    }

    #[inline]
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    #[inline]
    pub fn contains_value(&self, x: F) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    #[inline]
    pub fn intersects(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &Self) -> Option<Self> {
        if !self.intersects(other) {
            return None;
        }
        Some(Self::raw(self.lo.max(other.lo), self.hi.min(other.hi)))
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &Self) -> Self {
        Self::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Enclosure of `|self|`.
    pub fn abs(&self) -> Self {
        if self.lo >= F::zero() {
            *self
        } else if self.hi <= F::zero() {
            -*self
        } else {
            Self::raw(F::zero(), self.hi.max(-self.lo))
        }
    }

    /// Pointwise maximum enclosure: contains `max(x, y)` for all selections.
    pub fn max_with(&self, other: &Self) -> Self {
        Self::raw(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    /// Upper bound of `|x|` over the interval.
    pub fn mag(&self) -> F {
        self.lo.abs().max(self.hi.abs())
    }

    /// Step both endpoints outward by `n` ulp.
    pub fn widen_ulps(&self, n: u32) -> Self {
        let mut lo = self.lo;
        let mut hi = self.hi;
        for _ in 0..n {
            lo = lo.next_down();
            hi = hi.next_up();
        }
        Self::raw(lo, hi)
    }

    /// Grow the upper endpoint by the relative margin `delta` (rounded up).
    pub fn widen_hi_rel(&self, delta: F) -> Self {
        if delta == F::zero() || !self.hi.is_finite() {
            return *self;
        }
        let bump = round_up(mul_with_exactness(self.hi.abs(), delta));
        let hi = round_up(add_with_exactness(self.hi, bump));
        Self::raw(self.lo, hi.max(self.hi.next_up()))
    }

    /// Checked division; fails when `rhs` contains zero.
    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        if rhs.lo <= F::zero() && rhs.hi >= F::zero() {
            return Err(Error::domain("division by interval containing zero"));
        }
        let cands = [
            div_with_exactness(self.lo, rhs.lo),
            div_with_exactness(self.lo, rhs.hi),
            div_with_exactness(self.hi, rhs.lo),
            div_with_exactness(self.hi, rhs.hi),
        ];
        let mut lo = F::infinity();
        let mut hi = F::neg_infinity();
        for c in cands {
            lo = lo.min(round_down(c));
            hi = hi.max(round_up(c));
        }
        Ok(Self::raw(lo, hi))
    }

    /// Enclosure of `1/self`; fails when `self` contains zero.
    pub fn recip(self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    /// Enclosure of the square root; requires `lo >= 0`.
    pub fn sqrt(self) -> Result<Self> {
        if self.lo < F::zero() {
            return Err(Error::domain(
                "sqrt of interval with negative lower endpoint",
            ));
        }
        let lo = round_down(sqrt_with_exactness(self.lo)).max(F::zero());
        let hi = round_up(sqrt_with_exactness(self.hi));
        Ok(Self::raw(lo, hi))
    }

    /// Enclosure of `self^n` for a nonnegative integer exponent, with proper
    /// sign handling for even powers.
    pub fn powi(self, n: u32) -> Self {
        match n {
            0 => Self::one(),
            1 => self,
            _ => {
                if n.is_multiple_of(2) && self.lo < F::zero() && self.hi > F::zero() {
                    let m = self.abs();
                    return Self::raw(F::zero(), m.pow_pos(n).hi);
                }
                if n.is_multiple_of(2) && self.hi <= F::zero() {
                    return (-self).pow_pos(n);
                }
                if self.hi <= F::zero() {
                    // odd power of a nonpositive interval
                    return -((-self).pow_pos(n));
                }
                if self.lo >= F::zero() {
                    return self.pow_pos(n);
                }
                // odd power straddling zero: monotone, reflect the halves
                let neg = Self::raw(F::zero(), -self.lo).pow_pos(n);
                let pos = Self::raw(F::zero(), self.hi).pow_pos(n);
                Self::raw(-neg.hi, pos.hi)
            }
        }
    }

    /// Binary powering for intervals with `lo >= 0` (monotone case).
    fn pow_pos(self, n: u32) -> Self {
        debug_assert!(self.lo >= F::zero());
        let mut result = Self::one();
        let mut base = self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result * base;
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        result
    }

    /// Split at the midpoint; the halves share the split endpoint.
    pub fn bisect(&self) -> (Self, Self) {
        let m = self.midpoint();
        (Self::raw(self.lo, m), Self::raw(m, self.hi))
    }
}

impl<F: Scalar> Neg for Interval<F> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::raw(-self.hi, -self.lo)
    }
}

impl<F: Scalar> Add for Interval<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::raw(
            round_down(add_with_exactness(self.lo, rhs.lo)),
            round_up(add_with_exactness(self.hi, rhs.hi)),
        )
    }
}

impl<F: Scalar> Sub for Interval<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Scalar> Mul for Interval<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let cands = [
            mul_with_exactness(self.lo, rhs.lo),
            mul_with_exactness(self.lo, rhs.hi),
            mul_with_exactness(self.hi, rhs.lo),
            mul_with_exactness(self.hi, rhs.hi),
        ];
        let mut lo = F::infinity();
        let mut hi = F::neg_infinity();
        for c in cands {
            lo = lo.min(round_down(c));
            hi = hi.max(round_up(c));
        }
        Self::raw(lo, hi)
    }
}

impl<F: Scalar> fmt::Display for Interval<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl<F: Scalar> fmt::Debug for Interval<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
