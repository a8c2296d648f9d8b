//! Scalar abstraction for interval endpoints.
//!
//! Endpoints are plain machine floats; outward rounding is implemented by
//! computing in round-to-nearest and stepping endpoints by one ulp unless the
//! operation is provably exact. This avoids any dependence on a process-wide
//! rounding mode, so everything stays thread-safe and portable.

use core::fmt;
use core::str::FromStr;
use num_traits::Float;

/// Floating-point endpoint type: `num_traits::Float` plus ulp stepping,
/// bit access for the hex-float text form, and residual-exactness guards.
pub trait Scalar:
    Float + FromStr + fmt::Display + fmt::Debug + fmt::LowerExp + Send + Sync + 'static
{
    /// Number of explicit mantissa bits (52 for f64, 23 for f32).
    const MANTISSA_BITS: u32;
    /// Name used in report metadata.
    const NAME: &'static str;

    /// Least representable value strictly greater than `self`
    /// (`MAX` steps to `+inf`; `+inf` stays put).
    fn next_up(self) -> Self;
    /// Greatest representable value strictly less than `self`.
    fn next_down(self) -> Self;
    /// Raw bit pattern widened to u64.
    fn to_bits_u64(self) -> u64;
    fn from_bits_u64(bits: u64) -> Self;

    /// Magnitude floor below which residual-based exactness probes are not
    /// trusted (keeps the probes away from the subnormal range, where the
    /// fma-residual representability theorems stop holding).
    fn exactness_floor() -> Self;

    /// Fused multiply-add; single rounding.
    fn fma(self, a: Self, b: Self) -> Self;

    /// Threshold beyond which `exp` saturates to the representable range.
    fn exp_saturation() -> Self;

    fn from_f64(x: f64) -> Self;
    fn from_usize(n: usize) -> Self;
}

impl Scalar for f64 {
    const MANTISSA_BITS: u32 = 52;
    const NAME: &'static str = "f64";

    #[inline]
    fn next_up(self) -> Self {
        f64::next_up(self)
    }
    #[inline]
    fn next_down(self) -> Self {
        f64::next_down(self)
    }
    #[inline]
    fn to_bits_u64(self) -> u64 {
        self.to_bits()
    }
    #[inline]
    fn from_bits_u64(bits: u64) -> Self {
        f64::from_bits(bits)
    }
    #[inline]
    fn exactness_floor() -> Self {
        // 2^-900: far above the subnormal threshold 2^-1022, far below
        // every magnitude this crate works with.
        f64::powi(2.0, -900)
    }
    #[inline]
    fn fma(self, a: Self, b: Self) -> Self {
        f64::mul_add(self, a, b)
    }
    #[inline]
    fn exp_saturation() -> Self {
        709.0
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn from_usize(n: usize) -> Self {
        n as f64
    }
}

impl Scalar for f32 {
    const MANTISSA_BITS: u32 = 23;
    const NAME: &'static str = "f32";

    #[inline]
    fn next_up(self) -> Self {
        f32::next_up(self)
    }
    #[inline]
    fn next_down(self) -> Self {
        f32::next_down(self)
    }
    #[inline]
    fn to_bits_u64(self) -> u64 {
        self.to_bits() as u64
    }
    #[inline]
    fn from_bits_u64(bits: u64) -> Self {
        f32::from_bits(bits as u32)
    }
    #[inline]
    fn exactness_floor() -> Self {
        f32::powi(2.0, -100)
    }
    #[inline]
    fn fma(self, a: Self, b: Self) -> Self {
        f32::mul_add(self, a, b)
    }
    #[inline]
    fn exp_saturation() -> Self {
        88.0
    }
    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn from_usize(n: usize) -> Self {
        n as f32
    }
}

/// Round-to-nearest sum with exactness flag: the TwoSum residual is always
/// representable, so `exact` is decided without tolerance.
#[inline]
pub(crate) fn add_with_exactness<F: Scalar>(a: F, b: F) -> (F, bool) {
    let s = a + b;
    if !s.is_finite() {
        return (s, false);
    }
    let bb = s - a;
    let aa = s - bb;
    let exact = (a - aa) + (b - bb) == F::zero();
    (s, exact)
}

/// Round-to-nearest product with exactness flag. The fma residual equals
/// `a*b - s` exactly only when the product stays in the normal range, hence
/// the magnitude guard.
#[inline]
pub(crate) fn mul_with_exactness<F: Scalar>(a: F, b: F) -> (F, bool) {
    let s = a * b;
    if a == F::zero() || b == F::zero() {
        return (F::zero(), true);
    }
    if !s.is_finite() || s.abs() < F::exactness_floor() {
        return (s, false);
    }
    (s, a.fma(b, -s) == F::zero())
}

/// Round-to-nearest quotient with exactness flag (same normal-range guard).
#[inline]
pub(crate) fn div_with_exactness<F: Scalar>(a: F, b: F) -> (F, bool) {
    let s = a / b;
    if a == F::zero() {
        return (F::zero(), true);
    }
    if !s.is_finite() || s.abs() < F::exactness_floor() || a.abs() < F::exactness_floor() {
        return (s, false);
    }
    (s, s.fma(b, -a) == F::zero())
}

/// Round-to-nearest square root with exactness flag.
#[inline]
pub(crate) fn sqrt_with_exactness<F: Scalar>(x: F) -> (F, bool) {
    let s = x.sqrt();
    if x == F::zero() {
        return (F::zero(), true);
    }
    if !s.is_finite() || s.abs() < F::exactness_floor() {
        return (s, false);
    }
    (s, s.fma(s, -x) == F::zero())
}
