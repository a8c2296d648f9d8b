//! Textual interval forms.
//!
//! Decimal strings are parsed with outward rounding (the decimal may not be
//! representable, so the parsed endpoint is stepped one ulp toward the safe
//! side). The hex-float form (`0x1.9p+3` style) is bit-exact and is what the
//! golden files use.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::Scalar;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Format one endpoint as a C99-style hex float. Round-trips bit-exactly
/// through [`parse_hex`].
pub fn format_hex<F: Scalar>(x: F) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x == F::infinity() {
        return "inf".to_string();
    }
    if x == F::neg_infinity() {
        return "-inf".to_string();
    }
    let sign = if x < F::zero() || (x == F::zero() && x.is_sign_negative()) {
        "-"
    } else {
        ""
    };
    if x == F::zero() {
        return format!("{sign}0x0p+0");
    }
    let (mut mant, mut exp, _) = x.integer_decode();
    // normalize so the leading bit sits at MANTISSA_BITS (subnormals decode
    // with a shorter mantissa)
    let top = 1u64 << F::MANTISSA_BITS;
    while mant < top {
        mant <<= 1;
        exp -= 1;
    }
    let frac = mant & (top - 1);
    let nibbles = F::MANTISSA_BITS.div_ceil(4);
    let frac_str = format!(
        "{:0width$x}",
        frac << (4 * nibbles - F::MANTISSA_BITS),
        width = nibbles as usize
    );
    let frac_str = frac_str.trim_end_matches('0');
    let binexp = exp as i32 + F::MANTISSA_BITS as i32;
    if frac_str.is_empty() {
        format!("{sign}0x1p{binexp:+}")
    } else {
        format!("{sign}0x1.{frac_str}p{binexp:+}")
    }
}

/// Parse a C99-style hex float produced by [`format_hex`]. Exact: fails if
/// the mantissa carries more bits than the scalar holds.
pub fn parse_hex<F: Scalar>(s: &str) -> Result<F> {
    let t = s.trim();
    match t {
        "inf" | "+inf" => return Ok(F::infinity()),
        "-inf" => return Ok(F::neg_infinity()),
        _ => {}
    }
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => (-F::one(), r),
        None => (F::one(), t.strip_prefix('+').unwrap_or(t)),
    };
    let rest = rest
        .strip_prefix("0x")
        .or_else(|| rest.strip_prefix("0X"))
        .ok_or_else(|| Error::Parse(format!("hex float missing 0x prefix: {s}")))?;
    let (mant_str, exp_str) = rest
        .split_once(['p', 'P'])
        .ok_or_else(|| Error::Parse(format!("hex float missing exponent: {s}")))?;
    let exp: i32 = exp_str
        .parse()
        .map_err(|_| Error::Parse(format!("bad hex-float exponent: {s}")))?;
    let (int_part, frac_part) = match mant_str.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant_str, ""),
    };
    let mut mant: u64 = 0;
    let mut bits_after_point: i32 = 0;
    for (idx, c) in int_part.chars().chain(frac_part.chars()).enumerate() {
        let d = c
            .to_digit(16)
            .ok_or_else(|| Error::Parse(format!("bad hex digit in {s}")))?;
        if mant > (u64::MAX >> 4) {
            return Err(Error::Parse(format!("hex mantissa too long: {s}")));
        }
        mant = (mant << 4) | d as u64;
        if idx >= int_part.len() {
            bits_after_point += 4;
        }
    }
    if mant == 0 {
        return Ok(sign * F::zero());
    }
    // value = mant * 2^(exp - bits_after_point)
    let mut value = F::from(mant)
        .ok_or_else(|| Error::Parse(format!("hex mantissa exceeds scalar precision: {s}")))?;
    if value.to_f64().map(|v| v != mant as f64).unwrap_or(true) {
        return Err(Error::Parse(format!(
            "hex mantissa exceeds scalar precision: {s}"
        )));
    }
    let scale = exp - bits_after_point;
    value = scale_by_pow2(value, scale)?;
    Ok(sign * value)
}

/// Exact scaling by 2^k (errors on overflow / total underflow).
fn scale_by_pow2<F: Scalar>(x: F, k: i32) -> Result<F> {
    let two = F::one() + F::one();
    let half = F::one() / two;
    let mut v = x;
    let mut n = k;
    while n > 0 {
        v = v * two;
        if !v.is_finite() {
            return Err(Error::Parse("hex float overflows scalar range".into()));
        }
        n -= 1;
    }
    while n < 0 {
        let prev = v;
        v = v * half;
        if v == F::zero() && prev != F::zero() {
            return Err(Error::Parse("hex float underflows scalar range".into()));
        }
        n += 1;
    }
    Ok(v)
}

/// Parse a decimal endpoint, rounding down (toward -inf) when inexact.
pub fn parse_decimal_down<F: Scalar>(s: &str) -> Result<F> {
    let v = parse_decimal_nearest::<F>(s)?;
    if v.is_infinite() {
        return Ok(v);
    }
    Ok(v.next_down())
}

/// Parse a decimal endpoint, rounding up (toward +inf) when inexact.
pub fn parse_decimal_up<F: Scalar>(s: &str) -> Result<F> {
    let v = parse_decimal_nearest::<F>(s)?;
    if v.is_infinite() {
        return Ok(v);
    }
    Ok(v.next_up())
}

fn parse_decimal_nearest<F: Scalar>(s: &str) -> Result<F> {
    let t = s.trim();
    match t {
        "inf" | "+inf" => return Ok(F::infinity()),
        "-inf" => return Ok(F::neg_infinity()),
        _ => {}
    }
    t.parse::<F>()
        .map_err(|_| Error::Parse(format!("bad decimal value: {s}")))
}

/// Enclosure of the real number denoted by a decimal literal. The platform
/// parser rounds to nearest (within half an ulp), so stepping one ulp each
/// way always contains the true value.
pub fn decimal_enclosure<F: Scalar>(s: &str) -> Result<Interval<F>> {
    let v = parse_decimal_nearest::<F>(s)?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("decimal literal out of range: {s}")));
    }
    Interval::new(v.next_down(), v.next_up())
}

/// Serialized form of an interval: decimal for humans, hex for exactness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRepr {
    pub lo_dec: String,
    pub hi_dec: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo_hex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi_hex: Option<String>,
}

impl IntervalRepr {
    pub fn of<F: Scalar>(iv: &Interval<F>) -> Self {
        IntervalRepr {
            lo_dec: format!("{}", iv.lo()),
            hi_dec: format!("{}", iv.hi()),
            lo_hex: Some(format_hex(iv.lo())),
            hi_hex: Some(format_hex(iv.hi())),
        }
    }

    /// Reconstruct the interval: hex forms win (bit-exact); decimal forms
    /// are widened outward.
    pub fn to_interval<F: Scalar>(&self) -> Result<Interval<F>> {
        let lo = match &self.lo_hex {
            Some(h) => parse_hex(h)?,
            None => parse_decimal_down(&self.lo_dec)?,
        };
        let hi = match &self.hi_hex {
            Some(h) => parse_hex(h)?,
            None => parse_decimal_up(&self.hi_dec)?,
        };
        Interval::new(lo, hi)
    }
}

impl<F: Scalar> Serialize for Interval<F> {
    fn serialize<S: Serializer>(&self, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        IntervalRepr::of(self).serialize(serializer)
    }
}

impl<'de, F: Scalar> Deserialize<'de> for Interval<F> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Self, D::Error> {
        let repr = IntervalRepr::deserialize(deserializer)?;
        repr.to_interval().map_err(D::Error::custom)
    }
}
