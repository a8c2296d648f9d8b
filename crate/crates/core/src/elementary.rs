//! Rigorous elementary functions and mathematical constants.
//!
//! Monotone functions are evaluated at interval endpoints; each endpoint goes
//! through an argument reduction in interval arithmetic followed by a
//! truncated series whose remainder is bounded analytically and added as an
//! outward widening. Nothing here depends on the platform libm for
//! correctness: only `+ - * / sqrt` (directed via ulp stepping) and exact
//! power-of-two scalings are trusted.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::textio::decimal_enclosure;

// 40-digit reference constants; parsed with outward rounding into 2-ulp
// enclosures at crate use sites.
const PI_DEC: &str = "3.141592653589793238462643383279502884197";
const E_DEC: &str = "2.718281828459045235360287471352662497757";
const LN2_DEC: &str = "0.6931471805599453094172321214581765680755";

/// Enclosure of pi, width <= 2 ulp.
pub fn const_pi<F: Scalar>() -> Interval<F> {
    decimal_enclosure(PI_DEC).expect("pi constant parses")
}

/// Enclosure of Euler's number e, width <= 2 ulp.
pub fn const_e<F: Scalar>() -> Interval<F> {
    decimal_enclosure(E_DEC).expect("e constant parses")
}

/// Enclosure of ln 2, width <= 2 ulp.
pub fn const_ln2<F: Scalar>() -> Interval<F> {
    decimal_enclosure(LN2_DEC).expect("ln2 constant parses")
}

pub fn const_two_pi<F: Scalar>() -> Interval<F> {
    const_pi::<F>() * Interval::from_int(2)
}

pub fn const_half_pi<F: Scalar>() -> Interval<F> {
    const_pi::<F>()
        .checked_div(Interval::from_int(2))
        .expect("2 is nonzero")
}

/// Point interval for k! (exact through 18! in f64; widened above).
fn factorial<F: Scalar>(k: u32) -> Interval<F> {
    let mut f: i64 = 1;
    for i in 2..=k as i64 {
        f *= i;
    }
    Interval::from_int(f)
}

/// Exact interval 2^k (errors never: saturates to [max, inf) / [0, min]).
fn pow2<F: Scalar>(k: i64) -> Interval<F> {
    let two = Interval::from_int(2);
    let mag = k.unsigned_abs().min(u32::MAX as u64) as u32;
    let p = two.powi(mag);
    if k >= 0 {
        p
    } else {
        // dividing one by an exact power of two is exact until underflow,
        // where the residual probe widens automatically
        Interval::one()
            .checked_div(p)
            .expect("power of two is positive")
    }
}

/// exp over an interval (monotone; saturates far outside the scalar range).
pub fn exp<F: Scalar>(x: Interval<F>) -> Interval<F> {
    let lo = exp_point(x.lo()).lo();
    let hi = exp_point(x.hi()).hi();
    Interval::raw(lo.max(F::zero()), hi)
}

/// Enclosure of e^v for a single endpoint.
fn exp_point<F: Scalar>(v: F) -> Interval<F> {
    if v >= F::exp_saturation() {
        return Interval::raw(F::max_value(), F::infinity());
    }
    if v <= -F::exp_saturation() {
        return Interval::raw(F::zero(), F::min_positive_value());
    }
    let ln2 = const_ln2::<F>();
    let k = (v / ln2.midpoint()).round().to_f64().unwrap_or(0.0) as i64;
    let r = Interval::point(v) - Interval::from_int(k) * ln2;
    exp_series(r) * pow2(k)
}

/// Taylor series for e^r on reduced arguments |r| <= 0.36.
fn exp_series<F: Scalar>(r: Interval<F>) -> Interval<F> {
    const TERMS: u32 = 14;
    let mut sum = Interval::one();
    let mut term = Interval::one();
    for i in 1..TERMS {
        term = term * r.checked_div(Interval::from_int(i as i64)).expect("i > 0");
        sum = sum + term;
    }
    // remainder: m^N/N! * (N+1)/(N+1-m) bounds the geometric tail
    let m = Interval::point(r.mag());
    let n1 = Interval::from_int(TERMS as i64 + 1);
    let rem = m
        .powi(TERMS)
        .checked_div(factorial(TERMS))
        .expect("factorial positive")
        * n1.checked_div(n1 - m).expect("m < N+1");
    sum + Interval::raw(-rem.hi(), rem.hi())
}

/// Natural logarithm; requires `x.lo > 0`.
pub fn ln<F: Scalar>(x: Interval<F>) -> Result<Interval<F>> {
    if x.lo() <= F::zero() {
        return Err(Error::domain("log requires a strictly positive interval"));
    }
    let lo = ln_point(x.lo())?.lo();
    let hi = if x.hi().is_finite() {
        ln_point(x.hi())?.hi()
    } else {
        F::infinity()
    };
    Ok(Interval::raw(lo, hi))
}

fn ln_point<F: Scalar>(v: F) -> Result<Interval<F>> {
    debug_assert!(v > F::zero() && v.is_finite());
    let half = F::from_f64(0.5);
    let two = F::from_f64(2.0);
    // exact scalings: m in [0.75, 1.5), v = m * 2^k
    let mut m = v;
    let mut k: i64 = 0;
    while m >= F::from_f64(1.5) {
        m = m * half;
        k += 1;
    }
    while m < F::from_f64(0.75) {
        m = m * two;
        k -= 1;
    }
    let mi = Interval::point(m);
    let t = (mi - Interval::one())
        .checked_div(mi + Interval::one())
        .expect("m + 1 > 0");
    Ok(Interval::from_int(k) * const_ln2::<F>() + atanh_series(t) * Interval::from_int(2))
}

/// atanh series on |t| <= 1/5 (reduced from m in [0.75, 1.5)).
fn atanh_series<F: Scalar>(t: Interval<F>) -> Interval<F> {
    const TERMS: u32 = 11;
    let t_sq = t.powi(2);
    let mut pow = t;
    let mut sum = t;
    for j in 1..TERMS {
        pow = pow * t_sq;
        sum = sum
            + pow
                .checked_div(Interval::from_int(2 * j as i64 + 1))
                .expect("odd > 0");
    }
    let m = Interval::point(t.mag());
    let m_sq = m.powi(2);
    let rem = m
        .powi(2 * TERMS + 1)
        .checked_div(Interval::from_int(2 * TERMS as i64 + 1) * (Interval::one() - m_sq))
        .expect("|t| < 1");
    sum + Interval::raw(-rem.hi(), rem.hi())
}

/// Sine over an interval, with certified argument reduction.
pub fn sin<F: Scalar>(x: Interval<F>) -> Interval<F> {
    let unit = Interval::raw(-F::one(), F::one());
    if !x.lo().is_finite() || !x.hi().is_finite() {
        return unit;
    }
    let two_pi = const_two_pi::<F>();
    let big = F::from_f64(1.099511627776e12); // 2^40: beyond this the reduction is too loose
    if x.width() >= two_pi.hi() || x.mag() > big {
        return unit;
    }
    let k = (x.lo() / two_pi.midpoint()).floor().to_f64().unwrap_or(0.0) as i64;
    let y = x - Interval::from_int(k) * two_pi;

    let half_pi = const_half_pi::<F>();
    let three = Interval::from_int(3);
    // peaks (sin = 1) at pi/2 + 2m*pi, troughs at 3pi/2 + 2m*pi
    let peak = contains_integer((y - half_pi).checked_div(two_pi).expect("2pi > 0"));
    let trough = contains_integer((y - half_pi * three).checked_div(two_pi).expect("2pi > 0"));

    let s_lo = sin_point(y.lo());
    let s_hi = sin_point(y.hi());
    let hi = if peak {
        F::one()
    } else {
        s_lo.hi().max(s_hi.hi())
    };
    let lo = if trough {
        -F::one()
    } else {
        s_lo.lo().min(s_hi.lo())
    };
    Interval::raw(lo.max(-F::one()), hi.min(F::one()))
}

/// Cosine via the shift identity cos x = sin(x + pi/2).
pub fn cos<F: Scalar>(x: Interval<F>) -> Interval<F> {
    sin(x + const_half_pi::<F>())
}

fn contains_integer<F: Scalar>(t: Interval<F>) -> bool {
    t.hi().floor() >= t.lo().ceil()
}

/// Enclosure of sin at a single point, via quadrant reduction mod pi/2.
fn sin_point<F: Scalar>(v: F) -> Interval<F> {
    let half_pi = const_half_pi::<F>();
    let n = (v / half_pi.midpoint()).round().to_f64().unwrap_or(0.0) as i64;
    let r = Interval::point(v) - Interval::from_int(n) * half_pi;
    let out = match n.rem_euclid(4) {
        0 => sin_series(r),
        1 => cos_series(r),
        2 => -sin_series(r),
        _ => -cos_series(r),
    };
    let unit = Interval::raw(-F::one(), F::one());
    out.intersection(&unit).unwrap_or(unit)
}

/// Taylor series for sin on |r| <= pi/4 + slack.
fn sin_series<F: Scalar>(r: Interval<F>) -> Interval<F> {
    const J: u32 = 8;
    let r_sq = r.powi(2);
    let mut term = r;
    let mut sum = r;
    for j in 1..J {
        term = term * r_sq;
        let denom = Interval::from_int((2 * j as i64) * (2 * j as i64 + 1));
        term = -(term.checked_div(denom).expect("denom > 0"));
        sum = sum + term;
    }
    let rem = remainder_bound(r.mag(), 2 * J + 1);
    sum + rem
}

/// Taylor series for cos on |r| <= pi/4 + slack.
fn cos_series<F: Scalar>(r: Interval<F>) -> Interval<F> {
    const J: u32 = 9;
    let r_sq = r.powi(2);
    let mut term = Interval::one();
    let mut sum = Interval::one();
    for j in 1..J {
        term = term * r_sq;
        let denom = Interval::from_int((2 * j as i64 - 1) * (2 * j as i64));
        term = -(term.checked_div(denom).expect("denom > 0"));
        sum = sum + term;
    }
    let rem = remainder_bound(r.mag(), 2 * J);
    sum + rem
}

/// Universal Taylor remainder [-m^d/d!, +m^d/d!] (all sin/cos derivatives
/// are bounded by one).
fn remainder_bound<F: Scalar>(m: F, degree: u32) -> Interval<F> {
    let b = Interval::point(m)
        .powi(degree)
        .checked_div(factorial(degree))
        .expect("factorial positive");
    Interval::raw(-b.hi(), b.hi())
}

/// Real power x^y = exp(y ln x); requires `x.lo > 0`. Point integer
/// exponents take the tighter `powi` route.
pub fn pow<F: Scalar>(x: Interval<F>, y: Interval<F>) -> Result<Interval<F>> {
    if y.is_point() {
        if let Some(n) = y
            .lo()
            .to_f64()
            .and_then(|v| (v.fract() == 0.0 && v.abs() <= 64.0).then_some(v as i64))
        {
            if n >= 0 {
                return Ok(x.powi(n as u32));
            }
            if x.lo() > F::zero() {
                return x.powi((-n) as u32).recip();
            }
        }
    }
    if x.lo() <= F::zero() {
        return Err(Error::domain("pow requires a strictly positive base"));
    }
    Ok(exp(y * ln(x)?))
}

/// n-th root for nonnegative intervals (even or odd n >= 1).
pub fn nth_root<F: Scalar>(x: Interval<F>, n: u32) -> Result<Interval<F>> {
    if n == 0 {
        return Err(Error::domain("0th root undefined"));
    }
    if x.lo() < F::zero() {
        return Err(Error::domain("nth_root requires a nonnegative interval"));
    }
    if n == 1 {
        return Ok(x);
    }
    if n == 2 {
        return x.sqrt();
    }
    let lo = if x.lo() == F::zero() {
        F::zero()
    } else {
        root_point(x.lo(), n)?.lo().max(F::zero())
    };
    let hi = if x.hi() == F::zero() {
        F::zero()
    } else if x.hi().is_finite() {
        root_point(x.hi(), n)?.hi()
    } else {
        F::infinity()
    };
    Ok(Interval::raw(lo, hi))
}

fn root_point<F: Scalar>(v: F, n: u32) -> Result<Interval<F>> {
    let ln_v = ln_point(v)?;
    Ok(exp(ln_v
        .checked_div(Interval::from_int(n as i64))
        .expect("n > 0")))
}

#[cfg(test)]
#[allow(clippy::excessive_precision, clippy::approx_constant)] // frozen oracle digits
mod tests {
    use super::*;
    type I = Interval<f64>;

    fn assert_contains(iv: I, v: f64) {
        assert!(iv.lo() <= v && v <= iv.hi(), "{iv} should contain {v}");
    }

    #[test]
    fn constants_are_tight() {
        let pi = const_pi::<f64>();
        assert_contains(pi, core::f64::consts::PI);
        assert!(pi.width() <= 2.0 * f64::EPSILON * 4.0);
        let e = const_e::<f64>();
        assert_contains(e, core::f64::consts::E);
        assert!(e.width() <= 2.0 * f64::EPSILON * 4.0);
    }

    #[test]
    fn exp_of_zero_is_exactly_one() {
        let r = exp(I::zero());
        assert_contains(r, 1.0);
        assert!(r.width() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn exp_reference_values() {
        // 30+ digit reference values
        assert_contains(exp(I::point(1.0)), 2.718281828459045235360287471352);
        assert_contains(exp(I::point(0.5)), 1.648721270700128146848650787814);
        assert_contains(exp(I::point(-3.25)), 0.03877420783172200988689983526759);
        assert_contains(exp(I::point(10.0)), 22026.46579480671651695790064528);
        let w = exp(I::point(1.0)).width() / core::f64::consts::E;
        assert!(w < 1e-14, "relative width {w}");
    }

    #[test]
    fn exp_saturates_soundly() {
        let big = exp(I::point(800.0));
        assert_eq!(big.hi(), f64::INFINITY);
        assert!(big.lo() >= f64::MAX);
        let tiny = exp(I::point(-800.0));
        assert!(tiny.lo() >= 0.0 && tiny.hi() <= f64::MIN_POSITIVE);
    }

    #[test]
    fn ln_reference_values() {
        assert_contains(
            ln(I::point(10.0)).unwrap(),
            2.302585092994045684017991454684,
        );
        assert_contains(
            ln(I::point(0.1)).unwrap(),
            -2.302585092994045684017991454684,
        );
        assert_contains(
            ln(I::point(1.5)).unwrap(),
            0.4054651081081643819780131154643,
        );
        assert_contains(ln(I::point(1.0)).unwrap(), 0.0);
        assert_contains(ln(const_e::<f64>()).unwrap(), 1.0);
        assert!(matches!(
            ln(I::new(0.0, 1.0).unwrap()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn ln_exp_compose_to_identity() {
        for v in [0.001, 0.3, 1.0, 2.5, 77.0, 1e8] {
            let iv = exp(ln(I::point(v)).unwrap());
            assert_contains(iv, v);
            assert!(iv.width() / v < 1e-13);
        }
    }

    #[test]
    fn sin_reference_values() {
        assert_contains(sin(I::point(1.0)), 0.8414709848078965066525023216303);
        assert_contains(sin(I::point(0.5)), 0.4794255386042030002732879352156);
        assert_contains(sin(I::point(3.0)), 0.1411200080598672221007448028081);
        assert_contains(sin(I::point(10.0)), -0.5440211108893698134047476618514);
        assert_contains(sin(I::point(100.0)), -0.5063656411097587936565576104598);
        assert_contains(sin(I::zero()), 0.0);
        assert!(sin(I::zero()).width() <= f64::EPSILON);
    }

    #[test]
    fn cos_reference_values() {
        assert_contains(cos(I::point(1.0)), 0.5403023058681397174009366074430);
        assert_contains(cos(I::point(10.0)), -0.8390715290764524522588639478241);
        assert_contains(cos(I::zero()), 1.0);
    }

    #[test]
    fn sin_wide_intervals_hit_extrema() {
        let s = sin(I::new(0.0, 7.0).unwrap());
        assert!(s.hi() == 1.0 && s.lo() == -1.0);
        let s = sin(I::new(1.0, 2.0).unwrap()); // contains pi/2
        assert_eq!(s.hi(), 1.0);
        assert!(s.lo() <= 0.9092974268256817 && s.lo() >= 0.84);
        let s = sin(I::new(3.5, 5.5).unwrap()); // contains 3pi/2
        assert_eq!(s.lo(), -1.0);
    }

    #[test]
    fn pow_and_roots() {
        assert_contains(
            pow(I::point(2.0), I::point(0.3)).unwrap(),
            1.231144413344916284499393069168,
        );
        assert_contains(
            pow(I::point(2.0), I::point(-0.7)).unwrap(),
            0.6155722066724581422496965345839,
        );
        assert_contains(pow(I::point(2.0), I::point(10.0)).unwrap(), 1024.0);
        assert!(pow(I::point(2.0), I::point(10.0)).unwrap().is_point());
        assert_contains(
            nth_root(I::point(5.0), 3).unwrap(),
            1.709975946676696989353108872544,
        );
        assert_contains(
            nth_root(I::point(7.0), 5).unwrap(),
            1.475773161594552069276916695632,
        );
        assert_contains(nth_root(I::new(0.0, 16.0).unwrap(), 4).unwrap(), 0.0);
        assert_contains(nth_root(I::new(0.0, 16.0).unwrap(), 4).unwrap(), 2.0);
        assert!(matches!(
            pow(I::new(-1.0, 1.0).unwrap(), I::point(0.5)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn f32_instantiation_still_encloses() {
        let pi = const_pi::<f32>();
        assert!(pi.lo() <= core::f32::consts::PI && core::f32::consts::PI <= pi.hi());
        let s = sin(Interval::<f32>::point(1.0));
        assert!(s.lo() <= 0.84147096 && 0.84147099 <= s.hi());
        let e = exp(Interval::<f32>::point(1.0));
        assert!(e.lo() <= core::f32::consts::E && core::f32::consts::E <= e.hi());
    }
}
