//! Rigorous Gamma function and the sharp constant of the classical Sobolev
//! inequality.
//!
//! Gamma is evaluated through the Stirling asymptotic series for the log of
//! Gamma at a lifted argument in [18, 19): the series remainder after the
//! retained terms has the sign of the first omitted term and is smaller in
//! magnitude (classical enveloping property for real positive arguments), so
//! it is enclosed by `hull(0, first omitted term)`. Small arguments are
//! lifted with the recurrence Gamma(x) = Gamma(x+k) / (x (x+1) ... (x+k-1)),
//! large ones lowered with Gamma(x) = (x-1)...(x-m) Gamma(x-m). Keeping a
//! fixed base window makes enclosures for x and x+1 share the same series
//! evaluation, which keeps the recurrence test tight.

use crate::elementary::{const_pi, const_two_pi, exp, ln, pow};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::textio::parse_decimal_down;

/// Stirling coefficients B_{2k} / ((2k)(2k-1)) as exact rationals.
const STIRLING_COEFFS: [(i64, i64); 8] = [
    (1, 12),
    (-1, 360),
    (1, 1260),
    (-1, 1680),
    (1, 1188),
    (-691, 360360),
    (1, 156),
    (-3617, 122400),
];
/// First omitted coefficient, B_18 / (18*17).
const STIRLING_TAIL: (i64, i64) = (43867, 244188);

const BASE: i64 = 18;

/// ln Gamma on the base window via the Stirling series.
fn stirling_ln_gamma<F: Scalar>(z: Interval<F>) -> Interval<F> {
    debug_assert!(z.lo() >= F::from_f64(17.5));
    let half = Interval::from_ratio(1, 2).expect("2 != 0");
    let ln_z = ln(z).expect("z > 0");
    let ln_sqrt_two_pi = ln(const_two_pi::<F>()).expect("2pi > 0") * half;
    let mut acc = (z - half) * ln_z - z + ln_sqrt_two_pi;

    let z_sq = z.powi(2);
    let mut z_pow = z; // z^(2k-1)
    for (i, (num, den)) in STIRLING_COEFFS.iter().enumerate() {
        if i > 0 {
            z_pow = z_pow * z_sq;
        }
        let c = Interval::from_ratio(*num, *den).expect("den != 0");
        acc = acc + c.checked_div(z_pow).expect("z > 0");
    }
    // remainder: between zero and the first omitted term
    z_pow = z_pow * z_sq;
    let tail = Interval::from_ratio(STIRLING_TAIL.0, STIRLING_TAIL.1)
        .expect("den != 0")
        .checked_div(z_pow)
        .expect("z > 0");
    acc + tail.hull(&Interval::zero())
}

/// Gamma at a thin positive interval.
fn gamma_point<F: Scalar>(t: Interval<F>) -> Interval<F> {
    debug_assert!(t.lo() > F::zero());
    // exact small integers (19! and 20! pick up a one-ulp widening)
    if t.is_point() {
        if let Some(v) = t.lo().to_f64() {
            if v.fract() == 0.0 && (1.0..=21.0).contains(&v) {
                let mut f: i64 = 1;
                for i in 2..(v as i64) {
                    f *= i;
                }
                return Interval::from_int(f);
            }
        }
    }
    let fl = t.lo().floor().to_f64().unwrap_or(0.0) as i64;
    if fl > BASE {
        // lower: Gamma(t) = (t-1)(t-2)...(t-m) Gamma(t-m), t-m in [18, 19)
        let m = fl - BASE;
        let z = t - Interval::from_int(m);
        let mut prod = exp(stirling_ln_gamma(z));
        for i in 1..=m {
            prod = prod * (t - Interval::from_int(i));
        }
        prod
    } else {
        // lift: Gamma(t) = Gamma(t+k) / (t (t+1) ... (t+k-1))
        let k = BASE - fl;
        let z = t + Interval::from_int(k);
        let mut denom = Interval::one();
        for i in 0..k {
            denom = denom * (t + Interval::from_int(i));
        }
        exp(stirling_ln_gamma(z))
            .checked_div(denom)
            .expect("t > 0 so every lift factor is positive")
    }
}

/// Enclosure of Gamma over a positive interval.
///
/// Gamma is convex on (0, inf), so the maximum sits at an endpoint; the
/// minimum is an endpoint value unless the argument straddles the interior
/// minimum, in which case a certified lower bound for the global minimum
/// value caps the result.
pub fn gamma<F: Scalar>(x: Interval<F>) -> Result<Interval<F>> {
    if x.lo() <= F::zero() {
        return Err(Error::domain("gamma requires a strictly positive interval"));
    }
    let g_lo = gamma_point(Interval::point(x.lo()));
    if x.is_point() {
        return Ok(g_lo);
    }
    let g_hi = if x.hi().is_finite() {
        gamma_point(Interval::point(x.hi()))
    } else {
        Interval::raw(F::max_value(), F::infinity())
    };
    let hi = g_lo.hi().max(g_hi.hi());

    // the minimizer of Gamma lies strictly inside (argmin_lo, argmin_hi)
    let argmin_lo: F = parse_decimal_down("1.4616").expect("parses");
    let argmin_hi: F = parse_decimal_down("1.4617").expect("parses");
    let lo = if x.hi() <= argmin_lo {
        g_hi.lo() // decreasing on (0, argmin]
    } else if x.lo() >= argmin_hi {
        g_lo.lo() // increasing on [argmin, inf)
    } else {
        // straddles the minimum: certified lower bound of min Gamma
        let min_val: F = parse_decimal_down("0.8856031944108887002788159").expect("parses");
        g_lo.lo().min(g_hi.lo()).min(min_val)
    };
    Ok(Interval::raw(lo, hi))
}

/// Exponent triple (n, p, q) with q = np/(n+p), carried as intervals so
/// irrational quotients never lose certification.
#[derive(Debug, Clone, Copy)]
pub struct SobolevExponents<F: Scalar> {
    n: u32,
    p: Interval<F>,
    q: Interval<F>,
}

impl<F: Scalar> SobolevExponents<F> {
    /// Validates n >= 2 and p > n/(n-1), then forms q = np/(n+p).
    pub fn new(n: u32, p: Interval<F>) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("dimension must be at least 2"));
        }
        if !p.hi().is_finite() {
            return Err(Error::domain("p must be finite"));
        }
        let n_iv = Interval::from_int(n as i64);
        // strict p (n-1) > n, decided on certified endpoints
        let lhs = p * Interval::from_int(n as i64 - 1);
        if !(lhs.lo() > n_iv.hi()) {
            return Err(Error::domain(format!(
                "p must exceed n/(n-1) = {}/{}",
                n,
                n - 1
            )));
        }
        let q = (n_iv * p).checked_div(n_iv + p)?;
        Ok(Self { n, p, q })
    }

    pub fn from_f64(n: u32, p: f64) -> Result<Self> {
        Self::new(n, Interval::from_f64(p))
    }

    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn p(&self) -> Interval<F> {
        self.p
    }
    pub fn q(&self) -> Interval<F> {
        self.q
    }
}

/// Sharp constant of the classical Sobolev inequality on R^n at exponent q,
/// q = np/(n+p):
///
/// `T_p = pi^{-1/2} n^{-1/q} ((q-1)/(n-q))^{1-1/q}
///        { Gamma(1+n/2) Gamma(n) / (Gamma(n/q) Gamma(1+n-n/q)) }^{1/n}`
pub fn talenti_constant<F: Scalar>(e: &SobolevExponents<F>) -> Result<Interval<F>> {
    let n = Interval::from_int(e.n as i64);
    let q = e.q;
    let one = Interval::one();
    if !(q.lo() > F::one()) || !(q.hi() < n.lo()) {
        return Err(Error::domain("talenti constant needs 1 < q < n"));
    }

    let inv_sqrt_pi = const_pi::<F>().sqrt()?.recip()?;
    let q_recip = q.recip()?;
    let n_pow = pow(n, -q_recip)?;
    let ratio = (q - one).checked_div(n - q)?;
    let ratio_pow = pow(ratio, one - q_recip)?;

    let g1 = gamma(one + Interval::from_ratio(e.n as i64, 2)?)?;
    let g2 = gamma(n)?;
    let n_over_q = n * q_recip;
    let g3 = gamma(n_over_q)?;
    let g4 = gamma(one + n - n_over_q)?;
    let frac = (g1 * g2).checked_div(g3 * g4)?;
    let root = pow(frac, Interval::from_ratio(1, e.n as i64)?)?;

    Ok(inv_sqrt_pi * n_pow * ratio_pow * root)
}
