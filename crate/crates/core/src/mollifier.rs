//! The standard bump mollifier and its certified constants.
//!
//! The mollifier is `rho(x) = c exp(-1/(1-|x|^2))` inside the unit ball and
//! zero outside, with `c` normalizing the integral to one. Everything needed
//! downstream reduces to radial one-dimensional integrals:
//!
//! * normalization: `1/c = n V_n int_0^1 e^{-1/(1-r^2)} r^{n-1} dr`,
//! * the gradient-component integral
//!   `I1 = int |d_{x_1} rho| = 2 V_{n-1} c int_0^1 2 r^n (1-r^2)^{-2} e^{-1/(1-r^2)} dr`,
//! * the regularized-distance derivative constant
//!   `P = n V_n c int_0^1 |(n-1) - 2 r^2 (1-r^2)^{-2}| e^{-1/(1-r^2)} r^{n-1} (1-r)^{-1} dr`,
//!
//! with `V_n = pi^{n/2} / Gamma(n/2 + 1)` the unit-ball volume. The factor
//! `2 V_{n-1}` is the integral of `|w_1|` over the unit sphere.
//!
//! All three integrands vanish super-exponentially at `r = 1` but their
//! interval evaluations blow up there, so the last slice is enclosed by
//! closed-form dominating bounds (`1 - r^2 >= 1 - r` turns the exponential
//! into `e^{-1/(2(1-r))}`, integrable in closed form after `s = 1/(2(1-r))`).

use crate::elementary::{const_pi, exp, pow};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::quadrature::{integrate, IntegrandSpec, SingularCap, DEFAULT_MAX_SEGMENTS};
use crate::scalar::Scalar;

/// Certified mollifier constants for one dimension.
#[derive(Debug, Clone, Copy)]
pub struct MollifierConstants<F: Scalar> {
    pub n: u32,
    /// Normalization `c` with `int rho = 1`.
    pub c: Interval<F>,
    /// `int_{R^n} |d_{x_1} rho| dx`.
    pub i1: Interval<F>,
    /// The first-order regularized-distance constant.
    pub p: Interval<F>,
}

/// Width targets for the three radial integrals.
#[derive(Debug, Clone, Copy)]
pub struct MollifierTolerances<F: Scalar> {
    /// Relative width target for the normalization constant.
    pub c_rel: F,
    /// Absolute width target for `I1`.
    pub i1_abs: F,
    /// Absolute width target for `P`.
    pub p_abs: F,
}

impl<F: Scalar> Default for MollifierTolerances<F> {
    fn default() -> Self {
        Self {
            c_rel: F::from_f64(1e-6),
            i1_abs: F::from_f64(1e-4),
            p_abs: F::from_f64(1e-3),
        }
    }
}

impl<F: Scalar> MollifierConstants<F> {
    pub fn compute(n: u32, tol: &MollifierTolerances<F>) -> Result<Self> {
        let c = compute_normalization(n, tol.c_rel)?;
        let i1 = compute_i1_with_c(n, tol.i1_abs, c)?;
        let p = compute_p_with_c(n, tol.p_abs, c)?;
        Ok(Self { n, c, i1, p })
    }
}

/// Volume of the n-dimensional unit ball.
pub fn unit_ball_volume<F: Scalar>(n: u32) -> Result<Interval<F>> {
    if n == 0 {
        return Ok(Interval::one());
    }
    let half_n = Interval::from_ratio(n as i64, 2)?;
    let num = pow(const_pi::<F>(), half_n)?;
    let den = crate::special::gamma(half_n + Interval::one())?;
    num.checked_div(den)
}

fn check_dim(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::domain("mollifier constants need dimension n >= 2"));
    }
    if n > 16 {
        return Err(Error::domain("dimension above 16 is not supported"));
    }
    Ok(())
}

/// The radial profile `E(r) = e^{-1/(1-r^2)}` with `iw = (1-r^2)^{-1}`.
struct Profile<F: Scalar> {
    e: Interval<F>,
    iw: Interval<F>,
}

impl<F: Scalar> Profile<F> {
    fn at(r: Interval<F>) -> Result<Self> {
        let iw = (Interval::one() - r.powi(2)).recip()?;
        Ok(Self { e: exp(-iw), iw })
    }

    /// dE/dr = -2 r iw^2 E
    fn d1(&self, r: Interval<F>) -> Interval<F> {
        -(Interval::from_int(2) * r * self.iw.powi(2) * self.e)
    }

    /// d2E/dr2 = E (-2 iw^2 - 8 r^2 iw^3 + 4 r^2 iw^4)
    fn d2(&self, r: Interval<F>) -> Interval<F> {
        let two = Interval::from_int(2);
        let r_sq = r.powi(2);
        self.e
            * (-(two * self.iw.powi(2)) - Interval::from_int(8) * r_sq * self.iw.powi(3)
                + Interval::from_int(4) * r_sq * self.iw.powi(4))
    }
}

/// Normalization constant `c`, relative width <= tol.
pub fn compute_normalization<F: Scalar>(n: u32, tol: F) -> Result<Interval<F>> {
    check_dim(n)?;
    if !(tol > F::zero()) {
        return Err(Error::domain("tolerance must be positive"));
    }
    // coarse pass pins the magnitude, second pass hits the relative target
    let coarse = radial_normalization_integral(n, F::from_f64(1e-3))?;
    let target = (coarse.lo() * tol * F::from_f64(0.5)).min(F::from_f64(1e-3));
    let radial = radial_normalization_integral(n, target)?;
    let nvn = Interval::from_int(n as i64) * unit_ball_volume::<F>(n)?;
    (nvn * radial).recip()
}

/// `int_0^1 e^{-1/(1-r^2)} r^{n-1} dr`.
fn radial_normalization_integral<F: Scalar>(n: u32, target: F) -> Result<Interval<F>> {
    let f = move |r: Interval<F>| {
        let p = Profile::at(r)?;
        Ok(p.e * r.powi(n - 1))
    };
    let df = move |r: Interval<F>| {
        let p = Profile::at(r)?;
        let mut acc = p.d1(r) * r.powi(n - 1);
        acc = acc + Interval::from_int(n as i64 - 1) * r.powi(n - 2) * p.e;
        Ok(acc)
    };
    let d2f = move |r: Interval<F>| {
        let p = Profile::at(r)?;
        let mut acc = p.d2(r) * r.powi(n - 1)
            + Interval::from_int(2 * (n as i64 - 1)) * r.powi(n - 2) * p.d1(r);
        if n >= 3 {
            acc = acc + Interval::from_int((n as i64 - 1) * (n as i64 - 2)) * r.powi(n - 3) * p.e;
        }
        Ok(acc)
    };
    // cap: e^{-1/(1-r^2)} r^{n-1} <= e^{-1/(2(1-r))}; with S = 1/(2w),
    // int_{1-w}^1 <= int_S^inf e^{-s}/(2 s^2) ds <= e^{-S}/(2 S^2)
    let cap = move |w: Interval<F>| {
        let s = (Interval::from_int(2) * w).recip()?;
        exp(-s).checked_div(Interval::from_int(2) * s.powi(2))
    };
    integrate(&IntegrandSpec {
        f: &f,
        df: Some(&df),
        d2f: Some(&d2f),
        a: F::zero(),
        b: F::one(),
        singular_upper: Some(SingularCap {
            max_width: F::from_f64(0.5),
            bound_integral: &cap,
        }),
        target_width: target,
        max_segments: DEFAULT_MAX_SEGMENTS,
    })
}

/// `int_{R^n} |d_{x_1} rho| dx`, absolute width <= tol.
pub fn compute_i1<F: Scalar>(n: u32, tol: F) -> Result<Interval<F>> {
    check_dim(n)?;
    let c = compute_normalization(n, tol_to_rel(tol))?;
    compute_i1_with_c(n, tol, c)
}

fn tol_to_rel<F: Scalar>(tol: F) -> F {
    // the constants are O(1), so an absolute target maps to a comparable
    // relative one with margin
    (tol * F::from_f64(0.1)).min(F::from_f64(1e-6))
}

fn compute_i1_with_c<F: Scalar>(n: u32, tol: F, c: Interval<F>) -> Result<Interval<F>> {
    if !(tol > F::zero()) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let f = move |r: Interval<F>| {
        let p = Profile::at(r)?;
        Ok(Interval::from_int(2) * r.powi(n) * p.iw.powi(2) * p.e)
    };
    let df = move |r: Interval<F>| {
        let p = Profile::at(r)?;
        let b = p.iw.powi(2);
        let db = Interval::from_int(4) * r * p.iw.powi(3);
        Ok(Interval::from_int(2)
            * (Interval::from_int(n as i64) * r.powi(n - 1) * b * p.e
                + r.powi(n) * db * p.e
                + r.powi(n) * b * p.d1(r)))
    };
    let d2f = move |r: Interval<F>| {
        let p = Profile::at(r)?;
        let two = Interval::from_int(2);
        let a = r.powi(n);
        let da = Interval::from_int(n as i64) * r.powi(n - 1);
        let d2a = Interval::from_int(n as i64 * (n as i64 - 1)) * r.powi(n - 2);
        let b = p.iw.powi(2);
        let db = Interval::from_int(4) * r * p.iw.powi(3);
        let d2b = Interval::from_int(4) * p.iw.powi(3)
            + Interval::from_int(24) * r.powi(2) * p.iw.powi(4);
        let e = p.e;
        let de = p.d1(r);
        let d2e = p.d2(r);
        Ok(two
            * (d2a * b * e
                + two * da * db * e
                + two * da * b * de
                + a * d2b * e
                + two * a * db * de
                + a * b * d2e))
    };
    // cap: |rho_tilde'| r^{n-1} <= -dE/dr, so the slice integral telescopes
    // to E(1-w) = e^{-1/(w(2-w))}
    let cap = move |w: Interval<F>| {
        let denom = w * (Interval::from_int(2) - w);
        Ok(exp(-(denom.recip()?)))
    };
    // the radial width target absorbs the constant prefactor
    let angular = Interval::from_int(2) * unit_ball_volume::<F>(n - 1)?;
    let scale = (angular * c).hi();
    let radial = integrate(&IntegrandSpec {
        f: &f,
        df: Some(&df),
        d2f: Some(&d2f),
        a: F::zero(),
        b: F::one(),
        singular_upper: Some(SingularCap {
            max_width: F::from_f64(0.25),
            bound_integral: &cap,
        }),
        target_width: tol * F::from_f64(0.7) / scale,
        max_segments: DEFAULT_MAX_SEGMENTS,
    })?;
    Ok(angular * c * radial)
}

/// The regularized-distance constant `P`, absolute width <= tol.
pub fn compute_p<F: Scalar>(n: u32, tol: F) -> Result<Interval<F>> {
    check_dim(n)?;
    let c = compute_normalization(n, tol_to_rel(tol))?;
    compute_p_with_c(n, tol, c)
}

fn compute_p_with_c<F: Scalar>(n: u32, tol: F, c: Interval<F>) -> Result<Interval<F>> {
    if !(tol > F::zero()) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let n_i = n as i64;
    // signed bracket rho_1 / c = E * G with G = (n-1) - 2 r^2 iw^2, times
    // the radial weight H = r^{n-1} / (1-r)
    let signed = move |r: Interval<F>| -> Result<(Interval<F>, Interval<F>)> {
        let p = Profile::at(r)?;
        let g = Interval::from_int(n_i - 1) - Interval::from_int(2) * r.powi(2) * p.iw.powi(2);
        let h = r.powi(n - 1).checked_div(Interval::one() - r)?;
        let u = p.e * g * h;
        // derivative of u = E G H
        let dg = -(Interval::from_int(4) * r * p.iw.powi(2)
            + Interval::from_int(8) * r.powi(3) * p.iw.powi(3));
        let mut dh = r.powi(n - 1).checked_div((Interval::one() - r).powi(2))?;
        dh = dh + Interval::from_int(n_i - 1) * r.powi(n - 2).checked_div(Interval::one() - r)?;
        let du = p.d1(r) * g * h + p.e * dg * h + p.e * g * dh;
        Ok((u, du))
    };
    let f = move |r: Interval<F>| Ok(signed(r)?.0.abs());
    // a.e. derivative of |u|: sign-resolved, hull when the sign is unknown
    let df = move |r: Interval<F>| {
        let (u, du) = signed(r)?;
        Ok(if u.lo() > F::zero() {
            du
        } else if u.hi() < F::zero() {
            -du
        } else {
            du.hull(&-du)
        })
    };
    // cap: integrand <= e^{-1/(2(1-r))} ((n-1) + 2 (1-r)^{-2}) (1-r)^{-1};
    // with v = 1/(2(1-r)) the slice is bounded by
    // e^{-V} ((n-1)/V + 8 (V+1)), V = 1/(2w)
    let cap = move |w: Interval<F>| {
        let v = (Interval::from_int(2) * w).recip()?;
        let poly = Interval::from_int(n_i - 1).checked_div(v)?
            + Interval::from_int(8) * (v + Interval::one());
        Ok(exp(-v) * poly)
    };
    let nvn = Interval::from_int(n_i) * unit_ball_volume::<F>(n)?;
    let scale = (nvn * c).hi();
    let radial = integrate(&IntegrandSpec {
        f: &f,
        df: Some(&df),
        d2f: None,
        a: F::zero(),
        b: F::one(),
        singular_upper: Some(SingularCap {
            max_width: F::from_f64(0.25),
            bound_integral: &cap,
        }),
        target_width: tol * F::from_f64(0.7) / scale,
        max_segments: DEFAULT_MAX_SEGMENTS,
    })?;
    Ok(nvn * c * radial)
}

/// `b_eps = (4/eps) * I1`; any value at or above the upper endpoint is a
/// valid mollifier-derivative bound, the pipeline uses the enclosure.
pub fn compute_b_eps<F: Scalar>(eps: Interval<F>, i1: Interval<F>) -> Result<Interval<F>> {
    if !(eps.lo() > F::zero()) {
        return Err(Error::domain("cover parameter eps must be positive"));
    }
    (Interval::from_int(4) * i1).checked_div(eps)
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
    fn ball_volumes() {
        // V_1 = 2, V_2 = pi, V_3 = 4 pi / 3
        assert_contains(unit_ball_volume::<f64>(1).unwrap(), 2.0);
        assert_contains(unit_ball_volume::<f64>(2).unwrap(), core::f64::consts::PI);
        assert_contains(
            unit_ball_volume::<f64>(3).unwrap(),
            4.18879020478639098461685784437,
        );
        // angular factor 2 V_1 = 4
        let ang = I::from_int(2) * unit_ball_volume::<f64>(1).unwrap();
        assert_contains(ang, 4.0);
        assert!(ang.width() < 1e-12);
    }

    #[test]
    fn normalization_reference_values() {
        // 30-digit oracle: c(2), c(3)
        let c2 = compute_normalization::<f64>(2, 1e-6).unwrap();
        assert_contains(c2, 2.14356577579223660100088956288);
        assert!(c2.width() / c2.lo() <= 1e-6);
        let c3 = compute_normalization::<f64>(3, 1e-6).unwrap();
        assert_contains(c3, 2.26711673960832645841796949369);
    }

    #[test]
    fn normalization_makes_rho_integrate_to_one() {
        for n in [2u32, 3] {
            let c = compute_normalization::<f64>(n, 1e-7).unwrap();
            // independent pass at a different target re-derives the radial
            // integral; c * n V_n * radial must contain 1
            let radial = super::radial_normalization_integral::<f64>(n, 3e-9).unwrap();
            let nvn = I::from_int(n as i64) * unit_ball_volume::<f64>(n).unwrap();
            let total = c * nvn * radial;
            assert_contains(total, 1.0);
            assert!(total.width() < 1e-6);
        }
    }

    #[test]
    fn rejects_dimension_one() {
        assert!(matches!(
            compute_normalization::<f64>(1, 1e-6),
            Err(Error::Domain(_))
        ));
        assert!(matches!(compute_i1::<f64>(1, 1e-4), Err(Error::Domain(_))));
        assert!(matches!(compute_p::<f64>(1, 1e-3), Err(Error::Domain(_))));
    }

    #[test]
    fn i1_reference_values() {
        let i1 = compute_i1::<f64>(2, 1e-4).unwrap();
        // 30-digit oracle value
        assert_contains(i1, 1.90345989800256976437028246501);
        assert!(i1.width() <= 1e-4);
        // published reference window
        assert!(i1.intersects(&I::new(1.86412, 1.92770).unwrap()));

        let i13 = compute_i1::<f64>(3, 1e-4).unwrap();
        assert_contains(i13, 2.11527611161866668634825922826);
    }

    #[test]
    fn p_reference_values() {
        let p2 = compute_p::<f64>(2, 1e-3).unwrap();
        assert_contains(p2, 7.47857322676079985737077207800);
        assert!(p2.width() <= 1e-3);
        assert!(p2.intersects(&I::new(7.45592, 7.50131).unwrap()));

        let p3 = compute_p::<f64>(3, 1e-3).unwrap();
        assert_contains(p3, 11.3722049375444619067431019711);
    }

    #[test]
    fn bracket_value_at_origin() {
        // |rho_1(0)| = (n-1) rho*(0) = (n-1) c e^{-1}: the radial derivative
        // vanishes at the origin by symmetry
        let c = compute_normalization::<f64>(2, 1e-8).unwrap();
        let p = Profile::<f64>::at(I::zero()).unwrap();
        let bracket = p.e * c;
        assert_contains(bracket, 2.14356577579223660100088956288 * (-1.0f64).exp());
        assert!(p.d1(I::zero()).is_point() && p.d1(I::zero()).lo() == 0.0);
    }

    #[test]
    fn refinement_monotone_consistency() {
        let loose = compute_i1::<f64>(2, 1e-3).unwrap();
        let tight = compute_i1::<f64>(2, 1e-5).unwrap();
        assert!(loose.widen_ulps(4).intersects(&tight));
        assert!(tight.width() <= loose.width());
    }

    #[test]
    fn b_eps_scaling() {
        let i1 = compute_i1::<f64>(2, 1e-4).unwrap();
        let b = compute_b_eps(I::from_f64(0.25), i1).unwrap();
        // 16 * I1, oracle 30.4553583680411162299245194402
        assert_contains(b, 30.4553583680411162299245194402);
        assert!(b.intersects(&I::new(29.83, 30.84).unwrap()));

        let unit = compute_b_eps(I::from_f64(4.0), I::one()).unwrap();
        assert_contains(unit, 1.0);
        assert!(unit.width() <= 4.0 * f64::EPSILON);

        assert!(matches!(
            compute_b_eps(I::point(0.0), i1),
            Err(Error::Domain(_))
        ));
    }
}
