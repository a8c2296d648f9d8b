//! The oscillatory weight kernel of the extension operator and its certified
//! constants.
//!
//! The kernel is
//!
//! `psi(t) = (e^{C_w} / (pi t)) * e^{-a s} * sin(a s)`,  `a = C_w / sqrt 2`,
//! `s = (t - 1)^{1/4}`,
//!
//! the real form of `Im e^{-w (t-1)^{1/4}}` for `w = C_w e^{-i pi/4}` with
//! the prefactor normalized so that `int_1^inf psi dt = 1` holds for every
//! `C_w > 0` (and all higher moments vanish).
//!
//! Both the supremum search for `A_k = sup |t^k psi|` and the moment
//! integrals work in the root variable `u = (t - 1)^{1/4}`, where the cusp
//! at `t = 1` disappears:
//!
//! `t^k psi(t) = (e^{C_w}/pi) (1+u^4)^{k-1} e^{-au} sin(au)`.

use crate::elementary::{const_pi, cos, exp, nth_root, sin};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::quadrature::{integrate, integrate_tail, IntegrandSpec, TailSpec, DEFAULT_MAX_SEGMENTS};
use crate::scalar::Scalar;

use std::collections::BinaryHeap;

/// Default width target for the supremum enclosures.
pub const SUP_TOL_DEFAULT: f64 = 1e-3;
/// Default width target for the moment enclosures.
pub const MOMENT_TOL_DEFAULT: f64 = 1e-6;

/// Free parameter of the kernel.
#[derive(Debug, Clone, Copy)]
pub struct PsiParams<F: Scalar> {
    c_omega: F,
}

impl<F: Scalar> PsiParams<F> {
    pub fn new(c_omega: F) -> Result<Self> {
        if !(c_omega > F::zero()) || !c_omega.is_finite() {
            return Err(Error::domain("C_omega must be positive and finite"));
        }
        Ok(Self { c_omega })
    }

    pub fn c_omega(&self) -> F {
        self.c_omega
    }
}

/// Certified kernel constants `A0 >= sup |t^2 psi|`, `A1 >= sup |t^3 psi|`.
#[derive(Debug, Clone, Copy)]
pub struct KernelConstants<F: Scalar> {
    pub a0: Interval<F>,
    pub a1: Interval<F>,
    pub c_omega: F,
}

impl<F: Scalar> KernelConstants<F> {
    /// Compute both sup constants at the given width target.
    pub fn compute(params: &PsiParams<F>, tol: F) -> Result<Self> {
        let a0 = compute_sup_constant(2, params, tol)?;
        let a1 = compute_sup_constant(3, params, tol)?;
        Ok(Self {
            a0: a0.value,
            a1: a1.value,
            c_omega: params.c_omega,
        })
    }
}

/// Shared evaluation context: `a = C_w/sqrt 2` and the prefactor
/// `e^{C_w}/pi`, both as enclosures.
struct Kernel<F: Scalar> {
    a: Interval<F>,
    prefactor: Interval<F>,
}

impl<F: Scalar> Kernel<F> {
    fn new(params: &PsiParams<F>) -> Self {
        let sqrt2 = Interval::from_int(2).sqrt().expect("2 >= 0");
        let c = Interval::point(params.c_omega);
        let a = c.checked_div(sqrt2).expect("sqrt 2 > 0");
        let prefactor = exp(c).checked_div(const_pi::<F>()).expect("pi > 0");
        Self { a, prefactor }
    }

    /// `t^k psi(t)` through `t = 1 + u^4`, smooth in `u >= 0`.
    fn weighted_in_u(&self, u: Interval<F>, k: i32) -> Interval<F> {
        let t = Interval::one() + u.powi(4);
        let au = self.a * u;
        self.prefactor * powik(t, k - 1) * exp(-au) * sin(au)
    }

    /// u-derivative of `(1+u^4)^{k-1} e^{-au} sin(au) * extra`, used by the
    /// moment quadrature (extra = 4u^3).
    fn moment_integrand(&self, u: Interval<F>, m: i32) -> Interval<F> {
        let four_u3 = Interval::from_int(4) * u.powi(3);
        self.weighted_in_u(u, m) * four_u3
    }

    fn moment_integrand_derivative(&self, u: Interval<F>, m: i32) -> Interval<F> {
        let t = Interval::one() + u.powi(4);
        let au = self.a * u;
        let p = powik(t, m - 1);
        let dp = Interval::from_int(4 * (m as i64 - 1)) * powik(t, m - 2) * u.powi(3);
        let e = exp(-au);
        let s = sin(au);
        let c = cos(au);
        let g4 = Interval::from_int(4) * u.powi(3);
        let dg4 = Interval::from_int(12) * u.powi(2);
        // product rule over p * (e s) * g4, with (e s)' = a e (c - s)
        let w = e * s;
        let dw = self.a * e * (c - s);
        let term1 = dp * w * g4;
        let term2 = p * dw * g4;
        let term3 = p * w * dg4;
        self.prefactor * (term1 + term2 + term3)
    }

    fn moment_integrand_second_derivative(&self, u: Interval<F>, m: i32) -> Interval<F> {
        let mm = m as i64;
        let t = Interval::one() + u.powi(4);
        let au = self.a * u;
        let e = exp(-au);
        let s = sin(au);
        let c = cos(au);
        let two = Interval::from_int(2);

        let p = powik(t, m - 1);
        let dp = Interval::from_int(4 * (mm - 1)) * powik(t, m - 2) * u.powi(3);
        let d2p = Interval::from_int(12 * (mm - 1)) * powik(t, m - 2) * u.powi(2)
            + Interval::from_int(16 * (mm - 1) * (mm - 2)) * powik(t, m - 3) * u.powi(6);

        // W = e^{-au} sin(au): W' = a e (c - s), W'' = -2 a^2 e c
        let w = e * s;
        let dw = self.a * e * (c - s);
        let d2w = -(two * self.a.powi(2) * e * c);

        let q = Interval::from_int(4) * u.powi(3);
        let dq = Interval::from_int(12) * u.powi(2);
        let d2q = Interval::from_int(24) * u;

        let acc = d2p * w * q
            + two * dp * dw * q
            + two * dp * w * dq
            + p * d2w * q
            + two * p * dw * dq
            + p * w * d2q;
        self.prefactor * acc
    }

    /// `t^m psi(t)` directly in `t` (valid for `t.lo > 1`).
    fn weighted_in_t(&self, t: Interval<F>, m: i32) -> Result<Interval<F>> {
        let s = nth_root(t - Interval::one(), 4)?;
        let as_ = self.a * s;
        Ok(self.prefactor * powik(t, m - 1) * exp(-as_) * sin(as_))
    }

    /// t-derivative of `t^m psi(t)` (valid for `t.lo > 1`).
    fn weighted_in_t_derivative(&self, t: Interval<F>, m: i32) -> Result<Interval<F>> {
        let one = Interval::one();
        let s = nth_root(t - one, 4)?;
        let as_ = self.a * s;
        let e = exp(-as_);
        let sn = sin(as_);
        let cs = cos(as_);
        // s'(t) = 1 / (4 s^3)
        let ds = (Interval::from_int(4) * s.powi(3)).recip()?;
        let term1 = Interval::from_int(m as i64 - 1) * powik(t, m - 2) * e * sn;
        let term2 = powik(t, m - 1) * self.a * ds * e * (cs - sn);
        Ok(self.prefactor * (term1 + term2))
    }

    /// Second t-derivative of `t^m psi(t)` (valid for `t.lo > 1`).
    fn weighted_in_t_second_derivative(&self, t: Interval<F>, m: i32) -> Result<Interval<F>> {
        let mm = m as i64;
        let one = Interval::one();
        let two = Interval::from_int(2);
        let s = nth_root(t - one, 4)?;
        let as_ = self.a * s;
        let e = exp(-as_);
        let sn = sin(as_);
        let cs = cos(as_);
        let w = e * sn;
        let dw_ds = self.a * e * (cs - sn);
        let d2w_ds2 = -(two * self.a.powi(2) * e * cs);
        // s' = 1/(4 s^3), s'' = -3/(16 s^7)
        let ds = (Interval::from_int(4) * s.powi(3)).recip()?;
        let d2s = -(Interval::from_int(3).checked_div(Interval::from_int(16) * s.powi(7))?);
        let p = powik(t, m - 1);
        let dp = Interval::from_int(mm - 1) * powik(t, m - 2);
        let d2p = Interval::from_int((mm - 1) * (mm - 2)) * powik(t, m - 3);
        let acc = d2p * w + two * dp * dw_ds * ds + p * (d2w_ds2 * ds.powi(2) + dw_ds * d2s);
        Ok(self.prefactor * acc)
    }
}

/// Integer powers with possibly negative exponent (base must be positive
/// for negative exponents).
fn powik<F: Scalar>(base: Interval<F>, e: i32) -> Interval<F> {
    if e >= 0 {
        base.powi(e as u32)
    } else {
        base.powi((-e) as u32)
            .recip()
            .expect("negative integer power of a positive interval")
    }
}

/// Evaluate the kernel on a `t`-interval; requires `t.lo >= 1`.
pub fn psi_eval<F: Scalar>(t: Interval<F>, params: &PsiParams<F>) -> Result<Interval<F>> {
    if t.lo() < F::one() {
        return Err(Error::domain("psi is only defined for t >= 1"));
    }
    let kernel = Kernel::new(params);
    let s = nth_root(t - Interval::one(), 4)?;
    let as_ = kernel.a * s;
    let t_recip = if t.lo() > F::zero() {
        t.recip()?
    } else {
        return Err(Error::domain("psi needs t > 0"));
    };
    Ok(kernel.prefactor * t_recip * exp(-as_) * sin(as_))
}

/// Result of the supremum search: the enclosure and the argmax abscissa.
#[derive(Debug, Clone, Copy)]
pub struct SupResult<F: Scalar> {
    pub value: Interval<F>,
    /// Best maximizer found (reporting aid; the enclosure is what is
    /// certified).
    pub t_star: F,
}

/// Certified enclosure of `sup { |t^k psi(t)| : t >= 1 }` for k in {2, 3},
/// width <= tol. Branch and bound over the root variable on `[0, U]` with a
/// dominating-envelope truncation of the tail.
pub fn compute_sup_constant<F: Scalar>(
    k: u32,
    params: &PsiParams<F>,
    tol: F,
) -> Result<SupResult<F>> {
    if !(k == 2 || k == 3) {
        return Err(Error::domain("sup constants are defined for k in {2, 3}"));
    }
    if !(tol > F::zero()) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let kernel = Kernel::new(params);
    let k = k as i32;

    // initial lower bound from a fixed midpoint scan; the scan reaches past
    // the dominating-envelope peak at u = 4(k-1)/a so small C_omega values
    // still seed a useful bound
    let mut lb = F::zero();
    let mut u_star = F::zero();
    let peak = Interval::from_int(4 * (k as i64 - 1))
        .checked_div(kernel.a)
        .expect("a > 0")
        .hi();
    let scan_hi = F::from_f64(4.0).max(peak + peak + F::from_f64(2.0));
    let scan = 1024;
    for i in 0..scan {
        let u = F::from_usize(2 * i + 1) * scan_hi / F::from_usize(2 * scan);
        let v = kernel.weighted_in_u(Interval::point(u), k).abs();
        if v.lo() > lb {
            lb = v.lo();
            u_star = u;
        }
    }
    if !(lb > F::zero()) {
        return Err(Error::refinement("sup scan found no positive lower bound"));
    }

    // truncation: the envelope pref * 2^{k-1} u^{4(k-1)} e^{-au} dominates
    // |t^k psi| for u >= 1 and decreases once 4(k-1)/u <= a
    let envelope = |u: F| -> Interval<F> {
        let ui = Interval::point(u);
        kernel.prefactor
            * Interval::from_int(1 << (k - 1))
            * ui.powi(4 * (k as u32 - 1))
            * exp(-(kernel.a * ui))
    };
    let dec_threshold = Interval::from_int(4 * (k as i64 - 1))
        .checked_div(kernel.a)
        .expect("a > 0")
        .hi();
    let mut upper = None;
    for cand in [3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0, 96.0, 128.0] {
        let u = F::from_f64(cand);
        if u >= dec_threshold.max(F::one()) && envelope(u).hi() < lb {
            upper = Some(u);
            break;
        }
    }
    let u_max = upper.ok_or_else(|| {
        Error::refinement("could not certify a truncation point for the sup search")
    })?;

    // box upper bound: plain interval evaluation, improved near u = 0 by
    // |sin(au)| <= au and e^{-au} <= 1
    let box_ub = |b: Interval<F>| -> F {
        let plain = kernel.weighted_in_u(b, k).abs().hi();
        if b.lo() == F::zero() {
            let t = Interval::one() + b.powi(4);
            let cusp = (kernel.prefactor * powik(t, k - 1) * kernel.a * b)
                .abs()
                .hi();
            plain.min(cusp)
        } else {
            plain
        }
    };

    struct Box<F: Scalar> {
        seg: Interval<F>,
        ub: F,
    }
    impl<F: Scalar> Box<F> {
        fn key(&self) -> (u64, u64) {
            (self.ub.to_bits_u64(), !self.seg.lo().to_bits_u64())
        }
    }
    impl<F: Scalar> PartialEq for Box<F> {
        fn eq(&self, o: &Self) -> bool {
            self.key() == o.key()
        }
    }
    impl<F: Scalar> Eq for Box<F> {}
    impl<F: Scalar> PartialOrd for Box<F> {
        fn partial_cmp(&self, o: &Self) -> Option<core::cmp::Ordering> {
            Some(self.cmp(o))
        }
    }
    impl<F: Scalar> Ord for Box<F> {
        fn cmp(&self, o: &Self) -> core::cmp::Ordering {
            self.key().cmp(&o.key())
        }
    }

    let mut heap: BinaryHeap<Box<F>> = BinaryHeap::new();
    let seg0 = Interval::new(F::zero(), u_max)?;
    heap.push(Box {
        seg: seg0,
        ub: box_ub(seg0),
    });

    let budget = 400_000usize;
    let mut processed = 0usize;
    let margin = tol * F::from_f64(0.9);
    loop {
        let top = match heap.peek() {
            None => break,
            Some(t) => t.ub,
        };
        if top - lb <= margin {
            break;
        }
        processed += 1;
        if processed > budget {
            return Err(Error::refinement("sup search budget exhausted"));
        }
        let worst = heap.pop().expect("nonempty");
        let (l, r) = worst.seg.bisect();
        if l.width() == F::zero() || r.width() == F::zero() {
            // machine resolution; keep the box as final
            heap.push(worst);
            break;
        }
        for child in [l, r] {
            let m = child.midpoint();
            let point_val = kernel.weighted_in_u(Interval::point(m), k).abs().lo();
            if point_val > lb {
                lb = point_val;
                u_star = m;
            }
            let ub = box_ub(child);
            if ub > lb {
                heap.push(Box { seg: child, ub });
            }
        }
    }
    let ub = heap.peek().map(|b| b.ub).unwrap_or(lb).max(lb);
    let value = Interval::new(lb, ub)?;
    if value.width() > tol {
        return Err(Error::refinement(format!(
            "sup enclosure width {} exceeds tolerance {}",
            value.width(),
            tol
        )));
    }
    let u4 = u_star * u_star * u_star * u_star;
    Ok(SupResult {
        value,
        t_star: F::one() + u4,
    })
}

/// Enclosure of `int_1^inf t^m psi(t) dt`, width <= tol. Equals 1 for m = 0
/// and 0 for every m >= 1.
pub fn check_moment<F: Scalar>(m: u32, params: &PsiParams<F>, tol: F) -> Result<Interval<F>> {
    if m > 6 {
        return Err(Error::domain("moments are only computed for m <= 6"));
    }
    if !(tol > F::zero()) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let kernel = Kernel::new(params);
    let m = m as i32;

    // cusp piece [1, 1 + 2^-8] in the root variable u on [0, 1/4]; the two
    // dyadic boundaries match exactly
    let quarter = F::from_f64(0.25);
    let cusp_f = |u: Interval<F>| Ok(kernel.moment_integrand(u, m));
    let cusp_df = |u: Interval<F>| Ok(kernel.moment_integrand_derivative(u, m));
    let cusp_d2f = |u: Interval<F>| Ok(kernel.moment_integrand_second_derivative(u, m));
    let cusp = integrate(&IntegrandSpec {
        f: &cusp_f,
        df: Some(&cusp_df),
        d2f: Some(&cusp_d2f),
        a: F::zero(),
        b: quarter,
        singular_upper: None,
        target_width: tol * F::from_f64(0.25),
        max_segments: DEFAULT_MAX_SEGMENTS,
    })?;

    // truncation point: first ladder value whose tail bound is small enough
    let tail_budget = tol * F::from_f64(0.125);
    let mut chosen = None;
    for cand in [8.0, 10.0, 12.0, 16.0, 20.0, 24.0, 32.0] {
        let u = F::from_f64(cand);
        let bound = moment_tail_bound(&kernel, m, u)?;
        if bound.hi() <= tail_budget {
            chosen = Some((u, bound));
            break;
        }
    }
    let (u_cut, _) =
        chosen.ok_or_else(|| Error::refinement("no truncation point reached the tail budget"))?;

    // main piece in t on [1 + 2^-8, 1 + u_cut^4]
    let t_lo = F::one() + F::from_f64(1.0 / 256.0);
    let t_hi = F::one() + u_cut * u_cut * u_cut * u_cut;
    let main_f = |t: Interval<F>| kernel.weighted_in_t(t, m);
    let main_df = |t: Interval<F>| kernel.weighted_in_t_derivative(t, m);
    let main_d2f = |t: Interval<F>| kernel.weighted_in_t_second_derivative(t, m);
    let main = integrate(&IntegrandSpec {
        f: &main_f,
        df: Some(&main_df),
        d2f: Some(&main_d2f),
        a: t_lo,
        b: t_hi,
        singular_upper: None,
        target_width: tol * F::from_f64(0.5),
        max_segments: DEFAULT_MAX_SEGMENTS,
    })?;

    let tail_bound = |u: F| moment_tail_bound(&kernel, m, u);
    let tail = integrate_tail(
        &TailSpec {
            valid_from: F::one(),
            bound_integral: Some(&tail_bound),
        },
        u_cut,
    )?;

    let total = cusp + main + tail;
    if total.width() > tol {
        return Err(Error::refinement(format!(
            "moment enclosure width {} above tolerance {}",
            total.width(),
            tol
        )));
    }
    Ok(total)
}

/// Closed-form bound for `int_{1+U^4}^inf |t^m psi| dt` in the root
/// variable: `|integrand| <= pref * (1+u^4)^{m-1} 4u^3 e^{-au}` and the
/// polynomial part is expanded exactly (for m = 0 it is bounded by `4/u`).
fn moment_tail_bound<F: Scalar>(kernel: &Kernel<F>, m: i32, u: F) -> Result<Interval<F>> {
    if u < F::one() {
        return Err(Error::contract("moment tail bound requires U >= 1"));
    }
    let ui = Interval::point(u);
    let e_au = exp(-(kernel.a * ui));
    let bound = if m == 0 {
        // int_U^inf (4/u) e^{-au} du <= (4/U) e^{-aU} / a
        Interval::from_int(4).checked_div(ui * kernel.a)? * e_au
    } else {
        // (1+u^4)^{m-1} 4u^3 = sum_j C(m-1, j) 4 u^{4j+3}
        let mut acc = Interval::zero();
        for j in 0..m as u32 {
            let c = binomial(m as u32 - 1, j) * 4;
            acc = acc + Interval::from_int(c) * exp_poly_tail(4 * j + 3, ui, kernel.a)?;
        }
        acc * e_au
    };
    Ok(kernel.prefactor * bound)
}

/// `e^{aU} int_U^inf u^k e^{-au} du = sum_{i=0}^{k} (k!/i!) U^i / a^{k+1-i}`.
fn exp_poly_tail<F: Scalar>(k: u32, u: Interval<F>, a: Interval<F>) -> Result<Interval<F>> {
    let mut acc = Interval::zero();
    for i in 0..=k {
        let mut falling: i64 = 1;
        for j in (i + 1)..=k {
            falling *= j as i64;
        }
        let term = Interval::from_int(falling) * u.powi(i).checked_div(a.powi(k + 1 - i))?;
        acc = acc + term;
    }
    Ok(acc)
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k.min(n - k) {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}
