//! Certified operator-norm and embedding-constant formulas.
//!
//! For a special Lipschitz epigraph domain with Lipschitz bound `M`, stretch
//! parameter `tau > 0` and regularization parameter `xi in [0, 1)`, the
//! extension operator built from the kernel satisfies
//!
//! * `a = (1+tau)(1+xi)^2 (1-xi)^{-2} sqrt(1+M^2)`,
//! * `Q = p a / ((p+1) tau^{1+1/p})`,
//! * `B = A1 P (1+xi)^2 (1+tau) sqrt(1+M^2)`,
//! * `A = ((A0 Q)^p + 1)^{1/p}`,
//! * `A' = max( 2^{p-1}(A0 Q)^p + 1,
//!              ((n-1) 2^{p-1}(B Q)^p + ((A0+B) Q)^p + 1)^{1/p} )`,
//!
//! where `A0, A1` are the kernel sup constants and `P` the
//! regularized-distance constant. The first `A'` argument is implemented as
//! printed in the source lemma (no `1/p` exponent); the exponentiated
//! variant, which restores dimensional symmetry with the second argument
//! and is dominated by the printed one for `p >= 1`, is available through
//! [`FormulaVariant::Exponentiated`].
//!
//! For a domain with minimally smooth boundary (overlap number `N`, cover
//! parameter `eps`, mollifier-derivative bound `b_eps`), the gradient bound
//!
//! `|grad Eu|_p <= A_p ( |grad u|_p + gamma |u|_p )`
//!
//! holds with
//!
//! `A_p = N A' + 1` when `R <= gamma`, else
//! `A_p = b_eps (6 N A + N A' + 3) n^{1/p} / gamma`,
//! `R = b_eps (6 N A + N A' + 3) n^{1/p} / (N A' + 1)`;
//!
//! when the enclosures of `R` and `gamma` overlap, the hull of both branch
//! values is returned (each side is a valid upper bound on its side of the
//! split, so the hull always is).
//!
//! The embedding constants follow by composition with the sharp constant of
//! the classical Sobolev inequality:
//!
//! `C_p = 2^{(q-1)/q} T_p A_q`  (gamma = sigma^{1/q}),
//! `C'_p = 2^{1/2} |Omega|^{(2-q)/(2q)} T_p A_q`  (gamma = sigma^{1/2},
//! bounded domains, q < 2).

use crate::elementary::pow;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::mollifier::{compute_b_eps, MollifierConstants, MollifierTolerances};
use crate::psi::{KernelConstants, PsiParams};
use crate::scalar::Scalar;
use crate::special::{talenti_constant, SobolevExponents};
use serde::{Deserialize, Serialize};

/// Which form of the first `A'` argument to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum FormulaVariant {
    /// `2^{p-1}(A0 Q)^p + 1` exactly as printed (dominates the other
    /// reading for p >= 1, so certification is preserved).
    #[default]
    #[serde(rename = "as-printed")]
    AsPrinted,
    /// `(2^{p-1}(A0 Q)^p + 1)^{1/p}`.
    #[serde(rename = "exponentiated")]
    Exponentiated,
}

/// Which branch of the minimally-smooth bound was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "R<=gamma")]
    RAtMostGamma,
    #[serde(rename = "R>gamma")]
    RAboveGamma,
    /// Enclosures of R and gamma overlap; the hull of both branch values
    /// is reported.
    #[serde(rename = "hull")]
    Hull,
}

/// A domain with minimally smooth boundary, described by its cover data.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct DomainSpec<F: Scalar> {
    pub name: String,
    pub n: u32,
    /// Uniform Lipschitz bound of the cover's epigraph domains.
    pub m_lip: Interval<F>,
    /// Overlap number of the cover.
    pub overlap: u32,
    /// Cover parameter eps (an enclosure: some catalog entries have
    /// irrational eps).
    pub eps: Interval<F>,
    /// Domain measure; only needed for the H^1 embedding constant.
    pub measure: Option<Interval<F>>,
}

impl<F: Scalar> DomainSpec<F> {
    pub fn new(
        name: impl Into<String>,
        n: u32,
        m_lip: Interval<F>,
        overlap: u32,
        eps: Interval<F>,
        measure: Option<Interval<F>>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("domain dimension must be at least 2"));
        }
        if overlap < 1 {
            return Err(Error::domain("overlap number must be at least 1"));
        }
        if !(eps.lo() > F::zero()) {
            return Err(Error::domain("cover parameter eps must be positive"));
        }
        if m_lip.lo() < F::zero() {
            return Err(Error::domain("Lipschitz bound must be nonnegative"));
        }
        if let Some(m) = &measure {
            if !(m.lo() > F::zero()) {
                return Err(Error::domain("domain measure must be positive"));
            }
        }
        Ok(Self {
            name: name.into(),
            n,
            m_lip,
            overlap,
            eps,
            measure,
        })
    }
}

/// Free parameters of the extension construction and the weighted norm.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct ExtensionParams<F: Scalar> {
    pub tau: Interval<F>,
    pub xi: Interval<F>,
    /// Relative safety margin added to the upper endpoint when evaluating
    /// at xi = 0 (the xi -> 0 limit).
    pub delta: Interval<F>,
    /// Weight of the zero-order term in the W^{1,q} norm.
    pub sigma: Interval<F>,
}

impl<F: Scalar> ExtensionParams<F> {
    pub fn new(
        tau: Interval<F>,
        xi: Interval<F>,
        delta: Interval<F>,
        sigma: Interval<F>,
    ) -> Result<Self> {
        if !(tau.lo() > F::zero()) {
            return Err(Error::domain("tau must be positive"));
        }
        if xi.lo() < F::zero() || !(xi.hi() < F::one()) {
            return Err(Error::domain("xi must lie in [0, 1)"));
        }
        if delta.lo() < F::zero() {
            return Err(Error::domain("delta must be nonnegative"));
        }
        if !(sigma.lo() > F::zero()) {
            return Err(Error::domain("sigma must be positive"));
        }
        Ok(Self {
            tau,
            xi,
            delta,
            sigma,
        })
    }

    pub fn from_f64(tau: f64, xi: f64, delta: f64, sigma: f64) -> Result<Self> {
        Self::new(
            Interval::from_f64(tau),
            Interval::from_f64(xi),
            Interval::from_f64(delta),
            Interval::from_f64(sigma),
        )
    }

    /// Reference defaults: xi = 0 with a tiny relative margin, sigma = 1.
    pub fn with_tau(tau: f64) -> Result<Self> {
        Self::from_f64(tau, 0.0, 1e-12, 1.0)
    }
}

/// The certified special-Lipschitz norm constants.
#[derive(Debug, Clone, Copy)]
pub struct LipschitzNorms<F: Scalar> {
    /// Stretch factor `a`.
    pub a: Interval<F>,
    pub q: Interval<F>,
    pub b: Interval<F>,
    /// Zero-order operator norm `A`.
    pub a_norm: Interval<F>,
    /// Gradient operator norm `A'`.
    pub a_prime: Interval<F>,
    pub variant: FormulaVariant,
}

/// `x^y` for `x.lo >= 0`, `y.lo > 0` (the zero endpoint maps to zero).
fn pow_nonneg<F: Scalar>(x: Interval<F>, y: Interval<F>) -> Result<Interval<F>> {
    if x.lo() < F::zero() {
        return Err(Error::domain("pow_nonneg requires a nonnegative base"));
    }
    if !(y.lo() > F::zero()) {
        return Err(Error::domain("pow_nonneg requires a positive exponent"));
    }
    if x.lo() > F::zero() {
        return pow(x, y);
    }
    let hi = if x.hi() == F::zero() {
        F::zero()
    } else {
        pow(Interval::point(x.hi()), y)?.hi()
    };
    Ok(Interval::raw(F::zero(), hi))
}

/// `((A0 Q)^p + 1)^{1/p}` with graceful handling of a zero product.
pub(crate) fn lp_combination<F: Scalar>(a0q: Interval<F>, p: Interval<F>) -> Result<Interval<F>> {
    let inner = pow_nonneg(a0q, p)? + Interval::one();
    pow(inner, p.recip()?)
}

/// The special-Lipschitz constants of the extension operator at Lebesgue
/// exponent `p` (the embedding pipeline instantiates this at `q`).
pub fn lipschitz_norms<F: Scalar>(
    p: Interval<F>,
    params: &ExtensionParams<F>,
    m_lip: Interval<F>,
    n: u32,
    kc: &KernelConstants<F>,
    p_fraenkel: Interval<F>,
    variant: FormulaVariant,
) -> Result<LipschitzNorms<F>> {
    if !(p.lo() > F::one()) {
        return Err(Error::domain("the norm formulas need p > 1"));
    }
    if n < 2 {
        return Err(Error::domain("dimension must be at least 2"));
    }
    let one = Interval::one();
    let two = Interval::from_int(2);
    let tau = params.tau;
    let xi = params.xi;
    if !(tau.lo() > F::zero()) {
        return Err(Error::domain("tau must be positive"));
    }

    let root = (one + m_lip.powi(2)).sqrt()?;
    let xi_ratio = (one + xi).powi(2).checked_div((one - xi).powi(2))?;
    let a = (one + tau) * xi_ratio * root;

    // tau^{1+1/p}
    let tau_pow = pow(tau, one + p.recip()?)?;
    let q = (p * a).checked_div((p + one) * tau_pow)?;

    let b = kc.a1 * p_fraenkel * (one + xi).powi(2) * (one + tau) * root;

    let a0q = kc.a0 * q;
    let a_norm = lp_combination(a0q, p)?;

    let two_pm1 = pow(two, p - one)?;
    let first_inner = two_pm1 * pow_nonneg(a0q, p)? + one;
    let first = match variant {
        FormulaVariant::AsPrinted => first_inner,
        FormulaVariant::Exponentiated => pow(first_inner, p.recip()?)?,
    };
    let bq = b * q;
    let second_inner = Interval::from_int(n as i64 - 1) * two_pm1 * pow_nonneg(bq, p)?
        + pow_nonneg((kc.a0 + b) * q, p)?
        + one;
    let second = pow(second_inner, p.recip()?)?;
    let a_prime = first.max_with(&second);

    Ok(LipschitzNorms {
        a,
        q,
        b,
        a_norm,
        a_prime,
        variant,
    })
}

/// The minimally-smooth gradient bound `A_p` at weight `gamma`, together
/// with the branch that produced it.
pub fn minimally_smooth_norm<F: Scalar>(
    p: Interval<F>,
    d: &DomainSpec<F>,
    gamma: Interval<F>,
    lip: &LipschitzNorms<F>,
    b_eps: Interval<F>,
) -> Result<(Interval<F>, Branch)> {
    if !(gamma.lo() > F::zero()) {
        return Err(Error::domain("gamma must be positive"));
    }
    let one = Interval::one();
    let n_count = Interval::from_int(d.overlap as i64);
    let n_pow = pow(Interval::from_int(d.n as i64), p.recip()?)?;
    let k = Interval::from_int(6) * n_count * lip.a_norm
        + n_count * lip.a_prime
        + Interval::from_int(3);
    let denom = n_count * lip.a_prime + one;
    let scaled = b_eps * k * n_pow;
    let r = scaled.checked_div(denom)?;

    let branch1 = denom;
    if r.hi() <= gamma.lo() {
        return Ok((branch1, Branch::RAtMostGamma));
    }
    let branch2 = scaled.checked_div(gamma)?;
    if r.lo() > gamma.hi() {
        return Ok((branch2, Branch::RAboveGamma));
    }
    Ok((branch1.hull(&branch2), Branch::Hull))
}

/// Width targets for the upstream constants feeding a bound computation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct PipelineTolerances<F: Scalar> {
    pub kernel_sup: Interval<F>,
    pub mollifier_c_rel: Interval<F>,
    pub mollifier_i1: Interval<F>,
    pub mollifier_p: Interval<F>,
}

impl<F: Scalar> Default for PipelineTolerances<F> {
    fn default() -> Self {
        Self {
            kernel_sup: Interval::from_f64(crate::psi::SUP_TOL_DEFAULT),
            mollifier_c_rel: Interval::from_f64(1e-6),
            mollifier_i1: Interval::from_f64(1e-4),
            mollifier_p: Interval::from_f64(1e-3),
        }
    }
}

/// Kernel and mollifier constants computed once and reused across sweeps.
#[derive(Debug, Clone, Copy)]
pub struct ConstantSet<F: Scalar> {
    pub kc: KernelConstants<F>,
    pub mc: MollifierConstants<F>,
    pub tols: PipelineTolerances<F>,
}

impl<F: Scalar> ConstantSet<F> {
    pub fn compute(n: u32, c_omega: F, tols: &PipelineTolerances<F>) -> Result<Self> {
        let psi = PsiParams::new(c_omega)?;
        let kc = KernelConstants::compute(&psi, tols.kernel_sup.hi())?;
        let mc = MollifierConstants::compute(
            n,
            &MollifierTolerances {
                c_rel: tols.mollifier_c_rel.hi(),
                i1_abs: tols.mollifier_i1.hi(),
                p_abs: tols.mollifier_p.hi(),
            },
        )?;
        Ok(Self {
            kc,
            mc,
            tols: *tols,
        })
    }
}

/// Which certified constant a record carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    #[serde(rename = "A_q")]
    OperatorNorm,
    #[serde(rename = "C_p")]
    Embedding,
    #[serde(rename = "C_p_prime")]
    EmbeddingH1,
    #[serde(rename = "T_p")]
    Talenti,
}

/// Full input echo carried by every certified bound for reproducibility.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct BoundInputs<F: Scalar> {
    pub domain: DomainSpec<F>,
    pub n: u32,
    pub p: Interval<F>,
    pub q: Interval<F>,
    pub params: ExtensionParams<F>,
    pub c_omega: Interval<F>,
    pub a0: Interval<F>,
    pub a1: Interval<F>,
    pub mollifier_c: Interval<F>,
    pub i1: Interval<F>,
    pub p_fraenkel: Interval<F>,
    pub b_eps: Interval<F>,
    pub tolerances: PipelineTolerances<F>,
}

/// A named certified constant with its enclosure and provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "", deserialize = ""))]
pub struct CertifiedBound<F: Scalar> {
    pub kind: BoundKind,
    pub value: Interval<F>,
    pub branch: Option<Branch>,
    pub formula_variant: FormulaVariant,
    pub inputs: BoundInputs<F>,
}

fn make_inputs<F: Scalar>(
    e: &SobolevExponents<F>,
    d: &DomainSpec<F>,
    params: &ExtensionParams<F>,
    consts: &ConstantSet<F>,
    b_eps: Interval<F>,
) -> BoundInputs<F> {
    BoundInputs {
        domain: d.clone(),
        n: e.n(),
        p: e.p(),
        q: e.q(),
        params: *params,
        c_omega: Interval::point(consts.kc.c_omega),
        a0: consts.kc.a0,
        a1: consts.kc.a1,
        mollifier_c: consts.mc.c,
        i1: consts.mc.i1,
        p_fraenkel: consts.mc.p,
        b_eps,
        tolerances: consts.tols,
    }
}

fn check_dims<F: Scalar>(
    e: &SobolevExponents<F>,
    d: &DomainSpec<F>,
    consts: &ConstantSet<F>,
) -> Result<()> {
    if e.n() != d.n {
        return Err(Error::contract("exponent and domain dimensions differ"));
    }
    if consts.mc.n != d.n {
        return Err(Error::contract(
            "constant set computed for another dimension",
        ));
    }
    Ok(())
}

/// The operator-norm bound `A_q(Omega)` with `gamma = sigma^{1/q}`.
pub fn operator_norm<F: Scalar>(
    e: &SobolevExponents<F>,
    d: &DomainSpec<F>,
    params: &ExtensionParams<F>,
    consts: &ConstantSet<F>,
    variant: FormulaVariant,
) -> Result<CertifiedBound<F>> {
    let gamma = pow(params.sigma, e.q().recip()?)?;
    operator_norm_with_gamma(e, d, params, consts, variant, gamma)
}

fn operator_norm_with_gamma<F: Scalar>(
    e: &SobolevExponents<F>,
    d: &DomainSpec<F>,
    params: &ExtensionParams<F>,
    consts: &ConstantSet<F>,
    variant: FormulaVariant,
    gamma: Interval<F>,
) -> Result<CertifiedBound<F>> {
    check_dims(e, d, consts)?;
    let q = e.q();
    let lip = lipschitz_norms(q, params, d.m_lip, d.n, &consts.kc, consts.mc.p, variant)?;
    let b_eps = compute_b_eps(d.eps, consts.mc.i1)?;
    let (mut aq, branch) = minimally_smooth_norm(q, d, gamma, &lip, b_eps)?;
    // evaluation at the xi -> 0 limit gets the documented safety margin
    if params.xi.is_point() && params.xi.lo() == F::zero() {
        aq = aq.widen_hi_rel(params.delta.hi());
    }
    Ok(CertifiedBound {
        kind: BoundKind::OperatorNorm,
        value: aq,
        branch: Some(branch),
        formula_variant: variant,
        inputs: make_inputs(e, d, params, consts, b_eps),
    })
}

/// `C_p = 2^{(q-1)/q} T_p A_q`.
pub(crate) fn compose_embedding<F: Scalar>(
    t_p: Interval<F>,
    a_q: Interval<F>,
    q: Interval<F>,
) -> Result<Interval<F>> {
    let expo = (q - Interval::one()).checked_div(q)?;
    Ok(pow_nonneg(Interval::from_int(2), expo)? * t_p * a_q)
}

/// Embedding-constant bound `C_p(Omega)` for `W^{1,q} -> L^p`.
pub fn embedding_constant<F: Scalar>(
    e: &SobolevExponents<F>,
    d: &DomainSpec<F>,
    params: &ExtensionParams<F>,
    consts: &ConstantSet<F>,
    variant: FormulaVariant,
) -> Result<CertifiedBound<F>> {
    let aq = operator_norm(e, d, params, consts, variant)?;
    let t_p = talenti_constant(e)?;
    let value = compose_embedding(t_p, aq.value, e.q())?;
    Ok(CertifiedBound {
        kind: BoundKind::Embedding,
        value,
        branch: aq.branch,
        formula_variant: variant,
        inputs: aq.inputs,
    })
}

/// Embedding-constant bound `C'_p(Omega)` for `H^1 -> L^p` on bounded
/// domains (requires the measure and `q < 2`).
pub fn embedding_constant_h1<F: Scalar>(
    e: &SobolevExponents<F>,
    d: &DomainSpec<F>,
    params: &ExtensionParams<F>,
    consts: &ConstantSet<F>,
    variant: FormulaVariant,
) -> Result<CertifiedBound<F>> {
    let measure = d
        .measure
        .ok_or_else(|| Error::contract("the H^1 embedding constant needs the domain measure"))?;
    let q = e.q();
    let two = Interval::from_int(2);
    if !(q.hi() < F::from_f64(2.0)) {
        return Err(Error::domain(
            "the H^1 embedding constant needs q < 2 (p < 2n/(n-2) for n >= 3)",
        ));
    }
    let gamma = params.sigma.sqrt()?;
    let aq = operator_norm_with_gamma(e, d, params, consts, variant, gamma)?;
    let t_p = talenti_constant(e)?;
    // |Omega|^{(2-q)/(2q)}
    let expo = (two - q).checked_div(two * q)?;
    let measure_pow = pow(measure, expo)?;
    let value = two.sqrt()? * measure_pow * t_p * aq.value;
    Ok(CertifiedBound {
        kind: BoundKind::EmbeddingH1,
        value,
        branch: aq.branch,
        formula_variant: variant,
        inputs: aq.inputs,
    })
}

/// Talenti constant as a certified-bound record (for reports).
pub fn talenti_bound<F: Scalar>(
    e: &SobolevExponents<F>,
    d: &DomainSpec<F>,
    params: &ExtensionParams<F>,
    consts: &ConstantSet<F>,
) -> Result<CertifiedBound<F>> {
    let t_p = talenti_constant(e)?;
    let b_eps = compute_b_eps(d.eps, consts.mc.i1)?;
    Ok(CertifiedBound {
        kind: BoundKind::Talenti,
        value: t_p,
        branch: None,
        formula_variant: FormulaVariant::default(),
        inputs: make_inputs(e, d, params, consts, b_eps),
    })
}
