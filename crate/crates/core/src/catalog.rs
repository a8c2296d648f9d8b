//! Built-in example domains.

use crate::elementary::{const_pi, sin};
use crate::interval::Interval;
use crate::norms::DomainSpec;
use crate::scalar::Scalar;

/// Square-with-holes example: n = 2, M = 1, N = 2, eps = 1/4.
pub fn example_a<F: Scalar>() -> DomainSpec<F> {
    DomainSpec::new(
        "exampleA",
        2,
        Interval::one(),
        2,
        Interval::from_f64(0.25),
        None,
    )
    .expect("catalog entry is valid")
}

/// Semicircle-boundary example: n = 2, M = 1, N = 2,
/// eps = 2 sin(pi/8) / (sin(pi/8) + 1), kept as an enclosure.
pub fn example_b<F: Scalar>() -> DomainSpec<F> {
    let s = sin(const_pi::<F>()
        .checked_div(Interval::from_int(8))
        .expect("8 != 0"));
    let eps = (Interval::from_int(2) * s)
        .checked_div(s + Interval::one())
        .expect("sin(pi/8) + 1 > 0");
    DomainSpec::new("exampleB", 2, Interval::one(), 2, eps, None).expect("catalog entry is valid")
}

/// All catalog keys in listing order.
pub fn keys() -> &'static [&'static str] {
    &["exampleA", "exampleB"]
}

/// Case-sensitive catalog lookup.
pub fn lookup<F: Scalar>(name: &str) -> Option<DomainSpec<F>> {
    match name {
        "exampleA" => Some(example_a()),
        "exampleB" => Some(example_b()),
        _ => None,
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision, clippy::approx_constant)] // frozen oracle digits
mod tests {
    use super::*;

    #[test]
    fn example_a_eps_is_exact_quarter() {
        let d = example_a::<f64>();
        assert!(d.eps.is_point());
        assert_eq!(d.eps.lo(), 0.25);
        assert_eq!(d.n, 2);
        assert_eq!(d.overlap, 2);
        assert_eq!(d.m_lip.lo(), 1.0);
    }

    #[test]
    fn example_b_eps_encloses_closed_form() {
        let d = example_b::<f64>();
        // 30-digit oracle: 2 sin(pi/8) / (1 + sin(pi/8))
        let reference = 0.553537307828310431435541947616;
        assert!(d.eps.lo() <= reference && reference <= d.eps.hi());
        assert!(d.eps.width() < 1e-13);
        assert!(!d.eps.is_point());
    }

    #[test]
    fn unknown_key_is_none() {
        assert!(lookup::<f64>("exampleC").is_none());
        assert!(lookup::<f64>("examplea").is_none());
        assert_eq!(keys().len(), 2);
    }
}
