//! Classical ground truth for the exponent adder: pair counts per exponent
//! sum, their exact distribution, and product checks.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::codec::BinaryDecomposition;

/// Number of exponent pairs `(α, β)` with `α + β = γ`, for every `γ` hit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionProfile {
    pub coefficients: BTreeMap<u64, u64>,
    pub gamma_max: u64,
    pub total_pairs: u64,
}

impl ConvolutionProfile {
    /// `Σ c_γ · 2^γ`.
    pub fn value(&self) -> BigUint {
        weighted_sum(&self.coefficients)
    }
}

pub fn weighted_sum(coefficients: &BTreeMap<u64, u64>) -> BigUint {
    coefficients
        .iter()
        .fold(BigUint::default(), |acc, (&gamma, &c)| acc + (BigUint::from(c) << gamma))
}

pub fn convolution_counts(du: &BinaryDecomposition, dv: &BinaryDecomposition) -> ConvolutionProfile {
    assert!(
        du.weight() > 0 && dv.weight() > 0,
        "convolution of a zero operand"
    );
    let mut coefficients = BTreeMap::new();
    for &alpha in &du.exponents {
        for &beta in &dv.exponents {
            *coefficients.entry(alpha + beta).or_insert(0u64) += 1;
        }
    }
    ConvolutionProfile {
        coefficients,
        gamma_max: du.bit_length + dv.bit_length - 2,
        total_pairs: (du.weight() * dv.weight()) as u64,
    }
}

/// `P(γ) = c_γ / (w_u·w_v)` as reduced rationals.
pub fn expected_distribution(profile: &ConvolutionProfile) -> BTreeMap<u64, BigRational> {
    let total = BigInt::from(profile.total_pairs);
    profile
        .coefficients
        .iter()
        .map(|(&gamma, &c)| (gamma, BigRational::new(BigInt::from(c), total.clone())))
        .collect()
}

/// Float view of [`expected_distribution`], converted after reduction.
pub fn expected_probabilities(profile: &ConvolutionProfile) -> BTreeMap<u64, f64> {
    expected_distribution(profile)
        .into_iter()
        .map(|(gamma, p)| (gamma, p.to_f64().expect("probability is finite")))
        .collect()
}

pub fn verify_product(claimed: &BigUint, u: &BigUint, v: &BigUint) -> bool {
    *claimed == u * v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::decompose;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn profile(u: u64, v: u64) -> ConvolutionProfile {
        convolution_counts(&decompose(&u.into()), &decompose(&v.into()))
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn worked_examples() {
        assert_eq!(
            profile(6, 7).coefficients,
            BTreeMap::from([(4, 1), (3, 2), (2, 2), (1, 1)])
        );
        assert_eq!(
            profile(3, 5).coefficients,
            BTreeMap::from([(3, 1), (2, 1), (1, 1), (0, 1)])
        );
        assert_eq!(profile(1, 1).coefficients, BTreeMap::from([(0, 1)]));
        assert_eq!(profile(6, 7).value(), BigUint::from(42u32));
    }

    #[test]
    fn distributions() {
        let d = expected_distribution(&profile(3, 5));
        assert_eq!(d.len(), 4);
        assert!(d.values().all(|p| *p == q(1, 4)));

        let d = expected_distribution(&profile(6, 7));
        assert_eq!(d, BTreeMap::from([(4, q(1, 6)), (3, q(1, 3)), (2, q(1, 3)), (1, q(1, 6))]));

        assert_eq!(expected_distribution(&profile(1, 1)), BTreeMap::from([(0, q(1, 1))]));
    }

    #[test]
    fn product_checks() {
        let b = |v: u64| BigUint::from(v);
        assert!(verify_product(&b(13314910), &b(2345), &b(5678)));
        assert!(verify_product(&b(15), &b(3), &b(5)));
        assert!(!verify_product(&b(16), &b(3), &b(5)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn convolution_identity(u in 1u64.., v in 1u64..) {
            let p = profile(u, v);
            prop_assert_eq!(p.value(), BigUint::from(u) * BigUint::from(v));
            prop_assert_eq!(p.coefficients.values().sum::<u64>(), p.total_pairs);
            prop_assert_eq!(p.coefficients.get(&p.gamma_max), Some(&1));
            prop_assert_eq!(*p.coefficients.keys().next_back().unwrap(), p.gamma_max);
            let total: BigRational = expected_distribution(&p).values().sum();
            prop_assert!(total.is_one());
            prop_assert!(!total.is_zero());
        }
    }
}
