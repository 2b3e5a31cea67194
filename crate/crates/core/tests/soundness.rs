use num_bigint::BigUint;
use qmbead::oracle::{convolution_counts, expected_probabilities};
use qmbead::pipeline::{multiply_integers, CircuitPlan, MultiplyConfig, Outcomes};
use qmbead::{decompose, AdderVersion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn exact_products_up_to_255() {
    for version in [AdderVersion::V1, AdderVersion::V2] {
        let cfg = MultiplyConfig {
            adder_version: version,
            ..MultiplyConfig::exact()
        };
        for u in 1u32..=255 {
            for v in 1u32..=255 {
                let r = multiply_integers(&u.into(), &v.into(), &cfg).unwrap();
                assert_eq!(r.product, BigUint::from(u * v), "{version} {u}x{v}");
                assert!(!r.low_confidence, "{version} {u}x{v}");
            }
        }
    }
}

#[test]
fn exact_marginals_match_the_convolution_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..200 {
        let u = BigUint::from(rng.random_range(1u32..256));
        let v = BigUint::from(rng.random_range(1u32..256));
        let oracle = expected_probabilities(&convolution_counts(&decompose(&u), &decompose(&v)));
        let r = multiply_integers(&u, &v, &MultiplyConfig::exact()).unwrap();
        let Outcomes::Exact(dist) = &r.outcomes else {
            panic!("exact mode returns a distribution")
        };
        assert_eq!(dist.probs.len(), oracle.len(), "{u}x{v}");
        for (gamma, p) in &oracle {
            assert!((dist.get(*gamma) - p).abs() < 1e-10, "{u}x{v} at {gamma}");
        }
    }
}

#[test]
fn sampled_products_with_planned_shots() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for seed in 0..50 {
        let u = BigUint::from(rng.random_range(1u64..1 << 20));
        let v = BigUint::from(rng.random_range(1u64..1 << 20));
        let cfg = MultiplyConfig {
            seed,
            verify: true,
            ..Default::default()
        };
        let r = multiply_integers(&u, &v, &cfg).unwrap();
        assert_eq!(r.product, &u * &v);
    }
}

#[test]
fn large_operands_stay_within_the_qubit_budget() {
    let u: BigUint = "98789236479326873476287376473627847267623".parse().unwrap();
    let v: BigUint = "92934837483278492837489283478928374829373".parse().unwrap();
    let plan = CircuitPlan::new(&u, &v, AdderVersion::V1).unwrap();
    assert_eq!(plan.qubits(), 17);
    let r = multiply_integers(&u, &v, &MultiplyConfig::exact()).unwrap();
    assert_eq!(r.product, &u * &v);
}
