use enabling::bounds::{f_eval, f_max, improved_inequality};
use enabling::scalar::{int, ratio};
use enabling::Rational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Direct double sum, independent of the prefix-sum evaluation.
fn improved_oracle(x: &[Rational]) -> Rational {
    let mut pairs = Rational::zero();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            pairs += &x[i] * &x[j];
        }
    }
    let total: Rational = x.iter().cloned().fold(Rational::zero(), |a, b| a + b);
    pairs - total + int(1)
}

fn random_unit_vector(rng: &mut StdRng) -> Vec<Rational> {
    let m = rng.gen_range(0..=8);
    (0..m)
        .map(|_| {
            let den = rng.gen_range(1..=1000i64);
            ratio(rng.gen_range(0..=den), den)
        })
        .collect()
}

#[test]
fn improved_inequality_random_vectors() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..20_000 {
        let x = random_unit_vector(&mut rng);
        let value = improved_inequality(&x).unwrap();
        assert_eq!(value, improved_oracle(&x));
        assert!(value >= int(0), "negative at {x:?}");
    }
}

#[test]
fn improved_inequality_binary_vectors() {
    for m in 0..=12usize {
        for bits in 0u32..1 << m {
            let x: Vec<Rational> = (0..m).map(|i| int((bits >> i & 1) as i64)).collect();
            let s = bits.count_ones() as i64;
            // s ones: C(s,2) − s + 1 = (s−1)(s−2)/2.
            assert_eq!(improved_inequality(&x).unwrap(), int((s - 1) * (s - 2) / 2));
        }
    }
}

#[test]
fn improved_inequality_rejects_out_of_range() {
    assert!(improved_inequality(&[ratio(3, 2)]).is_err());
    assert!(improved_inequality(&[ratio(-1, 5)]).is_err());
    assert!(improved_inequality(&[1.5f64]).is_err());
}

#[test]
fn f_max_is_monotone_on_grid() {
    for r in 1..=6 {
        for k in 1..=12 {
            let mut previous = int(0);
            for step in 0..=64 {
                let value = f_max(r, k, &ratio(step, 16));
                assert!(value >= previous, "r={r} k={k} x={step}/16");
                previous = value;
            }
        }
    }
}

#[test]
fn f_max_dominates_closed_form() {
    for r in 1..=10usize {
        for k in 1..=20usize {
            let closed = int(2 * (r * k) as i64 - 2 * (r * (r - 1)) as i64);
            assert!(f_max(r, k, &int(2)) >= closed, "r={r} k={k}");
            assert_eq!(f_eval(r, k, &int(2)), closed);
        }
    }
}

#[test]
fn f_max_float_agrees_with_exact() {
    for r in 1..=6 {
        for k in 1..=12 {
            for step in 0..=64 {
                let exact = f_max(r, k, &ratio(step, 16));
                let float = f_max(r, k, &(step as f64 / 16.0));
                let approx = num_traits::ToPrimitive::to_f64(&exact).unwrap();
                assert!((float - approx).abs() <= 1e-9 * approx.abs().max(1.0));
            }
        }
    }
}

proptest! {
    #[test]
    fn improved_inequality_nonnegative(x in prop::collection::vec((0i64..=60, 1i64..=60), 0..=8)) {
        let x: Vec<Rational> = x.into_iter().map(|(a, b)| ratio(a.min(b), b)).collect();
        let value = improved_inequality(&x).unwrap();
        prop_assert!(value >= int(0));
        prop_assert_eq!(value, improved_oracle(&x));
    }
}
