use std::sync::Arc;

use fieldrec_core::differentials::{d, derivative_wrt};
use fieldrec_core::polyfield::{FieldDescriptor, IrreducibilityMode, RationalFunction};
use fieldrec_core::reconstruct::sample_element;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fields() -> Vec<Arc<FieldDescriptor>> {
    vec![FieldDescriptor::rationals(2), FieldDescriptor::prime(2, 2), FieldDescriptor::prime(3, 2), FieldDescriptor::prime(5, 2)]
}

fn elements(seed: u64, d: &Arc<FieldDescriptor>, n: usize) -> Vec<RationalFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_element(d, &mut rng)).collect()
}

/// Exponents of numerator and denominator all divisible by `p`.
fn exponents_divisible(f: &RationalFunction, p: u64) -> bool {
    [f.numerator(), f.denominator()]
        .iter()
        .all(|g| g.terms().all(|(e, _)| e.iter().all(|&x| x as u64 % p == 0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2500))]

    // 2500 cases x 4 fields = 10^4 triples per run.
    #[test]
    fn field_axioms(seed in any::<u64>()) {
        for d in fields() {
            let v = elements(seed, &d, 3);
            let (a, b, c) = (&v[0], &v[1], &v[2]);
            prop_assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
            prop_assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
            prop_assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
            prop_assert_eq!(a.add(b), b.add(a));
            prop_assert_eq!(a.mul(b), b.mul(a));
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
            prop_assert!(a.add(&a.neg()).is_zero());
            prop_assert_eq!(a.div(b).unwrap().mul(b), a.clone());
        }
    }

    #[test]
    fn leibniz(seed in any::<u64>()) {
        for d0 in fields() {
            let v = elements(seed, &d0, 2);
            let (f, g) = (&v[0], &v[1]);
            prop_assert_eq!(d(&f.mul(g)), d(g).scale(f).add(&d(f).scale(g)));
        }
    }

    #[test]
    fn canonical_forms_are_stable(seed in any::<u64>()) {
        for d0 in fields() {
            let x = &elements(seed, &d0, 1)[0];
            let again = RationalFunction::new(&d0, x.num().clone(), x.den().clone()).unwrap();
            prop_assert_eq!(&again, x);
            prop_assert_eq!(&RationalFunction::parse(&x.to_string(), &d0).unwrap(), x);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factor_reassembles(seed in any::<u64>()) {
        for d0 in fields() {
            let x = &elements(seed, &d0, 1)[0];
            let fac = x.factor().unwrap();
            prop_assert_eq!(&fac.reassemble(&d0), x);
            for (g, _) in &fac.factors {
                prop_assert!(g.is_irreducible(IrreducibilityMode::OverConstantField).unwrap());
            }
        }
    }

    #[test]
    fn kernel_of_d(seed in any::<u64>(), take_power in any::<bool>()) {
        for d0 in fields() {
            let p = d0.characteristic();
            let x = &elements(seed, &d0, 1)[0];
            let f = if take_power && p > 0 { x.pow(p as i64).unwrap() } else { x.clone() };
            let zero = d(&f).is_zero();
            if p == 0 {
                prop_assert_eq!(zero, f.is_constant());
                continue;
            }
            prop_assert_eq!(zero, exponents_divisible(&f, p));
            match f.pth_root().unwrap() {
                Some(g) => {
                    prop_assert!(zero);
                    prop_assert_eq!(g.pow(p as i64).unwrap(), f.clone());
                }
                None => prop_assert!(!zero),
            }
            if take_power {
                prop_assert!(zero);
            }
        }
    }

    /// If `x·y'/y = m`, then `y/x^m` has zero differential.
    #[test]
    fn log_derivative_integer(seed in any::<u64>(), m in -3i64..=3, c in 1i64..=4) {
        for d0 in fields() {
            let p = d0.characteristic();
            let v = elements(seed, &d0, 2);
            let (x, w) = (&v[0], &v[1]);
            if d(x).is_zero() {
                continue;
            }
            let wp = if p > 0 { w.pow(p as i64).unwrap() } else { RationalFunction::one(&d0) };
            let y = x.pow(m).unwrap().mul(&wp).mul(&RationalFunction::from_i64(&d0, c));
            if y.is_zero() {
                continue;
            }
            let q = derivative_wrt(&y, x).unwrap().mul(x).div(&y).unwrap();
            prop_assert_eq!(&q, &RationalFunction::from_i64(&d0, m));
            prop_assert!(d(&y.div(&x.pow(m).unwrap()).unwrap()).is_zero());
        }
    }
}
