use std::sync::Arc;

use fieldrec_core::dependence::MultClass;
use fieldrec_core::polyfield::{FieldDescriptor, RationalFunction};
use fieldrec_core::reconstruct::{
    class_representative, descend_sign, phi_on_constants, phi_on_element, probe_set, reconstruct_isomorphism, resolve_power,
    sample_element, EngineConfig, FieldMorphism, HiddenMapOracle, Oracle, PowerOracle,
};
use fieldrec_core::{Error, Stage};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f(s: &str, d: &Arc<FieldDescriptor>) -> RationalFunction {
    RationalFunction::parse(s, d).unwrap()
}

fn map(d: &Arc<FieldDescriptor>, images: &[&str]) -> FieldMorphism {
    FieldMorphism::parse(d, d, images).unwrap()
}

fn oracle(d: &Arc<FieldDescriptor>, images: &[&str], sign: i64) -> HiddenMapOracle {
    HiddenMapOracle::new(map(d, images), sign, 0xfeed).unwrap()
}

/// Answers with the exact image, no scrambling.
struct Plain(FieldMorphism);

impl Oracle for Plain {
    fn domain(&self) -> &Arc<FieldDescriptor> {
        self.0.domain()
    }
    fn codomain(&self) -> &Arc<FieldDescriptor> {
        self.0.codomain()
    }
    fn query_rep(&self, x: &RationalFunction) -> fieldrec_core::Result<RationalFunction> {
        self.0.apply(x)
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn field_morphisms() {
    let q = FieldDescriptor::rationals(2);
    let swap = map(&q, &["t2", "t1"]);
    assert!(swap.is_inverse_of(&swap).unwrap());
    assert!(swap.then(&swap).unwrap().is_identity());
    assert_eq!(swap.to_string(), "t1 -> t2, t2 -> t1");
    let dj = map(&q, &["t1", "t2+t1^2"]);
    let dj_inv = map(&q, &["t1", "t2-t1^2"]);
    assert!(dj.is_inverse_of(&dj_inv).unwrap());
    assert!(!dj.is_inverse_of(&dj).unwrap());
    assert_eq!(dj.apply(&f("t2/t1", &q)).unwrap(), f("(t2+t1^2)/t1", &q));
    assert_eq!(dj.apply(&f("7", &q)).unwrap(), f("7", &q));
    assert!(FieldMorphism::parse(&q, &q, &["t1", "t1^2"]).is_err());
    assert!(FieldMorphism::parse(&q, &q, &["t1"]).is_err());
}

#[test]
fn phi_on_element_examples() {
    let q = FieldDescriptor::rationals(2);
    let id = Plain(FieldMorphism::identity(&q));
    assert_eq!(phi_on_element(&id, &f("t1", &q)).unwrap(), f("t1", &q));
    let swap = oracle(&q, &["t2", "t1"], 1);
    // The scrambled answer is a constant multiple of t2; Φ undoes it.
    assert_ne!(swap.query_rep(&f("t1", &q)).unwrap(), f("t2", &q));
    assert_eq!(phi_on_element(&swap, &f("t1", &q)).unwrap(), f("t2", &q));
    let shift = oracle(&q, &["t1+1", "t2"], 1);
    assert_eq!(phi_on_element(&shift, &f("t1", &q)).unwrap(), f("t1+1", &q));
    assert_eq!(phi_on_element(&shift, &f("t1*t2/(t2-3)", &q)).unwrap(), f("(t1+1)*t2/(t2-3)", &q));
    assert_eq!(phi_on_element(&id, &f("5", &q)), Err(Error::ConstantInput));
    // Without normalizing the power, Φ is not defined.
    let inv = oracle(&q, &["t1", "t2"], -1);
    let e = phi_on_element(&inv, &f("t1", &q)).unwrap_err();
    assert!(matches!(e, Error::Reconstruction { stage: Stage::PhiOnElement, .. }));
    assert_eq!(phi_on_element(&PowerOracle::new(&inv, -1), &f("t1", &q)).unwrap(), f("t1", &q));
}

#[test]
fn phi_on_constants_examples() {
    let q = FieldDescriptor::rationals(2);
    let id = Plain(FieldMorphism::identity(&q));
    assert_eq!(phi_on_constants(&id, &f("t1", &q), &int(7)).unwrap(), int(7));
    assert_eq!(phi_on_constants(&id, &f("t1", &q), &int(1)).unwrap(), int(1));
    let dj = oracle(&q, &["t1", "t2+t1^2"], 1);
    assert_eq!(phi_on_constants(&dj, &f("t2/t1", &q), &int(-3)).unwrap(), int(-3));
    let f7 = FieldDescriptor::prime(7, 2);
    let o = oracle(&f7, &["t2", "t1+t2"], 1);
    for a in 1..7 {
        assert_eq!(phi_on_constants(&o, &f("t1", &f7), &int(a)).unwrap(), int(a));
    }
}

#[test]
fn resolve_power_examples() {
    let cfg = EngineConfig::default();
    let f3 = FieldDescriptor::prime(3, 2);
    assert_eq!(resolve_power(&oracle(&f3, &["t2", "t1"], 1), &cfg).unwrap(), 1);
    assert_eq!(resolve_power(&oracle(&f3, &["t2", "t1"], -1), &cfg).unwrap(), -1);
    let q = FieldDescriptor::rationals(2);
    assert_eq!(resolve_power(&oracle(&q, &["t1", "t2+t1^2"], -1), &cfg).unwrap(), -1);
    // Synthetic char-5 twist by m = 2.
    let f5 = FieldDescriptor::prime(5, 2);
    for (m, images) in [(2, ["t2", "t1"]), (-2, ["t1+t2", "t2"]), (1, ["t1", "t2+t1^2"])] {
        let o = HiddenMapOracle::twisted(map(&f5, &images), m, 3).unwrap();
        assert_eq!(resolve_power(&o, &cfg).unwrap(), m);
    }
    // The twisted oracle is not multiplicative enough to give a field map.
    let o = HiddenMapOracle::twisted(map(&f5, &["t2", "t1"]), 2, 3).unwrap();
    assert!(matches!(reconstruct_isomorphism(&o, &cfg), Err(Error::Reconstruction { .. })));
    assert!(HiddenMapOracle::twisted(map(&f5, &["t2", "t1"]), 3, 3).is_err());
}

#[test]
fn descend_sign_examples() {
    let cfg = EngineConfig::default();
    let f3 = FieldDescriptor::prime(3, 2);
    let sigma = map(&f3, &["t1+t2", "t2"]);
    let plus = HiddenMapOracle::new(sigma.clone(), 1, 9).unwrap();
    assert_eq!(descend_sign(&plus, &sigma, 1, &cfg).unwrap(), 1);
    let minus = HiddenMapOracle::new(sigma.clone(), -1, 9).unwrap();
    assert_eq!(descend_sign(&minus, &sigma, -1, &cfg).unwrap(), -1);
    // The sign is recovered even when the caller guesses wrong.
    assert_eq!(descend_sign(&minus, &sigma, 1, &cfg).unwrap(), -1);

    let bad_class = f("1+t1+t2", &f3).pow(2).unwrap();
    let corrupt = HiddenMapOracle::new(sigma.clone(), 1, 9).unwrap().corrupted_at(&bad_class).unwrap();
    match descend_sign(&corrupt, &sigma, 1, &cfg) {
        Err(Error::Reconstruction { stage: Stage::DescendSign, class: Some(c), .. }) => assert_eq!(c, bad_class.to_string()),
        other => panic!("expected a sign failure, got {other:?}"),
    }
}

#[test]
fn reconstruct_examples() {
    let cfg = EngineConfig::default();
    let f3 = FieldDescriptor::prime(3, 2);
    let r = reconstruct_isomorphism(&oracle(&f3, &["t2", "t1"], -1), &cfg).unwrap();
    assert_eq!(r.morphism, map(&f3, &["t2", "t1"]));
    assert_eq!((r.sign, r.power), (-1, -1));

    let q = FieldDescriptor::rationals(2);
    let r = reconstruct_isomorphism(&oracle(&q, &["t1", "t2+t1^2"], 1), &cfg).unwrap();
    assert_eq!(r.morphism, map(&q, &["t1", "t2+t1^2"]));
    assert_eq!(r.sign, 1);
    assert_eq!(r.checks.additivity, cfg.relation_pairs);
    assert_eq!(r.checks.multiplicativity, cfg.relation_pairs);
    assert!(r.checks.uniqueness > 0 && r.checks.verification == cfg.sign_sample);

    let r = reconstruct_isomorphism(&Plain(FieldMorphism::identity(&q)), &cfg).unwrap();
    assert!(r.morphism.is_identity());
    assert_eq!(r.sign, 1);

    // Characteristic 2: the line test admits both signs.
    let f2 = FieldDescriptor::prime(2, 2);
    for images in [["t1*t2", "t2"], ["t2/(t1+1)", "t1"]] {
        for sign in [1, -1] {
            let r = reconstruct_isomorphism(&oracle(&f2, &images, sign), &cfg).unwrap();
            assert_eq!(r.morphism, map(&f2, &images));
            assert_eq!(r.sign, sign);
        }
    }

    // Three variables.
    let q3 = FieldDescriptor::rationals(3);
    let r = reconstruct_isomorphism(&oracle(&q3, &["t3", "t1+t3", "t2*t3"], -1), &cfg).unwrap();
    assert_eq!(r.morphism, map(&q3, &["t3", "t1+t3", "t2*t3"]));
    assert_eq!(r.sign, -1);
}

#[test]
fn timed_run_reports_stages() {
    let q = FieldDescriptor::rationals(2);
    let tick = std::cell::Cell::new(0u64);
    let clock = || {
        tick.set(tick.get() + 1);
        tick.get()
    };
    let r = fieldrec_core::reconstruct::reconstruct_timed(&oracle(&q, &["t2", "t1"], 1), &EngineConfig::default(), &clock)
        .unwrap();
    let stages: Vec<Stage> = r.timings.iter().map(|(s, _)| *s).collect();
    assert_eq!(stages.first(), Some(&Stage::ResolvePower));
    assert_eq!(stages.last(), Some(&Stage::Verification));
    assert!(r.timings.iter().all(|(_, t)| *t == 1));
}

#[test]
fn well_definedness_audit() {
    for d in [FieldDescriptor::rationals(2), FieldDescriptor::prime(3, 2)] {
        let o = oracle(&d, &["t2", "t1+t2^2"], -1);
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..50 {
            let x = sample_element(&d, &mut rng);
            let answers: Vec<RationalFunction> = [2, -1, 4]
                .iter()
                .map(|c| o.query_rep(&x.scale(&int(*c))).unwrap())
                .collect();
            assert!(answers.windows(2).all(|w| w[0] == w[1]), "{x}");
            let cls = MultClass::of(&x).unwrap();
            assert_eq!(o.query(&cls).unwrap(), MultClass::of(&answers[0]).unwrap());
            assert_eq!(class_representative(&x).unwrap(), cls.representative());
        }
    }
}

#[test]
fn inverse_symmetry() {
    let cfg = EngineConfig::default();
    for d in [FieldDescriptor::rationals(2), FieldDescriptor::prime(3, 2)] {
        let sigma = map(&d, &["t1+t1*t2", "t2"]);
        let sigma_inv = map(&d, &["t1/(1+t2)", "t2"]);
        let o = HiddenMapOracle::new(sigma.clone(), -1, 77).unwrap();
        let inv = o.inverse(&sigma_inv).unwrap();
        let a = reconstruct_isomorphism(&o, &cfg).unwrap();
        let b = reconstruct_isomorphism(&inv, &cfg).unwrap();
        assert!(a.morphism.is_inverse_of(&b.morphism).unwrap());
        assert_eq!((a.sign, b.sign), (-1, -1));
        assert!(o.inverse(&sigma).is_err());
    }
}

#[test]
fn uniqueness_across_seeds() {
    let q = FieldDescriptor::rationals(2);
    let o = oracle(&q, &["(2*t1+t2)", "t1-t2+3"], 1);
    let a = reconstruct_isomorphism(&o, &EngineConfig { seed: 1, ..EngineConfig::default() }).unwrap();
    let b = reconstruct_isomorphism(&o, &EngineConfig { seed: 2, ..EngineConfig::default() }).unwrap();
    assert_eq!(a.morphism, b.morphism);
}

#[test]
fn corrupted_probes_are_diagnosed() {
    let cfg = EngineConfig::default();
    for d in [FieldDescriptor::rationals(2), FieldDescriptor::prime(3, 2), FieldDescriptor::prime(2, 2)] {
        for x in probe_set(&d) {
            let o = oracle(&d, &["t2", "t1+t2"], 1).corrupted_at(&x).unwrap();
            match reconstruct_isomorphism(&o, &cfg) {
                Err(Error::Reconstruction { .. }) => {}
                other => panic!("corruption at {x} over {d}: {other:?}"),
            }
        }
    }
}
