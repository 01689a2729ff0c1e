use std::sync::Arc;

use fieldrec_core::dependence::{alg_dependent, in_rel_alg_closure, is_regular, p_mult_dependent, relation, MultClass};
use fieldrec_core::differentials::{d, derivative_wrt, dlog, independent};
use fieldrec_core::polyfield::{FieldDescriptor, RationalFunction};
use fieldrec_core::Error;

fn f(s: &str, d: &Arc<FieldDescriptor>) -> RationalFunction {
    RationalFunction::parse(s, d).unwrap()
}

#[test]
fn differential_examples() {
    let q = FieldDescriptor::rationals(2);
    assert!(d(&f("7", &q)).is_zero());
    let w = d(&f("t1*t2", &q));
    assert_eq!(w.coeffs(), &[f("t2", &q), f("t1", &q)]);
    let f2 = FieldDescriptor::prime(2, 2);
    assert!(d(&f("t1^2", &f2)).is_zero());

    assert_eq!(derivative_wrt(&f("t1^3+t1", &q), &f("t1", &q)).unwrap(), f("3*t1^2+1", &q));
    assert_eq!(derivative_wrt(&f("t1^2/t2^2", &q), &f("t1/t2", &q)).unwrap(), f("2*t1/t2", &q));
    assert_eq!(derivative_wrt(&f("t2", &q), &f("t1", &q)), Err(Error::NotDependent));
    assert_eq!(derivative_wrt(&f("t2", &q), &f("5", &q)), Err(Error::ZeroDifferential));

    assert!(independent(&[f("t1", &q), f("t2", &q)]).unwrap());
    assert!(!independent(&[f("t1", &q), f("t1^2", &q)]).unwrap());
    assert!(!independent(&[f("t1", &f2), f("t1^2", &f2)]).unwrap());
    let f3 = FieldDescriptor::prime(3, 2);
    assert!(independent(&[f("t1", &f3), f("t1^3*t2", &f3)]).unwrap());
    assert_eq!(independent(&[]), Err(Error::EmptyInput));

    let l = dlog(&f("t1*t2", &q)).unwrap();
    assert_eq!(l.coeffs(), &[f("1/t1", &q), f("1/t2", &q)]);
    assert!(dlog(&f("3", &q)).unwrap().is_zero());
    assert!(dlog(&f("(t1+t2^2)^3", &f3)).unwrap().is_zero());
}

#[test]
fn algebraic_dependence_examples() {
    let q = FieldDescriptor::rationals(2);
    assert!(alg_dependent(&f("t1", &q), &f("t1^2+1", &q)).unwrap());
    assert!(!alg_dependent(&f("t1", &q), &f("t2", &q)).unwrap());
    assert!(alg_dependent(&f("t1*t2", &q), &f("(t1*t2)^3+t1*t2", &q)).unwrap());
    assert!(alg_dependent(&f("2", &q), &f("5", &q)).unwrap());
    assert!(!alg_dependent(&f("2", &q), &f("t1", &q)).unwrap());

    // Characteristic p: the Jacobian criterion alone is not enough.
    let f3 = FieldDescriptor::prime(3, 2);
    assert!(!alg_dependent(&f("t1^3", &f3), &f("t2^3", &f3)).unwrap());
    assert!(!alg_dependent(&f("t1", &f3), &f("t1+t2^3", &f3)).unwrap());
    assert!(alg_dependent(&f("t1", &f3), &f("t1^3+t1", &f3)).unwrap());
    assert!(alg_dependent(&f("t1^3*t2^3", &f3), &f("t1*t2+1", &f3)).unwrap());
    let h = relation(&f("t1*t2", &f3), &f("(t1*t2)^2+1", &f3)).unwrap();
    assert_eq!(h.total_degree(), Some(2));

    assert!(in_rel_alg_closure(&f("t1^2", &q), &f("t1", &q)).unwrap());
    assert!(!in_rel_alg_closure(&f("t2", &q), &f("t1", &q)).unwrap());
    assert!(in_rel_alg_closure(&f("(t1^2+1)/t1", &q), &f("t1", &q)).unwrap());
    assert!(in_rel_alg_closure(&f("4", &q), &f("t1", &q)).unwrap());
}

#[test]
fn p_multiplicative_dependence_examples() {
    let f3 = FieldDescriptor::prime(3, 2);
    assert!(p_mult_dependent(&f("t1^2", &f3), &f("t1^5", &f3)).unwrap());
    assert!(!p_mult_dependent(&f("t1", &f3), &f("t2", &f3)).unwrap());
    assert!(p_mult_dependent(&f("t1", &f3), &f("t1*t2^3", &f3)).unwrap());
    assert!(!p_mult_dependent(&f("t1^3", &f3), &f("t1", &f3)).unwrap());
    let q = FieldDescriptor::rationals(2);
    assert!(p_mult_dependent(&f("t1^2*t2", &q), &f("1/(t1^4*t2^2)", &q)).unwrap());
    assert!(!p_mult_dependent(&f("t1", &q), &f("t1*t2", &q)).unwrap());
}

#[test]
fn regularity_examples() {
    let q = FieldDescriptor::rationals(2);
    assert!(is_regular(&f("t1", &q)));
    assert!(!is_regular(&f("t1^2", &q)));
    assert!(is_regular(&f("t1^2+t2^2", &q)));
    assert!(!is_regular(&f("5", &q)));
    assert!(is_regular(&f("t1/t2", &q)));
    assert!(!is_regular(&f("t1^2/t2^2", &q)));
    let f3 = FieldDescriptor::prime(3, 2);
    assert!(!is_regular(&f("t1^3", &f3)));
    assert!(is_regular(&f("t1*t2", &f3)));
    assert!(is_regular(&f("t1^3+t2", &f3)));
    assert!(!is_regular(&f("t1^3*t2^3+t1^6", &f3)));
}

#[test]
fn classes() {
    let q = FieldDescriptor::rationals(2);
    let a = MultClass::of(&f("3*t1^2/(t1+t2)", &q)).unwrap();
    let b = MultClass::of(&f("t1^2/(7*t1+7*t2)", &q)).unwrap();
    assert_eq!(a, b);
    assert!(a.mul(&a.inv()).is_identity());
    assert_eq!(a.representative(), f("t1^2/(t1+t2)", &q));
    assert!(MultClass::of(&f("-2", &q)).unwrap().is_identity());
}
