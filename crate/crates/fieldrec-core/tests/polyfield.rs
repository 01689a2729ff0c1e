use std::sync::Arc;

use fieldrec_core::polyfield::{arith, ArithOp, FieldDescriptor, IrreducibilityMode, Polynomial, RationalFunction};
use fieldrec_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;

fn q2() -> Arc<FieldDescriptor> {
    FieldDescriptor::rationals(2)
}

fn f(s: &str, d: &Arc<FieldDescriptor>) -> RationalFunction {
    RationalFunction::parse(s, d).unwrap()
}

#[test]
fn parse_reads_off_and_cancels() {
    let d = q2();
    let x = f("t1/t2", &d);
    assert_eq!(x.numerator().to_string(), "t1");
    assert_eq!(x.denominator().to_string(), "t2");
    assert_eq!(f("(t1^2-1)/(t1-1)", &d).to_string(), "t1+1");
    assert_eq!(f("3t1^2 + 1", &d), f("3*t1*t1+1", &d));
    assert_eq!(f("-t1^2", &d), f("-(t1^2)", &d));
}

#[test]
fn parse_errors() {
    let d = q2();
    let f2 = FieldDescriptor::prime(2, 2);
    assert!(matches!(RationalFunction::parse("1/(t1+t1)", &f2), Err(Error::DivisionByZero)));
    assert_eq!(f("t1+t1", &f2).to_string(), "0");
    assert!(matches!(RationalFunction::parse("t1 +* t2", &d), Err(Error::Syntax { .. })));
    assert!(matches!(RationalFunction::parse("(t1", &d), Err(Error::Syntax { .. })));
    assert!(matches!(RationalFunction::parse("t3", &d), Err(Error::UnknownVariable(_))));
    assert!(matches!(RationalFunction::parse("1.5*t1", &d), Err(Error::CoefficientNotInField(_))));
    assert!(matches!(RationalFunction::parse("t1/3", &FieldDescriptor::prime(3, 2)), Err(Error::CoefficientNotInField(_))));
    assert!(matches!(RationalFunction::parse("t1/(t2-t2)", &d), Err(Error::DivisionByZero)));
    assert!(matches!(RationalFunction::parse("t1^100000", &d), Err(Error::ExponentTooLarge(_))));
    assert!(matches!(RationalFunction::parse("t1^-1", &d), Err(Error::Syntax { .. })));
}

#[test]
fn printing_round_trips() {
    let d = q2();
    for s in ["t1/t2", "(t1+t2)/(t1*t2)", "-3/2*t1^2*t2+5", "t1/(t2^2+1)", "(2*t1-7)/(t1^3+t2)", "-t1/t2^3", "1/(t1*t2)"] {
        let x = f(s, &d);
        assert_eq!(f(&x.to_string(), &d), x, "{s} -> {x}");
    }
    let d5 = FieldDescriptor::prime(5, 3);
    let x = f("(t1-t3)/(2*t2^2+t3)", &d5);
    assert_eq!(f(&x.to_string(), &d5), x);
}

#[test]
fn arithmetic_examples() {
    let d = q2();
    let t1 = f("t1", &d);
    let t2 = f("t2", &d);
    assert_eq!(arith(&t1, &t2, ArithOp::Add).unwrap(), f("t1+t2", &d));
    assert!(arith(&f("t1/t2", &d), &f("t2/t1", &d), ArithOp::Mul).unwrap().is_one());
    let num = f("t1^2 - t2^2", &d);
    assert_eq!(arith(&num, &f("t1-t2", &d), ArithOp::Div).unwrap(), f("t1+t2", &d));
    assert!(matches!(arith(&t1, &RationalFunction::zero(&d), ArithOp::Div), Err(Error::DivisionByZero)));
    let other = FieldDescriptor::rationals(3);
    assert!(matches!(arith(&t1, &f("t1", &other), ArithOp::Add), Err(Error::DescriptorMismatch)));
}

#[test]
fn factor_examples() {
    let d = q2();
    let x = f("t1^2*t2/(t1+t2)", &d);
    let fac = x.factor().unwrap();
    let got: Vec<(String, i64)> = fac.factors.iter().map(|(g, e)| (g.to_string(), *e)).collect();
    let mut want = vec![("t1".to_string(), 2), ("t2".to_string(), 1), ("t1+t2".to_string(), -1)];
    want.sort();
    let mut got_sorted = got.clone();
    got_sorted.sort();
    assert_eq!(got_sorted, want);
    assert_eq!(fac.reassemble(&d), x);

    let c = f("5", &d).factor().unwrap();
    assert_eq!(c.unit, BigRational::from_integer(BigInt::from(5)));
    assert!(c.factors.is_empty());

    let f2 = FieldDescriptor::prime(2, 2);
    let s = f("t1^2+t2^2", &f2).factor().unwrap();
    assert_eq!(s.factors.len(), 1);
    assert_eq!(s.factors[0].0.to_string(), "t1+t2");
    assert_eq!(s.factors[0].1, 2);
    assert!(f("0", &d).factor().is_err());
}

#[test]
fn pth_root_examples() {
    let f2 = FieldDescriptor::prime(2, 2);
    let g = f("t1^2*t2^4 + t1^4", &f2).pth_root().unwrap().unwrap();
    assert_eq!(g, f("t1*t2^2+t1^2", &f2));
    assert_eq!(g.pow(2).unwrap(), f("t1^2*t2^4 + t1^4", &f2));
    let f3 = FieldDescriptor::prime(3, 2);
    assert_eq!(f("t1", &f3).pth_root().unwrap(), None);
    let h = f("2*t1^3", &f3).pth_root().unwrap().unwrap();
    assert_eq!(h.pow(3).unwrap(), f("2*t1^3", &f3));
    assert!(matches!(f("t1", &q2()).pth_root(), Err(Error::CharacteristicZero)));
}

#[test]
fn irreducibility_examples() {
    let d = q2();
    let p = |s: &str| Polynomial::parse(s, &d).unwrap();
    assert!(p("t1*t2-1").is_irreducible(IrreducibilityMode::Absolutely).unwrap());
    assert!(p("t1^2+t2^2").is_irreducible(IrreducibilityMode::OverConstantField).unwrap());
    assert!(!p("t1^2+t2^2").is_irreducible(IrreducibilityMode::Absolutely).unwrap());
    let f3 = FieldDescriptor::prime(3, 2);
    assert!(!Polynomial::parse("t1^2", &f3).unwrap().is_irreducible(IrreducibilityMode::OverConstantField).unwrap());
    assert!(matches!(p("7").is_irreducible(IrreducibilityMode::Absolutely), Err(Error::ConstantInput)));
}

#[test]
fn descriptor_validation() {
    use fieldrec_core::ConstantField;
    assert!(FieldDescriptor::standard(ConstantField::Rationals, 1).is_err());
    assert!(FieldDescriptor::standard(ConstantField::PrimeField(4), 2).is_err());
    assert!(FieldDescriptor::standard(ConstantField::DeclaredFinite { q: 12 }, 2).is_err());
    let d = FieldDescriptor::standard(ConstantField::DeclaredFinite { q: 9 }, 2).unwrap();
    assert_eq!(d.characteristic(), 3);
    let parsed: FieldDescriptor = "F5(x,y,z)".parse().unwrap();
    assert_eq!(parsed.characteristic(), 5);
    assert_eq!(parsed.to_string(), "F5(x,y,z)");
}
