use std::sync::Arc;

use fieldrec_core::differentials::d;
use fieldrec_core::dependence::is_regular;
use fieldrec_core::lines::{
    bt_membership, bt_member, check_mcond, density_limit, density_ratio, is_good_pair, line_image_power_test,
    line_membership, mcond_range, shift_to_good, LineBase, LineSpec,
};
use fieldrec_core::differentials::independent;
use fieldrec_core::polyfield::{FieldDescriptor, RationalFunction};
use fieldrec_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;

fn f(s: &str, d: &Arc<FieldDescriptor>) -> RationalFunction {
    RationalFunction::parse(s, d).unwrap()
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn membership_over_constants() {
    let q = FieldDescriptor::rationals(2);
    let l = LineSpec::new(LineBase::Constants, &f("t1", &q), &f("t2", &q)).unwrap();
    let (a, b) = line_membership(&f("t1+5*t2", &q), &l).unwrap().unwrap();
    assert_eq!((a, b), (f("1", &q), f("5", &q)));
    assert!(line_membership(&f("t1*t2", &q), &l).unwrap().is_none());
    // Symmetry with swapped coefficients.
    let l2 = LineSpec::new(LineBase::Constants, &f("t2", &q), &f("t1", &q)).unwrap();
    let (a2, b2) = line_membership(&f("t1+5*t2", &q), &l2).unwrap().unwrap();
    assert_eq!((a2, b2), (f("5", &q), f("1", &q)));
    // Rational generators.
    let l3 = LineSpec::new(LineBase::Constants, &f("1/t1", &q), &f("1/(t1+t2)", &q)).unwrap();
    let (a, b) = line_membership(&f("(3*t1+2*t2)/(t1^2+t1*t2)", &q), &l3).unwrap().unwrap();
    assert_eq!((a, b), (f("2", &q), f("1", &q)));
    assert!(LineSpec::new(LineBase::Constants, &f("t1", &q), &f("3*t1", &q)).is_err());
}

#[test]
fn membership_over_p_subfield() {
    let f2 = FieldDescriptor::prime(2, 2);
    let l = LineSpec::new(LineBase::PSubfield, &f("t1", &f2), &f("t2", &f2)).unwrap();
    let (a, b) = line_membership(&f("t1^3+t1*t2^2", &f2), &l).unwrap().unwrap();
    assert_eq!(a, f("(t1+t2)^2", &f2));
    assert!(b.is_zero());
    assert!(line_membership(&f("t1*t2", &f2), &l).unwrap().is_none());

    let f3 = FieldDescriptor::prime(3, 2);
    let l = LineSpec::new(LineBase::PSubfield, &f("t1", &f3), &f("t2", &f3)).unwrap();
    let z = f("t1^4/t2^3 + (t1^3+1)*t2", &f3);
    let (a, b) = line_membership(&z, &l).unwrap().unwrap();
    assert_eq!((&a, &b), (&f("t1^3/t2^3", &f3), &f("t1^3+1", &f3)));
    assert!(d(&a).is_zero() && d(&b).is_zero());
    assert!(line_membership(&f("t1^2", &f3), &l).unwrap().is_none());
    // x/y in F^p: not a line.
    assert!(LineSpec::new(LineBase::PSubfield, &f("t1", &f3), &f("t1*t2^3", &f3)).is_err());
}

#[test]
fn good_pairs_and_shifts() {
    let q = FieldDescriptor::rationals(2);
    assert!(is_good_pair(&f("t1", &q), &f("t2", &q)).unwrap());
    assert!(!is_good_pair(&f("t1", &q), &f("t1^2", &q)).unwrap());
    assert!(!is_good_pair(&f("t1^2", &q), &f("t2", &q)).unwrap());

    for x in ["t1/t2", "t1", "t1^2*t2+t2^3"] {
        let x = f(x, &q);
        let y = shift_to_good(&x, 50).unwrap();
        assert!(is_regular(&y));
        assert!(independent(&[x.clone(), y.clone()]).unwrap());
        assert!(is_good_pair(&y, &x.mul(&y)).unwrap());
    }
    assert_eq!(shift_to_good(&f("t1", &q), 50).unwrap(), f("t2+t1", &q));

    let f2 = FieldDescriptor::prime(2, 2);
    assert!(matches!(shift_to_good(&f("t1^2", &f2), 50), Err(Error::Precondition(_))));
    let f3 = FieldDescriptor::prime(3, 2);
    let y = shift_to_good(&f("t1*t2", &f3), 50).unwrap();
    assert!(is_good_pair(&y, &f("t1*t2", &f3).mul(&y)).unwrap());
    assert!(matches!(shift_to_good(&f("t1*t2", &f3), 0), Err(Error::BudgetExhausted(0))));
}

#[test]
fn intersection_membership() {
    let q = FieldDescriptor::rationals(2);
    let (x1, x2, y1, y2) = (f("t1", &q), f("t2", &q), f("t1-1", &q), f("t2-1", &q));
    assert!(bt_member(&f("t1-t2", &q), &x1, &x2, &y1, &y2).unwrap());
    assert!(!bt_member(&f("t1+t2^2", &q), &x1, &x2, &y1, &y2).unwrap());
    let m = bt_membership(&f("t2", &q), &x1, &x2, &y1, &y2).unwrap();
    assert!(m.boundary);
    assert!(!m.member);
    assert!(bt_member(&f("t1", &q), &f("t1", &q), &f("t1", &q), &y1, &y2).is_err());
}

#[test]
fn power_normalization() {
    assert!(check_mcond(1, 0).is_ok());
    assert_eq!(check_mcond(2, 0), Err(Error::InvalidPower(2)));
    assert_eq!(check_mcond(-2, 2), Err(Error::InvalidPower(-2)));
    assert!(check_mcond(-2, 5).is_ok());
    assert_eq!(check_mcond(3, 5), Err(Error::InvalidPower(3)));
    assert_eq!(mcond_range(7), vec![1, -1, 2, -2, 3, -3]);

    let f5 = FieldDescriptor::prime(5, 2);
    let (t1, t2) = (f("t1", &f5), f("t2", &f5));
    let zs: Vec<RationalFunction> = ["t1+t2", "t1+3*t2", "t1+t2^5*t2"].iter().map(|s| f(s, &f5)).collect();
    let ident: Vec<_> = zs.iter().map(|z| (z.clone(), z.clone())).collect();
    assert!(line_image_power_test(&ident, (&t1, &t1), (&t2, &t2), 1).unwrap());
    let inv: Vec<_> = zs.iter().map(|z| (z.clone(), z.inv().unwrap())).collect();
    let (t1i, t2i) = (t1.inv().unwrap(), t2.inv().unwrap());
    assert!(!line_image_power_test(&inv, (&t1, &t1i), (&t2, &t2i), 1).unwrap());
    assert!(line_image_power_test(&inv, (&t1, &t1i), (&t2, &t2i), -1).unwrap());
    // Twist by m = 2: images are cubes (2·3 ≡ 1 mod 5).
    let cube = |z: &RationalFunction| z.pow(3).unwrap();
    let tw: Vec<_> = zs.iter().map(|z| (z.clone(), cube(z))).collect();
    let passing: Vec<i64> = mcond_range(5)
        .into_iter()
        .filter(|&m| line_image_power_test(&tw, (&t1, &cube(&t1)), (&t2, &cube(&t2)), m).unwrap())
        .collect();
    assert_eq!(passing, vec![2]);
    assert!(line_image_power_test(&ident, (&t1, &t1), (&t2, &t2), 3).is_err());
}

#[test]
fn density_values() {
    assert_eq!(density_ratio(2, 2, 4).unwrap(), ratio(3, 5));
    assert_eq!(density_ratio(3, 2, 2).unwrap(), ratio(1, 3));
    assert_eq!(density_limit(3, 3), ratio(1, 9));
    // Independent count: enumerate exponent vectors directly.
    for (p, r, dd) in [(2u64, 2u64, 7u64), (3, 3, 8), (5, 3, 11)] {
        let mut total = 0i64;
        let mut good = 0i64;
        let mut e = vec![0u64; r as usize];
        loop {
            if e.iter().sum::<u64>() == dd {
                total += 1;
                if e[1..].iter().all(|x| x % p == 0) {
                    good += 1;
                }
            }
            let mut i = 0;
            while i < e.len() {
                e[i] += 1;
                if e[i] <= dd {
                    break;
                }
                e[i] = 0;
                i += 1;
            }
            if i == e.len() {
                break;
            }
        }
        assert_eq!(density_ratio(p, r, dd).unwrap(), ratio(good, total));
    }
    assert!(density_ratio(4, 2, 3).is_err());
}
