use std::sync::Arc;

use fieldrec_core::milnor::{
    detect_type, find_witness_valuation, CurveClass, nonvanishing_certificate, residue, valuation, Center, DivisorialValuation,
    MilnorSymbol, ResidueValue,
};
use fieldrec_core::polyfield::{ConstantField, FieldDescriptor, Polynomial, RationalFunction};
use fieldrec_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f(s: &str, d: &Arc<FieldDescriptor>) -> RationalFunction {
    RationalFunction::parse(s, d).unwrap()
}

fn at(s: &str, d: &Arc<FieldDescriptor>) -> DivisorialValuation {
    DivisorialValuation::at(&Polynomial::parse(s, d).unwrap()).unwrap()
}

fn sym(xs: &[&str], d: &Arc<FieldDescriptor>) -> MilnorSymbol {
    MilnorSymbol::new(&xs.iter().map(|s| f(s, d)).collect::<Vec<_>>()).unwrap()
}

fn random_poly(rng: &mut ChaCha8Rng, d: &Arc<FieldDescriptor>) -> String {
    let vars = d.variables();
    loop {
        let mut s = String::new();
        for _ in 0..rng.gen_range(1..=3) {
            let c: i64 = rng.gen_range(-4..=4);
            if c == 0 {
                continue;
            }
            s.push_str(&format!("+({c})"));
            for v in vars {
                let e = rng.gen_range(0..=1);
                if e > 0 {
                    s.push_str(&format!("*{v}"));
                }
            }
        }
        if !s.is_empty() && !f(&s, d).is_constant() {
            return s;
        }
    }
}

fn random_element(rng: &mut ChaCha8Rng, d: &Arc<FieldDescriptor>) -> RationalFunction {
    let mut x = f(&random_poly(rng, d), d);
    if rng.gen_bool(0.5) {
        x = x.div(&f(&random_poly(rng, d), d)).unwrap();
    }
    if x.is_constant() {
        random_element(rng, d)
    } else {
        x
    }
}

#[test]
fn valuation_examples() {
    let q = FieldDescriptor::rationals(2);
    assert_eq!(valuation(&f("t1^2/t2", &q), &at("t1", &q)).unwrap(), 2);
    assert_eq!(valuation(&f("t1+t2", &q), &at("t1", &q)).unwrap(), 0);
    let inf = DivisorialValuation::infinity_along(&q, 1).unwrap();
    assert_eq!(valuation(&f("t1/t2^3", &q), &inf).unwrap(), 3);
    assert_eq!(valuation(&f("7", &q), &at("t1+t2^2", &q)).unwrap(), 0);
    assert_eq!(valuation(&f("0", &q), &inf), Err(Error::ZeroInput));
    let line = DivisorialValuation::line_at_infinity(&q);
    assert_eq!(valuation(&f("t1/(t1^3+t2)", &q), &line).unwrap(), 2);
}

#[test]
fn normal_form() {
    let q = FieldDescriptor::rationals(2);
    // Multilinearity and antisymmetry.
    let a = sym(&["t1*t2", "t1+t2"], &q);
    let b = sym(&["t1", "t1+t2"], &q).add(&sym(&["t2", "t1+t2"], &q)).unwrap();
    assert_eq!(a, b);
    assert_eq!(sym(&["t1", "t2"], &q), sym(&["t2", "t1"], &q).neg());
    // Steinberg patterns are recognized, and 1 kills the symbol.
    assert!(sym(&["t1", "1-t1"], &q).is_zero());
    assert!(sym(&["t1/t2", "-t1/t2"], &q).is_zero());
    assert!(sym(&["1", "t2"], &q).is_zero());
    // {f, f} = {f, -1}, which is 2-torsion.
    assert_eq!(sym(&["t1", "t1"], &q), sym(&["t1", "-1"], &q));
    assert!(sym(&["t1", "t1"], &q).scale(2).is_zero());
    assert!(sym(&["t1^2", "-1"], &q).is_zero());
    // Constants of F_p are torsion.
    let f5 = FieldDescriptor::prime(5, 2);
    assert!(sym(&["2", "t1"], &f5).scale(4).is_zero());
    assert!(!sym(&["2", "t1"], &f5).scale(2).is_zero());
    assert_eq!(sym(&["4", "t1"], &f5), sym(&["2", "t1"], &f5).scale(2));
}

#[test]
fn residue_examples() {
    let q = FieldDescriptor::rationals(2);
    let r = residue(&sym(&["t1", "t1+3"], &q), &at("t1", &q)).unwrap();
    let rdesc = at("t1", &q).residue_descriptor().unwrap();
    assert_eq!(r.as_symbol().unwrap(), &sym(&["3"], &rdesc));

    let r = residue(&sym(&["t1", "t2"], &q), &at("t1", &q)).unwrap();
    assert_eq!(r.as_symbol().unwrap(), &sym(&["t2"], &rdesc));
    // Swapping the entries flips the sign.
    let r = residue(&sym(&["t2", "t1"], &q), &at("t1", &q)).unwrap();
    assert_eq!(r.as_symbol().unwrap(), &sym(&["t2"], &rdesc).neg());

    let r = residue(&sym(&["t1+1", "t2+5"], &q), &at("t1", &q)).unwrap();
    assert!(r.as_symbol().unwrap().is_zero());

    // {π, π} = {π, -1} has residue -1.
    let r = residue(&sym(&["t1", "t1"], &q), &at("t1", &q)).unwrap();
    assert_eq!(r.as_symbol().unwrap(), &sym(&["-1"], &rdesc));

    // Degree 1: the valuation as an integer.
    let r = residue(&sym(&["t1^3/t2"], &q), &at("t1", &q)).unwrap();
    assert_eq!(r.as_symbol().unwrap().as_integer(), Some(3));

    // Independent tame-symbol computation at t1 = 0 on ⟨t1^2 (t2+1), t1^3 t2⟩:
    // (-1)^{2·3} (t1^3 t2)^2 / (t1^2 (t2+1))^3 restricted to t1 = 0 is t2^2/(t2+1)^3.
    let r = residue(&sym(&["t1^2*(t2+1)", "t1^3*t2"], &q), &at("t1", &q)).unwrap();
    assert_eq!(r.as_symbol().unwrap(), &sym(&["t2^2/(t2+1)^3"], &rdesc));

    // Linear center with a nonconstant leading coefficient: t1 = 1/t2 on it.
    let v = at("t1*t2-1", &q);
    let r = residue(&sym(&["t1*t2-1", "t1"], &q), &v).unwrap();
    let rd = v.residue_descriptor().unwrap();
    assert_eq!(rd.variables(), ["t2"]);
    assert_eq!(r.as_symbol().unwrap(), &sym(&["1/t2"], &rd));
}

#[test]
fn residue_on_nonrational_curve() {
    let q = FieldDescriptor::rationals(2);
    let v = at("t1^2+t2^2-1", &q);
    assert!(v.residue_descriptor().is_none());
    let ResidueValue::Curve(c) = residue(&sym(&["t1^2+t2^2-1", "t1"], &q), &v).unwrap() else {
        panic!("expected a curve class");
    };
    assert!(c.is_visibly_nonzero());
    let ResidueValue::Curve(c) = residue(&sym(&["t1^2+t2^2", "t1/t2"], &q), &at("t1^2+t2^2", &q)).unwrap() else {
        panic!("expected a curve class");
    };
    // t1/t2 = ±i on the curve: a constant of the residue field.
    assert_eq!(c.is_algebraic_constant(), Some(true));
}

#[test]
fn witness_examples() {
    let q = FieldDescriptor::rationals(2);
    let v = find_witness_valuation(&[f("t1", &q), f("t2", &q)]).unwrap().unwrap();
    assert_eq!(v.center(), &Center::Divisor(Polynomial::parse("t1", &q).unwrap()));
    let v = find_witness_valuation(&[f("t1*t2", &q), f("t1+t2", &q)]).unwrap().unwrap();
    let Center::Divisor(c) = v.center() else { panic!("expected a finite center") };
    assert!(["t1", "t2"].contains(&c.to_string().as_str()));
    assert_ne!(valuation(&f("t1*t2", &q), &v).unwrap(), 0);
    assert_eq!(valuation(&f("t1+t2", &q), &v).unwrap(), 0);
    assert!(find_witness_valuation(&[f("t1", &q), f("t1^2", &q)]).unwrap().is_none());
    // Needs the line at infinity: t1 t2 and t1/t2.
    let v = find_witness_valuation(&[f("t1*t2", &q), f("t1/t2", &q)]).unwrap().unwrap();
    assert_eq!(v.center(), &Center::LineAtInfinity);

    let q3 = FieldDescriptor::rationals(3);
    let v = find_witness_valuation(&[f("t1", &q3), f("t2", &q3), f("t3", &q3)]).unwrap().unwrap();
    assert_eq!(v.center(), &Center::Divisor(Polynomial::parse("t1", &q3).unwrap()));
    assert!(find_witness_valuation(&[f("t1", &q3), f("t2", &q3), f("t2^2+t2", &q3)]).unwrap().is_none());
}

#[test]
fn certificate_examples() {
    let q = FieldDescriptor::rationals(2);
    let s = sym(&["t1", "t2"], &q);
    let chain = nonvanishing_certificate(&s).unwrap().unwrap();
    assert_eq!(chain.steps.len(), 1);
    assert_eq!(chain.steps[0].valuation.to_string(), "t1");
    assert_eq!(chain.terminal_text(&s), "<t2>");
    assert!(chain.replay(&s));

    assert!(nonvanishing_certificate(&sym(&["t1", "1-t1"], &q)).unwrap().is_none());
    assert!(nonvanishing_certificate(&sym(&["t1", "t1^2+1"], &q)).unwrap().is_none());

    let q3 = FieldDescriptor::rationals(3);
    let s = sym(&["t1", "t2", "t3"], &q3);
    let chain = nonvanishing_certificate(&s).unwrap().unwrap();
    assert_eq!(chain.steps.len(), 2);
    assert!(chain.replay(&s));
    assert!(matches!(nonvanishing_certificate(&MilnorSymbol::integer(&q, 1)), Err(Error::UnsupportedDegree(0))));
}

#[test]
fn type_detection() {
    let fin = FieldDescriptor::standard(ConstantField::DeclaredFinite { q: 5 }, 2).unwrap();
    let t = detect_type(&fin).unwrap();
    assert_eq!((t.kind, t.characteristic), (2, 5));
    let fin9 = FieldDescriptor::standard(ConstantField::DeclaredFinite { q: 9 }, 2).unwrap();
    assert_eq!(detect_type(&fin9).unwrap().characteristic, 3);
    let ac0 = FieldDescriptor::standard(ConstantField::DeclaredAlgClosed { characteristic: 0 }, 2).unwrap();
    let t = detect_type(&ac0).unwrap();
    assert_eq!((t.kind, t.characteristic), (1, 0));
    let ac7 = FieldDescriptor::standard(ConstantField::DeclaredAlgClosed { characteristic: 7 }, 2).unwrap();
    assert_eq!(detect_type(&ac7).unwrap().characteristic, 7);
    assert!(matches!(detect_type(&FieldDescriptor::rationals(2)), Err(Error::NeitherType(_))));
    assert!(matches!(detect_type(&FieldDescriptor::prime(5, 2)), Err(Error::NeitherType(_))));
}

#[test]
fn multilinearity_and_antisymmetry_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in [FieldDescriptor::rationals(2), FieldDescriptor::prime(5, 2)] {
        for _ in 0..500 {
            let x = random_element(&mut rng, &d);
            let y = random_element(&mut rng, &d);
            let z = random_element(&mut rng, &d);
            let xy = x.mul(&y);
            // Steinberg patterns legitimately vanish; multilinearity is a
            // statement about the free normal form.
            let pattern = |a: &RationalFunction| {
                let s = a.add(&z);
                a.is_constant() || s.is_zero() || s.is_one()
            };
            if pattern(&x) || pattern(&y) || pattern(&xy) {
                continue;
            }
            let lhs = MilnorSymbol::new(&[xy, z.clone()]).unwrap();
            let rhs = MilnorSymbol::new(&[x.clone(), z.clone()])
                .unwrap()
                .add(&MilnorSymbol::new(&[y.clone(), z.clone()]).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "<{x}*{y}, {z}>");
            let xz = MilnorSymbol::new(&[x.clone(), z.clone()]).unwrap();
            let zx = MilnorSymbol::new(&[z.clone(), x.clone()]).unwrap();
            assert_eq!(xz, zx.neg());
        }
    }
}

#[test]
fn residue_formula_agreement_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for d in [FieldDescriptor::rationals(2), FieldDescriptor::prime(5, 2)] {
        let mut checked = 0;
        while checked < 60 {
            let x1 = random_element(&mut rng, &d);
            let x2 = random_element(&mut rng, &d);
            let Some(v) = find_witness_valuation(&[x1.clone(), x2.clone()]).unwrap() else { continue };
            let s = MilnorSymbol::new(&[x1.clone(), x2.clone()]).unwrap();
            let got = residue(&s, &v).unwrap();
            match got {
                ResidueValue::Symbol(got) => {
                    let bar = v.reduce(&x2).unwrap().unwrap();
                    let want = MilnorSymbol::new(&[bar]).unwrap().scale(valuation(&x1, &v).unwrap());
                    assert_eq!(got, want, "<{x1}, {x2}> at {v}");
                }
                ResidueValue::Curve(c) => {
                    let n = valuation(&x1, &v).unwrap();
                    let want = CurveClass::new(c.center(), &x2.pow(n).unwrap());
                    assert!(c.same_class(&want), "<{x1}, {x2}> at {v}");
                }
            }
            checked += 1;
        }
    }
}

#[test]
fn certificates_replay_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let d = FieldDescriptor::rationals(2);
    let mut found = 0;
    for _ in 0..40 {
        let s = MilnorSymbol::new(&[random_element(&mut rng, &d), random_element(&mut rng, &d)]).unwrap();
        if let Some(chain) = nonvanishing_certificate(&s).unwrap() {
            assert!(chain.replay(&s), "{s}");
            found += 1;
        }
    }
    assert!(found > 0);
}
