//! Dispatch from the descriptor-level coefficient representation
//! (`BigRational`, reduced into `[0, p)` in characteristic `p`) to the
//! specialized arithmetic contexts.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::arith::{absirr, gcd as mgcd, mfactor, ConstField, Fp, MPoly, Rationals};

pub type Poly = MPoly<BigRational>;

pub fn to_fp(f: &Poly, p: u64) -> MPoly<u64> {
    let fp = Fp::new(p);
    f.map_coeffs(&fp, |c| c.numer().to_u64().expect("F_p coefficient"))
}

pub fn from_fp(f: &MPoly<u64>) -> Poly {
    f.map_coeffs(&Rationals, |c| BigRational::from_integer(BigInt::from(*c)))
}

/// Monic gcd.
pub fn gcd(k: &ConstField, a: &Poly, b: &Poly) -> Poly {
    match k.fp() {
        None => mgcd::gcd(k, a, b),
        Some(fp) => {
            let p = fp.p();
            from_fp(&mgcd::gcd(&fp, &to_fp(a, p), &to_fp(b, p)))
        }
    }
}

/// Leading coefficient and monic irreducible factors with multiplicity.
pub fn factor(k: &ConstField, f: &Poly) -> (BigRational, Vec<(Poly, u32)>) {
    match k.fp() {
        None => mfactor::factor(&Rationals, f),
        Some(fp) => {
            let (c, fs) = mfactor::factor(&fp, &to_fp(f, fp.p()));
            (k.from_u64(c), fs.into_iter().map(|(g, m)| (from_fp(&g), m)).collect())
        }
    }
}

pub fn is_irreducible(k: &ConstField, f: &Poly) -> bool {
    if f.is_constant() {
        return false;
    }
    let (_, fs) = factor(k, f);
    fs.len() == 1 && fs[0].1 == 1
}

pub fn is_abs_irreducible(k: &ConstField, f: &Poly) -> bool {
    match k.fp() {
        None => absirr::abs_irreducible_q(f),
        Some(fp) => absirr::abs_irreducible_finite(&fp, &to_fp(f, fp.p())),
    }
}

/// Exact quotient; panics when `b` does not divide `a`.
pub fn div(k: &ConstField, a: &Poly, b: &Poly) -> Poly {
    if b.is_one(k) {
        return a.clone();
    }
    match k.fp() {
        None => a.div_exact(k, b).expect("inexact division"),
        Some(fp) => {
            let p = fp.p();
            from_fp(&to_fp(a, p).div_exact(&fp, &to_fp(b, p)).expect("inexact division"))
        }
    }
}

pub fn mul(k: &ConstField, a: &Poly, b: &Poly) -> Poly {
    match k.fp() {
        None => a.mul(k, b),
        Some(fp) => {
            let p = fp.p();
            from_fp(&to_fp(a, p).mul(&fp, &to_fp(b, p)))
        }
    }
}

pub fn resultant(k: &ConstField, a: &Poly, b: &Poly, x: usize) -> Poly {
    match k.fp() {
        None => crate::arith::linalg::resultant(k, a, b, x),
        Some(fp) => {
            let p = fp.p();
            from_fp(&crate::arith::linalg::resultant(&fp, &to_fp(a, p), &to_fp(b, p), x))
        }
    }
}

pub fn content_in(k: &ConstField, a: &Poly, x: usize) -> Poly {
    match k.fp() {
        None => mgcd::content_in(k, a, x),
        Some(fp) => from_fp(&mgcd::content_in(&fp, &to_fp(a, fp.p()), x)),
    }
}

/// Exact quotient, `None` if `b` does not divide `a`.
pub fn try_div(k: &ConstField, a: &Poly, b: &Poly) -> Option<Poly> {
    match k.fp() {
        None => a.div_exact(k, b),
        Some(fp) => {
            let p = fp.p();
            to_fp(a, p).div_exact(&fp, &to_fp(b, p)).map(|q| from_fp(&q))
        }
    }
}
