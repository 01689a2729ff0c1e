//! Absolute irreducibility.
//!
//! An irreducible `f` over a perfect field `K` splits over `K-bar` into
//! Galois-conjugate components of equal multidegree, so their number divides
//! every partial degree and the total degree.  Over `F_q` it therefore
//! suffices to test irreducibility over `F_{q^s}` for primes `s` dividing that
//! gcd.  Over `Q` a good reduction that is absolutely irreducible proves the
//! claim; otherwise Trager's norm over the field of definition of one
//! component decides it exactly.

use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::BigRational;

use super::field::{factor_u64, FiniteField, Fp, Rationals};
use super::linalg::resultant;
use super::mfactor::{self, extension_of, factor, map_into_ext, FactorField};
use super::mpoly::{MPoly, MAX_VARS};
use super::upoly;

type P<F> = MPoly<<F as super::field::Field>::Elem>;

/// gcd of the partial degrees of the variables that occur and of the total
/// degree.
pub fn degree_gcd<E: Clone + Eq + Ord + core::hash::Hash + core::fmt::Debug>(f: &MPoly<E>) -> u32 {
    let mut g = f.total_degree().unwrap_or(0);
    for v in f.vars_used() {
        g = g.gcd(&(f.degree_in(v) as u32));
    }
    g
}

fn is_single_factor<F: FactorField>(k: &F, f: &P<F>) -> bool {
    let (_, fs) = factor(k, f);
    fs.len() == 1 && fs[0].1 == 1
}

/// Absolute irreducibility over a finite field.
pub fn abs_irreducible_finite<K: FiniteField + FactorField>(k: &K, f: &P<K>) -> bool {
    if f.total_degree().unwrap_or(0) == 0 {
        return false;
    }
    if !is_single_factor(k, f) {
        return false;
    }
    let g = degree_gcd(f);
    if g == 1 {
        return true;
    }
    for (s, _) in factor_u64(g as u64) {
        let emb = extension_of(k, s as usize);
        let fe = map_into_ext(k, &emb, f).monic(&emb.ext);
        if mfactor::factor_squarefree(&emb.ext, &fe).len() > 1 {
            return false;
        }
    }
    true
}

const REDUCTION_PRIMES: [u64; 3] = [2_147_483_647, 1_000_000_007, 998_244_353];

/// Absolute irreducibility over `Q`.
pub fn abs_irreducible_q(f: &P<Rationals>) -> bool {
    let k = Rationals;
    if f.total_degree().unwrap_or(0) == 0 {
        return false;
    }
    if !is_single_factor(&k, f) {
        return false;
    }
    let g = degree_gcd(f);
    if g == 1 {
        return true;
    }
    let vars = f.vars_used();
    for p in REDUCTION_PRIMES {
        let Some(fp) = mfactor::reduce_mod_p(f, p) else { continue };
        let same_shape = fp.total_degree() == f.total_degree()
            && vars.iter().all(|&v| fp.degree_in(v) == f.degree_in(v));
        if same_shape && abs_irreducible_finite(&Fp::new(p), &fp) {
            return true;
        }
    }
    trager(f)
}

/// Exact decision via the norm of `f(x - s*alpha, ...)` over `Q(alpha)`,
/// `alpha` a root of a fiber factor of minimal degree.
fn trager(f: &P<Rationals>) -> bool {
    let k = Rationals;
    let vars = f.vars_used();
    let x = vars[0];
    let others: Vec<usize> = vars[1..].to_vec();
    let lcx = f.lc_in(&k, x);
    // Specialize the other variables to a point with a squarefree fiber.
    let mut i = 0u64;
    let h = loop {
        i += 1;
        let pt: Vec<BigRational> = others
            .iter()
            .enumerate()
            .map(|(j, _)| k.point(i * (j as u64 + 3) + j as u64).unwrap())
            .collect();
        let mut l = lcx.clone();
        let mut fa = f.clone();
        for (v, a) in others.iter().zip(&pt) {
            l = l.eval_var(&k, *v, a);
            fa = fa.eval_var(&k, *v, a);
        }
        if l.is_zero() {
            continue;
        }
        let u = fa.to_upoly(&k, x).unwrap();
        let d = upoly::derivative(&k, &u);
        if upoly::deg(&upoly::gcd(&k, &u, &d)) != Some(0) {
            continue;
        }
        let us = k.uni_factor_sqf(&upoly::monic(&k, &u));
        break us.into_iter().min_by_key(|g| g.len()).unwrap();
    };
    if h.len() == 2 {
        return true;
    }
    let nv = f.nvars + 1;
    assert!(nv <= MAX_VARS);
    let z = f.nvars;
    let hz = MPoly::from_upoly(&k, nv, z, &h);
    let fz = f.clone().with_nvars(nv);
    for s in 1i64.. {
        let shift = MPoly::var(&k, nv, x).sub(&k, &MPoly::var(&k, nv, z).scale(&k, &k.from_i64(s)));
        let g = fz.subst_var(&k, x, &shift);
        let norm = resultant(&k, &hz, &g, z).with_nvars(f.nvars);
        let dn = norm.derivative(&k, x);
        if !super::gcd::gcd(&k, &norm, &dn).is_constant() {
            continue;
        }
        return is_single_factor(&k, &norm);
    }
    unreachable!()
}

use super::field::Field;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_squares() {
        let k = Rationals;
        let x = MPoly::var(&k, 2, 0);
        let y = MPoly::var(&k, 2, 1);
        let f = x.mul(&k, &x).add(&k, &y.mul(&k, &y));
        assert!(!abs_irreducible_q(&f));
        let g = f.add(&k, &MPoly::one(&k, 2));
        assert!(abs_irreducible_q(&g));
        // x^2 - 2 y^2 splits over Q(sqrt 2); the reductions all fail too.
        let h = x.mul(&k, &x).sub(&k, &y.mul(&k, &y).scale(&k, &k.from_i64(2)));
        assert!(!abs_irreducible_q(&h));
        assert!(!trager(&h));
        assert!(trager(&g));
    }

    #[test]
    fn finite_field_conjugate_components() {
        // x^2 + y^2 over F_3 is irreducible but splits over F_9.
        let k = Fp::new(3);
        let x = MPoly::var(&k, 2, 0);
        let y = MPoly::var(&k, 2, 1);
        let f = x.mul(&k, &x).add(&k, &y.mul(&k, &y));
        assert!(!abs_irreducible_finite(&k, &f));
        let g = f.add(&k, &MPoly::one(&k, 2));
        assert!(abs_irreducible_finite(&k, &g));
    }
}
