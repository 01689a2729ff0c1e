//! Multivariate gcd by recursive primitive polynomial remainder sequences.

use alloc::vec::Vec;

use super::field::{Field, Fp};
use super::mpoly::{MPoly, Mono};
use super::upoly;

type P<F> = MPoly<<F as Field>::Elem>;

/// Monic gcd (zero only if both inputs are zero).
pub fn gcd<F: Field>(k: &F, a: &P<F>, b: &P<F>) -> P<F> {
    let nv = a.nvars.max(b.nvars);
    if a.is_zero() {
        return b.monic(k);
    }
    if b.is_zero() {
        return a.monic(k);
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(k, nv);
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let a = strip_mono(k, a, &ma);
    let b = strip_mono(k, b, &mb);
    let g = gcd_nomono(k, &a, &b);
    g.mul_term(k, &ma.gcd(&mb), &k.one()).monic(k)
}

fn strip_mono<F: Field>(k: &F, a: &P<F>, m: &Mono) -> P<F> {
    if m.is_one() {
        a.clone()
    } else {
        a.div_exact(k, &MPoly::monomial(k, a.nvars, *m, k.one())).unwrap()
    }
}

fn gcd_nomono<F: Field>(k: &F, a: &P<F>, b: &P<F>) -> P<F> {
    let nv = a.nvars.max(b.nvars);
    if a.is_constant() || b.is_constant() {
        return MPoly::one(k, nv);
    }
    let va = a.vars_used();
    let vb = b.vars_used();
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        let ca = content_in(k, a, v);
        return gcd(k, &ca, b);
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        let cb = content_in(k, b, v);
        return gcd(k, a, &cb);
    }
    if va.len() == 1 {
        let x = va[0];
        let ua = a.to_upoly(k, x).unwrap();
        let ub = b.to_upoly(k, x).unwrap();
        return MPoly::from_upoly(k, nv, x, &upoly::gcd(k, &ua, &ub));
    }
    // Main variable: the one of smallest degree keeps the PRS short.
    let x = *va
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .unwrap();
    let ca = content_in(k, a, x);
    let cb = content_in(k, b, x);
    let c = gcd(k, &ca, &cb);
    let pa = if ca.is_constant() { a.clone() } else { a.div_exact(k, &ca).unwrap() };
    let pb = if cb.is_constant() { b.clone() } else { b.div_exact(k, &cb).unwrap() };
    if pa.degree_in(x) == 0 || pb.degree_in(x) == 0 || modular_coprime(k, &pa, &pb, x) {
        return c;
    }
    let g = prs(k, pa, pb, x);
    c.mul(k, &g).monic(k)
}

/// Gcd of the coefficients with respect to variable `x`.
pub fn content_in<F: Field>(k: &F, a: &P<F>, x: usize) -> P<F> {
    let mut cs = a.coeffs_in(k, x).into_iter().filter(|c| !c.is_zero()).collect::<Vec<_>>();
    cs.sort_by_key(|c| c.len());
    let mut g = match cs.first() {
        None => return MPoly::zero(a.nvars),
        Some(c) => c.monic(k),
    };
    for c in &cs[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd(k, &g, c);
    }
    g
}

/// Primitive part with respect to `x`.
pub fn primitive_part_in<F: Field>(k: &F, a: &P<F>, x: usize) -> P<F> {
    let c = content_in(k, a, x);
    if c.is_constant() {
        a.monic(k)
    } else {
        a.div_exact(k, &c).unwrap().monic(k)
    }
}

/// Pseudo-remainder of `a` by `b` with respect to `x`.
pub fn prem<F: Field>(k: &F, a: &P<F>, b: &P<F>, x: usize) -> P<F> {
    let nv = a.nvars.max(b.nvars);
    let mut r = a.coeffs_in(k, x);
    let bc = b.coeffs_in(k, x);
    let n = bc.len() - 1;
    let lb = &bc[n];
    let lb_const = lb.constant_value(k);
    while r.len() > n && !r.is_empty() {
        let m = r.len() - 1;
        let c = r.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        match &lb_const {
            Some(l) => {
                let f = k.div(&k.one(), l);
                let c = c.scale(k, &f);
                for j in 0..n {
                    r[m - n + j] = r[m - n + j].sub(k, &c.mul(k, &bc[j]));
                }
            }
            None => {
                for t in r.iter_mut() {
                    *t = t.mul(k, lb);
                }
                for j in 0..n {
                    r[m - n + j] = r[m - n + j].sub(k, &c.mul(k, &bc[j]));
                }
            }
        }
        while r.last().is_some_and(|t| t.is_zero()) {
            r.pop();
        }
    }
    MPoly::from_coeffs_in(k, nv, x, &r)
}

fn prs<F: Field>(k: &F, a: P<F>, b: P<F>, x: usize) -> P<F> {
    let nv = a.nvars.max(b.nvars);
    let (mut a, mut b) = if a.degree_in(x) >= b.degree_in(x) { (a, b) } else { (b, a) };
    loop {
        let r = prem(k, &a, &b, x);
        if r.is_zero() {
            return primitive_part_in(k, &b, x);
        }
        if r.degree_in(x) == 0 {
            return MPoly::one(k, nv);
        }
        a = b;
        b = primitive_part_in(k, &r, x);
    }
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One-sided test: `true` proves that `a` and `b` (primitive in `x`) have no
/// common factor of positive degree in `x`.
fn modular_coprime<F: Field>(k: &F, a: &P<F>, b: &P<F>, x: usize) -> bool {
    let Some(p) = k.modular_prime() else { return false };
    let fp = Fp::new(p);
    let mut seed = 0x1234_5678 ^ (a.len() as u64) << 20 ^ b.len() as u64;
    let pt: Vec<u64> = (0..a.nvars.max(b.nvars)).map(|_| splitmix(&mut seed) % p).collect();
    let image = |f: &P<F>| -> Option<Vec<u64>> {
        let mut v = alloc::vec![0u64; f.degree_in(x) as usize + 1];
        for (m, c) in &f.terms {
            let mut t = k.reduce_modular(c)?;
            for (i, &e) in m.0.iter().enumerate().take(f.nvars) {
                if i != x && e > 0 {
                    t = fp.mul(&t, &fp.pow(&pt[i], e as u64));
                }
            }
            let j = m.get(x) as usize;
            v[j] = fp.add(&v[j], &t);
        }
        Some(v)
    };
    let (Some(ia), Some(ib)) = (image(a), image(b)) else { return false };
    if ia.last() == Some(&0) || ib.last() == Some(&0) {
        return false;
    }
    upoly::gcd(&fp, &ia, &ib).len() == 1
}

/// `a / gcd(a, b)` and `b / gcd(a, b)` along with the gcd.
pub fn cofactors<F: Field>(k: &F, a: &P<F>, b: &P<F>) -> (P<F>, P<F>, P<F>) {
    let g = gcd(k, a, b);
    let ca = a.div_exact(k, &g).unwrap();
    let cb = b.div_exact(k, &g).unwrap();
    (g, ca, cb)
}

pub fn lcm<F: Field>(k: &F, a: &P<F>, b: &P<F>) -> P<F> {
    let (_, ca, _) = cofactors(k, a, b);
    ca.mul(k, b).monic(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{ConstField, Fp, Rationals};

    #[test]
    fn gcd_of_products_q() {
        let k = Rationals;
        let x = MPoly::var(&k, 3, 0);
        let y = MPoly::var(&k, 3, 1);
        let z = MPoly::var(&k, 3, 2);
        let one = MPoly::one(&k, 3);
        let g = x.mul(&k, &y).add(&k, &z.pow(&k, 2)).add(&k, &one);
        let a = g.mul(&k, &x.add(&k, &y.pow(&k, 3)));
        let b = g.mul(&k, &z.sub(&k, &x.mul(&k, &y)));
        assert_eq!(gcd(&k, &a, &b), g.monic(&k));
        assert!(gcd(&k, &a, &b.add(&k, &one)).is_one(&k));
    }

    #[test]
    fn gcd_small_characteristic() {
        let k = Fp::new(2);
        let x = MPoly::var(&k, 2, 0);
        let y = MPoly::var(&k, 2, 1);
        let s = x.add(&k, &y);
        let a = s.pow(&k, 3).mul(&k, &x);
        let b = s.pow(&k, 2).mul(&k, &y.add(&k, &MPoly::one(&k, 2)));
        assert_eq!(gcd(&k, &a, &b), s.pow(&k, 2));
        let c = ConstField::prime(3);
        let u = MPoly::var(&c, 2, 0);
        assert_eq!(gcd(&c, &u.pow(&c, 3), &u.pow(&c, 2)), u.pow(&c, 2));
    }
}
