//! Dense univariate polynomials over a field context, stored low-to-high and
//! trimmed (the zero polynomial is the empty vector).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;

use super::field::Field;

pub fn trim<F: Field>(k: &F, mut a: Vec<F::Elem>) -> Vec<F::Elem> {
    while a.last().is_some_and(|c| k.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn deg<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn constant<F: Field>(k: &F, c: F::Elem) -> Vec<F::Elem> {
    trim(k, vec![c])
}

pub fn x_power<F: Field>(k: &F, n: usize) -> Vec<F::Elem> {
    let mut v = vec![k.zero(); n + 1];
    v[n] = k.one();
    v
}

pub fn add<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = k.zero();
    let out = (0..n)
        .map(|i| k.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(k, out)
}

pub fn sub<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = k.zero();
    let out = (0..n)
        .map(|i| k.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(k, out)
}

pub fn neg<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|c| k.neg(c)).collect()
}

pub fn scale<F: Field>(k: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    if k.is_zero(c) {
        return Vec::new();
    }
    a.iter().map(|x| k.mul(x, c)).collect()
}

pub fn mul<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    trim(k, out)
}

/// Quotient and remainder; panics if `b` is zero.
pub fn divrem<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = deg(b).expect("division by zero polynomial");
    let mut r = a.to_vec();
    if a.len() <= db {
        return (Vec::new(), r);
    }
    let inv_lc = k.inv(&b[db]);
    let mut q = vec![k.zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = k.mul(&r[i + db], &inv_lc);
        if !k.is_zero(&c) {
            for (j, y) in b.iter().enumerate() {
                r[i + j] = k.sub(&r[i + j], &k.mul(&c, y));
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(k, q), trim(k, r))
}

pub fn rem<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    divrem(k, a, b).1
}

/// `a / b` when the division is exact.
pub fn div_exact<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let (q, r) = divrem(k, a, b);
    r.is_empty().then_some(q)
}

pub fn lc<F: Field>(k: &F, a: &[F::Elem]) -> F::Elem {
    a.last().cloned().unwrap_or_else(|| k.zero())
}

pub fn monic<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(c) => {
            let inv = k.inv(c);
            a.iter().map(|x| k.mul(x, &inv)).collect()
        }
    }
}

pub fn gcd<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        let r = rem(k, &a, &b);
        a = b;
        b = r;
    }
    monic(k, &a)
}

/// `(g, s, t)` with `s a + t b = g`, `g` monic (or zero if both are zero).
pub fn ext_gcd<F: Field>(
    k: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>, Vec<F::Elem>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![k.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![k.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(k, &r0, &r1);
        let s2 = sub(k, &s0, &mul(k, &q, &s1));
        let t2 = sub(k, &t0, &mul(k, &q, &t1));
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
        t0 = core::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(c) => {
            let inv = k.inv(c);
            (scale(k, &r0, &inv), scale(k, &s0, &inv), scale(k, &t0, &inv))
        }
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod<F: Field>(k: &F, a: &[F::Elem], m: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let (g, s, _) = ext_gcd(k, &rem(k, a, m), m);
    (g.len() == 1).then(|| rem(k, &s, m))
}

pub fn derivative<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| k.mul(c, &k.from_i64(i as i64)))
        .collect();
    trim(k, out)
}

pub fn eval<F: Field>(k: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    let mut acc = k.zero();
    for c in a.iter().rev() {
        acc = k.add(&k.mul(&acc, x), c);
    }
    acc
}

pub fn mulmod<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    rem(k, &mul(k, a, b), m)
}

pub fn powmod<F: Field>(k: &F, a: &[F::Elem], e: &BigUint, m: &[F::Elem]) -> Vec<F::Elem> {
    let mut acc = rem(k, &[k.one()], m);
    let base = rem(k, a, m);
    for i in (0..e.bits()).rev() {
        acc = mulmod(k, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(k, &acc, &base, m);
        }
    }
    acc
}

pub fn pow<F: Field>(k: &F, a: &[F::Elem], e: u32) -> Vec<F::Elem> {
    let mut acc = vec![k.one()];
    for _ in 0..e {
        acc = mul(k, &acc, a);
    }
    acc
}

/// `a(b(x))`.
pub fn compose<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut acc = Vec::new();
    for c in a.iter().rev() {
        acc = add(k, &mul(k, &acc, b), &[c.clone()]);
    }
    acc
}

/// Yun's squarefree decomposition in characteristic zero: monic factors with
/// multiplicities.
pub fn squarefree_char0<F: Field>(k: &F, f: &[F::Elem]) -> Vec<(Vec<F::Elem>, u32)> {
    debug_assert_eq!(k.characteristic(), 0);
    let f = monic(k, f);
    let mut out = Vec::new();
    if deg(&f).unwrap_or(0) == 0 {
        return out;
    }
    let df = derivative(k, &f);
    let mut a = gcd(k, &f, &df);
    let mut b = div_exact(k, &f, &a).unwrap();
    let mut c = div_exact(k, &df, &a).unwrap();
    let mut d = sub(k, &c, &derivative(k, &b));
    let mut i = 1;
    while deg(&b).unwrap_or(0) > 0 {
        a = gcd(k, &b, &d);
        if deg(&a).unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = div_exact(k, &b, &a).unwrap();
        c = div_exact(k, &d, &a).unwrap();
        d = sub(k, &c, &derivative(k, &b));
        i += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{Fp, Rationals};

    #[test]
    fn ext_gcd_identity() {
        let k = Fp::new(7);
        let a = vec![1, 2, 3, 1];
        let b = vec![6, 0, 1];
        let (g, s, t) = ext_gcd(&k, &a, &b);
        assert_eq!(add(&k, &mul(&k, &s, &a), &mul(&k, &t, &b)), g);
    }

    #[test]
    fn yun() {
        let k = Rationals;
        let x1 = vec![k.from_i64(-1), k.one()];
        let x2 = vec![k.from_i64(2), k.one()];
        let f = mul(&k, &pow(&k, &x1, 3), &x2);
        let sq = squarefree_char0(&k, &f);
        assert_eq!(sq, vec![(x2, 1), (x1, 3)]);
    }
}
