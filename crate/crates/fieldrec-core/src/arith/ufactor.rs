//! Univariate factorization over finite fields: squarefree decomposition,
//! distinct-degree and equal-degree (Cantor–Zassenhaus) splitting.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{factor_u64, FiniteField};
use super::upoly::*;

/// Replaces `f(x) = g(x^p)` by `g^(1/p)`; requires `f' = 0`.
pub fn pth_root_poly<F: FiniteField>(k: &F, f: &[F::Elem]) -> Vec<F::Elem> {
    let p = k.prime() as usize;
    let out = f.iter().step_by(p).map(|c| k.pth_root(c)).collect();
    trim(k, out)
}

/// Monic squarefree factors with multiplicities.
pub fn squarefree<F: FiniteField>(k: &F, f: &[F::Elem]) -> Vec<(Vec<F::Elem>, u32)> {
    let f = monic(k, f);
    let mut out = Vec::new();
    if deg(&f).unwrap_or(0) == 0 {
        return out;
    }
    let p = k.prime() as u32;
    let df = derivative(k, &f);
    if df.is_empty() {
        for (g, m) in squarefree(k, &pth_root_poly(k, &f)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = gcd(k, &f, &df);
    let mut w = div_exact(k, &f, &c).unwrap();
    let mut i = 1;
    while deg(&w).unwrap_or(0) > 0 {
        let y = gcd(k, &w, &c);
        let z = div_exact(k, &w, &y).unwrap();
        if deg(&z).unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = div_exact(k, &c, &w).unwrap();
    }
    if deg(&c).unwrap_or(0) > 0 {
        for (g, m) in squarefree(k, &pth_root_poly(k, &c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial.
pub fn ddf<F: FiniteField>(k: &F, f: &[F::Elem]) -> Vec<(Vec<F::Elem>, usize)> {
    let q = k.order();
    let x = x_power(k, 1);
    let mut f = f.to_vec();
    let mut h = rem(k, &x, &f);
    let mut out = Vec::new();
    let mut i = 1;
    while deg(&f).unwrap_or(0) >= 2 * i {
        h = powmod(k, &h, &q, &f);
        let g = gcd(k, &f, &sub(k, &h, &x));
        if deg(&g).unwrap_or(0) > 0 {
            f = div_exact(k, &f, &g).unwrap();
            h = rem(k, &h, &f);
            out.push((g, i));
        }
        i += 1;
    }
    if let Some(d) = deg(&f) {
        if d > 0 {
            out.push((f, d));
        }
    }
    out
}

fn random_poly<F: FiniteField>(k: &F, n: usize, rng: &mut dyn RngCore) -> Vec<F::Elem> {
    trim(k, (0..n).map(|_| k.random(rng)).collect())
}

/// Splits a monic squarefree `f` all of whose irreducible factors have
/// degree `d`.
pub fn edf<F: FiniteField>(k: &F, f: &[F::Elem], d: usize, rng: &mut dyn RngCore) -> Vec<Vec<F::Elem>> {
    let n = deg(f).unwrap_or(0);
    if n <= d {
        return vec![f.to_vec()];
    }
    let p = k.prime();
    loop {
        let a = random_poly(k, n, rng);
        if deg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // Absolute trace to F_2 of the class of a in F_{q^d}.
            let steps = k.degree() * d;
            let mut t = rem(k, &a, f);
            let mut acc = t.clone();
            for _ in 1..steps {
                t = mulmod(k, &t, &t, f);
                acc = add(k, &acc, &t);
            }
            acc
        } else {
            let e = (k.order().pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            sub(k, &powmod(k, &a, &e, f), &[k.one()])
        };
        let g = gcd(k, f, &b);
        let dg = deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = div_exact(k, f, &g).unwrap();
            let mut out = edf(k, &g, d, rng);
            out.extend(edf(k, &h, d, rng));
            return out;
        }
    }
}

fn sort_factors<F: FiniteField>(v: &mut [Vec<F::Elem>]) {
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
}

/// Monic irreducible factors of a monic squarefree polynomial.
pub fn factor_squarefree<F: FiniteField>(k: &F, f: &[F::Elem]) -> Vec<Vec<F::Elem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_u64 ^ f.len() as u64);
    let mut out = Vec::new();
    for (g, d) in ddf(k, f) {
        out.extend(edf(k, &g, d, &mut rng));
    }
    sort_factors::<F>(&mut out);
    out
}

/// Leading coefficient and monic irreducible factors with multiplicity.
pub fn factor<F: FiniteField>(k: &F, f: &[F::Elem]) -> (F::Elem, Vec<(Vec<F::Elem>, u32)>) {
    let c = lc(k, f);
    let mut out = Vec::new();
    for (g, m) in squarefree(k, f) {
        for h in factor_squarefree(k, &g) {
            out.push((h, m));
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    (c, out)
}

/// Rabin's irreducibility test.
pub fn is_irreducible<F: FiniteField>(k: &F, f: &[F::Elem]) -> bool {
    let n = match deg(f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let f = monic(k, f);
    let q = k.order();
    let x = x_power(k, 1);
    let frob_iter = |m: usize| {
        let mut h = rem(k, &x, &f);
        for _ in 0..m {
            h = powmod(k, &h, &q, &f);
        }
        h
    };
    if sub(k, &frob_iter(n), &rem(k, &x, &f)) != Vec::<F::Elem>::new() {
        return false;
    }
    for (r, _) in factor_u64(n as u64) {
        let h = frob_iter(n / r as usize);
        if deg(&gcd(k, &f, &sub(k, &h, &x))).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

/// A monic irreducible polynomial of degree `n`, deterministic in `seed`.
pub fn random_irreducible<F: FiniteField>(k: &F, n: usize, seed: u64) -> Vec<F::Elem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut f: Vec<F::Elem> = (0..n).map(|_| k.random(&mut rng)).collect();
        f.push(k.one());
        if is_irreducible(k, &f) {
            return f;
        }
    }
}

/// Roots in `K` of a nonzero polynomial.
pub fn roots<F: FiniteField>(k: &F, f: &[F::Elem]) -> Vec<F::Elem> {
    let (_, fs) = factor(k, f);
    fs.into_iter()
        .filter(|(g, _)| g.len() == 2)
        .map(|(g, _)| k.neg(&g[0]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{Field, Fp, Gf};

    fn product<F: FiniteField>(k: &F, fs: &[(Vec<F::Elem>, u32)]) -> Vec<F::Elem> {
        let mut acc = vec![k.one()];
        for (g, m) in fs {
            acc = mul(k, &acc, &pow(k, g, *m));
        }
        acc
    }

    #[test]
    fn factor_reassembles_over_small_primes() {
        for p in [2u64, 3, 5, 7] {
            let k = Fp::new(p);
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for n in 1..12 {
                let mut f: Vec<u64> = (0..n).map(|_| k.random(&mut rng)).collect();
                f.push(1);
                let (c, fs) = factor(&k, &f);
                assert_eq!(c, 1);
                for (g, _) in &fs {
                    assert!(is_irreducible(&k, g));
                }
                assert_eq!(product(&k, &fs), f);
            }
        }
    }

    #[test]
    fn factor_over_extension() {
        let k = Gf::new(2, random_irreducible(&Fp::new(2), 3, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 2..8 {
            let mut f: Vec<Vec<u64>> = (0..n).map(|_| k.random(&mut rng)).collect();
            f.push(k.one());
            let (_, fs) = factor(&k, &f);
            assert_eq!(product(&k, &fs), f);
        }
    }

    #[test]
    fn frobenius_repeated_factor() {
        // (x^3 + 1)^3 = x^9 + 1 over F_3 = (x + 1)^9.
        let k = Fp::new(3);
        let mut f = vec![0u64; 10];
        f[0] = 1;
        f[9] = 1;
        let (_, fs) = factor(&k, &f);
        assert_eq!(fs, vec![(vec![1, 1], 9)]);
    }
}
