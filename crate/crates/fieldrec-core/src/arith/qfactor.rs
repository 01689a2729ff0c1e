//! Univariate factorization over `Q`: Zassenhaus (modular factorization,
//! p-adic Hensel lifting, subset recombination).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{is_prime_u64, Fp, Rationals};
use super::ufactor;
use super::upoly;

type ZPoly = Vec<BigInt>;

fn ztrim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

fn zcontent(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive integer polynomial with positive leading coefficient, plus the
/// rational factor `c` with `a = c * result`.
pub fn to_primitive_integer(a: &[BigRational]) -> (BigRational, ZPoly) {
    let l = a.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let z: ZPoly = a.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let mut g = zcontent(&z);
    if z.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    let prim = z.iter().map(|c| c / &g).collect();
    (BigRational::new(g, l), prim)
}

/// Exact division in `Z[x]`, `None` if `b` does not divide `a`.
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    let lcb = &b[db];
    for i in (0..q.len()).rev() {
        let (c, rr) = r[i + db].div_rem(lcb);
        if !rr.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] -= &c * y;
            }
        }
        q[i] = c;
    }
    r.iter().all(|c| c.is_zero()).then(|| ztrim(q))
}

fn to_fp(f: &Fp, a: &[BigInt]) -> Vec<u64> {
    let p = BigInt::from(f.p());
    upoly::trim(f, a.iter().map(|c| c.mod_floor(&p).to_u64().unwrap()).collect())
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Factor bound: `p^k` must exceed twice any coefficient of
/// `lc(f) * g` for a factor `g` of `f`.
fn coefficient_bound(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    let lc = f.last().unwrap().abs();
    (BigInt::one() << n) * norm * lc * 2
}

/// Irreducible factors of a primitive squarefree `f` in `Z[x]`.
pub fn zassenhaus(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lcf = f.last().unwrap().clone();
    // Pick the prime (among a few admissible ones) with the fewest factors.
    let mut best: Option<(Fp, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    let mut p = 2u64;
    while tried < 5 {
        p += 1;
        if !is_prime_u64(p) || (&lcf % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = Fp::new(p);
        let fbar = to_fp(&fp, f);
        let d = upoly::derivative(&fp, &fbar);
        if upoly::deg(&upoly::gcd(&fp, &fbar, &d)).unwrap_or(1) != 0 {
            continue;
        }
        tried += 1;
        let facs = ufactor::factor_squarefree(&fp, &upoly::monic(&fp, &fbar));
        if facs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|b| facs.len() < b.1.len()) {
            best = Some((fp, facs));
        }
    }
    let (fp, us) = best.unwrap();
    let bound = coefficient_bound(f);
    let pbig = BigInt::from(fp.p());
    let mut k = 1u32;
    let mut pk = pbig.clone();
    while pk <= bound {
        pk *= &pbig;
        k += 1;
    }
    let lifted = hensel_lift(&fp, f, &us, k);
    recombine(f, lifted, &pk)
}

/// Lifts monic `us` with `f = lc(f) * prod(us) mod p` to modulus `p^k`.
fn hensel_lift(fp: &Fp, f: &[BigInt], us: &[Vec<u64>], k: u32) -> Vec<ZPoly> {
    let p = BigInt::from(fp.p());
    let pk = p.pow(k);
    let lc = f.last().unwrap();
    let lc_inv = lc.modinv(&pk).expect("lc invertible mod p");
    let target: ZPoly = f.iter().map(|c| (c * &lc_inv).mod_floor(&pk)).collect();
    let s = us.len();
    // Bezout cofactors: sum_i s_i * prod_{j != i} u_j = 1.
    let bez: Vec<Vec<u64>> = (0..s)
        .map(|i| {
            let mut others = vec![1u64];
            for (j, u) in us.iter().enumerate() {
                if j != i {
                    others = upoly::mul(fp, &others, u);
                }
            }
            upoly::inv_mod(fp, &others, &us[i]).expect("coprime modular factors")
        })
        .collect();
    let mut lifted: Vec<ZPoly> = us.iter().map(|u| u.iter().map(|&c| BigInt::from(c)).collect()).collect();
    let mut pj = p.clone();
    for _ in 1..k {
        let next = &pj * &p;
        let mut prod = vec![BigInt::one()];
        for u in &lifted {
            prod = zmul(&prod, u);
            for c in prod.iter_mut() {
                *c = c.mod_floor(&next);
            }
        }
        let n = target.len().max(prod.len());
        let err: ZPoly = (0..n)
            .map(|i| {
                let t = target.get(i).cloned().unwrap_or_default();
                let q = prod.get(i).cloned().unwrap_or_default();
                let d = (t - q).mod_floor(&next);
                debug_assert!((&d % &pj).is_zero());
                d / &pj
            })
            .collect();
        let e = to_fp(fp, &err);
        if !e.is_empty() {
            for i in 0..s {
                let delta = upoly::rem(fp, &upoly::mul(fp, &e, &bez[i]), &us[i]);
                for (j, c) in delta.iter().enumerate() {
                    if lifted[i].len() <= j {
                        lifted[i].resize(j + 1, BigInt::zero());
                    }
                    lifted[i][j] += &pj * BigInt::from(*c);
                }
            }
        }
        pj = next;
    }
    lifted
}

fn recombine(f: &[BigInt], mut lifted: Vec<ZPoly>, pk: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut cur = f.to_vec();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lc = cur.last().unwrap().clone();
            let mut g: ZPoly = vec![lc];
            for &i in &idx {
                g = zmul(&g, &lifted[i]);
                for c in g.iter_mut() {
                    *c = symmetric(c, pk);
                }
            }
            let cont = zcontent(&g);
            let g: ZPoly = g.iter().map(|c| c / &cont).collect();
            // Quick constant-term screen before the full division.
            let screen = g[0].is_zero() || (&cur[0] % &g[0]).is_zero();
            if screen {
                if let Some(q) = zdiv_exact(&cur, &g) {
                    out.push(normalize_sign(g));
                    cur = q;
                    for &i in idx.iter().rev() {
                        lifted.remove(i);
                    }
                    continue 'outer;
                }
            }
            if !next_combination(&mut idx, lifted.len()) {
                break;
            }
        }
        size += 1;
    }
    if cur.len() > 1 {
        out.push(normalize_sign(cur));
    }
    out
}

fn normalize_sign(g: ZPoly) -> ZPoly {
    if g.last().is_some_and(|c| c.sign() == Sign::Minus) {
        g.into_iter().map(|c| -c).collect()
    } else {
        g
    }
}

pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Leading coefficient and monic irreducible factors with multiplicities.
pub fn factor(f: &[BigRational]) -> (BigRational, Vec<(Vec<BigRational>, u32)>) {
    let k = Rationals;
    let lc = upoly::lc(&k, f);
    let mut out = Vec::new();
    for (g, m) in upoly::squarefree_char0(&k, f) {
        let (_, z) = to_primitive_integer(&g);
        for h in zassenhaus(&z) {
            let hq: Vec<BigRational> = h.into_iter().map(BigRational::from_integer).collect();
            out.push((upoly::monic(&k, &hq), m));
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    (lc, out)
}

pub fn factor_squarefree(f: &[BigRational]) -> Vec<Vec<BigRational>> {
    let (_, z) = to_primitive_integer(f);
    let k = Rationals;
    let mut out: Vec<Vec<BigRational>> = zassenhaus(&z)
        .into_iter()
        .map(|h| upoly::monic(&k, &h.into_iter().map(BigRational::from_integer).collect::<Vec<_>>()))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

pub fn is_irreducible(f: &[BigRational]) -> bool {
    match upoly::deg(f) {
        None | Some(0) => false,
        Some(1) => true,
        Some(_) => {
            let (_, fs) = factor(f);
            fs.len() == 1 && fs[0].1 == 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect()
    }

    #[test]
    fn swinnerton_dyer_like() {
        // x^4 - 10x^2 + 1 is irreducible over Q but splits mod every prime.
        assert!(is_irreducible(&q(&[1, 0, -10, 0, 1])));
    }

    #[test]
    fn factors_multiply_back() {
        let k = Rationals;
        let f1 = q(&[2, 0, 3]);
        let f2 = q(&[-1, 1]);
        let f3 = q(&[5, 7, 0, 1]);
        let mut f = upoly::mul(&k, &f1, &f2);
        f = upoly::mul(&k, &f, &upoly::mul(&k, &f2, &f3));
        f = upoly::scale(&k, &f, &BigRational::new(BigInt::from(-3), BigInt::from(4)));
        let (c, fs) = factor(&f);
        let mut prod = vec![c];
        for (g, m) in &fs {
            prod = upoly::mul(&k, &prod, &upoly::pow(&k, g, *m));
        }
        assert_eq!(prod, f);
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn cyclotomic_splitting() {
        // x^12 - 1 has 6 irreducible factors over Q.
        let mut v = vec![0i64; 13];
        v[0] = -1;
        v[12] = 1;
        let (_, fs) = factor(&q(&v));
        assert_eq!(fs.len(), 6);
    }
}
