//! Field contexts.
//!
//! Elements are plain values; all arithmetic goes through a context object so
//! that runtime-parameterized fields (prime fields, flat extensions
//! `F_p[z]/(M)`) share one generic code path with the rationals.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::RngCore;

pub trait Field: Clone + Debug {
    type Elem: Clone + Eq + Ord + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn characteristic(&self) -> u64;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
    fn pow_big(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
    /// Image under a reduction to a large prime field, used for cheap
    /// one-sided coprimality tests.  `None` when unavailable.
    fn modular_prime(&self) -> Option<u64> {
        None
    }
    fn reduce_modular(&self, _a: &Self::Elem) -> Option<u64> {
        None
    }
}

/// Finite fields `F_q`, `q = p^n`.
pub trait FiniteField: Field {
    fn prime(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> usize;
    fn order(&self) -> BigUint {
        BigUint::from(self.prime()).pow(self.degree() as u32)
    }
    fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }
    /// Enumerates the elements for `index < q` (base-`p` digits).
    fn element(&self, index: u64) -> Self::Elem;
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.prime())
    }
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let mut r = a.clone();
        for _ in 1..self.degree() {
            r = self.frobenius(&r);
        }
        r
    }
    /// Coordinates over the prime field (length `degree()`).
    fn coords(&self, a: &Self::Elem) -> Vec<u64>;
    fn from_coords(&self, c: &[u64]) -> Self::Elem;
    /// Defining polynomial over the prime field, `None` for `F_p` itself.
    fn modulus_poly(&self) -> Option<Vec<u64>>;
}

/// The field of rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

/// 2^61 - 1.
pub const BIG_PRIME: u64 = 2_305_843_009_213_693_951;

pub fn bigint_mod_u64(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

pub fn rational_mod_u64(a: &BigRational, p: u64) -> Option<u64> {
    let d = bigint_mod_u64(a.denom(), p);
    if d == 0 {
        return None;
    }
    let n = bigint_mod_u64(a.numer(), p);
    let f = Fp::new(p);
    Some(f.mul(&n, &f.inv(&d)))
}

impl Field for Rationals {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> BigRational {
        assert!(!b.is_zero(), "division by zero");
        a / b
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn modular_prime(&self) -> Option<u64> {
        Some(BIG_PRIME)
    }
    fn reduce_modular(&self, a: &BigRational) -> Option<u64> {
        rational_mod_u64(a, BIG_PRIME)
    }
}

/// Prime field `F_p`, `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 63));
        Fp { p }
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn reduce_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }
    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn to_signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Field for Fp {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        s0.rem_euclid(self.p as i128) as u64
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn modular_prime(&self) -> Option<u64> {
        (self.p > (1 << 20)).then_some(self.p)
    }
    fn reduce_modular(&self, a: &u64) -> Option<u64> {
        (self.p > (1 << 20)).then_some(*a)
    }
}

impl FiniteField for Fp {
    fn prime(&self) -> u64 {
        self.p
    }
    fn degree(&self) -> usize {
        1
    }
    fn element(&self, index: u64) -> u64 {
        index % self.p
    }
    fn random(&self, rng: &mut dyn RngCore) -> u64 {
        rng.next_u64() % self.p
    }
    fn frobenius(&self, a: &u64) -> u64 {
        *a
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
    fn coords(&self, a: &u64) -> Vec<u64> {
        vec![*a]
    }
    fn from_coords(&self, c: &[u64]) -> u64 {
        c[0] % self.p
    }
    fn modulus_poly(&self) -> Option<Vec<u64>> {
        None
    }
}

/// Flat extension `F_p[z]/(M)` with `M` monic irreducible of degree `n`.
/// Elements are coefficient vectors of length exactly `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf {
    base: Fp,
    modulus: Arc<Vec<u64>>,
}

impl Gf {
    /// `modulus` is monic, low-to-high, degree >= 1; irreducibility is the
    /// caller's responsibility.
    pub fn new(p: u64, modulus: Vec<u64>) -> Self {
        assert!(modulus.len() >= 2 && *modulus.last().unwrap() == 1);
        Gf { base: Fp::new(p), modulus: Arc::new(modulus) }
    }
    pub fn base(&self) -> Fp {
        self.base
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    fn n(&self) -> usize {
        self.modulus.len() - 1
    }
    /// The class of `z`.
    pub fn generator(&self) -> Vec<u64> {
        let mut v = vec![0; self.n()];
        if self.n() == 1 {
            v[0] = self.base.neg(&self.modulus[0]);
        } else {
            v[1] = 1;
        }
        v
    }
    pub fn embed_base(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.n()];
        v[0] = c;
        v
    }
    fn reduce(&self, mut prod: Vec<u64>) -> Vec<u64> {
        let n = self.n();
        let f = &self.base;
        while prod.len() > n {
            let c = prod.pop().unwrap();
            if c != 0 {
                let off = prod.len() - n;
                for (i, m) in self.modulus[..n].iter().enumerate() {
                    prod[off + i] = f.sub(&prod[off + i], &f.mul(&c, m));
                }
            }
        }
        prod.resize(n, 0);
        prod
    }
}

impl Field for Gf {
    type Elem = Vec<u64>;
    fn zero(&self) -> Vec<u64> {
        vec![0; self.n()]
    }
    fn one(&self) -> Vec<u64> {
        self.embed_base(1)
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let n = self.n();
        let mut prod = vec![0u64; 2 * n - 1];
        let f = &self.base;
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = f.add(&prod[i + j], &f.mul(x, y));
            }
        }
        self.reduce(prod)
    }
    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        assert!(!self.is_zero(a), "inverse of zero");
        // Extended Euclid in F_p[z].
        let f = self.base;
        let mut s = super::upoly::inv_mod(&f, &super::upoly::trim(&f, a.clone()), &self.modulus)
            .expect("modulus not irreducible");
        s.resize(self.n(), 0);
        s
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        self.embed_base(self.base.reduce_i64(n))
    }
    fn characteristic(&self) -> u64 {
        self.base.p()
    }
}

impl FiniteField for Gf {
    fn prime(&self) -> u64 {
        self.base.p()
    }
    fn degree(&self) -> usize {
        self.n()
    }
    fn element(&self, mut index: u64) -> Vec<u64> {
        let p = self.base.p();
        let mut v = vec![0; self.n()];
        for c in v.iter_mut() {
            *c = index % p;
            index /= p;
        }
        v
    }
    fn random(&self, rng: &mut dyn RngCore) -> Vec<u64> {
        (0..self.n()).map(|_| rng.next_u64() % self.base.p()).collect()
    }
    fn coords(&self, a: &Vec<u64>) -> Vec<u64> {
        a.clone()
    }
    fn from_coords(&self, c: &[u64]) -> Vec<u64> {
        c.to_vec()
    }
    fn modulus_poly(&self) -> Option<Vec<u64>> {
        Some(self.modulus.to_vec())
    }
}

/// Constant field of a function field descriptor: `Q` (`p == 0`) or `F_p`.
/// Elements are rationals; over `F_p` they are integers in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConstField {
    p: u64,
}

impl ConstField {
    pub fn rationals() -> Self {
        ConstField { p: 0 }
    }
    pub fn prime(p: u64) -> Self {
        assert!(p >= 2);
        ConstField { p }
    }
    pub fn is_rational(&self) -> bool {
        self.p == 0
    }
    pub fn fp(&self) -> Option<Fp> {
        (self.p != 0).then(|| Fp::new(self.p))
    }
    pub fn to_u64(&self, a: &BigRational) -> u64 {
        debug_assert!(self.p != 0 && a.is_integer());
        a.numer().to_u64().expect("F_p element out of range")
    }
    pub fn from_u64(&self, a: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(a))
    }
    /// Maps an arbitrary rational into the field; `None` if its denominator
    /// vanishes mod p.
    pub fn coerce(&self, a: &BigRational) -> Option<BigRational> {
        if self.p == 0 {
            Some(a.clone())
        } else {
            rational_mod_u64(a, self.p).map(|v| self.from_u64(v))
        }
    }
    fn wrap(&self, a: BigRational) -> BigRational {
        if self.p == 0 {
            a
        } else {
            let p = BigInt::from(self.p);
            BigRational::from_integer(a.to_integer().mod_floor(&p))
        }
    }
}

impl Field for ConstField {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.wrap(a + b)
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.wrap(a - b)
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        self.wrap(-a)
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.wrap(a * b)
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        match self.fp() {
            None => a.recip(),
            Some(f) => self.from_u64(f.inv(&self.to_u64(a))),
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        self.wrap(BigRational::from_integer(BigInt::from(n)))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn modular_prime(&self) -> Option<u64> {
        if self.p == 0 {
            Some(BIG_PRIME)
        } else {
            (self.p > (1 << 20)).then_some(self.p)
        }
    }
    fn reduce_modular(&self, a: &BigRational) -> Option<u64> {
        if self.p == 0 {
            rational_mod_u64(a, BIG_PRIME)
        } else {
            (self.p > (1 << 20)).then(|| self.to_u64(a))
        }
    }
}

/// Absolute value helper for display and heights.
pub fn rational_height(a: &BigRational) -> u64 {
    let n = a.numer().abs().bits();
    let d = a.denom().bits();
    n.max(d)
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    if n >= (1 << 63) {
        return false;
    }
    // Deterministic Miller–Rabin for 64-bit inputs.
    let f = Fp::new(n);
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.pow(&(a % n), d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(&x, &x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of a small integer by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            let mut e = 0;
            while n % q == 0 {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_inverse() {
        let f = Fp::new(101);
        for a in 1..101 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
    }

    #[test]
    fn gf9_arithmetic() {
        // z^2 + 1 is irreducible over F_3.
        let k = Gf::new(3, vec![1, 0, 1]);
        let z = k.generator();
        assert_eq!(k.mul(&z, &z), k.from_i64(-1));
        for i in 1..9 {
            let a = k.element(i);
            assert!(k.is_one(&k.mul(&a, &k.inv(&a))));
            assert_eq!(k.pow(&a, 9), a);
            assert_eq!(k.frobenius(&k.pth_root(&a)), a);
        }
    }

    #[test]
    fn primes() {
        assert!(is_prime_u64(BIG_PRIME));
        assert!(!is_prime_u64(91));
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
    }
}
