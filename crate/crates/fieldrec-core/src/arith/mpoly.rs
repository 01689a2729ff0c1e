//! Sparse multivariate polynomials in graded-lex order.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::field::Field;

pub const MAX_VARS: usize = 8;

/// Exponent vector. Variables beyond the ring's arity are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Mono(pub [u16; MAX_VARS]);

impl Mono {
    pub const ONE: Mono = Mono([0; MAX_VARS]);

    pub fn var(i: usize, e: u16) -> Self {
        let mut m = Mono::ONE;
        m.0[i] = e;
        m
    }
    pub fn deg(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }
    pub fn get(&self, i: usize) -> u16 {
        self.0[i]
    }
    pub fn with(mut self, i: usize, e: u16) -> Self {
        self.0[i] = e;
        self
    }
    pub fn mul(&self, o: &Mono) -> Mono {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        m
    }
    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }
    pub fn div(&self, o: &Mono) -> Option<Mono> {
        if !o.divides(self) {
            return None;
        }
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a -= b;
        }
        Some(m)
    }
    pub fn gcd(&self, o: &Mono) -> Mono {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(o.0.iter()) {
            *a = (*a).min(*b);
        }
        m
    }
    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.deg().cmp(&o.deg()).then_with(|| self.0.cmp(&o.0))
    }
}
impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Terms sorted by decreasing monomial, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct MPoly<E> {
    pub nvars: usize,
    pub terms: Vec<(Mono, E)>,
}

impl<E: Clone + Eq + Ord + core::hash::Hash + core::fmt::Debug> MPoly<E> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: Vec::new() }
    }
    pub fn constant<F: Field<Elem = E>>(k: &F, nvars: usize, c: E) -> Self {
        Self::monomial(k, nvars, Mono::ONE, c)
    }
    pub fn one<F: Field<Elem = E>>(k: &F, nvars: usize) -> Self {
        Self::constant(k, nvars, k.one())
    }
    pub fn var<F: Field<Elem = E>>(k: &F, nvars: usize, i: usize) -> Self {
        Self::monomial(k, nvars, Mono::var(i, 1), k.one())
    }
    pub fn monomial<F: Field<Elem = E>>(k: &F, nvars: usize, m: Mono, c: E) -> Self {
        if k.is_zero(&c) {
            Self::zero(nvars)
        } else {
            MPoly { nvars, terms: vec![(m, c)] }
        }
    }
    pub fn from_terms<F: Field<Elem = E>>(k: &F, nvars: usize, mut terms: Vec<(Mono, E)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, E)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = k.add(lc, &c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if k.is_zero(lc) {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if out.last().is_some_and(|(_, c)| k.is_zero(c)) {
            out.pop();
        }
        MPoly { nvars, terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }
    pub fn is_one<F: Field<Elem = E>>(&self, k: &F) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && k.is_one(&self.terms[0].1)
    }
    pub fn constant_value<F: Field<Elem = E>>(&self, k: &F) -> Option<E> {
        match self.terms.as_slice() {
            [] => Some(k.zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }
    pub fn lc<F: Field<Elem = E>>(&self, k: &F) -> E {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(|| k.zero())
    }
    pub fn lm(&self) -> Option<Mono> {
        self.terms.first().map(|t| t.0)
    }
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.deg())
    }
    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.iter().map(|t| t.0.get(i)).max().unwrap_or(0)
    }
    pub fn min_degree_in(&self, i: usize) -> u16 {
        self.terms.iter().map(|t| t.0.get(i)).min().unwrap_or(0)
    }
    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.degree_in(i) > 0).collect()
    }
    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|t| t.0.get(i) > 0)
    }
    /// Gcd of all monomials.
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.iter();
        match it.next() {
            None => Mono::ONE,
            Some(first) => it.fold(first.0, |g, t| g.gcd(&t.0)),
        }
    }

    pub fn neg<F: Field<Elem = E>>(&self, k: &F) -> Self {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (*m, k.neg(c))).collect() }
    }
    pub fn add<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> Self {
        self.merge(k, o, false)
    }
    pub fn sub<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> Self {
        self.merge(k, o, true)
    }
    fn merge<F: Field<Elem = E>>(&self, k: &F, o: &Self, negate: bool) -> Self {
        let nvars = self.nvars.max(o.nvars);
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { k.neg(&b[j].1) } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { k.sub(&a[i].1, &b[j].1) } else { k.add(&a[i].1, &b[j].1) };
                    if !k.is_zero(&c) {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MPoly { nvars, terms: out }
    }
    pub fn scale<F: Field<Elem = E>>(&self, k: &F, c: &E) -> Self {
        if k.is_zero(c) {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (*m, k.mul(x, c))).collect() }
    }
    pub fn mul_term<F: Field<Elem = E>>(&self, k: &F, m: &Mono, c: &E) -> Self {
        if k.is_zero(c) {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(x, y)| (x.mul(m), k.mul(y, c))).collect() }
    }
    pub fn mul<F: Field<Elem = E>>(&self, k: &F, o: &Self) -> Self {
        let nvars = self.nvars.max(o.nvars);
        if self.is_zero() || o.is_zero() {
            return Self::zero(nvars);
        }
        if o.terms.len() == 1 {
            let mut r = self.mul_term(k, &o.terms[0].0, &o.terms[0].1);
            r.nvars = nvars;
            return r;
        }
        if self.terms.len() == 1 {
            let mut r = o.mul_term(k, &self.terms[0].0, &self.terms[0].1);
            r.nvars = nvars;
            return r;
        }
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                terms.push((m1.mul(m2), k.mul(c1, c2)));
            }
        }
        Self::from_terms(k, nvars, terms)
    }
    pub fn pow<F: Field<Elem = E>>(&self, k: &F, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(k, self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(k, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(k, &base);
            }
        }
        acc
    }
    /// Divides by the leading coefficient.
    pub fn monic<F: Field<Elem = E>>(&self, k: &F) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) if k.is_one(c) => self.clone(),
            Some((_, c)) => self.scale(k, &k.inv(c)),
        }
    }

    /// Exact quotient, `None` if `b` does not divide `self`.
    pub fn div_exact<F: Field<Elem = E>>(&self, k: &F, b: &Self) -> Option<Self> {
        let (lmb, lcb) = b.terms.first().expect("division by zero polynomial").clone();
        if b.terms.len() == 1 {
            let inv = k.inv(&lcb);
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                out.push((m.div(&lmb)?, k.mul(c, &inv)));
            }
            return Some(MPoly { nvars: self.nvars.max(b.nvars), terms: out });
        }
        let inv = k.inv(&lcb);
        let mut r = self.clone();
        let mut q = Vec::new();
        let tail = MPoly { nvars: b.nvars, terms: b.terms[1..].to_vec() };
        while let Some((m, c)) = r.terms.first().cloned() {
            let qm = m.div(&lmb)?;
            let qc = k.mul(&c, &inv);
            r.terms.remove(0);
            r = r.sub(k, &tail.mul_term(k, &qm, &qc));
            q.push((qm, qc));
        }
        Some(MPoly { nvars: self.nvars.max(b.nvars), terms: q })
    }

    pub fn derivative<F: Field<Elem = E>>(&self, k: &F, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.get(i) > 0)
            .map(|(m, c)| (m.with(i, m.get(i) - 1), k.mul(c, &k.from_i64(m.get(i) as i64))))
            .filter(|(_, c)| !k.is_zero(c))
            .collect();
        // Lowering one exponent preserves the relative grlex order of the
        // surviving terms only within equal degree; re-sort to be safe.
        Self::from_terms(k, self.nvars, terms)
    }

    /// Coefficients with respect to variable `i` (index = exponent).
    pub fn coeffs_in<F: Field<Elem = E>>(&self, k: &F, i: usize) -> Vec<Self> {
        let d = self.degree_in(i) as usize;
        let mut buckets: Vec<Vec<(Mono, E)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            buckets[m.get(i) as usize].push((m.with(i, 0), c.clone()));
        }
        let _ = k;
        buckets.into_iter().map(|t| MPoly { nvars: self.nvars, terms: t }).collect()
    }
    pub fn from_coeffs_in<F: Field<Elem = E>>(k: &F, nvars: usize, i: usize, cs: &[Self]) -> Self {
        let mut terms = Vec::new();
        for (e, c) in cs.iter().enumerate() {
            for (m, x) in &c.terms {
                terms.push((m.with(i, m.get(i) + e as u16), x.clone()));
            }
        }
        Self::from_terms(k, nvars, terms)
    }
    /// Leading coefficient with respect to variable `i`.
    pub fn lc_in<F: Field<Elem = E>>(&self, k: &F, i: usize) -> Self {
        let d = self.degree_in(i);
        let terms = self.terms.iter().filter(|(m, _)| m.get(i) == d).map(|(m, c)| (m.with(i, 0), c.clone())).collect();
        Self::from_terms(k, self.nvars, terms)
    }

    /// Substitutes a constant for variable `i`.
    pub fn eval_var<F: Field<Elem = E>>(&self, k: &F, i: usize, v: &E) -> Self {
        let d = self.degree_in(i) as usize;
        let mut powers = vec![k.one()];
        for j in 1..=d {
            powers.push(k.mul(&powers[j - 1], v));
        }
        let terms = self.terms.iter().map(|(m, c)| (m.with(i, 0), k.mul(c, &powers[m.get(i) as usize]))).collect();
        Self::from_terms(k, self.nvars, terms)
    }
    /// Evaluates at a full point.
    pub fn eval<F: Field<Elem = E>>(&self, k: &F, pt: &[E]) -> E {
        let mut acc = k.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in pt.iter().enumerate() {
                if m.get(i) > 0 {
                    t = k.mul(&t, &k.pow(x, m.get(i) as u64));
                }
            }
            acc = k.add(&acc, &t);
        }
        acc
    }
    /// Substitutes a polynomial for variable `i`.
    pub fn subst_var<F: Field<Elem = E>>(&self, k: &F, i: usize, p: &Self) -> Self {
        let cs = self.coeffs_in(k, i);
        let mut acc = Self::zero(self.nvars.max(p.nvars));
        for c in cs.iter().rev() {
            acc = acc.mul(k, p).add(k, c);
        }
        acc
    }
    /// Simultaneous substitution `t_i -> images[i]` (`images.len() == nvars`).
    pub fn compose<F: Field<Elem = E>>(&self, k: &F, images: &[Self]) -> Self {
        let nv = images.first().map(|p| p.nvars).unwrap_or(self.nvars);
        let mut cache: Vec<Vec<Self>> = images.iter().map(|p| vec![Self::one(k, nv), p.clone()]).collect();
        let mut acc = Self::zero(nv);
        for (m, c) in &self.terms {
            let mut t = Self::constant(k, nv, c.clone());
            for (i, pw) in cache.iter_mut().enumerate() {
                let e = m.get(i) as usize;
                while pw.len() <= e {
                    let next = pw.last().unwrap().mul(k, &pw[1]);
                    pw.push(next);
                }
                if e > 0 {
                    t = t.mul(k, &pw[e]);
                }
            }
            acc = acc.add(k, &t);
        }
        acc
    }
    /// Renames variables: variable `i` becomes `perm[i]`.
    pub fn permute<F: Field<Elem = E>>(&self, k: &F, nvars: usize, perm: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut n = Mono::ONE;
                for (i, &j) in perm.iter().enumerate() {
                    n.0[j] += m.get(i);
                }
                (n, c.clone())
            })
            .collect();
        Self::from_terms(k, nvars, terms)
    }
    pub fn with_nvars(mut self, nvars: usize) -> Self {
        debug_assert!(self.terms.iter().all(|(m, _)| m.0[nvars..].iter().all(|&e| e == 0)));
        self.nvars = nvars;
        self
    }
    /// Homogeneous component of top total degree.
    pub fn top_form(&self) -> Self {
        let d = self.total_degree().unwrap_or(0);
        MPoly { nvars: self.nvars, terms: self.terms.iter().filter(|(m, _)| m.deg() == d).cloned().collect() }
    }
    /// Dense univariate coefficients if only variable `i` occurs.
    pub fn to_upoly<F: Field<Elem = E>>(&self, k: &F, i: usize) -> Option<Vec<E>> {
        let d = self.degree_in(i) as usize;
        let mut v = vec![k.zero(); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in &self.terms {
            if m.deg() != m.get(i) as u32 {
                return None;
            }
            v[m.get(i) as usize] = c.clone();
        }
        Some(v)
    }
    pub fn from_upoly<F: Field<Elem = E>>(k: &F, nvars: usize, i: usize, v: &[E]) -> Self {
        let terms = v.iter().enumerate().filter(|(_, c)| !k.is_zero(c)).map(|(e, c)| (Mono::var(i, e as u16), c.clone())).collect();
        Self::from_terms(k, nvars, terms)
    }
    pub fn map_coeffs<G: Field>(&self, g: &G, f: impl Fn(&E) -> G::Elem) -> MPoly<G::Elem> {
        let terms = self.terms.iter().map(|(m, c)| (*m, f(c))).filter(|(_, c)| !g.is_zero(c)).collect();
        MPoly { nvars: self.nvars, terms }
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::Fp;

    #[test]
    fn division_roundtrip() {
        let k = Fp::new(101);
        let x = MPoly::var(&k, 2, 0);
        let y = MPoly::var(&k, 2, 1);
        let a = x.mul(&k, &x).add(&k, &y).add(&k, &MPoly::one(&k, 2));
        let b = x.sub(&k, &y.pow(&k, 3));
        let p = a.mul(&k, &b);
        assert_eq!(p.div_exact(&k, &a), Some(b.clone()));
        assert_eq!(p.div_exact(&k, &b), Some(a.clone()));
        assert_eq!(p.add(&k, &MPoly::one(&k, 2)).div_exact(&k, &a), None);
    }

    #[test]
    fn grlex_order() {
        let a = Mono::var(0, 2);
        let b = Mono::var(0, 1).mul(&Mono::var(1, 1));
        let c = Mono::var(1, 3);
        assert!(c > a && a > b);
    }
}
