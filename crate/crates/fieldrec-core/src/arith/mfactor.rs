//! Multivariate factorization over `Q`, `F_p` and `F_q`.
//!
//! Squarefree decomposition (Musser, with p-th roots in positive
//! characteristic), content splitting, bivariate factorization by evaluation,
//! y-adic Hensel lifting and subset recombination, and Kronecker reduction
//! for three or more variables.  Small finite fields without a good
//! evaluation point are handled in an extension, recombining Frobenius
//! orbits afterwards.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::field::{Field, FiniteField, Fp, Gf, Rationals};
use super::gcd::{content_in, gcd};
use super::linalg;
use super::mpoly::{MPoly, Mono};
use super::qfactor::{self, next_combination};
use super::ufactor;
use super::upoly;

type P<F> = MPoly<<F as Field>::Elem>;

pub trait FactorField: Field {
    /// Monic irreducible factors of a monic squarefree univariate polynomial.
    fn uni_factor_sqf(&self, f: &[Self::Elem]) -> Vec<Vec<Self::Elem>>;
    /// Candidate evaluation points, `None` once exhausted.
    fn point(&self, i: u64) -> Option<Self::Elem>;
    /// Coefficientwise p-th root (positive characteristic only).
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem;
    /// Bivariate factorization when no evaluation point is good.
    fn bivariate_fallback(&self, f: &P<Self>, x: usize, y: usize) -> Vec<P<Self>>;
}

impl FactorField for Rationals {
    fn uni_factor_sqf(&self, f: &[BigRational]) -> Vec<Vec<BigRational>> {
        qfactor::factor_squarefree(f)
    }
    fn point(&self, i: u64) -> Option<BigRational> {
        // 0, 1, -1, 2, -2, ...
        let n = i.div_ceil(2) as i64;
        Some(self.from_i64(if i % 2 == 1 { n } else { -n }))
    }
    fn pth_root(&self, _a: &BigRational) -> BigRational {
        unreachable!("no p-th roots in characteristic zero")
    }
    fn bivariate_fallback(&self, _f: &P<Self>, _x: usize, _y: usize) -> Vec<P<Self>> {
        unreachable!("Q has infinitely many evaluation points")
    }
}

impl FactorField for Fp {
    fn uni_factor_sqf(&self, f: &[u64]) -> Vec<Vec<u64>> {
        ufactor::factor_squarefree(self, f)
    }
    fn point(&self, i: u64) -> Option<u64> {
        (i < self.p()).then_some(i)
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
    fn bivariate_fallback(&self, f: &P<Self>, x: usize, y: usize) -> Vec<P<Self>> {
        via_extension(self, f, x, y)
    }
}

impl FactorField for Gf {
    fn uni_factor_sqf(&self, f: &[Vec<u64>]) -> Vec<Vec<Vec<u64>>> {
        ufactor::factor_squarefree(self, f)
    }
    fn point(&self, i: u64) -> Option<Vec<u64>> {
        match self.order_u64() {
            Some(q) if i >= q => None,
            _ => Some(self.element(i)),
        }
    }
    fn pth_root(&self, a: &Vec<u64>) -> Vec<u64> {
        FiniteField::pth_root(self, a)
    }
    fn bivariate_fallback(&self, f: &P<Self>, x: usize, y: usize) -> Vec<P<Self>> {
        via_extension(self, f, x, y)
    }
}

/// Leading coefficient and monic irreducible factors with multiplicities,
/// sorted canonically.
pub fn factor<F: FactorField>(k: &F, f: &P<F>) -> (F::Elem, Vec<(P<F>, u32)>) {
    let lc = f.lc(k);
    let mut out: Vec<(P<F>, u32)> = Vec::new();
    if f.is_constant() {
        return (lc, out);
    }
    let f = f.monic(k);
    let mc = f.monomial_content();
    for i in 0..f.nvars {
        if mc.get(i) > 0 {
            out.push((MPoly::var(k, f.nvars, i), mc.get(i) as u32));
        }
    }
    let f = if mc.is_one() { f } else { f.div_exact(k, &MPoly::monomial(k, f.nvars, mc, k.one())).unwrap() };
    for (g, m) in squarefree(k, &f) {
        for h in factor_squarefree(k, &g) {
            out.push((h.monic(k), m));
        }
    }
    out.sort();
    let mut merged: Vec<(P<F>, u32)> = Vec::new();
    for (g, m) in out {
        match merged.last_mut() {
            Some((h, e)) if *h == g => *e += m,
            _ => merged.push((g, m)),
        }
    }
    (lc, merged)
}

/// Pairwise coprime squarefree parts with multiplicities.
pub fn squarefree<F: FactorField>(k: &F, f: &P<F>) -> Vec<(P<F>, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let f = f.monic(k);
    let x = f.vars_used().into_iter().find(|&v| !f.derivative(k, v).is_zero());
    let Some(x) = x else {
        let p = k.characteristic() as u32;
        for (g, m) in squarefree(k, &pth_root_poly(k, &f)) {
            out.push((g, m * p));
        }
        return out;
    };
    let fx = f.derivative(k, x);
    let mut c = gcd(k, &f, &fx);
    let mut w = f.div_exact(k, &c).unwrap();
    let mut i = 1;
    while !w.is_constant() {
        let y = gcd(k, &w, &c);
        let z = w.div_exact(k, &y).unwrap();
        if !z.is_constant() {
            out.push((z.monic(k), i));
        }
        i += 1;
        c = c.div_exact(k, &y).unwrap();
        w = y;
    }
    out.extend(squarefree(k, &c));
    out
}

/// `f(t) = g(t^p)`, returns `g^(1/p)` coefficientwise; all exponents must be
/// divisible by the characteristic.
pub fn pth_root_poly<F: FactorField>(k: &F, f: &P<F>) -> P<F> {
    let p = k.characteristic() as u16;
    let terms = f
        .terms
        .iter()
        .map(|(m, c)| {
            let mut n = *m;
            for e in n.0.iter_mut() {
                debug_assert_eq!(*e % p, 0);
                *e /= p;
            }
            (n, k.pth_root(c))
        })
        .collect();
    MPoly::from_terms(k, f.nvars, terms)
}

/// Monic irreducible factors of a squarefree polynomial.
pub fn factor_squarefree<F: FactorField>(k: &F, f: &P<F>) -> Vec<P<F>> {
    let vars = f.vars_used();
    match vars.len() {
        0 => Vec::new(),
        1 => {
            let x = vars[0];
            let u = upoly::monic(k, &f.to_upoly(k, x).unwrap());
            k.uni_factor_sqf(&u).into_iter().map(|g| MPoly::from_upoly(k, f.nvars, x, &g)).collect()
        }
        _ => {
            for &x in &vars {
                let c = content_in(k, f, x);
                if !c.is_constant() {
                    let mut out = factor_squarefree(k, &c);
                    out.extend(factor_squarefree(k, &f.div_exact(k, &c).unwrap()));
                    return out;
                }
            }
            if vars.len() == 2 {
                bivariate(k, f, vars[0], vars[1])
            } else {
                kronecker(k, f, &vars)
            }
        }
    }
}

fn bivariate<F: FactorField>(k: &F, f: &P<F>, v0: usize, v1: usize) -> Vec<P<F>> {
    let (x, y) = if !f.derivative(k, v0).is_zero() { (v0, v1) } else { (v1, v0) };
    let h = gcd(k, f, &f.derivative(k, x));
    if !h.is_constant() {
        let mut out = factor_squarefree(k, &h);
        out.extend(factor_squarefree(k, &f.div_exact(k, &h).unwrap()));
        return out;
    }
    bivariate_separable(k, f, x, y)
}

/// Bivariate factorization with `gcd(f, df/dx) = 1` and `f` primitive in `x`.
fn bivariate_separable<F: FactorField>(k: &F, f: &P<F>, x: usize, y: usize) -> Vec<P<F>> {
    let lcx = f.lc_in(k, x);
    let lcu = lcx.to_upoly(k, y).unwrap_or_else(|| vec![lcx.lc(k)]);
    let mut best: Option<(F::Elem, Vec<Vec<F::Elem>>)> = None;
    let mut good = 0;
    let mut i = 0u64;
    while good < 3 {
        let Some(a) = k.point(i) else { break };
        i += 1;
        if k.is_zero(&upoly::eval(k, &lcu, &a)) {
            continue;
        }
        let fa = f.eval_var(k, y, &a).to_upoly(k, x).unwrap();
        let d = upoly::derivative(k, &fa);
        if d.is_empty() || upoly::deg(&upoly::gcd(k, &fa, &d)) != Some(0) {
            continue;
        }
        good += 1;
        let us = k.uni_factor_sqf(&upoly::monic(k, &fa));
        if us.len() == 1 {
            return vec![f.monic(k)];
        }
        if best.as_ref().is_none_or(|b| us.len() < b.1.len()) {
            best = Some((a, us));
        }
        if k.characteristic() != 0 {
            // Points are precious over small fields; take the first.
            break;
        }
    }
    let Some((a, us)) = best else {
        return k.bivariate_fallback(f, x, y);
    };
    let nv = f.nvars;
    let ya = MPoly::var(k, nv, y).add(k, &MPoly::constant(k, nv, a.clone()));
    let g = f.subst_var(k, y, &ya);
    let factors = lift_and_recombine(k, &g, x, y, us);
    let yb = MPoly::var(k, nv, y).sub(k, &MPoly::constant(k, nv, a));
    factors.into_iter().map(|h| h.subst_var(k, y, &yb).monic(k)).collect()
}

type Series<E> = Vec<Vec<E>>;

/// Coefficient of `y^j` of `g` as a polynomial in `x`.
fn y_slices<F: Field>(k: &F, g: &P<F>, x: usize, y: usize) -> Series<F::Elem> {
    let dy = g.degree_in(y) as usize;
    let dx = g.degree_in(x) as usize;
    let mut out = vec![vec![k.zero(); dx + 1]; dy + 1];
    for (m, c) in &g.terms {
        out[m.get(y) as usize][m.get(x) as usize] = c.clone();
    }
    out.into_iter().map(|v| upoly::trim(k, v)).collect()
}

fn series_mul<F: Field>(k: &F, a: &Series<F::Elem>, b: &Series<F::Elem>, n: usize) -> Series<F::Elem> {
    let mut out: Series<F::Elem> = vec![Vec::new(); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_empty() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            if bj.is_empty() {
                continue;
            }
            out[i + j] = upoly::add(k, &out[i + j], &upoly::mul(k, ai, bj));
        }
    }
    out
}

fn lift_and_recombine<F: FactorField>(
    k: &F,
    g: &P<F>,
    x: usize,
    y: usize,
    us: Vec<Vec<F::Elem>>,
) -> Vec<P<F>> {
    let nv = g.nvars;
    let lcx = g.lc_in(k, x);
    let ell: Vec<F::Elem> = lcx.to_upoly(k, y).unwrap();
    let n = g.degree_in(y) as usize + upoly::deg(&ell).unwrap_or(0) + 1;
    // ell^{-1} mod y^n.
    let mut linv = vec![k.zero(); n];
    let l0inv = k.inv(&ell[0]);
    linv[0] = l0inv.clone();
    for j in 1..n {
        let mut s = k.zero();
        for i in 1..=j.min(ell.len() - 1) {
            s = k.add(&s, &k.mul(&ell[i], &linv[j - i]));
        }
        linv[j] = k.neg(&k.mul(&s, &l0inv));
    }
    let gs = y_slices(k, g, x, y);
    let linv_series: Series<F::Elem> = linv.iter().map(|c| upoly::constant(k, c.clone())).collect();
    let target = series_mul(k, &linv_series, &gs, n);

    let s = us.len();
    let bez: Vec<Vec<F::Elem>> = (0..s)
        .map(|i| {
            let mut others = vec![k.one()];
            for (j, u) in us.iter().enumerate() {
                if j != i {
                    others = upoly::mul(k, &others, u);
                }
            }
            upoly::inv_mod(k, &others, &us[i]).expect("coprime modular factors")
        })
        .collect();
    let mut lifted: Vec<Series<F::Elem>> = us
        .iter()
        .map(|u| {
            let mut v = vec![Vec::new(); n];
            v[0] = u.clone();
            v
        })
        .collect();
    for j in 1..n {
        let mut prod: Series<F::Elem> = vec![Vec::new(); j + 1];
        prod[0] = vec![k.one()];
        for u in &lifted {
            prod = series_mul(k, &prod, u, j + 1);
        }
        let e = upoly::sub(k, &target[j], &prod[j]);
        if e.is_empty() {
            continue;
        }
        for i in 0..s {
            lifted[i][j] = upoly::rem(k, &upoly::mul(k, &e, &bez[i]), &us[i]);
        }
    }

    let to_poly = |ser: &Series<F::Elem>| -> P<F> {
        let mut terms = Vec::new();
        for (j, px) in ser.iter().enumerate() {
            for (i, c) in px.iter().enumerate() {
                if !k.is_zero(c) {
                    terms.push((Mono::var(x, i as u16).with(y, j as u16), c.clone()));
                }
            }
        }
        MPoly::from_terms(k, nv, terms)
    };
    let mut out = Vec::new();
    let mut cur = g.clone();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let cur_ell = cur.lc_in(k, x).to_upoly(k, y).unwrap();
            let mut c: Series<F::Elem> = cur_ell.iter().map(|c| upoly::constant(k, c.clone())).collect();
            c.resize(n, Vec::new());
            for &i in &idx {
                c = series_mul(k, &c, &lifted[i], n);
            }
            let cand = to_poly(&c);
            if !cand.is_zero() {
                let h = super::gcd::primitive_part_in(k, &cand, x);
                if h.degree_in(x) > 0 {
                    if let Some(q) = cur.div_exact(k, &h) {
                        out.push(h);
                        cur = q;
                        for &i in idx.iter().rev() {
                            lifted.remove(i);
                        }
                        continue 'outer;
                    }
                }
            }
            if !next_combination(&mut idx, lifted.len()) {
                break;
            }
        }
        size += 1;
    }
    if !cur.is_constant() {
        out.push(cur.monic(k));
    }
    out
}

fn kronecker<F: FactorField>(k: &F, f: &P<F>, vars: &[usize]) -> Vec<P<F>> {
    let m = vars.len();
    let (y, z) = (vars[m - 2], vars[m - 1]);
    let d = f.degree_in(y) + 1;
    let fwd = |p: &P<F>| -> P<F> {
        let terms = p
            .terms
            .iter()
            .map(|(mo, c)| (mo.with(z, 0).with(y, mo.get(y) + d * mo.get(z)), c.clone()))
            .collect();
        MPoly::from_terms(k, p.nvars, terms)
    };
    let back = |p: &P<F>| -> P<F> {
        let terms = p
            .terms
            .iter()
            .map(|(mo, c)| (mo.with(y, mo.get(y) % d).with(z, mo.get(y) / d), c.clone()))
            .collect();
        MPoly::from_terms(k, p.nvars, terms)
    };
    let (_, img) = factor(k, &fwd(f));
    let mut pieces: Vec<P<F>> = Vec::new();
    for (g, e) in img {
        for _ in 0..e {
            pieces.push(g.clone());
        }
    }
    let mut out = Vec::new();
    let mut cur = f.monic(k);
    let mut size = 1;
    'outer: while 2 * size <= pieces.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let mut prod = MPoly::one(k, f.nvars);
            for &i in &idx {
                prod = prod.mul(k, &pieces[i]);
            }
            let cand = back(&prod).monic(k);
            if !cand.is_constant() {
                if let Some(q) = cur.div_exact(k, &cand) {
                    out.push(cand);
                    cur = q;
                    for &i in idx.iter().rev() {
                        pieces.remove(i);
                    }
                    continue 'outer;
                }
            }
            if !next_combination(&mut idx, pieces.len()) {
                break;
            }
        }
        size += 1;
    }
    if !cur.is_constant() {
        out.push(cur.monic(k));
    }
    out
}

/// Embedding of a finite field `K` into a flat extension `E`.
pub struct Embedding {
    pub ext: Gf,
    basis: Vec<Vec<u64>>,
}

impl Embedding {
    pub fn new<K: FiniteField>(k: &K, ext: Gf) -> Self {
        let basis = match k.modulus_poly() {
            None => vec![ext.one()],
            Some(m) => {
                let me: Vec<Vec<u64>> = m.iter().map(|&c| ext.embed_base(c)).collect();
                let rho = ufactor::roots(&ext, &me).into_iter().next().expect("extension contains base field");
                let mut b = vec![ext.one()];
                for _ in 1..k.degree() {
                    let next = ext.mul(b.last().unwrap(), &rho);
                    b.push(next);
                }
                b
            }
        };
        Embedding { ext, basis }
    }
    pub fn embed<K: FiniteField>(&self, k: &K, a: &K::Elem) -> Vec<u64> {
        let mut acc = self.ext.zero();
        for (c, b) in k.coords(a).iter().zip(&self.basis) {
            if *c != 0 {
                acc = self.ext.add(&acc, &self.ext.mul(&self.ext.embed_base(*c), b));
            }
        }
        acc
    }
    /// Preimage of an element known to lie in the image.
    pub fn pull_back<K: FiniteField>(&self, k: &K, e: &[u64]) -> Option<K::Elem> {
        let fp = self.ext.base();
        let n = self.ext.degree();
        let rows: Vec<Vec<u64>> = (0..n).map(|r| self.basis.iter().map(|b| b[r]).collect()).collect();
        let sol = linalg::solve(&fp, &rows, e)?;
        Some(k.from_coords(&sol))
    }
}

/// Extension of degree `e` over `k`, deterministic.
pub fn extension_of<K: FiniteField>(k: &K, e: usize) -> Embedding {
    let fp = Fp::new(k.prime());
    let m = ufactor::random_irreducible(&fp, k.degree() * e, 0xe47 + e as u64);
    Embedding::new(k, Gf::new(k.prime(), m))
}

pub fn map_into_ext<K: FiniteField>(k: &K, emb: &Embedding, f: &P<K>) -> MPoly<Vec<u64>> {
    f.map_coeffs(&emb.ext, |c| emb.embed(k, c))
}

pub fn pull_back_poly<K: FiniteField>(k: &K, emb: &Embedding, f: &MPoly<Vec<u64>>) -> Option<P<K>> {
    let mut terms = Vec::with_capacity(f.terms.len());
    for (m, c) in &f.terms {
        terms.push((*m, emb.pull_back(k, c)?));
    }
    Some(MPoly::from_terms(k, f.nvars, terms))
}

/// Coefficientwise `a -> a^|K|` on polynomials over `E`.
pub fn relative_frobenius<K: FiniteField>(k: &K, emb: &Embedding, f: &MPoly<Vec<u64>>) -> MPoly<Vec<u64>> {
    let q = k.order();
    let e = &emb.ext;
    f.map_coeffs(e, |c| e.pow_big(c, &q))
}

/// Groups factors over an extension into Frobenius orbits and pulls the
/// orbit products back to `K`.
pub fn descend_factors<K: FiniteField>(k: &K, emb: &Embedding, facs: Vec<MPoly<Vec<u64>>>) -> Vec<P<K>> {
    let e = &emb.ext;
    let mut seen: Vec<MPoly<Vec<u64>>> = Vec::new();
    let mut out = Vec::new();
    for h in facs {
        let h = h.monic(e);
        if seen.contains(&h) {
            continue;
        }
        let mut prod = h.clone();
        seen.push(h.clone());
        let mut cur = relative_frobenius(k, emb, &h).monic(e);
        while cur != h {
            prod = prod.mul(e, &cur);
            seen.push(cur.clone());
            cur = relative_frobenius(k, emb, &cur).monic(e);
        }
        out.push(pull_back_poly(k, emb, &prod).expect("orbit product is defined over K").monic(k));
    }
    out
}

fn via_extension<K: FiniteField + FactorField>(k: &K, f: &P<K>, x: usize, y: usize) -> Vec<P<K>> {
    let dx = f.degree_in(x) as u64;
    let dy = f.degree_in(y) as u64;
    let bad = f.lc_in(k, x).degree_in(y) as u64 + (2 * dx) * dy + 1;
    let q = k.order_u64().unwrap_or(u64::MAX);
    let mut e = 2usize;
    let mut qe = q.saturating_mul(q);
    while qe <= 2 * bad {
        e += 1;
        qe = qe.saturating_mul(q);
    }
    let emb = extension_of(k, e);
    let fe = map_into_ext(k, &emb, f);
    let facs = factor_squarefree(&emb.ext, &fe);
    descend_factors(k, &emb, facs)
}

/// Reduction of a rational polynomial modulo `p`; `None` if a denominator
/// vanishes.
pub fn reduce_mod_p(f: &P<Rationals>, p: u64) -> Option<MPoly<u64>> {
    let fp = Fp::new(p);
    let mut terms = Vec::with_capacity(f.terms.len());
    for (m, c) in &f.terms {
        terms.push((*m, super::field::rational_mod_u64(c, p)?));
    }
    Some(MPoly::from_terms(&fp, f.nvars, terms))
}

pub fn lift_from_fp(f: &MPoly<u64>) -> P<Rationals> {
    f.map_coeffs(&Rationals, |c| BigRational::from_integer(BigInt::from(*c)))
}

pub fn fp_value(c: &BigRational) -> u64 {
    c.numer().to_u64().expect("F_p element")
}
