//! Algebraic dependence, p-multiplicative dependence and regularity of
//! elements, plus the classes of `F×/k×` and `F×/p` they are stated on.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::mfactor::{extension_of, map_into_ext};
use crate::arith::{absirr, ConstField, Field, Fp, MPoly, Rationals};
use crate::differentials;
use crate::error::{Error, Result};
use crate::polyfield::kernel::{self, Poly};
use crate::polyfield::{eval_poly, FieldDescriptor, Polynomial, RationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modulus {
    /// `F×/k×`: integer exponents.
    Constants,
    /// `F×/p = F×/F^{p×}`: exponents modulo the characteristic.
    ModP,
}

/// A class in `F×/k×` (or `F×/p`), stored as its exponent vector over the
/// monic irreducibles, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultClass {
    desc: Arc<FieldDescriptor>,
    modulus: Modulus,
    support: Vec<(Polynomial, i64)>,
}

impl MultClass {
    pub fn identity(desc: &Arc<FieldDescriptor>, modulus: Modulus) -> Self {
        MultClass { desc: desc.clone(), modulus, support: Vec::new() }
    }

    pub fn of(f: &RationalFunction) -> Result<Self> {
        Self::with_modulus(f, Modulus::Constants)
    }

    pub fn with_modulus(f: &RationalFunction, modulus: Modulus) -> Result<Self> {
        let fac = f.factor()?;
        let mut c = MultClass { desc: f.descriptor().clone(), modulus, support: fac.factors };
        c.reduce()?;
        Ok(c)
    }

    fn modulus_value(&self) -> Result<i64> {
        match self.modulus {
            Modulus::Constants => Ok(0),
            Modulus::ModP => match self.desc.characteristic() {
                0 => Err(Error::CharacteristicZero),
                p => Ok(p as i64),
            },
        }
    }

    fn reduce(&mut self) -> Result<()> {
        let m = self.modulus_value()?;
        if m > 0 {
            for (_, e) in self.support.iter_mut() {
                *e = e.rem_euclid(m);
            }
        }
        self.support.retain(|(_, e)| *e != 0);
        Ok(())
    }

    pub fn descriptor(&self) -> &Arc<FieldDescriptor> {
        &self.desc
    }
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }
    pub fn support(&self) -> &[(Polynomial, i64)] {
        &self.support
    }
    pub fn is_identity(&self) -> bool {
        self.support.is_empty()
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.modulus, o.modulus);
        let mut out: Vec<(Polynomial, i64)> = Vec::with_capacity(self.support.len() + o.support.len());
        let (mut i, mut j) = (0, 0);
        while i < self.support.len() || j < o.support.len() {
            let ord = match (self.support.get(i), o.support.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => core::cmp::Ordering::Less,
                _ => core::cmp::Ordering::Greater,
            };
            match ord {
                core::cmp::Ordering::Less => {
                    out.push(self.support[i].clone());
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push(o.support[j].clone());
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    out.push((self.support[i].0.clone(), self.support[i].1 + o.support[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        let mut c = MultClass { desc: self.desc.clone(), modulus: self.modulus, support: out };
        c.reduce().expect("modulus already validated");
        c
    }

    pub fn pow(&self, n: i64) -> Self {
        let support = self.support.iter().map(|(f, e)| (f.clone(), e * n)).collect();
        let mut c = MultClass { desc: self.desc.clone(), modulus: self.modulus, support };
        c.reduce().expect("modulus already validated");
        c
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    /// The monic representative `∏ f_i^{e_i}`.
    pub fn representative(&self) -> RationalFunction {
        let k = self.desc.consts();
        let r = self.desc.nvars();
        let mut num = MPoly::one(&k, r);
        let mut den = MPoly::one(&k, r);
        for (f, e) in &self.support {
            let pw = f.poly().pow(&k, e.unsigned_abs() as u32);
            if *e > 0 {
                num = kernel::mul(&k, &num, &pw);
            } else {
                den = kernel::mul(&k, &den, &pw);
            }
        }
        RationalFunction::new(&self.desc, num, den).expect("nonzero denominator")
    }

    /// Exponent of a monic irreducible in the class.
    pub fn exponent_of(&self, f: &Polynomial) -> i64 {
        self.support.iter().find(|(g, _)| g == f).map_or(0, |(_, e)| *e)
    }

    /// Canonical text, used as the hashing key of the class.
    pub fn canonical_string(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{self}");
        s
    }
}

impl fmt::Display for MultClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_char('*')?;
            }
            if *e == 1 {
                write!(f, "({g})")?;
            } else {
                write!(f, "({g})^{e}")?;
            }
        }
        Ok(())
    }
}

/// True iff `trdeg_k k(x, y) ≤ 1`, with constants dependent only with
/// constants.
pub fn alg_dependent(x: &RationalFunction, y: &RationalFunction) -> Result<bool> {
    x.same_field(y)?;
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroInput);
    }
    match (x.is_constant(), y.is_constant()) {
        (true, true) => return Ok(true),
        (true, false) | (false, true) => return Ok(false),
        _ => {}
    }
    // Dependence forces dx, dy to be F-dependent in every characteristic;
    // in characteristic 0 the converse holds as well.
    let rank = differentials::rank(&[x.clone(), y.clone()])?;
    if rank == 2 {
        return Ok(false);
    }
    if x.descriptor().characteristic() == 0 {
        return Ok(true);
    }
    Ok(relation(x, y).is_some())
}

/// An irreducible `H(u, v) ∈ k[u, v]` with `H(x, y) = 0`, if one exists.
///
/// Eliminates along random rational curves `t_i = γ_i(s)`: the minimal
/// relation divides `Res_s(P_x(γ) - u Q_x(γ), P_y(γ) - v Q_y(γ))` for every
/// curve on which both restrictions are defined and nonconstant, so it is
/// among the irreducible factors of the gcd over two such curves.
pub fn relation(x: &RationalFunction, y: &RationalFunction) -> Option<Polynomial> {
    let desc = x.descriptor();
    let k = desc.consts();
    let mut rng = ChaCha8Rng::seed_from_u64(0xdead_beef ^ ((x.degree() as u64) << 8) ^ y.degree() as u64);
    let mut g: Option<Poly> = None;
    let mut curves = 0;
    let mut attempts = 0;
    while curves < 2 {
        attempts += 1;
        assert!(attempts < 500, "no admissible curve found");
        let deg = if attempts < 50 { 2 } else { 3 };
        let Some(res) = curve_resultant(&k, x, y, deg, &mut rng) else { continue };
        curves += 1;
        g = Some(match g {
            None => res,
            Some(g) => kernel::gcd(&k, &g, &res),
        });
    }
    let g = g.unwrap();
    if g.is_constant() {
        return None;
    }
    let rdesc = relation_descriptor(desc);
    let (_, fs) = kernel::factor(&k, &g);
    for (h, _) in fs {
        // Variable 0 (the curve parameter) does not occur.
        let h2 = h.permute(&k, 2, &[0, 0, 1]);
        if is_relation(&h2, x, y) {
            return Some(Polynomial::new(&rdesc, h2));
        }
    }
    None
}

fn relation_descriptor(desc: &FieldDescriptor) -> Arc<FieldDescriptor> {
    FieldDescriptor::build(desc.constant_field(), vec!["u".into(), "v".into()]).expect("descriptor")
}

fn is_relation(h: &Poly, x: &RationalFunction, y: &RationalFunction) -> bool {
    eval_poly(h, &[x.clone(), y.clone()]).is_zero()
}

fn random_const(k: &ConstField, rng: &mut ChaCha8Rng) -> BigRational {
    match k.fp() {
        Some(fp) => k.from_u64(rng.gen_range(0..fp.p())),
        None => k.from_i64(rng.gen_range(-9..=9)),
    }
}

/// Resultant in `k[u, v]` (variables 1 and 2 of a three-variable ring) for
/// one random curve, or `None` if the curve is degenerate.
fn curve_resultant(
    k: &ConstField,
    x: &RationalFunction,
    y: &RationalFunction,
    deg: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Poly> {
    let r = x.descriptor().nvars();
    let s = MPoly::var(k, 3, 0);
    let gamma: Vec<Poly> = (0..r)
        .map(|_| {
            let mut acc = MPoly::zero(3);
            for _ in 0..=deg {
                let c = random_const(k, rng);
                acc = acc.mul(k, &s).add(k, &MPoly::constant(k, 3, c));
            }
            acc
        })
        .collect();
    let restrict = |f: &RationalFunction| -> Option<(Poly, Poly)> {
        let n = f.num().compose(k, &gamma);
        let d = f.den().compose(k, &gamma);
        if d.is_zero() || n.is_zero() {
            return None;
        }
        // Nonconstant restriction: n and d not proportional.
        let t = n.scale(k, &d.lc(k)).sub(k, &d.scale(k, &n.lc(k)));
        if t.is_zero() {
            return None;
        }
        Some((n, d))
    };
    let (n1, d1) = restrict(x)?;
    let (n2, d2) = restrict(y)?;
    let u = MPoly::var(k, 3, 1);
    let v = MPoly::var(k, 3, 2);
    let a = n1.sub(k, &kernel::mul(k, &u, &d1));
    let b = n2.sub(k, &kernel::mul(k, &v, &d2));
    let res = kernel::resultant(k, &a, &b, 0);
    (!res.is_zero()).then_some(res)
}

/// True iff `z` is algebraic over `k(x)`.
pub fn in_rel_alg_closure(z: &RationalFunction, x: &RationalFunction) -> Result<bool> {
    z.same_field(x)?;
    if x.is_constant() {
        return Err(Error::ConstantInput);
    }
    if z.is_constant() {
        return Ok(true);
    }
    alg_dependent(z, x)
}

/// `x̄^Z ∩ ȳ^Z ≠ 1` in `F×/p` (in `F×/k×` in characteristic 0).
pub fn p_mult_dependent(x: &RationalFunction, y: &RationalFunction) -> Result<bool> {
    x.same_field(y)?;
    if x.is_zero() || y.is_zero() {
        return Err(Error::ZeroInput);
    }
    let p = x.descriptor().characteristic();
    let modulus = if p == 0 { Modulus::Constants } else { Modulus::ModP };
    let cx = MultClass::with_modulus(x, modulus)?;
    let cy = MultClass::with_modulus(y, modulus)?;
    if cx.is_identity() || cy.is_identity() {
        return Ok(false);
    }
    // Both nonzero: dependent iff the two exponent vectors are proportional.
    let mut keys: Vec<&Polynomial> = cx.support.iter().chain(&cy.support).map(|(f, _)| f).collect();
    keys.sort();
    keys.dedup();
    let row = |c: &MultClass| keys.iter().map(|f| c.exponent_of(f)).collect::<Vec<i64>>();
    let (a, b) = (row(&cx), row(&cy));
    if p == 0 {
        let k = Rationals;
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        let m = vec![a.iter().map(|&e| q(e)).collect(), b.iter().map(|&e| q(e)).collect()];
        Ok(crate::arith::linalg::rank(&k, &m) == 1)
    } else {
        let fp = Fp::new(p);
        let m = vec![a.iter().map(|&e| fp.reduce_i64(e)).collect(), b.iter().map(|&e| fp.reduce_i64(e)).collect()];
        Ok(crate::arith::linalg::rank(&fp, &m) == 1)
    }
}

/// `x` transcendental with `F/k(x)` regular: the generic fiber
/// `P - λQ` of `x = P/Q` is geometrically integral.
///
/// A fiber `P - λ0 Q` of full degree that is absolutely irreducible
/// certifies the generic fiber; conversely, if the generic fiber splits (or
/// is non-reduced) over `k(λ)`-bar, every full-degree fiber does too.  The
/// search runs over `λ0 ∈ k` and, for finite `k`, over small extensions.
pub fn is_regular(x: &RationalFunction) -> bool {
    if x.is_constant() {
        return false;
    }
    let k = x.consts();
    let (p, q) = (x.num(), x.den());
    let full = p.total_degree().unwrap_or(0).max(q.total_degree().unwrap_or(0));
    match k.fp() {
        None => {
            let kq = Rationals;
            for i in 0..24i64 {
                let l = kq.from_i64([1, -1, 2, -2, 3, 5, -7, 11][(i % 8) as usize] * (1 + i / 8 * 13));
                let fib = p.sub(&kq, &q.scale(&kq, &l));
                if fib.total_degree() == Some(full) && absirr::abs_irreducible_q(&fib) {
                    return true;
                }
            }
            false
        }
        Some(fp) => {
            let pp = kernel::to_fp(p, fp.p());
            let qq = kernel::to_fp(q, fp.p());
            for l in 0..fp.p() {
                let fib = pp.sub(&fp, &qq.scale(&fp, &l));
                if fib.total_degree() == Some(full) && absirr::abs_irreducible_finite(&fp, &fib) {
                    return true;
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for e in 2..=4usize {
                let emb = extension_of(&fp, e);
                let gf = &emb.ext;
                let pe = map_into_ext(&fp, &emb, &pp);
                let qe = map_into_ext(&fp, &emb, &qq);
                for _ in 0..6 {
                    let l = crate::arith::FiniteField::random(gf, &mut rng);
                    let fib = pe.sub(gf, &qe.scale(gf, &l));
                    if fib.total_degree() == Some(full) && absirr::abs_irreducible_finite(gf, &fib) {
                        return true;
                    }
                }
            }
            false
        }
    }
}
