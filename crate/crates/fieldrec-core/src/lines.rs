//! Projective lines `l_E(x, y) = (Ex ⊕ Ey)×/E×` in `F×/E×` for `E = k` and
//! `E = F^p`, good pairs, the intersection predicate, power normalization,
//! and the exact density count behind regular shifts.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::field::is_prime_u64;
use crate::arith::mpoly::Mono;
use crate::arith::{linalg, Field, MPoly};
use crate::dependence::{alg_dependent, is_regular};
use crate::differentials::{d, independent};
use crate::error::{Error, Result};
use crate::polyfield::kernel::{self, Poly};
use crate::polyfield::{FunctionField, RationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineBase {
    /// `E = k`.
    Constants,
    /// `E = F^p`; in characteristic 0 this is `k`.
    PSubfield,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSpec {
    base: LineBase,
    x: RationalFunction,
    y: RationalFunction,
}

fn is_in_base(f: &RationalFunction, base: LineBase) -> bool {
    match base {
        LineBase::PSubfield if f.descriptor().characteristic() > 0 => d(f).is_zero(),
        _ => f.is_constant(),
    }
}

impl LineSpec {
    pub fn new(base: LineBase, x: &RationalFunction, y: &RationalFunction) -> Result<Self> {
        x.same_field(y)?;
        if x.is_zero() || y.is_zero() {
            return Err(Error::ZeroInput);
        }
        if is_in_base(&x.div(y)?, base) {
            return Err(Error::Precondition(format!("{x} and {y} have the same class")));
        }
        Ok(LineSpec { base, x: x.clone(), y: y.clone() })
    }
    pub fn base(&self) -> LineBase {
        self.base
    }
    pub fn x(&self) -> &RationalFunction {
        &self.x
    }
    pub fn y(&self) -> &RationalFunction {
        &self.y
    }
}

/// Constants `c_i` with `Σ c_i f_i = g`, when they exist.
pub fn solve_constants(fs: &[RationalFunction], g: &RationalFunction) -> Option<Vec<BigRational>> {
    let k = g.consts();
    let mut den = g.den().clone();
    for f in fs {
        let gg = kernel::gcd(&k, &den, f.den());
        den = kernel::mul(&k, &kernel::div(&k, &den, &gg), f.den());
    }
    let lift = |f: &RationalFunction| kernel::mul(&k, f.num(), &kernel::div(&k, &den, f.den()));
    let cols: Vec<Poly> = fs.iter().map(lift).collect();
    let rhs = lift(g);
    let mut index: BTreeMap<Mono, usize> = BTreeMap::new();
    for p in cols.iter().chain(core::iter::once(&rhs)) {
        for (m, _) in &p.terms {
            let n = index.len();
            index.entry(*m).or_insert(n);
        }
    }
    let mut a = vec![vec![k.zero(); fs.len()]; index.len()];
    let mut b = vec![k.zero(); index.len()];
    for (j, p) in cols.iter().enumerate() {
        for (m, c) in &p.terms {
            a[index[m]][j] = c.clone();
        }
    }
    for (m, c) in &rhs.terms {
        b[index[m]] = c.clone();
    }
    linalg::solve(&k, &a, &b)
}

/// Coordinates of `z` in the `p`-basis `{t^e : 0 ≤ e_i < p}` of `F/F^p`.
fn p_components(z: &RationalFunction, p: u64) -> BTreeMap<Mono, RationalFunction> {
    let k = z.consts();
    let desc = z.descriptor();
    let r = desc.nvars();
    let mut m = z.num().clone();
    for _ in 1..p {
        m = kernel::mul(&k, &m, z.den());
    }
    let dp = z.den().pow(&k, p as u32);
    let mut groups: BTreeMap<Mono, Vec<(Mono, BigRational)>> = BTreeMap::new();
    for (mono, c) in &m.terms {
        let mut res = Mono::ONE;
        let mut quo = Mono::ONE;
        for i in 0..r {
            res.0[i] = mono.get(i) % p as u16;
            quo.0[i] = mono.get(i) - res.0[i];
        }
        groups.entry(res).or_default().push((quo, c.clone()));
    }
    groups
        .into_iter()
        .map(|(e, terms)| {
            let num = MPoly::from_terms(&k, r, terms);
            (e, RationalFunction::new(desc, num, dp.clone()).expect("nonzero denominator"))
        })
        .collect()
}

/// `(a, b)` in the base field with `z = a·x + b·y`. Classes are taken up to
/// the base field, so scaling `z` scales the answer.
pub fn line_membership(z: &RationalFunction, l: &LineSpec) -> Result<Option<(RationalFunction, RationalFunction)>> {
    z.same_field(&l.x)?;
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    let desc = z.descriptor();
    let p = desc.characteristic();
    if l.base == LineBase::Constants || p == 0 {
        return Ok(solve_constants(&[l.x.clone(), l.y.clone()], z).map(|c| {
            let a = RationalFunction::constant(desc, &c[0]).expect("constant in field");
            let b = RationalFunction::constant(desc, &c[1]).expect("constant in field");
            (a, b)
        }));
    }
    let zc = p_components(z, p);
    let xc = p_components(&l.x, p);
    let yc = p_components(&l.y, p);
    let mut keys: Vec<Mono> = zc.keys().chain(xc.keys()).chain(yc.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let ff = FunctionField::new(desc);
    let get = |c: &BTreeMap<Mono, RationalFunction>, e: &Mono| c.get(e).cloned().unwrap_or_else(|| ff.zero());
    let a: Vec<Vec<RationalFunction>> = keys.iter().map(|e| vec![get(&xc, e), get(&yc, e)]).collect();
    let b: Vec<RationalFunction> = keys.iter().map(|e| get(&zc, e)).collect();
    let Some(sol) = linalg::solve(&ff, &a, &b) else { return Ok(None) };
    let (sa, sb) = (sol[0].clone(), sol[1].clone());
    if sa.mul(&l.x).add(&sb.mul(&l.y)) != *z || !d(&sa).is_zero() || !d(&sb).is_zero() {
        return Ok(None);
    }
    Ok(Some((sa, sb)))
}

/// `x1` regular and `dx1, dx2` independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPair {
    x1: RationalFunction,
    x2: RationalFunction,
}

impl GoodPair {
    pub fn new(x1: &RationalFunction, x2: &RationalFunction) -> Result<Self> {
        if !is_good_pair(x1, x2)? {
            return Err(Error::Precondition(format!("({x1}, {x2}) is not a good pair")));
        }
        Ok(GoodPair { x1: x1.clone(), x2: x2.clone() })
    }
    pub fn x1(&self) -> &RationalFunction {
        &self.x1
    }
    pub fn x2(&self) -> &RationalFunction {
        &self.x2
    }
}

pub fn is_good_pair(x1: &RationalFunction, x2: &RationalFunction) -> Result<bool> {
    x1.same_field(x2)?;
    if x1.is_zero() || x2.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(is_regular(x1) && independent(&[x1.clone(), x2.clone()])?)
}

/// A regular `y` with `dx, dy` independent, so that `(y, x·y)` is a good
/// pair. Tries `y = t_j + a·x` for `a = 1, 2, ...`, then seeded random
/// polynomials of degree at most 3 added to `x`.
pub fn shift_to_good(x: &RationalFunction, budget: usize) -> Result<RationalFunction> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    if d(x).is_zero() {
        return Err(Error::Precondition(format!("{x} has zero differential")));
    }
    let desc = x.descriptor();
    let k = x.consts();
    let r = desc.nvars();
    let accept = |y: &RationalFunction| -> Result<bool> {
        Ok(!y.is_zero() && is_regular(y) && independent(&[x.clone(), y.clone()])?)
    };
    let mut attempts = 0usize;
    let sweep = match desc.characteristic() {
        0 => 8,
        p => (p - 1).min(8) as i64,
    };
    for a in 1..=sweep {
        for j in 0..r {
            if attempts >= budget {
                return Err(Error::BudgetExhausted(budget));
            }
            attempts += 1;
            let y = RationalFunction::var(desc, j).add(&x.scale(&k.from_i64(a)));
            if accept(&y)? {
                return Ok(y);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5_4f17);
    while attempts < budget {
        attempts += 1;
        let mut terms = Vec::new();
        for _ in 0..4 {
            let mut m = Mono::ONE;
            let mut deg = rng.gen_range(1..=3u16);
            while deg > 0 {
                m.0[rng.gen_range(0..r)] += 1;
                deg -= 1;
            }
            terms.push((m, k.from_i64(rng.gen_range(1..=6))));
        }
        let g = RationalFunction::from_poly(desc, MPoly::from_terms(&k, r, terms));
        let y = g.add(x);
        if accept(&y)? {
            return Ok(y);
        }
    }
    Err(Error::BudgetExhausted(budget))
}

/// Outcome of an intersection-membership test; `boundary` marks a constant
/// quotient `z/x2` or `z/y2`, decided by the rule that a constant class is
/// dependent only on constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BtMembership {
    pub member: bool,
    pub boundary: bool,
}

/// Whether `z/x2` is algebraic over `k(x1/x2)` and `z/y2` over `k(y1/y2)`.
pub fn bt_membership(
    z: &RationalFunction,
    x1: &RationalFunction,
    x2: &RationalFunction,
    y1: &RationalFunction,
    y2: &RationalFunction,
) -> Result<BtMembership> {
    for w in [x1, x2, y1, y2] {
        z.same_field(w)?;
    }
    if [z, x1, x2, y1, y2].iter().any(|w| w.is_zero()) {
        return Err(Error::ZeroInput);
    }
    let (xq, yq) = (x1.div(x2)?, y1.div(y2)?);
    if xq.is_constant() || yq.is_constant() {
        return Err(Error::Precondition("x1/x2 and y1/y2 must be nonconstant".into()));
    }
    let (zx, zy) = (z.div(x2)?, z.div(y2)?);
    let boundary = zx.is_constant() || zy.is_constant();
    let member = alg_dependent(&zx, &xq)? && alg_dependent(&zy, &yq)?;
    Ok(BtMembership { member, boundary })
}

pub fn bt_member(
    z: &RationalFunction,
    x1: &RationalFunction,
    x2: &RationalFunction,
    y1: &RationalFunction,
    y2: &RationalFunction,
) -> Result<bool> {
    Ok(bt_membership(z, x1, x2, y1, y2)?.member)
}

/// Powers allowed by the normalization: `|m| = 1` for `p ∈ {0, 2}`,
/// `1 ≤ |m| ≤ (p-1)/2` otherwise.
pub fn check_mcond(m: i64, p: u64) -> Result<()> {
    let bound = if p == 0 || p == 2 { 1 } else { ((p - 1) / 2) as i64 };
    if m == 0 || m.unsigned_abs() as i64 > bound {
        return Err(Error::InvalidPower(m));
    }
    Ok(())
}

/// The allowed powers, ordered `1, -1, 2, -2, ...`.
pub fn mcond_range(p: u64) -> Vec<i64> {
    let bound = if p == 0 || p == 2 { 1 } else { ((p - 1) / 2) as i64 };
    (1..=bound).flat_map(|m| [m, -m]).collect()
}

/// For claimed correspondences `z ↦ z'` of points on `l_{F^p}(x1, x2)`,
/// whether every `z'^m` lies on `l_{F^p}(x1'^m, x2'^m)`. Each generator is
/// passed together with its image.
pub fn line_image_power_test(
    pairs: &[(RationalFunction, RationalFunction)],
    x1: (&RationalFunction, &RationalFunction),
    x2: (&RationalFunction, &RationalFunction),
    m: i64,
) -> Result<bool> {
    let p = x1.0.descriptor().characteristic();
    check_mcond(m, p)?;
    let domain = LineSpec::new(LineBase::PSubfield, x1.0, x2.0)?;
    for (z, _) in pairs {
        if line_membership(z, &domain)?.is_none() {
            return Err(Error::Precondition(format!("{z} is not on the line through {} and {}", x1.0, x2.0)));
        }
    }
    let (a, b) = (x1.1.pow(m)?, x2.1.pow(m)?);
    let Ok(image) = LineSpec::new(LineBase::PSubfield, &a, &b) else { return Ok(false) };
    for (_, zp) in pairs {
        if line_membership(&zp.pow(m)?, &image)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn binomial(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `(Σ_{0 ≤ n ≤ ⌊d/p⌋} C(n+r-2, n)) / C(d+r-1, d)`: the share of
/// degree-`d` monomials `t^e` in `r` variables with `e_2, ..., e_r` all
/// divisible by `p`.
pub fn density_ratio(p: u64, r: u64, d: u64) -> Result<BigRational> {
    if !is_prime_u64(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if r < 2 || d == 0 {
        return Err(Error::Precondition("need r ≥ 2 and d ≥ 1".into()));
    }
    let mut count = BigInt::zero();
    for n in 0..=d / p {
        count += binomial(n + r - 2, n);
    }
    Ok(BigRational::new(count, binomial(d + r - 1, d)))
}

/// `1/p^{r-1}`.
pub fn density_limit(p: u64, r: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(p).pow((r - 1) as u32))
}
