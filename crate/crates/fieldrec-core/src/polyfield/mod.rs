//! Rational function fields `k(t_1, ..., t_r)` over `Q` or `F_p`: exact
//! arithmetic in canonical form, parsing, printing and factorization.
//!
//! Canonical form of `N/D`: `gcd(N, D) = 1` and `D` monic in graded-lex
//! order, so equal values are structurally equal.

mod descriptor;
mod factor;
pub(crate) mod kernel;
mod parse;
mod print;

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops;

use num_rational::BigRational;

use crate::arith::{ConstField, Field, MPoly};
use crate::error::{Error, Result};

pub use descriptor::{ConstantField, FieldDescriptor, DEFAULT_MAX_VARS, HARD_MAX_VARS};
pub use factor::{Factorization, IrreducibilityMode};
pub use parse::MAX_EXPONENT;

pub(crate) use kernel::Poly;
pub use kernel::Poly as PolyRepr;

/// A polynomial in `k[t_1, ..., t_r]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    desc: Arc<FieldDescriptor>,
    poly: Poly,
}

impl Polynomial {
    pub fn new(desc: &Arc<FieldDescriptor>, poly: Poly) -> Self {
        debug_assert_eq!(poly.nvars, desc.nvars());
        Polynomial { desc: desc.clone(), poly }
    }
    pub fn descriptor(&self) -> &Arc<FieldDescriptor> {
        &self.desc
    }
    pub fn poly(&self) -> &Poly {
        &self.poly
    }
    pub fn into_poly(self) -> Poly {
        self.poly
    }
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
    pub fn is_constant(&self) -> bool {
        self.poly.is_constant()
    }
    pub fn total_degree(&self) -> Option<u32> {
        self.poly.total_degree()
    }
    pub fn degree_in(&self, i: usize) -> u16 {
        self.poly.degree_in(i)
    }
    /// Exponent vectors and coefficients, in decreasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &BigRational)> + '_ {
        let r = self.desc.nvars();
        self.poly.terms.iter().map(move |(m, c)| (&m.0[..r], c))
    }
    pub fn to_rational_function(&self) -> RationalFunction {
        RationalFunction::from_poly(&self.desc, self.poly.clone())
    }
    pub fn parse(text: &str, desc: &Arc<FieldDescriptor>) -> Result<Self> {
        let f = RationalFunction::parse(text, desc)?;
        if !f.den.is_one(&desc.consts()) {
            return Err(Error::Precondition(alloc::format!("`{text}` is not a polynomial")));
        }
        Ok(Polynomial { desc: f.desc, poly: f.num })
    }
}

/// An element of `k(t_1, ..., t_r)` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunction {
    desc: Arc<FieldDescriptor>,
    num: Poly,
    den: Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic.
pub fn arith(a: &RationalFunction, b: &RationalFunction, op: ArithOp) -> Result<RationalFunction> {
    a.same_field(b)?;
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b)?,
    })
}

impl RationalFunction {
    /// Canonicalizes `num / den`.
    pub fn new(desc: &Arc<FieldDescriptor>, num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let k = desc.consts();
        let g = kernel::gcd(&k, &num, &den);
        let (num, den) = if g.is_one(&k) { (num, den) } else { (kernel::div(&k, &num, &g), kernel::div(&k, &den, &g)) };
        Ok(Self::normalized(desc, num, den))
    }

    /// `num / den` with coprime inputs; only the leading coefficient of the
    /// denominator is normalized.
    pub(crate) fn normalized(desc: &Arc<FieldDescriptor>, num: Poly, den: Poly) -> Self {
        let k = desc.consts();
        let r = desc.nvars();
        if num.is_zero() {
            return RationalFunction { desc: desc.clone(), num: MPoly::zero(r), den: MPoly::one(&k, r) };
        }
        let l = den.lc(&k);
        if k.is_one(&l) {
            RationalFunction { desc: desc.clone(), num, den }
        } else {
            let li = k.inv(&l);
            RationalFunction { desc: desc.clone(), num: num.scale(&k, &li), den: den.scale(&k, &li) }
        }
    }

    pub fn from_poly(desc: &Arc<FieldDescriptor>, num: Poly) -> Self {
        let k = desc.consts();
        RationalFunction { desc: desc.clone(), num, den: MPoly::one(&k, desc.nvars()) }
    }
    pub fn zero(desc: &Arc<FieldDescriptor>) -> Self {
        Self::from_poly(desc, MPoly::zero(desc.nvars()))
    }
    pub fn one(desc: &Arc<FieldDescriptor>) -> Self {
        Self::from_i64(desc, 1)
    }
    pub fn from_i64(desc: &Arc<FieldDescriptor>, n: i64) -> Self {
        let k = desc.consts();
        Self::from_poly(desc, MPoly::constant(&k, desc.nvars(), k.from_i64(n)))
    }
    /// A constant; the value is reduced into the constant field.
    pub fn constant(desc: &Arc<FieldDescriptor>, c: &BigRational) -> Result<Self> {
        let k = desc.consts();
        let c = k.coerce(c).ok_or_else(|| Error::CoefficientNotInField(alloc::format!("{c}")))?;
        Ok(Self::from_poly(desc, MPoly::constant(&k, desc.nvars(), c)))
    }
    /// The variable `t_{i+1}`.
    pub fn var(desc: &Arc<FieldDescriptor>, i: usize) -> Self {
        let k = desc.consts();
        Self::from_poly(desc, MPoly::var(&k, desc.nvars(), i))
    }
    pub fn vars(desc: &Arc<FieldDescriptor>) -> Vec<Self> {
        (0..desc.nvars()).map(|i| Self::var(desc, i)).collect()
    }

    pub fn descriptor(&self) -> &Arc<FieldDescriptor> {
        &self.desc
    }
    pub fn consts(&self) -> ConstField {
        self.desc.consts()
    }
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn numerator(&self) -> Polynomial {
        Polynomial::new(&self.desc, self.num.clone())
    }
    pub fn denominator(&self) -> Polynomial {
        Polynomial::new(&self.desc, self.den.clone())
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_one(&self) -> bool {
        let k = self.consts();
        self.num.is_one(&k) && self.den.is_one(&k)
    }
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }
    pub fn constant_value(&self) -> Option<BigRational> {
        if !self.den.is_constant() {
            return None;
        }
        self.num.constant_value(&self.consts())
    }

    pub fn same_field(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.desc, &o.desc) || self.desc == o.desc {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }
    fn check(&self, o: &Self) {
        if let Err(e) = self.same_field(o) {
            panic!("{e}");
        }
    }

    pub fn neg(&self) -> Self {
        let k = self.consts();
        RationalFunction { desc: self.desc.clone(), num: self.num.neg(&k), den: self.den.clone() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let k = self.consts();
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let n = self.num.add(&k, &o.num);
            return Self::new(&self.desc, n, self.den.clone()).unwrap();
        }
        // Henrici: with g = gcd(b, d), a/b + c/d = (a d' + c b') / (b' d).
        let g = kernel::gcd(&k, &self.den, &o.den);
        let (b1, d1) = if g.is_one(&k) {
            (self.den.clone(), o.den.clone())
        } else {
            (kernel::div(&k, &self.den, &g), kernel::div(&k, &o.den, &g))
        };
        let n = kernel::mul(&k, &self.num, &d1).add(&k, &kernel::mul(&k, &o.num, &b1));
        if n.is_zero() {
            return Self::zero(&self.desc);
        }
        let d = kernel::mul(&k, &b1, &o.den);
        if g.is_one(&k) {
            return Self::normalized(&self.desc, n, d);
        }
        let h = kernel::gcd(&k, &n, &g);
        if h.is_one(&k) {
            Self::normalized(&self.desc, n, d)
        } else {
            Self::normalized(&self.desc, kernel::div(&k, &n, &h), kernel::div(&k, &d, &h))
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let k = self.consts();
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.desc);
        }
        let g1 = kernel::gcd(&k, &self.num, &o.den);
        let g2 = kernel::gcd(&k, &o.num, &self.den);
        let a = kernel::div(&k, &self.num, &g1);
        let d = kernel::div(&k, &o.den, &g1);
        let c = kernel::div(&k, &o.num, &g2);
        let b = kernel::div(&k, &self.den, &g2);
        Self::normalized(&self.desc, kernel::mul(&k, &a, &c), kernel::mul(&k, &b, &d))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(&self.desc, self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.check(o);
        Ok(self.mul(&o.inv()?))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let k = self.consts();
        if k.is_zero(c) {
            return Self::zero(&self.desc);
        }
        RationalFunction { desc: self.desc.clone(), num: self.num.scale(&k, c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let k = self.consts();
        let b = if e < 0 { self.inv()? } else { self.clone() };
        let n = e.unsigned_abs() as u32;
        Ok(RationalFunction { desc: self.desc.clone(), num: b.num.pow(&k, n), den: b.den.pow(&k, n) })
    }

    /// `∂/∂t_{i+1}`.
    pub fn partial(&self, i: usize) -> Self {
        let k = self.consts();
        let dn = self.num.derivative(&k, i);
        let dd = self.den.derivative(&k, i);
        if dd.is_zero() {
            return Self::new(&self.desc, dn, self.den.clone()).unwrap();
        }
        let n = kernel::mul(&k, &dn, &self.den).sub(&k, &kernel::mul(&k, &self.num, &dd));
        Self::new(&self.desc, n, kernel::mul(&k, &self.den, &self.den)).unwrap()
    }

    /// Substitutes `t_i -> images[i]`; the result lives in the images'
    /// field.  Fails if the denominator maps to zero.
    pub fn compose(&self, images: &[RationalFunction]) -> Result<Self> {
        assert_eq!(images.len(), self.desc.nvars());
        let n = eval_poly(&self.num, images);
        let d = eval_poly(&self.den, images);
        n.div(&d)
    }

    /// Value at a point of `k^r` (`None` at a pole).
    pub fn eval(&self, pt: &[BigRational]) -> Option<BigRational> {
        let k = self.consts();
        let d = self.den.eval(&k, pt);
        if k.is_zero(&d) {
            return None;
        }
        Some(k.div(&self.num.eval(&k, pt), &d))
    }

    /// Total degree `max(deg N, deg D)`.
    pub fn degree(&self) -> u32 {
        self.num.total_degree().unwrap_or(0).max(self.den.total_degree().unwrap_or(0))
    }

    /// Reinterprets the element in another field with the same constants
    /// and number of variables.
    pub fn rebase(&self, desc: &Arc<FieldDescriptor>) -> Result<Self> {
        if desc.consts() != self.consts() || desc.nvars() != self.desc.nvars() {
            return Err(Error::DescriptorMismatch);
        }
        Ok(RationalFunction { desc: desc.clone(), num: self.num.clone(), den: self.den.clone() })
    }
}

/// `P(images)` for a polynomial `P` over the images' constant field.
pub(crate) fn eval_poly(p: &Poly, images: &[RationalFunction]) -> RationalFunction {
    let desc = images[0].desc.clone();
    let k = desc.consts();
    if p.is_constant() {
        return RationalFunction::from_poly(&desc, MPoly::constant(&k, desc.nvars(), p.lc(&k)));
    }
    // Common denominator: prod den_i^{deg_i P}.
    let r = images.len();
    let degs: Vec<u16> = (0..r).map(|i| p.degree_in(i)).collect();
    let mut npow: Vec<Vec<Poly>> = Vec::with_capacity(r);
    let mut dpow: Vec<Vec<Poly>> = Vec::with_capacity(r);
    for (i, im) in images.iter().enumerate() {
        let mut a = alloc::vec![MPoly::one(&k, desc.nvars())];
        let mut b = alloc::vec![MPoly::one(&k, desc.nvars())];
        for j in 1..=degs[i] as usize {
            a.push(kernel::mul(&k, &a[j - 1], &im.num));
            b.push(kernel::mul(&k, &b[j - 1], &im.den));
        }
        npow.push(a);
        dpow.push(b);
    }
    let mut acc = MPoly::zero(desc.nvars());
    for (m, c) in &p.terms {
        let mut t = MPoly::constant(&k, desc.nvars(), c.clone());
        for i in 0..r {
            let e = m.get(i) as usize;
            let d = degs[i] as usize;
            if e > 0 {
                t = kernel::mul(&k, &t, &npow[i][e]);
            }
            if d > e {
                t = kernel::mul(&k, &t, &dpow[i][d - e]);
            }
        }
        acc = acc.add(&k, &t);
    }
    let mut den = MPoly::one(&k, desc.nvars());
    for i in 0..r {
        den = kernel::mul(&k, &den, &dpow[i][degs[i] as usize]);
    }
    RationalFunction::new(&desc, acc, den).unwrap()
}

impl ops::Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::add(self, o)
    }
}
impl ops::Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::sub(self, o)
    }
}
impl ops::Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::mul(self, o)
    }
}
impl ops::Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(self)
    }
}

/// `k(t_1, ..., t_r)` as an arithmetic context, for linear algebra over the
/// function field itself.
#[derive(Clone, Debug)]
pub struct FunctionField {
    desc: Arc<FieldDescriptor>,
}

impl FunctionField {
    pub fn new(desc: &Arc<FieldDescriptor>) -> Self {
        FunctionField { desc: desc.clone() }
    }
}

impl Field for FunctionField {
    type Elem = RationalFunction;
    fn zero(&self) -> RationalFunction {
        RationalFunction::zero(&self.desc)
    }
    fn one(&self) -> RationalFunction {
        RationalFunction::one(&self.desc)
    }
    fn is_zero(&self, a: &RationalFunction) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.add(b)
    }
    fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.sub(b)
    }
    fn neg(&self, a: &RationalFunction) -> RationalFunction {
        a.neg()
    }
    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.mul(b)
    }
    fn inv(&self, a: &RationalFunction) -> RationalFunction {
        a.inv().expect("inverse of zero")
    }
    fn from_i64(&self, n: i64) -> RationalFunction {
        RationalFunction::from_i64(&self.desc, n)
    }
    fn characteristic(&self) -> u64 {
        self.desc.characteristic()
    }
}
