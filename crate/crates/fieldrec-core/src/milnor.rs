//! Milnor K-symbols over `F = k(t_1, ..., t_r)`, divisorial valuations with
//! their tame residue maps, nonvanishing certificates, and detection of the
//! type of the constant field.
//!
//! Symbols are kept in a multilinear, antisymmetric normal form: every entry
//! is expanded over its factorization into *atoms* (monic irreducibles and
//! a fixed set of constant generators), tuples are sorted with a sign, and
//! coefficients are reduced modulo the torsion order of any constant atom.
//! The only Steinberg-type relations used are `{a, a} = {a, -1}` and the
//! explicit patterns `⟨f, 1-f⟩`, `⟨f, -f⟩`, so equality of normal forms is
//! sound but not complete.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::arith::field::factor_u64;
use crate::arith::{Field, MPoly};
use crate::dependence::alg_dependent;
use crate::error::{Error, Result};
use crate::polyfield::kernel::{self, Poly};
use crate::polyfield::{eval_poly, ConstantField, FieldDescriptor, Polynomial, RationalFunction};

/// Generators of the normal form: constants (ordered first) and monic
/// irreducible polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Const(BigRational),
    Irr(Polynomial),
}

impl Atom {
    pub fn to_rational_function(&self, desc: &Arc<FieldDescriptor>) -> RationalFunction {
        match self {
            Atom::Const(c) => RationalFunction::constant(desc, c).expect("constant in field"),
            Atom::Irr(f) => f.to_rational_function(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Const(c) => write!(f, "{c}"),
            Atom::Irr(p) => write!(f, "{p}"),
        }
    }
}

/// Above this bound constants of `F_p` are kept as opaque atoms instead of
/// being written as powers of a primitive root.
const DLOG_LIMIT: u64 = 1 << 22;

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn primitive_root(p: u64) -> u64 {
    let qs: Vec<u64> = factor_u64(p - 1).into_iter().map(|(q, _)| q).collect();
    let powmod = |b: u64, mut e: u64| {
        let (mut acc, mut b) = (1u128, b as u128);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p as u128;
            }
            b = b * b % p as u128;
            e >>= 1;
        }
        acc as u64
    };
    (2..p).find(|&g| qs.iter().all(|&q| powmod(g, (p - 1) / q) != 1)).unwrap_or(1)
}

fn dlog(p: u64, g: u64, c: u64) -> u64 {
    let mut x = 1u64;
    for j in 0..p - 1 {
        if x == c {
            return j;
        }
        x = ((x as u128 * g as u128) % p as u128) as u64;
    }
    unreachable!("{g} is a primitive root mod {p}")
}

/// Atoms of a nonzero constant, with exponents.
fn const_atoms(desc: &FieldDescriptor, c: &BigRational) -> Vec<(Atom, i64)> {
    let mut out = Vec::new();
    match desc.characteristic() {
        0 => {
            if c.is_negative() {
                out.push((Atom::Const(big(-1)), 1));
            }
            for (n, sign) in [(c.numer().abs(), 1i64), (c.denom().clone(), -1)] {
                match n.to_u64() {
                    Some(1) => {}
                    Some(m) if m < 1u64 << 40 => {
                        for (q, e) in factor_u64(m) {
                            out.push((Atom::Const(big(q as i64)), sign * e as i64));
                        }
                    }
                    _ => out.push((Atom::Const(BigRational::from_integer(n)), sign)),
                }
            }
        }
        p => {
            let v = c.numer().to_u64().expect("reduced F_p constant");
            if v == 1 || p == 2 {
                return out;
            }
            if p < DLOG_LIMIT {
                let g = primitive_root(p);
                out.push((Atom::Const(big(g as i64)), dlog(p, g, v) as i64));
            } else {
                out.push((Atom::Const(c.clone()), 1));
            }
        }
    }
    out
}

fn minus_one(desc: &FieldDescriptor) -> Vec<(Atom, i64)> {
    let k = desc.consts();
    const_atoms(desc, &k.neg(&k.one()))
}

/// Order of the atom in `F×`, when finite.
fn torsion(desc: &FieldDescriptor, a: &Atom) -> Option<i64> {
    match (a, desc.characteristic()) {
        (Atom::Irr(_), _) => None,
        (Atom::Const(c), 0) => (*c == big(-1)).then_some(2),
        (Atom::Const(_), p) => Some(p as i64 - 1),
    }
}

/// Atoms with exponents of a nonzero element (the unit expanded as well).
fn atoms_of(x: &RationalFunction) -> Result<Vec<(Atom, i64)>> {
    let fac = x.factor()?;
    let mut out = const_atoms(x.descriptor(), &fac.unit);
    out.extend(fac.factors.into_iter().map(|(f, e)| (Atom::Irr(f), e)));
    Ok(out)
}

/// A formal Z-combination of `n`-tuples in multilinear/antisymmetric normal
/// form. Degree 0 symbols are integers (the residues of degree 1 symbols).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MilnorSymbol {
    desc: Arc<FieldDescriptor>,
    degree: usize,
    terms: BTreeMap<Vec<Atom>, i64>,
}

/// `⟨a, 1-a⟩` and `⟨a, -a⟩` anywhere in the tuple, or an entry equal to 1.
fn steinberg_pattern(xs: &[RationalFunction]) -> bool {
    if xs.iter().any(|x| x.is_one()) {
        return true;
    }
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let s = xs[i].add(&xs[j]);
            if s.is_one() || s.is_zero() {
                return true;
            }
        }
    }
    false
}

impl MilnorSymbol {
    pub fn zero(desc: &Arc<FieldDescriptor>, degree: usize) -> Self {
        MilnorSymbol { desc: desc.clone(), degree, terms: BTreeMap::new() }
    }

    /// The degree 0 symbol `n`.
    pub fn integer(desc: &Arc<FieldDescriptor>, n: i64) -> Self {
        let mut s = Self::zero(desc, 0);
        if n != 0 {
            s.terms.insert(Vec::new(), n);
        }
        s
    }

    /// `⟨x_1, ..., x_n⟩`.
    pub fn new(xs: &[RationalFunction]) -> Result<Self> {
        let first = xs.first().ok_or(Error::EmptyInput)?;
        let desc = first.descriptor().clone();
        let mut s = Self::zero(&desc, xs.len());
        s.push_entries(xs, 1)?;
        Ok(s)
    }

    fn push_entries(&mut self, xs: &[RationalFunction], coeff: i64) -> Result<()> {
        for x in xs {
            if x.descriptor() != &self.desc {
                return Err(Error::DescriptorMismatch);
            }
            if x.is_zero() {
                return Err(Error::ZeroInput);
            }
        }
        if coeff == 0 || steinberg_pattern(xs) {
            return Ok(());
        }
        let expanded = xs.iter().map(atoms_of).collect::<Result<Vec<_>>>()?;
        let mut tuples: Vec<(Vec<Atom>, i64)> = vec![(Vec::new(), coeff)];
        for entry in &expanded {
            let mut next = Vec::with_capacity(tuples.len() * entry.len());
            for (t, c) in &tuples {
                for (a, e) in entry {
                    let mut u = t.clone();
                    u.push(a.clone());
                    next.push((u, c * e));
                }
            }
            tuples = next;
        }
        for (t, c) in tuples {
            self.push_atoms(t, c);
        }
        Ok(())
    }

    fn push_atoms(&mut self, atoms: Vec<Atom>, coeff: i64) {
        let mut stack = vec![(atoms, coeff)];
        while let Some((mut a, mut c)) = stack.pop() {
            if c == 0 {
                continue;
            }
            let mut inversions = 0usize;
            for i in 0..a.len() {
                for j in i + 1..a.len() {
                    if a[i] > a[j] {
                        inversions += 1;
                    }
                }
            }
            a.sort();
            if inversions % 2 == 1 {
                c = -c;
            }
            // {f, f} = {f, -1} for irreducibles and rational primes; the
            // remaining repeats are constants whose order is already finite.
            let rewritable = |x: &Atom| match x {
                Atom::Irr(_) => true,
                Atom::Const(q) => self.desc.characteristic() == 0 && *q != big(-1),
            };
            if let Some(i) = (1..a.len()).find(|&i| a[i] == a[i - 1] && rewritable(&a[i])) {
                for (m, e) in minus_one(&self.desc) {
                    let mut b = a.clone();
                    b[i] = m;
                    stack.push((b, c * e));
                }
                continue;
            }
            let mut order = 0i64;
            for x in &a {
                if let Some(o) = torsion(&self.desc, x) {
                    order = order.gcd(&o);
                }
            }
            if a.windows(2).any(|w| w[0] == w[1]) {
                order = order.gcd(&2);
            }
            let slot = self.terms.entry(a.clone()).or_insert(0);
            *slot += c;
            if order > 0 {
                *slot = slot.rem_euclid(order);
            }
            if *slot == 0 {
                self.terms.remove(&a);
            }
        }
    }

    pub fn descriptor(&self) -> &Arc<FieldDescriptor> {
        &self.desc
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&[Atom], i64)> + '_ {
        self.terms.iter().map(|(t, c)| (t.as_slice(), *c))
    }
    /// The integer value of a degree 0 symbol.
    pub fn as_integer(&self) -> Option<i64> {
        (self.degree == 0).then(|| self.terms.values().sum())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.desc != o.desc || self.degree != o.degree {
            return Err(Error::DescriptorMismatch);
        }
        let mut s = self.clone();
        for (t, c) in &o.terms {
            s.push_atoms(t.clone(), *c);
        }
        Ok(s)
    }

    pub fn scale(&self, n: i64) -> Self {
        let mut s = Self::zero(&self.desc, self.degree);
        for (t, c) in &self.terms {
            s.push_atoms(t.clone(), c * n);
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    /// A degree 1 symbol that is nonzero in `K_1` modulo the part invisible
    /// to the declared constant field: a nonconstant class, or (over `Q`) a
    /// constant of infinite order. Finite constant fields have torsion `k×`
    /// and algebraically closed ones have divisible `k×`, so constants count
    /// as invisible there.
    pub fn is_visibly_nonzero(&self) -> bool {
        if self.degree != 1 {
            return false;
        }
        self.terms.iter().any(|(t, _)| match &t[0] {
            Atom::Irr(_) => true,
            Atom::Const(c) => self.desc.constant_field() == ConstantField::Rationals && *c != big(-1),
        })
    }
}

impl fmt::Display for MilnorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_char('0');
        }
        if self.degree == 0 {
            return write!(f, "{}", self.as_integer().unwrap_or(0));
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if *c < 0 {
                f.write_str(if i == 0 { "-" } else { " - " })?;
            } else if i > 0 {
                f.write_str(" + ")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            f.write_char('<')?;
            for (j, a) in t.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_char('>')?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    AffinePlane,
    ProjectivePlane,
    /// `P^1` in one variable over the field of the others.
    ProjectiveLine,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Center {
    /// An irreducible (monic) polynomial.
    Divisor(Polynomial),
    /// `v(f) = deg(den) - deg(num)`.
    LineAtInfinity,
    /// `v(f) = deg_{t_j}(den) - deg_{t_j}(num)`.
    InfinityAlong(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorialValuation {
    desc: Arc<FieldDescriptor>,
    model: Model,
    center: Center,
}

/// How units reduce into the residue field.
enum Reduction {
    /// Substitute `t_j = image`, landing in `k(t without t_j)`.
    Subst { j: usize, image: RationalFunction, rdesc: Arc<FieldDescriptor> },
    /// Ratio of leading coefficients in `t_j`.
    Along { j: usize, rdesc: Arc<FieldDescriptor> },
    /// Ratio of top forms at `t_1 = 1`; residue variables stand for `t_i/t_1`.
    Line { rdesc: Arc<FieldDescriptor> },
    /// A nonrational curve; classes are kept as ambient representatives.
    Curve,
}

/// Drops variable `j` from a polynomial not involving it.
fn drop_var(k: &crate::arith::ConstField, p: &Poly, j: usize) -> Poly {
    let r = p.nvars;
    let perm: Vec<usize> = (0..r).map(|i| if i > j { i - 1 } else if i == j { 0 } else { i }).collect();
    p.permute(k, r - 1, &perm)
}

impl DivisorialValuation {
    /// The valuation along the divisor `center = 0` of the affine model.
    pub fn at(center: &Polynomial) -> Result<Self> {
        if center.is_constant() {
            return Err(Error::ConstantInput);
        }
        let k = center.descriptor().consts();
        if !kernel::is_irreducible(&k, center.poly()) {
            return Err(Error::Precondition(format!("center {center} is not irreducible")));
        }
        Ok(DivisorialValuation {
            desc: center.descriptor().clone(),
            model: Model::AffinePlane,
            center: Center::Divisor(center.monic()),
        })
    }

    pub fn line_at_infinity(desc: &Arc<FieldDescriptor>) -> Self {
        DivisorialValuation { desc: desc.clone(), model: Model::ProjectivePlane, center: Center::LineAtInfinity }
    }

    pub fn infinity_along(desc: &Arc<FieldDescriptor>, j: usize) -> Result<Self> {
        if j >= desc.nvars() {
            return Err(Error::Precondition(format!("no variable with index {j}")));
        }
        Ok(DivisorialValuation { desc: desc.clone(), model: Model::ProjectiveLine, center: Center::InfinityAlong(j) })
    }

    pub fn descriptor(&self) -> &Arc<FieldDescriptor> {
        &self.desc
    }
    pub fn model(&self) -> Model {
        self.model
    }
    pub fn center(&self) -> &Center {
        &self.center
    }

    /// An element of valuation 1.
    pub fn uniformizer(&self) -> RationalFunction {
        match &self.center {
            Center::Divisor(p) => p.to_rational_function(),
            Center::LineAtInfinity => RationalFunction::var(&self.desc, 0).inv().expect("nonzero"),
            Center::InfinityAlong(j) => RationalFunction::var(&self.desc, *j).inv().expect("nonzero"),
        }
    }

    fn reduction(&self) -> Reduction {
        let k = self.desc.consts();
        match &self.center {
            Center::Divisor(pi) => {
                let r = self.desc.nvars();
                let Some(j) = (0..r).find(|&j| pi.degree_in(j) == 1) else {
                    return Reduction::Curve;
                };
                if r == 1 {
                    return Reduction::Curve;
                }
                let cs = pi.poly().coeffs_in(&k, j);
                let rdesc = self.desc.without_var(j);
                let b = drop_var(&k, &cs[0], j);
                let a = drop_var(&k, &cs[1], j);
                let image = RationalFunction::new(&rdesc, b.neg(&k), a).expect("nonzero leading coefficient");
                Reduction::Subst { j, image, rdesc }
            }
            Center::InfinityAlong(j) if self.desc.nvars() > 1 => Reduction::Along { j: *j, rdesc: self.desc.without_var(*j) },
            Center::LineAtInfinity if self.desc.nvars() > 1 => Reduction::Line { rdesc: self.desc.without_var(0) },
            _ => Reduction::Curve,
        }
    }

    /// The residue field as a rational function field, when it is one.
    pub fn residue_descriptor(&self) -> Option<Arc<FieldDescriptor>> {
        match self.reduction() {
            Reduction::Subst { rdesc, .. } | Reduction::Along { rdesc, .. } | Reduction::Line { rdesc } => Some(rdesc),
            Reduction::Curve => None,
        }
    }

    /// Residue class of an element of valuation 0, when the residue field is
    /// rational.
    pub fn reduce(&self, u: &RationalFunction) -> Result<Option<RationalFunction>> {
        if valuation(u, self)? != 0 {
            return Err(Error::Precondition(format!("{u} is not a unit at {self}")));
        }
        Ok(self.reduce_unit(&self.reduction(), u))
    }

    fn reduce_unit(&self, red: &Reduction, u: &RationalFunction) -> Option<RationalFunction> {
        let k = self.desc.consts();
        match red {
            Reduction::Subst { j, image, rdesc } => {
                let images: Vec<RationalFunction> = (0..self.desc.nvars())
                    .map(|i| match i.cmp(j) {
                        core::cmp::Ordering::Less => RationalFunction::var(rdesc, i),
                        core::cmp::Ordering::Equal => image.clone(),
                        core::cmp::Ordering::Greater => RationalFunction::var(rdesc, i - 1),
                    })
                    .collect();
                let n = eval_poly(u.num(), &images);
                let d = eval_poly(u.den(), &images);
                Some(n.div(&d).expect("unit has nonzero reduction"))
            }
            Reduction::Along { j, rdesc } => {
                let n = drop_var(&k, &u.num().lc_in(&k, *j), *j);
                let d = drop_var(&k, &u.den().lc_in(&k, *j), *j);
                Some(RationalFunction::new(rdesc, n, d).expect("nonzero leading coefficient"))
            }
            Reduction::Line { rdesc } => {
                let one = k.one();
                let n = drop_var(&k, &u.num().top_form().eval_var(&k, 0, &one), 0);
                let d = drop_var(&k, &u.den().top_form().eval_var(&k, 0, &one), 0);
                Some(RationalFunction::new(rdesc, n, d).expect("nonzero top form"))
            }
            Reduction::Curve => None,
        }
    }
}

impl fmt::Display for DivisorialValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.center {
            Center::Divisor(p) => write!(f, "{p}"),
            Center::LineAtInfinity => f.write_str("line at infinity"),
            Center::InfinityAlong(j) => write!(f, "infinity in {}", self.desc.variables()[*j]),
        }
    }
}

fn multiplicity(k: &crate::arith::ConstField, p: &Poly, pi: &Poly) -> i64 {
    let mut q = p.clone();
    let mut m = 0;
    while let Some(next) = kernel::try_div(k, &q, pi) {
        q = next;
        m += 1;
    }
    m
}

pub fn valuation(f: &RationalFunction, v: &DivisorialValuation) -> Result<i64> {
    if f.descriptor() != &v.desc {
        return Err(Error::DescriptorMismatch);
    }
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    let k = f.consts();
    Ok(match &v.center {
        Center::Divisor(pi) => multiplicity(&k, f.num(), pi.poly()) - multiplicity(&k, f.den(), pi.poly()),
        Center::LineAtInfinity => {
            f.den().total_degree().unwrap_or(0) as i64 - f.num().total_degree().unwrap_or(0) as i64
        }
        Center::InfinityAlong(j) => f.den().degree_in(*j) as i64 - f.num().degree_in(*j) as i64,
    })
}

fn atom_valuation(a: &Atom, v: &DivisorialValuation) -> i64 {
    match a {
        Atom::Const(_) => 0,
        Atom::Irr(f) => valuation(&f.to_rational_function(), v).expect("nonzero atom"),
    }
}

/// An element of the function field of a nonrational curve `π = 0`,
/// represented by an ambient unit at `π`.
#[derive(Clone, Debug)]
pub struct CurveClass {
    center: Polynomial,
    value: RationalFunction,
}

impl CurveClass {
    pub fn new(center: &Polynomial, value: &RationalFunction) -> Self {
        CurveClass { center: center.monic(), value: value.clone() }
    }
    pub fn center(&self) -> &Polynomial {
        &self.center
    }
    /// An ambient representative.
    pub fn value(&self) -> &RationalFunction {
        &self.value
    }

    /// Equality of restrictions to the curve.
    pub fn same_class(&self, o: &Self) -> bool {
        let k = self.value.consts();
        let lhs = kernel::mul(&k, self.value.num(), o.value.den());
        let rhs = kernel::mul(&k, self.value.den(), o.value.num());
        kernel::try_div(&k, &lhs.sub(&k, &rhs), self.center.poly()).is_some()
    }

    pub fn is_one(&self) -> bool {
        let k = self.value.consts();
        kernel::try_div(&k, &self.value.num().sub(&k, self.value.den()), self.center.poly()).is_some()
    }

    /// Whether the restriction is algebraic over `k` (a constant of the
    /// curve's function field). Decided for two variables by eliminating
    /// one coordinate from `π = 0, A = λ B`; `None` for more variables.
    pub fn is_algebraic_constant(&self) -> Option<bool> {
        let desc = self.center.descriptor();
        if desc.nvars() != 2 {
            return None;
        }
        let k = desc.consts();
        let (elim, keep) = if self.center.degree_in(1) > 0 { (1, 0) } else { (0, 1) };
        let pi = self.center.poly().clone().with_nvars(3);
        let a = self.value.num().clone().with_nvars(3);
        let b = self.value.den().clone().with_nvars(3);
        let lambda = MPoly::var(&k, 3, 2);
        let h = a.sub(&k, &kernel::mul(&k, &lambda, &b));
        let n = kernel::resultant(&k, &pi, &h, elim);
        if n.is_zero() {
            return Some(true);
        }
        let c = kernel::content_in(&k, &n, keep);
        Some(c.degree_in(2) > 0)
    }

    /// Nonconstant on the curve, hence nonzero modulo constants.
    pub fn is_visibly_nonzero(&self) -> bool {
        self.is_algebraic_constant() == Some(false)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] mod ({})", self.value, self.center)
    }
}

/// The value of a residue map: a symbol over a rational residue field (or
/// an integer in degree 0), or a unit on a nonrational curve.
#[derive(Clone, Debug)]
pub enum ResidueValue {
    Symbol(MilnorSymbol),
    Curve(CurveClass),
}

impl ResidueValue {
    pub fn as_symbol(&self) -> Option<&MilnorSymbol> {
        match self {
            ResidueValue::Symbol(s) => Some(s),
            ResidueValue::Curve(_) => None,
        }
    }
    pub fn is_visibly_nonzero(&self) -> bool {
        match self {
            ResidueValue::Symbol(s) => s.is_visibly_nonzero(),
            ResidueValue::Curve(c) => c.is_visibly_nonzero(),
        }
    }
    fn same(&self, o: &Self) -> bool {
        match (self, o) {
            (ResidueValue::Symbol(a), ResidueValue::Symbol(b)) => a == b,
            (ResidueValue::Curve(a), ResidueValue::Curve(b)) => a.center == b.center && a.same_class(b),
            _ => false,
        }
    }
}

impl fmt::Display for ResidueValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueValue::Symbol(s) => write!(f, "{s}"),
            ResidueValue::Curve(c) => write!(f, "{c}"),
        }
    }
}

/// Tame residue `∂_v : K_n(F) → K_{n-1}(κ(v))`, normalized so that
/// `∂_v⟨π, u⟩ = ⟨ū⟩` for a uniformizer `π` and a unit `u`.
///
/// Each tuple `⟨π^{v_1} u_1, ..., π^{v_n} u_n⟩` is expanded multilinearly;
/// a subset `S` of positions carrying `π` contributes
/// `(-1)^{i_0} ∏_{i∈S} v_i ⟨..., ū_i, ..., -1, ...⟩` with `i_0 = min S`
/// removed and the other positions of `S` replaced by `-1`.
pub fn residue(s: &MilnorSymbol, v: &DivisorialValuation) -> Result<ResidueValue> {
    if s.desc != v.desc {
        return Err(Error::DescriptorMismatch);
    }
    let n = s.degree;
    if n == 0 {
        return Err(Error::UnsupportedDegree(0));
    }
    let red = v.reduction();
    let pi = v.uniformizer();
    let k = s.desc.consts();
    let minus = RationalFunction::constant(&s.desc, &k.neg(&k.one())).expect("-1");

    // Contributions as (entries in ambient units, coefficient).
    let mut contributions: Vec<(Vec<RationalFunction>, i64)> = Vec::new();
    for (atoms, c) in &s.terms {
        let vals: Vec<i64> = atoms.iter().map(|a| atom_valuation(a, v)).collect();
        let ramified: Vec<usize> = (0..n).filter(|&i| vals[i] != 0).collect();
        if ramified.is_empty() {
            continue;
        }
        let units: Vec<RationalFunction> = atoms
            .iter()
            .zip(&vals)
            .map(|(a, &e)| a.to_rational_function(&s.desc).mul(&pi.pow(-e).expect("nonzero")))
            .collect();
        for mask in 1u32..(1 << ramified.len()) {
            let set: Vec<usize> = (0..ramified.len()).filter(|b| mask >> b & 1 == 1).map(|b| ramified[b]).collect();
            let i0 = set[0];
            let mut coeff = *c * if i0 % 2 == 0 { 1 } else { -1 };
            for &i in &set {
                coeff *= vals[i];
            }
            let entries: Vec<RationalFunction> = (0..n)
                .filter(|&i| i != i0)
                .map(|i| if set.contains(&i) { minus.clone() } else { units[i].clone() })
                .collect();
            contributions.push((entries, coeff));
        }
    }

    if n == 1 {
        let total: i64 = contributions.iter().map(|(_, c)| c).sum();
        let rdesc = v.residue_descriptor().unwrap_or_else(|| s.desc.clone());
        return Ok(ResidueValue::Symbol(MilnorSymbol::integer(&rdesc, total)));
    }
    match red {
        Reduction::Curve => {
            if n != 2 {
                return Err(Error::UnsupportedDegree(n));
            }
            let Center::Divisor(center) = &v.center else { unreachable!("curve reductions come from divisors") };
            let mut value = RationalFunction::one(&s.desc);
            for (entries, c) in &contributions {
                value = value.mul(&entries[0].pow(*c)?);
            }
            Ok(ResidueValue::Curve(CurveClass { center: center.clone(), value }))
        }
        ref red => {
            let rdesc = v.residue_descriptor().expect("rational residue field");
            let mut out = MilnorSymbol::zero(&rdesc, n - 1);
            for (entries, c) in &contributions {
                let reduced: Vec<RationalFunction> = entries
                    .iter()
                    .map(|u| v.reduce_unit(red, u).expect("rational reduction"))
                    .collect();
                out.push_entries(&reduced, *c)?;
            }
            Ok(ResidueValue::Symbol(out))
        }
    }
}

/// Divisors from the factorizations of `xs`, then the divisors at infinity.
fn candidate_valuations(xs: &[RationalFunction]) -> Result<Vec<DivisorialValuation>> {
    let desc = xs[0].descriptor().clone();
    let mut centers: Vec<Polynomial> = Vec::new();
    for x in xs {
        for (f, _) in x.factor()?.factors {
            centers.push(f);
        }
    }
    // Low degree first (linear centers have rational residue fields), then
    // by descending monomial order so that `t1` precedes `t2`.
    centers.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| b.cmp(a)));
    centers.dedup();
    let mut out: Vec<DivisorialValuation> = centers
        .into_iter()
        .map(|c| DivisorialValuation { desc: desc.clone(), model: Model::AffinePlane, center: Center::Divisor(c) })
        .collect();
    for j in 0..desc.nvars() {
        out.push(DivisorialValuation { desc: desc.clone(), model: Model::ProjectiveLine, center: Center::InfinityAlong(j) });
    }
    out.push(DivisorialValuation::line_at_infinity(&desc));
    Ok(out)
}

/// A valuation with `v(x_1) ≠ 0`, `v(x_i) = 0` for `i ≥ 2`, and residues of
/// `x_2, ..., x_n` algebraically independent over `k`. Searched among the
/// divisors of `x_1` and the divisors at infinity, in that order.
pub fn find_witness_valuation(xs: &[RationalFunction]) -> Result<Option<DivisorialValuation>> {
    let first = xs.first().ok_or(Error::EmptyInput)?;
    for x in xs {
        first.same_field(x)?;
        if x.is_zero() {
            return Err(Error::ZeroInput);
        }
    }
    let n = xs.len();
    if n > first.descriptor().nvars() {
        return Ok(None);
    }
    'candidates: for v in candidate_valuations(&xs[..1])? {
        if valuation(&xs[0], &v)? == 0 {
            continue;
        }
        for x in &xs[1..] {
            if valuation(x, &v)? != 0 {
                continue 'candidates;
            }
        }
        let red = v.reduction();
        let ok = match (&red, n) {
            (_, 1) => true,
            (Reduction::Curve, 2) => {
                let Center::Divisor(c) = &v.center else { unreachable!("curve reductions come from divisors") };
                CurveClass { center: c.clone(), value: xs[1].clone() }.is_visibly_nonzero()
            }
            (Reduction::Curve, _) => false,
            (red, _) => {
                let bars: Vec<RationalFunction> =
                    xs[1..].iter().map(|x| v.reduce_unit(red, x).expect("rational reduction")).collect();
                match bars.len() {
                    1 => !bars[0].is_constant(),
                    2 => !bars[0].is_constant() && !bars[1].is_constant() && !alg_dependent(&bars[0], &bars[1])?,
                    _ => false,
                }
            }
        };
        if ok {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Which quotient of Milnor K-theory a certificate speaks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quotient {
    /// `K^M_n(F)` itself (constant field `Q` or `F_p`).
    Full,
    /// Modulo divisible elements, for algebraically closed constants.
    Divisible,
    /// Modulo torsion, for finite constants.
    Torsion,
}

impl Quotient {
    fn of(desc: &FieldDescriptor) -> Self {
        match desc.constant_field() {
            ConstantField::DeclaredAlgClosed { .. } => Quotient::Divisible,
            ConstantField::DeclaredFinite { .. } => Quotient::Torsion,
            _ => Quotient::Full,
        }
    }
    pub fn tag(&self) -> &'static str {
        match self {
            Quotient::Full => "K^M",
            Quotient::Divisible => "K-bar^{1,M}",
            Quotient::Torsion => "K-bar^{2,M}",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ResidueStep {
    pub valuation: DivisorialValuation,
    /// The symbol after applying this residue.
    pub residue: ResidueValue,
}

/// Valuations whose iterated residues send a symbol to a visibly nonzero
/// degree 1 class.
#[derive(Clone, Debug)]
pub struct ResidueChain {
    pub steps: Vec<ResidueStep>,
    pub quotient: Quotient,
}

impl ResidueChain {
    pub fn terminal(&self) -> Option<&ResidueValue> {
        self.steps.last().map(|s| &s.residue)
    }

    pub fn terminal_text(&self, s: &MilnorSymbol) -> String {
        match self.terminal() {
            Some(t) => t.to_string(),
            None => s.to_string(),
        }
    }

    /// Recomputes every residue from `s` and checks the terminal class.
    pub fn replay(&self, s: &MilnorSymbol) -> bool {
        let mut cur = ResidueValue::Symbol(s.clone());
        for step in &self.steps {
            let ResidueValue::Symbol(sym) = &cur else { return false };
            match residue(sym, &step.valuation) {
                Ok(next) if next.same(&step.residue) => cur = next,
                _ => return false,
            }
        }
        cur.is_visibly_nonzero()
    }
}

/// Searches for a chain of residues ending in a visibly nonzero degree 1
/// class. `None` means the search failed, not that `s` vanishes.
pub fn nonvanishing_certificate(s: &MilnorSymbol) -> Result<Option<ResidueChain>> {
    if s.degree == 0 || s.degree > 3 {
        return Err(Error::UnsupportedDegree(s.degree));
    }
    let quotient = Quotient::of(&s.desc);
    Ok(search_chain(s)?.map(|steps| ResidueChain { steps, quotient }))
}

fn search_chain(s: &MilnorSymbol) -> Result<Option<Vec<ResidueStep>>> {
    if s.degree == 1 {
        return Ok(s.is_visibly_nonzero().then(Vec::new));
    }
    if s.is_zero() {
        return Ok(None);
    }
    let mut irreducibles: Vec<RationalFunction> = Vec::new();
    for (t, _) in s.terms() {
        for a in t {
            if let Atom::Irr(f) = a {
                irreducibles.push(f.to_rational_function());
            }
        }
    }
    irreducibles.sort();
    irreducibles.dedup();
    let mut cands = if irreducibles.is_empty() {
        Vec::new()
    } else {
        candidate_valuations(&irreducibles)?
    };
    if cands.is_empty() {
        for j in 0..s.desc.nvars() {
            cands.push(DivisorialValuation::infinity_along(&s.desc, j)?);
        }
        cands.push(DivisorialValuation::line_at_infinity(&s.desc));
    }
    for v in cands {
        if s.degree > 2 && matches!(v.reduction(), Reduction::Curve) {
            continue;
        }
        let r = residue(s, &v)?;
        match &r {
            ResidueValue::Curve(c) => {
                if c.is_visibly_nonzero() {
                    return Ok(Some(vec![ResidueStep { valuation: v, residue: r }]));
                }
            }
            ResidueValue::Symbol(t) => {
                if let Some(rest) = search_chain(t)? {
                    let mut steps = vec![ResidueStep { valuation: v, residue: r.clone() }];
                    steps.extend(rest);
                    return Ok(Some(steps));
                }
            }
        }
    }
    Ok(None)
}

/// The two kinds of constant fields the reconstruction handles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TypeInfo {
    /// 1: `k×` has infinite torsion; 2: `k×` has finite torsion.
    pub kind: u8,
    pub characteristic: u64,
}

/// Type of the declared constant field: finite `k×` torsion gives type 2
/// with `p` the prime whose power is `|k×| + 1`; infinite torsion gives
/// type 1 with `p` the unique prime for which multiplication by `p` is an
/// isomorphism of `k×` (or 0 if there is none).
pub fn detect_type(desc: &FieldDescriptor) -> Result<TypeInfo> {
    match desc.constant_field() {
        ConstantField::DeclaredFinite { q } => {
            let ps = factor_u64(q);
            if ps.len() != 1 {
                return Err(Error::NeitherType(format!("|k×| + 1 = {q} is not a prime power")));
            }
            Ok(TypeInfo { kind: 2, characteristic: ps[0].0 })
        }
        ConstantField::DeclaredAlgClosed { characteristic } => Ok(TypeInfo { kind: 1, characteristic }),
        ConstantField::Rationals => {
            Err(Error::NeitherType("Q× has finite torsion but |k×| is infinite; no type applies".to_string()))
        }
        ConstantField::PrimeField(p) => Err(Error::NeitherType(format!(
            "F{p} is not declared finite or algebraically closed; declare it as finite:{p}"
        ))),
    }
}
