//! Recovering a field isomorphism `Φ: F → F′` from a group isomorphism
//! `ψ: F×/k× → F′×/k′×` that preserves algebraic dependence.
//!
//! The engine pins the power `m` with `ψ^m` mapping `F^p`-lines to lines,
//! reads off `Φ(x)` as the unique representative of `ψ^m(x̄)` with
//! `ψ^m(1+x) = 1 + Φ(x)` up to constants, and then checks additivity,
//! multiplicativity, uniqueness and the sign `ε` with `ψ = Φ^ε` on
//! seeded samples.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{Field, MPoly};
use crate::arith::mpoly::Mono;
use crate::dependence::MultClass;
use crate::differentials::independent;
use crate::error::{Error, Result, Stage};
use crate::lines::{line_image_power_test, mcond_range, shift_to_good, solve_constants};
use crate::polyfield::{FieldDescriptor, RationalFunction};

/// A field morphism `k(t_1..t_r) → k(t′_1..t′_s)` fixing constants, given by
/// the images of the variables. Prime fields and `Q` have no other
/// automorphisms, so the constant map is always the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldMorphism {
    domain: Arc<FieldDescriptor>,
    codomain: Arc<FieldDescriptor>,
    images: Vec<RationalFunction>,
}

impl FieldMorphism {
    /// Fails unless there is one image per variable, all in `codomain`,
    /// with independent differentials (so the map is injective).
    pub fn new(domain: &Arc<FieldDescriptor>, codomain: &Arc<FieldDescriptor>, images: Vec<RationalFunction>) -> Result<Self> {
        if domain.consts() != codomain.consts() {
            return Err(Error::DescriptorMismatch);
        }
        if images.len() != domain.nvars() {
            return Err(Error::Precondition(format!("expected {} images, got {}", domain.nvars(), images.len())));
        }
        if images.iter().any(|im| im.descriptor() != codomain) {
            return Err(Error::DescriptorMismatch);
        }
        if !independent(&images)? {
            return Err(Error::Precondition("images have dependent differentials".into()));
        }
        Ok(FieldMorphism { domain: domain.clone(), codomain: codomain.clone(), images })
    }

    pub fn identity(desc: &Arc<FieldDescriptor>) -> Self {
        FieldMorphism { domain: desc.clone(), codomain: desc.clone(), images: RationalFunction::vars(desc) }
    }

    pub fn parse<S: AsRef<str>>(domain: &Arc<FieldDescriptor>, codomain: &Arc<FieldDescriptor>, images: &[S]) -> Result<Self> {
        let images = images.iter().map(|s| RationalFunction::parse(s.as_ref(), codomain)).collect::<Result<Vec<_>>>()?;
        Self::new(domain, codomain, images)
    }

    pub fn domain(&self) -> &Arc<FieldDescriptor> {
        &self.domain
    }
    pub fn codomain(&self) -> &Arc<FieldDescriptor> {
        &self.codomain
    }
    pub fn images(&self) -> &[RationalFunction] {
        &self.images
    }

    pub fn apply(&self, x: &RationalFunction) -> Result<RationalFunction> {
        if x.descriptor() != &self.domain {
            return Err(Error::DescriptorMismatch);
        }
        if x.is_constant() {
            return x.rebase(&self.codomain);
        }
        x.compose(&self.images)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FieldMorphism) -> Result<FieldMorphism> {
        if next.domain != self.codomain {
            return Err(Error::DescriptorMismatch);
        }
        let images = self.images.iter().map(|im| next.apply(im)).collect::<Result<Vec<_>>>()?;
        Ok(FieldMorphism { domain: self.domain.clone(), codomain: next.codomain.clone(), images })
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.codomain && self.images == RationalFunction::vars(&self.domain)
    }

    /// Both composites are the identity.
    pub fn is_inverse_of(&self, other: &FieldMorphism) -> Result<bool> {
        Ok(self.then(other)?.is_identity() && other.then(self)?.is_identity())
    }
}

impl fmt::Display for FieldMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, im)) in self.domain.variables().iter().zip(&self.images).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} -> {im}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Claims {
    pub preserves_dependence: bool,
    pub is_isomorphism: bool,
}

/// A group morphism `F×/k× → F′×/k′×`, presented through representatives.
///
/// `query_rep` may return any representative of the image class, but it
/// must be a function of the class of its argument.
pub trait Oracle: Sync {
    fn domain(&self) -> &Arc<FieldDescriptor>;
    fn codomain(&self) -> &Arc<FieldDescriptor>;
    fn claims(&self) -> Claims {
        Claims { preserves_dependence: true, is_isomorphism: true }
    }
    fn query_rep(&self, x: &RationalFunction) -> Result<RationalFunction>;
    fn query(&self, c: &MultClass) -> Result<MultClass> {
        MultClass::of(&self.query_rep(&c.representative())?)
    }
}

/// `ψ^m` for an oracle `ψ`.
pub struct PowerOracle<'a> {
    inner: &'a dyn Oracle,
    m: i64,
}

impl<'a> PowerOracle<'a> {
    pub fn new(inner: &'a dyn Oracle, m: i64) -> Self {
        PowerOracle { inner, m }
    }
}

impl Oracle for PowerOracle<'_> {
    fn domain(&self) -> &Arc<FieldDescriptor> {
        self.inner.domain()
    }
    fn codomain(&self) -> &Arc<FieldDescriptor> {
        self.inner.codomain()
    }
    fn claims(&self) -> Claims {
        self.inner.claims()
    }
    fn query_rep(&self, x: &RationalFunction) -> Result<RationalFunction> {
        self.inner.query_rep(x)?.pow(self.m)
    }
}

/// The representative of the class of `x` with monic numerator and
/// denominator.
pub fn class_representative(x: &RationalFunction) -> Result<RationalFunction> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let k = x.consts();
    Ok(x.scale(&k.inv(&x.num().lc(&k))))
}

fn fnv1a(bytes: &[u8], key: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in key.to_le_bytes().iter().chain(bytes) {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn nonzero_constant(desc: &FieldDescriptor, rng: &mut ChaCha8Rng) -> BigRational {
    match desc.characteristic() {
        0 => {
            let n = rng.gen_range(1..=9i64) * if rng.gen_bool(0.5) { -1 } else { 1 };
            BigRational::new(BigInt::from(n), BigInt::from(rng.gen_range(1..=9i64)))
        }
        p => BigRational::from_integer(BigInt::from(rng.gen_range(1..p))),
    }
}

/// `x̄ ↦ overline{σ(x)^e}`, answered with a constant multiple of the image
/// drawn from a keyed hash of the class, so that the answer depends on the
/// class only. An optional corrupted class gets an extra factor.
#[derive(Clone, Debug)]
pub struct HiddenMapOracle {
    sigma: FieldMorphism,
    exponent: i64,
    key: u64,
    corrupt: Option<String>,
}

impl HiddenMapOracle {
    /// `ψ = σ̄^ε`.
    pub fn new(sigma: FieldMorphism, sign: i64, key: u64) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::Precondition(format!("sign must be ±1, got {sign}")));
        }
        Ok(HiddenMapOracle { sigma, exponent: sign, key, corrupt: None })
    }

    /// Synthetic oracle `ψ = σ̄^n` with `n·m ≡ 1 (mod p)`, so that `ψ^m`
    /// agrees with `σ̄` modulo `p`-th powers. Needs `p > 2` and `m` in the
    /// admissible range.
    pub fn twisted(sigma: FieldMorphism, m: i64, key: u64) -> Result<Self> {
        let p = sigma.domain().characteristic();
        crate::lines::check_mcond(m, p)?;
        if p <= 2 {
            return Err(Error::Precondition("twisted oracles need p > 2".into()));
        }
        let p = p as i64;
        let n = (1..p).find(|n| (n * m).rem_euclid(p) == 1).expect("m is a unit mod p");
        Ok(HiddenMapOracle { sigma, exponent: n, key, corrupt: None })
    }

    /// The same map with the answer on the class of `x` corrupted.
    pub fn corrupted_at(mut self, x: &RationalFunction) -> Result<Self> {
        self.corrupt = Some(format!("{}", class_representative(x)?));
        Ok(self)
    }

    /// The oracle of `σ^{-1}` with the same sign and key.
    pub fn inverse(&self, sigma_inv: &FieldMorphism) -> Result<Self> {
        if !sigma_inv.is_inverse_of(&self.sigma)? {
            return Err(Error::Precondition("not an inverse of the hidden map".into()));
        }
        Ok(HiddenMapOracle { sigma: sigma_inv.clone(), exponent: self.exponent, key: self.key, corrupt: None })
    }

    pub fn sigma(&self) -> &FieldMorphism {
        &self.sigma
    }
    pub fn exponent(&self) -> i64 {
        self.exponent
    }
}

impl Oracle for HiddenMapOracle {
    fn domain(&self) -> &Arc<FieldDescriptor> {
        self.sigma.domain()
    }
    fn codomain(&self) -> &Arc<FieldDescriptor> {
        self.sigma.codomain()
    }
    fn query_rep(&self, x: &RationalFunction) -> Result<RationalFunction> {
        let rep = class_representative(x)?;
        let text = format!("{rep}");
        let mut rng = ChaCha8Rng::seed_from_u64(fnv1a(text.as_bytes(), self.key));
        let c = nonzero_constant(self.codomain(), &mut rng);
        let mut y = self.sigma.apply(&rep)?.pow(self.exponent)?.scale(&c);
        if self.corrupt.as_deref() == Some(text.as_str()) {
            let shift = RationalFunction::constant(self.codomain(), &nonzero_constant(self.codomain(), &mut rng))?;
            y = y.mul(&RationalFunction::var(self.codomain(), 0).add(&shift));
        }
        Ok(y)
    }
}

/// Seeded sample element: a polynomial of degree at most 2 with up to
/// three terms, divided by another one a third of the time. Never constant.
pub fn sample_element<R: Rng>(desc: &Arc<FieldDescriptor>, rng: &mut R) -> RationalFunction {
    let k = desc.consts();
    let r = desc.nvars();
    let p = desc.characteristic();
    let poly = |rng: &mut R| loop {
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let mut m = Mono::ONE;
            for _ in 0..rng.gen_range(0..=2) {
                m.0[rng.gen_range(0..r)] += 1;
            }
            let c = match p {
                0 => rng.gen_range(1..=5i64) * if rng.gen_bool(0.5) { -1 } else { 1 },
                p => rng.gen_range(1..p as i64),
            };
            terms.push((m, k.from_i64(c)));
        }
        let f = MPoly::from_terms(&k, r, terms);
        if !f.is_zero() {
            return RationalFunction::from_poly(desc, f);
        }
    };
    loop {
        let mut x = poly(rng);
        if rng.gen_bool(1.0 / 3.0) {
            x = x.div(&poly(rng)).expect("nonzero divisor");
        }
        if !x.is_constant() {
            return x;
        }
    }
}

/// The unique `Φ(x)` in the class `ψ(x̄)` with `ψ(overline{1+x}) =
/// overline{1 + Φ(x)}`, found by solving `λ·w = 1 + a·u` over constants.
/// `oracle` is expected to be the already power-normalized `ψ^m`.
pub fn phi_on_element(oracle: &dyn Oracle, x: &RationalFunction) -> Result<RationalFunction> {
    if x.descriptor() != oracle.domain() {
        return Err(Error::DescriptorMismatch);
    }
    if x.is_constant() {
        return Err(Error::ConstantInput);
    }
    let one = RationalFunction::one(x.descriptor());
    let u = oracle.query_rep(x)?;
    let w = oracle.query_rep(&one.add(x))?;
    let fail = || Error::stage_at(Stage::PhiOnElement, "no constants λ, a with λ·w = 1 + a·u", format!("{x}"));
    let sol = solve_constants(&[w, u.clone()], &RationalFunction::one(oracle.codomain())).ok_or_else(fail)?;
    let k = x.consts();
    if k.is_zero(&sol[0]) || k.is_zero(&sol[1]) {
        return Err(fail());
    }
    Ok(u.scale(&k.neg(&sol[1])))
}

/// `Φ` extended to constants by the identity; see [`phi_on_constants`].
fn phi_any(oracle: &dyn Oracle, x: &RationalFunction) -> Result<RationalFunction> {
    if x.is_constant() {
        x.rebase(oracle.codomain())
    } else {
        phi_on_element(oracle, x)
    }
}

/// `Φ_x(α) = Φ(αx)/Φ(x)`, checked to be a constant and to agree with the
/// value at the second base point `1 + x`.
pub fn phi_on_constants(oracle: &dyn Oracle, x: &RationalFunction, alpha: &BigRational) -> Result<BigRational> {
    let desc = x.descriptor();
    let k = x.consts();
    if k.is_zero(alpha) {
        return Err(Error::ZeroInput);
    }
    let a = RationalFunction::constant(desc, alpha)?;
    let at = |base: &RationalFunction| -> Result<BigRational> {
        let q = phi_on_element(oracle, &a.mul(base))?.div(&phi_on_element(oracle, base)?)?;
        q.constant_value()
            .ok_or_else(|| Error::stage_at(Stage::PhiOnConstants, "Φ(αx)/Φ(x) is not constant", format!("{}", a.mul(base))))
    };
    let v = at(x)?;
    let y = RationalFunction::one(desc).add(x);
    if !y.is_constant() && at(&y)? != v {
        return Err(Error::stage_at(Stage::PhiOnConstants, format!("Φ_x({alpha}) depends on the base point"), format!("{y}")));
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub seed: u64,
    /// Attempt budget for `shift_to_good` when building line probes.
    pub probe_budget: usize,
    /// Random pairs for the additivity and multiplicativity checks.
    pub relation_pairs: usize,
    /// Random classes for the sign check and for the final verification.
    pub sign_sample: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { seed: 0, probe_budget: 64, relation_pairs: 25, sign_sample: 12 }
    }
}

fn need_two_vars(desc: &FieldDescriptor) -> Result<()> {
    if desc.nvars() < 2 {
        return Err(Error::Precondition("reconstruction needs transcendence degree ≥ 2".into()));
    }
    Ok(())
}

/// Good pairs `(x1, x2)` and points `z` of `l_{F^p}(x1, x2)` used to pin
/// the power.
fn line_probes(desc: &Arc<FieldDescriptor>, budget: usize) -> Result<Vec<(RationalFunction, RationalFunction, Vec<RationalFunction>)>> {
    let p = desc.characteristic();
    let t = RationalFunction::vars(desc);
    let s = t[0].add(&t[1]);
    let y = shift_to_good(&s, budget)?;
    let pairs = [(t[0].clone(), t[1].clone()), (t[1].clone(), t[0].clone()), (y.clone(), s.mul(&y))];
    let mut coeffs: Vec<RationalFunction> = vec![RationalFunction::one(desc)];
    if p != 2 {
        coeffs.push(RationalFunction::from_i64(desc, 2));
        coeffs.push(RationalFunction::from_i64(desc, -1));
    }
    if p > 0 {
        coeffs.push(t[0].pow(p as i64)?);
        coeffs.push(RationalFunction::one(desc).add(&t[1].pow(p as i64)?));
    }
    Ok(pairs
        .into_iter()
        .map(|(x1, x2)| {
            let zs = coeffs.iter().map(|c| x1.add(&c.mul(&x2))).filter(|z| !z.is_zero()).collect();
            (x1, x2, zs)
        })
        .collect())
}

/// Powers in the admissible range under which `ψ^m` maps every probe
/// line to a line. In characteristic 2 both signs always pass, since
/// `z^{-1} ≡ z` modulo squares.
fn power_candidates(oracle: &dyn Oracle, cfg: &EngineConfig) -> Result<(Vec<i64>, usize)> {
    let desc = oracle.domain();
    let p = desc.characteristic();
    let probes = line_probes(desc, cfg.probe_budget)?;
    let mut answered = Vec::new();
    for (x1, x2, zs) in &probes {
        let pairs = zs.iter().map(|z| Ok((z.clone(), oracle.query_rep(z)?))).collect::<Result<Vec<_>>>()?;
        answered.push(((x1.clone(), oracle.query_rep(x1)?), (x2.clone(), oracle.query_rep(x2)?), pairs));
    }
    let mut passing = Vec::new();
    let mut first_failure: Option<String> = None;
    let mut count = 0;
    for m in mcond_range(p) {
        let mut ok = true;
        for (a, b, pairs) in &answered {
            count += pairs.len();
            if !line_image_power_test(pairs, (&a.0, &a.1), (&b.0, &b.1), m)? {
                if first_failure.is_none() {
                    first_failure = Some(format!("l({}, {})", a.0, b.0));
                }
                ok = false;
                break;
            }
        }
        if ok {
            passing.push(m);
        }
    }
    match passing.len() {
        0 => Err(Error::stage_at(
            Stage::ResolvePower,
            "no admissible power maps the probe lines to lines",
            first_failure.unwrap_or_default(),
        )),
        1 => Ok((passing, count)),
        2 if p == 2 => Ok((passing, count)),
        _ => Err(Error::stage(Stage::ResolvePower, format!("several powers pass the line test: {passing:?}"))),
    }
}

/// The power `m` with `ψ^m` preserving `F^p`-lines. In characteristic 2
/// the test cannot separate `m` from `-m`; `1` is returned and the sign is
/// settled by [`descend_sign`].
pub fn resolve_power(oracle: &dyn Oracle, cfg: &EngineConfig) -> Result<i64> {
    need_two_vars(oracle.domain())?;
    Ok(power_candidates(oracle, cfg)?.0[0])
}

fn sign_primes(p: u64) -> (u64, u64) {
    let primes = [2u64, 3, 5, 7, 11, 13];
    for &a in &primes {
        for &b in &primes {
            if a != b && a != p && b != p && a % b != 1 {
                return (a, b);
            }
        }
    }
    unreachable!("small primes always contain a valid pair")
}

/// Fixed power probes preceding the random part of the sign sample.
const SIGN_POWER_PROBES: usize = 3;

fn sign_sample(desc: &Arc<FieldDescriptor>, n: usize, seed: u64) -> Result<Vec<RationalFunction>> {
    let (p1, p2) = sign_primes(desc.characteristic());
    let t = RationalFunction::vars(desc);
    let base = RationalFunction::one(desc).add(&t[0]).add(&t[1]);
    let mut out = vec![base.pow(p1 as i64)?, base.pow(p2 as i64)?, t[0].mul(&t[1].pow(p1 as i64)?)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.extend((0..n).map(|_| sample_element(desc, &mut rng)));
    Ok(out)
}

/// Whether `ψ(x̄) = Φ̄(x̄)^ε`, i.e. `ψ(x)/Φ(x)^ε` is constant.
fn sign_holds(oracle: &dyn Oracle, phi: &FieldMorphism, x: &RationalFunction, eps: i64) -> Result<bool> {
    Ok(oracle.query_rep(x)?.div(&phi.apply(x)?.pow(eps)?)?.is_constant())
}

/// The sign `ε` with `ψ̄ = Φ̄^ε` on a sample including the powers `x^{p′}`,
/// `x^{p″}` for primes `p′, p″ ≠ p` with `p′ ≢ 1 (mod p″)`. Tries the sign of
/// `m` first.
pub fn descend_sign(oracle: &dyn Oracle, phi: &FieldMorphism, m: i64, cfg: &EngineConfig) -> Result<i64> {
    let sample = sign_sample(oracle.domain(), cfg.sign_sample, cfg.seed ^ 0x5167)?;
    let first = if m < 0 { -1 } else { 1 };
    let mut failures: Vec<(i64, usize, String)> = Vec::new();
    for eps in [first, -first] {
        let mut bad = Vec::new();
        for x in &sample {
            if !sign_holds(oracle, phi, x, eps)? {
                bad.push(format!("{x}"));
            }
        }
        if bad.is_empty() {
            return Ok(eps);
        }
        failures.push((eps, bad.len(), bad.swap_remove(0)));
    }
    failures.sort_by_key(|f| f.1);
    let (eps, n, class) = failures.swap_remove(0);
    Err(Error::stage_at(Stage::DescendSign, format!("neither sign verifies; ε = {eps} fails on {n} sample classes"), class))
}

/// Passed checks per stage of a successful run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckCounts {
    pub line_probes: usize,
    pub constants: usize,
    pub additivity: usize,
    pub multiplicativity: usize,
    pub uniqueness: usize,
    pub sign_sample: usize,
    pub verification: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    pub morphism: FieldMorphism,
    pub sign: i64,
    pub power: i64,
    pub checks: CheckCounts,
    /// Elapsed clock units per stage, when a clock was supplied.
    pub timings: Vec<(Stage, u64)>,
}

struct Timer<'a> {
    clock: Option<&'a dyn Fn() -> u64>,
    last: u64,
    out: Vec<(Stage, u64)>,
}

impl Timer<'_> {
    fn lap(&mut self, stage: Stage) {
        if let Some(c) = self.clock {
            let now = c();
            self.out.push((stage, now.saturating_sub(self.last)));
            self.last = now;
        }
    }
}

/// `Φ` on the variables, the constant check and the degenerate-image guard.
fn assemble(psi_m: &dyn Oracle, checks: &mut CheckCounts, timer: &mut Timer<'_>) -> Result<FieldMorphism> {
    let desc = psi_m.domain();
    let t = RationalFunction::vars(desc);
    let images = t.iter().map(|x| phi_on_element(psi_m, x)).collect::<Result<Vec<_>>>()?;
    timer.lap(Stage::PhiOnElement);
    let p = desc.characteristic();
    let alphas: Vec<BigRational> = match p {
        0 => vec![BigRational::from_integer(2.into()), BigRational::from_integer((-3).into()), BigRational::new(1.into(), 2.into())],
        p => (2..p.min(5)).map(|a| BigRational::from_integer(a.into())).collect(),
    };
    for a in &alphas {
        let v = phi_on_constants(psi_m, &t[0], a)?;
        if &v != a {
            return Err(Error::stage_at(Stage::PhiOnConstants, format!("Φ({a}) = {v} ≠ {a}"), format!("{}", t[0])));
        }
        checks.constants += 1;
    }
    timer.lap(Stage::PhiOnConstants);
    if !independent(&images)? {
        return Err(Error::stage(Stage::DegenerateGuard, "images of the variables have dependent differentials"));
    }
    timer.lap(Stage::DegenerateGuard);
    FieldMorphism::new(desc, psi_m.codomain(), images).map_err(|e| Error::stage(Stage::Assemble, format!("{e}")))
}

/// Additivity and multiplicativity of the pointwise `Φ` on seeded pairs.
fn relation_checks(
    psi_m: &dyn Oracle,
    phi: &FieldMorphism,
    cfg: &EngineConfig,
    checks: &mut CheckCounts,
    timer: &mut Timer<'_>,
) -> Result<()> {
    let desc = psi_m.domain();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xadd);
    let pairs: Vec<_> = (0..cfg.relation_pairs).map(|_| (sample_element(desc, &mut rng), sample_element(desc, &mut rng))).collect();
    let mut values = Vec::with_capacity(pairs.len());
    for (x, y) in &pairs {
        let (px, py) = (phi_on_element(psi_m, x)?, phi_on_element(psi_m, y)?);
        for (z, pz) in [(x, &px), (y, &py)] {
            if phi.apply(z)? != *pz {
                return Err(Error::stage_at(Stage::Additivity, "pointwise Φ disagrees with the assembled map", format!("{z}")));
            }
        }
        if phi_any(psi_m, &x.add(y))? != px.add(&py) {
            return Err(Error::stage_at(Stage::Additivity, "Φ(x+y) ≠ Φ(x) + Φ(y)", format!("{} + {}", x, y)));
        }
        checks.additivity += 1;
        values.push((px, py));
    }
    timer.lap(Stage::Additivity);
    for ((x, y), (px, py)) in pairs.iter().zip(&values) {
        if phi_any(psi_m, &x.mul(y))? != px.mul(py) {
            return Err(Error::stage_at(Stage::Multiplicativity, "Φ(xy) ≠ Φ(x)·Φ(y)", format!("({x})*({y})")));
        }
        checks.multiplicativity += 1;
    }
    timer.lap(Stage::Multiplicativity);
    Ok(())
}

/// The probe elements every successful run queries: `t_i`, `t_i·t_j`,
/// `t_i + t_j` (and the shifts by 1 used alongside them).
pub fn probe_set(desc: &Arc<FieldDescriptor>) -> Vec<RationalFunction> {
    let t = RationalFunction::vars(desc);
    let one = RationalFunction::one(desc);
    let mut out = Vec::new();
    for (i, ti) in t.iter().enumerate() {
        out.push(ti.clone());
        out.push(one.add(ti));
        for tj in &t[i + 1..] {
            for x in [ti.mul(tj), ti.add(tj)] {
                out.push(one.add(&x));
                out.push(x);
            }
        }
    }
    out
}

/// `Φ(t_i)` re-derived from the probes `t_i·t_j` and `t_i + t_j`.
fn uniqueness_check(psi_m: &dyn Oracle, phi: &FieldMorphism, checks: &mut CheckCounts) -> Result<()> {
    let t = RationalFunction::vars(psi_m.domain());
    for i in 0..t.len() {
        for j in 0..t.len() {
            if i == j {
                continue;
            }
            let pj = phi_on_element(psi_m, &t[j])?;
            let via_product = phi_on_element(psi_m, &t[i].mul(&t[j]))?.div(&pj)?;
            let via_sum = phi_on_element(psi_m, &t[i].add(&t[j]))?.sub(&pj);
            for (what, v) in [("t_i·t_j", via_product), ("t_i + t_j", via_sum)] {
                if v != phi.images()[i] {
                    return Err(Error::stage_at(
                        Stage::Uniqueness,
                        format!("probe {what} gives a different Φ(t{})", i + 1),
                        format!("{}", t[i]),
                    ));
                }
                checks.uniqueness += 1;
            }
        }
    }
    Ok(())
}

pub fn reconstruct_isomorphism(oracle: &dyn Oracle, cfg: &EngineConfig) -> Result<Reconstruction> {
    run(oracle, cfg, None)
}

/// As [`reconstruct_isomorphism`], recording per-stage differences of
/// `clock()`.
pub fn reconstruct_timed(oracle: &dyn Oracle, cfg: &EngineConfig, clock: &dyn Fn() -> u64) -> Result<Reconstruction> {
    run(oracle, cfg, Some(clock))
}

fn run(oracle: &dyn Oracle, cfg: &EngineConfig, clock: Option<&dyn Fn() -> u64>) -> Result<Reconstruction> {
    let claims = oracle.claims();
    if !claims.preserves_dependence || !claims.is_isomorphism {
        return Err(Error::Precondition("the oracle must claim to preserve dependence and be an isomorphism".into()));
    }
    let desc = oracle.domain();
    need_two_vars(desc)?;
    if desc.consts() != oracle.codomain().consts() || desc.nvars() != oracle.codomain().nvars() {
        return Err(Error::DescriptorMismatch);
    }
    let mut timer = Timer { clock, last: clock.map_or(0, |c| c()), out: Vec::new() };
    let mut checks = CheckCounts::default();
    let (candidates, probes) = power_candidates(oracle, cfg)?;
    checks.line_probes = probes;
    timer.lap(Stage::ResolvePower);

    let mut first_err = None;
    let mut found = None;
    for &m in &candidates {
        let psi_m = PowerOracle::new(oracle, m);
        let mut c = checks;
        match assemble(&psi_m, &mut c, &mut timer) {
            Ok(phi) => {
                found = Some((m, phi, c));
                break;
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let Some((m, phi, c)) = found else { return Err(first_err.expect("at least one candidate")) };
    checks = c;
    let psi_m = PowerOracle::new(oracle, m);
    relation_checks(&psi_m, &phi, cfg, &mut checks, &mut timer)?;

    let sign = descend_sign(oracle, &phi, m, cfg)?;
    checks.sign_sample = cfg.sign_sample + SIGN_POWER_PROBES;
    timer.lap(Stage::DescendSign);

    uniqueness_check(&psi_m, &phi, &mut checks)?;
    timer.lap(Stage::Uniqueness);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7e51);
    for _ in 0..cfg.sign_sample {
        let x = sample_element(desc, &mut rng);
        if !sign_holds(oracle, &phi, &x, sign)? {
            return Err(Error::stage_at(Stage::Verification, format!("ψ(x̄) ≠ Φ(x̄)^{sign}"), format!("{x}")));
        }
        checks.verification += 1;
    }
    timer.lap(Stage::Verification);
    Ok(Reconstruction { morphism: phi, sign, power: m, checks, timings: timer.out })
}
