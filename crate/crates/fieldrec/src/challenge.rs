//! Seeded challenges: a hidden birational automorphism, a hidden sign and a
//! scrambling key, from which a [`HiddenMapOracle`] is built.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use fieldrec_core::polyfield::{FieldDescriptor, RationalFunction};
use fieldrec_core::reconstruct::{probe_set, FieldMorphism, HiddenMapOracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Linear,
    Monomial,
    DeJonquieres,
    Composite,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Linear, Family::Monomial, Family::DeJonquieres, Family::Composite];

    pub fn name(self) -> &'static str {
        match self {
            Family::Linear => "linear",
            Family::Monomial => "monomial",
            Family::DeJonquieres => "de_jonquieres",
            Family::Composite => "composite",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, HarnessError> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s || (s == "dejonquieres" && *f == Family::DeJonquieres))
            .ok_or_else(|| HarnessError::Invalid(format!("unknown family `{s}`")))
    }
}

/// Total-degree bound for composite hidden maps and their inverses.
pub const COMPOSITE_MAX_DEGREE: u32 = 8;
const COMPOSITE_RETRIES: usize = 64;
pub const DEFAULT_PROBE_BUDGET: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Challenge {
    pub id: String,
    pub field: String,
    pub family: Family,
    pub seed: u64,
    pub hidden_map: Vec<String>,
    pub hidden_inverse: Vec<String>,
    pub hidden_sign: i64,
    pub scramble_key: u64,
    pub probe_budget: usize,
    /// A class whose oracle answer is deliberately wrong.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrupt_class: Option<String>,
}

impl Challenge {
    pub fn descriptor(&self) -> Result<Arc<FieldDescriptor>, HarnessError> {
        Ok(Arc::new(self.field.parse::<FieldDescriptor>()?))
    }

    pub fn hidden_morphism(&self) -> Result<FieldMorphism, HarnessError> {
        let d = self.descriptor()?;
        Ok(FieldMorphism::parse(&d, &d, &self.hidden_map)?)
    }

    pub fn hidden_inverse_morphism(&self) -> Result<FieldMorphism, HarnessError> {
        let d = self.descriptor()?;
        Ok(FieldMorphism::parse(&d, &d, &self.hidden_inverse)?)
    }

    pub fn oracle(&self) -> Result<HiddenMapOracle, HarnessError> {
        let o = HiddenMapOracle::new(self.hidden_morphism()?, self.hidden_sign, self.scramble_key)?;
        match &self.corrupt_class {
            None => Ok(o),
            Some(c) => Ok(o.corrupted_at(&RationalFunction::parse(c, &self.descriptor()?)?)?),
        }
    }

    /// The oracle of the inverse map (never corrupted).
    pub fn inverse_oracle(&self) -> Result<HiddenMapOracle, HarnessError> {
        let o = HiddenMapOracle::new(self.hidden_morphism()?, self.hidden_sign, self.scramble_key)?;
        Ok(o.inverse(&self.hidden_inverse_morphism()?)?)
    }

    /// Corrupts the answer on one probe class chosen from `seed`.
    pub fn corrupted(mut self, seed: u64) -> Result<Self, HarnessError> {
        let probes = probe_set(&self.descriptor()?);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0ffee);
        let x = &probes[rng.gen_range(0..probes.len())];
        self.corrupt_class = Some(x.to_string());
        self.id.push_str("-corrupt");
        Ok(self)
    }
}

/// A morphism together with its inverse.
#[derive(Clone, Debug)]
struct Invertible {
    map: FieldMorphism,
    inv: FieldMorphism,
}

impl Invertible {
    fn identity(d: &Arc<FieldDescriptor>) -> Self {
        Invertible { map: FieldMorphism::identity(d), inv: FieldMorphism::identity(d) }
    }
    fn from_images(d: &Arc<FieldDescriptor>, map: Vec<RationalFunction>, inv: Vec<RationalFunction>) -> Result<Self, HarnessError> {
        Ok(Invertible { map: FieldMorphism::new(d, d, map)?, inv: FieldMorphism::new(d, d, inv)? })
    }
    /// `next ∘ self`.
    fn then(&self, next: &Invertible) -> Result<Self, HarnessError> {
        Ok(Invertible { map: self.map.then(&next.map)?, inv: next.inv.then(&self.inv)? })
    }
    fn max_degree(&self) -> u32 {
        self.map.images().iter().chain(self.inv.images()).map(|f| f.degree()).max().unwrap_or(0)
    }
}

fn nonzero(d: &FieldDescriptor, rng: &mut ChaCha8Rng) -> i64 {
    match d.characteristic() {
        0 => rng.gen_range(1..=3) * if rng.gen_bool(0.5) { -1 } else { 1 },
        p => rng.gen_range(1..p as i64),
    }
}

fn konst(d: &Arc<FieldDescriptor>, c: i64) -> RationalFunction {
    RationalFunction::from_i64(d, c)
}

/// Invertible affine substitution, built from elementary steps.
fn linear(d: &Arc<FieldDescriptor>, rng: &mut ChaCha8Rng) -> Result<Invertible, HarnessError> {
    let r = d.nvars();
    let t = RationalFunction::vars(d);
    loop {
        let mut acc = Invertible::identity(d);
        for _ in 0..r + 2 {
            let (mut fwd, mut bwd) = (t.clone(), t.clone());
            let i = rng.gen_range(0..r);
            match rng.gen_range(0..4) {
                0 => {
                    let j = (i + rng.gen_range(1..r)) % r;
                    let c = konst(d, nonzero(d, rng));
                    fwd[i] = t[i].add(&c.mul(&t[j]));
                    bwd[i] = t[i].sub(&c.mul(&t[j]));
                }
                1 => {
                    let a = konst(d, nonzero(d, rng));
                    fwd[i] = t[i].mul(&a);
                    bwd[i] = t[i].div(&a)?;
                }
                2 => {
                    let b = konst(d, nonzero(d, rng));
                    fwd[i] = t[i].add(&b);
                    bwd[i] = t[i].sub(&b);
                }
                _ => {
                    let j = (i + rng.gen_range(1..r)) % r;
                    fwd.swap(i, j);
                    bwd.swap(i, j);
                }
            }
            acc = acc.then(&Invertible::from_images(d, fwd, bwd)?)?;
        }
        if !acc.map.is_identity() {
            return Ok(acc);
        }
    }
}

/// `t_i ↦ t^{M_i}` with `M ∈ GL_r(Z)`, built from row operations,
/// inversions and swaps.
fn monomial(d: &Arc<FieldDescriptor>, rng: &mut ChaCha8Rng) -> Result<Invertible, HarnessError> {
    let r = d.nvars();
    let t = RationalFunction::vars(d);
    loop {
        let mut acc = Invertible::identity(d);
        for _ in 0..rng.gen_range(2..=3) {
            let (mut fwd, mut bwd) = (t.clone(), t.clone());
            let i = rng.gen_range(0..r);
            let j = (i + rng.gen_range(1..r)) % r;
            match rng.gen_range(0..4) {
                0 | 1 => {
                    let e = if rng.gen_bool(0.5) { 1 } else { -1 };
                    fwd[i] = t[i].mul(&t[j].pow(e)?);
                    bwd[i] = t[i].mul(&t[j].pow(-e)?);
                }
                2 => {
                    fwd[i] = t[i].inv()?;
                    bwd[i] = t[i].inv()?;
                }
                _ => {
                    fwd.swap(i, j);
                    bwd.swap(i, j);
                }
            }
            acc = acc.then(&Invertible::from_images(d, fwd, bwd)?)?;
        }
        if !acc.map.is_identity() && acc.max_degree() <= 4 {
            return Ok(acc);
        }
    }
}

fn random_poly(d: &Arc<FieldDescriptor>, nvars: usize, rng: &mut ChaCha8Rng) -> RationalFunction {
    let t = RationalFunction::vars(d);
    loop {
        let mut q = RationalFunction::zero(d);
        for _ in 0..rng.gen_range(1..=3) {
            let mut term = konst(d, nonzero(d, rng));
            for _ in 0..rng.gen_range(1..=3) {
                term = term.mul(&t[rng.gen_range(0..nvars)]);
            }
            q = q.add(&term);
        }
        if !q.is_constant() {
            return q;
        }
    }
}

/// Triangular map `t_1 ↦ t_1`, `t_j ↦ a_j t_j + q_j(t_1, ..., t_{j-1})`.
fn de_jonquieres(d: &Arc<FieldDescriptor>, rng: &mut ChaCha8Rng) -> Result<Invertible, HarnessError> {
    let t = RationalFunction::vars(d);
    let mut acc = Invertible::identity(d);
    for j in 1..d.nvars() {
        let a = konst(d, nonzero(d, rng));
        let q = random_poly(d, j, rng);
        let (mut fwd, mut bwd) = (t.clone(), t.clone());
        fwd[j] = a.mul(&t[j]).add(&q);
        bwd[j] = t[j].sub(&q).div(&a)?;
        acc = acc.then(&Invertible::from_images(d, fwd, bwd)?)?;
    }
    Ok(acc)
}

fn composite(d: &Arc<FieldDescriptor>, rng: &mut ChaCha8Rng) -> Result<Invertible, HarnessError> {
    for _ in 0..COMPOSITE_RETRIES {
        let mut acc = Invertible::identity(d);
        for _ in 0..rng.gen_range(2..=3) {
            let step = match rng.gen_range(0..3) {
                0 => linear(d, rng)?,
                1 => monomial(d, rng)?,
                _ => de_jonquieres(d, rng)?,
            };
            acc = acc.then(&step)?;
        }
        if !acc.map.is_identity() && acc.max_degree() <= COMPOSITE_MAX_DEGREE {
            return Ok(acc);
        }
    }
    Err(HarnessError::Invalid(format!("no composite map of degree ≤ {COMPOSITE_MAX_DEGREE} after {COMPOSITE_RETRIES} tries")))
}

fn family_salt(f: Family) -> u64 {
    match f {
        Family::Linear => 0x11,
        Family::Monomial => 0x22,
        Family::DeJonquieres => 0x33,
        Family::Composite => 0x44,
    }
}

pub fn generate_challenge(seed: u64, family: Family, desc: &Arc<FieldDescriptor>) -> Result<Challenge, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ family_salt(family));
    let m = match family {
        Family::Linear => linear(desc, &mut rng)?,
        Family::Monomial => monomial(desc, &mut rng)?,
        Family::DeJonquieres => de_jonquieres(desc, &mut rng)?,
        Family::Composite => composite(desc, &mut rng)?,
    };
    if !m.map.is_inverse_of(&m.inv)? {
        return Err(HarnessError::Invalid("generated map failed its inverse check".into()));
    }
    let hidden_sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let scramble_key = rng.gen();
    Ok(Challenge {
        id: format!("{desc}-{family}-{seed}"),
        field: desc.to_string(),
        family,
        seed,
        hidden_map: m.map.images().iter().map(|f| f.to_string()).collect(),
        hidden_inverse: m.inv.images().iter().map(|f| f.to_string()).collect(),
        hidden_sign,
        scramble_key,
        probe_budget: DEFAULT_PROBE_BUDGET,
        corrupt_class: None,
    })
}
