use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::field::{factor_u64, is_prime_u64};
use crate::arith::ConstField;
use crate::error::{Error, Result};

/// Number of variables accepted by [`FieldDescriptor::new`].
pub const DEFAULT_MAX_VARS: usize = 3;
/// Upper bound for [`FieldDescriptor::with_max_vars`]; the remaining slots
/// of the exponent vector are reserved for elimination variables.
pub const HARD_MAX_VARS: usize = 5;

/// The constant field `k`.
///
/// `DeclaredFinite` and `DeclaredAlgClosed` are tags describing the
/// intended constant field for type detection; computation happens over
/// the prime field of the same characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstantField {
    Rationals,
    PrimeField(u64),
    DeclaredFinite { q: u64 },
    DeclaredAlgClosed { characteristic: u64 },
}

impl ConstantField {
    pub fn characteristic(&self) -> u64 {
        match *self {
            ConstantField::Rationals => 0,
            ConstantField::PrimeField(p) => p,
            ConstantField::DeclaredFinite { q } => factor_u64(q).first().map_or(0, |f| f.0),
            ConstantField::DeclaredAlgClosed { characteristic } => characteristic,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            ConstantField::Rationals => Ok(()),
            ConstantField::PrimeField(p) if is_prime_u64(p) && p < (1 << 31) => Ok(()),
            ConstantField::PrimeField(p) => Err(Error::InvalidDescriptor(format!("{p} is not a supported prime"))),
            ConstantField::DeclaredFinite { q } => {
                let f = factor_u64(q);
                if f.len() == 1 && f[0].0 < (1 << 31) {
                    Ok(())
                } else {
                    Err(Error::InvalidDescriptor(format!("q = {q} is not a prime power")))
                }
            }
            ConstantField::DeclaredAlgClosed { characteristic: c } => {
                if c == 0 || (is_prime_u64(c) && c < (1 << 31)) {
                    Ok(())
                } else {
                    Err(Error::InvalidDescriptor(format!("characteristic {c} is neither 0 nor a prime")))
                }
            }
        }
    }
}

impl fmt::Display for ConstantField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConstantField::Rationals => f.write_str("Q"),
            ConstantField::PrimeField(p) => write!(f, "F{p}"),
            ConstantField::DeclaredFinite { q } => write!(f, "finite:{q}"),
            ConstantField::DeclaredAlgClosed { characteristic } => write!(f, "algclosed:{characteristic}"),
        }
    }
}

impl core::str::FromStr for ConstantField {
    type Err = Error;
    /// Accepts `Q`, `F5` / `GF5` / `F_5`, `finite:9`, `algclosed:0`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidDescriptor(format!("unrecognized constant field `{s}`"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        let cf = if s == "Q" || s == "QQ" {
            ConstantField::Rationals
        } else if let Some(t) = s.strip_prefix("finite:") {
            ConstantField::DeclaredFinite { q: num(t)? }
        } else if let Some(t) = s.strip_prefix("algclosed:") {
            ConstantField::DeclaredAlgClosed { characteristic: num(t)? }
        } else if let Some(t) = s.strip_prefix("GF").or_else(|| s.strip_prefix("F_")).or_else(|| s.strip_prefix('F')) {
            ConstantField::PrimeField(num(t)?)
        } else {
            return Err(bad());
        };
        cf.validate()?;
        Ok(cf)
    }
}

/// `k(t_1, ..., t_r)`: constant field and ordered variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldDescriptor {
    constant_field: ConstantField,
    variables: Vec<String>,
}

impl FieldDescriptor {
    pub fn new(constant_field: ConstantField, variables: Vec<String>) -> Result<Arc<Self>> {
        Self::with_max_vars(constant_field, variables, DEFAULT_MAX_VARS)
    }

    pub fn with_max_vars(constant_field: ConstantField, variables: Vec<String>, max_vars: usize) -> Result<Arc<Self>> {
        if max_vars > HARD_MAX_VARS {
            return Err(Error::InvalidDescriptor(format!("at most {HARD_MAX_VARS} variables are supported")));
        }
        if variables.len() < 2 || variables.len() > max_vars {
            return Err(Error::InvalidDescriptor(format!(
                "need between 2 and {max_vars} variables, got {}",
                variables.len()
            )));
        }
        Self::build(constant_field, variables)
    }

    /// Residue-field descriptors may have a single variable.
    pub(crate) fn build(constant_field: ConstantField, variables: Vec<String>) -> Result<Arc<Self>> {
        constant_field.validate()?;
        for (i, v) in variables.iter().enumerate() {
            let mut cs = v.chars();
            let ok = cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && cs.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidDescriptor(format!("bad variable name `{v}`")));
            }
            if variables[..i].contains(v) {
                return Err(Error::InvalidDescriptor(format!("duplicate variable `{v}`")));
            }
        }
        if variables.is_empty() || variables.len() > HARD_MAX_VARS {
            return Err(Error::InvalidDescriptor("variable count out of range".into()));
        }
        Ok(Arc::new(FieldDescriptor { constant_field, variables }))
    }

    /// `k(t1, ..., tr)` with default variable names.
    pub fn standard(constant_field: ConstantField, r: usize) -> Result<Arc<Self>> {
        Self::new(constant_field, (1..=r).map(|i| format!("t{i}")).collect())
    }
    pub fn rationals(r: usize) -> Arc<Self> {
        Self::standard(ConstantField::Rationals, r).expect("valid descriptor")
    }
    pub fn prime(p: u64, r: usize) -> Arc<Self> {
        Self::standard(ConstantField::PrimeField(p), r).expect("valid descriptor")
    }

    pub fn constant_field(&self) -> ConstantField {
        self.constant_field
    }
    pub fn characteristic(&self) -> u64 {
        self.constant_field.characteristic()
    }
    /// Arithmetic context for coefficients.
    pub fn consts(&self) -> ConstField {
        match self.characteristic() {
            0 => ConstField::rationals(),
            p => ConstField::prime(p),
        }
    }
    pub fn nvars(&self) -> usize {
        self.variables.len()
    }
    pub fn variables(&self) -> &[String] {
        &self.variables
    }
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// The field with variable `j` removed.
    pub(crate) fn without_var(&self, j: usize) -> Arc<Self> {
        let mut vars = self.variables.clone();
        vars.remove(j);
        Self::build(self.constant_field, vars).expect("sub-descriptor")
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.constant_field, self.variables.join(","))
    }
}

impl core::str::FromStr for FieldDescriptor {
    type Err = Error;
    /// Parses `Q(t1,t2)`, `F3(x,y,z)`, or a bare constant field name (two
    /// variables `t1, t2`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (cf, vars) = match s.find('(') {
            None => (s.parse::<ConstantField>()?, alloc::vec!["t1".to_string(), "t2".to_string()]),
            Some(i) => {
                let inner = s[i + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::InvalidDescriptor(format!("unbalanced parentheses in `{s}`")))?;
                let vars = inner.split(',').map(|v| v.trim().to_string()).collect();
                (s[..i].parse::<ConstantField>()?, vars)
            }
        };
        let d = FieldDescriptor::with_max_vars(cf, vars, HARD_MAX_VARS)?;
        Ok(Arc::try_unwrap(d).unwrap_or_else(|a| (*a).clone()))
    }
}
