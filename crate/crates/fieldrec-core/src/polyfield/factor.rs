use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;

use super::{kernel, FieldDescriptor, Poly, Polynomial, RationalFunction};
use crate::arith::{Field, MPoly};
use crate::error::{Error, Result};

/// `unit · ∏ f_i^{e_i}` with monic irreducible, pairwise distinct `f_i`
/// sorted in canonical order; negative exponents come from the denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factorization {
    pub unit: BigRational,
    pub factors: Vec<(Polynomial, i64)>,
}

impl Factorization {
    pub fn reassemble(&self, desc: &Arc<FieldDescriptor>) -> RationalFunction {
        let k = desc.consts();
        let r = desc.nvars();
        let mut num = MPoly::constant(&k, r, self.unit.clone());
        let mut den = MPoly::one(&k, r);
        for (f, e) in &self.factors {
            let pw = f.poly().pow(&k, e.unsigned_abs() as u32);
            if *e > 0 {
                num = kernel::mul(&k, &num, &pw);
            } else {
                den = kernel::mul(&k, &den, &pw);
            }
        }
        RationalFunction::normalized(desc, num, den)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)?;
        for (g, e) in &self.factors {
            write!(f, " * ({g})^{e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IrreducibilityMode {
    OverConstantField,
    Absolutely,
}

impl RationalFunction {
    pub fn factor(&self) -> Result<Factorization> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let k = self.consts();
        let (unit, nf) = kernel::factor(&k, &self.num);
        let (_, df) = kernel::factor(&k, &self.den);
        let mut factors: Vec<(Polynomial, i64)> = nf
            .into_iter()
            .map(|(g, m)| (Polynomial::new(&self.desc, g), m as i64))
            .chain(df.into_iter().map(|(g, m)| (Polynomial::new(&self.desc, g), -(m as i64))))
            .collect();
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Factorization { unit, factors })
    }

    /// `g` with `self = g^p`, when `self` lies in `F^p` (constants are
    /// `p`-th powers since `F_p` is perfect).
    pub fn pth_root(&self) -> Result<Option<Self>> {
        let p = self.desc.characteristic();
        if p == 0 {
            return Err(Error::CharacteristicZero);
        }
        // With gcd(N, D) = 1, d(N/D) = 0 forces dN = dD = 0.
        let divisible = |f: &Poly| f.terms.iter().all(|(m, _)| m.0.iter().all(|&e| e as u64 % p == 0));
        if !divisible(&self.num) || !divisible(&self.den) {
            return Ok(None);
        }
        let root = |f: &Poly| {
            let k = self.consts();
            let terms = f
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut n = *m;
                    n.0.iter_mut().for_each(|e| *e /= p as u16);
                    (n, c.clone())
                })
                .collect();
            MPoly::from_terms(&k, f.nvars, terms)
        };
        Ok(Some(RationalFunction::normalized(&self.desc, root(&self.num), root(&self.den))))
    }
}

impl Polynomial {
    pub fn factor(&self) -> Result<Factorization> {
        self.to_rational_function().factor()
    }

    pub fn is_irreducible(&self, mode: IrreducibilityMode) -> Result<bool> {
        if self.is_constant() {
            return Err(Error::ConstantInput);
        }
        let k = self.desc.consts();
        Ok(match mode {
            IrreducibilityMode::OverConstantField => kernel::is_irreducible(&k, &self.poly),
            IrreducibilityMode::Absolutely => kernel::is_abs_irreducible(&k, &self.poly),
        })
    }

    /// Monic associate.
    pub fn monic(&self) -> Self {
        let k = self.desc.consts();
        Polynomial::new(&self.desc, self.poly.monic(&k))
    }

    pub fn leading_coefficient(&self) -> BigRational {
        let k = self.desc.consts();
        if self.poly.is_zero() {
            k.zero()
        } else {
            self.poly.lc(&k)
        }
    }
}
