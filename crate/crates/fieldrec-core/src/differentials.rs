//! Kähler differentials `Ω¹_{F|k}` of `F = k(t_1, ..., t_r)`, free on
//! `dt_1, ..., dt_r`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::linalg;
use crate::error::{Error, Result};
use crate::polyfield::{FieldDescriptor, FunctionField, RationalFunction};

/// `Σ coeffs[i] · dt_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DifferentialForm {
    desc: Arc<FieldDescriptor>,
    coeffs: Vec<RationalFunction>,
}

impl DifferentialForm {
    pub fn zero(desc: &Arc<FieldDescriptor>) -> Self {
        DifferentialForm { desc: desc.clone(), coeffs: (0..desc.nvars()).map(|_| RationalFunction::zero(desc)).collect() }
    }
    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }
    pub fn descriptor(&self) -> &Arc<FieldDescriptor> {
        &self.desc
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    pub fn add(&self, o: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect();
        DifferentialForm { desc: self.desc.clone(), coeffs }
    }
    pub fn scale(&self, f: &RationalFunction) -> Self {
        DifferentialForm { desc: self.desc.clone(), coeffs: self.coeffs.iter().map(|c| c.mul(f)).collect() }
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, v) in self.coeffs.iter().zip(self.desc.variables()) {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c}) d{v}")?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

pub fn d(f: &RationalFunction) -> DifferentialForm {
    let desc = f.descriptor();
    DifferentialForm { desc: desc.clone(), coeffs: (0..desc.nvars()).map(|i| f.partial(i)).collect() }
}

/// The unique `f'` with `d(f) = f'·d(x)`.
pub fn derivative_wrt(f: &RationalFunction, x: &RationalFunction) -> Result<RationalFunction> {
    f.same_field(x)?;
    let dx = d(x);
    let Some(i) = dx.coeffs.iter().position(|c| !c.is_zero()) else {
        return Err(Error::ZeroDifferential);
    };
    let df = d(f);
    let fp = df.coeffs[i].div(&dx.coeffs[i])?;
    for (a, b) in df.coeffs.iter().zip(&dx.coeffs) {
        if *a != fp.mul(b) {
            return Err(Error::NotDependent);
        }
    }
    Ok(fp)
}

/// Rank over `F` of the coefficient matrix of `d(f_1), ..., d(f_n)`.
pub fn rank(fs: &[RationalFunction]) -> Result<usize> {
    let first = fs.first().ok_or(Error::EmptyInput)?;
    let desc = first.descriptor();
    let mut rows = Vec::with_capacity(fs.len());
    for f in fs {
        f.same_field(first)?;
        rows.push(d(f).coeffs);
    }
    Ok(linalg::rank(&FunctionField::new(desc), &rows))
}

/// True iff `d(f_1), ..., d(f_n)` are linearly independent over `F`.
pub fn independent(fs: &[RationalFunction]) -> Result<bool> {
    if fs.iter().any(|f| f.is_zero()) {
        return Err(Error::ZeroInput);
    }
    Ok(rank(fs)? == fs.len())
}

/// `d(f)/f`.
pub fn dlog(f: &RationalFunction) -> Result<DifferentialForm> {
    let inv = f.inv().map_err(|_| Error::ZeroInput)?;
    Ok(d(f).scale(&inv))
}
