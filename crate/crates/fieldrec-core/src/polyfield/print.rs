use core::fmt::{self, Write};

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{FieldDescriptor, Poly, Polynomial, RationalFunction};

fn write_poly(f: &mut fmt::Formatter<'_>, p: &Poly, desc: &FieldDescriptor) -> fmt::Result {
    if p.is_zero() {
        return f.write_char('0');
    }
    for (idx, (m, c)) in p.terms.iter().enumerate() {
        let neg = c.is_negative();
        let a: BigRational = c.abs();
        if neg {
            f.write_char('-')?;
        } else if idx > 0 {
            f.write_char('+')?;
        }
        let mut first = true;
        if !a.is_one() || m.is_one() {
            write!(f, "{a}")?;
            first = false;
        }
        for (i, name) in desc.variables().iter().enumerate() {
            let e = m.get(i);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            f.write_str(name)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
    }
    Ok(())
}

/// True if `p` prints as a single factor that needs no parentheses after
/// `/`.
fn is_atomic(p: &Poly) -> bool {
    p.terms.len() == 1 && p.terms[0].1.is_one() && p.terms[0].0 .0.iter().filter(|&&e| e > 0).count() <= 1
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.poly, &self.desc)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.consts();
        if self.den.is_one(&k) {
            return write_poly(f, &self.num, &self.desc);
        }
        if self.num.terms.len() > 1 {
            f.write_char('(')?;
            write_poly(f, &self.num, &self.desc)?;
            f.write_char(')')?;
        } else {
            write_poly(f, &self.num, &self.desc)?;
        }
        f.write_char('/')?;
        if is_atomic(&self.den) {
            write_poly(f, &self.den, &self.desc)
        } else {
            f.write_char('(')?;
            write_poly(f, &self.den, &self.desc)?;
            f.write_char(')')
        }
    }
}
