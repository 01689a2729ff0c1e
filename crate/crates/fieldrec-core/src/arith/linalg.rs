//! Exact linear algebra: Gaussian elimination over a field context and
//! fraction-free (Bareiss) determinants over polynomial rings.

use alloc::vec;
use alloc::vec::Vec;

use super::field::Field;
use super::mpoly::MPoly;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(k: &F, m: &mut [Vec<F::Elem>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !k.is_zero(&m[i][c])) else { continue };
        m.swap(r, pr);
        let inv = k.inv(&m[r][c]);
        for x in m[r].iter_mut() {
            *x = k.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !k.is_zero(&m[i][c]) {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = k.mul(&f, &m[r][j]);
                    m[i][j] = k.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(k: &F, m: &[Vec<F::Elem>]) -> usize {
    let mut m = m.to_vec();
    rref(k, &mut m).len()
}

/// Solves `A x = b`; returns one solution (free variables set to zero) or
/// `None` if inconsistent.
pub fn solve<F: Field>(k: &F, a: &[Vec<F::Elem>], b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<F::Elem>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(k, &mut m);
    if piv.last() == Some(&n) {
        return None;
    }
    let mut x = vec![k.zero(); n];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = m[i][n].clone();
    }
    Some(x)
}

/// Basis of the right kernel of `a`.
pub fn kernel<F: Field>(k: &F, a: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut m = a.to_vec();
    let piv = rref(k, &mut m);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !piv.contains(c)) {
        let mut v = vec![k.zero(); ncols];
        v[free] = k.one();
        for (i, &c) in piv.iter().enumerate() {
            v[c] = k.neg(&m[i][free]);
        }
        out.push(v);
    }
    out
}

type P<F> = MPoly<<F as Field>::Elem>;

/// Determinant of a square polynomial matrix by Bareiss elimination.
pub fn det_bareiss<F: Field>(k: &F, mut m: Vec<Vec<P<F>>>, nvars: usize) -> P<F> {
    let n = m.len();
    if n == 0 {
        return MPoly::one(k, nvars);
    }
    let mut sign = false;
    let mut prev = MPoly::one(k, nvars);
    for c in 0..n - 1 {
        if m[c][c].is_zero() {
            match (c + 1..n).find(|&i| !m[i][c].is_zero()) {
                None => return MPoly::zero(nvars),
                Some(i) => {
                    m.swap(c, i);
                    sign = !sign;
                }
            }
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let t = m[i][j].mul(k, &m[c][c]).sub(k, &m[i][c].mul(k, &m[c][j]));
                m[i][j] = if prev.is_one(k) { t } else { t.div_exact(k, &prev).expect("Bareiss division") };
            }
            m[i][c] = MPoly::zero(nvars);
        }
        prev = m[c][c].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.neg(k)
    } else {
        d
    }
}

/// Sylvester resultant of `a` and `b` with respect to variable `x`.
pub fn resultant<F: Field>(k: &F, a: &P<F>, b: &P<F>, x: usize) -> P<F> {
    let nv = a.nvars.max(b.nvars);
    let ac = a.coeffs_in(k, x);
    let bc = b.coeffs_in(k, x);
    let (m, n) = (ac.len() - 1, bc.len() - 1);
    if m == 0 {
        return ac[0].pow(k, n as u32);
    }
    if n == 0 {
        return bc[0].pow(k, m as u32);
    }
    let size = m + n;
    let mut mat = vec![vec![MPoly::zero(nv); size]; size];
    for i in 0..n {
        for (j, c) in ac.iter().enumerate() {
            mat[i][i + m - j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in bc.iter().enumerate() {
            mat[n + i][i + n - j] = c.clone();
        }
    }
    det_bareiss(k, mat, nv)
}
