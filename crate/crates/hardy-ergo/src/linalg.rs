//! Exact elimination over the rationals and over the scalar field.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::{FieldElem, Monomial, Rat, ScalarValue};

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref_f(m: &mut [Vec<FieldElem>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv();
        for c in 0..ncols {
            m[row][c] = m[row][c].mul(&inv);
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let v = m[row][c].mul(&f);
                    m[r][c] = m[r][c].sub(&v);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace_f(m: &[Vec<FieldElem>], ncols: usize) -> Vec<Vec<FieldElem>> {
    let mut a = m.to_vec();
    let pivots = rref_f(&mut a, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![FieldElem::zero(); ncols];
        v[free] = FieldElem::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = a[r][free].neg();
        }
        out.push(v);
    }
    out
}

pub fn rank_f(m: &[Vec<FieldElem>], ncols: usize) -> usize {
    let mut a = m.to_vec();
    rref_f(&mut a, ncols).len()
}

/// A solution of `m x = b`, if one exists.
pub fn solve_f(m: &[Vec<FieldElem>], ncols: usize, b: &[FieldElem]) -> Option<Vec<FieldElem>> {
    let mut a: Vec<Vec<FieldElem>> =
        m.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect()).collect();
    let pivots = rref_f(&mut a, ncols + 1);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![FieldElem::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = a[r][ncols].clone();
    }
    Some(x)
}

pub fn transpose<T: Clone>(m: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    (0..ncols).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect()
}

pub fn mat_mul_f(a: &[Vec<FieldElem>], b: &[Vec<FieldElem>], inner: usize, ncols: usize) -> Vec<Vec<FieldElem>> {
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|c| {
                    let mut s = FieldElem::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][c].is_zero() {
                            s = s.add(&row[k].mul(&b[k][c]));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec_f(a: &[Vec<FieldElem>], x: &[FieldElem]) -> Vec<FieldElem> {
    a.iter()
        .map(|row| {
            let mut s = FieldElem::zero();
            for (r, v) in row.iter().zip(x) {
                if !r.is_zero() && !v.is_zero() {
                    s = s.add(&r.mul(v));
                }
            }
            s
        })
        .collect()
}

pub fn rref_q(m: &mut [Vec<Rat>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for c in 0..ncols {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let v = &m[row][c] * &f;
                    m[r][c] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn nullspace_q(m: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut a = m.to_vec();
    let pivots = rref_q(&mut a, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -a[r][free].clone();
        }
        out.push(v);
    }
    out
}

/// Rational equations equivalent to `sum_k row[k] x_k = 0` for rational `x`,
/// obtained by clearing denominators and comparing monomial coefficients.
pub fn rational_rows(row: &[FieldElem]) -> Vec<Vec<Rat>> {
    let n = row.len();
    let cleared: Vec<ScalarValue> = (0..n)
        .map(|k| {
            let mut v = row[k].num().clone();
            for (l, e) in row.iter().enumerate() {
                if l != k {
                    v = v.mul_unrestricted(e.den());
                }
            }
            v
        })
        .collect();
    let mut by_mono: BTreeMap<Monomial, Vec<Rat>> = BTreeMap::new();
    for (k, v) in cleared.iter().enumerate() {
        for (m, c) in v.terms() {
            by_mono.entry(m.clone()).or_insert_with(|| vec![Rat::zero(); n])[k] = c.clone();
        }
    }
    by_mono.into_values().collect()
}

pub fn fe(s: &ScalarValue) -> FieldElem {
    FieldElem::from_scalar(s.clone())
}

pub fn fe_rat(r: &Rat) -> FieldElem {
    FieldElem::from_scalar(ScalarValue::from_rat(r.clone()))
}

/// Rational value of a field element, if it is rational.
pub fn fe_rational(x: &FieldElem) -> Option<Rat> {
    if x.is_zero() {
        return Some(Rat::zero());
    }
    let (m, dc) = x.den().leading()?;
    let r = x.num().coeff(m) / dc;
    if !r.is_zero() && x.den().scale(&r) == *x.num() {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    #[test]
    fn nullspace_of_sqrt_matrix() {
        let s2 = fe(&ScalarValue::sqrt(2));
        let m = vec![vec![s2.clone(), s2.mul(&fe_rat(&rat_int(2)))]];
        let ns = nullspace_f(&m, 2);
        assert_eq!(ns.len(), 1);
        let r = mat_vec_f(&m, &ns[0]);
        assert!(r[0].is_zero());
    }

    #[test]
    fn rational_points_of_irrational_line() {
        // x1 - sqrt(2) x2 = 0 has only the zero rational solution.
        let row = vec![FieldElem::one(), fe(&ScalarValue::sqrt(2)).neg()];
        let rows = rational_rows(&row);
        assert!(nullspace_q(&rows, 2).is_empty());
    }
}
