//! Concrete measure-preserving systems and test functions.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::weyl::frac_word;
use super::{e, C64};
use crate::scalar::ScalarValue;
use crate::{Error, Result};

/// Commuting transformations `T_1..T_k`.
#[derive(Clone, Debug)]
pub enum DynSystem {
    /// `T_j x = x + alpha_j` on the `dim`-torus.
    Torus { dim: usize, alphas: Vec<Vec<ScalarValue>> },
    /// `T_j x = x + r_j` on `Z/qZ`.
    Cyclic { q: u64, shifts: Vec<u64> },
    /// `T(x, y) = (x + alpha, y + x)` on the 2-torus.
    Skew { alpha: ScalarValue },
}

impl DynSystem {
    pub fn torus(alphas: Vec<Vec<ScalarValue>>) -> Result<DynSystem> {
        let dim = alphas.first().map_or(0, Vec::len);
        if dim == 0 || alphas.iter().any(|a| a.len() != dim) {
            return Err(Error::Invalid("rotation vectors must share a positive dimension".into()));
        }
        Ok(DynSystem::Torus { dim, alphas })
    }

    pub fn cyclic(q: u64, shifts: &[i64]) -> Result<DynSystem> {
        if q == 0 || shifts.is_empty() {
            return Err(Error::Invalid("cyclic system needs q >= 1 and at least one shift".into()));
        }
        let shifts = shifts.iter().map(|&r| r.rem_euclid(q as i64) as u64).collect();
        Ok(DynSystem::Cyclic { q, shifts })
    }

    pub fn k(&self) -> usize {
        match self {
            DynSystem::Torus { alphas, .. } => alphas.len(),
            DynSystem::Cyclic { shifts, .. } => shifts.len(),
            DynSystem::Skew { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            DynSystem::Torus { dim, alphas } => json!({
                "kind": "torus",
                "dim": dim,
                "alphas": alphas.iter().map(|a| a.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
            DynSystem::Cyclic { q, shifts } => json!({"kind": "cyclic", "q": q, "shifts": shifts}),
            DynSystem::Skew { alpha } => json!({"kind": "skew", "alpha": alpha.to_string()}),
        }
    }
}

/// Phase of the character `kappa` under one step of every rotation:
/// `words[j] = frac(kappa . alpha_j)` in units of `2^-128`.
pub fn character_words(alphas: &[Vec<ScalarValue>], kappa: &[i64]) -> Vec<u128> {
    alphas
        .iter()
        .map(|a| {
            let mut s = ScalarValue::zero();
            for (x, &k) in a.iter().zip(kappa) {
                if k != 0 {
                    s = &s + &x.scale(&crate::scalar::rat_int(k));
                }
            }
            frac_word(&s)
        })
        .collect()
}

/// Finite trigonometric polynomial on the `dim`-torus.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    pub dim: usize,
    pub coeffs: BTreeMap<Vec<i64>, C64>,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> TrigPoly {
        TrigPoly { dim, coeffs: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: C64) -> TrigPoly {
        let mut p = TrigPoly::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn character(kappa: Vec<i64>) -> TrigPoly {
        let mut p = TrigPoly::zero(kappa.len());
        p.add_term(kappa, C64::new(1.0, 0.0));
        p
    }

    pub fn add_term(&mut self, k: Vec<i64>, c: C64) {
        assert_eq!(k.len(), self.dim);
        let v = self.coeffs.entry(k.clone()).or_default();
        *v += c;
        if *v == C64::new(0.0, 0.0) {
            self.coeffs.remove(&k);
        }
    }

    pub fn add(&self, o: &TrigPoly) -> TrigPoly {
        let mut r = self.clone();
        for (k, c) in &o.coeffs {
            r.add_term(k.clone(), *c);
        }
        r
    }

    pub fn scale(&self, s: C64) -> TrigPoly {
        let mut r = TrigPoly::zero(self.dim);
        for (k, c) in &self.coeffs {
            r.add_term(k.clone(), c * s);
        }
        r
    }

    pub fn conj(&self) -> TrigPoly {
        let mut r = TrigPoly::zero(self.dim);
        for (k, c) in &self.coeffs {
            r.add_term(k.iter().map(|x| -x).collect(), c.conj());
        }
        r
    }

    pub fn mul(&self, o: &TrigPoly) -> TrigPoly {
        let mut r = TrigPoly::zero(self.dim);
        for (a, x) in &self.coeffs {
            for (b, y) in &o.coeffs {
                r.add_term(a.iter().zip(b).map(|(p, q)| p + q).collect(), x * y);
            }
        }
        r
    }

    /// `(x, y) -> f(x) g(y)` on the product torus.
    pub fn tensor(&self, o: &TrigPoly) -> TrigPoly {
        let mut r = TrigPoly::zero(self.dim + o.dim);
        for (a, x) in &self.coeffs {
            for (b, y) in &o.coeffs {
                r.add_term(a.iter().chain(b).copied().collect(), x * y);
            }
        }
        r
    }

    pub fn mean(&self) -> C64 {
        self.coeffs.get(&vec![0; self.dim]).copied().unwrap_or_default()
    }

    /// `sum |c|`, an upper bound for the sup norm.
    pub fn sup_bound(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, x: &[f64]) -> C64 {
        self.coeffs.iter().map(|(k, c)| c * e(k.iter().zip(x).map(|(a, b)| *a as f64 * b).sum())).sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|(k, c)| json!({"k": k, "re": super::num17(c.re), "im": super::num17(c.im)}))
                .collect(),
        )
    }
}

/// A function on `(Z/qZ)^dims`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicFn {
    pub q: u64,
    pub dims: usize,
    pub vals: Vec<C64>,
}

impl CyclicFn {
    pub fn new(q: u64, vals: Vec<C64>) -> Result<CyclicFn> {
        if vals.len() as u64 != q {
            return Err(Error::Invalid(format!("{} values for Z/{q}", vals.len())));
        }
        Ok(CyclicFn { q, dims: 1, vals })
    }

    pub fn constant(q: u64, c: C64) -> CyclicFn {
        CyclicFn { q, dims: 1, vals: vec![c; q as usize] }
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn mean(&self) -> C64 {
        self.vals.iter().sum::<C64>() / self.vals.len() as f64
    }

    pub fn conj(&self) -> CyclicFn {
        CyclicFn { vals: self.vals.iter().map(|v| v.conj()).collect(), ..self.clone() }
    }

    pub fn add(&self, o: &CyclicFn) -> CyclicFn {
        CyclicFn { vals: self.vals.iter().zip(&o.vals).map(|(a, b)| a + b).collect(), ..self.clone() }
    }

    pub fn mul(&self, o: &CyclicFn) -> CyclicFn {
        CyclicFn { vals: self.vals.iter().zip(&o.vals).map(|(a, b)| a * b).collect(), ..self.clone() }
    }

    /// `(x, y) -> f(x) g(y)`.
    pub fn tensor(&self, o: &CyclicFn) -> CyclicFn {
        assert_eq!(self.q, o.q);
        let mut vals = Vec::with_capacity(self.len() * o.len());
        for a in &self.vals {
            for b in &o.vals {
                vals.push(a * b);
            }
        }
        CyclicFn { q: self.q, dims: self.dims + o.dims, vals }
    }

    /// Index of `x + s (1, ..., 1)` for flat index `x`.
    pub fn shift_index(&self, x: usize, s: u64) -> usize {
        let q = self.q as usize;
        let s = (s % self.q) as usize;
        let mut out = 0;
        let mut stride = 1;
        let mut rest = x;
        for _ in 0..self.dims {
            let c = rest % q;
            rest /= q;
            out += ((c + s) % q) * stride;
            stride *= q;
        }
        out
    }

    /// `x -> f(x + s (1, ..., 1))`.
    pub fn shifted(&self, s: u64) -> CyclicFn {
        let vals = (0..self.len()).map(|x| self.vals[self.shift_index(x, s)]).collect();
        CyclicFn { vals, ..self.clone() }
    }

    pub fn integral(&self) -> C64 {
        self.mean()
    }

    pub fn l2_dist(&self, o: &CyclicFn) -> f64 {
        (self.vals.iter().zip(&o.vals).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / self.len() as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_algebra() {
        let f = TrigPoly::character(vec![1, 0]).add(&TrigPoly::constant(2, C64::new(0.5, 0.0)));
        let g = f.mul(&f.conj());
        assert!((g.mean().re - 1.25).abs() < 1e-15);
        assert_eq!(f.tensor(&f).dim, 4);
        let x = [0.25, 0.1];
        assert!((f.eval(&x) - C64::new(0.5, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn cyclic_shift() {
        let f = CyclicFn::new(4, (0..4).map(|i| C64::new(i as f64, 0.0)).collect()).unwrap();
        assert_eq!(f.shifted(1).vals[3], C64::new(0.0, 0.0));
        let t = f.tensor(&f);
        let s = t.shifted(1);
        // (x, y) = (3, 2) -> (0, 3)
        assert_eq!(s.vals[3 * 4 + 2], C64::new(0.0, 0.0));
    }

    #[test]
    fn words_of_sqrt2() {
        let a = vec![vec![ScalarValue::sqrt(2)]];
        let w = character_words(&a, &[1])[0];
        let x = (w >> 64) as f64 / 2f64.powi(64);
        assert!((x - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    }
}
