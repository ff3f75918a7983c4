//! Log-power normal form: finite sums of
//! `coef * t^c * log(t)^e * exp(sum_b q_b log(t)^b)` with `0 < b < 1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numeric::ball::{Ball, Ctx};
use crate::numeric::dd::DD;
use crate::scalar::{rat_int, Rat, ScalarValue};
use crate::{Error, Result};

/// Growth signature of a single term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Key {
    pub c: Rat,
    pub e: Rat,
    /// `beta -> q` for the factor `exp(q log(t)^beta)`; no zero `q`.
    pub atoms: BTreeMap<Rat, Rat>,
}

impl Key {
    pub fn one() -> Key {
        Key { c: Rat::zero(), e: Rat::zero(), atoms: BTreeMap::new() }
    }

    pub fn power(c: Rat) -> Key {
        Key { c, ..Key::one() }
    }

    pub fn log_power(e: Rat) -> Key {
        Key { e, ..Key::one() }
    }

    pub fn is_one(&self) -> bool {
        self.c.is_zero() && self.e.is_zero() && self.atoms.is_empty()
    }

    /// `t^k` with `k` a nonnegative integer.
    pub fn is_polynomial(&self) -> bool {
        self.c.is_integer() && !self.c.is_negative() && self.e.is_zero() && self.atoms.is_empty()
    }

    pub fn mul(&self, o: &Key) -> Key {
        let mut atoms = self.atoms.clone();
        for (b, q) in &o.atoms {
            let v = atoms.entry(b.clone()).or_insert_with(Rat::zero);
            *v += q;
            if v.is_zero() {
                atoms.remove(b);
            }
        }
        Key { c: &self.c + &o.c, e: &self.e + &o.e, atoms }
    }

    pub fn scale(&self, r: &Rat) -> Key {
        if r.is_zero() {
            return Key::one();
        }
        Key {
            c: &self.c * r,
            e: &self.e * r,
            atoms: self.atoms.iter().map(|(b, q)| (b.clone(), q * r)).collect(),
        }
    }

    /// Sign of `log` of the term as `t -> oo`: `1` if it grows, `-1` if it
    /// decays, `0` for the constant key.
    pub fn growth_sign(&self) -> i32 {
        match self.cmp(&Key::one()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }
}

impl Ord for Key {
    fn cmp(&self, o: &Key) -> Ordering {
        self.c.cmp(&o.c).then_with(|| cmp_atoms(&self.atoms, &o.atoms)).then_with(|| self.e.cmp(&o.e))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Key) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn cmp_atoms(a: &BTreeMap<Rat, Rat>, b: &BTreeMap<Rat, Rat>) -> Ordering {
    let mut betas: Vec<&Rat> = a.keys().chain(b.keys()).collect();
    betas.sort();
    betas.dedup();
    let zero = Rat::zero();
    for beta in betas.into_iter().rev() {
        let qa = a.get(beta).unwrap_or(&zero);
        let qb = b.get(beta).unwrap_or(&zero);
        match qa.cmp(qb) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HardyExpr {
    terms: BTreeMap<Key, ScalarValue>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Growth {
    Slower,
    Comparable,
    Faster,
}

/// Outcome of [`compare_growth`]: the `≺ / ≍ / ≻` relation of `a` to `b` and
/// the comparison of fractional degrees (`Less` means `a ⋘ b`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthCmp {
    pub growth: Growth,
    pub fracdeg: Ordering,
}

impl HardyExpr {
    pub fn zero() -> Self {
        HardyExpr::default()
    }

    pub fn constant(s: ScalarValue) -> Self {
        HardyExpr::term(s, Key::one())
    }

    pub fn term(s: ScalarValue, k: Key) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(k, s);
        }
        HardyExpr { terms }
    }

    pub fn t_pow(c: Rat) -> Self {
        HardyExpr::term(ScalarValue::one(), Key::power(c))
    }

    pub fn log_pow(e: Rat) -> Self {
        HardyExpr::term(ScalarValue::one(), Key::log_power(e))
    }

    /// `exp(q log(t)^beta)`; needs `0 < beta < 1` (or `beta = 1`, giving `t^q`).
    pub fn exps(q: Rat, beta: Rat) -> Result<Self> {
        if beta == Rat::one() {
            return Ok(HardyExpr::t_pow(q));
        }
        if !(beta.is_positive() && beta < Rat::one()) {
            return Err(Error::OutsideClass(format!("exps needs 0 < beta <= 1, got {beta}")));
        }
        let mut k = Key::one();
        if !q.is_zero() {
            k.atoms.insert(beta, q);
        }
        Ok(HardyExpr::term(ScalarValue::one(), k))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing growth.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Key, &ScalarValue)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &Key) -> ScalarValue {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn dominant(&self) -> Option<(&Key, &ScalarValue)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, k: Key, s: ScalarValue) {
        if s.is_zero() {
            return;
        }
        let v = self.terms.entry(k.clone()).or_default();
        *v = &*v + &s;
        if v.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, o: &HardyExpr) -> HardyExpr {
        let mut r = self.clone();
        for (k, s) in &o.terms {
            r.add_term(k.clone(), s.clone());
        }
        r
    }

    pub fn neg(&self) -> HardyExpr {
        HardyExpr { terms: self.terms.iter().map(|(k, s)| (k.clone(), -s)).collect() }
    }

    pub fn sub(&self, o: &HardyExpr) -> HardyExpr {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &ScalarValue) -> HardyExpr {
        let mut r = HardyExpr::zero();
        for (k, c) in &self.terms {
            r.add_term(k.clone(), c.mul_unrestricted(s));
        }
        r
    }

    pub fn scale_rat(&self, q: &Rat) -> HardyExpr {
        self.scale(&ScalarValue::from_rat(q.clone()))
    }

    /// Product; coefficients multiply without basis restriction.
    pub fn mul(&self, o: &HardyExpr) -> HardyExpr {
        let mut r = HardyExpr::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                r.add_term(k1.mul(k2), c1.mul_unrestricted(c2));
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> HardyExpr {
        let mut r = HardyExpr::constant(ScalarValue::one());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn min_power(&self) -> Option<Rat> {
        self.terms.keys().map(|k| k.c.clone()).min()
    }

    pub fn differentiate(&self) -> HardyExpr {
        let mut r = HardyExpr::zero();
        for (k, s) in &self.terms {
            let base = Key { c: &k.c - Rat::one(), ..k.clone() };
            if !k.c.is_zero() {
                r.add_term(base.clone(), s.scale(&k.c));
            }
            if !k.e.is_zero() {
                let kk = Key { e: &k.e - Rat::one(), ..base.clone() };
                r.add_term(kk, s.scale(&k.e));
            }
            for (b, q) in &k.atoms {
                let kk = Key { e: &k.e + b - Rat::one(), ..base.clone() };
                r.add_term(kk, s.scale(&(q * b)));
            }
        }
        r
    }

    pub fn nth_derivative(&self, n: usize) -> HardyExpr {
        let mut r = self.clone();
        for _ in 0..n {
            r = r.differentiate();
        }
        r
    }

    pub fn fracdeg(&self) -> Result<Rat> {
        self.dominant().map(|(k, _)| k.c.clone()).ok_or_else(|| Error::Invalid("fracdeg of zero".into()))
    }

    /// Inputs from users may not carry negative powers of `t`.
    pub fn check_input_class(&self) -> Result<()> {
        for k in self.terms.keys() {
            if k.c.is_negative() {
                return Err(Error::OutsideClass(format!("negative power t^({}) in input", k.c)));
            }
        }
        Ok(())
    }

    /// `self(inner(t))` when the result stays exactly in the class.
    pub fn compose(&self, inner: &HardyExpr) -> Result<HardyExpr> {
        if self.terms.keys().all(Key::is_polynomial) {
            let mut r = HardyExpr::zero();
            for (k, s) in &self.terms {
                let p = k.c.to_integer().to_u32().ok_or_else(|| Error::OutsideClass("degree too large".into()))?;
                r = r.add(&inner.pow(p).scale(s));
            }
            return Ok(r);
        }
        let d = match inner.terms.iter().collect::<Vec<_>>().as_slice() {
            [(k, s)] if k.e.is_zero() && k.atoms.is_empty() && k.c.is_positive() && s.as_rational() == Some(Rat::one()) => {
                k.c.clone()
            }
            _ => {
                return Err(Error::OutsideClass("composition needs a polynomial outer or an inner t^d".into()));
            }
        };
        let mut r = HardyExpr::zero();
        for (k, s) in &self.terms {
            let mut coef = s.clone();
            if !k.e.is_zero() {
                let f = rat_pow_scalar(&d, &k.e)
                    .ok_or_else(|| Error::OutsideClass(format!("({d})^({}) is not exact", k.e)))?;
                coef = coef.mul_unrestricted(&f);
            }
            let mut atoms = BTreeMap::new();
            for (b, q) in &k.atoms {
                let f = rat_pow_scalar(&d, b)
                    .and_then(|f| f.as_rational())
                    .ok_or_else(|| Error::OutsideClass(format!("({d})^({b}) is not rational")))?;
                atoms.insert(b.clone(), q * f);
            }
            r.add_term(Key { c: &k.c * &d, e: k.e.clone(), atoms }, coef);
        }
        Ok(r)
    }

    /// Enclosure of the value at `t >= 2`.
    pub fn eval_ball(&self, t: &Ball, ctx: &mut Ctx) -> Result<Ball> {
        let (lo, _) = t.to_f64_bounds();
        if lo < 2.0 - 1e-9 {
            return Err(Error::Invalid(format!("evaluation needs t >= 2, got {lo}")));
        }
        let lt = t.ln(ctx);
        let mut acc = Ball::zero(ctx);
        for (k, s) in &self.terms {
            let mut v = s.ball(ctx);
            if !k.c.is_zero() {
                v = v.mul(&t.pow_rat(&k.c, ctx), ctx);
            }
            if !k.e.is_zero() {
                v = v.mul(&lt.pow_rat(&k.e, ctx), ctx);
            }
            if !k.atoms.is_empty() {
                let mut x = Ball::zero(ctx);
                for (b, q) in &k.atoms {
                    let y = lt.pow_rat(b, ctx).mul(&Ball::from_rat(q, ctx), ctx);
                    x = x.add(&y, ctx);
                }
                v = v.mul(&x.exp(ctx), ctx);
            }
            acc = acc.add(&v, ctx);
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let lt = t.ln();
        let mut acc = 0.0;
        for (k, s) in &self.terms {
            let mut x = 0.0;
            for (b, q) in &k.atoms {
                x += q.to_f64().unwrap_or(f64::NAN) * lt.powf(b.to_f64().unwrap_or(f64::NAN));
            }
            let c = k.c.to_f64().unwrap_or(f64::NAN);
            let e = k.e.to_f64().unwrap_or(f64::NAN);
            acc += s.to_f64() * (c * lt + x).exp() * if e.is_zero() { 1.0 } else { lt.powf(e) };
        }
        acc
    }

    /// `g^(l)(N) / l!` for `l = 0..=order`.
    pub fn taylor_coeffs(&self, n: &Ball, order: usize, ctx: &mut Ctx) -> Result<Vec<Ball>> {
        let mut out = Vec::with_capacity(order + 1);
        let mut d = self.clone();
        let mut fact = Ball::one(ctx);
        for l in 0..=order {
            if l > 0 {
                d = d.differentiate();
                fact = fact.mul(&Ball::from_u64(l as u64, ctx), ctx);
            }
            out.push(d.eval_ball(n, ctx)?.div(&fact, ctx));
        }
        Ok(out)
    }
}

pub fn compare_growth(a: &HardyExpr, b: &HardyExpr) -> GrowthCmp {
    let one = Key::one();
    let ka = a.dominant().map(|(k, _)| k);
    let kb = b.dominant().map(|(k, _)| k);
    let growth = match (ka, kb) {
        (None, None) => Growth::Comparable,
        (None, Some(_)) => Growth::Slower,
        (Some(_), None) => Growth::Faster,
        (Some(x), Some(y)) => match x.cmp(y) {
            Ordering::Less => Growth::Slower,
            Ordering::Equal => Growth::Comparable,
            Ordering::Greater => Growth::Faster,
        },
    };
    let ca = ka.unwrap_or(&one).c.clone();
    let cb = kb.unwrap_or(&one).c.clone();
    GrowthCmp { growth, fracdeg: ca.cmp(&cb) }
}

/// `d^e` as an exact scalar when `e` is an integer or a half-integer.
pub fn rat_pow_scalar(d: &Rat, e: &Rat) -> Option<ScalarValue> {
    if e.is_integer() {
        let k = e.to_integer().to_i32()?;
        let p = num_traits::pow::pow(d.clone(), k.unsigned_abs() as usize);
        return Some(ScalarValue::from_rat(if k < 0 { p.recip() } else { p }));
    }
    if e.denom() == &2.into() && d.is_positive() {
        // d^(k/2) = d^floor(k/2) * sqrt(d) with sqrt(n/m) = sqrt(n m)/m.
        let k = e.numer().to_i32()?;
        let fl = k.div_euclid(2);
        let base = rat_pow_scalar(d, &rat_int(fl as i64))?;
        let nm = (d.numer() * d.denom()).to_u64()?;
        let s = ScalarValue::sqrt(nm).scale(&Rat::from_integer(d.denom().clone()).recip());
        let out = base.mul_unrestricted(&s);
        return Some(out);
    }
    None
}

/// DD value of a single key, given `ln t`.
pub fn key_dd(k: &Key, lt: DD) -> DD {
    let mut x = DD::ZERO;
    if !k.c.is_zero() {
        x = x + lt * rat_dd(&k.c);
    }
    for (b, q) in &k.atoms {
        x = x + rat_dd(q) * (lt.ln() * rat_dd(b)).exp();
    }
    if !k.e.is_zero() {
        x = x + lt.ln() * rat_dd(&k.e);
    }
    x.exp()
}

pub fn rat_dd(r: &Rat) -> DD {
    let n = r.numer().to_i128();
    let d = r.denom().to_i128();
    match (n, d) {
        (Some(n), Some(d)) => DD::from_i128(n) / DD::from_i128(d),
        _ => DD::from_f64(r.to_f64().unwrap_or(f64::NAN)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn key_order() {
        let log = Key::log_power(rat_int(1));
        let sq = Key::power(rat(1, 2));
        let mut e = Key::one();
        e.atoms.insert(rat(1, 2), rat_int(1));
        assert!(log < e && e < sq);
        assert!(Key::one() < log);
        assert!(Key::log_power(rat_int(-1)) < Key::one());
    }

    #[test]
    fn derivative_rules() {
        let a = HardyExpr::t_pow(rat_int(1)).mul(&HardyExpr::log_pow(rat_int(1)));
        let d = a.differentiate();
        let want = HardyExpr::log_pow(rat_int(1)).add(&HardyExpr::constant(ScalarValue::one()));
        assert_eq!(d, want);
    }

    #[test]
    fn compose_power() {
        let a = HardyExpr::t_pow(rat(1, 2));
        let b = HardyExpr::t_pow(rat_int(3));
        assert_eq!(a.compose(&b).unwrap().fracdeg().unwrap(), rat(3, 2));
        let l = HardyExpr::log_pow(rat(1, 2));
        let c = l.compose(&HardyExpr::t_pow(rat_int(2))).unwrap();
        assert_eq!(c.dominant().unwrap().1, &ScalarValue::sqrt(2));
    }
}
