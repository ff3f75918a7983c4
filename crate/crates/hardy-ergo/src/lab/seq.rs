//! Hardy sequences evaluated at integers, with certified floors.
//!
//! Floors come from a double-double evaluation with an error bound, checked
//! against a plain `f64` evaluation while `|a(n)| < 2^50`. Near-integer values
//! and disagreements escalate to ball arithmetic at growing precision.
//! At `n = 1`, terms carrying a power of `log t` are taken to be 0.

use num_traits::{ToPrimitive, Zero};

use crate::hardy::{key_dd, rat_dd, HardyExpr, Key};
use crate::numeric::ball::{Ball, Ctx};
use crate::numeric::dd::DD;
use crate::scalar::{Rat, ScalarValue};
use num_bigint::BigInt;
use crate::{Error, Result};

const PRECISIONS: [usize; 4] = [192, 384, 768, 1024];
const F64_LIMIT: f64 = (1u64 << 50) as f64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FloorStats {
    pub evaluated: u64,
    pub escalated: u64,
    /// `f64` and double-double floors differed.
    pub f64_disagreements: u64,
    /// A double-double floor that passed its own bound was overturned by
    /// the ball evaluation. Must stay 0.
    pub mismatches: u64,
}

impl FloorStats {
    pub fn merge(&mut self, o: &FloorStats) {
        self.evaluated += o.evaluated;
        self.escalated += o.escalated;
        self.f64_disagreements += o.f64_disagreements;
        self.mismatches += o.mismatches;
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "evaluated": self.evaluated,
            "escalated": self.escalated,
            "f64_disagreements": self.f64_disagreements,
            "mismatches": self.mismatches,
        })
    }
}

/// Double-double value of a scalar.
pub fn scalar_dd(s: &ScalarValue) -> DD {
    let mut acc = DD::ZERO;
    for (m, r) in s.terms() {
        let mut v = rat_dd(r);
        if m.sqrt_part() != 1 {
            v = v * DD::from_u64(m.sqrt_part()).sqrt();
        }
        for (sym, p) in m.symbols() {
            let x = rat_dd(sym.value());
            for _ in 0..*p {
                v = v * x;
            }
        }
        acc = acc + v;
    }
    acc
}

#[derive(Clone, Debug)]
struct Term {
    coef: DD,
    coef_f64: f64,
    key: Key,
    c: f64,
    e: f64,
    atoms: Vec<(f64, f64)>,
    alg: Option<Algebraic>,
}

/// `t^(p/q) (log t)^(a/b)` with `b` in {1, 2}, evaluated without `exp`.
#[derive(Clone, Copy, Debug)]
struct Algebraic {
    p: i64,
    q: u32,
    a: i64,
    b: u32,
}

impl Algebraic {
    fn of(k: &Key) -> Option<Algebraic> {
        if !k.atoms.is_empty() {
            return None;
        }
        let q = k.c.denom().to_u32().filter(|&q| q <= 12)?;
        let b = k.e.denom().to_u32().filter(|&b| b <= 2)?;
        Some(Algebraic { p: k.c.numer().to_i64().filter(|p| p.abs() <= 64)?, q, a: k.e.numer().to_i64().filter(|a| a.abs() <= 16)?, b })
    }

    fn eval(&self, n: u64, lt: &mut Option<DD>) -> DD {
        let mut v = if self.p == 0 { DD::ONE } else { powi(root(n, self.q), self.p) };
        if self.a != 0 {
            let l = *lt.get_or_insert_with(|| DD::from_u64(n).ln());
            let base = if self.b == 2 { l.sqrt() } else { l };
            v = v * powi(base, self.a);
        }
        v
    }
}

fn powi(x: DD, k: i64) -> DD {
    let mut r = DD::ONE;
    let mut b = x;
    let mut e = k.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            r = r * b;
        }
        b = b.sqr();
        e >>= 1;
    }
    if k < 0 {
        r.recip()
    } else {
        r
    }
}

/// `n^(1/q)` to double-double accuracy: one Newton step from `f64`.
fn root(n: u64, q: u32) -> DD {
    let x = DD::from_u64(n);
    match q {
        1 => x,
        2 => x.sqrt(),
        _ => {
            let y = DD::from_f64((n as f64).powf(1.0 / q as f64));
            let yq1 = powi(y, q as i64 - 1);
            y - (yq1 * y - x) / (yq1 * DD::from_f64(q as f64))
        }
    }
}

#[derive(Clone, Debug)]
pub struct SeqEval {
    pub expr: HardyExpr,
    terms: Vec<Term>,
    at_one: i128,
    at_one_dd: DD,
}

impl SeqEval {
    pub fn new(a: &HardyExpr) -> Result<Self> {
        let mut terms = Vec::new();
        let mut one = ScalarValue::zero();
        for (k, s) in a.terms() {
            if k.e.is_zero() {
                one = &one + s;
            }
            terms.push(Term {
                coef: scalar_dd(s),
                coef_f64: s.to_f64(),
                key: k.clone(),
                c: k.c.to_f64().unwrap_or(f64::NAN),
                e: k.e.to_f64().unwrap_or(f64::NAN),
                atoms: k.atoms.iter().map(|(b, q)| (b.to_f64().unwrap_or(0.0), q.to_f64().unwrap_or(0.0))).collect(),
                alg: Algebraic::of(k),
            });
        }
        let (fl, _, _) = one.fixed128();
        let at_one = fl.to_i128().ok_or_else(|| Error::Numeric("value at n = 1 out of range".into()))?;
        Ok(SeqEval { expr: a.clone(), terms, at_one, at_one_dd: scalar_dd(&one) })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value and the sum of absolute term values.
    pub fn value_dd(&self, n: u64) -> (DD, f64) {
        if n <= 1 {
            return (self.at_one_dd, self.at_one_dd.to_f64().abs());
        }
        let mut lt = None;
        let mut acc = DD::ZERO;
        let mut mag = 0.0;
        for t in &self.terms {
            let k = match t.alg {
                Some(a) => a.eval(n, &mut lt),
                None => key_dd(&t.key, *lt.get_or_insert_with(|| DD::from_u64(n).ln())),
            };
            let v = t.coef * k;
            mag += v.hi.abs();
            acc = acc + v;
        }
        (acc, mag)
    }

    pub fn value_f64(&self, n: u64) -> f64 {
        if n <= 1 {
            return self.at_one_dd.to_f64();
        }
        let lt = (n as f64).ln();
        let llt = lt.ln();
        let mut acc = 0.0;
        for t in &self.terms {
            let mut x = t.c * lt;
            if t.e != 0.0 {
                x += t.e * llt;
            }
            for (b, q) in &t.atoms {
                x += q * (b * llt).exp();
            }
            acc += t.coef_f64 * x.exp();
        }
        acc
    }

    /// `floor(a(n))`, certified.
    pub fn floor(&self, n: u64, st: &mut FloorStats) -> Result<i128> {
        st.evaluated += 1;
        if n <= 1 {
            return Ok(self.at_one);
        }
        let (v, mag) = self.value_dd(n);
        let bound = mag * 1e-26 + 1e-28;
        let (fl, frac) = dd_floor(v);
        let dd_ok = frac > bound && frac < 1.0 - bound && v.hi.is_finite();
        let f64_ok = if mag < F64_LIMIT { self.value_f64(n).floor() as i128 == fl } else { true };
        if dd_ok && f64_ok {
            return Ok(fl);
        }
        if dd_ok {
            st.f64_disagreements += 1;
        }
        st.escalated += 1;
        let b = self.ball_floor(n)?;
        if dd_ok && b != fl {
            st.mismatches += 1;
        }
        Ok(b)
    }

    /// `a(n)` as an exact scalar when every term is a rational power of `t`
    /// that is rational or a square root at `n`.
    pub fn exact_value(&self, n: u64) -> Option<ScalarValue> {
        let mut acc = ScalarValue::zero();
        for (k, s) in self.expr.terms() {
            if !k.e.is_zero() || !k.atoms.is_empty() {
                return None;
            }
            let p = k.c.numer().to_i64()?;
            let q = k.c.denom().to_u32()?;
            let nb = BigInt::from(n);
            let v = if q == 1 {
                ScalarValue::from_rat(rat_pow(&nb, p))
            } else if let Some(m) = exact_root(n, q) {
                ScalarValue::from_rat(rat_pow(&BigInt::from(m), p))
            } else if q == 2 {
                // n^(p/2) = n^((p-1)/2) sqrt(n), p odd
                ScalarValue::sqrt(n).scale(&rat_pow(&nb, (p - 1) / 2))
            } else {
                return None;
            };
            acc = &acc + &s.mul_unrestricted(&v);
        }
        Some(acc)
    }

    fn ball_floor(&self, n: u64) -> Result<i128> {
        if let Some(v) = self.exact_value(n) {
            let (fl, frac, err) = v.fixed128();
            if v.is_rational() || (frac > err && frac < u128::MAX - err) {
                return fl.to_i128().ok_or_else(|| Error::Numeric(format!("floor at n = {n} out of range")));
            }
        }
        for p in PRECISIONS {
            let mut ctx = Ctx::new(p);
            let t = Ball::from_u64(n, &ctx);
            let v = self.expr.eval_ball(&t, &mut ctx)?;
            if let Some(f) = v.floor_certified(&ctx) {
                return f.to_i128().ok_or_else(|| Error::Numeric(format!("floor at n = {n} out of range")));
            }
        }
        Err(Error::Numeric(format!(
            "floor of {} at n = {n} unresolved at {} bits",
            self.expr,
            PRECISIONS[PRECISIONS.len() - 1]
        )))
    }

    /// `frac(lambda * a(n))` for a double-double `lambda`.
    pub fn scaled_frac(&self, lambda: DD, n: u64) -> f64 {
        let (v, _) = self.value_dd(n);
        dd_floor(lambda * v).1
    }
}

fn rat_pow(b: &BigInt, p: i64) -> Rat {
    let x = Rat::from_integer(b.pow(p.unsigned_abs() as u32));
    if p < 0 {
        x.recip()
    } else {
        x
    }
}

/// `m` with `m^q = n`.
fn exact_root(n: u64, q: u32) -> Option<u64> {
    let guess = (n as f64).powf(1.0 / q as f64).round() as u64;
    (guess.saturating_sub(1)..=guess + 1).find(|m| m.checked_pow(q) == Some(n))
}

/// Integer part (exact as `i128`) and fractional part of a double-double.
pub fn dd_floor(v: DD) -> (i128, f64) {
    let h = v.hi.floor();
    let rest = DD::new(v.hi - h, v.lo);
    let (adj, frac) = rest.split_floor();
    (h as i128 + adj as i128, frac.hi + frac.lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::parse_expr;
    use crate::scalar::Basis;

    fn s(e: &str) -> SeqEval {
        SeqEval::new(&parse_expr(e, &Basis::new()).unwrap()).unwrap()
    }

    #[test]
    fn exact_power_floors() {
        let a = s("t^(3/2)");
        let mut st = FloorStats::default();
        for n in [1u64, 2, 3, 4, 99, 100, 10_000, 999_999, 1_000_000] {
            let f = a.floor(n, &mut st).unwrap();
            // floor(n^(3/2)) = isqrt(n^3)
            let want = (n as u128 * n as u128 * n as u128).isqrt() as i128;
            assert_eq!(f, want, "n = {n}");
        }
        assert_eq!(st.mismatches, 0);
        // perfect squares land on integers and force escalation
        assert!(st.escalated >= 4);
    }

    #[test]
    fn irrational_coefficients() {
        let a = s("sqrt(2)*t");
        let mut st = FloorStats::default();
        for n in 1..2000u64 {
            let f = a.floor(n, &mut st).unwrap();
            let want = ((2 * n as u128 * n as u128).isqrt()) as i128;
            assert_eq!(f, want);
        }
        assert_eq!(st.mismatches, 0);
    }

    #[test]
    fn log_terms_vanish_at_one() {
        let a = s("t + log(t)");
        let mut st = FloorStats::default();
        assert_eq!(a.floor(1, &mut st).unwrap(), 1);
        assert_eq!(a.floor(3, &mut st).unwrap(), 4);
    }

    #[test]
    fn large_cubes() {
        let a = s("t^3 + 1/3*t");
        let mut st = FloorStats::default();
        for n in [999_983u64, 1_000_000] {
            let want = (n as i128).pow(3) + (n as i128) / 3;
            assert_eq!(a.floor(n, &mut st).unwrap(), want);
        }
    }
}
