//! Midpoint-radius enclosures on top of `astro-float`.
//!
//! Every operation rounds the midpoint to nearest and adds a conservative
//! bound for that rounding to the radius, so `|x - mid| <= rad` is preserved.

use astro_float::{BigFloat, Consts, RoundingMode, Sign as FSign};
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::scalar::Rat;

const RM: RoundingMode = RoundingMode::ToEven;

pub struct Ctx {
    pub p: usize,
    cc: Consts,
}

impl Ctx {
    pub fn new(p: usize) -> Self {
        Ctx { p: p.max(64), cc: Consts::new().expect("astro-float constants") }
    }
}

#[derive(Clone, Debug)]
pub struct Ball {
    pub mid: BigFloat,
    pub rad: f64,
}

fn up(x: f64) -> f64 {
    // Round an f64 error estimate upwards by a relative margin.
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 + 4.0 * f64::EPSILON) + f64::MIN_POSITIVE
    }
}

/// Approximate f64 value of a BigFloat (correct to a few ulps).
pub fn bf_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((m, _n, s, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *m.last().unwrap_or(&0) as f64;
    let next = if m.len() >= 2 { m[m.len() - 2] as f64 } else { 0.0 };
    let mant = top + next / 18446744073709551616.0;
    let v = mant * 2f64.powi(e - 64);
    if s == FSign::Neg {
        -v
    } else {
        v
    }
}

/// `|x|` rounded to f64 and bumped so it is an upper bound.
fn bf_abs_up(x: &BigFloat) -> f64 {
    up(bf_to_f64(x).abs()) * (1.0 + 1e-12)
}

/// Integer value of an integral BigFloat.
pub fn bf_to_bigint(x: &BigFloat) -> BigInt {
    if x.is_zero() {
        return BigInt::zero();
    }
    let (m, n, s, e, _) = x.as_raw_parts().expect("finite value");
    if e <= 0 {
        return BigInt::zero();
    }
    let mut digits: Vec<u32> = Vec::with_capacity(m.len() * 2);
    for w in m {
        digits.push(*w as u32);
        digits.push((*w >> 32) as u32);
    }
    let mant = BigUint::new(digits);
    let total = (m.len() * 64) as i64;
    let _ = n;
    let shift = total - e as i64;
    let mag = if shift >= 0 { mant >> (shift as usize) } else { mant << ((-shift) as usize) };
    let sign = if s == FSign::Neg { Sign::Minus } else { Sign::Plus };
    BigInt::from_biguint(sign, mag)
}

pub fn bigint_to_bf(b: &BigInt, p: usize) -> BigFloat {
    let (sign, digits) = b.to_u64_digits();
    let bits = (digits.len() * 64).max(64) + 64;
    let wp = p.max(bits);
    let base = BigFloat::from_u64(1 << 32, wp).mul(&BigFloat::from_u64(1 << 32, wp), wp, RM);
    let mut acc = BigFloat::from_u64(0, wp);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, wp, RM).add(&BigFloat::from_u64(*d, wp), wp, RM);
    }
    if sign == Sign::Minus {
        acc = acc.neg();
    }
    acc
}

impl Ball {
    fn exact(mid: BigFloat) -> Ball {
        Ball { mid, rad: 0.0 }
    }

    fn rounded(mid: BigFloat, rad: f64, p: usize) -> Ball {
        let mut err = bf_abs_up(&mid) * 2f64.powi(1 - p as i32);
        // An f64 radius cannot resolve below the smallest subnormal.
        if !mid.is_zero() {
            err = err.max(f64::from_bits(1));
        }
        Ball { mid, rad: up(rad + err) }
    }

    pub fn zero(ctx: &Ctx) -> Ball {
        Ball::exact(BigFloat::from_u64(0, ctx.p))
    }

    pub fn one(ctx: &Ctx) -> Ball {
        Ball::exact(BigFloat::from_u64(1, ctx.p))
    }

    pub fn from_u64(n: u64, ctx: &Ctx) -> Ball {
        Ball::exact(BigFloat::from_u64(n, ctx.p.max(64)))
    }

    pub fn from_i64(n: i64, ctx: &Ctx) -> Ball {
        Ball::exact(BigFloat::from_i64(n, ctx.p.max(64)))
    }

    pub fn from_f64(x: f64, ctx: &Ctx) -> Ball {
        Ball::exact(BigFloat::from_f64(x, ctx.p.max(64)))
    }

    pub fn from_bigint(b: &BigInt, ctx: &Ctx) -> Ball {
        Ball::exact(bigint_to_bf(b, ctx.p))
    }

    pub fn from_rat(r: &Rat, ctx: &Ctx) -> Ball {
        let n = bigint_to_bf(r.numer(), ctx.p);
        if r.denom() == &BigInt::from(1) {
            return Ball::exact(n);
        }
        let d = bigint_to_bf(r.denom(), ctx.p);
        let q = n.div(&d, ctx.p, RM);
        Ball::rounded(q, 0.0, ctx.p)
    }

    pub fn add(&self, o: &Ball, ctx: &Ctx) -> Ball {
        Ball::rounded(self.mid.add(&o.mid, ctx.p, RM), self.rad + o.rad, ctx.p)
    }

    pub fn sub(&self, o: &Ball, ctx: &Ctx) -> Ball {
        Ball::rounded(self.mid.sub(&o.mid, ctx.p, RM), self.rad + o.rad, ctx.p)
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad }
    }

    pub fn mul(&self, o: &Ball, ctx: &Ctx) -> Ball {
        let a = bf_abs_up(&self.mid);
        let b = bf_abs_up(&o.mid);
        let rad = a * o.rad + b * self.rad + self.rad * o.rad;
        Ball::rounded(self.mid.mul(&o.mid, ctx.p, RM), up(rad), ctx.p)
    }

    /// Lower bound of `|x|` over the ball (0 if the ball meets 0).
    pub fn abs_lower(&self) -> f64 {
        let m = bf_to_f64(&self.mid).abs() * (1.0 - 1e-12);
        (m - self.rad).max(0.0)
    }

    pub fn abs_upper(&self) -> f64 {
        bf_abs_up(&self.mid) + self.rad
    }

    pub fn div(&self, o: &Ball, ctx: &Ctx) -> Ball {
        let lo = o.abs_lower();
        assert!(lo > 0.0, "division by a ball containing zero");
        let q = self.mid.div(&o.mid, ctx.p, RM);
        let qa = bf_abs_up(&q);
        // |x/y - mx/my| <= (rx + |mx/my| ry) / (|my| - ry)
        let rad = (self.rad + qa * o.rad) / lo;
        Ball::rounded(q, up(rad), ctx.p)
    }

    pub fn sqrt(&self, ctx: &Ctx) -> Ball {
        let lo = self.abs_lower();
        let s = self.mid.sqrt(ctx.p, RM);
        // |sqrt(x) - sqrt(m)| <= r / (sqrt(m - r) + sqrt(m))
        let rad = if self.rad == 0.0 { 0.0 } else { self.rad / lo.sqrt().max(1e-300) };
        Ball::rounded(s, up(rad), ctx.p)
    }

    pub fn ln(&self, ctx: &mut Ctx) -> Ball {
        let lo = self.abs_lower();
        assert!(lo > 0.0 && !self.mid.is_negative(), "log of a nonpositive ball");
        let l = self.mid.ln(ctx.p, RM, &mut ctx.cc);
        let rad = self.rad / lo;
        Ball::rounded(l, up(rad), ctx.p)
    }

    pub fn exp(&self, ctx: &mut Ctx) -> Ball {
        let e = self.mid.exp(ctx.p, RM, &mut ctx.cc);
        let ea = bf_abs_up(&e);
        let rad = if self.rad == 0.0 { 0.0 } else { ea * (self.rad.exp() - 1.0) * 1.0000001 };
        Ball::rounded(e, up(rad), ctx.p)
    }

    /// `x^c = exp(c ln x)` for `x > 0`.
    pub fn pow_rat(&self, c: &Rat, ctx: &mut Ctx) -> Ball {
        if c.is_zero() {
            return Ball::one(ctx);
        }
        if c.is_integer() {
            if let Some(k) = c.to_integer().to_i64() {
                if (0..=64).contains(&k) {
                    let mut r = Ball::one(ctx);
                    for _ in 0..k {
                        r = r.mul(self, ctx);
                    }
                    return r;
                }
            }
        }
        let cb = Ball::from_rat(c, ctx);
        let l = self.ln(ctx);
        cb.mul(&l, ctx).exp(ctx)
    }

    pub fn to_f64(&self) -> f64 {
        bf_to_f64(&self.mid)
    }

    pub fn to_f64_bounds(&self) -> (f64, f64) {
        let m = bf_to_f64(&self.mid);
        let slack = m.abs() * 1.5 * f64::EPSILON + self.rad;
        ((m - slack).next_down(), (m + slack).next_up())
    }

    /// Sign if the ball excludes zero.
    pub fn sign(&self) -> Option<i32> {
        if self.abs_lower() > 0.0 {
            Some(if self.mid.is_negative() { -1 } else { 1 })
        } else {
            None
        }
    }

    /// Floor when the whole ball has the same integer part.
    pub fn floor_certified(&self, ctx: &Ctx) -> Option<BigInt> {
        let r = BigFloat::from_f64(self.rad, ctx.p);
        let lo = self.mid.sub(&r, ctx.p, RoundingMode::Down).floor();
        let hi = self.mid.add(&r, ctx.p, RoundingMode::Up).floor();
        if lo == hi {
            Some(bf_to_bigint(&lo))
        } else {
            None
        }
    }

    /// Floor and fractional part as a 128-bit word with its error in units.
    pub fn fixed128(&self) -> (BigInt, u128, u128) {
        let p = self.mid.precision().unwrap_or(256).max(256);
        let fl = self.mid.floor();
        let frac = self.mid.sub(&fl, p, RM);
        let scale = BigFloat::from_u128(u128::MAX, p).add(&BigFloat::from_u64(1, p), p, RM);
        let w = bf_to_bigint(&frac.mul(&scale, p, RM).floor());
        let w = w.to_u128().unwrap_or(u128::MAX);
        let units = (self.rad * 2f64.powi(128)).ceil();
        let err = if units.is_finite() && units < 1e38 { units as u128 + 2 } else { u128::MAX };
        (bf_to_bigint(&fl), w, err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encloses_sqrt2() {
        let mut ctx = Ctx::new(128);
        let b = Ball::from_u64(2, &ctx).sqrt(&ctx);
        let sq = b.mul(&b, &ctx);
        let two = Ball::from_u64(2, &ctx);
        let d = sq.sub(&two, &ctx);
        assert!(d.abs_upper() < 1e-35);
        let l = Ball::from_u64(4, &ctx).ln(&mut ctx);
        assert!((l.to_f64() - 4f64.ln()).abs() < 1e-15);
        assert!(l.rad < 1e-35);
    }

    #[test]
    fn bigint_roundtrip() {
        let b: BigInt = "-123456789012345678901234567890".parse().unwrap();
        let f = bigint_to_bf(&b, 128);
        assert_eq!(bf_to_bigint(&f), b);
    }

    #[test]
    fn floors() {
        let ctx = Ctx::new(128);
        let x = Ball::from_rat(&Rat::new(7.into(), 2.into()), &ctx);
        assert_eq!(x.floor_certified(&ctx), Some(BigInt::from(3)));
        let y = Ball::from_rat(&Rat::new((-7).into(), 2.into()), &ctx);
        assert_eq!(y.floor_certified(&ctx), Some(BigInt::from(-4)));
    }
}
