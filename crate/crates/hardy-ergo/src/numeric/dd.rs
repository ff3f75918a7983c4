//! Double-double arithmetic (about 106 bits).

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

const LN2: DD = DD { hi: 6.931471805599452862e-01, lo: 2.319046813846299558e-17 };

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> DD {
        let (h, l) = quick_two_sum(hi, lo);
        DD { hi: h, lo: l }
    }

    pub fn from_f64(x: f64) -> DD {
        DD { hi: x, lo: 0.0 }
    }

    pub fn from_u64(n: u64) -> DD {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        DD::new(hi, lo)
    }

    pub fn from_i128(n: i128) -> DD {
        let hi = n as f64;
        let rest = n - hi as i128;
        let mid = rest as f64;
        DD::new(hi, mid)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> DD {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqr(self) -> DD {
        self * self
    }

    pub fn recip(self) -> DD {
        DD::ONE / self
    }

    pub fn sqrt(self) -> DD {
        if self.hi <= 0.0 {
            return DD::ZERO;
        }
        let x = self.hi.sqrt();
        let ax = DD::from_f64(x);
        let (p, e) = two_prod(x, x);
        let diff = (self - DD::new(p, e)).hi;
        ax + DD::from_f64(diff / (2.0 * x))
    }

    pub fn exp(self) -> DD {
        if self.hi > 709.0 {
            return DD::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DD::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2 * DD::from_f64(k);
        // r / 256, then Taylor, then square eight times.
        let r = r * DD::from_f64(1.0 / 256.0);
        let mut term = DD::ONE;
        let mut sum = DD::ZERO;
        for i in 1..=14 {
            term = term * r / DD::from_f64(i as f64);
            sum = sum + term;
        }
        // sum = e^r - 1; (1+s)^2 - 1 = 2s + s^2 keeps precision.
        for _ in 0..8 {
            sum = sum * DD::from_f64(2.0) + sum.sqr();
        }
        let e = sum + DD::ONE;
        let s = 2f64.powi(k as i32);
        DD { hi: e.hi * s, lo: e.lo * s }
    }

    pub fn ln(self) -> DD {
        if self.hi <= 0.0 {
            return DD::from_f64(f64::NAN);
        }
        // f64 ln is within an ulp, and one Newton step squares the error.
        let x = DD::from_f64(self.hi.ln());
        x + self * (-x).exp() - DD::ONE
    }

    /// Fractional part in [0, 1) and the integer part.
    pub fn split_floor(self) -> (f64, DD) {
        let fh = self.hi.floor();
        let rest = DD::new(self.hi - fh, self.lo);
        let adj = rest.hi.floor() + if rest.hi == rest.hi.floor() && rest.lo < 0.0 { -1.0 } else { 0.0 };
        let frac = rest - DD::from_f64(adj);
        (fh + adj, frac)
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, o: DD) -> DD {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (s, e) = quick_two_sum(s, e + f);
        DD { hi: s, lo: e }
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, o: DD) -> DD {
        self + (-o)
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, o: DD) -> DD {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (p, e) = quick_two_sum(p, e);
        DD { hi: p, lo: e }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, o: DD) -> DD {
        let q1 = self.hi / o.hi;
        let r = self - o * DD::from_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * DD::from_f64(q2);
        let q3 = r.hi / o.hi;
        DD::new(q1, q2) + DD::from_f64(q3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: DD, b: DD, tol: f64) -> bool {
        ((a - b).to_f64()).abs() <= tol * b.to_f64().abs().max(1e-300)
    }

    #[test]
    fn sqrt2_squared() {
        let s = DD::from_f64(2.0).sqrt();
        assert!(close(s * s, DD::from_f64(2.0), 1e-30));
    }

    #[test]
    fn exp_ln_inverse() {
        for &x in &[0.5, 1.0, 3.7, 20.0, 1e6, 1e15] {
            let d = DD::from_f64(x);
            assert!(close(d.ln().exp(), d, 1e-29), "x = {x}");
        }
        // e^1 to 32 digits
        let e = DD::ONE.exp();
        let want = DD::new(2.718281828459045091e+00, 1.445646891729250158e-16);
        assert!(close(e, want, 1e-31));
    }

    #[test]
    fn floor_split() {
        let x = DD::new(5.0, -1e-20);
        let (i, f) = x.split_floor();
        assert_eq!(i, 4.0);
        assert!(f.to_f64() > 0.999);
    }
}
