//! Expression grammar and the matching printer.
//!
//! ```text
//! expr    := term { ("+"|"-") term }
//! term    := factor { ("*" factor) | ("/" rat) }
//! factor  := "t" ["^" rat] | "log(t)" ["^" rat] | "exps(" rat "," rat ")"
//!          | rat | "sqrt(" int ")" | sym ["^" int]
//! rat     := int | "(" int "/" int ")" | int "/" int
//! ```
//!
//! Integers inside parentheses and after `^` may carry a sign.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::expr::{HardyExpr, Key};
use crate::scalar::{fmt_rat, split_square, Basis, Monomial, Rat, ScalarValue};
use crate::{Error, Result};

/// Parses a user expression: negative powers of `t` are rejected.
pub fn parse_expr(text: &str, basis: &Basis) -> Result<HardyExpr> {
    let e = parse_general(text, basis)?;
    e.check_input_class()?;
    Ok(e)
}

/// Parses without the input-class restriction (derivative outputs).
pub fn parse_general(text: &str, basis: &Basis) -> Result<HardyExpr> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, basis: basis.clone() };
    let e = p.expr()?;
    p.ws();
    if p.pos < p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    basis: Basis,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            if self.pos == start && self.s[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap())
    }

    fn sint(&mut self) -> Result<BigInt> {
        if self.eat(b'-') {
            Ok(-self.uint()?)
        } else {
            self.eat(b'+');
            self.uint()
        }
    }

    fn ratio(&mut self, n: BigInt) -> Result<Rat> {
        let d = self.uint()?;
        if d.is_zero() {
            return Err(self.err("zero denominator"));
        }
        Ok(Rat::new(n, d))
    }

    /// `int | "(" int "/" int ")" | int "/" int`, signs allowed as noted.
    fn rat(&mut self) -> Result<Rat> {
        if self.eat(b'(') {
            let n = self.sint()?;
            let r = if self.eat(b'/') { self.ratio(n)? } else { Rat::from_integer(n) };
            self.expect(b')')?;
            return Ok(r);
        }
        let n = self.sint()?;
        let save = self.pos;
        if self.eat(b'/') && self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return self.ratio(n);
        }
        self.pos = save;
        Ok(Rat::from_integer(n))
    }

    fn expr(&mut self) -> Result<HardyExpr> {
        let mut acc = HardyExpr::zero();
        let mut sign = if self.eat(b'-') {
            -1
        } else {
            self.eat(b'+');
            1
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<HardyExpr> {
        let mut coef = ScalarValue::one();
        let mut key = Key::one();
        self.factor(&mut coef, &mut key)?;
        loop {
            if self.eat(b'*') {
                self.factor(&mut coef, &mut key)?;
            } else if self.peek() == Some(b'/') {
                self.pos += 1;
                let r = self.rat()?;
                if r.is_zero() {
                    return Err(self.err("division by zero"));
                }
                coef = coef.scale(&r.recip());
            } else {
                break;
            }
        }
        Ok(HardyExpr::term(coef, key))
    }

    fn times(&self, coef: &mut ScalarValue, s: &ScalarValue) -> Result<()> {
        *coef = self.basis.checked_mul(coef, s)?;
        Ok(())
    }

    fn factor(&mut self, coef: &mut ScalarValue, key: &mut Key) -> Result<()> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'(' => {
                let r = self.rat()?;
                *coef = coef.scale(&r);
                return Ok(());
            }
            Some(_) => {}
            None => return Err(self.err("unexpected end of input")),
        }
        let Some(name) = self.ident() else {
            return Err(self.err("expected a factor"));
        };
        match name.as_str() {
            "t" => {
                let c = if self.eat(b'^') { self.rat()? } else { Rat::one() };
                *key = key.mul(&Key::power(c));
            }
            "log" => {
                self.expect(b'(')?;
                if self.ident().as_deref() != Some("t") || !self.eat(b')') {
                    self.pos = start;
                    return Err(Error::OutsideClass("only log(t) is supported".into()));
                }
                let e = if self.eat(b'^') { self.rat()? } else { Rat::one() };
                *key = key.mul(&Key::log_power(e));
            }
            "exps" => {
                self.expect(b'(')?;
                let q = self.rat()?;
                self.expect(b',')?;
                let b = self.rat()?;
                self.expect(b')')?;
                let e = HardyExpr::exps(q, b)?;
                if let Some((k, _)) = e.dominant() {
                    *key = key.mul(k);
                }
            }
            "sqrt" => {
                self.expect(b'(')?;
                let n = self.uint()?;
                self.expect(b')')?;
                let n: u64 = n.try_into().map_err(|_| self.err("sqrt argument too large"))?;
                if n == 0 {
                    *coef = ScalarValue::zero();
                    return Ok(());
                }
                let (_, m) = split_square(n);
                self.basis.declare_monomial(Monomial::sqrt_of(m));
                self.times(coef, &ScalarValue::sqrt(n))?;
            }
            "exp" | "sin" | "cos" | "tan" | "log2" | "ln" => {
                self.pos = start;
                return Err(Error::OutsideClass(format!("`{name}` is outside the supported class")));
            }
            _ => {
                let sym = self.basis.symbol(&name).cloned().ok_or_else(|| Error::UndeclaredSymbol(name.clone()))?;
                let k = if self.eat(b'^') {
                    let k = self.uint()?;
                    u32::try_from(k).map_err(|_| self.err("power too large"))?
                } else {
                    1
                };
                let m = ScalarValue::monomial(Monomial::symbol(&sym, k), Rat::one());
                if k > 1 && !self.basis.is_declared(&Monomial::symbol(&sym, k)) {
                    return Err(Error::BasisOverflow(Monomial::symbol(&sym, k).tag()));
                }
                self.times(coef, &m)?;
            }
        }
        Ok(())
    }
}

fn fmt_exp(r: &Rat) -> String {
    if r.is_integer() && !r.is_negative() {
        r.numer().to_string()
    } else {
        format!("({})", fmt_rat(r))
    }
}

fn fmt_key(k: &Key) -> Vec<String> {
    let mut parts = Vec::new();
    if !k.c.is_zero() {
        if k.c.is_one() {
            parts.push("t".to_string());
        } else {
            parts.push(format!("t^{}", fmt_exp(&k.c)));
        }
    }
    if !k.e.is_zero() {
        if k.e.is_one() {
            parts.push("log(t)".to_string());
        } else {
            parts.push(format!("log(t)^{}", fmt_exp(&k.e)));
        }
    }
    for (b, q) in k.atoms.iter().rev() {
        let qs = if q.is_negative() { format!("({})", fmt_rat(q)) } else { fmt_rat(q) };
        parts.push(format!("exps({},{})", qs, fmt_rat(b)));
    }
    parts
}

impl fmt::Display for HardyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, s) in self.terms().rev() {
            let kp = fmt_key(k);
            // One printed term per monomial of the coefficient.
            for (m, c) in s.terms().collect::<Vec<_>>().into_iter().rev() {
                let neg = c.is_negative();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if neg { " - " } else { " + " })?;
                }
                first = false;
                let a = c.abs();
                let mut parts = Vec::new();
                if !a.is_one() || (m.is_unit() && kp.is_empty()) {
                    parts.push(fmt_rat(&a));
                }
                if !m.is_unit() {
                    parts.push(m.expr_form());
                }
                parts.extend(kp.iter().cloned());
                write!(f, "{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn p(s: &str) -> HardyExpr {
        parse_expr(s, &Basis::new()).unwrap()
    }

    #[test]
    fn two_fractional_terms() {
        let e = p("t^(3/2) + t^(1/2)");
        let ks: Vec<_> = e.terms().map(|(k, _)| (k.c.clone(), k.e.clone())).collect();
        assert_eq!(ks, vec![(rat(1, 2), rat_int(0)), (rat(3, 2), rat_int(0))]);
    }

    #[test]
    fn sqrt_coefficients() {
        let e = p("sqrt(2)*t^2 + sqrt(3)*t");
        assert_eq!(e.dominant().unwrap().1, &ScalarValue::sqrt(2));
        assert_eq!(e.to_string(), "sqrt(2)*t^2 + sqrt(3)*t");
    }

    #[test]
    fn rejects_exp_t() {
        assert!(matches!(parse_expr("exp(t)", &Basis::new()), Err(Error::OutsideClass(_))));
        assert!(matches!(parse_expr("t^(-1)", &Basis::new()), Err(Error::OutsideClass(_))));
        assert!(matches!(parse_expr("b*t", &Basis::new()), Err(Error::UndeclaredSymbol(_))));
        assert!(matches!(parse_expr("t^2 +", &Basis::new()), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("sqrt(2)*sqrt(3)*t", &Basis::new()), Err(Error::BasisOverflow(_))));
    }

    #[test]
    fn symbols_and_powers() {
        let b = Basis::from_decls(&["a=0.5772156649", "a^2"]).unwrap();
        let e = parse_expr("t^3 + a*t^2 + a*a*t", &b).unwrap();
        let s = e.to_string();
        assert_eq!(s, "t^3 + a*t^2 + a*a*t");
        assert_eq!(parse_expr(&s, &b).unwrap(), e);
        assert!(parse_expr("a*a*a", &b).is_err());
    }

    #[test]
    fn roundtrip_forms() {
        let b = Basis::new();
        for s in [
            "t*log(t) - 3/2*t^(1/2)*log(t)^(1/2)",
            "2*exps(2,1/2) + log(t)^2",
            "t^(7/3)*exps((-1),2/3) - 5",
            "1/3*sqrt(5)*t^4",
        ] {
            let e = parse_expr(s, &b).unwrap();
            assert_eq!(parse_expr(&e.to_string(), &b).unwrap(), e, "{s}");
        }
        let d = p("log(t)^2").differentiate();
        assert_eq!(d.to_string(), "2*t^(-1)*log(t)");
        assert_eq!(parse_general(&d.to_string(), &b).unwrap(), d);
    }
}
