//! Exact real scalars.
//!
//! A [`ScalarValue`] is a finite rational combination of monomials
//! `sqrt(m) * a^i * b^j ...` where `m` is squarefree and `a, b, ...` are
//! user symbols. Square roots of distinct squarefree integers are linearly
//! independent over the rationals; symbols are treated as algebraically
//! independent transcendentals whose numeric value is only used for
//! evaluation. Under those assumptions equality and rationality are exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numeric::ball::{Ball, Ctx};
use crate::Error;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// A named irrational scalar with a decimal (exact rational) value.
#[derive(Clone, Debug)]
pub struct Symbol {
    name: Arc<str>,
    value: Arc<Rat>,
}

impl Symbol {
    pub fn new(name: &str, value: Rat) -> Self {
        Symbol { name: Arc::from(name), value: Arc::new(value) }
    }

    /// Parses a decimal literal like `0.5772156649015329` exactly.
    pub fn with_decimal(name: &str, value: &str) -> Result<Self, Error> {
        Ok(Symbol::new(name, parse_decimal(value)?))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self) -> &Rat {
        &self.value
    }
}

impl PartialEq for Symbol {
    fn eq(&self, o: &Self) -> bool {
        self.name == o.name
    }
}
impl Eq for Symbol {}
impl PartialOrd for Symbol {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Symbol {
    fn cmp(&self, o: &Self) -> Ordering {
        self.name.cmp(&o.name)
    }
}
impl std::hash::Hash for Symbol {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.name.hash(h)
    }
}

pub fn parse_decimal(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty()
        || !ip.chars().all(|c| c.is_ascii_digit())
        || !fp.chars().all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse { pos: 0, msg: format!("bad decimal literal `{s}`") });
    }
    let digits = format!("{ip}{fp}");
    let num: BigInt = digits.parse().unwrap_or_else(|_| BigInt::zero());
    let den = num_traits::pow(BigInt::from(10), fp.len());
    let r = Rat::new(num, den);
    Ok(if neg { -r } else { r })
}

/// `sqrt(sqrt) * prod(sym^exp)`, with `sqrt` squarefree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    syms: Vec<(Symbol, u32)>,
    sqrt: u64,
}

impl Monomial {
    pub fn unit() -> Self {
        Monomial { syms: Vec::new(), sqrt: 1 }
    }

    pub fn sqrt_of(m: u64) -> Self {
        debug_assert!(is_squarefree(m));
        Monomial { syms: Vec::new(), sqrt: m }
    }

    pub fn symbol(s: &Symbol, pow: u32) -> Self {
        if pow == 0 {
            return Monomial::unit();
        }
        Monomial { syms: vec![(s.clone(), pow)], sqrt: 1 }
    }

    pub fn is_unit(&self) -> bool {
        self.sqrt == 1 && self.syms.is_empty()
    }

    pub fn sqrt_part(&self) -> u64 {
        self.sqrt
    }

    pub fn symbols(&self) -> &[(Symbol, u32)] {
        &self.syms
    }

    pub fn has_symbols(&self) -> bool {
        !self.syms.is_empty()
    }

    /// Product of monomials: `sqrt(m) sqrt(n) = g sqrt(mn/g^2)`.
    pub fn mul(&self, o: &Monomial) -> (u64, Monomial) {
        let g = self.sqrt.gcd(&o.sqrt);
        let sq = (self.sqrt / g).checked_mul(o.sqrt / g).expect("sqrt monomial overflow");
        let mut syms: BTreeMap<Symbol, u32> = BTreeMap::new();
        for (s, e) in self.syms.iter().chain(o.syms.iter()) {
            *syms.entry(s.clone()).or_insert(0) += e;
        }
        (g, Monomial { syms: syms.into_iter().collect(), sqrt: sq })
    }

    /// Image under the field automorphism flipping the sign of `sqrt(p)`.
    fn conj_sign(&self, p: u64) -> bool {
        self.sqrt % p == 0
    }

    /// Short tag: `unit`, `sqrt2`, `a^2*sqrt3`.
    pub fn tag(&self) -> String {
        if self.is_unit() {
            return "unit".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (s, e) in &self.syms {
            if *e == 1 {
                parts.push(s.name().to_string());
            } else {
                parts.push(format!("{}^{}", s.name(), e));
            }
        }
        if self.sqrt != 1 {
            parts.push(format!("sqrt{}", self.sqrt));
        }
        parts.join("*")
    }

    /// Grammar form: `sqrt(3)*a*a`.
    pub fn expr_form(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.sqrt != 1 {
            parts.push(format!("sqrt({})", self.sqrt));
        }
        for (s, e) in &self.syms {
            for _ in 0..*e {
                parts.push(s.name().to_string());
            }
        }
        parts.join("*")
    }

    pub fn ball(&self, ctx: &mut Ctx) -> Ball {
        let mut b = if self.sqrt == 1 {
            Ball::one(ctx)
        } else {
            Ball::from_u64(self.sqrt, ctx).sqrt(ctx)
        };
        for (s, e) in &self.syms {
            let v = Ball::from_rat(s.value(), ctx);
            for _ in 0..*e {
                b = b.mul(&v, ctx);
            }
        }
        b
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = (self.sqrt as f64).sqrt();
        for (s, e) in &self.syms {
            v *= s.value().to_f64().unwrap_or(f64::NAN).powi(*e as i32);
        }
        v
    }
}

pub fn is_squarefree(m: u64) -> bool {
    if m == 0 {
        return false;
    }
    let mut d = 2u64;
    let mut m = m;
    while d * d <= m {
        if m % (d * d) == 0 {
            return false;
        }
        if m % d == 0 {
            m /= d;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Writes `n = s^2 m` with `m` squarefree.
pub fn split_square(n: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut m = n;
    let mut d = 2u64;
    while d * d <= m {
        while m % (d * d) == 0 {
            m /= d * d;
            s *= d;
        }
        d += 1;
    }
    (s, m)
}

/// Rational combination of monomials. The empty map is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScalarValue {
    terms: BTreeMap<Monomial, Rat>,
}

impl ScalarValue {
    pub fn zero() -> Self {
        ScalarValue::default()
    }

    pub fn one() -> Self {
        ScalarValue::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        ScalarValue::monomial(Monomial::unit(), r)
    }

    pub fn from_int(n: i64) -> Self {
        ScalarValue::from_rat(rat_int(n))
    }

    pub fn monomial(m: Monomial, r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(m, r);
        }
        ScalarValue { terms }
    }

    /// `sqrt(n)` for any positive integer, reduced to `s sqrt(m)`.
    pub fn sqrt(n: u64) -> Self {
        assert!(n > 0, "sqrt of zero");
        let (s, m) = split_square(n);
        ScalarValue::monomial(Monomial::sqrt_of(m), Rat::from_integer(BigInt::from(s)))
    }

    pub fn symbol(s: &Symbol) -> Self {
        ScalarValue::monomial(Monomial::symbol(s, 1), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|m| m.is_unit())
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.is_rational() {
            Some(self.rational_part())
        } else {
            None
        }
    }

    pub fn rational_part(&self) -> Rat {
        self.terms.get(&Monomial::unit()).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn irrational_part(&self) -> ScalarValue {
        let mut t = self.terms.clone();
        t.remove(&Monomial::unit());
        ScalarValue { terms: t }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    fn add_term(&mut self, m: Monomial, r: Rat) {
        if r.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Rat::zero);
        *e += r;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, r: &Rat) -> ScalarValue {
        if r.is_zero() {
            return ScalarValue::zero();
        }
        ScalarValue { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect() }
    }

    /// Ring product with no basis restriction.
    ///
    /// The public basis-aware product is [`Basis::checked_mul`]; this one is
    /// used by the symbolic algorithms, which only need a ring.
    pub fn mul_unrestricted(&self, o: &ScalarValue) -> ScalarValue {
        let mut out = ScalarValue::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let (g, m) = m1.mul(m2);
                out.add_term(m, c1 * c2 * Rat::from_integer(BigInt::from(g)));
            }
        }
        out
    }

    pub fn pow_unrestricted(&self, k: u32) -> ScalarValue {
        let mut r = ScalarValue::one();
        for _ in 0..k {
            r = r.mul_unrestricted(self);
        }
        r
    }

    /// Applies `sqrt(p) -> -sqrt(p)`.
    fn conjugate(&self, p: u64) -> ScalarValue {
        ScalarValue {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), if m.conj_sign(p) { -c } else { c.clone() }))
                .collect(),
        }
    }

    fn sqrt_primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.terms.keys().flat_map(|m| prime_factors(m.sqrt)).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    pub fn has_symbols(&self) -> bool {
        self.terms.keys().any(|m| m.has_symbols())
    }

    /// Inverse when it exists in the ring (no symbols, or a single symbol-free
    /// multiquadratic element).
    pub fn inverse(&self) -> Option<ScalarValue> {
        if self.is_zero() || self.has_symbols() {
            return None;
        }
        let (num, den) = rationalize(&ScalarValue::one(), self);
        let d = den.as_rational()?;
        Some(num.scale(&d.recip()))
    }

    pub fn to_f64(&self) -> f64 {
        let mut s = 0.0;
        for (m, c) in &self.terms {
            s += c.to_f64().unwrap_or(f64::NAN) * m.to_f64();
        }
        s
    }

    pub fn ball(&self, ctx: &mut Ctx) -> Ball {
        let mut acc = Ball::zero(ctx);
        for (m, c) in &self.terms {
            let t = m.ball(ctx).mul(&Ball::from_rat(c, ctx), ctx);
            acc = acc.add(&t, ctx);
        }
        acc
    }

    /// Enclosure `[lo, hi]` in f64 with width at most about `2^-64 |x|` plus
    /// the f64 rounding of the endpoints.
    pub fn enclosure(&self) -> (f64, f64) {
        let mut ctx = Ctx::new(192);
        let b = self.ball(&mut ctx);
        b.to_f64_bounds()
    }

    /// Exact sign, decided by refining an enclosure.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if let Some(r) = self.as_rational() {
            return if r.is_positive() { 1 } else { -1 };
        }
        let mut p = 128;
        loop {
            let mut ctx = Ctx::new(p);
            let b = self.ball(&mut ctx);
            if let Some(s) = b.sign() {
                return s;
            }
            if p >= 8192 {
                // Only reachable when symbol values make the combination vanish numerically.
                return 0;
            }
            p *= 2;
        }
    }

    /// `floor(x)` and the fractional part as a 128-bit fixed-point word,
    /// with an absolute error bound on the fraction in units of `2^-128`.
    pub fn fixed128(&self) -> (BigInt, u128, u128) {
        if let Some(r) = self.as_rational() {
            return rat_fixed128(&r);
        }
        let mut ctx = Ctx::new(320);
        let b = self.ball(&mut ctx);
        b.fixed128()
    }

    /// Leading (largest) monomial and its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }
}

/// `floor(r)` and the 128-bit fraction of a rational. Error at most one unit.
pub fn rat_fixed128(r: &Rat) -> (BigInt, u128, u128) {
    let fl = r.floor().to_integer();
    let frac = r - Rat::from_integer(fl.clone());
    let scaled = (frac.numer() << 128usize) / frac.denom();
    let w = scaled.to_u128().unwrap_or(u128::MAX);
    (fl, w, 1)
}

/// Returns `(num', den')` with `num/den = num'/den'` and `den'` free of square roots.
pub fn rationalize(num: &ScalarValue, den: &ScalarValue) -> (ScalarValue, ScalarValue) {
    let mut n = num.clone();
    let mut d = den.clone();
    loop {
        let ps = d.sqrt_primes();
        let Some(&p) = ps.first() else { break };
        let c = d.conjugate(p);
        n = n.mul_unrestricted(&c);
        d = d.mul_unrestricted(&c);
    }
    (n, d)
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if m.is_unit() {
                write!(f, "{}", fmt_rat(&a))?;
            } else if a.is_one() {
                write!(f, "{}", m.expr_form())?;
            } else {
                write!(f, "{}*{}", fmt_rat(&a), m.expr_form())?;
            }
        }
        Ok(())
    }
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl std::ops::$tr<&ScalarValue> for &ScalarValue {
            type Output = ScalarValue;
            fn $f(self, o: &ScalarValue) -> ScalarValue {
                $body(self, o)
            }
        }
        impl std::ops::$tr<ScalarValue> for ScalarValue {
            type Output = ScalarValue;
            fn $f(self, o: ScalarValue) -> ScalarValue {
                $body(&self, &o)
            }
        }
        impl std::ops::$tr<&ScalarValue> for ScalarValue {
            type Output = ScalarValue;
            fn $f(self, o: &ScalarValue) -> ScalarValue {
                $body(&self, o)
            }
        }
    };
}

fn add_impl(a: &ScalarValue, b: &ScalarValue) -> ScalarValue {
    let mut out = a.clone();
    for (m, c) in &b.terms {
        out.add_term(m.clone(), c.clone());
    }
    out
}

fn sub_impl(a: &ScalarValue, b: &ScalarValue) -> ScalarValue {
    let mut out = a.clone();
    for (m, c) in &b.terms {
        out.add_term(m.clone(), -c.clone());
    }
    out
}

binop!(Add, add, add_impl);
binop!(Sub, sub, sub_impl);

impl std::ops::Neg for &ScalarValue {
    type Output = ScalarValue;
    fn neg(self) -> ScalarValue {
        ScalarValue { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}
impl std::ops::Neg for ScalarValue {
    type Output = ScalarValue;
    fn neg(self) -> ScalarValue {
        -&self
    }
}

impl From<Rat> for ScalarValue {
    fn from(r: Rat) -> Self {
        ScalarValue::from_rat(r)
    }
}

impl From<i64> for ScalarValue {
    fn from(n: i64) -> Self {
        ScalarValue::from_int(n)
    }
}

/// Declared generators. `unit` is always present; `sqrt(n)` literals declare
/// their own square-root monomial when parsed.
#[derive(Clone, Debug, Default)]
pub struct Basis {
    symbols: BTreeMap<String, Symbol>,
    declared: BTreeMap<Monomial, ()>,
}

impl Basis {
    pub fn new() -> Self {
        Basis::default()
    }

    /// Parses declarations: `a=0.577215`, `sqrt6`, `a^2`, `sqrt2*a`.
    pub fn from_decls<S: AsRef<str>>(decls: &[S]) -> Result<Self, Error> {
        let mut b = Basis::new();
        for d in decls {
            b.declare(d.as_ref())?;
        }
        Ok(b)
    }

    pub fn declare(&mut self, decl: &str) -> Result<(), Error> {
        let decl = decl.trim();
        if let Some((name, val)) = decl.split_once('=') {
            let name = name.trim();
            if !is_identifier(name) || name == "t" || name == "log" || name == "sqrt" || name == "exps" {
                return Err(Error::Parse { pos: 0, msg: format!("bad symbol name `{name}`") });
            }
            let s = Symbol::with_decimal(name, val)?;
            self.declared.insert(Monomial::symbol(&s, 1), ());
            self.symbols.insert(name.to_string(), s);
            return Ok(());
        }
        let m = self.parse_monomial(decl)?;
        self.declared.insert(m, ());
        Ok(())
    }

    pub fn add_symbol(&mut self, s: Symbol) {
        self.declared.insert(Monomial::symbol(&s, 1), ());
        self.symbols.insert(s.name().to_string(), s);
    }

    pub fn declare_monomial(&mut self, m: Monomial) {
        self.declared.insert(m, ());
    }

    fn parse_monomial(&self, s: &str) -> Result<Monomial, Error> {
        let mut m = Monomial::unit();
        for part in s.split('*') {
            let part = part.trim();
            let f = if let Some(n) = part.strip_prefix("sqrt") {
                let n = n.trim_start_matches('(').trim_end_matches(')');
                let n: u64 = n
                    .parse()
                    .map_err(|_| Error::Parse { pos: 0, msg: format!("bad generator `{part}`") })?;
                let (_, sq) = split_square(n);
                Monomial::sqrt_of(sq)
            } else {
                let (name, pow) = match part.split_once('^') {
                    Some((a, b)) => (
                        a.trim(),
                        b.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Parse { pos: 0, msg: format!("bad power in `{part}`") })?,
                    ),
                    None => (part, 1),
                };
                let sym = self.symbol(name).ok_or_else(|| Error::UndeclaredSymbol(name.to_string()))?;
                Monomial::symbol(sym, pow)
            };
            m = m.mul(&f).1;
        }
        Ok(m)
    }

    pub fn symbol(&self, name: &str) -> Option<&Symbol> {
        self.symbols.get(name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.values()
    }

    pub fn is_declared(&self, m: &Monomial) -> bool {
        m.is_unit() || self.declared.contains_key(m)
    }

    /// Product that stays inside the declared generators.
    pub fn checked_mul(&self, a: &ScalarValue, b: &ScalarValue) -> Result<ScalarValue, Error> {
        let p = a.mul_unrestricted(b);
        for m in p.monomials() {
            if !self.is_declared(m) {
                return Err(Error::BasisOverflow(m.tag()));
            }
        }
        Ok(p)
    }

    pub fn declared(&self) -> impl Iterator<Item = &Monomial> {
        self.declared.keys()
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

/// Fraction `num/den` of scalars, used for elimination over the field the
/// coefficients generate. The denominator is kept free of square roots.
#[derive(Clone, Debug)]
pub struct FieldElem {
    num: ScalarValue,
    den: ScalarValue,
}

impl FieldElem {
    pub fn new(num: ScalarValue, den: ScalarValue) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (n, d) = rationalize(&num, &den);
        let mut e = FieldElem { num: n, den: d };
        e.normalize();
        e
    }

    pub fn from_scalar(s: ScalarValue) -> Self {
        FieldElem { num: s, den: ScalarValue::one() }
    }

    pub fn zero() -> Self {
        FieldElem::from_scalar(ScalarValue::zero())
    }

    pub fn one() -> Self {
        FieldElem::from_scalar(ScalarValue::one())
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = ScalarValue::one();
            return;
        }
        if let Some(d) = self.den.as_rational() {
            self.num = self.num.scale(&d.recip());
            self.den = ScalarValue::one();
            return;
        }
        self.cancel_symbols();
        if let Some(d) = self.den.as_rational() {
            self.num = self.num.scale(&d.recip());
            self.den = ScalarValue::one();
            return;
        }
        // Scale so the leading denominator coefficient is 1.
        let lc = self.den.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rat::one);
        let inv = lc.recip();
        self.num = self.num.scale(&inv);
        self.den = self.den.scale(&inv);
    }

    /// Divide out the symbol powers common to every term of num and den.
    fn cancel_symbols(&mut self) {
        let mut monos = self.num.monomials().chain(self.den.monomials());
        let Some(first) = monos.next() else { return };
        let mut common: Vec<(Symbol, u32)> = first.syms.clone();
        for m in monos {
            common = common
                .into_iter()
                .filter_map(|(s, p)| m.syms.iter().find(|(t, _)| *t == s).map(|(_, q)| (s, p.min(*q))))
                .collect();
        }
        if common.is_empty() {
            return;
        }
        let strip = |v: &ScalarValue| {
            let mut out = ScalarValue::zero();
            for (m, r) in v.terms() {
                let syms = m
                    .syms
                    .iter()
                    .filter_map(|(s, p)| {
                        let c = common.iter().find(|(t, _)| t == s).map_or(0, |(_, q)| *q);
                        (*p > c).then(|| (s.clone(), p - c))
                    })
                    .collect();
                out = &out + &ScalarValue::monomial(Monomial { syms, sqrt: m.sqrt }, r.clone());
            }
            out
        };
        self.num = strip(&self.num);
        self.den = strip(&self.den);
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &ScalarValue {
        &self.num
    }

    pub fn den(&self) -> &ScalarValue {
        &self.den
    }

    /// The element as a scalar when the denominator is rational.
    pub fn as_scalar(&self) -> Option<ScalarValue> {
        self.den.as_rational().map(|d| self.num.scale(&d.recip()))
    }

    pub fn add(&self, o: &FieldElem) -> FieldElem {
        if self.den == o.den {
            let mut e = FieldElem { num: &self.num + &o.num, den: self.den.clone() };
            e.normalize();
            return e;
        }
        FieldElem::new(
            self.num.mul_unrestricted(&o.den) + o.num.mul_unrestricted(&self.den),
            self.den.mul_unrestricted(&o.den),
        )
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &FieldElem) -> FieldElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FieldElem) -> FieldElem {
        FieldElem::new(self.num.mul_unrestricted(&o.num), self.den.mul_unrestricted(&o.den))
    }

    pub fn inv(&self) -> FieldElem {
        FieldElem::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &FieldElem) -> FieldElem {
        self.mul(&o.inv())
    }

    pub fn eq_elem(&self, o: &FieldElem) -> bool {
        self.num.mul_unrestricted(&o.den) == o.num.mul_unrestricted(&self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64() / self.den.to_f64()
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_scalar() {
            Some(s) => write!(f, "{s}"),
            None => write!(f, "({})/({})", self.num, self.den),
        }
    }
}

pub fn bigint_sign(b: &BigInt) -> i32 {
    match b.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_products_reduce() {
        let a = ScalarValue::sqrt(2);
        let b = ScalarValue::sqrt(6);
        let p = a.mul_unrestricted(&b);
        assert_eq!(p, ScalarValue::sqrt(3).scale(&rat_int(2)));
        assert_eq!(ScalarValue::sqrt(8), ScalarValue::sqrt(2).scale(&rat_int(2)));
        assert!(ScalarValue::sqrt(9).is_rational());
    }

    #[test]
    fn checked_mul_rejects_new_generators() {
        let b = Basis::new();
        let r = b.checked_mul(&ScalarValue::sqrt(2), &ScalarValue::sqrt(3));
        assert!(matches!(r, Err(Error::BasisOverflow(_))));
        let mut b2 = Basis::new();
        b2.declare("sqrt2").unwrap();
        let sq = b2.checked_mul(&ScalarValue::sqrt(2), &ScalarValue::sqrt(2)).unwrap();
        assert_eq!(sq, ScalarValue::from_int(2));
    }

    #[test]
    fn inverse_of_multiquadratic() {
        let x = ScalarValue::one() + ScalarValue::sqrt(2) + ScalarValue::sqrt(3);
        let inv = x.inverse().unwrap();
        assert_eq!(x.mul_unrestricted(&inv), ScalarValue::one());
    }

    #[test]
    fn sign_and_enclosure() {
        let x = ScalarValue::sqrt(2) - ScalarValue::from_rat(rat(1414213562373095, 1_000_000_000_000_000));
        assert_eq!(x.signum(), 1);
        let (lo, hi) = ScalarValue::sqrt(2).enclosure();
        assert!(lo <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= hi);
        assert!(hi - lo < 4e-15);
    }

    #[test]
    fn fixed128_of_sqrt2() {
        let (fl, w, _) = ScalarValue::sqrt(2).fixed128();
        assert_eq!(fl, BigInt::from(1));
        let f = w as f64 / 2f64.powi(128);
        assert!((f - (std::f64::consts::SQRT_2 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn field_elements_with_symbols() {
        let a = Symbol::with_decimal("a", "0.7").unwrap();
        let x = FieldElem::from_scalar(ScalarValue::symbol(&a) + ScalarValue::sqrt(2));
        let y = x.inv();
        assert!(x.mul(&y).eq_elem(&FieldElem::one()));
        assert!(x.sub(&x).is_zero());
    }
}
