//! Text forms of scalars, vectors, polynomials, systems and test functions.
//!
//! Vectors separate components with `,`, lists of vectors with `;`.
//! Polynomials in `n` go through the germ parser with `n` read as `t`.

use num_traits::{Signed, ToPrimitive, Zero};

use crate::hardy::{parse_general, GenVec, HardyExpr, Key};
use crate::lab::system::{CyclicFn, DynSystem, TrigPoly};
use crate::lab::C64;
use crate::scalar::{Basis, Rat, ScalarValue};
use crate::{Error, Result};

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

/// A constant such as `sqrt(2)`, `-3/7` or `a*sqrt(5)`.
pub fn parse_scalar(text: &str, basis: &Basis) -> Result<ScalarValue> {
    let e = parse_general(text, basis)?;
    let mut out = ScalarValue::zero();
    for (k, s) in e.terms() {
        if *k != Key::one() {
            return Err(invalid(format!("`{text}` is not a constant")));
        }
        out = &out + s;
    }
    Ok(out)
}

pub fn parse_vector(text: &str, basis: &Basis) -> Result<GenVec> {
    text.split(',').map(|s| parse_scalar(s.trim(), basis)).collect()
}

/// `;`-separated vectors of one common length.
pub fn parse_vectors(text: &str, basis: &Basis) -> Result<Vec<GenVec>> {
    let vs: Vec<GenVec> = text.split(';').map(|s| parse_vector(s, basis)).collect::<Result<_>>()?;
    if vs.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(invalid(format!("`{text}`: vectors of different lengths")));
    }
    Ok(vs)
}

/// Replace the variable `n` by `t`, leaving identifiers like `sin` alone.
fn n_to_t(text: &str) -> String {
    let b = text.as_bytes();
    let word = |i: usize| b.get(i).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_');
    let mut out = String::with_capacity(text.len());
    for (i, c) in text.char_indices() {
        if c == 'n' && (i == 0 || !word(i - 1)) && !word(i + 1) {
            out.push('t');
        } else {
            out.push(c);
        }
    }
    out
}

/// Scalar coefficients of a polynomial in `n` (or `t`), index = power.
pub fn parse_poly(text: &str, basis: &Basis) -> Result<Vec<ScalarValue>> {
    let e = parse_general(&n_to_t(text), basis)?;
    let mut c: Vec<ScalarValue> = Vec::new();
    for (k, s) in e.terms() {
        let i = (k.e.is_zero() && k.atoms.is_empty() && k.c.is_integer() && !k.c.is_negative())
            .then(|| k.c.to_usize())
            .flatten()
            .ok_or_else(|| invalid(format!("`{text}` is not a polynomial in n")))?;
        if c.len() <= i {
            c.resize(i + 1, ScalarValue::zero());
        }
        c[i] = s.clone();
    }
    Ok(c)
}

/// A member of `R^k[n]`: `k` polynomials separated by `;`.
pub fn parse_vector_poly(text: &str, k: usize, basis: &Basis) -> Result<Vec<GenVec>> {
    let parts: Vec<&str> = text.split(';').collect();
    if parts.len() != k {
        return Err(invalid(format!("`{text}` has {} components, expected k = {k}", parts.len())));
    }
    let comps: Vec<Vec<ScalarValue>> = parts.iter().map(|p| parse_poly(p, basis)).collect::<Result<_>>()?;
    let d = comps.iter().map(Vec::len).max().unwrap_or(1).max(1);
    Ok((0..d).map(|i| comps.iter().map(|c| c.get(i).cloned().unwrap_or_else(ScalarValue::zero)).collect()).collect())
}

/// A member of a `k`-transformation family: `k` germs separated by `;`.
pub fn parse_member(text: &str, basis: &Basis) -> Result<Vec<HardyExpr>> {
    text.split(';').map(|s| crate::hardy::parse_expr(s.trim(), basis)).collect()
}

/// `q:r1,r2,...` for rotations of `Z/qZ`.
pub fn parse_cyclic(text: &str) -> Result<DynSystem> {
    let (q, rs) = text.split_once(':').ok_or_else(|| invalid(format!("`{text}`: expected q:r1,r2,...")))?;
    let q: u64 = q.trim().parse().map_err(|_| invalid(format!("`{q}` is not a modulus")))?;
    let rs: Vec<i64> = rs.split(',').map(|r| r.trim().parse().map_err(|_| invalid(format!("`{r}` is not an integer")))).collect::<Result<_>>()?;
    DynSystem::cyclic(q, &rs)
}

/// Exactly one of the three system flags.
pub fn parse_system(torus: Option<&str>, cyclic: Option<&str>, skew: Option<&str>, basis: &Basis) -> Result<DynSystem> {
    match (torus, cyclic, skew) {
        (Some(t), None, None) => DynSystem::torus(parse_vectors(t, basis)?),
        (None, Some(c), None) => parse_cyclic(c),
        (None, None, Some(a)) => Ok(DynSystem::Skew { alpha: parse_scalar(a, basis)? }),
        _ => Err(invalid("give exactly one of --torus, --cyclic, --skew")),
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| invalid(format!("`{s}` is not a number")))
}

/// Trigonometric polynomial: `+`-separated terms `c`, `e(k1,..,kd)` or
/// `c*e(k1,..,kd)` with real `c`.
pub fn parse_trig(text: &str, dim: usize) -> Result<TrigPoly> {
    let mut p = TrigPoly::zero(dim);
    let mut terms: Vec<String> = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for (i, ch) in text.chars().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let prev = text[..i].trim_end().chars().last();
        if depth == 0 && (ch == '+' || ch == '-') && !cur.trim().is_empty() && !matches!(prev, Some('e' | 'E' | '*')) {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for t in terms {
        let t = t.trim().trim_start_matches('+').trim();
        let (c, ch) = match t.find("e(") {
            Some(i) => {
                let c: String = t[..i].chars().filter(|c| !c.is_whitespace()).collect();
                let c = match c.trim_end_matches('*') {
                    "" => 1.0,
                    "-" => -1.0,
                    c => parse_f64(c)?,
                };
                let inner = t[i + 2..].strip_suffix(')').ok_or_else(|| invalid(format!("`{t}`: unclosed e(")))?;
                let k: Vec<i64> = inner.split(',').map(|x| x.trim().parse().map_err(|_| invalid(format!("`{x}` is not an integer")))).collect::<Result<_>>()?;
                (c, k)
            }
            None => (parse_f64(&t.replace(' ', ""))?, vec![0; dim]),
        };
        if ch.len() != dim {
            return Err(invalid(format!("`{t}` has {} frequencies on a {dim}-torus", ch.len())));
        }
        p.add_term(ch, C64::new(c, 0.0));
    }
    Ok(p)
}

/// Values of a function on `Z/qZ`, comma-separated reals.
pub fn parse_cyclic_fn(text: &str, q: u64) -> Result<CyclicFn> {
    let vals: Vec<C64> = text.split(',').map(|s| parse_f64(s).map(|x| C64::new(x, 0.0))).collect::<Result<_>>()?;
    CyclicFn::new(q, vals)
}

/// `p/q` or a decimal.
pub fn parse_rat(text: &str) -> Result<Rat> {
    match text.trim().split_once('/') {
        Some((p, q)) => {
            let (p, q) = (crate::scalar::parse_decimal(p)?, crate::scalar::parse_decimal(q)?);
            if q.is_zero() {
                return Err(invalid(format!("`{text}`: zero denominator")));
            }
            Ok(p / q)
        }
        None => crate::scalar::parse_decimal(text),
    }
}

/// Box `[a1,b1) x ... x [ad,bd)` written `a1,b1;...;ad,bd` with rationals.
pub fn parse_box(text: &str) -> Result<Vec<(Rat, Rat)>> {
    text.split(';')
        .map(|iv| {
            let (a, b) = iv.split_once(',').ok_or_else(|| invalid(format!("`{iv}`: expected a,b")))?;
            Ok((parse_rat(a)?, parse_rat(b)?))
        })
        .collect()
}

/// `N` values: integers or `1e6` style powers of ten.
pub fn parse_count(text: &str) -> Result<u64> {
    let s = text.trim();
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| invalid(format!("`{s}` is not a count")))?;
        let e: u32 = e.parse().map_err(|_| invalid(format!("`{s}` is not a count")))?;
        return 10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(|| invalid(format!("`{s}` overflows")));
    }
    s.parse().map_err(|_| invalid(format!("`{s}` is not a count")))
}

pub fn declare_basis(decls: &[String]) -> Result<Basis> {
    Basis::from_decls(decls)
}

/// Integer components of a ScalarValue vector, if every entry is an integer.
pub fn integer_vector(v: &[ScalarValue]) -> Option<Vec<i64>> {
    v.iter().map(|s| s.as_rational().filter(|r| r.is_integer()).and_then(|r| r.to_integer().to_i64())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_and_vectors() {
        let b = Basis::new();
        assert_eq!(parse_scalar("sqrt(8)", &b).unwrap(), ScalarValue::sqrt(2).scale(&crate::scalar::rat_int(2)));
        assert!(parse_scalar("t", &b).is_err());
        assert_eq!(parse_vectors("sqrt(2),0;0,sqrt(3)", &b).unwrap().len(), 2);
        assert!(parse_vectors("1;1,2", &b).is_err());
    }

    #[test]
    fn polynomials_in_n() {
        let b = Basis::new();
        let c = parse_poly("3*n^2 - n", &b).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c[1], ScalarValue::from_int(-1));
        assert!(parse_poly("n^(1/2)", &b).is_err());
        let v = parse_vector_poly("n^2; sqrt(2)*n", 2, &b).unwrap();
        assert_eq!(v[1][1], ScalarValue::sqrt(2));
        assert_eq!(v[2][1], ScalarValue::zero());
    }

    #[test]
    fn trig_polys() {
        let p = parse_trig("e(1,0) - 0.5*e(0,-2) + 2", 2).unwrap();
        assert_eq!(p.coeffs.len(), 3);
        assert_eq!(p.mean(), C64::new(2.0, 0.0));
        assert!(parse_trig("e(1)", 2).is_err());
        assert_eq!(parse_trig("1e-3*e(1)", 1).unwrap().coeffs[&vec![1]], C64::new(1e-3, 0.0));
    }

    #[test]
    fn counts_and_boxes() {
        assert_eq!(parse_count("1e6").unwrap(), 1_000_000);
        assert_eq!(parse_count("25000").unwrap(), 25_000);
        let bx = parse_box("0,0.3;1/4,1/2").unwrap();
        assert_eq!(bx[0].1, Rat::new(3.into(), 10.into()));
        assert!(parse_cyclic("64:1,3").is_ok());
    }
}
