//! Independence classes of Hardy families, the Boshernitzan criterion and
//! the predicted seminorm directions.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::hardy::{
    compare_growth, decompose_family, vec_is_zero, vec_sub, DecomposedFamily, GenVec, Growth, HardyExpr, Key,
};
use crate::linalg::{
    fe, fe_rat, fe_rational, mat_mul_f, mat_vec_f, nullspace_f, nullspace_q, rank_f, rational_rows, solve_f, transpose,
};
use crate::scalar::{fmt_rat, rat_int, FieldElem, Rat, ScalarValue};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub enum IndependenceClass {
    Dependent,
    PairwiseIndependent,
    IrrationallyIndependent,
    StronglyIrrationallyIndependent,
    StronglyIndependent,
}

impl IndependenceClass {
    pub fn name(self) -> &'static str {
        match self {
            IndependenceClass::Dependent => "Dependent",
            IndependenceClass::PairwiseIndependent => "PairwiseIndependent",
            IndependenceClass::IrrationallyIndependent => "IrrationallyIndependent",
            IndependenceClass::StronglyIrrationallyIndependent => "StronglyIrrationallyIndependent",
            IndependenceClass::StronglyIndependent => "StronglyIndependent",
        }
    }

    /// The property labelled `self` holds for a family of class `cls`.
    pub fn implied_by(self, cls: IndependenceClass) -> bool {
        cls >= self
    }

    pub fn stronger(self) -> Option<IndependenceClass> {
        use IndependenceClass::*;
        match self {
            Dependent => Some(PairwiseIndependent),
            PairwiseIndependent => Some(IrrationallyIndependent),
            IrrationallyIndependent => Some(StronglyIrrationallyIndependent),
            StronglyIrrationallyIndependent => Some(StronglyIndependent),
            StronglyIndependent => None,
        }
    }
}

impl fmt::Display for IndependenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `sum_j c_j a_j - p` is `<< log`; refutes the class `refutes`.
#[derive(Clone, Debug)]
pub struct Witness {
    pub c: Vec<FieldElem>,
    /// Coefficients of `p` in increasing degree.
    pub p: Vec<Rat>,
    pub refutes: IndependenceClass,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub class: IndependenceClass,
    pub witness: Option<Witness>,
}

impl Witness {
    /// `D (sum c_j a_j - p)` for the common denominator `D` of `c`.
    pub fn combination(&self, family: &[HardyExpr]) -> HardyExpr {
        let n = self.c.len();
        let mut d = ScalarValue::one();
        for c in &self.c {
            d = d.mul_unrestricted(c.den());
        }
        let mut r = HardyExpr::zero();
        for j in 0..n {
            let mut w = self.c[j].num().clone();
            for (l, c) in self.c.iter().enumerate() {
                if l != j {
                    w = w.mul_unrestricted(c.den());
                }
            }
            r = r.add(&family[j].scale(&w));
        }
        for (k, q) in self.p.iter().enumerate() {
            let t = HardyExpr::t_pow(rat_int(k as i64)).scale(&d.scale(q));
            r = r.sub(&t);
        }
        r
    }

    /// Exact check of the witness against its claim.
    pub fn verify(&self, family: &[HardyExpr]) -> bool {
        let comb = self.combination(family);
        let small = compare_growth(&comb, &HardyExpr::log_pow(rat_int(1))).growth != Growth::Faster;
        let nonzero: Vec<&FieldElem> = self.c.iter().filter(|c| !c.is_zero()).collect();
        let shape = match self.refutes {
            IndependenceClass::PairwiseIndependent => nonzero.len() <= 2 && self.p.iter().all(Zero::is_zero),
            IndependenceClass::IrrationallyIndependent => nonzero.iter().all(|c| fe_rational(c).is_none()),
            IndependenceClass::StronglyIrrationallyIndependent => nonzero.iter().any(|c| fe_rational(c).is_none()),
            _ => true,
        };
        small && shape && !nonzero.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "c": self.c.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "p": self.p.iter().map(fmt_rat).collect::<Vec<_>>(),
            "refutes": self.refutes.name(),
        })
    }
}

impl Classification {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "class": self.class.name(),
            "witness": self.witness.as_ref().map(Witness::to_json),
        })
    }
}

/// Columns are family members.
struct Rows {
    /// Generators growing faster than log.
    a: Vec<Vec<FieldElem>>,
    /// `t^n` for `n >= 1`, indexed by `n - 1`.
    b: Vec<Vec<FieldElem>>,
}

fn rows(dec: &DecomposedFamily) -> Rows {
    let l = dec.len();
    let a = (dec.m1..dec.generators.len()).map(|i| (0..l).map(|j| fe(&dec.alpha[j][i][0])).collect()).collect();
    let b = (1..=dec.degree).map(|n| (0..l).map(|j| fe(&dec.poly[j][n][0])).collect()).collect();
    Rows { a, b }
}

fn poly_of(b: &[Vec<FieldElem>], c: &[FieldElem]) -> Option<Vec<Rat>> {
    let mut p = vec![Rat::zero()];
    for v in mat_vec_f(b, c) {
        p.push(fe_rational(&v)?);
    }
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    Some(p)
}

/// A small prime whose square root multiplies every nonzero entry out of `Q`.
fn fresh_sqrt(c: &[FieldElem]) -> ScalarValue {
    let used: Vec<u64> = c
        .iter()
        .flat_map(|x| x.num().monomials().chain(x.den().monomials()).map(|m| m.sqrt_part()).collect::<Vec<_>>())
        .collect();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if used.iter().all(|u| u % p != 0) {
            return ScalarValue::sqrt(p);
        }
    }
    ScalarValue::sqrt(53)
}

pub fn classify_family(family: &[HardyExpr]) -> Result<Classification> {
    use IndependenceClass::*;
    if family.is_empty() {
        return Err(Error::Invalid("empty family".into()));
    }
    for a in family {
        a.check_input_class()?;
    }
    let l = family.len();
    let cols: Vec<Vec<HardyExpr>> = family.iter().map(|a| vec![a.clone()]).collect();
    let dec = decompose_family(&cols);
    let r = rows(&dec);
    let full: Vec<Vec<FieldElem>> = r.a.iter().chain(r.b.iter()).cloned().collect();

    // Pairwise: every pair of columns of the full coefficient matrix is independent.
    for i in 0..l {
        for j in i + 1..l {
            let sub: Vec<Vec<FieldElem>> = full.iter().map(|row| vec![row[i].clone(), row[j].clone()]).collect();
            if rank_f(&sub, 2) < 2 {
                let ns = nullspace_f(&sub, 2);
                let mut c = vec![FieldElem::zero(); l];
                c[i] = ns[0][0].clone();
                c[j] = ns[0][1].clone();
                let w = Witness { c, p: vec![Rat::zero()], refutes: PairwiseIndependent };
                return Ok(Classification { class: Dependent, witness: Some(w) });
            }
        }
    }

    let v = nullspace_f(&r.a, l);
    if v.is_empty() {
        return Ok(Classification { class: StronglyIndependent, witness: None });
    }
    let vt = transpose(&v, l);
    let m = mat_mul_f(&r.b, &vt, l, v.len());
    let kerm = nullspace_f(&m, v.len());
    if !kerm.is_empty() {
        // A whole real line of combinations kills everything above log.
        let c0 = mat_vec_f(&vt, &kerm[0]);
        let c = if c0.iter().all(|x| x.is_zero() || fe_rational(x).is_none()) {
            c0
        } else {
            let s = fe(&fresh_sqrt(&c0));
            c0.iter().map(|x| x.mul(&s)).collect()
        };
        let w = Witness { c, p: vec![Rat::zero()], refutes: IrrationallyIndependent };
        return Ok(Classification { class: PairwiseIndependent, witness: Some(w) });
    }

    // Rational vectors in the image of M.
    let kdim = r.b.len();
    let left = nullspace_f(&transpose(&m, v.len()), kdim);
    let qrows: Vec<Vec<Rat>> = left.iter().flat_map(|y| rational_rows(y)).collect();
    let uq = if kdim == 0 {
        Vec::new()
    } else if qrows.is_empty() {
        (0..kdim).map(|i| (0..kdim).map(|j| if i == j { rat_int(1) } else { Rat::zero() }).collect()).collect()
    } else {
        nullspace_q(&qrows, kdim)
    };
    if uq.is_empty() {
        return Ok(Classification { class: StronglyIndependent, witness: None });
    }
    let z: Vec<Vec<FieldElem>> = uq
        .iter()
        .map(|u| {
            let ub: Vec<FieldElem> = u.iter().map(fe_rat).collect();
            let lam = solve_f(&m, v.len(), &ub).expect("u lies in the image");
            mat_vec_f(&vt, &lam)
        })
        .collect();
    let witness_for = |c: Vec<FieldElem>, refutes| {
        let p = poly_of(&r.b, &c).expect("rational image");
        Witness { c, p, refutes }
    };
    let irr = z.iter().position(|c| c.iter().any(|x| fe_rational(x).is_none()));
    let Some(irr) = irr else {
        let w = witness_for(z[0].clone(), StronglyIndependent);
        return Ok(Classification { class: StronglyIrrationallyIndependent, witness: Some(w) });
    };

    if let Some(mu) = irrational_combination(&z, l) {
        let c = combine(&z, &mu, l);
        let w = witness_for(c, IrrationallyIndependent);
        return Ok(Classification { class: PairwiseIndependent, witness: Some(w) });
    }
    let w = witness_for(z[irr].clone(), StronglyIrrationallyIndependent);
    Ok(Classification { class: IrrationallyIndependent, witness: Some(w) })
}

fn combine(z: &[Vec<FieldElem>], mu: &[Rat], l: usize) -> Vec<FieldElem> {
    let mut c = vec![FieldElem::zero(); l];
    for (zs, m) in z.iter().zip(mu) {
        if m.is_zero() {
            continue;
        }
        for j in 0..l {
            c[j] = c[j].add(&zs[j].mul(&fe_rat(m)));
        }
    }
    c
}

/// Rational `mu != 0` with every coordinate of `sum mu_s z_s` zero or
/// irrational, by enumerating which coordinates vanish.
fn irrational_combination(z: &[Vec<FieldElem>], l: usize) -> Option<Vec<Rat>> {
    let p = z.len();
    let mut patterns: Vec<u32> = (0..(1u32 << l)).collect();
    patterns.sort_by_key(|s| (s.count_ones(), *s));
    for s in patterns {
        // Coordinates in `s` vanish: rational equations on mu.
        let mut eqs: Vec<Vec<Rat>> = Vec::new();
        for j in (0..l).filter(|j| s >> j & 1 == 1) {
            let row: Vec<FieldElem> = z.iter().map(|zs| zs[j].clone()).collect();
            eqs.extend(rational_rows(&row));
        }
        let basis: Vec<Vec<Rat>> = if eqs.is_empty() {
            (0..p).map(|i| (0..p).map(|j| if i == j { rat_int(1) } else { Rat::zero() }).collect()).collect()
        } else {
            nullspace_q(&eqs, p)
        };
        if basis.is_empty() {
            continue;
        }
        let q = basis.len();
        let mut candidates: Vec<Vec<Rat>> = basis.clone();
        for k in 1..=(l * q + 2) as i64 {
            let mut mu = vec![Rat::zero(); p];
            let mut pw = rat_int(1);
            for b in &basis {
                for (x, y) in mu.iter_mut().zip(b) {
                    *x += &pw * y;
                }
                pw *= rat_int(k);
            }
            candidates.push(mu);
        }
        for mu in candidates {
            let c = combine(z, &mu, l);
            let ok = (0..l).all(|j| if s >> j & 1 == 1 { c[j].is_zero() } else { fe_rational(&c[j]).is_none() });
            if ok && c.iter().any(|x| !x.is_zero()) {
                return Some(mu);
            }
        }
    }
    None
}

/// True iff `|a - p| / log -> oo` for every rational polynomial `p`.
pub fn boshernitzan_test(a: &HardyExpr) -> bool {
    let log = Key::log_power(rat_int(1));
    a.terms().any(|(k, s)| *k > log && (!k.is_polynomial() || !s.is_rational()))
}

/// For a failing expression: the integer `D` with `D p` integral, where `p`
/// is the rational polynomial part within `O(log)` of `a`.
pub fn boshernitzan_lambda(a: &HardyExpr) -> Option<num_bigint::BigInt> {
    if boshernitzan_test(a) {
        return None;
    }
    let log = Key::log_power(rat_int(1));
    let mut d = num_bigint::BigInt::from(1);
    for (k, s) in a.terms() {
        if *k > log {
            let r = s.as_rational()?;
            d = num_integer::Integer::lcm(&d, r.denom());
        }
    }
    Some(d)
}

#[derive(Clone, Debug)]
pub struct LeadingData {
    /// Index `j` of the compared member (`0` is the zero sequence, others are 1-based).
    pub j: usize,
    /// `deg(p_1 - p_j)`.
    pub d: usize,
    /// Largest generator index (1-based, `0` for none) where the coefficients differ.
    pub d_prime: usize,
    pub m1: usize,
    pub m2: usize,
    pub vector: GenVec,
}

#[derive(Clone, Debug, Default)]
pub struct DirectionSet {
    pub vectors: Vec<GenVec>,
    pub multiplicity: Vec<usize>,
}

impl DirectionSet {
    pub fn new(vectors: Vec<GenVec>) -> Self {
        let n = vectors.len();
        DirectionSet { vectors, multiplicity: vec![1; n] }
    }

    pub fn push_unique(&mut self, v: GenVec) {
        if !self.vectors.contains(&v) {
            self.vectors.push(v);
            self.multiplicity.push(1);
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self
            .vectors
            .iter()
            .map(|v| v.iter().map(|s| s.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

/// `ell` scalar sequences acting through transformations `eta[j]` (0-based)
/// of `k`: the `j`-th member becomes `a_j e_{eta_j}`.
pub fn embed_family(exprs: &[HardyExpr], eta: &[usize], k: usize) -> Result<Vec<Vec<HardyExpr>>> {
    if eta.len() != exprs.len() {
        return Err(Error::Invalid("eta must assign one transformation per sequence".into()));
    }
    exprs
        .iter()
        .zip(eta)
        .map(|(a, &e)| {
            if e >= k {
                return Err(Error::Invalid(format!("transformation index {} exceeds k = {k}", e + 1)));
            }
            let mut v = vec![HardyExpr::zero(); k];
            v[e] = a.clone();
            Ok(v)
        })
        .collect()
}

/// Leading data of `a_1 - a_j` for `j` in `0, 2, ..., ell`.
pub fn leading_data(family: &[Vec<HardyExpr>]) -> Result<Vec<LeadingData>> {
    if family.is_empty() {
        return Err(Error::Invalid("empty family".into()));
    }
    let dec = decompose_family(family);
    let k = dec.k;
    let zero_vec = vec![ScalarValue::zero(); k];
    let mut out = Vec::new();
    for j in std::iter::once(0).chain(2..=family.len()) {
        let coef = |i: usize| -> GenVec {
            if j == 0 {
                dec.alpha[0][i].clone()
            } else {
                vec_sub(&dec.alpha[0][i], &dec.alpha[j - 1][i])
            }
        };
        let pc = |n: usize| -> GenVec {
            if j == 0 {
                dec.poly[0][n].clone()
            } else {
                vec_sub(&dec.poly[0][n], &dec.poly[j - 1][n])
            }
        };
        let d_prime = (0..dec.generators.len()).rev().find(|&i| !vec_is_zero(&coef(i))).map_or(0, |i| i + 1);
        let d = (0..=dec.degree).rev().find(|&n| !vec_is_zero(&pc(n))).unwrap_or(0);
        if d_prime <= dec.m1 && d == 0 {
            let what = if j == 0 { "a1".to_string() } else { format!("a1 - a{j}") };
            return Err(Error::Invalid(format!("{what} is << log; directions need every difference to beat log")));
        }
        let vector = if d_prime > dec.m2 {
            coef(d_prime - 1)
        } else if d > 0 {
            pc(d)
        } else {
            coef(d_prime - 1)
        };
        let _ = &zero_vec;
        out.push(LeadingData { j, d, d_prime, m1: dec.m1, m2: dec.m2, vector });
    }
    Ok(out)
}

pub fn predicted_directions(family: &[Vec<HardyExpr>]) -> Result<DirectionSet> {
    let mut ds = DirectionSet::default();
    for ld in leading_data(family)? {
        ds.push_unique(ld.vector);
    }
    Ok(ds)
}

/// Independent extractor: last nonzero coefficient of `a_1 - a_j` in the
/// order `g_1..g_{m2}, t, ..., t^d, g_{m2+1}..g_m`.
pub fn leading_by_unnatural_order(family: &[Vec<HardyExpr>], j: usize) -> Option<GenVec> {
    let k = family[0].len();
    let diff: Vec<HardyExpr> =
        (0..k).map(|c| if j == 0 { family[0][c].clone() } else { family[0][c].sub(&family[j - 1][c]) }).collect();
    let dec = decompose_family(&[diff]);
    let mut seq: Vec<GenVec> = Vec::new();
    for i in 0..dec.m2 {
        seq.push(dec.alpha[0][i].clone());
    }
    for n in 1..=dec.degree {
        seq.push(dec.poly[0][n].clone());
    }
    for i in dec.m2..dec.generators.len() {
        seq.push(dec.alpha[0][i].clone());
    }
    let log = Key::log_power(rat_int(1));
    let pos = seq.iter().rposition(|v| !vec_is_zero(v))?;
    // Reject differences that are << log.
    if pos < dec.m2 && dec.generators[pos] <= log {
        return None;
    }
    Some(seq[pos].clone())
}

/// Coefficient is negative in the sense of its real value.
pub fn is_negative(s: &ScalarValue) -> bool {
    s.signum() < 0 || (s.is_rational() && s.rational_part().is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::parse_expr;
    use crate::scalar::Basis;
    use IndependenceClass::*;

    fn fam(exprs: &[&str], basis: &Basis) -> Vec<HardyExpr> {
        exprs.iter().map(|s| parse_expr(s, basis).unwrap()).collect()
    }

    fn check(exprs: &[&str], basis: &Basis, want: IndependenceClass) -> Classification {
        let f = fam(exprs, basis);
        let c = classify_family(&f).unwrap();
        assert_eq!(c.class, want, "{exprs:?}");
        if let Some(w) = &c.witness {
            assert!(w.verify(&f), "witness for {exprs:?}");
            assert_eq!(Some(w.refutes), want.stronger());
        }
        c
    }

    #[test]
    fn hierarchy_examples() {
        let b = Basis::from_decls(&["a=0.5772156649015329", "a^2"]).unwrap();
        check(&["t^(3/2)", "t^(3/2)+t^(1/2)"], &b, StronglyIndependent);
        check(&["t^(3/2)", "t^(3/2)+t"], &b, StronglyIrrationallyIndependent);
        check(&["t^3+a*t^2+a*a*t", "t^2+a*t"], &b, IrrationallyIndependent);
        let c = check(&["sqrt(2)*t^2", "sqrt(2)*t^2+sqrt(3)*t"], &b, PairwiseIndependent);
        let w = c.witness.unwrap();
        assert_eq!(w.p, vec![Rat::zero(), rat_int(1)]);
        check(&["t^2", "2*t^2 + log(t)"], &b, Dependent);
    }

    #[test]
    fn boshernitzan_examples() {
        let b = Basis::new();
        assert!(boshernitzan_test(&parse_expr("t^(3/2)", &b).unwrap()));
        assert!(!boshernitzan_test(&parse_expr("t^2", &b).unwrap()));
        assert!(boshernitzan_test(&parse_expr("sqrt(2)*t^2", &b).unwrap()));
        assert!(!boshernitzan_test(&parse_expr("1/2*t^2 + log(t)", &b).unwrap()));
        assert_eq!(boshernitzan_lambda(&parse_expr("1/2*t^2 + 1/3*t", &b).unwrap()), Some(6.into()));
    }

    #[test]
    fn directions_two_rotations() {
        let b = Basis::new();
        let f = embed_family(&fam(&["sqrt(2)*t", "sqrt(3)*t"], &b), &[0, 1], 2).unwrap();
        let ds = predicted_directions(&f).unwrap();
        let s2 = ScalarValue::sqrt(2);
        let s3 = ScalarValue::sqrt(3);
        assert_eq!(ds.vectors, vec![vec![s2.clone(), ScalarValue::zero()], vec![s2, -s3]]);
        let same = embed_family(&fam(&["t^(3/2)", "t^(3/2)"], &b), &[0, 0], 1).unwrap();
        assert!(predicted_directions(&same).is_err());
    }
}
