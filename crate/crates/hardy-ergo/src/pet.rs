//! PET induction on polynomial families in `R^k[n, h_1..h_s]`, with
//! coefficient provenance.
//!
//! Every coefficient of `n^i h^u` in a member `q_j` is kept in the form
//! `multinom(u, i) * (beta[w_j(u)][|u|+i] - beta[w(u)][|u|+i])`, where the
//! `beta` are coefficients of the normalized input family and index 0 is the
//! zero polynomial.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::hardy::{vec_is_zero, vec_sub, GenVec};
use crate::scalar::{Rat, ScalarValue};
use crate::{Error, Result};

/// Exponents of `h_1..h_s`.
pub type HIdx = Vec<u32>;

fn zero_vec(k: usize) -> GenVec {
    vec![ScalarValue::zero(); k]
}

fn vec_add(a: &[ScalarValue], b: &[ScalarValue]) -> GenVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vec_scale(a: &[ScalarValue], r: &Rat) -> GenVec {
    a.iter().map(|x| x.scale(r)).collect()
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, b| a * b)
}

fn binom(n: u32, k: u32) -> Rat {
    Rat::from_integer(factorial(n) / (factorial(k) * factorial(n - k)))
}

/// `(|u| + i)! / (u! i!)`.
pub fn multinomial(u: &[u32], i: u32) -> Rat {
    let tot: u32 = u.iter().sum::<u32>() + i;
    let den = u.iter().fold(factorial(i), |a, &x| a * factorial(x));
    Rat::from_integer(factorial(tot) / den)
}

/// All multi-indices in `s` variables with total degree at most `max`.
pub fn indices_up_to(s: usize, max: u32) -> Vec<HIdx> {
    let mut out = vec![Vec::new()];
    for _ in 0..s {
        let mut next = Vec::new();
        for u in &out {
            let used: u32 = u.iter().sum();
            for b in 0..=(max - used) {
                let mut v = u.clone();
                v.push(b);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    pub k: usize,
    pub s1: usize,
    /// `(power of n, h exponents) -> coefficient vector`; no zero entries.
    pub terms: BTreeMap<(u32, HIdx), GenVec>,
}

impl MultiPoly {
    pub fn zero(k: usize, s1: usize) -> Self {
        MultiPoly { k, s1, terms: BTreeMap::new() }
    }

    /// `sum_i beta[i] n^i` with no h-variables.
    pub fn from_coeffs(beta: &[GenVec], k: usize) -> Self {
        let mut p = MultiPoly::zero(k, 0);
        for (i, b) in beta.iter().enumerate() {
            p.add_term(i as u32, Vec::new(), b);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, u: HIdx, v: &[ScalarValue]) {
        if vec_is_zero(v) {
            return;
        }
        match self.terms.entry((i, u)) {
            Entry::Vacant(e) => {
                e.insert(v.to_vec());
            }
            Entry::Occupied(mut e) => {
                let sum = vec_add(e.get(), v);
                if vec_is_zero(&sum) {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, u: &[u32]) -> GenVec {
        self.terms.get(&(i, u.to_vec())).cloned().unwrap_or_else(|| zero_vec(self.k))
    }

    /// Degree in `n`; `None` for zero.
    pub fn n_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, _)| *i).max()
    }

    /// Coefficient of `n^i` as a polynomial in h.
    pub fn n_coeff(&self, i: u32) -> BTreeMap<HIdx, GenVec> {
        self.terms.iter().filter(|((a, _), _)| *a == i).map(|((_, u), v)| (u.clone(), v.clone())).collect()
    }

    pub fn leading_coeff(&self) -> BTreeMap<HIdx, GenVec> {
        self.n_degree().map(|d| self.n_coeff(d)).unwrap_or_default()
    }

    pub fn sub(&self, o: &MultiPoly) -> MultiPoly {
        let mut r = self.clone();
        for ((i, u), v) in &o.terms {
            let neg: GenVec = v.iter().map(|x| -x).collect();
            r.add_term(*i, u.clone(), &neg);
        }
        r
    }

    /// Same polynomial with one more (absent) h-variable.
    pub fn lift(&self) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .map(|((i, u), v)| {
                let mut u = u.clone();
                u.push(0);
                ((*i, u), v.clone())
            })
            .collect();
        MultiPoly { k: self.k, s1: self.s1 + 1, terms }
    }

    /// `q(n + h', h) - q(h', h)` with `h'` the new last variable.
    pub fn sigma(&self) -> MultiPoly {
        let mut r = MultiPoly::zero(self.k, self.s1 + 1);
        for ((i, u), v) in &self.terms {
            for a in 1..=*i {
                let mut w = u.clone();
                w.push(i - a);
                r.add_term(a, w, &vec_scale(v, &binom(*i, a)));
            }
        }
        r
    }

    /// n-degree of `self - o`, without forming the difference.
    pub fn diff_degree(&self, o: &MultiPoly) -> Option<u32> {
        let mut a = self.terms.iter().rev().peekable();
        let mut b = o.terms.iter().rev().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return None,
                (Some((ka, _)), None) => return Some(ka.0),
                (None, Some((kb, _))) => return Some(kb.0),
                (Some((ka, va)), Some((kb, vb))) => {
                    if ka > kb {
                        return Some(ka.0);
                    }
                    if kb > ka {
                        return Some(kb.0);
                    }
                    if va != vb {
                        return Some(ka.0);
                    }
                    a.next();
                    b.next();
                }
            }
        }
    }

    pub fn drop_n_free(&mut self) {
        self.terms.retain(|(i, _), _| *i > 0);
    }

    pub fn is_multilinear_coeff(c: &BTreeMap<HIdx, GenVec>) -> bool {
        c.keys().all(|u| u.iter().all(|&e| e <= 1))
    }

    /// Exact value at integer points.
    pub fn eval(&self, n: i64, h: &[i64]) -> GenVec {
        let mut s = zero_vec(self.k);
        for ((i, u), v) in &self.terms {
            let mut m = num_traits::pow(BigInt::from(n), *i as usize);
            for (x, e) in h.iter().zip(u) {
                m *= num_traits::pow(BigInt::from(*x), *e as usize);
            }
            s = vec_add(&s, &vec_scale(v, &Rat::from_integer(m)));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((i, u), v)| json!({"n": i, "h": u, "coeff": v.iter().map(|x| x.to_string()).collect::<Vec<_>>()}))
                .collect(),
        )
    }
}

impl std::fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|((i, u), v)| {
                let mut mono = Vec::new();
                for (x, e) in u.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => mono.push(format!("h{}", x + 1)),
                        _ => mono.push(format!("h{}^{}", x + 1, e)),
                    }
                }
                match i {
                    0 => {}
                    1 => mono.push("n".into()),
                    _ => mono.push(format!("n^{i}")),
                }
                let c: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("({})*{}", c.join(", "), if mono.is_empty() { "1".into() } else { mono.join("*") })
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The reference family `P` after normalization: `beta[w][i]`, `w = 0` the
/// zero polynomial, `w >= 1` the input members in order.
#[derive(Clone, Debug)]
pub struct Reference {
    pub k: usize,
    pub d: u32,
    pub beta: Vec<Vec<GenVec>>,
}

impl Reference {
    pub fn new(p: &[Vec<GenVec>], k: usize) -> Self {
        let d = p.iter().map(|c| c.len().saturating_sub(1)).max().unwrap_or(0) as u32;
        let mut beta = vec![vec![zero_vec(k); d as usize + 1]];
        for c in p {
            let mut row = vec![zero_vec(k); d as usize + 1];
            for (i, v) in c.iter().enumerate().skip(1) {
                row[i] = v.clone();
            }
            beta.push(row);
        }
        Reference { k, d, beta }
    }

    pub fn b(&self, w: usize, i: u32) -> GenVec {
        self.beta[w].get(i as usize).cloned().unwrap_or_else(|| zero_vec(self.k))
    }

    /// `(degree, leading coefficient)` of `p_1 - p_w`.
    pub fn leading_diff(&self, w: usize) -> Option<(u32, GenVec)> {
        (1..=self.d).rev().map(|i| (i, vec_sub(&self.b(1, i), &self.b(w, i)))).find(|(_, v)| !vec_is_zero(v))
    }

    pub fn poly(&self, w: usize) -> MultiPoly {
        MultiPoly::from_coeffs(&self.beta[w], self.k)
    }
}

#[derive(Clone, Debug)]
pub struct PolyFamily {
    pub k: usize,
    pub d: u32,
    pub s1: usize,
    pub polys: Vec<MultiPoly>,
    /// `w[j][u]`, indices into the reference family.
    pub w: Vec<BTreeMap<HIdx, usize>>,
    /// The family-wide `w(u)`.
    pub w_base: BTreeMap<HIdx, usize>,
}

impl PolyFamily {
    /// The normalized reference family itself, with `q_j = p_j`.
    pub fn from_reference(r: &Reference) -> Self {
        let polys: Vec<MultiPoly> = (1..r.beta.len()).map(|w| r.poly(w)).collect();
        let w = (1..r.beta.len()).map(|j| BTreeMap::from([(Vec::new(), j)])).collect();
        PolyFamily { k: r.k, d: r.d, s1: 0, polys, w, w_base: BTreeMap::from([(Vec::new(), 0)]) }
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn is_linear(&self) -> bool {
        self.polys.iter().all(|q| q.n_degree().unwrap_or(0) <= 1)
    }

    /// Removes n-independent monomials, zero members and repeated members.
    pub fn star(mut self) -> Self {
        let mut polys = Vec::new();
        let mut w = Vec::new();
        let mut seen = HashSet::new();
        for (mut q, wj) in self.polys.drain(..).zip(self.w.drain(..)) {
            q.drop_n_free();
            if q.is_zero() || !seen.insert(q.terms.clone()) {
                continue;
            }
            polys.push(q);
            w.push(wj);
        }
        PolyFamily { polys, w, ..self }
    }

    /// `q_1` of top n-degree, no n-free monomials, members nonzero and
    /// pairwise distinct.
    pub fn is_normal(&self) -> bool {
        let Some(first) = self.polys.first() else { return false };
        let d1 = first.n_degree();
        self.polys.iter().all(|q| !q.is_zero() && q.n_degree() <= d1 && q.terms.keys().all(|(i, _)| *i > 0))
            && self.polys.iter().map(|q| &q.terms).collect::<HashSet<_>>().len() == self.len()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.polys.iter().map(MultiPoly::to_json).collect())
    }
}

/// One application of the van der Corput operation with the fresh variable
/// `h_{s+1}`. `m` is 0-based.
pub fn vdc_op(q: &PolyFamily, m: usize) -> Result<PolyFamily> {
    if m >= q.len() {
        return Err(Error::Invalid(format!("vdC index {} out of range 1..={}", m + 1, q.len())));
    }
    if !q.is_normal() {
        return Err(Error::Invalid("vdC operation needs a normal family".into()));
    }
    let qm = q.polys[m].lift();
    let idx = indices_up_to(q.s1 + 1, q.d.saturating_sub(1));
    let split = |u: &HIdx| (u[..q.s1].to_vec(), u[q.s1]);
    let mut polys = Vec::with_capacity(2 * q.len());
    let mut w = Vec::with_capacity(2 * q.len());
    for (j, p) in q.polys.iter().enumerate() {
        polys.push(p.sigma().sub(&qm));
        w.push(idx.iter().map(|u| (u.clone(), q.w[j][&split(u).0])).collect());
    }
    for (j, p) in q.polys.iter().enumerate() {
        polys.push(p.lift().sub(&qm));
        w.push(
            idx.iter()
                .map(|u| {
                    let (v, b) = split(u);
                    (u.clone(), if b == 0 { q.w[j][&v] } else { q.w_base[&v] })
                })
                .collect(),
        );
    }
    let w_base = idx
        .iter()
        .map(|u| {
            let (v, b) = split(u);
            (u.clone(), if b == 0 { q.w[m][&v] } else { q.w_base[&v] })
        })
        .collect();
    Ok(PolyFamily { k: q.k, d: q.d, s1: q.s1 + 1, polys, w, w_base }.star())
}

/// `sigma q_j` and lifted `q_j` for every member.
fn shifted(q: &PolyFamily) -> (Vec<MultiPoly>, Vec<MultiPoly>) {
    (q.polys.iter().map(MultiPoly::sigma).collect(), q.polys.iter().map(MultiPoly::lift).collect())
}

fn admissible_with(sig: &[MultiPoly], lifted: &[MultiPoly], m: usize) -> bool {
    let qm = &lifted[m];
    let Some(first) = sig[0].diff_degree(qm) else { return false };
    sig.iter().chain(lifted).all(|p| p.diff_degree(qm).is_none_or(|d| d <= first))
}

/// Whether `sigma q_1 - q_m` has top n-degree in `d_m Q`.
pub fn is_admissible(q: &PolyFamily, m: usize) -> bool {
    let (sig, lifted) = shifted(q);
    admissible_with(&sig, &lifted, m)
}

/// Among admissible indices, the member of least n-degree; ties go to an
/// index other than the first, then to the smallest.
pub fn select_m(q: &PolyFamily) -> Result<usize> {
    let (sig, lifted) = shifted(q);
    let mut order: Vec<usize> = (0..q.len()).collect();
    order.sort_by_key(|&m| (q.polys[m].n_degree().unwrap_or(0), m == 0, m));
    order
        .into_iter()
        .find(|&m| admissible_with(&sig, &lifted, m))
        .ok_or_else(|| Error::NoSolution("no admissible vdC index".into()))
}

/// PET weight: per n-degree from the top, the number of distinct leading
/// coefficients, then the family size.
pub fn family_weight(q: &PolyFamily) -> Vec<usize> {
    let mut w = vec![0; q.d as usize + 1];
    for i in (1..=q.d).rev() {
        let lcs: HashSet<BTreeMap<HIdx, GenVec>> =
            q.polys.iter().filter(|p| p.n_degree() == Some(i)).map(|p| p.n_coeff(i)).collect();
        w[(q.d - i) as usize] = lcs.len();
    }
    w[q.d as usize] = q.len();
    w
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// The coefficient form itself.
    Form,
    /// `w_{1u} = 1`.
    FirstMember,
    Multilinearity,
    LeadingCoefficients,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: Clause,
    /// 1-based member, 0 for the zero polynomial.
    pub j: usize,
    pub u: HIdx,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} violated at j = {}, u = {:?}", self.clause, self.j, self.u)
    }
}

/// Verifies that `q` descends from `r` through its recorded indices.
pub fn check_descendence(q: &PolyFamily, r: &Reference) -> std::result::Result<(), Violation> {
    let idx = indices_up_to(q.s1, q.d.saturating_sub(1));
    for (j, p) in q.polys.iter().enumerate() {
        let bad = |u: &HIdx| Violation { clause: Clause::Form, j: j + 1, u: u.clone() };
        for (i, u) in p.terms.keys() {
            if *i == 0 || u.iter().sum::<u32>() + i > q.d {
                return Err(bad(u));
            }
        }
        for u in &idx {
            let su: u32 = u.iter().sum();
            let (wj, wb) = match (q.w[j].get(u), q.w_base.get(u)) {
                (Some(a), Some(b)) => (*a, *b),
                _ => return Err(bad(u)),
            };
            for i in 1..=(q.d - su) {
                let want = vec_scale(&vec_sub(&r.b(wj, su + i), &r.b(wb, su + i)), &multinomial(u, i));
                if p.coeff(i, u) != want {
                    return Err(bad(u));
                }
            }
        }
    }
    for u in &idx {
        if q.w.first().and_then(|w| w.get(u)) != Some(&1) {
            return Err(Violation { clause: Clause::FirstMember, j: 1, u: u.clone() });
        }
    }
    let zero = MultiPoly::zero(q.k, q.s1);
    for j in std::iter::once(0).chain(2..=q.len()) {
        let other = if j == 0 { &zero } else { &q.polys[j - 1] };
        let diff = q.polys[0].sub(other);
        let Some(d1j) = diff.n_degree() else { continue };
        if !MultiPoly::is_multilinear_coeff(&diff.n_coeff(d1j)) {
            let u = diff.n_coeff(d1j).into_keys().find(|u| u.iter().any(|&e| e > 1)).unwrap_or_default();
            return Err(Violation { clause: Clause::Multilinearity, j, u });
        }
        for u in indices_up_to(q.s1, q.d - d1j) {
            let w = if j == 0 { q.w_base[&u] } else { q.w[j - 1][&u] };
            let pos = u.iter().sum::<u32>() + d1j;
            let v = vec_sub(&r.b(1, pos), &r.b(w, pos));
            if vec_is_zero(&v) {
                continue;
            }
            if r.leading_diff(w) != Some((pos, v)) {
                return Err(Violation { clause: Clause::LeadingCoefficients, j, u });
            }
        }
    }
    Ok(())
}

/// A control polynomial `c(h)` with, per multilinear index, the reference
/// member `w` in `(|u|+1)! (beta_1 - beta_w)`.
#[derive(Clone, Debug)]
pub struct Control {
    pub coeffs: BTreeMap<HIdx, GenVec>,
    pub w: BTreeMap<HIdx, usize>,
}

impl Control {
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|(u, v)| {
                    json!({"h": u, "coeff": v.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "w": self.w.get(u)})
                })
                .collect(),
        )
    }
}

#[derive(Clone, Debug)]
pub struct PetResult {
    /// 1-based vdC indices.
    pub schedule: Vec<usize>,
    pub families: Vec<PolyFamily>,
    pub controls: Vec<Control>,
    pub s1: usize,
    pub s2: usize,
    /// Input member composed away when `p_1` lacked top degree (1-based).
    pub recentered: Option<usize>,
    pub reference: Reference,
}

#[derive(Clone, Debug)]
pub struct PetOptions {
    pub max_steps: usize,
    pub max_family: usize,
}

impl Default for PetOptions {
    fn default() -> Self {
        PetOptions { max_steps: 256, max_family: 4096 }
    }
}

fn poly_nonconstant(c: &[GenVec]) -> bool {
    c.iter().skip(1).any(|v| !vec_is_zero(v))
}

/// `p[j][i]`: coefficient vector of `n^i` in member `j`.
pub fn run_pet(p: &[Vec<GenVec>], opts: &PetOptions) -> Result<PetResult> {
    let k = p.first().and_then(|c| c.first()).map_or(0, Vec::len);
    if p.is_empty() || k == 0 || p.iter().flatten().any(|v| v.len() != k) {
        return Err(Error::Invalid("PET needs a nonempty family of equal-dimension vectors".into()));
    }
    let l = p.len();
    let d = p.iter().map(|c| c.len().saturating_sub(1)).max().unwrap_or(0);
    let pad = |c: &Vec<GenVec>| -> Vec<GenVec> {
        let mut c = c.clone();
        c.resize(d + 1, zero_vec(k));
        c
    };
    let p: Vec<Vec<GenVec>> = p.iter().map(pad).collect();
    if !poly_nonconstant(&p[0]) {
        return Err(Error::Invalid("p_1 is constant".into()));
    }
    for j in 1..l {
        let diff: Vec<GenVec> = p[0].iter().zip(&p[j]).map(|(a, b)| vec_sub(a, b)).collect();
        if !poly_nonconstant(&diff) {
            return Err(Error::Invalid(format!("p_1 - p_{} is constant", j + 1)));
        }
    }
    let deg = |c: &Vec<GenVec>| (0..=d).rev().find(|&i| !vec_is_zero(&c[i])).unwrap_or(0);
    let top = p.iter().map(deg).max().unwrap_or(0);
    let mut recentered = None;
    let mut work = p.clone();
    if deg(&p[0]) < top {
        let i = (0..l).find(|&i| deg(&p[i]) == top).expect("top degree attained");
        for j in 0..l {
            work[j] = if j == i {
                p[i].iter().map(|v| v.iter().map(|x| -x).collect()).collect()
            } else {
                p[j].iter().zip(&p[i]).map(|(a, b)| vec_sub(a, b)).collect()
            };
        }
        recentered = Some(i + 1);
    }
    let reference = Reference::new(&work, k);
    let mut q = PolyFamily::from_reference(&reference).star();
    let mut families = vec![q.clone()];
    let mut schedule = Vec::new();
    check_descendence(&q, &reference).map_err(|v| Error::Invalid(format!("initial family: {v}")))?;
    while !q.is_linear() {
        if schedule.len() >= opts.max_steps || q.len() > opts.max_family {
            return Err(Error::NoSolution(format!(
                "PET cap reached after {} steps with {} members; schedule {:?}",
                schedule.len(),
                q.len(),
                schedule
            )));
        }
        let m = select_m(&q)?;
        q = vdc_op(&q, m)?;
        check_descendence(&q, &reference).map_err(|v| Error::Invalid(format!("step {}: {v}", schedule.len() + 1)))?;
        schedule.push(m + 1);
        families.push(q.clone());
    }
    let swap = |w: usize| match recentered {
        Some(i) if w == 0 => i,
        Some(i) if w == i => 0,
        _ => w,
    };
    let b11 = q.polys[0].n_coeff(1);
    let mut controls = vec![Control { coeffs: b11.clone(), w: ml_map(&q.w_base, q.s1, d as u32, swap) }];
    for j in 1..q.len() {
        let mut c = MultiPoly::zero(k, q.s1);
        for (u, v) in &b11 {
            c.add_term(1, u.clone(), v);
        }
        for (u, v) in q.polys[j].n_coeff(1) {
            c.add_term(1, u, &v.iter().map(|x| -x).collect::<Vec<_>>());
        }
        controls.push(Control { coeffs: c.n_coeff(1), w: ml_map(&q.w[j], q.s1, d as u32, swap) });
    }
    Ok(PetResult {
        schedule,
        s1: q.s1,
        s2: q.len(),
        families,
        controls,
        recentered,
        reference: Reference::new(&p, k),
    })
}

fn ml_map(w: &BTreeMap<HIdx, usize>, s1: usize, d: u32, swap: impl Fn(usize) -> usize) -> BTreeMap<HIdx, usize> {
    indices_up_to(s1, d.saturating_sub(1))
        .into_iter()
        .filter(|u| u.iter().all(|&e| e <= 1))
        .filter_map(|u| w.get(&u).map(|&x| (u, swap(x))))
        .collect()
}

impl PetResult {
    /// Checks that every control is nonzero, multilinear and of the form
    /// `(|u|+1)! (beta_{1,|u|+1} - beta_{w,|u|+1})` with each nonzero vector
    /// the leading coefficient of `p_1 - p_w`, against the original input.
    pub fn verify_controls(&self) -> std::result::Result<(), String> {
        let r = &self.reference;
        for (j, c) in self.controls.iter().enumerate() {
            if c.coeffs.is_empty() {
                return Err(format!("c_{} is zero", j + 1));
            }
            if !MultiPoly::is_multilinear_coeff(&c.coeffs) {
                return Err(format!("c_{} is not multilinear", j + 1));
            }
            for (u, &w) in &c.w {
                let su: u32 = u.iter().sum();
                let v = vec_sub(&r.b(1, su + 1), &r.b(w, su + 1));
                let want = vec_scale(&v, &Rat::from_integer(factorial(su + 1)));
                let got = c.coeffs.get(u).cloned().unwrap_or_else(|| zero_vec(r.k));
                if got != want {
                    return Err(format!("c_{} coefficient at {:?} is not of the provenance form", j + 1, u));
                }
                if !vec_is_zero(&v) && r.leading_diff(w) != Some((su + 1, v)) {
                    return Err(format!("c_{} coefficient at {:?} is not a leading coefficient", j + 1, u));
                }
            }
            if c.coeffs.keys().any(|u| !c.w.contains_key(u)) {
                return Err(format!("c_{} has an untracked coefficient", j + 1));
            }
        }
        Ok(())
    }

    /// The distinct nonzero coefficient vectors of the controls.
    pub fn directions(&self) -> Vec<GenVec> {
        let mut out: Vec<GenVec> = Vec::new();
        for c in &self.controls {
            for v in c.coeffs.values() {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    pub fn trace_json(&self) -> Vec<Value> {
        let mut out: Vec<Value> = self
            .families
            .iter()
            .enumerate()
            .map(|(s, f)| {
                json!({
                    "step": s,
                    "m": if s == 0 { Value::Null } else { json!(self.schedule[s - 1]) },
                    "family": f.to_json(),
                    "descendence": "ok",
                })
            })
            .collect();
        out.push(self.final_json());
        out
    }

    pub fn final_json(&self) -> Value {
        json!({
            "c": self.controls.iter().map(Control::to_json).collect::<Vec<_>>(),
            "s1": self.s1,
            "s2": self.s2,
            "schedule": self.schedule,
            "recentered": self.recentered,
        })
    }
}

/// Scalar polynomial family embedded along `v` in `R^k`.
pub fn embed_scalar(p: &[Vec<ScalarValue>], v: &[ScalarValue]) -> Vec<Vec<GenVec>> {
    p.iter().map(|c| c.iter().map(|x| v.iter().map(|y| y.mul_unrestricted(x)).collect()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn s(n: i64) -> ScalarValue {
        ScalarValue::from_int(n)
    }

    /// Scalar family from integer coefficient lists.
    fn fam(p: &[&[i64]]) -> Vec<Vec<GenVec>> {
        p.iter().map(|c| c.iter().map(|&x| vec![s(x)]).collect()).collect()
    }

    fn family_of(p: &[&[i64]]) -> (Reference, PolyFamily) {
        let r = Reference::new(&fam(p), 1);
        let q = PolyFamily::from_reference(&r).star();
        (r, q)
    }

    #[test]
    fn square_single_step() {
        let (r, q) = family_of(&[&[0, 0, 1]]);
        let q2 = vdc_op(&q, 0).unwrap();
        assert_eq!(q2.len(), 1);
        assert_eq!(q2.polys[0].terms.len(), 1);
        assert_eq!(q2.polys[0].coeff(1, &[1]), vec![s(2)]);
        check_descendence(&q2, &r).unwrap();
    }

    #[test]
    fn vdc_matches_direct_expansion() {
        // {n^2, 2n^2 + n}, m = 2, against evaluating the definition.
        let (_, q) = family_of(&[&[0, 0, 1], &[0, 1, 2]]);
        let out = vdc_op(&q, 1).unwrap();
        let ev = |j: usize, x: i64| q.polys[j].eval(x, &[]);
        // Members of the definition before *, minus their n-free parts.
        let direct = |n: i64, h: i64| -> Vec<GenVec> {
            let raw = |n: i64| -> Vec<GenVec> {
                let qm = ev(1, n);
                let mut v: Vec<GenVec> = (0..2).map(|j| vec_sub(&vec_sub(&ev(j, n + h), &ev(j, h)), &qm)).collect();
                v.extend((0..2).map(|j| vec_sub(&ev(j, n), &qm)));
                v
            };
            raw(n).iter().zip(raw(0)).map(|(a, b)| vec_sub(a, &b)).collect()
        };
        // sigma q_2 - q_2 = 4hn survives, q_2 - q_2 = 0 is dropped.
        assert_eq!(out.len(), 3);
        let pts = [(3, 5), (-2, 7), (11, -4), (1, 1)];
        for (pos, want) in [(0, 0), (1, 1), (2, 2)] {
            for &(n, h) in &pts {
                assert_eq!(out.polys[pos].eval(n, &[h]), direct(n, h)[want]);
            }
        }
    }

    #[test]
    fn duplicates_collapse() {
        // {n, 2n}, m = 1: sigma q_j - q_1 equals q_j - q_1.
        let (_, q) = family_of(&[&[0, 1], &[0, 2]]);
        let out = vdc_op(&q, 0).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out.polys[0].coeff(1, &[0]), vec![s(1)]);
    }

    #[test]
    fn scheduler_examples() {
        let (_, q) = family_of(&[&[0, 0, 1], &[0, 1]]);
        assert_eq!(select_m(&q).unwrap(), 1);
        let (_, q) = family_of(&[&[0, 0, 0, 1]]);
        assert_eq!(select_m(&q).unwrap(), 0);
        let (_, q) = family_of(&[&[0, 0, 1], &[0, 1, 1]]);
        let m = select_m(&q).unwrap();
        assert_eq!(m, 1);
        assert!(is_admissible(&q, m));
    }

    #[test]
    fn linear_family_directions() {
        let r = run_pet(&fam(&[&[0, 1], &[0, 2], &[0, 3]]), &PetOptions::default()).unwrap();
        assert!(r.schedule.is_empty());
        let d = r.directions();
        assert_eq!(d, vec![vec![s(1)], vec![s(-1)], vec![s(-2)]]);
        r.verify_controls().unwrap();
    }

    #[test]
    fn single_linear() {
        let a = ScalarValue::sqrt(2);
        let r = run_pet(&[vec![vec![s(0)], vec![a.clone()]]], &PetOptions::default()).unwrap();
        assert_eq!(r.controls.len(), 1);
        assert_eq!(r.controls[0].coeffs[&Vec::<u32>::new()], vec![a]);
    }

    #[test]
    fn square_control() {
        let r = run_pet(&fam(&[&[0, 0, 1]]), &PetOptions::default()).unwrap();
        assert_eq!(r.schedule, vec![1]);
        assert_eq!(r.controls[0].coeffs[&vec![1]], vec![s(2)]);
        assert_eq!(r.controls[0].w[&vec![1]], 0);
        r.verify_controls().unwrap();
    }

    #[test]
    fn recentering() {
        let r = run_pet(&fam(&[&[0, 1], &[0, 0, 1]]), &PetOptions::default()).unwrap();
        assert_eq!(r.recentered, Some(2));
        r.verify_controls().unwrap();
    }

    #[test]
    fn small_families_descend() {
        for p in [
            fam(&[&[0, 0, 0, 1]]),
            fam(&[&[0, 0, 0, 0, 2]]),
            fam(&[&[0, 0, 1], &[0, 0, 2], &[0, 1, 3]]),
            fam(&[&[0, 0, 1], &[0, 1], &[0, 2]]),
        ] {
            let r = run_pet(&p, &PetOptions::default()).unwrap();
            r.verify_controls().unwrap();
        }
    }

    #[test]
    fn cubic_pair_outgrows_cap() {
        // Each elimination at degree 2 spawns linear members that must be
        // removed one step at a time while the rest doubles.
        let opts = PetOptions { max_steps: 256, max_family: 200 };
        let e = run_pet(&fam(&[&[0, 0, 0, 1], &[0, 0, 1]]), &opts).unwrap_err();
        assert!(matches!(e, Error::NoSolution(_)));
    }

    #[test]
    fn planted_violations() {
        let (r, q) = family_of(&[&[0, 0, 1]]);
        let mut bad = vdc_op(&q, 0).unwrap();
        bad.polys[0].add_term(1, vec![2], &[s(3)]);
        assert_eq!(check_descendence(&bad, &r).unwrap_err().clause, Clause::Form);
        // q_1 = (n+h)^3 - h^3, q_2 = n^3 + 3hn^2: both of the right form,
        // but q_1 - q_2 = 3h^2 n.
        let r3 = Reference::new(&fam(&[&[0, 0, 0, 1]]), 1);
        let mut q1 = MultiPoly::zero(1, 1);
        q1.add_term(3, vec![0], &[s(1)]);
        q1.add_term(2, vec![1], &[s(3)]);
        q1.add_term(1, vec![2], &[s(3)]);
        let mut q2 = MultiPoly::zero(1, 1);
        q2.add_term(3, vec![0], &[s(1)]);
        q2.add_term(2, vec![1], &[s(3)]);
        let idx = indices_up_to(1, 2);
        let w1: BTreeMap<HIdx, usize> = idx.iter().map(|u| (u.clone(), 1)).collect();
        let w2: BTreeMap<HIdx, usize> = idx.iter().map(|u| (u.clone(), if u[0] == 2 { 0 } else { 1 })).collect();
        let fam2 = PolyFamily {
            k: 1,
            d: 3,
            s1: 1,
            polys: vec![q1, q2],
            w: vec![w1, w2],
            w_base: idx.iter().map(|u| (u.clone(), 0)).collect(),
        };
        let v = check_descendence(&fam2, &r3).unwrap_err();
        assert_eq!(v.clause, Clause::Multilinearity);
        assert_eq!((v.j, v.u), (2, vec![2]));
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[1, 1], 1), rat_int(6));
        assert_eq!(multinomial(&[2], 1), rat_int(3));
        assert_eq!(indices_up_to(2, 1).len(), 3);
    }
}
