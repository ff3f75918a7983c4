//! Truncated generalized box seminorms, the Gowers-Cauchy-Schwarz inner
//! product and dual functions on rotations, cyclic groups and the skew
//! product.
//!
//! A direction `v` in `R^k` generates `G = {n v}`; `n v` acts through
//! `T_1^floor(n v_1) ... T_k^floor(n v_k)`. Averages over `m, m'` in `G` run
//! over `n in [-M, M]`, or over all of `Z/q` on cyclic systems (full period).

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::system::{character_words, CyclicFn, DynSystem, TrigPoly};
use super::weyl::frac_word;
use super::{e_word, num17, KSum, C64};
use crate::independence::DirectionSet;
use crate::scalar::ScalarValue;
use crate::{Error, Result};

/// Largest number of vertex-frequency tuples enumerated on the torus.
pub const TUPLE_CAP: usize = 1 << 22;

/// Tolerated negative radicand before rooting.
pub const RADICAND_TOL: f64 = 1e-10;

/// Directions listed with their multiplicities.
pub fn expand_directions(ds: &DirectionSet) -> Vec<Vec<ScalarValue>> {
    ds.vectors.iter().zip(&ds.multiplicity).flat_map(|(v, &m)| std::iter::repeat(v.clone()).take(m)).collect()
}

/// `floor(n v)`, exact for rational `v`.
pub fn floor_mul(v: &ScalarValue, n: i64) -> i128 {
    if n == 0 {
        return 0;
    }
    if let Some(r) = v.as_rational() {
        let x = (r.numer() * BigInt::from(n)).div_floor(r.denom());
        return x.to_i128().expect("floor fits i128");
    }
    let (ip, frac, _) = v.fixed128();
    let m = BigInt::from(n.unsigned_abs());
    let whole = (&ip * &m) + ((BigInt::from(frac) * &m) >> 128u32);
    // irrational: n v is never an integer, so floor(-x) = -floor(x) - 1
    let w = whole.to_i128().expect("floor fits i128");
    if n > 0 {
        w
    } else {
        -w - 1
    }
}

fn root(pow: f64, s: usize) -> Result<f64> {
    if pow < -RADICAND_TOL {
        return Err(Error::Numeric(format!("negative radicand {pow:e}")));
    }
    Ok(pow.max(0.0).powf(1.0 / (1u64 << s) as f64))
}

fn check_dirs(dirs: &[Vec<ScalarValue>], k: usize) -> Result<()> {
    if dirs.is_empty() {
        return Err(Error::Invalid("at least one direction is needed".into()));
    }
    for v in dirs {
        if v.len() != k {
            return Err(Error::Invalid(format!("direction of length {} for k = {k}", v.len())));
        }
        if v.iter().all(ScalarValue::is_zero) {
            return Err(Error::Invalid("directions must be nonzero".into()));
        }
    }
    Ok(())
}

/// Averages `S_i(A) = E_{|n| <= M} e(A . sum_j floor(n v_ij) alpha_j)` for the
/// direction groups of a rotation system, cached by frequency.
pub struct TorusAverager<'a> {
    alphas: &'a [Vec<ScalarValue>],
    m: u64,
    /// `floors[i][n + M][j] = floor(n v_ij)`.
    floors: Vec<Vec<Vec<i128>>>,
    cache: Vec<HashMap<Vec<i64>, C64>>,
}

impl<'a> TorusAverager<'a> {
    pub fn new(sys: &'a DynSystem, dirs: &[Vec<ScalarValue>], m: u64) -> Result<Self> {
        let DynSystem::Torus { alphas, .. } = sys else {
            return Err(Error::Invalid("torus system expected".into()));
        };
        check_dirs(dirs, alphas.len())?;
        if m == 0 || m > 1 << 24 {
            return Err(Error::Invalid("truncation M must lie in [1, 2^24]".into()));
        }
        let mi = m as i64;
        let floors = dirs
            .iter()
            .map(|v| (-mi..=mi).map(|n| v.iter().map(|x| floor_mul(x, n)).collect()).collect())
            .collect();
        Ok(TorusAverager { alphas, m, floors, cache: vec![HashMap::new(); dirs.len()] })
    }

    pub fn groups(&self) -> usize {
        self.floors.len()
    }

    pub fn average(&mut self, i: usize, a: &[i64]) -> C64 {
        if a.iter().all(|&x| x == 0) {
            return C64::new(1.0, 0.0);
        }
        if let Some(v) = self.cache[i].get(a) {
            return *v;
        }
        let w = character_words(self.alphas, a);
        let mut acc = KSum::default();
        for fl in &self.floors[i] {
            let mut ph = 0u128;
            for (f, wj) in fl.iter().zip(&w) {
                ph = ph.wrapping_add(wj.wrapping_mul(*f as u128));
            }
            acc.add(e_word(ph));
        }
        let v = acc.value() / (2 * self.m + 1) as f64;
        self.cache[i].insert(a.to_vec(), v);
        v
    }
}

fn vertex_sign(eps: usize) -> bool {
    eps.count_ones() % 2 == 1
}

/// Frequencies and coefficients of `f`, with the conjugated copy.
struct Support {
    freqs: Vec<Vec<i64>>,
    coefs: Vec<C64>,
}

impl Support {
    fn of(f: &TrigPoly) -> Support {
        Support { freqs: f.coeffs.keys().cloned().collect(), coefs: f.coeffs.values().copied().collect() }
    }
}

/// Visit every assignment of a support index to each vertex in `verts`.
fn for_each_tuple<F: FnMut(&[usize])>(sizes: &[usize], mut f: F) {
    if sizes.iter().any(|&s| s == 0) {
        return;
    }
    let mut idx = vec![0usize; sizes.len()];
    loop {
        f(&idx);
        let mut p = 0;
        loop {
            if p == idx.len() {
                return;
            }
            idx[p] += 1;
            if idx[p] < sizes[p] {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

fn tuple_count(sizes: &[usize]) -> Result<usize> {
    let mut n: usize = 1;
    for &s in sizes {
        n = n.checked_mul(s).filter(|&x| x <= TUPLE_CAP).ok_or_else(|| {
            Error::Invalid(format!("more than {TUPLE_CAP} frequency tuples; reduce the support or the number of directions"))
        })?;
    }
    Ok(n)
}

/// `<(f_eps)>` on a rotation system: `E ∫ prod_eps C^|eps| T^(m^eps) f_eps`
/// with `T^(m^eps)` composed from the groups.
pub fn torus_gcs(av: &mut TorusAverager, fs: &[TrigPoly]) -> Result<C64> {
    let s = av.groups();
    if fs.len() != 1 << s {
        return Err(Error::Invalid(format!("{} functions for {s} directions; need 2^s", fs.len())));
    }
    let dim = fs[0].dim;
    if fs.iter().any(|f| f.dim != dim) || dim != av.alphas[0].len() {
        return Err(Error::Invalid("functions do not live on the system's torus".into()));
    }
    let sup: Vec<Support> = fs.iter().map(Support::of).collect();
    let sizes: Vec<usize> = sup.iter().map(|x| x.freqs.len()).collect();
    tuple_count(&sizes)?;
    let mut total = KSum::default();
    let mut sum = vec![0i64; dim];
    let mut a = vec![vec![0i64; dim]; s];
    for_each_tuple(&sizes, |t| {
        sum.iter_mut().for_each(|x| *x = 0);
        a.iter_mut().for_each(|v| v.iter_mut().for_each(|x| *x = 0));
        let mut coef = C64::new(1.0, 0.0);
        for (eps, &ix) in t.iter().enumerate() {
            let neg = vertex_sign(eps);
            let c = sup[eps].coefs[ix];
            coef *= if neg { c.conj() } else { c };
            let sg = if neg { -1 } else { 1 };
            for (d, &kf) in sup[eps].freqs[ix].iter().enumerate() {
                sum[d] += sg * kf;
                for (i, ai) in a.iter_mut().enumerate() {
                    if eps >> i & 1 == 0 {
                        ai[d] += sg * kf;
                    }
                }
            }
        }
        if sum.iter().any(|&x| x != 0) {
            return;
        }
        // Under the zero-sum constraint the primed vertices carry -A_i.
        for (i, ai) in a.iter().enumerate() {
            let neg: Vec<i64> = ai.iter().map(|x| -x).collect();
            coef *= av.average(i, ai) * av.average(i, &neg);
        }
        total.add(coef);
    });
    Ok(total.value())
}

/// `|||f|||^(2^s)` on a rotation system (complex; real up to rounding).
pub fn torus_seminorm_pow(av: &mut TorusAverager, f: &TrigPoly) -> Result<C64> {
    let fs = vec![f.clone(); 1 << av.groups()];
    torus_gcs(av, &fs)
}

/// Truncated dual function `D(f)(x) = E prod_{eps != 0} C^|eps| f(x + shift^eps - shift^0)`.
pub fn torus_dual(av: &mut TorusAverager, f: &TrigPoly) -> Result<TrigPoly> {
    let s = av.groups();
    let sup = Support::of(f);
    let dim = f.dim;
    let nv = (1usize << s) - 1;
    let sizes = vec![sup.freqs.len(); nv];
    tuple_count(&sizes)?;
    let mut out: BTreeMap<Vec<i64>, KSum> = BTreeMap::new();
    let mut b = vec![vec![0i64; dim]; s];
    let mut k = vec![0i64; dim];
    for_each_tuple(&sizes, |t| {
        k.iter_mut().for_each(|x| *x = 0);
        b.iter_mut().for_each(|v| v.iter_mut().for_each(|x| *x = 0));
        let mut coef = C64::new(1.0, 0.0);
        for (v, &ix) in t.iter().enumerate() {
            let eps = v + 1;
            let neg = vertex_sign(eps);
            let c = sup.coefs[ix];
            coef *= if neg { c.conj() } else { c };
            let sg = if neg { -1 } else { 1 };
            for (d, &kf) in sup.freqs[ix].iter().enumerate() {
                k[d] += sg * kf;
                for (i, bi) in b.iter_mut().enumerate() {
                    if eps >> i & 1 == 1 {
                        bi[d] += sg * kf;
                    }
                }
            }
        }
        for (i, bi) in b.iter().enumerate() {
            let neg: Vec<i64> = bi.iter().map(|x| -x).collect();
            coef *= av.average(i, bi) * av.average(i, &neg);
        }
        out.entry(k.clone()).or_default().add(coef);
    });
    let mut d = TrigPoly::zero(dim);
    for (kk, v) in out {
        d.add_term(kk, v.value());
    }
    Ok(d)
}

/// `∫ f g` for trigonometric polynomials.
pub fn torus_pairing(f: &TrigPoly, g: &TrigPoly) -> C64 {
    f.coeffs.iter().map(|(k, c)| c * g.coeffs.get(&k.iter().map(|x| -x).collect::<Vec<_>>()).copied().unwrap_or_default()).sum()
}

/// Rotation system on the doubled torus carrying `f ⊗ conj f`.
pub fn doubled_torus(sys: &DynSystem) -> Result<DynSystem> {
    let DynSystem::Torus { alphas, .. } = sys else {
        return Err(Error::Invalid("torus system expected".into()));
    };
    DynSystem::torus(alphas.iter().map(|a| a.iter().chain(a).cloned().collect()).collect())
}

/// Weights of `h = m' - m mod q` for `m, m'` uniform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyclicAvg {
    /// `m, m'` over all of `Z/q`.
    Full,
    /// `m, m'` over `[-M, M]`.
    Truncated(u64),
}

impl CyclicAvg {
    pub fn weights(self, q: u64) -> Vec<f64> {
        match self {
            CyclicAvg::Full => vec![1.0 / q as f64; q as usize],
            CyclicAvg::Truncated(m) => {
                let l = 2 * m + 1;
                let mut w = vec![0.0; q as usize];
                // #{(m, m'): m' - m = h} = l - |h| for |h| < l
                for h in -(l as i64 - 1)..=(l as i64 - 1) {
                    w[h.rem_euclid(q as i64) as usize] += (l as i64 - h.abs()) as f64;
                }
                let tot = (l * l) as f64;
                w.iter_mut().for_each(|x| *x /= tot);
                w
            }
        }
    }
}

/// Shift residue of each integer direction: `sigma = sum_j v_j r_j mod q`.
pub fn cyclic_sigmas(sys: &DynSystem, dirs: &[Vec<ScalarValue>]) -> Result<Vec<u64>> {
    let DynSystem::Cyclic { q, shifts } = sys else {
        return Err(Error::Invalid("cyclic system expected".into()));
    };
    check_dirs(dirs, shifts.len())?;
    dirs.iter()
        .map(|v| {
            let mut s: i128 = 0;
            for (x, r) in v.iter().zip(shifts) {
                let n = x
                    .as_rational()
                    .filter(|r| r.is_integer())
                    .and_then(|r| r.to_integer().to_i128())
                    .ok_or_else(|| Error::Invalid(format!("cyclic directions must be integers, got {x}")))?;
                s = (s + n.rem_euclid(*q as i128) * *r as i128).rem_euclid(*q as i128);
            }
            Ok(s as u64)
        })
        .collect()
}

/// `Delta_h F = F . conj(T^h F)` along the diagonal shift by `h`.
pub fn cyclic_delta(f: &CyclicFn, h: u64) -> CyclicFn {
    f.mul(&f.shifted(h).conj())
}

/// `|||f|||^(2^s)` through the inductive formula
/// `|||f|||^(2^s) = E_h |||Delta_h f|||^(2^(s-1))`, down to the mean.
pub fn cyclic_seminorm_pow(f: &CyclicFn, sigmas: &[u64], avg: CyclicAvg) -> f64 {
    fn rec(f: &CyclicFn, sigmas: &[u64], avg: CyclicAvg, w: &[f64]) -> C64 {
        match sigmas {
            [] => f.mean(),
            [sg] if avg == CyclicAvg::Full => C64::new(orbit_energy(f, *sg), 0.0),
            [sg, rest @ ..] => {
                let mut acc = KSum::default();
                for (shift, wh) in merged_shifts(w, *sg, f.q) {
                    acc.add(rec(&cyclic_delta(f, shift), rest, avg, w) * wh);
                }
                acc.value()
            }
        }
    }
    rec(f, sigmas, avg, &avg.weights(f.q)).re
}

/// Weights of `h -> h sigma mod q`, merged by residue.
fn merged_shifts(w: &[f64], sg: u64, q: u64) -> Vec<(u64, f64)> {
    let mut by = vec![0.0; q as usize];
    for (h, &wh) in w.iter().enumerate() {
        by[(h as u64 * sg % q) as usize] += wh;
    }
    by.into_iter().enumerate().filter(|(_, x)| *x != 0.0).map(|(h, x)| (h as u64, x)).collect()
}

/// `E_h ∫ f(x) conj f(x + h sigma)` over a full period, from the
/// orbits of the diagonal shift by `sigma`.
fn orbit_energy(f: &CyclicFn, sg: u64) -> f64 {
    let mut seen = vec![false; f.len()];
    let mut total = KSum::default();
    for x in 0..f.len() {
        if seen[x] {
            continue;
        }
        let mut sum = KSum::default();
        let mut len = 0usize;
        let mut y = x;
        while !seen[y] {
            seen[y] = true;
            sum.add(f.vals[y]);
            len += 1;
            y = f.shift_index(y, sg);
        }
        total.add(C64::new(sum.value().norm_sqr() / len as f64, 0.0));
    }
    total.value().re / f.len() as f64
}

/// `<(f_eps)> = E_h ∫ prod_eps C^|eps| f_eps(x + sum_{i: eps_i = 1} h_i sigma_i)`.
pub fn cyclic_gcs(fs: &[CyclicFn], sigmas: &[u64], avg: CyclicAvg) -> Result<C64> {
    let s = sigmas.len();
    if fs.len() != 1 << s {
        return Err(Error::Invalid(format!("{} functions for {s} directions; need 2^s", fs.len())));
    }
    let q = fs[0].q;
    if fs.iter().any(|f| f.q != q || f.dims != fs[0].dims) {
        return Err(Error::Invalid("functions on different groups".into()));
    }
    let w = avg.weights(q);
    let len = fs[0].len();
    let mut total = KSum::default();
    for_each_tuple(&vec![q as usize; s], |h| {
        let wt: f64 = h.iter().map(|&x| w[x]).product();
        if wt == 0.0 {
            return;
        }
        let shifts: Vec<u64> = (0..1usize << s)
            .map(|eps| (0..s).filter(|i| eps >> i & 1 == 1).map(|i| h[i] as u64 * sigmas[i] % q).sum::<u64>() % q)
            .collect();
        let mut acc = KSum::default();
        for x in 0..len {
            let mut p = C64::new(1.0, 0.0);
            for (eps, f) in fs.iter().enumerate() {
                let v = f.vals[f.shift_index(x, shifts[eps])];
                p *= if vertex_sign(eps) { v.conj() } else { v };
            }
            acc.add(p);
        }
        total.add(acc.value() * (wt / len as f64));
    });
    Ok(total.value())
}

/// `D(f)(x) = E_h prod_{eps != 0} C^|eps| f(x + eps . h sigma)`.
pub fn cyclic_dual(f: &CyclicFn, sigmas: &[u64], avg: CyclicAvg) -> CyclicFn {
    let s = sigmas.len();
    let q = f.q;
    let w = avg.weights(q);
    let mut acc = vec![KSum::default(); f.len()];
    for_each_tuple(&vec![q as usize; s], |h| {
        let wt: f64 = h.iter().map(|&x| w[x]).product();
        if wt == 0.0 {
            return;
        }
        let shifts: Vec<u64> = (1..1usize << s)
            .map(|eps| (0..s).filter(|i| eps >> i & 1 == 1).map(|i| h[i] as u64 * sigmas[i] % q).sum::<u64>() % q)
            .collect();
        for (x, a) in acc.iter_mut().enumerate() {
            let mut p = C64::new(wt, 0.0);
            for (v, &sh) in shifts.iter().enumerate() {
                let y = f.vals[f.shift_index(x, sh)];
                p *= if vertex_sign(v + 1) { y.conj() } else { y };
            }
            a.add(p);
        }
    });
    CyclicFn { vals: acc.iter().map(KSum::value).collect(), ..f.clone() }
}

/// `e(a x + b y) ∘ T^n = e((a + b n) x + b y) e((a n + b n(n-1)/2) alpha)`
/// for `T(x, y) = (x + alpha, y + x)`.
fn skew_iterate(f: &TrigPoly, alpha_word: u128, n: i128) -> TrigPoly {
    let mut out = TrigPoly::zero(2);
    for (k, c) in &f.coeffs {
        let (a, b) = (k[0] as i128, k[1] as i128);
        let lin = a * n + b * (n * (n - 1) / 2);
        let ph = alpha_word.wrapping_mul(lin as u128);
        out.add_term(vec![(a + b * n) as i64, b as i64], c * e_word(ph));
    }
    out
}

/// Histogram of `floor(m' v) - floor(m v)` for `m, m' in [-M, M]`.
fn difference_histogram(v: &ScalarValue, m: u64) -> BTreeMap<i128, f64> {
    let mi = m as i64;
    let fl: Vec<i128> = (-mi..=mi).map(|n| floor_mul(v, n)).collect();
    let mut h: BTreeMap<i128, f64> = BTreeMap::new();
    let w = 1.0 / (fl.len() * fl.len()) as f64;
    for a in &fl {
        for b in &fl {
            *h.entry(b - a).or_default() += w;
        }
    }
    h
}

/// Truncated `|||f|||^(2^s)` on the skew product, by direct expansion on
/// characters. Intended for small `M`.
pub fn skew_seminorm_pow(sys: &DynSystem, f: &TrigPoly, dirs: &[ScalarValue], m: u64) -> Result<C64> {
    let DynSystem::Skew { alpha } = sys else {
        return Err(Error::Invalid("skew system expected".into()));
    };
    if f.dim != 2 {
        return Err(Error::Invalid("skew product lives on the 2-torus".into()));
    }
    if dirs.is_empty() || dirs.iter().any(ScalarValue::is_zero) {
        return Err(Error::Invalid("directions must be nonzero".into()));
    }
    if m == 0 || m > 200 {
        return Err(Error::Invalid("skew truncation M must lie in [1, 200]".into()));
    }
    let s = dirs.len();
    let aw = frac_word(alpha);
    let hists: Vec<Vec<(i128, f64)>> = dirs.iter().map(|v| difference_histogram(v, m).into_iter().collect()).collect();
    let sizes: Vec<usize> = hists.iter().map(Vec::len).collect();
    tuple_count(&sizes)?;
    let fc = f.conj();
    let mut total = KSum::default();
    for_each_tuple(&sizes, |t| {
        let wt: f64 = t.iter().enumerate().map(|(i, &j)| hists[i][j].1).product();
        let mut prod = TrigPoly::constant(2, C64::new(wt, 0.0));
        for eps in 0..1usize << s {
            let n: i128 = (0..s).filter(|i| eps >> i & 1 == 1).map(|i| hists[i][t[i]].0).sum();
            let g = if vertex_sign(eps) { &fc } else { f };
            prod = prod.mul(&skew_iterate(g, aw, n));
        }
        total.add(prod.mean());
    });
    Ok(total.value())
}

/// Result of [`box_seminorm`].
#[derive(Clone, Debug)]
pub struct SeminormReport {
    pub value: f64,
    /// `|||f|||^(2^s)` before rooting (of `f ⊗ conj f` for the plus variant).
    pub radicand: f64,
    pub imag_residual: f64,
    pub plus: bool,
    pub directions: usize,
    pub truncation: Option<u64>,
}

impl SeminormReport {
    pub fn to_json(&self) -> Value {
        json!({
            "value": num17(self.value),
            "radicand": num17(self.radicand),
            "imag_residual": num17(self.imag_residual),
            "plus": self.plus,
            "directions": self.directions,
            "M": self.truncation,
        })
    }
}

/// Test function accepted by [`box_seminorm`].
#[derive(Clone, Debug)]
pub enum TestFn {
    Trig(TrigPoly),
    Cyclic(CyclicFn),
}

/// `|||f|||_{G_1..G_s}`, or `|||f|||^+ = |||f ⊗ conj f|||^(1/2)` with `plus`.
/// `m = None` means the full period and is only valid on cyclic systems.
pub fn box_seminorm(sys: &DynSystem, f: &TestFn, dirs: &[Vec<ScalarValue>], m: Option<u64>, plus: bool) -> Result<SeminormReport> {
    let s = dirs.len();
    let (pow, levels) = match (sys, f) {
        (DynSystem::Torus { .. }, TestFn::Trig(f)) => {
            let m = m.ok_or_else(|| Error::Invalid("torus seminorms need a truncation M".into()))?;
            if plus {
                let sys2 = doubled_torus(sys)?;
                let mut av = TorusAverager::new(&sys2, dirs, m)?;
                (torus_seminorm_pow(&mut av, &f.tensor(&f.conj()))?, s + 1)
            } else {
                let mut av = TorusAverager::new(sys, dirs, m)?;
                (torus_seminorm_pow(&mut av, f)?, s)
            }
        }
        (DynSystem::Cyclic { q, .. }, TestFn::Cyclic(f)) => {
            if f.q != *q {
                return Err(Error::Invalid(format!("function on Z/{} for a system on Z/{q}", f.q)));
            }
            let sig = cyclic_sigmas(sys, dirs)?;
            let avg = m.map_or(CyclicAvg::Full, CyclicAvg::Truncated);
            if plus {
                (C64::new(cyclic_seminorm_pow(&f.tensor(&f.conj()), &sig, avg), 0.0), s + 1)
            } else {
                (C64::new(cyclic_seminorm_pow(f, &sig, avg), 0.0), s)
            }
        }
        (DynSystem::Skew { .. }, TestFn::Trig(f)) => {
            let m = m.ok_or_else(|| Error::Invalid("skew seminorms need a truncation M".into()))?;
            if dirs.iter().any(|v| v.len() != 1) {
                return Err(Error::Invalid("the skew product has k = 1".into()));
            }
            let d: Vec<ScalarValue> = dirs.iter().map(|v| v[0].clone()).collect();
            if plus {
                return Err(Error::Invalid("plus variant is not available on the skew product".into()));
            }
            (skew_seminorm_pow(sys, f, &d, m)?, s)
        }
        _ => return Err(Error::Invalid("test function does not match the system".into())),
    };
    let value = root(pow.re, levels)?;
    Ok(SeminormReport { value, radicand: pow.re, imag_residual: pow.im.abs(), plus, directions: s, truncation: m })
}

/// `∫ f D(f) - |||f|||^(2^s)` for the truncated dual function.
pub fn duality_residual(sys: &DynSystem, f: &TestFn, dirs: &[Vec<ScalarValue>], m: Option<u64>) -> Result<f64> {
    match (sys, f) {
        (DynSystem::Torus { .. }, TestFn::Trig(f)) => {
            let m = m.ok_or_else(|| Error::Invalid("torus duals need a truncation M".into()))?;
            let mut av = TorusAverager::new(sys, dirs, m)?;
            let d = torus_dual(&mut av, f)?;
            let pow = torus_seminorm_pow(&mut av, f)?;
            Ok((torus_pairing(f, &d) - pow).norm())
        }
        (DynSystem::Cyclic { .. }, TestFn::Cyclic(f)) => {
            let sig = cyclic_sigmas(sys, dirs)?;
            let avg = m.map_or(CyclicAvg::Full, CyclicAvg::Truncated);
            let d = cyclic_dual(f, &sig, avg);
            let pair = f.mul(&d).mean();
            Ok((pair - cyclic_seminorm_pow(f, &sig, avg)).norm())
        }
        _ => Err(Error::Invalid("dual functions are available on torus and cyclic systems".into())),
    }
}

/// Dual function values: Fourier coefficients on the torus, point values on
/// `Z/q`.
pub fn dual_function(sys: &DynSystem, f: &TestFn, dirs: &[Vec<ScalarValue>], m: Option<u64>) -> Result<TestFn> {
    match (sys, f) {
        (DynSystem::Torus { .. }, TestFn::Trig(f)) => {
            let m = m.ok_or_else(|| Error::Invalid("torus duals need a truncation M".into()))?;
            let mut av = TorusAverager::new(sys, dirs, m)?;
            Ok(TestFn::Trig(torus_dual(&mut av, f)?))
        }
        (DynSystem::Cyclic { .. }, TestFn::Cyclic(f)) => {
            let sig = cyclic_sigmas(sys, dirs)?;
            Ok(TestFn::Cyclic(cyclic_dual(f, &sig, m.map_or(CyclicAvg::Full, CyclicAvg::Truncated))))
        }
        _ => Err(Error::Invalid("dual functions are available on torus and cyclic systems".into())),
    }
}

/// Integer direction `(v_1, .., v_k)`.
pub fn int_direction(v: &[i64]) -> Vec<ScalarValue> {
    v.iter().map(|&x| ScalarValue::from_int(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_fn(rng: &mut ChaCha8Rng, q: u64) -> CyclicFn {
        CyclicFn::new(q, (0..q).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()).unwrap()
    }

    #[test]
    fn floor_mul_signs() {
        let r = ScalarValue::sqrt(2);
        assert_eq!(floor_mul(&r, 10), 14);
        assert_eq!(floor_mul(&r, -10), -15);
        let h = ScalarValue::from_rat(rat(3, 2));
        assert_eq!(floor_mul(&h, -2), -3);
        assert_eq!(floor_mul(&h, -3), -5);
    }

    #[test]
    fn constant_function_is_one() {
        let sys = DynSystem::torus(vec![vec![ScalarValue::sqrt(2)], vec![ScalarValue::sqrt(3)]]).unwrap();
        let one = TestFn::Trig(TrigPoly::constant(1, C64::new(1.0, 0.0)));
        let dirs = vec![int_direction(&[1, 0]), vec![ScalarValue::sqrt(2), ScalarValue::from_int(-1)]];
        for plus in [false, true] {
            assert_eq!(box_seminorm(&sys, &one, &dirs, Some(50), plus).unwrap().value, 1.0);
        }
        let cyc = DynSystem::cyclic(64, &[1, 5]).unwrap();
        let one = TestFn::Cyclic(CyclicFn::constant(64, C64::new(1.0, 0.0)));
        assert_eq!(box_seminorm(&cyc, &one, &[int_direction(&[1, 1])], None, false).unwrap().value, 1.0);
    }

    #[test]
    fn degree_one_is_abs_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sys = DynSystem::cyclic(64, &[1]).unwrap();
        let f = rand_fn(&mut rng, 64);
        let r = box_seminorm(&sys, &TestFn::Cyclic(f.clone()), &[int_direction(&[1])], None, false).unwrap();
        assert!((r.value - f.mean().norm()).abs() < 1e-12);
        let d = cyclic_dual(&f, &[1], CyclicAvg::Full);
        assert!(d.vals.iter().all(|v| (v - f.mean().conj()).norm() < 1e-12));
    }

    #[test]
    fn gcs_and_recursion_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = rand_fn(&mut rng, 16);
        for avg in [CyclicAvg::Full, CyclicAvg::Truncated(3)] {
            let a = cyclic_seminorm_pow(&f, &[1, 3], avg);
            let b = cyclic_gcs(&vec![f.clone(); 4], &[1, 3], avg).unwrap();
            assert!((a - b.re).abs() < 1e-12 && b.im.abs() < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn torus_matches_cyclic_on_rational_rotations() {
        // rotation by j/q on the circle = shift by j on Z/q for characters
        let q = 12u64;
        let tor =
            DynSystem::torus(vec![vec![ScalarValue::from_rat(rat(1, 12))], vec![ScalarValue::from_rat(rat(5, 12))]])
                .unwrap();
        let cyc = DynSystem::cyclic(q, &[1, 5]).unwrap();
        let mut f = TrigPoly::character(vec![1]);
        f.add_term(vec![2], C64::new(0.5, -0.25));
        f.add_term(vec![0], C64::new(0.3, 0.0));
        let fc = CyclicFn::new(q, (0..q).map(|x| f.eval(&[x as f64 / q as f64])).collect()).unwrap();
        let dirs = vec![int_direction(&[1, 0]), int_direction(&[1, 1])];
        let a = box_seminorm(&tor, &TestFn::Trig(f.clone()), &dirs, Some(7), false).unwrap().value;
        let b = box_seminorm(&cyc, &TestFn::Cyclic(fc.clone()), &dirs, Some(7), false).unwrap().value;
        assert!((a - b).abs() < 1e-9, "{a} {b}");
        let a = box_seminorm(&tor, &TestFn::Trig(f.clone()), &dirs[..1], Some(4), true).unwrap().value;
        let b = box_seminorm(&cyc, &TestFn::Cyclic(fc), &dirs[..1], Some(4), true).unwrap().value;
        assert!((a - b).abs() < 1e-9, "{a} {b}");
    }

    #[test]
    fn duality_on_torus() {
        let sys = DynSystem::torus(vec![vec![ScalarValue::sqrt(2)], vec![ScalarValue::sqrt(3)]]).unwrap();
        let mut f = TrigPoly::character(vec![1]);
        f.add_term(vec![-2], C64::new(0.5, 0.5));
        f.add_term(vec![0], C64::new(0.25, 0.0));
        let dirs = vec![int_direction(&[1, 0]), vec![ScalarValue::sqrt(2), ScalarValue::sqrt(3)]];
        let r = duality_residual(&sys, &TestFn::Trig(f), &dirs, Some(1000)).unwrap();
        assert!(r < 1e-12, "{r}");
    }

    #[test]
    fn skew_characters() {
        let sys = DynSystem::Skew { alpha: ScalarValue::sqrt(2) };
        // e(x) is an eigenfunction: every seminorm of degree >= 1 sees |mean| of
        // an averaged eigenvalue, which decays; e(y) is not, but is level-2 structured
        let ex = TrigPoly::character(vec![1, 0]);
        let v = skew_seminorm_pow(&sys, &ex, &[ScalarValue::one()], 100).unwrap();
        assert!(v.re < 0.01 && v.re >= 0.0, "{v}");
        let ey = TrigPoly::character(vec![0, 1]);
        let one = ScalarValue::one();
        let v = skew_seminorm_pow(&sys, &ey, &[one.clone(), one.clone(), one], 10).unwrap();
        assert!((v.re - 1.0).abs() < 1e-9, "{v}");
    }
}
