//! Simultaneous Taylor degrees for strongly nonpolynomial generators.
//!
//! Given fractional degrees `c_i` and a target `q`, pick degrees `d_i` and
//! windows `H <<< L` such that on `n <= L(N)` each `g_i(N + n)` is close to its
//! degree-`d_i` Taylor polynomial at `N`, while the top coefficient
//! `g_i^(d_i)(N) H(N)^(d_i)` keeps a fractional degree in `(0, 1)`.

use std::cmp::Ordering;

use num_traits::{One, Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::hardy::{is_generator, rat_pow_scalar, HardyExpr, Key};
use crate::numeric::ball::{Ball, Ctx};
use crate::scalar::{fmt_rat, rat, rat_int, Rat, ScalarValue};
use crate::{Error, Result};

fn sv(n: i64) -> ScalarValue {
    ScalarValue::from_int(n)
}

fn cmp_sv(a: &ScalarValue, b: &ScalarValue) -> Ordering {
    (a - b).signum().cmp(&0)
}

/// `c / d` for a positive integer `d`.
fn over(c: &ScalarValue, d: u32) -> ScalarValue {
    c.scale(&rat(1, d as i64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConditionReport {
    pub checks: Vec<Check>,
}

impl ConditionReport {
    fn push(&mut self, name: &'static str, fails: Vec<String>) {
        let pass = fails.is_empty();
        self.checks.push(Check { name, pass, detail: fails.join("; ") });
    }

    pub fn passed(&self, name: &str) -> bool {
        self.checks.iter().any(|c| c.name == name && c.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        for c in &self.checks {
            m.insert(c.name.to_string(), json!({"pass": c.pass, "detail": c.detail}));
        }
        Value::Object(m)
    }
}

#[derive(Clone, Debug)]
pub struct DegreeSolution {
    pub fracdegs: Vec<ScalarValue>,
    pub q: u32,
    pub degrees: Vec<u32>,
    /// Generator playing the role of the fastest one; `None` when every
    /// fracdeg is 0.
    pub top: Option<usize>,
    pub eta0: ScalarValue,
    pub eta: ScalarValue,
    pub h_fracdeg: ScalarValue,
    pub l_fracdeg: ScalarValue,
    pub h: Option<HardyExpr>,
    pub l: Option<HardyExpr>,
    pub report: ConditionReport,
}

#[derive(Clone, Debug)]
pub struct TaylorOptions {
    /// How many top-class degrees to try past the first candidate.
    pub budget: u32,
}

impl Default for TaylorOptions {
    fn default() -> Self {
        TaylorOptions { budget: 20_000 }
    }
}

/// `eta0 = c_m/d_m - max_i c_i/(d_i+1)`, or 1 without positive fracdegs.
fn eta0_of(fracdegs: &[ScalarValue], degrees: &[u32], top: Option<usize>) -> Option<ScalarValue> {
    let Some(m) = top else {
        return Some(ScalarValue::one());
    };
    if degrees[m] == 0 {
        return None;
    }
    let mut best: Option<ScalarValue> = None;
    for (c, &d) in fracdegs.iter().zip(degrees) {
        if c.signum() > 0 {
            let v = over(c, d + 1);
            if best.as_ref().map_or(true, |b| cmp_sv(&v, b) == Ordering::Greater) {
                best = Some(v);
            }
        }
    }
    Some(&over(&fracdegs[m], degrees[m]) - &best?)
}

/// Fracdeg of `g^(d) H^d` relative to `H`: numerator and common denominator
/// of `(c_i d_m - d_i c_m + eta d_i d_m) / (d_m - c_m + eta d_m)`.
fn chi_parts(sol: &DegreeSolution, i: usize) -> (ScalarValue, ScalarValue) {
    let (cm, dm) = match sol.top {
        Some(m) => (sol.fracdegs[m].clone(), sol.degrees[m] as i64),
        None => (ScalarValue::zero(), 0),
    };
    let di = sol.degrees[i] as i64;
    let num = &(&sol.fracdegs[i].scale(&rat_int(dm)) - &cm.scale(&rat_int(di))) + &sol.eta.scale(&rat_int(di * dm));
    let den = if dm == 0 { ScalarValue::one() } else { &(&sv(dm) - &cm) + &sol.eta.scale(&rat_int(dm)) };
    (num, den)
}

/// Fractional degree of `chi_{g_i}` as `(numerator, denominator)`.
pub fn chi_fracdeg(sol: &DegreeSolution, i: usize) -> (ScalarValue, ScalarValue) {
    chi_parts(sol, i)
}

/// Rational fracdeg of `chi_{g_i}` when numerator and denominator are rational.
pub fn chi_fracdeg_rat(sol: &DegreeSolution, i: usize) -> Option<Rat> {
    let (n, d) = chi_parts(sol, i);
    Some(n.as_rational()? / d.as_rational()?)
}

fn dominant_key(g: &HardyExpr) -> Result<Key> {
    g.dominant().map(|(k, _)| k.clone()).ok_or_else(|| Error::Invalid("zero generator".into()))
}

/// Growth key of `g_i^(d_i)(N) H(N)^(d_i)`.
fn coefficient_key(g: &HardyExpr, d: u32, h: &Key) -> Result<Key> {
    Ok(dominant_key(&g.nth_derivative(d as usize))?.mul(&h.scale(&rat_int(d as i64))))
}

/// Check conditions (i)-(v) and the side facts exactly. With `gens`, the
/// windows and the coefficient growth are checked on the actual germs.
pub fn verify_conditions(sol: &DegreeSolution, gens: Option<&[HardyExpr]>) -> ConditionReport {
    let mut rep = ConditionReport::default();
    let c = &sol.fracdegs;
    let d = &sol.degrees;
    let n = c.len();
    let pos: Vec<usize> = (0..n).filter(|&i| c[i].signum() > 0).collect();

    let mut f = Vec::new();
    if d.len() != n {
        f.push(format!("{} degrees for {} generators", d.len(), n));
        rep.push("i", f);
        return rep;
    }
    for i in 0..n {
        if pos.contains(&i) {
            if d[i] < sol.q {
                f.push(format!("d_{} = {} < q = {}", i + 1, d[i], sol.q));
            }
        } else if d[i] != 0 {
            f.push(format!("d_{} = {} for fracdeg 0", i + 1, d[i]));
        }
    }
    rep.push("i", f);

    let mut f = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let same_c = cmp_sv(&c[i], &c[j]) == Ordering::Equal;
            if same_c != (d[i] == d[j]) {
                f.push(format!("g_{} and g_{}: fracdegs {} / {}, degrees {} / {}", i + 1, j + 1, c[i], c[j], d[i], d[j]));
            }
        }
    }
    rep.push("ii", f);

    if let Some(&i) = pos.iter().find(|&&i| d[i] == 0) {
        let msg = vec![format!("g_{} has positive fracdeg and degree 0", i + 1)];
        for name in ["iii", "iv", "v", "eta0_positive", "chi_sublinear"] {
            rep.push(name, msg.clone());
        }
        return rep;
    }
    let top_ok = match sol.top {
        None => pos.is_empty(),
        Some(m) => pos.iter().all(|&i| cmp_sv(&c[i], &c[m]) != Ordering::Greater) && pos.contains(&m),
    };

    let mut f = Vec::new();
    if !top_ok {
        f.push("top generator does not carry the largest fracdeg".to_string());
    }
    match eta0_of(c, d, sol.top) {
        Some(e0) if cmp_sv(&e0, &sol.eta0) == Ordering::Equal => {
            if e0.signum() <= 0 {
                f.push(format!("eta0 = {e0} <= 0"));
            }
        }
        other => f.push(format!("eta0 recomputes to {:?}", other.map(|x| x.to_string()))),
    }
    if sol.eta.signum() <= 0 || cmp_sv(&sol.eta, &sol.eta0) != Ordering::Less {
        f.push(format!("eta = {} not in (0, eta0)", sol.eta));
    }
    rep.push("eta0_positive", f);

    // (iii): 1 - c_i/d_i < fracdeg H < fracdeg L < 1 - c_j/(d_j+1).
    let one = ScalarValue::one();
    let lambda = match sol.top {
        Some(m) => &(&one - &over(&c[m], d[m])) + &sol.eta,
        None => sol.eta.clone(),
    };
    let mu = &sol.l_fracdeg;
    let mut f = Vec::new();
    if cmp_sv(&lambda, &sol.h_fracdeg) != Ordering::Equal {
        f.push(format!("fracdeg H = {} but the construction gives {}", sol.h_fracdeg, lambda));
    }
    if lambda.signum() <= 0 || cmp_sv(&lambda, mu) != Ordering::Less || cmp_sv(mu, &one) != Ordering::Less {
        f.push(format!("need 0 < {} < {} < 1", lambda, mu));
    }
    for &i in &pos {
        let lo = &one - &over(&c[i], d[i]);
        if cmp_sv(&lo, &lambda) != Ordering::Less {
            f.push(format!("1 - c_{i1}/d_{i1} = {lo} >= fracdeg H", i1 = i + 1));
        }
        let hi = &one - &over(&c[i], d[i] + 1);
        if cmp_sv(mu, &hi) != Ordering::Less {
            f.push(format!("fracdeg L >= 1 - c_{i1}/(d_{i1}+1) = {hi}", i1 = i + 1));
        }
    }
    if gens.is_some() {
        let want = [(&sol.h, &sol.h_fracdeg, "H"), (&sol.l, &sol.l_fracdeg, "L")];
        for (e, fd, name) in want {
            let got = e.as_ref().and_then(|e| e.dominant().map(|(k, _)| ScalarValue::from_rat(k.c.clone())));
            if got.as_ref().map_or(true, |g| cmp_sv(g, fd) != Ordering::Equal) {
                f.push(format!("{name} does not have fracdeg {fd}"));
            }
        }
    }
    rep.push("iii", f);

    let mut f = Vec::new();
    if let Some(m) = sol.top {
        for &i in &pos {
            // c_m/d_m <= c_i/d_i, with equality iff c_i = c_m.
            let s = (&c[i].scale(&rat_int(d[m] as i64)) - &c[m].scale(&rat_int(d[i] as i64))).signum();
            let same = cmp_sv(&c[i], &c[m]) == Ordering::Equal;
            if s < 0 || (s == 0) != same {
                f.push(format!("g_{}: c/d against the top ratio has sign {s}", i + 1));
            }
        }
    }
    rep.push("iv", f);

    let mut f = Vec::new();
    let parts: Vec<(ScalarValue, ScalarValue)> = (0..n).map(|i| chi_parts(sol, i)).collect();
    for &i in &pos {
        let (num, den) = &parts[i];
        if den.signum() <= 0 || num.signum() <= 0 || cmp_sv(num, den) != Ordering::Less {
            f.push(format!("fracdeg chi_{} = ({num})/({den}) not in (0,1)", i + 1));
        }
    }
    rep.push("chi_sublinear", f);

    let mut f = Vec::new();
    match gens {
        Some(gs) => {
            let hk = sol.h.as_ref().and_then(|h| h.dominant().map(|(k, _)| k.clone()));
            match hk {
                None => f.push("H missing".to_string()),
                Some(hk) => {
                    let keys: Vec<Result<Key>> =
                        gs.iter().zip(d).map(|(g, &di)| coefficient_key(g, di, &hk)).collect();
                    for i in 0..n {
                        for j in i + 1..n {
                            match (&keys[i], &keys[j]) {
                                (Ok(a), Ok(b)) if a == b => {
                                    f.push(format!("g_{} and g_{} give comparable coefficients", i + 1, j + 1))
                                }
                                (Err(e), _) | (_, Err(e)) => f.push(e.to_string()),
                                _ => {}
                            }
                        }
                    }
                }
            }
        }
        None => {
            for (a, &i) in pos.iter().enumerate() {
                for &j in &pos[a + 1..] {
                    let distinct_c = cmp_sv(&c[i], &c[j]) != Ordering::Equal;
                    if distinct_c && cmp_sv(&parts[i].0, &parts[j].0) == Ordering::Equal {
                        f.push(format!("chi_{} and chi_{} share a fracdeg", i + 1, j + 1));
                    }
                }
            }
        }
    }
    rep.push("v", f);
    rep
}

/// `floor(a D / b)` for positive `a, b`, or `None` when `a D / b` is an integer.
fn strict_floor(a: &ScalarValue, b: &ScalarValue, dd: u32) -> Option<i64> {
    let ad = a.scale(&rat_int(dd as i64));
    let sign_minus = |k: i64| (&ad - &b.scale(&rat_int(k))).signum();
    let mut k = (a.to_f64() * dd as f64 / b.to_f64()).floor() as i64;
    loop {
        match sign_minus(k) {
            s if s < 0 => k -= 1,
            0 => return None,
            _ => break,
        }
    }
    loop {
        match sign_minus(k + 1) {
            s if s > 0 => k += 1,
            0 => return None,
            _ => break,
        }
    }
    Some(k)
}

/// Solve for degrees from fractional degrees alone. Entries equal to 0 mark
/// subfractional generators; the others must be positive.
pub fn solve_degree_system(fracdegs: &[ScalarValue], q: u32, opts: &TaylorOptions) -> Result<DegreeSolution> {
    if q == 0 {
        return Err(Error::Invalid("q must be at least 1".into()));
    }
    if let Some(c) = fracdegs.iter().find(|c| c.signum() < 0) {
        return Err(Error::Invalid(format!("negative fracdeg {c}")));
    }
    let n = fracdegs.len();
    let pos: Vec<usize> = (0..n).filter(|&i| fracdegs[i].signum() > 0).collect();
    let mut classes: Vec<ScalarValue> = Vec::new();
    for &i in &pos {
        if !classes.iter().any(|c| cmp_sv(c, &fracdegs[i]) == Ordering::Equal) {
            classes.push(fracdegs[i].clone());
        }
    }
    classes.sort_by(cmp_sv);
    let Some(top_c) = classes.last().cloned() else {
        return Ok(finish(fracdegs, q, vec![0; n], None, None));
    };
    let top = pos.iter().copied().find(|&i| cmp_sv(&fracdegs[i], &top_c) == Ordering::Equal);
    let lower = &classes[..classes.len() - 1];
    let start = q.max(1);
    let mut last = String::new();
    'scan: for dl in start..start.saturating_add(opts.budget) {
        let mut ds = Vec::with_capacity(lower.len());
        for ci in lower {
            match strict_floor(ci, &top_c, dl) {
                Some(k) if k >= q as i64 => ds.push(k as u32),
                _ => continue 'scan,
            }
        }
        ds.push(dl);
        // C_l/D_l < (C_i - C_j)/(D_i - D_j) for lower classes i > j.
        for i in 0..lower.len() {
            for j in 0..i {
                if ds[i] <= ds[j] {
                    continue 'scan;
                }
                let lhs = top_c.scale(&rat_int((ds[i] - ds[j]) as i64));
                let rhs = (&lower[i] - &lower[j]).scale(&rat_int(dl as i64));
                if cmp_sv(&lhs, &rhs) != Ordering::Less {
                    continue 'scan;
                }
            }
        }
        let degrees: Vec<u32> = (0..n)
            .map(|i| match classes.iter().position(|c| cmp_sv(c, &fracdegs[i]) == Ordering::Equal) {
                Some(r) if fracdegs[i].signum() > 0 => ds[r],
                _ => 0,
            })
            .collect();
        let sol = finish(fracdegs, q, degrees, top, None);
        if sol.report.all_pass() {
            return Ok(sol);
        }
        last = format!("top degree {dl}: {:?}", sol.degrees);
    }
    Err(Error::NoSolution(format!("search budget exhausted after {} top degrees; last candidate {last}", opts.budget)))
}

/// Fill `eta`, the windows and the report for fixed degrees.
fn finish(
    fracdegs: &[ScalarValue],
    q: u32,
    degrees: Vec<u32>,
    top: Option<usize>,
    gens: Option<(&[HardyExpr], usize)>,
) -> DegreeSolution {
    let eta0 = eta0_of(fracdegs, &degrees, top).unwrap_or_else(ScalarValue::zero);
    let eta = eta0.scale(&rat(1, 2));
    let one = ScalarValue::one();
    let (lambda, right) = match top {
        Some(m) => {
            let lambda = &(&one - &over(&fracdegs[m], degrees[m])) + &eta;
            let mut right: Option<ScalarValue> = None;
            for (c, &d) in fracdegs.iter().zip(&degrees) {
                if c.signum() > 0 {
                    let v = &one - &over(c, d + 1);
                    if right.as_ref().map_or(true, |r| cmp_sv(&v, r) == Ordering::Less) {
                        right = Some(v);
                    }
                }
            }
            (lambda, right.unwrap_or_else(|| one.clone()))
        }
        None => (eta.clone(), one.clone()),
    };
    let mu = (&lambda + &right).scale(&rat(1, 2));
    let mut sol = DegreeSolution {
        fracdegs: fracdegs.to_vec(),
        q,
        degrees,
        top,
        eta0,
        eta,
        h_fracdeg: lambda,
        l_fracdeg: mu,
        h: None,
        l: None,
        report: ConditionReport::default(),
    };
    if let Some((gs, _)) = gens {
        sol.h = window_h(&sol, gs).ok();
        sol.l = sol.l_fracdeg.as_rational().map(HardyExpr::t_pow);
    }
    sol.report = verify_conditions(&sol, gens.map(|(g, _)| g));
    sol
}

/// `H = |g_m^(d_m)|^(-1/d_m) t^eta` reduced to its dominant term with unit
/// coefficient, or `t^eta` without positive fracdegs.
fn window_h(sol: &DegreeSolution, gens: &[HardyExpr]) -> Result<HardyExpr> {
    let eta = sol.eta.as_rational().ok_or_else(|| Error::OutsideClass(format!("eta = {} is irrational", sol.eta)))?;
    let key = match sol.top {
        None => Key::power(eta),
        Some(m) => {
            let dm = sol.degrees[m];
            let k = dominant_key(&gens[m].nth_derivative(dm as usize))?;
            k.scale(&rat(-1, dm as i64)).mul(&Key::power(eta))
        }
    };
    Ok(HardyExpr::term(ScalarValue::one(), key))
}

/// Solve for concrete generators. `g_m` is the fastest generator of the
/// top fracdeg class.
pub fn solve_for_generators(gens: &[HardyExpr], q: u32, opts: &TaylorOptions) -> Result<DegreeSolution> {
    let mut fracdegs = Vec::with_capacity(gens.len());
    for g in gens {
        let k = dominant_key(g)?;
        if !is_generator(&k) {
            return Err(Error::Invalid(format!("{g} is not strongly nonpolynomial")));
        }
        fracdegs.push(ScalarValue::from_rat(k.c.clone()));
    }
    for i in 0..gens.len() {
        for j in 0..i {
            if dominant_key(&gens[i])? == dominant_key(&gens[j])? {
                return Err(Error::Invalid(format!("generators {} and {} have the same growth", j + 1, i + 1)));
            }
        }
    }
    let base = solve_degree_system(&fracdegs, q, opts)?;
    let top = base.top.map(|m| {
        (0..gens.len())
            .filter(|&i| fracdegs[i] == fracdegs[m])
            .max_by(|&a, &b| dominant_key(&gens[a]).ok().cmp(&dominant_key(&gens[b]).ok()))
            .unwrap_or(m)
    });
    Ok(finish(&fracdegs, q, base.degrees, top, Some((gens, 0))))
}

/// `chi_{g_i} = g_i^(d_i) o H^(-1)(t) * t^(d_i)`, dominant term with unit
/// coefficient.
pub fn chi(gens: &[HardyExpr], i: usize, sol: &DegreeSolution) -> Result<HardyExpr> {
    let h = sol.h.as_ref().ok_or_else(|| Error::Invalid("solution has no window H".into()))?;
    let hk = dominant_key(h)?;
    if !hk.atoms.is_empty() {
        return Err(Error::OutsideClass("H carries exp-log factors; its inverse leaves the class".into()));
    }
    let lambda = hk.c.clone();
    if !lambda.is_positive() || lambda >= Rat::one() {
        return Err(Error::OutsideClass(format!("fracdeg H = {} not in (0,1)", fmt_rat(&lambda))));
    }
    let di = sol.degrees[i];
    let k = dominant_key(&gens[i].nth_derivative(di as usize))?;
    // H^(-1)(t) ~ const * t^(1/lambda) log(t)^(-f/lambda).
    let c = &k.c / &lambda + rat_int(di as i64);
    let e = &k.e - &hk.e * &k.c / &lambda;
    let mut atoms = std::collections::BTreeMap::new();
    for (b, qv) in &k.atoms {
        let f = rat_pow_scalar(&lambda, &-b.clone())
            .and_then(|s| s.as_rational())
            .ok_or_else(|| Error::OutsideClass(format!("({})^(-{}) is not rational", fmt_rat(&lambda), fmt_rat(b))))?;
        atoms.insert(b.clone(), qv * f);
    }
    Ok(HardyExpr::term(ScalarValue::one(), Key { c, e, atoms }))
}

impl DegreeSolution {
    pub fn to_json(&self) -> Value {
        let show = |e: &Option<HardyExpr>, fd: &ScalarValue| match e {
            Some(e) => e.to_string(),
            None => format!("t^({fd})"),
        };
        json!({
            "degrees": self.degrees,
            "fracdegs": self.fracdegs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "q": self.q,
            "eta0": self.eta0.to_string(),
            "eta": self.eta.to_string(),
            "H": show(&self.h, &self.h_fracdeg),
            "L": show(&self.l, &self.l_fracdeg),
            "H_fracdeg": self.h_fracdeg.to_string(),
            "L_fracdeg": self.l_fracdeg.to_string(),
            "chi_fracdegs": (0..self.fracdegs.len()).map(|i| {
                let (n, d) = chi_parts(self, i);
                match (n.as_rational(), d.as_rational()) {
                    (Some(n), Some(d)) => fmt_rat(&(n / d)),
                    _ => format!("({n})/({d})"),
                }
            }).collect::<Vec<_>>(),
            "report": self.report.to_json(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct WindowError {
    pub n: u64,
    pub window: u64,
    /// Largest sampled `|g(N+n) - g_N(n)|`, as an upper enclosure.
    pub sampled: f64,
    /// `max |g^(d+1)| * L^(d+1) / (d+1)!` over the endpoints of `[N, N+L]`.
    pub remainder_bound: f64,
}

impl WindowError {
    pub fn bound(&self) -> f64 {
        self.sampled.max(self.remainder_bound)
    }
}

/// Error of the degree-`d` Taylor polynomial of `g` at `N` on integer
/// `0 <= n <= L(N)`. The remainder bound assumes `|g^(d+1)|` is monotone on
/// the window, which holds eventually for every Hardy germ.
pub fn taylor_window_error(g: &HardyExpr, d: u32, l: &HardyExpr, n: u64, samples: usize) -> Result<WindowError> {
    let mut ctx = Ctx::new(256);
    let nb = Ball::from_u64(n, &ctx);
    let lv = l.eval_ball(&nb, &mut ctx)?;
    let window = lv.to_f64_bounds().0.floor().max(0.0) as u64;
    let coeffs = g.taylor_coeffs(&nb, d as usize, &mut ctx)?;
    let samples = samples.max(2) as u64;
    let mut sampled = 0.0f64;
    for s in 0..samples {
        let x = ((s as u128 * window as u128) / (samples as u128 - 1)) as u64;
        let xb = Ball::from_u64(x, &ctx);
        let mut poly = Ball::zero(&ctx);
        for c in coeffs.iter().rev() {
            poly = poly.mul(&xb, &ctx).add(c, &ctx);
        }
        let exact = g.eval_ball(&Ball::from_u64(n + x, &ctx), &mut ctx)?;
        sampled = sampled.max(exact.sub(&poly, &ctx).abs_upper());
    }
    let next = g.nth_derivative(d as usize + 1);
    let mut top = 0.0f64;
    for t in [n, n + window] {
        top = top.max(next.eval_ball(&Ball::from_u64(t, &ctx), &mut ctx)?.abs_upper());
    }
    let mut fact = 1.0f64;
    for k in 1..=d + 1 {
        fact *= k as f64;
    }
    let remainder_bound = top * (window as f64).powi(d as i32 + 1) / fact * (1.0 + 1e-12);
    if !sampled.is_finite() || !remainder_bound.is_finite() {
        return Err(Error::Numeric("window error is not finite".into()));
    }
    Ok(WindowError { n, window, sampled, remainder_bound })
}

/// Random fracdeg multisets: up to 5 positive classes of rationals in
/// `(0, 4]`, with repeats and subfractional entries.
pub fn random_fracdegs<R: rand::Rng>(rng: &mut R) -> Vec<ScalarValue> {
    let classes = rng.gen_range(1..=5usize);
    let mut out = Vec::new();
    let mut seen: Vec<Rat> = Vec::new();
    while seen.len() < classes {
        let den = rng.gen_range(1..=7i64);
        let num = rng.gen_range(1..=4 * den);
        let r = rat(num, den);
        if !seen.contains(&r) {
            seen.push(r);
        }
    }
    for r in &seen {
        for _ in 0..rng.gen_range(1..=2) {
            out.push(ScalarValue::from_rat(r.clone()));
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        out.push(ScalarValue::zero());
    }
    out
}

pub fn fracdeg_to_f64(c: &ScalarValue) -> f64 {
    c.as_rational().and_then(|r| r.to_f64()).unwrap_or_else(|| c.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::parse_expr;
    use crate::scalar::Basis;
    use rand::SeedableRng;

    fn p(s: &str) -> HardyExpr {
        parse_expr(s, &Basis::new()).unwrap()
    }

    fn r(n: i64, d: i64) -> ScalarValue {
        ScalarValue::from_rat(rat(n, d))
    }

    #[test]
    fn single_class_three_halves() {
        let s = solve_degree_system(&[r(3, 2)], 3, &TaylorOptions::default()).unwrap();
        assert_eq!(s.degrees, vec![3]);
        assert_eq!(s.eta0, r(1, 8));
        assert_eq!(s.eta, r(1, 16));
        assert_eq!(s.h_fracdeg, r(9, 16));
        assert!(s.report.all_pass(), "{:?}", s.report);
        assert_eq!(chi_fracdeg_rat(&s, 0), Some(rat(1, 3)));
    }

    #[test]
    fn all_subfractional() {
        let gens = [p("log(t)"), p("log(t)^2")];
        let s = solve_for_generators(&gens, 3, &TaylorOptions::default()).unwrap();
        assert_eq!(s.degrees, vec![0, 0]);
        assert_eq!(s.h, Some(HardyExpr::t_pow(rat(1, 2))));
        assert_eq!(s.l, Some(HardyExpr::t_pow(rat(3, 4))));
        assert!(s.report.all_pass(), "{:?}", s.report);
        for i in 0..2 {
            assert_eq!(chi(&gens, i, &s).unwrap().fracdeg().unwrap(), rat(0, 1));
        }
    }

    #[test]
    fn two_classes() {
        let s = solve_degree_system(&[r(1, 2), r(3, 2)], 2, &TaylorOptions::default()).unwrap();
        assert!(s.report.all_pass(), "{:?}", s.report);
        assert!(s.degrees.iter().all(|&d| d >= 2));
        assert!(s.eta0.signum() > 0);
    }

    #[test]
    fn planted_violations() {
        let mut s = solve_degree_system(&[r(3, 2)], 3, &TaylorOptions::default()).unwrap();
        s.degrees = vec![1];
        let rep = verify_conditions(&s, None);
        assert!(!rep.passed("i"));

        let mut s = solve_degree_system(&[r(3, 2), r(3, 2)], 3, &TaylorOptions::default()).unwrap();
        assert!(s.report.all_pass());
        s.degrees = vec![3, 4];
        assert!(!verify_conditions(&s, None).passed("ii"));
    }

    #[test]
    fn concrete_generators_and_chi() {
        let gens = [p("t^(1/2)"), p("t^(3/2)"), p("log(t)")];
        let s = solve_for_generators(&gens, 2, &TaylorOptions::default()).unwrap();
        assert!(s.report.all_pass(), "{:?}", s.report);
        assert_eq!(s.degrees[2], 0);
        for i in 0..3 {
            let c = chi(&gens, i, &s).unwrap();
            assert_eq!(c.fracdeg().unwrap(), chi_fracdeg_rat(&s, i).unwrap());
        }
        let a = chi(&gens, 0, &s).unwrap();
        let b = chi(&gens, 1, &s).unwrap();
        assert_ne!(a.fracdeg().unwrap(), b.fracdeg().unwrap());
    }

    #[test]
    fn same_class_with_log_factor() {
        let gens = [p("t^(3/2)"), p("t^(3/2)*log(t)")];
        let s = solve_for_generators(&gens, 3, &TaylorOptions::default()).unwrap();
        assert_eq!(s.degrees[0], s.degrees[1]);
        assert!(s.report.all_pass(), "{:?}", s.report);
        assert_eq!(s.top, Some(1));
    }

    #[test]
    fn irrational_fracdeg() {
        let s = solve_degree_system(&[ScalarValue::sqrt(2), r(1, 3)], 2, &TaylorOptions::default()).unwrap();
        assert!(s.report.all_pass(), "{:?}", s.report);
    }

    #[test]
    fn random_multisets_are_feasible() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for k in 0..100 {
            let c = random_fracdegs(&mut rng);
            let q = [2, 3, 5][k % 3];
            let s = solve_degree_system(&c, q, &TaylorOptions::default())
                .unwrap_or_else(|e| panic!("{:?} q={q}: {e}", c.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
            assert!(s.report.all_pass());
        }
    }

    #[test]
    fn window_error_decreases() {
        let g = p("t^(3/2)");
        let s = solve_for_generators(std::slice::from_ref(&g), 3, &TaylorOptions::default()).unwrap();
        let l = s.l.clone().unwrap();
        let e4 = taylor_window_error(&g, s.degrees[0], &l, 10_000, 500).unwrap();
        let e6 = taylor_window_error(&g, s.degrees[0], &l, 1_000_000, 500).unwrap();
        assert!(e6.bound() < e4.bound(), "{e4:?} {e6:?}");
        assert!(e6.sampled <= e6.remainder_bound);
    }
}
