//! The eleven acceptance criteria as runnable, self-checking units.
//!
//! Each criterion returns a [`CriterionReport`] listing its individual
//! checks. Nothing here loosens a tolerance: a check that cannot be met is
//! reported as failed with the measured value.

use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::hardy::random::{random_expr, random_polynomial, random_unbounded};
use crate::hardy::{parse_expr, GenVec, HardyExpr};
use crate::independence::{boshernitzan_lambda, boshernitzan_test, classify_family, embed_family, IndependenceClass};
use crate::lab::avg::{multi_avg_torus, recurrence_avg, BoxSet};
use crate::lab::seminorm::{box_seminorm, cyclic_delta, cyclic_gcs, cyclic_seminorm_pow, int_direction, CyclicAvg, TestFn};
use crate::lab::system::{CyclicFn, DynSystem, TrigPoly};
use crate::lab::weyl::{weyl_sum, WeylMode};
use crate::lab::{num17, C64};
use crate::pet::{embed_scalar, run_pet, PetOptions};
use crate::scalar::{rat, rat_int, Basis, Rat, ScalarValue};
use crate::taylor::{random_fracdegs, solve_degree_system, solve_for_generators, taylor_window_error, TaylorOptions};
use crate::{Error, Result};

pub const CRITERIA: usize = 11;

/// Seed of the randomized corpora.
pub const DEFAULT_SEED: u64 = 20240917;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: DEFAULT_SEED }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: usize,
    pub title: &'static str,
    pub checks: Vec<SuiteCheck>,
    pub runtime_s: f64,
    pub limit_s: f64,
    pub data: Value,
}

impl CriterionReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.runtime_s < self.limit_s
    }

    /// One line: `PASS  3  Boshernitzan consistency (12.3 s)`, failing
    /// checks appended.
    pub fn line(&self) -> String {
        let mut s = format!(
            "{}  {:>2}  {} ({:.2} s, limit {} s)",
            if self.pass() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.runtime_s,
            self.limit_s
        );
        for c in self.checks.iter().filter(|c| !c.pass) {
            s.push_str(&format!("\n        failed {}: {}", c.name, c.detail));
        }
        if self.runtime_s >= self.limit_s {
            s.push_str("\n        failed runtime limit");
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "title": self.title,
            "pass": self.pass(),
            "runtime_s": num17(self.runtime_s),
            "limit_s": num17(self.limit_s),
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
            "data": self.data,
        })
    }
}

struct Builder {
    checks: Vec<SuiteCheck>,
    data: serde_json::Map<String, Value>,
}

impl Builder {
    fn new() -> Self {
        Builder { checks: Vec::new(), data: serde_json::Map::new() }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(SuiteCheck { name: name.into(), pass, detail: detail.into() });
    }

    fn put(&mut self, k: &str, v: Value) {
        self.data.insert(k.to_string(), v);
    }
}

pub fn title(id: usize) -> &'static str {
    match id {
        1 => "fracdeg laws on 200 random germs",
        2 => "classification of the four example families",
        3 => "Boshernitzan test against Weyl sums",
        4 => "joint ergodicity on two rotations",
        5 => "multiple recurrence lower bound",
        6 => "joint ergodicity along primes",
        7 => "PET structure on 50 random families",
        8 => "PET fixtures",
        9 => "common Taylor expansion",
        10 => "cyclic seminorm algebra",
        11 => "seminorm of e(x2) on two rotations",
        _ => "unknown",
    }
}

fn limit(id: usize) -> f64 {
    match id {
        1 => 5.0,
        2 | 8 => 1.0,
        4 | 7 | 10 => 30.0,
        _ => 60.0,
    }
}

pub fn run(id: usize, cfg: &SuiteConfig) -> Result<CriterionReport> {
    if !(1..=CRITERIA).contains(&id) {
        return Err(Error::Invalid(format!("criterion id must be in 1..={CRITERIA}, got {id}")));
    }
    let start = Instant::now();
    let mut b = Builder::new();
    match id {
        1 => fracdeg_laws(&mut b, cfg),
        2 => classification_fixture(&mut b)?,
        3 => boshernitzan_consistency(&mut b)?,
        4 => joint_ergodicity(&mut b, false)?,
        5 => recurrence(&mut b)?,
        6 => joint_ergodicity(&mut b, true)?,
        7 => pet_structure(&mut b, cfg),
        8 => pet_fixtures(&mut b)?,
        9 => taylor(&mut b, cfg)?,
        10 => seminorm_algebra(&mut b, cfg)?,
        _ => torus_fixture(&mut b)?,
    }
    Ok(CriterionReport {
        id,
        title: title(id),
        checks: b.checks,
        runtime_s: start.elapsed().as_secs_f64(),
        limit_s: limit(id),
        data: Value::Object(b.data),
    })
}

fn p(s: &str) -> HardyExpr {
    parse_expr(s, &Basis::new()).expect("fixture parses")
}

fn fracdeg_laws(b: &mut Builder, cfg: &SuiteConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bad = Vec::new();
    let mut composed = 0;
    for i in 0..200 {
        let a = random_expr(&mut rng);
        let c = random_expr(&mut rng);
        let fa = a.fracdeg().expect("nonzero");
        let fc = c.fracdeg().expect("nonzero");
        if a.mul(&c).fracdeg().ok() != Some(&fa + &fc) {
            bad.push(format!("#{i} product {a} * {c}"));
        }
        let k = rng.gen_range(1..=4u32);
        if a.pow(k).fracdeg().ok() != Some(&fa * rat_int(k as i64)) {
            bad.push(format!("#{i} power ({a})^{k}"));
        }
        // Composition is exact for a polynomial outer germ, or an inner t^d.
        let (outer, inner) = if i % 2 == 0 {
            (random_polynomial(&mut rng), random_unbounded(&mut rng))
        } else {
            (a.clone(), HardyExpr::t_pow(rat(rng.gen_range(1..=6), rng.gen_range(1..=3))))
        };
        match outer.compose(&inner) {
            Ok(h) => {
                composed += 1;
                let want = outer.fracdeg().expect("nonzero") * inner.fracdeg().expect("nonzero");
                if h.fracdeg().ok() != Some(want) {
                    bad.push(format!("#{i} composition ({outer}) o ({inner})"));
                }
            }
            Err(Error::OutsideClass(_)) => {}
            Err(e) => bad.push(format!("#{i} composition error {e}")),
        }
    }
    b.check("product", !bad.iter().any(|s| s.contains("product")), bad.join("; "));
    b.check("power", !bad.iter().any(|s| s.contains("power")), bad.join("; "));
    b.check("composition", !bad.iter().any(|s| s.contains("composition")), bad.join("; "));
    b.check("composition coverage", composed >= 150, format!("{composed} of 200 compositions exact"));
    b.put("compositions", json!(composed));
}

fn classification_fixture(b: &mut Builder) -> Result<()> {
    use IndependenceClass::*;
    let basis = Basis::from_decls(&["a=0.5772156649015329", "a^2"])?;
    let cases: [(&[&str], IndependenceClass); 4] = [
        (&["t^(3/2)", "t^(3/2)+t^(1/2)"], StronglyIndependent),
        (&["t^(3/2)", "t^(3/2)+t"], StronglyIrrationallyIndependent),
        (&["t^3+a*t^2+a*a*t", "t^2+a*t"], IrrationallyIndependent),
        (&["sqrt(2)*t^2", "sqrt(2)*t^2+sqrt(3)*t"], PairwiseIndependent),
    ];
    let mut out = Vec::new();
    for (exprs, want) in cases {
        let fam: Vec<HardyExpr> = exprs.iter().map(|e| parse_expr(e, &basis)).collect::<Result<_>>()?;
        let c = classify_family(&fam)?;
        b.check(format!("{exprs:?}"), c.class == want, format!("got {}, want {}", c.class, want));
        let wit = match (&c.witness, want.stronger()) {
            (Some(w), Some(s)) => w.verify(&fam) && w.refutes == s,
            (None, None) => true,
            _ => false,
        };
        b.check(format!("{exprs:?} witness"), wit, "witness missing, unsound or refuting the wrong class");
        out.push(c.to_json());
    }
    b.put("classes", Value::Array(out));
    Ok(())
}

/// Equidistributed germs of the corpus; their Weyl sums must decay.
pub const EQUIDISTRIBUTED: [&str; 15] = [
    "t^(3/2)",
    "sqrt(2)*t^2",
    "sqrt(2)*t",
    "t*log(t)",
    "t^(1/2)",
    "t^(5/2)",
    "t^(1/3)",
    "sqrt(3)*t^3",
    "t^(3/2)+t^(1/2)",
    "1/2*t^2+sqrt(2)*t",
    "t^2+t^(1/2)",
    "t^(3/2)*log(t)",
    "sqrt(3)*t^(3/2)",
    "t^(7/3)",
    "t*exps(1,1/2)",
];

/// Germs within `O(log)` of a rational polynomial.
pub const NOT_EQUIDISTRIBUTED: [&str; 5] = ["t^2", "1/2*t^2+1/3*t", "t^3+log(t)", "1/2*t^2+log(t)", "2*t+log(t)^(1/2)"];

const SCHEDULE: [u64; 3] = [10_000, 100_000, 1_000_000];

fn boshernitzan_consistency(b: &mut Builder) -> Result<()> {
    let mut rows = Vec::new();
    for e in EQUIDISTRIBUTED.iter().chain(&NOT_EQUIDISTRIBUTED) {
        let a = p(e);
        let test = boshernitzan_test(&a);
        let expected = EQUIDISTRIBUTED.contains(e);
        b.check(format!("{e} classified"), test == expected, format!("boshernitzan_test = {test}"));
        if test {
            let r = weyl_sum(&[ScalarValue::one()], std::slice::from_ref(&a), &SCHEDULE, WeylMode::Raw, false)?;
            let v: Vec<f64> = r.values.iter().map(|z| z.norm()).collect();
            let decays = v[2] <= 0.05 && (v[2] < v[0] || v[2] < 1e-3);
            b.check(format!("{e} decays"), decays, format!("|S_N| = {:.3e}, {:.3e}, {:.3e}", v[0], v[1], v[2]));
            rows.push(json!({"expr": e, "test": true, "abs": v.iter().map(|x| num17(*x)).collect::<Vec<_>>()}));
        } else {
            let lam = boshernitzan_lambda(&a).ok_or_else(|| Error::Invalid(format!("no witness for {e}")))?;
            let l = ScalarValue::from_rat(Rat::from_integer(lam.clone()));
            let r = weyl_sum(&[l], std::slice::from_ref(&a), &SCHEDULE, WeylMode::Raw, false)?;
            let v: Vec<f64> = r.values.iter().map(|z| z.norm()).collect();
            let stuck = v.iter().all(|&x| x >= 0.05);
            b.check(
                format!("{e} witnessed by lambda = {lam}"),
                stuck,
                format!("|S_N| = {:.3e}, {:.3e}, {:.3e}", v[0], v[1], v[2]),
            );
            rows.push(json!({"expr": e, "test": false, "lambda": lam.to_string(), "abs": v.iter().map(|x| num17(*x)).collect::<Vec<_>>()}));
        }
    }
    b.put("corpus", Value::Array(rows));
    Ok(())
}

/// Rotations by `sqrt 2` and `sqrt 3` on the circle.
pub fn two_rotations() -> DynSystem {
    DynSystem::Torus { dim: 1, alphas: vec![vec![ScalarValue::sqrt(2)], vec![ScalarValue::sqrt(3)]] }
}

/// `(n^(3/2) e_1, (n^(3/2) + n^(1/2)) e_2)`.
pub fn example_family() -> Vec<Vec<HardyExpr>> {
    embed_family(&[p("t^(3/2)"), p("t^(3/2)+t^(1/2)")], &[0, 1], 2).expect("valid embedding")
}

fn joint_ergodicity(b: &mut Builder, primes: bool) -> Result<()> {
    let sys = two_rotations();
    let fam = example_family();
    let chi = TrigPoly::character(vec![1]);
    let tol = if primes { 0.1 } else { 0.05 };
    let r = multi_avg_torus(&sys, &fam, &[chi.clone(), chi], &SCHEDULE, primes)?;
    let d = r.last_deviation();
    b.check("characters", d <= tol, format!("deviation {d:.4e} at N = 10^6 (tolerance {tol})"));
    let one = TrigPoly::constant(1, C64::new(1.0, 0.0));
    let c = multi_avg_torus(&sys, &fam, &[one.clone(), one], &SCHEDULE, primes)?;
    b.check("constants", c.deviations.iter().all(|&x| x == 0.0), format!("deviations {:?}", c.deviations));
    b.put("report", r.to_json());
    Ok(())
}

fn recurrence(b: &mut Builder) -> Result<()> {
    let e: BoxSet = vec![vec![(Rat::zero(), rat(3, 10))]];
    let r = recurrence_avg(&two_rotations(), &e, &example_family(), &[1_000, 10_000, 100_000])?;
    let want = 0.027 - 0.02;
    b.check("lower bound", r.last() >= want, format!("average {:.5} at N = 10^5, need >= {want}", r.last()));
    b.check("strong independence", r.warning.is_none(), r.warning.clone().unwrap_or_default());
    b.put("report", r.to_json());
    Ok(())
}

fn small_coefficient(rng: &mut ChaCha8Rng) -> ScalarValue {
    match rng.gen_range(0..6) {
        0 => ScalarValue::zero(),
        1 => ScalarValue::sqrt(2).scale(&rat_int(rng.gen_range(-2..=2))),
        _ => ScalarValue::from_rat(rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))),
    }
}

/// A random family `p_1..p_l` in `R^k[n]` with zero constant terms and
/// `p_1`, `p_1 - p_j` nonconstant. Coefficients indexed `[j][i][coord]`.
pub fn random_pet_family(rng: &mut ChaCha8Rng, d: usize, l: usize, k: usize) -> Vec<Vec<GenVec>> {
    loop {
        let fam: Vec<Vec<GenVec>> = (0..l)
            .map(|_| {
                let deg = rng.gen_range(1..=d);
                (0..=deg).map(|i| (0..k).map(|_| if i == 0 { ScalarValue::zero() } else { small_coefficient(rng) }).collect()).collect()
            })
            .collect();
        let nonconst = |c: &[GenVec]| c.iter().skip(1).any(|v| v.iter().any(|x| !x.is_zero()));
        let ok = nonconst(&fam[0])
            && fam.iter().skip(1).all(|q| {
                let n = fam[0].len().max(q.len());
                let z = vec![ScalarValue::zero(); k];
                let diff: Vec<GenVec> = (0..n)
                    .map(|i| {
                        let a = fam[0].get(i).unwrap_or(&z);
                        let b = q.get(i).unwrap_or(&z);
                        a.iter().zip(b).map(|(x, y)| x - y).collect()
                    })
                    .collect();
                nonconst(&diff)
            });
        if ok {
            return fam;
        }
    }
}

fn pet_structure(b: &mut Builder, cfg: &SuiteConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7e7);
    let opts = PetOptions::default();
    let mut capped = Vec::new();
    let mut other = Vec::new();
    let mut controls_bad = Vec::new();
    let mut embed_bad = Vec::new();
    let mut done = 0;
    for i in 0..50 {
        let d = 1 + i % 3;
        let l = 1 + (i / 3) % 3;
        let k = 1 + (i / 9) % 2;
        let fam = random_pet_family(&mut rng, d, l, k);
        match run_pet(&fam, &opts) {
            Ok(r) => {
                done += 1;
                if let Err(e) = r.verify_controls() {
                    controls_bad.push(format!("#{i}: {e}"));
                }
                // the same scalar family embedded in k = 1, 2, 3
                if k == 1 {
                    let scalar: Vec<Vec<ScalarValue>> = fam.iter().map(|c| c.iter().map(|v| v[0].clone()).collect()).collect();
                    for v in [vec![ScalarValue::one(), ScalarValue::sqrt(2)], vec![rat_int(2).into_scalar(), ScalarValue::zero(), ScalarValue::sqrt(3)]] {
                        match run_pet(&embed_scalar(&scalar, &v), &opts) {
                            Ok(e) if e.schedule == r.schedule && (e.s1, e.s2) == (r.s1, r.s2) => {}
                            Ok(e) => embed_bad.push(format!("#{i}: k = {} gives s1 = {}, s2 = {}", v.len(), e.s1, e.s2)),
                            Err(e) => embed_bad.push(format!("#{i}: k = {}: {e}", v.len())),
                        }
                    }
                }
            }
            Err(Error::NoSolution(m)) => capped.push(format!("#{i} (d = {d}, l = {l}, k = {k}): {}", m.split("; schedule").next().unwrap_or(&m))),
            Err(e) => other.push(format!("#{i}: {e}")),
        }
    }
    b.check("termination", capped.is_empty() && other.is_empty(), format!("{} of 50 hit the member cap; {}", capped.len(), [capped.clone(), other.clone()].concat().join("; ")));
    b.check("descendence after every step", other.is_empty(), other.join("; "));
    b.check("control coefficients", controls_bad.is_empty(), controls_bad.join("; "));
    b.check("k-embedding invariance", embed_bad.is_empty(), embed_bad.join("; "));
    b.put("completed", json!(done));
    b.put("capped", json!(capped));
}

trait IntoScalar {
    fn into_scalar(self) -> ScalarValue;
}

impl IntoScalar for Rat {
    fn into_scalar(self) -> ScalarValue {
        ScalarValue::from_rat(self)
    }
}

fn pet_fixtures(b: &mut Builder) -> Result<()> {
    let v = vec![ScalarValue::one(), ScalarValue::sqrt(2)];
    let lin: Vec<Vec<ScalarValue>> = (1..=3).map(|c| vec![ScalarValue::zero(), ScalarValue::from_int(c)]).collect();
    let r = run_pet(&embed_scalar(&lin, &v), &PetOptions::default())?;
    let mut got = r.directions();
    let scale = |c: i64| v.iter().map(|x| x.scale(&rat_int(c))).collect::<GenVec>();
    let mut want = vec![scale(1), scale(-2), scale(-1)];
    got.sort_by_key(|x| x.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    want.sort_by_key(|x| x.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    b.check("{n, 2n, 3n}", got == want && r.schedule.is_empty(), format!("directions {:?}", got.iter().map(|x| x.iter().map(|s| s.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()));
    let sq = vec![vec![ScalarValue::zero(), ScalarValue::zero(), ScalarValue::one()]];
    let r = run_pet(&embed_scalar(&sq, &v), &PetOptions::default())?;
    let c1 = &r.controls[0].coeffs;
    let ok = r.controls.len() == 1 && c1.len() == 1 && c1.get(&vec![1]) == Some(&scale(2));
    b.check("{n^2}", ok && r.verify_controls().is_ok(), format!("c_1 = {}", r.controls[0].to_json()));
    b.put("square", r.final_json());
    Ok(())
}

fn taylor(b: &mut Builder, cfg: &SuiteConfig) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7a1);
    let opts = TaylorOptions::default();
    let mut failed = Vec::new();
    for i in 0..100 {
        let c = random_fracdegs(&mut rng);
        let q = [2, 3, 5][i % 3];
        match solve_degree_system(&c, q, &opts) {
            Ok(s) if s.report.all_pass() => {}
            Ok(s) => failed.push(format!("#{i}: report {}", s.report.to_json())),
            Err(e) => failed.push(format!("#{i}: {e}")),
        }
    }
    b.check("100 random multisets", failed.is_empty(), failed.join("; "));
    let g = p("t^(3/2)");
    let mut sweep = Vec::new();
    for q in [3u32, 5, 9] {
        let s = solve_for_generators(std::slice::from_ref(&g), q, &opts)?;
        let l = s.l.clone().ok_or_else(|| Error::Invalid("no window function".into()))?;
        let e4 = taylor_window_error(&g, s.degrees[0], &l, 10_000, 2000)?;
        let e6 = taylor_window_error(&g, s.degrees[0], &l, 1_000_000, 2000)?;
        if q == 3 {
            b.check("conditions for t^(3/2), q = 3", s.report.all_pass(), s.report.to_json().to_string());
            b.check("error at 10^6 <= 1e-3", e6.bound() <= 1e-3, format!("{:.3e} (q = 3, d = {})", e6.bound(), s.degrees[0]));
            b.check("error decreases", e6.bound() < e4.bound(), format!("{:.3e} at 10^4, {:.3e} at 10^6", e4.bound(), e6.bound()));
        }
        sweep.push(json!({"q": q, "d": s.degrees[0], "L": l.to_string(), "error_1e4": num17(e4.bound()), "error_1e6": num17(e6.bound())}));
    }
    b.put("q_sweep", Value::Array(sweep));
    Ok(())
}

fn random_cyclic(rng: &mut ChaCha8Rng, q: u64) -> CyclicFn {
    CyclicFn::new(q, (0..q).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()).expect("length q")
}

fn random_int_direction(rng: &mut ChaCha8Rng) -> Vec<ScalarValue> {
    loop {
        let v = [rng.gen_range(-3..=3i64), rng.gen_range(-3..=3)];
        if v != [0, 0] {
            return int_direction(&v);
        }
    }
}

fn seminorm_algebra(b: &mut Builder, cfg: &SuiteConfig) -> Result<()> {
    const Q: u64 = 64;
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5e);
    let mut worst = [0.0f64; 7];
    let names = ["GCS", "triangle", "plus triangle", "monotonicity", "plus sandwich", "inductive formula", "permutation"];
    let full = CyclicAvg::Full;
    let norm = |f: &CyclicFn, sig: &[u64]| -> f64 { cyclic_seminorm_pow(f, sig, full).max(0.0).powf(1.0 / (1u64 << sig.len()) as f64) };
    let plus = |f: &CyclicFn, sig: &[u64]| -> f64 { norm(&f.tensor(&f.conj()), sig).sqrt() };
    for _ in 0..100 {
        let sys = DynSystem::cyclic(Q, &[rng.gen_range(0..Q as i64), rng.gen_range(0..Q as i64)])?;
        let dirs: Vec<Vec<ScalarValue>> = (0..3).map(|_| random_int_direction(&mut rng)).collect();
        let sig = crate::lab::seminorm::cyclic_sigmas(&sys, &dirs)?;
        let f = random_cyclic(&mut rng, Q);
        let g = random_cyclic(&mut rng, Q);
        let s = rng.gen_range(1..=2usize);
        let gs = &sig[..s];
        // GCS on four independent functions at s = 2
        let fs: Vec<CyclicFn> = (0..4).map(|_| random_cyclic(&mut rng, Q)).collect();
        let lhs = cyclic_gcs(&fs, &sig[..2], full)?.norm();
        let rhs: f64 = fs.iter().map(|h| norm(h, &sig[..2])).product();
        worst[0] = worst[0].max(lhs - rhs);
        worst[1] = worst[1].max(norm(&f.add(&g), gs) - norm(&f, gs) - norm(&g, gs));
        worst[2] = worst[2].max(plus(&f.add(&g), &sig[..1]) - plus(&f, &sig[..1]) - plus(&g, &sig[..1]));
        worst[3] = worst[3].max(norm(&f, &sig[..1]) - norm(&f, &sig[..2])).max(norm(&f, &sig[..2]) - norm(&f, &sig));
        let p1 = plus(&f, &sig[..1]);
        worst[4] = worst[4].max(norm(&f, &sig[..1]) - p1).max(p1 - norm(&f, &sig[..2]));
        // |||f|||^4 = E_h |||Delta_h f|||^2 along the first group
        let direct = cyclic_gcs(&vec![f.clone(); 4], &sig[..2], full)?.re;
        let mut induct = 0.0;
        for h in 0..Q {
            induct += cyclic_seminorm_pow(&cyclic_delta(&f, h * sig[0] % Q), &sig[1..2], full) / Q as f64;
        }
        worst[5] = worst[5].max((direct - induct).abs());
        let perm = [sig[2], sig[0], sig[1]];
        worst[6] = worst[6].max((cyclic_seminorm_pow(&f, &sig, full) - cyclic_seminorm_pow(&f, &perm, full)).abs());
    }
    for (n, w) in names.iter().zip(worst) {
        b.check(*n, w <= TOL, format!("worst excess {w:.3e}"));
    }
    let one = CyclicFn::constant(Q, C64::new(1.0, 0.0));
    let sys = DynSystem::cyclic(Q, &[1, 3])?;
    let v = box_seminorm(&sys, &TestFn::Cyclic(one), &[int_direction(&[1, 0]), int_direction(&[2, 1])], None, false)?.value;
    b.check("|||1||| = 1", v == 1.0, format!("{v:e}"));
    let erg = DynSystem::cyclic(Q, &[1])?;
    let mut dev = 0.0f64;
    for _ in 0..10 {
        let f = random_cyclic(&mut rng, Q);
        let v = box_seminorm(&erg, &TestFn::Cyclic(f.clone()), &[int_direction(&[1])], None, false)?.value;
        dev = dev.max((v - f.mean().norm()).abs());
    }
    b.check("degree 1 = |mean f|", dev <= TOL, format!("worst {dev:.3e}"));
    b.put("worst", json!(names.iter().zip(worst).map(|(n, w)| json!({"law": n, "excess": num17(w)})).collect::<Vec<_>>()));
    Ok(())
}

/// Rotations of the 2-torus with `T_1 = +(sqrt 2, 0)`, `T_2 = +(0, sqrt 3)`.
pub fn planar_rotations() -> DynSystem {
    DynSystem::Torus {
        dim: 2,
        alphas: vec![vec![ScalarValue::sqrt(2), ScalarValue::zero()], vec![ScalarValue::zero(), ScalarValue::sqrt(3)]],
    }
}

fn torus_fixture(b: &mut Builder) -> Result<()> {
    let sys = planar_rotations();
    let dirs = vec![vec![ScalarValue::zero(), ScalarValue::sqrt(3)], vec![-ScalarValue::sqrt(2), ScalarValue::sqrt(3)]];
    let f = TestFn::Trig(TrigPoly::character(vec![0, 1]));
    let v2 = box_seminorm(&sys, &f, &dirs, Some(100), false)?.value;
    let v3 = box_seminorm(&sys, &f, &dirs, Some(1000), false)?.value;
    b.check("value at M = 10^3 <= 0.05", v3 <= 0.05, format!("{v3:.6}"));
    b.check("decreasing in M", v3 < v2, format!("{v2:.6} at M = 10^2, {v3:.6} at M = 10^3"));
    b.put("values", json!({"M100": num17(v2), "M1000": num17(v3)}));
    Ok(())
}

/// Run every criterion in order.
pub fn run_all(cfg: &SuiteConfig) -> Vec<Result<CriterionReport>> {
    (1..=CRITERIA).map(|id| run(id, cfg)).collect()
}
