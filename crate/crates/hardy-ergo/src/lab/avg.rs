//! Multiple ergodic averages, recurrence averages and eigenvalue checks.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;
use std::time::Instant;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::primes::primes_up_to;
use super::seq::{FloorStats, SeqEval};
use super::system::{character_words, CyclicFn, DynSystem, TrigPoly};
use super::weyl::{check_schedule, floor_phase_averages, frac_word};
use super::{fmt17, num17, KSum, BLOCK, C64};
use crate::hardy::HardyExpr;
use crate::independence::{classify_family, IndependenceClass};
use crate::scalar::{Rat, ScalarValue};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct AvgReport {
    pub kind: &'static str,
    pub schedule: Vec<u64>,
    pub values: Vec<C64>,
    pub target: C64,
    pub deviations: Vec<f64>,
    pub runtime_s: f64,
    pub extra: Value,
}

impl AvgReport {
    pub fn last_deviation(&self) -> f64 {
        *self.deviations.last().expect("nonempty schedule")
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("N,value_re,value_im,target,deviation\n");
        for ((n, v), d) in self.schedule.iter().zip(&self.values).zip(&self.deviations) {
            s.push_str(&format!("{n},{},{},{},{}\n", fmt17(v.re), fmt17(v.im), fmt17(self.target.re), fmt17(*d)));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind,
            "N": self.schedule,
            "value_re": self.values.iter().map(|v| num17(v.re)).collect::<Vec<_>>(),
            "value_im": self.values.iter().map(|v| num17(v.im)).collect::<Vec<_>>(),
            "target_re": num17(self.target.re),
            "target_im": num17(self.target.im),
            "deviation": self.deviations.iter().map(|d| num17(*d)).collect::<Vec<_>>(),
            "runtime_s": num17(self.runtime_s),
            "extra": self.extra,
        })
    }
}

/// Deduplicated nonzero coordinates of a family of `k`-tuples.
struct FlatFamily {
    seqs: Vec<SeqEval>,
    /// `index[j][i]`: sequence of member `j`, coordinate `i`.
    index: Vec<Vec<Option<usize>>>,
}

fn flatten(members: &[Vec<HardyExpr>], k: usize) -> Result<FlatFamily> {
    let mut exprs: Vec<HardyExpr> = Vec::new();
    let mut index = Vec::new();
    for m in members {
        if m.len() != k {
            return Err(Error::Invalid(format!("member has {} coordinates, system has k = {k}", m.len())));
        }
        let mut row = Vec::new();
        for a in m {
            if a.is_zero() {
                row.push(None);
                continue;
            }
            let p = match exprs.iter().position(|x| x == a) {
                Some(p) => p,
                None => {
                    exprs.push(a.clone());
                    exprs.len() - 1
                }
            };
            row.push(Some(p));
        }
        index.push(row);
    }
    Ok(FlatFamily { seqs: exprs.iter().map(SeqEval::new).collect::<Result<_>>()?, index })
}

fn cartesian(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        out = out.into_iter().flat_map(|p| (0..s).map(move |i| [p.clone(), vec![i]].concat())).collect();
    }
    out
}

/// `|| E_n prod_j (prod_i T_i^floor(a_ji(n))) f_j - prod_j int f_j ||_2` on
/// a torus of rotations, through the character expansion of the `f_j`.
pub fn multi_avg_torus(
    sys: &DynSystem,
    members: &[Vec<HardyExpr>],
    fs: &[TrigPoly],
    schedule: &[u64],
    primes: bool,
) -> Result<AvgReport> {
    let start = Instant::now();
    let DynSystem::Torus { dim, alphas } = sys else {
        return Err(Error::Invalid("multi_avg_torus needs a torus system".into()));
    };
    if fs.len() != members.len() || fs.iter().any(|f| f.dim != *dim) {
        return Err(Error::Invalid(format!("need {} functions on the {dim}-torus", members.len())));
    }
    check_schedule(schedule, if primes { 3 } else { 2 })?;
    let flat = flatten(members, sys.k())?;
    let supports: Vec<Vec<(&Vec<i64>, &C64)>> = fs.iter().map(|f| f.coeffs.iter().collect()).collect();
    let target: C64 = fs.iter().map(TrigPoly::mean).product();
    if supports.iter().any(Vec::is_empty) {
        let n = schedule.len();
        return Ok(AvgReport {
            kind: "multi_avg",
            schedule: schedule.to_vec(),
            values: vec![C64::zero(); n],
            target,
            deviations: vec![0.0; n],
            runtime_s: start.elapsed().as_secs_f64(),
            extra: json!({"tuples": 0}),
        });
    }
    let tuples = cartesian(&supports.iter().map(Vec::len).collect::<Vec<_>>());
    if tuples.len() > 4096 {
        return Err(Error::Invalid(format!("{} frequency tuples; reduce the function supports", tuples.len())));
    }
    let mut words = Vec::with_capacity(tuples.len());
    let mut meta = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let mut w = vec![0u128; flat.seqs.len()];
        let mut coef = C64::one();
        let mut total = vec![0i64; *dim];
        for (j, &ix) in t.iter().enumerate() {
            let (kappa, c) = supports[j][ix];
            coef *= c;
            for (a, b) in total.iter_mut().zip(kappa) {
                *a += b;
            }
            let cw = character_words(alphas, kappa);
            for (i, p) in flat.index[j].iter().enumerate() {
                if let Some(p) = p {
                    w[*p] = w[*p].wrapping_add(cw[i]);
                }
            }
        }
        words.push(w);
        meta.push((coef, total));
    }
    let avg = floor_phase_averages(&flat.seqs, &words, schedule, primes)?;
    let zero = vec![0i64; *dim];
    let mut values = Vec::new();
    let mut deviations = Vec::new();
    for row in &avg.values {
        let mut by_k: BTreeMap<&Vec<i64>, C64> = BTreeMap::new();
        for ((coef, k), s) in meta.iter().zip(row) {
            *by_k.entry(k).or_default() += coef * s;
        }
        let mean = by_k.get(&zero).copied().unwrap_or_default();
        let dev2: f64 = by_k.iter().map(|(k, v)| if **k == zero { (v - target).norm_sqr() } else { v.norm_sqr() }).sum();
        let dev2 = if by_k.contains_key(&zero) { dev2 } else { dev2 + target.norm_sqr() };
        values.push(mean);
        deviations.push(dev2.sqrt());
    }
    Ok(AvgReport {
        kind: if primes { "prime_avg" } else { "multi_avg" },
        schedule: schedule.to_vec(),
        values,
        target,
        deviations,
        runtime_s: start.elapsed().as_secs_f64(),
        extra: json!({"tuples": tuples.len(), "floors": avg.stats.to_json(), "count": avg.counts}),
    })
}

fn points(schedule: &[u64], primes: bool) -> Vec<u64> {
    let nmax = *schedule.last().expect("schedule checked");
    if primes {
        primes_up_to(nmax)
    } else {
        (1..=nmax).collect()
    }
}

/// The same average on `Z/qZ`, through the histogram of joint shifts.
pub fn multi_avg_cyclic(
    sys: &DynSystem,
    members: &[Vec<HardyExpr>],
    fs: &[CyclicFn],
    schedule: &[u64],
    primes: bool,
) -> Result<AvgReport> {
    let start = Instant::now();
    let DynSystem::Cyclic { q, shifts } = sys else {
        return Err(Error::Invalid("multi_avg_cyclic needs a cyclic system".into()));
    };
    let q = *q;
    if fs.len() != members.len() || fs.iter().any(|f| f.q != q || f.dims != 1) {
        return Err(Error::Invalid(format!("need {} functions on Z/{q}", members.len())));
    }
    check_schedule(schedule, if primes { 3 } else { 2 })?;
    let flat = flatten(members, sys.k())?;
    let ell = members.len();
    let pts = points(schedule, primes);
    let stats = Mutex::new(FloorStats::default());
    let hist_of = |slice: &[u64]| -> Result<HashMap<Vec<u64>, u64>> {
        let parts: Vec<Result<HashMap<Vec<u64>, u64>>> = slice
            .par_chunks(BLOCK as usize)
            .map(|chunk| {
                let mut st = FloorStats::default();
                let mut h: HashMap<Vec<u64>, u64> = HashMap::new();
                let mut fl = vec![0i128; flat.seqs.len()];
                for &n in chunk {
                    for (p, s) in flat.seqs.iter().enumerate() {
                        fl[p] = s.floor(n, &mut st)?;
                    }
                    let key: Vec<u64> = flat
                        .index
                        .iter()
                        .map(|row| {
                            let mut s: i128 = 0;
                            for (i, p) in row.iter().enumerate() {
                                if let Some(p) = p {
                                    s = (s + fl[*p].rem_euclid(q as i128) * shifts[i] as i128).rem_euclid(q as i128);
                                }
                            }
                            s as u64
                        })
                        .collect();
                    *h.entry(key).or_default() += 1;
                }
                stats.lock().expect("stats lock").merge(&st);
                Ok(h)
            })
            .collect();
        let mut tot: HashMap<Vec<u64>, u64> = HashMap::new();
        for p in parts {
            for (k, v) in p? {
                *tot.entry(k).or_default() += v;
            }
        }
        Ok(tot)
    };
    let target: C64 = fs.iter().map(CyclicFn::mean).product();
    let mut cum: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    let mut prev = 0usize;
    let mut values = Vec::new();
    let mut deviations = Vec::new();
    for &n in schedule {
        let c = pts.partition_point(|&x| x <= n);
        for (k, v) in hist_of(&pts[prev..c])? {
            *cum.entry(k).or_default() += v;
        }
        prev = c;
        let mut a = vec![C64::zero(); q as usize];
        for (key, cnt) in &cum {
            let w = *cnt as f64 / c.max(1) as f64;
            for (x, slot) in a.iter_mut().enumerate() {
                let mut prod = C64::new(w, 0.0);
                for j in 0..ell {
                    prod *= fs[j].vals[((x as u64 + key[j]) % q) as usize];
                }
                *slot += prod;
            }
        }
        let af = CyclicFn::new(q, a)?;
        values.push(af.mean());
        deviations.push(af.l2_dist(&CyclicFn::constant(q, target)));
    }
    Ok(AvgReport {
        kind: if primes { "prime_avg" } else { "multi_avg" },
        schedule: schedule.to_vec(),
        values,
        target,
        deviations,
        runtime_s: start.elapsed().as_secs_f64(),
        extra: json!({"floors": stats.into_inner().expect("stats lock").to_json(), "tuples": cum.len()}),
    })
}

/// Axis-aligned box `prod [lo_c, hi_c)` in `[0,1)^dim`.
pub type BoxSet = Vec<Vec<(Rat, Rat)>>;

const CIRCLE: u128 = 1 << 64;

fn word64(r: &Rat) -> u128 {
    let scaled = r * Rat::from_integer(num_bigint::BigInt::from(CIRCLE));
    scaled.floor().to_integer().to_u128().unwrap_or(CIRCLE)
}

/// Arc `[a, a + len)` on the circle of circumference `CIRCLE`, as at most two
/// segments of `[0, CIRCLE)`.
fn arc_segments(a: u128, len: u128) -> Vec<(u128, u128)> {
    let a = a % CIRCLE;
    if len >= CIRCLE {
        vec![(0, CIRCLE)]
    } else if a + len <= CIRCLE {
        vec![(a, a + len)]
    } else {
        vec![(a, CIRCLE), (0, a + len - CIRCLE)]
    }
}

fn intersect(a: &[(u128, u128)], b: &[(u128, u128)]) -> Vec<(u128, u128)> {
    let mut out = Vec::new();
    for &(x0, x1) in a {
        for &(y0, y1) in b {
            let lo = x0.max(y0);
            let hi = x1.min(y1);
            if lo < hi {
                out.push((lo, hi));
            }
        }
    }
    out
}

fn disjoint(a: &[(Rat, Rat)], b: &[(Rat, Rat)]) -> bool {
    a.iter().zip(b).any(|((a0, a1), (b0, b1))| a1 <= b0 || b1 <= a0)
}

#[derive(Clone, Debug)]
pub struct RecurrenceReport {
    pub schedule: Vec<u64>,
    pub values: Vec<f64>,
    pub measure: f64,
    pub bound: f64,
    pub class: Option<IndependenceClass>,
    pub warning: Option<String>,
    pub runtime_s: f64,
}

impl RecurrenceReport {
    pub fn last(&self) -> f64 {
        *self.values.last().expect("nonempty schedule")
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("N,value_re,value_im,target,deviation\n");
        for (n, v) in self.schedule.iter().zip(&self.values) {
            s.push_str(&format!("{n},{},0,{},{}\n", fmt17(*v), fmt17(self.bound), fmt17(v - self.bound)));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "N": self.schedule,
            "value": self.values.iter().map(|v| num17(*v)).collect::<Vec<_>>(),
            "measure": num17(self.measure),
            "bound": num17(self.bound),
            "class": self.class.map(|c| c.name()),
            "warning": self.warning,
            "runtime_s": num17(self.runtime_s),
        })
    }
}

/// `E_{n in [N]} mu(E ∩ T^(-floor a_1(n)) E ∩ ... )` for `E` a finite union of
/// pairwise disjoint boxes on a torus of rotations.
pub fn recurrence_avg(sys: &DynSystem, boxes: &BoxSet, members: &[Vec<HardyExpr>], schedule: &[u64]) -> Result<RecurrenceReport> {
    let start = Instant::now();
    let DynSystem::Torus { dim, alphas } = sys else {
        return Err(Error::Invalid("recurrence needs a torus system".into()));
    };
    check_schedule(schedule, 1)?;
    if boxes.is_empty() {
        return Err(Error::Invalid("empty set E".into()));
    }
    for b in boxes {
        if b.len() != *dim {
            return Err(Error::Invalid(format!("box of dimension {} on the {dim}-torus", b.len())));
        }
        for (lo, hi) in b {
            if lo.is_negative() || hi > &Rat::one() || lo >= hi {
                return Err(Error::Invalid(format!("interval [{lo}, {hi}) not inside [0,1)")));
            }
        }
    }
    for i in 0..boxes.len() {
        for j in 0..i {
            if !disjoint(&boxes[i], &boxes[j]) {
                return Err(Error::Invalid(format!("boxes {} and {} overlap", j + 1, i + 1)));
            }
        }
    }
    let flat = flatten(members, sys.k())?;
    let ell = members.len();
    let measure: f64 = boxes.iter().map(|b| b.iter().map(|(lo, hi)| (hi - lo).to_f64().unwrap_or(0.0)).product::<f64>()).sum();
    let bound = measure.powi(ell as i32 + 1);
    let (class, warning) = scalar_class(members);
    // rot[i][c] = frac(alpha_i[c]) as a 128-bit word.
    let rot: Vec<Vec<u128>> = alphas.iter().map(|a| a.iter().map(frac_word).collect()).collect();
    let arcs: Vec<Vec<(u128, u128)>> =
        boxes.iter().map(|b| b.iter().map(|(lo, hi)| (word64(lo), word64(hi) - word64(lo))).collect()).collect();
    let tuples = cartesian(&vec![boxes.len(); ell + 1]);
    let stats = Mutex::new(FloorStats::default());
    let kernel = |a: u64, z: u64, acc: &mut [KSum]| -> Result<()> {
        let mut st = FloorStats::default();
        let mut fl = vec![0i128; flat.seqs.len()];
        for n in a..z {
            for (p, s) in flat.seqs.iter().enumerate() {
                fl[p] = s.floor(n, &mut st)?;
            }
            // shift[j][c] = frac(sum_i floor(a_ji) alpha_i[c]) on the 2^64 circle.
            let shift: Vec<Vec<u128>> = flat
                .index
                .iter()
                .map(|row| {
                    (0..*dim)
                        .map(|c| {
                            let mut w = 0u128;
                            for (i, p) in row.iter().enumerate() {
                                if let Some(p) = p {
                                    w = w.wrapping_add(rot[i][c].wrapping_mul(fl[*p] as u128));
                                }
                            }
                            w >> 64
                        })
                        .collect()
                })
                .collect();
            let mut total = 0.0f64;
            for t in &tuples {
                let mut m = 1.0f64;
                for c in 0..*dim {
                    let (a0, l0) = arcs[t[0]][c];
                    let mut seg = arc_segments(a0, l0);
                    for j in 0..ell {
                        let (aj, lj) = arcs[t[j + 1]][c];
                        // E - s: the arc starts at a - s.
                        let st = (aj + CIRCLE - shift[j][c]) % CIRCLE;
                        seg = intersect(&seg, &arc_segments(st, lj));
                        if seg.is_empty() {
                            break;
                        }
                    }
                    let len: u128 = seg.iter().map(|(x, y)| y - x).sum();
                    m *= len as f64 / CIRCLE as f64;
                    if m == 0.0 {
                        break;
                    }
                }
                total += m;
            }
            acc[0].add(C64::new(total, 0.0));
        }
        stats.lock().expect("stats lock").merge(&st);
        Ok(())
    };
    let mut values = Vec::new();
    let mut running = KSum::default();
    let mut prev = 1u64;
    for &n in schedule {
        let s = super::block_sums(prev, n + 1, 1, kernel)?;
        running.add(s[0]);
        prev = n + 1;
        values.push(running.value().re / n as f64);
    }
    Ok(RecurrenceReport {
        schedule: schedule.to_vec(),
        values,
        measure,
        bound,
        class,
        warning,
        runtime_s: start.elapsed().as_secs_f64(),
    })
}

/// Class of the family when every member acts through one transformation.
fn scalar_class(members: &[Vec<HardyExpr>]) -> (Option<IndependenceClass>, Option<String>) {
    let mut scalars = Vec::new();
    for m in members {
        let nz: Vec<&HardyExpr> = m.iter().filter(|a| !a.is_zero()).collect();
        if nz.len() != 1 {
            return (None, Some("members act through several transformations; class not checked".into()));
        }
        scalars.push(nz[0].clone());
    }
    match classify_family(&scalars) {
        Ok(c) if c.class == IndependenceClass::StronglyIndependent => (Some(c.class), None),
        Ok(c) => (Some(c.class), Some(format!("family is {}, not strongly independent", c.class.name()))),
        Err(e) => (None, Some(format!("classification failed: {e}"))),
    }
}

#[derive(Clone, Debug)]
pub struct EigenRow {
    pub lambdas: Vec<ScalarValue>,
    pub values: Vec<C64>,
    pub flagged: bool,
}

#[derive(Clone, Debug)]
pub struct EigenReport {
    pub schedule: Vec<u64>,
    pub tol: f64,
    pub rows: Vec<EigenRow>,
    pub excluded_zero: usize,
}

impl EigenReport {
    pub fn to_json(&self) -> Value {
        json!({
            "N": self.schedule,
            "tol": num17(self.tol),
            "excluded_zero_tuples": self.excluded_zero,
            "rows": self.rows.iter().map(|r| json!({
                "lambda": r.lambdas.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "abs": r.values.iter().map(|v| num17(v.norm())).collect::<Vec<_>>(),
                "flagged": r.flagged,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `E_n e(sum_j lambda_j floor(a_j(n)))` for each nonzero eigenvalue tuple;
/// a tuple is flagged when the value at the last `N` exceeds `tol`.
pub fn eigen_equidistribution_check(
    sys: &DynSystem,
    family: &[HardyExpr],
    tuples: &[Vec<ScalarValue>],
    schedule: &[u64],
    tol: f64,
) -> Result<EigenReport> {
    check_schedule(schedule, 2)?;
    let seqs: Vec<SeqEval> = family.iter().map(SeqEval::new).collect::<Result<_>>()?;
    let mut kept = Vec::new();
    let mut excluded_zero = 0;
    for t in tuples {
        if t.len() != family.len() {
            return Err(Error::Invalid(format!("eigenvalue tuple of length {} for {} sequences", t.len(), family.len())));
        }
        if t.iter().all(ScalarValue::is_zero) {
            excluded_zero += 1;
            continue;
        }
        if let DynSystem::Cyclic { q, .. } = sys {
            for l in t {
                let ok = l.as_rational().is_some_and(|r| (r * Rat::from_integer((*q).into())).is_integer());
                if !ok {
                    return Err(Error::Invalid(format!("{l} is not an eigenvalue j/{q} of Z/{q}")));
                }
            }
        }
        kept.push(t.clone());
    }
    let words: Vec<Vec<u128>> = kept.iter().map(|t| t.iter().map(frac_word).collect()).collect();
    let avg = if words.is_empty() { None } else { Some(floor_phase_averages(&seqs, &words, schedule, false)?) };
    let rows = kept
        .into_iter()
        .enumerate()
        .map(|(r, lambdas)| {
            let values: Vec<C64> = avg.as_ref().map(|a| a.values.iter().map(|row| row[r]).collect()).unwrap_or_default();
            let flagged = values.last().is_some_and(|v| v.norm() > tol);
            EigenRow { lambdas, values, flagged }
        })
        .collect();
    Ok(EigenReport { schedule: schedule.to_vec(), tol, rows, excluded_zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::parse_expr;
    use crate::scalar::{rat, Basis};

    fn p(s: &str) -> HardyExpr {
        parse_expr(s, &Basis::new()).unwrap()
    }

    fn rotations() -> DynSystem {
        DynSystem::torus(vec![vec![ScalarValue::sqrt(2)], vec![ScalarValue::sqrt(3)]]).unwrap()
    }

    fn family() -> Vec<Vec<HardyExpr>> {
        vec![vec![p("t^(3/2)"), HardyExpr::zero()], vec![HardyExpr::zero(), p("t^(3/2) + t^(1/2)")]]
    }

    #[test]
    fn constants_give_zero_deviation() {
        let one = TrigPoly::constant(1, C64::one());
        let r = multi_avg_torus(&rotations(), &family(), &[one.clone(), one], &[100, 1000], false).unwrap();
        assert_eq!(r.deviations, vec![0.0, 0.0]);
        let q = DynSystem::cyclic(8, &[1, 3]).unwrap();
        let c = CyclicFn::constant(8, C64::new(0.5, 0.0));
        let r = multi_avg_cyclic(&q, &family(), &[c.clone(), c], &[100], true).unwrap();
        assert!(r.deviations[0] < 1e-15);
    }

    #[test]
    fn characters_decay() {
        let f = TrigPoly::character(vec![1]);
        let r = multi_avg_torus(&rotations(), &family(), &[f.clone(), f], &[10_000, 100_000], false).unwrap();
        assert!(r.last_deviation() < 0.1, "{:?}", r.deviations);
    }

    #[test]
    fn rational_rotation_negative_control() {
        let sys = DynSystem::torus(vec![vec![ScalarValue::from_rat(rat(1, 2))]]).unwrap();
        let members = vec![vec![p("t")], vec![p("3*t")]];
        let fs = [TrigPoly::character(vec![1]), TrigPoly::character(vec![-1])];
        let r = multi_avg_torus(&sys, &members, &fs, &[1000], false).unwrap();
        assert!((r.last_deviation() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cyclic_matches_torus_on_characters() {
        // e(x/8) on Z/8 is the character of the rotation by 1/8.
        let q = 8u64;
        let cyc = DynSystem::cyclic(q, &[1, 3]).unwrap();
        let tor = DynSystem::torus(vec![vec![ScalarValue::from_rat(rat(1, 8))], vec![ScalarValue::from_rat(rat(3, 8))]])
            .unwrap();
        let chi = CyclicFn::new(q, (0..q).map(|x| super::super::e(x as f64 / q as f64)).collect()).unwrap();
        let a = multi_avg_cyclic(&cyc, &family(), &[chi.clone(), chi], &[2000], false).unwrap();
        let f = TrigPoly::character(vec![1]);
        let b = multi_avg_torus(&tor, &family(), &[f.clone(), f], &[2000], false).unwrap();
        assert!((a.last_deviation() - b.last_deviation()).abs() < 1e-9, "{} {}", a.last_deviation(), b.last_deviation());
    }

    #[test]
    fn recurrence_whole_torus() {
        let all: BoxSet = vec![vec![(Rat::zero(), Rat::one())]];
        let r = recurrence_avg(&rotations(), &all, &family(), &[100]).unwrap();
        assert!((r.last() - 1.0).abs() < 1e-15);
        assert_eq!(r.bound, 1.0);
    }

    #[test]
    fn recurrence_lower_bound() {
        let e: BoxSet = vec![vec![(Rat::zero(), rat(3, 10))]];
        let r = recurrence_avg(&rotations(), &e, &family(), &[10_000]).unwrap();
        assert!(r.last() >= 0.027 - 0.02, "{}", r.last());
        assert!(r.warning.is_none(), "{:?}", r.warning);
        // two disjoint pieces of the same total length
        let e2: BoxSet = vec![vec![(Rat::zero(), rat(1, 10))], vec![(rat(1, 2), rat(7, 10))]];
        assert!(recurrence_avg(&rotations(), &e2, &family(), &[1000]).is_ok());
        let bad: BoxSet = vec![vec![(Rat::zero(), rat(1, 2))], vec![(rat(1, 4), rat(3, 4))]];
        assert!(recurrence_avg(&rotations(), &bad, &family(), &[10]).is_err());
    }

    #[test]
    fn periodic_obstruction_flagged() {
        let sys = DynSystem::cyclic(2, &[1]).unwrap();
        let half = ScalarValue::from_rat(rat(1, 2));
        let tuples = vec![vec![ScalarValue::zero(), ScalarValue::zero()], vec![half.clone(), half]];
        let r = eigen_equidistribution_check(&sys, &[p("2*t"), p("2*t")], &tuples, &[1000], 0.05).unwrap();
        assert_eq!(r.excluded_zero, 1);
        assert!(r.rows[0].flagged);
        assert!((r.rows[0].values[0] - C64::one()).norm() < 1e-15);
    }
}
