//! Exponential sums along Hardy sequences over `[N]` or over primes.

use std::sync::Mutex;

use serde_json::{json, Value};

use super::primes::primes_up_to;
use super::seq::{scalar_dd, FloorStats, SeqEval};
use super::{block_sums, e, e_word, num17, C64};
use crate::hardy::HardyExpr;
use crate::numeric::dd::DD;
use crate::scalar::ScalarValue;
use crate::{Error, Result};

/// Fraction of `s` as a 128-bit word.
pub fn frac_word(s: &ScalarValue) -> u128 {
    s.fixed128().1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylMode {
    /// `e(sum_j lambda_j a_j(n))`
    Raw,
    /// `e(sum_j lambda_j floor(a_j(n)))`
    Floor,
}

impl WeylMode {
    pub fn name(self) -> &'static str {
        match self {
            WeylMode::Raw => "raw",
            WeylMode::Floor => "floor",
        }
    }
}

/// Which `n` are averaged.
#[derive(Clone, Debug)]
enum Points {
    Range,
    Primes(Vec<u64>),
}

impl Points {
    fn new(primes: bool, nmax: u64) -> Points {
        if primes {
            Points::Primes(primes_up_to(nmax))
        } else {
            Points::Range
        }
    }

    fn at(&self, i: u64) -> u64 {
        match self {
            Points::Range => i + 1,
            Points::Primes(p) => p[i as usize],
        }
    }

    /// Number of points `<= n`.
    fn count(&self, n: u64) -> u64 {
        match self {
            Points::Range => n,
            Points::Primes(p) => p.partition_point(|&x| x <= n) as u64,
        }
    }
}

pub fn check_schedule(schedule: &[u64], min: u64) -> Result<()> {
    if schedule.is_empty() {
        return Err(Error::Invalid("empty N schedule".into()));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("N schedule must be strictly increasing".into()));
    }
    if schedule[0] < min {
        return Err(Error::Invalid(format!("N must be at least {min}")));
    }
    Ok(())
}

/// Averages over the schedule of `r` phase functions of the floors.
#[derive(Clone, Debug)]
pub struct PhaseAverages {
    pub schedule: Vec<u64>,
    pub counts: Vec<u64>,
    /// `values[i][r]` at `schedule[i]`.
    pub values: Vec<Vec<C64>>,
    pub stats: FloorStats,
}

/// Run `kernel(n, acc)` over the points and return prefix averages at each
/// schedule entry.
fn run_points<F>(schedule: &[u64], primes: bool, r: usize, kernel: F) -> Result<PhaseAverages>
where
    F: Fn(u64, &mut [super::KSum], &mut FloorStats) -> Result<()> + Sync,
{
    let nmax = *schedule.last().expect("schedule checked");
    let pts = Points::new(primes, nmax);
    let stats = Mutex::new(FloorStats::default());
    let mut counts = Vec::new();
    let mut values = Vec::new();
    let mut running = vec![super::KSum::default(); r];
    let mut prev = 0u64;
    for &n in schedule {
        let c = pts.count(n);
        let seg = block_sums(prev, c, r, |a, z, acc| {
            let mut st = FloorStats::default();
            for i in a..z {
                kernel(pts.at(i), acc, &mut st)?;
            }
            stats.lock().expect("stats lock").merge(&st);
            Ok(())
        })?;
        for (t, s) in running.iter_mut().zip(seg) {
            t.add(s);
        }
        prev = c;
        counts.push(c);
        let denom = c.max(1) as f64;
        values.push(running.iter().map(|s| s.value() / denom).collect());
    }
    Ok(PhaseAverages {
        schedule: schedule.to_vec(),
        counts,
        values,
        stats: stats.into_inner().expect("stats lock"),
    })
}

/// `E_n e(sum_p words[r][p] * floor(a_p(n)) / 2^128)` for each `r`.
pub fn floor_phase_averages(
    seqs: &[SeqEval],
    words: &[Vec<u128>],
    schedule: &[u64],
    primes: bool,
) -> Result<PhaseAverages> {
    let active: Vec<usize> = (0..seqs.len()).filter(|&p| words.iter().any(|w| w[p] != 0)).collect();
    run_points(schedule, primes, words.len(), |n, acc, st| {
        let mut fl = [0i128; 16];
        let mut fls = Vec::new();
        let floors: &mut [i128] = if seqs.len() <= 16 {
            &mut fl[..seqs.len()]
        } else {
            fls.resize(seqs.len(), 0);
            &mut fls
        };
        for &p in &active {
            floors[p] = seqs[p].floor(n, st)?;
        }
        for (r, w) in words.iter().enumerate() {
            let mut ph = 0u128;
            for &p in &active {
                ph = ph.wrapping_add(w[p].wrapping_mul(floors[p] as u128));
            }
            acc[r].add(if ph == 0 { C64::new(1.0, 0.0) } else { e_word(ph) });
        }
        Ok(())
    })
}

/// `E_n e(sum_p lambdas[r][p] * a_p(n))` for each `r`.
pub fn raw_phase_averages(seqs: &[SeqEval], lambdas: &[Vec<DD>], schedule: &[u64], primes: bool) -> Result<PhaseAverages> {
    run_points(schedule, primes, lambdas.len(), |n, acc, _| {
        let vals: Vec<DD> = seqs.iter().map(|s| s.value_dd(n).0).collect();
        for (r, lam) in lambdas.iter().enumerate() {
            let mut x = 0.0;
            for (l, v) in lam.iter().zip(&vals) {
                if l.hi != 0.0 {
                    x += super::seq::dd_floor(*l * *v).1;
                }
            }
            acc[r].add(if x == 0.0 { C64::new(1.0, 0.0) } else { e(x) });
        }
        Ok(())
    })
}

#[derive(Clone, Debug)]
pub struct WeylReport {
    pub mode: WeylMode,
    pub primes: bool,
    pub schedule: Vec<u64>,
    pub counts: Vec<u64>,
    pub values: Vec<C64>,
    pub stats: FloorStats,
}

impl WeylReport {
    pub fn last(&self) -> C64 {
        *self.values.last().expect("nonempty schedule")
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("N,value_re,value_im,target,deviation\n");
        for (n, v) in self.schedule.iter().zip(&self.values) {
            s.push_str(&format!("{n},{},{},0,{}\n", super::fmt17(v.re), super::fmt17(v.im), super::fmt17(v.norm())));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": self.mode.name(),
            "primes": self.primes,
            "N": self.schedule,
            "count": self.counts,
            "value_re": self.values.iter().map(|v| num17(v.re)).collect::<Vec<_>>(),
            "value_im": self.values.iter().map(|v| num17(v.im)).collect::<Vec<_>>(),
            "abs": self.values.iter().map(|v| num17(v.norm())).collect::<Vec<_>>(),
            "floors": self.stats.to_json(),
        })
    }
}

/// `E_{n in [N]} e(sum_j lambda_j floor(a_j(n)))` (floor mode) or with the
/// raw values `a_j(n)`, at each `N` of the schedule. With `primes`, `n` runs
/// over primes and the normalization is `pi(N)`.
pub fn weyl_sum(
    lambdas: &[ScalarValue],
    family: &[HardyExpr],
    schedule: &[u64],
    mode: WeylMode,
    primes: bool,
) -> Result<WeylReport> {
    if lambdas.len() != family.len() {
        return Err(Error::Invalid(format!("{} lambdas for {} sequences", lambdas.len(), family.len())));
    }
    check_schedule(schedule, if primes { 3 } else { 2 })?;
    let seqs: Vec<SeqEval> = family.iter().map(SeqEval::new).collect::<Result<_>>()?;
    let avg = match mode {
        WeylMode::Floor => {
            let words = vec![lambdas.iter().map(frac_word).collect::<Vec<_>>()];
            floor_phase_averages(&seqs, &words, schedule, primes)?
        }
        WeylMode::Raw => {
            let lam = vec![lambdas.iter().map(scalar_dd).collect::<Vec<_>>()];
            raw_phase_averages(&seqs, &lam, schedule, primes)?
        }
    };
    Ok(WeylReport {
        mode,
        primes,
        schedule: avg.schedule,
        counts: avg.counts,
        values: avg.values.into_iter().map(|v| v[0]).collect(),
        stats: avg.stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::parse_expr;
    use crate::scalar::{rat, Basis};

    fn p(s: &str) -> HardyExpr {
        parse_expr(s, &Basis::new()).unwrap()
    }

    #[test]
    fn zero_lambda_is_one() {
        for mode in [WeylMode::Raw, WeylMode::Floor] {
            let r = weyl_sum(&[ScalarValue::zero()], &[p("t^(3/2)")], &[10, 1000], mode, false).unwrap();
            assert_eq!(r.values, vec![C64::new(1.0, 0.0); 2]);
            let r = weyl_sum(&[ScalarValue::zero()], &[p("t^(3/2)")], &[1000], mode, true).unwrap();
            assert_eq!(r.last(), C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn alternating_sign() {
        let half = ScalarValue::from_rat(rat(1, 2));
        for n in [1001u64, 1000] {
            let r = weyl_sum(&[half.clone()], &[p("t")], &[n], WeylMode::Floor, false).unwrap();
            assert!(r.last().norm() <= 1.0 / n as f64 + 1e-15, "{:?}", r.last());
        }
    }

    #[test]
    fn three_halves_decays() {
        let r = weyl_sum(&[ScalarValue::one()], &[p("t^(3/2)")], &[10_000, 100_000, 1_000_000], WeylMode::Raw, false)
            .unwrap();
        assert!(r.last().norm() <= 0.02, "{:?}", r.values);
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let run = |t| {
            rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap().install(|| {
                weyl_sum(&[ScalarValue::sqrt(2)], &[p("t^(3/2)")], &[50_000], WeylMode::Floor, false).unwrap().last()
            })
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
}
