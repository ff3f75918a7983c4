//! Numerical laboratory: Weyl sums, multiple ergodic averages, recurrence,
//! prime averages and truncated box seminorms on concrete systems.

pub mod avg;
pub mod primes;
pub mod seminorm;
pub mod seq;
pub mod system;
pub mod weyl;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::Result;

pub type C64 = Complex64;

/// Indices per summation block. Fixed so results do not depend on the
/// thread count.
pub const BLOCK: u64 = 1 << 13;

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct KSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl KSum {
    pub fn add(&mut self, z: C64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// `e(x) = exp(2 pi i x)`.
pub fn e(x: f64) -> C64 {
    let t = std::f64::consts::TAU * (x - x.floor());
    C64::new(t.cos(), t.sin())
}

/// `e(w / 2^128)`.
pub fn e_word(w: u128) -> C64 {
    e((w >> 64) as f64 * (1.0 / 18446744073709551616.0))
}

/// Sum `f(n)` over `lo..hi` into `r` compensated accumulators, in fixed
/// blocks combined in block order.
pub fn block_sums<F>(lo: u64, hi: u64, r: usize, f: F) -> Result<Vec<C64>>
where
    F: Fn(u64, u64, &mut [KSum]) -> Result<()> + Sync,
{
    let nblocks = hi.saturating_sub(lo).div_ceil(BLOCK);
    let parts: Vec<Result<Vec<KSum>>> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let a = lo + b * BLOCK;
            let z = (a + BLOCK).min(hi);
            let mut acc = vec![KSum::default(); r];
            f(a, z, &mut acc)?;
            Ok(acc)
        })
        .collect();
    let mut total = vec![KSum::default(); r];
    for p in parts {
        for (t, x) in total.iter_mut().zip(p?) {
            t.add(x.value());
        }
    }
    Ok(total.iter().map(KSum::value).collect())
}

/// Size the global pool from `HARDY_ERGO_THREADS`; a no-op if it was
/// already built.
pub fn init_threads() {
    let n = std::env::var("HARDY_ERGO_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0);
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = n {
        b = b.num_threads(n);
    }
    let _ = b.build_global();
}

/// A float with 17 significant digits, as a JSON number.
pub fn num17(x: f64) -> serde_json::Value {
    if !x.is_finite() {
        return serde_json::Value::Null;
    }
    serde_json::from_str(&format!("{x:.16e}")).unwrap_or(serde_json::Value::Null)
}

pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
