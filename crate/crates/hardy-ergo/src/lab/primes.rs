//! Segmented sieve of Eratosthenes.

const SEGMENT: u64 = 1 << 15;

fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// All primes `p <= n`, increasing.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let root = (n as f64).sqrt() as u64 + 1;
    let base = small_primes(root);
    let mut out = Vec::new();
    let mut lo = 2u64;
    let mut seg = vec![false; SEGMENT as usize];
    while lo <= n {
        let hi = (lo + SEGMENT - 1).min(n);
        let len = (hi - lo + 1) as usize;
        seg[..len].iter_mut().for_each(|x| *x = false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let start = (lo.div_ceil(p) * p).max(p * p);
            let mut j = start;
            while j <= hi {
                seg[(j - lo) as usize] = true;
                j += p;
            }
        }
        out.extend((0..len).filter(|&i| !seg[i]).map(|i| lo + i as u64));
        lo = hi + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_counts() {
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(100_000).len(), 9592);
        assert_eq!(primes_up_to(1_000_000).len(), 78498);
        assert_eq!(primes_up_to(SEGMENT + 1).len(), small_primes(SEGMENT + 1).len());
    }
}
