//! Seeded random germs for property tests and the law suites.

use rand::seq::SliceRandom;
use rand::Rng;

use super::expr::{HardyExpr, Key};
use crate::scalar::{rat, Rat, ScalarValue};

const POWERS: [(i64, i64); 10] = [(0, 1), (1, 3), (1, 2), (2, 3), (1, 1), (3, 2), (2, 1), (5, 2), (3, 1), (7, 3)];
const LOGS: [(i64, i64); 5] = [(0, 1), (0, 1), (1, 1), (2, 1), (1, 2)];

fn coefficient<R: Rng>(rng: &mut R, positive: bool) -> ScalarValue {
    let mut n = rng.gen_range(1..=7i64);
    if !positive && rng.gen_bool(0.3) {
        n = -n;
    }
    let r = rat(n, rng.gen_range(1..=4));
    if rng.gen_bool(0.2) {
        ScalarValue::sqrt(*[2u64, 3, 5].choose(rng).expect("nonempty")).scale(&r)
    } else {
        ScalarValue::from_rat(r)
    }
}

fn key<R: Rng>(rng: &mut R) -> Key {
    let (a, b) = *POWERS.choose(rng).expect("nonempty");
    let (e, f) = *LOGS.choose(rng).expect("nonempty");
    let mut k = Key { c: rat(a, b), e: rat(e, f), atoms: Default::default() };
    if rng.gen_bool(0.1) {
        k.atoms.insert(rat(1, 2), Rat::from_integer(rng.gen_range(1..=2).into()));
    }
    k
}

/// A nonzero germ with one to four terms and a positive dominant coefficient.
pub fn random_expr<R: Rng>(rng: &mut R) -> HardyExpr {
    loop {
        let mut a = HardyExpr::zero();
        for _ in 0..rng.gen_range(1..=4) {
            a.add_term(key(rng), coefficient(rng, false));
        }
        if let Some((k, s)) = a.dominant() {
            if s.signum() < 0 {
                let (k, s) = (k.clone(), s.clone());
                a.add_term(k, s.scale(&rat(-2, 1)));
            }
            return a;
        }
    }
}

/// A germ tending to `+oo`.
pub fn random_unbounded<R: Rng>(rng: &mut R) -> HardyExpr {
    loop {
        let a = random_expr(rng);
        if a.dominant().is_some_and(|(k, _)| k.growth_sign() > 0) {
            return a;
        }
    }
}

/// A polynomial in `t` with rational coefficients and degree `1..=3`.
pub fn random_polynomial<R: Rng>(rng: &mut R) -> HardyExpr {
    let d = rng.gen_range(1..=3);
    let mut a = HardyExpr::term(coefficient(rng, true), Key::power(Rat::from_integer(d.into())));
    for i in 0..d {
        if rng.gen_bool(0.5) {
            a.add_term(Key::power(Rat::from_integer(i.into())), ScalarValue::from_rat(rat(rng.gen_range(-5..=5), 2)));
        }
    }
    a
}
