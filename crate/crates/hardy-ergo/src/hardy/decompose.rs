//! Splitting a family into strongly nonpolynomial generators, polynomial
//! parts and a vanishing remainder.

use std::collections::BTreeSet;

use num_traits::{ToPrimitive, Zero};

use super::expr::{HardyExpr, Key};
use crate::scalar::{rat_int, ScalarValue};

/// A vector in `R^k` with scalar coordinates.
pub type GenVec = Vec<ScalarValue>;

#[derive(Clone, Debug)]
pub struct DecomposedFamily {
    pub k: usize,
    /// Increasing growth.
    pub generators: Vec<Key>,
    /// Number of generators `<< log`.
    pub m1: usize,
    /// Number of generators with fractional degree 0.
    pub m2: usize,
    /// `alpha[j][i]`: coefficient vector of generator `i` in member `j`.
    pub alpha: Vec<Vec<GenVec>>,
    /// `poly[j][n]`: coefficient vector of `t^n` in member `j`.
    pub poly: Vec<Vec<GenVec>>,
    pub degree: usize,
    /// Terms tending to zero, per member and coordinate.
    pub remainder: Vec<Vec<HardyExpr>>,
}

pub fn is_vanishing(k: &Key) -> bool {
    k.growth_sign() < 0
}

pub fn is_generator(k: &Key) -> bool {
    !k.is_polynomial() && !is_vanishing(k)
}

/// `family[j][coord]`.
pub fn decompose_family(family: &[Vec<HardyExpr>]) -> DecomposedFamily {
    let k = family.first().map_or(0, |v| v.len());
    let mut gens: BTreeSet<Key> = BTreeSet::new();
    let mut degree = 0usize;
    for a in family.iter().flatten() {
        for (key, _) in a.terms() {
            if is_generator(key) {
                gens.insert(key.clone());
            } else if key.is_polynomial() {
                degree = degree.max(key.c.to_integer().to_usize().unwrap_or(0));
            }
        }
    }
    let generators: Vec<Key> = gens.into_iter().collect();
    let log = Key::log_power(rat_int(1));
    let m1 = generators.iter().filter(|g| **g <= log).count();
    let m2 = generators.iter().filter(|g| g.c.is_zero()).count();
    let zero = vec![ScalarValue::zero(); k];
    let mut alpha = vec![vec![zero.clone(); generators.len()]; family.len()];
    let mut poly = vec![vec![zero.clone(); degree + 1]; family.len()];
    let mut remainder = vec![vec![HardyExpr::zero(); k]; family.len()];
    for (j, a) in family.iter().enumerate() {
        for (coord, e) in a.iter().enumerate() {
            for (key, s) in e.terms() {
                if is_vanishing(key) {
                    remainder[j][coord].add_term(key.clone(), s.clone());
                } else if key.is_polynomial() {
                    let n = key.c.to_integer().to_usize().unwrap_or(0);
                    poly[j][n][coord] = s.clone();
                } else {
                    let i = generators.binary_search(key).expect("generator collected above");
                    alpha[j][i][coord] = s.clone();
                }
            }
        }
    }
    DecomposedFamily { k, generators, m1, m2, alpha, poly, degree, remainder }
}

impl DecomposedFamily {
    pub fn generator(&self, i: usize) -> HardyExpr {
        HardyExpr::term(ScalarValue::one(), self.generators[i].clone())
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// `sum_i alpha_ji g_i + p_j` in one coordinate.
    pub fn reconstruct(&self, j: usize, coord: usize) -> HardyExpr {
        let mut r = HardyExpr::zero();
        for (i, g) in self.generators.iter().enumerate() {
            r.add_term(g.clone(), self.alpha[j][i][coord].clone());
        }
        for (n, v) in self.poly[j].iter().enumerate() {
            r.add_term(Key::power(rat_int(n as i64)), v[coord].clone());
        }
        r
    }

    /// The degree-`d` integer bound of each generator: `t^d ≺ g ≺ t^(d+1)`.
    pub fn generator_degree(&self, i: usize) -> i64 {
        let g = &self.generators[i];
        let fl = g.c.floor().to_integer().to_i64().unwrap_or(0);
        if g.c.is_integer() && Key::power(g.c.clone()) > *g {
            fl - 1
        } else {
            fl
        }
    }

    pub fn has_remainder(&self, j: usize) -> bool {
        self.remainder[j].iter().any(|r| !r.is_zero())
    }
}

/// Every coordinate of a scalar vector is zero.
pub fn vec_is_zero(v: &[ScalarValue]) -> bool {
    v.iter().all(ScalarValue::is_zero)
}

pub fn vec_sub(a: &[ScalarValue], b: &[ScalarValue]) -> GenVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
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
    fn sublinear_pair() {
        let fam = vec![vec![p("sqrt(2)*t^(1/2)"), p("log(t)^2")], vec![p("log(t)"), p("sqrt(3)*t^(1/2)")]];
        let d = decompose_family(&fam);
        let gs: Vec<_> = d.generators.iter().map(|g| (g.c.clone(), g.e.clone())).collect();
        assert_eq!(gs, vec![(rat(0, 1), rat(1, 1)), (rat(0, 1), rat(2, 1)), (rat(1, 2), rat(0, 1))]);
        assert_eq!(d.m1, 1);
        assert_eq!(d.m2, 2);
        assert_eq!(d.alpha[0][2][0], ScalarValue::sqrt(2));
    }

    #[test]
    fn pure_polynomial() {
        let d = decompose_family(&[vec![p("t^3")]]);
        assert!(d.generators.is_empty());
        assert_eq!(d.degree, 3);
        assert_eq!(d.poly[0][3][0], ScalarValue::one());
    }

    #[test]
    fn mixed_and_remainder() {
        let a = parse_expr("t^(3/2) + sqrt(2)*t^2 + 1/2*log(t)^(-1)", &Basis::new());
        // Negative log powers are allowed in inputs; they vanish.
        let a = a.unwrap();
        let d = decompose_family(&[vec![a.clone()]]);
        assert_eq!(d.generators.len(), 1);
        assert_eq!(d.poly[0][2][0], ScalarValue::sqrt(2));
        let back = d.reconstruct(0, 0).add(&d.remainder[0][0]);
        assert_eq!(back, a);
        assert_eq!(d.generator_degree(0), 1);
    }
}
