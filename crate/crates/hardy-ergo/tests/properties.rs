use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hardy_ergo::hardy::random::{random_expr, random_polynomial, random_unbounded};
use hardy_ergo::hardy::{compare_growth, parse_expr, parse_general, Growth, HardyExpr};
use hardy_ergo::independence::classify_family;
use hardy_ergo::lab::seminorm::{cyclic_seminorm_pow, CyclicAvg};
use hardy_ergo::lab::seq::{FloorStats, SeqEval};
use hardy_ergo::lab::system::CyclicFn;
use hardy_ergo::lab::C64;
use hardy_ergo::pet::{run_pet, PetOptions};
use hardy_ergo::scalar::{rat, rat_int, Basis};
use hardy_ergo::suite::random_pet_family;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cyclic(seed: u64, q: u64) -> CyclicFn {
    use rand::Rng;
    let mut r = rng(seed);
    CyclicFn::new(q, (0..q).map(|_| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect()).unwrap()
}

fn norm(f: &CyclicFn, sig: &[u64]) -> f64 {
    cyclic_seminorm_pow(f, sig, CyclicAvg::Full).max(0.0).powf(1.0 / (1u64 << sig.len()) as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fracdeg_is_additive_and_homogeneous(seed in any::<u64>(), k in 1u32..5) {
        let mut r = rng(seed);
        let (a, b) = (random_expr(&mut r), random_expr(&mut r));
        let (fa, fb) = (a.fracdeg().unwrap(), b.fracdeg().unwrap());
        prop_assert_eq!(a.mul(&b).fracdeg().unwrap(), &fa + &fb);
        prop_assert_eq!(a.pow(k).fracdeg().unwrap(), fa * rat_int(k as i64));
    }

    #[test]
    fn fracdeg_of_composition_multiplies(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_polynomial(&mut r);
        let b = random_unbounded(&mut r);
        let c = p.compose(&b).unwrap();
        prop_assert_eq!(c.fracdeg().unwrap(), p.fracdeg().unwrap() * b.fracdeg().unwrap());
        let a = random_expr(&mut r);
        let inner = HardyExpr::t_pow(rat(3, 2));
        if let Ok(c) = a.compose(&inner) {
            prop_assert_eq!(c.fracdeg().unwrap(), a.fracdeg().unwrap() * rat(3, 2));
        }
    }

    #[test]
    fn growth_comparison_is_a_total_preorder(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (random_expr(&mut r), random_expr(&mut r), random_expr(&mut r));
        prop_assert_eq!(compare_growth(&a, &a).growth, Growth::Comparable);
        let ab = compare_growth(&a, &b).growth;
        let ba = compare_growth(&b, &a).growth;
        let flip = match ab { Growth::Slower => Growth::Faster, Growth::Faster => Growth::Slower, g => g };
        prop_assert_eq!(ba, flip);
        let bc = compare_growth(&b, &c).growth;
        if ab == bc && ab != Growth::Comparable {
            prop_assert_eq!(compare_growth(&a, &c).growth, ab);
        }
    }

    #[test]
    fn display_round_trips(seed in any::<u64>()) {
        let a = random_expr(&mut rng(seed));
        let back = parse_general(&a.to_string(), &Basis::new()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn classification_ignores_order_and_rational_scaling(seed in any::<u64>(), s in 1i64..5) {
        let mut r = rng(seed);
        let fam = vec![random_unbounded(&mut r), random_unbounded(&mut r)];
        let c = classify_family(&fam).unwrap().class;
        let swapped = vec![fam[1].clone(), fam[0].clone()];
        prop_assert_eq!(classify_family(&swapped).unwrap().class, c);
        let scaled = vec![fam[0].scale_rat(&rat_int(s)), fam[1].clone()];
        prop_assert_eq!(classify_family(&scaled).unwrap().class, c);
    }

    #[test]
    fn certified_floor_of_n_three_halves(n in 2u64..2_000_000_000) {
        let a = parse_expr("t^(3/2)", &Basis::new()).unwrap();
        let f = SeqEval::new(&a).unwrap().floor(n, &mut FloorStats::default()).unwrap();
        let cube = (n as u128).pow(3);
        let mut r = (cube as f64).sqrt() as u128;
        while r * r > cube { r -= 1; }
        while (r + 1) * (r + 1) <= cube { r += 1; }
        prop_assert_eq!(f, r as i128);
    }

    #[test]
    fn pet_controls_match_provenance(seed in any::<u64>(), l in 1usize..4, k in 1usize..3) {
        let fam = random_pet_family(&mut rng(seed), 2, l, k);
        let r = run_pet(&fam, &PetOptions::default()).unwrap();
        prop_assert!(r.verify_controls().is_ok());
        prop_assert!(r.families.last().unwrap().is_linear());
    }

    #[test]
    fn cyclic_seminorm_algebra(seed in any::<u64>(), s1 in 0u64..16, s2 in 0u64..16, c in 0.1f64..3.0) {
        let q = 16;
        let (f, g) = (cyclic(seed, q), cyclic(seed ^ 1, q));
        let sig = [s1, s2];
        let nf = norm(&f, &sig);
        prop_assert!(norm(&f.add(&g), &sig) <= nf + norm(&g, &sig) + 1e-12);
        prop_assert!(norm(&f, &sig[..1]) <= nf + 1e-12);
        let cf = CyclicFn { vals: f.vals.iter().map(|v| v * c).collect(), ..f.clone() };
        prop_assert!((norm(&cf, &sig) - c * nf).abs() < 1e-12);
        prop_assert!((norm(&f.conj(), &sig) - nf).abs() < 1e-12);
        prop_assert!((norm(&f, &[s2, s1]) - nf).abs() < 1e-12);
    }
}

#[test]
fn suite_is_deterministic() {
    let cfg = hardy_ergo::suite::SuiteConfig::default();
    let a = hardy_ergo::suite::run(1, &cfg).unwrap();
    let b = hardy_ergo::suite::run(1, &cfg).unwrap();
    assert_eq!(a.data, b.data);
    assert!(a.data["compositions"].as_u64().unwrap() >= 150);
}
