//! Multiple ergodic averages on rotations: torus, cyclic and along primes.
use hardy_ergo::hardy::parse_expr;
use hardy_ergo::independence::embed_family;
use hardy_ergo::scalar::Basis;
use hardy_ergo::lab::avg::{multi_avg_cyclic, multi_avg_torus};
use hardy_ergo::lab::system::{CyclicFn, DynSystem, TrigPoly};
use hardy_ergo::lab::C64;
use hardy_ergo::suite::{example_family, two_rotations};

fn main() -> hardy_ergo::Result<()> {
    hardy_ergo::lab::init_threads();
    let sys = two_rotations();
    let fam = example_family();
    let f = TrigPoly::character(vec![1]).add(&TrigPoly::constant(1, C64::new(0.5, 0.0)));
    let g = TrigPoly::character(vec![-2]);
    let sched = [1_000, 10_000, 100_000, 1_000_000];
    let r = multi_avg_torus(&sys, &fam, &[f.clone(), g.clone()], &sched, false)?;
    print!("torus\n{}", r.to_csv());
    let r = multi_avg_torus(&sys, &fam, &[f, g], &sched, true)?;
    print!("primes\n{}", r.to_csv());

    // on Z/12 the floors of n^(3/2) spread over all residues, squares do not
    let cyc = DynSystem::cyclic(12, &[1, 5])?;
    let h = CyclicFn::new(12, (0..12).map(|i| C64::new((i % 3) as f64, 0.0)).collect())?;
    let r = multi_avg_cyclic(&cyc, &fam, &[h.clone(), h.clone()], &sched[..3], false)?;
    print!("Z/12\n{}", r.to_csv());
    let sq = embed_family(&[parse_expr("t^2", &Basis::new())?, parse_expr("t^2", &Basis::new())?], &[0, 1], 2)?;
    let r = multi_avg_cyclic(&cyc, &sq, &[h.clone(), h], &sched[..3], false)?;
    print!("Z/12 along squares\n{}", r.to_csv());
    Ok(())
}
