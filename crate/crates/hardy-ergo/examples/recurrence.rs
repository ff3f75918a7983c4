//! Multiple recurrence: averaged measure of E ∩ T1^-[a1(n)] E ∩ T2^-[a2(n)] E.
use hardy_ergo::lab::avg::{recurrence_avg, BoxSet};
use hardy_ergo::scalar::{rat, Rat};
use num_traits::Zero;
use hardy_ergo::suite::{example_family, two_rotations};

fn main() -> hardy_ergo::Result<()> {
    hardy_ergo::lab::init_threads();
    for hi in [rat(1, 10), rat(3, 10), rat(1, 2)] {
        let e: BoxSet = vec![vec![(Rat::zero(), hi.clone())]];
        let r = recurrence_avg(&two_rotations(), &e, &example_family(), &[1_000, 10_000, 100_000])?;
        println!("E = [0, {hi}): measure^3 = {:.5}, averages {:?}", r.measure.powi(3), r.values.iter().map(|v| format!("{v:.5}")).collect::<Vec<_>>());
    }
    Ok(())
}
