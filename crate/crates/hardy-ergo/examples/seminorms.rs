//! Box seminorms along real directions: cyclic groups at full period,
//! truncated averages on a torus, dual functions.
use hardy_ergo::lab::seminorm::{box_seminorm, duality_residual, int_direction, TestFn};
use hardy_ergo::lab::system::{CyclicFn, DynSystem, TrigPoly};
use hardy_ergo::lab::C64;
use hardy_ergo::scalar::ScalarValue;
use hardy_ergo::suite::planar_rotations;

fn main() -> hardy_ergo::Result<()> {
    let q = 64;
    let sys = DynSystem::cyclic(q, &[1, 8])?;
    let f = CyclicFn::new(q, (0..q).map(|x| C64::from_polar(1.0, (x * x) as f64 * 0.37)).collect())?;
    let f = TestFn::Cyclic(f);
    let dirs = [int_direction(&[1, 0]), int_direction(&[0, 1]), int_direction(&[1, 1])];
    for s in 1..=3 {
        let r = box_seminorm(&sys, &f, &dirs[..s], None, false)?;
        let p = box_seminorm(&sys, &f, &dirs[..s], None, true)?;
        println!("Z/64, s = {s}: |||f||| = {:.6}, plus = {:.6}", r.value, p.value);
    }
    println!("duality residual {:.2e}", duality_residual(&sys, &f, &dirs[..2], None)?);

    let torus = planar_rotations();
    let tdirs = vec![vec![ScalarValue::zero(), ScalarValue::sqrt(3)], vec![-ScalarValue::sqrt(2), ScalarValue::sqrt(3)]];
    let chi = TestFn::Trig(TrigPoly::character(vec![0, 1]));
    let mix = TestFn::Trig(TrigPoly::character(vec![0, 1]).add(&TrigPoly::character(vec![1, 0]).scale(C64::new(0.5, 0.0))));
    for m in [10, 100, 1000] {
        let a = box_seminorm(&torus, &chi, &tdirs, Some(m), false)?.value;
        let b = box_seminorm(&torus, &mix, &tdirs, Some(m), false)?.value;
        println!("torus M = {m}: e(x2) -> {a:.6}, e(x2) + e(x1)/2 -> {b:.6}");
    }
    Ok(())
}
