//! Parse Hardy germs, read off fractional degrees, differentiate, compose
//! and compare growth.
//!
//! ```text
//! cargo run --example germs
//! ```
use hardy_ergo::hardy::{compare_growth, parse_expr, HardyExpr};
use hardy_ergo::scalar::{rat, Basis};

fn main() -> hardy_ergo::Result<()> {
    let basis = Basis::from_decls(&["a=0.5772156649015329"])?;
    let a = parse_expr("t^(3/2)*log(t) + a*t", &basis)?;
    let b = parse_expr("sqrt(2)*t^(1/2) + log(t)^2", &basis)?;
    println!("a = {a}\nb = {b}");
    println!("fracdeg a = {}, fracdeg b = {}", a.fracdeg()?, b.fracdeg()?);
    println!("fracdeg(ab) = {}", a.mul(&b).fracdeg()?);
    println!("a' = {}", a.differentiate());
    println!("a''' = {}", a.nth_derivative(3));

    // composition is exact for an inner power of t
    let inner = HardyExpr::t_pow(rat(3, 1));
    let c = b.compose(&inner)?;
    println!("b(t^3) = {c}, fracdeg {}", c.fracdeg()?);

    let g = compare_growth(&a, &b);
    println!("a vs b: {:?}, fracdeg order {:?}", g.growth, g.fracdeg);
    for t in [1e4, 1e6, 1e8] {
        println!("a({t:e}) = {:.6e}", a.eval_f64(t));
    }
    Ok(())
}
