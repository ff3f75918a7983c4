//! Weyl sums against the Boshernitzan test: equidistributed germs decay,
//! germs near a rational polynomial keep a witnessed non-decaying frequency.
use hardy_ergo::hardy::parse_expr;
use hardy_ergo::independence::{boshernitzan_lambda, boshernitzan_test};
use hardy_ergo::lab::weyl::{weyl_sum, WeylMode};
use hardy_ergo::scalar::{Basis, Rat, ScalarValue};

fn main() -> hardy_ergo::Result<()> {
    hardy_ergo::lab::init_threads();
    let b = Basis::new();
    let sched = [10_000, 100_000, 1_000_000];
    for e in ["t^(3/2)", "sqrt(2)*t^2", "t*log(t)", "1/2*t^2+1/3*t", "t^3+log(t)"] {
        let a = parse_expr(e, &b)?;
        let lam = match boshernitzan_lambda(&a) {
            Some(l) => ScalarValue::from_rat(Rat::from_integer(l)),
            None => ScalarValue::one(),
        };
        let r = weyl_sum(&[lam.clone()], std::slice::from_ref(&a), &sched, WeylMode::Raw, false)?;
        let abs: Vec<String> = r.values.iter().map(|z| format!("{:.2e}", z.norm())).collect();
        println!("{e:>16}  equidistributed {:5}  lambda {lam}  |S_N| {}", boshernitzan_test(&a), abs.join(" "));
    }
    // floor phases and prime averages
    let a = parse_expr("t^(3/2)", &b)?;
    let f = weyl_sum(&[ScalarValue::sqrt(2)], std::slice::from_ref(&a), &sched, WeylMode::Floor, false)?;
    let p = weyl_sum(&[ScalarValue::one()], &[a], &sched, WeylMode::Raw, true)?;
    println!("e(sqrt2 floor(n^(3/2))): {:.2e}; over primes e(p^(3/2)): {:.2e}", f.last().norm(), p.last().norm());
    print!("{}", f.to_csv());
    Ok(())
}
