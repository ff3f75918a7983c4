//! Seminorm directions predicted for a family of k-tuples of germs.
use hardy_ergo::hardy::parse_expr;
use hardy_ergo::independence::{embed_family, predicted_directions};
use hardy_ergo::scalar::Basis;

fn main() -> hardy_ergo::Result<()> {
    let b = Basis::new();
    let cases: [(&[&str], &[usize]); 3] = [
        (&["t^(3/2)", "t^(3/2)+t^(1/2)"], &[0, 1]),
        (&["t^2", "2*t^2"], &[0, 0]),
        (&["sqrt(2)*t", "t^(5/2)", "t^(5/2)+t"], &[0, 1, 1]),
    ];
    for (exprs, eta) in cases {
        let fam: Vec<_> = exprs.iter().map(|e| parse_expr(e, &b)).collect::<Result<_, _>>()?;
        let members = embed_family(&fam, eta, 2)?;
        let d = predicted_directions(&members)?;
        println!("{exprs:?} along {eta:?}: {}", d.to_json());
    }
    Ok(())
}
