//! Independence classes of the four standard example families, with the
//! witness that rules out the next stronger class.
use hardy_ergo::hardy::{parse_expr, HardyExpr};
use hardy_ergo::independence::classify_family;
use hardy_ergo::scalar::Basis;

fn main() -> hardy_ergo::Result<()> {
    let basis = Basis::from_decls(&["a=0.5772156649015329", "a^2"])?;
    let families: [&[&str]; 4] = [
        &["t^(3/2)", "t^(3/2)+t^(1/2)"],
        &["t^(3/2)", "t^(3/2)+t"],
        &["t^3+a*t^2+a*a*t", "t^2+a*t"],
        &["sqrt(2)*t^2", "sqrt(2)*t^2+sqrt(3)*t"],
    ];
    for fam in families {
        let exprs: Vec<HardyExpr> = fam.iter().map(|e| parse_expr(e, &basis)).collect::<Result<_, _>>()?;
        let c = classify_family(&exprs)?;
        print!("{fam:?}\n  {}", c.class);
        if let Some(w) = &c.witness {
            print!("  witness {} verified {}", w.to_json(), w.verify(&exprs));
        }
        println!();
    }
    Ok(())
}
