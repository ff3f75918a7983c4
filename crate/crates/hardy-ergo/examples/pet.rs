//! PET reduction: van der Corput steps until the family is linear, then the
//! control polynomials with their provenance.
use hardy_ergo::input::parse_vector_poly;
use hardy_ergo::pet::{run_pet, PetOptions};
use hardy_ergo::scalar::Basis;

fn show(k: usize, polys: &[&str]) -> hardy_ergo::Result<()> {
    let b = Basis::new();
    let p: Vec<_> = polys.iter().map(|s| parse_vector_poly(s, k, &b)).collect::<Result<_, _>>()?;
    match run_pet(&p, &PetOptions::default()) {
        Ok(r) => {
            r.verify_controls().map_err(hardy_ergo::Error::Invalid)?;
            println!("{polys:?}: schedule {:?}, s1 = {}, s2 = {}", r.schedule, r.s1, r.s2);
            for (j, f) in r.families.iter().enumerate() {
                println!("  step {j}: {}", f.to_json());
            }
            println!("  controls {}", r.final_json()["c"]);
        }
        Err(e) => println!("{polys:?}: {e}"),
    }
    Ok(())
}

fn main() -> hardy_ergo::Result<()> {
    show(1, &["n", "2*n", "3*n"])?;
    show(1, &["n^2"])?;
    show(2, &["n^2; sqrt(2)*n", "n; n^2"])?;
    // degree three with two members outgrows the default member cap
    show(1, &["n^3", "n^2"])?;
    Ok(())
}
