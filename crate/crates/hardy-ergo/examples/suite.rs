//! Run acceptance criteria: `cargo run --example suite -- [id...]`.
use hardy_ergo::suite::{run, SuiteConfig, CRITERIA};

fn main() {
    hardy_ergo::lab::init_threads();
    let ids: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids = if ids.is_empty() { (1..=CRITERIA).collect() } else { ids };
    let cfg = SuiteConfig::default();
    for id in ids {
        match run(id, &cfg) {
            Ok(r) => println!("{}", r.line()),
            Err(e) => println!("FAIL  {id:>2}  error: {e}"),
        }
    }
}
