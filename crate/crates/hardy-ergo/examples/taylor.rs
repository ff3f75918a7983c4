//! Common Taylor expansion: degrees, window L(N) and the approximation
//! error of the Taylor polynomial on [N, N + L(N)].
use hardy_ergo::hardy::parse_expr;
use hardy_ergo::scalar::Basis;
use hardy_ergo::taylor::{solve_for_generators, taylor_window_error, TaylorOptions};

fn main() -> hardy_ergo::Result<()> {
    let b = Basis::new();
    let gens = vec![parse_expr("t^(3/2)", &b)?, parse_expr("t^(1/2)*log(t)", &b)?];
    let s = solve_for_generators(&gens, 3, &TaylorOptions::default())?;
    println!("{}", serde_json::to_string_pretty(&s.to_json()).expect("json"));

    let g = &gens[0];
    for q in [2, 3, 5, 9] {
        let s = solve_for_generators(std::slice::from_ref(g), q, &TaylorOptions::default())?;
        let l = s.l.clone().expect("window");
        let e: Vec<String> = [10_000u64, 1_000_000]
            .iter()
            .map(|&n| taylor_window_error(g, s.degrees[0], &l, n, 2000).map(|w| format!("{:.3e}", w.bound())))
            .collect::<Result<_, _>>()?;
        println!("q = {q}: d = {}, L = {l}, error at 1e4 / 1e6: {}", s.degrees[0], e.join(" / "));
    }
    Ok(())
}
