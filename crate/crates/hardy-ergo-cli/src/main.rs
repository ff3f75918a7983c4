//! `hardy-ergo`: batch front end to the library.
//!
//! Results go to stdout as one JSON document with a `schema` field. With
//! `--out DIR`, CSV/JSON artifacts are written under `DIR`. Timings go to
//! stderr so that replaying a command reproduces stdout and artifacts byte
//! for byte.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hardy_ergo::hardy::{parse_expr, HardyExpr};
use hardy_ergo::independence::{classify_family, embed_family, predicted_directions};
use hardy_ergo::input::*;
use hardy_ergo::lab::avg::{multi_avg_cyclic, multi_avg_torus, recurrence_avg};
use hardy_ergo::lab::primes::primes_up_to;
use hardy_ergo::lab::seminorm::{box_seminorm, dual_function, duality_residual, TestFn};
use hardy_ergo::lab::system::DynSystem;
use hardy_ergo::lab::weyl::{weyl_sum, WeylMode};
use hardy_ergo::pet::{run_pet, PetOptions};
use hardy_ergo::scalar::Basis;
use hardy_ergo::suite::{self, SuiteConfig};
use hardy_ergo::taylor::{solve_degree_system, solve_for_generators, taylor_window_error, TaylorOptions};
use hardy_ergo::{Error, Result};

#[derive(Parser)]
#[command(name = "hardy-ergo", version, about = "Hardy sequences, PET reduction and ergodic averages")]
struct Cli {
    /// Directory for CSV/JSON artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Symbol declarations such as `a=0.5772` or `a^2`.
    #[arg(long = "basis", global = true)]
    basis: Vec<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SystemArgs {
    /// Rotation vectors, `;` between transformations: `sqrt(2);sqrt(3)`.
    #[arg(long)]
    torus: Option<String>,
    /// `q:r1,r2,...` on Z/qZ.
    #[arg(long)]
    cyclic: Option<String>,
    /// Skew product (x + alpha, y + x) on the 2-torus.
    #[arg(long)]
    skew: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Independence class of a family of germs.
    Classify {
        #[arg(long = "expr", allow_hyphen_values = true, required = true)]
        exprs: Vec<String>,
    },
    /// Seminorm directions predicted for a family of k-tuples.
    Directions {
        /// Germs embedded by `--eta` into k coordinates.
        #[arg(long = "expr", allow_hyphen_values = true)]
        exprs: Vec<String>,
        /// 1-based transformation index of each `--expr`.
        #[arg(long)]
        eta: Vec<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// A member given directly, `;` between its k coordinates.
        #[arg(long = "member", allow_hyphen_values = true)]
        members: Vec<String>,
    },
    /// PET reduction of a polynomial family in R^k[n].
    Pet {
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// One member, `;` between its k coordinate polynomials.
        #[arg(long = "poly", allow_hyphen_values = true, required = true)]
        polys: Vec<String>,
        #[arg(long, default_value_t = 256)]
        max_steps: usize,
        #[arg(long, default_value_t = 4096)]
        max_family: usize,
    },
    /// Degrees and window of a common Taylor expansion.
    Taylor {
        /// Fractional degrees (the degree system alone).
        #[arg(long = "fracdeg", allow_hyphen_values = true)]
        fracdegs: Vec<String>,
        /// Generators (adds H, L and the conditions on the germs).
        #[arg(long = "gen", allow_hyphen_values = true)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 3)]
        q: u32,
        /// Also report the window error at these N (first generator).
        #[arg(long = "N")]
        n: Vec<String>,
    },
    /// Weyl sums E_n e(sum lambda_j a_j(n)).
    Weyl {
        #[arg(long = "expr", allow_hyphen_values = true, required = true)]
        exprs: Vec<String>,
        /// One per `--expr`; defaults to 1.
        #[arg(long = "lambda", allow_hyphen_values = true)]
        lambdas: Vec<String>,
        #[arg(long = "N", required = true)]
        n: Vec<String>,
        /// Phases lambda*floor(a(n)) instead of lambda*a(n).
        #[arg(long)]
        floor: bool,
        /// Average over primes.
        #[arg(long)]
        primes: bool,
    },
    /// L2 deviation of a multiple ergodic average from the product of integrals.
    Avg {
        #[command(flatten)]
        sys: SystemArgs,
        /// One member per function, `;` between its k coordinates.
        #[arg(long = "member", allow_hyphen_values = true, required = true)]
        members: Vec<String>,
        /// Trig polynomial `c*e(k1,..)+...` (torus) or comma-separated values (cyclic).
        #[arg(long = "f", allow_hyphen_values = true, required = true)]
        fs: Vec<String>,
        #[arg(long = "N", required = true)]
        n: Vec<String>,
        #[arg(long)]
        primes: bool,
    },
    /// Averaged measure of multiple return times to a union of boxes.
    Recurrence {
        #[command(flatten)]
        sys: SystemArgs,
        /// Box `a1,b1;a2,b2;...`; repeat for a disjoint union.
        #[arg(long = "box", allow_hyphen_values = true, required = true)]
        boxes: Vec<String>,
        #[arg(long = "member", allow_hyphen_values = true, required = true)]
        members: Vec<String>,
        #[arg(long = "N", required = true)]
        n: Vec<String>,
    },
    /// Prime counts and sums up to N.
    Primes {
        #[arg(long = "N", required = true)]
        n: String,
        /// Write primes.csv under --out.
        #[arg(long)]
        list: bool,
    },
    /// Box seminorm along real directions.
    Seminorm {
        #[command(flatten)]
        sys: SystemArgs,
        /// Direction in R^k, comma-separated; repeat for each group.
        #[arg(long = "dir", allow_hyphen_values = true, required = true)]
        dirs: Vec<String>,
        #[arg(long = "f", allow_hyphen_values = true, required = true)]
        f: String,
        /// Truncation; omitted means the full period (cyclic only).
        #[arg(long = "M")]
        m: Option<String>,
        #[arg(long)]
        plus: bool,
        /// Also evaluate the dual function and the duality residual.
        #[arg(long)]
        dual: bool,
    },
    /// Acceptance criteria.
    Suite {
        /// Criterion 1..=11; all when omitted.
        #[arg(long)]
        id: Option<usize>,
        #[arg(long, default_value_t = suite::DEFAULT_SEED)]
        seed: u64,
    },
}

struct Output {
    doc: Value,
    artifacts: Vec<(String, String)>,
}

impl Output {
    fn json(schema: &str, mut doc: Value) -> Output {
        doc["schema"] = json!(format!("hardy-ergo/{schema}/v1"));
        Output { doc, artifacts: Vec::new() }
    }

    fn with(mut self, name: &str, body: String) -> Output {
        self.artifacts.push((name.to_string(), body));
        self
    }
}

/// Runtimes vary between replays; they are reported on stderr instead.
fn strip_runtimes(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("runtime_s");
            m.values_mut().for_each(strip_runtimes);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_runtimes),
        _ => {}
    }
}

fn exprs(texts: &[String], basis: &Basis) -> Result<Vec<HardyExpr>> {
    texts.iter().map(|e| parse_expr(e, basis)).collect()
}

fn schedule(texts: &[String]) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for t in texts {
        for s in t.split(',') {
            out.push(parse_count(s)?);
        }
    }
    Ok(out)
}

fn system(a: &SystemArgs, basis: &Basis) -> Result<DynSystem> {
    parse_system(a.torus.as_deref(), a.cyclic.as_deref(), a.skew.as_deref(), basis)
}

fn members(texts: &[String], basis: &Basis) -> Result<Vec<Vec<HardyExpr>>> {
    texts.iter().map(|m| parse_member(m, basis)).collect()
}

fn test_fn(sys: &DynSystem, text: &str) -> Result<TestFn> {
    match sys {
        DynSystem::Torus { dim, .. } => Ok(TestFn::Trig(parse_trig(text, *dim)?)),
        DynSystem::Skew { .. } => Ok(TestFn::Trig(parse_trig(text, 2)?)),
        DynSystem::Cyclic { q, .. } => Ok(TestFn::Cyclic(parse_cyclic_fn(text, *q)?)),
    }
}

fn test_fn_json(f: &TestFn) -> Value {
    match f {
        TestFn::Trig(p) => p.to_json(),
        TestFn::Cyclic(c) => json!(c.vals.iter().map(|v| json!({"re": hardy_ergo::lab::num17(v.re), "im": hardy_ergo::lab::num17(v.im)})).collect::<Vec<_>>()),
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let basis = declare_basis(&cli.basis)?;
    Ok(match &cli.cmd {
        Cmd::Classify { exprs: e } => {
            let fam = exprs(e, &basis)?;
            Output::json("classify", classify_family(&fam)?.to_json())
        }
        Cmd::Directions { exprs: e, eta, k, members: m } => {
            let fam = if !m.is_empty() {
                if !e.is_empty() {
                    return Err(Error::Invalid("give either --member or --expr/--eta, not both".into()));
                }
                members(m, &basis)?
            } else {
                let k = k.ok_or_else(|| Error::Invalid("--expr needs --k".into()))?;
                if eta.iter().any(|&j| j == 0) {
                    return Err(Error::Invalid("--eta indices are 1-based".into()));
                }
                let eta: Vec<usize> = eta.iter().map(|j| j - 1).collect();
                embed_family(&exprs(e, &basis)?, &eta, k)?
            };
            let d = predicted_directions(&fam)?;
            Output::json("directions", json!({"directions": d.to_json(), "multiplicity": d.multiplicity}))
        }
        Cmd::Pet { k, polys, max_steps, max_family } => {
            let p: Vec<_> = polys.iter().map(|s| parse_vector_poly(s, *k, &basis)).collect::<Result<_>>()?;
            let r = run_pet(&p, &PetOptions { max_steps: *max_steps, max_family: *max_family })?;
            r.verify_controls().map_err(Error::Invalid)?;
            let trace = r.trace_json();
            let directions: Vec<Vec<String>> = r.directions().iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect();
            let mut doc = r.final_json();
            doc["trace"] = Value::Array(trace.clone());
            doc["directions"] = json!(directions);
            Output::json("pet", doc).with("pet_trace.json", serde_json::to_string_pretty(&trace).expect("json"))
        }
        Cmd::Taylor { fracdegs, gens, q, n } => {
            let opts = TaylorOptions::default();
            let sol = match (fracdegs.is_empty(), gens.is_empty()) {
                (false, true) => {
                    let c: Vec<_> = fracdegs.iter().map(|s| parse_scalar(s, &basis)).collect::<Result<_>>()?;
                    solve_degree_system(&c, *q, &opts)?
                }
                (true, false) => solve_for_generators(&exprs(gens, &basis)?, *q, &opts)?,
                _ => return Err(Error::Invalid("give either --fracdeg or --gen".into())),
            };
            let mut doc = sol.to_json();
            if !n.is_empty() {
                let g = exprs(gens, &basis)?;
                let (Some(g), Some(l)) = (g.first(), sol.l.as_ref()) else {
                    return Err(Error::Invalid("--N needs --gen".into()));
                };
                let errs: Vec<Value> = schedule(n)?
                    .into_iter()
                    .map(|n| {
                        taylor_window_error(g, sol.degrees[0], l, n, 2000).map(|w| {
                            json!({"N": n, "window": w.window, "sampled": hardy_ergo::lab::num17(w.sampled), "remainder_bound": hardy_ergo::lab::num17(w.remainder_bound), "error": hardy_ergo::lab::num17(w.bound())})
                        })
                    })
                    .collect::<Result<_>>()?;
                doc["window_error"] = Value::Array(errs);
            }
            Output::json("taylor", doc)
        }
        Cmd::Weyl { exprs: e, lambdas, n, floor, primes } => {
            let fam = exprs(e, &basis)?;
            let lam: Vec<_> = if lambdas.is_empty() {
                vec![hardy_ergo::scalar::ScalarValue::one(); fam.len()]
            } else {
                lambdas.iter().map(|s| parse_scalar(s, &basis)).collect::<Result<_>>()?
            };
            let mode = if *floor { WeylMode::Floor } else { WeylMode::Raw };
            let r = weyl_sum(&lam, &fam, &schedule(n)?, mode, *primes)?;
            Output::json("weyl", r.to_json()).with("weyl.csv", r.to_csv())
        }
        Cmd::Avg { sys, members: m, fs, n, primes } => {
            let sys = system(sys, &basis)?;
            let fam = members(m, &basis)?;
            let sched = schedule(n)?;
            let r = match &sys {
                DynSystem::Torus { dim, .. } => {
                    let f: Vec<_> = fs.iter().map(|s| parse_trig(s, *dim)).collect::<Result<_>>()?;
                    multi_avg_torus(&sys, &fam, &f, &sched, *primes)?
                }
                DynSystem::Cyclic { q, .. } => {
                    let f: Vec<_> = fs.iter().map(|s| parse_cyclic_fn(s, *q)).collect::<Result<_>>()?;
                    multi_avg_cyclic(&sys, &fam, &f, &sched, *primes)?
                }
                DynSystem::Skew { .. } => return Err(Error::Invalid("avg supports torus and cyclic systems".into())),
            };
            let mut doc = r.to_json();
            doc["system"] = sys.to_json();
            Output::json("avg", doc).with("avg.csv", r.to_csv())
        }
        Cmd::Recurrence { sys, boxes, members: m, n } => {
            let sys = system(sys, &basis)?;
            let b: Vec<_> = boxes.iter().map(|s| parse_box(s)).collect::<Result<_>>()?;
            let r = recurrence_avg(&sys, &b, &members(m, &basis)?, &schedule(n)?)?;
            if let Some(w) = &r.warning {
                eprintln!("warning: {w}");
            }
            Output::json("recurrence", r.to_json()).with("recurrence.csv", r.to_csv())
        }
        Cmd::Primes { n, list } => {
            let n = parse_count(n)?;
            let ps = primes_up_to(n);
            let sum: u128 = ps.iter().map(|&p| p as u128).sum();
            let doc = json!({"N": n, "count": ps.len(), "sum": sum.to_string(), "largest": ps.last()});
            let out = Output::json("primes", doc);
            if *list {
                let mut csv = String::from("p\n");
                ps.iter().for_each(|p| csv.push_str(&format!("{p}\n")));
                out.with("primes.csv", csv)
            } else {
                out
            }
        }
        Cmd::Seminorm { sys, dirs, f, m, plus, dual } => {
            let sys = system(sys, &basis)?;
            let d: Vec<_> = dirs.iter().map(|s| parse_vector(s, &basis)).collect::<Result<_>>()?;
            let f = test_fn(&sys, f)?;
            let m = m.as_deref().map(parse_count).transpose()?;
            let r = box_seminorm(&sys, &f, &d, m, *plus)?;
            let mut doc = r.to_json();
            doc["system"] = sys.to_json();
            if *dual {
                doc["dual"] = test_fn_json(&dual_function(&sys, &f, &d, m)?);
                doc["duality_residual"] = hardy_ergo::lab::num17(duality_residual(&sys, &f, &d, m)?);
            }
            Output::json("seminorm", doc)
        }
        Cmd::Suite { id, seed } => {
            let cfg = SuiteConfig { seed: *seed };
            let ids: Vec<usize> = match id {
                Some(i) => vec![*i],
                None => (1..=suite::CRITERIA).collect(),
            };
            let mut reports = Vec::new();
            for i in ids {
                let r = suite::run(i, &cfg)?;
                eprintln!("{}", r.line());
                reports.push(r.to_json());
            }
            let doc = if reports.len() == 1 { reports.pop().expect("one report") } else { json!({"criteria": reports}) };
            Output::json("suite", doc)
        }
    })
}

fn write_artifacts(dir: &Path, out: &Output, doc: &str) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("result.json"), doc)?;
    for (name, body) in &out.artifacts {
        std::fs::write(dir.join(name), body)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors
    let cli = Cli::parse();
    hardy_ergo::lab::init_threads();
    let start = Instant::now();
    match run(&cli) {
        Ok(mut out) => {
            strip_runtimes(&mut out.doc);
            let doc = serde_json::to_string_pretty(&out.doc).expect("json");
            let _ = writeln!(std::io::stdout(), "{doc}");
            eprintln!("runtime {:.3} s", start.elapsed().as_secs_f64());
            if let Some(dir) = &cli.out {
                if let Err(e) = write_artifacts(dir, &out, &doc) {
                    eprintln!("cannot write to {}: {e}", dir.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&e.to_json()).expect("json"));
            ExitCode::from(1)
        }
    }
}
