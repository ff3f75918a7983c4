use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy-ergo")).args(args).env("HARDY_ERGO_THREADS", "2").output().expect("binary runs")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn classify_example() {
    let o = run(&["classify", "--expr", "t^(3/2)", "--expr", "t^(3/2)+t^(1/2)"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["class"], "StronglyIndependent");
    assert_eq!(v["schema"], "hardy-ergo/classify/v1");
}

#[test]
fn pet_square() {
    let v = json(&run(&["pet", "--k", "1", "--poly", "n^2"]));
    assert_eq!(v["c"][0][0]["coeff"][0], "2");
    assert_eq!(v["c"][0][0]["h"][0], 1);
    let last = v["trace"].as_array().unwrap().len();
    assert!(last >= 2);
}

#[test]
fn weyl_three_halves() {
    let dir = std::env::temp_dir().join(format!("hardy-ergo-weyl-{}", std::process::id()));
    let o = run(&["--out", dir.to_str().unwrap(), "weyl", "--expr", "t^(3/2)", "--lambda", "1", "--N", "1000000"]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.join("weyl.csv")).unwrap();
    let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!(row[4] <= 0.02, "{csv}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    let o = run(&["classify", "--expr", "t^("]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["error"], "parse");
    let o = run(&["weyl", "--expr", "t", "--N", "1", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["weyl", "--expr", "t"]).status.code(), Some(2));
}

#[test]
fn replay_is_byte_identical() {
    let args = [
        "avg", "--torus", "sqrt(2);sqrt(3)", "--member", "t^(3/2);0", "--member", "0;t^(3/2)+t^(1/2)", "--f", "e(1)", "--f", "e(-1)+0.5", "--N",
        "1e3,1e4",
    ];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_hardy-ergo")).args(args).env("HARDY_ERGO_THREADS", "1").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn negative_directions_parse() {
    let o = run(&["seminorm", "--torus", "sqrt(2),0;0,sqrt(3)", "--dir", "0,sqrt(3)", "--dir", "-sqrt(2),sqrt(3)", "--f", "e(0,1)", "--M", "100"]);
    assert!(o.status.success());
    assert!(json(&o)["value"].as_f64().is_some());
}
