use std::process::Command;

fn opcyc(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_opcyc")).args(args).env_remove("OPCYC_CACHE_DIR").output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn mcirc_matches_grav_in_arity_three() {
    let (code, out) = opcyc(&["verify", "--target", "Mcirc", "--arity", "3", "--check", "homology-vs-grav"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{\"dim_H_Mcirc\":3,\"dim_Grav\":3}\n");
}

#[test]
fn ger_arity_two_has_two_elements() {
    let (code, out) = opcyc(&["dims", "--target", "Ger", "--arity", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{\"total\":2}\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(opcyc(&["dims", "--target", "Ger"]).0, 2);
    assert_eq!(opcyc(&["dims", "--target", "Nope", "--arity", "2"]).0, 2);
    assert_eq!(opcyc(&["verify", "--target", "Gra", "--arity", "2", "--check", "nope"]).0, 2);
    assert_eq!(opcyc(&["act", "--graph", "/nonexistent.json", "--inputs", "/nonexistent.json"]).0, 2);
}

#[test]
fn failed_check_exits_one() {
    // H(M_circ(1)) = 0 while ker R on Ger(1) is spanned by the unit
    let (code, out) = opcyc(&["verify", "--target", "Mcirc", "--arity", "1", "--check", "homology-vs-grav"]);
    assert_eq!(code, 1);
    assert_eq!(out, "{\"dim_H_Mcirc\":0,\"dim_Grav\":1}\n");
    assert_eq!(opcyc(&["verify", "--target", "Ger", "--arity", "3", "--check", "hc-minus", "--trunc", "0"]).0, 2);
}

#[test]
fn act_on_polyvectors() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("edge.json");
    let xs = dir.path().join("xy.json");
    std::fs::write(&g, r#"[{"m":2,"n":0,"edges":[[1,2]],"v":{},"sign":1},{"m":2,"n":0,"edges":[[2,1]],"v":{},"sign":1}]"#).unwrap();
    // X = ξ₁, Y = x₁: the bracket is ∂X/∂ξ₁ · ∂Y/∂x₁ = 1
    std::fs::write(&xs, r#"[{"d":1,"u":0,"terms":[{"c":"1","x":[0],"xi":[1]}]},{"d":1,"u":0,"terms":[{"c":"1","x":[1],"xi":[0]}]}]"#).unwrap();
    let (code, out) = opcyc(&["act", "--graph", g.to_str().unwrap(), "--inputs", xs.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v, serde_json::json!({"d":1,"u":0,"terms":[{"c":"1","x":[0],"xi":[0]}]}));
}

#[test]
fn same_seed_same_bytes() {
    let args = ["verify", "--target", "vKGra", "--arity", "2", "--boundary", "2", "--check", "sigma", "--samples", "30", "--seed", "7"];
    let (c1, a) = opcyc(&args);
    let (c2, b) = opcyc(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_opcyc"))
            .args(["dims", "--target", "Ger", "--arity", "3", "--by-degree"])
            .env("OPCYC_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), Some(0));
}

#[test]
fn every_verify_check_passes() {
    let jobs: &[&[&str]] = &[
        &["--target", "Mcirc", "--arity", "4", "--check", "homology-vs-grav"],
        &["--target", "M", "--arity", "3", "--check", "homology"],
        &["--target", "M", "--arity", "3", "--check", "rotational"],
        &["--target", "M", "--arity", "3", "--check", "dg"],
        &["--target", "Ger", "--arity", "4", "--check", "r-exact"],
        &["--target", "Ger", "--arity", "4", "--check", "hc-minus", "--trunc", "4"],
        &["--target", "Gra", "--arity", "3", "--check", "tadpole"],
        &["--target", "Gra", "--arity", "2", "--check", "associativity", "--max-edges", "2"],
        &["--target", "vKGra", "--arity", "3", "--boundary", "4", "--check", "sigma"],
        &["--target", "TwGra", "--arity", "3", "--trunc", "2", "--check", "d-squared"],
        &["--target", "TwGra", "--arity", "3", "--check", "ger-cycles"],
    ];
    for job in jobs {
        let mut args = vec!["verify"];
        args.extend_from_slice(job);
        let (code, out) = opcyc(&args);
        assert_eq!(code, 0, "{args:?}: {out}");
    }
}
