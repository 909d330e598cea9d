use std::process::{Command, Output};

fn vbalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vbalg"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn validate_aff1_passes() {
    let o = vbalg(&["validate", "fixtures/aff1.alg"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "pass  aff1 jacobi\npass  aff1 anchor_compat\nchecks: 2, failed: 0\n"
    );
}

#[test]
fn broken_jacobi_reports_the_triple() {
    let o = vbalg(&["validate", "fixtures/broken_jacobi.alg"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o).contains("fail  broken_jacobi jacobi at (e1, e2, e3): -e1"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn malformed_expression_exits_2_with_position() {
    let o = vbalg(&["validate", "fixtures/malformed.alg"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: 4:18:"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn resolution_errors_exit_2() {
    for args in [
        &["validate", "fixtures/missing.alg"][..],
        &["diff", "fixtures/cochains.alg", "nothing"][..],
        &["diff", "fixtures/cochains.alg", "aff1"][..],
        &["check-im", "fixtures/aff1.alg", "aff1"][..],
        &["suite", "--fixture", "nothing"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(vbalg(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn caps_exit_2() {
    let o = vbalg(&["--poly-cap", "0", "validate", "fixtures/tm.alg"]);
    assert_eq!(o.status.code(), Some(0));
    let o = vbalg(&["--poly-cap", "0", "validate", "fixtures/aff1_line.alg"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceeds the cap"), "{}", stderr(&o));
    let o = vbalg(&["--degree-cap", "1", "diff", "fixtures/cochains.alg", "identity"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn every_broken_fixture_fails_validation() {
    for f in [
        "broken_jacobi",
        "broken_anchor",
        "broken_tangent",
        "nonflat_trivial_core",
        "nonflat_full_core",
        "nonflat_gauge",
    ] {
        let path = format!("fixtures/{f}.alg");
        assert_eq!(vbalg(&["validate", &path]).status.code(), Some(1), "{f}");
    }
    for f in [
        "abelian1",
        "abelian2",
        "aff1",
        "aff1_line",
        "so3",
        "tm",
        "tc_tm_0",
        "tc_tm_x",
        "fc_aff1",
        "tangent_aff1",
        "tangent_tm",
        "gauge_tm",
    ] {
        let path = format!("fixtures/{f}.alg");
        assert_eq!(vbalg(&["validate", &path]).status.code(), Some(0), "{f}");
    }
}

#[test]
fn diff_of_eps1() {
    let o = vbalg(&["diff", "fixtures/cochains.alg", "eps1", "--check-d2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("value [e2] = e2\n"), "{out}");
    assert!(out.contains("d²=0: pass\n"), "{out}");
}

#[test]
fn diff_of_identity() {
    let o = vbalg(&["diff", "fixtures/cochains.alg", "identity", "--check-d2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value [e1, e2] = e2\n"), "{}", stdout(&o));
}

#[test]
fn check_im_examples() {
    let o = vbalg(&["check-im", "fixtures/internal_triple.alg", "internal"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = vbalg(&["check-im", "fixtures/symbol_mismatch.alg", "mismatch"]);
    assert_eq!(o.status.code(), Some(1));
    let failed: Vec<String> = stdout(&o)
        .lines()
        .filter(|l| l.starts_with("fail"))
        .map(str::to_string)
        .collect();
    assert_eq!(failed.len(), 1, "{failed:?}");
    assert!(failed[0].starts_with("fail  mismatch sigma"));

    let o = vbalg(&["check-im", "fixtures/pde_v_x.alg", "v_x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o).contains("fail  v_x pde_2 at (e1, f1, f1): 1\n"),
        "{}",
        stdout(&o)
    );
    assert!(stdout(&o).contains("pass  v_x pde_1\n"));
}

#[test]
fn records_are_json() {
    let o = vbalg(&["--format", "records", "validate", "fixtures/broken_jacobi.alg"]);
    assert_eq!(o.status.code(), Some(1));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let jacobi = lines.iter().find(|v| v["check"] == "jacobi").unwrap();
    assert_eq!(jacobi["status"], "fail");
    assert_eq!(jacobi["location"], "(e1, e2, e3)");
    assert_eq!(jacobi["residual"], "-e1");
}

#[test]
fn suite_filter_and_seeds() {
    let o = vbalg(&["suite", "--fixture", "tangent-aff1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out
        .lines()
        .filter(|l| l.starts_with("pass"))
        .all(|l| l.contains(" tangent-aff1 ")));
    for seed in ["1", "2"] {
        let o = vbalg(&["suite", "--fixture", "conn-aff1-line", "--seed", seed]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("pass  conn-aff1-line im_equivalence\n"));
    }
    let a = vbalg(&["suite", "--fixture", "so3", "--seed", "3"]);
    let b = vbalg(&["suite", "--fixture", "so3", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fixtures_lists_every_kind() {
    let o = vbalg(&["fixtures"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in [
        "aff1 algebroid",
        "conn-tm-x connection",
        "gauge-tm vb",
        "broken-jacobi broken",
    ] {
        assert!(out.lines().any(|l| l == line), "{line}\n{out}");
    }
}
