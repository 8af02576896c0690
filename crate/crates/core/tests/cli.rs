use std::io::Write;

use blowupchow::cli::{run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["blowupchow"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = invoke(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    out
}

#[test]
fn present_base_case() {
    let out = ok(&["present", "--surface", "p2", "-n", "1"]);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines.contains(&"H1 1"));
    assert!(lines.contains(&"pt1 2"));
    let rels: Vec<&str> = lines.iter().skip_while(|l| !l.starts_with("relations")).skip(1).copied().collect();
    assert_eq!(rels, vec!["H1^2 - pt1", "H1*pt1", "pt1^2"]);
}

#[test]
fn present_two_blowups() {
    let out = ok(&["present", "--surface", "p2", "-n", "2"]);
    assert!(out.lines().any(|l| l == "D1_2*H1 - D1_2*H2"));
    assert!(out.lines().any(|l| l == "generators 5"));
}

#[test]
fn present_empty() {
    let out = ok(&["present", "--surface", "p2", "-n", "0"]);
    assert!(out.lines().any(|l| l == "generators 0"));
    assert!(out.lines().any(|l| l == "relations 0"));
}

#[test]
fn betti_methods() {
    let out = ok(&["betti", "--surface", "p2", "-n", "2", "--method", "all"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines,
        vec![
            "groebner (1,3,4,3,1)",
            "product (1,3,4,3,1)",
            "recursion (1,3,4,3,1)",
            "linalg (1,3,4,3,1)",
            "AGREE"
        ]
    );
    assert_eq!(
        ok(&["betti", "--surface", "p2", "-n", "3", "--method", "product"]),
        "product (1,6,14,18,14,6,1)\n"
    );
    assert_eq!(
        ok(&["betti", "--surface", "p1xp1", "-n", "1", "--method", "product"]),
        "product (1,2,1)\n"
    );
}

#[test]
fn betti_over_budget_is_partial() {
    let (code, out, _) = invoke(&["betti", "-n", "3", "--method", "all", "--budget", "2000"]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(out.contains("product (1,6,14,18,14,6,1)"));
    assert!(out.contains("groebner SKIPPED"));
    assert!(out.contains("DISAGREE"));
}

#[test]
fn degree_values() {
    for (expr, value) in [("H1^2*H2^2", "1"), ("D1_2^2*H1*H2", "-1"), ("D1_2^4", "-6"), ("D1_2^3*H2", "-3")] {
        assert_eq!(ok(&["degree", "--surface", "p2", "-n", "2", "--monomial", expr]), format!("{value}\n"));
    }
}

#[test]
fn degree_errors() {
    let (code, _, err) = invoke(&["degree", "-n", "2", "--monomial", "D1_2^3"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("degree 4"), "{err}");
    let (code, _, err) = invoke(&["degree", "-n", "2", "--monomial", "D1_2^^2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("parse error"));
    let (code, _, _) = invoke(&["degree", "--surface", "p1xp1", "-n", "2", "--monomial", "H1^4"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn count_lines() {
    assert_eq!(ok(&["count", "--surface", "p2", "-n", "3", "-q", "2"]), "total 3 2 693 693 MATCH\n");
    assert_eq!(ok(&["count", "--surface", "p2", "-n", "1", "-q", "3"]), "total 1 3 13 13 MATCH\n");
    assert_eq!(ok(&["count", "--surface", "p2", "-n", "2", "-q", "2", "--divisor", "1,2"]), "divisor 1 2 21\n");
    let out = ok(&["count", "-n", "3", "-q", "2", "--divisor", "1,2", "--divisor", "2,3"]);
    assert_eq!(out.lines().count(), 3);
    assert!(out.starts_with("divisor 1 2 "));
    assert!(out.contains("intersection D1_2 D2_3 "));
    assert_eq!(ok(&["count", "--surface", "p1xp1", "-n", "2", "-q", "4"]), "total 2 4 725 725 MATCH\n");
}

#[test]
fn count_over_budget() {
    let out = ok(&["count", "-n", "3", "-q", "2", "--budget", "100"]);
    assert_eq!(out, "total 3 2 - 693 SKIPPED-BRUTE\n");
}

#[test]
fn count_errors() {
    for args in [
        &["count", "-n", "2", "-q", "6"][..],
        &["count", "-n", "2", "-q", "1"],
        &["count", "-n", "2"],
        &["count", "-n", "2", "-q", "2", "--divisor", "2,1"],
        &["count", "-n", "2", "-q", "2", "--divisor", "1,3"],
        &["count", "-n", "2", "-q", "2", "--divisor", "x"],
        &["count", "-n", "2", "-q", "2", "--budget", "0"],
    ] {
        let (code, _, _) = invoke(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
    }
}

#[test]
fn verify_grids_pass() {
    for args in [
        &["verify", "--surface", "p2", "-n", "2", "-q", "2"][..],
        &["verify", "--surface", "p2", "-n", "3", "-q", "2"],
        &["verify", "--surface", "p1xp1", "-n", "2", "-q", "3"],
    ] {
        let out = ok(args);
        assert!(!out.contains("FAIL"), "{out}");
        assert!(out.lines().filter(|l| l.starts_with("PASS")).count() > 10);
        assert_eq!(out.lines().last(), Some("all PASS"));
    }
}

#[test]
fn usage_errors_never_panic() {
    for args in [
        &[][..],
        &["present"],
        &["present", "-n", "-1"],
        &["present", "-n", "x"],
        &["present", "-n", "200"],
        &["frobnicate"],
        &["present", "-n", "1", "--surface", "xyz"],
        &["present", "-n", "1", "--surface", "fa:x"],
        &["present", "-n", "1", "--surface", "file:/nonexistent/surface.txt"],
        &["present", "-n", "1", "--format", "xml"],
        &["betti", "-n", "2", "--method", "magic"],
        &["betti", "-n", "100000", "--method", "product"],
        &["verify", "-n", "1", "--modp-primes", "4"],
        &["verify", "-n", "1", "-q", "10"],
    ] {
        let (code, _, _) = invoke(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
    }
}

#[test]
fn surface_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("f1.txt");
    let mut f = std::fs::File::create(&good).unwrap();
    writeln!(f, "# hirzebruch one\nname f1\nk 2\nM -1 1\n  1 0\nK -2 -3").unwrap();
    let selector = format!("file:{}", good.display());
    assert_eq!(
        ok(&["betti", "--surface", &selector, "-n", "2", "--method", "groebner"]),
        "groebner (1,5,8,5,1)\n"
    );
    let blown = format!("{selector}+blowups:1");
    assert_eq!(
        ok(&["betti", "--surface", &blown, "-n", "1", "--method", "groebner"]),
        "groebner (1,3,1)\n"
    );

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "k 2\nM 1 1 1 1\nK 0 0\n").unwrap();
    let (code, _, err) = invoke(&["present", "--surface", &format!("file:{}", bad.display()), "-n", "1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
}

#[test]
fn help_documents_flags() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for flag in ["--surface", "-n", "-q", "--format", "--budget", "--modp-primes", "BLOWUPCHOW_BUDGET"] {
        assert!(out.contains(flag), "{flag}");
    }
    let (_, out, _) = invoke(&["betti", "--help"]);
    assert!(out.contains("--method"));
    let (_, out, _) = invoke(&["degree", "--help"]);
    assert!(out.contains("--monomial"));
    let (_, out, _) = invoke(&["count", "--help"]);
    assert!(out.contains("--divisor"));
}

#[test]
fn json_lines_are_self_describing() {
    for args in [
        &["present", "-n", "2"][..],
        &["betti", "-n", "2", "--method", "all"],
        &["degree", "-n", "2", "--monomial", "D1_2^4"],
        &["count", "-n", "2", "-q", "2"],
        &["count", "-n", "2", "-q", "2", "--divisor", "1,2"],
        &["verify", "-n", "1", "-q", "2"],
    ] {
        let mut full = args.to_vec();
        full.extend_from_slice(&["--format", "json-lines"]);
        let out = ok(&full);
        for line in out.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.get("kind").and_then(|k| k.as_str()).is_some(), "{line}");
        }
    }
    let out = ok(&["degree", "-n", "2", "--monomial", "D1_2^4", "--format", "json-lines"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["degree"], "-6");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "--surface", "p1xp1", "-n", "2", "-q", "2", "--seed", "7"][..],
        &["present", "--surface", "fa:2", "-n", "3"],
        &["count", "-n", "3", "-q", "3", "--divisor", "1,3", "--format", "json-lines"],
    ] {
        assert_eq!(ok(args), ok(args));
    }
}

#[test]
fn budget_from_environment() {
    // run as a subprocess so the variable does not leak into other tests
    let exe = env!("CARGO_BIN_EXE_blowupchow");
    let out = std::process::Command::new(exe)
        .args(["count", "-n", "3", "-q", "2"])
        .env("BLOWUPCHOW_BUDGET", "10")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "total 3 2 - 693 SKIPPED-BRUTE\n");
    let out = std::process::Command::new(exe)
        .args(["present", "-n", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
