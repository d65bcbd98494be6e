use std::path::PathBuf;
use std::process::Command;

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

/// Runs `nilp` inside the data directory; returns (exit code, stdout, stderr).
fn nilp(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nilp"))
        .args(args)
        .current_dir(data())
        .output()
        .expect("run nilp");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = nilp(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

#[test]
fn normal_form() {
    assert_eq!(ok(&["nf", "--group", "heis.ngp", "a2 a1"]), "(1, 1, 1)\na1 a2 a3\n");
    assert_eq!(ok(&["nf", "--group", "heis.ngp", "--coords", "(1, -2, 3)"]).lines().next(), Some("(1, -2, 3)"));
    assert_eq!(ok(&["nf", "--group", "q125.ngp", "--coords", "(6, -1, 5)"]).lines().next(), Some("(1, 4, 0)"));
    assert_eq!(ok(&["nf", "--group", "heis.ngp", "--slp", "doubling.slp"]), "(4, 4, 6)\na1^4 a2^4 a3^6\n");
}

#[test]
fn arithmetic() {
    assert_eq!(ok(&["mul", "--group", "heis.ngp", "a2", "a1"]), "(1, 1, 1)\n");
    assert_eq!(ok(&["pow", "--group", "heis.ngp", "a1 a2", "-3"]), "(-3, -3, 6)\n");
    assert_eq!(ok(&["pow", "--group", "q125.ngp", "a1 a2", "5"]), "(0, 0, 0)\n");
}

#[test]
fn consistency() {
    assert_eq!(ok(&["consistency", "--group", "heis.ngp"]), "consistent\n");
    let (code, out, _) = nilp(&["consistency", "--group", "inconsistent.ngp"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("inconsistent\n"));
}

#[test]
fn membership() {
    let (code, out, _) = nilp(&["member", "--group", "heis.ngp", "--sub", "a1^2", "a3", "--", "a1"]);
    assert_eq!((code, out.as_str()), (1, "NO\n"));
    assert_eq!(ok(&["member", "--group", "heis.ngp", "--sub", "a1^2", "a3", "--", "a1^4 a3^-7"]), "YES (2, -7)\n");
    let out = ok(&["member", "--group", "heis.ngp", "--express", "--sub", "a1^2", "a2", "--", "a3^2 a2"]);
    assert!(out.starts_with("YES g"));
}

#[test]
fn full_form_is_order_independent() {
    let a = ok(&["fullform", "--group", "heis.ngp", "a1^2 a2", "a2^3"]);
    let b = ok(&["fullform", "--group", "heis.ngp", "a2^-3", "a2^-1 a1^-2", "a1^2 a2^4"]);
    assert_eq!(a, b);
    assert_eq!(a, "(2, 1, 0)  pivot 1\n(0, 3, 0)  pivot 2\n(0, 0, 6)  pivot 3\n");
}

#[test]
fn subgroup_presentation_round_trips() {
    let out = ok(&["subpres", "--group", "heis.ngp", "a1^2", "a2"]);
    assert!(out.contains("# a3 = (0, 0, 2)"));
    let dir = tempdir();
    let path = dir.join("sub.ngp");
    std::fs::write(&path, &out).unwrap();
    assert_eq!(ok(&["consistency", "--group", path.to_str().unwrap()]), "consistent\n");
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nilp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn homomorphisms() {
    assert_eq!(ok(&["kernel", "--hom", "heis_to_z.hom"]), "(2, -1, 0)  pivot 1\n(0, 0, 1)  pivot 3\n");
    assert_eq!(ok(&["image", "--hom", "heis_to_z.hom"]), "(1)  pivot 1\n");
    assert_eq!(ok(&["preimage", "--hom", "heis_to_z.hom", "a1^-4"]), "YES (-4, 0, 0)\n");
    assert_eq!(ok(&["hom-check", "--hom", "heis_to_z.hom"]), "well-defined\n");
    let (code, out, _) = nilp(&["hom-check", "--hom", "z_to_heis_bad.hom"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("not well-defined"));
}

#[test]
fn conjugacy() {
    assert_eq!(ok(&["conjugate", "--group", "heis.ngp", "a2", "a2 a3"]), "YES u = a1\n");
    let (code, out, _) = nilp(&["conjugate", "--group", "heis.ngp", "a2", "a2^2"]);
    assert_eq!((code, out.as_str()), (1, "NO\n"));
    assert_eq!(ok(&["centralizer", "--group", "heis.ngp", "a1"]), "(1, 0, 0)  pivot 1\n(0, 0, 1)  pivot 3\n");
}

#[test]
fn finite_presentations() {
    let out = ok(&["from-presentation", "-c", "2", "commuting.fp"]);
    assert!(out.ends_with("gens 2\nweight 1 1\nweight 2 1\n"));
    let out = ok(&["witness-word", "-c", "2", "commuting.fp", "y^-1 x^-1 y x"]);
    assert!(out.starts_with("TRIVIAL\n"));
    let (code, out, _) = nilp(&["witness-word", "-c", "2", "commuting.fp", "x y"]);
    assert_eq!((code, out.as_str()), (1, "NONTRIVIAL (1, 1)\n"));
    let out = ok(&["compress-pres", "big_power.fp"]);
    assert_eq!(out.lines().filter(|l| l.starts_with("rel ")).count(), 11);
    let free = ok(&["free-nilpotent", "-c", "2", "-r", "2"]);
    assert!(free.contains("conj 2 1 : 1\n"));
}

#[test]
fn input_errors_exit_2() {
    for args in [
        &["nf", "--group", "heis.ngp", "a4"][..],
        &["nf", "--group", "missing.ngp", "a1"],
        &["nf", "--group", "bad_tail.ngp", "a1"],
        &["nf", "--group", "heis.ngp", "--coords", "(1, 2)"],
        &["nf", "--group", "heis.ngp", "--coords", "--slp", "a1"],
        &["frobnicate"],
    ] {
        let (code, out, err) = nilp(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }
}

#[test]
fn deterministic_output() {
    let args = ["centralizer", "--group", "q125.ngp", "a1 a2"];
    assert_eq!(ok(&args), ok(&args));
}
