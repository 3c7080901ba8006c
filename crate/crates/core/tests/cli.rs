use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_caminalab"))
}

fn run(args: &[&str]) -> (String, String, i32) {
    let out = bin().args(args).output().expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("caminalab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn construct_to(name: &str, args: &[&str]) -> String {
    let mut full = vec!["construct"];
    full.extend_from_slice(args);
    let (out, _, code) = run(&full);
    assert_eq!(code, 0);
    let path = scratch(name);
    std::fs::write(&path, out).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn analyze_reports() {
    let h = construct_to(
        "h.txt",
        &["--family", "extraspecial-p", "--p", "3", "--m", "1"],
    );
    let (out, _, code) = run(&["analyze", &h]);
    assert_eq!(code, 0);
    assert!(
        out.contains("|G| = 27\n") && out.contains("|℧₁| = 1\n") && out.contains("exponent 3\n")
    );

    let f = construct_to(
        "f2.txt",
        &[
            "--family",
            "field",
            "--p",
            "3",
            "--m",
            "2",
            "--mu-rank",
            "2",
        ],
    );
    let (out, _, _) = run(&["analyze", &f]);
    assert!(
        out.contains("|Ω₁| = 81\n") && out.contains("|℧₁| = 9\n") && out.contains("|G:Ω₁| = 9\n")
    );

    let f0 = construct_to("f0.txt", &["--family", "field", "--p", "3", "--m", "2"]);
    let (out, _, _) = run(&["analyze", &f0]);
    assert!(
        out.contains("|G| = 729\n")
            && out.contains("exponent 3\n")
            && out.contains("camina: yes\n")
    );
}

#[test]
fn malformed_file_cites_line() {
    let path = scratch("bad.txt");
    std::fs::write(&path, "caminalab 1\np 3\nr 2\nn 1\nB 2 1 1 1\n").unwrap();
    let (_, err, code) = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 5"), "{err}");
}

#[test]
fn compare_exit_codes() {
    let a = construct_to(
        "ea.txt",
        &["--family", "extraspecial-p", "--p", "3", "--m", "1"],
    );
    let b = construct_to(
        "eb.txt",
        &["--family", "extraspecial-p2", "--p", "3", "--m", "1"],
    );
    for m in ["triple", "nenciu", "direct", "iso", "all"] {
        let (out, _, code) = run(&["compare", &a, &b, "--method", m]);
        assert_eq!(code, 1, "{m}: {out}");
    }
    let (_, _, code) = run(&["compare", &a, &b, "--method", "direct-nopow"]);
    assert_eq!(code, 0);

    let big = construct_to("big.txt", &["--family", "field", "--p", "3", "--m", "2"]);
    let (_, _, code) = run(&["compare", &a, &big, "--method", "nenciu"]);
    assert_eq!(code, 2);
}

#[test]
fn brauer_pair_with_witnesses() {
    let dir = scratch("reps");
    let (_, _, code) = run(&[
        "enumerate",
        "--p",
        "3",
        "--r",
        "4",
        "--n",
        "2",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    // classes 3..6 have |mho1| = 9
    let a = dir.join("class-3.txt");
    let b = dir.join("class-4.txt");
    let (out, _, code) = run(&[
        "compare",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--method",
        "all",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("nenciu: Brauer pair\n  A = "));
    assert!(out.contains("direct: Brauer pair\n  classes:\n"));
    assert!(out.contains("iso: not isomorphic"));
    let c = dir.join("class-1.txt");
    let (_, _, code) = run(&[
        "compare",
        a.to_str().unwrap(),
        c.to_str().unwrap(),
        "--method",
        "direct",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn enumerate_is_deterministic() {
    let (a, _, _) = run(&[
        "enumerate",
        "--p",
        "3",
        "--r",
        "4",
        "--n",
        "2",
        "--jobs",
        "1",
    ]);
    let (b, _, _) = run(&[
        "enumerate",
        "--p",
        "3",
        "--r",
        "4",
        "--n",
        "2",
        "--jobs",
        "8",
    ]);
    assert_eq!(a, b);
    assert!(a.contains("isomorphism classes: 6\n"));
    let (t, _, code) = run(&[
        "enumerate",
        "--p",
        "3",
        "--r",
        "2",
        "--n",
        "1",
        "--format",
        "tsv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(t.lines().count(), 3);
    let (_, err, code) = run(&["enumerate", "--p", "5", "--r", "6", "--n", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("needs"));
}

#[test]
fn chartable_dump() {
    let h = construct_to(
        "ct.txt",
        &["--family", "extraspecial-p", "--p", "3", "--m", "1"],
    );
    let (out, _, code) = run(&["chartable", &h, "--format", "tsv"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows[0].len(), 12);
    let chars = &rows[2..13];
    let degrees: Vec<&str> = chars.iter().map(|r| r[1]).collect();
    assert_eq!(degrees.iter().filter(|d| **d == "1+0z").count(), 9);
    assert_eq!(degrees.iter().filter(|d| **d == "3+0z").count(), 2);
    let nonlinear = chars.iter().find(|r| r[0] == "X(1)").unwrap();
    let col = rows[0].iter().position(|c| *c == "C(1)").unwrap();
    assert_eq!(nonlinear[col], "0+3z");

    let z = construct_to(
        "zero.txt",
        &["--family", "extraspecial-p", "--p", "3", "--m", "1"],
    );
    std::fs::write(&z, "caminalab 1\np 3\nr 2\nn 1\n").unwrap();
    assert_eq!(run(&["chartable", &z]).2, 2);
}

#[test]
fn construct_round_trip() {
    for args in [
        vec!["--family", "extraspecial-p", "--p", "5", "--m", "2"],
        vec!["--family", "extraspecial-p2", "--p", "3", "--m", "2"],
        vec![
            "--family",
            "field",
            "--p",
            "3",
            "--m",
            "3",
            "--mu-rank",
            "1",
        ],
    ] {
        let path = construct_to("rt.txt", &args);
        let text = std::fs::read_to_string(&path).unwrap();
        let g = caminalab::format::parse(&text).unwrap();
        assert_eq!(caminalab::format::serialize(&g), text);
    }
}

#[test]
fn selftest_exit_codes() {
    let (out, _, code) = run(&["selftest", "--level", "quick"]);
    assert_eq!(code, 0, "{out}");
    let (out, _, code) = run(&["selftest", "--inject-perturbation"]);
    assert_eq!(code, 1);
    assert!(out.contains("first failing invariant: orthogonality"));
}
