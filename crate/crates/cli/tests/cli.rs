use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn rfsm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfsm"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_reports_and_exits() {
    let five = fixture("five_state.rfsm");
    let o = rfsm(&["validate", path(&five)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid (5 states, 3 blocks, 2 symbols)"));

    let o = rfsm(&["validate", "--strict", path(&five)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.rfsm");
    std::fs::write(
        &bad,
        "machine m\nstates p\nblock p\ninputs a\ntrans p a lower q upper { }\n",
    )
    .unwrap();
    let o = rfsm(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("5:17: syntax error"), "{err}");

    let o = rfsm(&["validate", "/nonexistent/file.rfsm"]);
    assert_eq!(o.status.code(), Some(2));
    let o = rfsm(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_and_approx() {
    let five = fixture("five_state.rfsm");
    let o = rfsm(&["run", path(&five), "--state", "q1", "--word", "ab"]);
    assert_eq!(stdout(&o).trim(), "({q3,q5}∪{q4},{q1,q2}∪{q3,q5}∪{q4})");
    let o = rfsm(&["run", path(&five), "--state", "q2"]);
    assert_eq!(stdout(&o).trim(), "({q1,q2},{q1,q2})");
    let o = rfsm(&["approx", path(&five), "--set", "q1,q3"]);
    assert_eq!(
        stdout(&o),
        "lower: φ\nupper: {q1,q2}∪{q3,q5}\ndefinable: false\n"
    );
    let o = rfsm(&["run", path(&five), "--state", "q9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tables_render() {
    let five = fixture("five_state.rfsm");
    let o = rfsm(&["render", path(&five), "--table", "state"]);
    assert!(stdout(&o).contains("| q2 | (φ,{q3,q5})"));
    let o = rfsm(&["blocks", path(&five)]);
    assert_eq!(stdout(&o).lines().count(), 5);
    let o = rfsm(&["blocks", path(&five), "--word", "ab"]);
    assert!(stdout(&o).contains("δ*D(D,ab)"));
}

#[test]
fn products_write_parseable_files() {
    let five = fixture("five_state.rfsm");
    let dir = tempfile::tempdir().unwrap();
    for kind in ["full", "restricted", "general", "wreath"] {
        let out = dir.path().join(format!("{kind}.rfsm"));
        let o = rfsm(&[
            "product",
            "--kind",
            kind,
            path(&five),
            path(&five),
            "-o",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{kind}");
        let o = rfsm(&["validate", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{kind}");
        assert!(stdout(&o).contains("25 states"));
    }
    let o = rfsm(&["product", "--kind", "cascade", path(&five), path(&five)]);
    assert_eq!(o.status.code(), Some(2));

    let omega = dir.path().join("omega");
    let lines: String = (1..=5).map(|i| format!("q{i} a b\nq{i} b b\n")).collect();
    std::fs::write(&omega, lines).unwrap();
    let o = rfsm(&[
        "product",
        "--kind",
        "cascade",
        path(&five),
        path(&five),
        "--omega",
        omega.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("machine cascade(five_state,five_state)\n"));

    let bridge = dir.path().join("bridge");
    std::fs::write(&bridge, "u a b\n").unwrap();
    let o = rfsm(&[
        "product",
        "--kind",
        "general",
        path(&five),
        path(&five),
        "--bridge",
        bridge.to_str().unwrap(),
    ]);
    assert!(stdout(&o).contains("inputs u\n"));

    let o = rfsm(&[
        "product",
        "--kind",
        "wreath",
        path(&five),
        path(&five),
        "--budget",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn morphism_commands() {
    let (src, dst) = (fixture("hom_source.rfsm"), fixture("hom_target.rfsm"));
    let o = rfsm(&[
        "check-hom",
        path(&src),
        path(&dst),
        "--map",
        path(&fixture("hom.map")),
    ]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "holds"));
    let o = rfsm(&[
        "check-hom",
        "--iso",
        path(&src),
        path(&dst),
        "--map",
        path(&fixture("hom.map")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = rfsm(&[
        "check-hom",
        path(&src),
        path(&dst),
        "--map",
        path(&fixture("hom_swapped.map")),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("fails:"));

    let five = fixture("five_state.rfsm");
    let o = rfsm(&["search-cover", path(&five), path(&five), "--depth", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let dir = tempfile::tempdir().unwrap();
    let first: String = text
        .split("# covering ")
        .nth(1)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| format!("{l}\n"))
        .collect();
    let map = dir.path().join("cover.map");
    std::fs::write(&map, first).unwrap();
    let o = rfsm(&[
        "check-cover",
        path(&five),
        path(&five),
        "--map",
        map.to_str().unwrap(),
        "--depth",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));

    let o = rfsm(&["search-cover", path(&five), path(&five), "--budget", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_runs_seeded_trials() {
    let o = rfsm(&[
        "verify",
        "--prop",
        "restricted-in-full",
        "--trials",
        "5",
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "restricted-in-full: 5/5 hold");
    let o = rfsm(&[
        "verify",
        "--prop",
        "associativity",
        "--kind",
        "cascade",
        "--trials",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = rfsm(&["verify", "--prop", "lift", "--well-posed", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 8);
}
