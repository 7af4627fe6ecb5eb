use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use fourfold::{family_invariants, parse_manifold, AnalysisReport, FamilyId};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fourfold"));
    c.env_remove("FOURFOLD_BOUND");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn corpus(kind: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(kind);
    let mut files: Vec<PathBuf> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(!files.is_empty());
    files
}

#[test]
fn golden_corpus_exit_codes() {
    for (kind, want) in [("valid", 0), ("malformed", 1), ("inconsistent", 2)] {
        for path in corpus(kind) {
            let p = path.to_str().unwrap();
            for cmd in [&["analyze", "--file", p][..], &["enumerate", "--bound", "0", "--file", p], &["validate", "--file", p]] {
                let o = run(cmd);
                assert_eq!(o.status.code(), Some(want), "{cmd:?}\n{}", String::from_utf8_lossy(&o.stderr));
                if want == 1 {
                    assert!(o.stdout.is_empty(), "{cmd:?} wrote to stdout");
                }
            }
        }
    }
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &[][..],
        &["analyze"],
        &["analyze", "--family", "M1 g=1", "--file", "x.mf"],
        &["analyze", "--family", "M1 g=0"],
        &["analyze", "--family", "M7 n=1"],
        &["analyze", "--family", "M1 g=1", "--bound", "lots"],
        &["analyze", "--family", "M1 g=1", "--bound", "99999999999"],
        &["analyze", "--file", "/nonexistent/manifold.mf"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn readme_examples() {
    let text = stdout(&run(&["analyze", "--family", "M1 g=1", "--assume-pi1-distinct"]));
    assert!(text.contains("spin            Spin\n"));
    assert!(text.contains("almost complex  Exists\n  witness       (-2, 2)  square -8\n"));
    assert!(text.contains("symplectic      ConditionallyExcluded\n"));
    assert!(text.contains("complex         ConditionallyExcluded\n"));

    let text = stdout(&run(&["analyze", "--family", "M4 n=1"]));
    for key in ["almost complex", "symplectic", "complex"] {
        assert!(text.contains(&format!("{key:<16}NotExists\n")), "{key}");
    }

    let text = stdout(&run(&["analyze", "--family", "M4 n=3"]));
    assert!(text.contains("almost complex  NotExists\n"));
    assert!(text.contains("\ndiscrepancy     published witness (1, 1, 1, 1, -2, 4) for M4 n=3"));

    let text = stdout(&run(&["enumerate", "--family", "M1 g=2"]));
    assert_eq!(
        text,
        "manifold        M1 g=2\nwitnesses       4 COMPLETE\n  h             (-4, 2)  square -16\n  h             (-2, 4)  square -16\n  h             (2, -4)  square -16\n  h             (4, -2)  square -16\n"
    );
    let text = stdout(&run(&["enumerate", "--family", "M4 n=2", "--bound", "4"]));
    assert!(text.contains(" BOUNDED(4)\n") && text.contains("  h "));
    let text = stdout(&run(&["enumerate", "--family", "M4 n=1"]));
    assert!(text.contains("witnesses       0 COMPLETE\n"));
}

#[test]
fn bound_flag_wins_over_env() {
    let marker = |o: Output| stdout(&o).lines().nth(1).unwrap().to_string();
    let args = ["enumerate", "--family", "M4 n=2"];
    assert!(marker(run(&args)).ends_with("BOUNDED(32)"));
    let env = bin().args(args).env("FOURFOLD_BOUND", "3").output().unwrap();
    assert!(marker(env).ends_with("BOUNDED(3)"));
    let both = bin().args(args).args(["--bound", "2"]).env("FOURFOLD_BOUND", "3").output().unwrap();
    assert!(marker(both).ends_with("BOUNDED(2)"));
}

/// The record of a family member written out from its defining formulas,
/// independently of the library's fixture code and file renderer.
fn hand_written(id: FamilyId) -> String {
    let (chi, form, b1, rank) = match id {
        FamilyId::M1 { g } => (-4 * g as i64, "H".to_string(), 2 * g + 2, 2),
        FamilyId::M2 { g, n } => (4 - 4 * (g + n) as i64, "H".to_string(), 2 * g + 2 * n, 2),
        FamilyId::M3 { g, n } => (4 - 4 * (g + n) as i64, format!("{}H", n + 1), 2 * g + 3 * n, 2 * n + 2),
        FamilyId::M4 { n } => (-2 * n as i64, if n == 1 { "H".into() } else { format!("{n}H") }, 2 * n + 1, 2 * n),
    };
    let bits = vec!["0"; rank as usize].join(",");
    let mut text = format!(
        "# {id}\nname = {id}\nchi = {chi}\ntau = 0\nform = {form}\nb1 = {b1}\nh1 = Z^{b1}\nw2 = {bits}\n"
    );
    if let FamilyId::M1 { g } = id {
        // generators a1 b1 .. ag bg c d e f; the commutators abelianize to zero
        let zeros = |k: u32| vec!["0"; k as usize].join(",");
        let s = zeros(2 * g);
        text.push_str(&format!("gens = {}\n", 2 * g + 4));
        text.push_str(&format!("rel = {s},1,-1,0,0\nrel = {s},-1,1,0,0\nrel = {s},0,1,0,3\n"));
    }
    text
}

fn fixture_ids() -> Vec<FamilyId> {
    let mut ids = Vec::new();
    for g in 1..=3 {
        for n in 1..=3 {
            ids.extend([FamilyId::M1 { g }, FamilyId::M2 { g, n }, FamilyId::M3 { g, n }, FamilyId::M4 { n }]);
        }
    }
    ids.sort();
    ids.dedup();
    ids
}

#[test]
fn family_equals_hand_written_file() {
    let dir = tempfile::tempdir().unwrap();
    for id in fixture_ids() {
        let path = dir.path().join("m.mf");
        fs::write(&path, hand_written(id)).unwrap();
        let p = path.to_str().unwrap();
        let f = id.to_string();
        for extra in [&[][..], &["--assume-pi1-distinct"], &["--json", "--witnesses", "--bound", "3"]] {
            let from_family = run(&[&["analyze", "--family", &f][..], extra].concat());
            let from_file = run(&[&["analyze", "--file", p][..], extra].concat());
            assert_eq!(from_family.status.code(), Some(0), "{id}");
            assert_eq!(stdout(&from_family), stdout(&from_file), "{id} {extra:?}");
        }
    }
}

#[test]
fn family_command_prints_a_parsable_fixture() {
    for id in fixture_ids() {
        let text = stdout(&run(&["family", "--family", &id.to_string()]));
        assert_eq!(parse_manifold(&text).unwrap(), family_invariants(id).unwrap(), "{id}");
    }
}

#[test]
fn stdin_input() {
    let mut child = bin()
        .args(["analyze", "--file", "-", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(hand_written(FamilyId::M4 { n: 2 }).as_bytes())
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), stdout(&run(&["analyze", "--family", "M4 n=2", "--json"])));
}

#[test]
fn json_output_round_trips() {
    let mut cases: Vec<Vec<String>> = fixture_ids()
        .into_iter()
        .map(|id| vec!["--family".into(), id.to_string()])
        .collect();
    for path in corpus("valid") {
        cases.push(vec!["--file".into(), path.to_str().unwrap().into()]);
    }
    for input in cases {
        let mut args: Vec<&str> = vec!["analyze", "--json", "--witnesses", "--bound", "1", "--assume-pi1-distinct"];
        args.extend(input.iter().map(String::as_str));
        let text = stdout(&run(&args));
        let report = AnalysisReport::from_json(&text).unwrap();
        assert_eq!(report.to_json(), text, "{input:?}");
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 7);
    }
}

#[test]
fn validate_reports_every_violation() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus/inconsistent/betti.mf");
    let o = run(&["validate", "--json", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"][0]["code"], "betti identity");
}
