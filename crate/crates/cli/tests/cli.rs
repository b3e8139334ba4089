use std::collections::BTreeSet;
use std::process::{Command, Output};

use serde_json::Value;

fn projcb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_projcb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is json")
}

fn map_squares(out: &Output) -> BTreeSet<(usize, usize)> {
    let doc: Value = serde_json::from_str(&stdout(out)).unwrap();
    doc["squares"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let s = &e["square"];
            (s[0].as_u64().unwrap() as usize, s[1].as_u64().unwrap() as usize)
        })
        .collect()
}

#[test]
fn map_3x3_init_and_term() {
    let everything_but: BTreeSet<_> = (0..3)
        .flat_map(|p| (0..3).map(move |q| (p, q)))
        .filter(|&s| s != (0, 0) && s != (2, 2))
        .collect();
    for mode in ["init", "term"] {
        let out = projcb(&["map", "--mode", mode, "--m", "3", "--n", "3", "--format", "json"]);
        assert!(out.status.success());
        assert_eq!(map_squares(&out), everything_but, "{mode}");
    }
}

#[test]
fn map_is_deterministic() {
    let args = ["map", "--mode", "init", "--m", "12", "--n", "5"];
    let (a, b) = (projcb(&args), projcb(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("initial squares of 12x5:"));
}

#[test]
fn map_rejects_tall_boards_with_hint() {
    let out = projcb(&["map", "--mode", "init", "--m", "3", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["hint"], "transpose: --m 5 --n 3");
}

#[test]
fn path_ha_4x3() {
    let out = projcb(&[
        "path", "--kind", "ha", "--m", "4", "--n", "3", "--a", "1", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["path"]["moves"], "NNNNNENNNNN");
    assert_eq!(doc["construction"]["literalAttempt"], "pass");
}

#[test]
fn path_spec_matches_ha() {
    let by_spec = projcb(&[
        "path", "--spec", "--m", "3", "--n", "3", "--init", "0,2", "--term", "1,0", "--east", "",
    ]);
    let by_kind = projcb(&["path", "--kind", "ha", "--m", "3", "--n", "3", "--a", "1"]);
    assert!(by_spec.status.success() && by_kind.status.success());
    let walk = |o: &Output| stdout(o).lines().nth(1).unwrap().to_string();
    assert_eq!(walk(&by_spec), walk(&by_kind));
    assert_eq!(walk(&by_spec), "walk:  [(0,2)](NNNNNENN)");
}

#[test]
fn path_errors_are_machine_readable() {
    let out = projcb(&["path", "--kind", "exceptional", "--m", "4"]);
    assert!(!out.status.success());
    assert_eq!(stderr_json(&out)["error"], "hypothesis_violation");

    let out = projcb(&[
        "path", "--spec", "--m", "4", "--n", "3", "--init", "1,1", "--term", "1,0", "--east", "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "construction_impossible");

    let out = projcb(&[
        "path", "--spec", "--m", "4", "--n", "3", "--init", "0,1", "--term", "1,0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "invalid_spec");
}

#[test]
fn enumerate_methods_agree_on_count() {
    let count = |method: &str| {
        let out = projcb(&["enumerate", "--m", "3", "--n", "3", "--method", method, "--count-only"]);
        assert!(out.status.success());
        let text = stdout(&out);
        assert_eq!(text.lines().count(), 2);
        let header: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        header["count"].as_u64().unwrap()
    };
    let dfs = count("dfs");
    assert!(dfs > 0);
    assert_eq!(dfs, count("diagonal"));
}

#[test]
fn enumerate_2x2_notes_cycle() {
    let out = projcb(&["enumerate", "--m", "2", "--n", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("hamiltonian cycle"));
}

#[test]
fn enumerate_cap_exit_code() {
    let out = projcb(&["enumerate", "--m", "9", "--n", "9", "--method", "dfs"]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "cap_exceeded");
    assert!(err["hint"].as_str().unwrap().contains("--cap"));
}

#[test]
fn config_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("projcb.toml");
    std::fs::write(&config, "dfs-cap = 12\nformat = \"json\"\n").unwrap();
    let config = config.to_str().unwrap();

    let out = projcb(&[
        "--config",
        config,
        "enumerate",
        "--m",
        "4",
        "--n",
        "4",
        "--method",
        "dfs",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = projcb(&[
        "--config",
        config,
        "enumerate",
        "--m",
        "4",
        "--n",
        "4",
        "--method",
        "dfs",
        "--cap",
        "16",
        "--count-only",
    ]);
    assert!(out.status.success());

    let target = dir.path().join("map.svg");
    let out = projcb(&[
        "--config",
        config,
        "map",
        "--mode",
        "term",
        "--m",
        "5",
        "--n",
        "5",
        "--format",
        "svg",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert!(std::fs::read_to_string(&target).unwrap().starts_with("<svg"));

    let out = projcb(&["--config", config, "map", "--mode", "init", "--m", "4", "--n", "3"]);
    assert!(stdout(&out).trim_start().starts_with('{'));

    std::fs::write(dir.path().join("bad.toml"), "colour = 1\n").unwrap();
    let out = projcb(&[
        "--config",
        dir.path().join("bad.toml").to_str().unwrap(),
        "verify",
        "--suite",
        "n12",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        projcb(&["map", "--mode", "bogus", "--m", "3", "--n", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(projcb(&["enumerate", "--m", "0", "--n", "3"]).status.code(), Some(2));
    assert_eq!(projcb(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let out = projcb(&["verify", "--suite", "theorems", "--max-m", "6", "--max-n", "6"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).ends_with("0 fail\n"));

    let out = projcb(&["verify", "--suite", "n12", "--max-m", "10"]);
    assert!(out.status.success());

    let out = projcb(&["verify", "--suite", "constructions", "--max-m", "12", "--json"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["fail"], 0);
    assert!(doc["warn"].as_u64().unwrap() > 0);
    let warned = doc["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["status"] == "WARN")
        .all(|e| {
            e["label"].as_str().unwrap().starts_with("hb") || e["label"].as_str().unwrap().starts_with("exceptional")
        });
    assert!(warned);
}

#[test]
fn help_documents_orientation() {
    let out = projcb(&["map", "--help"]);
    assert!(stdout(&out).contains("north is up"));
}

#[test]
fn maps_match_predicates_on_figure_sizes() {
    use projcb::characterization::{initial_squares, terminal_squares};
    let sizes = (5..=12).map(|m| (m, 5)).chain((10..=14).map(|m| (m, 10)));
    for (m, n) in sizes {
        let board = projcb::Board::new(m, n).unwrap();
        let (ms, ns) = (m.to_string(), n.to_string());
        for (mode, want) in [("init", initial_squares(&board)), ("term", terminal_squares(&board))] {
            let out = projcb(&["map", "--mode", mode, "--m", &ms, "--n", &ns, "--format", "json"]);
            assert!(out.status.success(), "{mode} {board}");
            let want: BTreeSet<(usize, usize)> = want.unwrap().into_iter().map(|s| (s.p, s.q)).collect();
            assert_eq!(map_squares(&out), want, "{mode} {board}");
        }
    }
}
