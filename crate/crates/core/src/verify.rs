//! Cross-validation suites: every predicate, construction and reduction
//! checked against enumerated paths on a range of boards.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::board::{Board, Square};
use crate::characterization;
use crate::constructions::{self, LiteralAttempt};
use crate::decoder::{self, EnumerationReport};
use crate::error::{Error, Result};
use crate::invariants;
use crate::reductions::{self, DeltaMap, StretchVerifier};
use crate::report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Theorems,
    Props,
    Constructions,
    Reductions,
    N12,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [
        Suite::Theorems,
        Suite::Props,
        Suite::Constructions,
        Suite::Reductions,
        Suite::N12,
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::Theorems => "theorems",
            Suite::Props => "props",
            Suite::Constructions => "constructions",
            Suite::Reductions => "reductions",
            Suite::N12 => "n12",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Warn => "WARN",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub suite: Suite,
    pub label: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

/// Board ranges and enumeration limits for a run.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub max_m: usize,
    pub max_n: usize,
    pub dfs_cap: usize,
    pub diagonal_cap: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_m: 6,
            max_n: 6,
            dfs_cap: decoder::DEFAULT_DFS_CAP,
            diagonal_cap: decoder::DEFAULT_DIAGONAL_CAP,
        }
    }
}

impl Bounds {
    pub fn new(max_m: usize, max_n: usize) -> Self {
        Bounds {
            max_m,
            max_n,
            ..Bounds::default()
        }
    }

    /// Boards `lo ≤ n ≤ m` within the bounds, small first.
    pub fn boards(&self, lo: usize) -> Vec<Board> {
        let mut out = Vec::new();
        for m in lo..=self.max_m {
            for n in lo..=m.min(self.max_n) {
                out.push(Board::new(m, n).expect("positive"));
            }
        }
        out
    }

    /// DFS when the board fits under the DFS cap, diagonal decoding otherwise.
    pub fn enumerate(&self, board: &Board) -> Result<EnumerationReport> {
        if board.area() <= self.dfs_cap {
            decoder::enumerate_dfs_with_cap(board, self.dfs_cap)
        } else {
            decoder::enumerate_diagonal_with_cap(board, self.diagonal_cap)
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub entries: Vec<Entry>,
}

impl SuiteReport {
    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    /// No FAIL entries.
    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            write!(out, "{} [{}] {}: {}", e.status, e.suite, e.label, e.detail).unwrap();
            if let Some(c) = &e.counterexample {
                write!(out, " counterexample: {c}").unwrap();
            }
            out.push('\n');
        }
        writeln!(
            out,
            "summary: {} pass, {} warn, {} fail",
            self.count(Status::Pass),
            self.count(Status::Warn),
            self.count(Status::Fail)
        )
        .unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        let doc = json!({
            "entries": self.entries,
            "pass": self.count(Status::Pass),
            "warn": self.count(Status::Warn),
            "fail": self.count(Status::Fail),
        });
        serde_json::to_string_pretty(&doc).expect("json") + "\n"
    }
}

struct Recorder {
    suite: Suite,
    entries: Vec<Entry>,
}

impl Recorder {
    fn push(&mut self, label: impl Into<String>, status: Status, detail: impl Into<String>, cx: Option<Value>) {
        self.entries.push(Entry {
            suite: self.suite,
            label: label.into(),
            status,
            detail: detail.into(),
            counterexample: cx,
        });
    }

    fn pass(&mut self, label: impl Into<String>, detail: impl Into<String>) {
        self.push(label, Status::Pass, detail, None);
    }

    fn fail(&mut self, label: impl Into<String>, detail: impl Into<String>, cx: Value) {
        self.push(label, Status::Fail, detail, Some(cx));
    }

    fn error(&mut self, label: impl Into<String>, err: &Error) {
        self.fail(
            label,
            format!("error: {err}"),
            json!({"kind": err.kind(), "message": err.to_string()}),
        );
    }

    /// PASS when the sets agree, FAIL with both one-sided differences.
    fn compare<T: Ord + Serialize + Clone>(&mut self, label: String, got: &BTreeSet<T>, want: &BTreeSet<T>) {
        if got == want {
            self.pass(label, format!("{} equal", got.len()));
        } else {
            let extra: Vec<T> = got.difference(want).cloned().collect();
            let missing: Vec<T> = want.difference(got).cloned().collect();
            let detail = format!("{} unexpected, {} missing", extra.len(), missing.len());
            self.fail(label, detail, json!({"unexpected": extra, "missing": missing}));
        }
    }
}

/// Run one suite, or all of them.
pub fn run(suite: Suite, bounds: &Bounds) -> SuiteReport {
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    let mut entries = Vec::new();
    for s in suites {
        let mut rec = Recorder {
            suite: s,
            entries: Vec::new(),
        };
        match s {
            Suite::Theorems => theorems(&mut rec, bounds),
            Suite::Props => props(&mut rec, bounds),
            Suite::Constructions => constructions(&mut rec, bounds),
            Suite::Reductions => reductions(&mut rec, bounds),
            Suite::N12 => n12(&mut rec, bounds),
            Suite::All => unreachable!(),
        }
        entries.append(&mut rec.entries);
    }
    SuiteReport { entries }
}

/// Endpoint predicates and pair lists against enumeration, plus agreement of
/// the two enumeration methods where DFS fits.
fn theorems(rec: &mut Recorder, bounds: &Bounds) {
    for board in bounds.boards(3) {
        let report = match bounds.enumerate(&board) {
            Ok(r) => r,
            Err(e) => {
                rec.error(format!("enumerate {board}"), &e);
                continue;
            }
        };
        match characterization::initial_squares(&board) {
            Ok(want) => rec.compare(format!("initial-squares {board}"), &report.initial_squares, &want),
            Err(e) => rec.error(format!("initial-squares {board}"), &e),
        }
        match characterization::terminal_squares(&board) {
            Ok(want) => rec.compare(format!("terminal-squares {board}"), &report.terminal_squares, &want),
            Err(e) => rec.error(format!("terminal-squares {board}"), &e),
        }
        match characterization::admissible_pairs(&board) {
            Ok(want) => rec.compare(format!("endpoint-pairs {board}"), &report.endpoint_pairs, &want),
            Err(e) => rec.error(format!("endpoint-pairs {board}"), &e),
        }
        if report.method == decoder::Method::Dfs && board.m() + board.n() <= bounds.diagonal_cap {
            match decoder::enumerate_diagonal_with_cap(&board, bounds.diagonal_cap) {
                Ok(other) => {
                    let same = report::paths_digest(&report.paths) == report::paths_digest(&other.paths);
                    if same {
                        rec.pass(format!("methods-agree {board}"), format!("{} paths", report.count()));
                    } else {
                        let a: BTreeSet<String> = report.paths.iter().map(|w| w.to_string()).collect();
                        let b: BTreeSet<String> = other.paths.iter().map(|w| w.to_string()).collect();
                        rec.compare(format!("methods-agree {board}"), &b, &a);
                    }
                }
                Err(e) => rec.error(format!("methods-agree {board}"), &e),
            }
        }
    }
}

/// Structural invariants of every enumerated path, and cycles on narrow
/// boards.
fn props(rec: &mut Recorder, bounds: &Bounds) {
    const CHECKS: [&str; 12] = [
        "hamiltonian",
        "uniform-diagonals",
        "terminal-predecessors",
        "terminal-orientation",
        "local-rules",
        "inverse-subpaths",
        "no-cycle",
        "outer-reroute",
        "inner-east-rowful",
        "all-north-start",
        "start-tau-plus-e",
        "decode-roundtrip",
    ];
    for board in bounds.boards(3) {
        let report = match bounds.enumerate(&board) {
            Ok(r) => r,
            Err(e) => {
                rec.error(format!("enumerate {board}"), &e);
                continue;
            }
        };
        let mut by_check: BTreeMap<&str, Vec<invariants::Violation>> = BTreeMap::new();
        for v in invariants::check_paths(&report.paths) {
            by_check.entry(v.check).or_default().push(v);
        }
        for check in CHECKS.into_iter().chain(["spec-injective"]) {
            let label = format!("{check} {board}");
            match by_check.get(check) {
                None => rec.pass(label, format!("{} paths", report.count())),
                Some(vs) => rec.fail(label, format!("{} of {} paths", vs.len(), report.count()), json!(vs[0])),
            }
        }
    }
    for m in 1..=bounds.max_m {
        for n in 1..=2.min(m).min(bounds.max_n) {
            let board = Board::new(m, n).expect("positive");
            let label = format!("cycle-exists {board}");
            match bounds.enumerate(&board) {
                Ok(r) => match r.cycle_witness() {
                    Some(w) => rec.pass(label, format!("witness {w}")),
                    None => rec.fail(label, "no hamiltonian cycle", json!({"paths": r.count()})),
                },
                Err(e) => rec.error(label, &e),
            }
        }
    }
}

/// Every admissible construction, with literal-formula fallbacks as WARN, and
/// the all-north terminal sweep up to `m = 8`.
fn constructions(rec: &mut Recorder, bounds: &Bounds) {
    use constructions::{construct_exceptional, construct_ha, construct_hb, sigma_a, sigma_b};
    let record = |rec: &mut Recorder, label: String, built: Result<constructions::Construction>| match built {
        Ok(c) if c.log.literal_attempt == LiteralAttempt::Fail => {
            let why = c.log.note.clone().unwrap_or_default();
            rec.push(
                label,
                Status::Warn,
                format!("literal rejected ({why}); decoded {}", c.walk),
                None,
            );
        }
        Ok(c) => rec.pass(label, c.walk.to_string()),
        Err(e) => rec.error(label, &e),
    };
    for board in bounds.boards(3) {
        let (m, n) = (board.m(), board.n());
        for a in 0..=(m + n - 3) / 2 {
            let b = m + n - 3 - a;
            if !(a + 2 <= m && m <= b + 2) {
                continue;
            }
            if sigma_a(&board, a).is_some_and(|s| s.level() == a) {
                record(rec, format!("ha {board} a={a}"), construct_ha(&board, a));
            }
            if a != b && sigma_b(&board, b).is_some_and(|s| s.level() == b) {
                record(rec, format!("hb {board} a={a} b={b}"), construct_hb(&board, a, b));
            }
        }
        if m <= 8 {
            for a in 0..=(m + n - 3) / 2 {
                let label = format!("all-north-terminals {board} a={a}");
                match (
                    constructions::all_north_terminals(&board, a),
                    constructions::expected_all_north_terminals(&board, a),
                ) {
                    (Ok(got), Ok(want)) => {
                        let (got, want): (BTreeSet<Square>, BTreeSet<Square>) =
                            (got.into_iter().collect(), want.into_iter().collect());
                        rec.compare(label, &got, &want);
                    }
                    (Err(e), _) | (_, Err(e)) => rec.error(label, &e),
                }
            }
        }
    }
    for m in 5..=bounds.max_m {
        if m - 2 <= bounds.max_n {
            record(rec, format!("exceptional {m}x{}", m - 2), construct_exceptional(m));
        }
    }
}

/// Contraction round trips, rowful east inner diagonals and the stretch
/// equivalence.
fn reductions(rec: &mut Recorder, bounds: &Bounds) {
    for m in 1..=bounds.max_m {
        for n in 1..=m.min(bounds.max_n) {
            let board = Board::new(m, n).expect("positive");
            if board.area() > bounds.dfs_cap {
                continue;
            }
            let label = format!("contract-expand {board}");
            match round_trips(&board, bounds) {
                Ok((checked, None)) => rec.pass(label, format!("{checked} contractions")),
                Ok((checked, Some(cx))) => rec.fail(label, format!("after {checked} contractions"), cx),
                Err(e) => rec.error(label, &e),
            }
        }
    }
    let mut verifier = StretchVerifier::new();
    for board in bounds.boards(3) {
        let report = match bounds.enumerate(&board) {
            Ok(r) => r,
            Err(e) => {
                rec.error(format!("enumerate {board}"), &e);
                continue;
            }
        };
        let bad: Vec<_> = report
            .paths
            .iter()
            .filter_map(|w| invariants::inner_east_rowful(w).err())
            .collect();
        match bad.first() {
            None => rec.pass(
                format!("inner-east-rowful {board}"),
                format!("{} paths", report.count()),
            ),
            Some(v) => rec.fail(
                format!("inner-east-rowful {board}"),
                format!("{} paths", bad.len()),
                json!(v),
            ),
        }
        let label = format!("stretch {board}");
        match stretch_sweep(&board, &mut verifier) {
            Ok((checked, None)) => rec.pass(label, format!("{checked} triples")),
            Ok((checked, Some(cx))) => rec.fail(label, format!("after {checked} triples"), cx),
            Err(e) => rec.error(label, &e),
        }
    }
}

/// Contract every rowful east-traveling non-terminal diagonal of every path
/// and expand it back.
fn round_trips(board: &Board, bounds: &Bounds) -> Result<(usize, Option<Value>)> {
    let report = bounds.enumerate(board)?;
    let diagonals = board.diagonals();
    let mut checked = 0;
    for w in &report.paths {
        let east = w.east_set()?;
        let terminal = board.diagonal_id_of(w.end());
        for d in &diagonals {
            if d.is_corner() || d.id() == terminal || !east.contains(&d.id()) || !board.is_rowful(d)? {
                continue;
            }
            let dm = DeltaMap::of(d)?;
            let small = reductions::contract_rowful_east(w, d)?;
            let back = reductions::expand_rowful_east(&small, dm.i, dm.j)?;
            checked += 1;
            if !small.is_hamiltonian_path() || &back != w {
                let cx = json!({"path": w.to_string(), "diagonal": d.id(), "contracted": small.to_string(), "expanded": back.to_string()});
                return Ok((checked, Some(cx)));
            }
        }
    }
    Ok((checked, None))
}

/// Every terminal square, every initial square one step past the terminal
/// diagonal, and `e` from 0 to two past the bound.
fn stretch_sweep(board: &Board, verifier: &mut StretchVerifier) -> Result<(usize, Option<Value>)> {
    let mut checked = 0;
    for d in board.diagonals().iter().filter(|d| !d.is_corner()) {
        let (a, b) = d.bounds().expect("pair diagonal");
        let bound = reductions::stretch_bound(board, a, b);
        for &tau in d.members() {
            for &sigma in d.members() {
                let iota = board.step_east(sigma);
                for e in 0..=bound + 2 {
                    let check = match verifier.verify(board, iota, tau, e) {
                        Ok(c) => c,
                        Err(Error::HypothesisViolation(_)) => continue,
                        Err(err) => return Err(err),
                    };
                    checked += 1;
                    if !check.agrees() {
                        let cx = json!({"initial": iota, "terminal": tau, "e": e, "check": check});
                        return Ok((checked, Some(cx)));
                    }
                }
            }
        }
    }
    Ok((checked, None))
}

/// Explicit pair lists for one- and two-row boards against enumeration.
fn n12(rec: &mut Recorder, bounds: &Bounds) {
    let big = Bounds {
        dfs_cap: bounds.dfs_cap.max(2 * bounds.max_m).min(decoder::DFS_HARD_LIMIT),
        ..*bounds
    };
    for m in 1..=bounds.max_m {
        for n in [1, 2] {
            if n > m {
                continue;
            }
            let board = Board::new(m, n).expect("positive");
            let label = format!("n{n}-pairs {board}");
            let want = if n == 1 {
                characterization::n1_pairs(m)
            } else {
                characterization::n2_pairs(m)
            };
            match (big.enumerate(&board), want) {
                (Ok(r), Ok(want)) => rec.compare(label, &r.endpoint_pairs, &want),
                (Err(e), _) | (_, Err(e)) => rec.error(label, &e),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        let report = run(Suite::All, &Bounds::new(5, 5));
        assert!(report.passed(), "{}", report.to_text());
        assert!(report.count(Status::Pass) > 50);
        let text = report.to_text();
        assert!(text.lines().last().unwrap().starts_with("summary:"));
    }

    #[test]
    fn suites_parse() {
        assert_eq!("n12".parse::<Suite>().unwrap(), Suite::N12);
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn failures_carry_counterexamples() {
        let mut rec = Recorder {
            suite: Suite::Theorems,
            entries: Vec::new(),
        };
        rec.compare("x".into(), &BTreeSet::from([1, 2]), &BTreeSet::from([2, 3]));
        let report = SuiteReport { entries: rec.entries };
        assert!(!report.passed());
        assert!(report.to_text().contains(r#"{"missing":[3],"unexpected":[1]}"#));
    }
}
