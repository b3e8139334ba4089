//! Structural properties every hamiltonian path must have.
//!
//! Each check returns `Ok(())` or a [`Violation`] naming the property and the
//! offending squares. [`check_path`] runs all of them on one path and
//! [`check_paths`] adds the cross-path ones.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::board::{Board, Diagonal, DiagonalClass, DiagonalId, Move, Square};
use crate::decoder::{self, PathSpec};
use crate::walk::{TravelMap, Walk};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: &'static str,
    pub path: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({})", self.check, self.detail, self.path)
    }
}

type Check = Result<(), Violation>;

fn fail(check: &'static str, w: &Walk, detail: impl Into<String>) -> Check {
    Err(Violation {
        check,
        path: w.to_string(),
        detail: detail.into(),
    })
}

/// Facts about a path shared by the checks.
struct Ctx {
    board: Board,
    map: TravelMap,
    start: Square,
    end: Square,
    terminal: Diagonal,
}

impl Ctx {
    fn new(w: &Walk) -> Result<Ctx, Violation> {
        let map = w.travel_map().map_err(|e| Violation {
            check: "hamiltonian",
            path: w.to_string(),
            detail: e.to_string(),
        })?;
        let board = w.board();
        Ok(Ctx {
            board,
            map,
            start: w.start(),
            end: w.end(),
            terminal: board.diagonal_of(w.end()),
        })
    }

    fn east(&self, s: Square) -> bool {
        self.map.get(s) == Some(Move::E)
    }

    fn north(&self, s: Square) -> bool {
        self.map.get(s) == Some(Move::N)
    }

    /// `s·a·b⁻¹`
    fn turn(&self, s: Square, a: Move, b: Move) -> Square {
        self.board.step_inverse(self.board.step(s, a), b)
    }

    fn wide(&self) -> bool {
        self.board.m() >= 3 && self.board.n() >= 3
    }

    /// Pair diagonals classified against the terminal one. The corner is
    /// left out: its two moves land on the same square.
    fn classified(&self) -> Vec<(Diagonal, DiagonalClass)> {
        self.board
            .diagonals()
            .into_iter()
            .filter(|d| !d.is_corner())
            .filter_map(|d| {
                let class = self.board.classify(&d, &self.terminal).ok()?;
                Some((d, class))
            })
            .collect()
    }
}

/// Every non-terminal diagonal travels one way.
pub fn uniform_diagonals(w: &Walk) -> Check {
    match w.east_set() {
        Ok(_) => Ok(()),
        Err(e) => fail("uniform-diagonals", w, e.to_string()),
    }
}

/// `ιE⁻¹` and `ιN⁻¹` lie in the terminal diagonal.
pub fn terminal_holds_predecessors(w: &Walk) -> Check {
    let b = w.board();
    let t = b.diagonal_id_of(w.end());
    for mv in Move::ALL {
        let back = b.step_inverse(w.start(), mv);
        if b.diagonal_id_of(back) != t {
            return fail("terminal-predecessors", w, format!("ι{mv}⁻¹ = {back} outside {t}"));
        }
    }
    Ok(())
}

/// Inside the terminal diagonal, `σ` travels east iff `u(σ) < u(ιE⁻¹)`,
/// and iff `v(σ) < v(τ)`.
pub fn terminal_orientation(w: &Walk) -> Check {
    let ctx = Ctx::new(w)?;
    let d = &ctx.terminal;
    let back = ctx.board.step_inverse(ctx.start, Move::E);
    let u = |s| d.u_index(ctx.end, s);
    let v = |s| d.v_index(back, s);
    let (Ok(u_back), Ok(v_end)) = (u(back), v(ctx.end)) else {
        return fail("terminal-orientation", w, "ιE⁻¹ outside the terminal diagonal");
    };
    for &s in d.members() {
        let east = ctx.east(s);
        if east != (u(s).unwrap() < u_back) {
            return fail("terminal-orientation", w, format!("{s} breaks the u-index rule"));
        }
        if east != (v(s).unwrap() < v_end) {
            return fail("terminal-orientation", w, format!("{s} breaks the v-index rule"));
        }
    }
    Ok(())
}

/// The six local propagation rules inside the terminal diagonal.
pub fn terminal_local_rules(w: &Walk) -> Check {
    let ctx = Ctx::new(w)?;
    let (iota, tau) = (ctx.start, ctx.end);
    let (e, n) = (Move::E, Move::N);
    let b = &ctx.board;
    if b.step(tau, n) != iota && !ctx.east(ctx.turn(tau, n, e)) {
        return fail("local-rules", w, "τNE⁻¹ does not travel east");
    }
    if b.step(tau, e) != iota && !ctx.north(ctx.turn(tau, e, n)) {
        return fail("local-rules", w, "τEN⁻¹ does not travel north");
    }
    for &s in ctx.terminal.members() {
        let ne = ctx.turn(s, n, e);
        let en = ctx.turn(s, e, n);
        if ctx.east(s) {
            if b.step(s, n) != iota && !ctx.east(ne) {
                return fail("local-rules", w, format!("{s} east but {ne} not east"));
            }
            if ctx.north(en) {
                return fail("local-rules", w, format!("{s} east and {en} north"));
            }
        }
        if ctx.north(s) {
            if b.step(s, e) != iota && !ctx.north(en) {
                return fail("local-rules", w, format!("{s} north but {en} not north"));
            }
            if ctx.east(ne) {
                return fail("local-rules", w, format!("{s} north and {ne} east"));
            }
        }
    }
    Ok(())
}

/// From each square of `S_{b+1}`, the path first meets `S_a` at the inverse
/// of that square.
pub fn inverse_endpoint_subpaths(w: &Walk) -> Check {
    let ctx = Ctx::new(w)?;
    if !ctx.wide() {
        return Ok(());
    }
    let Some((a, b)) = ctx.terminal.bounds() else {
        return fail("inverse-subpaths", w, "terminal diagonal is the corner");
    };
    let Ok(starts) = ctx.board.subdiagonal(b + 1) else {
        return Ok(());
    };
    for s in starts {
        let mut cur = s;
        while cur.level() != a {
            match ctx.map.successor(cur) {
                Some(next) => cur = next,
                None => return fail("inverse-subpaths", w, format!("from {s} the path ends before S_{a}")),
            }
        }
        let want = ctx.board.inverse_square(s);
        if cur != want {
            return fail("inverse-subpaths", w, format!("from {s} reached {cur}, wanted {want}"));
        }
    }
    Ok(())
}

/// On boards with both sides at least 3: not from `(0,0)`, and no edge from
/// `τ` back to `ι`.
pub fn no_corner_start_or_cycle(w: &Walk) -> Check {
    let b = w.board();
    if b.m() < 3 || b.n() < 3 {
        return Ok(());
    }
    if w.start() == Square::new(0, 0) {
        return fail("no-cycle", w, "starts at (0,0)");
    }
    if b.step_east(w.end()) == w.start() || b.step_north(w.end()) == w.start() {
        return fail("no-cycle", w, "closes to a hamiltonian cycle");
    }
    Ok(())
}

/// Forcing every outer diagonal east always decodes; forcing them north
/// decodes iff `S_{n−1} ∪ S_{m−2}` is not outer.
pub fn outer_reroute(w: &Walk) -> Check {
    let b = w.board();
    if b.n() < 3 || b.m() < b.n() {
        return Ok(());
    }
    match decoder::reroute_outer(&b, w, Move::E) {
        Ok(Some(r)) if r.start() == w.start() && r.end() == w.end() => {}
        other => return fail("outer-reroute", w, format!("east reroute gave {other:?}")),
    }
    let key = b.diagonal_of(Square::new(0, b.n() - 1));
    let outer = b.classify(&key, &b.diagonal_of(w.end())).ok() == Some(DiagonalClass::Outer);
    match decoder::reroute_outer(&b, w, Move::N) {
        Ok(found) if found.is_some() != outer => Ok(()),
        other => fail(
            "outer-reroute",
            w,
            format!("north reroute gave {other:?} with key outer = {outer}"),
        ),
    }
}

/// An east-traveling inner diagonal is rowful unless every inner diagonal
/// travels east.
pub fn inner_east_rowful(w: &Walk) -> Check {
    let ctx = Ctx::new(w)?;
    let b = &ctx.board;
    if b.m() < b.n() {
        return Ok(());
    }
    let inner: Vec<Diagonal> = ctx
        .classified()
        .into_iter()
        .filter(|(_, c)| *c == DiagonalClass::Inner)
        .map(|(d, _)| d)
        .collect();
    let travels_east = |d: &Diagonal| ctx.east(d.members()[0]);
    if inner.iter().all(travels_east) {
        return Ok(());
    }
    for d in inner.iter().filter(|d| travels_east(d)) {
        if !b.is_rowful(d).unwrap_or(false) {
            return fail(
                "inner-east-rowful",
                w,
                format!("{} travels east, is not rowful", d.id()),
            );
        }
    }
    Ok(())
}

/// Whether every non-terminal pair diagonal travels north.
pub fn all_north(w: &Walk) -> bool {
    let Ok(ctx) = Ctx::new(w) else { return false };
    ctx.classified()
        .iter()
        .filter(|(_, c)| *c != DiagonalClass::Terminal)
        .all(|(d, _)| ctx.north(d.members()[0]))
}

/// For all-north paths: `a ≤ m−2 ≤ b`, and the path (or its inverse, or on
/// the right square boards its transpose forms) starts at `τ₊E`, with the
/// `(n,0)` start allowed when `a+1 = b = n = m−2`.
pub fn all_north_start(w: &Walk) -> Check {
    let b = w.board();
    let (m, n) = (b.m(), b.n());
    if n < 3 || m < n || !all_north(w) {
        return Ok(());
    }
    let Some((lo, hi)) = b.diagonal_of(w.end()).bounds() else {
        return fail("all-north-start", w, "terminal diagonal is the corner");
    };
    if !(lo + 2 <= m && m <= hi + 2) {
        return fail("all-north-start", w, format!("a={lo}, b={hi} violates a <= m-2 <= b"));
    }
    let tau_plus = b.tau_plus(hi).expect("b in range");
    let target = b.step_east(tau_plus);
    let first = w.start();
    let inverse_first = b.inverse_square(w.end());
    let mut ok = first == target || inverse_first == target;
    if m == n && n == lo + 2 && n == hi + 1 {
        let t = |s| b.transpose_square(s).expect("square board");
        ok |= t(first) == target || t(inverse_first) == target;
    }
    if lo + 1 == hi && hi == n && n + 2 == m {
        ok |= first == tau_plus || inverse_first == tau_plus;
    }
    if ok {
        Ok(())
    } else {
        fail("all-north-start", w, format!("starts at {first}, τ₊E = {target}"))
    }
}

/// The start of the path or of its inverse is `τ₊E`, or is `(p,0)` with
/// `1 ≤ p < ⌊(m+n)/2⌋` when every inner diagonal travels east.
pub fn start_is_tau_plus_e(w: &Walk) -> Check {
    let ctx = Ctx::new(w)?;
    let b = &ctx.board;
    let (m, n) = (b.m(), b.n());
    if n < 3 || m < n {
        return Ok(());
    }
    let Some((_, hi)) = ctx.terminal.bounds() else {
        return fail("start-tau-plus-e", w, "terminal diagonal is the corner");
    };
    let target = b.step_east(b.tau_plus(hi).expect("b in range"));
    let starts = [ctx.start, b.inverse_square(ctx.end)];
    if starts.contains(&target) {
        return Ok(());
    }
    let inner_east = ctx
        .classified()
        .iter()
        .filter(|(_, c)| *c == DiagonalClass::Inner)
        .all(|(d, _)| ctx.east(d.members()[0]));
    let small = |s: &Square| s.q == 0 && s.p >= 1 && s.p < (m + n) / 2;
    if inner_east && starts.iter().any(small) {
        return Ok(());
    }
    fail(
        "start-tau-plus-e",
        w,
        format!("neither {} nor {} is {target}", starts[0], starts[1]),
    )
}

/// Every per-path check in a fixed order; the first failure of each is kept.
pub fn check_path(w: &Walk) -> Vec<Violation> {
    if !w.is_hamiltonian_path() {
        return vec![Violation {
            check: "hamiltonian",
            path: w.to_string(),
            detail: "not a hamiltonian path".into(),
        }];
    }
    let checks: [fn(&Walk) -> Check; 11] = [
        uniform_diagonals,
        terminal_holds_predecessors,
        terminal_orientation,
        terminal_local_rules,
        inverse_endpoint_subpaths,
        no_corner_start_or_cycle,
        outer_reroute,
        inner_east_rowful,
        all_north_start,
        start_is_tau_plus_e,
        decodes_back,
    ];
    checks.iter().filter_map(|c| c(w).err()).collect()
}

/// The path's own coordinates decode back to it.
pub fn decodes_back(w: &Walk) -> Check {
    let spec = match decoder::spec_of(w) {
        Ok(s) => s,
        Err(e) => return fail("decode-roundtrip", w, e.to_string()),
    };
    match decoder::decode(&w.board(), &spec) {
        Ok(Some(back)) if &back == w => Ok(()),
        other => fail("decode-roundtrip", w, format!("decoded {other:?}")),
    }
}

/// Per-path checks on every path plus injectivity of the coordinates.
pub fn check_paths(paths: &[Walk]) -> Vec<Violation> {
    let mut out: Vec<Violation> = paths.iter().flat_map(check_path).collect();
    let mut seen: BTreeMap<PathSpec, &Walk> = BTreeMap::new();
    for w in paths {
        let Ok(spec) = decoder::spec_of(w) else { continue };
        if let Some(prev) = seen.insert(spec.clone(), w) {
            out.push(Violation {
                check: "spec-injective",
                path: w.to_string(),
                detail: format!("shares {spec} with {prev}"),
            });
        }
    }
    out
}

/// Ids of the diagonals that travel east, corner excluded.
pub fn east_pairs(w: &Walk) -> Vec<DiagonalId> {
    let corner = w.board().corner_id();
    w.east_set()
        .map(|s| s.into_iter().filter(|&d| d != corner).collect())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::enumerate_dfs;
    use crate::walk::MoveSeq;

    #[test]
    fn enumerated_paths_pass() {
        for (m, n) in [(3, 3), (4, 3), (5, 3), (4, 4), (6, 3)] {
            let report = enumerate_dfs(&Board::new(m, n).unwrap()).unwrap();
            let v = check_paths(&report.paths);
            assert!(v.is_empty(), "{m}x{n}: {}", v[0]);
        }
    }

    #[test]
    fn broken_paths_are_reported() {
        let board = Board::new(3, 3).unwrap();
        let w = Walk::new(board, Square::new(0, 0), "NNNNNNNN".parse::<MoveSeq>().unwrap()).unwrap();
        assert_eq!(check_path(&w)[0].check, "hamiltonian");
        let good = enumerate_dfs(&board).unwrap().paths[0].clone();
        let v = check_paths(&[good.clone(), good]);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].check, "spec-injective");
    }

    #[test]
    fn all_north_ignores_corner_letter() {
        let board = Board::new(3, 3).unwrap();
        let ha: Walk = Walk::new(board, Square::new(0, 2), "NNNNNENN".parse().unwrap()).unwrap();
        assert!(all_north(&ha));
        assert!(east_pairs(&ha).is_empty());
    }
}
