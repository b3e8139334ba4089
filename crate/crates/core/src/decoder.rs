//! Path coordinates and enumeration.
//!
//! A hamiltonian path is pinned down by its initial square, its terminal
//! square and the set of non-terminal diagonals that travel east: every
//! non-terminal diagonal travels uniformly, and inside the terminal diagonal
//! the directions are forced by the position of `ιE⁻¹` in the orbit order.
//! [`decode`] turns such coordinates into the unique candidate walk.
//! [`enumerate_diagonal`] walks the whole coordinate space;
//! [`enumerate_dfs`] is a plain backtracking search kept independent of the
//! diagonal theory so the two can be checked against each other.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::board::{Board, DiagonalClass, DiagonalId, Move, Square, Tables};
use crate::error::{Error, Result};
use crate::walk::{MoveSeq, Walk};

/// Default largest board area searched by [`enumerate_dfs`].
pub const DEFAULT_DFS_CAP: usize = 36;
/// Default largest `m + n` accepted by [`enumerate_diagonal`].
pub const DEFAULT_DIAGONAL_CAP: usize = 26;
/// Hard limit of the backtracking search (visited set is a `u128`).
pub const DFS_HARD_LIMIT: usize = 128;

/// Initial square, terminal square and east-traveling non-terminal diagonals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathSpec {
    pub initial: Square,
    pub terminal: Square,
    pub east: BTreeSet<DiagonalId>,
}

impl PathSpec {
    pub fn new(initial: Square, terminal: Square, east: impl IntoIterator<Item = DiagonalId>) -> Self {
        PathSpec {
            initial,
            terminal,
            east: east.into_iter().collect(),
        }
    }

    /// Check the structural requirements a decodable spec must meet.
    pub fn validate(&self, board: &Board) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidSpec(msg));
        if !board.contains(self.initial) || !board.contains(self.terminal) {
            return invalid(format!("squares {} / {} not on {board}", self.initial, self.terminal));
        }
        let terminal = board.diagonal_id_of(self.terminal);
        if terminal == board.corner_id() && board.m() >= 3 && board.n() >= 3 {
            return invalid(format!("terminal {} lies on the corner diagonal", self.terminal));
        }
        let back = board.step_inverse(self.initial, Move::E);
        if board.diagonal_id_of(back) != terminal {
            return invalid(format!(
                "{}E⁻¹ = {back} is not in the terminal diagonal {terminal}",
                self.initial
            ));
        }
        for &id in &self.east {
            if id == terminal {
                return invalid(format!("east set contains the terminal diagonal {id}"));
            }
            if board.diagonal(id).is_err() {
                return invalid(format!("{id} is not a diagonal of {board}"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for PathSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let east: Vec<String> = self.east.iter().map(|d| d.to_string()).collect();
        write!(f, "{} -> {} east {{{}}}", self.initial, self.terminal, east.join(","))
    }
}

/// Decoding state for one board: lookup tables plus a visit stamp buffer.
pub(crate) struct Decoder<'t> {
    tables: &'t Tables,
    stamp: Vec<u32>,
    generation: u32,
    /// Direction of each terminal-diagonal square (0 = east, 1 = north).
    term_dir: Vec<u8>,
}

/// Precomputed frame for one (initial, terminal) pair.
pub(crate) struct Frame {
    initial: u32,
    terminal: u32,
    terminal_ordinal: u32,
}

impl<'t> Decoder<'t> {
    pub(crate) fn new(tables: &'t Tables) -> Self {
        let area = tables.board.area();
        Decoder {
            tables,
            stamp: vec![0; area],
            generation: 0,
            term_dir: vec![1; area],
        }
    }

    /// Set up the terminal-diagonal directions for a frame: a square travels
    /// east iff its u-index is below that of `ιE⁻¹`.
    pub(crate) fn frame(&mut self, initial: Square, terminal: Square) -> Frame {
        let t = self.tables;
        let board = t.board;
        let ti = board.index(terminal);
        let ord = t.ordinal[ti];
        let d = &t.diagonals[ord as usize];
        let len = d.len();
        let t_pos = t.position[ti] as usize;
        let u = |pos: usize| match (pos + len - t_pos) % len {
            0 => len,
            u => u,
        };
        let back = board.index(board.step_inverse(initial, Move::E));
        let u_back = u(t.position[back] as usize);
        for &s in d.members() {
            let si = board.index(s);
            self.term_dir[si] = if u(t.position[si] as usize) < u_back { 0 } else { 1 };
        }
        Frame {
            initial: board.index(initial) as u32,
            terminal: ti as u32,
            terminal_ordinal: ord,
        }
    }

    #[inline]
    fn direction(&self, frame: &Frame, square: u32, mask: u64) -> usize {
        let ord = self.tables.ordinal[square as usize];
        if ord == frame.terminal_ordinal {
            self.term_dir[square as usize] as usize
        } else {
            // bit set = east = 0
            ((mask >> ord) & 1 ^ 1) as usize
        }
    }

    /// Whether the chain from the initial square covers the board and stops
    /// at the terminal square. `mask` bit `k` set means ordinal `k` travels east.
    pub(crate) fn accepts(&mut self, frame: &Frame, mask: u64) -> bool {
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.fill(0);
            self.generation = 1;
        }
        let g = self.generation;
        let area = self.stamp.len();
        let mut cur = frame.initial;
        self.stamp[cur as usize] = g;
        let mut count = 1;
        while cur != frame.terminal {
            let dir = self.direction(frame, cur, mask);
            cur = self.tables.succ[dir][cur as usize];
            if self.stamp[cur as usize] == g {
                return false;
            }
            self.stamp[cur as usize] = g;
            count += 1;
        }
        count == area
    }

    /// Materialize an accepted frame as a walk.
    pub(crate) fn walk(&self, frame: &Frame, mask: u64) -> Walk {
        let board = self.tables.board;
        let mut moves = Vec::with_capacity(board.area() - 1);
        let mut cur = frame.initial;
        while cur != frame.terminal {
            let dir = self.direction(frame, cur, mask);
            moves.push(Move::ALL[dir]);
            cur = self.tables.succ[dir][cur as usize];
        }
        Walk::new(board, board.square_at(frame.initial as usize), MoveSeq::from(moves))
            .expect("initial square on board")
    }
}

fn mask_of(board: &Board, east: &BTreeSet<DiagonalId>) -> u64 {
    east.iter().fold(0, |m, &id| m | 1 << board.ordinal(id))
}

/// Decode a spec into its unique hamiltonian path, if there is one.
pub fn decode(board: &Board, spec: &PathSpec) -> Result<Option<Walk>> {
    spec.validate(board)?;
    if board.diagonal_count() > 64 {
        return Err(Error::CapExceeded {
            m: board.m(),
            n: board.n(),
            detail: "more than 64 diagonals".into(),
        });
    }
    let tables = Tables::new(*board);
    let mut decoder = Decoder::new(&tables);
    let frame = decoder.frame(spec.initial, spec.terminal);
    let mask = mask_of(board, &spec.east);
    Ok(decoder.accepts(&frame, mask).then(|| decoder.walk(&frame, mask)))
}

/// Largest number of free diagonals [`search`] will sweep.
pub const SEARCH_MAX_FREE: usize = 24;

/// Every hamiltonian path from `initial` to `terminal`, by sweeping all east
/// sets in binary-counter order.
pub fn search(board: &Board, initial: Square, terminal: Square) -> Result<Vec<Walk>> {
    let probe = PathSpec::new(initial, terminal, []);
    probe.validate(board)?;
    let free = board.diagonal_count() - 1;
    if free > SEARCH_MAX_FREE {
        return Err(Error::CapExceeded {
            m: board.m(),
            n: board.n(),
            detail: format!("{free} free diagonals > {SEARCH_MAX_FREE}"),
        });
    }
    let tables = Tables::new(*board);
    let mut decoder = Decoder::new(&tables);
    let frame = decoder.frame(initial, terminal);
    let k = frame.terminal_ordinal as usize;
    let mut found = Vec::new();
    for bits in 0..(1u64 << free) {
        let mask = (bits & ((1 << k) - 1)) | (bits >> k) << (k + 1);
        if decoder.accepts(&frame, mask) {
            found.push(decoder.walk(&frame, mask));
        }
    }
    Ok(found)
}

/// The coordinates of a hamiltonian path.
pub fn spec_of(walk: &Walk) -> Result<PathSpec> {
    let east = walk.east_set()?;
    Ok(PathSpec {
        initial: walk.start(),
        terminal: walk.end(),
        east,
    })
}

/// Which enumerator produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Diagonal,
    Dfs,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Diagonal => "diagonal",
            Method::Dfs => "dfs",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diagonal" => Ok(Method::Diagonal),
            "dfs" => Ok(Method::Dfs),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

/// Every hamiltonian path of a board, with derived endpoint sets.
#[derive(Clone, Debug)]
pub struct EnumerationReport {
    pub board: Board,
    pub method: Method,
    /// Sorted by (start, moves), no duplicates.
    pub paths: Vec<Walk>,
    pub endpoint_pairs: BTreeSet<(Square, Square)>,
    pub initial_squares: BTreeSet<Square>,
    pub terminal_squares: BTreeSet<Square>,
    pub elapsed: Duration,
}

impl EnumerationReport {
    pub fn new(board: Board, method: Method, mut paths: Vec<Walk>, elapsed: Duration) -> Self {
        paths.sort();
        paths.dedup();
        let endpoint_pairs: BTreeSet<_> = paths.iter().map(|w| (w.start(), w.end())).collect();
        let initial_squares = endpoint_pairs.iter().map(|&(i, _)| i).collect();
        let terminal_squares = endpoint_pairs.iter().map(|&(_, t)| t).collect();
        EnumerationReport {
            board,
            method,
            paths,
            endpoint_pairs,
            initial_squares,
            terminal_squares,
            elapsed,
        }
    }

    pub fn count(&self) -> usize {
        self.paths.len()
    }

    /// A path whose terminal square steps back to its initial square.
    pub fn cycle_witness(&self) -> Option<&Walk> {
        let b = self.board;
        self.paths.iter().find(|w| {
            let (s, t) = (w.start(), w.end());
            b.step_east(t) == s || b.step_north(t) == s
        })
    }
}

/// Enumerate by diagonal decoding: every candidate terminal diagonal, every
/// terminal square in it, every initial square whose east-predecessor lies
/// in it, every east set.
pub fn enumerate_diagonal(board: &Board) -> Result<EnumerationReport> {
    enumerate_diagonal_with_cap(board, DEFAULT_DIAGONAL_CAP)
}

pub fn enumerate_diagonal_with_cap(board: &Board, max_sum: usize) -> Result<EnumerationReport> {
    if board.m() + board.n() > max_sum || board.diagonal_count() > 63 {
        return Err(Error::CapExceeded {
            m: board.m(),
            n: board.n(),
            detail: format!("m + n = {} > {max_sum}", board.m() + board.n()),
        });
    }
    let started = Instant::now();
    let tables = Tables::new(*board);
    let small = board.m() < 3 || board.n() < 3;
    let partitions: Vec<(usize, Square)> = tables
        .diagonals
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_corner() || small)
        .flat_map(|(k, d)| d.members().iter().map(move |&t| (k, t)))
        .collect();
    let free = board.diagonal_count() - 1;

    let paths: Vec<Walk> = partitions
        .par_iter()
        .map_init(
            || Decoder::new(&tables),
            |decoder, &(k, terminal)| {
                let d = &tables.diagonals[k];
                let mut initials: Vec<Square> = d.members().iter().map(|&s| board.step_east(s)).collect();
                initials.sort();
                initials.dedup();
                let mut found = Vec::new();
                for initial in initials {
                    let frame = decoder.frame(initial, terminal);
                    for bits in 0..(1u64 << free) {
                        let low = bits & ((1 << k) - 1);
                        let mask = low | (bits >> k) << (k + 1);
                        if decoder.accepts(&frame, mask) {
                            found.push(decoder.walk(&frame, mask));
                        }
                    }
                }
                found
            },
        )
        .flatten()
        .collect();
    Ok(EnumerationReport::new(
        *board,
        Method::Diagonal,
        paths,
        started.elapsed(),
    ))
}

/// Enumerate by exhaustive backtracking from every square.
pub fn enumerate_dfs(board: &Board) -> Result<EnumerationReport> {
    enumerate_dfs_with_cap(board, DEFAULT_DFS_CAP)
}

pub fn enumerate_dfs_with_cap(board: &Board, cap: usize) -> Result<EnumerationReport> {
    let area = board.area();
    if area > cap.min(DFS_HARD_LIMIT) {
        return Err(Error::CapExceeded {
            m: board.m(),
            n: board.n(),
            detail: format!("area {area} > {}", cap.min(DFS_HARD_LIMIT)),
        });
    }
    let started = Instant::now();
    let tables = Tables::new(*board);
    let paths: Vec<Walk> = (0..area)
        .into_par_iter()
        .flat_map_iter(|start| {
            let mut search = Backtrack {
                succ: &tables.succ,
                pred: &tables.pred,
                area,
                moves: Vec::with_capacity(area),
                found: Vec::new(),
            };
            search.run(start as u32, 1u128 << start, 1);
            search
                .found
                .into_iter()
                .map(move |moves| Walk::new(*board, board.square_at(start), moves.into()).unwrap())
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(EnumerationReport::new(*board, Method::Dfs, paths, started.elapsed()))
}

struct Backtrack<'a> {
    succ: &'a [Vec<u32>; 2],
    pred: &'a [Vec<u32>; 2],
    area: usize,
    moves: Vec<Move>,
    found: Vec<Vec<Move>>,
}

impl Backtrack<'_> {
    fn run(&mut self, cur: u32, visited: u128, count: usize) {
        if count == self.area {
            self.found.push(self.moves.clone());
            return;
        }
        let seen = |s: u32| visited >> s & 1 == 1;
        for dir in 0..2 {
            let next = self.succ[dir][cur as usize];
            if seen(next) {
                continue;
            }
            // Leaving `cur` by `dir` spends its edge into `other`; `other`
            // stays enterable only through its remaining predecessor.
            let other = self.succ[1 - dir][cur as usize];
            if other != next && !seen(other) {
                let alt = self.pred[dir][other as usize];
                if seen(alt) {
                    continue;
                }
            }
            self.moves.push(Move::ALL[dir]);
            self.run(next, visited | 1 << next, count + 1);
            self.moves.pop();
        }
    }
}

/// Force every outer diagonal to travel `direction` and decode again.
pub fn reroute_outer(board: &Board, walk: &Walk, direction: Move) -> Result<Option<Walk>> {
    let mut spec = spec_of(walk)?;
    let terminal = board.diagonal_of(spec.terminal);
    for d in board.diagonals() {
        if board.classify(&d, &terminal)? == DiagonalClass::Outer {
            match direction {
                Move::E => spec.east.insert(d.id()),
                Move::N => spec.east.remove(&d.id()),
            };
        }
    }
    decode(board, &spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(m: usize, n: usize) -> Board {
        Board::new(m, n).unwrap()
    }

    fn sq(p: usize, q: usize) -> Square {
        Square::new(p, q)
    }

    #[test]
    fn decode_ha_3x3() {
        let board = b(3, 3);
        let spec = PathSpec::new(sq(0, 2), sq(1, 0), []);
        let w = decode(&board, &spec).unwrap().unwrap();
        assert_eq!(w.to_string(), "[(0,2)](NNNNNENN)");
        assert_eq!(spec_of(&w).unwrap(), spec);
    }

    #[test]
    fn corner_start_is_never_initial() {
        let board = b(3, 3);
        // (0,0)E⁻¹ is the corner, so no non-corner terminal is compatible
        for t in board.squares() {
            let spec = PathSpec::new(sq(0, 0), t, []);
            match decode(&board, &spec) {
                Err(Error::InvalidSpec(_)) => {}
                other => panic!("{t}: {other:?}"),
            }
        }
    }

    #[test]
    fn spec_validation() {
        let board = b(4, 3);
        let bad_pair = PathSpec::new(sq(0, 2), sq(0, 0), []);
        assert!(matches!(decode(&board, &bad_pair), Err(Error::InvalidSpec(_))));
        let terminal_in_east = PathSpec::new(sq(0, 2), sq(2, 1), [DiagonalId(1)]);
        assert!(matches!(decode(&board, &terminal_in_east), Err(Error::InvalidSpec(_))));
        let unknown = PathSpec::new(sq(0, 2), sq(2, 1), [DiagonalId(3)]);
        assert!(matches!(decode(&board, &unknown), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn decode_rejects_specs_outside_enumeration() {
        let board = b(4, 3);
        let report = enumerate_dfs(&board).unwrap();
        let found: BTreeSet<PathSpec> = report.paths.iter().map(|w| spec_of(w).unwrap()).collect();
        let mut rejected = 0;
        for d in board.diagonals().into_iter().filter(|d| !d.is_corner()) {
            for &t in d.members() {
                for &s in d.members() {
                    let init = board.step_east(s);
                    for bits in 0..4u32 {
                        let east: Vec<DiagonalId> = board
                            .diagonals()
                            .iter()
                            .map(|x| x.id())
                            .filter(|&id| id != d.id())
                            .enumerate()
                            .filter(|(k, _)| bits >> k & 1 == 1)
                            .map(|(_, id)| id)
                            .collect();
                        let spec = PathSpec::new(init, t, east);
                        let decoded = decode(&board, &spec).unwrap();
                        assert_eq!(decoded.is_some(), found.contains(&spec), "{spec}");
                        rejected += usize::from(decoded.is_none());
                    }
                }
            }
        }
        assert!(rejected > 0);
    }

    #[test]
    fn methods_agree_on_3x3() {
        let board = b(3, 3);
        let dfs = enumerate_dfs(&board).unwrap();
        let diag = enumerate_diagonal(&board).unwrap();
        assert!(dfs.count() > 0);
        assert_eq!(dfs.paths, diag.paths);
        let expect: BTreeSet<Square> = [(0, 1), (0, 2), (1, 0), (2, 0), (2, 1), (1, 1), (1, 2)]
            .into_iter()
            .map(Square::from)
            .collect();
        assert_eq!(diag.initial_squares, expect);
        assert!(diag.paths.iter().all(Walk::is_hamiltonian_path));
    }

    #[test]
    fn small_boards_have_cycles() {
        let report = enumerate_dfs(&b(2, 2)).unwrap();
        assert!(report.count() > 0);
        assert_eq!(report.initial_squares.len(), 4);
        assert!(report.cycle_witness().is_some());
    }

    #[test]
    fn no_cycles_or_corner_starts_from_three() {
        for (m, n) in [(3, 3), (4, 3), (5, 4)] {
            let report = enumerate_dfs(&b(m, n)).unwrap();
            assert!(!report.initial_squares.contains(&sq(0, 0)));
            assert!(report.cycle_witness().is_none());
        }
    }

    #[test]
    fn caps() {
        assert!(matches!(enumerate_dfs(&b(9, 9)), Err(Error::CapExceeded { .. })));
        assert!(enumerate_dfs_with_cap(&b(7, 6), 42).is_ok());
        assert!(matches!(enumerate_diagonal(&b(14, 13)), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn reroute_examples() {
        let board = b(6, 3);
        let report = enumerate_diagonal(&board).unwrap();
        let mut blocked = 0;
        for w in &report.paths {
            let east = reroute_outer(&board, w, Move::E).unwrap().expect("east reroute");
            assert_eq!((east.start(), east.end()), (w.start(), w.end()));
            // S_2 ∪ S_4 is S_{n-1} ∪ S_{m-2}
            let terminal = board.diagonal_of(w.end());
            let key = board.diagonal(DiagonalId(2)).unwrap();
            let outer = board.classify(&key, &terminal).unwrap() == DiagonalClass::Outer;
            let north = reroute_outer(&board, w, Move::N).unwrap();
            assert_eq!(north.is_some(), !outer);
            blocked += usize::from(outer);
            let no_outer = board
                .diagonals()
                .iter()
                .all(|d| board.classify(d, &terminal).unwrap() != DiagonalClass::Outer);
            if no_outer {
                assert_eq!(&east, w);
            }
        }
        assert!(blocked > 0);
    }
}
