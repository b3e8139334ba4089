//! Closed-form endpoint predicates.
//!
//! For `m ≥ n ≥ 3` the initial and terminal squares are described by six
//! clauses each, and the terminal squares reachable from each `(0,q)` and
//! `(p,0)` start by a handful more; inverse closure of the latter gives every
//! admissible endpoint pair. Boards with `n ≤ 2` have their own tables.
//!
//! Clause labels are stable strings such as `init(5)` or `from-p0-large(c)`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::board::{Board, Move, Square};
use crate::error::{Error, Result};

/// A predicate evaluated at one square, with every clause that matched.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EndpointPredicateResult {
    pub square: Square,
    pub clauses: Vec<&'static str>,
    pub holds: bool,
}

impl EndpointPredicateResult {
    fn new(square: Square, clauses: Vec<&'static str>) -> Self {
        let holds = !clauses.is_empty();
        EndpointPredicateResult { square, clauses, holds }
    }
}

/// Half constants as signed integers, so clause bounds can go negative.
#[derive(Clone, Copy)]
struct Half {
    m: i64,
    n: i64,
    mf: i64,
    mfm: i64,
    mfp: i64,
    nf: i64,
    nfm: i64,
    nfp: i64,
}

impl Half {
    fn of(b: &Board) -> Half {
        Half {
            m: b.m() as i64,
            n: b.n() as i64,
            mf: b.mf() as i64,
            mfm: b.mf_minus() as i64,
            mfp: b.mf_plus() as i64,
            nf: b.nf() as i64,
            nfm: b.nf_minus() as i64,
            nfp: b.nf_plus() as i64,
        }
    }
}

fn within(lo: i64, v: i64, hi: i64) -> bool {
    lo <= v && v <= hi
}

fn coords(s: Square) -> (i64, i64) {
    (s.p as i64, s.q as i64)
}

fn require_wide(board: &Board) -> Result<()> {
    if board.n() < 3 || board.m() < board.n() {
        return Err(Error::Precondition(format!("needs m >= n >= 3, got {board}")));
    }
    Ok(())
}

/// Whether some hamiltonian path starts at `s`.
pub fn is_initial_square(board: &Board, s: Square) -> Result<EndpointPredicateResult> {
    require_wide(board)?;
    board.check(s)?;
    let h = Half::of(board);
    let (p, q) = coords(s);
    let clauses = [
        ("init(1)", p == 0 && within(h.nfm, q, h.n - 1)),
        ("init(2)", within(h.nfm, p, h.m - 1) && q == 0),
        ("init(3)", within(h.mfp, p, h.m - 1) && q == h.nf),
        ("init(4)", within(0, p, h.nf) && q == h.nfm),
        ("init(5)", within(h.mf, p, h.m - h.nfp) && within(h.nf + 1, q, h.n - 1)),
        ("init(6)", within(h.nfm, p, h.mfm) && within(0, q, h.nf)),
    ];
    Ok(EndpointPredicateResult::new(s, matched(&clauses)))
}

/// Whether some hamiltonian path ends at `s`.
pub fn is_terminal_square(board: &Board, s: Square) -> Result<EndpointPredicateResult> {
    require_wide(board)?;
    board.check(s)?;
    let h = Half::of(board);
    let (x, y) = coords(s);
    let clauses = [
        ("term(1)", x == h.m - 1 && within(0, y, h.nf)),
        ("term(2)", within(0, x, h.m - h.nfp) && y == h.n - 1),
        ("term(3)", within(0, x, h.mf - 1) && y == h.nfm),
        ("term(4)", within(h.m - h.nf - 1, x, h.m - 1) && y == h.nf),
        ("term(5)", within(h.nfm, x, h.mfm) && within(0, y, h.nfm - 1)),
        ("term(6)", within(h.mf, x, h.m - h.nfp) && within(h.nfm, y, h.n - 1)),
    ];
    Ok(EndpointPredicateResult::new(s, matched(&clauses)))
}

fn matched(clauses: &[(&'static str, bool)]) -> Vec<&'static str> {
    clauses.iter().filter(|c| c.1).map(|c| c.0).collect()
}

/// Initial squares, or terminal squares when `terminal` is set, as predicate
/// results over the whole board in `p`-major order.
pub fn endpoint_map(board: &Board, terminal: bool) -> Result<Vec<EndpointPredicateResult>> {
    board
        .squares()
        .map(|s| {
            if terminal {
                is_terminal_square(board, s)
            } else {
                is_initial_square(board, s)
            }
        })
        .collect()
}

/// Squares where the initial-square predicate holds.
pub fn initial_squares(board: &Board) -> Result<BTreeSet<Square>> {
    Ok(endpoint_map(board, false)?
        .into_iter()
        .filter(|r| r.holds)
        .map(|r| r.square)
        .collect())
}

/// Squares where the terminal-square predicate holds.
pub fn terminal_squares(board: &Board) -> Result<BTreeSet<Square>> {
    Ok(endpoint_map(board, true)?
        .into_iter()
        .filter(|r| r.holds)
        .map(|r| r.square)
        .collect())
}

/// Every square of the form `τ₊E` as `τ₊` ranges over the `S_b` that can
/// carry a terminal diagonal.
pub fn tau_plus_e_form(board: &Board) -> Result<BTreeSet<Square>> {
    if board.m() < board.n() {
        return Err(Error::Precondition(format!("needs m >= n, got {board}")));
    }
    let (m, n) = (board.m(), board.n());
    let mut out: BTreeSet<Square> = (1..n).map(|q| Square::new(0, q)).collect();
    if m != n {
        out.extend(((m + n - 1).div_ceil(2)..m).map(|p| Square::new(p, 0)));
    }
    Ok(out)
}

fn collect(board: &Board, pred: impl Fn(i64, i64) -> bool) -> BTreeSet<Square> {
    board
        .squares()
        .filter(|&s| {
            let (x, y) = coords(s);
            pred(x, y)
        })
        .collect()
}

/// Terminal squares of paths from `(0,q)`, with the clause that admits each.
pub fn endpoints_from_0q_labeled(board: &Board, q: usize) -> Result<Vec<(Square, &'static str)>> {
    require_wide(board)?;
    if q == 0 || q >= board.n() {
        return Err(Error::Precondition(format!("q = {q} outside 1..={}", board.n() - 1)));
    }
    let h = Half::of(board);
    let q = q as i64;
    let one = collect(board, |x, y| x + y == q - 1 && q > h.nfm && within(h.nfm, x, h.mfm));
    let two = collect(board, |x, y| {
        x + y == h.m + h.n - q - 2 && within(h.mf, x, h.m - h.nfp) && q >= h.nfm
    });
    Ok(label(one, "from-0q(1)").chain(label(two, "from-0q(2)")).collect())
}

pub fn endpoints_from_0q(board: &Board, q: usize) -> Result<BTreeSet<Square>> {
    Ok(endpoints_from_0q_labeled(board, q)?.into_iter().map(|e| e.0).collect())
}

/// Terminal squares of paths from `(p,0)`, `1 ≤ p < ⌊(m+n)/2⌋`, in which
/// every inner diagonal travels east.
pub fn endpoints_from_p0_small_labeled(board: &Board, p: usize) -> Result<Vec<(Square, &'static str)>> {
    require_wide(board)?;
    let top = (board.m() + board.n()) / 2 - 1;
    if p == 0 || p > top {
        return Err(Error::Precondition(format!("p = {p} outside 1..={top}")));
    }
    let h = Half::of(board);
    let p = p as i64;
    let one = collect(board, |x, y| x + y == p - 1 && p > h.nfm && y == h.nfm);
    let two = collect(board, |x, y| {
        x + y == h.m + h.n - p - 2 && y == h.nf && within(h.nfm, p, h.n - 1)
    });
    Ok(label(one, "from-p0-small(1)")
        .chain(label(two, "from-p0-small(2)"))
        .collect())
}

pub fn endpoints_from_p0_small(board: &Board, p: usize) -> Result<BTreeSet<Square>> {
    Ok(endpoints_from_p0_small_labeled(board, p)?
        .into_iter()
        .map(|e| e.0)
        .collect())
}

/// Terminal squares of paths from `(p,0)`, `⌊(m+n)/2⌋ ≤ p ≤ m−1`, `m > n`.
pub fn endpoints_from_p0_large_labeled(board: &Board, p: usize) -> Result<Vec<(Square, &'static str)>> {
    require_wide(board)?;
    if board.m() == board.n() {
        return Err(Error::Precondition(format!("needs m > n, got {board}")));
    }
    let bottom = (board.m() + board.n()) / 2;
    if p < bottom || p >= board.m() {
        return Err(Error::Precondition(format!(
            "p = {p} outside {bottom}..={}",
            board.m() - 1
        )));
    }
    let h = Half::of(board);
    let p = p as i64;
    // p = (m+n−1)/2 exactly, which needs m+n odd
    let middle = 2 * p == h.m + h.n - 1;
    let a = collect(board, |x, y| {
        x + y == h.m + h.n - p - 2 && within(h.m - p + h.nfm, x, h.mfm) && !middle
    });
    let b = collect(board, |x, y| x + y == p - 1 && within(h.mf, x, p - h.nfp));
    let c = collect(board, |x, y| x == h.mfm && y == h.nfm && middle);
    Ok(label(a, "from-p0-large(a)")
        .chain(label(b, "from-p0-large(b)"))
        .chain(label(c, "from-p0-large(c)"))
        .collect())
}

pub fn endpoints_from_p0_large(board: &Board, p: usize) -> Result<BTreeSet<Square>> {
    Ok(endpoints_from_p0_large_labeled(board, p)?
        .into_iter()
        .map(|e| e.0)
        .collect())
}

fn label(set: BTreeSet<Square>, tag: &'static str) -> impl Iterator<Item = (Square, &'static str)> {
    set.into_iter().map(move |s| (s, tag))
}

/// Every (initial, terminal) pair joined by a hamiltonian path, `m ≥ n ≥ 3`.
pub fn admissible_pairs(board: &Board) -> Result<BTreeSet<(Square, Square)>> {
    require_wide(board)?;
    let (m, n) = (board.m(), board.n());
    let mut base = BTreeSet::new();
    for q in 1..n {
        for t in endpoints_from_0q(board, q)? {
            base.insert((Square::new(0, q), t));
        }
    }
    for p in 1..(m + n) / 2 {
        for t in endpoints_from_p0_small(board, p)? {
            base.insert((Square::new(p, 0), t));
        }
    }
    if m > n {
        for p in (m + n) / 2..m {
            for t in endpoints_from_p0_large(board, p)? {
                base.insert((Square::new(p, 0), t));
            }
        }
    }
    let inverse: Vec<_> = base
        .iter()
        .map(|&(i, t)| (board.inverse_square(t), board.inverse_square(i)))
        .collect();
    base.extend(inverse);
    Ok(base)
}

/// Endpoint pairs on the `m × 1` board: remove one edge of the `E^m` cycle.
pub fn n1_pairs(m: usize) -> Result<BTreeSet<(Square, Square)>> {
    let board = Board::new(m, 1)?;
    Ok(board.squares().map(|x| (board.step_east(x), x)).collect())
}

/// Rows of the `m × 2` endpoint table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum N2Row {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
}

impl N2Row {
    pub const ALL: [N2Row; 10] = [
        N2Row::A,
        N2Row::B,
        N2Row::C,
        N2Row::D,
        N2Row::E,
        N2Row::F,
        N2Row::G,
        N2Row::H,
        N2Row::I,
        N2Row::J,
    ];

    pub fn tag(self) -> char {
        b"ABCDEFGHIJ"[self as usize] as char
    }

    pub fn from_tag(tag: &str) -> Result<N2Row> {
        let mut chars = tag.trim().chars();
        let c = chars.next().map(|c| c.to_ascii_uppercase());
        let rest = chars.as_str();
        match (c, rest) {
            (Some(c @ 'A'..='J'), "" | "2" | "_2") => Ok(N2Row::ALL[(c as u8 - b'A') as usize]),
            _ => Err(Error::Parse(format!("unknown n=2 row {tag:?}"))),
        }
    }

    /// The endpoint pairs this row contributes on the `m × 2` board.
    pub fn pairs(self, m: usize) -> Result<Vec<(Square, Square)>> {
        let board = Board::new(m, 2)?;
        let sq = Square::new;
        let (mf, mfm, mfp) = (board.mf(), board.mf_minus(), board.mf_plus());
        let pairs = match self {
            N2Row::A => board.squares().map(|s| (s, board.step_inverse(s, Move::E))).collect(),
            N2Row::B => vec![(sq(0, 1), sq(0, 0))],
            N2Row::C if m >= 2 => vec![(sq(1, 0), sq(m - 2, 1))],
            N2Row::D => vec![(sq(m - 1, 1), sq(m - 1, 0))],
            N2Row::E if m >= 3 => vec![(sq(0, 1), sq(m - 2, 1))],
            N2Row::F if m % 2 == 1 && m >= 3 => vec![(sq(1, 0), sq(m - 1, 0))],
            N2Row::G if m >= 4 => vec![(sq(1, 0), sq(m - 1, 0))],
            N2Row::H if m >= 4 => (mfp..=m - 2).map(|p| (sq(p, 1), sq(m - 2 - p, 1))).collect(),
            N2Row::I if m >= 4 => (mfp + 1..m).map(|p| (sq(p, 0), sq(m - p, 0))).collect(),
            N2Row::J if m >= 5 => (2..m)
                .filter(|&p| !([1, mf, mf + 1].contains(&p) && p != mfm))
                .map(|p| (sq(p, 0), sq(p - 2, 1)))
                .collect(),
            _ => Vec::new(),
        };
        Ok(pairs)
    }
}

/// Endpoint pairs on the `m × 2` board, union of all table rows.
pub fn n2_pairs(m: usize) -> Result<BTreeSet<(Square, Square)>> {
    if m < 2 {
        return Err(Error::Precondition(format!("needs m >= 2, got {m}")));
    }
    let mut out = BTreeSet::new();
    for row in N2Row::ALL {
        out.extend(row.pairs(m)?);
    }
    Ok(out)
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

    fn set(v: &[(usize, usize)]) -> BTreeSet<Square> {
        v.iter().map(|&s| Square::from(s)).collect()
    }

    #[test]
    fn initial_examples() {
        let board = b(3, 3);
        assert!(!is_initial_square(&board, sq(0, 0)).unwrap().holds);
        let mid = is_initial_square(&board, sq(1, 1)).unwrap();
        assert!(mid.holds);
        assert_eq!(mid.clauses, vec!["init(4)", "init(6)"]);
        assert!(!is_initial_square(&board, sq(2, 2)).unwrap().holds);
        assert!(matches!(
            is_initial_square(&b(4, 2), sq(0, 0)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn terminal_examples() {
        let board = b(3, 3);
        assert!(!is_terminal_square(&board, sq(0, 0)).unwrap().holds);
        let r = is_terminal_square(&board, sq(2, 0)).unwrap();
        assert!(r.clauses.contains(&"term(1)"));
    }

    #[test]
    fn terminal_is_inverse_of_initial() {
        for m in 3..=12 {
            for n in 3..=m {
                let board = b(m, n);
                for s in board.squares() {
                    let t = is_terminal_square(&board, s).unwrap().holds;
                    let i = is_initial_square(&board, board.inverse_square(s)).unwrap().holds;
                    assert_eq!(t, i, "{board} {s}");
                }
            }
        }
    }

    #[test]
    fn tau_plus_e_examples() {
        assert_eq!(tau_plus_e_form(&b(4, 3)).unwrap(), set(&[(0, 1), (0, 2), (3, 0)]));
        assert_eq!(tau_plus_e_form(&b(3, 3)).unwrap(), set(&[(0, 1), (0, 2)]));
    }

    #[test]
    fn tau_plus_e_matches_sweep() {
        for m in 3..=12 {
            for n in 3..=m {
                let board = b(m, n);
                // every S_b with b ≥ m+n−3−b that is not the corner
                let swept: BTreeSet<Square> = (0..board.max_level())
                    .filter(|&bb| 2 * bb >= m + n - 3)
                    .map(|bb| board.step_east(board.tau_plus(bb).unwrap()))
                    .collect();
                assert_eq!(swept, tau_plus_e_form(&board).unwrap(), "{board}");
            }
        }
    }

    #[test]
    fn from_0q_examples() {
        let board = b(3, 3);
        assert_eq!(endpoints_from_0q(&board, 2).unwrap(), set(&[(1, 0), (1, 1)]));
        assert_eq!(endpoints_from_0q(&board, 1).unwrap(), set(&[(1, 2)]));
        assert!(endpoints_from_0q(&board, 0).is_err());
        assert!(endpoints_from_0q(&board, 3).is_err());
    }

    #[test]
    fn from_p0_small_examples() {
        // x + y = 1 with y = 1 is (0,1)
        assert_eq!(endpoints_from_p0_small(&b(4, 3), 2).unwrap(), set(&[(0, 1), (2, 1)]));
        assert_eq!(endpoints_from_p0_small(&b(5, 3), 1).unwrap(), set(&[(4, 1)]));
        assert!(endpoints_from_p0_small(&b(4, 3), 0).is_err());
    }

    #[test]
    fn from_p0_large_examples() {
        let labeled = endpoints_from_p0_large_labeled(&b(4, 3), 3).unwrap();
        assert_eq!(labeled, vec![(sq(1, 1), "from-p0-large(c)")]);
        // lower bound of (a) is m − p + ⌊(n−1)/2⌋ = 2
        assert_eq!(endpoints_from_p0_large(&b(5, 3), 4).unwrap(), set(&[(2, 0), (2, 1)]));
        assert!(endpoints_from_p0_large(&b(5, 3), 3).is_err());
        assert!(endpoints_from_p0_large(&b(4, 4), 3).is_err());
    }

    #[test]
    fn n1_examples() {
        let pairs = n1_pairs(5).unwrap();
        assert!(pairs.contains(&(sq(4, 0), sq(3, 0))));
        assert!(pairs.contains(&(sq(0, 0), sq(4, 0))));
        assert_eq!(pairs.len(), 5);
        assert_eq!(n1_pairs(1).unwrap(), [(sq(0, 0), sq(0, 0))].into());
    }

    #[test]
    fn n2_rows() {
        assert_eq!(N2Row::A.pairs(3).unwrap()[2], (sq(1, 0), sq(0, 0)));
        assert_eq!(N2Row::B.pairs(4).unwrap(), vec![(sq(0, 1), sq(0, 0))]);
        assert_eq!(N2Row::D.pairs(5).unwrap(), vec![(sq(4, 1), sq(4, 0))]);
        assert!(N2Row::E.pairs(2).unwrap().is_empty());
        assert!(N2Row::F.pairs(4).unwrap().is_empty());
        assert_eq!(N2Row::from_tag("h2").unwrap(), N2Row::H);
        assert_eq!(N2Row::from_tag("J_2").unwrap(), N2Row::J);
        assert!(N2Row::from_tag("K").is_err());
    }
}
