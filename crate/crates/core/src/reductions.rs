//! Removing east-traveling rowful diagonals.
//!
//! A rowful diagonal `S_i ∪ S_j` (`n−1 ≤ i ≤ j ≤ m−2`) meets every row, so
//! when it travels east it can be spliced out: every other square keeps its
//! direction and the board loses one column per removed subdiagonal. The
//! [`StretchVerifier`] uses that to relate paths with a given number of
//! east-traveling rowful inner subdiagonals to all-north (or, on square
//! boards, all-east) paths on a narrower board.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::board::{Board, Diagonal, DiagonalClass, DiagonalId, Move, Square};
use crate::decoder::{self, PathSpec};
use crate::error::{Error, Result};
use crate::walk::{TravelMap, Walk};

/// Subdiagonal indices `i ≤ j` of a removed diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DeltaMap {
    pub i: usize,
    pub j: usize,
}

impl DeltaMap {
    pub fn new(i: usize, j: usize) -> DeltaMap {
        DeltaMap {
            i: i.min(j),
            j: i.max(j),
        }
    }

    pub fn of(d: &Diagonal) -> Result<DeltaMap> {
        let (i, j) = d.bounds().ok_or(Error::CornerDiagonal)?;
        Ok(DeltaMap::new(i, j))
    }

    /// Number of removed subdiagonals, 1 or 2.
    pub fn width(&self) -> usize {
        if self.i == self.j {
            1
        } else {
            2
        }
    }

    /// `|{i,j} ∩ {0, …, k−1}|`.
    pub fn delta(&self, k: usize) -> usize {
        if self.i == self.j {
            usize::from(self.i < k)
        } else {
            usize::from(self.i < k) + usize::from(self.j < k)
        }
    }

    /// `(p − Δ(p+q), q)`; undefined on the removed subdiagonals.
    pub fn delta_square(&self, s: Square) -> Result<Square> {
        let level = s.level();
        if level == self.i || level == self.j {
            return Err(Error::Precondition(format!(
                "{s} lies on a removed subdiagonal S_{level}"
            )));
        }
        Ok(Square::new(s.p - self.delta(level), s.q))
    }
}

pub fn delta(dm: &DeltaMap, k: usize) -> usize {
    dm.delta(k)
}

pub fn delta_square(dm: &DeltaMap, s: Square) -> Result<Square> {
    dm.delta_square(s)
}

/// Splice the rowful, east-traveling, non-terminal diagonal `d` out of `w`.
pub fn contract_rowful_east(w: &Walk, d: &Diagonal) -> Result<Walk> {
    let board = w.board();
    let map = w.travel_map()?;
    let dm = DeltaMap::of(d)?;
    if !board.is_rowful(d)? {
        return Err(Error::Precondition(format!("{} is not rowful on {board}", d.id())));
    }
    if board.diagonal_id_of(w.end()) == d.id() {
        return Err(Error::Precondition(format!("{} is the terminal diagonal", d.id())));
    }
    if !map.east_set()?.contains(&d.id()) {
        return Err(Error::Precondition(format!("{} does not travel east", d.id())));
    }
    let small = Board::new(board.m() - dm.width(), board.n())?;
    let mut moves = vec![None; small.area()];
    for s in board.squares() {
        if d.contains(s) {
            continue;
        }
        moves[small.index(dm.delta_square(s)?)] = map.get(s);
    }
    TravelMap::new(small, moves)?.to_walk()
}

/// Insert subdiagonals `i` and `j` as an east-traveling rowful diagonal.
pub fn expand_rowful_east(w: &Walk, i: usize, j: usize) -> Result<Walk> {
    let small = w.board();
    let dm = DeltaMap::new(i, j);
    let board = Board::new(small.m() + dm.width(), small.n())?;
    if dm.i + dm.j + 3 != board.m() + board.n() {
        return Err(Error::Precondition(format!(
            "S_{} ∪ S_{} is not a diagonal of {board}",
            dm.i, dm.j
        )));
    }
    let d = board.diagonal(DiagonalId(dm.i))?;
    if !board.is_rowful(&d)? {
        return Err(Error::Precondition(format!("{} is not rowful on {board}", d.id())));
    }
    let map = w.travel_map()?;
    let mut moves = vec![None; board.area()];
    for s in board.squares() {
        moves[board.index(s)] = if d.contains(s) {
            Some(Move::E)
        } else {
            map.get(dm.delta_square(s)?)
        };
    }
    TravelMap::new(board, moves)?.to_walk()
}

/// Bookkeeping that maps a path onto the narrower board.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StretchParams {
    pub a: usize,
    pub b: usize,
    pub o: usize,
    pub e: usize,
    pub e1: usize,
    pub e2: usize,
    pub m_prime: i64,
    pub a_prime: i64,
    pub b_prime: i64,
    pub p_prime: i64,
    pub x_prime: i64,
}

/// `o = max(a − n + 1, 0)`, `e1`, `e2` by subdiagonal membership, and the
/// primed quantities.
pub fn stretch_params(
    board: &Board,
    a: usize,
    b: usize,
    initial: Square,
    terminal: Square,
    e: usize,
) -> Result<StretchParams> {
    let (m, n) = (board.m(), board.n());
    if m < n {
        return Err(Error::hypothesis(format!("needs m >= n, got {board}")));
    }
    if a > b || a + b + 3 != m + n {
        return Err(Error::hypothesis(format!(
            "S_{a} ∪ S_{b} is not a pair diagonal of {board}"
        )));
    }
    board.check(initial)?;
    board.check(terminal)?;
    let lead = initial.level().checked_sub(1);
    let e1 = match lead {
        Some(l) if l == a => 0,
        Some(l) if l == b => e,
        _ => {
            return Err(Error::hypothesis(format!(
                "{initial} is not one step past S_{a} or S_{b}"
            )))
        }
    };
    let e2 = match terminal.level() {
        l if l == a => 0,
        l if l == b => e,
        _ => return Err(Error::hypothesis(format!("{terminal} is not in S_{a} ∪ S_{b}"))),
    };
    let o = (a + 1).saturating_sub(n);
    let [m, a_, b_, o_, e_] = [m, a, b, o, e].map(|v| v as i64);
    Ok(StretchParams {
        a,
        b,
        o,
        e,
        e1,
        e2,
        m_prime: m - 2 * o_ - e_,
        a_prime: a_ - o_,
        b_prime: b_ - o_ - e_,
        p_prime: initial.p as i64 - o_ - e1 as i64,
        x_prime: terminal.p as i64 - o_ - e2 as i64,
    })
}

/// Number of rowful inner subdiagonals traveling east in `w`.
pub fn rowful_inner_east(w: &Walk) -> Result<usize> {
    let board = w.board();
    let east = w.east_set()?;
    let terminal = board.diagonal_of(w.end());
    let mut count = 0;
    for id in east {
        let d = board.diagonal(id)?;
        if d.is_corner() || board.classify(&d, &terminal)? != DiagonalClass::Inner {
            continue;
        }
        if board.is_rowful(&d)? {
            count += DeltaMap::of(&d)?.width();
        }
    }
    Ok(count)
}

/// Outcome of one stretch check: both sides of the equivalence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StretchCheck {
    /// A path from ι to τ with exactly `e` rowful inner subdiagonals east.
    pub exists: bool,
    pub bound: bool,
    pub parity: bool,
    pub all_north: bool,
    pub all_east: bool,
}

impl StretchCheck {
    pub fn conditions(&self) -> bool {
        self.bound && self.parity && (self.all_north || self.all_east)
    }

    pub fn agrees(&self) -> bool {
        self.exists == self.conditions()
    }
}

type EndpointCounts = BTreeMap<(Square, Square), BTreeSet<usize>>;

/// Stretch checks backed by one enumeration per board.
#[derive(Default)]
pub struct StretchVerifier {
    cache: HashMap<Board, Arc<EndpointCounts>>,
}

impl StretchVerifier {
    pub fn new() -> Self {
        Self::default()
    }

    /// For every endpoint pair, the rowful-inner-east counts that occur.
    pub fn counts(&mut self, board: &Board) -> Result<Arc<EndpointCounts>> {
        if let Some(hit) = self.cache.get(board) {
            return Ok(hit.clone());
        }
        let report = decoder::enumerate_diagonal(board)?;
        let mut counts = EndpointCounts::new();
        for w in &report.paths {
            counts
                .entry((w.start(), w.end()))
                .or_default()
                .insert(rowful_inner_east(w)?);
        }
        let counts = Arc::new(counts);
        self.cache.insert(*board, counts.clone());
        Ok(counts)
    }

    pub fn verify(&mut self, board: &Board, initial: Square, terminal: Square, e: usize) -> Result<StretchCheck> {
        if board.n() < 3 || board.m() < board.n() {
            return Err(Error::hypothesis(format!("needs m >= n >= 3, got {board}")));
        }
        let (a, b) = board
            .diagonal_of(terminal)
            .bounds()
            .ok_or_else(|| Error::hypothesis(format!("{terminal} is the corner")))?;
        let sp = stretch_params(board, a, b, initial, terminal, e)?;
        let exists = self
            .counts(board)?
            .get(&(initial, terminal))
            .is_some_and(|es| es.contains(&e));
        let bound = e <= stretch_bound(board, a, b);
        let parity = (board.m() + board.n()) % 2 == 1 || e.is_multiple_of(2);
        let (all_north, all_east) = narrow_paths(board, &sp, initial, terminal)?;
        Ok(StretchCheck {
            exists,
            bound,
            parity,
            all_north,
            all_east,
        })
    }
}

/// `max(min(m − n, b − a − 1), 0)` without unsigned underflow.
pub fn stretch_bound(board: &Board, a: usize, b: usize) -> usize {
    let lhs = board.m() as i64 - board.n() as i64;
    let rhs = b as i64 - a as i64 - 1;
    lhs.min(rhs).max(0) as usize
}

/// Whether the narrowed endpoints are joined on the `m′ × n` board by an
/// all-north path (`m′ ≥ n`) and by an all-east one (`m′ = n ≥ a + 3`).
fn narrow_paths(board: &Board, sp: &StretchParams, initial: Square, terminal: Square) -> Result<(bool, bool)> {
    let n = board.n() as i64;
    if sp.m_prime < n || sp.p_prime < 0 || sp.x_prime < 0 {
        return Ok((false, false));
    }
    let narrow = Board::new(sp.m_prime as usize, board.n())?;
    let start = Square::new(sp.p_prime as usize, initial.q);
    let end = Square::new(sp.x_prime as usize, terminal.q);
    if !narrow.contains(start) || !narrow.contains(end) {
        return Ok((false, false));
    }
    let try_decode = |east: BTreeSet<DiagonalId>| -> Result<bool> {
        match decoder::decode(
            &narrow,
            &PathSpec {
                initial: start,
                terminal: end,
                east,
            },
        ) {
            Ok(found) => Ok(found.is_some()),
            Err(Error::InvalidSpec(_)) => Ok(false),
            Err(err) => Err(err),
        }
    };
    let all_north = try_decode(BTreeSet::new())?;
    let all_east = if sp.m_prime == n && n >= sp.a as i64 + 3 {
        let terminal_id = narrow.diagonal_id_of(end);
        let east = narrow
            .diagonals()
            .iter()
            .map(Diagonal::id)
            .filter(|&id| id != terminal_id)
            .collect();
        try_decode(east)?
    } else {
        false
    };
    Ok((all_north, all_east))
}

/// Shorthand for a one-off check without keeping the cache.
pub fn verify_stretch(board: &Board, initial: Square, terminal: Square, e: usize) -> Result<StretchCheck> {
    StretchVerifier::new().verify(board, initial, terminal, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::enumerate_dfs;

    fn b(m: usize, n: usize) -> Board {
        Board::new(m, n).unwrap()
    }

    fn sq(p: usize, q: usize) -> Square {
        Square::new(p, q)
    }

    #[test]
    fn delta_examples() {
        let dm = DeltaMap::new(2, 4);
        assert_eq!(delta(&dm, 3), 1);
        assert_eq!(delta(&dm, 0), 0);
        assert_eq!(delta(&dm, 7), 2);
        assert_eq!(delta_square(&dm, sq(3, 2)).unwrap(), sq(1, 2));
        assert_eq!(delta_square(&dm, sq(1, 0)).unwrap(), sq(1, 0));
        assert_eq!(delta_square(&dm, sq(3, 0)).unwrap(), sq(2, 0));
        assert!(delta_square(&dm, sq(2, 2)).is_err());
        assert_eq!(DeltaMap::new(3, 3).delta(9), 1);
    }

    #[test]
    fn delta_square_is_a_bijection() {
        let board = b(8, 3);
        for d in board.diagonals().iter().filter(|d| !d.is_corner()) {
            if !board.is_rowful(d).unwrap() {
                continue;
            }
            let dm = DeltaMap::of(d).unwrap();
            let small = b(8 - dm.width(), 3);
            let image: BTreeSet<Square> = board
                .squares()
                .filter(|&s| !d.contains(s))
                .map(|s| dm.delta_square(s).unwrap())
                .collect();
            assert_eq!(image, small.squares().collect());
        }
    }

    #[test]
    fn contract_self_paired_on_6x3() {
        let board = b(6, 3);
        let d = board.diagonal(DiagonalId(3)).unwrap();
        assert!(board.is_rowful(&d).unwrap());
        let report = enumerate_dfs(&board).unwrap();
        let mut seen = 0;
        for w in &report.paths {
            if board.diagonal_of(w.end()).id() == d.id() || !w.east_set().unwrap().contains(&d.id()) {
                continue;
            }
            let small = contract_rowful_east(w, &d).unwrap();
            assert_eq!(small.board(), b(5, 3));
            assert!(small.is_hamiltonian_path());
            let dm = DeltaMap::of(&d).unwrap();
            let map = w.travel_map().unwrap();
            let small_map = small.travel_map().unwrap();
            for s in board.squares().filter(|&s| !d.contains(s)) {
                assert_eq!(map.get(s), small_map.get(dm.delta_square(s).unwrap()));
            }
            let back = board.step_inverse(w.start(), Move::E);
            if !d.contains(w.start()) {
                assert_eq!(small.start(), b(5, 3).step_east(dm.delta_square(back).unwrap()));
            }
            assert_eq!(&expand_rowful_east(&small, 3, 3).unwrap(), w);
            seen += 1;
        }
        assert!(seen > 0);
    }

    #[test]
    fn expand_from_5x3() {
        let report = enumerate_dfs(&b(5, 3)).unwrap();
        for w in &report.paths {
            let big = expand_rowful_east(w, 3, 3).unwrap();
            assert!(big.is_hamiltonian_path());
            assert!(big.east_set().unwrap().contains(&DiagonalId(3)));
            let d = big.board().diagonal(DiagonalId(3)).unwrap();
            assert_eq!(&contract_rowful_east(&big, &d).unwrap(), w);
        }
        // S_1 ∪ S_4 on 6×3 is not rowful
        assert!(expand_rowful_east(&report.paths[0], 1, 4).is_err());
    }

    #[test]
    fn stretch_param_examples() {
        let sp = stretch_params(&b(8, 3), 2, 6, sq(3, 0), sq(6, 0), 2).unwrap();
        assert_eq!((sp.o, sp.e1, sp.e2, sp.m_prime), (0, 0, 2, 6));
        let sp = stretch_params(&b(8, 3), 2, 6, sq(3, 0), sq(6, 0), 0).unwrap();
        assert_eq!(sp.m_prime, 8);
        let sp = stretch_params(&b(9, 3), 3, 6, sq(4, 0), sq(3, 0), 0).unwrap();
        assert_eq!(sp.o, 1);
        // 2 + 5 is not m + n − 3 on 8×3
        assert!(stretch_params(&b(8, 3), 2, 5, sq(3, 0), sq(5, 0), 2).is_err());
    }

    #[test]
    fn stretch_checks() {
        let mut v = StretchVerifier::new();
        let board = b(6, 4);
        let report = enumerate_dfs(&board).unwrap();
        for w in report.paths.iter().take(40) {
            let e = rowful_inner_east(w).unwrap();
            let check = v.verify(&board, w.start(), w.end(), e).unwrap();
            assert!(check.exists && check.agrees(), "{w}: {check:?}");
        }
        // m + n even: odd e is never realized
        let w = &report.paths[0];
        let check = v.verify(&board, w.start(), w.end(), 1).unwrap();
        assert!(!check.exists && !check.parity && check.agrees());
        let (a, bb) = board.diagonal_of(w.end()).bounds().unwrap();
        let over = stretch_bound(&board, a, bb) + 2;
        let check = v.verify(&board, w.start(), w.end(), over).unwrap();
        assert!(!check.exists && !check.bound && check.agrees());
    }
}
