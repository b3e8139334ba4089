//! The projective checkerboard digraph.
//!
//! Squares are pairs `(p, q)` with `0 <= p < m` (column, eastward) and
//! `0 <= q < n` (row, northward). Every square has two out-edges, east and
//! north; stepping off the east or north edge re-enters on the opposite edge
//! with the other coordinate reflected, which glues the rectangle into a
//! projective plane.
//!
//! The squares are partitioned into *diagonals*: each non-corner diagonal is
//! the union of two anti-diagonals `S_a ∪ S_b` with `a + b = m + n - 3`, and
//! the corner `(m-1, n-1)` forms a diagonal by itself.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single step of a walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    E,
    N,
}

impl Move {
    pub const ALL: [Move; 2] = [Move::E, Move::N];

    /// The move with the roles of east and north exchanged.
    pub fn transpose(self) -> Move {
        match self {
            Move::E => Move::N,
            Move::N => Move::E,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Move::E => 'E',
            Move::N => 'N',
        }
    }

    pub fn from_char(c: char) -> Result<Move> {
        match c {
            'E' => Ok(Move::E),
            'N' => Ok(Move::N),
            other => Err(Error::Parse(format!("unknown move {other:?}"))),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A square `(p, q)`. Serializes as the array `[p, q]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Square {
    pub p: usize,
    pub q: usize,
}

impl Square {
    pub const fn new(p: usize, q: usize) -> Self {
        Square { p, q }
    }

    /// Index of the anti-diagonal `S_{p+q}` containing this square.
    pub fn level(self) -> usize {
        self.p + self.q
    }
}

impl From<[usize; 2]> for Square {
    fn from([p, q]: [usize; 2]) -> Self {
        Square { p, q }
    }
}

impl From<Square> for [usize; 2] {
    fn from(s: Square) -> Self {
        [s.p, s.q]
    }
}

impl From<(usize, usize)> for Square {
    fn from((p, q): (usize, usize)) -> Self {
        Square { p, q }
    }
}

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Canonical identity of a diagonal: its lower anti-diagonal index `a`, or
/// `m + n - 2` for the corner diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiagonalId(pub usize);

impl fmt::Display for DiagonalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagonalKind {
    /// `S_lower ∪ S_upper`, `lower <= upper`, `lower + upper = m + n - 3`.
    Pair { lower: usize, upper: usize },
    /// The single square `(m-1, n-1)`.
    Corner,
}

/// A direction-forcing diagonal together with its members.
///
/// Members are stored in orbit order: `members[k] = start · (N E⁻¹)^k` where
/// `start` is the southeasternmost square of the upper anti-diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonal {
    id: DiagonalId,
    kind: DiagonalKind,
    members: Vec<Square>,
}

impl Diagonal {
    pub fn id(&self) -> DiagonalId {
        self.id
    }

    pub fn kind(&self) -> DiagonalKind {
        self.kind
    }

    pub fn is_corner(&self) -> bool {
        self.kind == DiagonalKind::Corner
    }

    /// `(a, b)` for a pair diagonal.
    pub fn bounds(&self) -> Option<(usize, usize)> {
        match self.kind {
            DiagonalKind::Pair { lower, upper } => Some((lower, upper)),
            DiagonalKind::Corner => None,
        }
    }

    pub fn members(&self) -> &[Square] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: Square) -> bool {
        match self.kind {
            DiagonalKind::Pair { lower, upper } => s.level() == lower || s.level() == upper,
            DiagonalKind::Corner => self.members[0] == s,
        }
    }

    /// Position of `s` in orbit order.
    pub fn position(&self, s: Square) -> Option<usize> {
        self.members.iter().position(|&t| t == s)
    }

    fn require(&self, s: Square) -> Result<usize> {
        self.position(s).ok_or(Error::NotInDiagonal {
            square: s,
            diagonal: self.id,
        })
    }

    /// The unique `u` in `1..=len` with `s = tau · (N E⁻¹)^u`.
    pub fn u_index(&self, tau: Square, s: Square) -> Result<usize> {
        let len = self.len();
        let (t, k) = (self.require(tau)?, self.require(s)?);
        Ok(match (k + len - t) % len {
            0 => len,
            u => u,
        })
    }

    /// The unique `v` in `1..=len` with `s = base · (E N⁻¹)^v`.
    pub fn v_index(&self, base: Square, s: Square) -> Result<usize> {
        let len = self.len();
        let (t, k) = (self.require(base)?, self.require(s)?);
        Ok(match (t + len - k) % len {
            0 => len,
            v => v,
        })
    }
}

/// Position of a non-terminal diagonal relative to the terminal diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagonalClass {
    Terminal,
    Inner,
    Outer,
}

/// An `m × n` projective checkerboard.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Board {
    m: usize,
    n: usize,
}

impl Board {
    /// Largest supported side length.
    pub const MAX_SIDE: usize = 1 << 12;

    pub fn new(m: usize, n: usize) -> Result<Board> {
        if m == 0 || n == 0 || m > Self::MAX_SIDE || n > Self::MAX_SIDE {
            return Err(Error::InvalidBoard { m, n });
        }
        Ok(Board { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// ⌊m/2⌋
    pub fn mf(&self) -> usize {
        self.m / 2
    }

    /// ⌊(m−1)/2⌋
    pub fn mf_minus(&self) -> usize {
        (self.m - 1) / 2
    }

    /// ⌊(m+1)/2⌋ = ⌈m/2⌉
    pub fn mf_plus(&self) -> usize {
        self.m.div_ceil(2)
    }

    /// ⌊n/2⌋
    pub fn nf(&self) -> usize {
        self.n / 2
    }

    /// ⌊(n−1)/2⌋
    pub fn nf_minus(&self) -> usize {
        (self.n - 1) / 2
    }

    /// ⌊(n+1)/2⌋ = ⌈n/2⌉
    pub fn nf_plus(&self) -> usize {
        self.n.div_ceil(2)
    }

    pub fn is_square(&self) -> bool {
        self.m == self.n
    }

    /// Number of squares, `m·n`.
    pub fn area(&self) -> usize {
        self.m * self.n
    }

    pub fn transposed(&self) -> Board {
        Board { m: self.n, n: self.m }
    }

    pub fn contains(&self, s: Square) -> bool {
        s.p < self.m && s.q < self.n
    }

    pub fn check(&self, s: Square) -> Result<Square> {
        if self.contains(s) {
            Ok(s)
        } else {
            Err(Error::OffBoard {
                square: s,
                m: self.m,
                n: self.n,
            })
        }
    }

    /// All squares in `(p, q)` lexicographic order.
    pub fn squares(&self) -> impl Iterator<Item = Square> + '_ {
        (0..self.m).flat_map(move |p| (0..self.n).map(move |q| Square::new(p, q)))
    }

    /// Dense index consistent with the ordering of [`Board::squares`].
    pub fn index(&self, s: Square) -> usize {
        s.p * self.n + s.q
    }

    pub fn square_at(&self, index: usize) -> Square {
        Square::new(index / self.n, index % self.n)
    }

    pub fn corner(&self) -> Square {
        Square::new(self.m - 1, self.n - 1)
    }

    pub fn step_east(&self, s: Square) -> Square {
        if s.p + 1 < self.m {
            Square::new(s.p + 1, s.q)
        } else {
            Square::new(0, self.n - 1 - s.q)
        }
    }

    pub fn step_north(&self, s: Square) -> Square {
        if s.q + 1 < self.n {
            Square::new(s.p, s.q + 1)
        } else {
            Square::new(self.m - 1 - s.p, 0)
        }
    }

    pub fn step(&self, s: Square, mv: Move) -> Square {
        match mv {
            Move::E => self.step_east(s),
            Move::N => self.step_north(s),
        }
    }

    /// The unique square whose `mv`-successor is `s`.
    pub fn step_inverse(&self, s: Square, mv: Move) -> Square {
        match mv {
            Move::E if s.p > 0 => Square::new(s.p - 1, s.q),
            Move::E => Square::new(self.m - 1, self.n - 1 - s.q),
            Move::N if s.q > 0 => Square::new(s.p, s.q - 1),
            Move::N => Square::new(self.m - 1 - s.p, self.n - 1),
        }
    }

    /// 180° rotation, `(m−1−p, n−1−q)`.
    pub fn inverse_square(&self, s: Square) -> Square {
        Square::new(self.m - 1 - s.p, self.n - 1 - s.q)
    }

    pub fn transpose_square(&self, s: Square) -> Result<Square> {
        if !self.is_square() {
            return Err(Error::NotSquareBoard { m: self.m, n: self.n });
        }
        Ok(Square::new(s.q, s.p))
    }

    /// Largest anti-diagonal index, `m + n − 2`.
    pub fn max_level(&self) -> usize {
        self.m + self.n - 2
    }

    /// `m + n − 3`, the common sum of the two anti-diagonal indices of every
    /// pair diagonal. `None` on the 1×1 board, which has only the corner.
    pub fn pair_sum(&self) -> Option<usize> {
        (self.m + self.n).checked_sub(3)
    }

    /// Anti-diagonal `S_i`, southeasternmost square first.
    pub fn subdiagonal(&self, i: usize) -> Result<Vec<Square>> {
        let max = self.max_level();
        if i > max {
            return Err(Error::IndexOutOfRange { index: i, max });
        }
        let lo = i.saturating_sub(self.n - 1);
        let hi = i.min(self.m - 1);
        Ok((lo..=hi).rev().map(|p| Square::new(p, i - p)).collect())
    }

    /// Southeasternmost square of `S_b` (largest `p`).
    pub fn tau_plus(&self, b: usize) -> Result<Square> {
        let max = self.max_level();
        if b > max {
            return Err(Error::IndexOutOfRange { index: b, max });
        }
        let p = b.min(self.m - 1);
        Ok(Square::new(p, b - p))
    }

    /// Number of pair diagonals; their ids are `0..pair_count()`.
    pub fn pair_count(&self) -> usize {
        self.pair_sum().map_or(0, |s| s / 2 + 1)
    }

    /// Number of diagonals including the corner.
    pub fn diagonal_count(&self) -> usize {
        self.pair_count() + 1
    }

    pub fn corner_id(&self) -> DiagonalId {
        DiagonalId(self.max_level())
    }

    /// Dense ordinal of a diagonal: `a` for pairs, `pair_count()` for the corner.
    pub fn ordinal(&self, id: DiagonalId) -> usize {
        if id == self.corner_id() {
            self.pair_count()
        } else {
            id.0
        }
    }

    pub fn id_of_ordinal(&self, ordinal: usize) -> DiagonalId {
        if ordinal == self.pair_count() {
            self.corner_id()
        } else {
            DiagonalId(ordinal)
        }
    }

    pub fn diagonal_id_of(&self, s: Square) -> DiagonalId {
        if s == self.corner() {
            return self.corner_id();
        }
        let sum = self.m + self.n - 3;
        let i = s.level();
        DiagonalId(i.min(sum - i))
    }

    pub fn diagonal_of(&self, s: Square) -> Diagonal {
        self.build_diagonal(self.diagonal_id_of(s))
    }

    pub fn diagonal(&self, id: DiagonalId) -> Result<Diagonal> {
        if id == self.corner_id() || id.0 < self.pair_count() {
            Ok(self.build_diagonal(id))
        } else {
            Err(Error::IndexOutOfRange {
                index: id.0,
                max: self.max_level(),
            })
        }
    }

    /// Every diagonal, pairs by ascending lower index then the corner.
    pub fn diagonals(&self) -> Vec<Diagonal> {
        (0..self.diagonal_count())
            .map(|k| self.build_diagonal(self.id_of_ordinal(k)))
            .collect()
    }

    fn build_diagonal(&self, id: DiagonalId) -> Diagonal {
        if id == self.corner_id() {
            return Diagonal {
                id,
                kind: DiagonalKind::Corner,
                members: vec![self.corner()],
            };
        }
        let lower = id.0;
        let upper = self.m + self.n - 3 - lower;
        let start = self.tau_plus(upper).expect("upper index in range");
        let mut members = vec![start];
        let mut cur = self.step_inverse(self.step_north(start), Move::E);
        while cur != start {
            members.push(cur);
            cur = self.step_inverse(self.step_north(cur), Move::E);
        }
        Diagonal {
            id,
            kind: DiagonalKind::Pair { lower, upper },
            members,
        }
    }

    /// `S_i ∪ S_j` is rowful when `n − 1 <= i <= j <= m − 2`.
    pub fn is_rowful(&self, d: &Diagonal) -> Result<bool> {
        let (a, b) = d.bounds().ok_or(Error::CornerDiagonal)?;
        Ok(self.n - 1 <= a && b + 2 <= self.m)
    }

    /// Classify `d` against the terminal diagonal. The corner diagonal is
    /// always inner.
    pub fn classify(&self, d: &Diagonal, terminal: &Diagonal) -> Result<DiagonalClass> {
        let (ta, _) = terminal.bounds().ok_or(Error::CornerDiagonal)?;
        if d.id() == terminal.id() {
            return Ok(DiagonalClass::Terminal);
        }
        Ok(match d.bounds() {
            None => DiagonalClass::Inner,
            Some((a, _)) if a < ta => DiagonalClass::Outer,
            Some(_) => DiagonalClass::Inner,
        })
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

/// Flat lookup tables for the hot loops of the enumerators.
#[derive(Clone, Debug)]
pub struct Tables {
    pub board: Board,
    /// `succ[0]` east successors, `succ[1]` north successors, by square index.
    pub succ: [Vec<u32>; 2],
    /// `pred[0]` east predecessors, `pred[1]` north predecessors.
    pub pred: [Vec<u32>; 2],
    /// Diagonal ordinal of each square.
    pub ordinal: Vec<u32>,
    /// Orbit position of each square within its diagonal.
    pub position: Vec<u32>,
    pub diagonals: Vec<Diagonal>,
}

impl Tables {
    pub fn new(board: Board) -> Tables {
        let idx = |s: Square| board.index(s) as u32;
        let squares: Vec<Square> = (0..board.area()).map(|i| board.square_at(i)).collect();
        let succ = [Move::E, Move::N].map(|mv| squares.iter().map(|&s| idx(board.step(s, mv))).collect());
        let pred = [Move::E, Move::N].map(|mv| squares.iter().map(|&s| idx(board.step_inverse(s, mv))).collect());
        let diagonals = board.diagonals();
        let mut ordinal = vec![0; board.area()];
        let mut position = vec![0; board.area()];
        for (k, d) in diagonals.iter().enumerate() {
            for (pos, &s) in d.members().iter().enumerate() {
                ordinal[board.index(s)] = k as u32;
                position[board.index(s)] = pos as u32;
            }
        }
        Tables {
            board,
            succ,
            pred,
            ordinal,
            position,
            diagonals,
        }
    }

    pub fn move_index(mv: Move) -> usize {
        match mv {
            Move::E => 0,
            Move::N => 1,
        }
    }
}
