//! Move sequences, walks and travel maps.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::board::{Board, DiagonalId, Move, Square};
use crate::error::{Error, Result};

/// An ordered sequence of moves with the small algebra the path
/// constructions are written in.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoveSeq(Vec<Move>);

impl MoveSeq {
    pub fn new() -> Self {
        MoveSeq(Vec::new())
    }

    pub fn atom(mv: Move) -> Self {
        MoveSeq(vec![mv])
    }

    /// `mv^k`.
    pub fn run(mv: Move, k: i64) -> Result<Self> {
        let k = usize::try_from(k).map_err(|_| Error::NegativeExponent(k))?;
        Ok(MoveSeq(vec![mv; k]))
    }

    /// `k` concatenated copies of `self`.
    pub fn power(&self, k: i64) -> Result<Self> {
        let k = usize::try_from(k).map_err(|_| Error::NegativeExponent(k))?;
        Ok(MoveSeq(self.0.repeat(k)))
    }

    pub fn then(mut self, other: MoveSeq) -> Self {
        self.0.extend(other.0);
        self
    }

    pub fn concat(parts: impl IntoIterator<Item = MoveSeq>) -> Self {
        MoveSeq(parts.into_iter().flat_map(|s| s.0).collect())
    }

    /// `(block(i))` for `i` in `range`, concatenated. A range whose upper end
    /// is below `start - 1` is a negative block count and is rejected.
    pub fn indexed(range: RangeInclusive<i64>, block: impl Fn(i64) -> Result<MoveSeq>) -> Result<Self> {
        let (lo, hi) = range.into_inner();
        let count = hi - lo + 1;
        if count < 0 {
            return Err(Error::NegativeExponent(count));
        }
        let mut out = MoveSeq::new();
        for i in lo..=hi {
            out.0.extend(block(i)?.0);
        }
        Ok(out)
    }

    /// Delete the last term.
    pub fn drop_last(mut self) -> Result<Self> {
        if self.0.pop().is_none() {
            return Err(Error::Precondition(
                "cannot delete the last term of an empty sequence".into(),
            ));
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn moves(&self) -> &[Move] {
        &self.0
    }

    pub fn reversed(&self) -> Self {
        MoveSeq(self.0.iter().rev().copied().collect())
    }

    pub fn transposed(&self) -> Self {
        MoveSeq(self.0.iter().map(|m| m.transpose()).collect())
    }
}

impl From<Vec<Move>> for MoveSeq {
    fn from(v: Vec<Move>) -> Self {
        MoveSeq(v)
    }
}

impl FromStr for MoveSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars().map(Move::from_char).collect::<Result<Vec<_>>>().map(MoveSeq)
    }
}

impl fmt::Display for MoveSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for mv in &self.0 {
            write!(f, "{mv}")?;
        }
        Ok(())
    }
}

/// A start square and a move sequence on a board.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    board: Board,
    start: Square,
    moves: MoveSeq,
}

impl Walk {
    pub fn new(board: Board, start: Square, moves: MoveSeq) -> Result<Walk> {
        board.check(start)?;
        Ok(Walk { board, start, moves })
    }

    pub fn board(&self) -> Board {
        self.board
    }

    pub fn start(&self) -> Square {
        self.start
    }

    pub fn moves(&self) -> &MoveSeq {
        &self.moves
    }

    /// The squares visited, `start` first.
    pub fn realize(&self) -> Vec<Square> {
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        let mut cur = self.start;
        out.push(cur);
        for &mv in self.moves.moves() {
            cur = self.board.step(cur, mv);
            out.push(cur);
        }
        out
    }

    pub fn end(&self) -> Square {
        self.moves
            .moves()
            .iter()
            .fold(self.start, |s, &mv| self.board.step(s, mv))
    }

    pub fn is_hamiltonian_path(&self) -> bool {
        let area = self.board.area();
        if self.moves.len() + 1 != area {
            return false;
        }
        let mut seen = vec![false; area];
        self.realize().into_iter().all(|s| {
            let i = self.board.index(s);
            !std::mem::replace(&mut seen[i], true)
        })
    }

    fn require_hamiltonian(&self) -> Result<()> {
        if self.is_hamiltonian_path() {
            Ok(())
        } else {
            Err(Error::NotHamiltonian)
        }
    }

    /// The reversed path `[inverse(τ)](X_k … X_1)`.
    pub fn invert(&self) -> Result<Walk> {
        self.require_hamiltonian()?;
        Ok(Walk {
            board: self.board,
            start: self.board.inverse_square(self.end()),
            moves: self.moves.reversed(),
        })
    }

    /// Reflect across the main diagonal of a square board.
    pub fn transpose(&self) -> Result<Walk> {
        let start = self.board.transpose_square(self.start)?;
        self.require_hamiltonian()?;
        Ok(Walk {
            board: self.board,
            start,
            moves: self.moves.transposed(),
        })
    }

    pub fn travel_map(&self) -> Result<TravelMap> {
        self.require_hamiltonian()?;
        let mut moves = vec![None; self.board.area()];
        let mut cur = self.start;
        for &mv in self.moves.moves() {
            moves[self.board.index(cur)] = Some(mv);
            cur = self.board.step(cur, mv);
        }
        Ok(TravelMap {
            board: self.board,
            moves,
            terminal: cur,
        })
    }

    /// The non-terminal diagonals that travel east.
    pub fn east_set(&self) -> Result<BTreeSet<DiagonalId>> {
        self.travel_map()?.east_set()
    }

    pub fn to_record(&self) -> PathRecord {
        PathRecord {
            m: self.board.m(),
            n: self.board.n(),
            start: self.start,
            moves: self.moves.to_string(),
        }
    }

    pub fn from_record(record: &PathRecord) -> Result<Walk> {
        let board = Board::new(record.m, record.n)?;
        Walk::new(board, record.start, record.moves.parse()?)
    }

    /// One-line JSON in the shared path schema.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("path record serializes")
    }

    pub fn from_json(s: &str) -> Result<Walk> {
        let record: PathRecord = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Walk::from_record(&record)
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]({})", self.start, self.moves)
    }
}

/// Serialized form of a walk: `{"m", "n", "start": [p, q], "moves": "EN…"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRecord {
    pub m: usize,
    pub n: usize,
    pub start: Square,
    pub moves: String,
}

/// The move taken out of every square but the terminal one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TravelMap {
    board: Board,
    moves: Vec<Option<Move>>,
    terminal: Square,
}

impl TravelMap {
    /// Build from explicit per-square moves; `moves` is indexed by
    /// [`Board::index`]. Fails unless exactly the terminal square is unset and
    /// no square is entered twice.
    pub fn new(board: Board, moves: Vec<Option<Move>>) -> Result<TravelMap> {
        if moves.len() != board.area() {
            return Err(Error::Precondition("travel map length differs from board area".into()));
        }
        let unset: Vec<usize> = (0..moves.len()).filter(|&i| moves[i].is_none()).collect();
        let [terminal] = unset[..] else {
            return Err(Error::Precondition(format!(
                "travel map must leave exactly one square unset, found {}",
                unset.len()
            )));
        };
        let map = TravelMap {
            board,
            moves,
            terminal: board.square_at(terminal),
        };
        let mut hit = vec![false; board.area()];
        for s in board.squares() {
            if let Some(t) = map.successor(s) {
                if std::mem::replace(&mut hit[board.index(t)], true) {
                    return Err(Error::Precondition(format!("square {t} is entered twice")));
                }
            }
        }
        Ok(map)
    }

    pub fn board(&self) -> Board {
        self.board
    }

    pub fn terminal(&self) -> Square {
        self.terminal
    }

    pub fn get(&self, s: Square) -> Option<Move> {
        self.moves[self.board.index(s)]
    }

    pub fn len(&self) -> usize {
        self.moves.iter().filter(|m| m.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn successor(&self, s: Square) -> Option<Square> {
        self.get(s).map(|mv| self.board.step(s, mv))
    }

    /// The square nothing travels into.
    pub fn start(&self) -> Square {
        let mut hit = vec![false; self.board.area()];
        for s in self.board.squares() {
            if let Some(t) = self.successor(s) {
                hit[self.board.index(t)] = true;
            }
        }
        let i = hit.iter().position(|h| !h).expect("injective map misses one square");
        self.board.square_at(i)
    }

    /// Follow the map from its start; fails if it closes a cycle before
    /// covering the board.
    pub fn to_walk(&self) -> Result<Walk> {
        let start = self.start();
        let mut moves = Vec::with_capacity(self.board.area());
        let mut cur = start;
        while let Some(mv) = self.get(cur) {
            if moves.len() >= self.board.area() {
                return Err(Error::NotHamiltonian);
            }
            moves.push(mv);
            cur = self.board.step(cur, mv);
        }
        let walk = Walk::new(self.board, start, MoveSeq(moves))?;
        walk.require_hamiltonian()?;
        Ok(walk)
    }

    /// Diagonal-uniform directions: the non-terminal diagonals whose
    /// squares all travel east. Mixed diagonals are an error.
    pub fn east_set(&self) -> Result<BTreeSet<DiagonalId>> {
        let terminal = self.board.diagonal_id_of(self.terminal);
        let mut east = BTreeSet::new();
        for d in self.board.diagonals() {
            if d.id() == terminal {
                continue;
            }
            let mut dirs = d.members().iter().map(|&s| self.get(s));
            let first = dirs.next().flatten();
            if dirs.any(|m| m != first) {
                return Err(Error::MixedDiagonal(d.id()));
            }
            if first == Some(Move::E) {
                east.insert(d.id());
            }
        }
        Ok(east)
    }
}
