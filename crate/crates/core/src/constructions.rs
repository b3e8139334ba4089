//! Explicit hamiltonian path builders.
//!
//! Every builder validates its output before returning it. `H_a` is built
//! from its closed form. `H_b` and the `m × (m−2)` path try their printed
//! block sequences first and otherwise take the unique decoded path with the
//! same endpoints and empty east set; the log records which happened.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::board::{Board, Move, Square};
use crate::characterization::N2Row;
use crate::decoder::{self, PathSpec};
use crate::error::{Error, Result};
use crate::walk::{MoveSeq, Walk};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionKind {
    Ha,
    Hb,
    Exceptional,
    N1,
    N2,
    Canonical,
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstructionKind::Ha => "ha",
            ConstructionKind::Hb => "hb",
            ConstructionKind::Exceptional => "exceptional",
            ConstructionKind::N1 => "n1",
            ConstructionKind::N2 => "n2",
            ConstructionKind::Canonical => "canonical",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LiteralAttempt {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Literal,
    Decoder,
}

/// What a builder did to produce its walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionLog {
    pub kind: ConstructionKind,
    pub board: [usize; 2],
    pub params: BTreeMap<&'static str, String>,
    #[serde(rename = "literalAttempt")]
    pub literal_attempt: LiteralAttempt,
    pub source: Source,
    /// Why the literal sequence was rejected, when it was.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub walk: Walk,
    pub log: ConstructionLog,
}

/// A construction request as accepted by [`construct`].
#[derive(Clone, Debug)]
pub enum ConstructionRequest {
    Ha {
        board: Board,
        a: usize,
    },
    Hb {
        board: Board,
        a: usize,
        b: usize,
    },
    Exceptional {
        m: usize,
    },
    N1 {
        m: usize,
        p: usize,
    },
    N2 {
        m: usize,
        row: N2Row,
        p: Option<usize>,
        q: Option<usize>,
    },
    Canonical {
        board: Board,
        spec: PathSpec,
    },
}

pub fn construct(request: &ConstructionRequest) -> Result<Construction> {
    match request {
        ConstructionRequest::Ha { board, a } => construct_ha(board, *a),
        ConstructionRequest::Hb { board, a, b } => construct_hb(board, *a, *b),
        ConstructionRequest::Exceptional { m } => construct_exceptional(*m),
        ConstructionRequest::N1 { m, p } => construct_n1(*m, *p),
        ConstructionRequest::N2 { m, row, p, q } => construct_n2(*m, *row, *p, *q),
        ConstructionRequest::Canonical { board, spec } => {
            let walk =
                construct_canonical(board, spec)?.ok_or_else(|| Error::ConstructionImpossible(spec.to_string()))?;
            let mut params = BTreeMap::new();
            params.insert("spec", spec.to_string());
            Ok(Construction {
                walk,
                log: log(
                    ConstructionKind::Canonical,
                    board,
                    params,
                    LiteralAttempt::Skipped,
                    Source::Decoder,
                    None,
                ),
            })
        }
    }
}

fn log(
    kind: ConstructionKind,
    board: &Board,
    params: BTreeMap<&'static str, String>,
    literal_attempt: LiteralAttempt,
    source: Source,
    note: Option<String>,
) -> ConstructionLog {
    ConstructionLog {
        kind,
        board: [board.m(), board.n()],
        params,
        literal_attempt,
        source,
        note,
    }
}

fn params<const K: usize>(pairs: [(&'static str, usize); K]) -> BTreeMap<&'static str, String> {
    pairs.into_iter().map(|(k, v)| (k, v.to_string())).collect()
}

fn run(mv: Move, k: i64) -> Result<MoveSeq> {
    MoveSeq::run(mv, k)
}

fn e() -> MoveSeq {
    MoveSeq::atom(Move::E)
}

/// Check a candidate walk: hamiltonian, expected endpoints, and (when asked)
/// an empty east set.
fn check(walk: &Walk, start: Square, end: Square, all_north: bool) -> std::result::Result<(), String> {
    if !walk.is_hamiltonian_path() {
        return Err(format!("{} moves, not hamiltonian", walk.moves().len()));
    }
    if walk.start() != start || walk.end() != end {
        return Err(format!(
            "runs {} -> {}, wanted {start} -> {end}",
            walk.start(),
            walk.end()
        ));
    }
    if all_north {
        match walk.east_set() {
            Ok(east) if east.is_empty() => {}
            Ok(east) => return Err(format!("{} diagonals travel east", east.len())),
            Err(err) => return Err(err.to_string()),
        }
    }
    Ok(())
}

fn require_wide(board: &Board) -> Result<()> {
    if board.n() < 3 || board.m() < board.n() {
        return Err(Error::hypothesis(format!("needs m >= n >= 3, got {board}")));
    }
    Ok(())
}

/// Lower and upper index of the diagonal with lower index `a`.
fn pair(board: &Board, a: usize) -> Result<(usize, usize)> {
    let sum = board.m() + board.n() - 3;
    if 2 * a > sum {
        return Err(Error::hypothesis(format!(
            "a = {a} is not the lower index of a diagonal"
        )));
    }
    Ok((a, sum - a))
}

/// `σ_a = (⌊(m−1)/2⌋, a − ⌊(m−1)/2⌋)`.
pub fn sigma_a(board: &Board, a: usize) -> Option<Square> {
    let p = board.mf_minus();
    let s = Square::new(p, a.checked_sub(p)?);
    board.contains(s).then_some(s)
}

/// `σ_b = (⌊m/2⌋, b − ⌊m/2⌋)`.
pub fn sigma_b(board: &Board, b: usize) -> Option<Square> {
    let p = board.mf();
    let s = Square::new(p, b.checked_sub(p)?);
    board.contains(s).then_some(s)
}

/// Start square `τ₊E` for the diagonal with upper index `b`.
pub fn tau_plus_e(board: &Board, b: usize) -> Result<Square> {
    Ok(board.step_east(board.tau_plus(b)?))
}

/// The all-north path from `τ₊E` to `σ_a`.
pub fn construct_ha(board: &Board, a: usize) -> Result<Construction> {
    require_wide(board)?;
    let (a, b) = pair(board, a)?;
    let m = board.m();
    if !(a <= m - 2 && m - 2 <= b) {
        return Err(Error::hypothesis(format!("needs a <= m-2 <= b, got a={a}, b={b}")));
    }
    let target = sigma_a(board, a).ok_or_else(|| Error::hypothesis(format!("σ_a does not exist for a = {a}")))?;
    let n = board.n() as i64;
    let start = tau_plus_e(board, b)?;
    // odd m ends on the middle column, which is north-periodic with period n
    let tail = if m.is_multiple_of(2) { 2 * n - 1 } else { n - 1 };
    let moves = run(Move::N, 2 * n - 1)?
        .then(e())
        .power(board.mf_minus() as i64)?
        .then(run(Move::N, tail)?);
    let walk = Walk::new(*board, start, moves)?;
    check(&walk, start, target, true)
        .map_err(|why| Error::ConstructionInvalid(format!("H_a on {board}, a={a}: {why}")))?;
    Ok(Construction {
        walk,
        log: log(
            ConstructionKind::Ha,
            board,
            params([("a", a), ("b", b)]),
            LiteralAttempt::Pass,
            Source::Literal,
            None,
        ),
    })
}

fn hb_literal(board: &Board, a: usize, b: usize) -> Result<MoveSeq> {
    let (m, n) = (board.m() as i64, board.n() as i64);
    let (a, b, mf) = (a as i64, b as i64, board.mf() as i64);
    let lead = run(Move::N, 2 * n - 1)?.then(e()).power(b - n + 1)?;
    let block = |i: i64| -> Result<MoveSeq> {
        Ok(MoveSeq::concat([
            run(Move::N, b - a - 1)?,
            e(),
            run(Move::N, 2 * i - 1)?,
            e(),
            run(Move::N, n + a - b - 2 * i + 1)?,
            e(),
        ]))
    };
    if m % 2 == 1 {
        let blocks = MoveSeq::indexed(1..=mf + n - b - 1, block)?;
        Ok(MoveSeq::concat([lead, blocks, run(Move::N, b - a - 1)?]))
    } else {
        let blocks = MoveSeq::indexed(1..=mf + n - b - 2, block)?;
        Ok(MoveSeq::concat([
            lead,
            blocks,
            run(Move::N, b - a - 1)?,
            e(),
            run(Move::N, n + a - b)?,
            e(),
            run(Move::N, b - a - 1)?,
        ]))
    }
}

/// Try a printed sequence, else decode the all-north path with the same
/// endpoints.
fn literal_or_decoded(
    kind: ConstructionKind,
    board: &Board,
    start: Square,
    target: Square,
    literal: Result<MoveSeq>,
    params: BTreeMap<&'static str, String>,
) -> Result<Construction> {
    let rejected = match literal.and_then(|moves| Walk::new(*board, start, moves)) {
        Ok(walk) => match check(&walk, start, target, true) {
            Ok(()) => {
                return Ok(Construction {
                    walk,
                    log: log(kind, board, params, LiteralAttempt::Pass, Source::Literal, None),
                })
            }
            Err(why) => why,
        },
        Err(err) => err.to_string(),
    };
    let spec = PathSpec::new(start, target, []);
    let walk = decoder::decode(board, &spec)?
        .ok_or_else(|| Error::ConstructionImpossible(format!("{kind} on {board}: {spec}")))?;
    check(&walk, start, target, true).map_err(Error::ConstructionInvalid)?;
    Ok(Construction {
        walk,
        log: log(
            kind,
            board,
            params,
            LiteralAttempt::Fail,
            Source::Decoder,
            Some(rejected),
        ),
    })
}

/// The all-north path from `τ₊E` to `σ_b`, `a < b`.
pub fn construct_hb(board: &Board, a: usize, b: usize) -> Result<Construction> {
    require_wide(board)?;
    let (a, expect_b) = pair(board, a)?;
    if b != expect_b {
        return Err(Error::hypothesis(format!(
            "a + b must be m + n - 3 = {}, got a={a}, b={b}",
            board.m() + board.n() - 3
        )));
    }
    if a == b {
        return Err(Error::hypothesis("needs a != b"));
    }
    let m = board.m();
    if !(a <= m - 2 && m - 2 <= b) {
        return Err(Error::hypothesis(format!("needs a <= m-2 <= b, got a={a}, b={b}")));
    }
    let target = sigma_b(board, b).ok_or_else(|| Error::hypothesis(format!("σ_b does not exist for b = {b}")))?;
    let start = tau_plus_e(board, b)?;
    literal_or_decoded(
        ConstructionKind::Hb,
        board,
        start,
        target,
        hb_literal(board, a, b),
        params([("a", a), ("b", b)]),
    )
}

fn exceptional_literal(board: &Board) -> Result<MoveSeq> {
    let n = board.n() as i64;
    let nf = board.nf() as i64;
    let block = |i: i64| -> Result<MoveSeq> {
        Ok(MoveSeq::concat([
            e(),
            run(Move::N, 2 * n + 1 - 2 * i)?,
            run(Move::E, 2)?,
            run(Move::N, 2 * i)?,
        ]))
    };
    if n % 2 == 1 {
        Ok(MoveSeq::indexed(1..=nf - 1, block)?.then(e()).then(run(Move::N, n)?))
    } else {
        MoveSeq::indexed(1..=nf, block)?.drop_last()
    }
}

/// The all-north path on `m × (m−2)` from `(m−2,0)` to
/// `(⌊m/2⌋−1, ⌊(m−1)/2⌋−1)`.
pub fn construct_exceptional(m: usize) -> Result<Construction> {
    if m < 5 {
        return Err(Error::hypothesis(format!("needs m >= 5, got {m}")));
    }
    let board = Board::new(m, m - 2)?;
    let start = Square::new(m - 2, 0);
    let target = Square::new(board.mf() - 1, board.mf_minus() - 1);
    literal_or_decoded(
        ConstructionKind::Exceptional,
        &board,
        start,
        target,
        exceptional_literal(&board),
        params([("m", m)]),
    )
}

/// `[(p,0)](E^{m−1})` on the `m × 1` board.
pub fn construct_n1(m: usize, p: usize) -> Result<Construction> {
    let board = Board::new(m, 1)?;
    let start = board
        .check(Square::new(p, 0))
        .map_err(|_| Error::hypothesis(format!("p = {p} off the {m}x1 board")))?;
    let walk = Walk::new(board, start, run(Move::E, m as i64 - 1)?)?;
    let end = board.step_inverse(start, Move::E);
    check(&walk, start, end, false).map_err(Error::ConstructionInvalid)?;
    Ok(Construction {
        walk,
        log: log(
            ConstructionKind::N1,
            &board,
            params([("m", m), ("p", p)]),
            LiteralAttempt::Pass,
            Source::Literal,
            None,
        ),
    })
}

/// A path on the `m × 2` board realizing one row of the endpoint table.
/// Row A takes `(p,q)`; rows H, I and J take `p`; the rest take nothing.
pub fn construct_n2(m: usize, row: N2Row, p: Option<usize>, q: Option<usize>) -> Result<Construction> {
    let board = Board::new(m, 2)?;
    let candidates = row.pairs(m)?;
    if candidates.is_empty() {
        return Err(Error::hypothesis(format!(
            "row {} does not apply when m = {m}",
            row.tag()
        )));
    }
    let chosen: Vec<_> = candidates
        .iter()
        .filter(|(s, _)| p.is_none_or(|p| s.p == p) && q.is_none_or(|q| s.q == q))
        .collect();
    let &(start, end) = match chosen.as_slice() {
        [one] => *one,
        [] => {
            return Err(Error::hypothesis(format!(
                "row {} has no start matching p={p:?}, q={q:?} when m = {m}",
                row.tag()
            )))
        }
        _ => {
            return Err(Error::hypothesis(format!(
                "row {} needs a start square parameter",
                row.tag()
            )))
        }
    };
    let walk = decoder::search(&board, start, end)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::ConstructionImpossible(format!("row {} on {board}: {start} -> {end}", row.tag())))?;
    check(&walk, start, end, false).map_err(Error::ConstructionInvalid)?;
    let mut params = params([("m", m)]);
    params.insert("row", row.tag().to_string());
    params.insert("start", start.to_string());
    Ok(Construction {
        walk,
        log: log(
            ConstructionKind::N2,
            &board,
            params,
            LiteralAttempt::Skipped,
            Source::Decoder,
            None,
        ),
    })
}

/// Decode a spec; the shared entry point for spec-driven construction.
pub fn construct_canonical(board: &Board, spec: &PathSpec) -> Result<Option<Walk>> {
    decoder::decode(board, spec)
}

/// Terminal squares reachable from `τ₊E` by an all-north path, for the
/// diagonal with lower index `a`.
pub fn all_north_terminals(board: &Board, a: usize) -> Result<Vec<Square>> {
    let (a, b) = pair(board, a)?;
    let start = tau_plus_e(board, b)?;
    let mut members: Vec<Square> = board.subdiagonal(a)?;
    if b != a {
        members.extend(board.subdiagonal(b)?);
    }
    let mut out = Vec::new();
    for t in members {
        if decoder::decode(board, &PathSpec::new(start, t, []))?.is_some() {
            out.push(t);
        }
    }
    out.sort();
    Ok(out)
}

/// The terminal squares an all-north path from `τ₊E` may reach.
pub fn expected_all_north_terminals(board: &Board, a: usize) -> Result<Vec<Square>> {
    let (a, b) = pair(board, a)?;
    let m = board.m();
    if !(a <= m - 2 && m - 2 <= b) {
        return Ok(Vec::new());
    }
    let mut out: Vec<Square> = sigma_a(board, a).into_iter().collect();
    if a != b {
        out.extend(sigma_b(board, b));
    }
    out.retain(|&s| s.level() == a || s.level() == b);
    out.sort();
    out.dedup();
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

    #[test]
    fn ha_examples() {
        let c = construct_ha(&b(4, 3), 1).unwrap();
        assert_eq!(c.walk.to_string(), "[(0,2)](NNNNNENNNNN)");
        assert_eq!(c.walk.end(), sq(1, 0));
        let c = construct_ha(&b(3, 3), 1).unwrap();
        assert_eq!(c.walk.to_string(), "[(0,2)](NNNNNENN)");
        let c = construct_ha(&b(5, 3), 2).unwrap();
        assert_eq!(
            (c.walk.start(), c.walk.end(), c.walk.moves().len()),
            (sq(4, 0), sq(2, 0), 14)
        );
        assert_eq!(c.log.source, Source::Literal);
    }

    #[test]
    fn ha_hypotheses() {
        assert!(matches!(construct_ha(&b(4, 2), 0), Err(Error::HypothesisViolation(_))));
        // a = 0 < ⌊(m−1)/2⌋ on 5×3
        assert!(matches!(construct_ha(&b(5, 3), 0), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn hb_examples() {
        let c = construct_hb(&b(4, 3), 1, 3).unwrap();
        assert_eq!((c.walk.start(), c.walk.end()), (sq(0, 2), sq(2, 1)));
        assert!(c.walk.east_set().unwrap().is_empty());
        let c = construct_hb(&b(5, 3), 2, 3).unwrap();
        assert_eq!((c.walk.start(), c.walk.end()), (sq(4, 0), sq(2, 1)));
        assert_eq!(c.log.literal_attempt, LiteralAttempt::Fail);
        assert_eq!(c.log.source, Source::Decoder);
        assert!(matches!(
            construct_hb(&b(3, 3), 1, 1),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(matches!(
            construct_hb(&b(4, 3), 1, 2),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn exceptional_examples() {
        let c = construct_exceptional(5).unwrap();
        assert_eq!((c.walk.start(), c.walk.end()), (sq(3, 0), sq(1, 1)));
        let c = construct_exceptional(6).unwrap();
        assert_eq!((c.walk.start(), c.walk.end()), (sq(4, 0), sq(2, 1)));
        assert!(matches!(construct_exceptional(4), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn n1_examples() {
        assert_eq!(construct_n1(5, 3).unwrap().walk.end(), sq(2, 0));
        assert_eq!(construct_n1(5, 0).unwrap().walk.end(), sq(4, 0));
        let single = construct_n1(1, 0).unwrap().walk;
        assert!(single.moves().is_empty());
        assert!(single.is_hamiltonian_path());
        assert!(construct_n1(3, 3).is_err());
    }

    #[test]
    fn n2_examples() {
        let c = construct_n2(3, N2Row::A, Some(1), Some(0)).unwrap();
        assert_eq!((c.walk.start(), c.walk.end()), (sq(1, 0), sq(0, 0)));
        let c = construct_n2(4, N2Row::B, None, None).unwrap();
        assert_eq!((c.walk.start(), c.walk.end()), (sq(0, 1), sq(0, 0)));
        let c = construct_n2(5, N2Row::D, None, None).unwrap();
        assert_eq!((c.walk.start(), c.walk.end()), (sq(4, 1), sq(4, 0)));
        assert!(matches!(
            construct_n2(4, N2Row::H, Some(1), None),
            Err(Error::HypothesisViolation(_))
        ));
        assert!(matches!(
            construct_n2(3, N2Row::G, None, None),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn canonical_examples() {
        let board = b(3, 3);
        let w = construct_canonical(&board, &PathSpec::new(sq(0, 2), sq(1, 0), []))
            .unwrap()
            .unwrap();
        assert_eq!(w, construct_ha(&board, 1).unwrap().walk);
        assert!(construct_canonical(&board, &PathSpec::new(sq(0, 0), sq(1, 0), [])).is_err());
    }

    #[test]
    fn log_json() {
        let c = construct_hb(&b(5, 3), 2, 3).unwrap();
        let json = serde_json::to_value(&c.log).unwrap();
        assert_eq!(json["kind"], "hb");
        assert_eq!(json["literalAttempt"], "fail");
        assert_eq!(json["source"], "decoder");
        assert_eq!(json["board"], serde_json::json!([5, 3]));
    }
}
