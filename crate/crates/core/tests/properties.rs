use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use proptest::prelude::*;

use projcb::decoder::{decode, enumerate_dfs, spec_of, EnumerationReport};
use projcb::invariants::{check_path, Violation};
use projcb::reductions::DeltaMap;
use projcb::{report, Board, Move, Square, Walk};

type Cache = Mutex<HashMap<(usize, usize), Arc<EnumerationReport>>>;

/// DFS results shared across cases.
fn paths(m: usize, n: usize) -> Arc<EnumerationReport> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap();
    guard
        .entry((m, n))
        .or_insert_with(|| Arc::new(enumerate_dfs(&Board::new(m, n).unwrap()).unwrap()))
        .clone()
}

/// A board with both sides in `lo..=hi` and area within the DFS default cap.
fn board_dims(lo: usize, hi: usize) -> impl Strategy<Value = (usize, usize)> {
    (lo..=hi, lo..=hi).prop_filter("fits the DFS cap", |(m, n)| m * n <= 30)
}

fn enumerated_path(lo: usize) -> impl Strategy<Value = Walk> {
    path_on(board_dims(lo, 6))
}

fn path_on(dims: impl Strategy<Value = (usize, usize)>) -> impl Strategy<Value = Walk> {
    (dims, any::<prop::sample::Index>()).prop_map(|((m, n), ix)| {
        let r = paths(m, n);
        r.paths[ix.index(r.paths.len())].clone()
    })
}

fn square_on(m: usize, n: usize) -> impl Strategy<Value = Square> {
    (0..m, 0..n).prop_map(|(p, q)| Square::new(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn steps_invert((m, n, s) in (1usize..9, 1usize..9).prop_flat_map(|(m, n)| (Just(m), Just(n), square_on(m, n)))) {
        let b = Board::new(m, n).unwrap();
        for mv in Move::ALL {
            prop_assert_eq!(b.step_inverse(b.step(s, mv), mv), s);
        }
        prop_assert_eq!(b.inverse_square(b.inverse_square(s)), s);
        // inverting turns a step into the reverse step
        prop_assert_eq!(b.inverse_square(b.step_east(s)), b.step_inverse(b.inverse_square(s), Move::E));
    }

    #[test]
    fn squares_share_a_diagonal_with_their_turns((m, n, s) in (3usize..9, 3usize..9).prop_flat_map(|(m, n)| (Just(m), Just(n), square_on(m, n)))) {
        let b = Board::new(m, n).unwrap();
        let ne = b.step_inverse(b.step_north(s), Move::E);
        let en = b.step_inverse(b.step_east(s), Move::N);
        prop_assert_eq!(b.diagonal_id_of(ne), b.diagonal_id_of(s));
        prop_assert_eq!(b.diagonal_id_of(en), b.diagonal_id_of(s));
    }

    #[test]
    fn paths_satisfy_every_invariant(w in enumerated_path(3)) {
        let v: Vec<Violation> = check_path(&w);
        prop_assert!(v.is_empty(), "{}", v[0]);
    }

    #[test]
    fn spec_round_trips(w in enumerated_path(1)) {
        let spec = spec_of(&w).unwrap();
        prop_assert_eq!(decode(&w.board(), &spec).unwrap(), Some(w.clone()));
    }

    #[test]
    fn inverse_paths_are_paths(w in enumerated_path(1)) {
        let inv = w.invert().unwrap();
        let b = w.board();
        prop_assert!(inv.is_hamiltonian_path());
        prop_assert_eq!(inv.start(), b.inverse_square(w.end()));
        prop_assert_eq!(inv.end(), b.inverse_square(w.start()));
        prop_assert_eq!(inv.invert().unwrap(), w.clone());
        let r = paths(b.m(), b.n());
        prop_assert!(r.paths.binary_search(&inv).is_ok());
    }

    #[test]
    fn transposed_paths_are_paths(w in path_on((1usize..=5).prop_map(|k| (k, k)))) {
        let b = w.board();
        let t = w.transpose().unwrap();
        prop_assert!(t.is_hamiltonian_path());
        prop_assert_eq!(t.start(), b.transpose_square(w.start()).unwrap());
    }

    #[test]
    fn random_walks_match_the_oracle((m, n, start, moves) in board_dims(2, 5).prop_flat_map(|(m, n)| {
        let moves = prop::collection::vec(prop_oneof![Just(Move::E), Just(Move::N)], m * n - 1);
        (Just(m), Just(n), square_on(m, n), moves)
    })) {
        let w = Walk::new(Board::new(m, n).unwrap(), start, moves.into()).unwrap();
        let known = paths(m, n).paths.binary_search(&w).is_ok();
        prop_assert_eq!(w.is_hamiltonian_path(), known);
    }

    #[test]
    fn delta_closes_the_gap(i in 0usize..12, gap in 0usize..12, top in 24usize..40) {
        let dm = DeltaMap::new(i, i + gap);
        let kept: Vec<usize> = (0..top).filter(|&k| k != dm.i && k != dm.j).map(|k| k - dm.delta(k)).collect();
        prop_assert_eq!(kept, (0..top - dm.width()).collect::<Vec<_>>());
    }
}

#[test]
fn reports_round_trip_on_every_small_board() {
    for m in 1..=5 {
        for n in 1..=5 {
            let r = paths(m, n);
            let parsed = report::parse_report(&report::write_report(&r, false)).unwrap();
            parsed.verify().unwrap();
            assert_eq!(parsed.paths, r.paths);
        }
    }
}
