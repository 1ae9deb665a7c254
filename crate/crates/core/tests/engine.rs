mod common;

use common::{hex_bfs, hex_text, random_full_board, ttt_check_all};
use ludeme::engine::{library, GameSpec, Player};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn tictactoe_status_matches_enumeration() {
    let spec = library::game("tictactoe").unwrap();
    let (positions, bad) = ttt_check_all(&spec);
    assert_eq!(positions, 5478);
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(5)]);
}

#[test]
fn full_hex_boards_have_exactly_one_winner() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for side in 2..=7 {
        let spec = GameSpec::from_text(&hex_text(side)).unwrap();
        let board = spec.board();
        for _ in 0..100 {
            let cells = random_full_board(side, &mut rng);
            let oracle = [
                hex_bfs(side, &cells, Player::P1),
                hex_bfs(side, &cells, Player::P2),
            ];
            assert_eq!(oracle.iter().filter(|&&w| w).count(), 1);
            let engine = [
                board.connected(&cells, Player::P1),
                board.connected(&cells, Player::P2),
            ];
            assert_eq!(engine, oracle, "side {side}: {cells:?}");
        }
    }
}

#[test]
fn hex_two_by_two_adjacency() {
    let spec = GameSpec::from_text(&hex_text(2)).unwrap();
    let b = spec.board();
    let cell = |l: &str| b.cell_by_label(l).unwrap();
    let mut a1: Vec<_> = b.neighbors(cell("a1")).to_vec();
    a1.sort();
    let mut expect = vec![cell("a2"), cell("b1")];
    expect.sort();
    assert_eq!(a1, expect);
    let mut a2: Vec<_> = b.neighbors(cell("a2")).to_vec();
    a2.sort();
    let mut expect = vec![cell("a1"), cell("b2"), cell("b1")];
    expect.sort();
    assert_eq!(a2, expect);
}

#[test]
fn interior_degree_histograms() {
    for (text, interior) in [
        (hex_text(7), 6),
        (library::text("gomoku").unwrap().to_string(), 4),
    ] {
        let spec = GameSpec::from_text(&text).unwrap();
        let b = spec.board();
        let n = b.side();
        for cell in 0..b.cell_count() {
            let (r, c) = b.coords(cell);
            let edge = r == 0 || c == 0 || r == n - 1 || c == n - 1;
            if !edge {
                assert_eq!(b.neighbors(cell).len(), interior);
            }
            for &m in b.neighbors(cell) {
                assert_ne!(m, cell);
                assert!(b.neighbors(m).contains(&cell));
            }
        }
    }
}
