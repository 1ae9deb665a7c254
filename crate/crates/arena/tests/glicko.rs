mod common;

use common::glicko_oracle as oracle;
use ludeme_arena::{glicko2_update, GameResult, Rating};

fn worked_example() -> (Rating, Vec<GameResult>) {
    let player = Rating {
        r: 1500.0,
        rd: 200.0,
        sigma: 0.06,
    };
    let results = vec![
        GameResult::new(1400.0, 30.0, 1.0),
        GameResult::new(1550.0, 100.0, 0.0),
        GameResult::new(1700.0, 300.0, 0.0),
    ];
    (player, results)
}

#[test]
fn worked_example_matches_the_oracle() {
    let (player, results) = worked_example();
    let got = glicko2_update(player, &results, 0.5).unwrap();
    let (r, rd, sigma) = oracle(
        1500.0,
        200.0,
        0.06,
        0.5,
        &[
            (1400.0, 30.0, 1.0),
            (1550.0, 100.0, 0.0),
            (1700.0, 300.0, 0.0),
        ],
    );
    assert!((got.r - r).abs() < 0.01, "{} vs {r}", got.r);
    assert!((got.rd - rd).abs() < 0.01, "{} vs {rd}", got.rd);
    assert!((got.sigma - sigma).abs() < 1e-6);
    assert!((got.r - 1464.06).abs() < 0.01, "{}", got.r);
    assert!((got.rd - 151.52).abs() < 0.01, "{}", got.rd);
}

#[test]
fn oracle_agrees_on_other_periods() {
    let cases: &[(f64, f64, f64, &[(f64, f64, f64)])] = &[
        (1500.0, 350.0, 0.06, &[(1500.0, 350.0, 1.0)]),
        (
            1800.0,
            50.0,
            0.05,
            &[(1200.0, 200.0, 0.0), (1900.0, 80.0, 0.5)],
        ),
        (1300.0, 120.0, 0.09, &[(1600.0, 60.0, 1.0); 5]),
    ];
    for &(r, rd, s, games) in cases {
        let results: Vec<_> = games
            .iter()
            .map(|&(a, b, c)| GameResult::new(a, b, c))
            .collect();
        let got = glicko2_update(Rating { r, rd, sigma: s }, &results, 0.5).unwrap();
        let want = oracle(r, rd, s, 0.5, games);
        assert!(
            (got.r - want.0).abs() < 1e-3
                && (got.rd - want.1).abs() < 1e-3
                && (got.sigma - want.2).abs() < 1e-6
        );
    }
}

#[test]
fn beating_a_stronger_player_never_lowers_the_rating() {
    for me in [1200.0, 1500.0, 1900.0] {
        for gap in [0.0, 50.0, 400.0] {
            for rd in [30.0, 150.0, 350.0] {
                let mine = Rating {
                    r: me,
                    rd,
                    sigma: 0.06,
                };
                let after =
                    glicko2_update(mine, &[GameResult::new(me + gap, 100.0, 1.0)], 0.5).unwrap();
                assert!(after.r >= me);
            }
        }
    }
}

#[test]
fn games_shrink_the_deviation() {
    let (player, results) = worked_example();
    let played = glicko2_update(player, &results, 0.5).unwrap();
    let idle = glicko2_update(player, &[], 0.5).unwrap();
    assert!(played.rd < idle.rd);
    assert!(idle.rd > player.rd);
}
