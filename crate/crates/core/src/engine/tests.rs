use super::library;
use super::*;

fn moves(spec: &GameSpec, labels: &[&str]) -> GameState {
    labels.iter().fold(spec.initial_state(), |s, l| {
        spec.apply(&s, spec.parse_move(l).unwrap()).unwrap()
    })
}

fn hex2() -> GameSpec {
    let text = library::text("hex")
        .unwrap()
        .replace("(HexBoard 11)", "(HexBoard 2)");
    GameSpec::from_text(&text).unwrap()
}

fn labels(spec: &GameSpec, cells: &[CellId]) -> Vec<String> {
    cells
        .iter()
        .map(|&c| spec.board().label(c).to_string())
        .collect()
}

#[test]
fn every_library_game_compiles() {
    for (id, _) in library::GAMES {
        assert!(library::game(id).is_some(), "{id}");
    }
}

#[test]
fn compile_hex() {
    let spec = library::game("hex").unwrap();
    assert_eq!(spec.name(), "Hex");
    assert_eq!(spec.players(), 2);
    assert_eq!(spec.cell_count(), 121);
    assert_eq!(spec.end_rules().len(), 1);
    let regions = spec.board().regions();
    assert_eq!(regions.len(), 4);
    let row = |r: usize| {
        (0..11)
            .map(|c| format!("{}{}", column_name(c), r))
            .collect::<Vec<_>>()
    };
    let col = |c: &str| (1..=11).map(|r| format!("{c}{r}")).collect::<Vec<_>>();
    assert_eq!(
        (regions[0].owner, regions[0].edge),
        (Player::P1, Direction::NE)
    );
    assert_eq!(labels(&spec, &regions[0].cells), row(11));
    assert_eq!(labels(&spec, &regions[1].cells), row(1));
    assert_eq!(
        (regions[2].owner, regions[2].edge),
        (Player::P2, Direction::NW)
    );
    assert_eq!(labels(&spec, &regions[2].cells), col("a"));
    assert_eq!(labels(&spec, &regions[3].cells), col("k"));
    assert_eq!(spec.category(), "connection");
}

#[test]
fn compile_tictactoe() {
    let spec = library::game("tictactoe").unwrap();
    assert_eq!(spec.cell_count(), 9);
    assert_eq!(spec.end_rules().len(), 2);
    assert_eq!(spec.category(), "line");
}

#[test]
fn connect_without_regions() {
    let text = library::text("hex")
        .unwrap()
        .replace("(region P2 (edge NW)) (region P2 (edge SE))", "");
    let err = GameSpec::from_text(&text).unwrap_err();
    assert_eq!(
        err,
        LoadError::Compile(CompileError::ConnectNeedsRegions(Player::P2))
    );
    assert_eq!(
        err.to_string(),
        "connect requires two regions for player P2"
    );
}

#[test]
fn other_compile_errors() {
    let hex = library::text("hex").unwrap();
    let two_boards = hex.replace("(HexBoard 11)", "(HexBoard 11) (SquareBoard 3)");
    assert_eq!(
        GameSpec::from_text(&two_boards).unwrap_err(),
        LoadError::Compile(CompileError::BoardCount(2))
    );
    let no_pieces = hex.replace("(ball Each)", "(ball P1)");
    assert_eq!(
        GameSpec::from_text(&no_pieces).unwrap_err(),
        LoadError::Compile(CompileError::NoPieces(Player::P2))
    );
    let mover_region = hex.replace("(region P1 (edge NE))", "(region mover (edge NE))");
    assert!(matches!(
        GameSpec::from_text(&mover_region).unwrap_err(),
        LoadError::Compile(CompileError::RegionOwner(_))
    ));
    let everyone_wins = hex.replace("(result (mover) Win)", "(result Each Win)");
    assert!(matches!(
        GameSpec::from_text(&everyone_wins).unwrap_err(),
        LoadError::Compile(CompileError::Unsupported { what: "result", .. })
    ));
    assert!(matches!(
        GameSpec::from_text(&hex.replace("HexBoard", "HexBored")).unwrap_err(),
        LoadError::Invalid(_)
    ));
}

#[test]
fn initial_states() {
    let hex = library::game("hex").unwrap();
    let s = hex.initial_state();
    assert_eq!(s.cells().len(), 121);
    assert!(s.cells().iter().all(Option::is_none));
    assert_eq!(s.mover(), Player::P1);
    assert_eq!(hex.status(&s), Status::Ongoing);

    let puzzle = library::game("no-three").unwrap();
    let s = moves(&puzzle, &["a1", "c1", "a3"]);
    assert_eq!(s.mover(), Player::P1);
    assert_eq!(s.move_count(), 3);
}

#[test]
fn legal_moves_shrink() {
    let ttt = library::game("tictactoe").unwrap();
    assert_eq!(ttt.legal_moves(&ttt.initial_state()).unwrap().len(), 9);
    let hex = library::game("hex").unwrap();
    let s = moves(&hex, &["f6"]);
    let legal = hex.legal_moves(&s).unwrap();
    assert_eq!(legal.len(), 120);
    assert!(legal.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn legal_moves_on_full_board() {
    let ttt = library::game("tictactoe").unwrap();
    // X O X / X O O / O X X: no line, board full.
    let s = moves(
        &ttt,
        &["a1", "b1", "c1", "b2", "a2", "c2", "b3", "a3", "c3"],
    );
    let status = ttt.status(&s);
    let t = status.terminal().unwrap();
    assert!(t.is_draw());
    assert_eq!(t.rule, Some(1));
    assert_eq!(ttt.legal_moves(&s), Err(MoveError::GameOver));
}

#[test]
fn hex2_connect() {
    let spec = hex2();
    let s = moves(&spec, &["a1", "b1", "a2"]);
    let t = spec.status(&s).terminal().cloned().unwrap();
    assert_eq!(t.winner(), Some(Player::P1));
    assert_eq!(t.outcomes, vec![Outcome::Win, Outcome::Loss]);
    assert_eq!(t.rule, Some(0));
}

#[test]
fn tictactoe_row() {
    let spec = library::game("tictactoe").unwrap();
    let s = moves(&spec, &["a1", "a2", "b1", "b2", "c1"]);
    let t = spec.status(&s).terminal().cloned().unwrap();
    assert_eq!(t.winner(), Some(Player::P1));
    assert_eq!(t.rule, Some(0));
}

#[test]
fn illegal_moves() {
    let spec = library::game("tictactoe").unwrap();
    let s = moves(&spec, &["a1"]);
    assert_eq!(
        spec.apply(&s, Move(0)),
        Err(MoveError::Occupied("a1".into()))
    );
    assert_eq!(
        spec.apply(&s, Move(9)),
        Err(MoveError::OutOfRange { cell: 9, cells: 9 })
    );
    assert_eq!(
        spec.parse_move("z9"),
        Err(MoveError::UnknownLabel("z9".into()))
    );
    let done = moves(&spec, &["a1", "a2", "b1", "b2", "c1"]);
    assert_eq!(spec.apply(&done, Move(8)), Err(MoveError::GameOver));
}

#[test]
fn apply_leaves_input_untouched() {
    let spec = library::game("hex5").unwrap();
    let s = moves(&spec, &["c3", "b2"]);
    let before = s.clone();
    let _ = spec.apply(&s, Move(0)).unwrap();
    assert_eq!(s, before);
}

#[test]
fn puzzle_outcomes() {
    let spec = library::game("no-three").unwrap();
    let s = moves(&spec, &["a1", "b1", "c1"]);
    let t = spec.status(&s).terminal().cloned().unwrap();
    assert_eq!(t.outcomes, vec![Outcome::Loss]);
}

#[test]
fn fallback_draw_when_no_rule_fires() {
    // Only a line of 4 can end this game, which 3x3 never allows.
    let text = library::text("tictactoe")
        .unwrap()
        .replace("(line 3", "(line 4")
        .replace("(end (full) (result Each Draw))", "");
    let spec = GameSpec::from_text(&text).unwrap();
    let s = moves(
        &spec,
        &["a1", "b1", "c1", "b2", "a2", "c2", "b3", "a3", "c3"],
    );
    assert_eq!(
        spec.status(&s),
        Status::Over(Terminal {
            outcomes: vec![Outcome::Draw; 2],
            rule: None
        })
    );
}

#[test]
fn hex5_random_playouts_end_in_a_win() {
    let spec = library::game("hex5").unwrap();
    for seed in 0..200 {
        let t = playout(&spec, &spec.initial_state(), &mut UniformRandom, seed, 100);
        assert!(t.moves.len() <= 25);
        match t.end {
            PlayoutEnd::Terminal(term) => assert!(term.winner().is_some()),
            PlayoutEnd::MoveCap => panic!("cap reached"),
        }
    }
}

#[test]
fn tictactoe_playouts() {
    let spec = library::game("tictactoe").unwrap();
    for seed in 0..100 {
        let t = playout(&spec, &spec.initial_state(), &mut UniformRandom, seed, 100);
        assert!(t.moves.len() <= 9);
        assert!(matches!(t.end, PlayoutEnd::Terminal(_)));
    }
    let a = playout(&spec, &spec.initial_state(), &mut UniformRandom, 42, 100);
    let b = playout(&spec, &spec.initial_state(), &mut UniformRandom, 42, 100);
    assert_eq!(a, b);
}

#[test]
fn cap_is_reported_apart() {
    let spec = library::game("gomoku").unwrap();
    let t = playout(&spec, &spec.initial_state(), &mut UniformRandom, 1, 3);
    assert_eq!(t.moves.len(), 3);
    assert_eq!(t.end, PlayoutEnd::MoveCap);
}

#[test]
fn incremental_status_matches_full_scan() {
    for id in ["hex5", "tictactoe", "no-three", "gomoku"] {
        let spec = library::game(id).unwrap();
        for seed in 0..30 {
            let t = playout(&spec, &spec.initial_state(), &mut UniformRandom, seed, 400);
            let mut state = spec.initial_state();
            for (i, mv) in t.moves.iter().enumerate() {
                let fast = spec.advance(&mut state, *mv);
                assert_eq!(fast, spec.status(&state), "{id} seed {seed} ply {i}");
            }
        }
    }
}
