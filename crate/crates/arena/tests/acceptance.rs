//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;
#[path = "../../core/tests/common/mod.rs"]
mod oracles;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ludeme::agents::{AgentConfig, AgentKind, Budget, Observation, Regime};
use ludeme::engine::{library, GameSpec, Outcome, Player, Status};
use ludeme::grammar::registry::{category, int};
use ludeme::grammar::{
    emit_grammar, parse_str, print, production_count, tokenize, validate, LudemeSignature, Param,
    Registry,
};
use ludeme::pcg::{self, EvalConfig, FilterConfig, GenConstraints, RankConfig, Weights};
use ludeme::rng::derive_seed;
use ludeme_arena::{
    audit, glicko2_update, run_round_robin, Competitor, GameCatalog, GameResult, MatchSettings,
    Rating, RecordStore, RoundRobinConfig, TimeControl,
};
use oracles::{
    hex_bfs, hex_text, random_full_board, random_tree, ttt_check_all, with_unknown_keyword,
    HEX_TEXT,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hex_description() -> Check {
    let tokens = tokenize(HEX_TEXT).map_err(|e| e.to_string())?;
    let tree = parse_str(HEX_TEXT).map_err(|e| e.to_string())?;
    validate(&tree, &Registry::builtin()).map_err(|e| format!("{e:?}"))?;
    let spec = GameSpec::compile(&tree).map_err(|e| e.to_string())?;
    ensure(spec.cell_count() == 121, || {
        format!("{} cells", spec.cell_count())
    })?;
    let n = 11;
    let mut expected: BTreeMap<(Player, Vec<usize>), ()> = BTreeMap::new();
    for cells in [(0..n).collect::<Vec<_>>(), ((n - 1) * n..n * n).collect()] {
        expected.insert((Player::P1, cells), ());
    }
    for cells in [
        (0..n).map(|r| r * n).collect::<Vec<_>>(),
        (0..n).map(|r| r * n + n - 1).collect(),
    ] {
        expected.insert((Player::P2, cells), ());
    }
    let got: BTreeMap<(Player, Vec<usize>), ()> = spec
        .board()
        .regions()
        .iter()
        .map(|r| ((r.owner, r.cells.clone()), ()))
        .collect();
    ensure(got == expected, || "edge regions differ".into())?;
    let again = parse_str(&print(&tree)).map_err(|e| e.to_string())?;
    ensure(again == tree, || "print/parse changed the tree".into())?;
    Ok(format!(
        "{} tokens, 121 cells, 4 regions, round-trip identical",
        tokens.len()
    ))
}

fn grammar_one_to_one() -> Check {
    let registry = Registry::builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..500 {
        let tree = random_tree(&registry, &mut rng);
        validate(&tree, &registry).map_err(|e| format!("conforming tree {i} rejected: {e:?}"))?;
        let bad = with_unknown_keyword(&tree, &registry, &mut rng);
        ensure(validate(&bad, &registry).is_err(), || {
            format!("mutant {i} accepted")
        })?;
    }
    let mut grown = registry.clone();
    let base = production_count(&emit_grammar(&grown));
    let added = [
        LudemeSignature::new("TriBoard", "item", vec![Param::one("side", int(2, None))]),
        LudemeSignature::new("stalemate", "condition", vec![]),
        LudemeSignature::new(
            "score",
            "condition",
            vec![Param::one("who", category("role"))],
        ),
    ];
    for (k, sig) in added.into_iter().enumerate() {
        grown.add(sig).map_err(|e| e.to_string())?;
        let now = production_count(&emit_grammar(&grown));
        ensure(now == base + k + 1, || {
            format!("{now} productions after {} additions to {base}", k + 1)
        })?;
    }
    Ok("500 trees valid, 500 mutants rejected, +1 production per signature".into())
}

fn engine_oracles() -> Check {
    let ttt = library::game("tictactoe").ok_or("no tictactoe")?;
    let (positions, bad) = ttt_check_all(&ttt);
    ensure(positions == 5478, || format!("{positions} positions"))?;
    ensure(bad.is_empty(), || {
        format!("{} disagreements, e.g. {}", bad.len(), bad[0])
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut boards = 0;
    for side in 2..=7 {
        let spec = GameSpec::from_text(&hex_text(side)).map_err(|e| e.to_string())?;
        let count = if side == 7 { 1000 - 5 * 167 } else { 167 };
        for _ in 0..count {
            let cells = random_full_board(side, &mut rng);
            let oracle = [
                hex_bfs(side, &cells, Player::P1),
                hex_bfs(side, &cells, Player::P2),
            ];
            let engine = [
                spec.board().connected(&cells, Player::P1),
                spec.board().connected(&cells, Player::P2),
            ];
            ensure(oracle.iter().filter(|&&w| w).count() == 1, || {
                format!("side {side}: oracle {oracle:?}")
            })?;
            ensure(engine == oracle, || {
                format!("side {side}: engine {engine:?} vs oracle {oracle:?}")
            })?;
            boards += 1;
        }
    }
    Ok(format!(
        "{positions} TTT positions agree; {boards} full Hex boards, one winner each"
    ))
}

fn play(
    spec: &Arc<GameSpec>,
    seats: [AgentConfig; 2],
    budgets: [u64; 2],
) -> Result<Status, String> {
    let mut agents = [
        seats[0].build().map_err(|e| e.to_string())?,
        seats[1].build().map_err(|e| e.to_string())?,
    ];
    let mut state = spec.initial_state();
    loop {
        let status = spec.status(&state);
        if status.is_terminal() {
            return Ok(status);
        }
        let seat = state.mover().index();
        let obs = Observation::for_regime(spec, &state, Regime::ForwardModel)
            .map_err(|e| e.to_string())?;
        let mv = agents[seat]
            .select_move(&obs, &Budget::iterations(budgets[seat]))
            .map_err(|e| e.to_string())?;
        state = spec.apply(&state, mv).map_err(|e| e.to_string())?;
    }
}

fn agent(kind: AgentKind, seed: u64) -> AgentConfig {
    AgentConfig::new(kind).with_seed(seed)
}

fn agent_ordering() -> Check {
    let hex5 = Arc::new(library::game("hex5").ok_or("no hex5")?);
    let mut hex_wins = 0;
    for i in 0..100u64 {
        let uct_seat = (i % 2) as usize;
        let mut seats = [
            agent(AgentKind::Random, derive_seed(1, i)),
            agent(AgentKind::Random, derive_seed(1, i)),
        ];
        seats[uct_seat] = agent(AgentKind::Uct, derive_seed(2, i));
        let mut budgets = [1, 1];
        budgets[uct_seat] = 1000;
        let status = play(&hex5, seats, budgets)?;
        let t = status.terminal().expect("finished");
        if t.outcomes[uct_seat] == Outcome::Win {
            hex_wins += 1;
        }
    }
    ensure(hex_wins >= 90, || {
        format!("UCT(1000) won {hex_wins}/100 on Hex 5")
    })?;

    let ttt = Arc::new(library::game("tictactoe").ok_or("no tictactoe")?);
    let mut losses = 0;
    for i in 0..200u64 {
        let uct_seat = (i % 2) as usize;
        let mut seats = [
            agent(AgentKind::Random, derive_seed(3, i)),
            agent(AgentKind::Random, derive_seed(3, i)),
        ];
        seats[uct_seat] = agent(AgentKind::Uct, derive_seed(4, i));
        let mut budgets = [1, 1];
        budgets[uct_seat] = 10_000;
        let status = play(&ttt, seats, budgets)?;
        if status.terminal().expect("finished").outcomes[uct_seat] == Outcome::Loss {
            losses += 1;
        }
    }
    ensure(losses == 0, || {
        format!("UCT(10000) lost {losses}/200 TTT games")
    })?;

    let status = play(
        &ttt,
        [agent(AgentKind::Uct, 5), agent(AgentKind::Uct, 6)],
        [100_000, 100_000],
    )?;
    let t = status.terminal().expect("finished");
    ensure(t.is_draw(), || format!("self-play ended {:?}", t.outcomes))?;
    Ok(format!(
        "Hex 5 {hex_wins}/100 wins, TTT 0/200 losses, 100k self-play drawn"
    ))
}

fn glicko_vector() -> Check {
    let player = Rating {
        r: 1500.0,
        rd: 200.0,
        sigma: 0.06,
    };
    let games = [
        (1400.0, 30.0, 1.0),
        (1550.0, 100.0, 0.0),
        (1700.0, 300.0, 0.0),
    ];
    let results: Vec<GameResult> = games
        .iter()
        .map(|&(r, rd, s)| GameResult::new(r, rd, s))
        .collect();
    let got = glicko2_update(player, &results, 0.5).map_err(|e| e.to_string())?;
    let (r, rd, sigma) = common::glicko_oracle(1500.0, 200.0, 0.06, 0.5, &games);
    ensure((r - 1464.06).abs() <= 0.01, || format!("oracle r' {r:.4}"))?;
    ensure((rd - 151.52).abs() <= 0.01, || {
        format!("oracle RD' {rd:.4}")
    })?;
    ensure((got.r - 1464.06).abs() <= 0.01, || {
        format!("r' {:.4}", got.r)
    })?;
    ensure((got.rd - 151.52).abs() <= 0.01, || {
        format!("RD' {:.4}", got.rd)
    })?;
    ensure((got.sigma - sigma).abs() < 1e-6, || {
        format!("sigma' {} vs oracle {sigma}", got.sigma)
    })?;
    Ok(format!(
        "r'={:.4} RD'={:.4} sigma'={:.6}",
        got.r, got.rd, got.sigma
    ))
}

fn tournament_integrity() -> Check {
    let mut games = GameCatalog::new();
    for id in ["hex5", "tictactoe", "gomoku"] {
        games.insert(id, library::game(id).ok_or(id)?);
    }
    let competitors = vec![
        Competitor::builtin("random", AgentConfig::new(AgentKind::Random))
            .map_err(|e| e.to_string())?,
        Competitor::builtin(
            "flat-mc",
            AgentConfig::new(AgentKind::FlatMc).with_iterations(300),
        )
        .map_err(|e| e.to_string())?,
        Competitor::builtin("uct", AgentConfig::new(AgentKind::Uct).with_iterations(300))
            .map_err(|e| e.to_string())?,
    ];
    let config = RoundRobinConfig {
        event: "acceptance".into(),
        repeats: 1,
        seed: 99,
        settings: MatchSettings {
            clock: TimeControl::new(600_000, 600_000)?,
            ..MatchSettings::default()
        },
    };
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut bytes = Vec::new();
    let mut last = None;
    for run in 0..2 {
        let path = dir.path().join(format!("run{run}.jsonl"));
        let store = RecordStore::open(&path).map_err(|e| e.to_string())?;
        let t = run_round_robin(&games, &competitors, &config, Some(&store), None)
            .map_err(|e| e.to_string())?;
        bytes.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        last = Some((t, store));
    }
    ensure(bytes[0] == bytes[1], || {
        "the two runs wrote different bytes".into()
    })?;
    let (t, store) = last.expect("ran");

    let mut points: BTreeMap<String, u32> = BTreeMap::new();
    let mut expected_total = 0;
    for r in &t.records {
        let decisive = r.result.contains(&Outcome::Win);
        expected_total += if decisive { 3 } else { 2 };
        for (id, o) in r.agents.iter().zip(&r.result) {
            *points.entry(id.clone()).or_default() += match o {
                Outcome::Win => 3,
                Outcome::Draw => 1,
                Outcome::Loss => 0,
            };
        }
    }
    ensure(t.records.len() == 18, || {
        format!("{} matches", t.records.len())
    })?;
    ensure(t.standings.total_points() == expected_total, || {
        format!(
            "standings total {} vs {expected_total}",
            t.standings.total_points()
        )
    })?;
    for (id, p) in &points {
        let row = t.standings.get(id).ok_or(format!("{id} missing"))?;
        ensure(row.points == *p, || format!("{id}: {} vs {p}", row.points))?;
        ensure(row.played == 12, || format!("{id} played {}", row.played))?;
    }
    let stored = store.records().map_err(|e| e.to_string())?;
    let report = audit(&stored, &games);
    ensure(report.is_clean() && report.checked == 18, || {
        format!("audit: {:?}", report.failures)
    })?;
    Ok(format!(
        "18 matches byte-identical across runs, {expected_total} points conserved, audit clean"
    ))
}

fn needle_in_haystack() -> Check {
    let registry = Registry::builtin();
    let constraints = GenConstraints::requiring(["connect"]);
    let mut survivors = Vec::new();
    for i in 0..1000u64 {
        let seed = derive_seed(31, i);
        let tree = pcg::generate_game(&registry, &constraints, seed).map_err(|e| e.to_string())?;
        ensure(tree.contains_keyword("connect"), || {
            format!("candidate {i} lacks connect")
        })?;
        let verdict = pcg::filter_valid(
            &tree,
            &FilterConfig {
                seed,
                ..Default::default()
            },
        );
        if verdict.valid {
            survivors.push(tree);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (i, tree) in survivors.iter().enumerate() {
        let spec =
            GameSpec::compile(tree).map_err(|e| format!("survivor {i} does not compile: {e}"))?;
        for _ in 0..3 {
            let mut state = spec.initial_state();
            let mut moves = 0;
            while !spec.status(&state).is_terminal() {
                ensure(moves <= spec.cell_count(), || {
                    format!("survivor {i} runs past a full board")
                })?;
                let legal = spec.legal_moves(&state).map_err(|e| e.to_string())?;
                ensure(!legal.is_empty(), || format!("survivor {i} is stuck"))?;
                let mv = legal[rand::Rng::random_range(&mut rng, 0..legal.len())];
                state = spec.apply(&state, mv).map_err(|e| e.to_string())?;
                moves += 1;
            }
        }
    }
    ensure(survivors.len() >= 10, || {
        format!("only {} survivors", survivors.len())
    })?;

    let config = RankConfig {
        playouts: 6,
        eval: EvalConfig {
            uct_iterations: 50,
            depth_games: 6,
            depth_iterations: 50,
            ..EvalConfig::default()
        },
        seed: 17,
        ..RankConfig::default()
    };
    let budget = Duration::from_secs(240);
    let top = |r: &pcg::Ranking| -> Vec<(String, Option<f64>)> {
        r.top().iter().map(|c| (c.text.clone(), c.score)).collect()
    };
    let a = pcg::rank_games(&survivors, budget, &Weights::default(), 10, &config)
        .map_err(|e| e.to_string())?;
    let b = pcg::rank_games(&survivors, budget, &Weights::default(), 10, &config)
        .map_err(|e| e.to_string())?;
    ensure(a.top().len() == 10, || {
        format!("top has {} entries", a.top().len())
    })?;
    ensure(top(&a) == top(&b), || "top-10 differs between runs".into())?;
    Ok(format!(
        "{} of 1000 survive and terminate; {} ranked, top-10 stable (best {:.3})",
        survivors.len(),
        a.ranked.len(),
        a.top()[0].score.unwrap_or(f64::NAN)
    ))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 7] = [
        (
            "hex-description-fidelity",
            Duration::from_secs(1),
            hex_description,
        ),
        (
            "grammar-one-to-one",
            Duration::from_secs(10),
            grammar_one_to_one,
        ),
        (
            "engine-oracle-equivalence",
            Duration::from_secs(60),
            engine_oracles,
        ),
        ("agent-ordering", Duration::from_secs(600), agent_ordering),
        (
            "glicko2-worked-example",
            Duration::from_secs(1),
            glicko_vector,
        ),
        (
            "tournament-integrity",
            Duration::from_secs(900),
            tournament_integrity,
        ),
        (
            "needle-in-a-haystack",
            Duration::from_secs(1800),
            needle_in_haystack,
        ),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (name, limit, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let verdict = match result {
            Ok(detail) if took <= limit => format!(
                "PASS {name} ({:.2}s, limit {}s): {detail}",
                took.as_secs_f64(),
                limit.as_secs()
            ),
            Ok(detail) => format!(
                "FAIL {name} ({:.2}s, over the {}s limit): {detail}",
                took.as_secs_f64(),
                limit.as_secs()
            ),
            Err(why) => format!("FAIL {name} ({:.2}s): {why}", took.as_secs_f64()),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!("{verdict}");
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
