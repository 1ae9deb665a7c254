use std::sync::Mutex;

use ludeme::agents::AgentConfig;
use ludeme::engine::Outcome;
use ludeme_arena::{
    audit, league_fixtures, round_robin_schedule, run_elimination, run_league, run_round_robin,
    Competitor, EliminationConfig, EventKind, GameCatalog, League, LeagueConfig, LiveEvent,
    MatchObserver, MatchRecord, RecordStore, RoundRobinConfig, Standings, Termination,
};

fn agent(id: &str, spec: &str) -> Competitor {
    Competitor::builtin(id, spec.parse::<AgentConfig>().unwrap()).unwrap()
}

fn games(ids: &[&str]) -> GameCatalog {
    let lib = GameCatalog::library();
    let mut c = GameCatalog::new();
    for id in ids {
        c.insert_shared(id, lib.get(id).unwrap().clone());
    }
    c
}

fn conserved(standings: &Standings, records: &[MatchRecord]) {
    let two: Vec<_> = records.iter().filter(|r| r.result.len() == 2).collect();
    let drawn = two.iter().filter(|r| r.is_draw()).count() as u32;
    let decisive = two.len() as u32 - drawn;
    assert_eq!(standings.total_points(), 3 * decisive + 2 * drawn);
}

#[test]
fn three_points_for_a_win() {
    let mut r = MatchRecord {
        match_id: "x".into(),
        game_id: "tictactoe".into(),
        agents: vec!["A".into(), "B".into()],
        regime: ludeme::agents::Regime::ForwardModel,
        moves: vec![],
        result: vec![Outcome::Win, Outcome::Loss],
        rule: None,
        seed: 0,
        violations: vec![0, 0],
        started_at: 0,
        ended_at: 0,
        termination: Termination::Normal,
        agent_versions: vec![String::new(), String::new()],
        event: "t".into(),
        round: None,
    };
    let mut s = Standings::default();
    s.add(&r);
    r.agents = vec!["B".into(), "C".into()];
    r.result = vec![Outcome::Draw, Outcome::Draw];
    s.add(&r);
    r.agents = vec!["C".into(), "A".into()];
    r.result = vec![Outcome::Loss, Outcome::Win];
    s.add(&r);
    let points: Vec<_> = ["A", "B", "C"]
        .iter()
        .map(|id| s.get(id).unwrap().points)
        .collect();
    assert_eq!(points, [6, 1, 1]);
}

#[test]
fn schedule_covers_pairs_colors_and_repeats() {
    let comps = [
        agent("a", "random"),
        agent("b", "random"),
        agent("c", "random"),
    ];
    let config = RoundRobinConfig {
        repeats: 2,
        ..Default::default()
    };
    let s = round_robin_schedule(&games(&["hex5", "tictactoe"]), &comps, &config);
    assert_eq!(s.len(), 2 * 3 * 2 * 2);
    let ab = s
        .iter()
        .filter(|m| m.game_id == "hex5" && m.seats[0].id == "a" && m.seats[1].id == "b")
        .count();
    assert_eq!(ab, 2);
}

#[test]
fn round_robin_is_reproducible_and_audited() {
    let comps = [
        agent("random", "random"),
        agent("mc", "flat-mc?iters=20"),
        agent("uct", "uct?iters=20"),
    ];
    let catalog = games(&["hex5", "tictactoe"]);
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let store = RecordStore::open(dir.path().join(name)).unwrap();
        let config = RoundRobinConfig {
            seed: 42,
            ..Default::default()
        };
        let t = run_round_robin(&catalog, &comps, &config, Some(&store), None).unwrap();
        (t, std::fs::read(store.path()).unwrap())
    };
    let (t, bytes) = run("a.jsonl");
    let (_, again) = run("b.jsonl");
    assert_eq!(bytes, again);
    assert_eq!(t.records.len(), 12);
    conserved(&t.standings, &t.records);
    let report = audit(&t.records, &catalog);
    assert!(report.is_clean(), "{:?}", report.failures);
}

#[test]
fn all_draws_give_one_point_per_game() {
    let comps: Vec<_> = ["a", "b", "c", "d"]
        .iter()
        .map(|id| agent(id, "random"))
        .collect();
    let schedule =
        round_robin_schedule(&games(&["tictactoe"]), &comps, &RoundRobinConfig::default());
    let mut s = Standings::default();
    for m in &schedule {
        s.add(&MatchRecord {
            match_id: m.match_id.clone(),
            game_id: m.game_id.clone(),
            agents: m.seats.iter().map(|c| c.id.clone()).collect(),
            regime: m.regime,
            moves: vec![],
            result: vec![Outcome::Draw; 2],
            rule: None,
            seed: m.seed,
            violations: vec![0, 0],
            started_at: 0,
            ended_at: 0,
            termination: Termination::MoveCap,
            agent_versions: vec![String::new(); 2],
            event: m.event.clone(),
            round: None,
        });
    }
    // One game per color against each of the n - 1 others.
    for c in &comps {
        assert_eq!(s.get(&c.id).unwrap().points, 2 * 3);
    }
    assert_eq!(s.total_points(), 2 * schedule.len() as u32);
}

#[test]
fn eight_entrants_need_three_rounds() {
    let comps: Vec<_> = (0..8)
        .map(|i| agent(&format!("r{i}"), &format!("random?seed={i}")))
        .collect();
    let config = EliminationConfig {
        seed: 3,
        ..Default::default()
    };
    let result =
        run_elimination(&games(&["tictactoe", "hex5"]), &comps, &config, None, None).unwrap();
    assert_eq!(result.bracket.rounds.len(), 3);
    assert_eq!(result.bracket.pairings(), 7);
    assert!(result.qualifier.is_none());
    for round in &result.bracket.rounds {
        for m in round {
            assert_eq!(m.games.len(), 3);
            assert!(m.wins[0] + m.wins[1] <= 3);
        }
    }
    assert!(comps.iter().any(|c| c.id == result.champion));
    assert_eq!(result.bracket.rounds[2][0].winner, result.champion);
    assert!(audit(&result.records, &GameCatalog::library()).is_clean());
}

#[test]
fn best_of_three_goes_to_the_majority() {
    let comps = [agent("strong", "uct?iters=300"), agent("weak", "random")];
    let catalog = games(&["hex5"]);
    let result =
        run_elimination(&catalog, &comps, &EliminationConfig::default(), None, None).unwrap();
    let m = &result.bracket.rounds[0][0];
    let majority = if m.wins[0] > m.wins[1] {
        &m.a
    } else {
        m.b.as_ref().unwrap()
    };
    assert_eq!(&result.champion, majority);
    assert_eq!(result.records.len(), 3);
}

#[test]
fn qualifier_trims_to_the_bracket() {
    let mut comps: Vec<_> = (0..4)
        .map(|i| agent(&format!("u{i}"), &format!("uct?iters=200&seed={i}")))
        .collect();
    comps.push(agent("weak", "random"));
    let config = EliminationConfig {
        bracket_size: 4,
        ..Default::default()
    };
    let result =
        run_elimination(&games(&["hex5", "tictactoe"]), &comps, &config, None, None).unwrap();
    assert_eq!(result.eliminated_in_qualifier.len(), 1);
    assert!(result.qualifier.is_some());
    assert_eq!(result.bracket.rounds.len(), 2);
    assert_eq!(result.bracket.pairings(), 3);
}

#[test]
fn knockout_handles_byes() {
    let comps: Vec<_> = (0..3).map(|i| agent(&format!("r{i}"), "random")).collect();
    let result = run_elimination(
        &games(&["tictactoe"]),
        &comps,
        &EliminationConfig::default(),
        None,
        None,
    )
    .unwrap();
    assert_eq!(result.bracket.rounds.len(), 2);
    assert_eq!(result.bracket.pairings(), 2);
    assert!(result.bracket.rounds[0]
        .iter()
        .any(|m| m.b.is_none() && m.a == "r0"));
}

#[test]
fn elimination_rejects_even_mini_matches() {
    let comps = [agent("a", "random"), agent("b", "random")];
    let config = EliminationConfig {
        games_per_match: 2,
        ..Default::default()
    };
    assert!(run_elimination(&games(&["hex5"]), &comps, &config, None, None).is_err());
}

#[derive(Default)]
struct Collect(Mutex<Vec<LiveEvent>>);

impl MatchObserver for Collect {
    fn event(&self, e: LiveEvent) {
        self.0.lock().unwrap().push(e);
    }
}

#[test]
fn four_team_double_league() {
    assert_eq!(league_fixtures(4, true).len(), 6);
    let comps: Vec<_> = (0..4)
        .map(|i| agent(&format!("t{i}"), &format!("random?seed={i}")))
        .collect();
    let catalog = games(&["tictactoe"]);
    let observer = Collect::default();
    let league = run_league(
        &catalog,
        &comps,
        LeagueConfig::default(),
        None,
        Some(&observer),
    )
    .unwrap();
    assert_eq!(league.records().len(), 12);
    assert!(league.is_finished());
    conserved(league.standings(), league.records());
    assert_eq!(
        *league.standings(),
        Standings::from_records(league.records())
    );

    // Same pairings and seats as a round robin over the same entrants.
    let mut fixtures: Vec<_> = league.records().iter().map(|r| r.agents.clone()).collect();
    let mut rr: Vec<_> = round_robin_schedule(&catalog, &comps, &RoundRobinConfig::default())
        .iter()
        .map(|s| s.seats.iter().map(|c| c.id.clone()).collect::<Vec<_>>())
        .collect();
    fixtures.sort();
    rr.sort();
    assert_eq!(fixtures, rr);

    let events = observer.0.lock().unwrap();
    assert_eq!(
        events
            .iter()
            .filter(|e| e.kind == EventKind::Result)
            .count(),
        12
    );
    let ratings = league.ratings(&Default::default());
    assert_eq!(ratings.table.len(), 4);
}

#[test]
fn league_tracks_uploads_and_absences() {
    let comps: Vec<_> = (0..4).map(|i| agent(&format!("t{i}"), "random")).collect();
    let catalog = games(&["tictactoe"]);
    let dir = tempfile::tempdir().unwrap();
    let store = RecordStore::open(dir.path().join("league.jsonl")).unwrap();
    let mut league = League::new(&catalog, &comps, LeagueConfig::default()).unwrap();
    let v1 = comps[0].version.clone();
    league.play_round(Some(&store), None).unwrap();
    league.play_round(Some(&store), None).unwrap();
    league.replace(agent("t0", "uct?iters=30")).unwrap();
    league.remove("t1");
    let round3 = league.play_round(Some(&store), None).unwrap().unwrap();
    for r in &round3 {
        if let Some(seat) = r.seat_of("t1") {
            assert_eq!(r.result[seat], Outcome::Loss);
            assert!(r.moves.is_empty());
            assert!(matches!(r.termination, Termination::Forfeit { .. }));
        }
        if let Some(seat) = r.seat_of("t0") {
            assert_ne!(r.agent_versions[seat], v1);
        }
    }
    let early = &league.records()[0];
    if let Some(seat) = early.seat_of("t0") {
        assert_eq!(early.agent_versions[seat], v1);
    }
    while league.play_round(Some(&store), None).unwrap().is_some() {}
    assert_eq!(store.records().unwrap().len(), 12);
    assert!(audit(&store.records().unwrap(), &catalog).is_clean());
    assert!(league.replace(agent("stranger", "random")).is_err());
}
