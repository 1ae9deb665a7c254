use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use ludeme::agents::{AgentConfig, Regime};
use ludeme::engine::GameSpec;
use ludeme::grammar::{self, Registry};
use ludeme::pcg::{self, EvalConfig, FilterConfig, GenConstraints, RankConfig, Weights};
use ludeme_arena::config::{EventConfig, EventOutcome, Format};
use ludeme_arena::{
    audit, run_match, Competitor, GameCatalog, Leaderboard, LeaderboardConfig, MatchSetup,
    RecordStore, Standings, TimeControl, Timestamp,
};
use ludeme_service::{Hub, ServiceConfig};

#[derive(Parser)]
#[command(name = "ludeme", version, about = "Ludemic general game system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the description language's grammar as EBNF.
    Grammar,
    /// Parse, validate and compile a `.lud` file.
    Check { file: PathBuf },
    /// Play one match and print its record.
    Play {
        /// Library id or path to a `.lud` file.
        #[arg(long)]
        game: String,
        /// One agent spec per seat, e.g. `uct?iters=1000`.
        #[arg(long, num_args = 1.., required = true)]
        agents: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5000)]
        per_move_ms: u64,
        #[arg(long, default_value = "forward-model")]
        regime: String,
        /// Append the record to this store.
        #[arg(long)]
        store: Option<PathBuf>,
    },
    /// Run a tournament described by a TOML event file.
    Tournament {
        config: PathBuf,
        /// Overrides the file's format.
        #[arg(long)]
        format: Option<Format>,
        #[arg(long)]
        store: Option<PathBuf>,
    },
    /// Print the rating table for a record store.
    Leaderboard {
        #[arg(long)]
        store: PathBuf,
        /// Replay every record and rebuild ratings from scratch; corrupt
        /// records are moved to the quarantine file.
        #[arg(long)]
        recompute: bool,
        #[arg(long)]
        games_dir: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Replay every record in a store; fails if any record does not reproduce.
    Audit {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        games_dir: Option<PathBuf>,
    },
    /// Generate constrained random games.
    Generate {
        #[arg(long)]
        count: usize,
        /// Keywords every game must contain (repeat or comma-separate).
        #[arg(long, value_delimiter = ',')]
        require: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Only keep games that pass the validity filter.
        #[arg(long)]
        filter: bool,
        /// Self-play games per policy pair when profiling valid games; 0 skips profiling.
        #[arg(long, default_value_t = 10)]
        playouts: usize,
    },
    /// Self-play profile of one game.
    Evaluate {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, default_value_t = 100)]
        playouts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        uct_iters: u64,
    },
    /// Rank every `.lud` file in a directory.
    Rank {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long)]
        budget_s: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Serve the HTTP and websocket API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        games_dir: Option<PathBuf>,
        #[arg(long)]
        store: PathBuf,
        #[arg(long, default_value_t = 1000)]
        agent_ms: u64,
        #[arg(long, default_value = "uct?iters=2000")]
        agent: String,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Grammar => print!("{}", grammar::emit_grammar(&Registry::builtin())),
        Command::Check { file } => check(&file)?,
        Command::Play {
            game,
            agents,
            seed,
            per_move_ms,
            regime,
            store,
        } => play(&game, &agents, seed, per_move_ms, &regime, store.as_deref())?,
        Command::Tournament {
            config,
            format,
            store,
        } => tournament(&config, format, store.as_deref())?,
        Command::Leaderboard {
            store,
            recompute,
            games_dir,
            json,
        } => leaderboard(&store, recompute, games_dir.as_deref(), json)?,
        Command::Audit { store, games_dir } => run_audit(&store, games_dir.as_deref())?,
        Command::Generate {
            count,
            require,
            seed,
            out,
            filter,
            playouts,
        } => generate(count, &require, seed, &out, filter, playouts)?,
        Command::Evaluate {
            game,
            playouts,
            seed,
            uct_iters,
        } => evaluate(&game, playouts, seed, uct_iters)?,
        Command::Rank {
            dir,
            top,
            budget_s,
            seed,
        } => rank(&dir, top, budget_s, seed)?,
        Command::Serve {
            port,
            games_dir,
            store,
            agent_ms,
            agent,
        } => serve(port, games_dir.as_deref(), &store, agent_ms, agent)?,
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn check(file: &Path) -> Result<()> {
    let text = read(file)?;
    let registry = Registry::builtin();
    let tree = match grammar::load(&text, &registry) {
        Ok(t) => t,
        Err(errors) => {
            for e in &errors {
                eprintln!("{}: {e}", file.display());
            }
            bail!("{} error(s)", errors.len());
        }
    };
    let spec = GameSpec::compile(&tree).with_context(|| format!("compiling {}", file.display()))?;
    println!(
        "{}: {} players, {:?} board side {} ({} cells), {} end rule(s), category {}",
        spec.name(),
        spec.players(),
        spec.board().family(),
        spec.board().side(),
        spec.cell_count(),
        spec.end_rules().len(),
        spec.category()
    );
    Ok(())
}

/// A library id, or a `.lud` path registered under its stem.
fn game_by_name(game: &str) -> Result<(String, Arc<GameSpec>)> {
    let path = Path::new(game);
    if path.extension().is_some_and(|e| e == "lud") || path.exists() {
        let mut c = GameCatalog::new();
        let id = c.load_file(path)?;
        return Ok((id.clone(), c.get(&id)?.clone()));
    }
    Ok((game.to_string(), GameCatalog::library().get(game)?.clone()))
}

fn catalog_with(dir: Option<&Path>) -> Result<GameCatalog> {
    let mut catalog = GameCatalog::library();
    if let Some(dir) = dir {
        for (id, spec) in GameCatalog::load_dir(dir)?.iter() {
            catalog.insert_shared(id, spec.clone());
        }
    }
    Ok(catalog)
}

fn play(
    game: &str,
    agents: &[String],
    seed: u64,
    per_move_ms: u64,
    regime: &str,
    store: Option<&Path>,
) -> Result<()> {
    let (id, spec) = game_by_name(game)?;
    if agents.len() != spec.players() {
        bail!(
            "{id} needs {} agent(s), got {}",
            spec.players(),
            agents.len()
        );
    }
    let seats = agents
        .iter()
        .map(|a| {
            let config: AgentConfig = a.parse()?;
            Competitor::builtin(&config.to_string(), config)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut setup = MatchSetup::new(&format!("play-{seed}"), &id, spec, seats, seed);
    setup.regime = regime.parse::<Regime>()?;
    setup.clock = TimeControl::new(TimeControl::default().setup_ms, per_move_ms)
        .map_err(anyhow::Error::msg)?;
    setup.event = "play".into();
    setup.timestamp = Timestamp::Wall;
    let record = run_match(&setup, None);
    if let Some(path) = store {
        RecordStore::open(path)?.append(&record)?;
    }
    println!("{}", record.to_json_line());
    Ok(())
}

fn print_standings(s: &Standings) {
    println!(
        "{:<24} {:>4} {:>4} {:>4} {:>4} {:>6}",
        "competitor", "P", "W", "D", "L", "points"
    );
    for (id, row) in s.table() {
        println!(
            "{id:<24} {:>4} {:>4} {:>4} {:>4} {:>6}",
            row.played, row.wins, row.draws, row.losses, row.points
        );
    }
}

fn tournament(path: &Path, format: Option<Format>, store: Option<&Path>) -> Result<()> {
    let mut config = EventConfig::load(path)?;
    if let Some(f) = format {
        config.format = f;
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let games = config.catalog(base)?;
    let store = store.map(RecordStore::open).transpose()?;
    match config.run(&games, store.as_ref(), None)? {
        EventOutcome::RoundRobin(t) => {
            println!("{} matches", t.records.len());
            print_standings(&t.standings);
        }
        EventOutcome::Elimination(e) => {
            if !e.eliminated_in_qualifier.is_empty() {
                println!(
                    "out in qualifying: {}",
                    e.eliminated_in_qualifier.join(", ")
                );
            }
            for (i, round) in e.bracket.rounds.iter().enumerate() {
                println!("round {}", i + 1);
                for m in round {
                    match &m.b {
                        Some(b) => println!(
                            "  {} {}-{} {}  -> {}",
                            m.a, m.wins[0], m.wins[1], b, m.winner
                        ),
                        None => println!("  {} bye", m.a),
                    }
                }
            }
            println!("champion: {}", e.champion);
        }
        EventOutcome::League(l) => {
            println!("{} rounds, {} matches", l.played(), l.records().len());
            print_standings(l.standings());
        }
    }
    Ok(())
}

fn leaderboard(store: &Path, recompute: bool, games_dir: Option<&Path>, json: bool) -> Result<()> {
    let catalog = catalog_with(games_dir)?;
    let store = RecordStore::open(store)?;
    let lines = store.read()?;
    let records: Vec<_> = lines
        .iter()
        .filter_map(|l| l.as_ref().ok().cloned())
        .collect();
    let board = Leaderboard::compute(&records, &catalog, &LeaderboardConfig::default())?;
    if recompute {
        let bad: Vec<&str> = board
            .quarantined
            .iter()
            .map(|q| q.match_id.as_str())
            .collect();
        let mut keep = String::new();
        for line in &lines {
            match line {
                Ok(r) if !bad.contains(&r.match_id.as_str()) => {
                    keep.push_str(&r.to_json_line());
                    keep.push('\n');
                }
                Ok(r) => {
                    let reason = &board
                        .quarantined
                        .iter()
                        .find(|q| q.match_id == r.match_id)
                        .expect("listed")
                        .reason;
                    store.quarantine(&r.to_json_line(), reason)?;
                }
                Err(raw) => store.quarantine(raw, "unparseable")?,
            }
        }
        std::fs::write(store.path(), keep)?;
        for q in &board.quarantined {
            eprintln!("quarantined {}: {}", q.match_id, q.reason);
        }
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&board)?);
        return Ok(());
    }
    println!(
        "{:<28} {:>6} {:>7} {:>8} {:>7} {:>8}",
        "competitor", "games", "win %", "rating", "RD", "sigma"
    );
    for r in &board.table {
        println!(
            "{:<28} {:>6} {:>7.1} {:>8.1} {:>7.1} {:>8.5}",
            r.id, r.overall.games, r.overall.win_pct, r.rating, r.rd, r.volatility
        );
    }
    Ok(())
}

fn run_audit(store: &Path, games_dir: Option<&Path>) -> Result<()> {
    let catalog = catalog_with(games_dir)?;
    let lines = RecordStore::open(store)?.read()?;
    let unparseable = lines.iter().filter(|l| l.is_err()).count();
    let records: Vec<_> = lines.into_iter().filter_map(Result::ok).collect();
    let report = audit(&records, &catalog);
    for (id, reason) in &report.failures {
        println!("FAIL {id}: {reason}");
    }
    println!(
        "{} records checked, {} failed, {} unparseable",
        report.checked,
        report.failures.len(),
        unparseable
    );
    if !report.is_clean() || unparseable > 0 {
        bail!("audit failed");
    }
    Ok(())
}

fn generate(
    count: usize,
    require: &[String],
    seed: u64,
    out: &Path,
    filter: bool,
    playouts: usize,
) -> Result<()> {
    let eval = RankConfig::default().eval;
    let registry = Registry::builtin();
    let constraints = GenConstraints::requiring(require.iter().map(String::as_str));
    constraints.check(&registry)?;
    std::fs::create_dir_all(out)?;
    let mut profiles = std::fs::File::create(out.join("profiles.jsonl"))?;
    let mut kept = 0;
    for i in 0..count {
        let game_seed = ludeme::rng::derive_seed(seed, i as u64);
        let tree = pcg::generate_game(&registry, &constraints, game_seed)?;
        let verdict = pcg::filter_valid(
            &tree,
            &FilterConfig {
                seed: game_seed,
                ..Default::default()
            },
        );
        let file = format!("gen-{i:05}.lud");
        let profile = match (verdict.valid, playouts) {
            (true, 1..) => Some(pcg::evaluate_game(
                &GameSpec::compile(&tree)?,
                playouts,
                game_seed,
                &eval,
            )),
            _ => None,
        };
        if !filter || verdict.valid {
            std::fs::write(out.join(&file), grammar::print(&tree))?;
            kept += 1;
        }
        let line = serde_json::json!({
            "file": file,
            "index": i,
            "seed": game_seed,
            "written": !filter || verdict.valid,
            "verdict": verdict,
            "profile": profile,
        });
        writeln!(profiles, "{line}")?;
    }
    println!("{kept} of {count} games written to {}", out.display());
    Ok(())
}

fn evaluate(game: &Path, playouts: usize, seed: u64, uct_iters: u64) -> Result<()> {
    let spec =
        GameSpec::from_text(&read(game)?).with_context(|| format!("loading {}", game.display()))?;
    let config = EvalConfig {
        uct_iterations: uct_iters,
        depth_iterations: uct_iters,
        ..Default::default()
    };
    let profile = pcg::evaluate_game(&spec, playouts, seed, &config);
    let line = serde_json::json!({ "file": game.display().to_string(), "profile": profile });
    println!("{line}");
    Ok(())
}

fn rank(dir: &Path, top: usize, budget_s: f64, seed: u64) -> Result<()> {
    if !(budget_s > 0.0) {
        bail!("--budget-s must be positive");
    }
    let registry = Registry::builtin();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "lud"))
        .collect();
    paths.sort();
    let mut trees = Vec::new();
    let mut names = Vec::new();
    for p in &paths {
        match grammar::load(&read(p)?, &registry) {
            Ok(t) => {
                trees.push(t);
                names.push(
                    p.file_name()
                        .unwrap_or_default()
                        .to_string_lossy()
                        .into_owned(),
                );
            }
            Err(e) => eprintln!("skipping {}: {}", p.display(), e[0]),
        }
    }
    let config = RankConfig {
        seed,
        ..Default::default()
    };
    let ranking = pcg::rank_games(
        &trees,
        Duration::from_secs_f64(budget_s),
        &Weights::default(),
        top.min(trees.len()),
        &config,
    )?;
    for (rank, c) in ranking.top().iter().enumerate() {
        let line = serde_json::json!({ "rank": rank + 1, "file": names[c.index], "candidate": c });
        println!("{line}");
    }
    for c in &ranking.rejected {
        let line = serde_json::json!({ "rank": null, "file": names[c.index], "candidate": c });
        println!("{line}");
    }
    eprintln!(
        "{} ranked, {} rejected, {} skipped for budget",
        ranking.ranked.len(),
        ranking.rejected.len(),
        ranking.skipped.len()
    );
    Ok(())
}

fn serve(
    port: u16,
    games_dir: Option<&Path>,
    store: &Path,
    agent_ms: u64,
    agent: String,
) -> Result<()> {
    let catalog = catalog_with(games_dir)?;
    let config = ServiceConfig {
        agent_move_ms: agent_ms,
        default_agent: agent,
        ..Default::default()
    };
    let hub =
        Hub::new(catalog, RecordStore::open(store)?, config).map_err(|e| anyhow::anyhow!("{e}"))?;
    let runtime = tokio::runtime::Runtime::new()?;
    let addr = std::net::SocketAddr::from(([0, 0, 0, 0], port));
    eprintln!("listening on http://{addr}");
    runtime.block_on(ludeme_service::serve(addr, Arc::new(hub)))?;
    Ok(())
}
