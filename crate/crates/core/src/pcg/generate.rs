use std::collections::{BTreeSet, HashMap};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::engine::BoardFamily;
use crate::grammar::registry::ROLE_CATEGORY;
use crate::grammar::{Arg, LudemeNode, ParamKind, Registry};
use crate::rng::{seeded, GameRng};

use super::PcgError;

/// Limits on what [`generate_game`] may produce.
#[derive(Clone, Debug, PartialEq)]
pub struct GenConstraints {
    /// Keywords that must appear somewhere in the tree.
    pub required: BTreeSet<String>,
    pub families: Vec<BoardFamily>,
    pub min_side: usize,
    pub max_side: usize,
    /// `None` lets the generator choose, mostly two-player games.
    pub players: Option<usize>,
    pub max_depth: usize,
    pub max_end_rules: usize,
    /// Rule-generation mode: keep this game's name, mode and equipment and
    /// generate only its `rules`.
    pub fixed: Option<LudemeNode>,
}

impl Default for GenConstraints {
    fn default() -> Self {
        GenConstraints {
            required: BTreeSet::new(),
            families: vec![BoardFamily::Hex, BoardFamily::Square],
            min_side: 3,
            max_side: 9,
            players: None,
            max_depth: 6,
            max_end_rules: 3,
            fixed: None,
        }
    }
}

impl GenConstraints {
    pub fn requiring<'a>(keywords: impl IntoIterator<Item = &'a str>) -> Self {
        GenConstraints {
            required: keywords.into_iter().map(String::from).collect(),
            ..Default::default()
        }
    }

    /// Rule-generation mode over an existing game's equipment.
    pub fn rules_for(game: &LudemeNode) -> Self {
        GenConstraints {
            fixed: Some(game.clone()),
            ..Default::default()
        }
    }

    /// Rejects constraints no tree can meet.
    pub fn check(&self, registry: &Registry) -> Result<(), PcgError> {
        for k in &self.required {
            if registry.signature(k).is_none() {
                return Err(PcgError::UnknownKeyword(k.clone()));
            }
        }
        let heights = min_heights(registry);
        let reach = reach_depths(registry);
        let root = heights.get("game").copied().unwrap_or(usize::MAX);
        if root > self.max_depth {
            return Err(PcgError::TooDeep {
                keyword: "game".into(),
                needed: root,
                bound: self.max_depth,
            });
        }
        for k in &self.required {
            let needed = match (reach.get(k.as_str()), heights.get(k.as_str())) {
                (Some(r), Some(h)) => root.max(r + h - 1),
                _ => usize::MAX,
            };
            if needed > self.max_depth {
                return Err(PcgError::TooDeep {
                    keyword: k.clone(),
                    needed,
                    bound: self.max_depth,
                });
            }
        }
        if self.min_side < 2 || self.min_side > self.max_side {
            return Err(PcgError::Unsatisfiable(format!(
                "board sides {}..={}",
                self.min_side, self.max_side
            )));
        }
        if let Some(p) = self.players {
            if !(1..=2).contains(&p) {
                return Err(PcgError::Unsatisfiable(format!("{p} players")));
            }
        }
        if let Some(game) = &self.fixed {
            if game.keyword != "game"
                || game.child("equipment").is_none()
                || game.child("mode").is_none()
            {
                return Err(PcgError::Unsatisfiable(
                    "fixed part is not a complete game".into(),
                ));
            }
            let equipment = game.child("equipment").expect("checked above");
            for k in &self.required {
                if registry
                    .signature(k)
                    .is_some_and(|s| s.category == "item" || s.category == "edge")
                    && !equipment.contains_keyword(k)
                {
                    return Err(PcgError::Unsatisfiable(format!(
                        "`{k}` is not in the fixed equipment"
                    )));
                }
            }
        } else {
            let families = self.allowed_families()?;
            if families.is_empty() {
                return Err(PcgError::Unsatisfiable("no board family is allowed".into()));
            }
        }
        Ok(())
    }

    fn allowed_families(&self) -> Result<Vec<BoardFamily>, PcgError> {
        let hex = self.required.contains("HexBoard");
        let square = self.required.contains("SquareBoard");
        if hex && square {
            return Err(PcgError::Unsatisfiable(
                "a game has exactly one board".into(),
            ));
        }
        Ok(self
            .families
            .iter()
            .copied()
            .filter(|f| match f {
                BoardFamily::Hex => !square,
                BoardFamily::Square => !hex,
            })
            .collect())
    }
}

/// Smallest possible height of a subtree rooted at each keyword.
fn min_heights(registry: &Registry) -> HashMap<&str, usize> {
    let mut h: HashMap<&str, usize> = HashMap::new();
    loop {
        let mut changed = false;
        for sig in registry.signatures() {
            let mut worst = 0;
            for p in sig.params.iter().filter(|p| p.min_count() > 0) {
                let need = match &p.kind {
                    ParamKind::Category(c) if registry.terminals(c).next().is_none() => registry
                        .members(c)
                        .filter_map(|m| h.get(m.keyword.as_str()).copied())
                        .min(),
                    _ => Some(0),
                };
                match need {
                    Some(n) => worst = worst.max(n),
                    None => {
                        worst = usize::MAX;
                        break;
                    }
                }
            }
            if worst == usize::MAX {
                continue;
            }
            let height = worst + 1;
            if h.get(sig.keyword.as_str()).is_none_or(|&old| height < old) {
                h.insert(&sig.keyword, height);
                changed = true;
            }
        }
        if !changed {
            return h;
        }
    }
}

/// Shallowest depth, counting the root `game` as 1, at which each keyword can appear.
fn reach_depths(registry: &Registry) -> HashMap<&str, usize> {
    let mut d: HashMap<&str, usize> = HashMap::new();
    d.insert("game", 1);
    loop {
        let mut changed = false;
        for sig in registry.signatures() {
            let Some(&here) = d.get(sig.keyword.as_str()) else {
                continue;
            };
            for p in &sig.params {
                if let ParamKind::Category(c) = &p.kind {
                    for m in registry.members(c) {
                        if d.get(m.keyword.as_str()).is_none_or(|&old| here + 1 < old) {
                            d.insert(&m.keyword, here + 1);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return d;
        }
    }
}

const OPPOSITE_EDGES: [(&str, &str); 4] = [("N", "S"), ("E", "W"), ("NE", "SW"), ("NW", "SE")];

struct Ctx<'a> {
    registry: &'a Registry,
    rng: GameRng,
    players: usize,
    side: usize,
    /// Players with at least two regions.
    connected_players: Vec<String>,
    /// Regions still to add, when the equipment is being generated.
    new_regions: Option<Vec<(String, String)>>,
}

/// Generates a complete game description that conforms to `registry` and
/// contains every required keyword. Deterministic for a given seed.
pub fn generate_game(
    registry: &Registry,
    constraints: &GenConstraints,
    seed: u64,
) -> Result<LudemeNode, PcgError> {
    constraints.check(registry)?;
    let mut rng = seeded(seed);

    let (name, mode, equipment_fixed, players) = match &constraints.fixed {
        Some(game) => {
            let players = game
                .child("mode")
                .and_then(|m| match m.args.first() {
                    Some(Arg::Int(n, _)) => Some(*n as usize),
                    _ => None,
                })
                .unwrap_or(2);
            (
                game.args
                    .first()
                    .cloned()
                    .unwrap_or_else(|| Arg::string("Generated")),
                game.child("mode").cloned().expect("checked"),
                game.child("equipment").cloned(),
                players,
            )
        }
        None => {
            let players =
                constraints
                    .players
                    .unwrap_or_else(|| if rng.random_bool(0.2) { 1 } else { 2 });
            let mode = LudemeNode::new(
                "mode",
                vec![
                    Arg::int(players as i64),
                    Arg::node(LudemeNode::new("addToEmpty", vec![])),
                ],
            );
            (
                Arg::string(format!("Generated {seed:016x}")),
                mode,
                None,
                players,
            )
        }
    };

    let side = match &equipment_fixed {
        Some(eq) => eq
            .children()
            .find(|n| n.keyword.ends_with("Board"))
            .and_then(|b| match b.args.first() {
                Some(Arg::Int(n, _)) => Some(*n as usize),
                _ => None,
            })
            .unwrap_or(constraints.min_side),
        None => rng.random_range(constraints.min_side..=constraints.max_side),
    };

    let mut ctx = Ctx {
        registry,
        rng,
        players,
        side,
        connected_players: Vec::new(),
        new_regions: None,
    };

    if let Some(eq) = &equipment_fixed {
        for p in ["P1", "P2"] {
            let n = eq
                .children()
                .filter(|r| {
                    r.keyword == "region"
                        && matches!(r.args.first(), Some(Arg::Ident(o, _)) if o == p)
                })
                .count();
            if n >= 2 {
                ctx.connected_players.push(p.to_string());
            }
        }
    } else {
        let mut regions = Vec::new();
        let wants_regions =
            constraints.required.contains("region") || constraints.required.contains("edge");
        for (i, p) in ["P1", "P2"].into_iter().take(players).enumerate() {
            if ctx.rng.random_bool(0.6) || (wants_regions && i == 0) {
                let (a, b) = *OPPOSITE_EDGES.choose(&mut ctx.rng).expect("non-empty");
                regions.push((p.to_string(), a.to_string()));
                regions.push((p.to_string(), b.to_string()));
                ctx.connected_players.push(p.to_string());
            }
        }
        ctx.new_regions = Some(regions);
    }

    let rules = generate_rules(&mut ctx, constraints)?;

    let equipment = match equipment_fixed {
        Some(eq) => eq,
        None => {
            let families = constraints.allowed_families()?;
            let family = *families.choose(&mut ctx.rng).expect("checked non-empty");
            let board = match family {
                BoardFamily::Hex => "HexBoard",
                BoardFamily::Square => "SquareBoard",
            };
            let mut items = vec![
                Arg::node(LudemeNode::new(board, vec![Arg::int(side as i64)])),
                Arg::node(LudemeNode::new(
                    "ball",
                    vec![Arg::ident(if players == 1 { "P1" } else { "Each" })],
                )),
            ];
            for (owner, dir) in ctx.new_regions.take().unwrap_or_default() {
                items.push(Arg::node(LudemeNode::new(
                    "region",
                    vec![
                        Arg::ident(owner),
                        Arg::node(LudemeNode::new("edge", vec![Arg::ident(dir)])),
                    ],
                )));
            }
            LudemeNode::new("equipment", vec![Arg::list(items)])
        }
    };

    let tree = LudemeNode::new(
        "game",
        vec![
            name,
            Arg::node(mode),
            Arg::node(equipment),
            Arg::node(rules),
        ],
    );
    if tree.depth() > constraints.max_depth {
        return Err(PcgError::TooDeep {
            keyword: "game".into(),
            needed: tree.depth(),
            bound: constraints.max_depth,
        });
    }
    Ok(tree)
}

fn generate_rules(ctx: &mut Ctx<'_>, constraints: &GenConstraints) -> Result<LudemeNode, PcgError> {
    let registry = ctx.registry;
    let conditions: Vec<&str> = registry
        .members("condition")
        .map(|s| s.keyword.as_str())
        .collect();
    if conditions.is_empty() {
        return Err(PcgError::Unsatisfiable(
            "the registry has no end conditions".into(),
        ));
    }
    let mut chosen: Vec<String> = constraints
        .required
        .iter()
        .filter(|k| conditions.contains(&k.as_str()))
        .cloned()
        .collect();
    if constraints.required.contains("mover") && chosen.is_empty() {
        chosen.push(conditions[0].to_string());
    }
    let count = ctx
        .rng
        .random_range(1..=constraints.max_end_rules.max(chosen.len()).max(1));
    while chosen.len() < count {
        chosen.push(
            conditions
                .choose(&mut ctx.rng)
                .expect("non-empty")
                .to_string(),
        );
    }
    chosen.shuffle(&mut ctx.rng);

    let mut ends = Vec::new();
    for (i, keyword) in chosen.iter().enumerate() {
        let force_mover = i == 0 && constraints.required.contains("mover");
        let condition = condition_node(ctx, keyword, force_mover)?;
        let result = result_node(ctx, force_mover);
        ends.push(Arg::node(LudemeNode::new(
            "end",
            vec![Arg::node(condition), Arg::node(result)],
        )));
    }
    let play = LudemeNode::new(
        "play",
        vec![Arg::node(LudemeNode::new(
            "to",
            vec![Arg::node(LudemeNode::new("empty", vec![]))],
        ))],
    );
    let mut args = vec![Arg::node(play)];
    args.extend(ends);
    Ok(LudemeNode::new("rules", args))
}

fn role_arg(ctx: &mut Ctx<'_>, allow_each: bool) -> Arg {
    let mut roles = vec!["mover", "P1"];
    if ctx.players == 2 {
        roles.push("P2");
    }
    if allow_each {
        roles.push("Each");
    }
    role(roles.choose(&mut ctx.rng).expect("non-empty"))
}

fn role(name: &str) -> Arg {
    if name == "mover" {
        Arg::node(LudemeNode::new("mover", vec![]))
    } else {
        Arg::ident(name)
    }
}

fn condition_node(
    ctx: &mut Ctx<'_>,
    keyword: &str,
    force_mover: bool,
) -> Result<LudemeNode, PcgError> {
    if keyword == "connect" {
        return connect_node(ctx, force_mover);
    }
    let sig = ctx
        .registry
        .signature(keyword)
        .expect("chosen from the registry")
        .clone();
    let mut args = Vec::new();
    for p in &sig.params {
        args.push(match &p.kind {
            ParamKind::Int { min, max } => {
                let hi = max.unwrap_or_else(|| (*min).max(ctx.side as i64));
                Arg::int(ctx.rng.random_range(*min..=hi))
            }
            ParamKind::Str => Arg::string("x"),
            ParamKind::Category(c) if c == ROLE_CATEGORY => {
                if force_mover {
                    role("mover")
                } else {
                    role_arg(ctx, false)
                }
            }
            ParamKind::Category(c) => {
                let terminals: Vec<&str> = ctx.registry.terminals(c).collect();
                match terminals.choose(&mut ctx.rng) {
                    Some(t) => Arg::ident(*t),
                    None => {
                        let member = ctx
                            .registry
                            .members(c)
                            .find(|m| m.params.iter().all(|p| p.min_count() == 0))
                            .ok_or_else(|| {
                                PcgError::Unsatisfiable(format!("cannot fill `{c}` in `{keyword}`"))
                            })?;
                        Arg::node(LudemeNode::new(member.keyword.clone(), vec![]))
                    }
                }
            }
        });
    }
    Ok(LudemeNode::new(keyword, args))
}

fn connect_node(ctx: &mut Ctx<'_>, force_mover: bool) -> Result<LudemeNode, PcgError> {
    let all: Vec<String> = ["P1", "P2"]
        .iter()
        .take(ctx.players)
        .map(|s| s.to_string())
        .collect();
    if let Some(regions) = ctx.new_regions.as_mut() {
        // The equipment is still open: give every player that may need it a pair of edges.
        let needed = if force_mover || ctx.rng.random_bool(0.6) {
            all.clone()
        } else {
            vec![all.choose(&mut ctx.rng).expect("non-empty").clone()]
        };
        for p in &needed {
            if !ctx.connected_players.contains(p) {
                let (a, b) = *OPPOSITE_EDGES.choose(&mut ctx.rng).expect("non-empty");
                regions.push((p.clone(), a.into()));
                regions.push((p.clone(), b.into()));
                ctx.connected_players.push(p.clone());
            }
        }
    }
    let everyone = all.iter().all(|p| ctx.connected_players.contains(p));
    let who = if everyone && (force_mover || ctx.rng.random_bool(0.7)) {
        role("mover")
    } else if force_mover {
        return Err(PcgError::Unsatisfiable(
            "`connect (mover)` needs regions for every player".into(),
        ));
    } else {
        match ctx.connected_players.choose(&mut ctx.rng) {
            Some(p) => Arg::ident(p.clone()),
            None => {
                return Err(PcgError::Unsatisfiable(
                    "`connect` needs a player with two regions".into(),
                ))
            }
        }
    };
    Ok(LudemeNode::new("connect", vec![who]))
}

fn result_node(ctx: &mut Ctx<'_>, force_mover: bool) -> LudemeNode {
    let outcome = match ctx.rng.random_range(0..10) {
        0..=5 => "Win",
        6..=7 => "Loss",
        _ => "Draw",
    };
    let who = if force_mover {
        role("mover")
    } else {
        role_arg(ctx, outcome == "Draw" || ctx.players == 1)
    };
    LudemeNode::new("result", vec![who, Arg::ident(outcome)])
}
