use rand::Rng;

use crate::engine::{GameState, Move, Player, PlayoutEnd, Status, Terminal, DEFAULT_MOVE_CAP};
use crate::rng::{seeded, GameRng};

use super::{reward, Agent, AgentError, Budget, Deadline, ForwardModel, Observation, Regime};

/// Root statistics of a finished search.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub best: Move,
    pub iterations: u64,
    /// Visit count of the root, equal to `iterations`.
    pub root_visits: u64,
    /// `(move, visits, mean reward for the player to move at the root)` per expanded child.
    pub children: Vec<(Move, u64, f64)>,
}

struct Node {
    mv: Option<Move>,
    parent: Option<usize>,
    children: Vec<usize>,
    untried: Vec<Move>,
    visits: u64,
    /// Sum of rewards for `just_moved`, the player who made `mv`.
    total: f64,
    just_moved: Player,
    terminal: Option<Terminal>,
}

/// UCT: select by mean reward plus `c * sqrt(ln N / n)`, expand one node per
/// iteration, finish with a uniform-random rollout and back up 1 / 0.5 / 0
/// from each node's mover's point of view. The answer is the most visited
/// root child; ties go to the lowest cell.
pub fn uct_search(
    fm: &ForwardModel,
    root: &GameState,
    budget: &Budget,
    c: f64,
    rng: &mut GameRng,
) -> SearchResult {
    let legal: Vec<Move> = root.empty_cells().map(Move).collect();
    let mut nodes = vec![Node {
        mv: None,
        parent: None,
        children: Vec::new(),
        untried: legal.clone(),
        visits: 0,
        total: 0.0,
        just_moved: fm.last_mover(root),
        terminal: None,
    }];
    let deadline = Deadline::start(budget);
    let mut iterations = 0u64;

    if legal.len() > 1 {
        while !deadline.expired(iterations) {
            iterate(fm, root, &mut nodes, c, rng);
            iterations += 1;
        }
    }

    let mut children: Vec<(Move, u64, f64)> = nodes[0]
        .children
        .iter()
        .map(|&i| {
            let n = &nodes[i];
            (
                n.mv.expect("child has a move"),
                n.visits,
                n.total / n.visits.max(1) as f64,
            )
        })
        .collect();
    children.sort_by_key(|(m, _, _)| *m);
    let best = children
        .iter()
        .fold(None::<(Move, u64)>, |best, &(m, v, _)| match best {
            Some((_, bv)) if bv >= v => best,
            _ => Some((m, v)),
        })
        .map(|(m, _)| m)
        .unwrap_or(legal[0]);
    SearchResult {
        best,
        iterations,
        root_visits: nodes[0].visits,
        children,
    }
}

fn iterate(fm: &ForwardModel, root: &GameState, nodes: &mut Vec<Node>, c: f64, rng: &mut GameRng) {
    let mut state = root.clone();
    let mut at = 0;

    // Selection.
    while nodes[at].untried.is_empty()
        && nodes[at].terminal.is_none()
        && !nodes[at].children.is_empty()
    {
        let parent_log = (nodes[at].visits as f64).ln();
        let mut best: Option<(f64, Move, usize)> = None;
        for &child in &nodes[at].children {
            let n = &nodes[child];
            let visits = n.visits as f64;
            let score = n.total / visits + c * (parent_log / visits).sqrt();
            let mv = n.mv.expect("child has a move");
            let better = match best {
                None => true,
                Some((s, m, _)) => score > s || (score == s && mv < m),
            };
            if better {
                best = Some((score, mv, child));
            }
        }
        let (_, mv, child) = best.expect("children is non-empty");
        fm.advance(&mut state, mv);
        at = child;
    }

    // Expansion.
    if nodes[at].terminal.is_none() && !nodes[at].untried.is_empty() {
        let pick = rng.random_range(0..nodes[at].untried.len());
        let mv = nodes[at].untried.swap_remove(pick);
        let just_moved = state.mover();
        let status = fm.advance(&mut state, mv);
        let terminal = match status {
            Status::Over(t) => Some(t),
            Status::Ongoing => None,
        };
        let untried = if terminal.is_some() {
            Vec::new()
        } else {
            state.empty_cells().map(Move).collect()
        };
        nodes.push(Node {
            mv: Some(mv),
            parent: Some(at),
            children: Vec::new(),
            untried,
            visits: 0,
            total: 0.0,
            just_moved,
            terminal,
        });
        let child = nodes.len() - 1;
        nodes[at].children.push(child);
        at = child;
    }

    // Simulation.
    let end = match &nodes[at].terminal {
        Some(t) => PlayoutEnd::Terminal(t.clone()),
        None => fm.random_rollout(&mut state, rng, DEFAULT_MOVE_CAP),
    };

    // Backpropagation.
    let mut cursor = Some(at);
    while let Some(i) = cursor {
        let node = &mut nodes[i];
        node.visits += 1;
        node.total += reward(&end, node.just_moved);
        cursor = node.parent;
    }
}

/// UCT agent; needs the forward-model regime.
pub struct Uct {
    c: f64,
    iterations: Option<u64>,
    rng: GameRng,
    last: Option<SearchResult>,
}

impl Uct {
    pub fn new(c: f64, iterations: Option<u64>, seed: u64) -> Result<Self, AgentError> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(AgentError::Config(format!(
                "exploration constant must be positive, got {c}"
            )));
        }
        Ok(Uct {
            c,
            iterations,
            rng: seeded(seed),
            last: None,
        })
    }

    /// Statistics of the most recent search.
    pub fn last_search(&self) -> Option<&SearchResult> {
        self.last.as_ref()
    }
}

impl Agent for Uct {
    fn name(&self) -> String {
        "uct".into()
    }

    fn supports(&self, regime: Regime) -> bool {
        regime == Regime::ForwardModel
    }

    fn select_move(&mut self, obs: &Observation, budget: &Budget) -> Result<Move, AgentError> {
        let fm = obs
            .forward_model()
            .ok_or_else(|| AgentError::NeedsForwardModel {
                agent: self.name(),
                regime: obs.regime(),
            })?;
        if let [only] = obs.legal_moves() {
            return Ok(*only);
        }
        let result = uct_search(
            fm,
            obs.state(),
            &budget.capped(self.iterations),
            self.c,
            &mut self.rng,
        );
        let best = result.best;
        self.last = Some(result);
        Ok(best)
    }
}
