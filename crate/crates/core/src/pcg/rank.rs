use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::engine::GameSpec;
use crate::grammar::{print_inline, LudemeNode};
use crate::rng::derive_seed;

use super::{
    evaluate_game, filter_valid, par_map, EvalConfig, EvalProfile, FilterConfig, PcgError, Verdict,
};

/// Placements per second assumed when turning estimated work into time.
/// A fixed figure keeps admission identical on every machine.
const PLACEMENTS_PER_SECOND: f64 = 2.0e7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub balance: f64,
    pub decisiveness: f64,
    pub length: f64,
    pub depth: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            balance: 0.25,
            decisiveness: 0.25,
            length: 0.25,
            depth: 0.25,
        }
    }
}

impl Weights {
    pub fn score(&self, p: &EvalProfile) -> f64 {
        self.balance * p.balance
            + self.decisiveness * p.decisiveness
            + self.length * length_score(p.mean_length)
            + self.depth * p.depth
    }
}

/// Trapezoid over mean game length: rising from 0 to 1 over 0..10 moves,
/// flat to 60, falling back to 0 at 120.
pub fn length_score(mean: f64) -> f64 {
    if mean <= 0.0 {
        0.0
    } else if mean < 10.0 {
        mean / 10.0
    } else if mean <= 60.0 {
        1.0
    } else {
        (1.0 - (mean - 60.0) / 60.0).max(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankConfig {
    pub filter: FilterConfig,
    /// Games per policy pair in each evaluation.
    pub playouts: usize,
    pub eval: EvalConfig,
    pub seed: u64,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig {
            filter: FilterConfig::default(),
            playouts: 10,
            eval: EvalConfig {
                uct_iterations: 100,
                depth_games: 10,
                depth_iterations: 100,
                ..EvalConfig::default()
            },
            seed: 0,
        }
    }
}

impl RankConfig {
    /// Estimated time to screen and evaluate one compiled game.
    pub fn cost(&self, spec: &GameSpec) -> Duration {
        let c = spec.cell_count() as f64;
        let filter = self.filter.playouts as f64 * c + c * c;
        let random = self.playouts as f64 * c;
        let uct = self.playouts as f64 * c * c * self.eval.uct_iterations as f64;
        let depth = self.eval.depth_games as f64 * c * c * self.eval.depth_iterations as f64 / 2.0;
        Duration::from_secs_f64((filter + random + uct + depth) / PLACEMENTS_PER_SECOND)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    /// Position in the input.
    pub index: usize,
    #[serde(skip)]
    pub tree: LudemeNode,
    /// The description on one line.
    pub text: String,
    pub verdict: Verdict,
    pub profile: Option<EvalProfile>,
    pub score: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Ranking {
    /// Every evaluated valid candidate, best first.
    pub ranked: Vec<Candidate>,
    /// Candidates screened out, in input order.
    pub rejected: Vec<Candidate>,
    /// Input positions left unexamined because the budget ran out.
    pub skipped: Vec<usize>,
    m: usize,
}

impl Ranking {
    /// The best `m` candidates.
    pub fn top(&self) -> &[Candidate] {
        &self.ranked[..self.m.min(self.ranked.len())]
    }
}

/// Screens, evaluates and scores candidates, then sorts them best first,
/// equal scores keeping input order.
///
/// Candidates are admitted in input order while their estimated cost fits
/// the budget; admission stops at the first one that does not fit, so a
/// larger budget only ever adds candidates. Each evaluation is seeded from
/// the candidate's text, so identical trees score identically.
pub fn rank_games(
    trees: &[LudemeNode],
    budget: Duration,
    weights: &Weights,
    m: usize,
    config: &RankConfig,
) -> Result<Ranking, PcgError> {
    if m > trees.len() {
        return Err(PcgError::TooFewCandidates {
            wanted: m,
            available: trees.len(),
        });
    }
    let mut spent = Duration::ZERO;
    let mut admitted = Vec::new();
    let mut skipped = Vec::new();
    for (index, tree) in trees.iter().enumerate() {
        let cost = GameSpec::compile(tree)
            .map(|s| config.cost(&s))
            .unwrap_or(Duration::ZERO);
        if !skipped.is_empty() || spent + cost > budget {
            skipped.push(index);
            continue;
        }
        spent += cost;
        admitted.push(index);
    }

    let results = par_map(admitted, |index| {
        let tree = &trees[index];
        let text = print_inline(tree);
        let seed = derive_seed(config.seed, fnv1a(&text));
        let verdict = filter_valid(
            tree,
            &FilterConfig {
                seed,
                ..config.filter
            },
        );
        let profile = if verdict.valid {
            let spec = GameSpec::compile(tree).expect("valid candidates compile");
            Some(evaluate_game(&spec, config.playouts, seed, &config.eval))
        } else {
            None
        };
        let score = profile.as_ref().map(|p| weights.score(p));
        Candidate {
            index,
            tree: tree.clone(),
            text,
            verdict,
            profile,
            score,
        }
    });

    let (mut ranked, rejected): (Vec<Candidate>, Vec<Candidate>) =
        results.into_iter().partition(|c| c.score.is_some());
    if ranked.is_empty()
        && skipped
            .iter()
            .any(|&i| GameSpec::compile(&trees[i]).is_ok())
    {
        return Err(PcgError::BudgetTooSmall);
    }
    ranked.sort_by(|a, b| b.score.unwrap_or(0.0).total_cmp(&a.score.unwrap_or(0.0)));
    Ok(Ranking {
        ranked,
        rejected,
        skipped,
        m,
    })
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid() {
        assert_eq!(length_score(0.0), 0.0);
        assert_eq!(length_score(5.0), 0.5);
        assert_eq!(length_score(10.0), 1.0);
        assert_eq!(length_score(60.0), 1.0);
        assert_eq!(length_score(90.0), 0.5);
        assert_eq!(length_score(500.0), 0.0);
    }
}
