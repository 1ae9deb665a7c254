//! Rule generation and screening: a registry-driven generator, a validity
//! filter, self-play quality metrics and the rank-many-candidates pipeline.

mod evaluate;
mod filter;
mod generate;
mod rank;

use thiserror::Error;

pub use evaluate::{evaluate_game, EvalConfig, EvalProfile, PolicyProfile};
pub use filter::{filter_valid, FilterConfig, Verdict};
pub use generate::{generate_game, GenConstraints};
pub use rank::{length_score, rank_games, Candidate, RankConfig, Ranking, Weights};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PcgError {
    #[error("required ludeme `{0}` is not in the registry")]
    UnknownKeyword(String),
    #[error("required ludeme `{keyword}` needs depth {needed}, the bound is {bound}")]
    TooDeep {
        keyword: String,
        needed: usize,
        bound: usize,
    },
    #[error("unsatisfiable constraints: {0}")]
    Unsatisfiable(String),
    #[error("budget too small to evaluate any candidate")]
    BudgetTooSmall,
    #[error("asked for the top {wanted} of {available} candidates")]
    TooFewCandidates { wanted: usize, available: usize },
}

#[cfg(feature = "parallel")]
fn par_map<T: Send, R: Send>(items: Vec<T>, f: impl Fn(T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R>(items: Vec<T>, f: impl Fn(T) -> R) -> Vec<R> {
    items.into_iter().map(f).collect()
}
