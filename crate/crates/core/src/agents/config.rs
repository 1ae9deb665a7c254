use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Agent, AgentError, FlatMonteCarlo, RandomAgent, Uct};

pub const DEFAULT_C: f64 = std::f64::consts::SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgentKind {
    Random,
    FlatMc,
    Uct,
}

impl AgentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AgentKind::Random => "random",
            AgentKind::FlatMc => "flat-mc",
            AgentKind::Uct => "uct",
        }
    }
}

/// A built-in agent plus its parameters, written `uct?c=1.41&iters=10000&seed=3`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    pub kind: AgentKind,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default)]
    pub iterations: Option<u64>,
    #[serde(default)]
    pub seed: u64,
}

fn default_c() -> f64 {
    DEFAULT_C
}

impl AgentConfig {
    pub fn new(kind: AgentKind) -> Self {
        AgentConfig {
            kind,
            c: DEFAULT_C,
            iterations: None,
            seed: 0,
        }
    }

    pub fn with_iterations(mut self, n: u64) -> Self {
        self.iterations = Some(n);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn build(&self) -> Result<Box<dyn Agent>, AgentError> {
        Ok(match self.kind {
            AgentKind::Random => Box::new(RandomAgent::new(self.seed)),
            AgentKind::FlatMc => Box::new(FlatMonteCarlo::new(self.iterations, self.seed)),
            AgentKind::Uct => Box::new(Uct::new(self.c, self.iterations, self.seed)?),
        })
    }
}

impl FromStr for AgentConfig {
    type Err = AgentError;

    fn from_str(s: &str) -> Result<Self, AgentError> {
        let (name, query) = s.split_once('?').unwrap_or((s, ""));
        let kind = match name {
            "random" => AgentKind::Random,
            "flat-mc" | "flatmc" | "mc" => AgentKind::FlatMc,
            "uct" | "mcts" => AgentKind::Uct,
            other => return Err(AgentError::Config(format!("unknown agent `{other}`"))),
        };
        let mut cfg = AgentConfig::new(kind);
        for pair in query.split('&').filter(|p| !p.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| AgentError::Config(format!("expected key=value, got `{pair}`")))?;
            let bad = || AgentError::Config(format!("bad value for {key}: `{value}`"));
            match key {
                "c" => cfg.c = value.parse().map_err(|_| bad())?,
                "iters" | "iterations" => cfg.iterations = Some(value.parse().map_err(|_| bad())?),
                "seed" => cfg.seed = value.parse().map_err(|_| bad())?,
                other => return Err(AgentError::Config(format!("unknown parameter `{other}`"))),
            }
        }
        if kind == AgentKind::Uct && !(cfg.c > 0.0 && cfg.c.is_finite()) {
            return Err(AgentError::Config(format!(
                "exploration constant must be positive, got {}",
                cfg.c
            )));
        }
        Ok(cfg)
    }
}

impl fmt::Display for AgentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.as_str())?;
        let mut parts = Vec::new();
        if self.kind == AgentKind::Uct && self.c != DEFAULT_C {
            parts.push(format!("c={}", self.c));
        }
        if let Some(n) = self.iterations {
            parts.push(format!("iters={n}"));
        }
        if self.seed != 0 {
            parts.push(format!("seed={}", self.seed));
        }
        if !parts.is_empty() {
            write!(f, "?{}", parts.join("&"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let cfg: AgentConfig = "uct?c=1.41&iters=10000&seed=3".parse().unwrap();
        assert_eq!(cfg.kind, AgentKind::Uct);
        assert_eq!(cfg.c, 1.41);
        assert_eq!(cfg.iterations, Some(10000));
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.to_string(), "uct?c=1.41&iters=10000&seed=3");
        assert_eq!(cfg.to_string().parse::<AgentConfig>().unwrap(), cfg);
        assert_eq!(
            "random".parse::<AgentConfig>().unwrap().to_string(),
            "random"
        );
    }

    #[test]
    fn rejects_nonsense() {
        for s in ["alphazero", "uct?c=-1", "uct?c=x", "uct?depth=3", "uct?c"] {
            assert!(s.parse::<AgentConfig>().is_err(), "{s}");
        }
    }
}
