//! A ludemic general game system: a game-description language whose
//! grammar is generated from a registry of ludemes, a compiler and forward
//! model for the described games, search agents, and a generator that
//! proposes and screens new rule sets.

pub mod agents;
pub mod engine;
pub mod grammar;
pub mod pcg;
pub mod rng;
