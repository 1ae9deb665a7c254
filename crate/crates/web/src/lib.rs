//! In-browser demo: check and pretty-print a description, show the grammar,
//! and play any loaded game against UCT. Everything runs client-side.

use std::sync::Arc;

use ludeme::agents::{AgentConfig, AgentKind, Budget, Observation, Regime};
use ludeme::engine::{library, GameSpec, GameState, Player, Status};
use ludeme::grammar::{self, Registry};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Parses, validates and compiles `text`. Errors carry 1-based positions.
pub fn check_text(text: &str) -> Value {
    let registry = Registry::builtin();
    let tree = match grammar::load(text, &registry) {
        Ok(t) => t,
        Err(errors) => {
            let errors: Vec<Value> = errors
                .iter()
                .map(|e| json!({ "line": e.pos.line, "column": e.pos.column, "message": e.kind.to_string() }))
                .collect();
            return json!({ "ok": false, "errors": errors });
        }
    };
    let pretty = grammar::print(&tree);
    match GameSpec::compile(&tree) {
        Ok(spec) => json!({
            "ok": true,
            "errors": [],
            "pretty": pretty,
            "summary": format!(
                "{}: {} player(s), {} cells, {} end rule(s), {}",
                spec.name(),
                spec.players(),
                spec.cell_count(),
                spec.end_rules().len(),
                spec.category()
            ),
        }),
        Err(e) => json!({
            "ok": false,
            "pretty": pretty,
            "errors": [{ "line": tree.pos.line, "column": tree.pos.column, "message": e.to_string() }],
        }),
    }
}

/// A game in progress between the page's user and the engine.
pub struct Session {
    spec: Arc<GameSpec>,
    state: GameState,
    status: Status,
    moves: Vec<String>,
    seed: u64,
}

impl Session {
    pub fn new(text: &str) -> Result<Self, String> {
        let spec = Arc::new(GameSpec::from_text(text).map_err(|e| e.to_string())?);
        let state = spec.initial_state();
        let status = spec.status(&state);
        Ok(Session {
            spec,
            state,
            status,
            moves: Vec::new(),
            seed: 1,
        })
    }

    pub fn view(&self) -> Value {
        let board = self.spec.board();
        let cells: Vec<Value> = (0..board.cell_count())
            .map(|c| {
                let (row, col) = board.coords(c);
                json!({ "label": board.label(c), "row": row, "col": col, "owner": self.state.cells()[c] })
            })
            .collect();
        let regions: Vec<Value> = board
            .regions()
            .iter()
            .map(|r| json!({ "owner": r.owner, "edge": format!("{:?}", r.edge) }))
            .collect();
        let result = self.status.terminal().map(|t| {
            json!({
                "outcomes": t.outcomes,
                "winner": t.winner(),
            })
        });
        json!({
            "name": self.spec.name(),
            "family": format!("{:?}", board.family()).to_lowercase(),
            "side": board.side(),
            "cells": cells,
            "regions": regions,
            "moves": self.moves,
            "to_move": (!self.status.is_terminal()).then(|| self.state.mover()),
            "result": result,
        })
    }

    pub fn play(&mut self, label: &str) -> Result<Value, String> {
        if self.status.is_terminal() {
            return Err("the game is over".into());
        }
        let mv = self.spec.parse_move(label).map_err(|e| e.to_string())?;
        let (state, status) = self.spec.step(&self.state, mv).map_err(|e| e.to_string())?;
        self.moves.push(self.spec.label(mv).to_string());
        self.state = state;
        self.status = status;
        Ok(self.view())
    }

    /// Lets UCT choose and play the next move.
    pub fn reply(&mut self, iterations: u64) -> Result<Value, String> {
        if self.status.is_terminal() {
            return Err("the game is over".into());
        }
        self.seed += 1;
        let mut agent = AgentConfig::new(AgentKind::Uct)
            .with_seed(self.seed)
            .build()
            .map_err(|e| e.to_string())?;
        let obs = Observation::for_regime(&self.spec, &self.state, Regime::ForwardModel)
            .map_err(|e| e.to_string())?;
        let mv = agent
            .select_move(&obs, &Budget::iterations(iterations.max(1)))
            .map_err(|e| e.to_string())?;
        let label = self.spec.label(mv).to_string();
        self.play(&label)
    }

    pub fn mover(&self) -> Option<Player> {
        (!self.status.is_terminal()).then(|| self.state.mover())
    }
}

#[wasm_bindgen]
pub fn check(text: &str) -> String {
    check_text(text).to_string()
}

#[wasm_bindgen]
pub fn grammar() -> String {
    grammar::emit_grammar(&Registry::builtin())
}

/// Description text of a library game, e.g. `hex5`.
#[wasm_bindgen]
pub fn library_text(id: &str) -> Option<String> {
    library::text(id).map(String::from)
}

#[wasm_bindgen]
pub fn library_ids() -> String {
    serde_json::to_string(&library::GAMES.iter().map(|g| g.0).collect::<Vec<_>>())
        .unwrap_or_default()
}

#[wasm_bindgen]
pub struct Game(Session);

#[wasm_bindgen]
impl Game {
    #[wasm_bindgen(constructor)]
    pub fn new(text: &str) -> Result<Game, JsError> {
        Session::new(text).map(Game).map_err(|e| JsError::new(&e))
    }

    pub fn view(&self) -> String {
        self.0.view().to_string()
    }

    pub fn play(&mut self, label: &str) -> Result<String, JsError> {
        self.0
            .play(label)
            .map(|v| v.to_string())
            .map_err(|e| JsError::new(&e))
    }

    pub fn reply(&mut self, iterations: u32) -> Result<String, JsError> {
        self.0
            .reply(iterations as u64)
            .map(|v| v.to_string())
            .map_err(|e| JsError::new(&e))
    }
}
