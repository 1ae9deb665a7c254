use ludeme::engine::{GameSpec, Outcome, Status};
use serde::{Deserialize, Serialize};

use crate::catalog::GameCatalog;
use crate::record::{MatchRecord, Termination};

/// Replays a record's moves and checks they reproduce its result.
pub fn replay(record: &MatchRecord, spec: &GameSpec) -> Result<(), String> {
    let players = spec.players();
    if record.agents.len() != players || record.result.len() != players {
        return Err(format!(
            "{} seats recorded for a {players}-player game",
            record.result.len()
        ));
    }
    let mut state = spec.initial_state();
    let mut status = spec.status(&state);
    for (ply, label) in record.moves.iter().enumerate() {
        if status.is_terminal() {
            return Err(format!("move {} `{label}` after the game ended", ply + 1));
        }
        let mv = spec
            .parse_move(label)
            .map_err(|e| format!("move {} `{label}`: {e}", ply + 1))?;
        let (next, s) = spec
            .step(&state, mv)
            .map_err(|e| format!("move {} `{label}`: {e}", ply + 1))?;
        state = next;
        status = s;
    }
    match (&record.termination, status) {
        (Termination::Normal, Status::Over(t)) => {
            if t.outcomes != record.result {
                return Err(format!(
                    "replay gives {:?}, record says {:?}",
                    t.outcomes, record.result
                ));
            }
            if t.rule != record.rule {
                return Err(format!(
                    "replay ends by rule {:?}, record says {:?}",
                    t.rule, record.rule
                ));
            }
            Ok(())
        }
        (Termination::Normal, Status::Ongoing) => {
            Err("game is not over after the recorded moves".into())
        }
        (Termination::MoveCap, Status::Ongoing) => {
            if record.result.iter().any(|o| *o != Outcome::Draw) || record.rule.is_some() {
                return Err("a move-capped game must be a draw".into());
            }
            Ok(())
        }
        (Termination::Forfeit { seat, .. } | Termination::Resigned { seat }, Status::Ongoing) => {
            if *seat >= players {
                return Err(format!("seat {seat} does not exist"));
            }
            let expected: Vec<Outcome> = (0..players)
                .map(|i| {
                    if i == *seat {
                        Outcome::Loss
                    } else {
                        Outcome::Win
                    }
                })
                .collect();
            if record.result != expected || record.rule.is_some() {
                return Err(format!(
                    "seat {seat} gave up but the result is {:?}",
                    record.result
                ));
            }
            Ok(())
        }
        (_, Status::Over(_)) => Err("game ended on the board but the record says otherwise".into()),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub checked: usize,
    /// (match id, reason) for every record that failed.
    pub failures: Vec<(String, String)>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Replays every record against the catalog.
pub fn audit<'a>(
    records: impl IntoIterator<Item = &'a MatchRecord>,
    catalog: &GameCatalog,
) -> AuditReport {
    let mut report = AuditReport::default();
    for r in records {
        report.checked += 1;
        let outcome = catalog
            .get(&r.game_id)
            .map_err(|e| e.to_string())
            .and_then(|spec| replay(r, spec));
        if let Err(reason) = outcome {
            report.failures.push((r.match_id.clone(), reason));
        }
    }
    report
}
