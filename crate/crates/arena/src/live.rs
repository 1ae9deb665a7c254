use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    /// Full position, sent first to every new subscriber.
    Snapshot,
    Move,
    Clock,
    Result,
}

/// One entry of a match's live feed. `seq` starts at 0 and increases by
/// one per event of that match.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiveEvent {
    pub match_id: String,
    pub kind: EventKind,
    pub payload: serde_json::Value,
    pub seq: u64,
}

/// Receives live events while matches run.
pub trait MatchObserver: Send + Sync {
    fn event(&self, event: LiveEvent);
}
