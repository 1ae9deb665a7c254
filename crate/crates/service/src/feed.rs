use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use ludeme_arena::{EventKind, LiveEvent, MatchObserver};
use serde_json::{json, Value};
use tokio::sync::broadcast;

const CAPACITY: usize = 4096;

struct Inner {
    next_seq: u64,
    /// Position as of the last published event.
    state: Value,
    finished: bool,
}

/// One match's event stream. Publishing and subscribing share a lock, so a
/// subscriber's snapshot and its first live event never overlap or leave a gap.
pub struct Feed {
    match_id: String,
    inner: Mutex<Inner>,
    tx: broadcast::Sender<LiveEvent>,
}

impl Feed {
    fn new(match_id: &str) -> Self {
        let (tx, _) = broadcast::channel(CAPACITY);
        Feed {
            match_id: match_id.to_string(),
            inner: Mutex::new(Inner {
                next_seq: 0,
                state: json!({ "moves": [] }),
                finished: false,
            }),
            tx,
        }
    }

    /// Appends an event; its `seq` is reassigned to this feed's counter.
    pub fn publish(&self, kind: EventKind, payload: Value) {
        let mut inner = self.inner.lock().unwrap_or_else(|e| e.into_inner());
        match kind {
            EventKind::Snapshot => {
                if let Value::Object(map) = &payload {
                    for (k, v) in map {
                        inner.state[k] = v.clone();
                    }
                }
            }
            EventKind::Move => {
                if let Some(moves) = inner.state["moves"].as_array_mut() {
                    moves.push(payload["move"].clone());
                }
            }
            EventKind::Clock => inner.state["clock"] = payload.clone(),
            EventKind::Result => {
                inner.state["result"] = payload.clone();
                inner.finished = true;
            }
        }
        let event = LiveEvent {
            match_id: self.match_id.clone(),
            kind,
            payload,
            seq: inner.next_seq,
        };
        inner.next_seq += 1;
        let _ = self.tx.send(event);
    }

    /// A snapshot of the position so far plus a receiver for every later
    /// event. The snapshot carries the sequence number of the last event
    /// it includes.
    pub fn subscribe(&self) -> (LiveEvent, Option<broadcast::Receiver<LiveEvent>>) {
        let inner = self.inner.lock().unwrap_or_else(|e| e.into_inner());
        let snapshot = LiveEvent {
            match_id: self.match_id.clone(),
            kind: EventKind::Snapshot,
            payload: inner.state.clone(),
            seq: inner.next_seq.saturating_sub(1),
        };
        let rx = (!inner.finished).then(|| self.tx.subscribe());
        (snapshot, rx)
    }

    pub fn is_finished(&self) -> bool {
        self.inner
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .finished
    }
}

impl MatchObserver for Feed {
    fn event(&self, event: LiveEvent) {
        // The feed opens with its own snapshot; later ones would repeat it.
        if event.kind == EventKind::Snapshot
            && self
                .inner
                .lock()
                .unwrap_or_else(|e| e.into_inner())
                .next_seq
                > 0
        {
            return;
        }
        self.publish(event.kind, event.payload);
    }
}

/// Every feed the service knows, by match id.
#[derive(Default)]
pub struct Feeds {
    feeds: Mutex<HashMap<String, Arc<Feed>>>,
}

impl Feeds {
    pub fn open(&self, match_id: &str) -> Arc<Feed> {
        let mut feeds = self.feeds.lock().unwrap_or_else(|e| e.into_inner());
        feeds
            .entry(match_id.to_string())
            .or_insert_with(|| Arc::new(Feed::new(match_id)))
            .clone()
    }

    pub fn get(&self, match_id: &str) -> Option<Arc<Feed>> {
        self.feeds
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .get(match_id)
            .cloned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn late_subscribers_get_the_position_then_the_rest() {
        let feeds = Feeds::default();
        let feed = feeds.open("m");
        feed.publish(
            EventKind::Snapshot,
            json!({ "game_id": "hex5", "moves": [] }),
        );
        feed.publish(EventKind::Move, json!({ "move": "a1" }));
        let (snap, rx) = feed.subscribe();
        let mut rx = rx.unwrap();
        assert_eq!(snap.seq, 1);
        assert_eq!(snap.payload["moves"], json!(["a1"]));
        assert_eq!(snap.payload["game_id"], "hex5");
        feed.publish(EventKind::Move, json!({ "move": "b2" }));
        feed.publish(EventKind::Result, json!({ "result": ["Win", "Loss"] }));
        assert_eq!(rx.try_recv().unwrap().seq, 2);
        assert_eq!(rx.try_recv().unwrap().kind, EventKind::Result);
        let (done, rx) = feed.subscribe();
        assert!(rx.is_none());
        assert_eq!(done.seq, 3);
        assert!(feeds.get("nope").is_none());
    }
}
