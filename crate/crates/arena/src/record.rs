use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use ludeme::agents::Regime;
use ludeme::engine::Outcome;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How a match stopped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Termination {
    /// An end rule (or the full-board fallback) decided the game.
    Normal,
    /// The ply limit was reached; scored as a draw.
    MoveCap,
    Forfeit {
        seat: usize,
        reason: String,
    },
    Resigned {
        seat: usize,
    },
}

/// One completed match, stored as one JSON line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub match_id: String,
    pub game_id: String,
    /// Competitor ids by seat.
    pub agents: Vec<String>,
    pub regime: Regime,
    /// Moves in cell-label notation.
    pub moves: Vec<String>,
    /// Outcome per seat.
    pub result: Vec<Outcome>,
    /// Index of the deciding end rule, if one fired.
    pub rule: Option<usize>,
    pub seed: u64,
    /// Clock violations per seat.
    pub violations: Vec<u32>,
    pub started_at: u64,
    pub ended_at: u64,
    pub termination: Termination,
    /// Version hash per seat.
    pub agent_versions: Vec<String>,
    /// Tournament, league or session the match belongs to.
    pub event: String,
    pub round: Option<u32>,
}

impl MatchRecord {
    pub fn seat_of(&self, agent: &str) -> Option<usize> {
        self.agents.iter().position(|a| a == agent)
    }

    pub fn is_draw(&self) -> bool {
        self.result.iter().all(|o| *o == Outcome::Draw)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

/// Source of `started_at` / `ended_at`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Timestamp {
    /// Milliseconds since the Unix epoch.
    Wall,
    /// The match's schedule index at start and index plus plies at the
    /// end, so reruns produce identical files.
    Logical,
}

impl Timestamp {
    pub(crate) fn now_ms() -> u64 {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0)
    }
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("record store I/O: {0}")]
    Io(#[from] std::io::Error),
}

/// Append-only JSONL file of match records. One writer per file; the
/// internal lock serialises appends from threads of that writer.
#[derive(Debug)]
pub struct RecordStore {
    path: PathBuf,
    lock: Mutex<()>,
}

impl RecordStore {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref().to_path_buf();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(RecordStore {
            path,
            lock: Mutex::new(()),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Where rejected records go.
    pub fn quarantine_path(&self) -> PathBuf {
        let mut name = self.path.file_name().unwrap_or_default().to_os_string();
        name.push(".quarantine");
        self.path.with_file_name(name)
    }

    pub fn append(&self, record: &MatchRecord) -> Result<(), StoreError> {
        self.append_all(std::slice::from_ref(record))
    }

    pub fn append_all(&self, records: &[MatchRecord]) -> Result<(), StoreError> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let mut file = OpenOptions::new().append(true).open(&self.path)?;
        let mut buf = String::new();
        for r in records {
            buf.push_str(&r.to_json_line());
            buf.push('\n');
        }
        file.write_all(buf.as_bytes())?;
        file.flush()?;
        Ok(())
    }

    /// Every line in order; lines that do not parse come back as errors
    /// carrying the raw text.
    pub fn read(&self) -> Result<Vec<Result<MatchRecord, String>>, StoreError> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let file = File::open(&self.path)?;
        let mut out = Vec::new();
        for line in BufReader::new(file).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            out.push(serde_json::from_str(&line).map_err(|_| line));
        }
        Ok(out)
    }

    /// The parseable records, in order.
    pub fn records(&self) -> Result<Vec<MatchRecord>, StoreError> {
        Ok(self.read()?.into_iter().filter_map(Result::ok).collect())
    }

    pub fn quarantine(&self, line: &str, reason: &str) -> Result<(), StoreError> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.quarantine_path())?;
        let entry = serde_json::json!({ "reason": reason, "line": line });
        writeln!(file, "{entry}")?;
        Ok(())
    }
}

#[cfg(test)]
pub(crate) fn sample_record() -> MatchRecord {
    MatchRecord {
        match_id: "m1".into(),
        game_id: "tictactoe".into(),
        agents: vec!["a".into(), "b".into()],
        regime: Regime::ForwardModel,
        moves: ["a1", "a2", "b1", "b2", "c1"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        result: vec![Outcome::Win, Outcome::Loss],
        rule: Some(0),
        seed: 7,
        violations: vec![0, 0],
        started_at: 0,
        ended_at: 5,
        termination: Termination::Normal,
        agent_versions: vec!["v1".into(), "v2".into()],
        event: "test".into(),
        round: Some(1),
    }
}
