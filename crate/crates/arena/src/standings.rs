use std::collections::BTreeMap;

use ludeme::engine::Outcome;
use serde::{Deserialize, Serialize};

use crate::record::MatchRecord;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Standing {
    pub played: u32,
    pub wins: u32,
    pub draws: u32,
    pub losses: u32,
    /// 3 per win, 1 per draw.
    pub points: u32,
}

impl Standing {
    fn add(&mut self, outcome: Outcome) {
        self.played += 1;
        match outcome {
            Outcome::Win => {
                self.wins += 1;
                self.points += 3;
            }
            Outcome::Draw => {
                self.draws += 1;
                self.points += 1;
            }
            Outcome::Loss => self.losses += 1,
        }
    }
}

/// Points table over a set of match records.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Standings {
    rows: BTreeMap<String, Standing>,
}

impl Standings {
    /// An empty table listing every entrant, so those without games still appear.
    pub fn with_entrants<'a>(ids: impl IntoIterator<Item = &'a str>) -> Self {
        Standings {
            rows: ids
                .into_iter()
                .map(|id| (id.to_string(), Standing::default()))
                .collect(),
        }
    }

    pub fn from_records<'a>(records: impl IntoIterator<Item = &'a MatchRecord>) -> Self {
        let mut s = Standings::default();
        for r in records {
            s.add(r);
        }
        s
    }

    pub fn add(&mut self, record: &MatchRecord) {
        for (agent, outcome) in record.agents.iter().zip(&record.result) {
            self.rows.entry(agent.clone()).or_default().add(*outcome);
        }
    }

    pub fn get(&self, id: &str) -> Option<&Standing> {
        self.rows.get(id)
    }

    pub fn total_points(&self) -> u32 {
        self.rows.values().map(|s| s.points).sum()
    }

    /// Rows by points, then wins, then id.
    pub fn table(&self) -> Vec<(&str, &Standing)> {
        let mut rows: Vec<_> = self.rows.iter().map(|(k, v)| (k.as_str(), v)).collect();
        rows.sort_by(|a, b| {
            b.1.points
                .cmp(&a.1.points)
                .then(b.1.wins.cmp(&a.1.wins))
                .then(a.0.cmp(b.0))
        });
        rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}
