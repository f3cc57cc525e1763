//! Episode traces: an ordered log of every primitive invocation, outcome,
//! and observation. Serializes to JSON Lines with a header line carrying the
//! seed and a config digest; identical seeds reproduce identical bytes.

use serde::{Deserialize, Serialize};

use crate::primitives::{CutOutcome, CutStyle};
use crate::scene::FoodClass;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub seed: u64,
    pub goal: String,
    pub config_digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    /// One overhead look: `n_obs` of the goal class, the loop's expected
    /// `count`, and the total fused objects across classes.
    Observe { class: FoodClass, n_obs: usize, count: usize, objects: usize },
    PlanCut { target: usize, com: [f64; 2], angle: f64, style: CutStyle },
    CollisionCheck { colliders: Vec<usize> },
    Push { collider: usize, executed: bool, success: bool },
    Cut { com: [f64; 2], angle: f64, outcome: CutOutcome, count: usize },
    Disturb { com: [f64; 2], angle: f64, applied: bool },
    Terminate { reason: TerminateReason },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TerminateReason {
    Success,
    /// The goal class was absent at the first observation.
    NoTarget { class: FoodClass },
    /// The episode hit its iteration budget.
    IterationCap { class: FoodClass },
    /// Planning failed (degenerate target mask).
    PlanFailure { class: FoodClass },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeTrace {
    pub header: TraceHeader,
    pub events: Vec<TraceEvent>,
}

impl EpisodeTrace {
    pub fn success(&self) -> bool {
        matches!(
            self.events.last(),
            Some(TraceEvent::Terminate { reason: TerminateReason::Success })
        )
    }

    /// One JSON object per line: header first, then each event.
    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for event in &self.events {
            out.push_str(&serde_json::to_string(event).expect("event serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, serde_json::Error> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: TraceHeader =
            serde_json::from_str(lines.next().unwrap_or("{}"))?;
        let events: Result<Vec<TraceEvent>, _> = lines.map(serde_json::from_str).collect();
        Ok(EpisodeTrace { header, events: events? })
    }
}
