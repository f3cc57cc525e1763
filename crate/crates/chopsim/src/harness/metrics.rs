//! Success counters and aggregated experiment metrics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Wilson 95% score interval. Always contains the point estimate.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.96f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counter {
    pub successes: u64,
    pub trials: u64,
}

impl Counter {
    pub fn add(&mut self, success: bool) {
        self.trials += 1;
        if success {
            self.successes += 1;
        }
    }

    pub fn add_many(&mut self, successes: u64, trials: u64) {
        self.successes += successes;
        self.trials += trials;
    }

    pub fn merge(&mut self, other: &Counter) {
        self.successes += other.successes;
        self.trials += other.trials;
    }

    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    pub fn wilson(&self) -> (f64, f64) {
        wilson_interval(self.successes, self.trials)
    }
}

/// Per-component and per-task tallies for one experiment run.
///
/// `runtime_seconds` is informational and excluded from serialization so
/// that reports from identical (spec, seed) runs are byte-identical.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub experiment: String,
    pub trials: u64,
    pub episode: Counter,
    /// Whole-scene detection: every object detected as exactly one correctly
    /// labeled instance.
    pub detection_scene: Counter,
    /// Per-object detection: the object's blob produced a detection.
    pub detection_object: Counter,
    /// Per-partial labeling: object-origin partials classified correctly
    /// (the segmentation oracle's calibration stream).
    pub segmentation_labels: Counter,
    /// Per-object mask quality: fused mask IoU >= 0.8 against ground truth,
    /// among detected singleton blobs.
    pub segmentation_object: Counter,
    /// Whole-scene mask quality: every detected object passed the IoU bar.
    pub segmentation_scene: Counter,
    /// Planned line hits the true target and matches the noiseless angle
    /// within 15 degrees.
    pub cut_planning: Counter,
    /// Predicted collider set equals the noiseless-geometry collider set.
    pub collision_prediction: Counter,
    /// Cut attempts that physically severed the target (clean or stuck).
    pub cut_execution: Counter,
    pub push_execution: Counter,
    pub disturb_execution: Counter,
    /// Per-(class, style) chop success, keyed `"class/style"`.
    pub cut_cells: BTreeMap<String, Counter>,
    /// Per-task episode success, keyed by task label.
    pub tasks: BTreeMap<String, Counter>,
    #[serde(skip)]
    pub runtime_seconds: f64,
}

impl Metrics {
    pub fn new(experiment: &str) -> Self {
        Metrics { experiment: experiment.to_string(), ..Default::default() }
    }

    /// Fold another metrics block into this one (same experiment).
    pub fn merge(&mut self, other: &Metrics) {
        self.trials += other.trials;
        self.episode.merge(&other.episode);
        self.detection_scene.merge(&other.detection_scene);
        self.detection_object.merge(&other.detection_object);
        self.segmentation_labels.merge(&other.segmentation_labels);
        self.segmentation_object.merge(&other.segmentation_object);
        self.segmentation_scene.merge(&other.segmentation_scene);
        self.cut_planning.merge(&other.cut_planning);
        self.collision_prediction.merge(&other.collision_prediction);
        self.cut_execution.merge(&other.cut_execution);
        self.push_execution.merge(&other.push_execution);
        self.disturb_execution.merge(&other.disturb_execution);
        for (key, counter) in &other.cut_cells {
            self.cut_cells.entry(key.clone()).or_default().merge(counter);
        }
        for (key, counter) in &other.tasks {
            self.tasks.entry(key.clone()).or_default().merge(counter);
        }
    }

    /// Named component counters, in report order.
    pub fn components(&self) -> Vec<(&'static str, Counter)> {
        vec![
            ("episode", self.episode),
            ("detection_scene", self.detection_scene),
            ("detection_object", self.detection_object),
            ("segmentation_labels", self.segmentation_labels),
            ("segmentation_object", self.segmentation_object),
            ("segmentation_scene", self.segmentation_scene),
            ("cut_planning", self.cut_planning),
            ("collision_prediction", self.collision_prediction),
            ("cut_execution", self.cut_execution),
            ("push_execution", self.push_execution),
            ("disturb_execution", self.disturb_execution),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_point_estimate() {
        for &(s, n) in &[(0u64, 10u64), (10, 10), (7, 10), (934, 1000), (1, 1000), (0, 0)] {
            let (lo, hi) = wilson_interval(s, n);
            let p = if n == 0 { 0.0 } else { s as f64 / n as f64 };
            assert!(lo <= p + 1e-12 && p <= hi + 1e-12, "({s},{n}): [{lo},{hi}] vs {p}");
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }

    #[test]
    fn wilson_narrows_with_n() {
        let (lo1, hi1) = wilson_interval(70, 100);
        let (lo2, hi2) = wilson_interval(700, 1000);
        assert!(hi2 - lo2 < hi1 - lo1);
    }

    #[test]
    fn merge_adds_counters() {
        let mut a = Metrics::new("exp1");
        a.episode.add(true);
        a.cut_cells.entry("apple/even".into()).or_default().add(true);
        let mut b = Metrics::new("exp1");
        b.episode.add(false);
        b.trials = 1;
        b.cut_cells.entry("apple/even".into()).or_default().add(false);
        a.merge(&b);
        assert_eq!(a.episode, Counter { successes: 1, trials: 2 });
        assert_eq!(a.cut_cells["apple/even"], Counter { successes: 1, trials: 2 });
    }
}
