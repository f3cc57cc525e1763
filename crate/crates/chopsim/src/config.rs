//! Aggregated simulator configuration: scene generation, perception,
//! execution, blade, and loop guards, with calibrated defaults and a JSON
//! file format that accepts partial overrides.

use serde::{Deserialize, Serialize};

use crate::perception::PerceptionConfig;
use crate::primitives::{BladeSpec, ExecConfig, PerClass, StyleRates};
use crate::scene::SceneGenConfig;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerConfig {
    /// Episode iteration budget per unit of summed target count.
    pub max_iterations_per_target: u32,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig { max_iterations_per_target: 8 }
    }
}

/// Everything a run needs. `Default` is the calibrated two-class setup.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub scene_gen: SceneGenConfig,
    pub perception: PerceptionConfig,
    pub execution: ExecConfig,
    pub blade: BladeSpec,
    pub planner: PlannerConfig,
}

impl SimConfig {
    /// Set every success probability to 1 and every failure mode to 0:
    /// the noiseless pipeline.
    pub fn make_perfect(&mut self) {
        self.perception.p_detect = 1.0;
        self.perception.p_label = 1.0;
        self.execution.p_cut = PerClass {
            apple: StyleRates { even: 1.0, long: 1.0 },
            cucumber: StyleRates { even: 1.0, long: 1.0 },
            carrot: StyleRates { even: 1.0, long: 1.0 },
        };
        self.execution.p_stuck_given_cut = PerClass { apple: 0.0, cucumber: 0.0, carrot: 0.0 };
        self.execution.p_push = 1.0;
        self.execution.p_disturb = 1.0;
    }

    pub fn perfect() -> Self {
        let mut cfg = SimConfig::default();
        cfg.make_perfect();
        cfg
    }

    /// Stable fingerprint of the whole config, for trace headers.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        crate::rng::fnv1a64_hex(json.as_bytes())
    }

    pub fn from_json(json: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(json)
    }
}
