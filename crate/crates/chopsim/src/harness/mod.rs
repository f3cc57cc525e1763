//! Seeded experiment runner reproducing the three experiment families:
//!
//! * exp1 — component evaluation on randomized clutter: vision, planning,
//!   collision prediction, and executor success rates, scored per object and
//!   per scene against ground truth, plus fixed executor-calibration cells.
//! * exp2 — single-object chop reliability per (class, style) cell.
//! * exp3 — multi-object goal-driven episodes over a task table.
//!
//! Trial `i` runs on a child seed derived from (master seed, i), so trials
//! are order-independent and the whole run is reproducible byte-for-byte.

mod metrics;
mod report;

pub use metrics::{wilson_interval, Counter, Metrics};
pub use report::{
    metrics_from_json, metrics_to_csv, metrics_to_json, write_csv, write_json, CSV_HEADER,
};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::SimConfig;
use crate::geometry::{Line, RasterMask};
use crate::perception::{observe, Observation, ObserveDiag, PerceptionConfig};
use crate::planner::{
    check_collisions, noiseless_plan_angle, plan_angle_matches, plan_cut, run_episode,
    select_target, CutPlanRecord, EpisodeProbe, EpisodeTrace, GoalEntry, GoalSpec, PlannerError,
};
use crate::primitives::{
    execute_cut, execute_disturb, execute_push, CutOutcome, CutPose, CutStyle,
};
use crate::rng::{child_seed, rng_from_seed};
use crate::scene::{
    generate_scene, generate_scene_with_counts, slice_shape, FoodClass, Scene, SceneError,
    SceneObject, SizeFraction, TemplateSet,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("scene generation failed after retries: {0}")]
    SceneGeneration(#[from] SceneError),
    #[error(transparent)]
    Planner(#[from] PlannerError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentFamily {
    Exp1ComponentEval,
    Exp2SingleChop,
    Exp3MultiObject,
}

impl ExperimentFamily {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentFamily::Exp1ComponentEval => "exp1",
            ExperimentFamily::Exp2SingleChop => "exp2",
            ExperimentFamily::Exp3MultiObject => "exp3",
        }
    }
}

impl std::str::FromStr for ExperimentFamily {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exp1" => Ok(ExperimentFamily::Exp1ComponentEval),
            "exp2" => Ok(ExperimentFamily::Exp2SingleChop),
            "exp3" => Ok(ExperimentFamily::Exp3MultiObject),
            _ => Err(()),
        }
    }
}

/// One multi-object task: initial per-class piece counts and the goal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaskSpec {
    pub label: String,
    pub initial: Vec<(FoodClass, u32)>,
    pub goal: GoalSpec,
}

/// The ten apple/cucumber task configurations used by the multi-object
/// experiments: (initial apples, initial cucumbers, target apples, target
/// cucumbers). Apples are chopped evenly; cucumbers into long pieces.
pub fn default_exp3_tasks() -> Vec<TaskSpec> {
    const ROWS: [(u32, u32, u32, u32); 10] = [
        (4, 2, 8, 3),
        (2, 2, 3, 4),
        (1, 2, 3, 4),
        (3, 0, 8, 0),
        (0, 4, 0, 8),
        (0, 5, 0, 8),
        (2, 1, 4, 3),
        (0, 5, 0, 7),
        (2, 0, 6, 0),
        (2, 0, 7, 0),
    ];
    ROWS.iter()
        .enumerate()
        .map(|(i, &(a0, c0, a1, c1))| {
            let mut initial = Vec::new();
            let mut entries = Vec::new();
            if a0 > 0 {
                initial.push((FoodClass::Apple, a0));
            }
            if c0 > 0 {
                initial.push((FoodClass::Cucumber, c0));
            }
            if a1 > 0 {
                entries.push(GoalEntry {
                    class: FoodClass::Apple,
                    target_count: a1,
                    style: CutStyle::Even,
                });
            }
            if c1 > 0 {
                entries.push(GoalEntry {
                    class: FoodClass::Cucumber,
                    target_count: c1,
                    style: CutStyle::Long,
                });
            }
            TaskSpec {
                label: format!("task_{:02}", i + 1),
                initial,
                goal: GoalSpec { entries },
            }
        })
        .collect()
}

/// A full experiment description. `trials` means scenes for exp1, trials per
/// (class, style) cell for exp2, and episodes for exp3 (tasks cycle).
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub family: ExperimentFamily,
    pub trials: u64,
    pub config: SimConfig,
    pub tasks: Vec<TaskSpec>,
    /// Keep episode traces in the output (exp1/exp3).
    pub collect_traces: bool,
}

impl ExperimentSpec {
    pub fn new(family: ExperimentFamily, trials: u64, config: SimConfig) -> Self {
        ExperimentSpec {
            family,
            trials,
            config,
            tasks: default_exp3_tasks(),
            collect_traces: false,
        }
    }
}

/// One line of the per-trial JSONL stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: u64,
    pub seed: u64,
    pub label: String,
    pub success: bool,
    pub cuts: u32,
}

#[derive(Debug)]
pub struct ExperimentOutput {
    pub metrics: Metrics,
    pub rows: Vec<TrialRow>,
    pub traces: Vec<EpisodeTrace>,
}

impl ExperimentOutput {
    pub fn rows_to_jsonl(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&serde_json::to_string(row).expect("row serializes"));
            out.push('\n');
        }
        out
    }

    pub fn traces_to_jsonl(&self) -> String {
        self.traces.iter().map(|t| t.to_jsonl()).collect()
    }
}

/// Run an experiment. Identical (spec, seed) runs produce identical outputs;
/// trials execute on a worker pool and aggregate in trial order.
pub fn run_experiment(spec: &ExperimentSpec, seed: u64) -> Result<ExperimentOutput, HarnessError> {
    let start = std::time::Instant::now();
    let templates = TemplateSet::standard();
    let mut output = match spec.family {
        ExperimentFamily::Exp1ComponentEval => run_exp1(spec, seed, &templates)?,
        ExperimentFamily::Exp2SingleChop => run_exp2(spec, seed, &templates)?,
        ExperimentFamily::Exp3MultiObject => run_exp3(spec, seed, &templates)?,
    };
    output.metrics.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(output)
}

/// Ground-truth component scorer fed by the episode probe hooks.
struct ComponentScorer<'a> {
    config: &'a SimConfig,
    scored_first_observe: bool,
    metrics: Metrics,
}

impl<'a> ComponentScorer<'a> {
    fn new(config: &'a SimConfig, experiment: &str) -> Self {
        ComponentScorer {
            config,
            scored_first_observe: false,
            metrics: Metrics::new(experiment),
        }
    }

    fn resolution(&self) -> f64 {
        self.config.perception.resolution_mm
    }
}

impl EpisodeProbe for ComponentScorer<'_> {
    fn on_observe(&mut self, scene: &Scene, obs: &Observation, diag: &ObserveDiag) {
        // Vision components are scored on the first (clean-scene) look only.
        if self.scored_first_observe {
            return;
        }
        self.scored_first_observe = true;
        let resolution = self.resolution();
        let m = &mut self.metrics;
        let mut scene_ok = true;
        let mut seg_scene_ok = true;
        for blob in &diag.blobs {
            for _ in &blob.member_ids {
                m.detection_object.add(blob.detected);
            }
            if !blob.detected || blob.member_ids.len() != 1 {
                scene_ok = false;
                continue;
            }
            let gt = scene.object(blob.member_ids[0]).expect("diag ids are live");
            if gt.class != blob.label {
                scene_ok = false;
            }
            m.segmentation_labels.add_many(
                blob.correctly_labeled_object_partials as u64,
                blob.object_partials as u64,
            );
            let iou_ok = match blob.fused_index {
                Some(i) => {
                    let gt_mask = RasterMask::from_polygon(&gt.shape, resolution)
                        .expect("scene shapes rasterize");
                    obs.objects[i].mask.iou(&gt_mask) >= 0.8
                }
                None => false,
            };
            m.segmentation_object.add(iou_ok);
            if !iou_ok {
                seg_scene_ok = false;
            }
        }
        m.detection_scene.add(scene_ok);
        m.segmentation_scene.add(seg_scene_ok);
    }

    fn on_plan(
        &mut self,
        scene: &Scene,
        _obs: &Observation,
        plan: &CutPlanRecord,
        resolved_target: Option<u32>,
    ) {
        let ok = resolved_target.is_some_and(|id| {
            let shape = &scene.object(id).expect("resolved id is live").shape;
            let crosses = shape.split(&Line::new(plan.pose.com, plan.pose.angle)).len() >= 2;
            let angle_ok = noiseless_plan_angle(shape, plan.style, self.resolution())
                .map(|noiseless| plan_angle_matches(plan.pose.angle, noiseless))
                .unwrap_or(false);
            crosses && angle_ok
        });
        self.metrics.cut_planning.add(ok);
    }

    fn on_collision_check(
        &mut self,
        scene: &Scene,
        obs: &Observation,
        plan: &CutPlanRecord,
        resolved_target: Option<u32>,
        colliders: &[usize],
    ) {
        let footprint = self.config.blade.footprint(&plan.pose);
        let truth: std::collections::BTreeSet<u32> = scene
            .objects
            .iter()
            .filter(|o| Some(o.id) != resolved_target)
            .filter(|o| {
                RasterMask::from_polygon(&o.shape, self.resolution())
                    .map(|m| m.overlaps_rect(&footprint))
                    .unwrap_or(false)
            })
            .map(|o| o.id)
            .collect();
        let mut predicted = std::collections::BTreeSet::new();
        let mut all_resolved = true;
        for &i in colliders {
            match scene.object_at(obs.objects[i].centroid) {
                Some(o) => {
                    predicted.insert(o.id);
                }
                None => all_resolved = false,
            }
        }
        self.metrics.collision_prediction.add(all_resolved && predicted == truth);
    }

    fn on_push(&mut self, executed: bool, success: bool) {
        if executed {
            self.metrics.push_execution.add(success);
        }
    }

    fn on_cut(&mut self, outcome: CutOutcome) {
        self.metrics
            .cut_execution
            .add(matches!(outcome, CutOutcome::Clean | CutOutcome::Stuck));
    }

    fn on_disturb(&mut self, applied: bool) {
        self.metrics.disturb_execution.add(applied);
    }
}

struct TrialOutput {
    metrics: Metrics,
    row: TrialRow,
    trace: Option<EpisodeTrace>,
}

fn fold_trials(
    experiment: &str,
    trials: Vec<Result<TrialOutput, HarnessError>>,
) -> Result<ExperimentOutput, HarnessError> {
    let mut metrics = Metrics::new(experiment);
    let mut rows = Vec::with_capacity(trials.len());
    let mut traces = Vec::new();
    for trial in trials {
        let trial = trial?;
        metrics.merge(&trial.metrics);
        rows.push(trial.row);
        if let Some(trace) = trial.trace {
            traces.push(trace);
        }
    }
    metrics.trials = rows.len() as u64;
    Ok(ExperimentOutput { metrics, rows, traces })
}

/// Generate a scene, retrying with derived seeds on (rare) placement
/// exhaustion; deterministic for a given base seed.
fn scene_with_retries(
    mut attempt: impl FnMut(u64) -> Result<Scene, SceneError>,
    base_seed: u64,
) -> Result<Scene, SceneError> {
    let mut last = None;
    for k in 0..10 {
        match attempt(child_seed(base_seed, 100 + k)) {
            Ok(scene) => return Ok(scene),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt ran"))
}

fn run_exp1(
    spec: &ExperimentSpec,
    seed: u64,
    templates: &TemplateSet,
) -> Result<ExperimentOutput, HarnessError> {
    let cfg = &spec.config;
    let results: Vec<Result<TrialOutput, HarnessError>> = (0..spec.trials)
        .into_par_iter()
        .map(|i| {
            let trial_seed = child_seed(seed, i);
            let scene = scene_with_retries(
                |s| generate_scene(&cfg.scene_gen, templates, s),
                trial_seed,
            )?;
            let mut aux = rng_from_seed(child_seed(trial_seed, 1));
            let target = &scene.objects[aux.random_range(0..scene.objects.len())];
            let class = target.class;
            let goal = GoalSpec {
                entries: vec![GoalEntry {
                    class,
                    target_count: scene.count_of(class) as u32 + 1,
                    style: CutStyle::Even,
                }],
            };
            let mut scorer = ComponentScorer::new(cfg, "exp1");
            let episode = run_episode(
                &scene,
                &goal,
                cfg,
                templates,
                child_seed(trial_seed, 2),
                &mut scorer,
            )?;
            let mut metrics = scorer.metrics;
            metrics.episode.add(episode.success);
            let cuts = episode
                .trace
                .events
                .iter()
                .filter(|e| matches!(e, crate::planner::TraceEvent::Cut { .. }))
                .count() as u32;
            Ok(TrialOutput {
                metrics,
                row: TrialRow {
                    trial: i,
                    seed: trial_seed,
                    label: class.name().to_string(),
                    success: episode.success,
                    cuts,
                },
                trace: spec.collect_traces.then_some(episode.trace),
            })
        })
        .collect();
    let mut output = fold_trials("exp1", results)?;

    // Executor calibration cells: fixed scenes, 1000 Bernoulli trials each,
    // mirroring the per-component disturb/push success rows.
    let (disturb_scene, disturb_pose) = stuck_pair_fixture(templates);
    for k in 0..1000u64 {
        let mut rng = rng_from_seed(child_seed(seed, 1_000_000 + k));
        let cutoff = cfg.perception.merge_cutoff_mm();
        let (_, result) =
            execute_disturb(&disturb_scene, &disturb_pose, cutoff, &cfg.execution, &mut rng)
            .map_err(PlannerError::from)?;
        output.metrics.disturb_execution.add(result.applied);
    }
    let (push_scene, interferer, target, footprint) = push_fixture(templates);
    for k in 0..1000u64 {
        let mut rng = rng_from_seed(child_seed(seed, 2_000_000 + k));
        let (_, result) = execute_push(
            &push_scene,
            interferer,
            target,
            &footprint,
            &cfg.execution,
            &mut rng,
        )
        .map_err(PlannerError::from)?;
        output.metrics.push_execution.add(result.success);
    }
    Ok(output)
}

fn run_exp2(
    spec: &ExperimentSpec,
    seed: u64,
    templates: &TemplateSet,
) -> Result<ExperimentOutput, HarnessError> {
    let cfg = &spec.config;
    let cells: Vec<(FoodClass, CutStyle)> = FoodClass::ALL
        .into_iter()
        .flat_map(|c| [(c, CutStyle::Even), (c, CutStyle::Long)])
        .collect();
    let total = cells.len() as u64 * spec.trials;
    let results: Vec<Result<TrialOutput, HarnessError>> = (0..total)
        .into_par_iter()
        .map(|i| {
            let (class, style) = cells[(i / spec.trials) as usize];
            let trial_seed = child_seed(seed, i);
            let mut rng = rng_from_seed(trial_seed);
            let scene = centered_single_object(cfg, templates, class, &mut rng)?;

            // Perception runs noiselessly here: the cell isolates the chop.
            let perfect = PerceptionConfig {
                p_detect: 1.0,
                p_label: 1.0,
                ..cfg.perception.clone()
            };
            let obs = observe(&scene, &perfect, &mut rng);
            let target_index =
                select_target(&obs, class).expect("the only object is visible");
            let plan = plan_cut(&obs, target_index, style)
                .expect("a whole object mask orients a cut");
            let target_id = scene
                .object_at(plan.pose.com)
                .expect("observed centroid lies inside the object")
                .id;
            let (_, outcome) = execute_cut(
                &scene,
                target_id,
                &plan.pose,
                style,
                &cfg.execution,
                templates,
                &mut rng,
            )
            .map_err(PlannerError::from)?;
            let success = matches!(outcome, CutOutcome::Clean | CutOutcome::Stuck);
            let label = format!("{class}/{style}");
            let mut metrics = Metrics::new("exp2");
            metrics.cut_execution.add(success);
            metrics.cut_cells.entry(label.clone()).or_default().add(success);
            Ok(TrialOutput {
                metrics,
                row: TrialRow { trial: i, seed: trial_seed, label, success, cuts: 1 },
                trace: None,
            })
        })
        .collect();
    fold_trials("exp2", results)
}

fn run_exp3(
    spec: &ExperimentSpec,
    seed: u64,
    templates: &TemplateSet,
) -> Result<ExperimentOutput, HarnessError> {
    let cfg = &spec.config;
    assert!(!spec.tasks.is_empty(), "exp3 needs at least one task");
    let results: Vec<Result<TrialOutput, HarnessError>> = (0..spec.trials)
        .into_par_iter()
        .map(|i| {
            let task = &spec.tasks[(i % spec.tasks.len() as u64) as usize];
            let trial_seed = child_seed(seed, i);
            let scene = scene_with_retries(
                |s| {
                    let mut rng = rng_from_seed(s);
                    generate_scene_with_counts(
                        cfg.scene_gen.board,
                        &task.initial,
                        &cfg.scene_gen,
                        templates,
                        &mut rng,
                    )
                },
                trial_seed,
            )?;
            let mut scorer = ComponentScorer::new(cfg, "exp3");
            let episode = run_episode(
                &scene,
                &task.goal,
                cfg,
                templates,
                child_seed(trial_seed, 1),
                &mut scorer,
            )?;
            let mut metrics = scorer.metrics;
            metrics.episode.add(episode.success);
            metrics.tasks.entry(task.label.clone()).or_default().add(episode.success);
            let cuts = episode
                .trace
                .events
                .iter()
                .filter(|e| matches!(e, crate::planner::TraceEvent::Cut { .. }))
                .count() as u32;
            Ok(TrialOutput {
                metrics,
                row: TrialRow {
                    trial: i,
                    seed: trial_seed,
                    label: task.label.clone(),
                    success: episode.success,
                    cuts,
                },
                trace: spec.collect_traces.then_some(episode.trace),
            })
        })
        .collect();
    fold_trials("exp3", results)
}

/// Single object of `class` (random fraction and rotation) centered on the
/// board.
fn centered_single_object(
    cfg: &SimConfig,
    templates: &TemplateSet,
    class: FoodClass,
    rng: &mut crate::rng::SimRng,
) -> Result<Scene, HarnessError> {
    let fractions = &cfg.scene_gen.size_fractions;
    let fraction_value = fractions[rng.random_range(0..fractions.len())];
    let fraction = SizeFraction::from_value(fraction_value)
        .expect("config fractions validated dyadic");
    let shape = slice_shape(templates.get(class), fraction, rng)?;
    let theta = rng.random_range(0.0..std::f64::consts::TAU);
    let c = shape.centroid();
    let rotated = shape.rotate_about(c, theta);
    let rc = rotated.centroid();
    let board = cfg.scene_gen.board;
    let centered =
        rotated.translate(board.width_mm / 2.0 - rc.x, board.height_mm / 2.0 - rc.y);
    let mut scene = Scene::new(board);
    scene.objects.push(SceneObject {
        id: 0,
        class,
        size_fraction: fraction,
        shape: centered,
        parent_id: None,
    });
    scene.next_id = 1;
    Ok(scene)
}

/// Two abutting apple halves at board center with the cut pose between them.
fn stuck_pair_fixture(templates: &TemplateSet) -> (Scene, CutPose) {
    let apple = templates.get(FoodClass::Apple).base_polygon.clone();
    let board = crate::scene::Board::default();
    let c = apple.centroid();
    let centered = apple.translate(board.width_mm / 2.0 - c.x, board.height_mm / 2.0 - c.y);
    let pose = CutPose::new(centered.centroid(), std::f64::consts::FRAC_PI_2);
    let pieces = centered.split(&pose.line());
    let mut scene = Scene::new(board);
    scene.objects.push(SceneObject {
        id: 0,
        class: FoodClass::Apple,
        size_fraction: SizeFraction::WHOLE,
        shape: centered,
        parent_id: None,
    });
    scene.next_id = 1;
    let scene = scene.replace_object(0, pieces).expect("fixture apple splits");
    (scene, pose)
}

/// Target at center, interferer 100 mm east, horizontal blade across both.
fn push_fixture(templates: &TemplateSet) -> (Scene, u32, u32, crate::geometry::OrientedRect) {
    let apple = templates.get(FoodClass::Apple).base_polygon.clone();
    let board = crate::scene::Board::default();
    let c = apple.centroid();
    let center = crate::geometry::Point2::new(board.width_mm / 2.0 - 60.0, board.height_mm / 2.0);
    let target_shape = apple.translate(center.x - c.x, center.y - c.y);
    let interferer_shape = apple.translate(center.x + 100.0 - c.x, center.y - c.y);
    let mut scene = Scene::new(board);
    scene.objects.push(SceneObject {
        id: 0,
        class: FoodClass::Apple,
        size_fraction: SizeFraction::WHOLE,
        shape: target_shape,
        parent_id: None,
    });
    scene.objects.push(SceneObject {
        id: 1,
        class: FoodClass::Apple,
        size_fraction: SizeFraction::WHOLE,
        shape: interferer_shape,
        parent_id: None,
    });
    scene.next_id = 2;
    let footprint = crate::geometry::OrientedRect::new(center, 200.0, 5.0, 0.0);
    (scene, 1, 0, footprint)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp2_with_forced_success_is_perfect() {
        let mut cfg = SimConfig::default();
        cfg.make_perfect();
        let spec = ExperimentSpec::new(ExperimentFamily::Exp2SingleChop, 20, cfg);
        let out = run_experiment(&spec, 3).unwrap();
        assert_eq!(out.metrics.cut_cells.len(), 6);
        for (cell, counter) in &out.metrics.cut_cells {
            assert_eq!(counter.trials, 20);
            assert_eq!(counter.successes, 20, "cell {cell}");
        }
        assert_eq!(out.rows.len(), 120);
    }

    #[test]
    fn experiment_outputs_are_reproducible() {
        let spec = ExperimentSpec {
            collect_traces: true,
            ..ExperimentSpec::new(ExperimentFamily::Exp3MultiObject, 10, SimConfig::default())
        };
        let a = run_experiment(&spec, 7).unwrap();
        let b = run_experiment(&spec, 7).unwrap();
        assert_eq!(metrics_to_csv(&a.metrics), metrics_to_csv(&b.metrics));
        assert_eq!(a.rows_to_jsonl(), b.rows_to_jsonl());
        assert_eq!(a.traces_to_jsonl(), b.traces_to_jsonl());
        let mut mb = b.metrics.clone();
        mb.runtime_seconds = a.metrics.runtime_seconds;
        assert_eq!(a.metrics, mb);
    }

    #[test]
    fn trial_rows_carry_distinct_seeds() {
        let spec = ExperimentSpec::new(ExperimentFamily::Exp3MultiObject, 30, SimConfig::default());
        let out = run_experiment(&spec, 11).unwrap();
        let mut seeds: Vec<u64> = out.rows.iter().map(|r| r.seed).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 30);
    }

    #[test]
    fn exp1_scores_components_on_perfect_config() {
        let mut cfg = SimConfig::default();
        cfg.make_perfect();
        let spec = ExperimentSpec::new(ExperimentFamily::Exp1ComponentEval, 15, cfg);
        let out = run_experiment(&spec, 5).unwrap();
        let m = &out.metrics;
        assert_eq!(m.detection_object.rate(), 1.0);
        assert_eq!(m.detection_scene.rate(), 1.0);
        assert_eq!(m.segmentation_labels.rate(), 1.0);
        assert_eq!(m.segmentation_object.rate(), 1.0);
        assert_eq!(m.cut_planning.rate(), 1.0, "noiseless plans match themselves");
        assert_eq!(m.collision_prediction.rate(), 1.0);
        assert_eq!(m.episode.rate(), 1.0);
        // Executor calibration cells ran under the perfect config.
        assert!(m.disturb_execution.trials >= 1000);
        assert_eq!(m.disturb_execution.rate(), 1.0);
        assert!(m.push_execution.trials >= 1000);
        assert_eq!(m.push_execution.rate(), 1.0);
    }

    #[test]
    fn exp3_task_table_covers_ten_tasks() {
        let tasks = default_exp3_tasks();
        assert_eq!(tasks.len(), 10);
        assert_eq!(tasks[0].label, "task_01");
        assert_eq!(tasks[4].initial, vec![(FoodClass::Cucumber, 4)]);
        assert_eq!(tasks[4].goal.entries.len(), 1);
        assert_eq!(tasks[4].goal.entries[0].target_count, 8);
        let spec = ExperimentSpec::new(ExperimentFamily::Exp3MultiObject, 10, SimConfig::perfect());
        let out = run_experiment(&spec, 2).unwrap();
        assert_eq!(out.metrics.tasks.len(), 10, "each task ran once");
    }
}
