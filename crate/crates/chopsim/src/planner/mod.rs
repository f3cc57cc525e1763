//! Goal-driven sequencing: target selection, cut planning (even/long
//! heuristics), collision checking, and the closed observe-plan-act loop.
//!
//! The loop body follows the pipeline's control flow exactly: observe the
//! goal class; when the expected count disagrees with the observed count,
//! disturb and re-observe (new slices assumed stuck); otherwise plan a cut
//! on the largest target, push every predicted collider, re-observe, cut
//! (incrementing the expected count — cuts are assumed successful), and
//! observe again.

mod goal;
mod trace;

pub use goal::{parse_goal, GoalEntry, GoalParseError, GoalParseErrorKind, GoalSpec};
pub use trace::{EpisodeTrace, TerminateReason, TraceEvent, TraceHeader};

use thiserror::Error;

use crate::config::SimConfig;
use crate::geometry::{angle_diff_pi, GeometryError, OrientedRect};
use crate::perception::{observe_with_diag, Observation, ObserveDiag};
use crate::primitives::{
    execute_cut, execute_disturb, execute_push, CutOutcome, CutPose, CutStyle, PrimitiveError,
};
use crate::rng::SimRng;
use crate::scene::{FoodClass, Scene, TemplateSet};

#[derive(Debug, Error)]
pub enum PlannerError {
    #[error(transparent)]
    Primitive(#[from] PrimitiveError),
    #[error(transparent)]
    Scene(#[from] crate::scene::SceneError),
}

/// A planned cut: which observation index to chop, where, and how.
#[derive(Debug, Clone, PartialEq)]
pub struct CutPlanRecord {
    pub target: usize,
    pub pose: CutPose,
    pub style: CutStyle,
}

/// Loop bookkeeping: expected piece count vs observed, and the iteration
/// budget spent so far (shared across an episode's class loops).
#[derive(Debug, Clone, Copy, Default)]
pub struct LoopState {
    pub count: usize,
    pub n_obs: usize,
    pub iterations: u32,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("observation holds no object of class {0}")]
    NoTargetOfClass(FoodClass),
    #[error("target mask is too small to orient a cut")]
    DegenerateTarget(#[from] GeometryError),
}

/// Pick the class-matching fused object of maximal area; ties go to the
/// smallest centroid (x, then y).
pub fn select_target(obs: &Observation, class: FoodClass) -> Result<usize, PlanError> {
    obs.objects
        .iter()
        .enumerate()
        .filter(|(_, o)| o.label == class)
        .max_by(|(_, a), (_, b)| {
            a.area_mm2
                .partial_cmp(&b.area_mm2)
                .unwrap()
                .then_with(|| {
                    (b.centroid.x, b.centroid.y)
                        .partial_cmp(&(a.centroid.x, a.centroid.y))
                        .unwrap()
                })
        })
        .map(|(i, _)| i)
        .ok_or(PlanError::NoTargetOfClass(class))
}

/// Plan a cut at the observed centroid: Even cuts run perpendicular to the
/// mask's longest diameter, Long cuts parallel to it.
pub fn plan_cut(
    obs: &Observation,
    target_index: usize,
    style: CutStyle,
) -> Result<CutPlanRecord, PlanError> {
    let target = &obs.objects[target_index];
    let chord = target.mask.longest_diameter()?;
    let theta = chord.angle();
    let angle = match style {
        CutStyle::Even => theta + std::f64::consts::FRAC_PI_2,
        CutStyle::Long => theta,
    };
    Ok(CutPlanRecord {
        target: target_index,
        pose: CutPose::new(target.centroid, angle),
        style,
    })
}

/// Indices of non-target fused objects the blade would touch at the planned
/// pose, sorted by overlap area descending (ties by index).
pub fn check_collisions(
    plan: &CutPlanRecord,
    obs: &Observation,
    blade: &crate::primitives::BladeSpec,
) -> Vec<usize> {
    let footprint = blade.footprint(&plan.pose);
    let mut hits: Vec<(usize, usize)> = obs
        .objects
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != plan.target)
        .filter_map(|(i, o)| {
            let cells = o.mask.rect_overlap_cells(&footprint);
            (cells > 0).then_some((i, cells))
        })
        .collect();
    hits.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    hits.into_iter().map(|(i, _)| i).collect()
}

/// Ground-truth hooks for metrics scorers; the trace stays perception-only.
#[allow(unused_variables)]
pub trait EpisodeProbe {
    fn on_observe(&mut self, scene: &Scene, obs: &Observation, diag: &ObserveDiag) {}
    fn on_plan(
        &mut self,
        scene: &Scene,
        obs: &Observation,
        plan: &CutPlanRecord,
        resolved_target: Option<u32>,
    ) {
    }
    fn on_collision_check(
        &mut self,
        scene: &Scene,
        obs: &Observation,
        plan: &CutPlanRecord,
        resolved_target: Option<u32>,
        colliders: &[usize],
    ) {
    }
    fn on_push(&mut self, executed: bool, success: bool) {}
    fn on_cut(&mut self, outcome: CutOutcome) {}
    fn on_disturb(&mut self, applied: bool) {}
}

/// Probe that records nothing.
pub struct NullProbe;

impl EpisodeProbe for NullProbe {}

enum ClassLoopEnd {
    Success,
    NoTarget,
    IterationCap,
    PlanFailure,
}

/// Everything an episode run produces.
#[derive(Debug)]
pub struct EpisodeResult {
    pub trace: EpisodeTrace,
    pub success: bool,
    pub final_scene: Scene,
}

/// Run the full goal: one class loop per entry, in order, threading the
/// scene. The episode succeeds iff every class loop reaches its target.
pub fn run_episode(
    scene: &Scene,
    goal: &GoalSpec,
    cfg: &SimConfig,
    templates: &TemplateSet,
    seed: u64,
    probe: &mut dyn EpisodeProbe,
) -> Result<EpisodeResult, PlannerError> {
    let mut rng = crate::rng::rng_from_seed(seed);
    let mut events: Vec<TraceEvent> = Vec::new();
    let mut state = LoopState::default();
    let max_iterations = cfg.planner.max_iterations_per_target * goal.total_target();
    let mut current = scene.clone();
    let mut reason = TerminateReason::Success;
    for entry in &goal.entries {
        let (next, end) = run_class_loop(
            &current,
            entry.class,
            entry.target_count,
            entry.style,
            cfg,
            templates,
            max_iterations,
            &mut state,
            &mut rng,
            &mut events,
            probe,
        )?;
        current = next;
        match end {
            ClassLoopEnd::Success => continue,
            ClassLoopEnd::NoTarget => {
                reason = TerminateReason::NoTarget { class: entry.class };
                break;
            }
            ClassLoopEnd::IterationCap => {
                reason = TerminateReason::IterationCap { class: entry.class };
                break;
            }
            ClassLoopEnd::PlanFailure => {
                reason = TerminateReason::PlanFailure { class: entry.class };
                break;
            }
        }
    }
    let success = matches!(reason, TerminateReason::Success);
    events.push(TraceEvent::Terminate { reason });
    Ok(EpisodeResult {
        trace: EpisodeTrace {
            header: TraceHeader {
                seed,
                goal: goal.to_string(),
                config_digest: cfg.digest(),
            },
            events,
        },
        success,
        final_scene: current,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_class_loop(
    scene: &Scene,
    class: FoodClass,
    n_target: u32,
    style: CutStyle,
    cfg: &SimConfig,
    templates: &TemplateSet,
    max_iterations: u32,
    state: &mut LoopState,
    rng: &mut SimRng,
    events: &mut Vec<TraceEvent>,
    probe: &mut dyn EpisodeProbe,
) -> Result<(Scene, ClassLoopEnd), PlannerError> {
    let n_target = n_target as usize;
    let mut scene = scene.clone();

    let (mut obs, diag) = observe_with_diag(&scene, &cfg.perception, rng);
    state.n_obs = obs.count(class);
    state.count = state.n_obs;
    events.push(TraceEvent::Observe {
        class,
        n_obs: state.n_obs,
        count: state.count,
        objects: obs.objects.len(),
    });
    probe.on_observe(&scene, &obs, &diag);
    if state.n_obs == 0 {
        return Ok((scene, ClassLoopEnd::NoTarget));
    }

    let mut last_pose: Option<CutPose> = None;
    while state.n_obs < n_target {
        if state.iterations >= max_iterations {
            return Ok((scene, ClassLoopEnd::IterationCap));
        }
        state.iterations += 1;

        if state.count != state.n_obs {
            // A new slice went undetected: assume stuck pieces at the last
            // cut pose and shake them apart.
            let pose = last_pose
                .expect("count can only diverge from n_obs after a cut");
            let (next, result) = execute_disturb(
                &scene,
                &pose,
                cfg.perception.merge_cutoff_mm(),
                &cfg.execution,
                rng,
            )?;
            scene = next;
            events.push(TraceEvent::Disturb {
                com: [pose.com.x, pose.com.y],
                angle: pose.angle,
                applied: result.applied,
            });
            probe.on_disturb(result.applied);

            let (next_obs, diag) = observe_with_diag(&scene, &cfg.perception, rng);
            obs = next_obs;
            state.n_obs = obs.count(class);
            events.push(TraceEvent::Observe {
                class,
                n_obs: state.n_obs,
                count: state.count,
                objects: obs.objects.len(),
            });
            probe.on_observe(&scene, &obs, &diag);
        } else {
            let Ok(target_index) = select_target(&obs, class) else {
                return Ok((scene, ClassLoopEnd::PlanFailure));
            };
            let Ok(plan) = plan_cut(&obs, target_index, style) else {
                return Ok((scene, ClassLoopEnd::PlanFailure));
            };
            let resolved_target = scene.object_at(plan.pose.com).map(|o| o.id);
            events.push(TraceEvent::PlanCut {
                target: plan.target,
                com: [plan.pose.com.x, plan.pose.com.y],
                angle: plan.pose.angle,
                style: plan.style,
            });
            probe.on_plan(&scene, &obs, &plan, resolved_target);

            let colliders = check_collisions(&plan, &obs, &cfg.blade);
            events.push(TraceEvent::CollisionCheck { colliders: colliders.clone() });
            probe.on_collision_check(&scene, &obs, &plan, resolved_target, &colliders);

            let footprint: OrientedRect = cfg.blade.footprint(&plan.pose);
            for &collider in &colliders {
                let interferer = scene.object_at(obs.objects[collider].centroid).map(|o| o.id);
                match (interferer, resolved_target) {
                    (Some(i), Some(t)) if i != t => {
                        let (next, result) =
                            execute_push(&scene, i, t, &footprint, &cfg.execution, rng)?;
                        scene = next;
                        events.push(TraceEvent::Push {
                            collider,
                            executed: true,
                            success: result.success,
                        });
                        probe.on_push(true, result.success);
                    }
                    _ => {
                        // The perceived collider resolves to nothing (or to
                        // the target itself); there is nothing to push.
                        events.push(TraceEvent::Push {
                            collider,
                            executed: false,
                            success: false,
                        });
                        probe.on_push(false, false);
                    }
                }
            }

            let (next_obs, diag) = observe_with_diag(&scene, &cfg.perception, rng);
            obs = next_obs;
            state.n_obs = obs.count(class);
            events.push(TraceEvent::Observe {
                class,
                n_obs: state.n_obs,
                count: state.count,
                objects: obs.objects.len(),
            });
            probe.on_observe(&scene, &obs, &diag);

            // The cut executes at the pre-push plan; the count increments
            // unconditionally (the loop assumes cuts succeed).
            let outcome = match scene.object_at(plan.pose.com).map(|o| o.id) {
                Some(id) => {
                    let (next, outcome) = execute_cut(
                        &scene,
                        id,
                        &plan.pose,
                        plan.style,
                        &cfg.execution,
                        templates,
                        rng,
                    )?;
                    scene = next;
                    outcome
                }
                None => CutOutcome::Missed,
            };
            state.count += 1;
            events.push(TraceEvent::Cut {
                com: [plan.pose.com.x, plan.pose.com.y],
                angle: plan.pose.angle,
                outcome,
                count: state.count,
            });
            probe.on_cut(outcome);
            last_pose = Some(plan.pose);

            let (next_obs, diag) = observe_with_diag(&scene, &cfg.perception, rng);
            obs = next_obs;
            state.n_obs = obs.count(class);
            events.push(TraceEvent::Observe {
                class,
                n_obs: state.n_obs,
                count: state.count,
                objects: obs.objects.len(),
            });
            probe.on_observe(&scene, &obs, &diag);
        }
    }
    Ok((scene, ClassLoopEnd::Success))
}

/// Angular tolerance (radians) within which a noisy plan counts as matching
/// the noiseless one.
pub const PLAN_ANGLE_TOLERANCE: f64 = 15.0 * std::f64::consts::PI / 180.0;

/// Noiseless reference plan angle for a ground-truth shape and style.
pub fn noiseless_plan_angle(
    shape: &crate::geometry::Polygon,
    style: CutStyle,
    resolution_mm: f64,
) -> Result<f64, GeometryError> {
    let mask = crate::geometry::RasterMask::from_polygon(shape, resolution_mm)?;
    let theta = mask.longest_diameter()?.angle();
    Ok(match style {
        CutStyle::Even => crate::geometry::normalize_angle_pi(theta + std::f64::consts::FRAC_PI_2),
        CutStyle::Long => theta,
    })
}

/// Whether a planned angle is within tolerance of the noiseless plan.
pub fn plan_angle_matches(planned: f64, noiseless: f64) -> bool {
    angle_diff_pi(planned, noiseless) <= PLAN_ANGLE_TOLERANCE
}
