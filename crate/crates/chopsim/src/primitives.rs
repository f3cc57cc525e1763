//! Stochastic executors for the cut, disturb, and push skills.
//!
//! Executors act on ground-truth scenes and return new scenes plus outcome
//! records. Success rates are Bernoulli draws from the execution config;
//! geometry (piece separation, rolls, push travel) models where things end
//! up when a draw lands either way.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{normalize_angle_pi, Line, OrientedRect, Point2, Polygon};
use crate::rng::SimRng;
use crate::scene::{clamp_to_board, FoodClass, Scene, SceneError, TemplateSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrimitiveError {
    #[error("unknown target object {0}")]
    UnknownTarget(u32),
    #[error("push requires two distinct objects, got {0} twice")]
    IdenticalPushIds(u32),
    #[error(transparent)]
    Scene(#[from] SceneError),
}

/// Blade footprint dimensions. The default comfortably exceeds the longest
/// template diameter, so a cut line is effectively infinite across any piece.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BladeSpec {
    pub length_mm: f64,
    pub width_mm: f64,
}

impl Default for BladeSpec {
    fn default() -> Self {
        BladeSpec { length_mm: 200.0, width_mm: 5.0 }
    }
}

impl BladeSpec {
    pub fn footprint(&self, pose: &CutPose) -> OrientedRect {
        OrientedRect::new(pose.com, self.length_mm, self.width_mm, pose.angle)
    }
}

/// What actually happened when the blade came down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutOutcome {
    /// Separated pieces, countable by perception.
    Clean,
    /// Cut but the pieces abut at the cut line.
    Stuck,
    /// The object rolled out from under the blade, uncut.
    Rolled,
    /// The cut line missed the object interior; nothing changed.
    Missed,
}

/// Where and at what rotation to chop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutPose {
    pub com: Point2,
    pub angle: f64,
}

impl CutPose {
    pub fn new(com: Point2, angle: f64) -> Self {
        CutPose { com, angle: normalize_angle_pi(angle) }
    }

    pub fn line(&self) -> Line {
        Line::new(self.com, self.angle)
    }
}

/// Blade orientation relative to the target's longest diameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutStyle {
    /// Perpendicular to the longest diameter: evenly sized pieces.
    Even,
    /// Parallel to it: long, thin pieces.
    Long,
}

impl std::fmt::Display for CutStyle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CutStyle::Even => "even",
            CutStyle::Long => "long",
        })
    }
}

impl std::str::FromStr for CutStyle {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "even" => Ok(CutStyle::Even),
            "long" => Ok(CutStyle::Long),
            _ => Err(()),
        }
    }
}

/// Per-class success rates for the two cut styles.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StyleRates {
    pub even: f64,
    pub long: f64,
}

impl StyleRates {
    fn rate(&self, style: CutStyle) -> f64 {
        match style {
            CutStyle::Even => self.even,
            CutStyle::Long => self.long,
        }
    }
}

/// A value per food class.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerClass<T> {
    pub apple: T,
    pub cucumber: T,
    pub carrot: T,
}

impl<T: Copy> PerClass<T> {
    pub fn get(&self, class: FoodClass) -> T {
        match class {
            FoodClass::Apple => self.apple,
            FoodClass::Cucumber => self.cucumber,
            FoodClass::Carrot => self.carrot,
        }
    }
}

/// Execution calibration. Cut rates default to the single-chop table
/// (per class and style); push and disturb to their component rates.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExecConfig {
    pub p_cut: PerClass<StyleRates>,
    /// Probability a successful cut leaves the pieces stuck together.
    pub p_stuck_given_cut: PerClass<f64>,
    pub p_push: f64,
    pub p_disturb: f64,
    /// Total gap opened between clean-cut pieces (half per side).
    pub separation_mm: f64,
    /// Roll travel when a cut fails on a rollable object.
    pub roll_distance_mm: (f64, f64),
    /// Margin by which a pushed object must clear the blade footprint.
    pub push_clearance_mm: f64,
    /// Minimum clearance kept between a relocated piece and other objects;
    /// relocations that would violate it are withheld (pieces collide rather
    /// than interpenetrate).
    pub piece_clearance_mm: f64,
}

impl Default for ExecConfig {
    fn default() -> Self {
        ExecConfig {
            p_cut: PerClass {
                apple: StyleRates { even: 1.0, long: 1.0 },
                cucumber: StyleRates { even: 1.0, long: 0.8 },
                carrot: StyleRates { even: 0.8, long: 0.4 },
            },
            p_stuck_given_cut: PerClass { apple: 0.1, cucumber: 0.0, carrot: 0.0 },
            p_push: 0.692,
            p_disturb: 0.667,
            separation_mm: 6.0,
            roll_distance_mm: (20.0, 60.0),
            push_clearance_mm: 5.0,
            piece_clearance_mm: 4.5,
        }
    }
}

impl ExecConfig {
    pub fn cut_rate(&self, class: FoodClass, style: CutStyle) -> f64 {
        self.p_cut.get(class).rate(style)
    }
}

/// Result of a disturb invocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisturbResult {
    /// The Bernoulli draw: did the wiggle take effect at all.
    pub applied: bool,
    /// Stuck pairs near the pose that were actually separated.
    pub pairs_moved: usize,
}

/// Result of a push invocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PushResult {
    pub success: bool,
    pub distance_mm: f64,
}

/// Clearance check for relocating `candidate` into a scene, ignoring some ids.
fn clear_of_others(scene: &Scene, candidate: &Polygon, ignore: &[u32], clearance: f64) -> bool {
    scene.objects.iter().filter(|o| !ignore.contains(&o.id)).all(|o| {
        o.shape.bbox().gap_to(&candidate.bbox()) >= clearance
            || o.shape.distance_to(candidate) >= clearance
    })
}

/// Chop `target_id` along the pose line.
///
/// With probability `p_cut(class, style)` the shape splits; a stuck draw
/// leaves the pieces abutting, otherwise each piece shifts half the
/// separation away from the cut line (withheld if that would crowd another
/// object). A failed draw rolls the object perpendicular to its long axis
/// (random direction for non-rollable classes). A line that misses the
/// interior changes nothing.
pub fn execute_cut(
    scene: &Scene,
    target_id: u32,
    pose: &CutPose,
    style: CutStyle,
    config: &ExecConfig,
    templates: &TemplateSet,
    rng: &mut SimRng,
) -> Result<(Scene, CutOutcome), PrimitiveError> {
    let target = scene.object(target_id).ok_or(PrimitiveError::UnknownTarget(target_id))?;
    let line = pose.line();
    let pieces = target.shape.split(&line);
    if pieces.len() < 2 {
        return Ok((scene.clone(), CutOutcome::Missed));
    }
    let class = target.class;
    if rng.random::<f64>() < config.cut_rate(class, style) {
        let stuck = rng.random::<f64>() < config.p_stuck_given_cut.get(class);
        if stuck {
            let out = scene.replace_object(target_id, pieces)?;
            return Ok((clamp_to_board(&out)?, CutOutcome::Stuck));
        }
        let (nx, ny) = line.normal();
        let half = config.separation_mm * 0.5;
        let placed: Vec<Polygon> = pieces
            .into_iter()
            .map(|piece| {
                let side = line.signed_distance(piece.centroid()).signum();
                let moved = piece.translate(side * half * nx, side * half * ny);
                if clear_of_others(scene, &moved, &[target_id], config.piece_clearance_mm) {
                    moved
                } else {
                    piece
                }
            })
            .collect();
        let out = scene.replace_object(target_id, placed)?;
        Ok((clamp_to_board(&out)?, CutOutcome::Clean))
    } else {
        let (dx, dy) = roll_direction(&target.shape, class, templates, rng);
        let dist = rng.random_range(config.roll_distance_mm.0..=config.roll_distance_mm.1);
        let out = scene.translate_object(target_id, dist * dx, dist * dy)?;
        Ok((clamp_to_board(&out)?, CutOutcome::Rolled))
    }
}

/// Rollable classes roll perpendicular to their current long axis; everything
/// else scoots in a uniformly random direction.
fn roll_direction(
    shape: &Polygon,
    class: FoodClass,
    templates: &TemplateSet,
    rng: &mut SimRng,
) -> (f64, f64) {
    if templates.rollable_axis(class).is_some() {
        let (a, b) = shape.longest_vertex_chord();
        let len = a.distance_to(b);
        let (ax, ay) = ((b.x - a.x) / len, (b.y - a.y) / len);
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        (-ay * sign, ax * sign)
    } else {
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        (theta.cos(), theta.sin())
    }
}

/// Return to the last cut pose and wiggle: with probability `p_disturb`,
/// every stuck pair whose members touch the pose region is pried apart by
/// moving each piece away from the cut line (direction drawn per piece, with
/// fallbacks that avoid crowding bystanders).
///
/// `stuck_cutoff_mm` is the perception-side merge cutoff: any pair the vision
/// stack would read as one object counts as stuck here.
pub fn execute_disturb(
    scene: &Scene,
    last_pose: &CutPose,
    stuck_cutoff_mm: f64,
    config: &ExecConfig,
    rng: &mut SimRng,
) -> Result<(Scene, DisturbResult), PrimitiveError> {
    let applied = rng.random::<f64>() < config.p_disturb;
    if !applied {
        return Ok((scene.clone(), DisturbResult { applied: false, pairs_moved: 0 }));
    }
    let near = 2.0 * stuck_cutoff_mm;
    let ids: Vec<u32> = scene.objects.iter().map(|o| o.id).collect();
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for i in 0..ids.len() {
        for j in (i + 1)..ids.len() {
            let a = scene.object(ids[i]).unwrap();
            let b = scene.object(ids[j]).unwrap();
            if a.shape.distance_to(&b.shape) <= stuck_cutoff_mm
                && a.shape.distance_to_point(last_pose.com) <= near
                && b.shape.distance_to_point(last_pose.com) <= near
            {
                pairs.push((ids[i], ids[j]));
            }
        }
    }
    let mut out = scene.clone();
    let mut moved = 0;
    let line = last_pose.line();
    for (a, b) in pairs {
        let mut did_move = false;
        for id in [a, b] {
            let shape = out.object(id).expect("pair ids persist").shape.clone();
            let side = line.signed_distance(shape.centroid()).signum();
            if let Some(candidate) =
                disturbed_placement(&out, &shape, id, &line, side, config, rng)
            {
                out = out.translate_object(
                    id,
                    candidate.x,
                    candidate.y,
                )?;
                did_move = true;
            }
        }
        if did_move {
            moved += 1;
        }
    }
    Ok((clamp_to_board(&out)?, DisturbResult { applied: true, pairs_moved: moved }))
}

/// Pick a displacement for one stuck piece: a few draws from the half-plane
/// cone on its side of the cut line, then escapes parallel to the line, then
/// give up.
fn disturbed_placement(
    scene: &Scene,
    shape: &Polygon,
    id: u32,
    line: &Line,
    side: f64,
    config: &ExecConfig,
    rng: &mut SimRng,
) -> Option<Point2> {
    let (nx, ny) = line.normal();
    let (dirx, diry) = (side * nx, side * ny);
    let step = config.separation_mm;
    let mut candidates: Vec<(f64, f64)> = Vec::with_capacity(12);
    candidates.push((dirx, diry));
    for _ in 0..9 {
        let phi = rng.random_range(-std::f64::consts::FRAC_PI_3..std::f64::consts::FRAC_PI_3);
        let (s, c) = phi.sin_cos();
        candidates.push((dirx * c - diry * s, dirx * s + diry * c));
    }
    let (tx, ty) = line.direction();
    candidates.push((tx, ty));
    candidates.push((-tx, -ty));
    for (dx, dy) in candidates {
        let moved = shape.translate(step * dx, step * dy);
        if scene.board.contains_polygon(&moved)
            && clear_of_others(scene, &moved, &[id], config.piece_clearance_mm)
        {
            return Some(Point2::new(step * dx, step * dy));
        }
    }
    None
}

/// Push the interferer straight away from the target until it clears the
/// planned blade footprint (plus clearance), in 5 mm steps up to 40 steps.
/// A failed draw travels one step only.
pub fn execute_push(
    scene: &Scene,
    interferer_id: u32,
    target_id: u32,
    footprint: &OrientedRect,
    config: &ExecConfig,
    rng: &mut SimRng,
) -> Result<(Scene, PushResult), PrimitiveError> {
    if interferer_id == target_id {
        return Err(PrimitiveError::IdenticalPushIds(target_id));
    }
    let interferer =
        scene.object(interferer_id).ok_or(PrimitiveError::UnknownTarget(interferer_id))?;
    let target = scene.object(target_id).ok_or(PrimitiveError::UnknownTarget(target_id))?;
    let ic = interferer.shape.centroid();
    let tc = target.shape.centroid();
    let dist = tc.distance_to(ic);
    let (dx, dy) = if dist > 1e-9 {
        ((ic.x - tc.x) / dist, (ic.y - tc.y) / dist)
    } else {
        (1.0, 0.0)
    };
    const STEP_MM: f64 = 5.0;
    const MAX_STEPS: usize = 40;
    let success = rng.random::<f64>() < config.p_push;
    let clear_rect = footprint.inflate(config.push_clearance_mm);
    let board = scene.board;
    // Walk the ray in steps; the push ends where the object bumps into a
    // bystander (clearance violated) or pins against the wall, and a
    // successful draw otherwise stops at the first blade-clear position. A
    // failed draw travels at most one step.
    let max_steps = if success { MAX_STEPS } else { 1 };
    let mut travel = 0.0;
    for step in 1..=max_steps {
        let d = step as f64 * STEP_MM;
        let moved = interferer.shape.translate(d * dx, d * dy);
        let bb = moved.bbox();
        let cx = if bb.min.x < 0.0 {
            -bb.min.x
        } else if bb.max.x > board.width_mm {
            board.width_mm - bb.max.x
        } else {
            0.0
        };
        let cy = if bb.min.y < 0.0 {
            -bb.min.y
        } else if bb.max.y > board.height_mm {
            board.height_mm - bb.max.y
        } else {
            0.0
        };
        let clamped = if cx != 0.0 || cy != 0.0 { moved.translate(cx, cy) } else { moved };
        let blocked = !clear_of_others(scene, &clamped, &[interferer_id], config.piece_clearance_mm);
        if blocked {
            break;
        }
        travel = d;
        if success && !clamped.intersects_rect(&clear_rect) {
            break;
        }
    }
    let out = scene.translate_object(interferer_id, travel * dx, travel * dy)?;
    Ok((clamp_to_board(&out)?, PushResult { success, distance_mm: travel }))
}
