//! Ground-truth world model: food shape templates, the barriered board,
//! procedural cluttered-scene generation, and object mutation under
//! primitive execution.
//!
//! Scenes are immutable snapshots; mutating operations return new scenes.

mod io;
mod templates;

pub use io::{load_scene_json, scene_to_canonical_json};
pub use templates::{ShapeTemplate, TemplateSet};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Line, Point2, Polygon, Rect};
use crate::rng::SimRng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SceneError {
    #[error("could not place object {index} after {attempts} attempts")]
    PlacementFailed { index: usize, attempts: u32 },
    #[error("unknown object id {0}")]
    UnknownObject(u32),
    #[error("object {id} does not fit inside the board")]
    ObjectLargerThanBoard { id: u32 },
    #[error("unsupported size fraction 1/{denominator}; supported: 1, 1/2, 1/4, 1/8")]
    UnsupportedFraction { denominator: u64 },
    #[error("scene generation config is invalid: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
}

/// The food classes the pipeline knows about. Closed set; new shapes enter
/// only through template registration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FoodClass {
    Apple,
    Cucumber,
    Carrot,
}

impl FoodClass {
    pub const ALL: [FoodClass; 3] = [FoodClass::Apple, FoodClass::Cucumber, FoodClass::Carrot];

    pub fn name(self) -> &'static str {
        match self {
            FoodClass::Apple => "apple",
            FoodClass::Cucumber => "cucumber",
            FoodClass::Carrot => "carrot",
        }
    }
}

impl std::fmt::Display for FoodClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FoodClass {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "apple" => Ok(FoodClass::Apple),
            "cucumber" => Ok(FoodClass::Cucumber),
            "carrot" => Ok(FoodClass::Carrot),
            _ => Err(()),
        }
    }
}

/// Dyadic slice size: 1/2^k of a whole object. Stored as the exponent so
/// halving is exact at any depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizeFraction(u8);

impl SizeFraction {
    pub const WHOLE: SizeFraction = SizeFraction(0);
    pub const HALF: SizeFraction = SizeFraction(1);
    pub const QUARTER: SizeFraction = SizeFraction(2);
    pub const EIGHTH: SizeFraction = SizeFraction(3);

    pub fn from_denominator_log2(k: u8) -> Self {
        SizeFraction(k)
    }

    pub fn denominator_log2(self) -> u8 {
        self.0
    }

    pub fn value(self) -> f64 {
        0.5f64.powi(self.0 as i32)
    }

    pub fn halved(self) -> Self {
        SizeFraction(self.0.saturating_add(1))
    }

    /// Exact dyadic fractions only; anything else is rejected.
    pub fn from_value(v: f64) -> Option<Self> {
        for k in 0u8..=48 {
            if v == 0.5f64.powi(k as i32) {
                return Some(SizeFraction(k));
            }
        }
        None
    }
}

impl Serialize for SizeFraction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for SizeFraction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        SizeFraction::from_value(v)
            .ok_or_else(|| serde::de::Error::custom(format!("not a dyadic size fraction: {v}")))
    }
}

/// The cutting board with its barrier walls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Board {
    pub width_mm: f64,
    pub height_mm: f64,
}

impl Default for Board {
    fn default() -> Self {
        Board { width_mm: 400.0, height_mm: 300.0 }
    }
}

impl Board {
    pub fn rect(&self) -> Rect {
        Rect::new(Point2::new(0.0, 0.0), Point2::new(self.width_mm, self.height_mm))
    }

    pub fn contains_polygon(&self, poly: &Polygon) -> bool {
        let r = self.rect();
        poly.vertices().iter().all(|&v| r.contains(v))
    }
}

/// One food piece on the board, with its lineage.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneObject {
    pub id: u32,
    pub class: FoodClass,
    pub size_fraction: SizeFraction,
    pub shape: Polygon,
    pub parent_id: Option<u32>,
}

/// Immutable world snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub board: Board,
    pub objects: Vec<SceneObject>,
    pub next_id: u32,
}

impl Scene {
    pub fn new(board: Board) -> Self {
        Scene { board, objects: Vec::new(), next_id: 0 }
    }

    pub fn object(&self, id: u32) -> Option<&SceneObject> {
        self.objects.iter().find(|o| o.id == id)
    }

    /// The object containing a point (lowest id wins on overlap).
    pub fn object_at(&self, p: Point2) -> Option<&SceneObject> {
        self.objects.iter().find(|o| o.shape.contains(p))
    }

    pub fn count_of(&self, class: FoodClass) -> usize {
        self.objects.iter().filter(|o| o.class == class).count()
    }

    pub fn total_area(&self) -> f64 {
        self.objects.iter().map(|o| o.shape.area()).sum()
    }

    fn push_object(
        &mut self,
        class: FoodClass,
        size_fraction: SizeFraction,
        shape: Polygon,
        parent_id: Option<u32>,
    ) -> u32 {
        let id = self.next_id;
        self.next_id += 1;
        self.objects.push(SceneObject { id, class, size_fraction, shape, parent_id });
        id
    }

    /// Replace object `id` with its pieces: fresh ids, halved size fraction,
    /// lineage recorded. Count changes by `pieces.len() - 1`.
    pub fn replace_object(&self, id: u32, pieces: Vec<Polygon>) -> Result<Scene, SceneError> {
        let parent = self.object(id).ok_or(SceneError::UnknownObject(id))?.clone();
        let mut out = self.clone();
        out.objects.retain(|o| o.id != id);
        for piece in pieces {
            out.push_object(parent.class, parent.size_fraction.halved(), piece, Some(id));
        }
        Ok(out)
    }

    /// Translate one object rigidly.
    pub fn translate_object(&self, id: u32, dx: f64, dy: f64) -> Result<Scene, SceneError> {
        let mut out = self.clone();
        let obj = out
            .objects
            .iter_mut()
            .find(|o| o.id == id)
            .ok_or(SceneError::UnknownObject(id))?;
        obj.shape = obj.shape.translate(dx, dy);
        Ok(out)
    }
}

/// Translate any out-of-bounds object back inside by the minimal vector:
/// the barrier wall.
pub fn clamp_to_board(scene: &Scene) -> Result<Scene, SceneError> {
    let mut out = scene.clone();
    let board = out.board;
    for obj in &mut out.objects {
        let bb = obj.shape.bbox();
        if bb.width() > board.width_mm || bb.height() > board.height_mm {
            return Err(SceneError::ObjectLargerThanBoard { id: obj.id });
        }
        let dx = if bb.min.x < 0.0 {
            -bb.min.x
        } else if bb.max.x > board.width_mm {
            board.width_mm - bb.max.x
        } else {
            0.0
        };
        let dy = if bb.min.y < 0.0 {
            -bb.min.y
        } else if bb.max.y > board.height_mm {
            board.height_mm - bb.max.y
        } else {
            0.0
        };
        if dx != 0.0 || dy != 0.0 {
            obj.shape = obj.shape.translate(dx, dy);
        }
    }
    Ok(out)
}

/// Parameters for the procedural scene generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneGenConfig {
    pub board: Board,
    /// Inclusive range for the object count draw.
    pub n_objects_range: (usize, usize),
    pub classes: Vec<FoodClass>,
    /// Size fractions drawn uniformly per object, as dyadic values.
    pub size_fractions: Vec<f64>,
    pub min_gap_mm: f64,
    pub max_placement_attempts: u32,
}

impl Default for SceneGenConfig {
    fn default() -> Self {
        SceneGenConfig {
            board: Board::default(),
            n_objects_range: (1, 10),
            classes: vec![FoodClass::Apple, FoodClass::Cucumber],
            size_fractions: vec![1.0, 0.5, 0.25, 0.125],
            min_gap_mm: 10.0,
            max_placement_attempts: 10_000,
        }
    }
}

impl SceneGenConfig {
    fn validate(&self) -> Result<(), SceneError> {
        if self.n_objects_range.0 < 1 || self.n_objects_range.0 > self.n_objects_range.1 {
            return Err(SceneError::BadConfig(format!(
                "bad object count range {:?}",
                self.n_objects_range
            )));
        }
        if self.classes.is_empty() {
            return Err(SceneError::BadConfig("no classes configured".into()));
        }
        if self.size_fractions.is_empty()
            || self.size_fractions.iter().any(|&f| SizeFraction::from_value(f).is_none())
        {
            return Err(SceneError::BadConfig(format!(
                "size fractions must be dyadic: {:?}",
                self.size_fractions
            )));
        }
        if self.min_gap_mm < 0.0 {
            return Err(SceneError::BadConfig("negative min gap".into()));
        }
        Ok(())
    }
}

/// Cut a template down to a dyadic fraction of itself: each halving splits
/// through the current centroid at a uniform angle and keeps one piece at
/// random. A centroid cut of a convex shape leaves each side between 4/9 and
/// 5/9 of the area, so k splits stay within [0.25, 0.75]^k of the base.
pub fn slice_shape(
    template: &ShapeTemplate,
    fraction: SizeFraction,
    rng: &mut SimRng,
) -> Result<Polygon, SceneError> {
    let k = fraction.denominator_log2();
    if k > 3 {
        return Err(SceneError::UnsupportedFraction { denominator: 1u64 << k });
    }
    let mut poly = template.base_polygon.clone();
    for _ in 0..k {
        let angle = rng.random_range(0.0..std::f64::consts::PI);
        let line = Line::new(poly.centroid(), angle);
        let pieces = poly.split(&line);
        let pick = rng.random_range(0..pieces.len());
        poly = pieces.into_iter().nth(pick).expect("split returned at least one piece");
    }
    Ok(poly)
}

/// Generate a randomized cluttered scene. Identical (config, seed) pairs
/// produce identical scenes.
///
/// Class, size fraction, position, and rotation are independently uniform per
/// object; rejection sampling enforces `min_gap_mm`. Shapes are placed
/// largest-first, which keeps crowded draws feasible without changing any
/// per-object distribution.
pub fn generate_scene(
    config: &SceneGenConfig,
    templates: &TemplateSet,
    seed: u64,
) -> Result<Scene, SceneError> {
    config.validate()?;
    let mut rng = crate::rng::rng_from_seed(seed);
    let n = rng.random_range(config.n_objects_range.0..=config.n_objects_range.1);
    let draws: Vec<(FoodClass, SizeFraction)> = (0..n)
        .map(|_| {
            let class = config.classes[rng.random_range(0..config.classes.len())];
            let fraction_value =
                config.size_fractions[rng.random_range(0..config.size_fractions.len())];
            (class, SizeFraction::from_value(fraction_value).expect("validated dyadic"))
        })
        .collect();
    place_all(config.board, &draws, config, templates, &mut rng)
}

/// Generate a scene with exact per-class piece counts (task initialization);
/// fractions are drawn uniformly from the config list.
pub fn generate_scene_with_counts(
    board: Board,
    counts: &[(FoodClass, u32)],
    config: &SceneGenConfig,
    templates: &TemplateSet,
    rng: &mut SimRng,
) -> Result<Scene, SceneError> {
    config.validate()?;
    let mut draws = Vec::new();
    for &(class, count) in counts {
        for _ in 0..count {
            let fraction_value =
                config.size_fractions[rng.random_range(0..config.size_fractions.len())];
            draws.push((class, SizeFraction::from_value(fraction_value).expect("validated dyadic")));
        }
    }
    place_all(board, &draws, config, templates, rng)
}

/// Whole-scene placement retries before giving up on random sampling.
const MAX_SCENE_RESTARTS: usize = 8;

fn place_all(
    board: Board,
    draws: &[(FoodClass, SizeFraction)],
    config: &SceneGenConfig,
    templates: &TemplateSet,
    rng: &mut SimRng,
) -> Result<Scene, SceneError> {
    let sliced: Vec<Polygon> = draws
        .iter()
        .map(|&(class, fraction)| slice_shape(templates.get(class), fraction, rng))
        .collect::<Result<_, _>>()?;
    // Largest-first keeps the densest draws feasible without changing any
    // per-object distribution.
    let mut order: Vec<usize> = (0..draws.len()).collect();
    order.sort_by(|&a, &b| {
        sliced[b].area().partial_cmp(&sliced[a].area()).unwrap().then(a.cmp(&b))
    });

    let mut last_failed_index = 0;
    for _restart in 0..MAX_SCENE_RESTARTS {
        match try_place_once(board, draws, &sliced, &order, config, templates, rng) {
            Ok(scene) => return Ok(scene),
            Err(index) => last_failed_index = index,
        }
    }
    // Last resort for the densest tail: deterministic lattice packing. No RNG
    // is consumed, so the scene stays a pure function of the seed.
    if let Some(scene) = lattice_place_all(board, draws, &sliced, &order, config) {
        return Ok(scene);
    }
    Err(SceneError::PlacementFailed {
        index: last_failed_index,
        attempts: config.max_placement_attempts,
    })
}

fn try_place_once(
    board: Board,
    draws: &[(FoodClass, SizeFraction)],
    sliced: &[Polygon],
    order: &[usize],
    config: &SceneGenConfig,
    templates: &TemplateSet,
    rng: &mut SimRng,
) -> Result<Scene, usize> {
    let mut scene = Scene::new(board);
    for &index in order {
        let (class, fraction) = draws[index];
        let mut shape = sliced[index].clone();
        let mut placed = false;
        for attempt in 0..config.max_placement_attempts {
            // A crowded board may reject one particular slice geometry
            // forever; redraw the piece (same fraction) every so often.
            if attempt > 0 && attempt % 200 == 0 {
                shape = slice_shape(templates.get(class), fraction, rng)
                    .expect("fraction already validated");
            }
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let cx = rng.random_range(0.0..board.width_mm);
            let cy = rng.random_range(0.0..board.height_mm);
            let c = shape.centroid();
            let candidate = shape.rotate_about(c, theta).translate(cx - c.x, cy - c.y);
            if !board.contains_polygon(&candidate) {
                continue;
            }
            if gap_ok(&scene, &candidate, config.min_gap_mm) {
                scene.push_object(class, fraction, candidate, None);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(index);
        }
    }
    Ok(scene)
}

fn gap_ok(scene: &Scene, candidate: &Polygon, min_gap: f64) -> bool {
    scene.objects.iter().all(|o| {
        o.shape.bbox().gap_to(&candidate.bbox()) >= min_gap
            || o.shape.distance_to(candidate) >= min_gap
    })
}

fn lattice_place_all(
    board: Board,
    draws: &[(FoodClass, SizeFraction)],
    sliced: &[Polygon],
    order: &[usize],
    config: &SceneGenConfig,
) -> Option<Scene> {
    let step = 5.0;
    let mut scene = Scene::new(board);
    for &index in order {
        let (class, fraction) = draws[index];
        let shape = &sliced[index];
        let mut placed = false;
        'poses: for rot in 0..8 {
            let theta = rot as f64 * std::f64::consts::PI / 8.0;
            let rotated = shape.rotate_about(shape.centroid(), theta);
            let rc = rotated.centroid();
            let mut cy = step;
            while cy < board.height_mm {
                let mut cx = step;
                while cx < board.width_mm {
                    let candidate = rotated.translate(cx - rc.x, cy - rc.y);
                    if board.contains_polygon(&candidate)
                        && gap_ok(&scene, &candidate, config.min_gap_mm)
                    {
                        scene.push_object(class, fraction, candidate, None);
                        placed = true;
                        break 'poses;
                    }
                    cx += step;
                }
                cy += step;
            }
        }
        if !placed {
            return None;
        }
    }
    Some(scene)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn templates() -> TemplateSet {
        TemplateSet::standard()
    }

    #[test]
    fn degenerate_range_gives_one_whole_apple() {
        let config = SceneGenConfig {
            n_objects_range: (1, 1),
            classes: vec![FoodClass::Apple],
            size_fractions: vec![1.0],
            ..Default::default()
        };
        let scene = generate_scene(&config, &templates(), 5).unwrap();
        assert_eq!(scene.objects.len(), 1);
        assert_eq!(scene.objects[0].class, FoodClass::Apple);
        assert_eq!(scene.objects[0].size_fraction, SizeFraction::WHOLE);
    }

    #[test]
    fn generation_is_deterministic() {
        let config = SceneGenConfig::default();
        let a = generate_scene(&config, &templates(), 42).unwrap();
        let b = generate_scene(&config, &templates(), 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(scene_to_canonical_json(&a), scene_to_canonical_json(&b));
    }

    #[test]
    fn object_count_is_uniform_chi_squared() {
        // 10k scenes over counts 1..=10; chi-squared with df = 9 must stay
        // below the p = 0.01 critical value 21.666.
        let config = SceneGenConfig::default();
        let t = templates();
        let mut hist = [0usize; 10];
        let trials = 10_000;
        for seed in 0..trials {
            let scene = generate_scene(&config, &t, seed as u64).unwrap();
            hist[scene.objects.len() - 1] += 1;
        }
        let expected = trials as f64 / 10.0;
        let chi2: f64 =
            hist.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 21.666, "chi2 = {chi2}, hist = {hist:?}");
    }

    #[test]
    fn min_gap_holds_pairwise_at_generation() {
        let config = SceneGenConfig::default();
        let t = templates();
        for seed in 100..150 {
            let scene = generate_scene(&config, &t, seed).unwrap();
            for i in 0..scene.objects.len() {
                for j in (i + 1)..scene.objects.len() {
                    let d = scene.objects[i].shape.distance_to(&scene.objects[j].shape);
                    assert!(
                        d >= config.min_gap_mm - 1e-9,
                        "seed {seed}: objects {i},{j} gap {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn slice_fraction_one_is_identity() {
        let t = templates();
        let mut rng = rng_from_seed(1);
        let out = slice_shape(t.get(FoodClass::Apple), SizeFraction::WHOLE, &mut rng).unwrap();
        assert_eq!(&out, &t.get(FoodClass::Apple).base_polygon);
    }

    #[test]
    fn slice_half_of_symmetric_shape_halves_area() {
        // The apple template is a centrally symmetric regular polygon, so any
        // centroid cut is an exact bisection.
        let t = templates();
        let base_area = t.get(FoodClass::Apple).base_polygon.area();
        for seed in 0..20 {
            let mut rng = rng_from_seed(seed);
            let piece = slice_shape(t.get(FoodClass::Apple), SizeFraction::HALF, &mut rng).unwrap();
            assert!((piece.area() - base_area / 2.0).abs() / base_area < 1e-6);
        }
    }

    #[test]
    fn slice_eighth_area_within_centroid_cut_bounds() {
        let t = templates();
        let base_area = t.get(FoodClass::Apple).base_polygon.area();
        for seed in 0..50 {
            let mut rng = rng_from_seed(seed);
            let piece =
                slice_shape(t.get(FoodClass::Apple), SizeFraction::EIGHTH, &mut rng).unwrap();
            let ratio = piece.area() / base_area;
            assert!(
                (0.25f64.powi(3)..=0.75f64.powi(3)).contains(&ratio),
                "seed {seed}: ratio {ratio}"
            );
        }
    }

    #[test]
    fn slice_rejects_unsupported_fraction() {
        let t = templates();
        let mut rng = rng_from_seed(0);
        let err = slice_shape(t.get(FoodClass::Apple), SizeFraction(4), &mut rng);
        assert!(matches!(err, Err(SceneError::UnsupportedFraction { denominator: 16 })));
    }

    #[test]
    fn clamp_translates_minimally() {
        let t = templates();
        let config = SceneGenConfig {
            n_objects_range: (1, 1),
            classes: vec![FoodClass::Apple],
            size_fractions: vec![1.0],
            ..Default::default()
        };
        let scene = generate_scene(&config, &t, 3).unwrap();
        let id = scene.objects[0].id;
        let bb = scene.objects[0].shape.bbox();
        // Push the apple 5 mm past the right wall.
        let over = scene
            .translate_object(id, scene.board.width_mm - bb.max.x + 5.0, 0.0)
            .unwrap();
        let clamped = clamp_to_board(&over).unwrap();
        let nb = clamped.objects[0].shape.bbox();
        assert!((nb.max.x - clamped.board.width_mm).abs() < 1e-9);
        // A fully-inside scene is untouched.
        let same = clamp_to_board(&scene).unwrap();
        assert_eq!(same, scene);
    }

    #[test]
    fn clamp_rejects_oversized_object() {
        let mut scene = Scene::new(Board { width_mm: 50.0, height_mm: 50.0 });
        let big = Polygon::new(vec![
            Point2::new(0.0, 0.0),
            Point2::new(80.0, 0.0),
            Point2::new(80.0, 20.0),
            Point2::new(0.0, 20.0),
        ])
        .unwrap();
        scene.push_object(FoodClass::Cucumber, SizeFraction::WHOLE, big, None);
        assert!(matches!(
            clamp_to_board(&scene),
            Err(SceneError::ObjectLargerThanBoard { .. })
        ));
    }

    #[test]
    fn replace_object_ledger_arithmetic() {
        let t = templates();
        let config = SceneGenConfig {
            n_objects_range: (1, 1),
            classes: vec![FoodClass::Apple],
            size_fractions: vec![1.0],
            ..Default::default()
        };
        let scene = generate_scene(&config, &t, 7).unwrap();
        let id = scene.objects[0].id;
        let shape = scene.objects[0].shape.clone();
        let pieces = shape.split(&Line::new(shape.centroid(), 0.3));
        assert_eq!(pieces.len(), 2);

        let two = scene.replace_object(id, pieces.clone()).unwrap();
        assert_eq!(two.objects.len(), 2);
        assert!(two.objects.iter().all(|o| o.parent_id == Some(id)));
        assert!(two.objects.iter().all(|o| o.size_fraction == SizeFraction::HALF));

        let one = scene.replace_object(id, vec![shape.clone()]).unwrap();
        assert_eq!(one.objects.len(), 1);

        let three = scene
            .replace_object(id, vec![pieces[0].clone(), pieces[1].clone(), shape.clone()])
            .unwrap();
        assert_eq!(three.objects.len(), 3);

        assert!(scene.replace_object(999, vec![]).is_err());
    }

    #[test]
    fn lineage_terminates_and_conserves_area() {
        let t = templates();
        let config = SceneGenConfig::default();
        let mut scene = generate_scene(&config, &t, 11).unwrap();
        let originals: std::collections::BTreeMap<u32, f64> =
            scene.objects.iter().map(|o| (o.id, o.shape.area())).collect();
        // Genealogy across cuts: id -> parent id (pieces leave no scene trace
        // of removed intermediates, so the test records them as they appear).
        let mut parent_of: std::collections::BTreeMap<u32, u32> = Default::default();
        let mut rng = rng_from_seed(99);
        for _ in 0..6 {
            let pick = rng.random_range(0..scene.objects.len());
            let obj = scene.objects[pick].clone();
            let line = Line::new(obj.shape.centroid(), rng.random_range(0.0..std::f64::consts::PI));
            let pieces = obj.shape.split(&line);
            scene = scene.replace_object(obj.id, pieces).unwrap();
            for piece in &scene.objects {
                if piece.parent_id == Some(obj.id) {
                    parent_of.insert(piece.id, obj.id);
                }
            }
        }
        let mut root_area: std::collections::BTreeMap<u32, f64> = Default::default();
        for obj in &scene.objects {
            let mut id = obj.id;
            let mut guard = 0;
            while let Some(&pid) = parent_of.get(&id) {
                id = pid;
                guard += 1;
                assert!(guard < 100, "lineage walk did not terminate");
            }
            assert!(originals.contains_key(&id), "walk ended at a non-original {id}");
            *root_area.entry(id).or_default() += obj.shape.area();
        }
        for (root, area) in root_area {
            let original = originals[&root];
            assert!(area <= original * (1.0 + 1e-6), "root {root}: {area} > {original}");
        }
    }
}
