//! Simulated vision stack: noisy detection, over-segmentation into partial
//! masks, per-partial classification, and label-guided mask fusion.
//!
//! The neural detector and segmenter are replaced by parameterized oracles;
//! the fusion *procedure* — keep the partials whose predicted label matches
//! the target, union them into one instance mask — is preserved exactly.
//! Every draw goes through the explicit RNG stream, so an observation is a
//! pure function of (scene, config, seed).

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{Point2, Polygon, RasterMask, Rect};
use crate::rng::SimRng;
use crate::scene::{FoodClass, Scene};

/// Bounding boxes are inflated this much over the blob mask, in mm.
const BBOX_INFLATE_MM: f64 = 5.0;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerceptionConfig {
    /// Probability that an object (or merged blob) yields a detection.
    pub p_detect: f64,
    /// Probability that a partial mask is classified with its true label.
    pub p_label: f64,
    /// Inclusive range for the over-segmentation partial count.
    pub partials_range: (u8, u8),
    /// Objects closer than this merge into one perceptual blob.
    pub stuck_gap_mm: f64,
    /// Raster resolution, mm per cell.
    pub resolution_mm: f64,
}

impl Default for PerceptionConfig {
    fn default() -> Self {
        // Detection / labeling rates default to the two-class object-level
        // calibration targets.
        PerceptionConfig {
            p_detect: 0.934,
            p_label: 0.975,
            partials_range: (1, 4),
            stuck_gap_mm: 2.0,
            resolution_mm: 1.0,
        }
    }
}

/// One detected instance (possibly a blob of stuck pieces).
#[derive(Debug, Clone)]
pub struct Detection {
    pub label: FoodClass,
    pub bbox: Rect,
    /// Ground-truth linkage, for metrics only.
    pub true_ids: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartialKind {
    /// Cut from the blob mask itself.
    Object,
    /// Cut from the bbox complement.
    Background,
}

/// One segment out of the over-segmenter.
#[derive(Debug, Clone)]
pub struct PartialMask {
    pub mask: RasterMask,
    pub kind: PartialKind,
}

/// A fused instance: the union of correctly-labeled partials.
#[derive(Debug, Clone)]
pub struct FusedObject {
    pub label: FoodClass,
    pub mask: RasterMask,
    pub centroid: Point2,
    pub area_mm2: f64,
    pub bbox: Rect,
}

/// The perception output for one overhead look at the scene.
#[derive(Debug, Clone, Default)]
pub struct Observation {
    pub objects: Vec<FusedObject>,
    pub count_by_class: BTreeMap<FoodClass, usize>,
}

impl Observation {
    pub fn count(&self, class: FoodClass) -> usize {
        self.count_by_class.get(&class).copied().unwrap_or(0)
    }
}

/// Per-blob ground-truth bookkeeping emitted alongside an observation.
#[derive(Debug, Clone)]
pub struct BlobDiag {
    pub member_ids: Vec<u32>,
    pub label: FoodClass,
    pub detected: bool,
    pub object_partials: usize,
    pub correctly_labeled_object_partials: usize,
    /// Index into `Observation::objects`, when fusion produced a mask.
    pub fused_index: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct ObserveDiag {
    pub blobs: Vec<BlobDiag>,
}

/// Grouping cutoff that realizes "masks within `gap` mm" on a raster: cell
/// centers can sit up to one cell diagonal apart across a zero gap, so the
/// dilation radius includes the cell footprint. Anything the disturb
/// primitive must be able to pry apart is defined by this same cutoff.
pub fn effective_merge_cutoff(stuck_gap_mm: f64, resolution_mm: f64) -> f64 {
    stuck_gap_mm + std::f64::consts::SQRT_2 * resolution_mm
}

impl PerceptionConfig {
    pub fn merge_cutoff_mm(&self) -> f64 {
        effective_merge_cutoff(self.stuck_gap_mm, self.resolution_mm)
    }
}

/// Group objects whose rasterized masks come within `stuck_gap_mm` of each
/// other (transitive closure), sorted by total blob area descending.
pub fn merge_close_objects(scene: &Scene, stuck_gap_mm: f64, resolution_mm: f64) -> Vec<Vec<u32>> {
    let masks: Vec<(u32, RasterMask, f64)> = scene
        .objects
        .iter()
        .map(|o| {
            let m = RasterMask::from_polygon(&o.shape, resolution_mm)
                .expect("scene shapes rasterize");
            (o.id, m, o.shape.area())
        })
        .collect();
    let cutoff = effective_merge_cutoff(stuck_gap_mm, resolution_mm);
    let n = masks.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut root = i;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = i;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if masks[i].1.centers_within(&masks[j].1, cutoff) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, (Vec<u32>, f64)> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        let entry = groups.entry(root).or_default();
        entry.0.push(masks[i].0);
        entry.1 += masks[i].2;
    }
    let mut blobs: Vec<(Vec<u32>, f64)> = groups.into_values().collect();
    for (ids, _) in &mut blobs {
        ids.sort_unstable();
    }
    blobs.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    blobs.into_iter().map(|(ids, _)| ids).collect()
}

/// A blob candidate with its Bernoulli detection draw resolved. The mask is
/// built only for detected blobs.
struct BlobCandidate {
    member_ids: Vec<u32>,
    label: FoodClass,
    detected: bool,
    mask: Option<RasterMask>,
    bbox: Option<Rect>,
}

fn detect_internal(scene: &Scene, config: &PerceptionConfig, rng: &mut SimRng) -> Vec<BlobCandidate> {
    let blobs = merge_close_objects(scene, config.stuck_gap_mm, config.resolution_mm);
    blobs
        .into_iter()
        .map(|member_ids| {
            let detected = rng.random::<f64>() < config.p_detect;
            // Label comes from the largest-area member (smallest id on ties).
            let label = member_ids
                .iter()
                .map(|&id| scene.object(id).expect("blob members exist"))
                .max_by(|a, b| {
                    a.shape
                        .area()
                        .partial_cmp(&b.shape.area())
                        .unwrap()
                        .then(b.id.cmp(&a.id))
                })
                .expect("blob is nonempty")
                .class;
            let (mask, bbox) = if detected {
                let shapes: Vec<&Polygon> = member_ids
                    .iter()
                    .map(|&id| &scene.object(id).expect("blob members exist").shape)
                    .collect();
                let joint = shapes
                    .iter()
                    .map(|s| s.bbox())
                    .reduce(|a, b| {
                        Rect::from_points([a.min, a.max, b.min, b.max]).expect("nonempty")
                    })
                    .expect("blob has shapes");
                let mut mask =
                    RasterMask::grid_covering(&joint.inflate(BBOX_INFLATE_MM), config.resolution_mm)
                        .expect("resolution validated");
                for shape in shapes {
                    mask.fill_polygon(shape);
                }
                let bbox = mask
                    .bbox_world()
                    .map(|r| r.inflate(BBOX_INFLATE_MM))
                    .unwrap_or(joint);
                (Some(mask), Some(bbox))
            } else {
                (None, None)
            };
            BlobCandidate { member_ids, label, detected, mask, bbox }
        })
        .collect()
}

/// Detect blobs: one candidate per proximity blob, each kept independently
/// with probability `p_detect`. Missed blobs vanish (no false positives).
pub fn detect(scene: &Scene, config: &PerceptionConfig, rng: &mut SimRng) -> Vec<Detection> {
    detect_internal(scene, config, rng)
        .into_iter()
        .filter(|c| c.detected)
        .map(|c| Detection {
            label: c.label,
            bbox: c.bbox.expect("detected blob has a bbox"),
            true_ids: c.member_ids,
        })
        .collect()
}

/// Partition a blob mask into k nonempty partials by nearest-site assignment,
/// plus 1-3 partials cut from the bbox complement the same way.
///
/// The object partials exactly partition the blob mask, so a perfect
/// classifier reconstructs it exactly.
pub fn oversegment(
    blob_mask: &RasterMask,
    config: &PerceptionConfig,
    rng: &mut SimRng,
) -> Vec<PartialMask> {
    assert!(!blob_mask.is_empty(), "oversegment requires a nonempty blob mask");
    let (lo, hi) = config.partials_range;
    let k = rng.random_range(lo..=hi) as usize;
    let object_cells: Vec<(usize, usize)> = blob_mask.iter_set().collect();
    let k = k.min(object_cells.len()).max(1);
    let mut partials = partition_by_sites(blob_mask, &object_cells, k, PartialKind::Object, rng);

    let complement: Vec<(usize, usize)> = (0..blob_mask.height())
        .flat_map(|iy| (0..blob_mask.width()).map(move |ix| (ix, iy)))
        .filter(|&(ix, iy)| !blob_mask.get(ix, iy))
        .collect();
    if !complement.is_empty() {
        let b = (rng.random_range(1..=3u8) as usize).min(complement.len());
        partials.extend(partition_by_sites(
            blob_mask,
            &complement,
            b,
            PartialKind::Background,
            rng,
        ));
    }
    partials
}

fn partition_by_sites(
    grid: &RasterMask,
    cells: &[(usize, usize)],
    k: usize,
    kind: PartialKind,
    rng: &mut SimRng,
) -> Vec<PartialMask> {
    let site_indices = rand::seq::index::sample(rng, cells.len(), k);
    let sites: Vec<(usize, usize)> = site_indices.iter().map(|i| cells[i]).collect();
    let mut masks: Vec<RasterMask> = (0..k)
        .map(|_| {
            RasterMask::new_empty(grid.origin(), grid.resolution(), grid.width(), grid.height())
                .expect("grid parameters validated")
        })
        .collect();
    for &(ix, iy) in cells {
        let mut best = 0usize;
        let mut best_d2 = u64::MAX;
        for (si, &(sx, sy)) in sites.iter().enumerate() {
            let dx = ix as i64 - sx as i64;
            let dy = iy as i64 - sy as i64;
            let d2 = (dx * dx + dy * dy) as u64;
            if d2 < best_d2 {
                best_d2 = d2;
                best = si;
            }
        }
        masks[best].set(ix, iy);
    }
    masks
        .into_iter()
        .filter(|m| !m.is_empty())
        .map(|mask| PartialMask { mask, kind })
        .collect()
}

/// Classifier oracle. Object partials get the true label with probability
/// `p_label` (no label otherwise); background partials get no label with
/// probability `p_label` and a uniformly-drawn wrong label otherwise.
///
/// Exactly two draws are consumed regardless of the branch, so runs that
/// differ only in `p_label` stay coupled draw-for-draw.
pub fn classify_partial(
    partial: &PartialMask,
    true_label: FoodClass,
    config: &PerceptionConfig,
    rng: &mut SimRng,
) -> Option<FoodClass> {
    let u = rng.random::<f64>();
    let v = rng.random::<f64>();
    match partial.kind {
        PartialKind::Object => (u < config.p_label).then_some(true_label),
        PartialKind::Background => {
            if u < config.p_label {
                None
            } else {
                let wrong: Vec<FoodClass> =
                    FoodClass::ALL.into_iter().filter(|&c| c != true_label).collect();
                Some(wrong[(v * wrong.len() as f64) as usize % wrong.len()])
            }
        }
    }
}

/// Union exactly the partials whose label matches the target; no match means
/// no instance. Partials must share a grid.
pub fn fuse_masks(
    partials: &[PartialMask],
    labels: &[Option<FoodClass>],
    target: FoodClass,
) -> Option<RasterMask> {
    let selected: Vec<&RasterMask> = partials
        .iter()
        .zip(labels.iter())
        .filter(|(_, l)| **l == Some(target))
        .map(|(p, _)| &p.mask)
        .collect();
    if selected.is_empty() {
        return None;
    }
    Some(RasterMask::union(&selected).expect("fuse_masks requires partials on a common grid"))
}

/// One overhead look: merge close objects, detect blobs, over-segment each
/// detection, classify the partials, and fuse the label matches into
/// instances. Detections whose fusion comes up empty are dropped.
pub fn observe(scene: &Scene, config: &PerceptionConfig, rng: &mut SimRng) -> Observation {
    observe_with_diag(scene, config, rng).0
}

/// `observe` plus the ground-truth bookkeeping used by the metrics scorers.
pub fn observe_with_diag(
    scene: &Scene,
    config: &PerceptionConfig,
    rng: &mut SimRng,
) -> (Observation, ObserveDiag) {
    let mut obs = Observation::default();
    let mut diag = ObserveDiag::default();
    for candidate in detect_internal(scene, config, rng) {
        if !candidate.detected {
            diag.blobs.push(BlobDiag {
                member_ids: candidate.member_ids,
                label: candidate.label,
                detected: false,
                object_partials: 0,
                correctly_labeled_object_partials: 0,
                fused_index: None,
            });
            continue;
        }
        let mask = candidate.mask.expect("detected blob has a mask");
        let bbox = candidate.bbox.expect("detected blob has a bbox");
        let partials = oversegment(&mask, config, rng);
        let labels: Vec<Option<FoodClass>> = partials
            .iter()
            .map(|p| classify_partial(p, candidate.label, config, rng))
            .collect();
        let object_partials =
            partials.iter().filter(|p| p.kind == PartialKind::Object).count();
        let correct = partials
            .iter()
            .zip(labels.iter())
            .filter(|(p, l)| p.kind == PartialKind::Object && **l == Some(candidate.label))
            .count();
        let fused_index = fuse_masks(&partials, &labels, candidate.label).map(|fused| {
            let centroid = fused.centroid().expect("fused masks are nonempty");
            let area_mm2 = fused.area_mm2();
            obs.objects.push(FusedObject {
                label: candidate.label,
                mask: fused,
                centroid,
                area_mm2,
                bbox,
            });
            obs.objects.len() - 1
        });
        diag.blobs.push(BlobDiag {
            member_ids: candidate.member_ids,
            label: candidate.label,
            detected: true,
            object_partials,
            correctly_labeled_object_partials: correct,
            fused_index,
        });
    }
    for fused in &obs.objects {
        *obs.count_by_class.entry(fused.label).or_insert(0) += 1;
    }
    (obs, diag)
}

/// Debug dump: one PGM per fused mask plus a JSON index. Disabled unless
/// explicitly invoked.
pub fn dump_observation(
    obs: &Observation,
    dir: &std::path::Path,
    tag: &str,
) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut index = Vec::new();
    for (i, fused) in obs.objects.iter().enumerate() {
        let name = format!("{tag}_{i:03}_{}.pgm", fused.label);
        write_pgm(&fused.mask, &dir.join(&name))?;
        index.push(serde_json::json!({
            "file": name,
            "label": fused.label.name(),
            "centroid_mm": [fused.centroid.x, fused.centroid.y],
            "area_mm2": fused.area_mm2,
        }));
    }
    std::fs::write(
        dir.join(format!("{tag}_index.json")),
        serde_json::to_string_pretty(&serde_json::Value::Array(index))?,
    )
}

fn write_pgm(mask: &RasterMask, path: &std::path::Path) -> std::io::Result<()> {
    let mut data = format!("P5\n{} {}\n255\n", mask.width(), mask.height()).into_bytes();
    // PGM rows run top-to-bottom; the grid's y axis runs bottom-to-top.
    for iy in (0..mask.height()).rev() {
        for ix in 0..mask.width() {
            data.push(if mask.get(ix, iy) { 255 } else { 0 });
        }
    }
    std::fs::write(path, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Line;
    use crate::rng::rng_from_seed;
    use crate::scene::{
        generate_scene, FoodClass, Scene, SceneGenConfig, SizeFraction, TemplateSet,
    };

    fn perfect() -> PerceptionConfig {
        PerceptionConfig { p_detect: 1.0, p_label: 1.0, ..Default::default() }
    }

    /// Scene with two apple halves separated by `gap` mm along x.
    fn stuck_pair_scene(gap: f64) -> Scene {
        let t = TemplateSet::standard();
        let config = SceneGenConfig {
            n_objects_range: (1, 1),
            classes: vec![FoodClass::Apple],
            size_fractions: vec![1.0],
            ..Default::default()
        };
        let scene = generate_scene(&config, &t, 17).unwrap();
        let apple = scene.objects[0].clone();
        let c = apple.shape.centroid();
        let pieces = apple.shape.split(&Line::new(c, std::f64::consts::PI / 2.0));
        assert_eq!(pieces.len(), 2);
        let scene = scene.replace_object(apple.id, pieces).unwrap();
        // Separate the right piece by `gap`.
        let right = scene
            .objects
            .iter()
            .max_by(|a, b| {
                a.shape.centroid().x.partial_cmp(&b.shape.centroid().x).unwrap()
            })
            .unwrap()
            .id;
        scene.translate_object(right, gap, 0.0).unwrap()
    }

    #[test]
    fn merge_groups_below_threshold() {
        let near = stuck_pair_scene(1.0);
        let blobs = merge_close_objects(&near, 2.0, 1.0);
        assert_eq!(blobs.len(), 1);
        assert_eq!(blobs[0].len(), 2);

        let far = stuck_pair_scene(10.0);
        let blobs = merge_close_objects(&far, 2.0, 1.0);
        assert_eq!(blobs.len(), 2);
        assert!(blobs.iter().all(|b| b.len() == 1));
    }

    #[test]
    fn merge_is_transitive() {
        // Chain A-B close, B-C close, A-C far: 20 mm squares 1 mm apart.
        let mut scene = Scene::new(crate::scene::Board::default());
        for i in 0u32..3 {
            let x0 = 60.0 + i as f64 * 21.0;
            let shape = Polygon::new(vec![
                Point2::new(x0, 100.0),
                Point2::new(x0 + 20.0, 100.0),
                Point2::new(x0 + 20.0, 120.0),
                Point2::new(x0, 120.0),
            ])
            .unwrap();
            scene.objects.push(crate::scene::SceneObject {
                id: i,
                class: FoodClass::Apple,
                size_fraction: SizeFraction::QUARTER,
                shape,
                parent_id: None,
            });
            scene.next_id = i + 1;
        }
        let blobs = merge_close_objects(&scene, 2.0, 1.0);
        assert_eq!(blobs.len(), 1, "chain closes transitively");
        assert_eq!(blobs[0], vec![0, 1, 2]);
    }

    #[test]
    fn detect_perfect_and_never() {
        let scene = generate_scene(
            &SceneGenConfig { n_objects_range: (3, 3), ..Default::default() },
            &TemplateSet::standard(),
            8,
        )
        .unwrap();
        let mut rng = rng_from_seed(0);
        let dets = detect(&scene, &perfect(), &mut rng);
        assert_eq!(dets.len(), 3);
        for d in &dets {
            assert_eq!(d.true_ids.len(), 1);
            let obj = scene.object(d.true_ids[0]).unwrap();
            assert_eq!(d.label, obj.class);
            // bbox contains the object's shape.
            assert!(obj.shape.vertices().iter().all(|&v| d.bbox.contains(v)));
        }
        let none = PerceptionConfig { p_detect: 0.0, ..Default::default() };
        let mut rng = rng_from_seed(0);
        assert!(detect(&scene, &none, &mut rng).is_empty());
    }

    #[test]
    fn detection_rate_calibrates() {
        let config = PerceptionConfig::default(); // p_detect = 0.934
        let t = TemplateSet::standard();
        let mut rng = rng_from_seed(77);
        let mut detections = 0usize;
        let mut opportunities = 0usize;
        let mut seed = 0u64;
        while opportunities < 10_000 {
            let scene = generate_scene(&SceneGenConfig::default(), &t, seed).unwrap();
            seed += 1;
            let dets = detect(&scene, &config, &mut rng);
            opportunities += scene.objects.len();
            detections += dets.iter().map(|d| d.true_ids.len()).sum::<usize>();
        }
        let rate = detections as f64 / opportunities as f64;
        assert!((rate - 0.934).abs() < 0.01, "rate {rate}");
    }

    fn blob_mask_for_test(seed: u64) -> RasterMask {
        let t = TemplateSet::standard();
        let config = SceneGenConfig {
            n_objects_range: (1, 1),
            classes: vec![FoodClass::Cucumber],
            ..Default::default()
        };
        let scene = generate_scene(&config, &t, seed).unwrap();
        RasterMask::from_polygon(&scene.objects[0].shape, 1.0).unwrap()
    }

    #[test]
    fn oversegment_partition_law() {
        for seed in 0..20 {
            let blob = blob_mask_for_test(seed);
            let mut rng = rng_from_seed(seed);
            let cfg = PerceptionConfig { partials_range: (2, 5), ..Default::default() };
            let partials = oversegment(&blob, &cfg, &mut rng);
            let object: Vec<&RasterMask> = partials
                .iter()
                .filter(|p| p.kind == PartialKind::Object)
                .map(|p| &p.mask)
                .collect();
            assert!(!object.is_empty() && object.len() <= 5);
            let union = RasterMask::union(&object).unwrap();
            assert_eq!(&union, &blob, "object partials must reassemble the blob");
            let total: usize = object.iter().map(|m| m.set_count()).sum();
            assert_eq!(total, blob.set_count(), "object partials must be disjoint");
            // Background partials exist and stay off the blob.
            let background: Vec<&PartialMask> =
                partials.iter().filter(|p| p.kind == PartialKind::Background).collect();
            assert!(!background.is_empty() && background.len() <= 3);
            for b in background {
                assert_eq!(b.mask.intersection_count(&blob), 0);
            }
        }
    }

    #[test]
    fn oversegment_k_one_is_identity() {
        let blob = blob_mask_for_test(5);
        let cfg = PerceptionConfig { partials_range: (1, 1), ..Default::default() };
        let mut rng = rng_from_seed(1);
        let partials = oversegment(&blob, &cfg, &mut rng);
        let object: Vec<&PartialMask> =
            partials.iter().filter(|p| p.kind == PartialKind::Object).collect();
        assert_eq!(object.len(), 1);
        assert_eq!(&object[0].mask, &blob);
    }

    #[test]
    fn oversegment_clamps_k_to_cell_count() {
        let mut tiny = RasterMask::new_empty(Point2::new(0.0, 0.0), 1.0, 8, 8).unwrap();
        tiny.set(2, 2);
        tiny.set(3, 2);
        let cfg = PerceptionConfig { partials_range: (6, 6), ..Default::default() };
        let mut rng = rng_from_seed(0);
        let partials = oversegment(&tiny, &cfg, &mut rng);
        let object_count = partials.iter().filter(|p| p.kind == PartialKind::Object).count();
        assert_eq!(object_count, 2);
    }

    #[test]
    fn classify_perfect_cases() {
        let blob = blob_mask_for_test(2);
        let object = PartialMask { mask: blob.clone(), kind: PartialKind::Object };
        let background = PartialMask { mask: blob, kind: PartialKind::Background };
        let mut rng = rng_from_seed(0);
        let cfg = perfect();
        assert_eq!(
            classify_partial(&object, FoodClass::Apple, &cfg, &mut rng),
            Some(FoodClass::Apple)
        );
        assert_eq!(classify_partial(&background, FoodClass::Apple, &cfg, &mut rng), None);
    }

    #[test]
    fn classify_rate_calibrates_and_wrong_labels_avoid_target() {
        let blob = blob_mask_for_test(2);
        let object = PartialMask { mask: blob.clone(), kind: PartialKind::Object };
        let background = PartialMask { mask: blob, kind: PartialKind::Background };
        let cfg = PerceptionConfig { p_label: 0.9, ..Default::default() };
        let mut rng = rng_from_seed(4);
        let mut correct = 0;
        let n = 10_000;
        for _ in 0..n {
            if classify_partial(&object, FoodClass::Cucumber, &cfg, &mut rng)
                == Some(FoodClass::Cucumber)
            {
                correct += 1;
            }
        }
        let rate = correct as f64 / n as f64;
        assert!((rate - 0.9).abs() < 0.01, "rate {rate}");
        for _ in 0..2000 {
            let label = classify_partial(&background, FoodClass::Cucumber, &cfg, &mut rng);
            assert_ne!(label, Some(FoodClass::Cucumber), "background never fuses into target");
        }
    }

    #[test]
    fn fuse_reconstructs_with_perfect_labels() {
        let blob = blob_mask_for_test(7);
        let cfg = PerceptionConfig { partials_range: (2, 5), ..Default::default() };
        let mut rng = rng_from_seed(3);
        let partials = oversegment(&blob, &cfg, &mut rng);
        let labels: Vec<Option<FoodClass>> = partials
            .iter()
            .map(|p| match p.kind {
                PartialKind::Object => Some(FoodClass::Cucumber),
                PartialKind::Background => None,
            })
            .collect();
        let fused = fuse_masks(&partials, &labels, FoodClass::Cucumber).unwrap();
        assert_eq!(fused.iou(&blob), 1.0);
        // No partial labeled target: absent.
        let none: Vec<Option<FoodClass>> = partials.iter().map(|_| None).collect();
        assert!(fuse_masks(&partials, &none, FoodClass::Cucumber).is_none());
    }

    #[test]
    fn fuse_area_bookkeeping_for_partial_labels() {
        let blob = blob_mask_for_test(9);
        let cfg = PerceptionConfig { partials_range: (4, 4), ..Default::default() };
        let mut rng = rng_from_seed(6);
        let partials = oversegment(&blob, &cfg, &mut rng);
        // Label only every other object partial.
        let mut flip = false;
        let labels: Vec<Option<FoodClass>> = partials
            .iter()
            .map(|p| match p.kind {
                PartialKind::Object => {
                    flip = !flip;
                    flip.then_some(FoodClass::Apple)
                }
                PartialKind::Background => None,
            })
            .collect();
        let expected: usize = partials
            .iter()
            .zip(labels.iter())
            .filter(|(p, l)| p.kind == PartialKind::Object && l.is_some())
            .map(|(p, _)| p.mask.set_count())
            .sum();
        let fused = fuse_masks(&partials, &labels, FoodClass::Apple).unwrap();
        assert_eq!(fused.set_count(), expected);
    }

    #[test]
    fn observe_noiseless_round_trip() {
        let t = TemplateSet::standard();
        let config = SceneGenConfig { n_objects_range: (4, 4), ..Default::default() };
        for seed in [1u64, 2, 3] {
            let scene = generate_scene(&config, &t, seed).unwrap();
            let mut rng = rng_from_seed(seed);
            let obs = observe(&scene, &perfect(), &mut rng);
            assert_eq!(obs.objects.len(), scene.objects.len());
            for class in FoodClass::ALL {
                assert_eq!(obs.count(class), scene.count_of(class));
            }
            // Each fused mask equals the rasterized true shape with a matched
            // centroid.
            for fused in &obs.objects {
                let gt = scene
                    .objects
                    .iter()
                    .min_by(|a, b| {
                        let da = a.shape.centroid().distance_to(fused.centroid);
                        let db = b.shape.centroid().distance_to(fused.centroid);
                        da.partial_cmp(&db).unwrap()
                    })
                    .unwrap();
                assert_eq!(fused.label, gt.class);
                let gt_mask = RasterMask::from_polygon(&gt.shape, 1.0).unwrap();
                assert_eq!(fused.mask.iou(&gt_mask), 1.0);
                assert!(fused.centroid.distance_to(gt.shape.centroid()) <= 1.0);
            }
        }
    }

    #[test]
    fn observe_undercounts_stuck_pair() {
        let scene = stuck_pair_scene(1.0);
        let mut rng = rng_from_seed(0);
        let obs = observe(&scene, &perfect(), &mut rng);
        assert_eq!(scene.count_of(FoodClass::Apple), 2);
        assert_eq!(obs.count(FoodClass::Apple), 1, "stuck pair reads as one object");
    }

    #[test]
    fn fused_masks_stay_within_blob() {
        let scene = stuck_pair_scene(0.5);
        let cfg = PerceptionConfig { p_label: 0.6, ..Default::default() };
        for seed in 0..30 {
            let mut rng = rng_from_seed(seed);
            let (obs, diag) = observe_with_diag(&scene, &cfg, &mut rng);
            for blob in &diag.blobs {
                if let Some(i) = blob.fused_index {
                    let shapes: Vec<RasterMask> = blob
                        .member_ids
                        .iter()
                        .map(|&id| {
                            RasterMask::from_polygon(&scene.object(id).unwrap().shape, 1.0)
                                .unwrap()
                        })
                        .collect();
                    let fused = &obs.objects[i].mask;
                    let covered: usize =
                        shapes.iter().map(|m| fused.intersection_count(m)).sum();
                    assert_eq!(covered, fused.set_count(), "fusion stays within its blob");
                }
            }
        }
    }

    #[test]
    fn raising_p_label_never_shrinks_fused_area() {
        // Common random numbers: same seed, same upstream draws, two label
        // rates. The fused cell set can only grow with p_label.
        let t = TemplateSet::standard();
        let config = SceneGenConfig { n_objects_range: (3, 5), ..Default::default() };
        for seed in 0..20 {
            let scene = generate_scene(&config, &t, seed).unwrap();
            let lo_cfg = PerceptionConfig { p_detect: 1.0, p_label: 0.6, ..Default::default() };
            let hi_cfg = PerceptionConfig { p_detect: 1.0, p_label: 0.9, ..Default::default() };
            let mut rng_lo = rng_from_seed(1000 + seed);
            let mut rng_hi = rng_from_seed(1000 + seed);
            let lo = observe(&scene, &lo_cfg, &mut rng_lo);
            let hi = observe(&scene, &hi_cfg, &mut rng_hi);
            let area_lo: f64 = lo.objects.iter().map(|o| o.area_mm2).sum();
            let area_hi: f64 = hi.objects.iter().map(|o| o.area_mm2).sum();
            assert!(area_hi >= area_lo, "seed {seed}: {area_hi} < {area_lo}");
        }
    }

    #[test]
    fn observe_is_deterministic() {
        let t = TemplateSet::standard();
        let scene = generate_scene(&SceneGenConfig::default(), &t, 33).unwrap();
        let cfg = PerceptionConfig::default();
        let mut a_rng = rng_from_seed(5);
        let mut b_rng = rng_from_seed(5);
        let a = observe(&scene, &cfg, &mut a_rng);
        let b = observe(&scene, &cfg, &mut b_rng);
        assert_eq!(a.objects.len(), b.objects.len());
        for (x, y) in a.objects.iter().zip(b.objects.iter()) {
            assert_eq!(x.label, y.label);
            assert_eq!(x.mask, y.mask);
            assert_eq!(x.centroid, y.centroid);
        }
    }

    #[test]
    fn pgm_dump_writes_masks_and_index() {
        let t = TemplateSet::standard();
        let scene = generate_scene(
            &SceneGenConfig { n_objects_range: (2, 2), ..Default::default() },
            &t,
            4,
        )
        .unwrap();
        let mut rng = rng_from_seed(0);
        let obs = observe(&scene, &perfect(), &mut rng);
        let dir = std::env::temp_dir().join("chopsim_pgm_test");
        let _ = std::fs::remove_dir_all(&dir);
        dump_observation(&obs, &dir, "obs0").unwrap();
        let index: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.join("obs0_index.json")).unwrap())
                .unwrap();
        assert_eq!(index.as_array().unwrap().len(), 2);
        for entry in index.as_array().unwrap() {
            let file = dir.join(entry["file"].as_str().unwrap());
            let bytes = std::fs::read(file).unwrap();
            assert!(bytes.starts_with(b"P5\n"));
        }
        let _ = std::fs::remove_dir_all(&dir);
    }
}
