//! Scene file format.
//!
//! Canonical JSON: sorted keys, coordinates rounded to 6 decimals. Loading a
//! canonical file and saving it again reproduces the bytes exactly.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::geometry::{Point2, Polygon};

use super::{Board, FoodClass, Scene, SceneError, SceneObject, SizeFraction};

#[derive(Serialize, Deserialize)]
struct SceneFile {
    board: BoardFile,
    objects: Vec<ObjectFile>,
}

#[derive(Serialize, Deserialize)]
struct BoardFile {
    width_mm: f64,
    height_mm: f64,
}

#[derive(Serialize, Deserialize)]
struct ObjectFile {
    id: u32,
    class: FoodClass,
    size_fraction: SizeFraction,
    vertices_mm: Vec<[f64; 2]>,
    parent_id: Option<u32>,
}

fn round6(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

/// Serialize with sorted keys and 6-decimal coordinates.
pub fn scene_to_canonical_json(scene: &Scene) -> String {
    let file = SceneFile {
        board: BoardFile {
            width_mm: round6(scene.board.width_mm),
            height_mm: round6(scene.board.height_mm),
        },
        objects: scene
            .objects
            .iter()
            .map(|o| ObjectFile {
                id: o.id,
                class: o.class,
                size_fraction: o.size_fraction,
                vertices_mm: o
                    .shape
                    .vertices()
                    .iter()
                    .map(|p| [round6(p.x), round6(p.y)])
                    .collect(),
                parent_id: o.parent_id,
            })
            .collect(),
    };
    // Round-tripping through Value sorts the object keys.
    let value: Value = serde_json::to_value(&file).expect("scene serializes");
    serde_json::to_string_pretty(&value).expect("value serializes")
}

pub fn load_scene_json(json: &str) -> Result<Scene, SceneError> {
    let file: SceneFile = serde_json::from_str(json)
        .map_err(|e| SceneError::BadConfig(format!("scene JSON: {e}")))?;
    let mut objects = Vec::with_capacity(file.objects.len());
    let mut next_id = 0u32;
    for o in file.objects {
        let shape = Polygon::new(o.vertices_mm.iter().map(|&[x, y]| Point2::new(x, y)).collect())?;
        next_id = next_id.max(o.id + 1);
        objects.push(SceneObject {
            id: o.id,
            class: o.class,
            size_fraction: o.size_fraction,
            shape,
            parent_id: o.parent_id,
        });
    }
    Ok(Scene {
        board: Board { width_mm: file.board.width_mm, height_mm: file.board.height_mm },
        objects,
        next_id,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{generate_scene, SceneGenConfig, TemplateSet};
    use super::*;

    #[test]
    fn canonical_json_round_trips_byte_identically() {
        let scene =
            generate_scene(&SceneGenConfig::default(), &TemplateSet::standard(), 123).unwrap();
        let first = scene_to_canonical_json(&scene);
        let loaded = load_scene_json(&first).unwrap();
        let second = scene_to_canonical_json(&loaded);
        assert_eq!(first, second);
        assert_eq!(loaded.objects.len(), scene.objects.len());
    }

    #[test]
    fn keys_are_sorted() {
        let scene =
            generate_scene(&SceneGenConfig::default(), &TemplateSet::standard(), 9).unwrap();
        let json = scene_to_canonical_json(&scene);
        let board_pos = json.find("\"board\"").unwrap();
        let objects_pos = json.find("\"objects\"").unwrap();
        assert!(board_pos < objects_pos);
        let height_pos = json.find("\"height_mm\"").unwrap();
        let width_pos = json.find("\"width_mm\"").unwrap();
        assert!(height_pos < width_pos);
    }

    #[test]
    fn load_rejects_garbage() {
        assert!(load_scene_json("{\"nope\": 1}").is_err());
    }
}
