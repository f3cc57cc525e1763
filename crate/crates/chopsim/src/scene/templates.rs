//! Whole-object outlines at canonical pose.
//!
//! Template dimensions are artifact defaults chosen for plausible relative
//! sizes and aspect ratios; elongated produce carries a rollable axis along
//! its length.

use std::collections::BTreeMap;

use crate::geometry::{Point2, Polygon};

use super::FoodClass;

/// A whole-object outline plus the axis (unit vector, canonical pose) along
/// which a cylindrical object rolls, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeTemplate {
    pub class: FoodClass,
    pub base_polygon: Polygon,
    pub rollable_axis: Option<(f64, f64)>,
}

/// Registry of shape templates, one per food class.
#[derive(Debug, Clone)]
pub struct TemplateSet {
    templates: BTreeMap<FoodClass, ShapeTemplate>,
}

impl TemplateSet {
    /// The built-in apple / cucumber / carrot set.
    pub fn standard() -> Self {
        let mut set = TemplateSet { templates: BTreeMap::new() };
        set.register(ShapeTemplate {
            class: FoodClass::Apple,
            base_polygon: regular_ngon(64, 40.0),
            rollable_axis: None,
        });
        set.register(ShapeTemplate {
            class: FoodClass::Cucumber,
            base_polygon: capsule(160.0, 35.0),
            rollable_axis: Some((1.0, 0.0)),
        });
        set.register(ShapeTemplate {
            class: FoodClass::Carrot,
            base_polygon: tapered_capsule(150.0, 25.0, 8.0),
            rollable_axis: Some((1.0, 0.0)),
        });
        set
    }

    pub fn register(&mut self, template: ShapeTemplate) {
        debug_assert!(template.base_polygon.area() > 400.0, "template area too small");
        let bb = template.base_polygon.bbox();
        debug_assert!(bb.width() <= 200.0 && bb.height() <= 200.0, "template exceeds 200x200");
        self.templates.insert(template.class, template);
    }

    pub fn get(&self, class: FoodClass) -> &ShapeTemplate {
        self.templates.get(&class).expect("every food class has a registered template")
    }

    pub fn rollable_axis(&self, class: FoodClass) -> Option<(f64, f64)> {
        self.get(class).rollable_axis
    }
}

fn regular_ngon(n: usize, radius: f64) -> Polygon {
    let verts: Vec<Point2> = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            Point2::new(radius * t.cos(), radius * t.sin())
        })
        .collect();
    Polygon::new(verts).expect("regular polygon is valid")
}

/// Stadium shape: total length x width, round caps.
fn capsule(length: f64, width: f64) -> Polygon {
    let r = width / 2.0;
    let cx = length / 2.0 - r;
    hull_of_discs(&[(cx, 0.0, r), (-cx, 0.0, r)])
}

/// Cone-ended capsule: a fat end and a thin end, `length` tip to tip.
fn tapered_capsule(length: f64, max_width: f64, tip_width: f64) -> Polygon {
    let r_big = max_width / 2.0;
    let r_tip = tip_width / 2.0;
    let x_big = length / 2.0 - r_big;
    let x_tip = -(length / 2.0 - r_tip);
    hull_of_discs(&[(x_big, 0.0, r_big), (x_tip, 0.0, r_tip)])
}

fn hull_of_discs(discs: &[(f64, f64, f64)]) -> Polygon {
    let mut points = Vec::new();
    for &(cx, cy, r) in discs {
        for i in 0..48 {
            let t = std::f64::consts::TAU * i as f64 / 48.0;
            points.push(Point2::new(cx + r * t.cos(), cy + r * t.sin()));
        }
    }
    Polygon::convex_hull_of(&points).expect("disc hull is a valid polygon")
}
