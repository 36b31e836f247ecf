#![allow(dead_code)]

use geomgen_core::formal::PointSym;
use geomgen_core::numeric::{Coord, NumericScene};

pub fn pt(s: &str) -> PointSym {
    s.parse().unwrap()
}

pub fn c(x: f64, y: f64) -> Coord {
    Coord::new(x, y)
}

pub fn scene(points: &[(&str, Coord)]) -> NumericScene {
    NumericScene::from_points(points.iter().map(|(n, p)| (pt(n), *p)))
}

/// Direct similarity z -> k e^{i t} z + (dx, dy).
pub fn similar(p: Coord, k: f64, t: f64, dx: f64, dy: f64) -> Coord {
    let (s, co) = t.sin_cos();
    c(k * (co * p.x - s * p.y) + dx, k * (s * p.x + co * p.y) + dy)
}

/// Mirror similarity: reflect in the x axis first.
pub fn mirrored(p: Coord, k: f64, t: f64, dx: f64, dy: f64) -> Coord {
    similar(c(p.x, -p.y), k, t, dx, dy)
}

pub fn on_circle(o: Coord, r: f64, deg: f64) -> Coord {
    let t = deg.to_radians();
    c(o.x + r * t.cos(), o.y + r * t.sin())
}

pub fn lerp(a: Coord, b: Coord, t: f64) -> Coord {
    c(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)
}
pub mod fixtures;
