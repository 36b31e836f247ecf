use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use libm::{atan2, cos, sin, sqrt};

use crate::formal::{Instance, PointSym, Predicate};
use crate::generator::ExDefinitionSet;
use crate::numeric::{CircleTerm, Coord, NumericScene, RecipeArg, RecipeKind};

pub const CANVAS: f64 = 400.0;
pub const MARGIN: f64 = 0.1;
const LABEL_OFFSET: f64 = 14.0;
const LABEL_MIN_GAP: f64 = 8.0;
const TICK: f64 = 5.0;
const MARK: f64 = 8.0;

type P = (f64, f64);

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Point { name: PointSym, at: P, label: P },
    Segment { ends: (PointSym, PointSym), from: P, to: P },
    Circle { center: P, radius: f64 },
    Tick { from: P, to: P },
    RightAngle { corner: [P; 3] },
}

/// Drawing elements in construction order on a square canvas.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramSpec {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub elements: Vec<Element>,
}

// Scene-space shapes of one entry.
#[derive(Default)]
struct Shapes {
    segments: Vec<(PointSym, PointSym)>,
    circles: Vec<(Coord, f64)>,
    ticks: Vec<(PointSym, PointSym)>,
    right: Vec<(PointSym, PointSym, PointSym)>,
}

fn shapes(e: &Instance, pos: &BTreeMap<PointSym, Coord>) -> Shapes {
    let mut s = Shapes::default();
    let at = |p: &PointSym| pos[p];
    if e.deps.is_empty() && e.introduced.len() >= 2 {
        let n = e.introduced.len();
        let closed = if n >= 3 { n } else { 1 };
        for i in 0..closed {
            s.segments.push((e.introduced[i], e.introduced[(i + 1) % n]));
        }
    }
    for st in &e.emitted {
        let a = &st.args;
        match st.predicate {
            Predicate::Coll => {
                let mut best = (a[0], a[1]);
                for (p, q) in [(a[0], a[1]), (a[0], a[2]), (a[1], a[2])] {
                    if at(&p).dist(at(&q)) > at(&best.0).dist(at(&best.1)) {
                        best = (p, q);
                    }
                }
                s.segments.push(best);
            }
            Predicate::Para | Predicate::Perp => {
                s.segments.push((a[0], a[1]));
                s.segments.push((a[2], a[3]));
                if st.predicate == Predicate::Perp {
                    let shared = [a[0], a[1]].into_iter().find(|p| *p == a[2] || *p == a[3]);
                    if let Some(v) = shared {
                        let u = if a[0] == v { a[1] } else { a[0] };
                        let w = if a[2] == v { a[3] } else { a[2] };
                        s.right.push((u, v, w));
                    }
                }
            }
            Predicate::Midp => {
                s.segments.push((a[1], a[2]));
                s.ticks.push((a[1], a[0]));
                s.ticks.push((a[0], a[2]));
            }
            Predicate::Circle => s.circles.push((at(&a[0]), at(&a[0]).dist(at(&a[1])))),
            Predicate::Eqangle => {
                for k in 0..4 {
                    s.segments.push((a[2 * k], a[2 * k + 1]));
                }
            }
            _ => {}
        }
    }
    // loci the new point was picked from; circles a base figure or a
    // circle-circle intersection only used as scaffolding stay hidden
    for (_, r) in &e.recipe {
        if e.deps.is_empty() || !matches!(r.kind, RecipeKind::OnCircle | RecipeKind::IntersectionLineCircle) {
            continue;
        }
        for arg in &r.args {
            if let RecipeArg::Circle(t) = arg {
                if let Some(c) = eval_circle(t, pos) {
                    s.circles.push(c);
                }
            }
        }
    }
    s
}

fn eval_circle(t: &CircleTerm, pos: &BTreeMap<PointSym, Coord>) -> Option<(Coord, f64)> {
    let g = |p: &PointSym| pos.get(p).copied();
    match t {
        CircleTerm::Through(o, p) => Some((g(o)?, g(o)?.dist(g(p)?))),
        CircleTerm::Circum(a, b, c) => {
            crate::numeric::Circle::through3(g(a)?, g(b)?, g(c)?).map(|c| (c.center, c.radius))
        }
        CircleTerm::Diameter(a, b) => Some((g(a)?.midpoint(g(b)?), g(a)?.dist(g(b)?) / 2.0)),
        CircleTerm::Radius(o, a, b) => Some((g(o)?, g(a)?.dist(g(b)?))),
    }
}

/// Lays out every entry of `exd` at the scene's coordinates.
pub fn diagram_spec(exd: &ExDefinitionSet, scene: &NumericScene) -> DiagramSpec {
    let pos = &scene.positions;
    let per_entry: Vec<Shapes> = exd.entries().iter().map(|e| shapes(e, pos)).collect();

    // bounding box over points and circles
    let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
    let mut grow = |x: f64, y: f64, r: f64| {
        lo = (lo.0.min(x - r), lo.1.min(y - r));
        hi = (hi.0.max(x + r), hi.1.max(y + r));
    };
    for p in exd.points() {
        grow(pos[&p].x, pos[&p].y, 0.0);
    }
    for s in &per_entry {
        for (c, r) in &s.circles {
            grow(c.x, c.y, *r);
        }
    }
    let inner = CANVAS * (1.0 - 2.0 * MARGIN);
    let span = (hi.0 - lo.0).max(hi.1 - lo.1);
    let scale = if span > 1e-12 { inner / span } else { 1.0 };
    let mid = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
    let map = |c: Coord| -> P { (CANVAS / 2.0 + (c.x - mid.0) * scale, CANVAS / 2.0 - (c.y - mid.1) * scale) };

    let points = exd.points();
    let canvas: BTreeMap<PointSym, P> = points.iter().map(|p| (*p, map(pos[p]))).collect();
    let labels = place_labels(&points, &canvas);

    let mut elements = Vec::new();
    let mut drawn: BTreeSet<(PointSym, PointSym)> = BTreeSet::new();
    let mut circles: BTreeSet<(i64, i64, i64)> = BTreeSet::new();
    for (e, s) in exd.entries().iter().zip(&per_entry) {
        for p in &e.introduced {
            elements.push(Element::Point { name: *p, at: canvas[p], label: labels[p] });
        }
        for &(a, b) in &s.segments {
            let key = if a <= b { (a, b) } else { (b, a) };
            if a != b && drawn.insert(key) {
                elements.push(Element::Segment { ends: key, from: canvas[&key.0], to: canvas[&key.1] });
            }
        }
        for (c, r) in &s.circles {
            let (center, radius) = (map(*c), r * scale);
            let key = ((center.0 * 10.0) as i64, (center.1 * 10.0) as i64, (radius * 10.0) as i64);
            if circles.insert(key) {
                elements.push(Element::Circle { center, radius });
            }
        }
        for &(a, b) in &s.ticks {
            elements.push(tick(canvas[&a], canvas[&b]));
        }
        for &(u, v, w) in &s.right {
            elements.push(right_mark(canvas[&u], canvas[&v], canvas[&w]));
        }
    }
    DiagramSpec { width: CANVAS, height: CANVAS, margin: MARGIN, elements }
}

fn unit(from: P, to: P) -> P {
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    let n = sqrt(dx * dx + dy * dy);
    if n < 1e-12 {
        (1.0, 0.0)
    } else {
        (dx / n, dy / n)
    }
}

// A short stroke across the middle of segment ab.
fn tick(a: P, b: P) -> Element {
    let m = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
    let (ux, uy) = unit(a, b);
    let (nx, ny) = (-uy * TICK, ux * TICK);
    Element::Tick { from: (m.0 - nx, m.1 - ny), to: (m.0 + nx, m.1 + ny) }
}

fn right_mark(u: P, v: P, w: P) -> Element {
    let a = unit(v, u);
    let b = unit(v, w);
    let p1 = (v.0 + a.0 * MARK, v.1 + a.1 * MARK);
    let p3 = (v.0 + b.0 * MARK, v.1 + b.1 * MARK);
    let p2 = (p1.0 + b.0 * MARK, p1.1 + b.1 * MARK);
    Element::RightAngle { corner: [p1, p2, p3] }
}

/// Offsets each label away from the centroid, then nudges any label
/// closer than 8 px to an earlier one around its point.
fn place_labels(points: &[PointSym], at: &BTreeMap<PointSym, P>) -> BTreeMap<PointSym, P> {
    let n = points.len().max(1) as f64;
    let cx = points.iter().map(|p| at[p].0).sum::<f64>() / n;
    let cy = points.iter().map(|p| at[p].1).sum::<f64>() / n;
    let mut out: BTreeMap<PointSym, P> = BTreeMap::new();
    let mut placed: Vec<P> = Vec::new();
    for p in points {
        let (x, y) = at[p];
        let base = if (x - cx).abs() + (y - cy).abs() < 1e-9 { -core::f64::consts::FRAC_PI_4 } else { atan2(y - cy, x - cx) };
        let spot = |theta: f64| clamp((x + LABEL_OFFSET * cos(theta), y + LABEL_OFFSET * sin(theta)));
        let mut best = spot(base);
        // one pass over twelve directions; keep the first that clears
        for k in 0..12 {
            let cand = spot(base + k as f64 * core::f64::consts::PI / 6.0);
            if placed.iter().all(|q| dist(*q, cand) >= LABEL_MIN_GAP) {
                best = cand;
                break;
            }
        }
        placed.push(best);
        out.insert(*p, best);
    }
    out
}

fn clamp(p: P) -> P {
    (p.0.clamp(4.0, CANVAS - 4.0), p.1.clamp(10.0, CANVAS - 4.0))
}

fn dist(a: P, b: P) -> f64 {
    sqrt((a.0 - b.0) * (a.0 - b.0) + (a.1 - b.1) * (a.1 - b.1))
}

impl DiagramSpec {
    /// SVG 1.1, one element per line.
    pub fn to_svg(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = self.width,
            h = self.height
        );
        let _ = writeln!(s, r#"<rect class="background" x="0" y="0" width="{}" height="{}" fill="white"/>"#, self.width, self.height);
        for e in &self.elements {
            match e {
                Element::Point { name, at, label } => {
                    let _ = writeln!(s, r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="2.5" fill="black"/>"#, at.0, at.1);
                    let _ = writeln!(
                        s,
                        r#"<text class="label" x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
                        label.0,
                        label.1,
                        name.upper()
                    );
                }
                Element::Segment { from, to, .. } => {
                    let _ = writeln!(
                        s,
                        r#"<line class="segment" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1.2"/>"#,
                        from.0, from.1, to.0, to.1
                    );
                }
                Element::Circle { center, radius } => {
                    let _ = writeln!(
                        s,
                        r#"<circle class="locus" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="gray" stroke-width="1"/>"#,
                        center.0, center.1, radius
                    );
                }
                Element::Tick { from, to } => {
                    let _ = writeln!(
                        s,
                        r#"<line class="tick" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
                        from.0, from.1, to.0, to.1
                    );
                }
                Element::RightAngle { corner } => {
                    let _ = writeln!(
                        s,
                        r#"<polyline class="right-angle" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="none" stroke="black" stroke-width="1"/>"#,
                        corner[0].0, corner[0].1, corner[1].0, corner[1].1, corner[2].0, corner[2].1
                    );
                }
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

pub fn render_diagram(exd: &ExDefinitionSet, scene: &NumericScene) -> String {
    diagram_spec(exd, scene).to_svg()
}
