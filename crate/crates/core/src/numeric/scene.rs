use alloc::collections::BTreeMap;
use alloc::string::String;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::check::{check_with, DEFAULT_TOLERANCE};
use super::geom::{Circle, Coord, Hits, Line};
use super::recipe::{CircleTerm, ConstructionRecipe, LineTerm, RecipeArg, RecipeKind};
use crate::formal::{Instance, PointSym, Statement};

/// Points closer than this are treated as coincident.
pub const MIN_SEPARATION: f64 = 1e-2;
/// Placed coordinates must stay inside `[-BOUND, BOUND]^2`.
pub const BOUND: f64 = 20.0;

#[derive(Debug, Clone, Copy)]
pub struct SceneOptions {
    pub max_attempts: u32,
    pub tolerance: f64,
}

impl Default for SceneOptions {
    fn default() -> Self {
        SceneOptions {
            max_attempts: 64,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// Concrete coordinates for every point of a construction.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericScene {
    pub positions: BTreeMap<PointSym, Coord>,
    pub seed: u64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    /// Every attempt produced coincident points, an out-of-bounds point or
    /// a failed non-degeneracy guard.
    #[error("construction stayed degenerate after {attempts} attempts ({detail})")]
    Degenerate { attempts: u32, detail: String },
    /// Some locus intersection was empty on every attempt.
    #[error("construction unsatisfiable: {0}")]
    Unsatisfiable(String),
    #[error("point `{0}` is used before it is constructed")]
    UnknownPoint(PointSym),
}

enum Failure {
    Degenerate(String),
    Empty(String),
}

/// Mixes two words into one seed (splitmix64 finalizer).
pub fn mix_seed(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x6A09_E667_F3BC_C909);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl NumericScene {
    /// A scene with hand-placed points.
    pub fn from_points(points: impl IntoIterator<Item = (PointSym, Coord)>) -> Self {
        NumericScene {
            positions: points.into_iter().collect(),
            seed: 0,
            tolerance: crate::numeric::DEFAULT_TOLERANCE,
        }
    }

    pub fn get(&self, p: PointSym) -> Option<Coord> {
        self.positions.get(&p).copied()
    }

    /// Checks a statement at the scene's tolerance. Unknown points fail.
    pub fn check(&self, stmt: &Statement) -> bool {
        self.check_tol(stmt, self.tolerance)
    }

    pub fn check_tol(&self, stmt: &Statement, tol: f64) -> bool {
        check_with(stmt, |p| self.get(p), tol).unwrap_or(false)
    }

    /// Builds a scene for a sequence of instantiated definitions.
    pub fn build(instances: &[Instance], seed: u64, opts: SceneOptions) -> Result<Self, SceneError> {
        let mut last_empty = None;
        let mut last_degenerate = String::new();
        let mut empty_every_time = true;
        for attempt in 0..opts.max_attempts.max(1) {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, attempt as u64));
            match attempt_build(instances, &mut rng, opts.tolerance) {
                Ok(positions) => {
                    return Ok(NumericScene {
                        positions,
                        seed,
                        tolerance: opts.tolerance,
                    })
                }
                Err(Ok(Failure::Empty(d))) => last_empty = Some(d),
                Err(Ok(Failure::Degenerate(d))) => {
                    empty_every_time = false;
                    last_degenerate = d;
                }
                Err(Err(e)) => return Err(e),
            }
        }
        match last_empty {
            Some(d) if empty_every_time => Err(SceneError::Unsatisfiable(d)),
            _ => Err(SceneError::Degenerate {
                attempts: opts.max_attempts.max(1),
                detail: last_degenerate,
            }),
        }
    }
}

type Attempt = Result<BTreeMap<PointSym, Coord>, Result<Failure, SceneError>>;

fn attempt_build(instances: &[Instance], rng: &mut ChaCha8Rng, tol: f64) -> Attempt {
    let mut pos: BTreeMap<PointSym, Coord> = BTreeMap::new();
    for inst in instances {
        for (target, recipe) in &inst.recipe {
            let c = place(recipe, &pos, rng)?;
            if !c.is_finite() || c.x.abs() > BOUND || c.y.abs() > BOUND {
                return Err(Ok(Failure::Degenerate(alloc::format!("`{target}` out of bounds"))));
            }
            if let Some((q, _)) = pos.iter().find(|(_, &o)| o.dist(c) < MIN_SEPARATION) {
                return Err(Ok(Failure::Degenerate(alloc::format!(
                    "`{target}` coincides with `{q}`"
                ))));
            }
            pos.insert(*target, c);
        }
        for g in inst.guards.iter().chain(&inst.emitted) {
            if !check_with(g, |p| pos.get(&p).copied(), tol.max(1e-7)).unwrap_or(false) {
                return Err(Ok(Failure::Degenerate(alloc::format!("`{g}` fails in {}", inst.name))));
            }
        }
    }
    Ok(pos)
}

fn get(pos: &BTreeMap<PointSym, Coord>, p: PointSym) -> Result<Coord, Result<Failure, SceneError>> {
    pos.get(&p).copied().ok_or(Err(SceneError::UnknownPoint(p)))
}

fn line_of(t: &LineTerm, pos: &BTreeMap<PointSym, Coord>) -> Result<Line, Result<Failure, SceneError>> {
    let degenerate = || Ok(Failure::Degenerate(alloc::format!("degenerate locus {t}")));
    let line = match *t {
        LineTerm::Through(a, b) => Line::through(get(pos, a)?, get(pos, b)?),
        LineTerm::Perpendicular(p, a, b) => {
            let o = get(pos, p)?;
            Line::through(o, o + (get(pos, b)? - get(pos, a)?).rot90())
        }
        LineTerm::Parallel(p, a, b) => {
            let o = get(pos, p)?;
            Line::through(o, o + (get(pos, b)? - get(pos, a)?))
        }
        LineTerm::Bisector(a, b) => {
            let (a, b) = (get(pos, a)?, get(pos, b)?);
            let m = a.midpoint(b);
            Line::through(m, m + (b - a).rot90())
        }
        LineTerm::AngleBisector(a, b, c) => {
            let (a, b, c) = (get(pos, a)?, get(pos, b)?, get(pos, c)?);
            let (u, v) = (a - b, c - b);
            if u.norm() < 1e-12 || v.norm() < 1e-12 {
                None
            } else {
                Line::through(b, b + u.unit() + v.unit())
            }
        }
    };
    line.ok_or_else(degenerate)
}

fn circle_of(t: &CircleTerm, pos: &BTreeMap<PointSym, Coord>) -> Result<Circle, Result<Failure, SceneError>> {
    let circle = match *t {
        CircleTerm::Through(o, p) => {
            let o = get(pos, o)?;
            Some(Circle { center: o, radius: o.dist(get(pos, p)?) })
        }
        CircleTerm::Circum(a, b, c) => Circle::through3(get(pos, a)?, get(pos, b)?, get(pos, c)?),
        CircleTerm::Diameter(a, b) => {
            let (a, b) = (get(pos, a)?, get(pos, b)?);
            Some(Circle { center: a.midpoint(b), radius: a.dist(b) / 2.0 })
        }
        CircleTerm::Radius(o, a, b) => {
            Some(Circle { center: get(pos, o)?, radius: get(pos, a)?.dist(get(pos, b)?) })
        }
    };
    match circle {
        Some(c) if c.radius > 1e-9 => Ok(c),
        _ => Err(Ok(Failure::Degenerate(alloc::format!("degenerate locus {t}")))),
    }
}

/// Picks an intersection branch: prefer points away from existing ones,
/// then the lexicographically smaller coordinate.
fn pick(hits: Hits, pos: &BTreeMap<PointSym, Coord>, what: &ConstructionRecipe) -> Result<Coord, Result<Failure, SceneError>> {
    let fresh = |c: &Coord| pos.values().all(|o| o.dist(*c) >= MIN_SEPARATION);
    let key = |c: &Coord| (!fresh(c), c.x, c.y);
    hits.into_iter()
        .min_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(core::cmp::Ordering::Equal))
        .ok_or_else(|| Ok(Failure::Empty(alloc::format!("{what} has no solution"))))
}

fn place(r: &ConstructionRecipe, pos: &BTreeMap<PointSym, Coord>, rng: &mut ChaCha8Rng) -> Result<Coord, Result<Failure, SceneError>> {
    let point = |i: usize| match r.args[i] {
        RecipeArg::Point(p) => get(pos, p),
        _ => unreachable!("signature checked at parse time"),
    };
    let line = |i: usize| match &r.args[i] {
        RecipeArg::Line(l) => line_of(l, pos),
        _ => unreachable!("signature checked at parse time"),
    };
    let circle = |i: usize| match &r.args[i] {
        RecipeArg::Circle(c) => circle_of(c, pos),
        _ => unreachable!("signature checked at parse time"),
    };
    Ok(match r.kind {
        RecipeKind::Free => Coord::new(rng.gen::<f64>(), rng.gen::<f64>()),
        RecipeKind::OnLine => {
            let l = line(0)?;
            l.origin + l.dir.unit() * rng.gen_range(-1.0..1.0)
        }
        RecipeKind::OnCircle => circle(0)?.point_at(rng.gen_range(0.0..core::f64::consts::TAU)),
        RecipeKind::Midpoint => point(0)?.midpoint(point(1)?),
        RecipeKind::Reflection => {
            let (p, q) = (point(0)?, point(1)?);
            q * 2.0 - p
        }
        RecipeKind::IntersectionLineLine => {
            let (a, b) = (line(0)?, line(1)?);
            a.intersect(&b)
                .ok_or_else(|| Ok(Failure::Degenerate(alloc::format!("{r}: parallel lines"))))?
        }
        RecipeKind::IntersectionLineCircle => pick(line(0)?.intersect_circle(&circle(1)?), pos, r)?,
        RecipeKind::IntersectionCircleCircle => pick(circle(0)?.intersect(&circle(1)?), pos, r)?,
        RecipeKind::FootOfPerpendicular => {
            let l = Line::through(point(1)?, point(2)?)
                .ok_or_else(|| Ok(Failure::Degenerate(alloc::format!("{r}: degenerate line"))))?;
            l.project(point(0)?)
        }
        RecipeKind::Circumcenter => super::geom::circumcenter(point(0)?, point(1)?, point(2)?)
            .ok_or_else(|| Ok(Failure::Degenerate(alloc::format!("{r}: collinear points"))))?,
        RecipeKind::EquidistantPoint => {
            let (a, b) = (point(0)?, point(1)?);
            let len = a.dist(b);
            a.midpoint(b) + (b - a).rot90().unit() * (len * rng.gen_range(-1.0..1.0))
        }
    })
}
