use libm::{fabs, log};

use super::geom::{circumcenter, Coord};
use crate::formal::{Predicate, Statement};

/// Default agreement tolerance for relational checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Minimum normalized margin for `ncoll`, `npara` and `sameside` to hold.
pub const GUARD_MARGIN: f64 = 1e-6;

#[derive(Clone, Copy)]
struct Cx(f64, f64);

impl Cx {
    fn of(c: Coord) -> Cx {
        Cx(c.x, c.y)
    }
    fn mul(self, o: Cx) -> Cx {
        Cx(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn conj(self) -> Cx {
        Cx(self.0, -self.1)
    }
    fn abs(self) -> f64 {
        libm::hypot(self.0, self.1)
    }
    fn div(self, o: Cx) -> Cx {
        let d = o.0 * o.0 + o.1 * o.1;
        let n = self.mul(o.conj());
        Cx(n.0 / d, n.1 / d)
    }
    fn unit(self) -> Cx {
        let n = self.abs();
        Cx(self.0 / n, self.1 / n)
    }
}

fn tiny(v: Coord) -> bool {
    v.norm() <= 1e-12
}

/// Normalized sine between directions `u` and `v`.
fn sine(u: Coord, v: Coord) -> f64 {
    fabs(u.cross(v)) / (u.norm() * v.norm())
}

fn cosine(u: Coord, v: Coord) -> f64 {
    u.dot(v) / (u.norm() * v.norm())
}

fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    fabs(a - b) <= tol * a.abs().max(b.abs()).max(1e-12)
}

fn coll(a: Coord, b: Coord, c: Coord) -> Option<f64> {
    let (u, v) = (b - a, c - a);
    if tiny(u) || tiny(v) || tiny(c - b) {
        return None;
    }
    Some(sine(u, v))
}

fn para(a: Coord, b: Coord, c: Coord, d: Coord) -> Option<f64> {
    let (u, v) = (b - a, d - c);
    (!tiny(u) && !tiny(v)).then(|| sine(u, v))
}

/// Residual of `angle(ab -> cd) == angle(ef -> gh)` modulo a half turn.
fn eqangle(p: &[Coord]) -> Option<f64> {
    let dirs: [Coord; 4] = [p[1] - p[0], p[3] - p[2], p[5] - p[4], p[7] - p[6]];
    if dirs.iter().any(|d| tiny(*d)) {
        return None;
    }
    let u: [Cx; 4] = dirs.map(|d| Cx::of(d).unit());
    let z1 = u[1].mul(u[0].conj());
    let z2 = u[3].mul(u[2].conj());
    Some(fabs(z1.mul(z2.conj()).1))
}

/// Residual of `|ab| / |cd| == |ef| / |gh|` as a log difference.
fn eqratio(p: &[Coord]) -> Option<f64> {
    let l = [p[0].dist(p[1]), p[2].dist(p[3]), p[4].dist(p[5]), p[6].dist(p[7])];
    if l.iter().any(|x| *x <= 1e-12) {
        return None;
    }
    Some(fabs(log(l[0] * l[3] / (l[1] * l[2]))))
}

fn similar(p: &[Coord], mirror: bool, tol: f64) -> bool {
    let (a, b, c, x, y, z) = (p[0], p[1], p[2], p[3], p[4], p[5]);
    if coll(a, b, c).is_none_or(|s| s < GUARD_MARGIN) || coll(x, y, z).is_none_or(|s| s < GUARD_MARGIN) {
        return false;
    }
    let z1 = Cx::of(c - a).div(Cx::of(b - a));
    let mut z2 = Cx::of(z - x).div(Cx::of(y - x));
    if mirror {
        z2 = z2.conj();
    }
    let diff = Cx(z1.0 - z2.0, z1.1 - z2.1).abs();
    diff <= tol * z1.abs().max(z2.abs())
}

fn cong(a: Coord, b: Coord, c: Coord, d: Coord, tol: f64) -> bool {
    let (l1, l2) = (a.dist(b), c.dist(d));
    l1 > 1e-12 && l2 > 1e-12 && rel_eq(l1, l2, tol)
}

/// Evaluates a predicate on concrete coordinates, given in argument order.
///
/// Relational predicates compare a scale-free residual against `tol`.
/// Guards (`ncoll`, `npara`, `sameside`) additionally require a margin of
/// [`GUARD_MARGIN`] so that near-degenerate scenes do not pass them.
pub fn check_coords(pred: Predicate, p: &[Coord], tol: f64) -> bool {
    debug_assert_eq!(p.len(), pred.arity());
    match pred {
        Predicate::Coll => {
            if tiny(p[1] - p[0]) || tiny(p[2] - p[0]) || tiny(p[2] - p[1]) {
                return true;
            }
            coll(p[0], p[1], p[2]).is_none_or(|s| s <= tol)
        }
        Predicate::Ncoll => coll(p[0], p[1], p[2]).is_some_and(|s| s > tol.max(GUARD_MARGIN)),
        Predicate::Para => para(p[0], p[1], p[2], p[3]).is_some_and(|s| s <= tol),
        Predicate::Npara => para(p[0], p[1], p[2], p[3]).is_some_and(|s| s > tol.max(GUARD_MARGIN)),
        Predicate::Perp => {
            let (u, v) = (p[1] - p[0], p[3] - p[2]);
            !tiny(u) && !tiny(v) && fabs(cosine(u, v)) <= tol
        }
        Predicate::Cong => cong(p[0], p[1], p[2], p[3], tol),
        Predicate::Midp => {
            let len = p[1].dist(p[2]);
            len > 1e-12 && p[0].dist(p[1].midpoint(p[2])) <= tol * len
        }
        Predicate::Circle => {
            cong(p[0], p[1], p[0], p[2], tol) && cong(p[0], p[1], p[0], p[3], tol)
        }
        Predicate::Cyclic => {
            let Some(o) = circumcenter(p[0], p[1], p[2]) else {
                return false;
            };
            let r = o.dist(p[0]);
            !tiny(p[3] - p[0]) && !tiny(p[3] - p[1]) && !tiny(p[3] - p[2]) && rel_eq(o.dist(p[3]), r, tol)
        }
        Predicate::Eqangle => eqangle(p).is_some_and(|r| r <= tol),
        Predicate::Eqratio => eqratio(p).is_some_and(|r| r <= tol),
        Predicate::Eqangle6 => {
            let q = [p[1], p[0], p[1], p[2], p[4], p[3], p[4], p[5]];
            eqangle(&q).is_some_and(|r| r <= tol)
        }
        Predicate::Eqratio6 => {
            let q = [p[0], p[1], p[1], p[2], p[3], p[4], p[4], p[5]];
            eqratio(&q).is_some_and(|r| r <= tol)
        }
        Predicate::Simtri => similar(p, false, tol),
        Predicate::Simtri2 => similar(p, true, tol),
        Predicate::SimtriStar => similar(p, false, tol) || similar(p, true, tol),
        Predicate::Contri => similar(p, false, tol) && cong(p[0], p[1], p[3], p[4], tol),
        Predicate::Contri2 => similar(p, true, tol) && cong(p[0], p[1], p[3], p[4], tol),
        Predicate::ContriStar => {
            (similar(p, false, tol) || similar(p, true, tol)) && cong(p[0], p[1], p[3], p[4], tol)
        }
        Predicate::Sameside => {
            let s1 = cosine(p[1] - p[0], p[2] - p[0]);
            let s2 = cosine(p[4] - p[3], p[5] - p[3]);
            if !s1.is_finite() || !s2.is_finite() {
                return false;
            }
            let m = tol.max(GUARD_MARGIN);
            (s1 > m && s2 > m) || (s1 < -m && s2 < -m)
        }
    }
}

/// Evaluates `stmt` with point coordinates supplied by `lookup`. Returns
/// `None` if some point is unknown.
pub fn check_with(
    stmt: &Statement,
    mut lookup: impl FnMut(crate::formal::PointSym) -> Option<Coord>,
    tol: f64,
) -> Option<bool> {
    let mut coords = arrayvec::ArrayVec::<Coord, 8>::new();
    for p in stmt.points() {
        coords.push(lookup(p)?);
    }
    Some(check_coords(stmt.predicate, &coords, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Coord {
        Coord::new(x, y)
    }

    #[test]
    fn basic_relations() {
        let (a, b, o) = (c(0.0, 0.0), c(2.0, 0.0), c(1.0, 1.0));
        assert!(check_coords(Predicate::Coll, &[a, b, c(5.0, 0.0)], 1e-9));
        assert!(check_coords(Predicate::Ncoll, &[a, b, o], 1e-9));
        assert!(check_coords(Predicate::Perp, &[a, b, c(1.0, 0.0), o], 1e-9));
        assert!(check_coords(Predicate::Cong, &[o, a, o, b], 1e-9));
        assert!(check_coords(Predicate::Midp, &[c(1.0, 0.0), a, b], 1e-9));
        assert!(!check_coords(Predicate::Para, &[a, b, a, o], 1e-9));
        assert!(check_coords(Predicate::Npara, &[a, b, a, o], 1e-9));
    }

    #[test]
    fn isosceles_base_angles() {
        // eqangle o a a b a b o b: angle(oa -> ab) equals angle(ab -> ob)
        let (o, a, b) = (c(0.3, 2.0), c(-1.0, 0.0), c(1.0, 0.0));
        assert!(!check_coords(Predicate::Eqangle, &[o, a, a, b, a, b, o, b], 1e-9));
        let (o, a, b) = (c(0.0, 2.0), c(-1.0, 0.0), c(1.0, 0.0));
        assert!(check_coords(Predicate::Eqangle, &[o, a, a, b, a, b, o, b], 1e-9));
        assert!(check_coords(Predicate::Eqangle6, &[o, a, b, a, b, o], 1e-9));
    }

    #[test]
    fn cyclic_and_circle() {
        let pts = [0.1f64, 1.3, 2.9, 4.4].map(|t| c(libm::cos(t), libm::sin(t)));
        assert!(check_coords(Predicate::Cyclic, &pts, 1e-9));
        assert!(check_coords(Predicate::Circle, &[c(0.0, 0.0), pts[0], pts[1], pts[2]], 1e-9));
        assert!(!check_coords(Predicate::Cyclic, &[pts[0], pts[1], pts[2], c(0.0, 0.0)], 1e-9));
    }

    #[test]
    fn similarity_orientation() {
        let (a, b, cc) = (c(0.0, 0.0), c(1.0, 0.0), c(0.2, 0.7));
        let (x, y, z) = (c(0.0, 0.0), c(2.0, 0.0), c(0.4, 1.4));
        assert!(check_coords(Predicate::Simtri, &[a, b, cc, x, y, z], 1e-9));
        assert!(!check_coords(Predicate::Simtri2, &[a, b, cc, x, y, z], 1e-9));
        let zm = c(0.4, -1.4);
        assert!(check_coords(Predicate::Simtri2, &[a, b, cc, x, y, zm], 1e-9));
        assert!(check_coords(Predicate::SimtriStar, &[a, b, cc, x, y, zm], 1e-9));
        assert!(!check_coords(Predicate::Contri2, &[a, b, cc, x, y, zm], 1e-9));
    }

    #[test]
    fn sameside_uses_dot_sign() {
        let (o, a, cc) = (c(0.0, 0.0), c(1.0, 0.0), c(3.0, 0.0));
        // a lies between o and c in both copies
        assert!(check_coords(Predicate::Sameside, &[a, o, cc, a, o, cc], 1e-9));
        assert!(!check_coords(Predicate::Sameside, &[a, o, cc, o, a, cc], 1e-9));
    }
}
