use core::ops::{Add, Mul, Neg, Sub};

use arrayvec::ArrayVec;
use libm::{atan2, fabs, hypot, sqrt};

/// A point of the Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Coord {
    pub x: f64,
    pub y: f64,
}

impl Coord {
    pub const fn new(x: f64, y: f64) -> Self {
        Coord { x, y }
    }

    pub fn dot(self, o: Coord) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Coord) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        hypot(self.x, self.y)
    }

    pub fn dist(self, o: Coord) -> f64 {
        (self - o).norm()
    }

    pub fn rot90(self) -> Coord {
        Coord::new(-self.y, self.x)
    }

    pub fn unit(self) -> Coord {
        let n = self.norm();
        Coord::new(self.x / n, self.y / n)
    }

    pub fn midpoint(self, o: Coord) -> Coord {
        Coord::new((self.x + o.x) / 2.0, (self.y + o.y) / 2.0)
    }

    /// Direction angle in radians, `(-pi, pi]`.
    pub fn angle(self) -> f64 {
        atan2(self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Coord {
    type Output = Coord;
    fn add(self, o: Coord) -> Coord {
        Coord::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Coord {
    type Output = Coord;
    fn sub(self, o: Coord) -> Coord {
        Coord::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Coord {
    type Output = Coord;
    fn mul(self, k: f64) -> Coord {
        Coord::new(self.x * k, self.y * k)
    }
}

impl Neg for Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        Coord::new(-self.x, -self.y)
    }
}

/// A line given by a point and a nonzero direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub origin: Coord,
    pub dir: Coord,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Coord,
    pub radius: f64,
}

/// Up to two intersection points.
pub type Hits = ArrayVec<Coord, 2>;

const EPS: f64 = 1e-12;

impl Line {
    pub fn through(a: Coord, b: Coord) -> Option<Line> {
        let dir = b - a;
        (dir.norm() > EPS).then_some(Line { origin: a, dir })
    }

    pub fn point_at(&self, t: f64) -> Coord {
        self.origin + self.dir * t
    }

    pub fn project(&self, p: Coord) -> Coord {
        let t = (p - self.origin).dot(self.dir) / self.dir.dot(self.dir);
        self.point_at(t)
    }

    pub fn intersect(&self, o: &Line) -> Option<Coord> {
        let den = self.dir.cross(o.dir);
        let scale = self.dir.norm() * o.dir.norm();
        if fabs(den) <= 1e-9 * scale {
            return None;
        }
        let t = (o.origin - self.origin).cross(o.dir) / den;
        Some(self.point_at(t))
    }

    pub fn intersect_circle(&self, c: &Circle) -> Hits {
        let mut out = Hits::new();
        let foot = self.project(c.center);
        let d = foot.dist(c.center);
        if d > c.radius * (1.0 + 1e-12) {
            return out;
        }
        let h = sqrt((c.radius * c.radius - d * d).max(0.0));
        let u = self.dir.unit();
        out.push(foot + u * h);
        if h > EPS {
            out.push(foot - u * h);
        }
        out
    }
}

impl Circle {
    pub fn through3(a: Coord, b: Coord, c: Coord) -> Option<Circle> {
        let center = circumcenter(a, b, c)?;
        Some(Circle { center, radius: center.dist(a) })
    }

    pub fn intersect(&self, o: &Circle) -> Hits {
        let mut out = Hits::new();
        let d = self.center.dist(o.center);
        if d <= EPS || d > self.radius + o.radius || d < fabs(self.radius - o.radius) {
            return out;
        }
        let a = (self.radius * self.radius - o.radius * o.radius + d * d) / (2.0 * d);
        let h = sqrt((self.radius * self.radius - a * a).max(0.0));
        let u = (o.center - self.center) * (1.0 / d);
        let base = self.center + u * a;
        out.push(base + u.rot90() * h);
        if h > EPS {
            out.push(base - u.rot90() * h);
        }
        out
    }

    pub fn point_at(&self, theta: f64) -> Coord {
        self.center + Coord::new(libm::cos(theta), libm::sin(theta)) * self.radius
    }
}

pub fn circumcenter(a: Coord, b: Coord, c: Coord) -> Option<Coord> {
    let ab = b - a;
    let ac = c - a;
    let d = 2.0 * ab.cross(ac);
    if fabs(d) <= 1e-12 * ab.norm() * ac.norm() {
        return None;
    }
    let (b2, c2) = (ab.dot(ab), ac.dot(ac));
    let ux = (ac.y * b2 - ab.y * c2) / d;
    let uy = (ab.x * c2 - ac.x * b2) / d;
    Some(a + Coord::new(ux, uy))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Coord, b: Coord) -> bool {
        a.dist(b) < 1e-9
    }

    #[test]
    fn circumcenter_right_triangle() {
        let o = circumcenter(Coord::new(0.0, 0.0), Coord::new(2.0, 0.0), Coord::new(0.0, 2.0));
        assert!(close(o.unwrap(), Coord::new(1.0, 1.0)));
        assert!(circumcenter(Coord::new(0.0, 0.0), Coord::new(1.0, 1.0), Coord::new(2.0, 2.0)).is_none());
    }

    #[test]
    fn line_circle_hits() {
        let l = Line::through(Coord::new(-5.0, 0.0), Coord::new(5.0, 0.0)).unwrap();
        let c = Circle { center: Coord::new(0.0, 0.0), radius: 1.0 };
        let hits = l.intersect_circle(&c);
        assert_eq!(hits.len(), 2);
        assert!(hits.iter().all(|h| fabs(h.norm() - 1.0) < 1e-12 && fabs(h.y) < 1e-12));
    }

    #[test]
    fn circle_circle_hits() {
        let a = Circle { center: Coord::new(0.0, 0.0), radius: 1.0 };
        let b = Circle { center: Coord::new(1.0, 0.0), radius: 1.0 };
        let hits = a.intersect(&b);
        assert_eq!(hits.len(), 2);
        for h in hits {
            assert!(fabs(h.norm() - 1.0) < 1e-12);
            assert!(fabs(h.dist(b.center) - 1.0) < 1e-12);
        }
    }

    #[test]
    fn parallel_lines_do_not_meet() {
        let a = Line::through(Coord::new(0.0, 0.0), Coord::new(1.0, 0.0)).unwrap();
        let b = Line::through(Coord::new(0.0, 1.0), Coord::new(1.0, 1.0)).unwrap();
        assert!(a.intersect(&b).is_none());
    }
}
