use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::formal::PointSym;

/// How a single point is placed in a scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecipeKind {
    Free,
    OnLine,
    OnCircle,
    Midpoint,
    Reflection,
    IntersectionLineLine,
    IntersectionLineCircle,
    IntersectionCircleCircle,
    FootOfPerpendicular,
    Circumcenter,
    EquidistantPoint,
}

impl RecipeKind {
    pub const ALL: [RecipeKind; 11] = [
        RecipeKind::Free,
        RecipeKind::OnLine,
        RecipeKind::OnCircle,
        RecipeKind::Midpoint,
        RecipeKind::Reflection,
        RecipeKind::IntersectionLineLine,
        RecipeKind::IntersectionLineCircle,
        RecipeKind::IntersectionCircleCircle,
        RecipeKind::FootOfPerpendicular,
        RecipeKind::Circumcenter,
        RecipeKind::EquidistantPoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RecipeKind::Free => "free",
            RecipeKind::OnLine => "on_line",
            RecipeKind::OnCircle => "on_circle",
            RecipeKind::Midpoint => "midpoint",
            RecipeKind::Reflection => "reflection",
            RecipeKind::IntersectionLineLine => "intersection_line_line",
            RecipeKind::IntersectionLineCircle => "intersection_line_circle",
            RecipeKind::IntersectionCircleCircle => "intersection_circle_circle",
            RecipeKind::FootOfPerpendicular => "foot_of_perpendicular",
            RecipeKind::Circumcenter => "circumcenter",
            RecipeKind::EquidistantPoint => "equidistant_point",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        RecipeKind::ALL.iter().copied().find(|k| k.name() == s)
    }

    fn signature(self) -> &'static [ArgShape] {
        use ArgShape::*;
        match self {
            RecipeKind::Free => &[],
            RecipeKind::OnLine => &[Line],
            RecipeKind::OnCircle => &[Circle],
            RecipeKind::Midpoint | RecipeKind::Reflection | RecipeKind::EquidistantPoint => {
                &[Point, Point]
            }
            RecipeKind::IntersectionLineLine => &[Line, Line],
            RecipeKind::IntersectionLineCircle => &[Line, Circle],
            RecipeKind::IntersectionCircleCircle => &[Circle, Circle],
            RecipeKind::FootOfPerpendicular | RecipeKind::Circumcenter => &[Point, Point, Point],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ArgShape {
    Point,
    Line,
    Circle,
}

/// A line locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LineTerm {
    /// `line(p, q)`: through two points.
    Through(PointSym, PointSym),
    /// `tline(p, a, b)`: through `p`, perpendicular to `ab`.
    Perpendicular(PointSym, PointSym, PointSym),
    /// `pline(p, a, b)`: through `p`, parallel to `ab`.
    Parallel(PointSym, PointSym, PointSym),
    /// `bline(a, b)`: perpendicular bisector of `ab`.
    Bisector(PointSym, PointSym),
    /// `abline(a, b, c)`: internal bisector of the angle at `b`.
    AngleBisector(PointSym, PointSym, PointSym),
}

/// A circle locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CircleTerm {
    /// `circle(o, p)`: centered at `o` through `p`.
    Through(PointSym, PointSym),
    /// `circum(a, b, c)`: circumcircle.
    Circum(PointSym, PointSym, PointSym),
    /// `diam(a, b)`: circle with diameter `ab`.
    Diameter(PointSym, PointSym),
    /// `rcircle(o, a, b)`: centered at `o` with radius `|ab|`.
    Radius(PointSym, PointSym, PointSym),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecipeArg {
    Point(PointSym),
    Line(LineTerm),
    Circle(CircleTerm),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstructionRecipe {
    pub kind: RecipeKind,
    pub args: Vec<RecipeArg>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecipeError {
    #[error("unknown recipe kind `{0}`")]
    UnknownKind(String),
    #[error("unknown locus `{0}`")]
    UnknownLocus(String),
    #[error("malformed recipe `{0}`")]
    Malformed(String),
    #[error("`{kind}` expects {expected}")]
    Signature { kind: &'static str, expected: String },
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}

fn call(s: &str) -> Option<(&str, &str)> {
    let s = s.trim();
    let open = s.find('(')?;
    let inner = s.strip_suffix(')')?;
    Some((s[..open].trim(), &inner[open + 1..]))
}

fn point(s: &str) -> Result<PointSym, RecipeError> {
    s.trim()
        .parse()
        .map_err(|_| RecipeError::Malformed(s.to_string()))
}

fn points<const N: usize>(inner: &str, whole: &str) -> Result<[PointSym; N], RecipeError> {
    let parts = split_top_level(inner);
    if parts.len() != N {
        return Err(RecipeError::Malformed(whole.to_string()));
    }
    let mut out = [PointSym::nth(0); N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = point(p)?;
    }
    Ok(out)
}

fn parse_arg(s: &str) -> Result<RecipeArg, RecipeError> {
    let Some((head, inner)) = call(s) else {
        return Ok(RecipeArg::Point(point(s)?));
    };
    let arg = match head {
        "line" => {
            let [p, q] = points(inner, s)?;
            RecipeArg::Line(LineTerm::Through(p, q))
        }
        "tline" => {
            let [p, a, b] = points(inner, s)?;
            RecipeArg::Line(LineTerm::Perpendicular(p, a, b))
        }
        "pline" => {
            let [p, a, b] = points(inner, s)?;
            RecipeArg::Line(LineTerm::Parallel(p, a, b))
        }
        "bline" => {
            let [a, b] = points(inner, s)?;
            RecipeArg::Line(LineTerm::Bisector(a, b))
        }
        "abline" => {
            let [a, b, c] = points(inner, s)?;
            RecipeArg::Line(LineTerm::AngleBisector(a, b, c))
        }
        "circle" => {
            let [o, p] = points(inner, s)?;
            RecipeArg::Circle(CircleTerm::Through(o, p))
        }
        "circum" => {
            let [a, b, c] = points(inner, s)?;
            RecipeArg::Circle(CircleTerm::Circum(a, b, c))
        }
        "diam" => {
            let [a, b] = points(inner, s)?;
            RecipeArg::Circle(CircleTerm::Diameter(a, b))
        }
        "rcircle" => {
            let [o, a, b] = points(inner, s)?;
            RecipeArg::Circle(CircleTerm::Radius(o, a, b))
        }
        other => return Err(RecipeError::UnknownLocus(other.to_string())),
    };
    Ok(arg)
}

impl ConstructionRecipe {
    /// Parses `kind(arg, ...)`.
    pub fn parse(text: &str) -> Result<Self, RecipeError> {
        let (head, inner) = call(text).ok_or_else(|| RecipeError::Malformed(text.to_string()))?;
        let kind = RecipeKind::from_name(head).ok_or_else(|| RecipeError::UnknownKind(head.to_string()))?;
        let args = split_top_level(inner)
            .into_iter()
            .map(parse_arg)
            .collect::<Result<Vec<_>, _>>()?;
        let recipe = ConstructionRecipe { kind, args };
        recipe.check_signature()?;
        Ok(recipe)
    }

    fn check_signature(&self) -> Result<(), RecipeError> {
        let sig = self.kind.signature();
        let ok = sig.len() == self.args.len()
            && sig.iter().zip(&self.args).all(|(s, a)| {
                matches!(
                    (s, a),
                    (ArgShape::Point, RecipeArg::Point(_))
                        | (ArgShape::Line, RecipeArg::Line(_))
                        | (ArgShape::Circle, RecipeArg::Circle(_))
                )
            });
        if ok {
            Ok(())
        } else {
            let expected: Vec<&str> = sig
                .iter()
                .map(|s| match s {
                    ArgShape::Point => "point",
                    ArgShape::Line => "line",
                    ArgShape::Circle => "circle",
                })
                .collect();
            Err(RecipeError::Signature {
                kind: self.kind.name(),
                expected: alloc::format!("({})", expected.join(", ")),
            })
        }
    }

    /// Every point the recipe reads.
    pub fn points(&self) -> Vec<PointSym> {
        let mut out = Vec::new();
        for a in &self.args {
            match *a {
                RecipeArg::Point(p) => out.push(p),
                RecipeArg::Line(l) => match l {
                    LineTerm::Through(a, b) | LineTerm::Bisector(a, b) => out.extend([a, b]),
                    LineTerm::Perpendicular(a, b, c)
                    | LineTerm::Parallel(a, b, c)
                    | LineTerm::AngleBisector(a, b, c) => out.extend([a, b, c]),
                },
                RecipeArg::Circle(c) => match c {
                    CircleTerm::Through(a, b) | CircleTerm::Diameter(a, b) => out.extend([a, b]),
                    CircleTerm::Circum(a, b, c) | CircleTerm::Radius(a, b, c) => {
                        out.extend([a, b, c])
                    }
                },
            }
        }
        out
    }

    pub fn map_points(&self, f: impl Fn(PointSym) -> PointSym) -> Self {
        let args = self
            .args
            .iter()
            .map(|a| match *a {
                RecipeArg::Point(p) => RecipeArg::Point(f(p)),
                RecipeArg::Line(l) => RecipeArg::Line(match l {
                    LineTerm::Through(a, b) => LineTerm::Through(f(a), f(b)),
                    LineTerm::Perpendicular(p, a, b) => LineTerm::Perpendicular(f(p), f(a), f(b)),
                    LineTerm::Parallel(p, a, b) => LineTerm::Parallel(f(p), f(a), f(b)),
                    LineTerm::Bisector(a, b) => LineTerm::Bisector(f(a), f(b)),
                    LineTerm::AngleBisector(a, b, c) => LineTerm::AngleBisector(f(a), f(b), f(c)),
                }),
                RecipeArg::Circle(c) => RecipeArg::Circle(match c {
                    CircleTerm::Through(o, p) => CircleTerm::Through(f(o), f(p)),
                    CircleTerm::Circum(a, b, c) => CircleTerm::Circum(f(a), f(b), f(c)),
                    CircleTerm::Diameter(a, b) => CircleTerm::Diameter(f(a), f(b)),
                    CircleTerm::Radius(o, a, b) => CircleTerm::Radius(f(o), f(a), f(b)),
                }),
            })
            .collect();
        ConstructionRecipe {
            kind: self.kind,
            args,
        }
    }
}

impl fmt::Display for LineTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineTerm::Through(a, b) => write!(f, "line({a}, {b})"),
            LineTerm::Perpendicular(p, a, b) => write!(f, "tline({p}, {a}, {b})"),
            LineTerm::Parallel(p, a, b) => write!(f, "pline({p}, {a}, {b})"),
            LineTerm::Bisector(a, b) => write!(f, "bline({a}, {b})"),
            LineTerm::AngleBisector(a, b, c) => write!(f, "abline({a}, {b}, {c})"),
        }
    }
}

impl fmt::Display for CircleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircleTerm::Through(o, p) => write!(f, "circle({o}, {p})"),
            CircleTerm::Circum(a, b, c) => write!(f, "circum({a}, {b}, {c})"),
            CircleTerm::Diameter(a, b) => write!(f, "diam({a}, {b})"),
            CircleTerm::Radius(o, a, b) => write!(f, "rcircle({o}, {a}, {b})"),
        }
    }
}

impl fmt::Display for ConstructionRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.kind.name())?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match a {
                RecipeArg::Point(p) => write!(f, "{p}")?,
                RecipeArg::Line(l) => write!(f, "{l}")?,
                RecipeArg::Circle(c) => write!(f, "{c}")?,
            }
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_loci() {
        let r = ConstructionRecipe::parse("intersection_line_line(tline(b, a, b), line(a, e))").unwrap();
        assert_eq!(r.kind, RecipeKind::IntersectionLineLine);
        assert_eq!(r.to_string(), "intersection_line_line(tline(b, a, b), line(a, e))");
        assert_eq!(r.points().len(), 5);
    }

    #[test]
    fn free_has_no_args() {
        let r = ConstructionRecipe::parse("free()").unwrap();
        assert!(r.args.is_empty());
    }

    #[test]
    fn rejects_bad_kind_and_signature() {
        assert!(matches!(
            ConstructionRecipe::parse("teleport(a)"),
            Err(RecipeError::UnknownKind(_))
        ));
        assert!(matches!(
            ConstructionRecipe::parse("midpoint(a)"),
            Err(RecipeError::Signature { .. })
        ));
        assert!(matches!(
            ConstructionRecipe::parse("on_line(spiral(a, b))"),
            Err(RecipeError::UnknownLocus(_))
        ));
    }
}
