//! Hand-placed configurations, one per catalog rule, each satisfying that
//! rule's premises.

use geomgen_core::numeric::Coord;

use super::{c, lerp, mirrored, on_circle, similar};

type Fixture = Vec<(&'static str, Coord)>;

fn triangle() -> [Coord; 3] {
    [c(0.0, 0.0), c(4.0, 0.0), c(1.0, 3.0)]
}

fn with_image(f: impl Fn(Coord) -> Coord) -> Fixture {
    let [a, b, cc] = triangle();
    vec![("a", a), ("b", b), ("c", cc), ("p", f(a)), ("q", f(b)), ("r", f(cc))]
}

fn isosceles() -> Fixture {
    vec![("o", c(2.0, 3.0)), ("a", c(0.0, 0.0)), ("b", c(4.0, 0.0))]
}

fn tangent() -> Fixture {
    let o = c(0.0, 0.0);
    vec![
        ("o", o),
        ("a", on_circle(o, 5.0, 0.0)),
        ("b", on_circle(o, 5.0, 70.0)),
        ("c", on_circle(o, 5.0, 200.0)),
        ("x", c(5.0, 2.0)),
    ]
}

fn concyclic4(names: [&'static str; 4]) -> Fixture {
    let o = c(1.0, -1.0);
    names
        .iter()
        .zip([15.0, 100.0, 170.0, 290.0])
        .map(|(n, d)| (*n, on_circle(o, 4.0, d)))
        .collect()
}

fn bisector() -> Fixture {
    let (a, b, cc) = (c(1.0, 3.0), c(0.0, 0.0), c(5.0, 0.0));
    let ab = a.dist(b);
    let ac = a.dist(cc);
    vec![("a", a), ("b", b), ("c", cc), ("d", lerp(b, cc, ab / (ab + ac)))]
}

fn trapezoid_cut() -> Fixture {
    let (a, b, cc, d) = (c(0.0, 0.0), c(6.0, 0.0), c(4.0, 4.0), c(1.0, 4.0));
    vec![("a", a), ("b", b), ("c", cc), ("d", d), ("m", lerp(a, d, 0.3)), ("n", lerp(b, cc, 0.3))]
}

fn six_lines(f: impl Fn(Coord) -> Coord) -> Fixture {
    let base = [
        ("a", c(0.0, 0.0)),
        ("b", c(3.0, 1.0)),
        ("c", c(1.0, 4.0)),
        ("d", c(-1.0, 2.5)),
        ("e", c(5.0, 3.0)),
        ("f", c(2.0, -2.0)),
    ];
    let images = ["m", "n", "p", "q", "r", "u"];
    let mut out: Fixture = base.to_vec();
    out.extend(images.iter().zip(base.iter()).map(|(n, (_, p))| (*n, f(*p))));
    out
}

/// Point placements for rule `K_<n>`.
pub fn fixture(n: usize) -> Fixture {
    let direct = |p| similar(p, 1.0, 0.7, 9.0, 2.0);
    let scaled = |p| similar(p, 1.8, 0.5, 7.0, 1.0);
    let mirror_congruent = |p| mirrored(p, 1.0, 0.4, 10.0, 1.0);
    let mirror_similar = |p| mirrored(p, 1.6, 0.3, 10.0, -1.0);
    match n {
        1 => with_image(mirror_congruent),
        2 | 5 | 10 => with_image(scaled),
        3 | 4 | 9 | 11 => with_image(direct),
        6 => with_image(mirror_similar),
        7 | 8 => isosceles(),
        12 => six_lines(|p| similar(p, 1.0, 0.9, 8.0, -3.0)),
        26 => six_lines(|p| similar(p, 1.7, 0.0, 8.0, -3.0)),
        13 => {
            let (a, b, p, q) = (c(0.0, 0.0), c(3.0, 1.0), c(1.0, 4.0), c(-1.0, 2.0));
            let rot = |z| similar(z, 1.0, core::f64::consts::FRAC_PI_2, 6.0, 1.0);
            vec![("a", a), ("b", b), ("p", p), ("q", q), ("c", rot(a)), ("d", rot(b)), ("u", rot(p)), ("v", rot(q))]
        }
        14 | 19 => tangent(),
        15 => vec![("a", c(3.0, 4.0)), ("b", c(3.0, -4.0)), ("p", c(5.0, 0.0)), ("q", c(-5.0, 0.0))],
        16 => {
            let o = c(0.0, 0.0);
            [("a", 10.0), ("b", 80.0), ("p", 150.0), ("q", 220.0), ("c", 300.0), ("r", 260.0)]
                .iter()
                .map(|(n, d)| (*n, on_circle(o, 5.0, *d)))
                .collect()
        }
        17 => {
            let (a, b, cc) = (c(0.0, 0.0), c(3.0, 1.0), c(1.0, -2.0));
            let (e, f, g) = (c(5.0, 5.0), c(7.0, 2.0), c(-1.0, 4.0));
            let d = cc + (b - a).rot90() * 0.7;
            let h = g + (f - e).rot90() * 0.6;
            vec![("a", a), ("b", b), ("c", cc), ("d", d), ("e", e), ("f", f), ("g", g), ("h", h)]
        }
        18 => vec![("a", c(0.0, 0.0)), ("b", c(4.0, 2.0)), ("p", c(1.0, 3.0)), ("q", c(3.5, -2.0))],
        20 => concyclic4(["a", "b", "p", "q"]),
        21 => concyclic4(["a", "p", "b", "q"]),
        39 => {
            let mut f = concyclic4(["a", "b", "c", "d"]);
            f.push(("o", c(1.0, -1.0)));
            f
        }
        22 => {
            let (a, b) = (c(2.0, 1.0), c(1.0, 3.0));
            vec![("o", c(0.0, 0.0)), ("a", a), ("b", b), ("c", a * 2.5), ("d", b * 2.5)]
        }
        23 => vec![("a", c(0.0, 0.0)), ("b", c(1.0, 1.0)), ("c", c(3.0, 3.0))],
        24 => {
            let (a, b) = (c(2.0, 1.0), c(1.0, 3.0));
            vec![("o", c(0.0, 0.0)), ("a", a), ("b", b), ("c", a * -1.5), ("d", b * -1.5)]
        }
        25 => {
            let [a, b, cc] = triangle();
            vec![("a", a), ("b", b), ("c", cc), ("e", a.midpoint(b)), ("f", a.midpoint(cc))]
        }
        27 => {
            let cc = c(1.0, 3.0);
            vec![
                ("a", c(0.0, 0.0)),
                ("b", c(2.0, 1.0)),
                ("c", cc),
                ("d", cc + c(2.0, 1.0) * 1.3),
                ("p", c(4.0, -1.0)),
                ("q", c(5.0, 2.0)),
            ]
        }
        28 => vec![("a", c(4.0, 3.0)), ("b", c(-4.0, 3.0)), ("c", c(3.0, -4.0)), ("d", c(-3.0, -4.0))],
        29 | 30 => bisector(),
        31 => vec![("o", c(0.0, 0.0)), ("a", c(5.0, 0.0)), ("b", c(3.0, 4.0)), ("c", c(-5.0, 0.0))],
        32 => {
            let (a, cc) = (c(4.0, 0.0), c(0.0, 3.0));
            vec![("a", a), ("b", c(0.0, 0.0)), ("c", cc), ("m", a.midpoint(cc))]
        }
        33 => {
            let cc = c(1.0, 2.0);
            let u = c(-2.0, 1.0);
            vec![
                ("a", c(0.0, 0.0)),
                ("b", c(3.0, 0.0)),
                ("c", cc),
                ("d", cc + c(0.4f64.cos(), 0.4f64.sin()) * 3.0),
                ("p", c(5.0, 5.0)),
                ("q", c(7.0, 5.0)),
                ("u", u),
                ("v", u + c(1.0f64.cos(), 1.0f64.sin()) * 2.0),
            ]
        }
        34 | 38 => trapezoid_cut(),
        35 => {
            let (a, b, cc, d) = (c(0.0, 0.0), c(3.0, 1.0), c(1.0, 4.0), c(-2.0, 3.0));
            vec![("a", a), ("b", b), ("c", cc), ("d", d), ("m", a.midpoint(b)), ("n", cc.midpoint(d))]
        }
        36 => {
            let (a, b) = (c(0.0, 0.0), c(4.0, 2.0));
            let m = a.midpoint(b);
            vec![("a", a), ("b", b), ("m", m), ("o", m + (b - a).rot90() * 0.8)]
        }
        37 => {
            let (a, b, cc) = (c(0.0, 0.0), c(3.0, 1.0), c(1.0, -2.0));
            let d = cc + (b - a).rot90() * 0.7;
            let e = c(4.0, 4.0);
            let f = e + (b - a) * 0.6;
            vec![("a", a), ("b", b), ("c", cc), ("d", d), ("e", e), ("f", f)]
        }
        40 | 41 => {
            let o = c(0.0, 0.0);
            let (b, cc) = (on_circle(o, 5.0, 200.0), on_circle(o, 5.0, 330.0));
            vec![("o", o), ("a", on_circle(o, 5.0, 80.0)), ("b", b), ("c", cc), ("m", b.midpoint(cc))]
        }
        42 => {
            let (a, b, cc) = (c(0.0, 0.0), c(5.0, 4.0), c(4.0, 1.0));
            let m = a.midpoint(b);
            vec![("a", a), ("b", b), ("c", cc), ("d", m * 2.0 - cc), ("m", m)]
        }
        43 => {
            let (a, b, cc) = (c(0.0, 0.0), c(5.0, 4.0), c(4.0, 1.0));
            vec![("a", a), ("b", b), ("c", cc), ("d", a + b - cc), ("m", a.midpoint(b))]
        }
        _ => panic!("no fixture for K_{n}"),
    }
}
