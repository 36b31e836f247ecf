//! Algebraic reasoning: angle and ratio linear systems plus collinearity
//! and concyclicity closures.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use libm::{atan2, round};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::linear::{frac, Linear, LinearSystem, Q, Var};
use crate::formal::{PointSym, Predicate, Statement};
use crate::numeric::{Coord, NumericScene};

pub type FactId = u32;

/// An unordered pair of distinct points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Seg(pub PointSym, pub PointSym);

impl Seg {
    pub fn new(a: PointSym, b: PointSym) -> Seg {
        if a <= b {
            Seg(a, b)
        } else {
            Seg(b, a)
        }
    }
}

/// Which closure justified an algebraic derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subsystem {
    Angle,
    Ratio,
    Lines,
    Circles,
}

impl Subsystem {
    pub fn name(self) -> &'static str {
        match self {
            Subsystem::Angle => "angle",
            Subsystem::Ratio => "ratio",
            Subsystem::Lines => "lines",
            Subsystem::Circles => "circles",
        }
    }
}

/// Source facts whose combination yields a queried statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub subsystem: Subsystem,
    pub facts: Vec<FactId>,
}

#[derive(Debug, Clone)]
struct PointSet {
    points: BTreeSet<PointSym>,
    sources: BTreeSet<FactId>,
}

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Nominal angle equations of a statement: `(expression, value mod 1)`
/// with directions measured in half turns.
pub fn angle_equations(s: &Statement) -> Vec<(Vec<(Seg, i64)>, Q)> {
    let a = &s.args;
    let seg = |i: usize, j: usize| Seg::new(a[i], a[j]);
    match s.predicate {
        Predicate::Coll => vec![
            (vec![(seg(0, 1), 1), (seg(0, 2), -1)], q(0, 1)),
            (vec![(seg(0, 1), 1), (seg(1, 2), -1)], q(0, 1)),
        ],
        Predicate::Midp => vec![
            (vec![(seg(0, 1), 1), (seg(0, 2), -1)], q(0, 1)),
            (vec![(seg(0, 1), 1), (seg(1, 2), -1)], q(0, 1)),
        ],
        Predicate::Para => vec![(vec![(seg(0, 1), 1), (seg(2, 3), -1)], q(0, 1))],
        Predicate::Perp => vec![(vec![(seg(0, 1), 1), (seg(2, 3), -1)], q(1, 2))],
        Predicate::Eqangle => vec![(
            vec![(seg(0, 1), 1), (seg(2, 3), -1), (seg(4, 5), -1), (seg(6, 7), 1)],
            q(0, 1),
        )],
        Predicate::Eqangle6 => vec![(
            vec![(seg(1, 0), 1), (seg(1, 2), -1), (seg(4, 3), -1), (seg(4, 5), 1)],
            q(0, 1),
        )],
        _ => Vec::new(),
    }
}

/// Nominal log-length equations, constants in units of `log 2`.
pub fn ratio_equations(s: &Statement) -> Vec<(Vec<(Seg, i64)>, Q)> {
    let a = &s.args;
    let seg = |i: usize, j: usize| Seg::new(a[i], a[j]);
    match s.predicate {
        Predicate::Cong => vec![(vec![(seg(0, 1), 1), (seg(2, 3), -1)], q(0, 1))],
        Predicate::Midp => vec![
            (vec![(seg(0, 1), 1), (seg(0, 2), -1)], q(0, 1)),
            (vec![(seg(1, 2), 1), (seg(0, 1), -1)], q(1, 1)),
        ],
        Predicate::Circle => vec![
            (vec![(seg(0, 1), 1), (seg(0, 2), -1)], q(0, 1)),
            (vec![(seg(0, 1), 1), (seg(0, 3), -1)], q(0, 1)),
        ],
        Predicate::Eqratio => vec![(
            vec![(seg(0, 1), 1), (seg(2, 3), -1), (seg(4, 5), -1), (seg(6, 7), 1)],
            q(0, 1),
        )],
        Predicate::Eqratio6 => vec![(
            vec![(seg(0, 1), 1), (seg(1, 2), -1), (seg(3, 4), -1), (seg(4, 5), 1)],
            q(0, 1),
        )],
        _ => Vec::new(),
    }
}

/// Direction of `ab` in half turns, in `[0, 1)`.
fn theta(a: Coord, b: Coord) -> f64 {
    let t = atan2(b.y - a.y, b.x - a.x) / core::f64::consts::PI;
    let t = t - libm::floor(t);
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

/// Exact state of the algebraic closures over a fixed point set.
#[derive(Debug, Clone)]
pub struct ArState {
    positions: BTreeMap<PointSym, Coord>,
    vars: BTreeMap<Seg, Var>,
    segs: Vec<Seg>,
    angle: LinearSystem,
    ratio: LinearSystem,
    lines: Vec<PointSet>,
    circles: Vec<PointSet>,
    fact_points: BTreeMap<FactId, Statement>,
    inserted: BTreeSet<FactId>,
}

impl ArState {
    pub fn new(scene: &NumericScene) -> Self {
        let positions = scene.positions.clone();
        let pts: Vec<PointSym> = positions.keys().copied().collect();
        let mut vars = BTreeMap::new();
        let mut segs = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let s = Seg(pts[i], pts[j]);
                vars.insert(s, segs.len() as Var);
                segs.push(s);
            }
        }
        ArState {
            positions,
            vars,
            segs,
            angle: LinearSystem::new(),
            ratio: LinearSystem::new(),
            lines: Vec::new(),
            circles: Vec::new(),
            fact_points: BTreeMap::new(),
            inserted: BTreeSet::new(),
        }
    }

    /// Fresh closures holding only `facts`, numbered in order.
    pub fn from_facts<'a>(scene: &NumericScene, facts: impl Iterator<Item = &'a Statement>) -> Self {
        let mut ar = ArState::new(scene);
        for (i, f) in facts.enumerate() {
            ar.insert(i as FactId, f);
        }
        ar
    }

    pub fn points(&self) -> impl Iterator<Item = PointSym> + '_ {
        self.positions.keys().copied()
    }

    pub fn segs(&self) -> &[Seg] {
        &self.segs
    }

    pub fn var(&self, s: Seg) -> Option<Var> {
        self.vars.get(&s).copied()
    }

    fn expr(&self, terms: &[(Seg, i64)]) -> Option<Linear> {
        let mut l = Linear::new();
        for (s, k) in terms {
            if s.0 == s.1 {
                return None;
            }
            l.add_term(self.var(*s)?, Q::from_integer(BigInt::from(*k)));
        }
        Some(l)
    }

    fn numeric_angle(&self, terms: &[(Seg, i64)]) -> Option<f64> {
        let mut v = 0.0;
        for (s, k) in terms {
            v += *k as f64 * theta(*self.positions.get(&s.0)?, *self.positions.get(&s.1)?);
        }
        Some(v)
    }

    /// Lifts a mod-1 angle equation to an exact one using the scene's
    /// directions. `None` if the equation is numerically false.
    fn lift(&self, terms: &[(Seg, i64)], nominal: &Q) -> Option<Linear> {
        let e = self.expr(terms)?;
        let v = self.numeric_angle(terms)? - nominal.to_f64()?;
        let n = round(v);
        if (v - n).abs() > 1e-6 {
            return None;
        }
        Some(e.with_constant(nominal + Q::from_integer(BigInt::from(n as i64))))
    }

    pub fn is_inserted(&self, id: FactId) -> bool {
        self.inserted.contains(&id)
    }

    /// Feeds a fact into every subsystem that reads its predicate.
    pub fn insert(&mut self, id: FactId, s: &Statement) {
        if !self.inserted.insert(id) || s.is_degenerate() {
            return;
        }
        for (k, (terms, nominal)) in angle_equations(s).iter().enumerate() {
            if let Some(eq) = self.lift(terms, nominal) {
                self.angle.insert(&eq, (id, k as u8));
            }
        }
        for (k, (terms, c)) in ratio_equations(s).iter().enumerate() {
            if let Some(eq) = self.expr(terms) {
                self.ratio.insert(&eq.with_constant(c.clone()), (id, k as u8));
            }
        }
        match s.predicate {
            Predicate::Coll | Predicate::Midp => {
                self.fact_points.insert(id, s.clone());
                add_set(&mut self.lines, s.points().collect(), id, 2);
            }
            Predicate::Cyclic => {
                self.fact_points.insert(id, s.clone());
                add_set(&mut self.circles, s.points().collect(), id, 3);
            }
            _ => {}
        }
    }

    pub fn angle_system(&self) -> &LinearSystem {
        &self.angle
    }

    pub fn ratio_system(&self) -> &LinearSystem {
        &self.ratio
    }

    /// Normal form of a segment direction, constant reduced mod 1.
    pub fn dir_nf(&self, s: Seg) -> Linear {
        let mut nf = self.angle.normal_form(&Linear::var(self.vars[&s]));
        nf.constant = frac(&nf.constant);
        nf
    }

    pub fn len_nf(&self, s: Seg) -> Linear {
        self.ratio.normal_form(&Linear::var(self.vars[&s]))
    }

    pub fn lines(&self) -> impl Iterator<Item = &BTreeSet<PointSym>> {
        self.lines.iter().map(|l| &l.points)
    }

    pub fn circles(&self) -> impl Iterator<Item = &BTreeSet<PointSym>> {
        self.circles.iter().map(|l| &l.points)
    }

    pub fn line_of(&self, a: PointSym, b: PointSym) -> Option<usize> {
        self.lines
            .iter()
            .position(|l| l.points.contains(&a) && l.points.contains(&b))
    }

    fn angle_cert(&self, s: &Statement) -> Option<Vec<FactId>> {
        let mut facts = BTreeSet::new();
        let eqs = angle_equations(s);
        if eqs.is_empty() {
            return None;
        }
        for (terms, nominal) in eqs {
            let e = self.expr(&terms)?;
            let r = self.angle.reduce(&e);
            if !r.rest.is_constant() {
                return None;
            }
            let value = -r.rest.constant;
            if !(value - nominal).is_integer() {
                return None;
            }
            facts.extend(r.combo.keys().map(|k| k.0));
        }
        Some(facts.into_iter().collect())
    }

    fn ratio_cert(&self, s: &Statement) -> Option<Vec<FactId>> {
        let mut facts = BTreeSet::new();
        let eqs = ratio_equations(s);
        if eqs.is_empty() {
            return None;
        }
        for (terms, nominal) in eqs {
            let e = self.expr(&terms)?;
            let r = self.ratio.reduce(&e);
            if !r.rest.is_constant() || -r.rest.constant != nominal {
                return None;
            }
            facts.extend(r.combo.keys().map(|k| k.0));
        }
        Some(facts.into_iter().collect())
    }

    fn set_cert(&self, sets: &[PointSet], pts: &[PointSym], merge: usize) -> Option<Vec<FactId>> {
        let set = sets.iter().find(|l| pts.iter().all(|p| l.points.contains(p)))?;
        let mut keep: Vec<FactId> = set.sources.iter().copied().collect();
        let mut i = 0;
        while i < keep.len() {
            let mut trial = keep.clone();
            trial.remove(i);
            let mut scratch = Vec::new();
            for id in &trial {
                add_set(&mut scratch, self.fact_points[id].points().collect(), *id, merge);
            }
            if scratch.iter().any(|l| pts.iter().all(|p| l.points.contains(p))) {
                keep = trial;
            } else {
                i += 1;
            }
        }
        Some(keep)
    }

    /// Returns a certificate if the statement follows from the inserted
    /// facts. Does not mutate the state.
    pub fn query(&self, s: &Statement) -> Option<Certificate> {
        if s.is_degenerate() {
            return None;
        }
        let a = &s.args;
        let cert = |subsystem, facts| Some(Certificate { subsystem, facts });
        match s.predicate {
            Predicate::Coll => {
                let pts = [a[0], a[1], a[2]];
                cert(Subsystem::Lines, self.set_cert(&self.lines, &pts, 2)?)
            }
            Predicate::Para | Predicate::Perp | Predicate::Eqangle | Predicate::Eqangle6 => {
                cert(Subsystem::Angle, self.angle_cert(s)?)
            }
            Predicate::Cong | Predicate::Eqratio | Predicate::Eqratio6 | Predicate::Circle => {
                cert(Subsystem::Ratio, self.ratio_cert(s)?)
            }
            Predicate::Cyclic => {
                let pts = [a[0], a[1], a[2], a[3]];
                if let Some(f) = self.set_cert(&self.circles, &pts, 3) {
                    return cert(Subsystem::Circles, f);
                }
                // a common center
                for o in self.positions.keys().copied() {
                    if pts.contains(&o) {
                        continue;
                    }
                    let c = Statement {
                        predicate: Predicate::Circle,
                        args: [o, a[0], a[1], a[2]].into_iter().collect(),
                    };
                    let d = Statement {
                        predicate: Predicate::Cong,
                        args: [o, a[0], o, a[3]].into_iter().collect(),
                    };
                    if let (Some(mut f), Some(g)) = (self.ratio_cert(&c), self.ratio_cert(&d)) {
                        f.extend(g);
                        f.sort_unstable();
                        f.dedup();
                        return cert(Subsystem::Ratio, f);
                    }
                }
                None
            }
            _ => None,
        }
    }
}

fn add_set(sets: &mut Vec<PointSet>, pts: Vec<PointSym>, id: FactId, merge: usize) {
    let mut cur = PointSet {
        points: pts.into_iter().collect(),
        sources: [id].into_iter().collect(),
    };
    loop {
        let hit = sets
            .iter()
            .position(|l| l.points.intersection(&cur.points).count() >= merge);
        match hit {
            Some(i) => {
                let l = sets.remove(i);
                cur.points.extend(l.points);
                cur.sources.extend(l.sources);
            }
            None => break,
        }
    }
    // keep a stable order: by smallest point
    let pos = sets
        .iter()
        .position(|l| l.points.iter().next() > cur.points.iter().next())
        .unwrap_or(sets.len());
    sets.insert(pos, cur);
}
