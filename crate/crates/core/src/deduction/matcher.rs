//! Semantic matching of rule premises against the current closures.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use arrayvec::ArrayVec;

use super::view::{Pt, View};
use crate::formal::{KnowledgeRule, PointSym, Predicate, Statement};

pub const MAX_VARS: usize = 16;
const UNBOUND: Pt = Pt::MAX;

pub type Binding = [Pt; MAX_VARS];

#[derive(Debug, Clone)]
pub struct Pattern {
    pub predicate: Predicate,
    pub vars: ArrayVec<u8, 8>,
    /// Every variable occurs only inside one fixed unordered pair, so pair
    /// orientation never matters and matching may ignore it.
    pub pairwise: bool,
}

fn pair_slots(p: Predicate) -> bool {
    matches!(
        p,
        Predicate::Para | Predicate::Npara | Predicate::Perp | Predicate::Cong | Predicate::Eqangle | Predicate::Eqratio
    )
}

/// Whether each variable of `s` always appears with the same partner in a
/// pair slot, across the whole rule.
fn is_pairwise(s: &Statement, rule: &KnowledgeRule) -> bool {
    if !matches!(s.predicate, Predicate::Eqangle | Predicate::Eqratio) {
        return false;
    }
    let a = &s.args;
    let mut partner: BTreeMap<PointSym, PointSym> = BTreeMap::new();
    for i in 0..4 {
        let (x, y) = (a[2 * i], a[2 * i + 1]);
        if x == y {
            return false;
        }
        for (u, w) in [(x, y), (y, x)] {
            if *partner.entry(u).or_insert(w) != w {
                return false;
            }
        }
    }
    rule.premises.iter().chain(core::iter::once(&rule.conclusion)).all(|t| {
        let pts: Vec<PointSym> = t.points().collect();
        pts.iter().enumerate().all(|(i, p)| match partner.get(p) {
            None => true,
            Some(q) => pair_slots(t.predicate) && pts[i ^ 1] == *q,
        })
    })
}

/// A rule with variables numbered in first-occurrence order.
#[derive(Debug, Clone)]
pub struct CompiledRule {
    pub index: usize,
    pub vars: Vec<PointSym>,
    pub premises: Vec<Pattern>,
    pub conclusion: Pattern,
}

impl CompiledRule {
    pub fn new(index: usize, rule: &KnowledgeRule) -> Option<Self> {
        let vars = rule.variables();
        if vars.len() > MAX_VARS {
            return None;
        }
        let pat = |s: &Statement| Pattern {
            predicate: s.predicate,
            vars: s
                .points()
                .map(|p| vars.iter().position(|v| *v == p).expect("bound") as u8)
                .collect(),
            pairwise: is_pairwise(s, rule),
        };
        Some(CompiledRule {
            index,
            premises: rule.premises.iter().map(pat).collect(),
            conclusion: pat(&rule.conclusion),
            vars,
        })
    }
}

/// Stored facts of predicates matched literally, as point indices.
#[derive(Debug, Default)]
pub struct Literals {
    facts: BTreeMap<Predicate, Vec<ArrayVec<Pt, 8>>>,
    variants: RefCell<BTreeMap<(Predicate, bool), Vec<ArrayVec<Pt, 8>>>>,
    indexes: RefCell<BTreeMap<(Predicate, bool, u8), BTreeMap<ArrayVec<Pt, 8>, Vec<u32>>>>,
}

impl Literals {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, p: Predicate, args: ArrayVec<Pt, 8>) {
        self.facts.entry(p).or_default().push(args);
    }

    pub fn contains(&self, p: Predicate, args: &[Pt]) -> bool {
        self.with_variants(p, false, |v| v.binary_search_by(|x| x.as_slice().cmp(args)).is_ok())
    }

    // `reduced` keeps pairs sorted and permutes only whole pairs.
    fn with_variants<R>(&self, p: Predicate, reduced: bool, f: impl FnOnce(&[ArrayVec<Pt, 8>]) -> R) -> R {
        const ARRANGEMENTS: [[usize; 4]; 8] = [
            [0, 1, 2, 3],
            [0, 2, 1, 3],
            [1, 0, 3, 2],
            [1, 3, 0, 2],
            [2, 0, 3, 1],
            [2, 3, 0, 1],
            [3, 1, 2, 0],
            [3, 2, 1, 0],
        ];
        let key = (p, reduced);
        if !self.variants.borrow().contains_key(&key) {
            let mut all: Vec<ArrayVec<Pt, 8>> = Vec::new();
            for args in self.facts.get(&p).map(|v| v.as_slice()).unwrap_or(&[]) {
                if reduced {
                    let pairs: ArrayVec<[Pt; 2], 4> = (0..4)
                        .map(|i| {
                            let (x, y) = (args[2 * i], args[2 * i + 1]);
                            [x.min(y), x.max(y)]
                        })
                        .collect();
                    for o in &ARRANGEMENTS {
                        all.push(o.iter().flat_map(|&i| pairs[i]).collect());
                    }
                } else {
                    for perm in p.symmetry_group() {
                        all.push((0..args.len()).map(|i| args[perm[i] as usize]).collect());
                    }
                }
            }
            all.sort();
            all.dedup();
            self.variants.borrow_mut().insert(key, all);
        }
        let v = self.variants.borrow();
        f(&v[&key])
    }

    fn count(&self, p: Predicate) -> usize {
        self.facts.get(&p).map_or(0, |v| v.len()) * 8
    }

    /// Variants whose positions in `mask` equal `key`.
    fn lookup(&self, p: Predicate, reduced: bool, mask: u8, key: &ArrayVec<Pt, 8>) -> Vec<ArrayVec<Pt, 8>> {
        self.with_variants(p, reduced, |vars| {
            let mut idx = self.indexes.borrow_mut();
            let m = idx.entry((p, reduced, mask)).or_insert_with(|| {
                let mut m: BTreeMap<ArrayVec<Pt, 8>, Vec<u32>> = BTreeMap::new();
                for (i, v) in vars.iter().enumerate() {
                    let k = (0..v.len()).filter(|j| mask & (1 << j) != 0).map(|j| v[j]).collect();
                    m.entry(k).or_default().push(i as u32);
                }
                m
            });
            m.get(key)
                .map(|ids| ids.iter().map(|&i| vars[i as usize].clone()).collect())
                .unwrap_or_default()
        })
    }
}

fn uses_literals(p: Predicate) -> bool {
    matches!(
        p,
        Predicate::Midp | Predicate::Eqangle | Predicate::Eqratio
    ) || p.is_triangle_relation()
}

/// Everything the matcher reads.
pub struct Ctx<'a> {
    pub view: &'a View,
    pub literals: &'a Literals,
    /// Numeric evaluation of a guard on point indices.
    pub guard: &'a dyn Fn(Predicate, &[Pt]) -> bool,
    perp_partners: RefCell<BTreeMap<u32, Vec<u32>>>,
}

impl<'a> Ctx<'a> {
    pub fn new(view: &'a View, literals: &'a Literals, guard: &'a dyn Fn(Predicate, &[Pt]) -> bool) -> Self {
        Ctx {
            view,
            literals,
            guard,
            perp_partners: RefCell::new(BTreeMap::new()),
        }
    }

    fn perp_partners(&self, c: u32) -> Vec<u32> {
        if let Some(v) = self.perp_partners.borrow().get(&c) {
            return v.clone();
        }
        let pk = self.view.perp_key();
        let v: Vec<u32> = (0..self.view.dir_members.len() as u32)
            .filter(|&d| self.view.angle_key(c, d) == pk)
            .collect();
        self.perp_partners.borrow_mut().insert(c, v.clone());
        v
    }

    /// Whether the fully instantiated pattern holds.
    pub fn holds(&self, p: Predicate, a: &[Pt]) -> bool {
        let v = self.view;
        let distinct3 = |x: Pt, y: Pt, z: Pt| x != y && y != z && x != z;
        match p {
            Predicate::Coll => v.coll(a[0], a[1], a[2]),
            Predicate::Para => v.para(a[0], a[1], a[2], a[3]),
            Predicate::Perp => v.perp(a[0], a[1], a[2], a[3]),
            Predicate::Cong => v.cong(a[0], a[1], a[2], a[3]),
            Predicate::Circle => v.circle(a[0], a[1], a[2], a[3]),
            Predicate::Cyclic => v.cyclic(a),
            Predicate::Eqangle => v.eqangle(a),
            Predicate::Eqratio => v.eqratio(a),
            Predicate::Eqangle6 => {
                distinct3(a[0], a[1], a[2])
                    && distinct3(a[3], a[4], a[5])
                    && v.eqangle(&[a[1], a[0], a[1], a[2], a[4], a[3], a[4], a[5]])
            }
            Predicate::Eqratio6 => {
                distinct3(a[0], a[1], a[2])
                    && distinct3(a[3], a[4], a[5])
                    && v.eqratio(&[a[0], a[1], a[1], a[2], a[3], a[4], a[4], a[5]])
            }
            Predicate::Ncoll | Predicate::Npara | Predicate::Sameside => (self.guard)(p, a),
            _ => self.literals.contains(p, a),
        }
    }

    fn estimate(&self, pat: &Pattern, b: &Binding) -> usize {
        let n = self.view.n();
        let unbound = unbound_vars(pat, b);
        if unbound == 0 {
            return 0;
        }
        if pat.predicate.is_numeric_guard() {
            return usize::MAX;
        }
        let points = n.saturating_pow(unbound as u32);
        let bound = |i: usize| b[pat.vars[i] as usize] != UNBOUND;
        let semantic = match pat.predicate {
            Predicate::Coll => self.view.lines.iter().map(|l| l.len().pow(3)).sum(),
            Predicate::Cyclic => self.view.circles.iter().map(|c| c.len().pow(4)).sum(),
            Predicate::Circle => n * 24,
            Predicate::Para | Predicate::Perp | Predicate::Cong => {
                if (bound(0) && bound(1)) || (bound(2) && bound(3)) {
                    8
                } else {
                    n * n * 8
                }
            }
            Predicate::Eqangle6 | Predicate::Eqratio6 => {
                if (bound(0) && bound(1) && bound(2)) || (bound(3) && bound(4) && bound(5)) {
                    16
                } else {
                    n * n * n * 16
                }
            }
            p if uses_literals(p) => {
                let nb = pat.vars.len() - unbound;
                self.literals.count(p) / (1 + nb * nb)
            }
            _ => usize::MAX,
        };
        // zero is reserved for fully bound patterns
        semantic.min(points).max(1)
    }

    /// All complete bindings of the rule's premises.
    pub fn match_rule(&self, rule: &CompiledRule) -> Vec<Binding> {
        let mut out = Vec::new();
        let b = [UNBOUND; MAX_VARS];
        self.search(rule, 0, &b, &mut out);
        out
    }

    fn search(&self, rule: &CompiledRule, done: u32, b: &Binding, out: &mut Vec<Binding>) {
        let todo: Vec<usize> = (0..rule.premises.len()).filter(|i| done & (1 << i) == 0).collect();
        if todo.is_empty() {
            out.push(*b);
            return;
        }
        let (&next, cost) = todo
            .iter()
            .map(|i| (i, self.estimate(&rule.premises[*i], b)))
            .min_by_key(|(_, c)| *c)
            .expect("non-empty");
        let pat = &rule.premises[next];
        if cost == 0 {
            let args: ArrayVec<Pt, 8> = pat.vars.iter().map(|&v| b[v as usize]).collect();
            if self.holds(pat.predicate, &args) {
                self.search(rule, done | (1 << next), b, out);
            }
            return;
        }
        for ext in self.extend(pat, b, cost) {
            self.search(rule, done | (1 << next), &ext, out);
        }
    }

    fn extend(&self, pat: &Pattern, b: &Binding, cost: usize) -> Vec<Binding> {
        let n = self.view.n();
        let unbound = unbound_vars(pat, b);
        let mut out = Vec::new();
        let mut push = |args: &[Pt]| {
            let u = if pat.pairwise { unify_pairs(b, &pat.vars, args) } else { unify(b, &pat.vars, args) };
            if let Some(nb) = u {
                out.push(nb);
            }
        };
        let points = n.saturating_pow(unbound as u32);
        if points <= cost || pat.predicate.is_numeric_guard() {
            // enumerate the free variables directly
            let free: Vec<u8> = {
                let mut f: Vec<u8> = pat.vars.iter().copied().filter(|v| b[*v as usize] == UNBOUND).collect();
                f.sort_unstable();
                f.dedup();
                f
            };
            let mut cur = *b;
            self.enumerate_points(pat, &free, 0, &mut cur, &mut |nb| {
                out.push(*nb);
            });
            return out;
        }
        let v = self.view;
        let bound = |i: usize| b[pat.vars[i] as usize];
        let is_b = |i: usize| bound(i) != UNBOUND;
        match pat.predicate {
            Predicate::Coll => {
                for l in &v.lines {
                    for &x in l {
                        for &y in l {
                            for &z in l {
                                if x != y && y != z && x != z {
                                    push(&[x, y, z]);
                                }
                            }
                        }
                    }
                }
            }
            Predicate::Cyclic => {
                for c in &v.circles {
                    for &w in c {
                        for &x in c {
                            for &y in c {
                                for &z in c {
                                    if w != x && w != y && w != z && x != y && x != z && y != z {
                                        push(&[w, x, y, z]);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            Predicate::Circle => {
                for o in 0..n as Pt {
                    if is_b(0) && bound(0) != o {
                        continue;
                    }
                    let mut groups: BTreeMap<u32, Vec<Pt>> = BTreeMap::new();
                    for x in 0..n as Pt {
                        if x != o {
                            groups.entry(v.len(o, x)).or_default().push(x);
                        }
                    }
                    for g in groups.values().filter(|g| g.len() >= 3) {
                        for &x in g {
                            for &y in g {
                                for &z in g {
                                    if x != y && y != z && x != z {
                                        push(&[o, x, y, z]);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            Predicate::Para | Predicate::Perp | Predicate::Cong => {
                let flip = !(is_b(0) && is_b(1)) && is_b(2) && is_b(3);
                let (i0, i1) = if flip { (2, 3) } else { (0, 1) };
                let firsts: Vec<(Pt, Pt)> = if is_b(i0) && is_b(i1) {
                    alloc::vec![(bound(i0), bound(i1))]
                } else {
                    (0..n as Pt)
                        .flat_map(|x| (0..n as Pt).map(move |y| (x, y)))
                        .filter(|&(x, y)| x != y && (!is_b(i0) || bound(i0) == x) && (!is_b(i1) || bound(i1) == y))
                        .collect()
                };
                for (x, y) in firsts {
                    let classes: Vec<u32> = match pat.predicate {
                        Predicate::Para => alloc::vec![v.dir(x, y)],
                        Predicate::Perp => self.perp_partners(v.dir(x, y)),
                        _ => alloc::vec![v.len(x, y)],
                    };
                    for c in classes {
                        let members = if pat.predicate == Predicate::Cong {
                            &v.len_members[c as usize]
                        } else {
                            &v.dir_members[c as usize]
                        };
                        for &(p, q) in members {
                            for (z, w) in [(p, q), (q, p)] {
                                if flip {
                                    push(&[z, w, x, y]);
                                } else {
                                    push(&[x, y, z, w]);
                                }
                            }
                        }
                    }
                }
            }
            Predicate::Eqangle6 | Predicate::Eqratio6 => {
                let flip = !(is_b(0) && is_b(1) && is_b(2)) && is_b(3) && is_b(4) && is_b(5);
                let base = if flip { 3 } else { 0 };
                let mut firsts = Vec::new();
                for x in 0..n as Pt {
                    for y in 0..n as Pt {
                        for z in 0..n as Pt {
                            let ok = |i: usize, p: Pt| !is_b(base + i) || bound(base + i) == p;
                            if x != y && y != z && x != z && ok(0, x) && ok(1, y) && ok(2, z) {
                                firsts.push([x, y, z]);
                            }
                        }
                    }
                }
                let angle = pat.predicate == Predicate::Eqangle6;
                let run = |groups: &BTreeMap<u32, Vec<[Pt; 3]>>, out: &mut dyn FnMut(&[Pt])| {
                    for [x, y, z] in &firsts {
                        let key = if angle {
                            v.angle_key(v.dir(*y, *x), v.dir(*y, *z))
                        } else {
                            v.ratio_key(v.len(*x, *y), v.len(*y, *z))
                        };
                        for [p, q, r] in groups.get(&key).map(|g| g.as_slice()).unwrap_or(&[]) {
                            if flip {
                                out(&[*p, *q, *r, *x, *y, *z]);
                            } else {
                                out(&[*x, *y, *z, *p, *q, *r]);
                            }
                        }
                    }
                };
                if angle {
                    v.with_vertex_angles(|g| run(g, &mut push));
                } else {
                    v.with_vertex_ratios(|g| run(g, &mut push));
                }
            }
            p if uses_literals(p) => {
                let mut mask = 0u8;
                let mut key = ArrayVec::<Pt, 8>::new();
                for i in 0..pat.vars.len() {
                    if is_b(i) {
                        mask |= 1 << i;
                        // pairs are bound together in pairwise patterns
                        let v = if pat.pairwise {
                            let (x, y) = (bound(i), bound(i ^ 1));
                            if i % 2 == 0 { x.min(y) } else { x.max(y) }
                        } else {
                            bound(i)
                        };
                        key.push(v);
                    }
                }
                for args in self.literals.lookup(p, pat.pairwise, mask, &key) {
                    push(&args);
                }
            }
            _ => {}
        }
        out
    }

    fn enumerate_points(&self, pat: &Pattern, free: &[u8], i: usize, cur: &mut Binding, f: &mut dyn FnMut(&Binding)) {
        if i == free.len() {
            let args: ArrayVec<Pt, 8> = pat.vars.iter().map(|&v| cur[v as usize]).collect();
            if self.holds(pat.predicate, &args) {
                f(cur);
            }
            return;
        }
        for p in 0..self.view.n() as Pt {
            cur[free[i] as usize] = p;
            self.enumerate_points(pat, free, i + 1, cur, f);
        }
        cur[free[i] as usize] = UNBOUND;
    }
}

fn unbound_vars(pat: &Pattern, b: &Binding) -> usize {
    let mut seen = 0u32;
    for &v in &pat.vars {
        if b[v as usize] == UNBOUND {
            seen |= 1 << v;
        }
    }
    seen.count_ones() as usize
}

fn unify(b: &Binding, vars: &[u8], args: &[Pt]) -> Option<Binding> {
    let mut nb = *b;
    for (v, &p) in vars.iter().zip(args) {
        let slot = &mut nb[*v as usize];
        if *slot == UNBOUND {
            *slot = p;
        } else if *slot != p {
            return None;
        }
    }
    Some(nb)
}

// Unifies pair by pair, accepting either orientation of a bound pair.
fn unify_pairs(b: &Binding, vars: &[u8], args: &[Pt]) -> Option<Binding> {
    let mut nb = *b;
    for i in 0..vars.len() / 2 {
        let (x, y) = (vars[2 * i] as usize, vars[2 * i + 1] as usize);
        let (p, q) = (args[2 * i], args[2 * i + 1]);
        match (nb[x] == UNBOUND, nb[y] == UNBOUND) {
            (true, true) => {
                nb[x] = p;
                nb[y] = q;
            }
            (false, false) => {
                if !((nb[x] == p && nb[y] == q) || (nb[x] == q && nb[y] == p)) {
                    return None;
                }
            }
            _ => return None,
        }
    }
    Some(nb)
}

pub fn is_unbound(p: Pt) -> bool {
    p == UNBOUND
}
