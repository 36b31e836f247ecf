use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use arrayvec::ArrayVec;
use thiserror::Error;

use super::matcher::{CompiledRule, Ctx, Literals};
use super::state::{Derivation, DerivationKind, LimitKind, Limits, ProofState};
use super::view::{Pt, View};
use crate::formal::{KnowledgeRule, PointSym, Predicate, Statement};
use crate::numeric::{check_coords, NumericScene};

#[derive(Debug, Error)]
#[error("saturation stopped early: {kind:?}")]
pub struct LimitExceeded {
    pub kind: LimitKind,
    /// The partial state, flagged incomplete.
    pub state: Box<ProofState>,
}

fn stmt(p: Predicate, args: &[PointSym]) -> Statement {
    Statement {
        predicate: p,
        args: args.iter().copied().collect(),
    }
}

/// Component facts a triangle relation stands for.
pub fn expand_triangle_relation(s: &Statement) -> Vec<Statement> {
    if !s.predicate.is_triangle_relation() {
        return Vec::new();
    }
    let a = &s.args;
    let (x, y, z, p, q, r) = (a[0], a[1], a[2], a[3], a[4], a[5]);
    let direct = [
        stmt(Predicate::Eqangle6, &[x, y, z, p, q, r]),
        stmt(Predicate::Eqangle6, &[y, z, x, q, r, p]),
        stmt(Predicate::Eqangle6, &[z, x, y, r, p, q]),
    ];
    let mirror = [
        stmt(Predicate::Eqangle6, &[x, y, z, r, q, p]),
        stmt(Predicate::Eqangle6, &[y, z, x, p, r, q]),
        stmt(Predicate::Eqangle6, &[z, x, y, q, p, r]),
    ];
    let ratios = [
        stmt(Predicate::Eqratio6, &[x, y, z, p, q, r]),
        stmt(Predicate::Eqratio6, &[y, z, x, q, r, p]),
        stmt(Predicate::Eqratio6, &[z, x, y, r, p, q]),
    ];
    let congs = [
        stmt(Predicate::Cong, &[x, y, p, q]),
        stmt(Predicate::Cong, &[y, z, q, r]),
        stmt(Predicate::Cong, &[z, x, r, p]),
    ];
    let mut out = Vec::new();
    match s.predicate {
        Predicate::Simtri => {
            out.extend(direct);
            out.extend(ratios);
        }
        Predicate::Simtri2 => {
            out.extend(mirror);
            out.extend(ratios);
        }
        Predicate::SimtriStar => out.extend(ratios),
        Predicate::Contri => {
            out.extend(direct);
            out.extend(ratios);
            out.extend(congs);
        }
        Predicate::Contri2 => {
            out.extend(mirror);
            out.extend(ratios);
            out.extend(congs);
        }
        Predicate::ContriStar => out.extend(congs),
        _ => {}
    }
    out
}

/// A statement that holds for every configuration by its form alone.
pub fn is_trivial(s: &Statement) -> bool {
    let a = &s.args;
    let seg = |i: usize, j: usize| {
        if a[i] <= a[j] {
            (a[i], a[j])
        } else {
            (a[j], a[i])
        }
    };
    match s.predicate {
        Predicate::Para | Predicate::Cong => seg(0, 1) == seg(2, 3),
        Predicate::Eqangle | Predicate::Eqratio => {
            (seg(0, 1) == seg(2, 3) && seg(4, 5) == seg(6, 7))
                || (seg(0, 1) == seg(4, 5) && seg(2, 3) == seg(6, 7))
        }
        Predicate::Eqangle6 | Predicate::Eqratio6 => a[..3] == a[3..],
        p if p.is_triangle_relation() => a[..3] == a[3..],
        _ => false,
    }
}

/// Forward-chaining engine over a fixed rule catalog.
#[derive(Debug, Clone)]
pub struct Engine {
    rules: Vec<KnowledgeRule>,
    compiled: Vec<CompiledRule>,
    limits: Limits,
    counts: Option<alloc::rc::Rc<core::cell::RefCell<Vec<usize>>>>,
}

impl Engine {
    /// Diagnostic: per-rule match counts accumulate into `counts`.
    pub fn with_counts(mut self, counts: alloc::rc::Rc<core::cell::RefCell<Vec<usize>>>) -> Self {
        self.counts = Some(counts);
        self
    }

    pub fn new(rules: Vec<KnowledgeRule>, limits: Limits) -> Self {
        let compiled = rules
            .iter()
            .enumerate()
            .filter_map(|(i, r)| CompiledRule::new(i, r))
            .collect();
        Engine {
            rules,
            compiled,
            limits,
            counts: None,
        }
    }

    pub fn rules(&self) -> &[KnowledgeRule] {
        &self.rules
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// Fresh state holding only the premises.
    pub fn start(&self, premises: &[Statement], scene: &NumericScene) -> ProofState {
        let mut state = ProofState::new(scene.clone(), self.rules.clone(), self.limits);
        for p in premises {
            state.add_premise(p);
        }
        state
    }

    /// Saturates `premises` to a fixpoint of alternating rule and
    /// algebraic rounds.
    pub fn saturate(&self, premises: &[Statement], scene: &NumericScene) -> Result<ProofState, LimitExceeded> {
        let mut state = self.start(premises, scene);
        self.ar_round(&mut state);
        loop {
            if state.limit_hit.is_some() {
                break;
            }
            if state.round >= self.limits.max_rounds {
                state.limit_hit = Some(LimitKind::MaxRounds);
                break;
            }
            state.round += 1;
            let before = state.facts.len();
            let d = self.dd_round(&mut state);
            self.ar_round(&mut state);
            if state.facts.len() == before && d == 0 {
                break;
            }
        }
        match state.limit_hit {
            Some(kind) => Err(LimitExceeded {
                kind,
                state: Box::new(state),
            }),
            None => Ok(state),
        }
    }

    fn literals(state: &ProofState, view: &View) -> Literals {
        let mut lit = Literals::new();
        for f in &state.facts {
            let p = f.statement.predicate;
            if matches!(p, Predicate::Midp | Predicate::Eqangle | Predicate::Eqratio) || p.is_triangle_relation() {
                let args: Option<ArrayVec<Pt, 8>> = f.statement.points().map(|x| view.index_of(x)).collect();
                if let Some(args) = args {
                    lit.push(p, args);
                }
            }
        }
        lit
    }

    /// One deductive-database round: every rule is matched against the
    /// state as it stood at the start of the round. Returns the number of
    /// new rule applications.
    pub fn dd_round(&self, state: &mut ProofState) -> usize {
        state.sync_ar();
        let view = View::build(&state.ar);
        let lits = Self::literals(state, &view);
        let scene = &state.scene;
        let pts = view.pts.clone();
        let guard = |p: Predicate, a: &[Pt]| {
            let coords: Option<ArrayVec<_, 8>> = a.iter().map(|&i| scene.get(pts[i as usize])).collect();
            coords.is_some_and(|c| check_coords(p, &c, scene.tolerance))
        };
        let mut found: Vec<(usize, Vec<PointSym>)> = Vec::new();
        {
            let ctx = Ctx::new(&view, &lits, &guard);
            for rule in &self.compiled {
                for b in ctx.match_rule(rule) {
                    let binding: Vec<PointSym> = (0..rule.vars.len()).map(|i| view.pts[b[i] as usize]).collect();
                    found.push((rule.index, binding));
                }
            }
        }
        if let Some(counts) = self.counts.as_ref() {
            let mut c = counts.borrow_mut();
            c.resize(self.rules.len(), 0);
            for (ri, _) in &found {
                c[*ri] += 1;
            }
        }
        let mut applied = 0;
        for (ri, binding) in found {
            if state.limit_hit.is_some() {
                break;
            }
            if state.fired.contains(&(ri, binding.clone())) {
                continue;
            }
            state.fired.insert((ri, binding.clone()));
            if self.apply(state, ri, &binding) {
                applied += 1;
            }
        }
        applied
    }

    /// Instantiates rule `ri` under `binding` and records its conclusion.
    pub fn apply(&self, state: &mut ProofState, ri: usize, binding: &[PointSym]) -> bool {
        let rule = &self.rules[ri];
        let vars = rule.variables();
        let map = |p: PointSym| binding[vars.iter().position(|v| *v == p).expect("rule variable")];
        let conclusion = rule.conclusion.map_points(map);
        if conclusion.is_degenerate() || is_trivial(&conclusion) {
            return false;
        }
        if !state.scene.check(&conclusion) {
            state.numeric_rejections += 1;
            return false;
        }
        let mut antecedents = Vec::new();
        for p in &rule.premises {
            let inst = p.map_points(map);
            if is_trivial(&inst) {
                return false;
            }
            match state.ensure_fact(&inst) {
                Some(id) => {
                    if !antecedents.contains(&id) {
                        antecedents.push(id);
                    }
                }
                None => return false,
            }
        }
        let d = Derivation {
            kind: DerivationKind::Rule {
                rule: ri,
                binding: binding.to_vec(),
            },
            antecedents,
        };
        let mut derived = alloc::vec![conclusion.clone()];
        if conclusion.predicate.is_triangle_relation() {
            derived.extend(
                expand_triangle_relation(&conclusion)
                    .into_iter()
                    .filter(|c| !c.is_degenerate() && !is_trivial(c)),
            );
        }
        let mut any = false;
        for c in derived {
            if !state.scene.check(&c) {
                state.numeric_rejections += 1;
                continue;
            }
            if state.add_derived(&c, d.clone()).is_some() {
                any = true;
            }
        }
        any
    }

    /// Inserts pending facts into the closures and emits every implied
    /// fact of the candidate families. Returns the number of new facts.
    pub fn ar_round(&self, state: &mut ProofState) -> usize {
        state.sync_ar();
        let view = View::build(&state.ar);
        let candidates = emission_candidates(&view);
        let mut added = 0;
        for s in candidates {
            if state.limit_hit.is_some() {
                break;
            }
            let c = s.canonical();
            if state.index.contains_key(&c) || c.is_degenerate() || is_trivial(&c) {
                continue;
            }
            if !state.scene.check(&c) {
                state.numeric_rejections += 1;
                continue;
            }
            let before = state.facts.len();
            if state.ensure_fact(&c).is_some() && state.facts.len() > before {
                added += 1;
            }
        }
        added
    }
}

/// Candidate statements the closures may imply, restricted to line and
/// length class representatives.
fn emission_candidates(v: &View) -> Vec<Statement> {
    let pts = &v.pts;
    let sym = |i: Pt| pts[i as usize];
    let mut out = Vec::new();

    for l in &v.lines {
        for (i, &x) in l.iter().enumerate() {
            for (j, &y) in l.iter().enumerate().skip(i + 1) {
                for &z in l.iter().skip(j + 1) {
                    out.push(stmt(Predicate::Coll, &[sym(x), sym(y), sym(z)]));
                }
            }
        }
    }

    // line representatives per direction class
    let line_rep = |a: Pt, b: Pt| -> (Pt, Pt) {
        match v.line(a, b) {
            Some(li) => {
                let l = &v.lines[li as usize];
                (l[0], l[1])
            }
            None => (a.min(b), a.max(b)),
        }
    };
    let mut class_lines: BTreeMap<u32, Vec<(Pt, Pt)>> = BTreeMap::new();
    for (c, members) in v.dir_members.iter().enumerate() {
        if !v.dir_involved[c] {
            continue;
        }
        let mut reps: Vec<(Pt, Pt)> = members.iter().map(|&(a, b)| line_rep(a, b)).collect();
        reps.sort_unstable();
        reps.dedup();
        class_lines.insert(c as u32, reps);
    }
    for reps in class_lines.values() {
        for (i, &(a, b)) in reps.iter().enumerate() {
            for &(c, d) in &reps[i + 1..] {
                out.push(stmt(Predicate::Para, &[sym(a), sym(b), sym(c), sym(d)]));
            }
        }
    }
    let classes: Vec<u32> = class_lines.keys().copied().collect();
    let perp = v.perp_key();
    let mut angle_groups: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
    for (i, &ci) in classes.iter().enumerate() {
        for &cj in &classes[i + 1..] {
            let key = v.angle_key(ci, cj);
            if key == perp {
                for &(a, b) in &class_lines[&ci] {
                    for &(c, d) in &class_lines[&cj] {
                        out.push(stmt(Predicate::Perp, &[sym(a), sym(b), sym(c), sym(d)]));
                    }
                }
            } else if !v.key_is_constant(key) {
                angle_groups.entry(key).or_default().push((ci, cj));
                let back = v.angle_key(cj, ci);
                angle_groups.entry(back).or_default().push((cj, ci));
            }
        }
    }
    let rep = |c: u32| class_lines[&c][0];
    for group in angle_groups.values() {
        for (i, &(c1, c2)) in group.iter().enumerate() {
            for &(c3, c4) in &group[i + 1..] {
                let (a, b) = rep(c1);
                let (c, d) = rep(c2);
                let (e, f) = rep(c3);
                let (g, h) = rep(c4);
                out.push(stmt(
                    Predicate::Eqangle,
                    &[sym(a), sym(b), sym(c), sym(d), sym(e), sym(f), sym(g), sym(h)],
                ));
            }
        }
    }

    // length classes
    let mut len_classes: Vec<u32> = Vec::new();
    for (k, members) in v.len_members.iter().enumerate() {
        if !v.len_involved[k] {
            continue;
        }
        len_classes.push(k as u32);
        for (i, &(a, b)) in members.iter().enumerate() {
            for &(c, d) in &members[i + 1..] {
                out.push(stmt(Predicate::Cong, &[sym(a), sym(b), sym(c), sym(d)]));
            }
        }
    }
    let mut ratio_groups: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
    for &ki in &len_classes {
        for &kj in &len_classes {
            if ki == kj {
                continue;
            }
            let key = v.ratio_key(ki, kj);
            if !v.key_is_constant(key) {
                ratio_groups.entry(key).or_default().push((ki, kj));
            }
        }
    }
    let lrep = |k: u32| v.len_members[k as usize][0];
    let mut seen_ratio: BTreeSet<[u32; 4]> = BTreeSet::new();
    for group in ratio_groups.values() {
        for (i, &(k1, k2)) in group.iter().enumerate() {
            for &(k3, k4) in &group[i + 1..] {
                let key = [k1, k2, k3, k4];
                if !seen_ratio.insert(key) {
                    continue;
                }
                let (a, b) = lrep(k1);
                let (c, d) = lrep(k2);
                let (e, f) = lrep(k3);
                let (g, h) = lrep(k4);
                out.push(stmt(
                    Predicate::Eqratio,
                    &[sym(a), sym(b), sym(c), sym(d), sym(e), sym(f), sym(g), sym(h)],
                ));
            }
        }
    }

    // circles around a center
    let n = v.n() as Pt;
    for o in 0..n {
        let mut groups: BTreeMap<u32, Vec<Pt>> = BTreeMap::new();
        for x in 0..n {
            if x != o && v.len_involved[v.len(o, x) as usize] {
                groups.entry(v.len(o, x)).or_default().push(x);
            }
        }
        for g in groups.values() {
            for (i, &x) in g.iter().enumerate() {
                for (j, &y) in g.iter().enumerate().skip(i + 1) {
                    for &z in g.iter().skip(j + 1) {
                        out.push(stmt(Predicate::Circle, &[sym(o), sym(x), sym(y), sym(z)]));
                    }
                }
            }
        }
    }
    for c in &v.circles {
        let k = c.len();
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    for m in l + 1..k {
                        out.push(stmt(Predicate::Cyclic, &[sym(c[i]), sym(c[j]), sym(c[l]), sym(c[m])]));
                    }
                }
            }
        }
    }
    out
}
