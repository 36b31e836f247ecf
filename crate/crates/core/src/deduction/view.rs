//! Read-only class structure derived from the algebraic closures, used for
//! semantic rule matching and fact emission.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::{OnceCell, RefCell};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ar::ArState;
use super::linear::{frac, Linear};
use crate::formal::PointSym;

pub type Pt = u8;

#[derive(Debug)]
pub struct View {
    pub pts: Vec<PointSym>,
    n: usize,
    /// Direction class per ordered point pair (symmetric), `u32::MAX` on
    /// the diagonal.
    dir: Vec<u32>,
    len: Vec<u32>,
    dir_nf: Vec<Linear>,
    len_nf: Vec<Linear>,
    pub dir_members: Vec<Vec<(Pt, Pt)>>,
    /// Classes whose members occur in some equation.
    pub dir_involved: Vec<bool>,
    pub len_involved: Vec<bool>,
    pub len_members: Vec<Vec<(Pt, Pt)>>,
    /// Line sets with at least three points, as sorted point indices.
    pub lines: Vec<Vec<Pt>>,
    line_of: Vec<Option<u32>>,
    /// Point sets known to be concyclic.
    pub circles: Vec<Vec<Pt>>,
    keys: RefCell<KeyCache>,
    vertex_angles: OnceCell<BTreeMap<u32, Vec<[Pt; 3]>>>,
    vertex_ratios: OnceCell<BTreeMap<u32, Vec<[Pt; 3]>>>,
}

#[derive(Debug, Default)]
struct KeyCache {
    intern: BTreeMap<Linear, u32>,
    constant: Vec<bool>,
    angle: BTreeMap<(u32, u32), u32>,
    ratio: BTreeMap<(u32, u32), u32>,
}

impl KeyCache {
    fn intern(&mut self, l: Linear) -> u32 {
        let next = self.intern.len() as u32;
        let is_const = l.coeffs.keys().all(|v| *v == u32::MAX);
        let v = *self.intern.entry(l).or_insert(next);
        if v == next {
            self.constant.push(is_const);
        }
        v
    }
}

fn classify(nfs: Vec<Linear>) -> (Vec<u32>, Vec<Linear>) {
    let mut ids = BTreeMap::new();
    let mut reps = Vec::new();
    let mut out = Vec::with_capacity(nfs.len());
    for nf in nfs {
        let next = reps.len() as u32;
        let id = *ids.entry(nf.clone()).or_insert_with(|| {
            reps.push(nf);
            next
        });
        out.push(id);
    }
    (out, reps)
}

impl View {
    pub fn build(ar: &ArState) -> View {
        let pts: Vec<PointSym> = ar.points().collect();
        let n = pts.len();
        let segs = ar.segs();
        let (dir_seg, dir_nf) = classify(segs.iter().map(|s| ar.dir_nf(*s)).collect());
        let (len_seg, len_nf) = classify(segs.iter().map(|s| ar.len_nf(*s)).collect());
        let pos: BTreeMap<PointSym, Pt> = pts.iter().enumerate().map(|(i, p)| (*p, i as Pt)).collect();

        let mut dir = alloc::vec![u32::MAX; n * n];
        let mut len = alloc::vec![u32::MAX; n * n];
        let mut dir_members = alloc::vec![Vec::new(); dir_nf.len()];
        let mut len_members = alloc::vec![Vec::new(); len_nf.len()];
        let mut dir_involved = alloc::vec![false; dir_nf.len()];
        let mut len_involved = alloc::vec![false; len_nf.len()];
        for (k, s) in segs.iter().enumerate() {
            let (i, j) = (pos[&s.0] as usize, pos[&s.1] as usize);
            dir[i * n + j] = dir_seg[k];
            dir[j * n + i] = dir_seg[k];
            len[i * n + j] = len_seg[k];
            len[j * n + i] = len_seg[k];
            dir_members[dir_seg[k] as usize].push((i as Pt, j as Pt));
            len_members[len_seg[k] as usize].push((i as Pt, j as Pt));
            let var = ar.var(*s).expect("segment variable");
            dir_involved[dir_seg[k] as usize] |= ar.angle_system().touches(var);
            len_involved[len_seg[k] as usize] |= ar.ratio_system().touches(var);
        }

        let lines: Vec<Vec<Pt>> = ar
            .lines()
            .filter(|l| l.len() >= 3)
            .map(|l| l.iter().map(|p| pos[p]).collect())
            .collect();
        let mut line_of = alloc::vec![None; n * n];
        for (li, l) in lines.iter().enumerate() {
            for &a in l {
                for &b in l {
                    if a != b {
                        line_of[a as usize * n + b as usize] = Some(li as u32);
                    }
                }
            }
        }

        let mut circles: Vec<Vec<Pt>> = ar
            .circles()
            .map(|c| c.iter().map(|p| pos[p]).collect())
            .collect();
        for o in 0..n {
            let mut groups: BTreeMap<u32, Vec<Pt>> = BTreeMap::new();
            for x in 0..n {
                if x != o {
                    groups.entry(len[o * n + x]).or_default().push(x as Pt);
                }
            }
            for (_, g) in groups {
                if g.len() >= 3 && !circles.iter().any(|c| g.iter().all(|p| c.contains(p))) {
                    circles.push(g);
                }
            }
        }
        // merge sets that share three points
        let mut merged: Vec<Vec<Pt>> = Vec::new();
        for mut c in circles {
            loop {
                let hit = merged
                    .iter()
                    .position(|m| m.iter().filter(|p| c.contains(p)).count() >= 3);
                match hit {
                    Some(i) => {
                        let m = merged.remove(i);
                        c.extend(m);
                        c.sort_unstable();
                        c.dedup();
                    }
                    None => break,
                }
            }
            c.sort_unstable();
            merged.push(c);
        }
        merged.sort();

        View {
            pts,
            n,
            dir,
            len,
            dir_nf,
            len_nf,
            dir_members,
            dir_involved,
            len_involved,
            len_members,
            lines,
            line_of,
            circles: merged,
            keys: RefCell::new(KeyCache::default()),
            vertex_angles: OnceCell::new(),
            vertex_ratios: OnceCell::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index_of(&self, p: PointSym) -> Option<Pt> {
        self.pts.binary_search(&p).ok().map(|i| i as Pt)
    }

    pub fn dir(&self, a: Pt, b: Pt) -> u32 {
        self.dir[a as usize * self.n + b as usize]
    }

    pub fn len(&self, a: Pt, b: Pt) -> u32 {
        self.len[a as usize * self.n + b as usize]
    }

    pub fn line(&self, a: Pt, b: Pt) -> Option<u32> {
        self.line_of[a as usize * self.n + b as usize]
    }

    pub fn dir_nf(&self, class: u32) -> &Linear {
        &self.dir_nf[class as usize]
    }

    pub fn len_nf(&self, class: u32) -> &Linear {
        &self.len_nf[class as usize]
    }

    /// Key of the directed angle from class `ci` to class `cj`.
    pub fn angle_key(&self, ci: u32, cj: u32) -> u32 {
        let mut k = self.keys.borrow_mut();
        if let Some(&v) = k.angle.get(&(ci, cj)) {
            return v;
        }
        let mut d = self.dir_nf[cj as usize].sub(&self.dir_nf[ci as usize]);
        d.constant = frac(&d.constant);
        let v = k.intern(d);
        k.angle.insert((ci, cj), v);
        v
    }

    /// Key of the log-ratio between length classes `ki` and `kj`.
    pub fn ratio_key(&self, ki: u32, kj: u32) -> u32 {
        let mut k = self.keys.borrow_mut();
        if let Some(&v) = k.ratio.get(&(ki, kj)) {
            return v;
        }
        let mut d = self.len_nf[ki as usize].sub(&self.len_nf[kj as usize]);
        // keep ratio keys disjoint from angle keys
        d.add_term(u32::MAX, BigRational::from_integer(BigInt::from(1)));
        let v = k.intern(d);
        k.ratio.insert((ki, kj), v);
        v
    }

    /// Whether an angle or ratio key is a pure constant.
    pub fn key_is_constant(&self, key: u32) -> bool {
        self.keys.borrow().constant[key as usize]
    }

    pub fn perp_key(&self) -> u32 {
        let l = Linear::new().with_constant(BigRational::new(BigInt::from(1), BigInt::from(2)));
        self.keys.borrow_mut().intern(l)
    }

    pub fn coll(&self, a: Pt, b: Pt, c: Pt) -> bool {
        a != b && b != c && a != c && self.line(a, b).is_some() && self.line(a, b) == self.line(a, c)
    }

    pub fn para(&self, a: Pt, b: Pt, c: Pt, d: Pt) -> bool {
        a != b && c != d && self.dir(a, b) == self.dir(c, d)
    }

    pub fn perp(&self, a: Pt, b: Pt, c: Pt, d: Pt) -> bool {
        a != b && c != d && self.angle_key(self.dir(a, b), self.dir(c, d)) == self.perp_key()
    }

    pub fn cong(&self, a: Pt, b: Pt, c: Pt, d: Pt) -> bool {
        a != b && c != d && self.len(a, b) == self.len(c, d)
    }

    pub fn angle(&self, a: Pt, b: Pt, c: Pt, d: Pt) -> Option<u32> {
        (a != b && c != d).then(|| self.angle_key(self.dir(a, b), self.dir(c, d)))
    }

    pub fn ratio(&self, a: Pt, b: Pt, c: Pt, d: Pt) -> Option<u32> {
        (a != b && c != d).then(|| self.ratio_key(self.len(a, b), self.len(c, d)))
    }

    pub fn eqangle(&self, p: &[Pt]) -> bool {
        matches!((self.angle(p[0], p[1], p[2], p[3]), self.angle(p[4], p[5], p[6], p[7])), (Some(x), Some(y)) if x == y)
    }

    pub fn eqratio(&self, p: &[Pt]) -> bool {
        matches!((self.ratio(p[0], p[1], p[2], p[3]), self.ratio(p[4], p[5], p[6], p[7])), (Some(x), Some(y)) if x == y)
    }

    pub fn cyclic(&self, p: &[Pt]) -> bool {
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
        distinct && self.circles.iter().any(|c| p.iter().all(|x| c.contains(x)))
    }

    pub fn circle(&self, o: Pt, a: Pt, b: Pt, c: Pt) -> bool {
        a != b && b != c && a != c && o != a && o != b && o != c
            && self.len(o, a) == self.len(o, b)
            && self.len(o, a) == self.len(o, c)
    }

    /// Vertex angles `(a, b, c)` meaning the angle from `ba` to `bc`,
    /// grouped by key.
    pub fn with_vertex_angles<R>(&self, f: impl FnOnce(&BTreeMap<u32, Vec<[Pt; 3]>>) -> R) -> R {
        let m = self.vertex_angles.get_or_init(|| {
            let mut m: BTreeMap<u32, Vec<[Pt; 3]>> = BTreeMap::new();
            let n = self.n as Pt;
            for b in 0..n {
                for a in 0..n {
                    for c in 0..n {
                        if a != b && c != b && a != c {
                            let key = self.angle_key(self.dir(b, a), self.dir(b, c));
                            m.entry(key).or_default().push([a, b, c]);
                        }
                    }
                }
            }
            m
        });
        f(m)
    }

    /// Vertex ratios `(a, b, c)` meaning `|ab| / |bc|`, grouped by key.
    pub fn with_vertex_ratios<R>(&self, f: impl FnOnce(&BTreeMap<u32, Vec<[Pt; 3]>>) -> R) -> R {
        let m = self.vertex_ratios.get_or_init(|| {
            let mut m: BTreeMap<u32, Vec<[Pt; 3]>> = BTreeMap::new();
            let n = self.n as Pt;
            for b in 0..n {
                for a in 0..n {
                    for c in 0..n {
                        if a != b && c != b && a != c {
                            let key = self.ratio_key(self.len(a, b), self.len(b, c));
                            m.entry(key).or_default().push([a, b, c]);
                        }
                    }
                }
            }
            m
        });
        f(m)
    }
}
