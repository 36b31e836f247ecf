//! Exact incremental Gaussian elimination with source tracking.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
pub type Var = u32;

/// Identifies one source equation: the fact that produced it and the index
/// of the equation among those the fact contributes.
pub type SourceId = (u32, u8);

/// A sparse linear combination with a constant: `sum(coeffs) = constant`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Linear {
    pub coeffs: BTreeMap<Var, Q>,
    pub constant: Q,
}

impl Linear {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        let mut l = Self::new();
        l.add_term(v, Q::one());
        l
    }

    pub fn add_term(&mut self, v: Var, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(v).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn with_constant(mut self, c: Q) -> Self {
        self.constant = c;
        self
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, k: &Q, other: &Linear) {
        for (v, c) in &other.coeffs {
            self.add_term(*v, k * c);
        }
        self.constant += k * &other.constant;
    }

    pub fn sub(&self, other: &Linear) -> Linear {
        let mut out = self.clone();
        out.add_scaled(&-Q::one(), other);
        out
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }
}

#[derive(Debug, Clone)]
struct Row {
    pivot: Var,
    eq: Linear,
    /// The row as a combination of source equations.
    sources: BTreeMap<SourceId, Q>,
}

/// Reduced row-echelon store of linear equations over the rationals.
#[derive(Debug, Clone, Default)]
pub struct LinearSystem {
    rows: Vec<Row>,
    pivot_row: BTreeMap<Var, usize>,
    touched: alloc::collections::BTreeSet<Var>,
}

/// Result of reducing an equation against the store.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub rest: Linear,
    pub combo: BTreeMap<SourceId, Q>,
}

fn add_combo(into: &mut BTreeMap<SourceId, Q>, k: &Q, from: &BTreeMap<SourceId, Q>) {
    for (s, c) in from {
        let e = into.entry(*s).or_insert_with(Q::zero);
        *e += k * c;
        if e.is_zero() {
            into.remove(s);
        }
    }
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Expresses `eq` as `combo + rest` where `rest` has no pivot variables.
    pub fn reduce(&self, eq: &Linear) -> Reduced {
        let mut rest = eq.clone();
        let mut combo = BTreeMap::new();
        let pivots: Vec<(Var, usize)> = rest
            .coeffs
            .keys()
            .filter_map(|v| self.pivot_row.get(v).map(|r| (*v, *r)))
            .collect();
        for (v, r) in pivots {
            let Some(k) = rest.coeffs.get(&v).cloned() else {
                continue;
            };
            let row = &self.rows[r];
            rest.add_scaled(&-k.clone(), &row.eq);
            add_combo(&mut combo, &k, &row.sources);
        }
        Reduced { rest, combo }
    }

    /// Inserts `eq`. Returns false if it already lies in the row space
    /// (the rank is unchanged).
    pub fn insert(&mut self, eq: &Linear, source: SourceId) -> bool {
        self.touched.extend(eq.coeffs.keys().copied());
        let Reduced { rest, combo } = self.reduce(eq);
        if rest.is_constant() {
            return false;
        }
        let (&pivot, pc) = rest.coeffs.iter().next().expect("non-constant");
        let inv = pc.recip();
        let mut row_eq = Linear::new();
        row_eq.add_scaled(&inv, &rest);
        let mut sources = BTreeMap::new();
        sources.insert(source, inv.clone());
        add_combo(&mut sources, &-inv, &combo);

        for row in &mut self.rows {
            if let Some(k) = row.eq.coeffs.get(&pivot).cloned() {
                row.eq.add_scaled(&-k.clone(), &row_eq);
                add_combo(&mut row.sources, &-k, &sources);
            }
        }
        self.pivot_row.insert(pivot, self.rows.len());
        self.rows.push(Row { pivot, eq: row_eq, sources });
        true
    }

    /// Value of the expression `sum(coeffs) + constant` written over free
    /// variables only. Two expressions are equal modulo the store iff
    /// their normal forms are equal.
    pub fn normal_form(&self, expr: &Linear) -> Linear {
        let probe = Linear {
            coeffs: expr.coeffs.clone(),
            constant: Q::zero(),
        };
        let mut r = self.reduce(&probe).rest;
        r.constant = &expr.constant - &r.constant;
        r
    }

    /// Whether `v` occurs in any inserted equation.
    pub fn touches(&self, v: Var) -> bool {
        self.touched.contains(&v)
    }

    pub fn pivots(&self) -> impl Iterator<Item = Var> + '_ {
        self.rows.iter().map(|r| r.pivot)
    }
}

/// Reduces a rational into `[0, 1)`.
pub fn frac(q: &Q) -> Q {
    q - q.floor()
}

pub fn is_integer(q: &Q) -> bool {
    q.is_integer()
}

pub fn abs(q: &Q) -> Q {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(num_bigint::BigInt::from(n), num_bigint::BigInt::from(d))
    }

    fn eq(terms: &[(Var, i64)], c: Q) -> Linear {
        let mut l = Linear::new();
        for &(v, k) in terms {
            l.add_term(v, q(k, 1));
        }
        l.with_constant(c)
    }

    #[test]
    fn dependent_insert_keeps_rank() {
        let mut s = LinearSystem::new();
        assert!(s.insert(&eq(&[(0, 1), (1, -1)], q(1, 2)), (0, 0)));
        assert!(s.insert(&eq(&[(1, 1), (2, -1)], q(1, 2)), (1, 0)));
        assert_eq!(s.rank(), 2);
        assert!(!s.insert(&eq(&[(0, 1), (2, -1)], q(1, 1)), (2, 0)));
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn certificate_of_sum() {
        let mut s = LinearSystem::new();
        s.insert(&eq(&[(0, 1), (1, -1)], q(1, 2)), (0, 0));
        s.insert(&eq(&[(1, 1), (2, -1)], q(1, 2)), (1, 0));
        s.insert(&eq(&[(3, 1), (4, -1)], q(0, 1)), (2, 0));
        let r = s.reduce(&eq(&[(0, 1), (2, -1)], q(0, 1)));
        assert!(r.rest.is_constant());
        // x0 - x2 = 1, so the residual constant is 0 - 1 = -1
        assert_eq!(r.rest.constant, q(-1, 1));
        let ids: Vec<u32> = r.combo.keys().map(|s| s.0).collect();
        assert_eq!(ids, [0, 1]);
    }

    #[test]
    fn normal_forms_agree_for_equal_vars() {
        let mut s = LinearSystem::new();
        s.insert(&eq(&[(5, 1), (7, -1)], q(0, 1)), (0, 0));
        s.insert(&eq(&[(7, 1), (9, -1)], q(0, 1)), (1, 0));
        assert_eq!(s.normal_form(&Linear::var(5)), s.normal_form(&Linear::var(9)));
        assert_ne!(s.normal_form(&Linear::var(5)), s.normal_form(&Linear::var(6)));
    }
}
