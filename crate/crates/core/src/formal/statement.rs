use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use arrayvec::ArrayVec;
use thiserror::Error;

use super::point::PointSym;
use super::predicate::{Perm, Predicate};

pub type Args = ArrayVec<PointSym, 8>;

/// One formal predicate applied to named points, e.g. `perp a b c d`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Statement {
    pub predicate: Predicate,
    pub args: Args,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatementError {
    #[error("empty statement")]
    Empty,
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("`{predicate}` takes {expected} points, got {got}")]
    Arity {
        predicate: Predicate,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Point(#[from] super::point::BadPointName),
}

impl Statement {
    pub fn new(predicate: Predicate, args: &[PointSym]) -> Result<Self, StatementError> {
        if args.len() != predicate.arity() {
            return Err(StatementError::Arity {
                predicate,
                expected: predicate.arity(),
                got: args.len(),
            });
        }
        Ok(Statement {
            predicate,
            args: args.iter().copied().collect(),
        })
    }

    pub fn parse(text: &str) -> Result<Self, StatementError> {
        let mut toks = text.split_whitespace();
        let head = toks.next().ok_or(StatementError::Empty)?;
        let predicate: Predicate = head
            .parse()
            .map_err(|_| StatementError::UnknownPredicate(head.into()))?;
        let mut args = Vec::new();
        for t in toks {
            args.push(t.parse::<PointSym>()?);
        }
        Statement::new(predicate, &args)
    }

    pub fn points(&self) -> impl Iterator<Item = PointSym> + '_ {
        self.args.iter().copied()
    }

    pub fn permuted(&self, perm: &Perm) -> Statement {
        let args = (0..self.args.len())
            .map(|i| self.args[perm[i] as usize])
            .collect();
        Statement {
            predicate: self.predicate,
            args,
        }
    }

    /// Canonical representative: the lexicographically smallest member of
    /// the argument orbit under the predicate's symmetry group.
    pub fn canonical(&self) -> Statement {
        match self.predicate {
            Predicate::Eqangle | Predicate::Eqratio => self.canonical_pairs(),
            p => canonicalize_with(self, p.symmetry_group()),
        }
    }

    // Same orbit minimum as the generic path: order each pair, then take
    // the least of the eight pair arrangements.
    fn canonical_pairs(&self) -> Statement {
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
        let a = &self.args;
        let pair = |i: usize| {
            let (x, y) = (a[2 * i], a[2 * i + 1]);
            if x <= y { [x, y] } else { [y, x] }
        };
        let pairs = [pair(0), pair(1), pair(2), pair(3)];
        let best = ARRANGEMENTS
            .iter()
            .map(|o| [pairs[o[0]], pairs[o[1]], pairs[o[2]], pairs[o[3]]])
            .min()
            .expect("nonempty");
        Statement {
            predicate: self.predicate,
            args: best.iter().flatten().copied().collect(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// Replaces every point via `f`.
    pub fn map_points(&self, mut f: impl FnMut(PointSym) -> PointSym) -> Statement {
        Statement {
            predicate: self.predicate,
            args: self.args.iter().map(|&p| f(p)).collect(),
        }
    }

    /// True if some point occurs twice in the argument list where the
    /// predicate's meaning requires distinct points (a zero-length segment
    /// or a degenerate triangle).
    pub fn is_degenerate(&self) -> bool {
        let a = &self.args;
        let pair = |i: usize, j: usize| a[i] == a[j];
        match self.predicate {
            Predicate::Coll | Predicate::Ncoll | Predicate::Midp => {
                pair(0, 1) || pair(0, 2) || pair(1, 2)
            }
            Predicate::Para | Predicate::Npara | Predicate::Perp | Predicate::Cong => {
                pair(0, 1) || pair(2, 3)
            }
            Predicate::Circle | Predicate::Cyclic => {
                (0..4).any(|i| (i + 1..4).any(|j| pair(i, j)))
            }
            Predicate::Eqangle | Predicate::Eqratio => {
                pair(0, 1) || pair(2, 3) || pair(4, 5) || pair(6, 7)
            }
            Predicate::Eqangle6 | Predicate::Eqratio6 | Predicate::Sameside => {
                pair(0, 1) || pair(1, 2) || pair(0, 2) || pair(3, 4) || pair(4, 5) || pair(3, 5)
            }
            _ => {
                pair(0, 1) || pair(1, 2) || pair(0, 2) || pair(3, 4) || pair(4, 5) || pair(3, 5)
            }
        }
    }
}

/// Canonicalizes with a precomputed symmetry group.
pub fn canonicalize_with(stmt: &Statement, group: &[Perm]) -> Statement {
    let mut best: Option<Statement> = None;
    for perm in group {
        let cand = stmt.permuted(perm);
        if best.as_ref().is_none_or(|b| cand.args < b.args) {
            best = Some(cand);
        }
    }
    best.unwrap_or_else(|| stmt.clone())
}

/// Free-function form of [`Statement::canonical`].
pub fn canonicalize(stmt: &Statement) -> Statement {
    stmt.canonical()
}

/// Formats a statement in the `pred a b c` surface syntax.
pub fn format_statement(stmt: &Statement) -> String {
    alloc::format!("{stmt}")
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.predicate.name())?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl core::str::FromStr for Statement {
    type Err = StatementError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Statement::parse(s)
    }
}
