use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use once_cell::race::OnceBox;

/// The closed predicate vocabulary of the formal language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Predicate {
    Coll,
    Ncoll,
    Para,
    Npara,
    Perp,
    Cong,
    Midp,
    Circle,
    Cyclic,
    Eqangle,
    Eqratio,
    Eqangle6,
    Eqratio6,
    Simtri,
    Simtri2,
    SimtriStar,
    Contri,
    ContriStar,
    Contri2,
    Sameside,
}

/// A permutation of argument positions: `out[i] = in[perm[i]]`.
pub type Perm = [u8; 8];

impl Predicate {
    pub const ALL: [Predicate; 20] = [
        Predicate::Coll,
        Predicate::Ncoll,
        Predicate::Para,
        Predicate::Npara,
        Predicate::Perp,
        Predicate::Cong,
        Predicate::Midp,
        Predicate::Circle,
        Predicate::Cyclic,
        Predicate::Eqangle,
        Predicate::Eqratio,
        Predicate::Eqangle6,
        Predicate::Eqratio6,
        Predicate::Simtri,
        Predicate::Simtri2,
        Predicate::SimtriStar,
        Predicate::Contri,
        Predicate::ContriStar,
        Predicate::Contri2,
        Predicate::Sameside,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Predicate::Coll => "coll",
            Predicate::Ncoll => "ncoll",
            Predicate::Para => "para",
            Predicate::Npara => "npara",
            Predicate::Perp => "perp",
            Predicate::Cong => "cong",
            Predicate::Midp => "midp",
            Predicate::Circle => "circle",
            Predicate::Cyclic => "cyclic",
            Predicate::Eqangle => "eqangle",
            Predicate::Eqratio => "eqratio",
            Predicate::Eqangle6 => "eqangle6",
            Predicate::Eqratio6 => "eqratio6",
            Predicate::Simtri => "simtri",
            Predicate::Simtri2 => "simtri2",
            Predicate::SimtriStar => "simtri*",
            Predicate::Contri => "contri",
            Predicate::ContriStar => "contri*",
            Predicate::Contri2 => "contri2",
            Predicate::Sameside => "sameside",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Predicate::Coll | Predicate::Ncoll | Predicate::Midp => 3,
            Predicate::Para
            | Predicate::Npara
            | Predicate::Perp
            | Predicate::Cong
            | Predicate::Circle
            | Predicate::Cyclic => 4,
            Predicate::Eqangle | Predicate::Eqratio => 8,
            Predicate::Eqangle6
            | Predicate::Eqratio6
            | Predicate::Simtri
            | Predicate::Simtri2
            | Predicate::SimtriStar
            | Predicate::Contri
            | Predicate::ContriStar
            | Predicate::Contri2
            | Predicate::Sameside => 6,
        }
    }

    /// Non-degeneracy predicates. They are never derived symbolically and
    /// are always evaluated against a coordinate scene.
    pub fn is_numeric_guard(self) -> bool {
        matches!(
            self,
            Predicate::Ncoll | Predicate::Npara | Predicate::Sameside
        )
    }

    /// Triangle similarity/congruence predicates that expand into component
    /// angle, ratio and length facts.
    pub fn is_triangle_relation(self) -> bool {
        matches!(
            self,
            Predicate::Simtri
                | Predicate::Simtri2
                | Predicate::SimtriStar
                | Predicate::Contri
                | Predicate::Contri2
                | Predicate::ContriStar
        )
    }

    fn generators(self) -> Vec<Perm> {
        const fn p(v: &[u8]) -> Perm {
            let mut out = [0u8; 8];
            let mut i = 0;
            while i < v.len() {
                out[i] = v[i];
                i += 1;
            }
            out
        }
        match self {
            Predicate::Coll | Predicate::Ncoll => vec![p(&[1, 0, 2]), p(&[0, 2, 1])],
            Predicate::Para | Predicate::Npara | Predicate::Perp | Predicate::Cong => {
                vec![p(&[1, 0, 2, 3]), p(&[0, 1, 3, 2]), p(&[2, 3, 0, 1])]
            }
            Predicate::Midp => vec![p(&[0, 2, 1])],
            Predicate::Circle => vec![p(&[0, 2, 1, 3]), p(&[0, 1, 3, 2])],
            Predicate::Cyclic => vec![p(&[1, 0, 2, 3]), p(&[0, 2, 1, 3]), p(&[0, 1, 3, 2])],
            Predicate::Eqangle | Predicate::Eqratio => vec![
                p(&[1, 0, 2, 3, 4, 5, 6, 7]),
                p(&[0, 1, 3, 2, 4, 5, 6, 7]),
                p(&[0, 1, 2, 3, 5, 4, 6, 7]),
                p(&[0, 1, 2, 3, 4, 5, 7, 6]),
                // swap the two sides of the equation
                p(&[4, 5, 6, 7, 0, 1, 2, 3]),
                // transpose: x - y = z - w  <=>  x - z = y - w
                p(&[0, 1, 4, 5, 2, 3, 6, 7]),
                // negate both sides
                p(&[2, 3, 0, 1, 6, 7, 4, 5]),
            ],
            Predicate::Eqangle6 | Predicate::Eqratio6 => {
                vec![p(&[3, 4, 5, 0, 1, 2]), p(&[2, 1, 0, 5, 4, 3])]
            }
            Predicate::Simtri
            | Predicate::Simtri2
            | Predicate::SimtriStar
            | Predicate::Contri
            | Predicate::ContriStar
            | Predicate::Contri2 => vec![
                p(&[1, 0, 2, 4, 3, 5]),
                p(&[0, 2, 1, 3, 5, 4]),
                p(&[3, 4, 5, 0, 1, 2]),
            ],
            Predicate::Sameside => vec![
                p(&[0, 2, 1, 3, 4, 5]),
                p(&[0, 1, 2, 3, 5, 4]),
                p(&[3, 4, 5, 0, 1, 2]),
            ],
        }
    }

    /// The full symmetry group of the predicate's argument list, identity
    /// first. Generated by closure over a fixed generator set, once.
    pub fn symmetry_group(self) -> &'static [Perm] {
        static GROUPS: [OnceBox<Vec<Perm>>; 20] = [const { OnceBox::new() }; 20];
        GROUPS[self.index()].get_or_init(|| Box::new(self.generate_group()))
    }

    fn generate_group(self) -> Vec<Perm> {
        let n = self.arity();
        let mut id = [0u8; 8];
        for (i, slot) in id.iter_mut().enumerate().take(n) {
            *slot = i as u8;
        }
        let gens = self.generators();
        let mut group = vec![id];
        let mut frontier = vec![id];
        while let Some(g) = frontier.pop() {
            for h in &gens {
                let mut c = [0u8; 8];
                for i in 0..n {
                    c[i] = g[h[i] as usize];
                }
                if !group.contains(&c) {
                    group.push(c);
                    frontier.push(c);
                }
            }
        }
        group
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownPredicate;

impl FromStr for Predicate {
    type Err = UnknownPredicate;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let p = match lower.as_str() {
            "simtristar" => Predicate::SimtriStar,
            "contristar" => Predicate::ContriStar,
            other => *Predicate::ALL
                .iter()
                .find(|p| p.name() == other)
                .ok_or(UnknownPredicate)?,
        };
        Ok(p)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(Predicate::Coll.symmetry_group().len(), 6);
        assert_eq!(Predicate::Para.symmetry_group().len(), 8);
        assert_eq!(Predicate::Midp.symmetry_group().len(), 2);
        assert_eq!(Predicate::Circle.symmetry_group().len(), 6);
        assert_eq!(Predicate::Cyclic.symmetry_group().len(), 24);
        assert_eq!(Predicate::Eqangle.symmetry_group().len(), 128);
        assert_eq!(Predicate::Eqangle6.symmetry_group().len(), 4);
        assert_eq!(Predicate::Simtri.symmetry_group().len(), 12);
        assert_eq!(Predicate::Sameside.symmetry_group().len(), 8);
    }

    #[test]
    fn names_round_trip() {
        for p in Predicate::ALL {
            assert_eq!(p.name().parse::<Predicate>().unwrap(), p);
        }
        assert_eq!("simtriStar".parse::<Predicate>().unwrap(), Predicate::SimtriStar);
        assert!("tangent".parse::<Predicate>().is_err());
    }
}
