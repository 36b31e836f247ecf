use core::fmt;
use core::str::FromStr;

use thiserror::Error;

/// A named point: one lowercase letter plus an optional numeric suffix
/// (`a`, `b`, `x12`).
///
/// Ordering is natural rather than textual, so `a2 < a10` and every
/// unsuffixed name sorts before its suffixed siblings.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSym {
    letter: u8,
    // 0 means "no suffix"; n + 1 encodes suffix n.
    suffix: u16,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid point name `{0}`")]
pub struct BadPointName(pub alloc::string::String);

impl PointSym {
    pub const fn new(letter: char, suffix: Option<u16>) -> Self {
        let suffix = match suffix {
            Some(n) => n + 1,
            None => 0,
        };
        PointSym {
            letter: letter as u8,
            suffix,
        }
    }

    /// The `n`-th name of the fresh sequence `a, b, …, z, a1, b1, …`.
    pub fn nth(n: usize) -> Self {
        let letter = b'a' + (n % 26) as u8;
        let round = n / 26;
        PointSym {
            letter,
            suffix: if round == 0 { 0 } else { round as u16 + 1 },
        }
    }

    pub fn letter(self) -> char {
        self.letter as char
    }

    pub fn suffix(self) -> Option<u16> {
        self.suffix.checked_sub(1)
    }

    /// Writes the point in prose style: uppercase letter, digits kept.
    pub fn upper(self) -> alloc::string::String {
        use alloc::string::ToString;
        let mut s = (self.letter as char).to_ascii_uppercase().to_string();
        if let Some(n) = self.suffix() {
            s.push_str(&n.to_string());
        }
        s
    }
}

impl FromStr for PointSym {
    type Err = BadPointName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BadPointName(s.into());
        let mut chars = s.chars();
        let first = chars.next().ok_or_else(bad)?.to_ascii_lowercase();
        if !first.is_ascii_lowercase() {
            return Err(bad());
        }
        let rest = chars.as_str();
        let suffix = if rest.is_empty() {
            None
        } else {
            if !rest.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            Some(rest.parse::<u16>().map_err(|_| bad())?)
        };
        if suffix == Some(u16::MAX) {
            return Err(bad());
        }
        Ok(PointSym::new(first, suffix))
    }
}

impl fmt::Display for PointSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter as char)?;
        if let Some(n) = self.suffix() {
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PointSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_normalizes_case() {
        let p: PointSym = "X12".parse().unwrap();
        assert_eq!(p.letter(), 'x');
        assert_eq!(p.suffix(), Some(12));
        assert_eq!(alloc::format!("{p}"), "x12");
        assert_eq!(p.upper(), "X12");
    }

    #[test]
    fn rejects_garbage() {
        assert!("".parse::<PointSym>().is_err());
        assert!("1a".parse::<PointSym>().is_err());
        assert!("ab".parse::<PointSym>().is_err());
        assert!("a-1".parse::<PointSym>().is_err());
    }

    #[test]
    fn natural_order() {
        let p = |s: &str| s.parse::<PointSym>().unwrap();
        assert!(p("a") < p("a1"));
        assert!(p("a2") < p("a10"));
        assert!(p("a10") < p("b"));
    }

    #[test]
    fn fresh_sequence() {
        assert_eq!(alloc::format!("{}", PointSym::nth(0)), "a");
        assert_eq!(alloc::format!("{}", PointSym::nth(25)), "z");
        assert_eq!(alloc::format!("{}", PointSym::nth(26)), "a1");
        assert_eq!(alloc::format!("{}", PointSym::nth(53)), "b2");
    }
}
