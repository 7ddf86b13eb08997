//! Natural numbers extended with a top element `ω`.

use std::fmt;
use std::ops::{Add, Sub};

/// A natural number or `ω`.
///
/// `ω` absorbs addition and decrement: `ω + k = ω` and `ω - 1 = ω`. Every
/// finite value is strictly below `ω`, which the derived ordering gives us
/// because `Fin` is declared first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Fin(u64),
    Omega,
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Fin(0);

    pub fn is_omega(self) -> bool {
        matches!(self, ExtNat::Omega)
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Omega => None,
        }
    }

    /// Subtract `k`, returning `None` when a finite value would go negative.
    pub fn checked_sub(self, k: u64) -> Option<ExtNat> {
        match self {
            ExtNat::Fin(n) => n.checked_sub(k).map(ExtNat::Fin),
            ExtNat::Omega => Some(ExtNat::Omega),
        }
    }

    /// Whether `n` lies at or below this bound.
    pub fn admits(self, n: u64) -> bool {
        match self {
            ExtNat::Fin(m) => n <= m,
            ExtNat::Omega => true,
        }
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Fin(n)
    }
}

impl Add<u64> for ExtNat {
    type Output = ExtNat;

    fn add(self, k: u64) -> ExtNat {
        match self {
            ExtNat::Fin(n) => ExtNat::Fin(n + k),
            ExtNat::Omega => ExtNat::Omega,
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, other: ExtNat) -> ExtNat {
        match (self, other) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a + b),
            _ => ExtNat::Omega,
        }
    }
}

/// Saturating at zero; `ω - k = ω`.
impl Sub<u64> for ExtNat {
    type Output = ExtNat;

    fn sub(self, k: u64) -> ExtNat {
        match self {
            ExtNat::Fin(n) => ExtNat::Fin(n.saturating_sub(k)),
            ExtNat::Omega => ExtNat::Omega,
        }
    }
}

impl PartialEq<u64> for ExtNat {
    fn eq(&self, other: &u64) -> bool {
        *self == ExtNat::Fin(*other)
    }
}

impl PartialOrd<u64> for ExtNat {
    fn partial_cmp(&self, other: &u64) -> Option<std::cmp::Ordering> {
        self.partial_cmp(&ExtNat::Fin(*other))
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Omega => write!(f, "ω"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_absorbs() {
        assert_eq!(ExtNat::Omega + 5, ExtNat::Omega);
        assert_eq!(ExtNat::Omega - 1, ExtNat::Omega);
        assert_eq!(ExtNat::Omega.checked_sub(1), Some(ExtNat::Omega));
        assert!(ExtNat::Fin(u64::MAX) < ExtNat::Omega);
    }

    #[test]
    fn finite_arithmetic() {
        assert_eq!(ExtNat::Fin(3) + 2, ExtNat::Fin(5));
        assert_eq!(ExtNat::Fin(0) - 1, ExtNat::Fin(0));
        assert_eq!(ExtNat::Fin(0).checked_sub(1), None);
        assert!(ExtNat::Fin(2).admits(2));
        assert!(!ExtNat::Fin(2).admits(3));
        assert!(ExtNat::Omega.admits(u64::MAX));
    }
}
