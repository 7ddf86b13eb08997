//! Cubes: per-place intervals `[lower, upper]` with `upper` possibly `ω`.

use std::fmt;

use crate::error::{check_dim, Result};
use crate::ext::ExtNat;
use crate::net::Marking;

/// The set of markings `M` with `lower(p) <= M(p) <= upper(p)` for every
/// place `p`. A cube with some `lower(p) > upper(p)` denotes the empty set;
/// such cubes are allowed and reported by [`Cube::is_empty`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    lower: Vec<u64>,
    upper: Vec<ExtNat>,
}

impl Cube {
    /// Panics if the two bound vectors differ in length.
    pub fn new(lower: Vec<u64>, upper: Vec<ExtNat>) -> Self {
        assert_eq!(lower.len(), upper.len(), "cube bounds must have equal length");
        Cube { lower, upper }
    }

    /// `[0, ω]` on every place.
    pub fn universe(dim: usize) -> Self {
        Cube {
            lower: vec![0; dim],
            upper: vec![ExtNat::Omega; dim],
        }
    }

    /// The singleton cube `{m}`.
    pub fn point(m: &Marking) -> Self {
        Cube {
            lower: m.counts().to_vec(),
            upper: m.counts().iter().map(|&c| ExtNat::Fin(c)).collect(),
        }
    }

    /// Build from `(lower, upper)` pairs, `None` meaning `ω`.
    pub fn from_bounds(bounds: &[(u64, Option<u64>)]) -> Self {
        Cube {
            lower: bounds.iter().map(|b| b.0).collect(),
            upper: bounds
                .iter()
                .map(|b| b.1.map_or(ExtNat::Omega, ExtNat::Fin))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[u64] {
        &self.lower
    }

    pub fn upper(&self) -> &[ExtNat] {
        &self.upper
    }

    pub fn bounds(&self, p: usize) -> (u64, ExtNat) {
        (self.lower[p], self.upper[p])
    }

    pub fn set_bounds(&mut self, p: usize, lower: u64, upper: ExtNat) {
        self.lower[p] = lower;
        self.upper[p] = upper;
    }

    /// Raise the lower bound on `p` to at least `k`.
    pub fn require_at_least(&mut self, p: usize, k: u64) {
        self.lower[p] = self.lower[p].max(k);
    }

    pub fn is_empty(&self) -> bool {
        self.lower
            .iter()
            .zip(&self.upper)
            .any(|(&l, &u)| !u.admits(l))
    }

    pub fn contains(&self, m: &[u64]) -> bool {
        m.len() == self.dim()
            && m
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&c, (&l, &u))| l <= c && u.admits(c))
    }

    pub fn member(&self, m: &Marking) -> Result<bool> {
        check_dim(self.dim(), m.len())?;
        Ok(self.contains(m.counts()))
    }

    pub fn intersect(&self, other: &Cube) -> Result<Cube> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.meet(other))
    }

    pub(crate) fn meet(&self, other: &Cube) -> Cube {
        Cube {
            lower: self
                .lower
                .iter()
                .zip(&other.lower)
                .map(|(&a, &b)| a.max(b))
                .collect(),
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        }
    }

    /// Denotational inclusion `self ⊆ other`. The empty cube is included in
    /// everything.
    pub fn is_subset(&self, other: &Cube) -> bool {
        self.is_empty()
            || (0..self.dim()).all(|p| other.lower[p] <= self.lower[p] && self.upper[p] <= other.upper[p])
    }

    /// The complement as a union of at most `2 * dim` cubes, one per violated
    /// bound. The pieces may overlap.
    pub fn complement(&self) -> Vec<Cube> {
        let n = self.dim();
        if self.is_empty() {
            return vec![Cube::universe(n)];
        }
        let mut out = Vec::new();
        for p in 0..n {
            if self.lower[p] > 0 {
                let mut below = Cube::universe(n);
                below.upper[p] = ExtNat::Fin(self.lower[p] - 1);
                out.push(below);
            }
            if let ExtNat::Fin(u) = self.upper[p] {
                let mut above = Cube::universe(n);
                above.lower[p] = u + 1;
                out.push(above);
            }
        }
        out
    }

    /// `self \ other` as pairwise disjoint cubes (at most `2 * dim`).
    pub fn subtract(&self, other: &Cube) -> Vec<Cube> {
        if self.is_empty() {
            return Vec::new();
        }
        if self.meet(other).is_empty() {
            return vec![self.clone()];
        }
        let mut out = Vec::new();
        let mut rest = self.clone();
        for p in 0..self.dim() {
            let (l, u) = rest.bounds(p);
            let (ol, ou) = other.bounds(p);
            if ol > l {
                let mut below = rest.clone();
                below.upper[p] = ExtNat::Fin(ol - 1);
                out.push(below);
            }
            if let ExtNat::Fin(ou) = ou {
                if u > ExtNat::Fin(ou) {
                    let mut above = rest.clone();
                    above.lower[p] = ou + 1;
                    out.push(above);
                }
            }
            rest.lower[p] = l.max(ol);
            rest.upper[p] = u.min(ou);
        }
        out
    }

    /// Largest finite constant among all lower bounds and the non-`ω` upper
    /// bounds.
    pub fn norm(&self) -> u64 {
        let lo = self.lower.iter().copied().max().unwrap_or(0);
        let hi = self.upper.iter().filter_map(|u| u.finite()).max().unwrap_or(0);
        lo.max(hi)
    }

    /// Smallest token total of a member, or `None` when empty.
    pub fn min_total(&self) -> Option<u64> {
        (!self.is_empty()).then(|| self.lower.iter().sum())
    }

    /// Largest token total of a member (`ω` if unbounded), or `None` when
    /// empty.
    pub fn max_total(&self) -> Option<ExtNat> {
        (!self.is_empty()).then(|| self.upper.iter().fold(ExtNat::ZERO, |acc, &u| acc + u))
    }

    /// The member formed by the lower bounds; the least-total member.
    pub fn least_member(&self) -> Option<Marking> {
        (!self.is_empty()).then(|| Marking::new(self.lower.clone()))
    }

    /// Replace every upper bound by `ω`.
    pub fn upward_closure(&self) -> Cube {
        Cube {
            lower: self.lower.clone(),
            upper: vec![ExtNat::Omega; self.dim()],
        }
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in 0..self.dim() {
            if p > 0 {
                write!(f, "×")?;
            }
            write!(f, "[{},{}]", self.lower[p], self.upper[p])?;
        }
        Ok(())
    }
}
