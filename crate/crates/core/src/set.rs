//! Counting sets: finite unions of cubes with exact boolean algebra.
//!
//! The representation is neither minimal nor disjoint. Inclusion and
//! emptiness are decided exactly by subtracting cubes, so they do not depend
//! on the shape of the representation. Complementing a set of `k` cubes over
//! `n` places can produce up to `(2n)^k` pieces before normalization; the
//! sets handled here stay small enough for that to be harmless.

use std::fmt;

use crate::cube::Cube;
use crate::error::{check_dim, Result};
use crate::net::Marking;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountingSet {
    dim: usize,
    cubes: Vec<Cube>,
}

impl CountingSet {
    pub fn empty(dim: usize) -> Self {
        CountingSet {
            dim,
            cubes: Vec::new(),
        }
    }

    pub fn universe(dim: usize) -> Self {
        CountingSet {
            dim,
            cubes: vec![Cube::universe(dim)],
        }
    }

    pub fn from_cube(cube: Cube) -> Self {
        CountingSet {
            dim: cube.dim(),
            cubes: vec![cube],
        }
    }

    pub fn from_cubes(dim: usize, cubes: Vec<Cube>) -> Result<Self> {
        for c in &cubes {
            check_dim(dim, c.dim())?;
        }
        Ok(CountingSet { dim, cubes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn into_cubes(self) -> Vec<Cube> {
        self.cubes
    }

    pub fn contains(&self, m: &[u64]) -> bool {
        self.cubes.iter().any(|c| c.contains(m))
    }

    pub fn member(&self, m: &Marking) -> Result<bool> {
        check_dim(self.dim, m.len())?;
        Ok(self.contains(m.counts()))
    }

    pub fn union(&self, other: &CountingSet) -> Result<CountingSet> {
        check_dim(self.dim, other.dim)?;
        let mut cubes = self.cubes.clone();
        cubes.extend(other.cubes.iter().cloned());
        Ok(CountingSet {
            dim: self.dim,
            cubes,
        }
        .normalize())
    }

    pub fn intersect(&self, other: &CountingSet) -> Result<CountingSet> {
        check_dim(self.dim, other.dim)?;
        let mut cubes = Vec::new();
        for a in &self.cubes {
            for b in &other.cubes {
                let c = a.meet(b);
                if !c.is_empty() {
                    cubes.push(c);
                }
            }
        }
        Ok(CountingSet {
            dim: self.dim,
            cubes,
        }
        .normalize())
    }

    pub fn intersect_cube(&self, cube: &Cube) -> Result<CountingSet> {
        self.intersect(&CountingSet::from_cube(cube.clone()))
    }

    /// Exact complement, as disjoint pieces of the universe.
    pub fn complement(&self) -> CountingSet {
        CountingSet::universe(self.dim).minus(self)
    }

    pub fn difference(&self, other: &CountingSet) -> Result<CountingSet> {
        check_dim(self.dim, other.dim)?;
        Ok(self.minus(other))
    }

    fn minus(&self, other: &CountingSet) -> CountingSet {
        let mut pieces: Vec<Cube> = self.cubes.iter().filter(|c| !c.is_empty()).cloned().collect();
        for b in &other.cubes {
            if pieces.is_empty() {
                break;
            }
            if b.is_empty() {
                continue;
            }
            pieces = pieces.iter().flat_map(|p| p.subtract(b)).collect();
        }
        CountingSet {
            dim: self.dim,
            cubes: pieces,
        }
        .normalize()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.iter().all(Cube::is_empty)
    }

    /// `other ⊆ self`.
    pub fn includes(&self, other: &CountingSet) -> Result<bool> {
        check_dim(self.dim, other.dim)?;
        Ok(other.cubes.iter().all(|c| self.covers_cube(c)))
    }

    /// Whether `cube` is included in the union of this set's cubes.
    pub fn covers_cube(&self, cube: &Cube) -> bool {
        covered(cube, &self.cubes)
    }

    /// Denotational equality.
    pub fn same_set(&self, other: &CountingSet) -> Result<bool> {
        Ok(self.includes(other)? && other.includes(self)?)
    }

    /// Drop empty cubes and cubes included in another single cube. The
    /// remaining cubes keep their relative order.
    pub fn normalize(&self) -> CountingSet {
        let live: Vec<&Cube> = self.cubes.iter().filter(|c| !c.is_empty()).collect();
        let mut keep: Vec<Cube> = Vec::with_capacity(live.len());
        for (i, c) in live.iter().enumerate() {
            let dominated = live.iter().enumerate().any(|(j, d)| {
                j != i && c.is_subset(d) && (!d.is_subset(c) || j < i)
            });
            if !dominated {
                keep.push((*c).clone());
            }
        }
        CountingSet {
            dim: self.dim,
            cubes: keep,
        }
    }

    pub fn norm(&self) -> u64 {
        self.cubes.iter().map(Cube::norm).max().unwrap_or(0)
    }

    /// Replace every upper bound by `ω`.
    pub fn upward_closure(&self) -> CountingSet {
        CountingSet {
            dim: self.dim,
            cubes: self.cubes.iter().map(Cube::upward_closure).collect(),
        }
        .normalize()
    }

    /// Some member of least total, if the set is nonempty.
    pub fn least_member(&self) -> Option<Marking> {
        self.cubes
            .iter()
            .filter_map(Cube::least_member)
            .min_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)))
    }

    /// Sort cubes into a canonical order, for stable output.
    pub fn sorted(mut self) -> CountingSet {
        self.cubes.sort();
        self.cubes.dedup();
        self
    }
}

/// Whether `cube` is included in the union of `cubes`.
pub(crate) fn covered(cube: &Cube, cubes: &[Cube]) -> bool {
    if cube.is_empty() || cubes.iter().any(|c| cube.is_subset(c)) {
        return true;
    }
    let mut pieces = vec![cube.clone()];
    for c in cubes {
        if c.is_empty() {
            continue;
        }
        pieces = pieces.iter().flat_map(|p| p.subtract(c)).collect();
        if pieces.is_empty() {
            return true;
        }
    }
    false
}

impl fmt::Display for CountingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cubes.is_empty() {
            return write!(f, "∅");
        }
        for (i, c) in self.cubes.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    const W: Option<u64> = None;

    fn set(cubes: &[&[(u64, Option<u64>)]]) -> CountingSet {
        let cubes: Vec<Cube> = cubes.iter().map(|b| Cube::from_bounds(b)).collect();
        CountingSet::from_cubes(cubes[0].dim(), cubes).unwrap()
    }

    #[test]
    fn member_of_union() {
        let s = set(&[&[(0, Some(2)), (0, W)], &[(3, Some(3)), (5, Some(5))]]);
        assert!(s.member(&Marking::new(vec![3, 5])).unwrap());
        assert!(!s.member(&Marking::new(vec![3, 4])).unwrap());
    }

    #[test]
    fn emptiness_and_inclusion() {
        assert!(CountingSet::empty(2).is_empty());
        let any = set(&[&[(1, Some(3)), (2, W)], &[(0, Some(0)), (0, Some(0))]]);
        assert!(CountingSet::universe(2).includes(&any).unwrap());
        let small = set(&[&[(0, Some(1))]]);
        let big = set(&[&[(0, Some(2))]]);
        assert!(!small.includes(&big).unwrap());
        assert!(big.includes(&small).unwrap());
        assert!(any.difference(&any).unwrap().is_empty());
        assert!(matches!(
            small.includes(&any),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn union_of_pieces_covers() {
        // [0,1] ∪ [2,ω] covers [0,ω] although no single cube does
        let s = set(&[&[(0, Some(1))], &[(2, W)]]);
        assert!(s.covers_cube(&Cube::universe(1)));
        assert!(s.complement().is_empty());
    }

    #[test]
    fn normalize_examples() {
        let s = set(&[&[(1, Some(0))], &[(0, W)]]);
        assert_eq!(s.normalize().cubes(), &[Cube::universe(1)]);
        let s = set(&[&[(0, Some(1))], &[(0, Some(3))]]);
        assert_eq!(s.normalize().cubes(), &[Cube::from_bounds(&[(0, Some(3))])]);
        let s = set(&[&[(0, Some(1))], &[(2, Some(3))]]);
        assert_eq!(s.normalize(), s);
        let dup = set(&[&[(0, Some(1))], &[(0, Some(1))]]);
        assert_eq!(dup.normalize().cubes().len(), 1);
    }

    #[test]
    fn set_norm() {
        let s = set(&[&[(1, W)], &[(0, Some(4))]]);
        assert_eq!(s.norm(), 4);
        assert_eq!(CountingSet::empty(3).norm(), 0);
    }

    #[test]
    fn complement_twice() {
        let s = set(&[&[(1, Some(2)), (0, W)], &[(4, W), (3, Some(3))]]);
        let cc = s.complement().complement();
        assert!(cc.same_set(&s).unwrap());
    }
}
