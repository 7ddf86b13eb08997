//! Immediate observation nets: places, transitions, markings and firing.
//!
//! An IO transition `(src, obs, dst)` has pre-multiset `{src, obs}` and
//! post-multiset `{dst, obs}`: it moves one token from `src` to `dst` while
//! a token sits on `obs`. The three places may coincide. When `src == obs`
//! the transition needs two tokens on that place; when `src == dst` firing
//! leaves the marking unchanged. Every firing conserves the token count.

use std::collections::HashSet;
use std::fmt;

use crate::error::{check_dim, Error, Result};

/// Dense index of a place in its net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaceId(pub usize);

impl PlaceId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Token counts, one per place.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Marking(Vec<u64>);

impl Marking {
    pub fn new(counts: Vec<u64>) -> Self {
        Marking(counts)
    }

    pub fn zero(places: usize) -> Self {
        Marking(vec![0; places])
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn into_counts(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn get(&self, p: PlaceId) -> u64 {
        self.0[p.0]
    }
}

impl From<Vec<u64>> for Marking {
    fn from(counts: Vec<u64>) -> Self {
        Marking(counts)
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IOTransition {
    pub id: String,
    pub src: PlaceId,
    pub obs: PlaceId,
    pub dst: PlaceId,
}

impl IOTransition {
    pub fn new(id: impl Into<String>, src: PlaceId, obs: PlaceId, dst: PlaceId) -> Self {
        IOTransition {
            id: id.into(),
            src,
            obs,
            dst,
        }
    }

    /// Whether `counts` covers the pre-multiset `{src, obs}`.
    pub fn is_enabled(&self, counts: &[u64]) -> bool {
        if self.src == self.obs {
            counts[self.src.0] >= 2
        } else {
            counts[self.src.0] >= 1 && counts[self.obs.0] >= 1
        }
    }

    /// Fire in place. The caller guarantees enabledness.
    pub(crate) fn apply(&self, counts: &mut [u64]) {
        counts[self.src.0] -= 1;
        counts[self.dst.0] += 1;
    }

    /// Pre-multiset, sorted.
    pub fn pre(&self) -> [PlaceId; 2] {
        sorted_pair(self.src, self.obs)
    }

    /// Post-multiset, sorted.
    pub fn post(&self) -> [PlaceId; 2] {
        sorted_pair(self.dst, self.obs)
    }
}

fn sorted_pair(a: PlaceId, b: PlaceId) -> [PlaceId; 2] {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Decompose a transition given by its pre- and post-multisets into
/// `(src, obs, dst)`.
///
/// Both multisets must have exactly two elements. When several observed
/// places fit, a decomposition with `src == dst` is preferred, then the
/// lowest observed index.
pub fn classify_io(pre: &[PlaceId], post: &[PlaceId]) -> Result<(PlaceId, PlaceId, PlaceId)> {
    if pre.len() != 2 || post.len() != 2 {
        return Err(Error::NotIO);
    }
    let mut best: Option<(bool, PlaceId, PlaceId, PlaceId)> = None;
    for i in 0..2 {
        let obs = pre[i];
        let src = pre[1 - i];
        let Some(j) = post.iter().position(|&q| q == obs) else {
            continue;
        };
        let dst = post[1 - j];
        let loops = src == dst;
        let better = match best {
            None => true,
            Some((b_loops, b_obs, _, _)) => (loops && !b_loops) || (loops == b_loops && obs < b_obs),
        };
        if better {
            best = Some((loops, obs, src, dst));
        }
    }
    best.map(|(_, obs, src, dst)| (src, obs, dst)).ok_or(Error::NotIO)
}

/// An IO net. Construction validates transition ids and place references.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IONet {
    places: Vec<String>,
    transitions: Vec<IOTransition>,
}

impl IONet {
    pub fn new(places: Vec<String>, transitions: Vec<IOTransition>) -> Result<Self> {
        let mut seen = HashSet::new();
        for p in &places {
            if !seen.insert(p.as_str()) {
                return Err(Error::DuplicateId(p.clone()));
            }
        }
        let mut ids = HashSet::new();
        for t in &transitions {
            if !ids.insert(t.id.as_str()) {
                return Err(Error::DuplicateId(t.id.clone()));
            }
            for p in [t.src, t.obs, t.dst] {
                if p.0 >= places.len() {
                    return Err(Error::UnknownPlace(format!("#{}", p.0)));
                }
            }
        }
        Ok(IONet {
            places,
            transitions,
        })
    }

    /// Build from place names and `(id, src, obs, dst)` name tuples.
    pub fn from_names<S: AsRef<str>>(places: &[S], transitions: &[(S, S, S, S)]) -> Result<Self> {
        let places: Vec<String> = places.iter().map(|p| p.as_ref().to_string()).collect();
        let lookup = |name: &str| {
            places
                .iter()
                .position(|p| p == name)
                .map(PlaceId)
                .ok_or_else(|| Error::UnknownPlace(name.to_string()))
        };
        let mut ts = Vec::with_capacity(transitions.len());
        for (id, s, o, d) in transitions {
            ts.push(IOTransition::new(
                id.as_ref(),
                lookup(s.as_ref())?,
                lookup(o.as_ref())?,
                lookup(d.as_ref())?,
            ));
        }
        IONet::new(places, ts)
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn num_places(&self) -> usize {
        self.places.len()
    }

    pub fn transitions(&self) -> &[IOTransition] {
        &self.transitions
    }

    pub fn place(&self, name: &str) -> Option<PlaceId> {
        self.places.iter().position(|p| p == name).map(PlaceId)
    }

    pub fn place_name(&self, p: PlaceId) -> &str {
        &self.places[p.0]
    }

    pub fn transition(&self, id: &str) -> Option<&IOTransition> {
        self.transitions.iter().find(|t| t.id == id)
    }

    pub fn check_marking(&self, m: &Marking) -> Result<()> {
        check_dim(self.num_places(), m.len())
    }

    pub fn enabled(&self, m: &Marking, t: &IOTransition) -> Result<bool> {
        self.check_marking(m)?;
        Ok(t.is_enabled(m.counts()))
    }

    pub fn fire(&self, m: &Marking, t: &IOTransition) -> Result<Marking> {
        if !self.enabled(m, t)? {
            return Err(Error::NotEnabled(t.id.clone()));
        }
        let mut counts = m.0.clone();
        t.apply(&mut counts);
        Ok(Marking(counts))
    }

    /// Replay a trajectory, returning every marking along it (start first).
    pub fn replay(&self, traj: &Trajectory) -> Result<Vec<Marking>> {
        self.check_marking(&traj.start)?;
        let mut out = Vec::with_capacity(traj.steps.len() + 1);
        out.push(traj.start.clone());
        for (i, id) in traj.steps.iter().enumerate() {
            let t = self
                .transition(id)
                .ok_or_else(|| Error::UnknownTransition(id.clone()))?;
            let cur = out.last().expect("nonempty");
            if !t.is_enabled(cur.counts()) {
                return Err(Error::InvalidStep(i));
            }
            let mut next = cur.0.clone();
            t.apply(&mut next);
            out.push(Marking(next));
        }
        Ok(out)
    }
}

/// A firing sequence from a start marking. Intermediate markings are not
/// stored; [`IONet::replay`] recomputes them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub start: Marking,
    pub steps: Vec<String>,
}

impl Trajectory {
    pub fn new(start: Marking, steps: Vec<String>) -> Self {
        Trajectory { start, steps }
    }

    pub fn empty(start: Marking) -> Self {
        Trajectory {
            start,
            steps: Vec::new(),
        }
    }
}
