//! Small witnesses for cube-to-cube reachability.
//!
//! If some marking of `from` reaches some marking of `to`, then one with a
//! bounded number of tokens does. Because firing conserves tokens, the
//! search runs one token total `k` at a time: each total gives a finite
//! marking graph, searched breadth-first from the members of `from` with
//! `k` tokens. Exhausting every feasible `k` up to [`witness_bound`] without
//! hitting `to` proves unreachability.

use std::collections::{HashMap, VecDeque};

use crate::cube::Cube;
use crate::error::{check_dim, Error, Result};
use crate::ext::ExtNat;
use crate::net::{IONet, Marking, Trajectory};
use crate::oracle::enumerate_cube;

/// Maximum token total a witness needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct WitnessBound(pub u64);

/// Token total up to which a reachability witness is guaranteed to exist,
/// as a function of the number of places `n` and the norms of both cubes.
///
/// `B = n * (‖from‖ + ‖to‖ + 2)`, raised to the least total any member of
/// `from` or `to` has.
pub fn witness_bound(net: &IONet, from: &Cube, to: &Cube) -> Result<WitnessBound> {
    check_dim(net.num_places(), from.dim())?;
    check_dim(net.num_places(), to.dim())?;
    let (Some(lo_from), Some(lo_to)) = (from.min_total(), to.min_total()) else {
        return Err(Error::EmptyCube);
    };
    let n = net.num_places() as u64;
    let formula = n * (from.norm() + to.norm() + 2);
    Ok(WitnessBound(formula.max(lo_from).max(lo_to)))
}

/// Totals compatible with both cubes, capped at `bound`.
pub fn feasible_totals(from: &Cube, to: &Cube, bound: u64) -> std::ops::RangeInclusive<u64> {
    let (Some(a), Some(b)) = (from.min_total(), to.min_total()) else {
        #[allow(clippy::reversed_empty_ranges)]
        return 1..=0;
    };
    let hi = [from.max_total(), to.max_total()]
        .into_iter()
        .flatten()
        .fold(ExtNat::Fin(bound), ExtNat::min);
    let hi = hi.finite().unwrap_or(bound);
    a.max(b)..=hi
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Trajectory),
    /// No witness with at most `bound` tokens.
    NoWitness { bound: u64 },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&Trajectory> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            SearchOutcome::NoWitness { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Override for [`witness_bound`]. A `NoWitness` answer under an
    /// override only means "none up to this bound".
    pub bound: Option<u64>,
    /// Cap on markings visited for a single total.
    pub state_limit: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            bound: None,
            state_limit: 20_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub bound: u64,
    pub totals_searched: u64,
    pub states_visited: u64,
}

/// Search totals `k_min ..= bound` for a trajectory from `from` into `to`.
pub fn find_small_witness(net: &IONet, from: &Cube, to: &Cube) -> Result<SearchOutcome> {
    search(net, from, to, SearchOptions::default()).map(|(o, _)| o)
}

pub fn search(
    net: &IONet,
    from: &Cube,
    to: &Cube,
    opts: SearchOptions,
) -> Result<(SearchOutcome, SearchStats)> {
    let bound = match opts.bound {
        Some(b) => {
            check_dim(net.num_places(), from.dim())?;
            check_dim(net.num_places(), to.dim())?;
            if from.is_empty() || to.is_empty() {
                return Err(Error::EmptyCube);
            }
            b
        }
        None => witness_bound(net, from, to)?.0,
    };
    let mut stats = SearchStats {
        bound,
        ..SearchStats::default()
    };
    if let Some(m) = from.meet(to).least_member().filter(|m| m.total() <= bound) {
        return Ok((SearchOutcome::Found(Trajectory::empty(m)), stats));
    }
    for k in feasible_totals(from, to, bound) {
        stats.totals_searched += 1;
        let (found, visited) = search_total(net, from, to, k, opts.state_limit)?;
        stats.states_visited += visited as u64;
        if let Some(traj) = found {
            return Ok((SearchOutcome::Found(traj), stats));
        }
    }
    Ok((SearchOutcome::NoWitness { bound }, stats))
}

/// Breadth-first search among markings with exactly `total` tokens.
/// Returns a shortest trajectory for that total, if any, and the number of
/// markings visited.
pub fn search_total(
    net: &IONet,
    from: &Cube,
    to: &Cube,
    total: u64,
    state_limit: usize,
) -> Result<(Option<Trajectory>, usize)> {
    check_dim(net.num_places(), from.dim())?;
    check_dim(net.num_places(), to.dim())?;
    // parent[i] = (predecessor index, transition index)
    let mut states: Vec<Vec<u64>> = Vec::new();
    let mut parent: Vec<Option<(usize, usize)>> = Vec::new();
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for m in enumerate_cube(from, total) {
        let counts = m.into_counts();
        if to.contains(&counts) {
            return Ok((Some(Trajectory::empty(Marking::new(counts))), states.len() + 1));
        }
        index.insert(counts.clone(), states.len());
        states.push(counts);
        parent.push(None);
        queue.push_back(states.len() - 1);
    }
    while let Some(i) = queue.pop_front() {
        for (ti, t) in net.transitions().iter().enumerate() {
            if t.src == t.dst || !t.is_enabled(&states[i]) {
                continue;
            }
            let mut next = states[i].clone();
            t.apply(&mut next);
            if index.contains_key(&next) {
                continue;
            }
            if states.len() >= state_limit {
                return Err(Error::StateLimitExceeded(state_limit));
            }
            let hit = to.contains(&next);
            index.insert(next.clone(), states.len());
            states.push(next);
            parent.push(Some((i, ti)));
            let j = states.len() - 1;
            if hit {
                return Ok((Some(unwind(net, &states, &parent, j)), states.len()));
            } else {
                queue.push_back(j);
            }
        }
    }
    Ok((None, states.len()))
}

fn unwind(
    net: &IONet,
    states: &[Vec<u64>],
    parent: &[Option<(usize, usize)>],
    mut j: usize,
) -> Trajectory {
    let mut steps = Vec::new();
    while let Some((i, ti)) = parent[j] {
        steps.push(net.transitions()[ti].id.clone());
        j = i;
    }
    steps.reverse();
    Trajectory::new(Marking::new(states[j].clone()), steps)
}
