//! Brute-force explicit-state ground truth.
//!
//! IO nets conserve tokens, so the markings reachable from `m` all have
//! total `|m|` and form a finite graph. Everything here enumerates that
//! graph and is intentionally independent of the symbolic machinery.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::cube::Cube;
use crate::error::{Error, Result};
use crate::net::{IONet, Marking};

pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

/// Explicit exploration with a cap on the number of visited markings.
#[derive(Debug, Clone, Copy)]
pub struct Oracle<'a> {
    net: &'a IONet,
    limit: usize,
}

/// The reachability graph of one marking, indexed densely.
#[derive(Debug, Clone)]
pub struct ReachGraph {
    pub states: Vec<Marking>,
    pub succ: Vec<Vec<usize>>,
}

impl ReachGraph {
    /// Indices that can reach some index in `targets` (including them).
    pub fn backward_closure(&self, targets: &[bool]) -> Vec<bool> {
        let n = self.states.len();
        let mut pred = vec![Vec::new(); n];
        for (i, ss) in self.succ.iter().enumerate() {
            for &j in ss {
                pred[j].push(i);
            }
        }
        let mut mark = targets.to_vec();
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| mark[i]).collect();
        while let Some(j) = queue.pop_front() {
            for &i in &pred[j] {
                if !mark[i] {
                    mark[i] = true;
                    queue.push_back(i);
                }
            }
        }
        mark
    }
}

impl<'a> Oracle<'a> {
    pub fn new(net: &'a IONet) -> Self {
        Oracle {
            net,
            limit: DEFAULT_STATE_LIMIT,
        }
    }

    pub fn with_limit(net: &'a IONet, limit: usize) -> Self {
        Oracle { net, limit }
    }

    /// BFS closure of `m` under firing.
    pub fn reach_set(&self, m: &Marking) -> Result<HashSet<Marking>> {
        Ok(self.graph(m)?.states.into_iter().collect())
    }

    /// The reachability graph from `m`; `states[0] == m`.
    pub fn graph(&self, m: &Marking) -> Result<ReachGraph> {
        self.net.check_marking(m)?;
        let mut index: HashMap<Marking, usize> = HashMap::new();
        let mut states = vec![m.clone()];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new()];
        index.insert(m.clone(), 0);
        let mut i = 0;
        while i < states.len() {
            let cur = states[i].clone();
            let mut out = Vec::new();
            for t in self.net.transitions() {
                if !t.is_enabled(cur.counts()) {
                    continue;
                }
                let next = self.net.fire(&cur, t)?;
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if states.len() >= self.limit {
                            return Err(Error::StateLimitExceeded(self.limit));
                        }
                        states.push(next.clone());
                        succ.push(Vec::new());
                        index.insert(next, states.len() - 1);
                        states.len() - 1
                    }
                };
                if !out.contains(&j) {
                    out.push(j);
                }
            }
            succ[i] = out;
            i += 1;
        }
        Ok(ReachGraph { states, succ })
    }

    /// Whether `m` reaches some marking in `target`.
    pub fn reaches(&self, m: &Marking, target: impl Fn(&Marking) -> bool) -> Result<bool> {
        Ok(self.graph(m)?.states.iter().any(target))
    }

    /// `m` is live iff from every reachable marking, every transition can
    /// be enabled again.
    pub fn marking_live(&self, m: &Marking) -> Result<bool> {
        let g = self.graph(m)?;
        for t in self.net.transitions() {
            let enables: Vec<bool> = g.states.iter().map(|s| t.is_enabled(s.counts())).collect();
            if !g.backward_closure(&enables).iter().all(|&b| b) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The consensus `b` that every fair run from `m` stabilizes to, if any.
    ///
    /// `labels[p]` is the output of place `p`. `ST_b` is the set of reachable
    /// markings from which no marking with a token on a `(1-b)`-labelled
    /// place is reachable; fair runs from `m` stabilize to `b` iff every
    /// reachable marking can reach `ST_b`. The empty marking has no agents
    /// and stabilizes to neither value.
    pub fn fair_stabilization(&self, m: &Marking, labels: &[u8]) -> Result<Option<u8>> {
        crate::error::check_dim(self.net.num_places(), labels.len())?;
        if m.total() == 0 {
            return Ok(None);
        }
        let g = self.graph(m)?;
        let mut found = None;
        for b in [0u8, 1] {
            let bad: Vec<bool> = g
                .states
                .iter()
                .map(|s| s.counts().iter().zip(labels).any(|(&c, &l)| c > 0 && l != b))
                .collect();
            let reaches_bad = g.backward_closure(&bad);
            let stable: Vec<bool> = reaches_bad.iter().map(|&r| !r).collect();
            if g.backward_closure(&stable).iter().all(|&x| x) {
                if found.is_some() {
                    return Err(Error::Invariant(format!(
                        "marking {m} stabilizes to both consensus values"
                    )));
                }
                found = Some(b);
            }
        }
        Ok(found)
    }
}

/// All members of `c` with exactly `total` tokens, in lexicographic order.
pub fn enumerate_cube(c: &Cube, total: u64) -> Vec<Marking> {
    let mut out = Vec::new();
    if c.is_empty() {
        return out;
    }
    let n = c.dim();
    if n == 0 {
        if total == 0 {
            out.push(Marking::new(Vec::new()));
        }
        return out;
    }
    // suffix_min[i] / suffix_max[i]: token range the places i.. can absorb
    let mut suffix_min = vec![0u64; n + 1];
    let mut suffix_max = vec![Some(0u64); n + 1];
    for p in (0..n).rev() {
        suffix_min[p] = suffix_min[p + 1] + c.lower()[p];
        suffix_max[p] = match (suffix_max[p + 1], c.upper()[p].finite()) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
    }
    let mut cur = vec![0u64; n];
    fill(c, total, 0, &suffix_min, &suffix_max, &mut cur, &mut out);
    out
}

fn fill(
    c: &Cube,
    remaining: u64,
    p: usize,
    smin: &[u64],
    smax: &[Option<u64>],
    cur: &mut Vec<u64>,
    out: &mut Vec<Marking>,
) {
    let n = c.dim();
    if remaining < smin[p] || smax[p].is_some_and(|m| remaining > m) {
        return;
    }
    if p == n - 1 {
        cur[p] = remaining;
        out.push(Marking::new(cur.clone()));
        return;
    }
    let (lo, hi) = c.bounds(p);
    let hi = hi.finite().map_or(remaining, |h| h.min(remaining));
    for v in lo..=hi {
        cur[p] = v;
        fill(c, remaining - v, p + 1, smin, smax, cur, out);
    }
}

/// All markings over `dim` places with exactly `total` tokens, in
/// lexicographic order.
pub fn all_markings(dim: usize, total: u64) -> Vec<Marking> {
    enumerate_cube(&Cube::universe(dim), total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[u64]) -> Marking {
        Marking::new(v.to_vec())
    }

    fn ab(ts: &[(&str, &str, &str, &str)]) -> IONet {
        IONet::from_names(&["a", "b"], ts).unwrap()
    }

    #[test]
    fn reach_set_examples() {
        let bare = ab(&[]);
        assert_eq!(Oracle::new(&bare).reach_set(&m(&[2, 1])).unwrap(), [m(&[2, 1])].into());
        let net = ab(&[("t", "a", "b", "b")]);
        let o = Oracle::new(&net);
        assert_eq!(
            o.reach_set(&m(&[2, 1])).unwrap(),
            [m(&[2, 1]), m(&[1, 2]), m(&[0, 3])].into()
        );
        assert_eq!(o.reach_set(&m(&[2, 0])).unwrap(), [m(&[2, 0])].into());
    }

    #[test]
    fn state_limit_is_an_error() {
        let net = ab(&[("t", "a", "b", "b")]);
        let o = Oracle::with_limit(&net, 2);
        assert_eq!(o.reach_set(&m(&[2, 1])), Err(Error::StateLimitExceeded(2)));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_cube(&Cube::universe(1), 2), vec![m(&[2])]);
        assert_eq!(
            enumerate_cube(&Cube::universe(2), 2),
            vec![m(&[0, 2]), m(&[1, 1]), m(&[2, 0])]
        );
        let c = Cube::from_bounds(&[(1, Some(1)), (0, Some(0))]);
        assert!(enumerate_cube(&c, 2).is_empty());
        assert_eq!(all_markings(3, 4).len(), 15);
    }

    #[test]
    fn liveness_examples() {
        let cyc = ab(&[("t1", "a", "b", "b"), ("t2", "b", "b", "a")]);
        assert!(Oracle::new(&cyc).marking_live(&m(&[1, 1])).unwrap());
        let one = ab(&[("t1", "a", "b", "b")]);
        assert!(!Oracle::new(&one).marking_live(&m(&[1, 1])).unwrap());
        let bare = ab(&[]);
        assert!(Oracle::new(&bare).marking_live(&m(&[3, 0])).unwrap());
    }

    #[test]
    fn stabilization_without_transitions() {
        let bare = ab(&[]);
        let o = Oracle::new(&bare);
        assert_eq!(o.fair_stabilization(&m(&[0, 2]), &[0, 1]).unwrap(), Some(1));
        assert_eq!(o.fair_stabilization(&m(&[1, 2]), &[0, 1]).unwrap(), None);
        assert_eq!(o.fair_stabilization(&m(&[0, 0]), &[0, 1]).unwrap(), None);
    }

    #[test]
    fn threshold_three_stabilization() {
        let net = IONet::from_names(
            &["1", "2", "3"],
            &[
                ("r1", "1", "1", "2"),
                ("r2", "2", "2", "3"),
                ("r3", "1", "3", "3"),
                ("r4", "2", "3", "3"),
            ],
        )
        .unwrap();
        let o = Oracle::new(&net);
        let labels = [0, 0, 1];
        assert_eq!(o.fair_stabilization(&m(&[3, 0, 0]), &labels).unwrap(), Some(1));
        assert_eq!(o.fair_stabilization(&m(&[2, 0, 0]), &labels).unwrap(), Some(0));
    }
}
