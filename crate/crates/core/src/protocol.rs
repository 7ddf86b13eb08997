//! Immediate observation population protocols.
//!
//! Agents are tokens and states are places: a rule `(q, o) -> (q', o)` lets
//! an agent in state `q` that observes an agent in state `o` move to `q'`.
//! Fair runs of a finite population end in a bottom component of its
//! configuration graph, so "every fair run from `C` stabilizes to `b`" is
//! the same as "every configuration reachable from `C` can reach `ST_b`",
//! where `ST_b` is the set of configurations all of whose successors are
//! `b`-consensuses. The checks below decide this for all inputs at once.

use crate::cube::Cube;
use crate::decide::{witness_into, Engine, Verdict, Witness};
use crate::error::{check_dim, Error, Result};
use crate::ext::ExtNat;
use crate::net::{IONet, IOTransition, PlaceId};
use crate::set::CountingSet;
use crate::transform::{post_star, pre_star};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub observer: String,
    pub observed: String,
    pub successor: String,
}

impl Rule {
    pub fn new(observer: &str, observed: &str, successor: &str) -> Self {
        Rule {
            observer: observer.to_string(),
            observed: observed.to_string(),
            successor: successor.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IOProtocol {
    states: Vec<String>,
    initial: Vec<String>,
    /// Output of each state, aligned with `states`.
    output: Vec<u8>,
    rules: Vec<Rule>,
}

impl IOProtocol {
    /// `output` must give a 0/1 value for every state.
    pub fn new(
        states: Vec<String>,
        initial: Vec<String>,
        output: &[(String, u8)],
        rules: Vec<Rule>,
    ) -> Result<Self> {
        let invalid = |m: String| Err(Error::InvalidProtocol(m));
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(Error::DuplicateId(s.clone()));
            }
        }
        if initial.is_empty() {
            return invalid("no initial states".into());
        }
        for (i, q) in initial.iter().enumerate() {
            if !states.contains(q) {
                return Err(Error::UnknownPlace(q.clone()));
            }
            if initial[..i].contains(q) {
                return Err(Error::DuplicateId(q.clone()));
            }
        }
        let mut out = vec![None; states.len()];
        for (q, b) in output {
            let Some(i) = states.iter().position(|s| s == q) else {
                return Err(Error::UnknownPlace(q.clone()));
            };
            if *b > 1 {
                return invalid(format!("output of `{q}` must be 0 or 1"));
            }
            if out[i].replace(*b).is_some() {
                return Err(Error::DuplicateId(q.clone()));
            }
        }
        let mut output = Vec::with_capacity(states.len());
        for (i, o) in out.into_iter().enumerate() {
            match o {
                Some(b) => output.push(b),
                None => return invalid(format!("state `{}` has no output", states[i])),
            }
        }
        for r in &rules {
            for q in [&r.observer, &r.observed, &r.successor] {
                if !states.contains(q) {
                    return Err(Error::UnknownPlace(q.clone()));
                }
            }
        }
        Ok(IOProtocol {
            states,
            initial,
            output,
            rules,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> &[String] {
        &self.initial
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Output of every state, in state order.
    pub fn outputs(&self) -> &[u8] {
        &self.output
    }

    pub fn output_of(&self, state: &str) -> Option<u8> {
        self.index(state).map(|i| self.output[i])
    }

    fn index(&self, state: &str) -> Option<usize> {
        self.states.iter().position(|s| s == state)
    }

    /// Indices of the initial states, in the order of `initial`.
    pub fn initial_indices(&self) -> Vec<usize> {
        self.initial
            .iter()
            .map(|q| self.index(q).expect("validated"))
            .collect()
    }

    /// Rules that leave the observer where it is and so never change a
    /// configuration.
    pub fn warnings(&self) -> Vec<String> {
        self.rules
            .iter()
            .enumerate()
            .filter(|(_, r)| r.observer == r.successor)
            .map(|(i, r)| format!("rule {i} ({}, {}) -> ({}, {}) is a no-op", r.observer, r.observed, r.successor, r.observed))
            .collect()
    }

    /// One place per state, one transition `r<i>` per rule. Place `i` is
    /// state `i`.
    pub fn to_net(&self) -> Result<(IONet, Vec<PlaceId>)> {
        let idx = |q: &str| PlaceId(self.index(q).expect("validated"));
        let ts = self
            .rules
            .iter()
            .enumerate()
            .map(|(i, r)| {
                IOTransition::new(format!("r{i}"), idx(&r.observer), idx(&r.observed), idx(&r.successor))
            })
            .collect();
        let net = IONet::new(self.states.clone(), ts)?;
        let map = (0..self.states.len()).map(PlaceId).collect();
        Ok((net, map))
    }

    /// Input configurations with at least `min_agents` agents: only initial
    /// states populated.
    pub fn initial_set(&self, min_agents: u64) -> CountingSet {
        let n = self.states.len();
        let init = self.initial_indices();
        let mut base = Cube::new(vec![0; n], vec![ExtNat::Fin(0); n]);
        for &i in &init {
            base.set_bounds(i, 0, ExtNat::Omega);
        }
        if min_agents == 0 {
            return CountingSet::from_cube(base);
        }
        // {x : Σx >= m} is the union of the upward closures of the vectors
        // with sum exactly m
        let mut cubes = Vec::new();
        let mut split = vec![0u64; init.len()];
        compositions(min_agents, 0, &mut split, &mut |v| {
            let mut c = base.clone();
            for (k, &i) in init.iter().enumerate() {
                c.set_bounds(i, v[k], ExtNat::Omega);
            }
            cubes.push(c);
        });
        CountingSet::from_cubes(n, cubes).expect("dimensions agree").normalize()
    }

    /// `Con_b`: no agent in a state with output `1 - b`.
    pub fn consensus_cube(&self, b: u8) -> Cube {
        let n = self.states.len();
        let mut c = Cube::universe(n);
        for (i, &o) in self.output.iter().enumerate() {
            if o != b {
                c.set_bounds(i, 0, ExtNat::Fin(0));
            }
        }
        c
    }

    /// `ST_b`: configurations from which only `b`-consensuses are reachable.
    pub fn stable_consensus_set(&self, b: u8) -> Result<CountingSet> {
        let (net, _) = self.to_net()?;
        let con = CountingSet::from_cube(self.consensus_cube(b));
        Ok(pre_star(&net, &con.complement())?.complement())
    }
}

fn compositions(remaining: u64, k: usize, split: &mut Vec<u64>, emit: &mut impl FnMut(&[u64])) {
    if k + 1 == split.len() {
        split[k] = remaining;
        emit(split);
        return;
    }
    for v in 0..=remaining {
        split[k] = v;
        compositions(remaining - v, k + 1, split, emit);
    }
}

/// The predicate a protocol should compute: inputs in `set` (a counting set
/// over the initial states, in the protocol's `initial` order) map to 1,
/// all others to 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateSpec {
    pub set: CountingSet,
}

impl PredicateSpec {
    pub fn new(p: &IOProtocol, set: CountingSet) -> Result<Self> {
        check_dim(p.initial.len(), set.dim())?;
        Ok(PredicateSpec { set })
    }

    /// Lift to all states, leaving non-initial states unconstrained.
    pub fn extend(&self, p: &IOProtocol) -> CountingSet {
        let n = p.states.len();
        let init = p.initial_indices();
        let cubes = self
            .set
            .cubes()
            .iter()
            .map(|c| {
                let mut big = Cube::universe(n);
                for (k, &i) in init.iter().enumerate() {
                    let (l, u) = c.bounds(k);
                    big.set_bounds(i, l, u);
                }
                big
            })
            .collect();
        CountingSet::from_cubes(n, cubes).expect("dimensions agree")
    }

    /// Does the predicate hold on this input (counts per initial state)?
    pub fn holds(&self, input: &[u64]) -> bool {
        self.set.contains(input)
    }
}

/// Inputs with at least `min_agents` agents, split by predicate value.
pub fn inputs_by_value(p: &IOProtocol, phi: &PredicateSpec, min_agents: u64) -> Result<[CountingSet; 2]> {
    let init = p.initial_set(min_agents);
    let yes = init.intersect(&phi.extend(p))?;
    let no = init.difference(&phi.extend(p))?;
    Ok([no, yes])
}

/// Does every fair run from every input with at least `min_agents` agents
/// stabilize to the predicate's value? A negative verdict carries a
/// trajectory from an input to a configuration that can no longer reach
/// the correct stable consensus.
pub fn check_correct(p: &IOProtocol, phi: &PredicateSpec, min_agents: u64) -> Result<Verdict> {
    check_dim(p.initial.len(), phi.set.dim())?;
    let (net, _) = p.to_net()?;
    let inputs = inputs_by_value(p, phi, min_agents)?;
    for b in [0u8, 1] {
        let input = &inputs[b as usize];
        let reach = post_star(&net, input)?;
        let can_stabilize = pre_star(&net, &p.stable_consensus_set(b)?)?;
        let bad = reach.difference(&can_stabilize)?;
        if let Some(target) = bad.least_member() {
            let traj = witness_into(&net, input, &target)?;
            let mut v = Verdict::new(false, Engine::Symbolic);
            v.witness = Some(Witness::Trajectory(traj));
            v.stat("expected_output", u64::from(b));
            return Ok(v);
        }
    }
    Ok(Verdict::new(true, Engine::Symbolic))
}

/// Does every fair run from every input stabilize to some consensus, the
/// same one for all runs from that input?
///
/// Fails if (i) some input can reach both `ST_0` and `ST_1` (the witness is
/// that input, as a marking), or (ii) some configuration reachable from an
/// input can reach neither (the witness is a trajectory to it).
pub fn check_well_specified(p: &IOProtocol, min_agents: u64) -> Result<Verdict> {
    let (net, _) = p.to_net()?;
    let init = p.initial_set(min_agents);
    let to0 = pre_star(&net, &p.stable_consensus_set(0)?)?;
    let to1 = pre_star(&net, &p.stable_consensus_set(1)?)?;

    let ambiguous = init.intersect(&to0)?.intersect(&to1)?;
    if let Some(input) = ambiguous.least_member() {
        let mut v = Verdict::new(false, Engine::Symbolic);
        v.witness = Some(Witness::Marking(input));
        v.stat("violation", 1);
        return Ok(v);
    }
    let stuck = post_star(&net, &init)?.difference(&to0.union(&to1)?)?;
    if let Some(target) = stuck.least_member() {
        let traj = witness_into(&net, &init, &target)?;
        let mut v = Verdict::new(false, Engine::Symbolic);
        v.witness = Some(Witness::Trajectory(traj));
        v.stat("violation", 2);
        return Ok(v);
    }
    Ok(Verdict::new(true, Engine::Symbolic))
}

/// The threshold protocol "at least 3 agents": states `1`, `2`, `3`, all
/// agents start in `1`, and only state `3` outputs 1.
pub fn threshold_three() -> IOProtocol {
    let s = |x: &str| x.to_string();
    IOProtocol::new(
        vec![s("1"), s("2"), s("3")],
        vec![s("1")],
        &[(s("1"), 0), (s("2"), 0), (s("3"), 1)],
        vec![
            Rule::new("1", "1", "2"),
            Rule::new("2", "2", "3"),
            Rule::new("1", "3", "3"),
            Rule::new("2", "3", "3"),
        ],
    )
    .expect("valid protocol")
}
