//! Cube reachability, coverability and liveness, each decided by a
//! symbolic engine (saturation) and, where it applies, an explicit one
//! (bounded witness search).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::cube::Cube;
use crate::error::{check_dim, Error, Result};
use crate::net::{IONet, Marking, Trajectory};
use crate::pruning::{search, search_total, SearchOptions, SearchOutcome};
use crate::set::CountingSet;
use crate::transform::{saturate, Direction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    Symbolic,
    Explicit,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Symbolic => "symbolic",
            Engine::Explicit => "explicit",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which engine(s) to run. `Both` fails with [`Error::Invariant`] when the
/// engines disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EngineChoice {
    #[default]
    Symbolic,
    Explicit,
    Both,
}

impl FromStr for EngineChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "symbolic" => Ok(EngineChoice::Symbolic),
            "explicit" => Ok(EngineChoice::Explicit),
            "both" => Ok(EngineChoice::Both),
            other => Err(format!("unknown engine `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quantifier {
    /// Every marking of the set is live.
    #[default]
    All,
    /// Some marking of the set is live.
    Exists,
}

impl FromStr for Quantifier {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all" => Ok(Quantifier::All),
            "exists" => Ok(Quantifier::Exists),
            other => Err(format!("unknown quantifier `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Trajectory(Trajectory),
    Marking(Marking),
}

/// The answer to one query plus the evidence behind it.
///
/// Positive existential answers carry a replayable witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub answer: bool,
    pub engine: Engine,
    pub witness: Option<Witness>,
    /// Deterministic counters only; nothing time-dependent.
    pub stats: BTreeMap<String, u64>,
}

impl Verdict {
    pub fn new(answer: bool, engine: Engine) -> Self {
        Verdict {
            answer,
            engine,
            witness: None,
            stats: BTreeMap::new(),
        }
    }

    pub fn trajectory(&self) -> Option<&Trajectory> {
        match &self.witness {
            Some(Witness::Trajectory(t)) => Some(t),
            _ => None,
        }
    }

    pub fn stat(&mut self, key: &str, value: u64) {
        self.stats.insert(key.to_string(), value);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QueryOptions {
    pub engine: EngineChoice,
    /// Witness-bound override for the explicit engine.
    pub bound: Option<u64>,
}

/// Does some marking of `from` reach some marking of `to`?
pub fn cube_reachable(
    net: &IONet,
    from: &CountingSet,
    to: &CountingSet,
    opts: QueryOptions,
) -> Result<Verdict> {
    check_dim(net.num_places(), from.dim())?;
    check_dim(net.num_places(), to.dim())?;
    match opts.engine {
        EngineChoice::Symbolic => symbolic_reachable(net, from, to),
        EngineChoice::Explicit => explicit_reachable(net, from, to, opts.bound),
        EngineChoice::Both => {
            let sym = symbolic_reachable(net, from, to)?;
            let exp = explicit_reachable(net, from, to, opts.bound)?;
            if sym.answer != exp.answer {
                return Err(Error::Invariant(format!(
                    "engines disagree: symbolic says {}, explicit says {}",
                    sym.answer, exp.answer
                )));
            }
            let mut v = sym;
            for (k, x) in exp.stats {
                v.stats.insert(format!("explicit_{k}"), x);
            }
            Ok(v)
        }
    }
}

/// Does some marking of `from` reach a marking covering some marking of
/// `to`? Reachability into the upward closure of `to`.
pub fn cube_coverable(
    net: &IONet,
    from: &CountingSet,
    to: &CountingSet,
    opts: QueryOptions,
) -> Result<Verdict> {
    check_dim(net.num_places(), to.dim())?;
    cube_reachable(net, from, &to.upward_closure(), opts)
}

fn symbolic_reachable(net: &IONet, from: &CountingSet, to: &CountingSet) -> Result<Verdict> {
    let (post, stats) = saturate(net, from, Direction::Forward, None)?;
    let hit = post.intersect(to)?;
    let answer = !hit.is_empty();
    if cfg!(debug_assertions) {
        let pre = crate::transform::pre_star(net, to)?;
        let back = !from.intersect(&pre)?.is_empty();
        if back != answer {
            return Err(Error::Invariant(format!(
                "post* route says {answer}, pre* route says {back}"
            )));
        }
    }
    let mut v = Verdict::new(answer, Engine::Symbolic);
    v.stat("cubes", stats.cubes_added as u64);
    v.stat("max_norm", stats.max_norm);
    if answer {
        // prefer the empty trajectory when the sets already meet
        let traj = match from.intersect(to)?.least_member() {
            Some(m) => Trajectory::empty(m),
            None => witness_into(net, from, &hit.least_member().expect("nonempty"))?,
        };
        v.witness = Some(Witness::Trajectory(traj));
    }
    Ok(v)
}

/// A trajectory from some member of `from` to `target`, which must be in
/// `post*(from)`. Tokens are conserved, so only starts with the target's
/// total need searching.
pub(crate) fn witness_into(net: &IONet, from: &CountingSet, target: &Marking) -> Result<Trajectory> {
    let point = Cube::point(target);
    for a in from.cubes() {
        let (found, _) = search_total(
            net,
            a,
            &point,
            target.total(),
            SearchOptions::default().state_limit,
        )?;
        if let Some(t) = found {
            return Ok(t);
        }
    }
    Err(Error::Invariant(format!(
        "symbolic engine reports {target} reachable but no trajectory exists"
    )))
}

fn explicit_reachable(
    net: &IONet,
    from: &CountingSet,
    to: &CountingSet,
    bound: Option<u64>,
) -> Result<Verdict> {
    let opts = SearchOptions {
        bound,
        ..SearchOptions::default()
    };
    let mut visited = 0;
    let mut max_bound = 0;
    for a in from.cubes().iter().filter(|c| !c.is_empty()) {
        for b in to.cubes().iter().filter(|c| !c.is_empty()) {
            let (outcome, stats) = search(net, a, b, opts)?;
            visited += stats.states_visited;
            max_bound = max_bound.max(stats.bound);
            if let SearchOutcome::Found(t) = outcome {
                let mut v = Verdict::new(true, Engine::Explicit);
                v.witness = Some(Witness::Trajectory(t));
                v.stat("states", visited);
                v.stat("bound", max_bound);
                return Ok(v);
            }
        }
    }
    let mut v = Verdict::new(false, Engine::Explicit);
    v.stat("states", visited);
    v.stat("bound", max_bound);
    if bound.is_some() {
        v.stat("bound_overridden", 1);
    }
    Ok(v)
}

/// `{M : M enables t}` for each transition.
pub fn enabled_cube(net: &IONet, t: &crate::net::IOTransition) -> Cube {
    let mut c = Cube::universe(net.num_places());
    if t.src == t.obs {
        c.require_at_least(t.src.index(), 2);
    } else {
        c.require_at_least(t.src.index(), 1);
        c.require_at_least(t.obs.index(), 1);
    }
    c
}

/// Markings that are not live: those that can reach a marking from which
/// some transition is never enabled again.
pub fn not_live_set(net: &IONet) -> Result<CountingSet> {
    let n = net.num_places();
    let mut not_live = CountingSet::empty(n);
    for t in net.transitions() {
        let can_enable = crate::transform::pre_star(net, &CountingSet::from_cube(enabled_cube(net, t)))?;
        let dead = can_enable.complement();
        let doomed = crate::transform::pre_star(net, &dead)?;
        not_live = not_live.union(&doomed)?;
    }
    Ok(not_live)
}

/// Are all (or some) markings of `s` live?
///
/// A negative `All` verdict carries a least-total non-live member; a
/// positive `Exists` verdict carries a least-total live member.
pub fn cube_live(net: &IONet, s: &CountingSet, quantifier: Quantifier) -> Result<Verdict> {
    check_dim(net.num_places(), s.dim())?;
    let not_live = not_live_set(net)?;
    let mut v = match quantifier {
        Quantifier::All => {
            let bad = s.intersect(&not_live)?;
            let mut v = Verdict::new(bad.is_empty(), Engine::Symbolic);
            v.witness = bad.least_member().map(Witness::Marking);
            v
        }
        Quantifier::Exists => {
            let good = s.difference(&not_live)?;
            let mut v = Verdict::new(!good.is_empty(), Engine::Symbolic);
            v.witness = good.least_member().map(Witness::Marking);
            v
        }
    };
    v.stat("not_live_cubes", not_live.cubes().len() as u64);
    Ok(v)
}
