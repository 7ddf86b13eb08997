//! JSON documents.
//!
//! Every document is a JSON object. Top-level documents may carry
//! `"kind"` and `"version"` keys; when present they must match the expected
//! kind and [`VERSION`]. Serialization always writes both. Unknown keys are
//! rejected.
//!
//! **`null` encodes ω.** A cube bound `[1, null]` is the interval `[1, ω]`.
//! Places missing from a cube's `bounds` default to `[0, null]`; places
//! missing from a marking default to 0.
//!
//! Output is deterministic: object keys are sorted, arrays keep the
//! in-memory order.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::cube::Cube;
use crate::decide::{Engine, Verdict, Witness};
use crate::error::Error;
use crate::ext::ExtNat;
use crate::net::{IONet, IOTransition, Marking, Trajectory};
use crate::protocol::{IOProtocol, PredicateSpec, Rule};
use crate::set::CountingSet;

pub const VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Net,
    Cube,
    CountingSet,
    Trajectory,
    Protocol,
    Predicate,
    Verdict,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Net => "net",
            Kind::Cube => "cube",
            Kind::CountingSet => "counting-set",
            Kind::Trajectory => "trajectory",
            Kind::Protocol => "protocol",
            Kind::Predicate => "predicate",
            Kind::Verdict => "verdict",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("expected a `{expected}` document, found `{found}`")]
    WrongKind { expected: &'static str, found: String },
    #[error("unsupported format version `{0}` (expected `{VERSION}`)")]
    Version(String),
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("invalid document: {0}")]
    Invalid(String),
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep just the message
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        ParseError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

impl From<Error> for ParseError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownPlace(p) => ParseError::UnknownPlace(p),
            Error::UnknownTransition(t) => ParseError::UnknownTransition(t),
            Error::DuplicateId(d) => ParseError::DuplicateId(d),
            other => ParseError::Invalid(other.to_string()),
        }
    }
}

pub type ParseResult<T> = std::result::Result<T, ParseError>;

// ---- raw shapes ----

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNet {
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    version: Option<String>,
    places: Vec<String>,
    transitions: Vec<RawTransition>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransition {
    id: String,
    src: String,
    obs: String,
    dst: String,
}

type RawBounds = BTreeMap<String, (u64, Option<u64>)>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCubeDoc {
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    version: Option<String>,
    #[serde(default)]
    bounds: RawBounds,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCube {
    #[serde(default)]
    bounds: RawBounds,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSet {
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    version: Option<String>,
    cubes: Vec<RawCube>,
}

type RawMarking = BTreeMap<String, u64>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrajectory {
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    version: Option<String>,
    start: RawMarking,
    steps: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProtocol {
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    version: Option<String>,
    states: Vec<String>,
    initial: Vec<String>,
    output: BTreeMap<String, u8>,
    rules: Vec<RawRule>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    observer: String,
    observed: String,
    successor: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVerdict {
    #[serde(default)]
    kind: Option<String>,
    #[serde(default)]
    version: Option<String>,
    answer: bool,
    engine: String,
    witness: Option<RawWitness>,
    #[serde(default)]
    stats: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawWitness {
    Trajectory {
        start: RawMarking,
        steps: Vec<String>,
    },
    Marking {
        marking: RawMarking,
    },
}

// ---- helpers ----

fn check_header(kind: Kind, found: &Option<String>, version: &Option<String>) -> ParseResult<()> {
    if let Some(k) = found {
        if k != kind.as_str() {
            return Err(ParseError::WrongKind {
                expected: kind.as_str(),
                found: k.clone(),
            });
        }
    }
    match version {
        Some(v) if v != VERSION => Err(ParseError::Version(v.clone())),
        _ => Ok(()),
    }
}

fn header(kind: Kind) -> (Option<String>, Option<String>) {
    (Some(kind.as_str().to_string()), Some(VERSION.to_string()))
}

fn parse_raw<T: DeserializeOwned>(text: &str) -> ParseResult<T> {
    Ok(serde_json::from_str(text)?)
}

fn emit<T: Serialize>(raw: &T) -> String {
    // going through Value sorts object keys
    let v: Value = serde_json::to_value(raw).expect("documents serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("documents serialize");
    s.push('\n');
    s
}

fn index_of(places: &[String], name: &str) -> ParseResult<usize> {
    places
        .iter()
        .position(|p| p == name)
        .ok_or_else(|| ParseError::UnknownPlace(name.to_string()))
}

fn cube_from_raw(bounds: &RawBounds, places: &[String]) -> ParseResult<Cube> {
    let mut c = Cube::universe(places.len());
    for (name, &(l, u)) in bounds {
        let i = index_of(places, name)?;
        c.set_bounds(i, l, u.map_or(ExtNat::Omega, ExtNat::Fin));
    }
    Ok(c)
}

fn cube_to_raw(c: &Cube, places: &[String]) -> RawBounds {
    places
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let (l, u) = c.bounds(i);
            (name.clone(), (l, u.finite()))
        })
        .collect()
}

fn marking_from_raw(raw: &RawMarking, places: &[String]) -> ParseResult<Marking> {
    let mut counts = vec![0; places.len()];
    for (name, &k) in raw {
        counts[index_of(places, name)?] = k;
    }
    Ok(Marking::new(counts))
}

fn marking_to_raw(m: &Marking, places: &[String]) -> RawMarking {
    places.iter().cloned().zip(m.counts().iter().copied()).collect()
}

fn check_dim(places: &[String], found: usize) {
    assert_eq!(places.len(), found, "value does not match the place list");
}

fn trajectory_from_raw(start: &RawMarking, steps: &[String], net: &IONet) -> ParseResult<Trajectory> {
    let start = marking_from_raw(start, net.places())?;
    for s in steps {
        if net.transition(s).is_none() {
            return Err(ParseError::UnknownTransition(s.clone()));
        }
    }
    Ok(Trajectory::new(start, steps.to_vec()))
}

// ---- nets ----

pub fn parse_net(text: &str) -> ParseResult<IONet> {
    let raw: RawNet = parse_raw(text)?;
    check_header(Kind::Net, &raw.kind, &raw.version)?;
    let p = |name: &str| index_of(&raw.places, name).map(crate::net::PlaceId);
    let mut ts = Vec::with_capacity(raw.transitions.len());
    for t in &raw.transitions {
        ts.push(IOTransition::new(t.id.clone(), p(&t.src)?, p(&t.obs)?, p(&t.dst)?));
    }
    Ok(IONet::new(raw.places, ts)?)
}

pub fn net_to_json(net: &IONet) -> String {
    let (kind, version) = header(Kind::Net);
    emit(&RawNet {
        kind,
        version,
        places: net.places().to_vec(),
        transitions: net
            .transitions()
            .iter()
            .map(|t| RawTransition {
                id: t.id.clone(),
                src: net.place_name(t.src).to_string(),
                obs: net.place_name(t.obs).to_string(),
                dst: net.place_name(t.dst).to_string(),
            })
            .collect(),
    })
}

// ---- cubes and counting sets ----

/// A cube over `places`; unnamed places get `[0, ω]`.
pub fn parse_cube(text: &str, places: &[String]) -> ParseResult<Cube> {
    let raw: RawCubeDoc = parse_raw(text)?;
    check_header(Kind::Cube, &raw.kind, &raw.version)?;
    cube_from_raw(&raw.bounds, places)
}

pub fn cube_to_json(c: &Cube, places: &[String]) -> String {
    check_dim(places, c.dim());
    let (kind, version) = header(Kind::Cube);
    emit(&RawCubeDoc {
        kind,
        version,
        bounds: cube_to_raw(c, places),
    })
}

/// Accepts a counting-set document, or a single cube document standing for
/// the one-cube set.
pub fn parse_set(text: &str, places: &[String]) -> ParseResult<CountingSet> {
    parse_set_as(Kind::CountingSet, text, places)
}

fn parse_set_as(kind: Kind, text: &str, places: &[String]) -> ParseResult<CountingSet> {
    let value: Value = parse_raw(text)?;
    let is_cube = value.get("bounds").is_some()
        || value.get("kind").and_then(Value::as_str) == Some(Kind::Cube.as_str());
    if is_cube {
        return Ok(CountingSet::from_cube(parse_cube(text, places)?));
    }
    let raw: RawSet = parse_raw(text)?;
    check_header(kind, &raw.kind, &raw.version)?;
    let cubes = raw
        .cubes
        .iter()
        .map(|c| cube_from_raw(&c.bounds, places))
        .collect::<ParseResult<Vec<_>>>()?;
    Ok(CountingSet::from_cubes(places.len(), cubes)?)
}

pub fn set_to_json(s: &CountingSet, places: &[String]) -> String {
    set_to_json_as(Kind::CountingSet, s, places)
}

fn set_to_json_as(kind: Kind, s: &CountingSet, places: &[String]) -> String {
    check_dim(places, s.dim());
    let (kind, version) = header(kind);
    emit(&RawSet {
        kind,
        version,
        cubes: s
            .cubes()
            .iter()
            .map(|c| RawCube {
                bounds: cube_to_raw(c, places),
            })
            .collect(),
    })
}

// ---- markings and trajectories ----

/// A bare marking object such as `{"a": 2, "b": 1}`.
pub fn parse_marking(text: &str, places: &[String]) -> ParseResult<Marking> {
    let raw: RawMarking = parse_raw(text)?;
    marking_from_raw(&raw, places)
}

pub fn marking_to_json(m: &Marking, places: &[String]) -> String {
    check_dim(places, m.len());
    emit(&marking_to_raw(m, places))
}

/// Unknown transition ids are rejected here; whether the steps can actually
/// fire is left to [`IONet::replay`].
pub fn parse_trajectory(text: &str, net: &IONet) -> ParseResult<Trajectory> {
    let raw: RawTrajectory = parse_raw(text)?;
    check_header(Kind::Trajectory, &raw.kind, &raw.version)?;
    trajectory_from_raw(&raw.start, &raw.steps, net)
}

pub fn trajectory_to_json(t: &Trajectory, places: &[String]) -> String {
    check_dim(places, t.start.len());
    let (kind, version) = header(Kind::Trajectory);
    emit(&RawTrajectory {
        kind,
        version,
        start: marking_to_raw(&t.start, places),
        steps: t.steps.clone(),
    })
}

// ---- protocols and predicates ----

pub fn parse_protocol(text: &str) -> ParseResult<IOProtocol> {
    let raw: RawProtocol = parse_raw(text)?;
    check_header(Kind::Protocol, &raw.kind, &raw.version)?;
    let output: Vec<(String, u8)> = raw.output.into_iter().collect();
    let rules = raw
        .rules
        .iter()
        .map(|r| Rule::new(&r.observer, &r.observed, &r.successor))
        .collect();
    Ok(IOProtocol::new(raw.states, raw.initial, &output, rules)?)
}

pub fn protocol_to_json(p: &IOProtocol) -> String {
    let (kind, version) = header(Kind::Protocol);
    emit(&RawProtocol {
        kind,
        version,
        states: p.states().to_vec(),
        initial: p.initial().to_vec(),
        output: p.states().iter().cloned().zip(p.outputs().iter().copied()).collect(),
        rules: p
            .rules()
            .iter()
            .map(|r| RawRule {
                observer: r.observer.clone(),
                observed: r.observed.clone(),
                successor: r.successor.clone(),
            })
            .collect(),
    })
}

/// A counting set whose places are the protocol's initial states.
pub fn parse_predicate(text: &str, p: &IOProtocol) -> ParseResult<PredicateSpec> {
    let set = parse_set_as(Kind::Predicate, text, p.initial())?;
    Ok(PredicateSpec::new(p, set)?)
}

pub fn predicate_to_json(phi: &PredicateSpec, p: &IOProtocol) -> String {
    set_to_json_as(Kind::Predicate, &phi.set, p.initial())
}

// ---- verdicts ----

pub fn parse_verdict(text: &str, net: &IONet) -> ParseResult<Verdict> {
    let raw: RawVerdict = parse_raw(text)?;
    check_header(Kind::Verdict, &raw.kind, &raw.version)?;
    let engine = match raw.engine.as_str() {
        "symbolic" => Engine::Symbolic,
        "explicit" => Engine::Explicit,
        other => return Err(ParseError::Invalid(format!("unknown engine `{other}`"))),
    };
    let witness = match &raw.witness {
        None => None,
        Some(RawWitness::Trajectory { start, steps }) => {
            Some(Witness::Trajectory(trajectory_from_raw(start, steps, net)?))
        }
        Some(RawWitness::Marking { marking }) => {
            Some(Witness::Marking(marking_from_raw(marking, net.places())?))
        }
    };
    Ok(Verdict {
        answer: raw.answer,
        engine,
        witness,
        stats: raw.stats,
    })
}

/// Witness markings and trajectories are written with `net`'s place names.
pub fn verdict_to_json(v: &Verdict, net: &IONet) -> String {
    let places = net.places();
    let (kind, version) = header(Kind::Verdict);
    let witness = v.witness.as_ref().map(|w| match w {
        Witness::Trajectory(t) => RawWitness::Trajectory {
            start: marking_to_raw(&t.start, places),
            steps: t.steps.clone(),
        },
        Witness::Marking(m) => RawWitness::Marking {
            marking: marking_to_raw(m, places),
        },
    });
    emit(&RawVerdict {
        kind,
        version,
        answer: v.answer,
        engine: v.engine.as_str().to_string(),
        witness,
        stats: v.stats.clone(),
    })
}
