#![allow(dead_code)]

use ionet::protocol::{IOProtocol, Rule};
use ionet::{Cube, CountingSet, ExtNat, IONet, IOTransition, Marking, PlaceId};
use proptest::prelude::*;

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

pub fn cube(dim: usize, k: u64) -> impl Strategy<Value = Cube> {
    proptest::collection::vec((0..=k, proptest::option::of(0..=k)), dim).prop_map(|bs| {
        let lower = bs.iter().map(|&(l, _)| l).collect();
        // upper below lower is allowed: empty cubes must be handled too
        let upper = bs.iter().map(|&(_, u)| u.map_or(ExtNat::Omega, ExtNat::Fin)).collect();
        Cube::new(lower, upper)
    })
}

pub fn set(dim: usize, k: u64) -> impl Strategy<Value = CountingSet> {
    proptest::collection::vec(cube(dim, k), 0..=3)
        .prop_map(move |cs| CountingSet::from_cubes(dim, cs).unwrap())
}

pub fn marking(dim: usize, k: u64) -> impl Strategy<Value = Marking> {
    proptest::collection::vec(0..=k, dim).prop_map(Marking::new)
}

pub fn net(dim: usize, max_t: usize) -> impl Strategy<Value = IONet> {
    proptest::collection::vec((0..dim, 0..dim, 0..dim), 0..=max_t).prop_map(move |ts| {
        let ts = ts
            .into_iter()
            .enumerate()
            .map(|(i, (s, o, d))| IOTransition::new(format!("t{i}"), PlaceId(s), PlaceId(o), PlaceId(d)))
            .collect();
        IONet::new(names(dim), ts).unwrap()
    })
}

/// Every marking with all counts at most `k`.
pub fn box_markings(dim: usize, k: u64) -> Vec<Marking> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u64>| (0..=k).map(move |x| [v.clone(), vec![x]].concat()))
            .collect();
    }
    out.into_iter().map(Marking::new).collect()
}

pub fn protocol() -> impl Strategy<Value = IOProtocol> {
    (1..=4usize)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(0..=1u8, n),
                proptest::collection::vec((0..n, 0..n, 0..n), 0..=5),
            )
        })
        .prop_map(|(n, init, out, rules)| {
            let names: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
            let mut initial: Vec<String> = (0..n).filter(|&i| init[i]).map(|i| names[i].clone()).collect();
            if initial.is_empty() {
                initial.push(names[0].clone());
            }
            let output: Vec<(String, u8)> = names.iter().cloned().zip(out).collect();
            let rules = rules
                .into_iter()
                .map(|(a, b, c)| Rule::new(&names[a], &names[b], &names[c]))
                .collect();
            IOProtocol::new(names, initial, &output, rules).unwrap()
        })
}
