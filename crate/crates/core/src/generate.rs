//! Seeded random instances for differential testing.
//!
//! Distribution, for limits `(P, T, K)`:
//! - the number of places is uniform in `1..=P`, named `p0`, `p1`, ...;
//! - the number of transitions is uniform in `0..=T`, each an independent
//!   uniform triple `(src, obs, dst)` of places;
//! - each counting set is a union of one or two cubes; per place the lower
//!   bound is uniform in `0..=K` and the upper bound is `ω` with probability
//!   one half, otherwise uniform in `lower..=K`.
//!
//! The stream is ChaCha8 seeded from the `u64` seed, so instances are stable
//! across platforms and releases of this crate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::Cube;
use crate::ext::ExtNat;
use crate::net::{IONet, IOTransition, PlaceId};
use crate::set::CountingSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub places: usize,
    pub transitions: usize,
    pub norm: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            places: 5,
            transitions: 8,
            norm: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub net: IONet,
    pub from: CountingSet,
    pub to: CountingSet,
}

pub fn random_cube<R: Rng>(rng: &mut R, dim: usize, norm: u64) -> Cube {
    let mut lower = Vec::with_capacity(dim);
    let mut upper = Vec::with_capacity(dim);
    for _ in 0..dim {
        let l = rng.gen_range(0..=norm);
        lower.push(l);
        upper.push(if rng.gen_bool(0.5) {
            ExtNat::Omega
        } else {
            ExtNat::Fin(rng.gen_range(l..=norm))
        });
    }
    Cube::new(lower, upper)
}

pub fn random_set<R: Rng>(rng: &mut R, dim: usize, norm: u64) -> CountingSet {
    let k = rng.gen_range(1..=2);
    let cubes = (0..k).map(|_| random_cube(rng, dim, norm)).collect();
    CountingSet::from_cubes(dim, cubes).expect("dimensions agree")
}

pub fn random_net<R: Rng>(rng: &mut R, places: usize, transitions: usize) -> IONet {
    let names = (0..places).map(|i| format!("p{i}")).collect();
    let mut pick = || PlaceId(rng.gen_range(0..places));
    let ts = (0..transitions)
        .map(|i| {
            let (s, o, d) = (pick(), pick(), pick());
            IOTransition::new(format!("t{i}"), s, o, d)
        })
        .collect();
    IONet::new(names, ts).expect("generated net is valid")
}

/// Deterministic instance `(net, from, to)` for `seed`.
pub fn generate_random_instance(seed: u64, limits: Limits) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let places = rng.gen_range(1..=limits.places.max(1));
    let transitions = rng.gen_range(0..=limits.transitions);
    let net = random_net(&mut rng, places, transitions);
    let from = random_set(&mut rng, places, limits.norm);
    let to = random_set(&mut rng, places, limits.norm);
    Instance { net, from, to }
}
