//! Parameterized analysis of immediate observation (IO) Petri nets.
//!
//! Sets of markings are represented as counting sets, finite unions of
//! per-place intervals. For IO nets these are closed under `pre*` and
//! `post*`, which makes reachability, coverability and liveness between
//! such sets decidable symbolically ([`transform`], [`decide`]). Each
//! question is also answered by a second, explicit engine that searches
//! bounded-size witnesses ([`pruning`]), and both are checked against a
//! brute-force [`oracle`]. The [`protocol`] module applies this to IO
//! population protocols.
//!
//! ```
//! use ionet::{Cube, CountingSet, IONet, transform::post_star};
//!
//! // a token leaves `a` for `b` whenever it sees a token on `b`
//! let net = IONet::from_names(&["a", "b"], &[("t", "a", "b", "b")])?;
//! let start = CountingSet::from_cube(Cube::from_bounds(&[(2, Some(2)), (1, Some(1))]));
//! let reach = post_star(&net, &start)?;
//! assert!(reach.contains(&[0, 3]));
//! assert!(!reach.contains(&[0, 2]));
//! # Ok::<(), ionet::Error>(())
//! ```

pub mod cube;
pub mod decide;
pub mod error;
pub mod ext;
pub mod format;
pub mod generate;
pub mod net;
pub mod oracle;
pub mod protocol;
pub mod pruning;
pub mod set;
pub mod transform;

pub use cube::Cube;
pub use error::{Error, Result};
pub use ext::ExtNat;
pub use net::{classify_io, IONet, IOTransition, Marking, PlaceId, Trajectory};
pub use set::CountingSet;

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/nets.md")]
    mod nets {}
    #[doc = include_str!("../../../book/src/counting-sets.md")]
    mod counting_sets {}
    #[doc = include_str!("../../../book/src/saturation.md")]
    mod saturation {}
    #[doc = include_str!("../../../book/src/pruning.md")]
    mod pruning {}
    #[doc = include_str!("../../../book/src/deciders.md")]
    mod deciders {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/protocols.md")]
    mod protocols {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
