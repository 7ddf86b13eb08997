//! Predecessor and successor images of counting sets under an IO net.
//!
//! Single steps map a cube to a cube: firing `(src, obs, dst)` translates
//! the marking by `dst - src` after intersecting with the enabling
//! condition. The reflexive-transitive closures `pre*` and `post*` are
//! computed by worklist saturation. Plain iteration of single steps does not
//! terminate in general: pumping tokens out of a place with upper bound `ω`
//! into a place with a finite bound produces the infinite chain
//! `[k, k+u]`, `[k+1, k+u+1]`, ... . Saturation therefore works with the
//! union over `j >= 1` of the images of `t^j`, which is again a finite union
//! of cubes and is computed in closed form by [`post_pump`] and
//! [`pre_pump`].
//!
//! A generated cube is discarded when the union of the cubes found so far
//! already includes it, and cubes included in a newly added cube are
//! retired from the worklist.

use std::collections::VecDeque;

use crate::cube::Cube;
use crate::error::{check_dim, Error, Result};
use crate::ext::ExtNat;
use crate::net::{IONet, IOTransition};
use crate::set::{covered, CountingSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Backward,
    Forward,
}

fn empty_like(c: &Cube) -> Cube {
    let mut e = c.clone();
    if e.dim() == 0 {
        return e;
    }
    e.set_bounds(0, 1, ExtNat::Fin(0));
    e
}

fn apply_enabling(c: &mut Cube, t: &IOTransition) {
    let (s, o) = (t.src.index(), t.obs.index());
    if s == o {
        c.require_at_least(s, 2);
    } else {
        c.require_at_least(s, 1);
        c.require_at_least(o, 1);
    }
}

/// `{ M : M enables t and fire(M, t) ∈ c }`.
pub fn pre_step_t(net: &IONet, c: &Cube, t: &IOTransition) -> Result<Cube> {
    check_dim(net.num_places(), c.dim())?;
    Ok(pre_image(c, t))
}

/// `{ fire(M, t) : M ∈ c, M enables t }`.
pub fn post_step_t(net: &IONet, c: &Cube, t: &IOTransition) -> Result<Cube> {
    check_dim(net.num_places(), c.dim())?;
    Ok(post_image(c, t))
}

fn pre_image(c: &Cube, t: &IOTransition) -> Cube {
    let (s, d) = (t.src.index(), t.dst.index());
    let mut r = c.clone();
    if s != d {
        let (ls, us) = c.bounds(s);
        r.set_bounds(s, ls + 1, us + 1);
        let (ld, ud) = c.bounds(d);
        match ud.checked_sub(1) {
            Some(u) => r.set_bounds(d, ld.saturating_sub(1), u),
            None => return empty_like(c),
        }
    }
    apply_enabling(&mut r, t);
    r
}

fn post_image(c: &Cube, t: &IOTransition) -> Cube {
    let (s, d) = (t.src.index(), t.dst.index());
    let mut r = c.clone();
    apply_enabling(&mut r, t);
    if r.is_empty() || s == d {
        return r;
    }
    let (ls, us) = r.bounds(s);
    r.set_bounds(s, ls - 1, us - 1);
    let (ld, ud) = r.bounds(d);
    r.set_bounds(d, ld + 1, ud + 1);
    r
}

/// One-step predecessors of a counting set, over all transitions.
pub fn pre_step(net: &IONet, s: &CountingSet) -> Result<CountingSet> {
    step(net, s, Direction::Backward)
}

/// One-step successors of a counting set, over all transitions.
pub fn post_step(net: &IONet, s: &CountingSet) -> Result<CountingSet> {
    step(net, s, Direction::Forward)
}

fn step(net: &IONet, s: &CountingSet, dir: Direction) -> Result<CountingSet> {
    check_dim(net.num_places(), s.dim())?;
    let mut out = Vec::new();
    for c in s.cubes() {
        for t in net.transitions() {
            let img = match dir {
                Direction::Backward => pre_image(c, t),
                Direction::Forward => post_image(c, t),
            };
            if !img.is_empty() {
                out.push(img);
            }
        }
    }
    Ok(CountingSet::from_cubes(s.dim(), out)?.normalize())
}

/// Union over `j >= 1` of the `t^j`-successors of `c`, for `src != dst`.
///
/// Firing `t` `j` times in a row needs `j` tokens on `src` (one more when
/// `src == obs`) and the observer throughout. The `j`-th image is
/// `src ∈ [max(a, j+δ) - j, b - j]`, `dst ∈ [a' + j, b' + j]`. With
/// `b = ω`, every `j >= J = max(a - δ, 1)` gives the same `src` interval
/// `[δ, ω]` and the `dst` intervals chain together into `[a' + J, ω]`.
pub fn post_pump(c: &Cube, t: &IOTransition) -> Vec<Cube> {
    let (s, o, d) = (t.src.index(), t.obs.index(), t.dst.index());
    debug_assert_ne!(s, d);
    let delta = u64::from(o == s);
    let mut e = c.clone();
    if o != s {
        e.require_at_least(o, 1);
    }
    if e.is_empty() {
        return Vec::new();
    }
    let (a_s, b_s) = e.bounds(s);
    let (a_d, b_d) = e.bounds(d);
    let nth = |j: u64| -> Option<Cube> {
        let lo = a_s.max(j + delta);
        if !b_s.admits(lo) {
            return None;
        }
        let mut r = e.clone();
        r.set_bounds(s, lo - j, b_s - j);
        r.set_bounds(d, a_d + j, b_d + j);
        Some(r)
    };
    match b_s {
        ExtNat::Fin(b) => (1..=b.saturating_sub(delta)).filter_map(nth).collect(),
        ExtNat::Omega => {
            let big_j = a_s.saturating_sub(delta).max(1);
            let mut out: Vec<Cube> = (1..big_j).filter_map(nth).collect();
            let mut limit = e.clone();
            limit.set_bounds(s, delta, ExtNat::Omega);
            limit.set_bounds(d, a_d + big_j, ExtNat::Omega);
            out.push(limit);
            out
        }
    }
}

/// Union over `j >= 1` of the `t^j`-predecessors of `c`, for `src != dst`.
///
/// The `j`-th preimage is `src ∈ [max(l, δ) + j, u + j]`,
/// `dst ∈ [max(l' - j, ε), u' - j]` with `δ = [obs == src]` and
/// `ε = [obs == dst]`. With `u' = ω`, every `j >= J = max(l' - ε, 1)` gives
/// `dst ∈ [ε, ω]` and the `src` intervals chain into `[max(l, δ) + J, ω]`.
pub fn pre_pump(c: &Cube, t: &IOTransition) -> Vec<Cube> {
    let (s, o, d) = (t.src.index(), t.obs.index(), t.dst.index());
    debug_assert_ne!(s, d);
    let delta = u64::from(o == s);
    let eps = u64::from(o == d);
    let mut f = c.clone();
    if o != s && o != d {
        f.require_at_least(o, 1);
    }
    if f.is_empty() {
        return Vec::new();
    }
    let (l_s, u_s) = f.bounds(s);
    let (l_d, u_d) = f.bounds(d);
    let src_lo = l_s.max(delta);
    if !u_s.admits(src_lo) {
        return Vec::new();
    }
    let nth = |j: u64| -> Option<Cube> {
        let hi = u_d.checked_sub(j)?;
        let lo = l_d.saturating_sub(j).max(eps);
        if !hi.admits(lo) {
            return None;
        }
        let mut r = f.clone();
        r.set_bounds(s, src_lo + j, u_s + j);
        r.set_bounds(d, lo, hi);
        Some(r)
    };
    match u_d {
        ExtNat::Fin(u) => (1..=u).filter_map(nth).collect(),
        ExtNat::Omega => {
            let big_j = l_d.saturating_sub(eps).max(1);
            let mut out: Vec<Cube> = (1..big_j).filter_map(nth).collect();
            let mut limit = f.clone();
            limit.set_bounds(s, src_lo + big_j, ExtNat::Omega);
            limit.set_bounds(d, eps, ExtNat::Omega);
            out.push(limit);
            out
        }
    }
}

/// Counters reported by a saturation run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SaturationStats {
    /// Cubes added to the set, including the input cubes.
    pub cubes_added: usize,
    /// Cubes taken off the worklist and expanded.
    pub cubes_expanded: usize,
    /// Largest norm of a generated cube.
    pub max_norm: u64,
}

/// Norm cap for generated cubes.
///
/// Tokens only move between places, so a finite bound in a generated cube
/// can grow at most by collecting the finite bounds of every other place,
/// plus the enabling thresholds (at most 2 per place). `n * (‖s‖ + 2)`
/// covers that; exceeding it raises [`Error::SaturationOverflow`].
pub fn default_cap(num_places: usize, s: &CountingSet) -> u64 {
    (num_places.max(1) as u64) * (s.norm() + 2)
}

/// Least fixpoint of `s` under single steps in direction `dir`.
pub fn saturate(
    net: &IONet,
    s: &CountingSet,
    dir: Direction,
    cap: Option<u64>,
) -> Result<(CountingSet, SaturationStats)> {
    check_dim(net.num_places(), s.dim())?;
    let cap = cap.unwrap_or_else(|| default_cap(net.num_places(), s));
    let moving: Vec<&IOTransition> = net.transitions().iter().filter(|t| t.src != t.dst).collect();
    let mut stats = SaturationStats::default();

    let mut cubes: Vec<Cube> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut queue = VecDeque::new();

    let mut admit = |c: Cube, cubes: &mut Vec<Cube>, alive: &mut Vec<bool>, queue: &mut VecDeque<usize>| -> Result<()> {
        if c.is_empty() {
            return Ok(());
        }
        let norm = c.norm();
        stats.max_norm = stats.max_norm.max(norm);
        if norm > cap {
            return Err(Error::SaturationOverflow { norm, cap });
        }
        let live: Vec<Cube> = cubes
            .iter()
            .zip(alive.iter())
            .filter(|(_, &a)| a)
            .map(|(c, _)| c.clone())
            .collect();
        if covered(&c, &live) {
            return Ok(());
        }
        for (k, old) in cubes.iter().enumerate() {
            if alive[k] && old.is_subset(&c) {
                alive[k] = false;
            }
        }
        cubes.push(c);
        alive.push(true);
        queue.push_back(cubes.len() - 1);
        stats.cubes_added += 1;
        Ok(())
    };

    for c in s.normalize().cubes() {
        admit(c.clone(), &mut cubes, &mut alive, &mut queue)?;
    }
    while let Some(i) = queue.pop_front() {
        if !alive[i] {
            continue;
        }
        stats.cubes_expanded += 1;
        let c = cubes[i].clone();
        for t in &moving {
            let images = match dir {
                Direction::Backward => pre_pump(&c, t),
                Direction::Forward => post_pump(&c, t),
            };
            for img in images {
                admit(img, &mut cubes, &mut alive, &mut queue)?;
            }
        }
    }
    let result: Vec<Cube> = cubes
        .into_iter()
        .zip(alive)
        .filter_map(|(c, a)| a.then_some(c))
        .collect();
    Ok((CountingSet::from_cubes(s.dim(), result)?, stats))
}

/// Markings that can reach `s`.
pub fn pre_star(net: &IONet, s: &CountingSet) -> Result<CountingSet> {
    saturate(net, s, Direction::Backward, None).map(|(r, _)| r)
}

/// Markings reachable from `s`.
pub fn post_star(net: &IONet, s: &CountingSet) -> Result<CountingSet> {
    saturate(net, s, Direction::Forward, None).map(|(r, _)| r)
}
