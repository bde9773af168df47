//! The distributive lattice of tilings: pointwise comparison, meet/join,
//! flips, and the flip-distance formula.

use crate::error::{Error, Result};
use crate::grid::{neighbor_steps, step_is_canonical, Domain, Vertex};
use crate::tiling::{height_from_tiling, tiling_from_height, HeightFunction, Tiling};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipDir {
    Up,
    Down,
}

fn same_domain<'a>(t: &'a Tiling, u: &Tiling) -> Result<&'a Domain> {
    if t.domain() != u.domain() {
        return Err(Error::DomainMismatch);
    }
    Ok(t.domain())
}

/// `t <= u` iff the height of `t` is pointwise below the height of `u`.
pub fn leq(t: &Tiling, u: &Tiling) -> Result<bool> {
    same_domain(t, u)?;
    let ht = height_from_tiling(t);
    let hu = height_from_tiling(u);
    Ok(ht.values().iter().zip(hu.values()).all(|(a, b)| a <= b))
}

/// Greatest lower bound: the tiling encoded by the pointwise minimum of the
/// two height functions.
pub fn meet(t: &Tiling, u: &Tiling) -> Result<Tiling> {
    let domain = same_domain(t, u)?;
    let ht = height_from_tiling(t);
    let hu = height_from_tiling(u);
    let vals: Vec<i32> = ht.values().iter().zip(hu.values()).map(|(&a, &b)| a.min(b)).collect();
    tiling_from_height(domain, &HeightFunction::from_values(domain, vals))
}

/// Least upper bound: pointwise maximum of the height functions.
pub fn join(t: &Tiling, u: &Tiling) -> Result<Tiling> {
    let domain = same_domain(t, u)?;
    let ht = height_from_tiling(t);
    let hu = height_from_tiling(u);
    let vals: Vec<i32> = ht.values().iter().zip(hu.values()).map(|(&a, &b)| a.max(b)).collect();
    tiling_from_height(domain, &HeightFunction::from_values(domain, vals))
}

/// Replace the `lambda - 1` tiles around a flip site: an up flip turns the
/// incoming axes at `v` into outgoing ones, raising `h(v)` by `lambda`.
pub fn apply_flip(t: &Tiling, v: Vertex, dir: FlipDir) -> Result<Tiling> {
    let domain = t.domain().clone();
    let dir_name = match dir {
        FlipDir::Up => "up",
        FlipDir::Down => "down",
    };
    let not_flippable = || Error::NotFlippable { vertex: v, dir: dir_name };
    let vid = domain.vertex_id(v).ok_or_else(not_flippable)?;
    if !domain.is_interior(vid) {
        return Err(not_flippable());
    }
    let mut removed = Vec::with_capacity(3);
    let mut added = Vec::with_capacity(3);
    for &step in neighbor_steps(domain.kind()) {
        let w = Vertex::new(v.x + step.0, v.y + step.1);
        let wid = domain.vertex_id(w).ok_or_else(not_flippable)?;
        let outgoing = step_is_canonical(domain.kind(), v, step);
        // Up flips consume the incoming axes and emit outgoing ones; down
        // flips are the mirror image.
        let (old, new) = match (dir, outgoing) {
            (FlipDir::Up, false) => ((wid, vid), (vid, wid)),
            (FlipDir::Down, true) => ((vid, wid), (wid, vid)),
            _ => continue,
        };
        if !t.is_axis(old.0, old.1) {
            return Err(not_flippable());
        }
        removed.push(old);
        added.push(new);
    }
    let mut axes: Vec<(u32, u32)> = t
        .axis_ids()
        .iter()
        .copied()
        .filter(|e| !removed.contains(e))
        .collect();
    axes.extend(added);
    axes.sort_unstable();
    Ok(Tiling::from_sorted_axes(&domain, axes))
}

/// Minimal number of flips between two tilings: `sum_v |h_t(v) - h_u(v)| / lambda`.
pub fn flip_distance(t: &Tiling, u: &Tiling) -> Result<u64> {
    let domain = same_domain(t, u)?;
    let ht = height_from_tiling(t);
    let hu = height_from_tiling(u);
    let total: i64 = ht
        .values()
        .iter()
        .zip(hu.values())
        .map(|(&a, &b)| (a as i64 - b as i64).abs())
        .sum();
    let lambda = domain.lambda() as i64;
    debug_assert_eq!(total % lambda, 0, "height gaps are multiples of lambda");
    Ok((total / lambda) as u64)
}
