//! The boundary-halving weight on the fundamental domain and the exact
//! group-sum identity it buys: summing weighted block counts over the whole
//! group recovers plain counts on invariant vertex sets.

use std::collections::BTreeSet;

use num::Zero;

use crate::chessboard::action::{group_elements, GroupElement, ReflectionSpec};
use crate::error::{Error, Result};
use crate::graphs::torus_index;
use crate::numeric::{rat, Rat};
use crate::report::CheckReport;

/// w_v = prod over coordinates of (1/2 if the coordinate sits on the block
/// boundary {0, l}, else 1).
pub fn weight_of(spec: &ReflectionSpec, coords: &[usize]) -> Rat {
    let halves = coords.iter().filter(|&&c| c == 0 || c == spec.l).count();
    rat(1, 1 << halves)
}

/// |{tau in D^d : tau v = v}| for a block vertex, by exhaustion.
pub fn stabilizer_size(spec: &ReflectionSpec, coords: &[usize]) -> usize {
    let v = torus_index(spec.big_l, coords);
    group_elements(spec).iter().filter(|e| e.apply_vertex(spec, v) == v).count()
}

/// |σ|^w_A = Σ_{v in A ∩ [0,l]^d} w_v σ_v.
pub fn weighted_sum(spec: &ReflectionSpec, config: u64, a: &BTreeSet<u32>) -> Rat {
    let mut acc = Rat::zero();
    for coords in spec.block_coords() {
        let v = torus_index(spec.big_l, &coords);
        if a.contains(&v) && config >> v & 1 == 1 {
            acc += weight_of(spec, &coords);
        }
    }
    acc
}

/// Σ_{τ in D^d} |στ|^w_A = |σ_A| for invariant A, checked exactly.
/// Rejects targets that the group does not fix setwise.
pub fn check_sums_identity(
    spec: &ReflectionSpec,
    config: u64,
    a: &BTreeSet<u32>,
) -> Result<CheckReport> {
    if spec.n_vertices() > 64 {
        return Err(Error::CapExceeded { what: "vertices for config bitmask", got: spec.n_vertices(), cap: 64 });
    }
    let els = group_elements(spec);
    for e in &els {
        let image: BTreeSet<u32> = a.iter().map(|&v| e.apply_vertex(spec, v)).collect();
        if image != *a {
            return Err(Error::invalid("the sums identity needs a group-invariant vertex set"));
        }
    }
    let lhs: Rat = els.iter().map(|e| weighted_sum(spec, push(spec, e, config), a)).sum();
    let rhs = rat(a.iter().filter(|&&v| config >> v & 1 == 1).count() as i64, 1);
    Ok(CheckReport::exact_eq("group-sum of weighted block counts = plain count", &lhs, &rhs))
}

fn push(spec: &ReflectionSpec, e: &GroupElement, config: u64) -> u64 {
    e.push_config(spec, config)
}

/// Σ_{v in block} w_v = l^d: the weights tile the torus exactly.
pub fn check_domain_tiling(spec: &ReflectionSpec) -> CheckReport {
    let total: Rat = spec.block_coords().iter().map(|c| weight_of(spec, c)).sum();
    let per_block = rat(spec.l.pow(spec.d as u32) as i64, 1);
    CheckReport::exact_eq("weighted block volume = l^d", &total, &per_block)
}
