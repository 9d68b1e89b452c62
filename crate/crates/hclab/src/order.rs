//! Coarse-graining order parameters on regular bipartite graphs.
//!
//! From an independent set σ we build a boolean field φ: on the even class
//! φ_v = 1 iff no neighbor of v is occupied (a function of σ restricted to
//! the odd class alone); on the odd class φ is the majority vote of the
//! neighboring φ values, ties resolved to 1. Two quantities measure phase
//! mixing: the edge disagreement density Φ and the minority occupancy
//! M = min{|σ_E|, |σ_O|}. Everything here is exact rational arithmetic.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graphs::{Graph, Side};
use crate::hardcore::{is_independent, weighted_partition};
use crate::numeric::{int_pow, rat_int, Fugacity, Int, Rat};
use crate::report::CheckReport;

/// φ on every vertex: product rule on the even class, majority (tie -> 1)
/// on the odd class. Requires a stored or derivable bipartition.
pub fn phi_vector(g: &Graph, config: u64) -> Result<Vec<u8>> {
    let parity = g
        .bipartition()
        .ok_or_else(|| Error::invalid("phi needs a bipartite graph"))?;
    let n = g.n();
    let mut phi = vec![0u8; n];
    for v in 0..n {
        if parity[v] == Side::E {
            let clear = g.neighbors(v as u32).iter().all(|&u| config >> u & 1 == 0);
            phi[v] = clear as u8;
        }
    }
    for u in 0..n {
        if parity[u] == Side::O {
            let nb = g.neighbors(u as u32);
            let ones = nb.iter().filter(|&&v| phi[v as usize] == 1).count();
            phi[u] = (2 * ones >= nb.len()) as u8;
        }
    }
    Ok(phi)
}

/// Mean of φ over the neighbors of u (the local vote share).
pub fn phi_hat(g: &Graph, phi: &[u8], u: u32) -> Rat {
    let nb = g.neighbors(u);
    let ones = nb.iter().filter(|&&v| phi[v as usize] == 1).count();
    Rat::new(Int::from(ones), Int::from(nb.len()))
}

/// Edge disagreement density of an arbitrary boolean field on any graph
/// with at least one edge: (1/|E|) Σ_{uv∈E} |b_u - b_v|.
pub fn edge_disagreement(g: &Graph, bits: &[u8]) -> Result<Rat> {
    if g.edge_count() == 0 {
        return Err(Error::invalid("disagreement density needs an edge"));
    }
    if bits.len() != g.n() {
        return Err(Error::invalid("field length must match vertex count"));
    }
    let disagreements = g
        .edges()
        .iter()
        .filter(|&&(u, v)| bits[u as usize] != bits[v as usize])
        .count();
    Ok(Rat::new(Int::from(disagreements), Int::from(g.edge_count())))
}

/// Φ(σ) for a δ-regular bipartite graph. Computed two ways — the edge
/// disagreement of φ and (2/|V|) Σ_{u odd} min{φ̂_u, 1-φ̂_u} — which agree
/// identically (and independently of the tie rule); disagreement between
/// the two pipelines is reported as an internal error.
pub fn big_phi(g: &Graph, config: u64) -> Result<Rat> {
    let delta = g.delta()?;
    let phi = phi_vector(g, config)?;
    let via_edges = edge_disagreement(g, &phi)?;

    let parity = g.bipartition().expect("phi_vector established bipartiteness");
    let mut vote_sum = Rat::zero();
    for u in 0..g.n() {
        if parity[u] == Side::O {
            let hat = phi_hat(g, &phi, u as u32);
            let flip = Rat::one() - &hat;
            vote_sum += if hat < flip { hat } else { flip };
        }
    }
    let via_votes = vote_sum * rat_int(2) / rat_int(g.n() as i64);
    if via_edges != via_votes {
        return Err(Error::internal(format!(
            "order-parameter identity violated: edges {via_edges} vs votes {via_votes} (delta {delta})"
        )));
    }
    Ok(via_edges)
}

/// M(σ) = min{|σ_E|, |σ_O|}: occupation of the minority class.
pub fn m_param(g: &Graph, config: u64) -> Result<u64> {
    let parity = g
        .bipartition()
        .ok_or_else(|| Error::invalid("M needs a bipartite graph"))?;
    let mut even = 0u64;
    let mut odd = 0u64;
    for v in 0..g.n() {
        if config >> v & 1 == 1 {
            match parity[v] {
                Side::E => even += 1,
                Side::O => odd += 1,
            }
        }
    }
    Ok(even.min(odd))
}

/// min{Σ_{v even} φ_v, Σ_{v even} (1-φ_v)}: the even-class phase split that
/// drives the M-vs-Φ comparison (M never exceeds it).
pub fn m_prime(g: &Graph, phi: &[u8]) -> Result<u64> {
    let parity = g
        .bipartition()
        .ok_or_else(|| Error::invalid("needs a bipartite graph"))?;
    let mut ones = 0u64;
    let mut zeros = 0u64;
    for v in 0..g.n() {
        if parity[v] == Side::E {
            if phi[v] == 1 {
                ones += 1
            } else {
                zeros += 1
            }
        }
    }
    Ok(ones.min(zeros))
}

/// M(σ) <= (δ / 2h) Φ(σ) |V| for every independent set, given a verified
/// lower bound h on the Cheeger constant. Exact rational comparison.
pub fn m_le_phi_check(g: &Graph, config: u64, h: &Rat) -> Result<CheckReport> {
    if !h.is_positive() {
        return Err(Error::invalid("need a positive expansion bound"));
    }
    let masks = g.neighbor_masks()?;
    if !is_independent(&masks, config) {
        return Err(Error::invalid("config is not an independent set"));
    }
    let delta = g.delta()?;
    let m = m_param(g, config)?;
    let phi = big_phi(g, config)?;
    let lhs = rat_int(m as i64);
    let rhs = rat_int(delta as i64) / (rat_int(2) * h) * phi * rat_int(g.n() as i64);
    Ok(CheckReport::exact_le("M <= (delta/2h) Phi |V|", &lhs, &rhs))
}

/// Exact E_μ[Φ] at fugacity λ (enumeration-backed, so desk scale only).
pub fn exact_mean_phi(g: &Graph, fug: &Fugacity) -> Result<Rat> {
    let mut z = Rat::zero();
    let mut acc = Rat::zero();
    let mut err: Option<Error> = None;
    weighted_partition(g, |c| {
        if err.is_some() {
            return Rat::zero();
        }
        let w = fug.pow(c.count_ones() as u64);
        match big_phi(g, c) {
            Ok(phi) => acc += &w * phi,
            Err(e) => err = Some(e),
        }
        z += &w;
        Rat::zero()
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(acc / z)
}

/// Exact E_μ[M] at fugacity λ.
pub fn exact_mean_m(g: &Graph, fug: &Fugacity) -> Result<Rat> {
    let parity = g
        .bipartition()
        .ok_or_else(|| Error::invalid("M needs a bipartite graph"))?;
    let even_mask: u64 = (0..g.n())
        .filter(|&v| parity[v] == Side::E)
        .fold(0, |m, v| m | 1 << v);
    let mut z = Rat::zero();
    let mut acc = Rat::zero();
    weighted_partition(g, |c| {
        let w = fug.pow(c.count_ones() as u64);
        let m = (c & even_mask).count_ones().min((c & !even_mask).count_ones());
        acc += &w * rat_int(m as i64);
        z += &w;
        Rat::zero()
    })?;
    Ok(acc / z)
}

/// Torus disorder event: M exceeds L^{d+1}/d^{c0}, or the occupation count
/// strays from its heuristic center (L^d/2)·λ/(1+λ) by more than that same
/// threshold. Thresholds stay exact rationals.
pub fn bad_event_torus(l: usize, d: usize, config: u64, fug: &Fugacity, c0: i64) -> Result<bool> {
    if c0 < 0 {
        return Err(Error::invalid("threshold exponent must be nonnegative"));
    }
    let g = crate::graphs::torus(l, d)?;
    let masks = g.neighbor_masks()?;
    if !is_independent(&masks, config) {
        return Err(Error::invalid("config is not an independent set"));
    }
    let threshold = Rat::from_integer(int_pow(&Int::from(l), d as u64 + 1))
        / Rat::from_integer(int_pow(&Int::from(d), c0 as u64));
    let m = Rat::from_integer(Int::from(m_param(&g, config)?));
    if m > threshold {
        return Ok(true);
    }
    let occ = Rat::from_integer(Int::from(u64::from(config.count_ones())));
    let center = Rat::from_integer(int_pow(&Int::from(l), d as u64)) / rat_int(2) * fug.occupation();
    let dev = if occ >= center { occ - center } else { center - occ };
    Ok(dev > threshold)
}

/// Balance event: M > (1/10)·(λ/(1+λ))·|V|, compared exactly.
pub fn balanced_event(g: &Graph, config: u64, fug: &Fugacity) -> Result<bool> {
    let masks = g.neighbor_masks()?;
    if !is_independent(&masks, config) {
        return Err(Error::invalid("config is not an independent set"));
    }
    let m = Rat::from_integer(Int::from(m_param(g, config)?));
    let threshold = fug.occupation() * rat_int(g.n() as i64) / rat_int(10);
    Ok(m > threshold)
}
