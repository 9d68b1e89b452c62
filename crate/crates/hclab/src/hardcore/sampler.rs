//! Samplers: single-site heat-bath (Glauber) dynamics for the grand-canonical
//! measure, and a relocation chain for configurations of fixed occupancy.
//!
//! Both are deterministic functions of (master seed, stream label): rerunning
//! with the same seed gives byte-identical trajectories on any machine.

use num::{One, Zero};
use rand::Rng;

use super::enumerate::for_each_independent_set;
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::numeric::{rat_pow, rat_to_f64, Fugacity, Rat};
use crate::report::CheckReport;
use crate::seeding::rng_for;

/// One heat-bath sweep unit: pick a uniform vertex; if a neighbor is occupied
/// the site empties, otherwise it is resampled to occupied with probability
/// λ/(1+λ).
fn glauber_step(masks: &[u64], n: usize, p_occ: f64, sigma: &mut u64, rng: &mut impl Rng) {
    let v = rng.gen_range(0..n);
    if masks[v] & *sigma != 0 {
        *sigma &= !(1u64 << v);
    } else if rng.gen_bool(p_occ) {
        *sigma |= 1u64 << v;
    } else {
        *sigma &= !(1u64 << v);
    }
}

/// Run `steps` heat-bath updates from the empty configuration; returns the
/// final configuration. Stream label: `"glauber"`.
pub fn glauber_run(g: &Graph, fug: &Fugacity, steps: u64, seed: u64) -> Result<u64> {
    let masks = g.neighbor_masks()?;
    let p_occ = rat_to_f64(&fug.occupation());
    let mut rng = rng_for(seed, "glauber", 0);
    let mut sigma = 0u64;
    for _ in 0..steps {
        glauber_step(&masks, g.n(), p_occ, &mut sigma, &mut rng);
    }
    Ok(sigma)
}

/// `count` samples, each separated by `thin` updates after `burn_in` updates.
pub fn glauber_samples(
    g: &Graph,
    fug: &Fugacity,
    burn_in: u64,
    thin: u64,
    count: usize,
    seed: u64,
) -> Result<Vec<u64>> {
    if thin == 0 {
        return Err(Error::invalid("thinning interval must be >= 1"));
    }
    let masks = g.neighbor_masks()?;
    let p_occ = rat_to_f64(&fug.occupation());
    let mut rng = rng_for(seed, "glauber", 0);
    let mut sigma = 0u64;
    for _ in 0..burn_in {
        glauber_step(&masks, g.n(), p_occ, &mut sigma, &mut rng);
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        for _ in 0..thin {
            glauber_step(&masks, g.n(), p_occ, &mut sigma, &mut rng);
        }
        out.push(sigma);
    }
    Ok(out)
}

/// Exact algebraic check that the heat-bath chain is a stochastic matrix in
/// detailed balance with ζ(σ) = λ^|σ|. All arithmetic rational.
pub fn glauber_detailed_balance_check(g: &Graph, fug: &Fugacity) -> Result<Vec<CheckReport>> {
    const CAP: usize = 16;
    if g.n() > CAP {
        return Err(Error::CapExceeded { what: "vertices for transition matrix", got: g.n(), cap: CAP });
    }
    let masks = g.neighbor_masks()?;
    let n = g.n();
    let mut configs = Vec::new();
    for_each_independent_set(&masks, |c| configs.push(c));
    let index: std::collections::HashMap<u64, usize> =
        configs.iter().enumerate().map(|(i, &c)| (c, i)).collect();

    let inv_n = Rat::new(1.into(), (n as i64).into());
    let p_occ = fug.occupation(); // λ/(1+λ)
    let p_emp = Rat::one() - &p_occ;
    // sparse rows: map target -> probability
    let mut rows: Vec<std::collections::HashMap<usize, Rat>> = vec![Default::default(); configs.len()];
    for (i, &c) in configs.iter().enumerate() {
        for v in 0..n {
            let bit = 1u64 << v;
            if masks[v] & c != 0 {
                *rows[i].entry(index[&(c & !bit)]).or_insert_with(Rat::zero) += &inv_n;
            } else {
                *rows[i].entry(index[&(c | bit)]).or_insert_with(Rat::zero) += &inv_n * &p_occ;
                *rows[i].entry(index[&(c & !bit)]).or_insert_with(Rat::zero) += &inv_n * &p_emp;
            }
        }
    }

    let stochastic = rows
        .iter()
        .all(|r| r.values().sum::<Rat>() == Rat::one());
    let mut reversible = true;
    for (i, row) in rows.iter().enumerate() {
        let zi = rat_pow(fug.rat(), configs[i].count_ones() as u64);
        for (&j, pij) in row {
            let zj = rat_pow(fug.rat(), configs[j].count_ones() as u64);
            let pji = rows[j].get(&i).cloned().unwrap_or_else(Rat::zero);
            if &zi * pij != zj * pji {
                reversible = false;
            }
        }
    }
    Ok(vec![
        CheckReport::holds("glauber: rows sum to one", stochastic),
        CheckReport::holds("glauber: detailed balance against lam^|sigma|", reversible),
    ])
}

fn nth_set_bit(mask: u64, k: u32) -> u32 {
    let mut m = mask;
    for _ in 0..k {
        m &= m - 1;
    }
    m.trailing_zeros()
}

/// Exactly uniform sample from {independent sets of size N} by reservoir
/// sampling over the enumeration stream. Capped at 40 vertices.
pub fn sample_fixed_size_uniform(g: &Graph, n_occ: u32, seed: u64) -> Result<u64> {
    const CAP: usize = 40;
    if g.n() > CAP {
        return Err(Error::CapExceeded { what: "vertices for uniform init", got: g.n(), cap: CAP });
    }
    let masks = g.neighbor_masks()?;
    let mut rng = rng_for(seed, "fixed-size-init", 0);
    let mut held = None;
    let mut count = 0u64;
    for_each_independent_set(&masks, |c| {
        if c.count_ones() == n_occ {
            count += 1;
            if rng.gen_range(0..count) == 0 {
                held = Some(c);
            }
        }
    });
    held.ok_or_else(|| Error::invalid(format!("no independent set of size {n_occ}")))
}

/// Relocation chain at fixed occupancy N: move one uniformly-chosen particle
/// to a uniformly-chosen vertex when the result is again an independent set
/// (the proposal is symmetric, so acceptance is always 1 and the chain is
/// uniform on each communicating class).
///
/// Start state: exactly uniform over all size-N independent sets when the
/// graph fits the enumeration cap (so the chain is uniform even if it happens
/// to be reducible), greedy lowest-index packing beyond that.
pub fn relocation_run(g: &Graph, n_occ: u32, steps: u64, seed: u64) -> Result<u64> {
    let masks = g.neighbor_masks()?;
    let n = g.n();
    let mut sigma = if n <= 40 {
        sample_fixed_size_uniform(g, n_occ, seed)?
    } else {
        let mut s = 0u64;
        for v in 0..n {
            if s.count_ones() == n_occ {
                break;
            }
            if masks[v] & s == 0 {
                s |= 1 << v;
            }
        }
        if s.count_ones() != n_occ {
            return Err(Error::invalid(format!("greedy packing reached only {} < {n_occ} particles", s.count_ones())));
        }
        s
    };
    if n_occ == 0 {
        return Ok(0);
    }
    let mut rng = rng_for(seed, "relocation", 0);
    for _ in 0..steps {
        let i = rng.gen_range(0..n_occ);
        let u = nth_set_bit(sigma, i);
        let v = rng.gen_range(0..n) as u32;
        if v == u {
            continue;
        }
        let moved = (sigma & !(1u64 << u)) | (1u64 << v);
        if sigma >> v & 1 == 0 && masks[v as usize] & (sigma & !(1u64 << u)) == 0 {
            sigma = moved;
        }
    }
    Ok(sigma)
}

/// Whether the relocation chain is irreducible on size-N independent sets:
/// builds the move graph on the whole class and BFS-checks connectivity.
pub fn fixed_size_chain_irreducible(g: &Graph, n_occ: u32) -> Result<bool> {
    const CAP: usize = 1 << 21;
    let masks = g.neighbor_masks()?;
    if g.n() > 40 {
        return Err(Error::CapExceeded { what: "vertices for irreducibility check", got: g.n(), cap: 40 });
    }
    let mut class = Vec::new();
    for_each_independent_set(&masks, |c| {
        if c.count_ones() == n_occ {
            class.push(c);
        }
    });
    if class.is_empty() {
        return Err(Error::invalid(format!("no independent set of size {n_occ}")));
    }
    if class.len() > CAP {
        return Err(Error::CapExceeded { what: "size-N class", got: class.len(), cap: CAP });
    }
    let index: std::collections::HashMap<u64, usize> =
        class.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut seen = vec![false; class.len()];
    let mut queue = std::collections::VecDeque::from([class[0]]);
    seen[0] = true;
    let mut reached = 1usize;
    while let Some(c) = queue.pop_front() {
        let mut occ = c;
        while occ != 0 {
            let u = occ.trailing_zeros();
            occ &= occ - 1;
            let without = c & !(1u64 << u);
            for v in 0..g.n() as u32 {
                if c >> v & 1 == 1 {
                    continue;
                }
                if masks[v as usize] & without == 0 {
                    let t = without | (1u64 << v);
                    let j = index[&t];
                    if !seen[j] {
                        seen[j] = true;
                        reached += 1;
                        queue.push_back(t);
                    }
                }
            }
        }
    }
    Ok(reached == class.len())
}
