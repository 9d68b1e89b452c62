//! Partition functions by brute-force enumeration.

use num::{One, Zero};

use super::enumerate::{for_each_independent_set, occupancy_counts};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::numeric::{log_sum_exp, rat_pow, Fugacity, Int, Rat};
use crate::report::CheckReport;

/// Z(G, λ) = Σ_k N_k λ^k by direct enumeration. Exact; capped at 24 vertices
/// (beyond that use [`log_partition_bruteforce`] or the transfer matrix).
pub fn partition_bruteforce(g: &Graph, fug: &Fugacity) -> Result<Rat> {
    const CAP: usize = 24;
    if g.n() > CAP {
        return Err(Error::CapExceeded { what: "vertices for exact brute force", got: g.n(), cap: CAP });
    }
    let counts = occupancy_counts(g)?;
    Ok(partition_from_occupancy(&counts, fug))
}

/// Σ_k N_k λ^k from a precomputed occupancy polynomial.
pub fn partition_from_occupancy(counts: &[u64], fug: &Fugacity) -> Rat {
    let mut z = Rat::zero();
    let mut pow = Rat::one();
    for &nk in counts {
        if nk != 0 {
            z += Rat::from_integer(Int::from(nk)) * &pow;
        }
        pow *= fug.rat();
    }
    z
}

/// log Z via enumeration in log space; works to 40 vertices.
pub fn log_partition_bruteforce(g: &Graph, fug: &Fugacity) -> Result<f64> {
    let counts = occupancy_counts(g)?; // caps at 40
    let log_lam = fug.log_lam();
    let terms: Vec<f64> = counts
        .iter()
        .enumerate()
        .filter(|(_, &nk)| nk != 0)
        .map(|(k, &nk)| (nk as f64).ln() + k as f64 * log_lam)
        .collect();
    Ok(log_sum_exp(&terms))
}

/// Z >= (1+λ)^{|V|/2}: the one-side lower bound (sum the weights of all
/// subsets of the larger side). Verified exactly as Z^2 >= (1+λ)^|V| so a
/// half-integer exponent never appears.
pub fn trivial_lower_bound_check(g: &Graph, fug: &Fugacity, z: &Rat) -> CheckReport {
    let lhs = rat_pow(&fug.one_plus(), g.n() as u64);
    let rhs = z * z;
    let mut rep = CheckReport::exact_le("trivial_lower_bound: (1+lam)^n <= Z^2", &lhs, &rhs);
    // display the per-vertex normalised quantities instead of the raw powers
    rep.lhs = crate::numeric::ln_rat(&lhs) / (2.0 * g.n() as f64);
    rep.rhs = crate::numeric::ln_rat(&rhs) / (2.0 * g.n() as f64);
    rep.margin = rep.rhs - rep.lhs;
    rep
}

/// Σ_σ weight(σ) streamed over all independent sets; the caller supplies
/// any λ-powers inside `weight`. Backbone for exact observable expectations.
pub fn weighted_partition<F: FnMut(u64) -> Rat>(g: &Graph, mut weight: F) -> Result<Rat> {
    let masks = g.neighbor_masks()?;
    if g.n() > 40 {
        return Err(Error::CapExceeded { what: "vertices for weighted enumeration", got: g.n(), cap: 40 });
    }
    let mut acc = Rat::zero();
    for_each_independent_set(&masks, |c| acc += weight(c));
    Ok(acc)
}

/// (1/n) log Z - λ̃/2: the free-energy excess over the trivial bound.
pub fn free_energy_gap(g: &Graph, fug: &Fugacity, z: &Rat) -> f64 {
    crate::numeric::ln_rat(z) / g.n() as f64 - fug.lam_tilde() / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{cycle, hypercube, torus};
    use crate::numeric::rat;

    #[test]
    fn frozen_small_values() {
        let lam1 = Fugacity::parse("1").unwrap();
        // K_2: 1 + 2λ
        let k2 = torus(2, 1).unwrap();
        assert_eq!(partition_bruteforce(&k2, &lam1).unwrap(), rat(3, 1));
        let lam_half = Fugacity::parse("1/2").unwrap();
        assert_eq!(partition_bruteforce(&k2, &lam_half).unwrap(), rat(2, 1));
        // C_4: 1 + 4λ + 2λ^2
        let c4 = cycle(4).unwrap();
        assert_eq!(partition_bruteforce(&c4, &lam1).unwrap(), rat(7, 1));
        assert_eq!(partition_bruteforce(&c4, &lam_half).unwrap(), rat(7, 2));
        // C_6: 18 at λ=1
        let c6 = cycle(6).unwrap();
        assert_eq!(partition_bruteforce(&c6, &lam1).unwrap(), rat(18, 1));
        // Q_3 at λ=2: 1 + 16 + 64 + 64 + 32 = 177
        let q3 = hypercube(3).unwrap();
        assert_eq!(partition_bruteforce(&q3, &Fugacity::parse("2").unwrap()).unwrap(), rat(177, 1));
    }

    #[test]
    fn log_matches_exact() {
        let g = torus(4, 2).unwrap();
        for lam in ["1/2", "1", "2"] {
            let fug = Fugacity::parse(lam).unwrap();
            let z = partition_bruteforce(&g, &fug).unwrap();
            let lz = log_partition_bruteforce(&g, &fug).unwrap();
            assert!((lz - crate::numeric::ln_rat(&z)).abs() < 1e-12 * lz.abs().max(1.0));
        }
    }

    #[test]
    fn trivial_bound_on_z42() {
        let g = torus(4, 2).unwrap();
        let fug = Fugacity::parse("1").unwrap();
        let z = partition_bruteforce(&g, &fug).unwrap();
        // Z(Z_4^2, 1) = 743 >= 2^8 = 256
        assert_eq!(z, rat(743, 1));
        let rep = trivial_lower_bound_check(&g, &fug, &z);
        assert!(rep.pass && rep.exact);
    }

    #[test]
    fn gap_value_c4_at_one() {
        // (1/4) ln 7 - (1/2) ln 2 ≈ 0.13989
        let g = cycle(4).unwrap();
        let fug = Fugacity::parse("1").unwrap();
        let z = partition_bruteforce(&g, &fug).unwrap();
        let gap = free_energy_gap(&g, &fug, &z);
        assert!((gap - (7f64.ln() / 4.0 - 2f64.ln() / 2.0)).abs() < 1e-14);
    }
}
