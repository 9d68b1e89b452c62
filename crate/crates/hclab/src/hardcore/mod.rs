//! The hard-core model: configurations are independent sets, a configuration
//! σ has weight ζ(σ) = λ^|σ|, and Z = Σ ζ(σ) over all independent sets.
//!
//! Configurations on up to 64 vertices are bitmasks (`u64`, bit v = vertex v
//! occupied). Exact arithmetic throughout when λ is rational.

mod enumerate;
mod partition;
mod sampler;
mod transfer;

pub use enumerate::{
    count_independent_sets, enumerate_configs, for_each_independent_set, occupancy_counts,
};
pub use partition::{
    free_energy_gap, log_partition_bruteforce, partition_bruteforce, partition_from_occupancy,
    trivial_lower_bound_check, weighted_partition,
};
pub use sampler::{
    fixed_size_chain_irreducible, glauber_detailed_balance_check, glauber_run, glauber_samples,
    relocation_run, sample_fixed_size_uniform,
};
pub use transfer::{log_partition_transfer_torus, partition_transfer_torus};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::numeric::{ln_rat, rat_to_f64, Fugacity, Rat};

pub fn is_independent(masks: &[u64], config: u64) -> bool {
    let mut bits = config;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        if masks[v] & config != 0 {
            return false;
        }
        bits &= bits - 1;
    }
    true
}

/// An exact finitely-supported measure over configurations: weights need not
/// be normalised (`total` is the normalising constant, e.g. Z or ζ(E)).
#[derive(Clone, Debug)]
pub struct ConfigDist {
    pub configs: Vec<u64>,
    pub weights: Vec<Rat>,
    pub total: Rat,
}

impl ConfigDist {
    pub fn new(configs: Vec<u64>, weights: Vec<Rat>) -> Result<ConfigDist> {
        if configs.len() != weights.len() {
            return Err(Error::invalid("configs/weights length mismatch"));
        }
        if weights.iter().any(|w| w < &Rat::zero()) {
            return Err(Error::invalid("negative weight"));
        }
        let total: Rat = weights.iter().sum();
        if total.is_zero() {
            return Err(Error::ZeroProbability("all weights vanish".into()));
        }
        Ok(ConfigDist { configs, weights, total })
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn prob(&self, i: usize) -> Rat {
        &self.weights[i] / &self.total
    }

    /// Mass of an event, as a fraction of `total`.
    pub fn prob_of(&self, mut event: impl FnMut(u64) -> bool) -> Rat {
        let mass: Rat = self
            .configs
            .iter()
            .zip(&self.weights)
            .filter(|(c, _)| event(**c))
            .map(|(_, w)| w.clone())
            .sum();
        mass / &self.total
    }

    /// Unnormalised mass of an event (ζ(B) when the weights are ζ).
    pub fn mass_of(&self, mut event: impl FnMut(u64) -> bool) -> Rat {
        self.configs
            .iter()
            .zip(&self.weights)
            .filter(|(c, _)| event(**c))
            .map(|(_, w)| w.clone())
            .sum()
    }

    /// Restrict to an event; keeps the sub-measure's own weights and total.
    pub fn condition(&self, mut event: impl FnMut(u64) -> bool) -> Result<ConfigDist> {
        let mut configs = Vec::new();
        let mut weights = Vec::new();
        for (c, w) in self.configs.iter().zip(&self.weights) {
            if event(*c) && !w.is_zero() {
                configs.push(*c);
                weights.push(w.clone());
            }
        }
        if configs.is_empty() {
            return Err(Error::ZeroProbability("conditioning event has zero mass".into()));
        }
        ConfigDist::new(configs, weights)
    }

    pub fn expectation(&self, mut f: impl FnMut(u64) -> Rat) -> Rat {
        let s: Rat = self
            .configs
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| f(*c) * w)
            .sum();
        s / &self.total
    }

    /// E|σ| exactly.
    pub fn mean_occupancy(&self) -> Rat {
        self.expectation(|c| Rat::from_integer(c.count_ones().into()))
    }

    /// Shannon entropy (nats) of the normalised distribution.
    pub fn entropy(&self) -> f64 {
        let ln_total = ln_rat(&self.total);
        -crate::numeric::neumaier_sum(self.weights.iter().filter(|w| !w.is_zero()).map(|w| {
            let p = rat_to_f64(&(w / &self.total));
            p * (ln_rat(w) - ln_total)
        }))
    }
}

/// The hard-core measure itself: support = all independent sets (lexicographic
/// as bitstrings σ_0 σ_1 ..., i.e. vertex 0 is the most significant), weight
/// λ^|σ|, total = Z.
pub fn exact_distribution(g: &Graph, fug: &Fugacity) -> Result<ConfigDist> {
    const CAP: usize = 24;
    if g.n() > CAP {
        return Err(Error::CapExceeded { what: "vertices for exact distribution", got: g.n(), cap: CAP });
    }
    let masks = g.neighbor_masks()?;
    // powers of λ up to n, computed once
    let mut pows = Vec::with_capacity(g.n() + 1);
    let mut p = Rat::one();
    for _ in 0..=g.n() {
        pows.push(p.clone());
        p *= fug.rat();
    }
    let mut configs = Vec::new();
    let mut weights = Vec::new();
    for_each_independent_set(&masks, |c| {
        configs.push(c);
        weights.push(pows[c.count_ones() as usize].clone());
    });
    ConfigDist::new(configs, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{cycle, torus};
    use crate::numeric::rat;

    #[test]
    fn c4_distribution() {
        let g = cycle(4).unwrap();
        let lam = Fugacity::parse("1").unwrap();
        let d = exact_distribution(&g, &lam).unwrap();
        // 1 + 4λ + 2λ^2 at λ=1: seven configs
        assert_eq!(d.len(), 7);
        assert_eq!(d.total, rat(7, 1));
        assert_eq!(d.mean_occupancy(), rat(8, 7));
        // entropy of uniform-over-7 is ln 7
        assert!((d.entropy() - 7f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn conditioning() {
        let g = torus(4, 1).unwrap();
        let lam = Fugacity::parse("2").unwrap();
        let d = exact_distribution(&g, &lam).unwrap();
        // Z(C_4, 2) = 1 + 8 + 8 = 17
        assert_eq!(d.total, rat(17, 1));
        let even = d.condition(|c| c.count_ones() % 2 == 0).unwrap();
        assert_eq!(even.total, rat(9, 1));
        assert!(d.condition(|c| c.count_ones() > 2).is_err());
        assert_eq!(d.prob_of(|c| c == 0), rat(1, 17));
    }
}
