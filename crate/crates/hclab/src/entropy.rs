//! Entropy toolkit over exactly-weighted finite distributions.
//!
//! Probabilities are rational; entropies are the only floats, computed as
//! `ln T - (1/T) Σ w ln w` from exact weights, so distinct pipelines agree to
//! ~1e-12 and checks can use the pinned `FLOAT_ON_EXACT` tolerance.
//! All entropies in nats.

use num::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::hardcore::ConfigDist;
use crate::numeric::{ln_rat, neumaier_sum, rat_to_f64, xlogx, Fugacity, Rat};
use crate::report::{tol, CheckReport};

/// Shannon entropy of explicit float probabilities (must be a distribution).
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::invalid("negative or non-finite probability"));
    }
    let total = neumaier_sum(p.iter().copied());
    if (total - 1.0).abs() > tol::NORMALIZATION {
        return Err(Error::invalid(format!("probabilities sum to {total}, not 1")));
    }
    Ok(-neumaier_sum(p.iter().map(|&x| xlogx(x))))
}

/// Entropy of an unnormalised exact weight vector.
pub fn entropy_from_weights<'a, I: IntoIterator<Item = &'a Rat>>(ws: I) -> Result<f64> {
    let ws: Vec<&Rat> = ws.into_iter().collect();
    if ws.iter().any(|w| w < &&Rat::zero()) {
        return Err(Error::invalid("negative weight"));
    }
    let total: Rat = ws.iter().map(|w| (*w).clone()).sum();
    if total.is_zero() {
        return Err(Error::ZeroProbability("entropy of the zero measure".into()));
    }
    let ln_total = ln_rat(&total);
    let mean_ln = neumaier_sum(
        ws.iter()
            .filter(|w| !w.is_zero())
            .map(|w| rat_to_f64(&(*w / &total)) * ln_rat(w)),
    );
    Ok(ln_total - mean_ln)
}

/// Exact-weighted tagged items; the workhorse for conditional entropies of
/// projections: group by a key, take entropies of the grouped weights.
pub fn grouped_weights<T, K: Ord>(items: &[(T, Rat)], key: impl Fn(&T) -> K) -> Vec<Rat> {
    let mut map: std::collections::BTreeMap<K, Rat> = Default::default();
    for (t, w) in items {
        if !w.is_zero() {
            *map.entry(key(t)).or_insert_with(Rat::zero) += w;
        }
    }
    map.into_values().collect()
}

/// S(key(T)) for T distributed by the items.
pub fn grouped_entropy<T, K: Ord>(items: &[(T, Rat)], key: impl Fn(&T) -> K) -> Result<f64> {
    entropy_from_weights(&grouped_weights(items, key))
}

/// S(A | B) = S(A, B) - S(B), both computed from the same exact weights.
pub fn conditional_entropy_grouped<T, KA: Ord, KB: Ord>(
    items: &[(T, Rat)],
    key_a: impl Fn(&T) -> KA,
    key_b: impl Fn(&T) -> KB,
) -> Result<f64> {
    let joint = grouped_entropy(items, |t| (key_b(t), key_a(t)))?;
    let b = grouped_entropy(items, key_b)?;
    Ok(joint - b)
}

/// Restrict items to an event; zero-mass events are an error, never NaN.
pub fn condition_items<T: Clone>(
    items: &[(T, Rat)],
    event: impl Fn(&T) -> bool,
) -> Result<Vec<(T, Rat)>> {
    let kept: Vec<(T, Rat)> = items
        .iter()
        .filter(|(t, w)| event(t) && !w.is_zero())
        .cloned()
        .collect();
    if kept.is_empty() {
        return Err(Error::ZeroProbability("conditioning event has zero probability".into()));
    }
    Ok(kept)
}

/// S(X | Y) from a float joint `joint[y][x]`.
pub fn conditional_entropy(joint: &[Vec<f64>]) -> Result<f64> {
    let mut total = 0.0;
    for row in joint {
        for &p in row {
            if p < 0.0 || !p.is_finite() {
                return Err(Error::invalid("negative or non-finite joint probability"));
            }
            total += p;
        }
    }
    if (total - 1.0).abs() > tol::NORMALIZATION {
        return Err(Error::invalid(format!("joint sums to {total}, not 1")));
    }
    let mut s = 0.0;
    for row in joint {
        let py = neumaier_sum(row.iter().copied());
        s += neumaier_sum(row.iter().map(|&p| -xlogx(p))) - -xlogx(py);
    }
    Ok(s)
}

/// KL(p ‖ q) in nats; +∞ when p charges a q-null outcome.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::invalid("KL needs equal-length distributions"));
    }
    for xs in [p, q] {
        if xs.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::invalid("negative or non-finite probability"));
        }
        let t = neumaier_sum(xs.iter().copied());
        if (t - 1.0).abs() > tol::NORMALIZATION {
            return Err(Error::invalid(format!("distribution sums to {t}, not 1")));
        }
    }
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi == 0.0 {
                return Ok(f64::INFINITY);
            }
            acc += pi * (pi / qi).ln();
        }
    }
    Ok(acc)
}

/// KL between two exactly-weighted measures on the same support list.
pub fn kl_divergence_exact(p: &ConfigDist, q: &ConfigDist) -> Result<f64> {
    let qmap: std::collections::HashMap<u64, &Rat> =
        q.configs.iter().zip(&q.weights).map(|(c, w)| (*c, w)).collect();
    let mut acc = 0.0;
    for (c, w) in p.configs.iter().zip(&p.weights) {
        if w.is_zero() {
            continue;
        }
        let pw = w / &p.total;
        match qmap.get(c) {
            None => return Ok(f64::INFINITY),
            Some(qw) if qw.is_zero() => return Ok(f64::INFINITY),
            Some(qw) => {
                let qp = *qw / &q.total;
                acc += rat_to_f64(&pw) * (ln_rat(&pw) - ln_rat(&qp));
            }
        }
    }
    Ok(acc)
}

/// S(x) <= x·ln(e/x) on [0,1] (equality only in the limit x -> 0).
pub fn binary_entropy_bound_check(x: f64) -> Result<CheckReport> {
    let s = crate::numeric::binary_entropy(x)?;
    let rhs = if x == 0.0 { 0.0 } else { x * (1.0 - x.ln()) };
    Ok(CheckReport::le("binary_entropy <= x ln(e/x)", s, rhs, tol::FLOAT_ON_EXACT))
}

/// A distribution over bit-vectors of length k with exact weights.
#[derive(Clone, Debug)]
pub struct BitDist {
    pub k: usize,
    pub items: Vec<(u32, Rat)>, // one entry per outcome 0..2^k
}

impl BitDist {
    pub fn new(k: usize, weights: Vec<Rat>) -> Result<BitDist> {
        if weights.len() != 1 << k {
            return Err(Error::invalid("need 2^k weights"));
        }
        if weights.iter().any(|w| w < &Rat::zero()) {
            return Err(Error::invalid("negative weight"));
        }
        if weights.iter().all(|w| w.is_zero()) {
            return Err(Error::ZeroProbability("all weights vanish".into()));
        }
        Ok(BitDist { k, items: weights.into_iter().enumerate().map(|(i, w)| (i as u32, w)).collect() })
    }

    /// Random strictly-positive integer weights in 1..=64; for property tests.
    pub fn random(k: usize, rng: &mut ChaCha20Rng) -> BitDist {
        let weights = (0..1u32 << k)
            .map(|_| Rat::from_integer(rng.gen_range(1..=64).into()))
            .collect();
        BitDist::new(k, weights).expect("positive weights")
    }

    /// Random weights where some outcomes are zeroed (keeps at least one).
    pub fn random_with_zeros(k: usize, rng: &mut ChaCha20Rng) -> BitDist {
        loop {
            let weights: Vec<Rat> = (0..1u32 << k)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        Rat::zero()
                    } else {
                        Rat::from_integer(rng.gen_range(1..=64).into())
                    }
                })
                .collect();
            if let Ok(d) = BitDist::new(k, weights) {
                return d;
            }
        }
    }

    pub fn entropy(&self) -> f64 {
        grouped_entropy(&self.items, |&x| x).expect("BitDist is nonzero")
    }

    /// S(X_K) where K is a coordinate mask.
    pub fn marginal_entropy(&self, mask: u32) -> f64 {
        grouped_entropy(&self.items, |&x| x & mask).expect("BitDist is nonzero")
    }

    /// S(X_A | X_B).
    pub fn conditional_entropy(&self, a: u32, b: u32) -> f64 {
        conditional_entropy_grouped(&self.items, |&x| x & a, |&x| x & b).expect("BitDist is nonzero")
    }
}

/// Generalized Shearer bound: if K ⊥ X and P(j ∈ K) >= p for every
/// coordinate j, then S(X) <= (1/p) Σ_K P(K) S(X_K). The cover is a
/// distribution over coordinate masks; its marginals are validated first.
pub fn shearer_check(dist: &BitDist, cover: &[(u32, Rat)], p: &Rat) -> Result<CheckReport> {
    if !p.is_positive() || p > &Rat::one() {
        return Err(Error::invalid("need 0 < p <= 1"));
    }
    let total: Rat = cover.iter().map(|(_, w)| w.clone()).sum();
    if total.is_zero() {
        return Err(Error::invalid("empty cover"));
    }
    for j in 0..dist.k {
        let mass: Rat = cover
            .iter()
            .filter(|(m, _)| m >> j & 1 == 1)
            .map(|(_, w)| w.clone())
            .sum();
        if &(mass / &total) < p {
            return Err(Error::invalid(format!(
                "cover marginal at coordinate {j} is below p"
            )));
        }
    }
    let lhs = dist.entropy();
    let mean: f64 = neumaier_sum(
        cover
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(m, w)| rat_to_f64(&(w / &total)) * dist.marginal_entropy(*m)),
    );
    let rhs = mean / rat_to_f64(p);
    Ok(CheckReport::le("shearer: S(X) <= (1/p) E S(X_K)", lhs, rhs, tol::FLOAT_ON_EXACT))
}

/// S(X_{A∪B}) + S(X_{A∩B}) <= S(X_A) + S(X_B), scanned over every pair of
/// coordinate subsets; the report carries the worst pair as witness.
pub fn entropy_submodularity_check(dist: &BitDist) -> Result<CheckReport> {
    if dist.k > 4 {
        return Err(Error::CapExceeded { what: "coordinates for submodularity scan", got: dist.k, cap: 4 });
    }
    let marg: Vec<f64> = (0..1u32 << dist.k).map(|m| dist.marginal_entropy(m)).collect();
    let mut worst: Option<(f64, u32, u32)> = None;
    for a in 0..1u32 << dist.k {
        for b in a..1u32 << dist.k {
            let margin = marg[a as usize] + marg[b as usize]
                - marg[(a | b) as usize]
                - marg[(a & b) as usize];
            if worst.map_or(true, |(w, _, _)| margin < w) {
                worst = Some((margin, a, b));
            }
        }
    }
    let (margin, a, b) = worst.expect("at least the empty pair");
    let rep = CheckReport::le(
        "submodularity of marginal entropy",
        -margin,
        0.0,
        tol::FLOAT_ON_EXACT,
    );
    Ok(rep.with_witness(serde_json::json!({ "worst_pair": [a, b] })))
}

/// Chain rule S(X_A, X_B | X_C) = S(X_A | X_B, X_C) + S(X_B | X_C).
pub fn chain_rule_check(dist: &BitDist, a: u32, b: u32, c: u32) -> CheckReport {
    let lhs = dist.conditional_entropy(a | b, c);
    let rhs = dist.conditional_entropy(a, b | c) + dist.conditional_entropy(b, c);
    CheckReport::eq("chain rule", lhs, rhs, tol::FLOAT_ON_EXACT)
}

/// Conditioning on less: S(X | Y) <= S(X | f(Y)) for any function f.
pub fn conditioning_on_less_check(
    dist: &BitDist,
    a: u32,
    b: u32,
    f: impl Fn(u32) -> u32,
) -> CheckReport {
    let fine = dist.conditional_entropy(a, b);
    let coarse = conditional_entropy_grouped(&dist.items, |&x| x & a, |&x| f(x & b))
        .expect("BitDist is nonzero");
    CheckReport::le("conditioning on less", fine, coarse, tol::FLOAT_ON_EXACT)
}

/// Free energy I(f) = S(f) - E_f[H] for the hard-core H(σ) = -|σ| log λ,
/// i.e. I = S + log λ · E|σ|.
pub fn free_energy_i(dist: &ConfigDist, fug: &Fugacity) -> f64 {
    dist.entropy() + fug.log_lam() * rat_to_f64(&dist.mean_occupancy())
}

/// I(f) = log Z - KL(f ‖ μ) for any f supported inside supp(μ).
pub fn variational_identity_check(
    f_dist: &ConfigDist,
    mu: &ConfigDist,
    fug: &Fugacity,
) -> Result<CheckReport> {
    let lhs = free_energy_i(f_dist, fug);
    let kl = kl_divergence_exact(f_dist, mu)?;
    if kl.is_infinite() {
        return Err(Error::invalid("f is not absolutely continuous w.r.t. the model"));
    }
    let rhs = ln_rat(&mu.total) - kl;
    Ok(CheckReport::eq("variational identity: I(f) = log Z - KL(f||mu)", lhs, rhs, tol::FLOAT_ON_EXACT))
}

/// log ζ(E) = I(σ | E): conditioning the model on any positive event keeps
/// free energy equal to the log of the event's ζ-mass.
pub fn i_zeta_identity_check(
    mu: &ConfigDist,
    fug: &Fugacity,
    event: impl FnMut(u64) -> bool,
) -> Result<CheckReport> {
    let conditioned = mu.condition(event)?;
    let lhs = ln_rat(&conditioned.total);
    let rhs = free_energy_i(&conditioned, fug);
    Ok(CheckReport::eq("I-zeta identity: log zeta(E) = I(sigma|E)", lhs, rhs, tol::FLOAT_ON_EXACT))
}

/// One atom of a tagged joint: an exact weight, a configuration label, its
/// occupation number, a side-information label, and an event flag.
#[derive(Clone, Debug)]
pub struct TaggedAtom {
    pub w: Rat,
    pub sigma: u64,
    pub occ: u64,
    pub cond: u64,
    pub in_event: bool,
}

/// I(σ | X; E) = S(σ | X; E) + log λ · E[|σ| | E].
///
/// Entropy and energy are both taken under the event-conditioned law; the
/// side information X enters only through the entropy term.
pub fn conditional_free_energy_i(atoms: &[TaggedAtom], fug: &Fugacity) -> Result<f64> {
    let items: Vec<(TaggedAtom, Rat)> =
        atoms.iter().map(|a| (a.clone(), a.w.clone())).collect();
    let kept = condition_items(&items, |a| a.in_event)?;
    let s = conditional_entropy_grouped(&kept, |a| a.sigma, |a| a.cond)?;
    let total: Rat = kept.iter().map(|(_, w)| w.clone()).sum();
    let mean_occ: Rat = kept
        .iter()
        .map(|(a, w)| w * Rat::from_integer(a.occ.into()))
        .sum::<Rat>()
        / &total;
    Ok(s + fug.log_lam() * rat_to_f64(&mean_occ))
}

/// One atom of a (σ_v, X, Y) joint with an event flag; σ_v and X are bits.
#[derive(Clone, Debug)]
pub struct DominatedAtom {
    pub w: Rat,
    pub sigma_v: u8,
    pub x: u8,
    pub y: u64,
    pub in_event: bool,
}

/// For any joint with σ_v ≤ X pointwise and any positive event E:
///   I(σ_v | X, Y; E) ≤ log(1+λ) · E[X | E].
/// The domination premise is validated on every support atom.
pub fn prop_i_le_lam_tilde_check(atoms: &[DominatedAtom], fug: &Fugacity) -> Result<CheckReport> {
    for a in atoms {
        if a.sigma_v > 1 || a.x > 1 {
            return Err(Error::invalid("sigma_v and x must be bits"));
        }
        if !a.w.is_zero() && a.sigma_v > a.x {
            return Err(Error::invalid("domination premise fails: sigma_v > x on a support atom"));
        }
    }
    let items: Vec<(DominatedAtom, Rat)> =
        atoms.iter().map(|a| (a.clone(), a.w.clone())).collect();
    let kept = condition_items(&items, |a| a.in_event)?;
    let s = conditional_entropy_grouped(&kept, |a| a.sigma_v, |a| (a.x, a.y))?;
    let total: Rat = kept.iter().map(|(_, w)| w.clone()).sum();
    let mean_of = |f: &dyn Fn(&DominatedAtom) -> u64| -> Rat {
        kept.iter()
            .map(|(a, w)| w * Rat::from_integer(f(a).into()))
            .sum::<Rat>()
            / &total
    };
    let lhs = s + fug.log_lam() * rat_to_f64(&mean_of(&|a| a.sigma_v as u64));
    let rhs = fug.lam_tilde() * rat_to_f64(&mean_of(&|a| a.x as u64));
    Ok(CheckReport::le("I(sigma_v|X,Y;E) <= log(1+lambda) E[X|E]", lhs, rhs, tol::FLOAT_ON_EXACT))
}

fn i_marginal(dist: &BitDist, mask: u32, fug: &Fugacity) -> f64 {
    let mean_occ: Rat = dist
        .items
        .iter()
        .map(|(bits, w)| w * Rat::from_integer(u64::from((bits & mask).count_ones()).into()))
        .sum::<Rat>()
        / dist.items.iter().map(|(_, w)| w.clone()).sum::<Rat>();
    dist.marginal_entropy(mask) + fug.log_lam() * rat_to_f64(&mean_occ)
}

/// I(X_{A∪B}) ≤ I(X_A) + I(X_B) for disjoint coordinate sets: the energy
/// term splits exactly, so this inherits subadditivity from entropy.
pub fn i_subadditivity_check(
    dist: &BitDist,
    a: u32,
    b: u32,
    fug: &Fugacity,
) -> Result<CheckReport> {
    if a & b != 0 {
        return Err(Error::invalid("coordinate sets must be disjoint"));
    }
    let lhs = i_marginal(dist, a | b, fug);
    let rhs = i_marginal(dist, a, fug) + i_marginal(dist, b, fug);
    Ok(CheckReport::le("subadditivity of I over disjoint coordinate sets", lhs, rhs, tol::FLOAT_ON_EXACT))
}

/// Shearer with I in place of S. Because the energy term can carry either
/// sign, the cover must hit every coordinate with probability exactly p.
pub fn i_shearer_check(
    dist: &BitDist,
    cover: &[(u32, Rat)],
    p: &Rat,
    fug: &Fugacity,
) -> Result<CheckReport> {
    if p.is_zero() || p > &Rat::one() {
        return Err(Error::invalid("p must lie in (0, 1]"));
    }
    let total_cover: Rat = cover.iter().map(|(_, q)| q.clone()).sum();
    if total_cover != Rat::one() {
        return Err(Error::invalid("cover probabilities must sum to 1"));
    }
    for v in 0..dist.k {
        let hit: Rat = cover
            .iter()
            .filter(|(mask, _)| mask >> v & 1 == 1)
            .map(|(_, q)| q.clone())
            .sum();
        if hit != *p {
            return Err(Error::invalid(format!(
                "I-Shearer needs P(v in K) = p exactly; coordinate {v} is hit with a different probability"
            )));
        }
    }
    let full = (1u32 << dist.k) - 1;
    let lhs = i_marginal(dist, full, fug);
    let rhs: f64 = cover
        .iter()
        .map(|(mask, q)| rat_to_f64(q) * i_marginal(dist, *mask, fug))
        .sum::<f64>()
        / rat_to_f64(p);
    Ok(CheckReport::le("Shearer for I under the exact-hitting condition", lhs, rhs, tol::FLOAT_ON_EXACT))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::cycle;
    use crate::hardcore::exact_distribution;
    use crate::numeric::rat;
    use crate::seeding::rng_for;

    #[test]
    fn entropy_basics() {
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        let u = shannon_entropy(&[0.25; 4]).unwrap();
        assert!((u - 4f64.ln()).abs() < 1e-15);
        assert!(shannon_entropy(&[0.5, 0.6]).is_err());
        assert!(shannon_entropy(&[-0.1, 1.1]).is_err());
    }

    #[test]
    fn grouped_matches_direct() {
        let mut rng = rng_for(1, "entropy-test", 0);
        let d = BitDist::random(3, &mut rng);
        // S(X) = S(X_{all}) = joint entropy
        let direct = d.entropy();
        let via_mask = d.marginal_entropy(0b111);
        assert!((direct - via_mask).abs() < 1e-13);
        // S(X|X) = 0
        assert!(d.conditional_entropy(0b111, 0b111).abs() < 1e-12);
        // S(X|nothing) = S(X)
        assert!((d.conditional_entropy(0b111, 0) - direct).abs() < 1e-12);
    }

    #[test]
    fn shearer_uniform_cover() {
        let mut rng = rng_for(2, "entropy-test", 0);
        for _ in 0..20 {
            let d = BitDist::random(3, &mut rng);
            // uniform over the three 2-element subsets: P(j in K) = 2/3
            let cover = vec![
                (0b011u32, rat(1, 3)),
                (0b101u32, rat(1, 3)),
                (0b110u32, rat(1, 3)),
            ];
            let rep = shearer_check(&d, &cover, &rat(2, 3)).unwrap();
            assert!(rep.pass);
        }
        let d = BitDist::random(3, &mut rng);
        let cover = vec![(0b001u32, rat(1, 1))];
        assert!(shearer_check(&d, &cover, &rat(1, 2)).is_err()); // bad marginals
    }

    #[test]
    fn kl_and_variational() {
        let g = cycle(4).unwrap();
        let lam = Fugacity::parse("1").unwrap();
        let mu = exact_distribution(&g, &lam).unwrap();
        // f = μ gives KL 0 and I = log Z
        let rep = variational_identity_check(&mu, &mu, &lam).unwrap();
        assert!(rep.pass);
        assert!((free_energy_i(&mu, &lam) - 7f64.ln()).abs() < 1e-12);
        // point mass on the empty config: I = 0, KL = log Z - 0
        let point = mu.condition(|c| c == 0).unwrap();
        assert!(free_energy_i(&point, &lam).abs() < 1e-14);
        let rep = variational_identity_check(&point, &mu, &lam).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn i_zeta_on_events() {
        let g = cycle(6).unwrap();
        for s in ["1/2", "1", "2"] {
            let lam = Fugacity::parse(s).unwrap();
            let mu = exact_distribution(&g, &lam).unwrap();
            for threshold in 0..3 {
                let rep =
                    i_zeta_identity_check(&mu, &lam, |c| c.count_ones() >= threshold).unwrap();
                assert!(rep.pass, "lam={s} threshold={threshold}");
            }
        }
    }

    #[test]
    fn zero_probability_event_errors() {
        let g = cycle(4).unwrap();
        let lam = Fugacity::parse("1").unwrap();
        let mu = exact_distribution(&g, &lam).unwrap();
        assert!(matches!(
            i_zeta_identity_check(&mu, &lam, |c| c.count_ones() > 10),
            Err(Error::ZeroProbability(_))
        ));
    }

    #[test]
    fn conditional_entropy_float_joint() {
        // X uniform given Y=0, deterministic given Y=1; P(Y=0)=1/2
        let joint = vec![vec![0.25, 0.25], vec![0.5, 0.0]];
        let s = conditional_entropy(&joint).unwrap();
        assert!((s - 0.5 * 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn submodularity_all_pairs() {
        let mut rng = rng_for(3, "entropy-test", 0);
        for k in [3usize, 4] {
            for _ in 0..25 {
                let d = BitDist::random_with_zeros(k, &mut rng);
                assert!(entropy_submodularity_check(&d).unwrap().pass);
            }
        }
        let d = BitDist::random(5, &mut rng);
        assert!(matches!(entropy_submodularity_check(&d), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn chain_rule_and_coarsening() {
        let mut rng = rng_for(4, "entropy-test", 0);
        for _ in 0..20 {
            let d = BitDist::random_with_zeros(4, &mut rng);
            assert!(chain_rule_check(&d, 0b0001, 0b0110, 0b1000).pass);
            // f(Y) keeps only the low bit of the two-bit Y
            let rep = conditioning_on_less_check(&d, 0b0011, 0b1100, |y| y & 0b0100);
            assert!(rep.pass);
        }
    }

    fn hardcore_bitdist(n: usize, fug: &Fugacity) -> BitDist {
        let g = cycle(n).unwrap();
        let masks = g.neighbor_masks().unwrap();
        let weights: Vec<Rat> = (0..1u64 << n)
            .map(|c| {
                if (0..n).all(|v| c >> v & 1 == 0 || c & masks[v] == 0) {
                    fug.pow(c.count_ones() as u64)
                } else {
                    Rat::zero()
                }
            })
            .collect();
        BitDist::new(n, weights).unwrap()
    }

    #[test]
    fn conditional_i_reduces_to_plain_i() {
        let g = cycle(4).unwrap();
        for s in ["1/2", "1", "2"] {
            let lam = Fugacity::parse(s).unwrap();
            let mu = exact_distribution(&g, &lam).unwrap();
            let atoms: Vec<TaggedAtom> = mu
                .configs
                .iter()
                .zip(&mu.weights)
                .map(|(&c, w)| TaggedAtom {
                    w: w.clone(),
                    sigma: c,
                    occ: u64::from(c.count_ones()),
                    cond: 0,
                    in_event: true,
                })
                .collect();
            let i = conditional_free_energy_i(&atoms, &lam).unwrap();
            assert!((i - free_energy_i(&mu, &lam)).abs() < 1e-12, "lam={s}");
            // restricted to an event, I equals log of the event's zeta-mass
            let mut atoms = atoms;
            for a in &mut atoms {
                a.in_event = a.occ >= 1;
            }
            let i = conditional_free_energy_i(&atoms, &lam).unwrap();
            let zeta_e: Rat = atoms.iter().filter(|a| a.in_event).map(|a| a.w.clone()).sum();
            assert!((i - ln_rat(&zeta_e)).abs() < 1e-12, "lam={s}");
        }
    }

    #[test]
    fn domination_bound_on_cycle() {
        let g = cycle(4).unwrap();
        for s in ["1/2", "1", "2"] {
            let lam = Fugacity::parse(s).unwrap();
            let mu = exact_distribution(&g, &lam).unwrap();
            for restrict in [false, true] {
                let atoms: Vec<DominatedAtom> = mu
                    .configs
                    .iter()
                    .zip(&mu.weights)
                    .map(|(&c, w)| DominatedAtom {
                        w: w.clone(),
                        sigma_v: (c & 1) as u8,
                        // vertex 1 neighbors vertex 0, so sigma_0 <= 1 - sigma_1
                        x: (1 - (c >> 1 & 1)) as u8,
                        y: c >> 2 & 1,
                        in_event: !restrict || c.count_ones() >= 1,
                    })
                    .collect();
                let rep = prop_i_le_lam_tilde_check(&atoms, &lam).unwrap();
                assert!(rep.pass, "lam={s} restrict={restrict}");
            }
        }
        // a support atom with sigma_v > x must be rejected
        let bad = vec![DominatedAtom {
            w: Rat::one(),
            sigma_v: 1,
            x: 0,
            y: 0,
            in_event: true,
        }];
        assert!(prop_i_le_lam_tilde_check(&bad, &Fugacity::parse("1").unwrap()).is_err());
    }

    #[test]
    fn i_subadditivity_and_shearer() {
        for s in ["1/2", "1", "2"] {
            let lam = Fugacity::parse(s).unwrap();
            let d = hardcore_bitdist(4, &lam);
            assert!(i_subadditivity_check(&d, 0b0011, 0b1100, &lam).unwrap().pass, "lam={s}");
            assert!(i_subadditivity_check(&d, 0b0101, 0b1010, &lam).unwrap().pass, "lam={s}");
            assert!(i_subadditivity_check(&d, 0b0011, 0b0110, &lam).is_err());
            // the two diagonals each with probability 1/2 hit every vertex at 1/2
            let cover = vec![(0b0101u32, rat(1, 2)), (0b1010u32, rat(1, 2))];
            assert!(i_shearer_check(&d, &cover, &rat(1, 2), &lam).unwrap().pass, "lam={s}");
            // uneven cover violates the exact-hitting premise
            let uneven = vec![(0b0111u32, rat(1, 2)), (0b1010u32, rat(1, 2))];
            assert!(i_shearer_check(&d, &uneven, &rat(1, 2), &lam).is_err());
        }
    }
}
