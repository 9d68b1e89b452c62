//! Exposure schemes: a random subset A of the even side, revealed
//! independently of the configuration, and a derived "dense" subset B of the
//! odd side.  The density s = P(u ∈ B) must come out the same for every odd
//! vertex; everything downstream divides by it.

use std::collections::VecDeque;

use num::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graphs::{Graph, Side};
use crate::numeric::{rat, rat_int, rat_to_f64, Rat};
use crate::report::CheckReport;
use crate::seeding::rng_for;

/// How B is derived from the exposed set A.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BRule {
    /// B = odd vertices with at least two exposed neighbours.
    TwoExposedNeighbors,
    /// B = the whole odd side, regardless of A (density 1).
    WholeOddSide,
}

/// A ⊆ V_E sampled i.i.d. with inclusion probability `p_in`, plus the rule
/// deriving B ⊆ V_O.  The pair (A, B) never looks at the configuration.
#[derive(Clone, Debug)]
pub struct ExposureScheme {
    p_in: Rat,
    rule: BRule,
}

const ENUM_EVEN_CAP: usize = 16;

impl ExposureScheme {
    pub fn with_inclusion(p_in: Rat, rule: BRule) -> Result<Self> {
        if p_in <= Rat::zero() || p_in > Rat::one() {
            return Err(Error::invalid("inclusion probability must lie in (0, 1]"));
        }
        Ok(ExposureScheme { p_in, rule })
    }

    /// The default scheme: inclusion probability 1/δ, two-neighbour rule.
    pub fn default_for(g: &Graph) -> Result<Self> {
        let delta = g.delta()?;
        if delta < 2 {
            return Err(Error::invalid("the two-neighbour rule needs degree at least 2"));
        }
        Self::with_inclusion(rat(1, delta as i64), BRule::TwoExposedNeighbors)
    }

    /// Expose everything needed so that B is the whole odd side.  A itself is
    /// still i.i.d. with probability 1/δ; only the B-rule changes.
    pub fn whole_odd_side(g: &Graph) -> Result<Self> {
        let delta = g.delta()?;
        Self::with_inclusion(rat(1, delta as i64), BRule::WholeOddSide)
    }

    pub fn p_in(&self) -> &Rat {
        &self.p_in
    }
    pub fn rule(&self) -> BRule {
        self.rule
    }

    /// B as a vertex mask, given A as a vertex mask.
    pub fn b_of(&self, g: &Graph, a_mask: u64) -> Result<u64> {
        let odds = g.side_vertices(Side::O)?;
        let masks = g.neighbor_masks()?;
        let mut b = 0u64;
        for &u in &odds {
            let keep = match self.rule {
                BRule::TwoExposedNeighbors => (masks[u as usize] & a_mask).count_ones() >= 2,
                BRule::WholeOddSide => true,
            };
            if keep {
                b |= 1 << u;
            }
        }
        Ok(b)
    }

    /// The full law of A: (vertex mask, probability) with probability
    /// p^|A| (1-p)^(|V_E|-|A|).  Exponential in the even side, hence capped.
    pub fn enumerate_a(&self, g: &Graph) -> Result<Vec<(u64, Rat)>> {
        let evens = g.side_vertices(Side::E)?;
        let k = evens.len();
        if k > ENUM_EVEN_CAP {
            return Err(Error::CapExceeded {
                what: "even-side vertices for exposure enumeration",
                got: k,
                cap: ENUM_EVEN_CAP,
            });
        }
        let q = Rat::one() - &self.p_in;
        let mut p_pow = vec![Rat::one()];
        let mut q_pow = vec![Rat::one()];
        for i in 0..k {
            p_pow.push(&p_pow[i] * &self.p_in);
            q_pow.push(&q_pow[i] * &q);
        }
        let mut out = Vec::with_capacity(1 << k);
        for bits in 0u64..(1 << k) {
            let mut mask = 0u64;
            for (i, &v) in evens.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    mask |= 1 << v;
                }
            }
            let inside = bits.count_ones() as usize;
            out.push((mask, &p_pow[inside] * &q_pow[k - inside]));
        }
        Ok(out)
    }

    /// Sample A as a vertex mask.
    pub fn sample_a(&self, g: &Graph, rng: &mut impl Rng) -> Result<u64> {
        let evens = g.side_vertices(Side::E)?;
        let p = rat_to_f64(&self.p_in);
        let mut mask = 0u64;
        for &v in &evens {
            if rng.gen::<f64>() < p {
                mask |= 1 << v;
            }
        }
        Ok(mask)
    }

    /// Closed form for s = P(u ∈ B) on a δ-regular bipartite graph.
    pub fn density(&self, g: &Graph) -> Result<Rat> {
        let delta = g.delta()? as u64;
        match self.rule {
            BRule::WholeOddSide => Ok(Rat::one()),
            BRule::TwoExposedNeighbors => {
                let p = &self.p_in;
                let q = Rat::one() - p;
                let none = crate::numeric::rat_pow(&q, delta);
                let one = rat_int(delta as i64) * p * crate::numeric::rat_pow(&q, delta - 1);
                Ok(Rat::one() - none - one)
            }
        }
    }

    /// Enumerates the law of A, computes P(u ∈ B) for every odd vertex, and
    /// checks the values are all equal and match the closed form.
    pub fn density_check(&self, g: &Graph) -> Result<CheckReport> {
        let atoms = self.enumerate_a(g)?;
        let odds = g.side_vertices(Side::O)?;
        let mut per_u = vec![Rat::zero(); odds.len()];
        for (a, w) in &atoms {
            let b = self.b_of(g, *a)?;
            for (i, &u) in odds.iter().enumerate() {
                if b >> u & 1 == 1 {
                    per_u[i] += w;
                }
            }
        }
        let closed = self.density(g)?;
        let constant = per_u.iter().all(|x| x == &per_u[0]);
        let rep = CheckReport::exact_eq("exposure density matches its closed form", &per_u[0], &closed);
        let pass = rep.pass && constant;
        Ok(CheckReport {
            pass,
            witness: Some(serde_json::json!({
                "constant_across_odd_side": constant,
                "density": rat_to_f64(&closed),
                "atoms": atoms.len(),
            })),
            ..rep
        })
    }

    /// Monte-Carlo cross-check of the density at one odd vertex (3σ band).
    pub fn density_monte_carlo_check(&self, g: &Graph, trials: u64, seed: u64) -> Result<CheckReport> {
        if trials == 0 {
            return Err(Error::invalid("need at least one trial"));
        }
        let odds = g.side_vertices(Side::O)?;
        let u = odds[0];
        let s = rat_to_f64(&self.density(g)?);
        let mut rng = rng_for(seed, "exposure-density", 0);
        let mut hits = 0u64;
        for _ in 0..trials {
            let a = self.sample_a(g, &mut rng)?;
            if self.b_of(g, a)? >> u & 1 == 1 {
                hits += 1;
            }
        }
        let freq = hits as f64 / trials as f64;
        let band = 3.0 * (s * (1.0 - s) / trials as f64).sqrt();
        let mut rep = CheckReport::le(
            "sampled exposure density sits in the 3-sigma band",
            (freq - s).abs(),
            band,
            0.0,
        );
        rep.witness = Some(serde_json::json!({"freq": freq, "density": s, "trials": trials}));
        Ok(rep)
    }
}

/// Max-flow with exact rational capacities (Edmonds–Karp; shortest augmenting
/// paths, so termination does not depend on the capacities being integral).
fn max_flow_rat(n: usize, edges: &[(usize, usize, Rat)], s: usize, t: usize) -> Rat {
    let mut cap = vec![vec![Rat::zero(); n]; n];
    for (u, v, c) in edges {
        cap[*u][*v] += c;
    }
    let mut flow = Rat::zero();
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = VecDeque::new();
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for y in 0..n {
                if prev[y] == usize::MAX && !cap[x][y].is_zero() {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        // bottleneck along the path
        let mut bottleneck: Option<Rat> = None;
        let mut y = t;
        while y != s {
            let x = prev[y];
            let c = cap[x][y].clone();
            bottleneck = Some(match bottleneck {
                None => c,
                Some(b) => {
                    if c < b {
                        c
                    } else {
                        b
                    }
                }
            });
            y = x;
        }
        let b = bottleneck.unwrap();
        let mut y = t;
        while y != s {
            let x = prev[y];
            cap[x][y] -= &b;
            cap[y][x] += &b;
            y = x;
        }
        flow += b;
    }
}

pub(crate) const COUPLING_DEGREE_CAP: usize = 4;

/// Decides, by a transportation max-flow with exact capacities, whether the
/// scheme admits a coupling realising two i.i.d. uniform neighbours of u
/// inside A, conditionally on u ∈ B.  Supplies are the conditional law of
/// A ∩ N(u); demands are 1/δ² per ordered neighbour pair; an atom S can serve
/// (a, b) iff {a, b} ⊆ S.  The coupling exists iff the max flow equals 1.
pub fn two_uniform_neighbors_coupling_check(g: &Graph, scheme: &ExposureScheme) -> Result<CheckReport> {
    let delta = g.delta()?;
    if delta > COUPLING_DEGREE_CAP {
        return Err(Error::CapExceeded {
            what: "degree for the explicit coupling construction",
            got: delta,
            cap: COUPLING_DEGREE_CAP,
        });
    }
    if delta < 2 {
        return Err(Error::invalid("coupling needs degree at least 2"));
    }
    // By regularity and the i.i.d. law of A, the transportation problem looks
    // the same at every odd vertex: subsets of an abstract δ-element set.
    let p = scheme.p_in();
    let q = Rat::one() - p;
    let s = scheme.density(g)?;
    if s.is_zero() {
        return Err(Error::ZeroProbability("the odd-side density vanishes".into()));
    }
    let n_subsets = 1usize << delta;
    let n_pairs = delta * delta;
    let source = 0usize;
    let sink = 1 + n_subsets + n_pairs;
    let subset_node = |m: usize| 1 + m;
    let pair_node = |a: usize, b: usize| 1 + n_subsets + a * delta + b;

    let mut edges: Vec<(usize, usize, Rat)> = Vec::new();
    for m in 0..n_subsets {
        let k = (m as u32).count_ones() as u64;
        let keep = match scheme.rule() {
            BRule::TwoExposedNeighbors => k >= 2,
            BRule::WholeOddSide => true,
        };
        if !keep {
            continue;
        }
        let w = crate::numeric::rat_pow(p, k) * crate::numeric::rat_pow(&q, delta as u64 - k);
        let supply = w / &s;
        if supply.is_zero() {
            continue;
        }
        edges.push((source, subset_node(m), supply));
        for a in 0..delta {
            for b in 0..delta {
                if m >> a & 1 == 1 && m >> b & 1 == 1 {
                    edges.push((subset_node(m), pair_node(a, b), Rat::one()));
                }
            }
        }
    }
    let demand = rat(1, (delta * delta) as i64);
    for a in 0..delta {
        for b in 0..delta {
            edges.push((pair_node(a, b), sink, demand.clone()));
        }
    }
    let flow = max_flow_rat(sink + 1, &edges, source, sink);
    let mut rep = CheckReport::exact_eq("two-uniform-neighbours coupling mass", &flow, &Rat::one());
    rep.witness = Some(serde_json::json!({
        "degree": delta,
        "density": rat_to_f64(&s),
        "rule": format!("{:?}", scheme.rule()),
        "flow": rat_to_f64(&flow),
    }));
    Ok(rep)
}
