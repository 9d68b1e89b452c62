//! Finite-horizon Green functions of the simple random walk and the local
//! expansion certificate they induce.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expansion::certificate::LocalExpansionCertificate;
use crate::graphs::Graph;
use crate::numeric::{rat_int, rat_to_f64, Int, Rat};
use crate::report::{tol, CheckReport};

const EXACT_CAP: usize = 32;

/// g_{u,w} = sum_{i=0}^{M_0-1} P^i(u,w): expected visits to w in the first
/// M_0 steps of a walk started at u. Exact rationals up to 32 vertices,
/// floats beyond.
pub enum GreenTable {
    Exact { m0: usize, g: Vec<Vec<Rat>> },
    Approx { m0: usize, g: Vec<Vec<f64>> },
}

impl GreenTable {
    pub fn m0(&self) -> usize {
        match self {
            GreenTable::Exact { m0, .. } | GreenTable::Approx { m0, .. } => *m0,
        }
    }
    pub fn value_f64(&self, u: usize, w: usize) -> f64 {
        match self {
            GreenTable::Exact { g, .. } => rat_to_f64(&g[u][w]),
            GreenTable::Approx { g, .. } => g[u][w],
        }
    }
    pub fn is_exact(&self) -> bool {
        matches!(self, GreenTable::Exact { .. })
    }
}

pub fn green_table(g: &Graph, m0: usize) -> Result<GreenTable> {
    let delta = g.delta()?;
    if m0 < 1 {
        return Err(Error::invalid("need M_0 >= 1"));
    }
    let n = g.n();
    if n <= EXACT_CAP {
        let inv_d = Rat::new(Int::one(), Int::from(delta));
        let mut table = Vec::with_capacity(n);
        for u in 0..n {
            let mut cur = vec![Rat::zero(); n];
            cur[u] = Rat::one();
            let mut acc = cur.clone();
            for _ in 1..m0 {
                let mut next = vec![Rat::zero(); n];
                for v in 0..n {
                    if cur[v].is_zero() {
                        continue;
                    }
                    let push = &cur[v] * &inv_d;
                    for &w in g.neighbors(v as u32) {
                        next[w as usize] += &push;
                    }
                }
                for v in 0..n {
                    acc[v] += &next[v];
                }
                cur = next;
            }
            table.push(acc);
        }
        Ok(GreenTable::Exact { m0, g: table })
    } else {
        let inv_d = 1.0 / delta as f64;
        let mut table = Vec::with_capacity(n);
        for u in 0..n {
            let mut cur = vec![0f64; n];
            cur[u] = 1.0;
            let mut acc = cur.clone();
            for _ in 1..m0 {
                let mut next = vec![0f64; n];
                for v in 0..n {
                    if cur[v] == 0.0 {
                        continue;
                    }
                    let push = cur[v] * inv_d;
                    for &w in g.neighbors(v as u32) {
                        next[w as usize] += push;
                    }
                }
                for v in 0..n {
                    acc[v] += next[v];
                }
                cur = next;
            }
            table.push(acc);
        }
        Ok(GreenTable::Approx { m0, g: table })
    }
}

/// g_{u,w} <= sqrt((g_{u,u}-1)(g_{w,w}-1)) for distinct vertices in the same
/// bipartition class; squares are compared so the exact path stays rational.
pub fn check_green_positivity(table: &GreenTable, g: &Graph) -> Result<CheckReport> {
    let parity = g
        .bipartition()
        .ok_or_else(|| Error::invalid("the Green comparison needs a bipartite graph"))?;
    g.delta()?;
    let n = g.n();
    let mut worst_margin = f64::INFINITY;
    let mut worst_pair = (0usize, 0usize);
    let mut pass = true;
    match table {
        GreenTable::Exact { g: tab, .. } => {
            for u in 0..n {
                for w in u + 1..n {
                    if parity[u] != parity[w] {
                        continue;
                    }
                    let lhs = &tab[u][w] * &tab[u][w];
                    let rhs =
                        (&tab[u][u] - Rat::one()) * (&tab[w][w] - Rat::one());
                    if lhs > rhs {
                        pass = false;
                    }
                    let margin = rat_to_f64(&(&rhs - &lhs));
                    if margin < worst_margin {
                        worst_margin = margin;
                        worst_pair = (u, w);
                    }
                }
            }
        }
        GreenTable::Approx { g: tab, .. } => {
            for u in 0..n {
                for w in u + 1..n {
                    if parity[u] != parity[w] {
                        continue;
                    }
                    let lhs = tab[u][w] * tab[u][w];
                    let rhs = (tab[u][u] - 1.0) * (tab[w][w] - 1.0);
                    let scale = rhs.abs().max(1.0);
                    if lhs > rhs + 1e-12 * scale {
                        pass = false;
                    }
                    let margin = rhs - lhs;
                    if margin < worst_margin {
                        worst_margin = margin;
                        worst_pair = (u, w);
                    }
                }
            }
        }
    }
    let mut rep = CheckReport::holds("walk Green-function off-diagonal bound", pass);
    rep.exact = table.is_exact();
    rep.margin = if worst_margin.is_finite() { worst_margin } else { 0.0 };
    let margin = rep.margin;
    Ok(rep.with_witness(serde_json::json!({
        "worst_pair": worst_pair,
        "worst_margin_of_squares": margin,
    })))
}

/// P(the walk W_0..W_{m0} started uniformly meets `targets`), exactly, by the
/// complementary survival dynamic program on the avoiding vertices.
pub fn walk_hit_probability(g: &Graph, m0: usize, targets: &[u32]) -> Result<Rat> {
    let delta = g.delta()?;
    let n = g.n();
    if targets.iter().any(|&v| v as usize >= n) {
        return Err(Error::invalid("target vertex out of range"));
    }
    let mut avoid = vec![true; n];
    for &v in targets {
        avoid[v as usize] = false;
    }
    let inv_d = Rat::new(Int::one(), Int::from(delta));
    let inv_n = Rat::new(Int::one(), Int::from(n));
    let mut cur: Vec<Rat> =
        (0..n).map(|v| if avoid[v] { inv_n.clone() } else { Rat::zero() }).collect();
    for _ in 0..m0 {
        let mut next = vec![Rat::zero(); n];
        for v in 0..n {
            if cur[v].is_zero() {
                continue;
            }
            let push = &cur[v] * &inv_d;
            for &w in g.neighbors(v as u32) {
                if avoid[w as usize] {
                    next[w as usize] += &push;
                }
            }
        }
        cur = next;
    }
    let survive: Rat = cur.into_iter().sum();
    Ok(Rat::one() - survive)
}

/// P(the walk traverses the edge uv within its m0 steps), exactly: survival
/// DP where the two transitions across uv are forbidden.
pub fn walk_edge_probability(g: &Graph, m0: usize, edge: (u32, u32)) -> Result<Rat> {
    let delta = g.delta()?;
    let n = g.n();
    let (a, b) = edge;
    if !g.has_edge(a, b) {
        return Err(Error::invalid("not an edge of the graph"));
    }
    let inv_d = Rat::new(Int::one(), Int::from(delta));
    let inv_n = Rat::new(Int::one(), Int::from(n));
    let mut cur: Vec<Rat> = vec![inv_n; n];
    for _ in 0..m0 {
        let mut next = vec![Rat::zero(); n];
        for v in 0..n {
            if cur[v].is_zero() {
                continue;
            }
            let push = &cur[v] * &inv_d;
            for &w in g.neighbors(v as u32) {
                let crosses = (v as u32 == a && w == b) || (v as u32 == b && w == a);
                if !crosses {
                    next[w as usize] += &push;
                }
            }
        }
        cur = next;
    }
    let survive: Rat = cur.into_iter().sum();
    Ok(Rat::one() - survive)
}

/// Certificate from the walk trace. The premise bounds expected returns:
/// g_{v,v} - 1 <= (C_0 - 1)/delta for every v — else an error naming the
/// worst offender. On success the per-vertex neighborhood-hit bound
/// P(W meets N(v)) >= (M_0/C_0)(delta/|V|) is verified exactly.
pub fn local_expansion_from_walk(
    g: &Graph,
    m0: usize,
    c0: &Rat,
) -> Result<(LocalExpansionCertificate, CheckReport)> {
    let delta = g.delta()?;
    let n = g.n();
    if n > EXACT_CAP {
        return Err(Error::CapExceeded { what: "vertices for exact walk analysis", got: n, cap: EXACT_CAP });
    }
    let table = green_table(g, m0)?;
    let tab = match &table {
        GreenTable::Exact { g, .. } => g,
        GreenTable::Approx { .. } => unreachable!("n <= EXACT_CAP"),
    };
    let allowed = (c0 - Rat::one()) / rat_int(delta as i64);
    let mut worst: Option<(usize, Rat)> = None;
    for v in 0..n {
        let excess = &tab[v][v] - Rat::one();
        if excess > allowed && worst.as_ref().map_or(true, |(_, w)| excess > *w) {
            worst = Some((v, excess));
        }
    }
    if let Some((v, excess)) = worst {
        return Err(Error::invalid(format!(
            "walk returns too often: vertex {v} has expected surplus visits {excess} > (C_0-1)/delta = {allowed}"
        )));
    }
    let cert = LocalExpansionCertificate::new(
        c0.clone(),
        rat_int(m0 as i64),
        format!("trace of a {m0}-step uniform-start random walk"),
    )?;
    // per-vertex: P(W meets N(v)) >= (M_0/C_0)(delta/n)
    let bound = rat_int(m0 as i64) / c0 * rat_int(delta as i64) / rat_int(n as i64);
    let mut worst_margin: Option<Rat> = None;
    let mut worst_v = 0usize;
    for v in 0..n {
        let p = walk_hit_probability(g, m0, g.neighbors(v as u32))?;
        let margin = &p - &bound;
        if worst_margin.as_ref().map_or(true, |m| margin < *m) {
            worst_margin = Some(margin);
            worst_v = v;
        }
    }
    let worst_margin = worst_margin.expect("nonempty graph");
    let mut rep = CheckReport::holds(
        "walk neighborhood-hit bound P(W meets N(v)) >= (M_0/C_0)(delta/|V|)",
        !worst_margin.is_negative(),
    );
    rep.lhs = rat_to_f64(&(&bound + &worst_margin));
    rep.rhs = rat_to_f64(&bound);
    rep.margin = rat_to_f64(&worst_margin);
    rep.tolerance = tol::EXACT;
    Ok((cert, rep.with_witness(serde_json::json!({ "worst_vertex": worst_v }))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{cycle, hypercube, torus};
    use crate::numeric::rat;

    #[test]
    fn c4_two_steps_by_hand() {
        // one step from v reaches each neighbor with prob 1/2; g over
        // {P^0, P^1}: diagonal 1, neighbors 1/2, opposite corner 0
        let g = cycle(4).unwrap();
        let t = green_table(&g, 2).unwrap();
        let tab = match &t {
            GreenTable::Exact { g, .. } => g,
            _ => panic!(),
        };
        assert_eq!(tab[0][0], rat(1, 1));
        assert_eq!(tab[0][1], rat(1, 2));
        assert_eq!(tab[0][2], rat(0, 1));
        assert_eq!(tab[0][3], rat(1, 2));
        // row sums = M_0
        for u in 0..4 {
            let s: Rat = tab[u].iter().cloned().sum();
            assert_eq!(s, rat(2, 1));
        }
        // symmetric for a regular graph
        for u in 0..4 {
            for w in 0..4 {
                assert_eq!(tab[u][w], tab[w][u]);
            }
        }
    }

    #[test]
    fn positivity_on_small_graphs() {
        let g = cycle(4).unwrap();
        let t = green_table(&g, 2).unwrap();
        let rep = check_green_positivity(&t, &g).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.margin, 0.0); // 0 <= 0 exactly at opposite corners

        let q3 = hypercube(3).unwrap();
        let t = green_table(&q3, 4).unwrap();
        assert!(check_green_positivity(&t, &q3).unwrap().pass);

        let z42 = torus(4, 2).unwrap();
        let t = green_table(&z42, 8).unwrap();
        assert!(check_green_positivity(&t, &z42).unwrap().pass);
    }

    #[test]
    fn walk_cert_on_c4() {
        let g = cycle(4).unwrap();
        // M_0 = 2, C_0 = 1: no returns possible in one extra step (parity)
        let (cert, rep) = local_expansion_from_walk(&g, 2, &rat(1, 1)).unwrap();
        assert_eq!(cert.m_le, rat(2, 1));
        assert!(rep.pass, "{rep}");
        // the bound is met with equality: P(W meets N(v)) = 1 = (2/1)(2/4)
        assert_eq!(rep.margin, 0.0);

        // M_0 = 4 walks can return: premise fails
        let err = local_expansion_from_walk(&g, 4, &rat(1, 1)).unwrap_err();
        assert!(format!("{err}").contains("vertex"));
    }

    #[test]
    fn walk_cert_on_q3_and_torus() {
        let q3 = hypercube(3).unwrap();
        let (_, rep) = local_expansion_from_walk(&q3, 2, &rat(1, 1)).unwrap();
        assert!(rep.pass, "{rep}");
        // Z_4^2 with a generous C_0
        let g = torus(4, 2).unwrap();
        let (_, rep) = local_expansion_from_walk(&g, 4, &rat(3, 1)).unwrap();
        assert!(rep.pass, "{rep}");
    }

    #[test]
    fn edge_traversal_union_bound() {
        // P(uv traversed) <= M_0 / |E| for every edge
        for (g, m0) in [
            (cycle(4).unwrap(), 3usize),
            (hypercube(3).unwrap(), 4),
            (torus(4, 2).unwrap(), 5),
        ] {
            let bound = rat_int(m0 as i64) / rat_int(g.edges().len() as i64);
            for &e in g.edges() {
                let p = walk_edge_probability(&g, m0, e).unwrap();
                assert!(p <= bound, "edge {e:?}: {p} > {bound}");
            }
        }
    }

    #[test]
    fn hit_probability_sanity() {
        let g = cycle(4).unwrap();
        // target = all vertices: hit at time 0 with certainty
        let p = walk_hit_probability(&g, 1, &[0, 1, 2, 3]).unwrap();
        assert_eq!(p, rat(1, 1));
        // target = one vertex, 0 steps of movement: P = 1/4
        let p = walk_hit_probability(&g, 0, &[2]).unwrap();
        assert_eq!(p, rat(1, 4));
    }
}
