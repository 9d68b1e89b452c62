//! Graph constructors: tori, cycles, hypercubes, paths, complete bipartite
//! graphs, the linear gadget, edge stretching and blow-ups.

use super::{Graph, Side};
use crate::error::{Error, Result};

/// Row-major index of `coords` in `Z_L^d` (first coordinate most significant).
pub fn torus_index(l: usize, coords: &[usize]) -> u32 {
    let mut idx = 0usize;
    for &c in coords {
        debug_assert!(c < l);
        idx = idx * l + c;
    }
    idx as u32
}

pub fn torus_coords(l: usize, d: usize, mut idx: u32) -> Vec<usize> {
    let mut coords = vec![0usize; d];
    for i in (0..d).rev() {
        coords[i] = (idx as usize) % l;
        idx /= l as u32;
    }
    coords
}

/// The discrete torus `Z_L^d`. For `L >= 3` it is `2d`-regular; `L = 2` gives
/// the hypercube `Q_d` (the two directions along an axis coincide), which is
/// `d`-regular. Bipartite with coordinate-sum parity iff `L` is even; the even
/// class is side `E`.
pub fn torus(l: usize, d: usize) -> Result<Graph> {
    if l < 2 || d == 0 {
        return Err(Error::invalid(format!("torus needs L >= 2 and d >= 1, got L = {l}, d = {d}")));
    }
    let n = l
        .checked_pow(d as u32)
        .filter(|&n| n <= (1 << 30))
        .ok_or_else(|| Error::invalid("torus too large"))?;
    let mut edges = Vec::new();
    for v in 0..n as u32 {
        let mut coords = torus_coords(l, d, v);
        for i in 0..d {
            let c = coords[i];
            coords[i] = (c + 1) % l;
            let w = torus_index(l, &coords);
            coords[i] = c;
            // the +1 step along each axis visits every edge exactly once,
            // except at l = 2 where +1 and -1 coincide (keep v < w only)
            if l > 2 || v < w {
                edges.push(if v < w { (v, w) } else { (w, v) });
            }
        }
    }
    let g = Graph::new(n, edges)?;
    if l % 2 == 0 {
        let parity = (0..n as u32)
            .map(|v| {
                let s: usize = torus_coords(l, d, v).iter().sum();
                if s % 2 == 0 {
                    Side::E
                } else {
                    Side::O
                }
            })
            .collect();
        g.with_parity(parity)
    } else {
        Ok(g)
    }
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::invalid("cycle needs n >= 3 (n = 2 is an edge: use torus(2,1))"));
    }
    torus(n, 1)
}

pub fn hypercube(d: usize) -> Result<Graph> {
    torus(2, d)
}

/// Path on `n` vertices `0 - 1 - ... - n-1`.
pub fn path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::invalid("empty path"));
    }
    let edges = (0..n.saturating_sub(1) as u32).map(|i| (i, i + 1)).collect();
    let g = Graph::new(n, edges)?;
    let parity = (0..n).map(|i| if i % 2 == 0 { Side::E } else { Side::O }).collect();
    g.with_parity(parity)
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    if a == 0 || b == 0 {
        return Err(Error::invalid("complete bipartite graph needs both sides nonempty"));
    }
    let mut edges = Vec::with_capacity(a * b);
    for u in 0..a as u32 {
        for v in 0..b as u32 {
            edges.push((u, a as u32 + v));
        }
    }
    let g = Graph::new(a + b, edges)?;
    let parity = (0..a + b).map(|i| if i < a { Side::E } else { Side::O }).collect();
    g.with_parity(parity)
}

/// The linear gadget `L_m`: a chain of `m` cube blocks with pendant endpoints.
/// Block k is a 3-cube with the edge 000–001 removed; the entry vertex is its
/// 000 corner, the exit its 001 corner. Consecutive blocks are joined exit to
/// entry, and the endpoints `lo = 0`, `hi = 8m+1` hang off the first entry and
/// last exit by one edge. Endpoints have degree 1, all interior vertices
/// degree 3; bipartite, with the two endpoints in opposite classes;
/// |V| = 8m + 2.
///
/// The broken cube edge matters: it keeps every maximum independent set of
/// the chain within one unit of a pure class, so the model orders as λ → ∞
/// (any crossing between classes costs at least one vertex).
pub fn linear_gadget(m: usize) -> Result<Graph> {
    if m == 0 {
        return Err(Error::invalid("linear gadget needs m >= 1 blocks"));
    }
    let n = 8 * m + 2;
    let mut edges = Vec::new();
    // vertex layout: 0 = lo endpoint, block k occupies 1+8k .. 8+8k indexed
    // by the cube coordinates, n-1 = hi endpoint
    let block = |k: usize| 1 + 8 * k;
    for k in 0..m {
        let base = block(k) as u32;
        for j in 0u32..8 {
            for bit in [1u32, 2, 4] {
                let jj = j ^ bit;
                if j < jj && !(j == 0 && jj == 1) {
                    edges.push((base + j, base + jj));
                }
            }
        }
        if k + 1 < m {
            edges.push((base + 1, block(k + 1) as u32));
        }
    }
    edges.push((0, block(0) as u32));
    edges.push((block(m - 1) as u32 + 1, n as u32 - 1));
    let g = Graph::new(n, edges)?;
    // lo is odd, entry corners even; parity inside a cube is popcount parity
    let mut parity = vec![Side::O; n];
    for k in 0..m {
        for j in 0..8 {
            parity[block(k) + j] = if (j as u32).count_ones() % 2 == 0 { Side::E } else { Side::O };
        }
    }
    parity[0] = Side::O;
    parity[n - 1] = Side::E;
    g.with_parity(parity)
}

/// Endpoint vertices of [`linear_gadget`].
pub fn gadget_endpoints(m: usize) -> (u32, u32) {
    (0, 8 * m as u32 + 1)
}

/// `m`-fold blow-up: vertices `(v, i)`, `i < m`, with `(v,i) ~ (u,j)` iff
/// `uv` is an edge (copies of one vertex are NOT adjacent). Index `v*m + i`.
pub fn blow_up(g: &Graph, m: usize) -> Result<Graph> {
    if m == 0 {
        return Err(Error::invalid("blow-up multiplicity must be >= 1"));
    }
    let n = g.n() * m;
    let mut edges = Vec::with_capacity(g.edge_count() * m * m);
    for &(u, v) in g.edges() {
        for i in 0..m as u32 {
            for j in 0..m as u32 {
                edges.push((u * m as u32 + i, v * m as u32 + j));
            }
        }
    }
    let out = Graph::new(n, edges)?;
    match g.bipartition() {
        Some(p) => {
            let parity = (0..n).map(|x| p[x / m]).collect();
            out.with_parity(parity)
        }
        None => Ok(out),
    }
}

/// Replace every edge of `h` by a copy of `L_m`, identifying the gadget
/// endpoints with the edge's endpoints. `h`-vertices keep their degree; the
/// interior is 3-regular. Vertex layout: `h`-vertices keep indices `0..n_h`,
/// the gadget interiors follow edge by edge (6m vertices per edge, in the
/// gadget's own order). Bipartite iff `h` is (gadget endpoints land in
/// opposite classes).
pub fn stretch_by_gadget(h: &Graph, m: usize) -> Result<Graph> {
    if m == 0 {
        return Err(Error::invalid("gadget needs m >= 1 blocks"));
    }
    let gadget = linear_gadget(m)?;
    let g_int = 8 * m; // interior vertices per stretched edge
    let n = h.n() + h.edge_count() * g_int;
    let mut edges = Vec::new();
    for (ei, &(u, v)) in h.edges().iter().enumerate() {
        let base = (h.n() + ei * g_int) as u32;
        // gadget vertex g: 0 -> u, 8m+1 -> v, interior w -> base + (w-1)
        let map = |w: u32| -> u32 {
            if w == 0 {
                u
            } else if w as usize == 8 * m + 1 {
                v
            } else {
                base + w - 1
            }
        };
        for &(a, b) in gadget.edges() {
            let (x, y) = (map(a), map(b));
            edges.push(if x < y { (x, y) } else { (y, x) });
        }
    }
    let out = Graph::new(n, edges)?;
    match h.bipartition() {
        Some(ph) => {
            let mut parity = vec![Side::E; n];
            let gp = gadget.parity().expect("gadget is built with parity");
            for (i, s) in ph.iter().enumerate() {
                parity[i] = *s;
            }
            for (ei, &(u, _)) in h.edges().iter().enumerate() {
                let base = h.n() + ei * g_int;
                // gadget parity has lo = O; if u is E, flip the whole copy
                let flip = ph[u as usize] == Side::E;
                for w in 1..=8 * m {
                    let s = gp[w];
                    parity[base + w - 1] = if flip { s.flip() } else { s };
                }
            }
            out.with_parity(parity)
        }
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_basics() {
        let c4 = torus(4, 1).unwrap();
        assert_eq!(c4.n(), 4);
        assert_eq!(c4.edge_count(), 4);
        assert_eq!(c4.regular_degree(), Some(2));

        let t = torus(4, 2).unwrap();
        assert_eq!(t.n(), 16);
        assert_eq!(t.edge_count(), 32);
        assert_eq!(t.regular_degree(), Some(4));
        assert!(t.is_connected());

        // neighbors of (0,0) in Z_4^2: (0,1), (0,3), (1,0), (3,0)
        assert_eq!(t.neighbors(0), &[1, 3, 4, 12]);

        let q3 = hypercube(3).unwrap();
        assert_eq!(q3.n(), 8);
        assert_eq!(q3.regular_degree(), Some(3));
        assert_eq!(q3.edge_count(), 12);

        assert!(torus(5, 2).unwrap().bipartition().is_none());
    }

    #[test]
    fn torus_indexing_roundtrip() {
        for idx in 0..27u32 {
            let c = torus_coords(3, 3, idx);
            assert_eq!(torus_index(3, &c), idx);
        }
        assert_eq!(torus_index(4, &[1, 2]), 6);
    }

    #[test]
    fn k22_is_c4() {
        let g = complete_bipartite(2, 2).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.regular_degree(), Some(2));
    }

    #[test]
    fn gadget_shape() {
        for m in 1..=3 {
            let g = linear_gadget(m).unwrap();
            let (lo, hi) = gadget_endpoints(m);
            assert_eq!(g.n(), 8 * m + 2);
            assert_eq!(g.degree(lo), 1);
            assert_eq!(g.degree(hi), 1);
            for v in 1..(g.n() as u32 - 1) {
                assert_eq!(g.degree(v), 3, "interior vertex {v}");
            }
            assert!(g.is_connected());
            let p = g.parity().unwrap();
            assert_ne!(p[lo as usize], p[hi as usize]);
            // balanced classes
            let e = p.iter().filter(|s| **s == Side::E).count();
            assert_eq!(e, g.n() / 2);
        }
    }

    #[test]
    fn gadget_ground_states_are_near_pure() {
        // the broken cube edge forbids free domain walls: every maximum
        // independent set keeps one class at occupancy <= 1, which is what
        // sends the balance-event mass to 0 as the fugacity grows
        let g = linear_gadget(1).unwrap();
        let masks = g.neighbor_masks().unwrap();
        let mut best = 0u32;
        crate::hardcore::for_each_independent_set(&masks, |c| best = best.max(c.count_ones()));
        assert_eq!(best, 5);
        let mut worst_minority = 0;
        crate::hardcore::for_each_independent_set(&masks, |c| {
            if c.count_ones() == best {
                worst_minority = worst_minority.max(crate::order::m_param(&g, c).unwrap());
            }
        });
        assert_eq!(worst_minority, 1);
    }

    #[test]
    fn blow_up_shape() {
        let g = blow_up(&torus(2, 1).unwrap(), 3).unwrap(); // K_2 blown up -> K_{3,3}
        assert_eq!(g.n(), 6);
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(g.edge_count(), 9);
        assert!(!g.has_edge(0, 1)); // copies not adjacent
        assert!(g.has_edge(0, 3));
    }

    #[test]
    fn stretch_shape() {
        // K_{3,3} stretched: 3-regular everywhere, bipartite
        let h = complete_bipartite(3, 3).unwrap();
        let g = stretch_by_gadget(&h, 2).unwrap();
        assert_eq!(g.n(), 6 + 9 * 16);
        assert_eq!(g.regular_degree(), Some(3));
        assert!(g.is_connected());
        assert!(g.bipartition().is_some());
    }
}
