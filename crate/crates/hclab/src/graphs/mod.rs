//! Finite simple graphs with an optional bipartition into an even side `E`
//! (where the coarse field lives) and an odd side `O`.

mod autom;
mod build;
mod domtree;
mod hamming;
mod io;

pub use autom::{
    all_torus_automorphisms, sample_torus_automorphism, torus_automorphism, TorusAutomorphism,
};
pub use build::{
    blow_up, complete_bipartite, cycle, gadget_endpoints, hypercube, linear_gadget, path,
    stretch_by_gadget, torus, torus_coords, torus_index,
};
pub use domtree::{dominating_set_torus, dominating_tree, is_dominating, TreeSubgraph};
pub use hamming::hamming_code;
pub use io::{parse_graph, read_graph, render_graph, write_graph};

use crate::error::{Error, Result};

/// Side of the bipartition. `E` carries the coarse field; on tori with even `L`
/// it is the even-coordinate-sum class.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    E,
    O,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::E => Side::O,
            Side::O => Side::E,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<u32>>,
    parity: Option<Vec<Side>>,
}

impl Graph {
    /// Simple graph on vertices `0..n`. Edges are normalised to `u < v`,
    /// sorted; self-loops and duplicates are rejected.
    pub fn new(n: usize, mut edges: Vec<(u32, u32)>) -> Result<Graph> {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if e.0 == e.1 {
                return Err(Error::invalid(format!("self-loop at vertex {}", e.0)));
            }
            if e.1 as usize >= n {
                return Err(Error::invalid(format!("edge ({}, {}) out of range n = {n}", e.0, e.1)));
            }
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate edge"));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for a in adj.iter_mut() {
            a.sort_unstable();
        }
        Ok(Graph { n, edges, adj, parity: None })
    }

    /// Attach an explicit bipartition; it must 2-color every edge.
    pub fn with_parity(mut self, parity: Vec<Side>) -> Result<Graph> {
        if parity.len() != self.n {
            return Err(Error::invalid("parity vector length mismatch"));
        }
        for &(u, v) in &self.edges {
            if parity[u as usize] == parity[v as usize] {
                return Err(Error::invalid(format!("edge ({u}, {v}) is not 2-colored by the parity")));
            }
        }
        self.parity = Some(parity);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }
    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Uniform degree, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let d = self.degree(0);
        (1..self.n as u32).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn delta(&self) -> Result<usize> {
        self.regular_degree().ok_or_else(|| Error::invalid("graph is not regular"))
    }

    /// Stored parity if present, else a fresh BFS 2-coloring (component roots
    /// get side `E`, smallest-index-first), else `None` for odd cycles.
    pub fn bipartition(&self) -> Option<Vec<Side>> {
        if let Some(p) = &self.parity {
            return Some(p.clone());
        }
        let mut side = vec![None; self.n];
        for root in 0..self.n {
            if side[root].is_some() {
                continue;
            }
            side[root] = Some(Side::E);
            let mut queue = std::collections::VecDeque::from([root as u32]);
            while let Some(u) = queue.pop_front() {
                let su = side[u as usize].unwrap();
                for &w in self.neighbors(u) {
                    match side[w as usize] {
                        None => {
                            side[w as usize] = Some(su.flip());
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    pub fn parity(&self) -> Option<&[Side]> {
        self.parity.as_deref()
    }

    pub fn side_vertices(&self, side: Side) -> Result<Vec<u32>> {
        let p = self
            .bipartition()
            .ok_or_else(|| Error::invalid("graph is not bipartite"))?;
        Ok((0..self.n as u32).filter(|&v| p[v as usize] == side).collect())
    }

    /// Per-vertex neighbor bitmasks; requires n <= 64.
    pub fn neighbor_masks(&self) -> Result<Vec<u64>> {
        if self.n > 64 {
            return Err(Error::CapExceeded { what: "vertices for bitmask ops", got: self.n, cap: 64 });
        }
        Ok(self
            .adj
            .iter()
            .map(|ns| ns.iter().fold(0u64, |m, &w| m | (1 << w)))
            .collect())
    }

    pub fn side_mask(&self, side: Side) -> Result<u64> {
        if self.n > 64 {
            return Err(Error::CapExceeded { what: "vertices for bitmask ops", got: self.n, cap: 64 });
        }
        Ok(self.side_vertices(side)?.iter().fold(0u64, |m, &v| m | (1 << v)))
    }

    pub fn bfs_dist(&self, src: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n];
        dist[src as usize] = 0;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Lexicographically smallest shortest path from `u` to `v` (inclusive):
    /// walk from `u`, always taking the smallest neighbor that decreases the
    /// BFS distance to `v`.
    pub fn shortest_path(&self, u: u32, v: u32) -> Result<Vec<u32>> {
        let dist = self.bfs_dist(v);
        if dist[u as usize] == u32::MAX {
            return Err(Error::invalid(format!("no path from {u} to {v}")));
        }
        let mut path = vec![u];
        let mut cur = u;
        while cur != v {
            let d = dist[cur as usize];
            let next = self
                .neighbors(cur)
                .iter()
                .copied()
                .find(|&w| dist[w as usize] + 1 == d)
                .expect("BFS distance must decrease along some neighbor");
            path.push(next);
            cur = next;
        }
        Ok(path)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.bfs_dist(0).iter().all(|&d| d != u32::MAX)
    }

    /// Induced subgraph on `verts` (deduped, sorted). Returns the subgraph and
    /// the map from new indices to original vertices.
    pub fn induced(&self, verts: &[u32]) -> Result<(Graph, Vec<u32>)> {
        let mut vs: Vec<u32> = verts.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let mut back = vec![u32::MAX; self.n];
        for (i, &v) in vs.iter().enumerate() {
            if v as usize >= self.n {
                return Err(Error::invalid(format!("vertex {v} out of range")));
            }
            back[v as usize] = i as u32;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            let (iu, iv) = (back[u as usize], back[v as usize]);
            if iu != u32::MAX && iv != u32::MAX {
                edges.push((iu, iv));
            }
        }
        let mut g = Graph::new(vs.len(), edges)?;
        if let Some(p) = &self.parity {
            let sub: Vec<Side> = vs.iter().map(|&v| p[v as usize]).collect();
            g = g.with_parity(sub)?;
        }
        Ok((g, vs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, vec![(0, 0)]).is_err());
        assert!(Graph::new(3, vec![(0, 3)]).is_err());
        assert!(Graph::new(3, vec![(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn bipartition_of_even_cycle() {
        let g = cycle(6).unwrap();
        let p = g.bipartition().unwrap();
        assert_eq!(p[0], Side::E);
        for &(u, v) in g.edges() {
            assert_ne!(p[u as usize], p[v as usize]);
        }
        assert!(cycle(5).unwrap().bipartition().is_none());
    }

    #[test]
    fn lex_shortest_path() {
        // 4-cycle 0-1-3-2-0: two shortest paths 0->3, lexicographic picks via 1
        let g = Graph::new(4, vec![(0, 1), (1, 3), (2, 3), (0, 2)]).unwrap();
        assert_eq!(g.shortest_path(0, 3).unwrap(), vec![0, 1, 3]);
    }

    #[test]
    fn induced_keeps_parity() {
        let g = cycle(6).unwrap();
        let (sub, map) = g.induced(&[0, 1, 2]).unwrap();
        assert_eq!(sub.edge_count(), 2);
        assert_eq!(map, vec![0, 1, 2]);
        assert!(sub.bipartition().is_some());
    }
}
