//! Dominating sets of tori via Hamming codes, and dominating trees: connected
//! subgraphs whose vertex set dominates the whole graph, of order at most
//! three times the dominating set.

use serde::Serialize;

use super::{build, hamming, Graph};
use crate::error::{Error, Result};

/// Closed domination: every vertex is in `set` or has a neighbor in it.
pub fn is_dominating(g: &Graph, set: &[u32]) -> bool {
    let mut hit = vec![false; g.n()];
    for &v in set {
        hit[v as usize] = true;
        for &w in g.neighbors(v) {
            hit[w as usize] = true;
        }
    }
    hit.into_iter().all(|h| h)
}

/// A dominating set of `Z_L^d` of size below `2 L^d / d`.
///
/// Writing `r` for the largest integer with `2^r - 1 <= d` and `d' = 2^r - 1`,
/// a vertex joins the set when the parities of its first `d'` coordinates spell
/// a Hamming codeword. For even `L` this dominates (flip one coordinate to
/// reach the nearest codeword) and has size exactly `L^d / (d'+1)`. For odd `L`
/// the same recipe is tried on shifted coordinates, scanning shift vectors
/// `b` in lexicographic order and returning the first whose set is small
/// enough; domination still holds because a parity can always be flipped by a
/// step in at least one direction.
pub fn dominating_set_torus(l: usize, d: usize) -> Result<Vec<u32>> {
    let g = build::torus(l, d)?; // validates l, d
    let n = g.n();
    let r = (1..=4).take_while(|&s| (1usize << s) - 1 <= d).last().unwrap_or(0);
    if r == 0 {
        return Err(Error::invalid("dominating_set_torus needs d >= 1"));
    }
    let dp = (1usize << r) - 1; // d' coordinates carry the code
    let code = hamming::hamming_code(r)?;
    let in_code = {
        let mut f = vec![false; 1 << dp];
        for &c in &code {
            f[c as usize] = true;
        }
        f
    };
    let bound = 2.0 * (n as f64) / d as f64;

    let build_set = |b: &[usize]| -> Vec<u32> {
        (0..n as u32)
            .filter(|&v| {
                let coords = build::torus_coords(l, d, v);
                let mut pat = 0usize;
                for i in 0..dp {
                    if (coords[i] + b[i]) % l % 2 == 1 {
                        pat |= 1 << i;
                    }
                }
                in_code[pat]
            })
            .collect()
    };

    if l % 2 == 0 {
        let set = build_set(&vec![0; dp]);
        debug_assert_eq!(set.len(), n / (dp + 1));
        return Ok(set);
    }
    // odd L: lexicographic scan over shifts of the coded coordinates
    let mut b = vec![0usize; dp];
    loop {
        let set = build_set(&b);
        if (set.len() as f64) < bound {
            return Ok(set);
        }
        let mut i = dp;
        loop {
            if i == 0 {
                return Err(Error::internal(format!(
                    "no shift gives a dominating set below 2 L^d / d for L = {l}, d = {d}"
                )));
            }
            i -= 1;
            b[i] += 1;
            if b[i] < l {
                break;
            }
            b[i] = 0;
        }
    }
}

/// A connected subgraph (vertices + edges of a tree).
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TreeSubgraph {
    pub verts: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
}

impl TreeSubgraph {
    pub fn order(&self) -> usize {
        self.verts.len()
    }

    /// Connected, acyclic, at least one edge, edges within `verts`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.edges.is_empty() {
            return Err(Error::invalid("tree subgraph must have at least one edge"));
        }
        if self.edges.len() + 1 != self.verts.len() {
            return Err(Error::invalid("edge count must be order - 1"));
        }
        let vs: std::collections::BTreeSet<u32> = self.verts.iter().copied().collect();
        if vs.len() != self.verts.len() {
            return Err(Error::invalid("duplicate vertex in tree"));
        }
        for &(u, v) in &self.edges {
            if !g.has_edge(u, v) {
                return Err(Error::invalid(format!("({u}, {v}) is not an edge of the host graph")));
            }
            if !vs.contains(&u) || !vs.contains(&v) {
                return Err(Error::invalid("tree edge endpoint outside vertex list"));
            }
        }
        // connectivity via union-find
        let idx: std::collections::BTreeMap<u32, usize> =
            vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..vs.len()).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, idx[&u]), find(&mut parent, idx[&v]));
            if a == b {
                return Err(Error::invalid("cycle in tree subgraph"));
            }
            parent[a] = b;
        }
        Ok(())
    }

    /// Deterministic root: the minimum-index vertex.
    pub fn root(&self) -> u32 {
        *self.verts.iter().min().expect("tree is nonempty")
    }
}

/// Grow a dominating tree through `dom`: connect the dominating set in the
/// auxiliary graph with edges between members at distance <= 3, take a BFS
/// spanning tree of that, lift its edges to lexicographically-least shortest
/// paths, and return a BFS spanning tree of the lifted union. The order is at
/// most `3 |dom|` (each lifted edge adds at most two interior vertices); a
/// singleton `dom` is padded with its smallest neighbor so the tree always has
/// an edge.
pub fn dominating_tree(g: &Graph, dom: &[u32]) -> Result<TreeSubgraph> {
    if dom.is_empty() {
        return Err(Error::invalid("empty dominating set"));
    }
    let mut dom: Vec<u32> = dom.to_vec();
    dom.sort_unstable();
    dom.dedup();
    if !is_dominating(g, &dom) {
        return Err(Error::invalid("the given set does not dominate the graph"));
    }
    if dom.len() == 1 {
        let v = dom[0];
        let w = *g
            .neighbors(v)
            .first()
            .ok_or_else(|| Error::invalid("dominating vertex has no neighbors"))?;
        let (a, b) = if v < w { (v, w) } else { (w, v) };
        return Ok(TreeSubgraph { verts: vec![a, b], edges: vec![(a, b)] });
    }

    // auxiliary spanning structure on the dominating set
    let k = dom.len();
    let mut aux_adj = vec![Vec::new(); k];
    for i in 0..k {
        let dist = g.bfs_dist(dom[i]);
        for j in 0..k {
            if i != j && dist[dom[j] as usize] <= 3 {
                aux_adj[i].push(j);
            }
        }
    }
    let mut seen = vec![false; k];
    let mut aux_tree_edges = Vec::new();
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for &j in &aux_adj[i] {
            if !seen[j] {
                seen[j] = true;
                aux_tree_edges.push((i, j));
                queue.push_back(j);
            }
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::invalid(
            "dominating set is not connected at distance 3; cannot grow a tree through it",
        ));
    }

    // lift auxiliary edges to short paths and collect the union subgraph
    let mut vert_set = std::collections::BTreeSet::new();
    let mut edge_set = std::collections::BTreeSet::new();
    for &(i, j) in &aux_tree_edges {
        let path = g.shortest_path(dom[i], dom[j])?;
        for w in &path {
            vert_set.insert(*w);
        }
        for pair in path.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            edge_set.insert(if a < b { (a, b) } else { (b, a) });
        }
    }

    // BFS spanning tree of the union, rooted at its smallest vertex
    let verts: Vec<u32> = vert_set.iter().copied().collect();
    let index: std::collections::BTreeMap<u32, usize> =
        verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut nbrs = vec![Vec::new(); verts.len()];
    for &(a, b) in &edge_set {
        nbrs[index[&a]].push(b);
        nbrs[index[&b]].push(a);
    }
    for l in nbrs.iter_mut() {
        l.sort_unstable();
    }
    let mut seen = vec![false; verts.len()];
    let mut tree_edges = Vec::new();
    let mut queue = std::collections::VecDeque::from([verts[0]]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &w in &nbrs[index[&u]] {
            if !seen[index[&w]] {
                seen[index[&w]] = true;
                tree_edges.push(if u < w { (u, w) } else { (w, u) });
                queue.push_back(w);
            }
        }
    }
    tree_edges.sort_unstable();
    let tree = TreeSubgraph { verts, edges: tree_edges };
    tree.validate(g)?;
    if tree.order() > 3 * k {
        return Err(Error::internal(format!(
            "dominating tree order {} exceeds 3 |D| = {}",
            tree.order(),
            3 * k
        )));
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::build::torus;

    #[test]
    fn torus_dominating_sets() {
        // d = 1, 2 use the length-1 zero code: every other column
        let s = dominating_set_torus(4, 1).unwrap();
        assert_eq!(s.len(), 2);
        let g = torus(4, 1).unwrap();
        assert!(is_dominating(&g, &s));

        let s = dominating_set_torus(4, 2).unwrap();
        assert_eq!(s.len(), 8); // L^d / 2
        assert!(is_dominating(&torus(4, 2).unwrap(), &s));

        // d = 3 uses the {000, 111} code: L^d / 4
        let s = dominating_set_torus(4, 3).unwrap();
        assert_eq!(s.len(), 16);
        assert!(is_dominating(&torus(4, 3).unwrap(), &s));

        // odd L
        let s = dominating_set_torus(5, 2).unwrap();
        assert!(is_dominating(&torus(5, 2).unwrap(), &s));
        assert!((s.len() as f64) < 2.0 * 25.0 / 2.0);

        let s = dominating_set_torus(3, 3).unwrap();
        assert!(is_dominating(&torus(3, 3).unwrap(), &s));
        assert!((s.len() as f64) < 2.0 * 27.0 / 3.0);
    }

    #[test]
    fn size_bound_two_over_d() {
        for (l, d) in [(2, 3), (4, 2), (4, 3), (6, 2), (3, 2), (5, 1), (8, 1)] {
            let s = dominating_set_torus(l, d).unwrap();
            let n = (l as f64).powi(d as i32);
            assert!((s.len() as f64) < 2.0 * n / d as f64, "L={l} d={d}: |D|={}", s.len());
        }
    }

    #[test]
    fn tree_through_dominating_set() {
        let g = torus(4, 2).unwrap();
        let dom = dominating_set_torus(4, 2).unwrap();
        let t = dominating_tree(&g, &dom).unwrap();
        t.validate(&g).unwrap();
        assert!(t.order() <= 3 * dom.len());
        assert!(is_dominating(&g, &t.verts));
        // every dominating vertex is in the tree
        for v in &dom {
            assert!(t.verts.contains(v));
        }
    }

    #[test]
    fn singleton_dom_padding() {
        let g = crate::graphs::build::complete_bipartite(1, 4).unwrap();
        let t = dominating_tree(&g, &[0]).unwrap();
        assert_eq!(t.order(), 2);
        t.validate(&g).unwrap();
    }
}
