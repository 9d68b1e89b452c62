//! The per-axis dihedral action on Z_L^d used to disseminate block-local
//! observables: rotations v -> v + 2nl and reflections v -> 2nl - v, acting
//! coordinatewise, with [0,l]^d as fundamental domain.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{torus_coords, torus_index};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReflectionSpec {
    pub l: usize,
    pub big_l: usize,
    pub d: usize,
}

impl ReflectionSpec {
    pub fn new(l: usize, big_l: usize, d: usize) -> Result<Self> {
        if l < 1 || d < 1 {
            return Err(Error::invalid("need block side >= 1 and dimension >= 1"));
        }
        if big_l < 2 * l || big_l % (2 * l) != 0 {
            return Err(Error::invalid("torus side must be a positive multiple of twice the block side"));
        }
        Ok(ReflectionSpec { l, big_l, d })
    }

    /// elements per axis
    pub fn axis_order(&self) -> usize {
        self.big_l / self.l
    }

    /// |D^d|
    pub fn group_order(&self) -> usize {
        self.axis_order().pow(self.d as u32)
    }

    pub fn n_vertices(&self) -> usize {
        self.big_l.pow(self.d as u32)
    }

    /// Coordinate tuples of [0,l]^d in lexicographic order; index in this
    /// list is the bit position used for block patterns.
    pub fn block_coords(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..self.d {
            let mut next = Vec::with_capacity(out.len() * (self.l + 1));
            for prefix in &out {
                for c in 0..=self.l {
                    let mut t = prefix.clone();
                    t.push(c);
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }

    pub fn block_size(&self) -> usize {
        (self.l + 1).pow(self.d as u32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AxisElement {
    /// v -> v + 2nl
    Rotation(usize),
    /// v -> 2nl - v
    Reflection(usize),
}

impl AxisElement {
    fn apply(&self, l: usize, big_l: usize, c: usize) -> usize {
        match *self {
            AxisElement::Rotation(n) => (c + 2 * n * l) % big_l,
            AxisElement::Reflection(n) => (2 * n * l + big_l - c % big_l) % big_l,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupElement {
    pub axes: Vec<AxisElement>,
}

impl GroupElement {
    pub fn apply_coords(&self, spec: &ReflectionSpec, coords: &[usize]) -> Vec<usize> {
        coords
            .iter()
            .zip(&self.axes)
            .map(|(&c, ax)| ax.apply(spec.l, spec.big_l, c))
            .collect()
    }

    pub fn apply_vertex(&self, spec: &ReflectionSpec, v: u32) -> u32 {
        let coords = torus_coords(spec.big_l, spec.d, v);
        torus_index(spec.big_l, &self.apply_coords(spec, &coords))
    }

    /// Full vertex permutation.
    pub fn table(&self, spec: &ReflectionSpec) -> Vec<u32> {
        (0..spec.n_vertices() as u32).map(|v| self.apply_vertex(spec, v)).collect()
    }

    /// (σ τ)_v = σ_{τ v}, i.e. bit v of the result reads bit τ(v) of σ.
    pub fn push_config(&self, spec: &ReflectionSpec, config: u64) -> u64 {
        let mut out = 0u64;
        for v in 0..spec.n_vertices() as u32 {
            if config >> self.apply_vertex(spec, v) & 1 == 1 {
                out |= 1 << v;
            }
        }
        out
    }
}

/// All (L/l)^d elements of the product group.
pub fn group_elements(spec: &ReflectionSpec) -> Vec<GroupElement> {
    let per_axis: Vec<AxisElement> = (0..spec.big_l / (2 * spec.l))
        .flat_map(|n| [AxisElement::Rotation(n), AxisElement::Reflection(n)])
        .collect();
    let mut out: Vec<Vec<AxisElement>> = vec![vec![]];
    for _ in 0..spec.d {
        let mut next = Vec::with_capacity(out.len() * per_axis.len());
        for prefix in &out {
            for &ax in &per_axis {
                let mut t = prefix.clone();
                t.push(ax);
                next.push(t);
            }
        }
        out = next;
    }
    out.into_iter().map(|axes| GroupElement { axes }).collect()
}

/// The unique element mapping [0,l]^d onto [0,l]^d + l·s (as vertex sets).
pub fn tau_s(spec: &ReflectionSpec, s: &[usize]) -> Result<GroupElement> {
    if s.len() != spec.d {
        return Err(Error::invalid("shift vector length must equal the dimension"));
    }
    let order = spec.axis_order();
    let half = spec.big_l / (2 * spec.l);
    let axes = s
        .iter()
        .map(|&si| {
            let si = si % order;
            if si % 2 == 0 {
                AxisElement::Rotation(si / 2)
            } else {
                AxisElement::Reflection(((si + 1) / 2) % half)
            }
        })
        .collect();
    Ok(GroupElement { axes })
}

/// The image of the fundamental domain under `tau` as a set of torus indices.
pub fn block_image(spec: &ReflectionSpec, tau: &GroupElement) -> Vec<u32> {
    let mut out: Vec<u32> = spec
        .block_coords()
        .iter()
        .map(|c| torus_index(spec.big_l, &tau.apply_coords(spec, c)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::torus;
    use crate::hardcore::{for_each_independent_set, is_independent};
    use std::collections::BTreeSet;

    fn specs() -> Vec<ReflectionSpec> {
        vec![
            ReflectionSpec::new(1, 4, 1).unwrap(),
            ReflectionSpec::new(1, 6, 1).unwrap(),
            ReflectionSpec::new(3, 6, 1).unwrap(),
            ReflectionSpec::new(3, 12, 1).unwrap(),
            ReflectionSpec::new(1, 4, 2).unwrap(),
            ReflectionSpec::new(3, 6, 2).unwrap(),
            ReflectionSpec::new(1, 2, 1).unwrap(),
        ]
    }

    #[test]
    fn group_sizes() {
        let two = ReflectionSpec::new(3, 6, 1).unwrap();
        assert_eq!(group_elements(&two).len(), 2);
        let four = ReflectionSpec::new(1, 4, 1).unwrap();
        assert_eq!(group_elements(&four).len(), 4);
        let square = ReflectionSpec::new(3, 6, 2).unwrap();
        assert_eq!(group_elements(&square).len(), 4);
        assert!(ReflectionSpec::new(3, 8, 1).is_err()); // 8 not a multiple of 6
    }

    #[test]
    fn small_dihedral_actions_by_hand() {
        // l=3, L=6, d=1: {identity, v -> -v}
        let spec = ReflectionSpec::new(3, 6, 1).unwrap();
        let tables: BTreeSet<Vec<u32>> =
            group_elements(&spec).iter().map(|e| e.table(&spec)).collect();
        let id: Vec<u32> = (0..6).collect();
        let neg: Vec<u32> = (0..6).map(|v| (6 - v) % 6).collect();
        assert_eq!(tables, BTreeSet::from([id, neg]));

        // l=1, L=4, d=1: {v, v+2, -v, 2-v}
        let spec = ReflectionSpec::new(1, 4, 1).unwrap();
        let tables: BTreeSet<Vec<u32>> =
            group_elements(&spec).iter().map(|e| e.table(&spec)).collect();
        let expect: BTreeSet<Vec<u32>> = [
            (0..4).collect::<Vec<u32>>(),
            (0..4).map(|v| (v + 2) % 4).collect(),
            (0..4).map(|v| (4 - v) % 4).collect(),
            (0..4).map(|v| (2 + 4 - v) % 4).collect(),
        ]
        .into_iter()
        .collect();
        assert_eq!(tables, expect);
    }

    #[test]
    fn closed_under_composition_and_graph_preserving() {
        for spec in specs() {
            let els = group_elements(&spec);
            let tables: BTreeSet<Vec<u32>> = els.iter().map(|e| e.table(&spec)).collect();
            // composition of any two element actions is again an element action
            for a in &els {
                for b in &els {
                    let ta = a.table(&spec);
                    let tb = b.table(&spec);
                    let comp: Vec<u32> =
                        (0..spec.n_vertices()).map(|v| ta[tb[v] as usize]).collect();
                    assert!(tables.contains(&comp), "composition escapes the group");
                }
            }
            // each element is a graph automorphism
            let g = torus(spec.big_l, spec.d).unwrap();
            for e in &els {
                for &(u, v) in g.edges() {
                    assert!(g.has_edge(e.apply_vertex(&spec, u), e.apply_vertex(&spec, v)));
                }
            }
        }
    }

    #[test]
    fn pushing_preserves_independence() {
        let spec = ReflectionSpec::new(1, 4, 2).unwrap();
        let g = torus(4, 2).unwrap();
        let masks = g.neighbor_masks().unwrap();
        let els = group_elements(&spec);
        for_each_independent_set(&masks, |c| {
            for e in &els {
                assert!(is_independent(&masks, e.push_config(&spec, c)));
            }
        });
    }

    #[test]
    fn tau_s_is_the_unique_domain_mapper() {
        for spec in specs() {
            let els = group_elements(&spec);
            let order = spec.axis_order();
            let mut shifts = vec![vec![]];
            for _ in 0..spec.d {
                let mut next = Vec::new();
                for p in &shifts {
                    for si in 0..order {
                        let mut t: Vec<usize> = p.clone();
                        t.push(si);
                        next.push(t);
                    }
                }
                shifts = next;
            }
            for s in shifts {
                let target: BTreeSet<u32> = spec
                    .block_coords()
                    .iter()
                    .map(|c| {
                        let shifted: Vec<usize> = c
                            .iter()
                            .zip(&s)
                            .map(|(&ci, &si)| (ci + si * spec.l) % spec.big_l)
                            .collect();
                        torus_index(spec.big_l, &shifted)
                    })
                    .collect();
                let matching: Vec<&GroupElement> = els
                    .iter()
                    .filter(|e| {
                        let img: BTreeSet<u32> = block_image(&spec, e).into_iter().collect();
                        img == target
                    })
                    .collect();
                // exactly one element maps the domain onto each translate —
                // counted on vertex actions (distinct actions), so the
                // degenerate l=1, L=2 case where rotation(0) and
                // reflection(0) act identically is counted once
                let distinct: BTreeSet<Vec<u32>> =
                    matching.iter().map(|e| e.table(&spec)).collect();
                assert_eq!(distinct.len(), 1, "spec {spec:?} shift {s:?}");
                let t = tau_s(&spec, &s).unwrap();
                let img: BTreeSet<u32> = block_image(&spec, &t).into_iter().collect();
                assert_eq!(img, target, "tau_s misses its translate");
            }
        }
    }

    #[test]
    fn fundamental_domain_covers() {
        for spec in specs() {
            let mut covered = vec![0usize; spec.n_vertices()];
            for e in group_elements(&spec) {
                for v in block_image(&spec, &e) {
                    covered[v as usize] += 1;
                }
            }
            assert!(covered.iter().all(|&c| c >= 1), "domain images miss a vertex");
        }
    }
}
