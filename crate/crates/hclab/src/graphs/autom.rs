//! Automorphisms of `Z_L^d` from the edge-transitive subgroup
//! (translations) ⋊ (coordinate permutations × per-axis sign flips).

use rand::Rng;
use rand_chacha::ChaCha20Rng;

use super::build::{torus_coords, torus_index};
use crate::error::{Error, Result};

/// v ↦ t + s·(v ∘ π): first permute coordinates by `perm` (new coordinate i is
/// old coordinate perm[i]), then negate the axes with `flip[i]` set, then add
/// `shift[i]` mod L.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusAutomorphism {
    pub l: usize,
    pub d: usize,
    pub perm: Vec<usize>,
    pub flip: Vec<bool>,
    pub shift: Vec<usize>,
}

impl TorusAutomorphism {
    pub fn apply_coords(&self, coords: &[usize]) -> Vec<usize> {
        (0..self.d)
            .map(|i| {
                let c = coords[self.perm[i]];
                let c = if self.flip[i] { (self.l - c) % self.l } else { c };
                (c + self.shift[i]) % self.l
            })
            .collect()
    }

    pub fn apply(&self, v: u32) -> u32 {
        torus_index(self.l, &self.apply_coords(&torus_coords(self.l, self.d, v)))
    }

    /// The full vertex permutation as a table.
    pub fn table(&self) -> Vec<u32> {
        (0..(self.l.pow(self.d as u32)) as u32).map(|v| self.apply(v)).collect()
    }
}

pub fn torus_automorphism(
    l: usize,
    d: usize,
    perm: Vec<usize>,
    flip: Vec<bool>,
    shift: Vec<usize>,
) -> Result<TorusAutomorphism> {
    if perm.len() != d || flip.len() != d || shift.len() != d {
        return Err(Error::invalid("perm/flip/shift must all have length d"));
    }
    let mut seen = vec![false; d];
    for &p in &perm {
        if p >= d || seen[p] {
            return Err(Error::invalid("perm is not a permutation of 0..d"));
        }
        seen[p] = true;
    }
    if shift.iter().any(|&s| s >= l) {
        return Err(Error::invalid("shift entries must lie in 0..L"));
    }
    Ok(TorusAutomorphism { l, d, perm, flip, shift })
}

/// Uniform element of the subgroup: uniform coordinate permutation
/// (Fisher–Yates), independent fair sign flips, uniform translation.
pub fn sample_torus_automorphism(l: usize, d: usize, rng: &mut ChaCha20Rng) -> TorusAutomorphism {
    let mut perm: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let flip = (0..d).map(|_| rng.gen_bool(0.5)).collect();
    let shift = (0..d).map(|_| rng.gen_range(0..l)).collect();
    TorusAutomorphism { l, d, perm, flip, shift }
}

/// Every element of the subgroup, in lexicographic (perm, flip, shift) order.
/// Size `d! * 2^d * L^d`; capped to keep exact certificate checks quick.
pub fn all_torus_automorphisms(l: usize, d: usize) -> Result<Vec<TorusAutomorphism>> {
    let size = (1..=d).product::<usize>() * (1 << d) * l.pow(d as u32);
    if size > 1 << 22 {
        return Err(Error::CapExceeded { what: "automorphism subgroup size", got: size, cap: 1 << 22 });
    }
    let mut perms = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    permutations(&mut cur, 0, &mut perms);
    let mut out = Vec::with_capacity(size);
    for perm in &perms {
        for fbits in 0..(1usize << d) {
            let flip: Vec<bool> = (0..d).map(|i| fbits >> i & 1 == 1).collect();
            let mut shift = vec![0usize; d];
            loop {
                out.push(TorusAutomorphism {
                    l,
                    d,
                    perm: perm.clone(),
                    flip: flip.clone(),
                    shift: shift.clone(),
                });
                let mut i = d;
                let mut done = true;
                while i > 0 {
                    i -= 1;
                    shift[i] += 1;
                    if shift[i] < l {
                        done = false;
                        break;
                    }
                    shift[i] = 0;
                }
                if done {
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn permutations(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
    // restore lexicographic-ish determinism is not needed beyond reproducibility
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::build::torus;
    use crate::seeding::rng_for;

    fn is_automorphism(l: usize, d: usize, a: &TorusAutomorphism) -> bool {
        let g = torus(l, d).unwrap();
        let t = a.table();
        // bijection
        let mut seen = vec![false; g.n()];
        for &w in &t {
            if seen[w as usize] {
                return false;
            }
            seen[w as usize] = true;
        }
        g.edges().iter().all(|&(u, v)| g.has_edge(t[u as usize], t[v as usize]))
    }

    #[test]
    fn sampled_elements_are_automorphisms() {
        let mut rng = rng_for(42, "autom-test", 0);
        for _ in 0..50 {
            let a = sample_torus_automorphism(4, 2, &mut rng);
            assert!(is_automorphism(4, 2, &a));
        }
        for _ in 0..20 {
            let a = sample_torus_automorphism(3, 3, &mut rng);
            assert!(is_automorphism(3, 3, &a));
        }
    }

    #[test]
    fn group_size_and_validity() {
        let all = all_torus_automorphisms(4, 2).unwrap();
        assert_eq!(all.len(), 2 * 4 * 16);
        for a in all.iter().step_by(7) {
            assert!(is_automorphism(4, 2, a));
        }
    }

    #[test]
    fn edge_transitivity() {
        // orbit of one edge under the subgroup covers all edges of Z_4^2
        let g = torus(4, 2).unwrap();
        let (u0, v0) = g.edges()[0];
        let mut hit = std::collections::BTreeSet::new();
        for a in all_torus_automorphisms(4, 2).unwrap() {
            let (mut a1, mut b1) = (a.apply(u0), a.apply(v0));
            if a1 > b1 {
                std::mem::swap(&mut a1, &mut b1);
            }
            hit.insert((a1, b1));
        }
        assert_eq!(hit.len(), g.edge_count());
    }
}
