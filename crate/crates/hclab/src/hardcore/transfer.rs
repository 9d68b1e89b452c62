//! Transfer-matrix partition functions on tori: Z(Z_L^d, λ) = tr(M^L) where M
//! runs over independent sets of the slice torus Z_L^{d-1}.
//!
//! The symmetric transfer matrix has entries λ^{(|s|+|t|)/2}·[s ∪ t independent
//! across slices], whose half-integer powers of λ are irrational. We instead
//! power D²A with D² = diag(λ^{|s|}) and A the 0/1 compatibility matrix:
//! tr((D A D)^L) = tr((D² A)^L), so the whole computation stays rational.

use num::Zero;

use super::enumerate::enumerate_configs;
use crate::error::{Error, Result};
use crate::graphs::{torus, Graph};
use crate::numeric::{ln_rat, rat_pow, Fugacity, Rat};

const SLICE_CAP: usize = 20;

fn slice_graph(l: usize, d: usize) -> Result<Graph> {
    if d == 1 {
        Graph::new(1, vec![])
    } else {
        torus(l, d - 1)
    }
}

/// Exact Z(Z_L^d, λ). Capped at L^{d-1} <= 20 slice vertices.
pub fn partition_transfer_torus(l: usize, d: usize, fug: &Fugacity) -> Result<Rat> {
    if d == 0 {
        return Err(Error::invalid("transfer torus needs d >= 1"));
    }
    let slice = slice_graph(l, d)?;
    if slice.n() > SLICE_CAP {
        return Err(Error::CapExceeded { what: "slice vertices", got: slice.n(), cap: SLICE_CAP });
    }
    let states = enumerate_configs(&slice)?;
    let k = states.len();
    // D^2 A: row s scaled by λ^{|s|}, entry 1 iff configurations are disjoint
    // (slice independence is already baked into the state list; disjointness
    // is exactly the between-slice constraint, and for L = 2 applying it twice
    // is harmless because it is idempotent)
    let mut m = vec![vec![Rat::zero(); k]; k];
    for (i, &s) in states.iter().enumerate() {
        let w = rat_pow(fug.rat(), s.count_ones() as u64);
        for (j, &t) in states.iter().enumerate() {
            if s & t == 0 {
                m[i][j] = w.clone();
            }
        }
    }
    let p = mat_pow(&m, l as u64);
    Ok((0..k).map(|i| p[i][i].clone()).sum())
}

pub fn log_partition_transfer_torus(l: usize, d: usize, fug: &Fugacity) -> Result<f64> {
    Ok(ln_rat(&partition_transfer_torus(l, d, fug)?))
}

fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let mut out = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for (j, bkj) in b[k].iter().enumerate() {
                if !bkj.is_zero() {
                    out[i][j] += aik * bkj;
                }
            }
        }
    }
    out
}

fn mat_pow(m: &[Vec<Rat>], mut e: u64) -> Vec<Vec<Rat>> {
    assert!(e >= 1);
    let mut base = m.to_vec();
    let mut acc: Option<Vec<Vec<Rat>>> = None;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => mat_mul(&a, &base),
            });
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    acc.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardcore::{log_partition_bruteforce, partition_bruteforce};
    use crate::numeric::rat;

    #[test]
    fn cycle_traces_are_lucas() {
        // at λ=1 the 1d transfer matrix is [[1,1],[1,0]]; tr(M^L) = Lucas
        let lam = Fugacity::parse("1").unwrap();
        assert_eq!(partition_transfer_torus(4, 1, &lam).unwrap(), rat(7, 1));
        assert_eq!(partition_transfer_torus(6, 1, &lam).unwrap(), rat(18, 1));
        assert_eq!(partition_transfer_torus(7, 1, &lam).unwrap(), rat(29, 1));
    }

    #[test]
    fn k2_special_case() {
        let lam = Fugacity::parse("3/2").unwrap();
        // L = 2, d = 1 is K_2: 1 + 2λ = 4
        assert_eq!(partition_transfer_torus(2, 1, &lam).unwrap(), rat(4, 1));
    }

    #[test]
    fn transfer_matches_bruteforce() {
        for (l, d) in [(2, 2), (2, 3), (3, 2), (4, 2), (2, 4)] {
            let g = torus(l, d).unwrap();
            for s in ["1/2", "1", "2"] {
                let fug = Fugacity::parse(s).unwrap();
                let zb = partition_bruteforce(&g, &fug).unwrap();
                let zt = partition_transfer_torus(l, d, &fug).unwrap();
                assert_eq!(zb, zt, "L={l} d={d} lam={s}");
            }
        }
        // above the exact-enumeration cap, compare in log space
        for (l, d) in [(5usize, 2usize), (6, 2)] {
            let g = torus(l, d).unwrap();
            for s in ["1/2", "1", "2"] {
                let fug = Fugacity::parse(s).unwrap();
                let lb = log_partition_bruteforce(&g, &fug).unwrap();
                let zt = partition_transfer_torus(l, d, &fug).unwrap();
                assert!((lb - ln_rat(&zt)).abs() < 1e-10, "L={l} d={d} lam={s}");
            }
        }
    }

    #[test]
    fn z42_at_one() {
        let lam = Fugacity::parse("1").unwrap();
        assert_eq!(partition_transfer_torus(4, 2, &lam).unwrap(), rat(743, 1));
    }
}
