//! Exact binomial tail inequalities and the fixed-occupancy comparison chain.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::hardcore::exact_distribution;
use crate::numeric::{binomial, binomial_pmf, rat, rat_pow, rat_to_f64, Fugacity, Int, Rat};
use crate::report::CheckReport;

const HOEFFDING_N_CAP: u64 = 60;

/// P(|Bin(n,p) - np| ≥ m) exactly.
fn binomial_two_sided_tail(n: u64, p: &Rat, m: u64) -> Rat {
    let np = rat(n as i64, 1) * p;
    let mm = rat(m as i64, 1);
    let mut tail = Rat::zero();
    for k in 0..=n {
        let dev = rat(k as i64, 1) - &np;
        let dev = if dev < Rat::zero() { -dev } else { dev };
        if dev >= mm {
            tail += binomial_pmf(n, k, p);
        }
    }
    tail
}

/// One point of the tail bound P(|Bin(n,p)-np| ≥ m) ≤ 2·(p(1-p))^{m²/n},
/// decided exactly by raising both sides to the n-th power:
///   P^n ≤ 2^n · (p(1-p))^{m²}.
pub fn hoeffding_point(n: u64, p: &Rat, m: u64) -> Result<CheckReport> {
    if n == 0 || n > HOEFFDING_N_CAP {
        return Err(Error::CapExceeded {
            what: "trials for the exact binomial tail bound",
            got: n as usize,
            cap: HOEFFDING_N_CAP as usize,
        });
    }
    if p <= &Rat::zero() || p >= &Rat::one() {
        return Err(Error::invalid("success probability must lie strictly in (0, 1)"));
    }
    let tail = binomial_two_sided_tail(n, p, m);
    let rep = if tail.is_zero() {
        CheckReport::exact_le("binomial tail bound", &Rat::zero(), &Rat::one())
    } else {
        let lhs = rat_pow(&tail, n);
        let rhs = rat_pow(&rat(2, 1), n) * rat_pow(&(p * (Rat::one() - p)), m * m);
        let mut r = CheckReport::exact_le("binomial tail bound", &lhs, &rhs);
        // display the n-th roots, not the blown-up powers
        r.lhs = rat_to_f64(&tail);
        r.rhs = 2.0 * rat_to_f64(&(p * (Rat::one() - p))).powf(m as f64 * m as f64 / n as f64);
        r.margin = r.rhs - r.lhs;
        r
    };
    Ok(rep.with_witness(serde_json::json!({
        "n": n, "m": m, "p": rat_to_f64(p),
        "tail": rat_to_f64(&tail),
    })))
}

/// The tail bound over the whole grid n ≤ n_max, p in the given list,
/// 0 ≤ m ≤ n; every point is decided exactly.  Passes iff no point fails.
pub fn hoeffding_check(n_max: u64, p_grid: &[Rat]) -> Result<CheckReport> {
    if n_max == 0 || n_max > HOEFFDING_N_CAP {
        return Err(Error::CapExceeded {
            what: "trials for the exact binomial tail bound",
            got: n_max as usize,
            cap: HOEFFDING_N_CAP as usize,
        });
    }
    for p in p_grid {
        if p <= &Rat::zero() || p >= &Rat::one() {
            return Err(Error::invalid("success probability must lie strictly in (0, 1)"));
        }
    }
    let mut checked = 0u64;
    let mut violations = 0u64;
    let mut first_violation = None;
    for p in p_grid {
        let q = p * (Rat::one() - p);
        for n in 1..=n_max {
            let two_n = rat_pow(&rat(2, 1), n);
            // precompute the full pmf once per (n, p)
            let pmf: Vec<Rat> = (0..=n).map(|k| binomial_pmf(n, k, p)).collect();
            let np = rat(n as i64, 1) * p;
            for m in 0..=n {
                checked += 1;
                let mm = rat(m as i64, 1);
                let mut tail = Rat::zero();
                for (k, w) in pmf.iter().enumerate() {
                    let dev = rat(k as i64, 1) - &np;
                    let dev = if dev < Rat::zero() { -dev } else { dev };
                    if dev >= mm {
                        tail += w;
                    }
                }
                if tail.is_zero() {
                    continue;
                }
                let ok = rat_pow(&tail, n) <= &two_n * rat_pow(&q, m * m);
                if !ok {
                    violations += 1;
                    if first_violation.is_none() {
                        first_violation =
                            Some(serde_json::json!({"n": n, "m": m, "p": rat_to_f64(p)}));
                    }
                }
            }
        }
    }
    let rep = CheckReport::holds("binomial tail bound over the full grid", violations == 0);
    Ok(rep.with_witness(serde_json::json!({
        "points": checked,
        "violations": violations,
        "first_violation": first_violation,
    })))
}

/// The comparison chain for the fixed-occupancy model on a regular bipartite
/// graph with |V| = 2·(side size): with λ chosen so (|V|/2)·λ/(1+λ) = N, i.e.
/// λ = 2N/(|V|-2N), and any event B,
///   μ_N(B) ≤ |B ∩ Ω_N| / C(|V|/2, N)                (counting premise)
///          = ζ(B ∩ Ω_N) / (λ^N C(|V|/2, N))          (weights are constant)
///          = ζ(B ∩ Ω_N) / ((1+λ)^{|V|/2} P(Bin(|V|/2, λ/(1+λ)) = N))
///          ≤ C·√|V| · ζ(B) / (1+λ)^{|V|/2}.          (fitted constant)
/// The first three links are decided exactly (the premise |Ω_N| ≥ C(|V|/2,N)
/// included); the last reports the smallest admissible C.
pub fn fixed_size_chain_check(
    g: &Graph,
    n_occ: u64,
    mut event: impl FnMut(u64) -> bool,
) -> Result<CheckReport> {
    let _delta = g.delta()?; // regular
    let n = g.n() as u64;
    if g.bipartition().is_none() {
        return Err(Error::invalid("the chain needs a bipartite graph"));
    }
    if n % 2 != 0 {
        return Err(Error::invalid("regular bipartite graphs have evenly many vertices"));
    }
    let half = n / 2;
    if n_occ == 0 || n_occ >= half {
        return Err(Error::invalid("need 0 < N < |V|/2 for a meaningful fixed size"));
    }
    let fug = Fugacity::new(rat(2 * n_occ as i64, (n - 2 * n_occ) as i64))?;
    let dist = exact_distribution(g, &fug)?;

    let mut omega_n = 0u64;
    let mut bad_n = 0u64;
    let mut zeta_bad = Rat::zero();
    let mut zeta_bad_at_size = Rat::zero(); // ζ(B ∩ Ω_N) from the weights themselves
    for (&c, w) in dist.configs.iter().zip(&dist.weights) {
        let hit = event(c);
        if c.count_ones() as u64 == n_occ {
            omega_n += 1;
            if hit {
                bad_n += 1;
                zeta_bad_at_size += w;
            }
        }
        if hit {
            zeta_bad += w;
        }
    }
    if omega_n == 0 {
        return Err(Error::ZeroProbability(format!("no independent sets of size {n_occ}")));
    }

    let choose = binomial(half, n_occ);
    let premise = Int::from(omega_n) >= choose;

    // link 1: μ_N(B) = bad_n/omega_n ≤ bad_n/choose (uses the premise)
    let mu_n_b = rat(bad_n as i64, omega_n as i64);
    let link1 = mu_n_b.clone() * Rat::from_integer(choose.clone()) <= rat(bad_n as i64, 1);

    // link 2: ζ(B ∩ Ω_N) = λ^N · |B ∩ Ω_N|, since every size-N set has
    // ζ-weight exactly λ^N
    let zeta_bad_n = fug.pow(n_occ) * rat(bad_n as i64, 1);
    let link2 = zeta_bad_at_size == zeta_bad_n;

    // link 3 (point probability): λ^N C(|V|/2, N) = (1+λ)^{|V|/2} P(Bin = N)
    let lhs3 = fug.pow(n_occ) * Rat::from_integer(choose.clone());
    let rhs3 = rat_pow(&fug.one_plus(), half) * binomial_pmf(half, n_occ, &fug.occupation());
    let link3 = lhs3 == rhs3;

    // sanity: ζ(B ∩ Ω_N) ≤ ζ(B)
    let sane = zeta_bad_n <= zeta_bad;

    // link 4: smallest C with ζ(B∩Ω_N)/P(Bin=N) ≤ C √|V| ζ(B)
    let fitted_c = if zeta_bad.is_zero() {
        0.0
    } else {
        let ratio = &zeta_bad_n / &rhs3; // ζ(B∩Ω_N) / ((1+λ)^{n/2} P(Bin=N))
        rat_to_f64(&ratio) * rat_to_f64(&rat_pow(&fug.one_plus(), half))
            / ((n as f64).sqrt() * rat_to_f64(&zeta_bad))
    };

    let pass = premise && link1 && link2 && link3 && sane;
    let rep = CheckReport::holds("fixed-occupancy comparison chain", pass);
    Ok(rep.with_witness(serde_json::json!({
        "n_occ": n_occ,
        "lambda": rat_to_f64(fug.rat()),
        "omega_n": omega_n,
        "binomial": rat_to_f64(&Rat::from_integer(choose)),
        "counting_premise": premise,
        "mu_n_of_event": rat_to_f64(&mu_n_b),
        "links": {"counting": link1, "constant_weight": link2, "point_probability": link3},
        "zeta_event_at_size": rat_to_f64(&zeta_bad_n),
        "zeta_event": rat_to_f64(&zeta_bad),
        "fitted_c": fitted_c,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::torus;
    use crate::order::m_param;

    #[test]
    fn point_oracle_n10() {
        // n = 10, p = 1/2, m = 5: tail = 2/1024, bound = 2·(1/4)^{25/10} ≈ 0.0625·…
        let rep = hoeffding_point(10, &rat(1, 2), 5).unwrap();
        assert!(rep.pass, "{rep}");
        let w = rep.witness.unwrap();
        assert_eq!(w["tail"].as_f64(), Some(2.0 / 1024.0));
        // the displayed bound is 2·(1/4)^{2.5} = 2/32 = 0.0625
        assert!((rep.rhs - 0.0625).abs() < 1e-12);
    }

    #[test]
    fn small_grid_has_no_violations() {
        let ps: Vec<Rat> = vec![rat(1, 10), rat(1, 2), rat(9, 10)];
        let rep = hoeffding_check(12, &ps).unwrap();
        assert!(rep.pass, "{rep}");
        assert_eq!(rep.witness.unwrap()["violations"].as_u64(), Some(0));
    }

    #[test]
    fn rejects_degenerate_probability() {
        assert!(hoeffding_check(5, &[rat(1, 1)]).is_err());
        assert!(hoeffding_point(0, &rat(1, 2), 0).is_err());
        assert!(hoeffding_point(61, &rat(1, 2), 0).is_err());
    }

    #[test]
    fn fixed_size_chain_on_z4_2() {
        let g = torus(4, 2).unwrap();
        for n_occ in [2u64, 3, 4] {
            let rep = fixed_size_chain_check(&g, n_occ, |c| {
                m_param(&g, c).map(|m| m >= 1).unwrap_or(false)
            })
            .unwrap();
            assert!(rep.pass, "{rep}");
        }
    }

    #[test]
    fn fixed_size_chain_empty_event_fits_zero() {
        let g = torus(4, 2).unwrap();
        let rep = fixed_size_chain_check(&g, 2, |_| false).unwrap();
        assert!(rep.pass, "{rep}");
        assert_eq!(rep.witness.unwrap()["fitted_c"].as_f64(), Some(0.0));
    }

    #[test]
    fn fixed_size_chain_rejects_extremes() {
        let g = torus(4, 2).unwrap();
        assert!(fixed_size_chain_check(&g, 0, |_| true).is_err());
        assert!(fixed_size_chain_check(&g, 8, |_| true).is_err());
    }
}
