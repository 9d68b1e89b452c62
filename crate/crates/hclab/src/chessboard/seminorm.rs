//! Block-local observables, their disseminated inner products under the
//! dihedral action, and the seminorm ||f|| = zeta(prod_tau tau f)^(1/|D^d|).
//!
//! Inner products are exact rationals streamed over independent sets; roots
//! are the only float step. A genuinely negative inner product of a single
//! observable with itself is a sign violation and reported as a bug, not
//! clamped away.

use std::time::Instant;

use num::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use serde_json::json;

use crate::chessboard::action::{group_elements, GroupElement, ReflectionSpec};
use crate::error::{Error, Result};
use crate::graphs::{torus, torus_index};
use crate::hardcore::for_each_independent_set;
use crate::numeric::{ln_rat, rat, rat_pow, rat_to_f64, Fugacity, Rat};
use crate::report::{tol, CheckReport};

/// Pattern tables get unwieldy past 2^16 entries.
const BLOCK_BITS_CAP: usize = 16;
/// Ceiling on torus vertices for streamed enumeration.
const ENUM_CAP: usize = 40;

/// A function of the configuration restricted to the block [0,l]^d, tabulated
/// by block bit pattern (bit i = i-th coordinate tuple in lexicographic
/// order, matching `ReflectionSpec::block_coords`).
#[derive(Clone, Debug)]
pub struct LocalObservable {
    pub l: usize,
    pub d: usize,
    values: Vec<Rat>,
}

pub fn block_bits(l: usize, d: usize) -> usize {
    (l + 1).pow(d as u32)
}

impl LocalObservable {
    pub fn new(l: usize, d: usize, values: Vec<Rat>) -> Result<Self> {
        let bits = block_bits(l, d);
        if bits > BLOCK_BITS_CAP {
            return Err(Error::CapExceeded { what: "block vertices", got: bits, cap: BLOCK_BITS_CAP });
        }
        if values.len() != 1 << bits {
            return Err(Error::invalid("observable table length must be 2^(block size)"));
        }
        Ok(LocalObservable { l, d, values })
    }

    pub fn from_fn(l: usize, d: usize, mut f: impl FnMut(usize) -> Rat) -> Result<Self> {
        let bits = block_bits(l, d);
        if bits > BLOCK_BITS_CAP {
            return Err(Error::CapExceeded { what: "block vertices", got: bits, cap: BLOCK_BITS_CAP });
        }
        Ok(LocalObservable { l, d, values: (0..1usize << bits).map(|p| f(p)).collect() })
    }

    pub fn constant(l: usize, d: usize, c: Rat) -> Result<Self> {
        Self::from_fn(l, d, |_| c.clone())
    }

    /// 1{the block's origin vertex is occupied}.
    pub fn origin_indicator(l: usize, d: usize) -> Result<Self> {
        Self::from_fn(l, d, |p| rat((p & 1) as i64, 1))
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn value(&self, pattern: usize) -> &Rat {
        &self.values[pattern]
    }

    pub fn scale(&self, c: &Rat) -> Self {
        LocalObservable { l: self.l, d: self.d, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.l != other.l || self.d != other.d {
            return Err(Error::invalid("observables live on different blocks"));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(LocalObservable { l: self.l, d: self.d, values })
    }

    /// Small random rationals in [0, 2].
    pub fn random_nonneg(l: usize, d: usize, rng: &mut ChaCha20Rng) -> Result<Self> {
        Self::from_fn(l, d, |_| rat(rng.gen_range(0..=8), rng.gen_range(1..=4)))
    }

    /// Small random rationals in [-2, 2].
    pub fn random_signed(l: usize, d: usize, rng: &mut ChaCha20Rng) -> Result<Self> {
        Self::from_fn(l, d, |_| rat(rng.gen_range(-8..=8), rng.gen_range(1..=4)))
    }
}

/// Torus position of each block bit after acting by `e`: the observable
/// composed with `e` reads configuration bit positions[i] for block bit i.
pub fn element_positions(spec: &ReflectionSpec, e: &GroupElement) -> Vec<u32> {
    spec.block_coords().iter().map(|c| e.apply_vertex(spec, torus_index(spec.big_l, c))).collect()
}

pub(crate) fn gather(config: u64, positions: &[u32]) -> usize {
    let mut p = 0usize;
    for (i, &pos) in positions.iter().enumerate() {
        p |= (((config >> pos) & 1) as usize) << i;
    }
    p
}

/// zeta( prod_i tau_i f_i ) with tau_i running over the whole group in the
/// order of `group_elements`, as an exact rational.
pub fn zeta_product(spec: &ReflectionSpec, fug: &Fugacity, obs: &[&LocalObservable]) -> Result<Rat> {
    let els = group_elements(spec);
    if obs.len() != els.len() {
        return Err(Error::invalid("need exactly one observable per group element"));
    }
    for o in obs {
        if o.l != spec.l || o.d != spec.d {
            return Err(Error::invalid("observable block does not match the torus spec"));
        }
    }
    let n = spec.n_vertices();
    if n > ENUM_CAP {
        return Err(Error::CapExceeded { what: "torus vertices for dissemination", got: n, cap: ENUM_CAP });
    }
    let g = torus(spec.big_l, spec.d)?;
    let masks = g.neighbor_masks()?;
    let positions: Vec<Vec<u32>> = els.iter().map(|e| element_positions(spec, e)).collect();
    let lam_pows: Vec<Rat> = (0..=n as u64).map(|k| fug.pow(k)).collect();
    let mut acc = Rat::zero();
    for_each_independent_set(&masks, |config| {
        let mut prod = Rat::one();
        let mut dead = false;
        for (k, pos) in positions.iter().enumerate() {
            let v = obs[k].value(gather(config, pos));
            if v.is_zero() {
                dead = true;
                break;
            }
            if !v.is_one() {
                prod *= v;
            }
        }
        if !dead {
            acc += prod * &lam_pows[config.count_ones() as usize];
        }
    });
    Ok(acc)
}

/// zeta( prod_tau tau f ), the |D^d|-th power of ||f||.
pub fn seminorm_inner(spec: &ReflectionSpec, fug: &Fugacity, f: &LocalObservable) -> Result<Rat> {
    zeta_product(spec, fug, &vec![f; spec.group_order()])
}

/// k-th root of an inner product. Exact negatives worse than the clamp are
/// sign violations (the disseminated square of a single observable cannot be
/// negative); anything inside the clamp window rounds to zero.
fn project_root(inner: &Rat, k: u64) -> Result<f64> {
    if inner.is_negative() {
        let proj = rat_to_f64(inner);
        if proj < tol::RP_CLAMP {
            return Err(Error::internal(format!(
                "sign violation in a disseminated square: inner product projects to {proj:e}"
            )));
        }
        return Ok(0.0);
    }
    if inner.is_zero() {
        return Ok(0.0);
    }
    Ok((ln_rat(inner) / k as f64).exp())
}

pub fn chessboard_seminorm(spec: &ReflectionSpec, fug: &Fugacity, f: &LocalObservable) -> Result<f64> {
    let inner = seminorm_inner(spec, fug, f)?;
    project_root(&inner, spec.group_order() as u64)
}

/// zeta( prod_tau tau f_tau ) <= prod_tau ||f_tau||, decided exactly as
/// lhs^|D^d| <= prod_tau inner(f_tau) whenever the left side is positive
/// (a nonpositive left side passes against the nonnegative right outright).
pub fn check_chessboard_estimate(
    spec: &ReflectionSpec,
    fug: &Fugacity,
    fs: &[LocalObservable],
) -> Result<CheckReport> {
    let start = Instant::now();
    let k = spec.group_order();
    if fs.len() != k {
        return Err(Error::invalid("need exactly one observable per group element"));
    }
    let refs: Vec<&LocalObservable> = fs.iter().collect();
    let lhs = zeta_product(spec, fug, &refs)?;
    let mut inners = Vec::with_capacity(k);
    let mut norms = Vec::with_capacity(k);
    for f in fs {
        let inner = seminorm_inner(spec, fug, f)?;
        norms.push(project_root(&inner, k as u64)?);
        inners.push(inner);
    }
    let lhs_float = rat_to_f64(&lhs);
    let rhs_float: f64 = norms.iter().product();
    let pass = if lhs.is_positive() {
        rat_pow(&lhs, k as u64) <= inners.iter().product::<Rat>()
    } else {
        true
    };
    let mut rep = CheckReport::le("product estimate", lhs_float, rhs_float, tol::EXACT);
    rep.pass = pass;
    rep.exact = true;
    Ok(rep.with_witness(json!({ "group_order": k })).timed(start))
}

/// Homogeneity (exact), triangle (float), monotonicity (exact) on random
/// observable pairs. Returns one report per property.
pub fn check_seminorm_properties(
    spec: &ReflectionSpec,
    fug: &Fugacity,
    trials: usize,
    seed: u64,
) -> Result<Vec<CheckReport>> {
    let mut rng = crate::seeding::rng_for(seed, "seminorm-properties", 0);
    let k = spec.group_order() as u64;
    let (l, d) = (spec.l, spec.d);

    let start = Instant::now();
    let mut homog_exact = true;
    let mut worst_h = (0.0f64, 0.0f64, 0.0f64); // |diff|, ||cf||, c||f||
    for _ in 0..trials {
        let f = LocalObservable::random_signed(l, d, &mut rng)?;
        let c = rat(rng.gen_range(0..=6), rng.gen_range(1..=4));
        let cf = f.scale(&c);
        let i_f = seminorm_inner(spec, fug, &f)?;
        let i_cf = seminorm_inner(spec, fug, &cf)?;
        if i_cf != rat_pow(&c, k) * &i_f {
            homog_exact = false;
        }
        let scaled = rat_to_f64(&c) * project_root(&i_f, k)?;
        let direct = project_root(&i_cf, k)?;
        if (direct - scaled).abs() > worst_h.0 {
            worst_h = ((direct - scaled).abs(), direct, scaled);
        }
    }
    let mut homog = CheckReport::eq("seminorm homogeneity", worst_h.1, worst_h.2, tol::FLOAT_ON_EXACT);
    homog.pass = homog.pass && homog_exact;
    homog.exact = homog_exact;
    let homog = homog.timed(start);

    let start = Instant::now();
    let mut worst_t: Option<(f64, f64, f64)> = None; // margin, lhs, rhs
    for _ in 0..trials {
        let f = LocalObservable::random_signed(l, d, &mut rng)?;
        let g = LocalObservable::random_signed(l, d, &mut rng)?;
        let lhs = chessboard_seminorm(spec, fug, &f.add(&g)?)?;
        let rhs = chessboard_seminorm(spec, fug, &f)? + chessboard_seminorm(spec, fug, &g)?;
        if worst_t.map_or(true, |w| lhs - rhs > w.0) {
            worst_t = Some((lhs - rhs, lhs, rhs));
        }
    }
    let (_, t_lhs, t_rhs) = worst_t.unwrap_or((0.0, 0.0, 0.0));
    let triangle = CheckReport::le("seminorm triangle", t_lhs, t_rhs, tol::FLOAT_ON_EXACT).timed(start);

    let start = Instant::now();
    let mut mono_exact = true;
    let mut worst_m: Option<(f64, f64, f64)> = None;
    for _ in 0..trials {
        let f = LocalObservable::random_nonneg(l, d, &mut rng)?;
        let g = f.add(&LocalObservable::random_nonneg(l, d, &mut rng)?)?;
        let i_f = seminorm_inner(spec, fug, &f)?;
        let i_g = seminorm_inner(spec, fug, &g)?;
        if i_f > i_g {
            mono_exact = false;
        }
        let (nf, ng) = (project_root(&i_f, k)?, project_root(&i_g, k)?);
        if worst_m.map_or(true, |w| nf - ng > w.0) {
            worst_m = Some((nf - ng, nf, ng));
        }
    }
    let (_, m_lhs, m_rhs) = worst_m.unwrap_or((0.0, 0.0, 0.0));
    let mut mono = CheckReport::le("seminorm monotonicity on 0 <= f <= g", m_lhs, m_rhs, tol::EXACT);
    mono.pass = mono_exact;
    mono.exact = true;
    let mono = mono.timed(start);

    Ok(vec![homog, triangle, mono])
}

/// Exact reflection positivity scan: disseminated squares of random signed
/// observables must be nonnegative rationals.
pub fn check_reflection_positivity(
    spec: &ReflectionSpec,
    fug: &Fugacity,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let start = Instant::now();
    let mut rng = crate::seeding::rng_for(seed, "reflection-positivity", 0);
    let mut min_inner: Option<Rat> = None;
    for _ in 0..trials {
        let f = LocalObservable::random_signed(spec.l, spec.d, &mut rng)?;
        let inner = seminorm_inner(spec, fug, &f)?;
        if min_inner.as_ref().map_or(true, |m| inner < *m) {
            min_inner = Some(inner);
        }
    }
    let min_inner = min_inner.unwrap_or_else(Rat::zero);
    Ok(CheckReport::exact_le("reflection positivity", &Rat::zero(), &min_inner).timed(start))
}

/// 2x2 endpoint matrix of a d=1 block observable: entry (a,b) sums
/// lambda^(|pattern| - a - b) f(pattern) over block patterns with endpoint
/// occupancies a, b (patterns with adjacent occupied vertices drop out).
pub struct EndpointMatrix {
    pub c: [[Rat; 2]; 2],
}

pub fn endpoint_matrix(f: &LocalObservable, fug: &Fugacity) -> Result<EndpointMatrix> {
    if f.d != 1 {
        return Err(Error::invalid("endpoint matrices are a d=1 construction"));
    }
    let l = f.l;
    let mut c = [[Rat::zero(), Rat::zero()], [Rat::zero(), Rat::zero()]];
    for p in 0..1usize << (l + 1) {
        if p & (p >> 1) != 0 {
            continue;
        }
        let a = p & 1;
        let b = (p >> l) & 1;
        let w = fug.pow((p.count_ones() as usize - a - b) as u64);
        c[a][b] += w * f.value(p);
    }
    Ok(EndpointMatrix { c })
}

fn mat_mul(a: &[[Rat; 2]; 2], b: &[[Rat; 2]; 2]) -> [[Rat; 2]; 2] {
    let mut out = [[Rat::zero(), Rat::zero()], [Rat::zero(), Rat::zero()]];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        }
    }
    out
}

/// trace((C diag(1,lambda) C^T diag(1,lambda))^j): equals the dissemination
/// inner product on the circle of circumference 2jl, kept rational by folding
/// the two endpoint half-weights into one diagonal insertion.
pub fn trace_insertion_power(em: &EndpointMatrix, fug: &Fugacity, j: usize) -> Rat {
    let lam = fug.rat();
    let ct = [[em.c[0][0].clone(), em.c[1][0].clone()], [em.c[0][1].clone(), em.c[1][1].clone()]];
    let scale_cols = |m: &[[Rat; 2]; 2]| {
        [[m[0][0].clone(), &m[0][1] * lam], [m[1][0].clone(), &m[1][1] * lam]]
    };
    let step = mat_mul(&scale_cols(&em.c), &scale_cols(&ct));
    let mut acc = step.clone();
    for _ in 1..j {
        acc = mat_mul(&acc, &step);
    }
    &acc[0][0] + &acc[1][1]
}

/// ||f|| on the torus of side L+2l is at most ||f|| on the torus of side L.
/// d=1 goes through endpoint matrices (verified against direct dissemination
/// whenever both tori are enumerable); d>=2 enumerates both tori.
pub fn seminorm_torus_comparison(
    spec: &ReflectionSpec,
    fug: &Fugacity,
    f: &LocalObservable,
) -> Result<CheckReport> {
    let start = Instant::now();
    if f.l != spec.l || f.d != spec.d {
        return Err(Error::invalid("observable block does not match the torus spec"));
    }
    let big = ReflectionSpec::new(spec.l, spec.big_l + 2 * spec.l, spec.d)?;
    let (pass, norm_small, norm_big, witness) = if spec.d == 1 {
        let em = endpoint_matrix(f, fug)?;
        let k = spec.big_l / (2 * spec.l);
        let t_k = trace_insertion_power(&em, fug, k);
        let t_k1 = trace_insertion_power(&em, fug, k + 1);
        if t_k.is_negative() || t_k1.is_negative() {
            return Err(Error::internal("negative trace of a symmetric square"));
        }
        if spec.n_vertices() <= ENUM_CAP && seminorm_inner(spec, fug, f)? != t_k {
            return Err(Error::internal("transfer trace disagrees with direct dissemination"));
        }
        if big.n_vertices() <= ENUM_CAP && seminorm_inner(&big, fug, f)? != t_k1 {
            return Err(Error::internal("transfer trace disagrees with direct dissemination"));
        }
        let pass = rat_pow(&t_k1, k as u64) <= rat_pow(&t_k, k as u64 + 1);
        let ns = project_root(&t_k, 2 * k as u64)?;
        let nb = project_root(&t_k1, 2 * (k + 1) as u64)?;
        (pass, ns, nb, json!({ "t_k": t_k.to_string(), "t_k_plus_1": t_k1.to_string(), "k": k }))
    } else {
        if big.n_vertices() > ENUM_CAP {
            return Err(Error::CapExceeded {
                what: "vertices in the larger torus",
                got: big.n_vertices(),
                cap: ENUM_CAP,
            });
        }
        let inner_small = seminorm_inner(spec, fug, f)?;
        let inner_big = seminorm_inner(&big, fug, f)?;
        let (k, kb) = (spec.group_order(), big.group_order());
        let ns = project_root(&inner_small, k as u64)?;
        let nb = project_root(&inner_big, kb as u64)?;
        let pass = rat_pow(&inner_big, k as u64) <= rat_pow(&inner_small, kb as u64);
        (pass, ns, nb, json!({ "k_small": k, "k_big": kb }))
    };
    let mut rep = CheckReport::le(
        format!("seminorm monotone in torus side: L={} vs L={}", big.big_l, spec.big_l),
        norm_big,
        norm_small,
        tol::EXACT,
    );
    rep.pass = pass;
    rep.exact = true;
    Ok(rep.with_witness(witness).timed(start))
}
