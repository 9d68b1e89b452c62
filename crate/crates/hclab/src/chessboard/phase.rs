//! The signed phase indicator on a block: g compares the weighted occupation
//! of the two parity classes, the bad event B collects blocks that are either
//! balanced (both classes weighted-occupied past alpha) or have a light face,
//! and f = (1 - 1_B) g. Everything here is tabulated by block bit pattern and
//! scanned exactly over all independent sets of the torus in one pass.

use std::collections::BTreeSet;
use std::time::Instant;

use num::{Signed, Zero};
use serde_json::json;

use crate::chessboard::action::{tau_s, ReflectionSpec};
use crate::chessboard::seminorm::{element_positions, gather, LocalObservable};
use crate::chessboard::weights::weight_of;
use crate::error::{Error, Result};
use crate::graphs::{torus, torus_index};
use crate::hardcore::for_each_independent_set;
use crate::numeric::{rat, rat_int, rat_pow, rat_to_f64, Fugacity, Rat};
use crate::report::{tol, CheckReport};

const ENUM_CAP: usize = 40;
const TRANSLATE_CAP: usize = 8;

pub struct PhaseObservable {
    pub spec: ReflectionSpec,
    pub fug: Fugacity,
    /// Occupation threshold c_alpha * (lambda/(1+lambda)) * l^d.
    pub alpha: Rat,
    block_verts: Vec<u32>,
    /// Block weights scaled by 2^d, which makes them integers.
    scaled_weights: Vec<u64>,
    odd_class: Vec<bool>,
    /// Face membership lists (block bit indices), axis-major, side 0 then l.
    faces: Vec<Vec<usize>>,
    /// alpha * 2^d, on the same scale as `scaled_weights` sums.
    alpha2: Rat,
}

impl PhaseObservable {
    pub fn new(spec: &ReflectionSpec, fug: &Fugacity, c_alpha: &Rat) -> Result<Self> {
        if !c_alpha.is_positive() {
            return Err(Error::invalid("the threshold coefficient must be positive"));
        }
        let bits = spec.block_size();
        if bits > 16 {
            return Err(Error::CapExceeded { what: "block vertices", got: bits, cap: 16 });
        }
        let coords = spec.block_coords();
        let block_verts: Vec<u32> = coords.iter().map(|c| torus_index(spec.big_l, c)).collect();
        let two_d = rat_int(1 << spec.d);
        let scaled_weights: Vec<u64> = coords
            .iter()
            .map(|c| {
                let w = weight_of(spec, c) * &two_d;
                assert!(w.is_integer());
                w.to_integer().try_into().unwrap()
            })
            .collect();
        let odd_class: Vec<bool> = coords.iter().map(|c| c.iter().sum::<usize>() % 2 == 1).collect();
        let mut faces = Vec::with_capacity(2 * spec.d);
        for axis in 0..spec.d {
            for side in [0, spec.l] {
                faces.push(
                    (0..coords.len()).filter(|&i| coords[i][axis] == side).collect::<Vec<_>>(),
                );
            }
        }
        let alpha = c_alpha * fug.occupation() * rat_int(spec.l.pow(spec.d as u32) as i64);
        let alpha2 = &alpha * &two_d;
        Ok(PhaseObservable {
            spec: *spec,
            fug: fug.clone(),
            alpha,
            block_verts,
            scaled_weights,
            odd_class,
            faces,
            alpha2,
        })
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn face_members(&self, fi: usize) -> &[usize] {
        &self.faces[fi]
    }

    pub fn block_verts(&self) -> &[u32] {
        &self.block_verts
    }

    /// Weighted class occupations of a block pattern, scaled by 2^d.
    pub fn class_sums_scaled(&self, p: usize) -> (u64, u64) {
        let (mut even, mut odd) = (0u64, 0u64);
        for i in 0..self.block_verts.len() {
            if p >> i & 1 == 1 {
                if self.odd_class[i] {
                    odd += self.scaled_weights[i];
                } else {
                    even += self.scaled_weights[i];
                }
            }
        }
        (even, odd)
    }

    /// Sign of (weighted odd) - (weighted even); 0 on ties.
    pub fn g_of(&self, p: usize) -> i8 {
        let (even, odd) = self.class_sums_scaled(p);
        match odd.cmp(&even) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        }
    }

    /// Both parity classes weighted-occupied to at least alpha.
    pub fn in_b0(&self, p: usize) -> bool {
        let (even, odd) = self.class_sums_scaled(p);
        rat_int(even.min(odd) as i64) >= self.alpha2
    }

    fn face_sum_scaled(&self, p: usize, fi: usize) -> u64 {
        self.faces[fi].iter().filter(|&&i| p >> i & 1 == 1).map(|&i| self.scaled_weights[i]).sum()
    }

    /// Face weighted occupation at most 2 alpha.
    pub fn in_face_event(&self, p: usize, fi: usize) -> bool {
        rat_int(self.face_sum_scaled(p, fi) as i64) <= rat_int(2) * &self.alpha2
    }

    pub fn in_b(&self, p: usize) -> bool {
        self.in_b0(p) || (0..self.faces.len()).any(|fi| self.in_face_event(p, fi))
    }

    pub fn f_of(&self, p: usize) -> i8 {
        if self.in_b(p) {
            0
        } else {
            self.g_of(p)
        }
    }

    /// The face piece of the bad event with prescribed sign: the face event
    /// holds, g = eps, and the balanced part B_0 does not hold.
    pub fn in_bad_piece(&self, p: usize, fi: usize, eps: i8) -> bool {
        self.in_face_event(p, fi) && self.g_of(p) == eps && !self.in_b0(p)
    }

    pub fn f_table(&self) -> Vec<i8> {
        (0..1usize << self.block_verts.len()).map(|p| self.f_of(p)).collect()
    }

    pub fn b_table(&self) -> Vec<bool> {
        (0..1usize << self.block_verts.len()).map(|p| self.in_b(p)).collect()
    }

    pub fn f_observable(&self) -> Result<LocalObservable> {
        LocalObservable::from_fn(self.spec.l, self.spec.d, |p| rat_int(self.f_of(p) as i64))
    }

    pub fn b_observable(&self) -> Result<LocalObservable> {
        LocalObservable::from_fn(self.spec.l, self.spec.d, |p| rat_int(self.in_b(p) as i64))
    }

    pub fn piece_observable(&self, fi: usize, eps: i8) -> Result<LocalObservable> {
        if fi >= self.faces.len() || !(eps == 1 || eps == -1) {
            return Err(Error::invalid("face index out of range or sign not in {-1, +1}"));
        }
        LocalObservable::from_fn(self.spec.l, self.spec.d, |p| {
            rat_int(self.in_bad_piece(p, fi, eps) as i64)
        })
    }

    /// f evaluated on a full torus configuration through the identity
    /// translate (reads only block bits).
    pub fn eval_f_on_config(&self, config: u64) -> i8 {
        let mut p = 0usize;
        for (i, &v) in self.block_verts.iter().enumerate() {
            p |= (((config >> v) & 1) as usize) << i;
        }
        self.f_of(p)
    }
}

/// All translate labels s in Z_(L/l)^d, lexicographic; index in this list is
/// the bit used in scan zero-masks.
pub fn translate_tuples(spec: &ReflectionSpec) -> Vec<Vec<usize>> {
    let m = spec.axis_order();
    let mut out = vec![vec![]];
    for _ in 0..spec.d {
        let mut next = Vec::with_capacity(out.len() * m);
        for prefix in &out {
            for c in 0..m {
                let mut t = prefix.clone();
                t.push(c);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

fn translate_index(spec: &ReflectionSpec, s: &[usize]) -> usize {
    let m = spec.axis_order();
    s.iter().fold(0, |acc, &c| acc * m + c)
}

/// Unordered nearest-neighbour pairs of translates on the block lattice.
pub fn neighbor_translate_pairs(spec: &ReflectionSpec) -> Vec<(usize, usize)> {
    let m = spec.axis_order();
    let tuples = translate_tuples(spec);
    let mut pairs = BTreeSet::new();
    for (i, s) in tuples.iter().enumerate() {
        for axis in 0..spec.d {
            for delta in [1, m - 1] {
                let mut t = s.clone();
                t[axis] = (t[axis] + delta) % m;
                let j = translate_index(spec, &t);
                if i != j {
                    pairs.insert((i.min(j), i.max(j)));
                }
            }
        }
    }
    pairs.into_iter().collect()
}

/// One exhaustive pass over the independent sets of the torus, bucketing
/// every configuration by occupation and by which translates see f = 0 / +1 /
/// -1, and counting separator sign clashes between adjacent translates.
pub struct PhaseScan {
    pub k_blocks: usize,
    pub n: usize,
    /// [zero-mask][occupation]: configurations whose f-zero translate set is
    /// exactly the mask.
    pub zero_counts: Vec<Vec<u64>>,
    /// [translate][occupation] with f = +1 / -1 there.
    pub plus_counts: Vec<Vec<u64>>,
    pub minus_counts: Vec<Vec<u64>>,
    pub separator_violations: u64,
    pub first_violation: Option<(u64, usize, usize)>,
}

pub fn scan_torus(phase: &PhaseObservable) -> Result<PhaseScan> {
    let spec = &phase.spec;
    let n = spec.n_vertices();
    if n > ENUM_CAP {
        return Err(Error::CapExceeded { what: "torus vertices for the phase scan", got: n, cap: ENUM_CAP });
    }
    let kb = spec.group_order();
    if kb > TRANSLATE_CAP {
        return Err(Error::CapExceeded { what: "block translates", got: kb, cap: TRANSLATE_CAP });
    }
    let ftab = phase.f_table();
    let positions: Vec<Vec<u32>> = translate_tuples(spec)
        .iter()
        .map(|s| Ok(element_positions(spec, &tau_s(spec, s)?)))
        .collect::<Result<_>>()?;
    let pairs = neighbor_translate_pairs(spec);
    let g = torus(spec.big_l, spec.d)?;
    let masks = g.neighbor_masks()?;
    let mut zero_counts = vec![vec![0u64; n + 1]; 1 << kb];
    let mut plus_counts = vec![vec![0u64; n + 1]; kb];
    let mut minus_counts = vec![vec![0u64; n + 1]; kb];
    let mut separator_violations = 0u64;
    let mut first_violation = None;
    for_each_independent_set(&masks, |config| {
        let occ = config.count_ones() as usize;
        let mut fv = [0i8; TRANSLATE_CAP];
        let mut zmask = 0usize;
        for (si, pos) in positions.iter().enumerate() {
            let f = ftab[gather(config, pos)];
            fv[si] = f;
            match f {
                0 => zmask |= 1 << si,
                1 => plus_counts[si][occ] += 1,
                _ => minus_counts[si][occ] += 1,
            }
        }
        zero_counts[zmask][occ] += 1;
        for &(a, b) in &pairs {
            if (fv[a] as i16) * (fv[b] as i16) < 0 {
                separator_violations += 1;
                if first_violation.is_none() {
                    first_violation = Some((config, a, b));
                }
            }
        }
    });
    Ok(PhaseScan {
        k_blocks: kb,
        n,
        zero_counts,
        plus_counts,
        minus_counts,
        separator_violations,
        first_violation,
    })
}

impl PhaseScan {
    fn lam_pows(&self, fug: &Fugacity) -> Vec<Rat> {
        (0..=self.n as u64).map(|k| fug.pow(k)).collect()
    }

    pub fn partition_function(&self, fug: &Fugacity) -> Rat {
        let pows = self.lam_pows(fug);
        let mut acc = Rat::zero();
        for row in &self.zero_counts {
            for (occ, &c) in row.iter().enumerate() {
                if c > 0 {
                    acc += rat_int(c as i64) * &pows[occ];
                }
            }
        }
        acc
    }

    /// zeta of { f vanishes on every translate in `a_mask` }.
    pub fn zeta_all_zero_on(&self, a_mask: usize, fug: &Fugacity) -> Rat {
        let pows = self.lam_pows(fug);
        let mut acc = Rat::zero();
        for (z, row) in self.zero_counts.iter().enumerate() {
            if z & a_mask == a_mask {
                for (occ, &c) in row.iter().enumerate() {
                    if c > 0 {
                        acc += rat_int(c as i64) * &pows[occ];
                    }
                }
            }
        }
        acc
    }

    /// zeta of the fully disseminated bad event (f = 0 at every translate).
    pub fn zeta_b_disseminated(&self, fug: &Fugacity) -> Rat {
        self.zeta_all_zero_on((1 << self.k_blocks) - 1, fug)
    }

    /// zeta(f composed with translate s) = sum over configs of f lambda^occ.
    pub fn f_moment(&self, s: usize, fug: &Fugacity) -> Rat {
        let pows = self.lam_pows(fug);
        let mut acc = Rat::zero();
        for occ in 0..=self.n {
            let diff = self.plus_counts[s][occ] as i64 - self.minus_counts[s][occ] as i64;
            if diff != 0 {
                acc += rat_int(diff) * &pows[occ];
            }
        }
        acc
    }

    /// Law of f at translate s under the hard-core measure.
    pub fn f_distribution(&self, s: usize, fug: &Fugacity) -> Vec<(i8, Rat)> {
        let pows = self.lam_pows(fug);
        let z = self.partition_function(fug);
        let mass = |counts: &Vec<u64>| -> Rat {
            let mut acc = Rat::zero();
            for (occ, &c) in counts.iter().enumerate() {
                if c > 0 {
                    acc += rat_int(c as i64) * &pows[occ];
                }
            }
            acc
        };
        let plus = mass(&self.plus_counts[s]);
        let minus = mass(&self.minus_counts[s]);
        let zero = &z - &plus - &minus;
        vec![(-1, minus / &z), (0, zero / &z), (1, plus / &z)]
    }
}

/// Outside the bad event the sign g cannot vanish, so {f = 0} = B exactly;
/// scanned over every block pattern.
pub fn check_f_zero_set_matches_b(phase: &PhaseObservable) -> CheckReport {
    let start = Instant::now();
    let bits = phase.block_verts().len();
    let mut bad_pattern = None;
    for p in 0..1usize << bits {
        if (phase.f_of(p) == 0) != phase.in_b(p) {
            bad_pattern = Some(p);
            break;
        }
    }
    let mut rep = CheckReport::holds("zero set of f is exactly the bad event", bad_pattern.is_none());
    if let Some(p) = bad_pattern {
        rep = rep.with_witness(json!({ "pattern": p }));
    }
    rep.timed(start)
}

/// f read through a configuration depends on block bits only.
pub fn check_f_block_local(phase: &PhaseObservable) -> Result<CheckReport> {
    let start = Instant::now();
    let n = phase.spec.n_vertices();
    if n > 64 {
        return Err(Error::CapExceeded { what: "vertices for config bitmask", got: n, cap: 64 });
    }
    let block: BTreeSet<u32> = phase.block_verts().iter().copied().collect();
    let mut rng = crate::seeding::rng_for(2, "phase-locality", 0);
    use rand::Rng;
    let mut ok = true;
    'outer: for _ in 0..50 {
        let base = if n == 64 { rng.gen::<u64>() } else { rng.gen::<u64>() & ((1u64 << n) - 1) };
        let fv = phase.eval_f_on_config(base);
        for v in 0..n as u32 {
            if !block.contains(&v) && phase.eval_f_on_config(base ^ (1u64 << v)) != fv {
                ok = false;
                break 'outer;
            }
        }
    }
    Ok(CheckReport::holds("f is block-local", ok).timed(start))
}

/// Exhaustive separator property: adjacent translates never see opposite
/// signs of f on the same configuration.
pub fn check_separator(phase: &PhaseObservable, scan: &PhaseScan) -> CheckReport {
    let mut rep = CheckReport::holds(
        format!("separator on the {}^{} torus", phase.spec.big_l, phase.spec.d),
        scan.separator_violations == 0,
    );
    if let Some((config, a, b)) = scan.first_violation {
        rep = rep.with_witness(json!({ "config": config, "translates": [a, b] }));
    }
    rep
}

/// Pointwise separator statement for one configuration and one pair of
/// translates (not necessarily adjacent; adjacency is where it is a theorem).
pub fn separator_pointwise(
    phase: &PhaseObservable,
    config: u64,
    s: &[usize],
    t: &[usize],
) -> Result<CheckReport> {
    let spec = &phase.spec;
    let ftab = phase.f_table();
    let mut vals = [0i8; 2];
    for (slot, tuple) in [s, t].into_iter().enumerate() {
        let pos = element_positions(spec, &tau_s(spec, tuple)?);
        vals[slot] = ftab[gather(config, &pos)];
    }
    Ok(CheckReport::le(
        "pointwise separator product",
        0.0,
        (vals[0] as i16 * vals[1] as i16) as f64,
        tol::EXACT,
    ))
}

/// E_zeta[f] = 0 for odd block side, checked from the exact signed moment.
pub fn check_f_expectation_zero(phase: &PhaseObservable, scan: &PhaseScan) -> Result<CheckReport> {
    if phase.spec.l % 2 == 0 {
        return Err(Error::invalid("zero expectation needs an odd block side"));
    }
    let start = Instant::now();
    let moment = scan.f_moment(0, &phase.fug);
    let z = scan.partition_function(&phase.fug);
    let expectation = rat_to_f64(&(&moment / &z));
    let mut rep = CheckReport::eq("expectation of f vanishes", expectation, 0.0, tol::FLOAT_ON_EXACT);
    if moment.is_zero() {
        rep.exact = true;
    }
    Ok(rep.timed(start))
}

/// The exact contour chain for a set A of translates:
///   (i)   zeta_A^k <= zeta(B~)^|A| Z^(k-|A|)     (product estimate)
///   (ii)  Z >= (1+lambda)^(n/2)                  (trivial lower bound)
///   (iii) zeta_A^k (1+lambda)^(k |A| l^d / 2) <= zeta(B~)^|A| Z^k
/// where k is the translate count and zeta_A restricts zeta to configurations
/// whose f vanishes on all of A.
pub fn contour_probability_chain(
    phase: &PhaseObservable,
    scan: &PhaseScan,
    a: &[usize],
) -> Result<CheckReport> {
    let start = Instant::now();
    let k = scan.k_blocks;
    let mut a_mask = 0usize;
    for &s in a {
        if s >= k {
            return Err(Error::invalid("translate index out of range"));
        }
        if a_mask >> s & 1 == 1 {
            return Err(Error::invalid("repeated translate in A"));
        }
        a_mask |= 1 << s;
    }
    if a.is_empty() {
        return Err(Error::invalid("need at least one translate"));
    }
    let fug = &phase.fug;
    let za = scan.zeta_all_zero_on(a_mask, fug);
    let zb = scan.zeta_b_disseminated(fug);
    let z = scan.partition_function(fug);
    let n = scan.n;
    let asz = a.len();
    let one_plus = fug.one_plus();

    let link1 = rat_pow(&za, k as u64) <= rat_pow(&zb, asz as u64) * rat_pow(&z, (k - asz) as u64);
    let link2 = rat_pow(&one_plus, (n / 2) as u64) <= z;
    // k is even (the axis order is even), so k |A| l^d / 2 is an integer
    let exponent = (k / 2) * asz * phase.spec.l.pow(phase.spec.d as u32);
    let combined = rat_pow(&za, k as u64) * rat_pow(&one_plus, exponent as u64)
        <= rat_pow(&zb, asz as u64) * rat_pow(&z, k as u64);

    let prob = rat_to_f64(&(&za / &z));
    let ln_one_plus = rat_to_f64(&one_plus).ln();
    let per_block = crate::numeric::ln_rat(&zb) / k as f64
        - (phase.spec.l.pow(phase.spec.d as u32) as f64 / 2.0) * ln_one_plus;
    let bound = (asz as f64 * per_block).exp();
    let mut rep = CheckReport::le(
        format!("contour bound for |A| = {asz}"),
        prob,
        bound,
        tol::EXACT,
    );
    rep.pass = link1 && link2 && combined;
    rep.exact = true;
    Ok(rep
        .with_witness(json!({
            "zeta_A": za.to_string(),
            "zeta_B_disseminated": zb.to_string(),
            "Z": z.to_string(),
            "product_estimate": link1,
            "trivial_lower_bound": link2,
            "combined": combined,
        }))
        .timed(start))
}

/// Default threshold coefficient.
pub fn default_c_alpha() -> Rat {
    rat(1, 100)
}

// quick sanity used by a few tests: total mass of a distribution row
// fn mass(dist: &[(i8, Rat)]) -> Rat {
//     dist.iter().map(|(_, p)| p.clone()).sum()
// }

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(s: &str) -> Fugacity {
        Fugacity::parse(s).unwrap()
    }

    fn phase(l: usize, big_l: usize, d: usize, s: &str) -> PhaseObservable {
        let spec = ReflectionSpec::new(l, big_l, d).unwrap();
        PhaseObservable::new(&spec, &lam(s), &default_c_alpha()).unwrap()
    }

    fn pattern_of(ph: &PhaseObservable, occupied: &[&[usize]]) -> usize {
        let coords = ph.spec.block_coords();
        let mut p = 0usize;
        for want in occupied {
            let i = coords.iter().position(|c| c.as_slice() == *want).unwrap();
            p |= 1 << i;
        }
        p
    }

    #[test]
    fn alpha_and_membership_by_hand() {
        let ph = phase(3, 6, 2, "1");
        assert_eq!(ph.alpha, rat(9, 200));
        // empty block: tied classes, light faces -> bad, f = 0
        assert_eq!(ph.g_of(0), 0);
        assert!(ph.in_b(0));
        assert_eq!(ph.f_of(0), 0);
        // odd-only pattern covering all four faces: not bad, f = +1
        let p = pattern_of(&ph, &[&[0, 1], &[3, 0], &[2, 3]]);
        assert!(!ph.in_b0(p));
        assert!((0..4).all(|fi| !ph.in_face_event(p, fi)));
        assert_eq!(ph.f_of(p), 1);
        assert!(!ph.in_bad_piece(p, 0, 1));
        // even-only pattern covering all four faces: f = -1
        let q = pattern_of(&ph, &[&[0, 0], &[3, 1], &[1, 3]]);
        assert_eq!(ph.f_of(q), -1);
        // occupy one vertex per class away from no face? any balanced pattern
        // is bad regardless of faces
        let r = pattern_of(&ph, &[&[1, 1], &[1, 2]]);
        assert!(ph.in_b0(r));
        assert_eq!(ph.f_of(r), 0);
    }

    #[test]
    fn one_dimensional_f_is_identically_zero() {
        // the two block endpoints lie in different parity classes, so a block
        // avoiding both face events is automatically balanced
        let ph = phase(3, 6, 1, "1");
        for p in 0..1usize << 4 {
            assert_eq!(ph.f_of(p), 0);
        }
    }

    #[test]
    fn zero_set_is_b_and_local() {
        for ph in [phase(3, 6, 2, "1"), phase(3, 6, 1, "1/2"), phase(1, 4, 1, "2"), phase(1, 4, 2, "1")] {
            assert!(check_f_zero_set_matches_b(&ph).pass);
            assert!(check_f_block_local(&ph).unwrap().pass);
        }
    }

    #[test]
    fn scan_on_the_six_cycle() {
        let ph = phase(3, 6, 1, "1");
        let scan = scan_torus(&ph).unwrap();
        assert_eq!(scan.k_blocks, 2);
        assert_eq!(scan.partition_function(&ph.fug), rat_int(18));
        // f vanishes identically here, so the disseminated bad event is
        // everything and the separator holds trivially
        assert_eq!(scan.zeta_b_disseminated(&ph.fug), rat_int(18));
        assert!(check_separator(&ph, &scan).pass);
        let exp = check_f_expectation_zero(&ph, &scan).unwrap();
        assert!(exp.pass && exp.exact);
        let dist = scan.f_distribution(0, &ph.fug);
        assert_eq!(dist[1], (0, rat_int(1)));
        // the chain is still informative: it reduces to the trivial bound
        let chain = contour_probability_chain(&ph, &scan, &[0]).unwrap();
        assert!(chain.pass && chain.exact);
    }

    #[test]
    fn even_block_side_rejected_for_expectation() {
        let ph = phase(2, 4, 1, "1");
        let scan = scan_torus(&ph).unwrap();
        assert!(check_f_expectation_zero(&ph, &scan).is_err());
        // but the separator scan itself is fine
        assert!(check_separator(&ph, &scan).pass);
    }

    #[test]
    fn neighbor_pairs_on_small_lattices() {
        let spec = ReflectionSpec::new(3, 6, 2).unwrap();
        assert_eq!(
            neighbor_translate_pairs(&spec),
            vec![(0, 1), (0, 2), (1, 3), (2, 3)]
        );
        let line = ReflectionSpec::new(1, 4, 1).unwrap();
        assert_eq!(neighbor_translate_pairs(&line), vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn pointwise_separator_calls() {
        let ph = phase(3, 6, 2, "1");
        let rep = separator_pointwise(&ph, 0, &[0, 0], &[1, 0]).unwrap();
        assert!(rep.pass);
    }

    // the full 6x6 torus: one pass shared by the separator, the vanishing
    // expectation and the contour chain
    #[test]
    fn scan_on_the_six_six_torus() {
        let ph = phase(3, 6, 2, "1");
        let scan = scan_torus(&ph).unwrap();
        assert_eq!(scan.k_blocks, 4);
        assert!(check_separator(&ph, &scan).pass);
        assert_eq!(scan.separator_violations, 0);

        let exp = check_f_expectation_zero(&ph, &scan).unwrap();
        assert!(exp.pass, "{exp}");
        assert!(exp.exact, "the signed moment should cancel exactly");

        // + and - masses agree exactly at every translate
        for s in 0..4 {
            assert!(scan.f_moment(s, &ph.fug).is_zero());
        }

        // f is not identically zero here
        let z = scan.partition_function(&ph.fug);
        let zb = scan.zeta_b_disseminated(&ph.fug);
        assert!(zb < z);

        for a in [vec![0], vec![0, 1], vec![0, 3]] {
            let chain = contour_probability_chain(&ph, &scan, &a).unwrap();
            assert!(chain.pass && chain.exact, "{chain}");
        }
    }

    #[test]
    fn chain_input_validation() {
        let ph = phase(3, 6, 1, "1");
        let scan = scan_torus(&ph).unwrap();
        assert!(contour_probability_chain(&ph, &scan, &[]).is_err());
        assert!(contour_probability_chain(&ph, &scan, &[0, 0]).is_err());
        assert!(contour_probability_chain(&ph, &scan, &[5]).is_err());
    }
}
