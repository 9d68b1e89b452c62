//! Exact rationals, robust logs, compensated float sums.
//!
//! Everything that *is* a rational number (partition functions at rational
//! fugacity, event masses, binomial tails) stays a [`Rat`] for as long as
//! possible; `f64` appears only where a logarithm or entropy forces it.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// x^k by binary exponentiation (k = 0 gives 1, including for x = 0).
pub fn rat_pow(x: &Rat, mut k: u64) -> Rat {
    let mut base = x.clone();
    let mut acc = Rat::one();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    acc
}

pub fn int_pow(x: &Int, mut k: u64) -> Int {
    let mut base = x.clone();
    let mut acc = Int::one();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for i in 0..k {
        acc = acc * Int::from(n - i) / Int::from(i + 1);
    }
    acc
}

/// P(Bin(n, p) = k), exact.
pub fn binomial_pmf(n: u64, k: u64, p: &Rat) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let q = Rat::one() - p;
    Rat::from_integer(binomial(n, k)) * rat_pow(p, k) * rat_pow(&q, n - k)
}

/// Natural log of a positive big integer, good to ~1e-14 relative.
pub fn ln_int(x: &Int) -> f64 {
    assert!(x.is_positive(), "ln of non-positive integer");
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rat(x: &Rat) -> f64 {
    assert!(x.is_positive(), "ln of non-positive rational");
    ln_int(x.numer()) - ln_int(x.denom())
}

/// Rational -> f64 that survives numerator/denominator far outside f64 range.
pub fn rat_to_f64(x: &Rat) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    let l = ln_rat(&x.abs());
    sign * l.exp() // may legitimately overflow to inf
}

pub fn rat_from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::invalid(format!("{x} is not a finite number")))
}

/// Neumaier-compensated sum; exact-ish even for badly conditioned cancellation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + neumaier_sum(xs.iter().map(|x| (x - m).exp())).ln()
}

/// p*ln(p) extended by 0 at p = 0.
pub fn xlogx(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * p.ln()
    }
}

/// Binary entropy in nats: -x ln x - (1-x) ln(1-x) on [0,1].
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("binary entropy argument {x} outside [0,1]")));
    }
    Ok(-xlogx(x) - xlogx(1.0 - x))
}

/// Activity λ of the model, kept exact alongside the floats derived from it.
#[derive(Clone, Debug, PartialEq)]
pub struct Fugacity {
    lam: Rat,
    lam_f64: f64,
    log_lam: f64,
    lam_tilde: f64, // log(1 + λ)
}

impl Fugacity {
    pub fn new(lam: Rat) -> Result<Self> {
        if !lam.is_positive() {
            return Err(Error::invalid(format!("fugacity must be > 0, got {lam}")));
        }
        let lam_f64 = rat_to_f64(&lam);
        let log_lam = ln_rat(&lam);
        let lam_tilde = ln_rat(&(Rat::one() + &lam));
        Ok(Fugacity { lam, lam_f64, log_lam, lam_tilde })
    }

    pub fn from_parts(n: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("fugacity denominator is zero"));
        }
        Self::new(rat(n, d))
    }

    /// Accepts "2", "1/2", "0.25".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("cannot parse fugacity {s:?} (want e.g. 2, 1/2, 0.25)"));
        let r = if let Some((n, d)) = s.split_once('/') {
            let n: Int = n.trim().parse().map_err(|_| bad())?;
            let d: Int = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Rat::new(n, d)
        } else if let Some((whole, frac)) = s.split_once('.') {
            let whole = if whole.is_empty() { Int::zero() } else { whole.parse().map_err(|_| bad())? };
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: Int = frac.parse().map_err(|_| bad())?;
            let scale = int_pow(&Int::from(10), frac.len() as u64);
            let sign = if s.starts_with('-') { -Rat::one() } else { Rat::one() };
            sign * (Rat::from_integer(whole.abs()) + Rat::new(digits, scale))
        } else {
            Rat::from_integer(s.parse().map_err(|_| bad())?)
        };
        Self::new(r)
    }

    pub fn rat(&self) -> &Rat {
        &self.lam
    }
    pub fn f64(&self) -> f64 {
        self.lam_f64
    }
    pub fn log_lam(&self) -> f64 {
        self.log_lam
    }
    /// λ̃ = log(1 + λ), the free-energy density of a free site pair.
    pub fn lam_tilde(&self) -> f64 {
        self.lam_tilde
    }
    pub fn one_plus(&self) -> Rat {
        Rat::one() + &self.lam
    }
    /// λ/(1+λ): occupation probability of an unconstrained site.
    pub fn occupation(&self) -> Rat {
        &self.lam / self.one_plus()
    }
    /// λ^k as an exact rational.
    pub fn pow(&self, k: u64) -> Rat {
        rat_pow(&self.lam, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 5), int(252));
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
        assert_eq!(binomial(5, 9), int(0));
    }

    #[test]
    fn big_logs() {
        // ln(2^1000) = 1000 ln 2
        let x = int_pow(&int(2), 1000);
        let expect = 1000.0 * std::f64::consts::LN_2;
        assert!((ln_int(&x) - expect).abs() < 1e-9 * expect);

        let r = Rat::new(int_pow(&int(3), 700), int_pow(&int(2), 300));
        let expect = 700.0 * 3f64.ln() - 300.0 * 2f64.ln();
        assert!((ln_rat(&r) - expect).abs() < 1e-9 * expect.abs());
    }

    #[test]
    fn rat_to_f64_extreme() {
        let tiny = Rat::new(Int::one(), int_pow(&int(2), 2000));
        assert_eq!(rat_to_f64(&tiny), 0.0);
        let huge = Rat::new(int_pow(&int(2), 2000), Int::one());
        assert!(rat_to_f64(&huge).is_infinite());
        let mid = Rat::new(int_pow(&int(2), 400) * 3, int_pow(&int(2), 399));
        assert!((rat_to_f64(&mid) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn fugacity_parse() {
        assert_eq!(Fugacity::parse("2").unwrap().rat(), &rat_int(2));
        assert_eq!(Fugacity::parse("1/2").unwrap().rat(), &rat(1, 2));
        assert_eq!(Fugacity::parse("0.25").unwrap().rat(), &rat(1, 4));
        assert_eq!(Fugacity::parse("1.5").unwrap().rat(), &rat(3, 2));
        assert!(Fugacity::parse("0").is_err());
        assert!(Fugacity::parse("-1").is_err());
        assert!(Fugacity::parse("x").is_err());
        assert!(Fugacity::parse("1/0").is_err());
        let lam = Fugacity::parse("1").unwrap();
        assert!((lam.lam_tilde() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(lam.occupation(), rat(1, 2));
    }

    #[test]
    fn neumaier_cancellation() {
        let xs = vec![1e16, 1.0, -1e16];
        assert_eq!(neumaier_sum(xs), 1.0);
    }

    #[test]
    fn entropy_edges() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(binary_entropy(1.5).is_err());
    }
}
