//! Closed-form lower and upper bounds, evaluated exactly.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::host::HostMode;

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn binom_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * big(n - i) / big(i + 1);
    }
    acc
}

pub fn ceil_rational(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

/// Maximum edges in an `n`-vertex graph with no path on `k` vertices.
pub fn ex_path(n: u64, k: u64) -> BigInt {
    assert!(k >= 2);
    let (q, r) = n.div_rem(&(k - 1));
    big(q) * binom_big(k - 1, 2) + binom_big(r, 2)
}

/// Colors needed by any `(C_k, 3)`-coloring of `K_n`: no color class holds a
/// monochromatic `P_k`.
pub fn cycle_lower(n: u64, k: u64) -> BigInt {
    assert!(n >= k && k >= 4);
    ceil_rational(&BigRational::new(binom_big(n, 2), ex_path(n, k)))
}

pub fn a_of_k(k: u64) -> u64 {
    assert!(k >= 3);
    // floor((2k-1+sqrt(8k-7))/2) = floor((2k-1+isqrt(8k-7))/2) whether or not
    // 8k-7 is a perfect square.
    let s = (8 * k - 7).sqrt();
    (2 * k - 1 + s) / 2
}

pub fn p_of_k(k: u64) -> BigRational {
    let a = a_of_k(k);
    ratio(big(a - 1), big(2 * (k - 1))) + ratio(big(k - 2), big(2 * a))
}

/// `(lower, upper)` for `f(K_{n,n}, C_{2k}, 3)` without the additive terms.
pub fn bipartite_bounds(n: u64, k: u64) -> (BigRational, BigRational) {
    let a = a_of_k(k);
    let lower = ratio(big(n), big(2 * (k - 1)));
    let upper = (ratio(1, big(2 * (k - 1))) + ratio(1, big(2 * a))) * BigRational::from(big(n));
    (lower, upper)
}

/// Colors needed by any `(K_{k+2}^k, C(k+2,k)-1)`-coloring of `K_n^k`.
pub fn hyper_clique_lower(n: u64, k: u64) -> BigRational {
    assert!(k >= 2 && n >= k + 2);
    let coeff = BigRational::from(big(k)) - ratio(1, big(k + 1));
    coeff * BigRational::new(binom_big(n, k), binom_big(n, k - 1))
}

pub fn hyper_clique_upper_coeff(k: u64) -> BigRational {
    ratio(big(k * k + k - 1), big(k * k + k))
}

/// Colors needed by any proper `(P_8, 5)`-coloring of `K_n`.
pub fn p8_lower(n: u64) -> BigInt {
    ceil_rational(&(ratio(7, 15) * BigRational::from(binom_big(n, 2))))
}

/// Colors needed by any `(P_6, 4)`-coloring of `K_n`: deleting at most three
/// vertices leaves a proper coloring in which every color is used at most twice.
pub fn p6_lower(n: u64) -> BigInt {
    ceil_rational(&BigRational::new(binom_big(n.saturating_sub(3), 2), big(2)))
}

/// `(lower, upper)` coefficients times `n` for `f(K_n^k, C_l^k, k+1)`.
pub fn tight_cycle_bounds(n: u64, k: u64, ell: u64) -> (BigRational, BigRational) {
    assert!(ell > k);
    let lower = ratio(big(2 * n), big(k * ell + ell - 1));
    let upper = ratio(big(n), big(ell - k));
    (lower, upper)
}

/// Upper bound on the number of edges of a `P_l^k`-free subgraph of `K_n^k`.
pub fn tight_path_ex_cap(n: u64, k: u64, ell: u64) -> BigRational {
    ratio(big(k * ell + ell - 1), big(2 * k)) * BigRational::from(binom_big(n, k - 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Lower,
    Upper,
    /// A derived parameter rather than a bound.
    Param,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
            Direction::Param => "param",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    /// Holds at this very `n`.
    Exact,
    /// Leading term only; lower-order terms dropped.
    Asymptotic,
}

impl Exactness {
    pub fn as_str(self) -> &'static str {
        match self {
            Exactness::Exact => "exact",
            Exactness::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundEntry {
    pub name: String,
    pub value: BigRational,
    pub direction: Direction,
    pub exactness: Exactness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub mode: HostMode,
    pub n: u64,
    pub k: u64,
    pub ell: Option<u64>,
    pub entries: Vec<BoundEntry>,
}

pub const BOUNDS_CSV_HEADER: &str = "name,direction,exactness,numerator,denominator,decimal";

/// Decimal rendering rounded half away from zero to 6 places, trailing zeros
/// trimmed but at least one fractional digit kept.
pub fn decimal(x: &BigRational) -> String {
    let scale = BigInt::from(1_000_000u32);
    let scaled = x * BigRational::from(scale.clone());
    let rounded = scaled.round().to_integer();
    let neg = rounded.is_negative();
    let (int, frac) = rounded.abs().div_rem(&scale);
    let mut frac = format!("{:06}", frac.to_u64().unwrap_or(0));
    while frac.len() > 1 && frac.ends_with('0') {
        frac.pop();
    }
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

/// [`decimal`] of `num / den`.
pub fn ratio_decimal(num: u64, den: u64) -> String {
    decimal(&BigRational::new(BigInt::from(num), BigInt::from(den.max(1))))
}

impl BoundsReport {
    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(BOUNDS_CSV_HEADER);
        out.push('\n');
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                e.name,
                e.direction.as_str(),
                e.exactness.as_str(),
                e.value.numer(),
                e.value.denom(),
                decimal(&e.value)
            ));
        }
        out
    }

    fn push(&mut self, name: &str, value: BigRational, direction: Direction, exactness: Exactness) {
        self.entries.push(BoundEntry { name: name.to_string(), value, direction, exactness });
    }
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}

fn int(x: BigInt) -> BigRational {
    BigRational::from(x)
}

/// Every bound that applies to the given host and parameters.
///
/// `k` is the cycle length for complete hosts, the half cycle length for
/// bipartite hosts and the uniformity for uniform hosts. `ell` is the longest
/// forbidden cycle (complete) or the tight-cycle length (uniform).
pub fn bounds_report(mode: HostMode, n: u64, k: u64, ell: Option<u64>) -> Result<BoundsReport> {
    use Direction::*;
    use Exactness::*;
    let mut r = BoundsReport { mode, n, k, ell, entries: Vec::new() };
    match mode {
        HostMode::Complete => {
            if k < 4 {
                return Err(Error::Config(format!("cycle length k must be at least 4, got {k}")));
            }
            if let Some(l) = ell {
                if l < k {
                    return Err(Error::Config(format!("ell = {l} is below k = {k}")));
                }
            }
            r.push("ex_path", int(ex_path(n, k)), Param, Exact);
            if n >= k {
                r.push("cycle_lower", int(cycle_lower(n, k)), Lower, Exact);
            }
            let coeff = ratio(big(n), big(k - 2));
            r.push("cycle_lower_asymptotic", coeff.clone(), Lower, Asymptotic);
            r.push("cycle_upper", coeff.clone(), Upper, Asymptotic);
            r.push("stage1_palette", int(ceil_rational(&coeff)), Param, Exact);
            let e = int(binom_big(n, 2));
            r.push("p4_q3_value", e.clone(), Upper, Exact);
            r.push("p5_q4_value", e.clone(), Upper, Exact);
            r.push("p6_lower", int(p6_lower(n)), Lower, Exact);
            r.push("p6_asymptotic", ratio(big(n * n), 4), Upper, Asymptotic);
            r.push("p7_upper", e.clone(), Upper, Exact);
            r.push("p7_asymptotic", ratio(big(n * n), 2), Lower, Asymptotic);
            r.push("p8_proper_lower", int(p8_lower(n)), Lower, Exact);
            r.push("p8_proper_asymptotic", ratio(big(7 * n * n), 30), Upper, Asymptotic);
        }
        HostMode::Bipartite => {
            if k < 3 {
                return Err(Error::Config(format!("bipartite k must be at least 3, got {k}")));
            }
            let (lo, hi) = bipartite_bounds(n, k);
            r.push("a", int(big(a_of_k(k))), Param, Exact);
            r.push("p", p_of_k(k), Param, Exact);
            r.push("bipartite_lower", lo, Lower, Asymptotic);
            r.push("bipartite_upper", hi.clone(), Upper, Asymptotic);
            r.push("stage1_palette", int(ceil_rational(&hi)), Param, Exact);
        }
        HostMode::UniformComplete => {
            if k < 2 || n < k + 2 {
                return Err(Error::Config(format!("need k >= 2 and n >= k + 2, got n = {n}, k = {k}")));
            }
            let lower = hyper_clique_lower(n, k);
            r.push("hyper_clique_lower", lower.clone(), Lower, Exact);
            r.push("hyper_clique_lower_ceil", int(ceil_rational(&lower)), Lower, Exact);
            let coeff = hyper_clique_upper_coeff(k);
            r.push("hyper_clique_upper_coeff", coeff.clone(), Param, Exact);
            r.push("hyper_clique_upper", coeff * int(big(n)), Upper, Asymptotic);
            if let Some(l) = ell {
                if l <= k {
                    return Err(Error::Config(format!("tight cycle length must exceed k, got {l}")));
                }
                let (lo, hi) = tight_cycle_bounds(n, k, l);
                r.push("tight_cycle_lower", lo, Lower, Asymptotic);
                r.push("tight_cycle_upper", hi, Upper, Asymptotic);
                let cap = tight_path_ex_cap(n, k, l);
                let derived = int(binom_big(n, k)) / cap.clone();
                r.push("tight_cycle_lower_derived", derived, Lower, Asymptotic);
                r.push("tight_path_ex_cap", cap, Param, Asymptotic);
            }
        }
    }
    Ok(r)
}
