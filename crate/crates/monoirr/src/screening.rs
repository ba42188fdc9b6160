//! Prime-level screening.
//!
//! A screening rule for a prime p >= 5 certifies that every composite
//! multiple N of p is monomially reducible. Each rule produces, for any
//! cofactor m, a value x mod p with K_n(x) ≡ ε = ±1 and a proof that the
//! lifted residue l = crt(s mod m, x mod p) has minimal monomial size larger
//! than n + 2; the constructed part (ε·K_{n-1}(l), l, ..., l, ε·K_{n-1}(l))
//! of size n + 2 then reduces the minimal l-monomial solution.
//!
//! Rule order: the two quadratic-residue rules (sizes 5 and 6), four fixed
//! witness polynomials (sizes 9, 11, 15, 21), then a generic search over all
//! usable n. The size exclusions differ: fixed rules reject a root x unless
//! M_j(x) ≠ ±Id mod p for every multiple j of 3 up to the part size (sound
//! for every cofactor m >= 2), while the generic rule only excludes the sign
//! σ_j = K_j(s) forced through the m side, which needs m >= 3.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::continuant::{
    continuant_constant_seq, poly_roots_mod_p, IntPolynomial, ROOT_SCAN_BOUND,
};
use crate::error::{Error, Result};
use crate::modular::{crt_lift, is_prime, primes_up_to, Modulus};
use crate::monomial::{find_reduction_certificate, minimal_monomial_size};

/// Default cap on the witness size n for the generic search. Covers every
/// size the fixed rules use (3, 4, 7, 9, 13, 19).
pub const DEFAULT_NMAX: u32 = 30;

fn golden_poly() -> IntPolynomial {
    // X^2 - X - 1, the discriminant-5 factor of K_3 - 1
    IntPolynomial::new(vec![-1, -1, 1])
}

fn sqrt2_poly() -> IntPolynomial {
    // X^2 - 2, the nontrivial factor of K_4 + 1
    IntPolynomial::new(vec![-2, 0, 1])
}

fn cubic_poly() -> IntPolynomial {
    // X^3 - X^2 - 2X + 1, from K_7 + 1
    IntPolynomial::new(vec![1, -2, -1, 1])
}

fn quintic_poly() -> IntPolynomial {
    // X^5 + X^4 - 4X^3 - 3X^2 + 3X + 1, from K_9 + 1
    IntPolynomial::new(vec![1, 3, -3, -4, 1, 1])
}

fn sextic_poly() -> IntPolynomial {
    // X^6 - X^5 - 5X^4 + 4X^3 + 6X^2 - 3X - 1, from K_13 + 1
    IntPolynomial::new(vec![-1, -3, 6, 4, -5, -1, 1])
}

fn nonic_poly() -> IntPolynomial {
    // X^9 - X^8 - 8X^7 + 7X^6 + 21X^5 - 15X^4 - 20X^3 + 10X^2 + 5X - 1,
    // from K_19 + 1
    IntPolynomial::new(vec![-1, 5, 10, -20, -15, 21, 7, -8, -1, 1])
}

/// The data (n, ε, s, x) behind a screening rule: K_n(s) = ε over Z,
/// K_n(x) ≡ ε mod p, and the size exclusions hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericWitness {
    pub n: u32,
    pub eps: i8,
    pub s: i8,
    pub x: u64,
}

/// Which rule screens a prime; `root`/witness data pin the reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum ScreenRule {
    #[serde(rename = "quadratic-5")]
    Quadratic5 { root: u64 },
    #[serde(rename = "quadratic-8")]
    Quadratic8 { root: u64 },
    PolyCubic { root: u64 },
    PolyQuintic { root: u64 },
    PolySextic { root: u64 },
    PolyNonic { root: u64 },
    Generic(GenericWitness),
    None,
}

impl ScreenRule {
    pub fn is_none(&self) -> bool {
        matches!(self, ScreenRule::None)
    }

    /// The (n, ε, s, x) lemma data equivalent to the rule.
    pub fn witness(&self) -> Option<GenericWitness> {
        match *self {
            ScreenRule::Quadratic5 { root } => Some(GenericWitness { n: 3, eps: 1, s: -1, x: root }),
            ScreenRule::Quadratic8 { root } => Some(GenericWitness { n: 4, eps: -1, s: 1, x: root }),
            ScreenRule::PolyCubic { root } => Some(GenericWitness { n: 7, eps: -1, s: -1, x: root }),
            ScreenRule::PolyQuintic { root } => Some(GenericWitness { n: 9, eps: -1, s: 1, x: root }),
            ScreenRule::PolySextic { root } => Some(GenericWitness { n: 13, eps: -1, s: -1, x: root }),
            ScreenRule::PolyNonic { root } => Some(GenericWitness { n: 19, eps: -1, s: -1, x: root }),
            ScreenRule::Generic(w) => Some(w),
            ScreenRule::None => None,
        }
    }
}

/// Screening outcome for one prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeScreenReport {
    pub p: u64,
    pub rule: ScreenRule,
}

/// K_j(1, ..., 1): period six over the integers.
pub(crate) fn continuant_at_one(j: usize) -> i64 {
    [1, 1, 0, -1, -1, 0][j % 6]
}

/// K_j(-1, ..., -1): period three over the integers.
pub(crate) fn continuant_at_minus_one(j: usize) -> i64 {
    [1, -1, 0][j % 3]
}

fn continuant_at_sign(s: i8, j: usize) -> i64 {
    if s == 1 {
        continuant_at_one(j)
    } else {
        continuant_at_minus_one(j)
    }
}

fn reduce_sign(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

fn check_prime_at_least_5(p: u64) -> Result<()> {
    if p < 5 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!(
            "screening needs a prime >= 5, got {p}"
        )));
    }
    if p > ROOT_SCAN_BOUND {
        return Err(Error::UnsupportedSize(format!(
            "screening scans all residues mod p; {p} exceeds {ROOT_SCAN_BOUND}"
        )));
    }
    Ok(())
}

/// Sign-agnostic size exclusion: no multiple j of 3 with 3 <= j <= part_size
/// may have M_j(x, ..., x) = ±Id mod p, i.e. K_{j-1}(x) ≡ 0 and K_j(x) ≡ ±1.
fn excludes_small_sizes(seq: &[u64], p: u64, part_size: usize) -> bool {
    let mut j = 3;
    while j <= part_size {
        if seq[j - 1] == 0 && (seq[j] == 1 || seq[j] == p - 1) {
            return false;
        }
        j += 3;
    }
    true
}

/// Smallest root of `poly` mod p passing the size exclusions for a reduction
/// part of `part_size` entries.
fn usable_root(p: u64, poly: &IntPolynomial, part_size: usize) -> Result<Option<u64>> {
    for root in poly_roots_mod_p(poly, p)? {
        let x = root.value();
        if x == 1 || x == p - 1 {
            continue;
        }
        let seq = continuant_constant_seq(x, p, part_size);
        if excludes_small_sizes(&seq, p, part_size) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// The fixed rules only: quadratic-5, quadratic-8, then the four witness
/// polynomials, in that order. Returns `ScreenRule::None` when nothing
/// applies (the generic search is a separate step).
pub fn screen_prime_fixed(p: u64) -> Result<ScreenRule> {
    check_prime_at_least_5(p)?;
    if p == 5 || p % 5 == 1 || p % 5 == 4 {
        // 5 is a square mod p, so X^2 - X - 1 splits; its roots are never ±1.
        let root = usable_root(p, &golden_poly(), 5)?.ok_or_else(|| {
            Error::Internal(format!("no usable root of X^2 - X - 1 mod {p}"))
        })?;
        return Ok(ScreenRule::Quadratic5 { root });
    }
    if p % 8 == 1 || p % 8 == 7 {
        // 2 is a square mod p.
        let root = usable_root(p, &sqrt2_poly(), 6)?.ok_or_else(|| {
            Error::Internal(format!("no usable root of X^2 - 2 mod {p}"))
        })?;
        return Ok(ScreenRule::Quadratic8 { root });
    }
    if let Some(root) = usable_root(p, &cubic_poly(), 9)? {
        return Ok(ScreenRule::PolyCubic { root });
    }
    if let Some(root) = usable_root(p, &quintic_poly(), 11)? {
        return Ok(ScreenRule::PolyQuintic { root });
    }
    if let Some(root) = usable_root(p, &sextic_poly(), 15)? {
        return Ok(ScreenRule::PolySextic { root });
    }
    if let Some(root) = usable_root(p, &nonic_poly(), 21)? {
        return Ok(ScreenRule::PolyNonic { root });
    }
    Ok(ScreenRule::None)
}

/// First applicable rule: the fixed rules, then the generic search up to
/// `n_max`.
pub fn screen_prime(p: u64, n_max: u32) -> Result<ScreenRule> {
    let fixed = screen_prime_fixed(p)?;
    if !fixed.is_none() {
        return Ok(fixed);
    }
    Ok(match generic_witness_search(p, n_max)? {
        Some(w) => ScreenRule::Generic(w),
        None => ScreenRule::None,
    })
}

/// Does (n, eps, s, x) satisfy every witness invariant mod p?
///
/// Sign-aware exclusions: if the minimal monomial size of the lift were a
/// multiple j of 3 up to n + 2, then mod m >= 3 the global sign is pinned to
/// σ_j = K_j(s), so mod p one would need K_{j-1}(x) ≡ 0 and K_j(x) ≡ σ_j.
pub fn witness_invariants_hold(p: u64, w: &GenericWitness) -> bool {
    let n = w.n as usize;
    if n < 2 || n % 6 == 2 || n % 6 == 5 {
        return false;
    }
    if w.eps != 1 && w.eps != -1 {
        return false;
    }
    if w.s != 1 && w.s != -1 {
        return false;
    }
    if continuant_at_sign(w.s, n) != w.eps as i64 {
        return false;
    }
    if w.x >= p || w.x == 1 || w.x == p - 1 {
        return false;
    }
    let seq = continuant_constant_seq(w.x, p, n + 2);
    if seq[n] != reduce_sign(w.eps as i64, p) {
        return false;
    }
    let mut j = 3;
    while j <= n + 2 {
        let sigma = reduce_sign(continuant_at_sign(w.s, j), p);
        if seq[j - 1] == 0 && seq[j] == sigma {
            return false;
        }
        j += 3;
    }
    true
}

/// Smallest witness (by n, then by the fixed (ε, s) pair order (-1,-1),
/// (-1,+1), (+1,-1), (+1,+1), then by x) with n ≢ 2, 5 mod 6 and n <= n_max.
pub fn generic_witness_search(p: u64, n_max: u32) -> Result<Option<GenericWitness>> {
    check_prime_at_least_5(p)?;
    if n_max < 3 {
        return Err(Error::InvalidArgument(format!("n_max must be >= 3, got {n_max}")));
    }
    for n in 3..=n_max {
        if n % 6 == 2 || n % 6 == 5 {
            continue;
        }
        for (eps, s) in [(-1i8, -1i8), (-1, 1), (1, -1), (1, 1)] {
            if continuant_at_sign(s, n as usize) != eps as i64 {
                continue;
            }
            for x in 0..p {
                let w = GenericWitness { n, eps, s, x };
                if witness_invariants_hold(p, &w) {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// End-to-end check of a witness against the classifier: over N = m·p the
/// lifted value must have minimal monomial size above n + 2 and a reduction
/// certificate with part size at most n + 2.
pub fn validate_witness(p: u64, w: &GenericWitness, m: u64) -> Result<bool> {
    check_prime_at_least_5(p)?;
    if m < 3 {
        return Err(Error::InvalidArgument(format!(
            "witness validation needs a cofactor m >= 3, got {m}"
        )));
    }
    if m.is_multiple_of(p) {
        return Err(Error::InvalidArgument(format!("{m} and {p} are not coprime")));
    }
    if !witness_invariants_hold(p, w) {
        return Ok(false);
    }
    let mm = Modulus::new(m)?;
    let pm = Modulus::new(p)?;
    let lift = crt_lift(mm.residue_i64(w.s as i64), pm.residue(w.x))?;
    let (h, _) = minimal_monomial_size(lift)?;
    if h <= w.n as usize + 2 {
        return Ok(false);
    }
    Ok(match find_reduction_certificate(lift)? {
        Some(cert) => cert.part_size <= w.n as usize + 2,
        None => false,
    })
}

/// Odd primes in [5, bound] that no fixed rule screens.
pub fn omega_unscreened(bound: u64) -> Result<Vec<u64>> {
    if bound < 5 {
        return Err(Error::InvalidArgument(format!("bound must be >= 5, got {bound}")));
    }
    let primes = primes_up_to(bound)?;
    let mut unscreened: Vec<(u64, bool)> = primes
        .into_par_iter()
        .filter(|&p| p >= 5)
        .map(|p| Ok((p, screen_prime_fixed(p)?.is_none())))
        .collect::<Result<_>>()?;
    unscreened.retain(|&(_, none)| none);
    Ok(unscreened.into_iter().map(|(p, _)| p).collect())
}

/// One congruence class count in a density report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub modulus: u64,
    pub residue: u64,
    pub count: u64,
}

/// Share of primes <= x screened by the two quadratic rules:
/// D(x) = #{p <= x : p ≡ ±1 mod 5 or p ≡ ±1 mod 8} / #{p <= x}.
///
/// Rendered as an exact fraction plus a fixed 6-decimal string; the class
/// counts carry the inclusion–exclusion breakdown over residues mod 5, 8
/// and 40 (the limit of the fraction is 4·(1/4) − 4·(1/16) = 3/4).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub x: u64,
    pub numerator: u64,
    pub denominator: u64,
    pub value: String,
    pub classes: Vec<ClassCount>,
}

impl DensityReport {
    pub fn ratio(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

/// Sieve the primes up to x and count the quadratic-rule classes, verifying
/// the direct count against the inclusion–exclusion over classes mod 40.
pub fn density_report(x: u64) -> Result<DensityReport> {
    if x < 10 {
        return Err(Error::InvalidArgument(format!("density needs x >= 10, got {x}")));
    }
    let primes = primes_up_to(x)?;
    let class_defs: [(u64, u64); 8] =
        [(5, 1), (5, 4), (8, 1), (8, 7), (40, 1), (40, 9), (40, 31), (40, 39)];
    let mut counts = [0u64; 8];
    let mut matching = 0u64;
    for &p in &primes {
        for (slot, &(m, r)) in class_defs.iter().enumerate() {
            if p % m == r {
                counts[slot] += 1;
            }
        }
        if p % 5 == 1 || p % 5 == 4 || p % 8 == 1 || p % 8 == 7 {
            matching += 1;
        }
    }
    let inclusion_exclusion = counts[0] + counts[1] + counts[2] + counts[3]
        - counts[4]
        - counts[5]
        - counts[6]
        - counts[7];
    if inclusion_exclusion != matching {
        return Err(Error::Internal(format!(
            "inclusion–exclusion gives {inclusion_exclusion}, direct count {matching}"
        )));
    }
    let denominator = primes.len() as u64;
    Ok(DensityReport {
        x,
        numerator: matching,
        denominator,
        value: format!("{:.6}", matching as f64 / denominator as f64),
        classes: class_defs
            .iter()
            .zip(counts)
            .map(|(&(modulus, residue), count)| ClassCount { modulus, residue, count })
            .collect(),
    })
}
