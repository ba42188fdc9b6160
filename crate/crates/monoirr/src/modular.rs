//! Exact arithmetic in Z/NZ: residues, 2x2 matrices, Legendre symbols,
//! Chinese-remainder lifting and small number-theoretic utilities.
//!
//! Moduli are capped at 2^31 - 1 so every product of two reduced values fits
//! in a u64 without widening tricks.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported modulus. Products of two reduced values stay below 2^62.
pub const MAX_MODULUS: u64 = (1 << 31) - 1;

/// A modulus N >= 2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("modulus {n} < 2")));
        }
        if n > MAX_MODULUS {
            return Err(Error::InvalidArgument(format!(
                "modulus {n} exceeds the supported cap {MAX_MODULUS}"
            )));
        }
        Ok(Modulus(n))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn residue(self, value: u64) -> Residue {
        Residue { value: value % self.0, modulus: self }
    }

    pub fn residue_i64(self, value: i64) -> Residue {
        let n = self.0 as i64;
        Residue { value: value.rem_euclid(n) as u64, modulus: self }
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mod {}", self.0)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn add_mod(a: u64, b: u64, n: u64) -> u64 {
    let s = a + b;
    if s >= n { s - n } else { s }
}

pub(crate) fn sub_mod(a: u64, b: u64, n: u64) -> u64 {
    if a >= b { a - b } else { a + n - b }
}

pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    // a, b < n <= 2^31 - 1, so the product fits a u64.
    a * b % n
}

/// An element of Z/NZ with its canonical representative in [0, N).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_one(self) -> bool {
        self.value == 1 % self.modulus.0
    }

    pub fn is_minus_one(self) -> bool {
        self.value == self.modulus.0 - 1
    }

    fn assert_same_modulus(self, other: Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "mixed moduli in residue arithmetic"
        );
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus.0)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.assert_same_modulus(rhs);
        Residue {
            value: add_mod(self.value, rhs.value, self.modulus.0),
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.assert_same_modulus(rhs);
        Residue {
            value: sub_mod(self.value, rhs.value, self.modulus.0),
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.assert_same_modulus(rhs);
        Residue {
            value: mul_mod(self.value, rhs.value, self.modulus.0),
            modulus: self.modulus,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: if self.value == 0 { 0 } else { self.modulus.0 - self.value },
            modulus: self.modulus,
        }
    }
}

/// The sign in M_n(a_1,...,a_n) = ±Id.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.to_i8()
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Sign, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be 1 or -1, got {other}")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.to_i8())
    }
}

/// A 2x2 matrix over Z/NZ, row-major [[a, b], [c, d]].
///
/// Every matrix built from transfer factors [[k, -1], [1, 0]] has
/// determinant 1, i.e. lies in SL_2(Z/NZ).
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Mat2 {
    modulus: Modulus,
    a: u64,
    b: u64,
    c: u64,
    d: u64,
}

impl Mat2 {
    pub fn identity(modulus: Modulus) -> Self {
        Mat2 { modulus, a: 1 % modulus.0, b: 0, c: 0, d: 1 % modulus.0 }
    }

    /// The transfer factor [[k, -1], [1, 0]].
    pub fn transfer(k: Residue) -> Self {
        let n = k.modulus.0;
        Mat2 { modulus: k.modulus, a: k.value, b: n - 1, c: 1 % n, d: 0 }
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn entries(self) -> [Residue; 4] {
        let m = self.modulus;
        [
            Residue { value: self.a, modulus: m },
            Residue { value: self.b, modulus: m },
            Residue { value: self.c, modulus: m },
            Residue { value: self.d, modulus: m },
        ]
    }

    pub fn det(self) -> Residue {
        let n = self.modulus.0;
        let ad = mul_mod(self.a, self.d, n);
        let bc = mul_mod(self.b, self.c, n);
        Residue { value: sub_mod(ad, bc, n), modulus: self.modulus }
    }

    pub fn is_identity(self) -> bool {
        let one = 1 % self.modulus.0;
        self.b == 0 && self.c == 0 && self.a == one && self.d == one
    }

    pub fn is_neg_identity(self) -> bool {
        let minus_one = self.modulus.0 - 1;
        self.b == 0 && self.c == 0 && self.a == minus_one && self.d == minus_one
    }

    /// Plus for Id, Minus for -Id, None otherwise. For N = 2, where
    /// Id = -Id, the sign is normalized to Plus.
    pub fn plus_minus_identity(self) -> Option<Sign> {
        if self.is_identity() {
            Some(Sign::Plus)
        } else if self.is_neg_identity() {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    /// Left-multiply by the transfer factor of `k`: A_k * self.
    pub(crate) fn apply_transfer(&mut self, k: u64) {
        let n = self.modulus.0;
        // [[k, -1], [1, 0]] * [[a, b], [c, d]] = [[ka - c, kb - d], [a, b]]
        let na = sub_mod(mul_mod(k, self.a, n), self.c, n);
        let nb = sub_mod(mul_mod(k, self.b, n), self.d, n);
        self.c = self.a;
        self.d = self.b;
        self.a = na;
        self.b = nb;
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        assert_eq!(self.modulus, rhs.modulus, "mixed moduli in matrix product");
        let n = self.modulus.0;
        Mat2 {
            modulus: self.modulus,
            a: add_mod(mul_mod(self.a, rhs.a, n), mul_mod(self.b, rhs.c, n), n),
            b: add_mod(mul_mod(self.a, rhs.b, n), mul_mod(self.b, rhs.d, n), n),
            c: add_mod(mul_mod(self.c, rhs.a, n), mul_mod(self.d, rhs.c, n), n),
            d: add_mod(mul_mod(self.c, rhs.b, n), mul_mod(self.d, rhs.d, n), n),
        }
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]] (mod {})",
            self.a, self.b, self.c, self.d, self.modulus.0
        )
    }
}

// pow_mod and is_prime also run on numbers above MAX_MODULUS, so they widen
// to u128 unconditionally.
pub(crate) fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut result = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod_wide(result, base, n);
        }
        base = mul_mod_wide(base, base, n);
        exp >>= 1;
    }
    result
}

fn mul_mod_wide(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

/// Legendre symbol (a/p) for an odd prime p, via Euler's criterion.
///
/// Returns 0 iff p | a, 1 iff a is a nonzero square mod p, -1 otherwise.
pub fn legendre(a: i64, p: u64) -> Result<i64> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "legendre symbol needs an odd prime, got {p}"
        )));
    }
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return Ok(0);
    }
    let e = pow_mod(a, (p - 1) / 2, p);
    if e == 1 {
        Ok(1)
    } else if e == p - 1 {
        Ok(-1)
    } else {
        Err(Error::InvalidArgument(format!("{p} is not prime")))
    }
}

/// Extended Euclid: returns (g, u, v) with a*u + b*v = g = gcd(a, b).
pub(crate) fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if a == 0 {
        return (b, 0, 1);
    }
    let (g, x, y) = extended_gcd(b % a, a);
    (g, y - (b / a) * x, x)
}

/// Lift a pair of residues through the ring isomorphism
/// Z/mZ x Z/pZ -> Z/mpZ given by Bezout coefficients.
///
/// The result is the unique residue in [0, mp) congruent to `xm` mod m and
/// to `xp` mod p.
pub fn crt_lift(xm: Residue, xp: Residue) -> Result<Residue> {
    let m = xm.modulus().get();
    let p = xp.modulus().get();
    let (g, u, v) = extended_gcd(m as i128, p as i128);
    if g != 1 {
        return Err(Error::InvalidArgument(format!(
            "moduli {m} and {p} are not coprime (gcd {g})"
        )));
    }
    let target = Modulus::new(m * p)?;
    // With m*u + p*v = 1: x = xm*v*p + xp*u*m is xm mod m and xp mod p.
    let mp = (m * p) as i128;
    let x = (xm.value() as i128 * v % mp * p as i128 + xp.value() as i128 * u % mp * m as i128)
        % mp;
    Ok(target.residue_i64(x as i64))
}

/// Deterministic Miller-Rabin, exact for every u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod_wide(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes <= x by a plain sieve of Eratosthenes.
pub fn primes_up_to(x: u64) -> Result<Vec<u64>> {
    const SIEVE_CAP: u64 = 200_000_000;
    if x > SIEVE_CAP {
        return Err(Error::UnsupportedSize(format!(
            "sieve bound {x} exceeds the memory cap {SIEVE_CAP}"
        )));
    }
    let len = x as usize + 1;
    let mut composite = vec![false; len];
    let mut primes = Vec::new();
    for i in 2..len {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j < len {
                composite[j] = true;
                j += i;
            }
        }
    }
    Ok(primes)
}

/// Distinct prime factors by trial division.
pub fn distinct_prime_factors(n: u64) -> Vec<u64> {
    let mut n = n;
    let mut factors = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            factors.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    factors
}

/// |SL_2(Z/NZ)| = N^3 * prod_{p | N} (1 - 1/p^2).
///
/// Used as a safety cap when iterating matrix powers; the group is finite so
/// the order of any element divides this.
pub fn sl2_group_order(modulus: Modulus) -> u128 {
    let n = modulus.get() as u128;
    let mut order = n * n * n;
    for p in distinct_prime_factors(modulus.get()) {
        let p2 = (p as u128) * (p as u128);
        order = order / p2 * (p2 - 1);
    }
    order
}
