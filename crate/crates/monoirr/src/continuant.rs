//! Continuants K_n, transfer-matrix products and the integer polynomials
//! K_n(X, ..., X).
//!
//! The continuant is the tridiagonal determinant with recurrence
//! K_i = a_i * K_{i-1} - K_{i-2}, K_{-1} = 0, K_0 = 1, and it ties the tuple
//! (a_1, ..., a_n) to the matrix product
//!
//!   M_n(a_1, ..., a_n) = A(a_n) * ... * A(a_1),  A(k) = [[k, -1], [1, 0]],
//!
//! whose entries are (K_n, -K_{n-1}; K_{n-1}, -K_{n-2}) on suitable subtuples.

use crate::error::{Error, Result};
use crate::modular::{sub_mod, Mat2, Modulus, Residue};

fn common_modulus(modulus: Modulus, entries: &[Residue]) -> Result<()> {
    if entries.iter().any(|e| e.modulus() != modulus) {
        return Err(Error::InvalidArgument(
            "entries do not share a common modulus".into(),
        ));
    }
    Ok(())
}

/// K_n(a_1, ..., a_n) mod N. The empty tuple gives K_0 = 1.
pub fn continuant_mod(modulus: Modulus, entries: &[Residue]) -> Result<Residue> {
    common_modulus(modulus, entries)?;
    let n = modulus.get();
    let mut prev = 0; // K_{-1}
    let mut cur = 1 % n; // K_0
    for e in entries {
        let next = sub_mod(e.value() * cur % n, prev, n);
        prev = cur;
        cur = next;
    }
    Ok(modulus.residue(cur))
}

/// K_n(k, ..., k) mod N with `n` copies of a single value.
pub fn continuant_constant(k: Residue, n: usize) -> Residue {
    let modulus = k.modulus();
    let m = modulus.get();
    let kv = k.value();
    let mut prev = 0;
    let mut cur = 1 % m;
    for _ in 0..n {
        let next = sub_mod(kv * cur % m, prev, m);
        prev = cur;
        cur = next;
    }
    modulus.residue(cur)
}

/// The sequence K_0(k,...), K_1(k,...), ..., K_upto(k, ..., k) mod N.
pub(crate) fn continuant_constant_seq(kv: u64, n: u64, upto: usize) -> Vec<u64> {
    let mut seq = Vec::with_capacity(upto + 1);
    let mut prev = 0;
    let mut cur = 1 % n;
    seq.push(cur);
    for _ in 0..upto {
        let next = sub_mod(kv * cur % n, prev, n);
        prev = cur;
        cur = next;
        seq.push(cur);
    }
    seq
}

/// M_n(a_1, ..., a_n) = A(a_n) * ... * A(a_1) over the entries' modulus.
pub fn transfer_product(entries: &[Residue]) -> Result<Mat2> {
    let first = entries
        .first()
        .ok_or_else(|| Error::InvalidArgument("transfer product of an empty tuple".into()))?;
    let modulus = first.modulus();
    common_modulus(modulus, entries)?;
    let mut m = Mat2::identity(modulus);
    for e in entries {
        m.apply_transfer(e.value());
    }
    Ok(m)
}

pub(crate) fn transfer_product_values(modulus: Modulus, values: &[u64]) -> Mat2 {
    let mut m = Mat2::identity(modulus);
    for &v in values {
        debug_assert!(v < modulus.get());
        m.apply_transfer(v);
    }
    m
}

/// An integer polynomial, coefficients in ascending degree order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    /// Trailing zero coefficients are trimmed; the zero polynomial is `[]`.
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation over Z, erroring on i64 overflow.
    pub fn eval_i64(&self, x: i64) -> Result<i64> {
        let mut acc: i64 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(x)
                .and_then(|v| v.checked_add(c))
                .ok_or_else(|| Error::UnsupportedSize("polynomial evaluation overflows i64".into()))?;
        }
        Ok(acc)
    }

    /// Horner evaluation of the reduction mod N at a residue.
    pub fn eval_mod(&self, x: Residue) -> Residue {
        let modulus = x.modulus();
        let mut acc = modulus.residue(0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + modulus.residue_i64(c);
        }
        acc
    }

    /// P(X) + c on the constant coefficient.
    pub fn add_constant(&self, c: i64) -> IntPolynomial {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        coeffs[0] += c;
        IntPolynomial::new(coeffs)
    }
}

/// The integer polynomial K_n(X, ..., X), i.e. P_n = X*P_{n-1} - P_{n-2}
/// with P_0 = 1, P_1 = X. Coefficients stay well inside i64 for n <= 80.
pub fn continuant_polynomial(n: usize) -> IntPolynomial {
    let mut prev: Vec<i64> = vec![1]; // P_0
    if n == 0 {
        return IntPolynomial::new(prev);
    }
    let mut cur: Vec<i64> = vec![0, 1]; // P_1
    for _ in 1..n {
        // next = X*cur - prev
        let mut next = vec![0i64; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] = c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    IntPolynomial::new(cur)
}

/// Default bound for exhaustive root scans mod p.
pub const ROOT_SCAN_BOUND: u64 = 1_000_000;

/// All roots of `poly` mod p, by evaluating every residue. Exact but O(p):
/// only supported for primes up to [`ROOT_SCAN_BOUND`].
pub fn poly_roots_mod_p(poly: &IntPolynomial, p: u64) -> Result<Vec<Residue>> {
    if !crate::modular::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if p > ROOT_SCAN_BOUND {
        return Err(Error::UnsupportedSize(format!(
            "root scan mod {p} exceeds the bound {ROOT_SCAN_BOUND}"
        )));
    }
    let modulus = Modulus::new(p)?;
    let reduced: Vec<u64> = poly
        .coeffs
        .iter()
        .map(|&c| c.rem_euclid(p as i64) as u64)
        .collect();
    let mut roots = Vec::new();
    for x in 0..p {
        let mut acc = 0u64;
        for &c in reduced.iter().rev() {
            acc = (acc * x + c) % p;
        }
        if acc == 0 {
            roots.push(modulus.residue(x));
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::Sign;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn tuple(modulus: Modulus, values: &[i64]) -> Vec<Residue> {
        values.iter().map(|&v| modulus.residue_i64(v)).collect()
    }

    #[test]
    fn continuant_known_cases() {
        let n13 = m(13);
        // K_3(k, k, k) = k^3 - 2k; at k = 3 this is 21 ≡ 8 mod 13.
        let k3 = continuant_mod(n13, &tuple(n13, &[3, 3, 3])).unwrap();
        assert_eq!(k3.value(), 8);
        // Roots of X^3 - X^2 - 2X + 1 satisfy K_4(x, x, x, x) = x.
        let k4 = continuant_mod(n13, &tuple(n13, &[3, 3, 3, 3])).unwrap();
        assert_eq!(k4.value(), 3);
        // ... and K_8(x, ..., x) = -x.
        assert_eq!(continuant_constant(n13.residue(3), 8).value(), 10);
        // Empty tuple: K_0 = 1.
        assert_eq!(continuant_mod(n13, &[]).unwrap().value(), 1);
    }

    #[test]
    fn continuant_rejects_mixed_moduli() {
        let a = m(7).residue(1);
        let b = m(5).residue(1);
        assert!(continuant_mod(m(7), &[a, b]).is_err());
    }

    #[test]
    fn continuant_matches_determinant_recurrence() {
        // Independent oracle: K_i as the tridiagonal determinant expanded
        // along the last row, computed over plain integers then reduced.
        fn det_oracle(values: &[i64]) -> i64 {
            match values.len() {
                0 => 1,
                1 => values[0],
                _ => {
                    let n = values.len();
                    values[n - 1] * det_oracle(&values[..n - 1]) - det_oracle(&values[..n - 2])
                }
            }
        }
        let n = m(97);
        for values in [
            vec![1, 2, 3],
            vec![5, 0, 1, 2],
            vec![4, 4, 4, 4, 4],
            vec![7, 96, 13, 2, 8, 1],
        ] {
            let expected = n.residue_i64(det_oracle(&values));
            let got = continuant_mod(n, &tuple(n, &values)).unwrap();
            assert_eq!(got, expected, "K of {values:?}");
        }
    }

    #[test]
    fn transfer_product_known_cases() {
        let n7 = m(7);
        let prod = transfer_product(&tuple(n7, &[1, 1, 1])).unwrap();
        assert_eq!(prod.plus_minus_identity(), Some(Sign::Minus));

        let single = transfer_product(&[n7.residue(3)]).unwrap();
        let entries = single.entries();
        assert_eq!(
            [entries[0].value(), entries[1].value(), entries[2].value(), entries[3].value()],
            [3, 6, 1, 0]
        );

        // (2, 2, ..., 2) with m copies mod m multiplies to Id.
        for mm in 2..12u64 {
            let modulus = m(mm);
            let values: Vec<Residue> = (0..mm).map(|_| modulus.residue(2)).collect();
            let prod = transfer_product(&values).unwrap();
            assert_eq!(prod.plus_minus_identity(), Some(Sign::Plus), "mod {mm}");
        }

        assert!(transfer_product(&[]).is_err());
    }

    #[test]
    fn transfer_entries_are_continuants() {
        let n = m(11);
        let values = [3i64, 5, 0, 9, 2];
        let t = tuple(n, &values);
        let prod = transfer_product(&t).unwrap();
        let e = prod.entries();
        let k_n = continuant_mod(n, &t).unwrap();
        let k_top = continuant_mod(n, &t[1..]).unwrap(); // K_{n-1}(a_2..a_n)
        let k_bot = continuant_mod(n, &t[..4]).unwrap(); // K_{n-1}(a_1..a_{n-1})
        let k_mid = continuant_mod(n, &t[1..4]).unwrap(); // K_{n-2}(a_2..a_{n-1})
        assert_eq!(e[0], k_n);
        assert_eq!(e[1], -k_top);
        assert_eq!(e[2], k_bot);
        assert_eq!(e[3], -k_mid);
    }

    #[test]
    fn continuant_polynomial_known_cases() {
        assert_eq!(continuant_polynomial(1).coeffs(), &[0, 1]);
        // K_7 = X^7 - 6X^5 + 10X^3 - 4X
        assert_eq!(continuant_polynomial(7).coeffs(), &[0, -4, 0, 10, 0, -6, 0, 1]);
        // K_9 = X^9 - 8X^7 + 21X^5 - 20X^3 + 5X
        assert_eq!(
            continuant_polynomial(9).coeffs(),
            &[0, 5, 0, -20, 0, 21, 0, -8, 0, 1]
        );
        // P_n(2) = n + 1 (the Chebyshev value U_n(1)).
        for n in 0..=30 {
            assert_eq!(continuant_polynomial(n).eval_i64(2).unwrap(), n as i64 + 1);
        }
    }

    #[test]
    fn polynomial_evaluations_agree() {
        for n in 0..=25 {
            let poly = continuant_polynomial(n);
            for modulus in [2u64, 3, 13, 30] {
                let md = m(modulus);
                for k in 0..modulus {
                    let x = md.residue(k);
                    assert_eq!(poly.eval_mod(x), continuant_constant(x, n));
                }
            }
        }
    }

    #[test]
    fn root_scan_known_cases() {
        let cubic = IntPolynomial::new(vec![1, -2, -1, 1]);
        let roots = poly_roots_mod_p(&cubic, 13).unwrap();
        assert!(roots.iter().any(|r| r.value() == 3));

        let quintic = IntPolynomial::new(vec![1, 3, -3, -4, 1, 1]);
        let roots = poly_roots_mod_p(&quintic, 67).unwrap();
        assert!(roots.iter().any(|r| r.value() == 17));

        // X^2 - X - 1 has no roots mod 7 (5 is not a square there).
        let golden = IntPolynomial::new(vec![-1, -1, 1]);
        assert!(poly_roots_mod_p(&golden, 7).unwrap().is_empty());

        assert!(poly_roots_mod_p(&golden, 8).is_err());
        assert!(poly_roots_mod_p(&golden, 1_000_033).is_err());
    }
}
