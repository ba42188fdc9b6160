//! Closed-form continuant values at the family points l·m ± 2, and the
//! explicit reductions for N = 2m and N = k·m, k in {3, 4, 6, 8, 12, 24}.
//!
//! With N = k·m, l² ≡ 1 (mod k) and m ≡ -l (mod k), the values
//! K_n(lm+2, ..., lm+2) mod N follow a six-term base table plus a linear
//! correction 6q(lm+1) where n = 6q + r; for m ≡ l (mod k) the point is
//! lm - 2 and the correction alternates sign. The embedded 24-entry tables
//! are data, verified against the recurrence by [`verify_closed_forms`].

use serde::{Deserialize, Serialize};

use crate::continuant::continuant_constant;
use crate::error::{Error, Result};
use crate::modular::{Modulus, Residue, Sign};
use crate::monomial::{minimal_monomial_size, MonomialReport, ReductionCertificate};

/// Which congruence the cofactor satisfies; decides the evaluation point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyCase {
    /// m ≡ -l (mod k); evaluate at lm + 2.
    Plus,
    /// m ≡ l (mod k); evaluate at lm - 2.
    Minus,
}

/// N = k·m with l² ≡ 1 (mod k) and m ≡ ∓l (mod k) per the case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub k: u64,
    pub m: u64,
    pub l: u64,
    pub case: FamilyCase,
}

/// K_n(lm+2) = c1·lm + c0 for n = 0..=23 (plus case).
const PLUS_TABLE: [(i64, i64); 24] = [
    (0, 1), (1, 2), (3, 3), (5, 4), (6, 5), (6, 6),
    (6, 7), (7, 8), (9, 9), (11, 10), (12, 11), (12, 12),
    (12, 13), (13, 14), (15, 15), (17, 16), (18, 17), (18, 18),
    (18, 19), (19, 20), (21, 21), (23, 22), (24, 23), (24, 24),
];

/// K_n(lm-2) = c1·lm + c0 for n = 0..=23 (minus case).
const MINUS_TABLE: [(i64, i64); 24] = [
    (0, 1), (1, -2), (-3, 3), (5, -4), (-6, 5), (6, -6),
    (-6, 7), (7, -8), (-9, 9), (11, -10), (-12, 11), (12, -12),
    (-12, 13), (13, -14), (-15, 15), (17, -16), (-18, 17), (18, -18),
    (-18, 19), (19, -20), (-21, 21), (23, -22), (-24, 23), (24, -24),
];

impl FamilyParams {
    pub fn new(k: u64, m: u64, l: u64, case: FamilyCase) -> Result<Self> {
        if k < 2 || m < 2 {
            return Err(Error::InvalidArgument(format!(
                "family needs k >= 2 and m >= 2, got k = {k}, m = {m}"
            )));
        }
        Modulus::new(k.checked_mul(m).ok_or_else(|| {
            Error::InvalidArgument("k*m overflows".into())
        })?)?;
        let l = l % k;
        if l * l % k != 1 % k {
            return Err(Error::InvalidArgument(format!("l = {l} has l^2 ≢ 1 mod {k}")));
        }
        let holds = match case {
            FamilyCase::Plus => (m + l).is_multiple_of(k),
            FamilyCase::Minus => m % k == l,
        };
        if !holds {
            return Err(Error::InvalidArgument(format!(
                "m = {m} is not ≡ {}{l} mod {k}",
                if case == FamilyCase::Plus { "-" } else { "" }
            )));
        }
        Ok(FamilyParams { k, m, l, case })
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.k * self.m).expect("validated at construction")
    }

    /// l·m mod N; depends only on l mod k.
    pub fn lm(&self) -> u64 {
        self.l * self.m % (self.k * self.m)
    }

    /// The evaluation point lm + 2 or lm - 2 as a residue mod N.
    pub fn point(&self) -> Residue {
        let modulus = self.modulus();
        match self.case {
            FamilyCase::Plus => modulus.residue(self.lm() + 2),
            FamilyCase::Minus => modulus.residue_i64(self.lm() as i64 - 2),
        }
    }
}

/// K_n at the family point, from the base table for r = n mod 6 plus the
/// correction 6q(lm ± 1), with (-1)^{n+1} alternation in the minus case.
pub fn closed_form_continuant(params: &FamilyParams, n: u64) -> Residue {
    let modulus = params.modulus();
    let big_n = modulus.get() as i128;
    let lm = params.lm() as i128;
    let q = (n / 6) as i128;
    let r = (n % 6) as usize;
    let value = match params.case {
        FamilyCase::Plus => {
            let (c1, c0) = PLUS_TABLE[r];
            c1 as i128 * lm + c0 as i128 + 6 * q * (lm + 1)
        }
        FamilyCase::Minus => {
            let (c1, c0) = MINUS_TABLE[r];
            let alternation = if n.is_multiple_of(2) { -1 } else { 1 }; // (-1)^(n+1)
            c1 as i128 * lm + c0 as i128 + alternation * 6 * q * (lm - 1)
        }
    };
    modulus.residue(value.rem_euclid(big_n) as u64)
}

/// A family reduction: the evaluation point, the predicted minimal size and
/// part size, and the explicit certificate, all validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCertificate {
    pub params: FamilyParams,
    pub point: u64,
    pub predicted_size: usize,
    pub part_size: usize,
    pub report: MonomialReport,
}

fn family_split(n: u64) -> Option<(u64, u64)> {
    let mut k = 1u64;
    let mut m = n;
    while m.is_multiple_of(2) {
        m /= 2;
        k *= 2;
    }
    while m.is_multiple_of(3) {
        m /= 3;
        k *= 3;
    }
    [2, 3, 4, 6, 8, 12, 24].contains(&k).then_some((k, m))
}

/// The paper-style reduction for N = 2m (m odd >= 3, 3 ∤ m) or N = k·m with
/// k in {3, 4, 6, 8, 12, 24} and m odd >= 5, 3 ∤ m. The factorization is
/// forced: k collects every factor of 2 and 3 in N.
///
/// Produces the evaluation point (m + 2, or l·m ± 2 with l in {1, 5, 7, 11}
/// chosen by m mod 24), the minimal size (3m resp. 6m), the reduction part
/// size (m or m + 2) and the validated certificate.
pub fn family_certificate(n: u64) -> Result<FamilyCertificate> {
    let modulus = Modulus::new(n)?;
    let Some((k, m)) = family_split(n) else {
        return Err(Error::InvalidArgument(format!(
            "{n} is not 2^a·3^b·m with 2^a·3^b in {{2, 3, 4, 6, 8, 12, 24}}"
        )));
    };
    if (k == 2 && m < 3) || (k > 2 && m < 5) {
        return Err(Error::InvalidArgument(format!(
            "cofactor m = {m} of N = {k}·m is too small"
        )));
    }

    // l and the case from m mod 24 (for k = 2: l = 1, plus case, since any
    // odd m is ≡ -1 mod 2).
    let r = m % 24;
    let l0 = [1u64, 5, 7, 11]
        .into_iter()
        .find(|&l| r == l || r == 24 - l)
        .expect("m coprime to 6 is ±1, ±5, ±7 or ±11 mod 24");
    let (l, case) = if k == 2 {
        (1, FamilyCase::Plus)
    } else if r == 24 - l0 {
        (l0, FamilyCase::Plus)
    } else {
        (l0, FamilyCase::Minus)
    };

    let params = FamilyParams::new(k, m, l, case)?;
    let point = params.point();
    let predicted_size = if k == 2 { 3 * m as usize } else { 6 * m as usize };

    // Lemma index n_0 with K_{n_0}(point) = ε; the part has size n_0 + 2.
    let (n0, eps) = if k == 2 {
        match m % 6 {
            1 => (m, Sign::Plus),
            _ => (m - 2, Sign::Minus), // m ≡ 5 mod 6
        }
    } else {
        match m % 24 {
            23 => (m - 2, Sign::Minus),
            1 => (m, Sign::Minus),
            19 => (m, Sign::Plus),
            5 => (m - 2, Sign::Plus),
            17 => (m - 2, Sign::Minus),
            7 => (m, Sign::Minus),
            13 => (m, Sign::Plus),
            _ => (m - 2, Sign::Plus), // m ≡ 11 mod 24
        }
    };

    let closed = closed_form_continuant(&params, n0);
    let direct = continuant_constant(point, n0 as usize);
    let expected = modulus.residue_i64(eps.to_i8() as i64);
    if closed != direct || closed != expected {
        return Err(Error::Internal(format!(
            "family evaluation at N = {n}: K_{n0}({point}) gave {closed} (closed) / {direct} (recurrence), expected {expected}"
        )));
    }

    // Junction a = ε·K_{n0 - 1}(point); the part (a, point, ..., point, a)
    // of size n0 + 2 is a solution.
    let part_size = n0 as usize + 2;
    let prev = continuant_constant(point, n0 as usize - 1);
    let junction = match eps {
        Sign::Plus => prev,
        Sign::Minus => -prev,
    };
    let (h, sign) = minimal_monomial_size(point)?;
    if h != predicted_size {
        return Err(Error::Internal(format!(
            "family size at N = {n}: minimal size of {point} is {h}, predicted {predicted_size}"
        )));
    }
    let certificate = ReductionCertificate {
        modulus: n,
        k: point.value(),
        h,
        sign: sign.to_i8(),
        part_size,
        junction_a: junction.value(),
    };
    certificate
        .validate()
        .map_err(|e| Error::Internal(format!("family certificate at N = {n} invalid: {e}")))?;
    Ok(FamilyCertificate {
        params,
        point: point.value(),
        predicted_size,
        part_size,
        report: MonomialReport {
            modulus: n,
            k: point.value(),
            size: h,
            sign: sign.to_i8(),
            irreducible: false,
            certificate: Some(certificate),
        },
    })
}

/// What a closed-form verification found to disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ClosedFormMismatch {
    /// Base-table-plus-correction value vs the recurrence.
    ClosedForm { k: u64, m: u64, l: u64, case: FamilyCase, n: u64, expected: u64, got: u64 },
    /// A raw 24-entry table row vs the recurrence.
    TableRow { k: u64, m: u64, l: u64, case: FamilyCase, n: u64, expected: u64, got: u64 },
    /// Minimal monomial size of the family point vs 6m.
    MinimalSize { k: u64, m: u64, point: u64, expected: usize, got: usize },
}

/// Compares the closed forms against the recurrence on every admissible
/// (k, m, l, case) with k <= k_max, m <= m_max, for n <= 48, checks every
/// 24-entry table row, and confirms minimal size 6m for the k·m family.
/// Returns all mismatches; the expected outcome is an empty list.
pub fn verify_closed_forms(k_max: u64, m_max: u64) -> Result<Vec<ClosedFormMismatch>> {
    if k_max < 2 || m_max < 2 {
        return Err(Error::InvalidArgument(
            "verification needs k_max >= 2 and m_max >= 2".into(),
        ));
    }
    let mut mismatches = Vec::new();
    for k in 2..=k_max {
        for l in 0..k {
            if l * l % k != 1 % k {
                continue;
            }
            for m in 2..=m_max {
                if k * m > crate::modular::MAX_MODULUS {
                    continue;
                }
                for case in [FamilyCase::Plus, FamilyCase::Minus] {
                    let Ok(params) = FamilyParams::new(k, m, l, case) else {
                        continue;
                    };
                    let point = params.point();
                    for n in 0..=48u64 {
                        let got = closed_form_continuant(&params, n);
                        let expected = continuant_constant(point, n as usize);
                        if got != expected {
                            mismatches.push(ClosedFormMismatch::ClosedForm {
                                k, m, l, case, n,
                                expected: expected.value(),
                                got: got.value(),
                            });
                        }
                        if n <= 23 {
                            let (c1, c0) = match case {
                                FamilyCase::Plus => PLUS_TABLE[n as usize],
                                FamilyCase::Minus => MINUS_TABLE[n as usize],
                            };
                            let modulus = params.modulus();
                            let row = (c1 as i128 * params.lm() as i128 + c0 as i128)
                                .rem_euclid(modulus.get() as i128) as u64;
                            if row != expected.value() {
                                mismatches.push(ClosedFormMismatch::TableRow {
                                    k, m, l, case, n,
                                    expected: expected.value(),
                                    got: row,
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    // Size law for the k·m family: minimal size 6m at the family point.
    for k in [3u64, 4, 6, 8, 12, 24] {
        if k > k_max {
            continue;
        }
        for m in (5..=m_max).step_by(2) {
            if m % 3 == 0 || k * m > crate::modular::MAX_MODULUS {
                continue;
            }
            let cert = family_certificate(k * m).map_err(|e| {
                Error::Internal(format!("family certificate for {k}·{m} failed: {e}"))
            })?;
            if cert.predicted_size != 6 * m as usize || cert.report.size != 6 * m as usize {
                mismatches.push(ClosedFormMismatch::MinimalSize {
                    k,
                    m,
                    point: cert.point,
                    expected: 6 * m as usize,
                    got: cert.report.size,
                });
            }
        }
    }
    Ok(mismatches)
}
