//! Minimal monomial solutions and their classification.
//!
//! For k in Z/NZ, the minimal k-monomial solution is (k, ..., k) of the least
//! size h with A(k)^h = ±Id, i.e. h is the order of [[k, -1], [1, 0]] in
//! SL_2(Z/NZ) modulo ±Id. N is monomially irreducible when, for every k ≠ 0,
//! this solution admits no reduction. Reductions of a monomial tuple are
//! pinned down by the junction constraint — any solution (a, k, ..., k, b)
//! has a = b and a(a - k) ≡ 0 — so the certificate search only scans the
//! roots of X(X - k) and the part sizes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::modular::{mul_mod, sl2_group_order, sub_mod, Mat2, Modulus, Residue, Sign};
use crate::solutions::SolutionTuple;

/// Work-unit estimate for classifying one modulus (root scans dominate).
pub(crate) fn classification_cost(n: u64) -> u128 {
    4 * (n as u128) * (n as u128)
}

/// Witness that the minimal k-monomial solution of size h reduces: the part
/// (junction_a, k, ..., k, junction_a) of size part_size is a solution, and
/// the complementary part (k - junction_a, k, ..., k, k - junction_a) of size
/// h + 2 - part_size recombines with it to the monomial tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionCertificate {
    #[serde(rename = "N")]
    pub modulus: u64,
    pub k: u64,
    pub h: usize,
    pub sign: i8,
    pub part_size: usize,
    pub junction_a: u64,
}

impl ReductionCertificate {
    pub fn complement_junction(&self) -> u64 {
        sub_mod(self.k, self.junction_a, self.modulus)
    }

    pub fn complement_size(&self) -> usize {
        self.h + 2 - self.part_size
    }

    pub fn part_tuple(&self) -> Result<SolutionTuple> {
        let modulus = Modulus::new(self.modulus)?;
        let mut values = vec![self.k % self.modulus; self.part_size];
        values[0] = self.junction_a % self.modulus;
        values[self.part_size - 1] = self.junction_a % self.modulus;
        Ok(SolutionTuple::new(modulus, values))
    }

    pub fn complement_tuple(&self) -> Result<SolutionTuple> {
        let modulus = Modulus::new(self.modulus)?;
        let size = self.complement_size();
        let mut values = vec![self.k % self.modulus; size];
        values[0] = self.complement_junction();
        values[size - 1] = self.complement_junction();
        Ok(SolutionTuple::new(modulus, values))
    }

    /// Independent replay of everything the certificate claims: the junction
    /// law, the recomputed minimal size and sign, legal part sizes, the part
    /// being a solution, and the ⊕ recombination giving back the monomial
    /// tuple. Returns the first violated condition.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let modulus = Modulus::new(self.modulus).map_err(|e| e.to_string())?;
        if self.k == 0 || self.k >= self.modulus {
            return Err(format!("k = {} out of range [1, {})", self.k, self.modulus));
        }
        if self.junction_a >= self.modulus {
            return Err(format!("junction {} not reduced mod {}", self.junction_a, self.modulus));
        }
        let a = self.junction_a;
        if mul_mod(a, sub_mod(a, self.k, self.modulus), self.modulus) != 0 {
            return Err(format!("junction law fails: {a}({a} - {}) ≢ 0", self.k));
        }
        let k = modulus.residue(self.k);
        let (h, sign) = minimal_monomial_size(k).map_err(|e| e.to_string())?;
        if h != self.h {
            return Err(format!("minimal size is {h}, certificate says {}", self.h));
        }
        if sign.to_i8() != self.sign {
            return Err(format!("sign is {}, certificate says {}", sign.to_i8(), self.sign));
        }
        if self.part_size < 3 || self.part_size > h - 1 {
            return Err(format!("part size {} outside [3, {}]", self.part_size, h - 1));
        }
        let part = self.part_tuple().map_err(|e| e.to_string())?;
        if !part.is_solution() {
            return Err("stated part is not a solution".into());
        }
        let complement = self.complement_tuple().map_err(|e| e.to_string())?;
        if !complement.is_solution() {
            return Err("complementary part is not a solution".into());
        }
        let whole = complement.oplus(&part).map_err(|e| e.to_string())?;
        if whole != SolutionTuple::constant(k, h) {
            return Err("⊕ recombination does not give the monomial tuple".into());
        }
        Ok(())
    }
}

/// Everything known about one minimal k-monomial solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialReport {
    #[serde(rename = "N")]
    pub modulus: u64,
    pub k: u64,
    pub size: usize,
    pub sign: i8,
    pub irreducible: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<ReductionCertificate>,
}

/// Verdict for one modulus with a witness per nonzero k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationVerdict {
    #[serde(rename = "N")]
    pub modulus: u64,
    pub monomially_irreducible: bool,
    pub witnesses: Vec<MonomialReport>,
}

/// Classification of a contiguous range, with gap markers for the suffix a
/// budget cut off.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeClassification {
    pub verdicts: Vec<ClassificationVerdict>,
    pub gaps: Vec<RangeGap>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeGap {
    pub from: u64,
    pub to: u64,
}

/// Least h >= 1 with A(k)^h = ±Id, together with the sign, by iterating
/// powers of the transfer matrix. The group is finite, so iteration is capped
/// by |SL_2(Z/NZ)| and exceeding the cap is a bug.
pub fn minimal_monomial_size(k: Residue) -> Result<(usize, Sign)> {
    if k.is_zero() {
        return Err(Error::InvalidArgument(
            "minimal monomial sizes are classified for k ≠ 0".into(),
        ));
    }
    let modulus = k.modulus();
    let cap = sl2_group_order(modulus);
    let mut power = Mat2::identity(modulus);
    let mut h: u128 = 0;
    loop {
        power.apply_transfer(k.value());
        h += 1;
        if let Some(sign) = power.plus_minus_identity() {
            return Ok((h as usize, sign));
        }
        if h > cap {
            return Err(Error::Internal(format!(
                "order iteration for k = {k} mod {modulus} exceeded the group order"
            )));
        }
    }
}

/// Roots of X(X - k) mod N by full residue scan.
pub(crate) fn junction_roots(modulus: Modulus, k: u64) -> Vec<u64> {
    let n = modulus.get();
    (0..n).filter(|&a| mul_mod(a, sub_mod(a, k, n), n) == 0).collect()
}

/// Search for a reduction of the minimal k-monomial solution.
///
/// Any reduction of (k, ..., k) must use parts (a, k, ..., k, a) and
/// (k - a, k, ..., k, k - a) with a(a - k) ≡ 0, so it suffices to scan the
/// junction roots a and the part sizes l in [3, h - 1], ascending l first,
/// then ascending a. None means the minimal monomial solution is irreducible.
pub fn find_reduction_certificate(k: Residue) -> Result<Option<ReductionCertificate>> {
    let modulus = k.modulus();
    let (h, sign) = minimal_monomial_size(k)?;
    if h < 4 {
        // No split with both parts >= 3 exists.
        return Ok(None);
    }
    let roots = junction_roots(modulus, k.value());
    let mut power = Mat2::transfer(k); // A(k)^{l-2} for the current l
    for l in 3..=h - 1 {
        for &a in &roots {
            let mut part = power * Mat2::transfer(modulus.residue(a));
            part.apply_transfer(a);
            if part.plus_minus_identity().is_some() {
                return Ok(Some(ReductionCertificate {
                    modulus: modulus.get(),
                    k: k.value(),
                    h,
                    sign: sign.to_i8(),
                    part_size: l,
                    junction_a: a,
                }));
            }
        }
        power.apply_transfer(k.value());
    }
    Ok(None)
}

/// Size, sign and reducibility status of the minimal k-monomial solution.
pub fn monomial_report(k: Residue) -> Result<MonomialReport> {
    let (size, sign) = minimal_monomial_size(k)?;
    let certificate = find_reduction_certificate(k)?;
    Ok(MonomialReport {
        modulus: k.modulus().get(),
        k: k.value(),
        size,
        sign: sign.to_i8(),
        irreducible: certificate.is_none(),
        certificate,
    })
}

/// Runs the certificate search for every k in [1, N - 1]; the verdict is
/// true iff none reduces.
pub fn is_monomially_irreducible(modulus: Modulus, budget: Budget) -> Result<ClassificationVerdict> {
    budget.check(
        classification_cost(modulus.get()),
        &format!("classifying N = {modulus}"),
    )?;
    let witnesses: Vec<MonomialReport> = (1..modulus.get())
        .into_par_iter()
        .map(|k| monomial_report(modulus.residue(k)))
        .collect::<Result<_>>()?;
    Ok(ClassificationVerdict {
        modulus: modulus.get(),
        monomially_irreducible: witnesses.iter().all(|w| w.irreducible),
        witnesses,
    })
}

/// Verdict for every N in [lo, hi], ascending. When the summed cost estimate
/// exceeds the budget the range is truncated deterministically and the
/// remainder reported as a gap.
pub fn classify_range(lo: u64, hi: u64, budget: Budget) -> Result<RangeClassification> {
    if lo < 2 || lo > hi {
        return Err(Error::InvalidArgument(format!(
            "classification range needs 2 <= lo <= hi, got [{lo}, {hi}]"
        )));
    }
    Modulus::new(hi)?;
    let mut cutoff = lo - 1;
    let mut total: u128 = 0;
    for n in lo..=hi {
        total += classification_cost(n);
        if !budget.allows(total) {
            break;
        }
        cutoff = n;
    }
    if cutoff < lo {
        return Err(Error::BudgetExceeded(format!(
            "budget {} cannot even classify N = {lo}",
            budget.ops()
        )));
    }
    let verdicts: Vec<ClassificationVerdict> = (lo..=cutoff)
        .into_par_iter()
        .map(|n| is_monomially_irreducible(Modulus::new(n)?, Budget::unlimited()))
        .collect::<Result<_>>()?;
    let gaps = if cutoff < hi {
        vec![RangeGap { from: cutoff + 1, to: hi }]
    } else {
        Vec::new()
    };
    Ok(RangeClassification { verdicts, gaps })
}
