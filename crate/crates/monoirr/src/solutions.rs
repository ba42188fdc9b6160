//! Tuples of residues as candidate solutions of M_n(a_1, ..., a_n) = ±Id:
//! the sum ⊕, dihedral equivalence, exhaustive enumeration and a generic
//! brute-force reducibility check.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::continuant::transfer_product_values;
use crate::error::{Error, Result};
use crate::modular::{add_mod, sub_mod, Mat2, Modulus, Residue, Sign};

/// An ordered tuple of residues sharing one modulus, size >= 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SolutionTuple {
    modulus: Modulus,
    values: Vec<u64>,
}

impl SolutionTuple {
    pub fn new(modulus: Modulus, values: Vec<u64>) -> Self {
        assert!(!values.is_empty(), "solution tuples have size >= 1");
        let n = modulus.get();
        let values = values.into_iter().map(|v| v % n).collect();
        SolutionTuple { modulus, values }
    }

    pub fn from_i64(modulus: Modulus, values: &[i64]) -> Self {
        SolutionTuple::new(
            modulus,
            values.iter().map(|&v| modulus.residue_i64(v).value()).collect(),
        )
    }

    /// The k-monomial tuple (k, ..., k) of the given size.
    pub fn constant(k: Residue, size: usize) -> Self {
        SolutionTuple::new(k.modulus(), vec![k.value(); size])
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    // size >= 1 by construction, so no is_empty
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn residues(&self) -> Vec<Residue> {
        self.values.iter().map(|&v| self.modulus.residue(v)).collect()
    }

    /// The transfer product of the tuple.
    pub fn matrix(&self) -> Mat2 {
        transfer_product_values(self.modulus, &self.values)
    }

    /// Plus if the transfer product is Id, Minus if -Id, None otherwise.
    /// Mod 2 the two targets coincide and the sign reports as Plus.
    pub fn sign(&self) -> Option<Sign> {
        self.matrix().plus_minus_identity()
    }

    pub fn is_solution(&self) -> bool {
        self.sign().is_some()
    }

    pub fn rotated_left(&self, r: usize) -> Self {
        let n = self.values.len();
        let r = r % n;
        let mut values = Vec::with_capacity(n);
        values.extend_from_slice(&self.values[r..]);
        values.extend_from_slice(&self.values[..r]);
        SolutionTuple { modulus: self.modulus, values }
    }

    pub fn reversed(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        SolutionTuple { modulus: self.modulus, values }
    }

    pub fn negated(&self) -> Self {
        let n = self.modulus.get();
        SolutionTuple {
            modulus: self.modulus,
            values: self.values.iter().map(|&v| if v == 0 { 0 } else { n - v }).collect(),
        }
    }

    /// The sum ⊕: merges the end entries, shrinking total size by 2.
    ///
    /// (a_1,...,a_n) ⊕ (b_1,...,b_m)
    ///   = (a_1+b_m, a_2,...,a_{n-1}, a_n+b_1, b_2,...,b_{m-1}).
    pub fn oplus(&self, rhs: &SolutionTuple) -> Result<SolutionTuple> {
        if self.modulus != rhs.modulus {
            return Err(Error::InvalidArgument("⊕ needs a common modulus".into()));
        }
        let n = self.values.len();
        let m = rhs.values.len();
        if n < 2 || m < 2 {
            return Err(Error::InvalidArgument("⊕ needs both sizes >= 2".into()));
        }
        let modn = self.modulus.get();
        let mut values = Vec::with_capacity(n + m - 2);
        values.push(add_mod(self.values[0], rhs.values[m - 1], modn));
        values.extend_from_slice(&self.values[1..n - 1]);
        values.push(add_mod(self.values[n - 1], rhs.values[0], modn));
        values.extend_from_slice(&rhs.values[1..m - 1]);
        Ok(SolutionTuple { modulus: self.modulus, values })
    }

    /// Lexicographically least tuple among all rotations of the tuple and of
    /// its reversal; two tuples are ~-equivalent iff this agrees.
    pub fn canonical_form(&self) -> SolutionTuple {
        let n = self.values.len();
        let mut best: Option<Vec<u64>> = None;
        for base in [self.clone(), self.reversed()] {
            for r in 0..n {
                let candidate = base.rotated_left(r);
                if best.as_ref().is_none_or(|b| candidate.values < *b) {
                    best = Some(candidate.values);
                }
            }
        }
        SolutionTuple { modulus: self.modulus, values: best.unwrap() }
    }
}

/// All size-n tuples over Z/NZ whose transfer product is ±Id, in
/// lexicographic order. The work is about N^n matrix updates.
pub fn enumerate_solutions(
    modulus: Modulus,
    n: usize,
    budget: Budget,
) -> Result<Vec<SolutionTuple>> {
    if n == 0 {
        return Err(Error::InvalidArgument("solution size must be >= 1".into()));
    }
    let estimate = (modulus.get() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    budget.check(estimate, &format!("enumerating size-{n} tuples mod {modulus}"))?;

    let mut out = Vec::new();
    let mut prefix = vec![0u64; n];
    let mut stack = Vec::with_capacity(n + 1);
    stack.push(Mat2::identity(modulus));
    dfs(modulus, n, 0, &mut prefix, &mut stack, &mut out);
    Ok(out)
}

fn dfs(
    modulus: Modulus,
    n: usize,
    depth: usize,
    prefix: &mut Vec<u64>,
    stack: &mut Vec<Mat2>,
    out: &mut Vec<SolutionTuple>,
) {
    if depth == n {
        if stack[n].plus_minus_identity().is_some() {
            out.push(SolutionTuple { modulus, values: prefix.clone() });
        }
        return;
    }
    for v in 0..modulus.get() {
        let mut m = stack[depth];
        m.apply_transfer(v);
        prefix[depth] = v;
        stack.truncate(depth + 1);
        stack.push(m);
        dfs(modulus, n, depth + 1, prefix, stack, out);
    }
}

/// A witnessed reduction: the dihedral image `rotation`/`reflected` of the
/// target equals left ⊕ right with both parts solutions of size >= 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub left: Vec<u64>,
    pub right: Vec<u64>,
    pub rotation: usize,
    pub reflected: bool,
}

impl Decomposition {
    pub fn left_tuple(&self, modulus: Modulus) -> SolutionTuple {
        SolutionTuple::new(modulus, self.left.clone())
    }

    pub fn right_tuple(&self, modulus: Modulus) -> SolutionTuple {
        SolutionTuple::new(modulus, self.right.clone())
    }

    /// Recombines left ⊕ right and compares against the recorded dihedral
    /// image of `target`.
    pub fn validate(&self, target: &SolutionTuple) -> bool {
        if self.left.len() < 3 || self.right.len() < 3 {
            return false;
        }
        if self.left.len() + self.right.len() != target.len() + 2 {
            return false;
        }
        let modulus = target.modulus();
        let left = self.left_tuple(modulus);
        let right = self.right_tuple(modulus);
        if !left.is_solution() || !right.is_solution() {
            return false;
        }
        let base = if self.reflected { target.reversed() } else { target.clone() };
        let image = base.rotated_left(self.rotation);
        match left.oplus(&right) {
            Ok(sum) => sum == image,
            Err(_) => false,
        }
    }
}

/// Brute-force reducibility oracle.
///
/// For each dihedral image of `t` and each split (m, l) with m, l >= 3 and
/// m + l = n + 2, the interior entries of both parts are forced by the image;
/// only the two junction residues are free, so N^2 candidates are scanned per
/// split. Returns the first decomposition in (image, split, junction) order,
/// or None iff `t` is irreducible.
pub fn is_reducible_generic(t: &SolutionTuple, budget: Budget) -> Result<Option<Decomposition>> {
    let n = t.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "reducibility is defined for size >= 3, got {n}"
        )));
    }
    if !t.is_solution() {
        return Err(Error::InvalidArgument(
            "reducibility check needs a solution tuple".into(),
        ));
    }
    let modulus = t.modulus();
    let nn = modulus.get();
    let estimate = (nn as u128) * (nn as u128) * (n as u128) * (2 * n as u128);
    budget.check(estimate, &format!("reducibility scan of a size-{n} tuple mod {modulus}"))?;

    let mut seen = std::collections::HashSet::new();
    for reflected in [false, true] {
        let base = if reflected { t.reversed() } else { t.clone() };
        for rotation in 0..n {
            let image = base.rotated_left(rotation);
            if !seen.insert(image.values.clone()) {
                continue;
            }
            if let Some(dec) = search_image(&image, rotation, reflected) {
                return Ok(Some(dec));
            }
        }
    }
    Ok(None)
}

fn search_image(image: &SolutionTuple, rotation: usize, reflected: bool) -> Option<Decomposition> {
    let n = image.len();
    let modulus = image.modulus();
    let nn = modulus.get();
    let u = image.values();
    for m in 3..n {
        // left part c has size m, right part b has size l = n + 2 - m
        let left_interior = &u[1..m - 1];
        let right_interior = &u[m..n];
        let pc = transfer_product_values(modulus, left_interior);
        let pb = transfer_product_values(modulus, right_interior);
        // Junctions: u_0 = c_0 + b_{l-1}, u_{m-1} = c_{m-1} + b_0.
        for b_first in 0..nn {
            let partial = pb * Mat2::transfer(modulus.residue(b_first));
            for b_last in 0..nn {
                let mut mb = partial;
                mb.apply_transfer(b_last);
                if mb.plus_minus_identity().is_none() {
                    continue;
                }
                let c_first = sub_mod(u[0], b_last, nn);
                let c_last = sub_mod(u[m - 1], b_first, nn);
                let mut mc = pc * Mat2::transfer(modulus.residue(c_first));
                mc.apply_transfer(c_last);
                if mc.plus_minus_identity().is_none() {
                    continue;
                }
                let mut left = Vec::with_capacity(m);
                left.push(c_first);
                left.extend_from_slice(left_interior);
                left.push(c_last);
                let mut right = Vec::with_capacity(n + 2 - m);
                right.push(b_first);
                right.extend_from_slice(right_interior);
                right.push(b_last);
                return Some(Decomposition { left, right, rotation, reflected });
            }
        }
    }
    None
}
