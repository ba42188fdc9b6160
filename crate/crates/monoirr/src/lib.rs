//! Classification of "monomially irreducible" moduli.
//!
//! Over Z/NZ, consider the matrix equation
//!
//!   M_n(a_1, ..., a_n) = A(a_n) * ... * A(a_1) = ±Id,   A(k) = [[k, -1], [1, 0]].
//!
//! A solution all of whose entries equal some k, of least such size, is the
//! minimal k-monomial solution; N is *monomially irreducible* when every one
//! of these (k ≠ 0) is irreducible under the tuple sum ⊕ and the dihedral
//! equivalence ~. This crate computes minimal monomial sizes, searches for
//! reduction certificates, classifies ranges of N, screens primes p for rules
//! proving every composite multiple of p reducible, and checks the closed-form
//! continuant evaluations that drive the k·m families.

pub mod budget;
pub mod closed_forms;
pub mod continuant;
pub mod error;
pub mod modular;
pub mod monomial;
pub mod screening;
pub mod solutions;

pub use budget::Budget;
pub use error::{Error, Result};
pub use modular::{Modulus, Residue, Sign};
