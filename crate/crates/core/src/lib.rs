//! Exact-arithmetic workbench for finite-dimensional algebras given by
//! structure constants.
//!
//! The crate builds homotopes and augmented homotopes of associative
//! algebras, decides well-temperedness of elements both through the ideal
//! criterion `A delta A = A` and through projectivity of the augmentation
//! ideal, computes Jacobson radicals and Wedderburn block data, checks the
//! recollement functor identities on finite-dimensional modules, glues and
//! unglues modules over fiber products of commutative algebras, and
//! samples non-associative multiplication tensors for genericity
//! experiments. All arithmetic is exact, over Q or a prime field F_p.

pub mod algebra;
pub mod error;
pub mod field;
pub mod fiber;
pub mod io;
pub mod matrix;
pub mod modules;
pub mod nonassoc;
pub mod structure;

pub use algebra::{Algebra, AlgebraMorphism, Element, HomotopeSide, TestProfile};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use matrix::{Matrix, Subspace};
pub use modules::{ModuleMorphism, ModuleRep, Side};
pub use structure::{BlockData, SuitableForm, UnitFactorization};
