//! Exact computation of indices, core-nilpotent decompositions and Drazin
//! inverses of endomorphisms.
//!
//! The finite-dimensional side works with dense matrices over `Q` or `F_p`
//! ([`matrix`], [`cn`]). The same objects are read off the `k[x]`-module
//! structure an endomorphism defines: [`kxmodule`] localizes finitely
//! presented modules at the powers of `x`, and [`operator`] handles
//! rule-based endomorphisms of spaces with a countable basis, where
//! nilpotency and Drazin-type identities only hold vector by vector.

#![allow(clippy::needless_range_loop)]

pub mod cn;
pub mod error;
pub mod format;
pub mod kxmodule;
pub mod matrix;
pub mod operator;
pub mod poly;
pub mod random;
pub mod scalar;

pub use cn::{
    cn_decompose, cn_decompose_poly, cn_decompose_split, drazin, index, verify_drazin,
    CnDecomposition, DrazinReport,
};
pub use error::{AlgebraError, Result};
pub use kxmodule::{
    localize, matrix_to_module, pointwise_cn, LocalizationReport, ModulePresentation,
};
pub use matrix::{direct_sum_check, Matrix, Subspace};
pub use operator::{BasisIndex, BasisOperator, SparseVector};
pub use poly::Poly;
pub use scalar::{Field, Scalar};
