//! Orbits of tensors in `F_q^2 (x) F_q^3 (x) F_q^3` over small finite fields.
//!
//! The crate classifies every tensor into one of 21 orbits under
//! `GL2 x GL3 x GL3` (18 once the two 3-dimensional factors may be swapped),
//! builds a canonical representative of each orbit, and checks the
//! classification against brute-force orbit enumeration.

pub mod classify;
pub mod format;
pub mod gf;
pub mod linalg;
pub mod oracle;
pub mod pencil;
pub mod tensor;

pub use classify::{canonical_form, classify_223, classify_g, classify_h, nurmiev_label, signature, InvariantSignature, OrbitLabel};
pub use gf::{Field, FieldError, Fq};
pub use linalg::{Mat2, Mat2x3, Mat3, Matrix, Poly, Subspace};
pub use pencil::{BinaryCubic, FactorType, Mobius};
pub use tensor::{GroupElement, QMembership, RankDistribution, Tensor223, Tensor233};
