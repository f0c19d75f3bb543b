//! Finite-function-encoding (FFE) states `|f> = Σ_x ω^{f(x)} |x>` over Z_d.
//!
//! The crate covers polynomial normal forms and recognition, the finite
//! phase (FP) group and its stabilizers, exact cyclotomic spectral
//! invariants of bipartite states, and classification of bipartite FFE
//! states up to local FP (LFP) and local unitary (LU) equivalence.

pub mod appendix;
pub mod classify;
pub mod cyclo;
pub mod error;
pub mod fp;
pub mod poly;
pub mod ring;
pub mod special;
pub mod spectral;
pub mod stabilizer;

pub use classify::{classify_lfp, classify_lu, Catalogue, Scope};
pub use error::{FfeError, Result};
pub use poly::{is_polynomial, Monomial, Polynomial};
pub use ring::{FiniteFunction, IndexTuple, Perm, PointPerm, RingSpec};
pub use special::{special_function, SpecialState};
