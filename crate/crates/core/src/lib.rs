//! Exact computations with Green's relations on the matrix monoid M_n(K)
//! and the linear maps on M_n(K) that preserve them.
//!
//! Matrices live over GF(p), GF(4) or the rationals. Linear operators on
//! M_n(K) are stored as n²×n² matrices acting on column-major
//! vectorizations, which makes exhaustive scans over small finite fields
//! and exact classification into canonical forms straightforward.

pub mod census;
pub mod classify;
pub mod error;
pub mod field;
pub mod form;
pub mod green;
pub mod matrix;
pub mod operator;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};
pub use matrix::{companion, partial_identity, solve_left, Matrix, Polynomial, RrefResult, Subspace};
pub use green::{class_label, green_leq, green_related, ClassLabel, GreenRelation};
pub use operator::{LinearOperator, Side};
pub use form::{ExoticReason, PreserverForm};
pub use sampling::Sampler;
pub use verify::{preserves, preserves_set, strongly_preserves, MatrixSet, Strategy, Verdict};
pub use census::{census, CensusReport};
pub use classify::{classify_bijective_rank1, classify_h_preserver, classify_j_preserver, classify_l_preserver, classify_r_preserver, LClassifyCertificate};
