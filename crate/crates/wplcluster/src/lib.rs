//! Quantum cluster algebras of weighted projective lines.
//!
//! The crate builds the compatible pair `(Λ, B̃)` attached to a weight tuple,
//! implements the twisted quantum torus and its graded completion, computes
//! quantum cluster characters, runs the exchange-relation mutation engine and
//! checks the resulting identities.

pub mod characters;
pub mod error;
pub mod kzero;
pub mod laurent;
pub mod matrix;
pub mod mutation;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use kzero::{ClassVector, CompatiblePair, GradeVector, PairHeader, PairSummary, WeightSpec};
pub use laurent::{BarLaurent, QuadraticNumber};
pub use matrix::IntMatrix;
pub use series::{Series, Torus};
