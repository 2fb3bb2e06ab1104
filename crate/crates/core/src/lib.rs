//! Quadratic-residue tournaments, exhaustive S_k property checks, and
//! teaching-dimension computations for tournament-induced concept classes.
//!
//! The crate is organised bottom-up:
//!
//! * [`tournament`]: bit-matrix tournaments, edge-list and DOT formats.
//! * [`qr`]: Legendre character, QR tournaments and character sums.
//! * [`sk`]: weak/strong S_k and S_{k,m} verification.
//! * [`teaching`]: induced concept classes, TD, TD_min, RTD and NC-teachers.
//! * [`bounds`]: exact evaluation of the order bounds for f(k) and F(k).
//! * [`search`]: exhaustive and randomized search for small witnesses.

pub mod bits;
pub mod bounds;
pub mod error;
mod hitting_set;
pub mod qr;
pub mod search;
pub mod sk;
pub mod teaching;
pub mod tournament;

pub use error::{Error, Result};
pub use qr::QrModulus;
pub use sk::{DominationPattern, PropertyVerdict, Sign, Variant, WitnessReport};
pub use teaching::{ConceptClass, NcTeacher, RtdTrace, TeachingSetResult};
pub use tournament::{Direction, Tournament};
