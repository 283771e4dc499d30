//! Tandem-duplication-random-loss (TDRL) and mirror-TDRL rearrangements on
//! permutations.
//!
//! The crate is organised bottom-up:
//!
//! * [`perm`]: permutations, binary operation patterns and the operations
//!   themselves (unbounded and windowed).
//! * [`neighborhood`]: radius-one balls, reversible sets, intersections and
//!   exhaustive maximum-intersection search.
//! * [`formulas`]: closed-form counts and sphere-packing bounds in exact
//!   arithmetic, plus the enumeration side used to check them.
//! * [`recon`]: the sequence-reconstruction problem.
//! * [`codes`]: single-error-correcting codes under windowed operations.
//! * [`tables`] and [`verify`]: the reproduction tables and the
//!   formula-versus-enumeration matrix.

pub mod codes;
pub mod error;
pub mod formulas;
pub mod neighborhood;
pub mod perm;
pub mod recon;
pub mod tables;
pub mod verify;

pub use codes::{greedy_code, verify_code, Code, CodeReport};
pub use error::{Error, Result};
pub use formulas::{
    closed_form, enumerated_value, reversible_fraction, sphere_packing_bound, CountReport, Measure,
    Quantity,
};
pub use neighborhood::{
    ball_in, ball_out, intersect_out, max_intersection, reversible_set, witness_pair, Direction,
    Limits, MaxIntersection, NeighborSet, WitnessFamily,
};
pub use perm::{OpKind, Pattern, Permutation, WindowedOp};
pub use recon::{candidates, reconstruct, ObservationSet, ReconstructionResult, Threshold};
