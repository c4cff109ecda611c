//! A design-automation toolkit for parity-preserving reversible logic.
//!
//! The crate models reversible gates as explicit bijections, wires them
//! into fan-out-free netlists, and verifies the resulting circuits by
//! exhaustive simulation and single-fault injection:
//!
//! - [`gate`]: the builtin gate catalog (FG, PG, TG, FRG, F2G, NFT and
//!   the 4×4 IG gate), truth tables, reversibility and parity checks,
//!   and symbolic cost vectors.
//! - [`circuit`]: netlists as DAGs of gate instances over single-use
//!   wires, with structural validation and flattening to a bijection.
//! - [`rnl`]: the `.rnl` text format: parser and canonical serializer.
//! - [`sim`]: traces, exhaustive tables, parity audits, equivalence
//!   checks against truth specifications, and inverse recovery.
//! - [`fault`]: single-signal fault injection (bit-flip, stuck-at) and
//!   detection-coverage campaigns with parity observers.
//! - [`builders`]: constructors for the reference circuits: the two-IG
//!   fault-tolerant full adder, the N-bit ripple-carry adder, the
//!   parity-preserving Toffoli circuit, and the IG function library.
//! - [`metrics`]: gate/garbage/constant/delay/cost measurement, lower
//!   bounds for fault-tolerant realizations, and comparison tables.

pub mod bits;
pub mod builders;
pub mod circuit;
pub mod fault;
pub mod gate;
pub mod metrics;
pub mod rnl;
pub mod sim;

pub use circuit::{Circuit, CircuitError, ValidationReport};
pub use gate::{builtin_gate, Builtin, CostVector, GateSpec};
pub use sim::{evaluate, exhaustive_table, parity_audit, TruthSpec};
