//! Arithmetic invariants of quaternion algebras over number fields.
//!
//! The crate computes, at desk scale and with explicit rigor, the
//! quantities entering the covolume and counting formulas for arithmetic
//! lattices: exact polynomial invariants and prime splitting
//! ([`numfield`]), ramification data and type-number bounds ([`quatalg`]),
//! the covolume formulas and level-set enumeration ([`covolume`]), and the
//! inequality-chain verifiers with their class-number and discriminant
//! bounds ([`bounds`]).
//!
//! Integer and rational arithmetic is exact throughout; the analytic
//! quantities (zeta values, covolumes) are carried as outward-rounded
//! intervals ([`interval::BoundedValue`]).
//!
//! All values are immutable and all operations are pure; anything here can
//! be shared across threads and evaluated concurrently without
//! coordination.

pub mod bounds;
pub mod covolume;
pub mod interval;
pub mod modp;
pub mod numfield;
pub mod poly;
pub mod quatalg;

pub use bounds::{BoundsConfig, ChainLink, ChainReport, Relation};
pub use covolume::{CovolumeResult, MinimalCovolume, SEnumeration, SLevelSet};
pub use interval::BoundedValue;
pub use numfield::{FieldSpec, NumberField, PrimeIdeal};
pub use quatalg::{PlaceId, PlacedPrime, QuaternionAlgebra};
