//! Verification workbench for the monoid of monotone, order-decreasing partial
//! transformations of a finite chain.
//!
//! The crate enumerates the monoid and its ideals, evaluates the counting
//! formulas against brute-force oracles, classifies elements by Green's and
//! starred Green's relations, builds generating sets together with explicit
//! factorizations, and certifies rank values by subsemigroup closure.

pub mod count;
pub mod enumerate;
pub mod error;
pub mod greens;
pub mod map;
pub mod rank;
pub mod report;
pub mod semigroup;
pub mod verify;
pub mod vital;

pub use enumerate::{Bounds, ElementSet};
pub use error::{Error, Result};
pub use greens::{EggBox, RelationKey, RelationKind};
pub use map::{ChainSize, KernelDecomposition, MapClass, PartialMap};
pub use report::{Check, VerificationReport};
pub use semigroup::{Composition, ReesElement, ReesQuotient};
