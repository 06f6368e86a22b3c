//! Exact computations for P-partitions of finite posets: enumeration,
//! linear extensions and their major-index polynomials, Hilbert series of
//! the P-partition rings, the complete-intersection classification, ring
//! presentations and the flag complex of connected ideals.

pub mod complexes;
pub mod error;
pub mod extensions;
pub mod fixtures;
pub mod identities;
pub mod partitions;
pub mod poset;
pub mod presentation;
pub mod series;
pub mod structure;

pub use error::{Error, Result};
pub use partitions::{Flavor, PPartition};
pub use poset::{parse_poset, IdealSet, PiPair, Poset};
pub use series::{Grading, QPoly, TruncSeries};
pub use structure::{Classification, Recipe, Witness};
