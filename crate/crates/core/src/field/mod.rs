//! Finite configuration spaces and the partition algebra that stands in for
//! σ-fields.
//!
//! A configuration is indexed by a mixed-radix integer: nature coordinates
//! in agent order, then decision coordinates in agent order, first
//! coordinate fastest. So `index = ω_index + |Ω| · u_index`. Indices are an
//! internal detail; anything serialized uses coordinate tuples.

mod mask;
mod partition;
mod set;
mod space;

pub use mask::{Coord, CoordinateMask, MaskKeyer};
pub use partition::{field_subset_on, field_subset_witness, refines, trace, Partition};
pub use set::ConfigSet;
pub use space::{project, ConfigSpace, Configuration, FiniteSpace, DEFAULT_SIZE_CAP};
