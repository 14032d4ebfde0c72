//! Connectivity and low-dimensional homology of chromatic complexes.

pub mod components;
pub mod field;
pub mod homology;
pub mod obstruction;

pub use components::{complex_components, frame_components};
pub use field::{Field, Gf2};
pub use homology::{betti_numbers, induced_h1_matrix, induced_h1_rank, ChainComplex};
pub use obstruction::{obstruction_report, ObstructionReport, ObstructionVerdict};
