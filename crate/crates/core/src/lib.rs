//! Kripke models, pure chromatic simplicial models, and the bridge between
//! them: equivalence functors, product updates for immediate-snapshot
//! protocols, epistemic model checking, task solvability, and homology
//! diagnostics for impossibility.

pub mod agents;
pub mod equivalence;
pub mod error;
pub mod iso;
pub mod kripke;
pub mod logic;
pub mod partition;
pub mod protocol;
pub mod report;
pub mod simplicial;
pub mod tasks;
pub mod topology;
pub mod unionfind;
pub mod vocab;

pub use agents::{Agent, AgentSet};
pub use error::{Error, Result};
pub use kripke::{FrameMorphism, KripkeFrame, KripkeModel};
pub use partition::Partition;
pub use report::ValidationReport;
pub use simplicial::{ChromaticComplex, ChromaticMap, SimplicialModel};
pub use topology::field::Gf2;
pub use vocab::{Literal, Valuation, Vocabulary};

/// Chain complex with two-element-field coefficients.
pub type Gf2ChainComplex = topology::homology::ChainComplex<Gf2>;
/// Chain complex with rational coefficients, for cross-checking ranks.
pub type RationalChainComplex = topology::homology::ChainComplex<num_rational::Rational64>;
