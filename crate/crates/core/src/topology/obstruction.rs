use std::fmt;

use crate::error::Result;
use crate::simplicial::{ChromaticComplex, ChromaticMap};
use crate::topology::field::Gf2;
use crate::topology::homology::{betti_numbers, induced_h1_rank};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionVerdict {
    /// No `h` can exist.
    Obstructed,
    /// The homology test says nothing; solvability is not claimed.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub verdict: ObstructionVerdict,
    /// Rank of `H_1(π_I)` over GF(2).
    pub projection_h1_rank: usize,
    pub delta_beta1: usize,
}

impl fmt::Display for ObstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.verdict {
            ObstructionVerdict::Obstructed => "OBSTRUCTED",
            ObstructionVerdict::Inconclusive => "INCONCLUSIVE",
        };
        write!(
            f,
            "{v}: rank H1(pi_I) = {}, beta1(Delta*) = {}",
            self.projection_h1_rank, self.delta_beta1
        )
    }
}

/// If `h : P → Δ*` existed with `π ∘ h = π_I`, then `H_1(π_I)` would factor
/// through `H_1(Δ*)`, so its rank is at most `β_1(Δ*)`.
pub fn obstruction_report(
    p: &ChromaticComplex,
    p_to_input: &ChromaticMap,
    input: &ChromaticComplex,
    delta: &ChromaticComplex,
) -> Result<ObstructionReport> {
    let r = induced_h1_rank::<Gf2>(p_to_input, p, input)?;
    let (_, b1) = betti_numbers(delta)?;
    Ok(ObstructionReport {
        verdict: if r > b1 {
            ObstructionVerdict::Obstructed
        } else {
            ObstructionVerdict::Inconclusive
        },
        projection_h1_rank: r,
        delta_beta1: b1,
    })
}
