//! Binary-input tasks used throughout the tests and fixtures.

use crate::agents::AgentSet;
use crate::equivalence::simplicial_to_model;
use crate::kripke::KripkeModel;
use crate::simplicial::{ChromaticComplex, SimplicialModel, Vertex};
use crate::tasks::spec::TaskSpec;
use crate::vocab::{Literal, Vocabulary};

/// Vertices `a=0`, `a=1` per agent, one literal `prefix+a` each, and the
/// facets listed as bit vectors.
fn binary_complex(n: usize, prefix: &str, tag: &str, facets: &[Vec<bool>]) -> SimplicialModel {
    let agents = AgentSet::indexed(n);
    let vocab = Vocabulary::agent_indexed(prefix, &agents);
    let mut vertices = Vec::new();
    let mut labels = Vec::new();
    for a in agents.iter() {
        for bit in [false, true] {
            vertices.push(Vertex {
                name: format!("{}{tag}={}", agents.name(a), bit as u8),
                color: a,
            });
            labels.push(vec![Literal::new(a.0, bit)]);
        }
    }
    let facets = facets
        .iter()
        .map(|bits| bits.iter().enumerate().map(|(a, &b)| 2 * a + b as usize).collect())
        .collect();
    let complex = ChromaticComplex::new(agents, vertices, facets).expect("binary facets are chromatic");
    SimplicialModel::new(complex, vocab, labels).expect("one literal per vertex")
}

fn all_bits(n: usize) -> Vec<Vec<bool>> {
    (0..1usize << n)
        .map(|k| (0..n).map(|a| k >> (n - 1 - a) & 1 == 1).collect())
        .collect()
}

/// All `2^n` binary input assignments; atom `l_a` is agent `a`'s input.
/// Facets are ordered as binary numbers with `a0` most significant.
pub fn binary_inputs(n: usize) -> SimplicialModel {
    binary_complex(n, "l", "", &all_bits(n))
}

pub fn binary_input_model(n: usize) -> KripkeModel {
    simplicial_to_model(&binary_inputs(n))
}

/// Binary outputs with atom `d_a` for agent `a`'s decision.
pub fn binary_outputs(n: usize, facets: &[Vec<bool>]) -> SimplicialModel {
    binary_complex(n, "d", ".d", facets)
}

/// Consensus: all decide the same value, which some agent proposed.
pub fn binary_consensus(n: usize) -> TaskSpec {
    let outputs = binary_outputs(n, &[vec![false; n], vec![true; n]]);
    let delta = all_bits(n)
        .iter()
        .map(|bits| {
            let mut d = Vec::new();
            if bits.contains(&false) {
                d.push(0);
            }
            if bits.contains(&true) {
                d.push(1);
            }
            d
        })
        .collect();
    TaskSpec::from_simplicial(&binary_inputs(n), &outputs, delta).expect("consensus is well formed")
}

/// Two agents. On equal inputs both decide that input; on mixed inputs
/// they may also decide `a0 → 0, a1 → 1`.
pub fn pseudo_consensus() -> TaskSpec {
    let outputs = binary_outputs(2, &[vec![false, false], vec![true, true], vec![false, true]]);
    let delta = vec![vec![0], vec![0, 1, 2], vec![0, 1, 2], vec![1]];
    TaskSpec::from_simplicial(&binary_inputs(2), &outputs, delta).expect("pseudo-consensus is well formed")
}

/// `O = I`, `Δ = id`.
pub fn identity_task(input: &KripkeModel) -> TaskSpec {
    let delta = (0..input.len()).map(|s| vec![s]).collect();
    TaskSpec::new(input.clone(), input.clone(), delta).expect("identity is well formed")
}
