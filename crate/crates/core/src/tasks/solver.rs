//! The search for `h : P → Δ*` with `π_I ∘ h = π_I`.
//!
//! Variables are the vertices of `P`. The domain of `x` holds the `Δ*`
//! vertices of the same color lying over the same input vertex. Every facet
//! of `P` must land on a facet of `Δ*`; these constraints are kept
//! generalized arc consistent throughout the search. Variables are taken in
//! a static order and values in increasing order, so the first solution is
//! the lexicographically least for that order.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::protocol::{protocol_complex, ProtocolComplex};
use crate::simplicial::{ChromaticComplex, ChromaticMap, SimplicialModel};
use crate::tasks::spec::{SimplicialTask, TaskSpec};

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    /// Shuffles the variable order; the verdict must not depend on it.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Values tried during the search.
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SolvabilityVerdict {
    pub solvable: bool,
    /// `h`, as a vertex map from `P` to `Δ*`.
    pub witness: Option<ChromaticMap>,
    pub stats: SearchStats,
}

struct Search<'a> {
    p: &'a ChromaticComplex,
    delta: &'a ChromaticComplex,
    order: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn supported(&self, domains: &[Vec<usize>], facet: &[usize], color: usize, y: usize) -> bool {
        self.delta
            .facets_containing(y)
            .expect("domain values are vertices of delta")
            .iter()
            .any(|&g| {
                let tau = self.delta.facet(g);
                facet
                    .iter()
                    .enumerate()
                    .all(|(c, &x)| c == color || domains[x].binary_search(&tau[c]).is_ok())
            })
    }

    /// Restores arc consistency starting from the queued facets. False on a
    /// domain wipe-out.
    fn propagate(&self, domains: &mut [Vec<usize>], mut queue: Vec<usize>) -> bool {
        let mut queued = vec![false; self.p.num_facets()];
        for &f in &queue {
            queued[f] = true;
        }
        while let Some(f) = queue.pop() {
            queued[f] = false;
            let facet = self.p.facet(f);
            for (c, &x) in facet.iter().enumerate() {
                let before = domains[x].len();
                let kept: Vec<usize> = domains[x]
                    .iter()
                    .copied()
                    .filter(|&y| self.supported(domains, facet, c, y))
                    .collect();
                if kept.len() == before {
                    continue;
                }
                if kept.is_empty() {
                    return false;
                }
                domains[x] = kept;
                for &g in self.p.facets_containing(x).expect("vertex of p") {
                    if g != f && !queued[g] {
                        queued[g] = true;
                        queue.push(g);
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, domains: Vec<Vec<usize>>) -> Option<Vec<usize>> {
        let Some(&x) = self.order.iter().find(|&&x| domains[x].len() > 1) else {
            return Some(domains.iter().map(|d| d[0]).collect());
        };
        for &y in &domains[x] {
            self.nodes += 1;
            let mut next = domains.clone();
            next[x] = vec![y];
            let queue = self.p.facets_containing(x).expect("vertex of p").to_vec();
            if self.propagate(&mut next, queue) {
                if let Some(h) = self.run(next) {
                    return Some(h);
                }
            }
        }
        None
    }
}

/// Decides whether some chromatic `h : P → Δ*` satisfies
/// `delta_to_input ∘ h = p_to_input`.
pub fn check_solvability(
    p: &ChromaticComplex,
    p_to_input: &ChromaticMap,
    delta: &ChromaticComplex,
    delta_to_input: &ChromaticMap,
    options: SearchOptions,
) -> Result<SolvabilityVerdict> {
    let start = Instant::now();
    p.agents().ensure_same(delta.agents())?;
    if p_to_input.map.len() != p.num_vertices() {
        return Err(Error::NonTotalMap {
            expected: p.num_vertices(),
            got: p_to_input.map.len(),
        });
    }
    if delta_to_input.map.len() != delta.num_vertices() {
        return Err(Error::NonTotalMap {
            expected: delta.num_vertices(),
            got: delta_to_input.map.len(),
        });
    }
    let mut over: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for y in 0..delta.num_vertices() {
        over.entry((delta.color(y).0, delta_to_input.apply(y)))
            .or_default()
            .push(y);
    }
    let domains: Vec<Vec<usize>> = (0..p.num_vertices())
        .map(|x| {
            over.get(&(p.color(x).0, p_to_input.apply(x)))
                .cloned()
                .unwrap_or_default()
        })
        .collect();
    let mut order: Vec<usize> = (0..p.num_vertices()).collect();
    if let Some(seed) = options.seed {
        order.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
    }
    let mut search = Search {
        p,
        delta,
        order,
        nodes: 0,
    };
    let mut domains = domains;
    let witness = if domains.iter().any(Vec::is_empty) {
        None
    } else if search.propagate(&mut domains, (0..p.num_facets()).collect()) {
        search.run(domains)
    } else {
        None
    };
    Ok(SolvabilityVerdict {
        solvable: witness.is_some(),
        witness: witness.map(ChromaticMap::new),
        stats: SearchStats {
            nodes: search.nodes,
            elapsed: start.elapsed(),
        },
    })
}

/// Independent check of a candidate `h`: total, color preserving, facets
/// onto facets, and `delta_to_input ∘ h = p_to_input`.
pub fn check_witness(
    h: &ChromaticMap,
    p: &ChromaticComplex,
    p_to_input: &ChromaticMap,
    delta: &ChromaticComplex,
    delta_to_input: &ChromaticMap,
) -> bool {
    if h.map.len() != p.num_vertices() || p_to_input.map.len() != p.num_vertices() {
        return false;
    }
    for (x, &y) in h.map.iter().enumerate() {
        if y >= delta.num_vertices() || delta.color(y) != p.color(x) {
            return false;
        }
        if delta_to_input.map.get(y) != Some(&p_to_input.map[x]) {
            return false;
        }
    }
    p.facets().iter().all(|f| {
        let img: Vec<usize> = f.iter().map(|&x| h.map[x]).collect();
        delta.facets().contains(&img)
    })
}

/// `δ = π_O ∘ h`, a vertex map from `P` to the output complex.
pub fn extract_decision_map(h: &ChromaticMap, delta_to_output: &ChromaticMap) -> ChromaticMap {
    h.then(delta_to_output)
}

/// Whether every facet `σ` of `P` has `δ(σ) ∈ Δ(π_I(σ))`.
pub fn decision_carried_by_delta(
    p: &ChromaticComplex,
    p_to_input: &ChromaticMap,
    decision: &ChromaticMap,
    task: &SimplicialTask,
) -> bool {
    (0..p.num_facets()).all(|f| {
        let input = p_to_input.facet_image(p, task.input.complex(), f);
        let output = decision.facet_image(p, task.output.complex(), f);
        match (input, output) {
            (Some(i), Some(o)) => task.submodel.pairs.contains(&(i, o)),
            _ => false,
        }
    })
}

/// One row of a decision report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub vertex: String,
    pub agent: String,
    pub output_vertex: String,
    pub literals: Vec<String>,
}

pub fn decisions(p: &ChromaticComplex, decision: &ChromaticMap, output: &SimplicialModel) -> Vec<Decision> {
    (0..p.num_vertices())
        .map(|x| {
            let y = decision.apply(x);
            Decision {
                vertex: p.vertex(x).name.clone(),
                agent: p.agents().name(p.color(x)).to_string(),
                output_vertex: output.complex().vertex(y).name.clone(),
                literals: output.label_names(y),
            }
        })
        .collect()
}

/// `P` with each vertex additionally labeled by its decision's literals.
pub fn decorate_with_decisions(
    p: &SimplicialModel,
    decision: &ChromaticMap,
    output: &SimplicialModel,
) -> Result<SimplicialModel> {
    let (vocab, map) = p.vocab().union(output.vocab(), p.complex().agents())?;
    let labels = (0..p.complex().num_vertices())
        .map(|x| {
            let mut l = p.labels(x).to_vec();
            l.extend(
                output
                    .labels(decision.apply(x))
                    .iter()
                    .map(|lit| crate::vocab::Literal::new(map[lit.atom], lit.positive)),
            );
            l
        })
        .collect();
    SimplicialModel::new(p.complex().clone(), vocab, labels)
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub task: SimplicialTask,
    pub protocol: ProtocolComplex,
    pub verdict: SolvabilityVerdict,
    pub decision: Option<ChromaticMap>,
}

/// Builds the simplicial task and `rounds` rounds of IIS, then searches.
pub fn solve(task: &TaskSpec, rounds: usize, options: SearchOptions) -> Result<Solution> {
    let st = SimplicialTask::new(task)?;
    let pc = protocol_complex(&st.input, rounds)?;
    let verdict = check_solvability(
        pc.model.complex(),
        &pc.projection,
        &st.delta,
        &st.delta_to_input,
        options,
    )?;
    let decision = verdict
        .witness
        .as_ref()
        .map(|h| extract_decision_map(h, &st.delta_to_output));
    Ok(Solution {
        task: st,
        protocol: pc,
        verdict,
        decision,
    })
}
