//! Iterated immediate snapshot (IIS) protocols.
//!
//! One round is scheduled by an ordered partition of the agents into
//! concurrency classes. Each class writes, then snapshots everything
//! written so far, so agent `a` sees the union of the blocks up to its own.

use std::collections::HashMap;
use std::fmt;

use crate::agents::{Agent, AgentSet};
use crate::equivalence::{model_to_simplicial, simplicial_to_model, transport_chromatic_map};
use crate::error::{Error, Result};
use crate::kripke::{FrameMorphism, KripkeFrame, KripkeModel};
use crate::logic::action::ActionModel;
use crate::logic::formula::Formula;
use crate::partition::Partition;
use crate::simplicial::{ChromaticComplex, ChromaticMap, SimplicialModel, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedPartition {
    blocks: Vec<Vec<Agent>>,
}

impl OrderedPartition {
    /// Blocks must be nonempty, disjoint and cover `agents`.
    pub fn new(agents: &AgentSet, blocks: Vec<Vec<Agent>>) -> Result<Self> {
        let mut seen = vec![false; agents.len()];
        let mut sorted = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            if b.is_empty() {
                return Err(Error::InvalidAgents("empty block in ordered partition".into()));
            }
            b.sort();
            for &a in &b {
                if a.0 >= agents.len() {
                    return Err(Error::UnknownAgent(format!("#{}", a.0)));
                }
                if std::mem::replace(&mut seen[a.0], true) {
                    return Err(Error::InvalidAgents(format!("{} appears twice", agents.name(a))));
                }
            }
            sorted.push(b);
        }
        if let Some(a) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidAgents(format!(
                "{} is not scheduled",
                agents.name(Agent(a))
            )));
        }
        Ok(Self { blocks: sorted })
    }

    pub fn blocks(&self) -> &[Vec<Agent>] {
        &self.blocks
    }

    pub fn block_of(&self, a: Agent) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&a))
    }

    pub fn display<'a>(&'a self, agents: &'a AgentSet) -> impl fmt::Display + 'a {
        DisplayPartition { p: self, agents }
    }
}

struct DisplayPartition<'a> {
    p: &'a OrderedPartition,
    agents: &'a AgentSet,
}

impl fmt::Display for DisplayPartition<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.p.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let names: Vec<&str> = b.iter().map(|&a| self.agents.name(a)).collect();
            write!(f, "{{{}}}", names.join(","))?;
        }
        write!(f, "]")
    }
}

/// One ordered partition per round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    rounds: Vec<OrderedPartition>,
}

impl Schedule {
    pub fn new(rounds: Vec<OrderedPartition>) -> Result<Self> {
        if rounds.is_empty() {
            return Err(Error::InvalidAgents("a schedule needs at least one round".into()));
        }
        Ok(Self { rounds })
    }

    pub fn rounds(&self) -> &[OrderedPartition] {
        &self.rounds
    }
}

/// All ordered partitions. The first block runs over nonempty subsets of
/// the remaining agents in increasing bitmask order, then recursion.
pub fn enumerate_ordered_partitions(agents: &AgentSet) -> Vec<OrderedPartition> {
    fn go(remaining: u64, prefix: &mut Vec<Vec<Agent>>, out: &mut Vec<OrderedPartition>) {
        if remaining == 0 {
            out.push(OrderedPartition { blocks: prefix.clone() });
            return;
        }
        let mut sub: u64 = 0;
        loop {
            // next submask of `remaining` in increasing order
            sub = (sub.wrapping_sub(remaining)) & remaining;
            if sub == 0 {
                break;
            }
            prefix.push(
                (0..64)
                    .filter(|i| sub >> i & 1 == 1)
                    .map(|i| Agent(i as usize))
                    .collect(),
            );
            go(remaining & !sub, prefix, out);
            prefix.pop();
        }
    }
    assert!(agents.len() < 64, "too many agents");
    let mut out = Vec::new();
    go((1u64 << agents.len()) - 1, &mut Vec::new(), &mut out);
    out
}

/// Agents whose writes `a` reads: the blocks of `p` up to and including
/// its own, sorted.
pub fn iis_view(a: Agent, p: &OrderedPartition) -> Result<Vec<Agent>> {
    let k = p.block_of(a).ok_or_else(|| Error::UnknownAgent(format!("#{}", a.0)))?;
    let mut view: Vec<Agent> = p.blocks[..=k].iter().flatten().copied().collect();
    view.sort();
    Ok(view)
}

fn views(p: &OrderedPartition, n: usize) -> Vec<Vec<Agent>> {
    (0..n)
        .map(|a| iis_view(Agent(a), p).expect("partition covers agents"))
        .collect()
}

/// Uniform one-round model: points are ordered partitions, preconditions
/// are `true`, and `p ∼_a p'` iff `a` has the same view in both.
pub fn iis_one_round_action_model(agents: &AgentSet) -> ActionModel {
    let parts = enumerate_ordered_partitions(agents);
    let names = parts.iter().map(|p| p.display(agents).to_string()).collect();
    let all_views: Vec<Vec<Vec<Agent>>> = parts.iter().map(|p| views(p, agents.len())).collect();
    let rel = agents
        .iter()
        .map(|a| Partition::from_labels(&all_views.iter().map(|v| v[a.0].clone()).collect::<Vec<_>>()))
        .collect();
    let frame = KripkeFrame::new(agents.clone(), names, rel).expect("views give a valid frame");
    debug_assert!(crate::kripke::is_proper(&frame));
    ActionModel::uniform(frame)
}

/// Input-dependent one-round model: points `(p, u)` for each ordered
/// partition `p` and input state `u`, executable exactly at `u`, with
/// `(p, u) ∼_a (p', v)` iff `a` has the same view `V` in both and
/// `u ∼_b v` for every `b ∈ V`. States of `input` must have pairwise
/// distinct valuations so that the preconditions single them out.
pub fn full_information_action_model(input: &KripkeModel) -> Result<ActionModel> {
    let frame = input.frame();
    let agents = frame.agents();
    for s in 0..input.len() {
        for t in s + 1..input.len() {
            if input.valuation(s) == input.valuation(t) {
                return Err(Error::IndistinctValuations(
                    frame.state_name(s).to_string(),
                    frame.state_name(t).to_string(),
                ));
            }
        }
    }
    let parts = enumerate_ordered_partitions(agents);
    let mut names = Vec::new();
    let mut pre = Vec::new();
    let mut keys: Vec<Vec<(Vec<Agent>, Vec<usize>)>> = vec![Vec::new(); agents.len()];
    for p in &parts {
        let v = views(p, agents.len());
        for u in 0..input.len() {
            names.push(format!("{}@{}", p.display(agents), frame.state_name(u)));
            let lits = input.valuation(u).literals().map(|l| {
                let atom = Formula::atom(input.vocab().name(l.atom));
                if l.positive {
                    atom
                } else {
                    atom.not()
                }
            });
            pre.push(Formula::conjunction(lits));
            for a in agents.iter() {
                let seen = v[a.0].iter().map(|&b| frame.relation(b).block_of(u)).collect();
                keys[a.0].push((v[a.0].clone(), seen));
            }
        }
    }
    let rel = keys.iter().map(|k| Partition::from_labels(k)).collect();
    ActionModel::new(KripkeFrame::new(agents.clone(), names, rel)?, pre)
}

/// `P(I)` together with the projection `π_I` onto the input complex.
#[derive(Debug, Clone)]
pub struct ProtocolComplex {
    pub model: SimplicialModel,
    pub projection: ChromaticMap,
}

/// Full-information IIS protocol complex after `rounds` rounds (0 gives
/// `I` itself). In each round, facet `σ` and ordered partition `p` give a
/// facet whose `a`-vertex is `(a, the face of σ colored by a's view)`,
/// carrying the labels of `σ[a]`.
pub fn protocol_complex(input: &SimplicialModel, rounds: usize) -> Result<ProtocolComplex> {
    let agents = input.complex().agents().clone();
    let parts = enumerate_ordered_partitions(&agents);
    let part_views: Vec<Vec<Vec<Agent>>> = parts.iter().map(|p| views(p, agents.len())).collect();
    let mut current = input.clone();
    let mut projection = ChromaticMap::identity(input.complex().num_vertices());
    for _ in 0..rounds {
        let c = current.complex();
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut vertices = Vec::new();
        let mut labels = Vec::new();
        let mut step = Vec::new();
        let mut facets = Vec::with_capacity(c.num_facets() * parts.len());
        for f in c.facets() {
            for view in &part_views {
                let facet = agents
                    .iter()
                    .map(|a| {
                        let seen: Vec<usize> = view[a.0].iter().map(|b| f[b.0]).collect();
                        *ids.entry((a.0, seen)).or_insert_with_key(|(_, seen)| {
                            let names: Vec<&str> = seen.iter().map(|&v| c.vertex(v).name.as_str()).collect();
                            vertices.push(Vertex {
                                name: format!("{}[{}]", agents.name(a), names.join(",")),
                                color: a,
                            });
                            labels.push(current.labels(f[a.0]).to_vec());
                            step.push(f[a.0]);
                            vertices.len() - 1
                        })
                    })
                    .collect();
                facets.push(facet);
            }
        }
        let complex = ChromaticComplex::new(agents.clone(), vertices, facets)?;
        current = SimplicialModel::new(complex, input.vocab().clone(), labels)?;
        projection = ChromaticMap::new(step).then(&projection);
    }
    Ok(ProtocolComplex {
        model: current,
        projection,
    })
}

/// Kripke-side `P(I)`: routed through the simplicial side. Returns the
/// protocol model and `π_I` as a morphism onto the states of `input`.
pub fn protocol_model(input: &KripkeModel, rounds: usize) -> Result<(KripkeModel, FrameMorphism)> {
    let sm = model_to_simplicial(input)?;
    let pc = protocol_complex(&sm, rounds)?;
    let model = simplicial_to_model(&pc.model);
    let pi = transport_chromatic_map(&pc.projection, pc.model.complex(), sm.complex())?;
    Ok((model, pi))
}

/// One round of the protocol complex, valuations forgotten.
pub fn standard_chromatic_subdivision(c: &ChromaticComplex) -> Result<ChromaticComplex> {
    Ok(protocol_complex(&SimplicialModel::bare(c.clone()), 1)?
        .model
        .complex()
        .clone())
}
