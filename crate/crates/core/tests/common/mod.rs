//! Random instances shared by the integration tests.
#![allow(dead_code)]

use episolve_core::agents::{Agent, AgentSet};
use episolve_core::kripke::{FrameMorphism, KripkeFrame, KripkeModel};
use episolve_core::logic::Formula;
use episolve_core::partition::Partition;
use episolve_core::simplicial::{ChromaticComplex, Vertex};
use episolve_core::vocab::{Valuation, Vocabulary};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn state_names(m: usize) -> Vec<String> {
    (0..m).map(|i| format!("s{i}")).collect()
}

/// Any frame, possibly improper.
pub fn random_frame(rng: &mut StdRng, max_agents: usize, max_states: usize) -> KripkeFrame {
    let n = rng.gen_range(1..=max_agents);
    let m = rng.gen_range(1..=max_states);
    let rel = (0..n)
        .map(|_| {
            let blocks = rng.gen_range(1..=m);
            let labels: Vec<usize> = (0..m).map(|_| rng.gen_range(0..blocks)).collect();
            Partition::from_labels(&labels)
        })
        .collect();
    KripkeFrame::new(AgentSet::indexed(n), state_names(m), rel).unwrap()
}

/// A model whose agent-owned atoms are constant on that agent's classes,
/// so that it lifts to a simplicial model.
pub fn random_local_model(rng: &mut StdRng, max_agents: usize, max_states: usize) -> KripkeModel {
    let frame = random_frame(rng, max_agents, max_states);
    let agents = frame.agents().clone();
    let per_agent = rng.gen_range(0..=2);
    let mut atoms = Vec::new();
    for a in agents.iter() {
        for k in 0..per_agent {
            atoms.push((format!("p{}_{k}", a.0), Some(a)));
        }
    }
    let vocab = Vocabulary::new(atoms.clone()).unwrap();
    let class_bits: Vec<Vec<Vec<bool>>> = agents
        .iter()
        .map(|a| {
            (0..frame.relation(a).num_blocks())
                .map(|_| (0..per_agent).map(|_| rng.gen_bool(0.5)).collect())
                .collect()
        })
        .collect();
    let val = (0..frame.len())
        .map(|s| {
            Valuation(
                agents
                    .iter()
                    .flat_map(|a| class_bits[a.0][frame.relation(a).block_of(s)].clone())
                    .collect(),
            )
        })
        .collect();
    KripkeModel::new(frame, vocab, val).unwrap()
}

/// Agent-local and proper.
pub fn random_proper_model(rng: &mut StdRng, max_agents: usize, max_states: usize) -> KripkeModel {
    random_local_model(rng, max_agents, max_states).quotient().unwrap().0
}

pub fn random_proper_frame(rng: &mut StdRng, max_agents: usize, max_states: usize) -> KripkeFrame {
    random_proper_model(rng, max_agents, max_states).frame().clone()
}

/// Arbitrary valuations over shared atoms `q0..`.
pub fn random_model(rng: &mut StdRng, max_agents: usize, max_states: usize) -> KripkeModel {
    let frame = random_frame(rng, max_agents, max_states);
    let k = rng.gen_range(1..=3);
    let vocab = Vocabulary::new((0..k).map(|i| (format!("q{i}"), None)).collect()).unwrap();
    let val = (0..frame.len())
        .map(|_| Valuation((0..k).map(|_| rng.gen_bool(0.5)).collect()))
        .collect();
    KripkeModel::new(frame, vocab, val).unwrap()
}

pub fn random_complex(rng: &mut StdRng, max_agents: usize, max_facets: usize) -> ChromaticComplex {
    let n = rng.gen_range(1..=max_agents);
    let per_color: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let f = rng.gen_range(1..=max_facets);
    let mut facets: Vec<Vec<usize>> = (0..f)
        .map(|_| per_color.iter().map(|&k| rng.gen_range(0..k)).collect())
        .collect();
    facets.sort();
    facets.dedup();
    let mut ids = std::collections::BTreeMap::new();
    let mut vertices = Vec::new();
    let facets = facets
        .iter()
        .map(|loc| {
            loc.iter()
                .enumerate()
                .map(|(c, &i)| {
                    *ids.entry((c, i)).or_insert_with(|| {
                        vertices.push(Vertex {
                            name: format!("v{c}_{i}"),
                            color: Agent(c),
                        });
                        vertices.len() - 1
                    })
                })
                .collect()
        })
        .collect();
    ChromaticComplex::new(AgentSet::indexed(n), vertices, facets).unwrap()
}

/// A random surjection onto a quotient frame: `f` is a frame morphism by
/// construction. Target atoms are those constant on every fiber, so `f` is
/// also a model morphism.
pub fn random_coarsening(rng: &mut StdRng, m: &KripkeModel) -> (KripkeModel, FrameMorphism) {
    let k = rng.gen_range(1..=m.len());
    let mut q: Vec<usize> = (0..m.len())
        .map(|s| if s < k { s } else { rng.gen_range(0..k) })
        .collect();
    q.shuffle(rng);
    let q = Partition::from_labels(&q).labels().to_vec();
    let k = q.iter().max().unwrap() + 1;
    let frame = m.frame();
    let edges: Vec<Vec<(usize, usize)>> = frame
        .agents()
        .iter()
        .map(|a| {
            frame
                .relation(a)
                .spanning_edges()
                .iter()
                .map(|&(s, t)| (q[s], q[t]))
                .collect()
        })
        .collect();
    let (target, _) = KripkeFrame::from_edges(frame.agents().clone(), state_names(k), &edges).unwrap();
    let constant: Vec<usize> = (0..m.vocab().len())
        .filter(|&p| {
            (0..m.len()).all(|s| (0..m.len()).all(|t| q[s] != q[t] || m.valuation(s).0[p] == m.valuation(t).0[p]))
        })
        .collect();
    let (vocab, kept) = m.vocab().filter(|p| constant.contains(&p));
    let rep: Vec<usize> = (0..k).map(|b| q.iter().position(|&x| x == b).unwrap()).collect();
    let val = rep
        .iter()
        .map(|&s| Valuation(kept.iter().map(|&p| m.valuation(s).0[p]).collect()))
        .collect();
    (KripkeModel::new(target, vocab, val).unwrap(), FrameMorphism::new(q))
}

fn random_group(rng: &mut StdRng, agents: &AgentSet) -> Vec<String> {
    let mut g: Vec<String> = agents.names().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    if g.is_empty() {
        g.push(agents.names().choose(rng).unwrap().clone());
    }
    g
}

fn random_literal(rng: &mut StdRng, atoms: &[String]) -> Formula {
    if atoms.is_empty() {
        return if rng.gen_bool(0.5) {
            Formula::True
        } else {
            Formula::True.not()
        };
    }
    let p = Formula::atom(atoms.choose(rng).unwrap().clone());
    if rng.gen_bool(0.5) {
        p
    } else {
        p.not()
    }
}

/// Negation only below modalities' reach: modal operators, `∧`, `∨` over
/// arbitrary propositional leaves. Truth of these transfers backwards along
/// model morphisms.
pub fn positive_formula(rng: &mut StdRng, agents: &AgentSet, atoms: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        let a = random_literal(rng, atoms);
        return match rng.gen_range(0..3) {
            0 => a,
            1 => a.and(random_literal(rng, atoms)),
            _ => a.or(random_literal(rng, atoms)),
        };
    }
    let sub = |rng: &mut StdRng| positive_formula(rng, agents, atoms, depth - 1);
    match rng.gen_range(0..6) {
        0 | 1 => Formula::knows(agents.names().choose(rng).unwrap().clone(), sub(rng)),
        2 => Formula::everyone(random_group(rng, agents), sub(rng)),
        3 => Formula::common(random_group(rng, agents), sub(rng)),
        4 => sub(rng).and(positive_formula(rng, agents, atoms, depth)),
        _ => sub(rng).or(positive_formula(rng, agents, atoms, depth)),
    }
}

/// Unrestricted formulas without action boxes.
pub fn any_formula(rng: &mut StdRng, agents: &AgentSet, atoms: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return random_literal(rng, atoms);
    }
    let sub = |rng: &mut StdRng| any_formula(rng, agents, atoms, depth - 1);
    match rng.gen_range(0..6) {
        0 => sub(rng).not(),
        1 => sub(rng).and(sub(rng)),
        2 => Formula::knows(agents.names().choose(rng).unwrap().clone(), sub(rng)),
        3 => Formula::everyone(random_group(rng, agents), sub(rng)),
        4 => Formula::common(random_group(rng, agents), sub(rng)),
        _ => sub(rng).or(sub(rng)),
    }
}

/// All nonempty subsets of the agents.
pub fn nonempty_groups(agents: &AgentSet) -> Vec<Vec<Agent>> {
    let n = agents.len();
    (1u32..1 << n)
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).map(Agent).collect())
        .collect()
}
