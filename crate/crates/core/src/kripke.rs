//! Proper Kripke frames and models: per-agent indistinguishability
//! partitions over a finite state set, morphisms, and cartesian products.

use std::collections::HashMap;

use crate::agents::{Agent, AgentSet};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::report::ValidationReport;
use crate::vocab::{Literal, Valuation, Vocabulary};

/// Unvalidated frame as it comes from a file or a test: states by name and,
/// for each agent in order, a list of classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameDescription {
    pub agents: Vec<String>,
    pub states: Vec<String>,
    pub classes: Vec<Vec<Vec<String>>>,
}

/// Checks partition well-formedness for every agent.
pub fn validate_frame(desc: &FrameDescription) -> ValidationReport {
    let mut report = ValidationReport::new();
    if let Err(e) = AgentSet::new(desc.agents.iter().cloned()) {
        report.error(e.to_string());
    }
    if desc.states.is_empty() {
        report.error("frame has no states");
    }
    let mut index = HashMap::new();
    for (i, s) in desc.states.iter().enumerate() {
        if index.insert(s.as_str(), i).is_some() {
            report.error(format!("duplicate state {s}"));
        }
    }
    if desc.classes.len() != desc.agents.len() {
        report.error(format!(
            "{} agents but {} relations",
            desc.agents.len(),
            desc.classes.len()
        ));
    }
    for (a, classes) in desc.classes.iter().enumerate() {
        let agent = desc.agents.get(a).map(String::as_str).unwrap_or("?");
        let mut seen = vec![0usize; desc.states.len()];
        for class in classes {
            if class.is_empty() {
                report.error(format!("agent {agent}: empty class"));
            }
            for s in class {
                match index.get(s.as_str()) {
                    Some(&i) => seen[i] += 1,
                    None => report.error(format!("agent {agent}: unknown state {s}")),
                }
            }
        }
        for (i, &count) in seen.iter().enumerate() {
            if count == 0 {
                report.error(format!(
                    "agent {agent}: partition does not cover states (missing {})",
                    desc.states[i]
                ));
            } else if count > 1 {
                report.error(format!(
                    "agent {agent}: state {} appears in {count} classes",
                    desc.states[i]
                ));
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeFrame {
    agents: AgentSet,
    states: Vec<String>,
    rel: Vec<Partition>,
}

impl KripkeFrame {
    pub fn new(agents: AgentSet, states: Vec<String>, rel: Vec<Partition>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidFrame("frame has no states".into()));
        }
        if rel.len() != agents.len() {
            return Err(Error::InvalidFrame(format!(
                "{} agents but {} relations",
                agents.len(),
                rel.len()
            )));
        }
        if let Some(p) = rel.iter().find(|p| p.len() != states.len()) {
            return Err(Error::InvalidFrame(format!(
                "relation over {} elements for {} states",
                p.len(),
                states.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = states.iter().find(|s| !seen.insert(s.as_str())) {
            return Err(Error::InvalidFrame(format!("duplicate state {dup}")));
        }
        Ok(Self { agents, states, rel })
    }

    pub fn from_description(desc: &FrameDescription) -> Result<Self> {
        let report = validate_frame(desc);
        if !report.is_ok() {
            return Err(Error::InvalidFrame(report.errors.join("; ")));
        }
        let agents = AgentSet::new(desc.agents.iter().cloned())?;
        let index: HashMap<&str, usize> = desc.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let rel = desc
            .classes
            .iter()
            .map(|classes| {
                let idx: Vec<Vec<usize>> = classes
                    .iter()
                    .map(|c| c.iter().map(|s| index[s.as_str()]).collect())
                    .collect();
                Partition::from_classes(desc.states.len(), &idx).map_err(Error::InvalidFrame)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(agents, desc.states.clone(), rel)
    }

    /// Builds from per-agent undirected edge lists, closing each to an
    /// equivalence. Also reports whether closure added implied pairs.
    pub fn from_edges(agents: AgentSet, states: Vec<String>, edges: &[Vec<(usize, usize)>]) -> Result<(Self, bool)> {
        let n = states.len();
        let mut widened = false;
        let mut rel = Vec::with_capacity(agents.len());
        for a in agents.iter() {
            let list = edges.get(a.0).map(Vec::as_slice).unwrap_or(&[]);
            if let Some(&(u, v)) = list.iter().find(|&&(u, v)| u >= n || v >= n) {
                return Err(Error::InvalidFrame(format!("edge ({u},{v}) out of range")));
            }
            let (p, added) = Partition::from_edges(n, list);
            widened |= added;
            rel.push(p);
        }
        Ok((Self::new(agents, states, rel)?, widened))
    }

    pub fn agents(&self) -> &AgentSet {
        &self.agents
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn relation(&self, a: Agent) -> &Partition {
        &self.rel[a.0]
    }

    pub fn relations(&self) -> &[Partition] {
        &self.rel
    }

    pub fn related(&self, a: Agent, s: usize, t: usize) -> bool {
        self.rel[a.0].same(s, t)
    }

    pub fn class_of(&self, a: Agent, s: usize) -> &[usize] {
        self.rel[a.0].class_of(s)
    }

    pub fn to_description(&self) -> FrameDescription {
        FrameDescription {
            agents: self.agents.names().to_vec(),
            states: self.states.clone(),
            classes: self
                .rel
                .iter()
                .map(|p| {
                    p.blocks()
                        .iter()
                        .map(|b| b.iter().map(|&s| self.states[s].clone()).collect())
                        .collect()
                })
                .collect(),
        }
    }

    /// Sub-frame on `keep` (in that order) with induced relations.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let states = keep.iter().map(|&s| self.states[s].clone()).collect();
        let rel = self.rel.iter().map(|p| p.restrict(keep)).collect();
        Self::new(self.agents.clone(), states, rel)
    }

    /// Returns a pair of distinct states related by every agent, if any.
    pub fn improper_pair(&self) -> Option<(usize, usize)> {
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        for s in 0..self.len() {
            let key: Vec<usize> = self.rel.iter().map(|p| p.block_of(s)).collect();
            if let Some(&t) = seen.get(&key) {
                return Some((t, s));
            }
            seen.insert(key, s);
        }
        None
    }

    pub fn with_state_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.states.len() {
            return Err(Error::InvalidFrame("state name count mismatch".into()));
        }
        self.states = names;
        Self::new(self.agents, self.states, self.rel)
    }
}

/// True iff no two distinct states are indistinguishable to every agent.
pub fn is_proper(frame: &KripkeFrame) -> bool {
    frame.improper_pair().is_none()
}

/// A total state map between frames over the same agents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrameMorphism {
    pub map: Vec<usize>,
}

impl FrameMorphism {
    pub fn new(map: Vec<usize>) -> Self {
        Self { map }
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).collect())
    }

    pub fn apply(&self, s: usize) -> usize {
        self.map[s]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FrameMorphism) -> FrameMorphism {
        FrameMorphism::new(self.map.iter().map(|&s| other.map[s]).collect())
    }
}

pub(crate) fn check_total(map: &[usize], src_len: usize, tgt_len: usize) -> Result<()> {
    if map.len() != src_len {
        return Err(Error::NonTotalMap {
            expected: src_len,
            got: map.len(),
        });
    }
    if let Some((from, &to)) = map.iter().enumerate().find(|(_, &t)| t >= tgt_len) {
        return Err(Error::OutOfRange { from, to, len: tgt_len });
    }
    Ok(())
}

/// Checks `u ∼_a v ⇒ f(u) ∼_a f(v)` for all agents.
pub fn is_morphism(map: &[usize], source: &KripkeFrame, target: &KripkeFrame) -> Result<bool> {
    source.agents.ensure_same(&target.agents)?;
    check_total(map, source.len(), target.len())?;
    for a in source.agents.iter() {
        let tp = target.relation(a);
        for class in source.relation(a).blocks() {
            let b = tp.block_of(map[class[0]]);
            if class.iter().any(|&s| tp.block_of(map[s]) != b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Cartesian product with its two projections. State `(s,t)` has index
/// `s * |N| + t`.
pub fn frame_product(m: &KripkeFrame, n: &KripkeFrame) -> Result<(KripkeFrame, FrameMorphism, FrameMorphism)> {
    m.agents.ensure_same(&n.agents)?;
    let pairs: Vec<(usize, usize)> = (0..m.len()).flat_map(|s| (0..n.len()).map(move |t| (s, t))).collect();
    let frame = product_on_pairs(m, n, &pairs)?;
    let pi_m = FrameMorphism::new(pairs.iter().map(|p| p.0).collect());
    let pi_n = FrameMorphism::new(pairs.iter().map(|p| p.1).collect());
    Ok((frame, pi_m, pi_n))
}

/// Sub-frame of `m × n` on the listed pairs.
pub(crate) fn product_on_pairs(m: &KripkeFrame, n: &KripkeFrame, pairs: &[(usize, usize)]) -> Result<KripkeFrame> {
    let states = pairs
        .iter()
        .map(|&(s, t)| format!("({},{})", m.states[s], n.states[t]))
        .collect();
    let rel = m
        .agents
        .iter()
        .map(|a| {
            let labels: Vec<(usize, usize)> = pairs
                .iter()
                .map(|&(s, t)| (m.rel[a.0].block_of(s), n.rel[a.0].block_of(t)))
                .collect();
            Partition::from_labels(&labels)
        })
        .collect();
    KripkeFrame::new(m.agents.clone(), states, rel)
}

/// A Kripke frame plus an AP-maximal consistent valuation per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    frame: KripkeFrame,
    vocab: Vocabulary,
    val: Vec<Valuation>,
}

impl KripkeModel {
    pub fn new(frame: KripkeFrame, vocab: Vocabulary, val: Vec<Valuation>) -> Result<Self> {
        if val.len() != frame.len() {
            return Err(Error::InvalidModel(format!(
                "{} valuations for {} states",
                val.len(),
                frame.len()
            )));
        }
        if let Some(s) = val.iter().position(|v| v.0.len() != vocab.len()) {
            return Err(Error::InvalidModel(format!(
                "valuation of {} has {} entries, vocabulary has {}",
                frame.state_name(s),
                val[s].0.len(),
                vocab.len()
            )));
        }
        Ok(Self { frame, vocab, val })
    }

    /// A model with empty vocabulary.
    pub fn bare(frame: KripkeFrame) -> Self {
        let val = vec![Valuation(Vec::new()); frame.len()];
        Self {
            frame,
            vocab: Vocabulary::empty(),
            val,
        }
    }

    pub fn frame(&self) -> &KripkeFrame {
        &self.frame
    }

    pub fn agents(&self) -> &AgentSet {
        self.frame.agents()
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn valuation(&self, s: usize) -> &Valuation {
        &self.val[s]
    }

    pub fn valuations(&self) -> &[Valuation] {
        &self.val
    }

    pub fn holds(&self, s: usize, lit: Literal) -> bool {
        self.val[s].holds(lit)
    }

    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let frame = self.frame.restrict(keep)?;
        let val = keep.iter().map(|&s| self.val[s].clone()).collect();
        Self::new(frame, self.vocab.clone(), val)
    }

    pub fn with_frame(&self, frame: KripkeFrame) -> Result<Self> {
        Self::new(frame, self.vocab.clone(), self.val.clone())
    }

    /// Literal names at state `s`, in vocabulary order.
    pub fn literal_names(&self, s: usize) -> Vec<String> {
        self.val[s].literals().map(|l| self.vocab.fmt_literal(l)).collect()
    }

    /// Merges states that every agent confuses and that carry the same
    /// valuation. The result keeps the first state of each merged group.
    pub fn quotient(&self) -> Result<(KripkeModel, FrameMorphism)> {
        let keys: Vec<(Vec<usize>, &Valuation)> = (0..self.len())
            .map(|s| (self.frame.rel.iter().map(|p| p.block_of(s)).collect(), &self.val[s]))
            .collect();
        let groups = Partition::from_labels(&keys);
        let reps: Vec<usize> = groups.blocks().iter().map(|b| b[0]).collect();
        let projection = FrameMorphism::new(groups.labels().to_vec());
        Ok((self.restrict(&reps)?, projection))
    }
}

/// Product of models: product frame, valuation `L(s) ∪ L(t)` over the union
/// vocabulary.
pub fn model_product(m: &KripkeModel, n: &KripkeModel) -> Result<KripkeModel> {
    let (frame, pi_m, pi_n) = frame_product(&m.frame, &n.frame)?;
    let pairs: Vec<(usize, usize)> = pi_m.map.iter().copied().zip(pi_n.map.iter().copied()).collect();
    product_model_on(m, n, frame, &pairs)
}

pub(crate) fn product_model_on(
    m: &KripkeModel,
    n: &KripkeModel,
    frame: KripkeFrame,
    pairs: &[(usize, usize)],
) -> Result<KripkeModel> {
    let (vocab, map) = m.vocab.union(&n.vocab, m.agents())?;
    let mut val = Vec::with_capacity(pairs.len());
    for &(s, t) in pairs {
        let mut v: Vec<Option<bool>> = m.val[s].0.iter().map(|&b| Some(b)).collect();
        v.resize(vocab.len(), None);
        for (i, &b) in n.val[t].0.iter().enumerate() {
            let j = map[i];
            match v[j] {
                Some(old) if old != b => {
                    return Err(Error::InconsistentValuation(
                        m.frame.state_name(s).to_string(),
                        n.frame.state_name(t).to_string(),
                    ))
                }
                _ => v[j] = Some(b),
            }
        }
        val.push(Valuation(v.into_iter().map(|b| b.unwrap_or(false)).collect()));
    }
    KripkeModel::new(frame, vocab, val)
}

/// Frame-morphism condition plus `L(f(s)) ⊆ L(s)` at every state.
pub fn is_model_morphism(map: &[usize], source: &KripkeModel, target: &KripkeModel) -> Result<bool> {
    if !is_morphism(map, &source.frame, &target.frame)? {
        return Ok(false);
    }
    let mut atom_map = Vec::with_capacity(target.vocab.len());
    for i in 0..target.vocab.len() {
        match source.vocab.lookup(target.vocab.name(i)) {
            Some(j) => atom_map.push(j),
            // a literal of the target that the source cannot contain
            None => return Ok(false),
        }
    }
    for (s, &fs) in map.iter().enumerate() {
        let tv = &target.val[fs].0;
        if tv.iter().enumerate().any(|(i, &b)| source.val[s].0[atom_map[i]] != b) {
            return Ok(false);
        }
    }
    Ok(true)
}
