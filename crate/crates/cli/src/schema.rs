//! JSON documents and their conversion to and from core types.
//!
//! Relations are read as edge lists and closed to equivalences; they are
//! written back as every related pair, so reading an emitted file never
//! widens anything.

use std::collections::{BTreeMap, HashMap};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use episolve_core::equivalence::simplicial_to_model;
use episolve_core::logic::{ActionModel, Formula};
use episolve_core::simplicial::{ComplexDescription, Vertex};
use episolve_core::tasks::TaskSpec;
use episolve_core::{
    AgentSet, ChromaticComplex, KripkeFrame, KripkeModel, Partition, SimplicialModel, Valuation, Vocabulary,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Kripke(KripkeDoc),
    Simplicial(SimplicialDoc),
    Action(ActionDoc),
    Task(TaskDoc),
}

/// Accepts and discards the `kind` field of a top-level body.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tag;

impl<'de> Deserialize<'de> for Tag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        serde::de::IgnoredAny::deserialize(d).map(|_| Tag)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDoc {
    pub name: String,
    /// Atoms true at this state; all others are false.
    #[serde(default)]
    pub holds: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KripkeDoc {
    /// Present when the body is read on its own; the enum tag otherwise.
    #[serde(default, skip_serializing)]
    pub kind: Tag,
    pub agents: Vec<String>,
    #[serde(default)]
    pub ap: Vec<AtomDoc>,
    pub states: Vec<StateDoc>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub name: String,
    pub agent: String,
    #[serde(default)]
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialDoc {
    /// Present when the body is read on its own; the enum tag otherwise.
    #[serde(default, skip_serializing)]
    pub kind: Tag,
    pub agents: Vec<String>,
    #[serde(default)]
    pub ap: Vec<AtomDoc>,
    pub vertices: Vec<VertexDoc>,
    pub facets: Vec<Vec<String>>,
}

fn true_formula() -> String {
    "true".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub name: String,
    #[serde(default = "true_formula")]
    pub pre: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    /// Present when the body is read on its own; the enum tag otherwise.
    #[serde(default, skip_serializing)]
    pub kind: Tag,
    pub agents: Vec<String>,
    pub points: Vec<PointDoc>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDoc {
    /// Present when the body is read on its own; the enum tag otherwise.
    #[serde(default, skip_serializing)]
    pub kind: Tag,
    pub agents: Vec<String>,
    /// A kripke or simplicial document.
    pub input: Box<Document>,
    pub output: Box<Document>,
    /// Allowed `(input state, output state)` pairs.
    pub delta: Vec<(String, String)>,
}

/// A validated document.
#[derive(Debug, Clone)]
pub enum Loaded {
    Kripke(KripkeModel),
    Simplicial(SimplicialModel),
    Action(ActionModel),
    Task(TaskSpec),
}

impl Loaded {
    pub fn kind(&self) -> &'static str {
        match self {
            Loaded::Kripke(_) => "kripke",
            Loaded::Simplicial(_) => "simplicial",
            Loaded::Action(_) => "action",
            Loaded::Task(_) => "task",
        }
    }
}

#[derive(Deserialize)]
struct Header {
    kind: String,
}

/// Where the error is. Inside a task's nested documents serde only knows
/// where the nested value ended, so unknown fields are located by name.
fn positioned(text: &str, e: serde_json::Error) -> anyhow::Error {
    let full = e.to_string();
    let msg = full.split(" at line ").next().unwrap_or(&full).to_string();
    let by_name = msg
        .strip_prefix("unknown field `")
        .and_then(|rest| rest.split('`').next())
        .and_then(|name| text.find(&format!("\"{name}\"")))
        .map(|at| {
            let before = &text[..at];
            (
                before.matches('\n').count() + 1,
                at - before.rfind('\n').map_or(0, |i| i + 1) + 1,
            )
        });
    match by_name {
        Some((line, column)) => anyhow!("parse error at line {line}, column {column}: {msg}"),
        None if e.line() > 0 => anyhow!("parse error at line {}, column {}: {msg}", e.line(), e.column()),
        None => anyhow!("parse error: {msg}"),
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let header: Header = serde_json::from_str(text).map_err(|e| positioned(text, e))?;
    let doc = match header.kind.as_str() {
        "kripke" => serde_json::from_str(text).map(Document::Kripke),
        "simplicial" => serde_json::from_str(text).map(Document::Simplicial),
        "action" => serde_json::from_str(text).map(Document::Action),
        "task" => serde_json::from_str(text).map(Document::Task),
        other => bail!("unknown kind {other:?}: expected kripke, simplicial, action or task"),
    };
    doc.map_err(|e| positioned(text, e))
}

pub fn read_document(path: &str) -> Result<Document> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
    parse_document(&text).with_context(|| path.to_string())
}

/// Validates a document; warnings are appended to `warnings`.
pub fn load(doc: &Document, warnings: &mut Vec<String>) -> Result<Loaded> {
    Ok(match doc {
        Document::Kripke(d) => Loaded::Kripke(load_kripke(d, warnings)?),
        Document::Simplicial(d) => Loaded::Simplicial(load_simplicial(d, warnings)?),
        Document::Action(d) => Loaded::Action(load_action(d, warnings)?),
        Document::Task(d) => Loaded::Task(load_task(d, warnings)?),
    })
}

fn vocabulary(agents: &AgentSet, ap: &[AtomDoc]) -> Result<Vocabulary> {
    let atoms = ap
        .iter()
        .map(|a| {
            Ok((
                a.name.clone(),
                a.owner.as_deref().map(|o| agents.lookup(o)).transpose()?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Vocabulary::new(atoms)?)
}

fn relations(
    agents: &AgentSet,
    states: &[String],
    rel: &BTreeMap<String, Vec<(String, String)>>,
    warnings: &mut Vec<String>,
) -> Result<KripkeFrame> {
    let index: HashMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    if index.len() != states.len() {
        bail!("duplicate state names");
    }
    for name in rel.keys() {
        agents.lookup(name)?;
    }
    let lookup = |s: &str| {
        index
            .get(s)
            .copied()
            .ok_or_else(|| anyhow!("unknown state {s} in relations"))
    };
    let mut parts = Vec::with_capacity(agents.len());
    for a in agents.iter() {
        let name = agents.name(a);
        let edges = rel
            .get(name)
            .map(|es| {
                es.iter()
                    .map(|(s, t)| Ok((lookup(s)?, lookup(t)?)))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?
            .unwrap_or_default();
        let (p, widened) = Partition::from_edges(states.len(), &edges);
        if widened {
            warnings.push(format!(
                "relation of {name} closed to an equivalence: implied pairs added"
            ));
        }
        parts.push(p);
    }
    Ok(KripkeFrame::new(agents.clone(), states.to_vec(), parts)?)
}

pub fn load_kripke(d: &KripkeDoc, warnings: &mut Vec<String>) -> Result<KripkeModel> {
    let agents = AgentSet::new(d.agents.iter().cloned())?;
    let vocab = vocabulary(&agents, &d.ap)?;
    let names: Vec<String> = d.states.iter().map(|s| s.name.clone()).collect();
    let frame = relations(&agents, &names, &d.relations, warnings)?;
    let val = d
        .states
        .iter()
        .map(|s| {
            let mut v = vec![false; vocab.len()];
            for p in &s.holds {
                v[vocab.require(p).with_context(|| format!("state {}", s.name))?] = true;
            }
            Ok(Valuation(v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KripkeModel::new(frame, vocab, val)?)
}

pub fn load_simplicial(d: &SimplicialDoc, warnings: &mut Vec<String>) -> Result<SimplicialModel> {
    let agents = AgentSet::new(d.agents.iter().cloned())?;
    let vocab = vocabulary(&agents, &d.ap)?;
    let desc = ComplexDescription {
        agents: d.agents.clone(),
        vertices: d.vertices.iter().map(|v| (v.name.clone(), v.agent.clone())).collect(),
        facets: d.facets.clone(),
    };
    let complex = ChromaticComplex::from_description(&desc)?;
    warnings.extend(complex.warnings().iter().cloned());
    let labels = d
        .vertices
        .iter()
        .map(|v| {
            v.labels
                .iter()
                .map(|l| vocab.parse_literal(l).with_context(|| format!("vertex {}", v.name)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SimplicialModel::new(complex, vocab, labels)?)
}

pub fn load_action(d: &ActionDoc, warnings: &mut Vec<String>) -> Result<ActionModel> {
    let agents = AgentSet::new(d.agents.iter().cloned())?;
    let names: Vec<String> = d.points.iter().map(|p| p.name.clone()).collect();
    let frame = relations(&agents, &names, &d.relations, warnings)?;
    let pre = d
        .points
        .iter()
        .map(|p| Formula::parse(&p.pre).with_context(|| format!("precondition of {}", p.name)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ActionModel::new(frame, pre)?)
}

/// Input and output of a task on the Kripke side.
fn as_kripke(doc: &Document, what: &str, warnings: &mut Vec<String>) -> Result<KripkeModel> {
    match load(doc, warnings).with_context(|| format!("task {what}"))? {
        Loaded::Kripke(m) => Ok(m),
        Loaded::Simplicial(sm) => Ok(simplicial_to_model(&sm)),
        other => bail!(
            "task {what} must be a kripke or simplicial document, got {}",
            other.kind()
        ),
    }
}

pub fn load_task(d: &TaskDoc, warnings: &mut Vec<String>) -> Result<TaskSpec> {
    let input = as_kripke(&d.input, "input", warnings)?;
    let output = as_kripke(&d.output, "output", warnings)?;
    if input.agents().names() != d.agents.as_slice() {
        bail!(
            "task agents {:?} differ from input agents {:?}",
            d.agents,
            input.agents().names()
        );
    }
    let mut delta = vec![Vec::new(); input.len()];
    for (s, t) in &d.delta {
        let s = input.frame().state_index(s).context("delta")?;
        let t = output.frame().state_index(t).context("delta")?;
        delta[s].push(t);
    }
    Ok(TaskSpec::new(input, output, delta)?)
}

fn emit_vocab(v: &Vocabulary, agents: &AgentSet) -> Vec<AtomDoc> {
    (0..v.len())
        .map(|p| AtomDoc {
            name: v.name(p).to_string(),
            owner: v.owner(p).map(|a| agents.name(a).to_string()),
        })
        .collect()
}

fn emit_relations(frame: &KripkeFrame) -> BTreeMap<String, Vec<(String, String)>> {
    frame
        .agents()
        .iter()
        .map(|a| {
            let mut pairs = Vec::new();
            for block in frame.relation(a).blocks() {
                for (i, &s) in block.iter().enumerate() {
                    for &t in &block[i + 1..] {
                        pairs.push((frame.state_name(s).to_string(), frame.state_name(t).to_string()));
                    }
                }
            }
            (frame.agents().name(a).to_string(), pairs)
        })
        .collect()
}

pub fn emit_kripke(m: &KripkeModel) -> KripkeDoc {
    let frame = m.frame();
    KripkeDoc {
        kind: Tag,
        agents: m.agents().names().to_vec(),
        ap: emit_vocab(m.vocab(), m.agents()),
        states: (0..m.len())
            .map(|s| StateDoc {
                name: frame.state_name(s).to_string(),
                holds: (0..m.vocab().len())
                    .filter(|&p| m.valuation(s).0[p])
                    .map(|p| m.vocab().name(p).to_string())
                    .collect(),
            })
            .collect(),
        relations: emit_relations(frame),
    }
}

pub fn emit_simplicial(sm: &SimplicialModel) -> SimplicialDoc {
    let c = sm.complex();
    SimplicialDoc {
        kind: Tag,
        agents: c.agents().names().to_vec(),
        ap: emit_vocab(sm.vocab(), c.agents()),
        vertices: c
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, Vertex { name, color })| VertexDoc {
                name: name.clone(),
                agent: c.agents().name(*color).to_string(),
                labels: sm.label_names(i),
            })
            .collect(),
        facets: c
            .facets()
            .iter()
            .map(|f| f.iter().map(|&v| c.vertex(v).name.clone()).collect())
            .collect(),
    }
}

pub fn emit_action(a: &ActionModel) -> ActionDoc {
    ActionDoc {
        kind: Tag,
        agents: a.agents().names().to_vec(),
        points: (0..a.len())
            .map(|p| PointDoc {
                name: a.point_name(p).to_string(),
                pre: a.precondition(p).to_string(),
            })
            .collect(),
        relations: emit_relations(a.frame()),
    }
}

pub fn emit_task(t: &TaskSpec) -> TaskDoc {
    TaskDoc {
        kind: Tag,
        agents: t.input.agents().names().to_vec(),
        input: Box::new(Document::Kripke(emit_kripke(&t.input))),
        output: Box::new(Document::Kripke(emit_kripke(&t.output))),
        delta: t
            .pairs()
            .iter()
            .map(|&(s, o)| {
                (
                    t.input.frame().state_name(s).to_string(),
                    t.output.frame().state_name(o).to_string(),
                )
            })
            .collect(),
    }
}

pub fn emit(l: &Loaded) -> Document {
    match l {
        Loaded::Kripke(m) => Document::Kripke(emit_kripke(m)),
        Loaded::Simplicial(sm) => Document::Simplicial(emit_simplicial(sm)),
        Loaded::Action(a) => Document::Action(emit_action(a)),
        Loaded::Task(t) => Document::Task(emit_task(t)),
    }
}

fn sort_pairs(rel: &mut BTreeMap<String, Vec<(String, String)>>) {
    for pairs in rel.values_mut() {
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                std::mem::swap(&mut p.0, &mut p.1);
            }
        }
        pairs.sort();
        pairs.dedup();
    }
}

/// Name-sorted states, points and pairs; vertices by (agent, name). The
/// result depends only on the validated content, not on input order.
pub fn canonicalize(doc: &mut Document) {
    match doc {
        Document::Kripke(d) => {
            d.states.sort_by(|a, b| a.name.cmp(&b.name));
            sort_pairs(&mut d.relations);
        }
        Document::Simplicial(d) => {
            let rank: HashMap<&String, usize> = d.agents.iter().enumerate().map(|(i, a)| (a, i)).collect();
            d.vertices
                .sort_by(|a, b| (rank[&a.agent], &a.name).cmp(&(rank[&b.agent], &b.name)));
            d.facets.sort();
        }
        Document::Action(d) => {
            d.points.sort_by(|a, b| a.name.cmp(&b.name));
            sort_pairs(&mut d.relations);
        }
        Document::Task(d) => {
            canonicalize(&mut d.input);
            canonicalize(&mut d.output);
            d.delta.sort();
        }
    }
}

pub fn to_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}
