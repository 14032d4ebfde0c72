//! The equivalence between proper Kripke frames/models and pure chromatic
//! simplicial complexes/models.
//!
//! `complex_to_frame` takes facets to states, with `X ∼_a Y` iff the
//! `a`-colored vertices of `X` and `Y` coincide. `frame_to_complex` goes
//! back by allocating one `a`-colored vertex per `∼_a`-class, so the facet
//! of state `s` is the tuple of its classes.

use crate::agents::Agent;
use crate::error::{Error, Result};
use crate::kripke::{is_morphism, is_proper, FrameMorphism, KripkeFrame, KripkeModel};
use crate::partition::Partition;
use crate::simplicial::{is_chromatic_map, ChromaticComplex, ChromaticMap, SimplicialModel, Vertex};
use crate::vocab::{Literal, Valuation};

/// Functor F on objects.
pub fn complex_to_frame(c: &ChromaticComplex) -> KripkeFrame {
    let states = (0..c.num_facets()).map(|f| c.facet_name(f)).collect();
    let rel = c
        .agents()
        .iter()
        .map(|a| {
            let labels: Vec<usize> = c.facets().iter().map(|f| f[a.0]).collect();
            Partition::from_labels(&labels)
        })
        .collect();
    KripkeFrame::new(c.agents().clone(), states, rel).expect("a valid complex yields a valid frame")
}

/// Vertex id of the `a`-colored vertex of state `s`'s facet in `frame_to_complex`.
fn vertex_ids(frame: &KripkeFrame) -> Vec<Vec<usize>> {
    let mut offset = 0;
    frame
        .agents()
        .iter()
        .map(|a| {
            let p = frame.relation(a);
            let ids = (0..frame.len()).map(|s| offset + p.block_of(s)).collect();
            offset += p.num_blocks();
            ids
        })
        .collect()
}

/// Functor G on objects. Fails on non-proper frames, whose facets would
/// collapse onto each other.
pub fn frame_to_complex(frame: &KripkeFrame) -> Result<ChromaticComplex> {
    if let Some((s, t)) = frame.improper_pair() {
        return Err(Error::NotProper(
            frame.state_name(s).to_string(),
            frame.state_name(t).to_string(),
        ));
    }
    let ids = vertex_ids(frame);
    let mut vertices = Vec::new();
    for a in frame.agents().iter() {
        for class in frame.relation(a).blocks() {
            vertices.push(Vertex {
                name: vertex_name(frame, a, class),
                color: a,
            });
        }
    }
    let facets = (0..frame.len())
        .map(|s| frame.agents().iter().map(|a| ids[a.0][s]).collect())
        .collect();
    ChromaticComplex::new(frame.agents().clone(), vertices, facets)
}

fn vertex_name(frame: &KripkeFrame, a: Agent, class: &[usize]) -> String {
    let members: Vec<&str> = class.iter().map(|&s| frame.state_name(s)).collect();
    format!("{}:{}", frame.agents().name(a), members.join("|"))
}

/// G on morphisms: the `a`-vertex of class `c` goes to the `a`-vertex of
/// the class of `f(s)` for any `s ∈ c`.
pub fn transport_frame_morphism(f: &FrameMorphism, source: &KripkeFrame, target: &KripkeFrame) -> Result<ChromaticMap> {
    if !is_morphism(&f.map, source, target)? {
        return Err(Error::InvalidMorphism("not a frame morphism".into()));
    }
    if !is_proper(source) || !is_proper(target) {
        return Err(Error::InvalidMorphism("frames must be proper".into()));
    }
    let src_ids = vertex_ids(source);
    let tgt_ids = vertex_ids(target);
    let total: usize = source.relations().iter().map(Partition::num_blocks).sum();
    let mut map = vec![usize::MAX; total];
    for a in source.agents().iter() {
        for s in 0..source.len() {
            map[src_ids[a.0][s]] = tgt_ids[a.0][f.map[s]];
        }
    }
    Ok(ChromaticMap::new(map))
}

/// F on morphisms: facet `X` goes to the facet `g(X)`.
pub fn transport_chromatic_map(
    g: &ChromaticMap,
    source: &ChromaticComplex,
    target: &ChromaticComplex,
) -> Result<FrameMorphism> {
    if !is_chromatic_map(&g.map, source, target)? {
        return Err(Error::InvalidMorphism("not a chromatic map".into()));
    }
    let map = (0..source.num_facets())
        .map(|f| g.facet_image(source, target, f).expect("checked above"))
        .collect();
    Ok(FrameMorphism::new(map))
}

/// Lifts G to models. Each atom must be owned by an agent, and an agent's
/// atoms must be constant on its indistinguishability classes; vertex
/// `(a, class)` then carries the `a`-owned literals.
pub fn model_to_simplicial(m: &KripkeModel) -> Result<SimplicialModel> {
    m.vocab().require_owners()?;
    let frame = m.frame();
    let complex = frame_to_complex(frame)?;
    let mut labels = vec![Vec::new(); complex.num_vertices()];
    let ids = vertex_ids(frame);
    for a in frame.agents().iter() {
        let owned: Vec<usize> = m.vocab().atoms_owned_by(a).collect();
        for class in frame.relation(a).blocks() {
            let rep = class[0];
            for &s in class {
                if owned.iter().any(|&p| m.valuation(s).0[p] != m.valuation(rep).0[p]) {
                    return Err(Error::NotAgentLocal {
                        state: frame.state_name(s).to_string(),
                        agent: frame.agents().name(a).to_string(),
                    });
                }
            }
            labels[ids[a.0][rep]] = owned.iter().map(|&p| Literal::new(p, m.valuation(rep).0[p])).collect();
        }
    }
    SimplicialModel::new(complex, m.vocab().clone(), labels)
}

/// Lifts F to models: states are facets, valued by the union of their
/// vertex labels.
pub fn simplicial_to_model(sm: &SimplicialModel) -> KripkeModel {
    let frame = complex_to_frame(sm.complex());
    let val: Vec<Valuation> = (0..sm.complex().num_facets()).map(|f| sm.facet_valuation(f)).collect();
    KripkeModel::new(frame, sm.vocab().clone(), val).expect("facet valuations are maximal")
}

/// Chromatic map of simplicial models obtained from a model morphism.
pub fn transport_model_morphism(f: &FrameMorphism, source: &KripkeModel, target: &KripkeModel) -> Result<ChromaticMap> {
    if !crate::kripke::is_model_morphism(&f.map, source, target)? {
        return Err(Error::InvalidMorphism("not a model morphism".into()));
    }
    transport_frame_morphism(f, source.frame(), target.frame())
}
