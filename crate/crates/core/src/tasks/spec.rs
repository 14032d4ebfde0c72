use crate::agents::Agent;
use crate::equivalence::{frame_to_complex, model_to_simplicial, simplicial_to_model, transport_frame_morphism};
use crate::error::{Error, Result};
use crate::kripke::{product_model_on, product_on_pairs, FrameMorphism, KripkeModel};
use crate::report::ValidationReport;
use crate::simplicial::{ChromaticComplex, ChromaticMap, SimplicialModel};

/// Input model, output model, and `Δ` as the list of admissible output
/// states of each input state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskSpec {
    pub input: KripkeModel,
    pub output: KripkeModel,
    pub delta: Vec<Vec<usize>>,
}

impl TaskSpec {
    /// Checks shapes and index ranges only; see [`validate_carrier`].
    pub fn new(input: KripkeModel, output: KripkeModel, delta: Vec<Vec<usize>>) -> Result<Self> {
        input.agents().ensure_same(output.agents())?;
        if delta.len() != input.len() {
            return Err(Error::InvalidTask(format!(
                "delta has {} entries for {} input states",
                delta.len(),
                input.len()
            )));
        }
        let mut delta = delta;
        for (s, d) in delta.iter_mut().enumerate() {
            if let Some(&t) = d.iter().find(|&&t| t >= output.len()) {
                return Err(Error::InvalidTask(format!(
                    "delta({}) refers to output #{t}, output has {} states",
                    input.frame().state_name(s),
                    output.len()
                )));
            }
            d.sort_unstable();
            d.dedup();
        }
        Ok(Self { input, output, delta })
    }

    /// Simplicial form: `delta[f]` lists output facets for input facet `f`.
    pub fn from_simplicial(input: &SimplicialModel, output: &SimplicialModel, delta: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(simplicial_to_model(input), simplicial_to_model(output), delta)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(s, d)| d.iter().map(move |&t| (s, t)))
            .collect()
    }
}

/// Nonemptiness of each `Δ(s)` and the carrier condition: whenever
/// `u ∼_a v`, some `u' ∈ Δ(u)` and `v' ∈ Δ(v)` satisfy `u' ∼_a v'`.
pub fn validate_carrier(task: &TaskSpec) -> ValidationReport {
    let mut report = ValidationReport::new();
    let i = task.input.frame();
    let o = task.output.frame();
    for (s, d) in task.delta.iter().enumerate() {
        if d.is_empty() {
            report.error(format!("delta({}) is empty", i.state_name(s)));
        }
    }
    for a in i.agents().iter() {
        for u in 0..i.len() {
            for v in u + 1..i.len() {
                if !i.related(a, u, v) {
                    continue;
                }
                let ok = task.delta[u]
                    .iter()
                    .any(|&x| task.delta[v].iter().any(|&y| o.related(a, x, y)));
                if !ok {
                    report.error(format!(
                        "carrier condition fails for ({}, {}, {})",
                        i.state_name(u),
                        i.state_name(v),
                        i.agents().name(a)
                    ));
                }
            }
        }
    }
    report
}

/// `Δ*`: the sub-model of `I × O` on Δ-related pairs.
#[derive(Debug, Clone)]
pub struct DeltaSubmodel {
    pub model: KripkeModel,
    pub pairs: Vec<(usize, usize)>,
    pub to_input: FrameMorphism,
    pub to_output: FrameMorphism,
}

pub fn build_delta_submodel(task: &TaskSpec) -> Result<DeltaSubmodel> {
    let pairs = task.pairs();
    if pairs.is_empty() {
        return Err(Error::InvalidTask("delta is empty".into()));
    }
    let frame = product_on_pairs(task.input.frame(), task.output.frame(), &pairs)?;
    let model = product_model_on(&task.input, &task.output, frame, &pairs)?;
    Ok(DeltaSubmodel {
        model,
        to_input: FrameMorphism::new(pairs.iter().map(|p| p.0).collect()),
        to_output: FrameMorphism::new(pairs.iter().map(|p| p.1).collect()),
        pairs,
    })
}

/// The task moved to the simplicial side. Facet `f` of `delta` is state `f`
/// of `Δ*`; facets of `input` and `output` follow their state order.
#[derive(Debug, Clone)]
pub struct SimplicialTask {
    pub input: SimplicialModel,
    pub output: SimplicialModel,
    pub delta: ChromaticComplex,
    pub delta_to_input: ChromaticMap,
    pub delta_to_output: ChromaticMap,
    pub submodel: DeltaSubmodel,
}

impl SimplicialTask {
    pub fn new(task: &TaskSpec) -> Result<Self> {
        let sub = build_delta_submodel(task)?;
        let input = model_to_simplicial(&task.input)?;
        let output = model_to_simplicial(&task.output)?;
        let delta = frame_to_complex(sub.model.frame())?;
        let delta_to_input = transport_frame_morphism(&sub.to_input, sub.model.frame(), task.input.frame())?;
        let delta_to_output = transport_frame_morphism(&sub.to_output, sub.model.frame(), task.output.frame())?;
        Ok(Self {
            input,
            output,
            delta,
            delta_to_input,
            delta_to_output,
            submodel: sub,
        })
    }

    /// Input facets `f` with `Δ(f) ∋ g`, as output facet lists.
    pub fn admissible(&self, input_facet: usize) -> Vec<usize> {
        self.submodel
            .pairs
            .iter()
            .filter(|p| p.0 == input_facet)
            .map(|p| p.1)
            .collect()
    }

    pub fn color_of_delta_vertex(&self, v: usize) -> Agent {
        self.delta.color(v)
    }
}
