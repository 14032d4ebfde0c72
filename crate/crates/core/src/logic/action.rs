use crate::agents::AgentSet;
use crate::error::{Error, Result};
use crate::kripke::{is_proper, product_model_on, product_on_pairs, FrameMorphism, KripkeFrame, KripkeModel};
use crate::logic::eval::Evaluator;
use crate::logic::formula::Formula;

/// Action points with per-agent indistinguishability and a precondition
/// per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionModel {
    frame: KripkeFrame,
    pre: Vec<Formula>,
}

impl ActionModel {
    pub fn new(frame: KripkeFrame, pre: Vec<Formula>) -> Result<Self> {
        if pre.len() != frame.len() {
            return Err(Error::InvalidModel(format!(
                "{} preconditions for {} action points",
                pre.len(),
                frame.len()
            )));
        }
        Ok(Self { frame, pre })
    }

    /// All preconditions `true`.
    pub fn uniform(frame: KripkeFrame) -> Self {
        let pre = vec![Formula::True; frame.len()];
        Self { frame, pre }
    }

    pub fn frame(&self) -> &KripkeFrame {
        &self.frame
    }

    pub fn agents(&self) -> &AgentSet {
        self.frame.agents()
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn precondition(&self, p: usize) -> &Formula {
        &self.pre[p]
    }

    pub fn preconditions(&self) -> &[Formula] {
        &self.pre
    }

    pub fn point_name(&self, p: usize) -> &str {
        self.frame.state_name(p)
    }
}

/// Result of `M ⊗ A`.
#[derive(Debug, Clone)]
pub struct ProductUpdate {
    pub model: KripkeModel,
    /// Projection onto the updated model's states.
    pub projection: FrameMorphism,
    /// Action point of each product state.
    pub points: Vec<usize>,
    /// False when some distinct product states are confused by every agent;
    /// see [`KripkeModel::quotient`].
    pub proper: bool,
}

/// Restricted modal product: pairs `(s, p)` with `M, s ⊨ pre(p)`, related
/// componentwise, valued as `s`.
pub fn product_update(m: &KripkeModel, action: &ActionModel) -> Result<ProductUpdate> {
    product_update_with(m, action, &Evaluator::new())
}

pub fn product_update_with(m: &KripkeModel, action: &ActionModel, ev: &Evaluator<'_>) -> Result<ProductUpdate> {
    m.agents().ensure_same(action.agents())?;
    let mut holds = Vec::with_capacity(action.len());
    for p in 0..action.len() {
        holds.push(ev.extension(m, &action.pre[p])?);
    }
    let pairs: Vec<(usize, usize)> = (0..m.len())
        .flat_map(|s| (0..action.len()).map(move |p| (s, p)))
        .filter(|&(s, p)| holds[p][s])
        .collect();
    if pairs.is_empty() {
        return Err(Error::EmptyProduct);
    }
    let frame = product_on_pairs(m.frame(), &action.frame, &pairs)?;
    let bare = KripkeModel::bare(action.frame.clone());
    let model = product_model_on(m, &bare, frame, &pairs)?;
    let proper = is_proper(model.frame());
    Ok(ProductUpdate {
        model,
        projection: FrameMorphism::new(pairs.iter().map(|p| p.0).collect()),
        points: pairs.iter().map(|p| p.1).collect(),
        proper,
    })
}
