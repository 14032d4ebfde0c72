use std::collections::BTreeMap;

use crate::agents::Agent;
use crate::error::{Error, Result};
use crate::kripke::KripkeModel;
use crate::logic::action::{product_update_with, ActionModel};
use crate::logic::formula::Formula;
use crate::unionfind::UnionFind;

/// How `C_B` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CommonKnowledgeMode {
    /// Truth of the body across each `∼_B` component.
    #[default]
    Components,
    /// Greatest fixpoint of `X ↦ φ ∧ E_B X`.
    Fixpoint,
    /// Both; disagreement is reported as an error.
    CrossCheck,
}

/// Named action models that `[name] φ` refers to.
#[derive(Debug, Clone, Default)]
pub struct ActionLibrary {
    models: BTreeMap<String, ActionModel>,
}

impl ActionLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, model: ActionModel) {
        self.models.insert(name.into(), model);
    }

    pub fn get(&self, name: &str) -> Result<&ActionModel> {
        self.models
            .get(name)
            .ok_or_else(|| Error::UnknownAction(name.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Evaluator<'a> {
    actions: Option<&'a ActionLibrary>,
    mode: CommonKnowledgeMode,
}

impl<'a> Evaluator<'a> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_actions(mut self, actions: &'a ActionLibrary) -> Self {
        self.actions = Some(actions);
        self
    }

    pub fn with_mode(mut self, mode: CommonKnowledgeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn eval(&self, m: &KripkeModel, s: usize, f: &Formula) -> Result<bool> {
        if s >= m.len() {
            return Err(Error::UnknownState(format!("#{s}")));
        }
        Ok(self.extension(m, f)?[s])
    }

    /// Truth value of `f` at every state of `m`.
    pub fn extension(&self, m: &KripkeModel, f: &Formula) -> Result<Vec<bool>> {
        let n = m.len();
        Ok(match f {
            Formula::True => vec![true; n],
            Formula::Atom(p) => {
                let i = m.vocab().require(p)?;
                m.valuations().iter().map(|v| v.0[i]).collect()
            }
            Formula::Not(g) => self.extension(m, g)?.into_iter().map(|b| !b).collect(),
            Formula::And(a, b) => {
                let x = self.extension(m, a)?;
                let y = self.extension(m, b)?;
                x.into_iter().zip(y).map(|(p, q)| p && q).collect()
            }
            Formula::Knows(a, g) => {
                let a = m.agents().lookup(a)?;
                knows(m, a, &self.extension(m, g)?)
            }
            Formula::Everyone(group, g) => {
                let group = m.agents().group(group)?;
                everyone(m, &group, &self.extension(m, g)?)
            }
            Formula::Common(group, g) => {
                let group = m.agents().group(group)?;
                let body = self.extension(m, g)?;
                match self.mode {
                    CommonKnowledgeMode::Components => common_by_components(m, &group, &body),
                    CommonKnowledgeMode::Fixpoint => common_by_fixpoint(m, &group, &body),
                    CommonKnowledgeMode::CrossCheck => {
                        let x = common_by_components(m, &group, &body);
                        let y = common_by_fixpoint(m, &group, &body);
                        if let Some(s) = (0..n).find(|&s| x[s] != y[s]) {
                            return Err(Error::CommonKnowledgeMismatch(m.frame().state_name(s).to_string()));
                        }
                        x
                    }
                }
            }
            Formula::After(name, g) => {
                let lib = self.actions.ok_or_else(|| Error::UnknownAction(name.clone()))?;
                let action = lib.get(name)?;
                match product_update_with(m, action, self) {
                    Err(Error::EmptyProduct) => vec![true; n],
                    Err(e) => return Err(e),
                    Ok(update) => {
                        let inner = self.extension(&update.model, g)?;
                        let mut out = vec![true; n];
                        for (w, &s) in update.projection.map.iter().enumerate() {
                            out[s] &= inner[w];
                        }
                        out
                    }
                }
            }
        })
    }
}

/// Convenience: evaluate with default settings and no action library.
pub fn eval(m: &KripkeModel, s: usize, f: &Formula) -> Result<bool> {
    Evaluator::new().eval(m, s, f)
}

fn knows(m: &KripkeModel, a: Agent, body: &[bool]) -> Vec<bool> {
    let p = m.frame().relation(a);
    let class_true: Vec<bool> = p.blocks().iter().map(|b| b.iter().all(|&t| body[t])).collect();
    (0..m.len()).map(|s| class_true[p.block_of(s)]).collect()
}

fn everyone(m: &KripkeModel, group: &[Agent], body: &[bool]) -> Vec<bool> {
    let mut out = vec![true; m.len()];
    for &a in group {
        for (o, k) in out.iter_mut().zip(knows(m, a, body)) {
            *o &= k;
        }
    }
    out
}

/// `∼_B` components: the transitive closure of the union of `∼_a`, `a ∈ B`.
pub(crate) fn group_components(m: &crate::kripke::KripkeFrame, group: &[Agent]) -> Vec<usize> {
    let mut uf = UnionFind::new(m.len());
    for &a in group {
        for block in m.relation(a).blocks() {
            for w in block.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
    }
    uf.labels()
}

fn common_by_components(m: &KripkeModel, group: &[Agent], body: &[bool]) -> Vec<bool> {
    let labels = group_components(m.frame(), group);
    let k = labels.iter().copied().max().map_or(0, |x| x + 1);
    let mut comp_true = vec![true; k];
    for (s, &l) in labels.iter().enumerate() {
        comp_true[l] &= body[s];
    }
    labels.iter().map(|&l| comp_true[l]).collect()
}

fn common_by_fixpoint(m: &KripkeModel, group: &[Agent], body: &[bool]) -> Vec<bool> {
    let mut current = vec![true; m.len()];
    loop {
        let next: Vec<bool> = everyone(m, group, &current)
            .into_iter()
            .zip(body)
            .map(|(e, &b)| e && b)
            .collect();
        if next == current {
            return current;
        }
        current = next;
    }
}
