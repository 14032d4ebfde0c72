use crate::agents::Agent;
use crate::error::{Error, Result};
use crate::kripke::{KripkeFrame, KripkeModel};
use crate::logic::eval::group_components;
use crate::partition::Partition;
use crate::vocab::Valuation;

/// The `∼_B`-component of `s`, in state order.
pub fn common_knowledge_class(frame: &KripkeFrame, group: &[Agent], s: usize) -> Result<Vec<usize>> {
    if group.is_empty() {
        return Err(Error::EmptyGroup);
    }
    if s >= frame.len() {
        return Err(Error::UnknownState(format!("#{s}")));
    }
    let labels = group_components(frame, group);
    Ok((0..frame.len()).filter(|&t| labels[t] == labels[s]).collect())
}

/// `M_B`: relations of agents outside `B` become the identity, and only
/// atoms owned by members of `B` are kept.
pub fn restrict_to_group(m: &KripkeModel, group: &[Agent]) -> Result<KripkeModel> {
    if group.is_empty() {
        return Err(Error::EmptyGroup);
    }
    m.vocab().require_owners()?;
    let frame = m.frame();
    let rel = frame
        .agents()
        .iter()
        .map(|a| {
            if group.contains(&a) {
                frame.relation(a).clone()
            } else {
                Partition::discrete(frame.len())
            }
        })
        .collect();
    let frame = KripkeFrame::new(frame.agents().clone(), frame.state_names().to_vec(), rel)?;
    let (vocab, kept) = m
        .vocab()
        .filter(|i| m.vocab().owner(i).is_some_and(|o| group.contains(&o)));
    let val = m
        .valuations()
        .iter()
        .map(|v| Valuation(kept.iter().map(|&i| v.0[i]).collect()))
        .collect();
    KripkeModel::new(frame, vocab, val)
}
