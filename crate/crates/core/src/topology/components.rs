use crate::agents::Agent;
use crate::kripke::KripkeFrame;
use crate::logic::eval::group_components;
use crate::partition::Partition;
use crate::simplicial::ChromaticComplex;
use crate::unionfind::UnionFind;

/// Facets joined when they share a vertex whose color lies in `group`
/// (all colors when `None`).
pub fn complex_components(c: &ChromaticComplex, group: Option<&[Agent]>) -> Partition {
    let mut uf = UnionFind::new(c.num_facets());
    for v in 0..c.num_vertices() {
        if group.is_some_and(|g| !g.contains(&c.color(v))) {
            continue;
        }
        let fs = c.facets_containing(v).expect("vertex in range");
        for w in fs.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    Partition::from_labels(&uf.labels())
}

/// States joined by `∼_a` for `a` in `group` (all agents when `None`).
pub fn frame_components(frame: &KripkeFrame, group: Option<&[Agent]>) -> Partition {
    let all = frame.agents().all();
    Partition::from_labels(&group_components(frame, group.unwrap_or(&all)))
}
