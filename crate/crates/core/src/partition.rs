use crate::unionfind::UnionFind;

/// A partition of `0..len` into equivalence classes.
///
/// Stored canonically: `block_of[x]` numbers classes in order of their
/// smallest member, and each class lists its members in increasing order.
/// Two partitions are equal iff they describe the same equivalence relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds from arbitrary per-element labels; equal labels mean same class.
    pub fn from_labels<L: Eq + std::hash::Hash + Clone>(labels: &[L]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let mut block_of = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, l) in labels.iter().enumerate() {
            let id = *ids.entry(l.clone()).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            block_of.push(id);
            blocks[id].push(x);
        }
        Self { block_of, blocks }
    }

    pub fn discrete(len: usize) -> Self {
        Self {
            block_of: (0..len).collect(),
            blocks: (0..len).map(|x| vec![x]).collect(),
        }
    }

    pub fn full(len: usize) -> Self {
        Self::from_labels(&vec![0u8; len])
    }

    /// Builds from explicit classes. Returns a human-readable complaint when
    /// the classes do not cover `0..len` exactly once.
    pub fn from_classes(len: usize, classes: &[Vec<usize>]) -> Result<Self, String> {
        let mut label = vec![usize::MAX; len];
        for (ci, class) in classes.iter().enumerate() {
            if class.is_empty() {
                return Err("partition has an empty class".into());
            }
            for &x in class {
                if x >= len {
                    return Err(format!("partition mentions element {x} outside 0..{len}"));
                }
                if label[x] != usize::MAX {
                    return Err(format!("partition lists element {x} twice"));
                }
                label[x] = ci;
            }
        }
        if let Some(x) = label.iter().position(|&l| l == usize::MAX) {
            return Err(format!("partition does not cover states (missing {x})"));
        }
        Ok(Self::from_labels(&label))
    }

    /// Equivalence closure of an edge list. The flag is true when closure
    /// added pairs beyond the given edges and their symmetric/reflexive ones.
    pub fn from_edges(len: usize, edges: &[(usize, usize)]) -> (Self, bool) {
        let mut uf = UnionFind::new(len);
        for &(a, b) in edges {
            uf.union(a, b);
        }
        let p = Self::from_labels(&uf.labels());
        let mut given = std::collections::HashSet::new();
        for &(a, b) in edges {
            if a != b {
                given.insert((a.min(b), a.max(b)));
            }
        }
        let implied: usize = p.blocks.iter().map(|b| b.len() * (b.len() - 1) / 2).sum();
        (p, implied > given.len())
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn class_of(&self, x: usize) -> &[usize] {
        &self.blocks[self.block_of[x]]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    /// The partition induced on a subset, re-indexed by position in `keep`.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let labels: Vec<usize> = keep.iter().map(|&x| self.block_of[x]).collect();
        Self::from_labels(&labels)
    }

    /// Edges chaining consecutive members of each nontrivial class; their
    /// closure is this partition.
    pub fn spanning_edges(&self) -> Vec<(usize, usize)> {
        self.blocks
            .iter()
            .flat_map(|b| b.windows(2).map(|w| (w[0], w[1])))
            .collect()
    }
}
