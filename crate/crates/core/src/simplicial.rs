//! Pure chromatic simplicial complexes and simplicial models.
//!
//! A complex is stored by its facets only. Because every facet carries
//! exactly one vertex per agent, a facet is kept as a color-indexed vertex
//! array: `facet[a]` is the vertex of color `a`.

use std::collections::HashMap;

use crate::agents::{Agent, AgentSet};
use crate::error::{Error, Result};
use crate::report::ValidationReport;
use crate::vocab::{Literal, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub name: String,
    pub color: Agent,
}

/// Unvalidated complex: vertices as `(name, color name)`, facets as lists
/// of vertex names in any order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexDescription {
    pub agents: Vec<String>,
    pub vertices: Vec<(String, String)>,
    pub facets: Vec<Vec<String>>,
}

pub fn validate_complex(desc: &ComplexDescription) -> ValidationReport {
    let mut report = ValidationReport::new();
    let agents = match AgentSet::new(desc.agents.iter().cloned()) {
        Ok(a) => a,
        Err(e) => {
            report.error(e.to_string());
            return report;
        }
    };
    let mut index = HashMap::new();
    let mut colors = Vec::new();
    for (i, (name, color)) in desc.vertices.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            report.error(format!("duplicate vertex {name}"));
        }
        match agents.lookup(color) {
            Ok(a) => colors.push(Some(a)),
            Err(_) => {
                report.error(format!("vertex {name} has unknown color {color}"));
                colors.push(None)
            }
        }
    }
    if desc.facets.is_empty() {
        report.error("complex has no facets");
    }
    let mut used = vec![false; desc.vertices.len()];
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut sizes = std::collections::BTreeSet::new();
    let mut keyed: Vec<Vec<usize>> = Vec::new();
    for (fi, facet) in desc.facets.iter().enumerate() {
        let mut ids = Vec::new();
        for v in facet {
            match index.get(v.as_str()) {
                Some(&i) => {
                    ids.push(i);
                    used[i] = true;
                }
                None => report.error(format!("facet {fi} mentions unknown vertex {v}")),
            }
        }
        sizes.insert(facet.len());
        if facet.len() != agents.len() {
            report.error(format!(
                "facet {fi} has {} vertices, expected {} (not pure)",
                facet.len(),
                agents.len()
            ));
        }
        let mut cs: Vec<Option<Agent>> = ids.iter().map(|&i| colors[i]).collect();
        cs.sort();
        if cs.windows(2).any(|w| w[0] == w[1] && w[0].is_some()) {
            report.error(format!("facet {fi} repeats a color (not chromatic)"));
        }
        ids.sort_unstable();
        ids.dedup();
        if let Some(prev) = seen.insert(ids.clone(), fi) {
            report.warn(format!("facet {fi} duplicates facet {prev}"));
        }
        keyed.push(ids);
    }
    if sizes.len() > 1 {
        report.error(format!("facets of mixed sizes {sizes:?}"));
    }
    for (i, a) in keyed.iter().enumerate() {
        for (j, b) in keyed.iter().enumerate() {
            if i != j && a.len() < b.len() && a.iter().all(|x| b.contains(x)) {
                report.error(format!("facet {i} is a face of facet {j}"));
            }
        }
    }
    for (i, u) in used.iter().enumerate() {
        if !u {
            report.error(format!("vertex {} lies in no facet", desc.vertices[i].0));
        }
    }
    report
}

#[derive(Debug, Clone)]
pub struct ChromaticComplex {
    agents: AgentSet,
    vertices: Vec<Vertex>,
    facets: Vec<Vec<usize>>,
    facet_index: HashMap<Vec<usize>, usize>,
    incidence: Vec<Vec<usize>>,
    warnings: Vec<String>,
}

impl PartialEq for ChromaticComplex {
    fn eq(&self, other: &Self) -> bool {
        self.agents == other.agents && self.vertices == other.vertices && self.facets == other.facets
    }
}

impl Eq for ChromaticComplex {}

impl ChromaticComplex {
    /// Facets may list their vertices in any order. Duplicate facets are
    /// dropped with a warning; every other invariant violation is an error.
    pub fn new(agents: AgentSet, vertices: Vec<Vertex>, facets: Vec<Vec<usize>>) -> Result<Self> {
        let n = agents.len();
        if facets.is_empty() {
            return Err(Error::InvalidComplex("complex has no facets".into()));
        }
        if let Some(v) = vertices.iter().find(|v| v.color.0 >= n) {
            return Err(Error::InvalidComplex(format!("vertex {} has no valid color", v.name)));
        }
        let mut names = std::collections::HashSet::new();
        if let Some(v) = vertices.iter().find(|v| !names.insert(v.name.as_str())) {
            return Err(Error::InvalidComplex(format!("duplicate vertex {}", v.name)));
        }
        let mut stored = Vec::with_capacity(facets.len());
        let mut facet_index = HashMap::new();
        let mut warnings = Vec::new();
        for (fi, f) in facets.into_iter().enumerate() {
            if f.len() != n {
                return Err(Error::InvalidComplex(format!(
                    "facet {fi} has {} vertices, expected {n} (not pure)",
                    f.len()
                )));
            }
            let mut arr = vec![usize::MAX; n];
            for &v in &f {
                let vx = vertices
                    .get(v)
                    .ok_or_else(|| Error::InvalidComplex(format!("facet {fi} mentions vertex {v}")))?;
                if arr[vx.color.0] != usize::MAX {
                    return Err(Error::InvalidComplex(format!(
                        "facet {fi} repeats color {}",
                        agents.name(vx.color)
                    )));
                }
                arr[vx.color.0] = v;
            }
            if facet_index.contains_key(&arr) {
                warnings.push(format!("dropped duplicate facet {fi}"));
                continue;
            }
            facet_index.insert(arr.clone(), stored.len());
            stored.push(arr);
        }
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (fi, f) in stored.iter().enumerate() {
            for &v in f {
                incidence[v].push(fi);
            }
        }
        if let Some(v) = incidence.iter().position(Vec::is_empty) {
            return Err(Error::InvalidComplex(format!(
                "vertex {} lies in no facet",
                vertices[v].name
            )));
        }
        Ok(Self {
            agents,
            vertices,
            facets: stored,
            facet_index,
            incidence,
            warnings,
        })
    }

    pub fn from_description(desc: &ComplexDescription) -> Result<Self> {
        let report = validate_complex(desc);
        if !report.is_ok() {
            return Err(Error::InvalidComplex(report.errors.join("; ")));
        }
        let agents = AgentSet::new(desc.agents.iter().cloned())?;
        let index: HashMap<&str, usize> = desc
            .vertices
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (n.as_str(), i))
            .collect();
        let vertices = desc
            .vertices
            .iter()
            .map(|(name, color)| {
                Ok(Vertex {
                    name: name.clone(),
                    color: agents.lookup(color)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let facets = desc
            .facets
            .iter()
            .map(|f| f.iter().map(|v| index[v.as_str()]).collect())
            .collect();
        Self::new(agents, vertices, facets)
    }

    pub fn to_description(&self) -> ComplexDescription {
        ComplexDescription {
            agents: self.agents.names().to_vec(),
            vertices: self
                .vertices
                .iter()
                .map(|v| (v.name.clone(), self.agents.name(v.color).to_string()))
                .collect(),
            facets: self
                .facets
                .iter()
                .map(|f| f.iter().map(|&v| self.vertices[v].name.clone()).collect())
                .collect(),
        }
    }

    pub fn agents(&self) -> &AgentSet {
        &self.agents
    }

    /// Dimension of every facet.
    pub fn dimension(&self) -> usize {
        self.agents.len() - 1
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn color(&self, v: usize) -> Agent {
        self.vertices[v].color
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn facet(&self, f: usize) -> &[usize] {
        &self.facets[f]
    }

    /// Index of the facet with these color-indexed vertices.
    pub fn find_facet(&self, colored: &[usize]) -> Option<usize> {
        self.facet_index.get(colored).copied()
    }

    /// Index of the facet with these vertices, in any order.
    pub fn find_facet_unordered(&self, vertices: &[usize]) -> Option<usize> {
        if vertices.len() != self.agents.len() {
            return None;
        }
        let mut arr = vec![usize::MAX; self.agents.len()];
        for &v in vertices {
            let c = self.vertices.get(v)?.color.0;
            if arr[c] != usize::MAX {
                return None;
            }
            arr[c] = v;
        }
        self.find_facet(&arr)
    }

    pub fn facets_containing(&self, v: usize) -> Result<&[usize]> {
        self.incidence
            .get(v)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownVertex(format!("#{v}")))
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Facet names as `[x,y,...]`, the state names used by the Kripke side.
    pub fn facet_name(&self, f: usize) -> String {
        let names: Vec<&str> = self.facets[f].iter().map(|&v| self.vertices[v].name.as_str()).collect();
        format!("[{}]", names.join(","))
    }

    /// Subcomplex generated by the listed facets, vertices renumbered in
    /// order of first use. Returns the complex and the old id of each new vertex.
    pub fn restrict_facets(&self, keep: &[usize]) -> Result<(ChromaticComplex, Vec<usize>)> {
        let mut new_id = vec![usize::MAX; self.vertices.len()];
        let mut old = Vec::new();
        let mut facets = Vec::with_capacity(keep.len());
        for &f in keep {
            let mut nf = Vec::with_capacity(self.agents.len());
            for &v in &self.facets[f] {
                if new_id[v] == usize::MAX {
                    new_id[v] = old.len();
                    old.push(v);
                }
                nf.push(new_id[v]);
            }
            facets.push(nf);
        }
        let vertices = old.iter().map(|&v| self.vertices[v].clone()).collect();
        Ok((ChromaticComplex::new(self.agents.clone(), vertices, facets)?, old))
    }

    /// Disjoint union; vertex names of `other` get `suffix` appended.
    pub fn disjoint_union(&self, other: &ChromaticComplex, suffix: &str) -> Result<ChromaticComplex> {
        self.agents.ensure_same(&other.agents)?;
        let off = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().map(|v| Vertex {
            name: format!("{}{suffix}", v.name),
            color: v.color,
        }));
        let mut facets = self.facets.clone();
        facets.extend(other.facets.iter().map(|f| f.iter().map(|&v| v + off).collect()));
        ChromaticComplex::new(self.agents.clone(), vertices, facets)
    }

    /// Applies a vertex permutation (`perm[old] = new`) and reorders facets
    /// by `facet_order` (list of old facet indices).
    pub fn permuted(&self, perm: &[usize], facet_order: &[usize]) -> Result<ChromaticComplex> {
        let mut vertices = vec![
            Vertex {
                name: String::new(),
                color: Agent(0)
            };
            self.vertices.len()
        ];
        for (old, &new) in perm.iter().enumerate() {
            vertices[new] = self.vertices[old].clone();
        }
        let facets = facet_order
            .iter()
            .map(|&f| self.facets[f].iter().map(|&v| perm[v]).collect())
            .collect();
        ChromaticComplex::new(self.agents.clone(), vertices, facets)
    }

    /// Vertex order by (color, name), facets sorted lexicographically.
    /// Returns the canonical complex and `perm[old] = new`.
    pub fn canonicalize(&self) -> (ChromaticComplex, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| {
            (self.vertices[a].color, &self.vertices[a].name).cmp(&(self.vertices[b].color, &self.vertices[b].name))
        });
        let mut perm = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        let mut facets: Vec<Vec<usize>> = self
            .facets
            .iter()
            .map(|f| f.iter().map(|&v| perm[v]).collect())
            .collect();
        facets.sort();
        let vertices = order.iter().map(|&v| self.vertices[v].clone()).collect();
        let c = ChromaticComplex::new(self.agents.clone(), vertices, facets).expect("canonicalization keeps validity");
        (c, perm)
    }
}

/// A complex with a partial literal set on each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialModel {
    complex: ChromaticComplex,
    vocab: Vocabulary,
    labels: Vec<Vec<Literal>>,
}

impl SimplicialModel {
    /// Requires, per facet, a consistent and AP-maximal union of vertex literals.
    pub fn new(complex: ChromaticComplex, vocab: Vocabulary, labels: Vec<Vec<Literal>>) -> Result<Self> {
        if labels.len() != complex.num_vertices() {
            return Err(Error::InvalidModel(format!(
                "{} label sets for {} vertices",
                labels.len(),
                complex.num_vertices()
            )));
        }
        let mut labels = labels;
        for l in labels.iter_mut() {
            if l.iter().any(|x| x.atom >= vocab.len()) {
                return Err(Error::InvalidModel("literal outside the vocabulary".into()));
            }
            l.sort();
            l.dedup();
        }
        let model = Self { complex, vocab, labels };
        let report = model.validate();
        if !report.is_ok() {
            return Err(Error::InvalidModel(report.errors.join("; ")));
        }
        Ok(model)
    }

    pub fn bare(complex: ChromaticComplex) -> Self {
        let labels = vec![Vec::new(); complex.num_vertices()];
        Self {
            complex,
            vocab: Vocabulary::empty(),
            labels,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for f in 0..self.complex.num_facets() {
            let mut val: Vec<Option<bool>> = vec![None; self.vocab.len()];
            for &v in self.complex.facet(f) {
                for l in &self.labels[v] {
                    match val[l.atom] {
                        Some(b) if b != l.positive => report.error(format!(
                            "facet {} is inconsistent on {}",
                            self.complex.facet_name(f),
                            self.vocab.name(l.atom)
                        )),
                        _ => val[l.atom] = Some(l.positive),
                    }
                }
            }
            for (i, b) in val.iter().enumerate() {
                if b.is_none() {
                    report.error(format!(
                        "facet {} does not decide {}",
                        self.complex.facet_name(f),
                        self.vocab.name(i)
                    ));
                }
            }
        }
        report
    }

    pub fn complex(&self) -> &ChromaticComplex {
        &self.complex
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn labels(&self, v: usize) -> &[Literal] {
        &self.labels[v]
    }

    pub fn all_labels(&self) -> &[Vec<Literal>] {
        &self.labels
    }

    pub fn label_names(&self, v: usize) -> Vec<String> {
        self.labels[v].iter().map(|&l| self.vocab.fmt_literal(l)).collect()
    }

    /// Truth values on a facet (the union of its vertex labels).
    pub fn facet_valuation(&self, f: usize) -> crate::vocab::Valuation {
        let mut val = vec![false; self.vocab.len()];
        for &v in self.complex.facet(f) {
            for l in &self.labels[v] {
                val[l.atom] = l.positive;
            }
        }
        crate::vocab::Valuation(val)
    }

    pub fn canonicalize(&self) -> (SimplicialModel, Vec<usize>) {
        let (complex, perm) = self.complex.canonicalize();
        let mut labels = vec![Vec::new(); self.labels.len()];
        for (old, &new) in perm.iter().enumerate() {
            labels[new] = self.labels[old].clone();
        }
        (
            SimplicialModel {
                complex,
                vocab: self.vocab.clone(),
                labels,
            },
            perm,
        )
    }
}

/// A total vertex map between complexes over the same colors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChromaticMap {
    pub map: Vec<usize>,
}

impl ChromaticMap {
    pub fn new(map: Vec<usize>) -> Self {
        Self { map }
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).collect())
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChromaticMap) -> ChromaticMap {
        ChromaticMap::new(self.map.iter().map(|&v| other.map[v]).collect())
    }

    /// Image of facet `f` of `source`, as a facet index of `target`.
    pub fn facet_image(&self, source: &ChromaticComplex, target: &ChromaticComplex, f: usize) -> Option<usize> {
        let img: Vec<usize> = source.facet(f).iter().map(|&v| self.map[v]).collect();
        target.find_facet(&img)
    }
}

/// Color preservation plus facets mapping onto facets.
pub fn is_chromatic_map(map: &[usize], source: &ChromaticComplex, target: &ChromaticComplex) -> Result<bool> {
    source.agents.ensure_same(&target.agents)?;
    crate::kripke::check_total(map, source.num_vertices(), target.num_vertices())?;
    if (0..source.num_vertices()).any(|v| source.color(v) != target.color(map[v])) {
        return Ok(false);
    }
    let m = ChromaticMap::new(map.to_vec());
    Ok((0..source.num_facets()).all(|f| m.facet_image(source, target, f).is_some()))
}

/// Cartesian product in the chromatic category: vertices are equal-color
/// pairs, facets pair up facets color by color.
pub fn complex_product(
    k: &ChromaticComplex,
    l: &ChromaticComplex,
) -> Result<(ChromaticComplex, ChromaticMap, ChromaticMap)> {
    let pairs: Vec<(usize, usize)> = (0..k.num_facets())
        .flat_map(|x| (0..l.num_facets()).map(move |y| (x, y)))
        .collect();
    product_on_facet_pairs(k, l, &pairs)
}

/// Subcomplex of `k × l` generated by the listed facet pairs.
pub fn product_on_facet_pairs(
    k: &ChromaticComplex,
    l: &ChromaticComplex,
    pairs: &[(usize, usize)],
) -> Result<(ChromaticComplex, ChromaticMap, ChromaticMap)> {
    k.agents.ensure_same(&l.agents)?;
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut pi_k = Vec::new();
    let mut pi_l = Vec::new();
    let mut facets = Vec::with_capacity(pairs.len());
    for &(x, y) in pairs {
        let fx = k.facet(x);
        let fy = l.facet(y);
        let facet: Vec<usize> = (0..k.agents.len())
            .map(|c| {
                *ids.entry((fx[c], fy[c])).or_insert_with(|| {
                    vertices.push(Vertex {
                        name: format!("({},{})", k.vertices[fx[c]].name, l.vertices[fy[c]].name),
                        color: Agent(c),
                    });
                    pi_k.push(fx[c]);
                    pi_l.push(fy[c]);
                    vertices.len() - 1
                })
            })
            .collect();
        facets.push(facet);
    }
    let c = ChromaticComplex::new(k.agents.clone(), vertices, facets)?;
    Ok((c, ChromaticMap::new(pi_k), ChromaticMap::new(pi_l)))
}
