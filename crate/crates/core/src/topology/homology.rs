//! Simplicial chains in dimensions 0, 1, 2 and the ranks that give `β_0`,
//! `β_1` and induced maps on `H_1`.
//!
//! Matrices are stored as sparse columns and reduced by the usual
//! lowest-pivot column elimination.

use std::collections::HashMap;
use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::simplicial::{ChromaticComplex, ChromaticMap};
use crate::topology::field::{Field, Gf2};

/// Sparse vector: `(index, nonzero coefficient)` sorted by index.
pub type SparseVec<F> = Vec<(usize, F)>;

/// `y + c·x`.
fn axpy<F: Field>(y: &[(usize, F)], c: &F, x: &[(usize, F)]) -> SparseVec<F> {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        let take_y = j == x.len() || (i < y.len() && y[i].0 < x[j].0);
        let take_x = i == y.len() || (j < x.len() && x[j].0 < y[i].0);
        if take_y {
            out.push(y[i].clone());
            i += 1;
        } else if take_x {
            out.push((x[j].0, c.clone() * x[j].1.clone()));
            j += 1;
        } else {
            let v = y[i].1.clone() + c.clone() * x[j].1.clone();
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Column reduction. With `track`, also records for every column the
/// combination of original columns it was reduced to.
struct Reduced<F> {
    cols: Vec<SparseVec<F>>,
    combos: Vec<SparseVec<F>>,
    /// Lowest row -> column having it as pivot.
    pivots: HashMap<usize, usize>,
}

fn reduce<F: Field>(cols: Vec<SparseVec<F>>, track: bool) -> Reduced<F> {
    let mut pivots: HashMap<usize, usize> = HashMap::new();
    let mut combos: Vec<SparseVec<F>> = Vec::new();
    let mut out: Vec<SparseVec<F>> = Vec::with_capacity(cols.len());
    for (j, mut col) in cols.into_iter().enumerate() {
        let mut combo: SparseVec<F> = if track { vec![(j, F::one())] } else { Vec::new() };
        while let Some((low, v)) = col.last().cloned() {
            match pivots.get(&low) {
                Some(&k) => {
                    let pv = out[k].last().expect("pivot column is nonzero").1.clone();
                    let c = -(v / pv);
                    col = axpy(&col, &c, &out[k]);
                    if track {
                        combo = axpy(&combo, &c, &combos[k]);
                    }
                }
                None => {
                    pivots.insert(low, j);
                    break;
                }
            }
        }
        out.push(col);
        if track {
            combos.push(combo);
        }
    }
    Reduced {
        cols: out,
        combos,
        pivots,
    }
}

fn rank<F: Field>(cols: Vec<SparseVec<F>>) -> usize {
    reduce(cols, false).pivots.len()
}

/// Coefficients `x` with `A x = target`, if `target` is in the column span.
fn solve_in_span<F: Field>(cols: &[SparseVec<F>], target: &[(usize, F)]) -> Option<SparseVec<F>> {
    let r = reduce(cols.to_vec(), true);
    let mut t = target.to_vec();
    let mut x: SparseVec<F> = Vec::new();
    while let Some((low, v)) = t.last().cloned() {
        let &k = r.pivots.get(&low)?;
        let c = v / r.cols[k].last().expect("pivot column is nonzero").1.clone();
        t = axpy(&t, &(-c.clone()), &r.cols[k]);
        x = axpy(&x, &c, &r.combos[k]);
    }
    Some(x)
}

/// Chains of a complex up to dimension 2. Edges and triangles are indexed
/// in first-appearance order over the facets, with vertices sorted inside.
#[derive(Debug, Clone)]
pub struct ChainComplex<F> {
    num_vertices: usize,
    edges: Vec<[usize; 2]>,
    edge_index: HashMap<[usize; 2], usize>,
    triangles: Vec<[usize; 3]>,
    _field: PhantomData<F>,
}

impl<F: Field> ChainComplex<F> {
    pub fn from_complex(c: &ChromaticComplex) -> Result<Self> {
        let dim = c.dimension();
        if dim > 2 {
            return Err(Error::DimensionTooHigh(dim));
        }
        let mut edges = Vec::new();
        let mut edge_index = HashMap::new();
        let mut triangles = Vec::new();
        for f in c.facets() {
            let mut vs = f.to_vec();
            vs.sort_unstable();
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    let e = [vs[i], vs[j]];
                    edge_index.entry(e).or_insert_with(|| {
                        edges.push(e);
                        edges.len() - 1
                    });
                }
            }
            if dim == 2 {
                triangles.push([vs[0], vs[1], vs[2]]);
            }
        }
        Ok(Self {
            num_vertices: c.num_vertices(),
            edges,
            edge_index,
            triangles,
            _field: PhantomData,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Columns of `∂_1`.
    pub fn boundary_1(&self) -> Vec<SparseVec<F>> {
        self.edges
            .iter()
            .map(|&[u, v]| vec![(u, -F::one()), (v, F::one())])
            .collect()
    }

    /// Columns of `∂_2`.
    pub fn boundary_2(&self) -> Vec<SparseVec<F>> {
        self.triangles
            .iter()
            .map(|&[u, v, w]| {
                let mut col = vec![
                    (self.edge_index[&[v, w]], F::one()),
                    (self.edge_index[&[u, w]], -F::one()),
                    (self.edge_index[&[u, v]], F::one()),
                ];
                col.sort_by_key(|e| e.0);
                col
            })
            .collect()
    }

    /// `∂_1 ∘ ∂_2 = 0`.
    pub fn is_chain_complex(&self) -> bool {
        let d1 = self.boundary_1();
        self.boundary_2().iter().all(|col| {
            let mut acc: SparseVec<F> = Vec::new();
            for (e, c) in col {
                acc = axpy(&acc, c, &d1[*e]);
            }
            acc.is_empty()
        })
    }

    pub fn rank_1(&self) -> usize {
        rank(self.boundary_1())
    }

    pub fn rank_2(&self) -> usize {
        rank(self.boundary_2())
    }

    /// `(β_0, β_1)`.
    pub fn betti(&self) -> (usize, usize) {
        let r1 = self.rank_1();
        let r2 = self.rank_2();
        (self.num_vertices - r1, self.edges.len() - r1 - r2)
    }

    /// A basis of `Z_1 = ker ∂_1`.
    pub fn cycle_basis(&self) -> Vec<SparseVec<F>> {
        let r = reduce(self.boundary_1(), true);
        r.cols
            .iter()
            .zip(r.combos)
            .filter(|(c, _)| c.is_empty())
            .map(|(_, z)| z)
            .collect()
    }

    /// Cycles representing a basis of `H_1`.
    pub fn homology_basis(&self) -> Vec<SparseVec<F>> {
        let b = self.boundary_2();
        let nb = b.len();
        let z = self.cycle_basis();
        let mut cols = b;
        cols.extend(z.iter().cloned());
        let r = reduce(cols, false);
        z.into_iter()
            .enumerate()
            .filter(|(i, _)| !r.cols[nb + i].is_empty())
            .map(|(_, c)| c)
            .collect()
    }

    /// Image of a 1-chain under `f`, in `target`'s edge basis. Degenerate
    /// edges map to zero.
    fn push_forward(&self, f: &ChromaticMap, target: &ChainComplex<F>, chain: &[(usize, F)]) -> Result<SparseVec<F>> {
        let mut terms: Vec<(usize, F)> = Vec::new();
        for (e, c) in chain {
            let [u, v] = self.edges[*e];
            let (fu, fv) = (f.apply(u), f.apply(v));
            if fu == fv {
                continue;
            }
            let (key, c) = if fu < fv {
                ([fu, fv], c.clone())
            } else {
                ([fv, fu], -c.clone())
            };
            let &i = target
                .edge_index
                .get(&key)
                .ok_or_else(|| Error::InvalidMorphism(format!("edge {u}-{v} has no image edge")))?;
            terms.push((i, c));
        }
        terms.sort_by_key(|t| t.0);
        let mut out: SparseVec<F> = Vec::new();
        for (i, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = last.1.clone() + c,
                _ => out.push((i, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Ok(out)
    }
}

fn check_map(f: &ChromaticMap, source: &ChromaticComplex, target: &ChromaticComplex) -> Result<()> {
    if !crate::simplicial::is_chromatic_map(&f.map, source, target)? {
        return Err(Error::InvalidMorphism("not a chromatic map".into()));
    }
    Ok(())
}

/// `(β_0, β_1)` over GF(2).
pub fn betti_numbers(c: &ChromaticComplex) -> Result<(usize, usize)> {
    Ok(ChainComplex::<Gf2>::from_complex(c)?.betti())
}

/// Rank of `H_1(f)`: `rank[∂_2(D) | f_#(Z_1(C))] − rank ∂_2(D)`.
pub fn induced_h1_rank<F: Field>(
    f: &ChromaticMap,
    source: &ChromaticComplex,
    target: &ChromaticComplex,
) -> Result<usize> {
    check_map(f, source, target)?;
    let c = ChainComplex::<F>::from_complex(source)?;
    let d = ChainComplex::<F>::from_complex(target)?;
    let mut cols = d.boundary_2();
    let base = rank(cols.clone());
    for z in c.cycle_basis() {
        cols.push(c.push_forward(f, &d, &z)?);
    }
    Ok(rank(cols) - base)
}

/// Matrix of `H_1(f)` against the bases from `homology_basis`: entry
/// `[i][j]` is the coefficient of target class `i` in the image of source
/// class `j`.
pub fn induced_h1_matrix<F: Field>(
    f: &ChromaticMap,
    source: &ChromaticComplex,
    target: &ChromaticComplex,
) -> Result<Vec<Vec<F>>> {
    check_map(f, source, target)?;
    let c = ChainComplex::<F>::from_complex(source)?;
    let d = ChainComplex::<F>::from_complex(target)?;
    let src_basis = c.homology_basis();
    let tgt_basis = d.homology_basis();
    let mut cols = d.boundary_2();
    let nb = cols.len();
    cols.extend(tgt_basis.iter().cloned());
    let mut m = vec![vec![F::zero(); src_basis.len()]; tgt_basis.len()];
    for (j, z) in src_basis.iter().enumerate() {
        let img = c.push_forward(f, &d, z)?;
        let x = solve_in_span(&cols, &img).expect("a cycle is a combination of boundaries and basis cycles");
        for (k, v) in x {
            if k >= nb {
                m[k - nb][j] = v;
            }
        }
    }
    Ok(m)
}
