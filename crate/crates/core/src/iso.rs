//! Isomorphism tests for frames and chromatic complexes.
//!
//! Both searches prune with color refinement computed jointly over the two
//! inputs, then backtrack in canonical order trying candidates in
//! increasing order, so the witness returned is the lexicographically least.

use std::collections::BTreeMap;

use crate::kripke::KripkeFrame;
use crate::simplicial::ChromaticComplex;

/// Iterated refinement: each round a node's color becomes the id of
/// `(old color, signature(old colors))`. Stops when the number of classes
/// stops growing.
fn refine<F>(initial: Vec<u64>, mut signature: F) -> Vec<usize>
where
    F: FnMut(usize, &[usize]) -> Vec<Vec<usize>>,
{
    let mut colors = relabel(
        initial
            .iter()
            .map(|&c| (c as usize, Vec::<Vec<usize>>::new()))
            .collect(),
    );
    let mut classes = count_classes(&colors);
    loop {
        let keyed: Vec<(usize, Vec<Vec<usize>>)> =
            (0..colors.len()).map(|x| (colors[x], signature(x, &colors))).collect();
        let next = relabel(keyed);
        let n = count_classes(&next);
        colors = next;
        if n == classes {
            return colors;
        }
        classes = n;
    }
}

fn relabel<K: Ord + Clone>(keys: Vec<K>) -> Vec<usize> {
    let mut ids = BTreeMap::new();
    for k in &keys {
        ids.entry(k.clone()).or_insert(0usize);
    }
    for (i, v) in ids.values_mut().enumerate() {
        *v = i;
    }
    keys.iter().map(|k| ids[k]).collect()
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn histograms_match(colors: &[usize], split: usize) -> bool {
    let mut a = colors[..split].to_vec();
    let mut b = colors[split..].to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

/// Bijective state map `m → n` preserving and reflecting every relation.
pub fn frames_isomorphic(m: &KripkeFrame, n: &KripkeFrame) -> Option<Vec<usize>> {
    if m.agents() != n.agents() || m.len() != n.len() {
        return None;
    }
    let size = m.len();
    let agents: Vec<_> = m.agents().iter().collect();
    let side = |x: usize| if x < size { (m, x) } else { (n, x - size) };
    let initial: Vec<u64> = (0..2 * size)
        .map(|x| {
            let (f, s) = side(x);
            agents.iter().fold(0u64, |h, &a| {
                h.wrapping_mul(1_000_003).wrapping_add(f.class_of(a, s).len() as u64)
            })
        })
        .collect();
    let colors = refine(initial, |x, colors| {
        let (f, s) = side(x);
        let off = if x < size { 0 } else { size };
        agents
            .iter()
            .map(|&a| {
                let mut sig: Vec<usize> = f.class_of(a, s).iter().map(|&t| colors[t + off]).collect();
                sig.sort_unstable();
                sig
            })
            .collect()
    });
    if !histograms_match(&colors, size) {
        return None;
    }
    let mut map = vec![usize::MAX; size];
    let mut used = vec![false; size];
    fn go(s: usize, m: &KripkeFrame, n: &KripkeFrame, colors: &[usize], map: &mut [usize], used: &mut [bool]) -> bool {
        let size = m.len();
        if s == size {
            return true;
        }
        for t in 0..size {
            if used[t] || colors[t + size] != colors[s] {
                continue;
            }
            let consistent = (0..s).all(|u| m.agents().iter().all(|a| m.related(a, s, u) == n.related(a, t, map[u])));
            if !consistent {
                continue;
            }
            map[s] = t;
            used[t] = true;
            if go(s + 1, m, n, colors, map, used) {
                return true;
            }
            used[t] = false;
        }
        map[s] = usize::MAX;
        false
    }
    if go(0, m, n, &colors, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

/// Color-preserving vertex bijection `c → d` sending facets onto facets.
pub fn complexes_isomorphic(c: &ChromaticComplex, d: &ChromaticComplex) -> Option<Vec<usize>> {
    if c.agents() != d.agents() || c.num_vertices() != d.num_vertices() || c.num_facets() != d.num_facets() {
        return None;
    }
    let size = c.num_vertices();
    let side = |x: usize| if x < size { (c, x) } else { (d, x - size) };
    let initial: Vec<u64> = (0..2 * size)
        .map(|x| {
            let (k, v) = side(x);
            (k.color(v).0 as u64) << 32 | k.facets_containing(v).unwrap().len() as u64
        })
        .collect();
    let colors = refine(initial, |x, colors| {
        let (k, v) = side(x);
        let off = if x < size { 0 } else { size };
        let mut sig: Vec<Vec<usize>> = k
            .facets_containing(v)
            .unwrap()
            .iter()
            .map(|&f| {
                let mut s: Vec<usize> = k.facet(f).iter().map(|&w| colors[w + off]).collect();
                s.sort_unstable();
                s
            })
            .collect();
        sig.sort();
        sig
    });
    if !histograms_match(&colors, size) {
        return None;
    }
    let mut map = vec![usize::MAX; size];
    let mut used = vec![false; size];
    fn fits(c: &ChromaticComplex, d: &ChromaticComplex, map: &[usize], v: usize, w: usize) -> bool {
        for &f in c.facets_containing(v).unwrap() {
            let facet = c.facet(f);
            let complete = facet.iter().all(|&u| u == v || map[u] != usize::MAX);
            let ok = d.facets_containing(w).unwrap().iter().any(|&g| {
                let target = d.facet(g);
                facet
                    .iter()
                    .enumerate()
                    .all(|(col, &u)| u == v || map[u] == usize::MAX || target[col] == map[u])
            });
            if !ok {
                return false;
            }
            if complete {
                let img: Vec<usize> = facet.iter().map(|&u| if u == v { w } else { map[u] }).collect();
                if d.find_facet(&img).is_none() {
                    return false;
                }
            }
        }
        true
    }
    fn go(
        v: usize,
        c: &ChromaticComplex,
        d: &ChromaticComplex,
        colors: &[usize],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let size = c.num_vertices();
        if v == size {
            return true;
        }
        for w in 0..size {
            if used[w] || colors[w + size] != colors[v] || !fits(c, d, map, v, w) {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if go(v + 1, c, d, colors, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }
    if go(0, c, d, &colors, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}
