//! Maximum density m(G) and maximum 2-density m₂(H), exactly.
//!
//! [`max_density`] runs a Dinkelbach iteration over exact rationals: with the
//! current guess λ = a/b it finds a vertex set S maximising b·e(S) − a·v(S)
//! by a minimum cut in the edge/vertex closure network. A positive optimum
//! yields a strictly denser S, which becomes the next guess. Densities are
//! drawn from the finite set {e/v : v ≤ n}, so the loop ends on the exact
//! maximum.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{FlowNetwork, INF};
use crate::graph::Graph;
use crate::rational::Rational;

/// Largest vertex count accepted by the exhaustive routines.
pub const BRUTE_FORCE_CAP: usize = 20;

/// Largest `max_vertices` accepted by [`find_small_dense_subgraph`].
pub const SMALL_SUBGRAPH_CAP: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityWitness {
    pub value: Rational,
    pub vertices: Vec<usize>,
}

impl DensityWitness {
    fn of_set(g: &Graph, vertices: Vec<usize>) -> Self {
        let mut mask = vec![false; g.id_bound()];
        for &v in &vertices {
            mask[v] = true;
        }
        let value = Rational::density(g.edges_within(&mask), vertices.len());
        DensityWitness { value, vertices }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DensityError {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph has {vertices} vertices; the maximum 2-density needs at least 3")]
    TooFewVertices { vertices: usize },
    #[error("exhaustive search limited to {cap} vertices, graph has {vertices}")]
    TooLarge { vertices: usize, cap: usize },
    #[error("subgraph size cap {requested} exceeds the supported maximum {cap}")]
    CapExceeded { requested: usize, cap: usize },
}

/// m(G) with a witness vertex set.
pub fn max_density(g: &Graph) -> Result<DensityWitness, DensityError> {
    let verts: Vec<usize> = g.vertices().collect();
    if verts.is_empty() {
        return Err(DensityError::EmptyGraph);
    }
    let mut best = DensityWitness {
        value: Rational::density(g.edge_count(), verts.len()),
        vertices: verts.clone(),
    };
    if g.edge_count() == 0 {
        return Ok(best);
    }
    while let Some(denser) = denser_subgraph(g, &verts, best.value) {
        debug_assert!(denser.value > best.value);
        best = denser;
    }
    Ok(best)
}

/// Some S with e(S)/v(S) > λ maximising b·e(S) − a·v(S), or `None` when no
/// subgraph beats λ.
fn denser_subgraph(g: &Graph, verts: &[usize], lambda: Rational) -> Option<DensityWitness> {
    let (a, b) = (lambda.numer(), lambda.denom());
    let m = g.edge_count();
    let mut slot = vec![usize::MAX; g.id_bound()];
    for (i, &v) in verts.iter().enumerate() {
        slot[v] = i;
    }
    let (s, t) = (0, 1);
    let vertex_node = |v: usize| 2 + m + slot[v];
    let mut net = FlowNetwork::new(2 + m + verts.len());
    for (i, e) in g.edges().iter().enumerate() {
        net.add_arc(s, 2 + i, b);
        net.add_arc(2 + i, vertex_node(e.u()), INF);
        net.add_arc(2 + i, vertex_node(e.v()), INF);
    }
    for &v in verts {
        net.add_arc(vertex_node(v), t, a);
    }
    let cut = net.max_flow(s, t);
    if m as i64 * b - cut <= 0 {
        return None;
    }
    let side = net.source_side(s);
    let chosen: Vec<usize> = verts
        .iter()
        .copied()
        .filter(|&v| side[vertex_node(v)])
        .collect();
    Some(DensityWitness::of_set(g, chosen))
}

/// Edge counts of every subset of `verts` (bit i ↔ verts[i]).
fn subset_edge_counts(g: &Graph, verts: &[usize]) -> Vec<u16> {
    let k = verts.len();
    let mut slot = vec![usize::MAX; g.id_bound()];
    for (i, &v) in verts.iter().enumerate() {
        slot[v] = i;
    }
    let nbr_masks: Vec<u32> = verts
        .iter()
        .map(|&v| {
            g.neighbours(v)
                .iter()
                .filter(|&&w| slot[w] != usize::MAX)
                .fold(0u32, |m, &w| m | 1 << slot[w])
        })
        .collect();
    let mut counts = vec![0u16; 1 << k];
    for mask in 1u32..(1 << k) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        counts[mask as usize] = counts[rest as usize] + (nbr_masks[low] & rest).count_ones() as u16;
    }
    counts
}

fn mask_vertices(verts: &[usize], mask: u32) -> Vec<usize> {
    (0..verts.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| verts[i])
        .collect()
}

/// m(G) by enumerating every nonempty vertex subset (at most 20 vertices).
pub fn max_density_bruteforce(g: &Graph) -> Result<DensityWitness, DensityError> {
    let verts: Vec<usize> = g.vertices().collect();
    if verts.is_empty() {
        return Err(DensityError::EmptyGraph);
    }
    if verts.len() > BRUTE_FORCE_CAP {
        return Err(DensityError::TooLarge {
            vertices: verts.len(),
            cap: BRUTE_FORCE_CAP,
        });
    }
    let counts = subset_edge_counts(g, &verts);
    let mut best: Option<(Rational, u32)> = None;
    for mask in 1u32..(1 << verts.len()) {
        let value = Rational::density(counts[mask as usize] as usize, mask.count_ones() as usize);
        if best.is_none_or(|(b, _)| value > b) {
            best = Some((value, mask));
        }
    }
    let (value, mask) = best.expect("at least one subset");
    Ok(DensityWitness {
        value,
        vertices: mask_vertices(&verts, mask),
    })
}

/// m₂(H) = max (e(J)−1)/(v(J)−2) over subgraphs with v(J) ≥ 3, by exhaustion.
pub fn max_2_density(h: &Graph) -> Result<DensityWitness, DensityError> {
    let verts: Vec<usize> = h.vertices().collect();
    if verts.len() < 3 {
        return Err(DensityError::TooFewVertices {
            vertices: verts.len(),
        });
    }
    if verts.len() > BRUTE_FORCE_CAP {
        return Err(DensityError::TooLarge {
            vertices: verts.len(),
            cap: BRUTE_FORCE_CAP,
        });
    }
    let counts = subset_edge_counts(h, &verts);
    let mut best: Option<(Rational, u32)> = None;
    for mask in 1u32..(1 << verts.len()) {
        let v = mask.count_ones() as i64;
        if v < 3 {
            continue;
        }
        let value = Rational::new(counts[mask as usize] as i64 - 1, v - 2);
        if best.is_none_or(|(b, _)| value > b) {
            best = Some((value, mask));
        }
    }
    let (value, mask) = best.expect("at least one subset of size three");
    Ok(DensityWitness {
        value,
        vertices: mask_vertices(&verts, mask),
    })
}

/// Finds a vertex set S with |S| ≤ `max_vertices` and e(S)/|S| ≥ `bound`.
///
/// Exact. A global densest-subgraph check answers most sparse inputs at once;
/// otherwise each vertex of the ⌊bound⌋+1 core is tried as the smallest
/// member of a minimal witness, first by a densest-subgraph check on its
/// ball of radius `max_vertices − 1`, then by enumerating connected sets.
pub fn find_small_dense_subgraph(
    g: &Graph,
    bound: Rational,
    max_vertices: usize,
) -> Result<Option<DensityWitness>, DensityError> {
    if max_vertices > SMALL_SUBGRAPH_CAP {
        return Err(DensityError::CapExceeded {
            requested: max_vertices,
            cap: SMALL_SUBGRAPH_CAP,
        });
    }
    if max_vertices == 0 || g.vertex_count() == 0 {
        return Ok(None);
    }
    if bound <= Rational::from_integer(0) {
        let v = g.vertices().next().expect("nonempty");
        return Ok(Some(DensityWitness {
            value: Rational::from_integer(0),
            vertices: vec![v],
        }));
    }
    let global = max_density(g)?;
    if global.value < bound {
        return Ok(None);
    }
    if let Some(w) = small_component_of(g, &global, bound, max_vertices) {
        return Ok(Some(w));
    }

    // Every vertex of a minimal witness has more than `bound` neighbours in it.
    let min_deg = (bound.numer() / bound.denom()) as usize + 1;
    let live = reduce_mask(g, min_deg, bound, vec![true; g.id_bound()]);
    let mut roots: Vec<usize> = g.vertices().filter(|&v| live[v]).collect();
    roots.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    // Witnesses usually sit in a tight neighbourhood; look there first.
    for radius in LOCAL_RADII {
        let mut tried = vec![false; g.id_bound()];
        for &root in &roots {
            if tried[root] {
                continue;
            }
            let near = mask_of(g, &ball_within(g, &live, root, radius));
            let near = reduce_mask(g, min_deg, bound, near);
            if !near[root] {
                continue;
            }
            let members: Vec<usize> = (0..g.id_bound()).filter(|&v| near[v]).collect();
            let local = g.induced(&members);
            if max_density(&local)?.value < bound {
                continue;
            }
            tried[root] = true;
            if let Some(set) = rooted_search(g, near, &roots, bound, max_vertices, min_deg)? {
                return Ok(Some(DensityWitness::of_set(g, set)));
            }
        }
    }
    let found = rooted_search(g, live, &roots, bound, max_vertices, min_deg)?;
    Ok(found.map(|set| DensityWitness::of_set(g, set)))
}

const LOCAL_RADII: [usize; 3] = [2, 3, 4];

fn mask_of(g: &Graph, vertices: &[usize]) -> Vec<bool> {
    let mut m = vec![false; g.id_bound()];
    vertices.iter().for_each(|&v| m[v] = true);
    m
}

/// Exhaustive search inside `live`, taking each root in turn as a member
/// and discarding it afterwards.
fn rooted_search(
    g: &Graph,
    mut live: Vec<bool>,
    roots: &[usize],
    bound: Rational,
    max_vertices: usize,
    min_deg: usize,
) -> Result<Option<Vec<usize>>, DensityError> {
    let search = SmallSearch {
        g,
        bound,
        cap: max_vertices,
    };
    for &root in roots {
        if !live[root] {
            continue;
        }
        let ball = ball_within(g, &live, root, max_vertices - 1);
        let ball_mask = reduce_mask(g, min_deg, bound, mask_of(g, &ball));
        if ball_mask[root] {
            let members: Vec<usize> = ball.iter().copied().filter(|&v| ball_mask[v]).collect();
            let local = g.induced(&members);
            let dense = max_density(&local)?;
            if dense.value >= bound {
                if let Some(w) = small_component_of(&local, &dense, bound, max_vertices) {
                    return Ok(Some(w.vertices));
                }
                if let Some(set) = search.rooted_at(root, &ball_mask) {
                    return Ok(Some(set));
                }
            }
        }
        live[root] = false;
        live = reduce_mask(g, min_deg, bound, live);
    }
    Ok(None)
}

/// The densest connected component of a witness, if it is small enough.
fn small_component_of(
    g: &Graph,
    w: &DensityWitness,
    bound: Rational,
    max_vertices: usize,
) -> Option<DensityWitness> {
    let sub = g.induced(&w.vertices);
    sub.components()
        .into_iter()
        .map(|c| DensityWitness::of_set(g, c))
        .filter(|c| c.value >= bound && c.vertices.len() <= max_vertices)
        .max_by(|a, b| a.value.cmp(&b.value).then(b.vertices.cmp(&a.vertices)))
}

/// Peels vertices of degree < `k` (counted inside the mask) until stable.
fn core_mask(g: &Graph, k: usize, mut mask: Vec<bool>) -> Vec<bool> {
    let mut deg: Vec<usize> = (0..g.id_bound())
        .map(|v| {
            if mask[v] {
                g.neighbours(v).iter().filter(|&&w| mask[w]).count()
            } else {
                0
            }
        })
        .collect();
    let mut queue: Vec<usize> = (0..g.id_bound())
        .filter(|&v| mask[v] && deg[v] < k)
        .collect();
    while let Some(v) = queue.pop() {
        if !mask[v] {
            continue;
        }
        mask[v] = false;
        for &w in g.neighbours(v) {
            if mask[w] {
                deg[w] -= 1;
                if deg[w] < k {
                    queue.push(w);
                }
            }
        }
    }
    mask
}

/// Alternates core peeling with removal of long runs of degree-2 vertices.
/// A minimal witness at density `bound` > 1 has min degree `k` and contains
/// no run of 1/(bound − 1) or more degree-2 vertices.
fn reduce_mask(g: &Graph, k: usize, bound: Rational, mut mask: Vec<bool>) -> Vec<bool> {
    loop {
        mask = core_mask(g, k, mask);
        if k != 2 || bound <= Rational::from_integer(1) {
            return mask;
        }
        let excess = bound - Rational::from_integer(1);
        let deg = |m: &[bool], v: usize| g.neighbours(v).iter().filter(|&&w| m[w]).count();
        let mut seen = vec![false; g.id_bound()];
        let mut doomed = Vec::new();
        for v in 0..g.id_bound() {
            if !mask[v] || seen[v] || deg(&mask, v) != 2 {
                continue;
            }
            let mut run = vec![v];
            seen[v] = true;
            let mut closed = false;
            for start in g.neighbours(v).iter().copied().filter(|&w| mask[w]) {
                let (mut prev, mut cur) = (v, start);
                while mask[cur] && deg(&mask, cur) == 2 {
                    if cur == v {
                        closed = true;
                        break;
                    }
                    if seen[cur] {
                        break;
                    }
                    seen[cur] = true;
                    run.push(cur);
                    let next = g
                        .neighbours(cur)
                        .iter()
                        .copied()
                        .find(|&w| mask[w] && w != prev)
                        .expect("degree 2");
                    prev = cur;
                    cur = next;
                }
            }
            if closed
                || Rational::from_integer(run.len() as i64) * excess >= Rational::from_integer(1)
            {
                doomed.extend(run);
            }
        }
        if doomed.is_empty() {
            return mask;
        }
        doomed.into_iter().for_each(|v| mask[v] = false);
    }
}

fn ball_within(g: &Graph, live: &[bool], root: usize, radius: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.id_bound()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut out = vec![root];
    while let Some(v) = queue.pop_front() {
        if dist[v] == radius {
            continue;
        }
        for &w in g.neighbours(v) {
            if live[w] && dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                out.push(w);
                queue.push_back(w);
            }
        }
    }
    out.sort_unstable();
    out
}

struct SmallSearch<'a> {
    g: &'a Graph,
    bound: Rational,
    cap: usize,
}

impl SmallSearch<'_> {
    /// Connected sets containing `root` inside `allowed`, enumerated once
    /// each (extension-set scheme).
    fn rooted_at(&self, root: usize, allowed: &[bool]) -> Option<Vec<usize>> {
        let max_deg = (0..self.g.id_bound())
            .filter(|&v| allowed[v])
            .map(|v| self.g.neighbours(v).iter().filter(|&&w| allowed[w]).count())
            .max()
            .unwrap_or(0);
        let mut in_set = vec![false; self.g.id_bound()];
        let mut near = vec![0u32; self.g.id_bound()];
        in_set[root] = true;
        let ext: Vec<usize> = self
            .g
            .neighbours(root)
            .iter()
            .copied()
            .filter(|&w| allowed[w])
            .collect();
        for &w in self.g.neighbours(root) {
            near[w] += 1;
        }
        near[root] += 1;
        let mut state = SearchState {
            in_set,
            near,
            set: vec![root],
            edges: 0,
            max_deg,
            allowed: allowed.to_vec(),
        };
        self.extend(&mut state, ext)
    }

    fn extend(&self, st: &mut SearchState, mut ext: Vec<usize>) -> Option<Vec<usize>> {
        let s = st.set.len();
        if (st.edges as i64) * self.bound.denom() >= self.bound.numer() * s as i64 {
            return Some(st.set.clone());
        }
        if s == self.cap || !self.can_reach(st) {
            return None;
        }
        ext.sort_by_key(|&w| {
            (
                self.g
                    .neighbours(w)
                    .iter()
                    .filter(|&&x| st.in_set[x])
                    .count(),
                w,
            )
        });
        while let Some(w) = ext.pop() {
            let gained = self
                .g
                .neighbours(w)
                .iter()
                .filter(|&&x| st.in_set[x])
                .count();
            // new exclusive neighbours of w
            let mut next = ext.clone();
            for &x in self.g.neighbours(w) {
                if st.allowed[x] && !st.in_set[x] && st.near[x] == 0 {
                    next.push(x);
                }
            }
            st.in_set[w] = true;
            st.set.push(w);
            st.edges += gained;
            st.near[w] += 1;
            for &x in self.g.neighbours(w) {
                st.near[x] += 1;
            }
            let found = self.extend(st, next);
            for &x in self.g.neighbours(w) {
                st.near[x] -= 1;
            }
            st.near[w] -= 1;
            st.edges -= gained;
            st.set.pop();
            st.in_set[w] = false;
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Optimistic check: can some superset within the cap reach the bound?
    fn can_reach(&self, st: &SearchState) -> bool {
        let s = st.set.len();
        let stubs: usize = st
            .set
            .iter()
            .map(|&x| {
                self.g
                    .neighbours(x)
                    .iter()
                    .filter(|&&y| st.allowed[y] && !st.in_set[y])
                    .count()
            })
            .sum();
        let (p, q) = (self.bound.numer(), self.bound.denom());
        (1..=self.cap - s).any(|r| {
            let among_new = (r * (r - 1) / 2).min(r * st.max_deg / 2);
            let best = st.edges + stubs.min(r * st.max_deg) + among_new;
            best as i64 * q >= p * (s + r) as i64
        })
    }
}

struct SearchState {
    in_set: Vec<bool>,
    near: Vec<u32>,
    set: Vec<usize>,
    edges: usize,
    max_deg: usize,
    allowed: Vec<bool>,
}
