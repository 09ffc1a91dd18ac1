//! Fixed-length cycles, C_ℓ-components and construction sequences.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, EdgeSet, Graph};

/// A cycle in canonical form: starts at its smallest vertex and continues
/// towards the smaller of that vertex's two cycle neighbours.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Cycle {
    vertices: Vec<usize>,
    #[serde(skip)]
    edge_set: EdgeSet,
}

impl Cycle {
    /// Canonicalises a closed vertex walk `v0 v1 … v_{ℓ-1} v0`.
    pub fn new(mut vertices: Vec<usize>) -> Self {
        assert!(vertices.len() >= 3, "a cycle needs at least three vertices");
        let len = vertices.len();
        let start = (0..len).min_by_key(|&i| vertices[i]).unwrap();
        vertices.rotate_left(start);
        if vertices[len - 1] < vertices[1] {
            vertices[1..].reverse();
        }
        let edge_set = (0..len)
            .map(|i| Edge::new(vertices[i], vertices[(i + 1) % len]))
            .collect();
        Cycle { vertices, edge_set }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_set(&self) -> &EdgeSet {
        &self.edge_set
    }

    /// Edges in walk order: `v_i v_{i+1}`, wrapping around.
    pub fn edges(&self) -> Vec<Edge> {
        let len = self.len();
        (0..len)
            .map(|i| Edge::new(self.vertices[i], self.vertices[(i + 1) % len]))
            .collect()
    }

    pub fn is_subgraph_of(&self, g: &Graph) -> bool {
        self.edge_set.iter().all(|&e| g.contains_edge(e))
    }

    pub fn shares_edge_with(&self, edges: &EdgeSet) -> bool {
        self.edge_set.iter().any(|e| edges.contains(e))
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("-"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("cycle length {0} is below 3")]
    LengthTooSmall(usize),
    #[error("configuration classification needs length at least 5, got {0}")]
    ClassifyLength(usize),
    #[error("start cycle {0} is not a member of the component")]
    StartNotMember(Cycle),
    #[error(
        "cycle {cycle} does not extend the current graph (shares no edge or is already contained)"
    )]
    NotAnExtension { cycle: Cycle },
    #[error("no configuration matches cycle {cycle} against a graph with {edges} edges")]
    Unclassified { cycle: Cycle, edges: usize },
}

/// Every ℓ-cycle of `g`, once each, sorted by canonical vertex list.
pub fn enumerate_cycles(g: &Graph, ell: usize) -> Result<Vec<Cycle>, CycleError> {
    if ell < 3 {
        return Err(CycleError::LengthTooSmall(ell));
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; g.id_bound()];
    for s in g.vertices() {
        let mut path = vec![s];
        on_path[s] = true;
        extend_paths(g, ell, &mut path, &mut on_path, &mut out);
        on_path[s] = false;
    }
    out.sort();
    Ok(out)
}

fn extend_paths(
    g: &Graph,
    ell: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Cycle>,
) {
    let s = path[0];
    let last = *path.last().unwrap();
    if path.len() == ell {
        if path[1] < path[ell - 1] && g.has_edge(last, s) {
            out.push(Cycle::new(path.clone()));
        }
        return;
    }
    for &w in g.neighbours(last) {
        if w > s && !on_path[w] {
            on_path[w] = true;
            path.push(w);
            extend_paths(g, ell, path, on_path, out);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// Simple paths from `a` to `b` with exactly `vertices` vertices, in
/// lexicographic order of their vertex lists.
pub fn paths_between(g: &Graph, a: usize, b: usize, vertices: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if vertices < 2 || !g.is_alive(a) || !g.is_alive(b) || a == b {
        return out;
    }
    let mut on_path = vec![false; g.id_bound()];
    on_path[a] = true;
    let mut path = vec![a];
    fn walk(
        g: &Graph,
        b: usize,
        want: usize,
        path: &mut Vec<usize>,
        on: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let last = *path.last().unwrap();
        if path.len() == want - 1 {
            if g.has_edge(last, b) {
                let mut p = path.clone();
                p.push(b);
                out.push(p);
            }
            return;
        }
        for &w in g.neighbours(last) {
            if w != b && !on[w] {
                on[w] = true;
                path.push(w);
                walk(g, b, want, path, on, out);
                path.pop();
                on[w] = false;
            }
        }
    }
    walk(g, b, vertices, &mut path, &mut on_path, &mut out);
    out
}

/// One vertex per cycle; two cycles are adjacent iff they share an edge.
pub fn edge_intersection_graph(cycles: &[Cycle]) -> Graph {
    let mut by_edge: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (i, c) in cycles.iter().enumerate() {
        for &e in c.edge_set() {
            by_edge.entry(e).or_default().push(i);
        }
    }
    let mut pairs = BTreeSet::new();
    for members in by_edge.values() {
        for (x, &i) in members.iter().enumerate() {
            for &j in &members[x + 1..] {
                pairs.insert((i, j));
            }
        }
    }
    Graph::from_edges(cycles.len(), pairs).expect("cycle indices are in range")
}

/// The realising labelling u_1 … u_ℓ of a configuration, stored 0-based.
pub type Labelling = Vec<usize>;

/// How an added cycle meets the graph built so far.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Configuration {
    /// `u_1 … u_k` is a path of the current graph; `u_{k+1} … u_ℓ` are new.
    A { k: usize, labelling: Labelling },
    /// `u_1u_2` is old, `u_2u_3` is not, `u_j` is old, the rest are new.
    B { j: usize, labelling: Labelling },
}

impl Configuration {
    pub fn labelling(&self) -> &[usize] {
        match self {
            Configuration::A { labelling, .. } | Configuration::B { labelling, .. } => labelling,
        }
    }

    /// Short tag such as `A4` or `B3`.
    pub fn tag(&self) -> String {
        match self {
            Configuration::A { k, .. } => format!("A{k}"),
            Configuration::B { j, .. } => format!("B{j}"),
        }
    }

    /// True iff the labelling satisfies the defining conditions against `h`.
    pub fn holds_in(&self, h: &Graph) -> bool {
        let u = self.labelling();
        match *self {
            Configuration::A { k, .. } => is_a(h, u, k),
            Configuration::B { j, .. } => is_b(h, u, j),
        }
    }
}

fn is_a(h: &Graph, u: &[usize], k: usize) -> bool {
    (0..k - 1).all(|a| h.has_edge(u[a], u[a + 1]))
        && (0..k).all(|a| h.is_alive(u[a]))
        && u[k..].iter().all(|&x| !h.is_alive(x))
}

fn is_b(h: &Graph, u: &[usize], j: usize) -> bool {
    h.has_edge(u[0], u[1])
        && !h.has_edge(u[1], u[2])
        && h.is_alive(u[j - 1])
        && (2..u.len())
            .filter(|&a| a != j - 1)
            .all(|a| !h.is_alive(u[a]))
}

/// The 2ℓ readings of a cycle: every rotation, forwards then backwards.
fn labellings(c: &Cycle) -> Vec<Labelling> {
    let len = c.len();
    let mut out = Vec::with_capacity(2 * len);
    for backwards in [false, true] {
        for r in 0..len {
            out.push(
                (0..len)
                    .map(|i| {
                        let idx = if backwards {
                            (r + len - i) % len
                        } else {
                            (r + i) % len
                        };
                        c.vertices()[idx]
                    })
                    .collect(),
            );
        }
    }
    out
}

fn check_extension(h: &Graph, c: &Cycle, ell: usize) -> Result<(), CycleError> {
    if ell < 5 {
        return Err(CycleError::ClassifyLength(ell));
    }
    if !c.shares_edge_with(h.edges()) || c.is_subgraph_of(h) {
        return Err(CycleError::NotAnExtension { cycle: c.clone() });
    }
    Ok(())
}

/// Classifies the cycle `c` added to `h`, trying A_2 … A_ℓ then B_3 … B_{ℓ−1}
/// and returning the first match.
pub fn classify_step(h: &Graph, c: &Cycle, ell: usize) -> Result<Configuration, CycleError> {
    check_extension(h, c, ell)?;
    let all = labellings(c);
    for k in 2..=ell {
        if let Some(u) = all.iter().find(|u| is_a(h, u, k)) {
            return Ok(Configuration::A {
                k,
                labelling: u.clone(),
            });
        }
    }
    for j in 3..ell {
        if let Some(u) = all.iter().find(|u| is_b(h, u, j)) {
            return Ok(Configuration::B {
                j,
                labelling: u.clone(),
            });
        }
    }
    Err(CycleError::Unclassified {
        cycle: c.clone(),
        edges: h.edge_count(),
    })
}

/// Every configuration class realised by some labelling, as tags in trial
/// order. Under the density hypothesis this has exactly one entry.
pub fn matching_classes(h: &Graph, c: &Cycle, ell: usize) -> Result<Vec<String>, CycleError> {
    check_extension(h, c, ell)?;
    let all = labellings(c);
    let mut tags: Vec<String> = (2..=ell)
        .filter(|&k| all.iter().any(|u| is_a(h, u, k)))
        .map(|k| format!("A{k}"))
        .collect();
    tags.extend(
        (3..ell)
            .filter(|&j| all.iter().any(|u| is_b(h, u, j)))
            .map(|j| format!("B{j}")),
    );
    Ok(tags)
}

/// H_{i+1} = H_i ∪ C together with the step parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionStep {
    pub added_cycle: Cycle,
    pub new_edges: Vec<Edge>,
    pub e_new: usize,
    pub v_new: usize,
    pub c_new: usize,
    /// `None` when ℓ < 5 or no configuration matches.
    pub config: Option<Configuration>,
}

/// A construction sequence (H_1, …, H_t): the start cycle and t − 1 steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionSequence {
    pub ell: usize,
    pub start: Cycle,
    pub steps: Vec<ConstructionStep>,
}

impl ConstructionSequence {
    /// Cycles in insertion order, start first.
    pub fn cycles(&self) -> impl Iterator<Item = &Cycle> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.added_cycle))
    }

    /// H_{i+1} as a graph on `bound` ids: the union of the first `i + 1` cycles.
    pub fn prefix_graph(&self, bound: usize, i: usize) -> Graph {
        let edges: EdgeSet = self
            .cycles()
            .take(i + 1)
            .flat_map(|c| c.edge_set().iter().copied())
            .collect();
        Graph::spanned_by(bound, edges.iter())
    }

    pub fn union_edges(&self) -> EdgeSet {
        self.cycles()
            .flat_map(|c| c.edge_set().iter().copied())
            .collect()
    }

    /// The cycle with index `q` (0 is H_1, q ≥ 1 is the q-th step).
    pub fn cycle(&self, q: usize) -> &Cycle {
        if q == 0 {
            &self.start
        } else {
            &self.steps[q - 1].added_cycle
        }
    }

    pub fn cycle_count(&self) -> usize {
        self.steps.len() + 1
    }

    /// Configuration of the step adding cycle `q ≥ 1`.
    pub fn config(&self, q: usize) -> Option<&Configuration> {
        self.steps[q - 1].config.as_ref()
    }
}

/// Where the special configurations sit in a sequence, by cycle index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Census {
    pub a_ell: Vec<usize>,
    pub a_ell_minus_1: Vec<usize>,
    pub b: Vec<usize>,
    pub unclassified: Vec<usize>,
}

impl Census {
    pub fn of(seq: &ConstructionSequence) -> Self {
        let ell = seq.ell;
        let mut out = Census::default();
        for q in 1..seq.cycle_count() {
            match seq.config(q) {
                None => out.unclassified.push(q),
                Some(Configuration::A { k, .. }) if *k == ell => out.a_ell.push(q),
                Some(Configuration::A { k, .. }) if *k + 1 == ell => out.a_ell_minus_1.push(q),
                Some(Configuration::B { .. }) => out.b.push(q),
                Some(_) => {}
            }
        }
        out
    }

    /// Breaches of the multiplicity bounds that hold under the density
    /// hypothesis: one A_ℓ, two A_{ℓ−1} (two only for ℓ = 5), one B.
    pub fn violations(&self, ell: usize) -> Vec<String> {
        let mut out = Vec::new();
        if self.a_ell.len() > 1 {
            out.push(format!(
                "{} steps with configuration A{ell}",
                self.a_ell.len()
            ));
        }
        let limit = if ell == 5 { 2 } else { 1 };
        if self.a_ell_minus_1.len() > limit {
            out.push(format!(
                "{} steps with configuration A{}",
                self.a_ell_minus_1.len(),
                ell - 1
            ));
        }
        if self.b.len() > 1 {
            out.push(format!("{} steps with a B configuration", self.b.len()));
        }
        out
    }
}

/// Builds construction sequences step by step.
#[derive(Clone, Debug)]
pub struct SequenceBuilder {
    ell: usize,
    bound: usize,
    edges: EdgeSet,
    alive: Vec<bool>,
    seq: ConstructionSequence,
}

impl SequenceBuilder {
    pub fn new(bound: usize, start: Cycle) -> Self {
        let ell = start.len();
        let mut alive = vec![false; bound];
        start.vertices().iter().for_each(|&v| alive[v] = true);
        SequenceBuilder {
            ell,
            bound,
            edges: start.edge_set().clone(),
            alive,
            seq: ConstructionSequence {
                ell,
                start,
                steps: Vec::new(),
            },
        }
    }

    pub fn current(&self) -> Graph {
        Graph::spanned_by(self.bound, self.edges.iter())
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn cycle_count(&self) -> usize {
        self.seq.cycle_count()
    }

    /// Adds `c` unless it already lies inside the current graph.
    pub fn push_if_new(&mut self, c: &Cycle) -> Result<(), CycleError> {
        if c.edge_set().is_subset(&self.edges) {
            return Ok(());
        }
        self.push(c.clone())
    }

    pub fn can_add(&self, c: &Cycle) -> bool {
        c.shares_edge_with(&self.edges) && !c.edge_set().is_subset(&self.edges)
    }

    /// Adds `c`, which must share an edge with and not lie inside the current graph.
    pub fn push(&mut self, c: Cycle) -> Result<(), CycleError> {
        if !self.can_add(&c) {
            return Err(CycleError::NotAnExtension { cycle: c });
        }
        let before = self.current();
        let new_edges: Vec<Edge> = c.edge_set().difference(&self.edges).copied().collect();
        let new_vertices: Vec<usize> = c
            .vertices()
            .iter()
            .copied()
            .filter(|&v| !self.alive[v])
            .collect();
        let c_new = {
            let sub = Graph::spanned_by(self.bound, new_edges.iter()).induced(&new_vertices);
            let mut mask = vec![false; self.bound];
            new_vertices.iter().for_each(|&v| mask[v] = true);
            sub.components()
                .into_iter()
                .filter(|comp| mask[comp[0]])
                .count()
        };
        let config = if self.ell >= 5 {
            classify_step(&before, &c, self.ell).ok()
        } else {
            None
        };
        for &e in &new_edges {
            self.edges.insert(e);
        }
        new_vertices.iter().for_each(|&v| self.alive[v] = true);
        self.seq.steps.push(ConstructionStep {
            e_new: new_edges.len(),
            v_new: new_vertices.len(),
            c_new,
            new_edges,
            added_cycle: c,
            config,
        });
        Ok(())
    }

    /// Repeatedly adds the smallest cycle of `pool` that extends the current
    /// graph, restricted to cycles accepted by `allowed`.
    pub fn complete_from(&mut self, pool: &[Cycle], allowed: impl Fn(&Cycle) -> bool) {
        loop {
            let next = pool.iter().find(|c| allowed(c) && self.can_add(c));
            match next {
                Some(c) => self.push(c.clone()).expect("checked extension"),
                None => return,
            }
        }
    }

    pub fn finish(self) -> ConstructionSequence {
        self.seq
    }
}

/// The growth rule from `start`, taking the lexicographically
/// smallest admissible cycle at each step. `cycles` must be sorted.
pub fn construction_sequence(
    cycles: &[Cycle],
    start: &Cycle,
    bound: usize,
) -> Result<ConstructionSequence, CycleError> {
    if !cycles.contains(start) {
        return Err(CycleError::StartNotMember(start.clone()));
    }
    let mut b = SequenceBuilder::new(bound, start.clone());
    b.complete_from(cycles, |_| true);
    Ok(b.finish())
}

/// A C_ℓ-component with its member cycles and a construction sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CLComponent {
    pub union_graph: Graph,
    pub member_cycles: Vec<Cycle>,
    pub sequence: ConstructionSequence,
}

#[derive(Serialize)]
struct ComponentJson<'a> {
    edges: Vec<Edge>,
    member_cycles: &'a [Cycle],
    sequence: &'a ConstructionSequence,
}

impl CLComponent {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ComponentJson {
            edges: self.union_graph.edges().iter().copied().collect(),
            member_cycles: &self.member_cycles,
            sequence: &self.sequence,
        })
        .expect("component serialises")
    }
}

/// C_ℓ-components of `g`, ordered by their smallest member cycle.
pub fn cl_components(g: &Graph, ell: usize) -> Result<Vec<CLComponent>, CycleError> {
    let cycles = enumerate_cycles(g, ell)?;
    let mut parent: Vec<usize> = (0..cycles.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut owner: BTreeMap<Edge, usize> = BTreeMap::new();
    for (i, c) in cycles.iter().enumerate() {
        for &e in c.edge_set() {
            if let Some(&j) = owner.get(&e) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            } else {
                owner.insert(e, i);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Cycle>> = BTreeMap::new();
    for (i, c) in cycles.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(c.clone());
    }
    Ok(groups
        .into_values()
        .map(|members| {
            let edges: EdgeSet = members
                .iter()
                .flat_map(|c| c.edge_set().iter().copied())
                .collect();
            let sequence = construction_sequence(&members, &members[0], g.id_bound())
                .expect("start is a member");
            CLComponent {
                union_graph: Graph::spanned_by(g.id_bound(), edges.iter()),
                member_cycles: members,
                sequence,
            }
        })
        .collect())
}
