//! Proper edge colourings without rainbow ℓ-cycles.
//!
//! [`colour_rainbow_free`] colours a graph with m(G) < (ℓ−1)/(ℓ−2) one
//! C_ℓ-component at a time, following the case analysis on the configurations
//! of a construction sequence. [`verify_certificate`] checks any colouring
//! independently; [`forces_rainbow_bruteforce`] decides G →rb C_ℓ for tiny G.

mod c4;
mod cases;
mod oracle;
mod plan;
mod verify;

use std::collections::BTreeMap;

use serde_json::Value;
use thiserror::Error;

use crate::cycles::{cl_components, CLComponent, CycleError};
use crate::density::{max_density, DensityError, DensityWitness};
use crate::graph::{Edge, Graph, GraphError};
use crate::rational::Rational;

pub use c4::{colour_c4_rainbow_free, C4_SEARCH_EDGE_CAP};
pub use oracle::{forces_rainbow_bruteforce, FORCE_CHECK_EDGE_CAP};
pub use verify::{verify_certificate, Certificate, CertificateJson, Verdict, VerifyError};

pub type Colour = u32;

/// Edge → colour map plus the next unused colour id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeColouring {
    assignment: BTreeMap<Edge, Colour>,
    next_fresh: Colour,
}

impl EdgeColouring {
    pub fn new() -> Self {
        Self::default()
    }

    /// Wraps an explicit assignment; fresh colours start above its maximum.
    pub fn from_assignment(assignment: BTreeMap<Edge, Colour>) -> Self {
        let next_fresh = assignment.values().max().map_or(0, |&c| c + 1);
        EdgeColouring {
            assignment,
            next_fresh,
        }
    }

    /// A colour never handed out before.
    pub fn fresh(&mut self) -> Colour {
        let c = self.next_fresh;
        self.next_fresh += 1;
        c
    }

    pub fn next_fresh(&self) -> Colour {
        self.next_fresh
    }

    pub fn assign(&mut self, e: Edge, c: Colour) {
        self.assignment.insert(e, c);
        self.next_fresh = self.next_fresh.max(c + 1);
    }

    pub fn get(&self, e: Edge) -> Option<Colour> {
        self.assignment.get(&e).copied()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, Colour)> + '_ {
        self.assignment.iter().map(|(&e, &c)| (e, c))
    }

    pub fn assignment(&self) -> &BTreeMap<Edge, Colour> {
        &self.assignment
    }

    /// First vertex carrying two edges of one colour, with that colour.
    pub fn conflict(&self) -> Option<(usize, Colour)> {
        let mut seen: BTreeMap<(usize, Colour), Edge> = BTreeMap::new();
        for (e, c) in self.iter() {
            for x in e.endpoints() {
                if seen.insert((x, c), e).is_some() {
                    return Some((x, c));
                }
            }
        }
        None
    }
}

#[derive(Debug, Error)]
pub enum ColouringError {
    #[error("cycle length {0} is not supported here (need at least 5)")]
    UnsupportedLength(usize),
    #[error("maximum density {} is not below {bound}", .witness.value)]
    DensityPrecondition {
        bound: Rational,
        witness: DensityWitness,
    },
    #[error("a C4-chain has maximum density {} which is not below 4/3", .witness.value)]
    ChainTooDense { witness: DensityWitness },
    #[error("case analysis dead end: {reason}")]
    DeadEnd { reason: String, component: Value },
    #[error("partial colouring is improper at vertex {vertex} (colour {colour})")]
    Improper { vertex: usize, colour: Colour },
    #[error("coloured edge {0} is not an edge of the graph")]
    ForeignEdge(Edge),
    #[error("graph has {edges} edges, the exhaustive search is limited to {cap}")]
    TooManyEdges { edges: usize, cap: usize },
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl ColouringError {
    pub fn is_dead_end(&self) -> bool {
        matches!(self, ColouringError::DeadEnd { .. })
    }
}

/// Gives every uncoloured edge its own fresh colour.
pub fn extend_to_proper(
    g: &Graph,
    partial: &EdgeColouring,
) -> Result<EdgeColouring, ColouringError> {
    if let Some(e) = partial.assignment.keys().find(|&&e| !g.contains_edge(e)) {
        return Err(ColouringError::ForeignEdge(*e));
    }
    if let Some((vertex, colour)) = partial.conflict() {
        return Err(ColouringError::Improper { vertex, colour });
    }
    let mut out = partial.clone();
    for &e in g.edges() {
        if out.get(e).is_none() {
            let c = out.fresh();
            out.assign(e, c);
        }
    }
    Ok(out)
}

/// A proper colouring of `g` in which every ℓ-cycle repeats a colour.
///
/// Requires ℓ ≥ 5 and m(g) < (ℓ−1)/(ℓ−2), checked exactly. Components are
/// taken from the residual graph one at a time, each coloured with colours
/// not used before; leftover edges get distinct fresh colours.
pub fn colour_rainbow_free(g: &Graph, ell: usize) -> Result<EdgeColouring, ColouringError> {
    if ell < 5 {
        return Err(ColouringError::UnsupportedLength(ell));
    }
    check_density(g, Rational::cycle_m2(ell))?;
    let mut colouring = EdgeColouring::new();
    let mut residual = g.clone();
    loop {
        let comps = cl_components(&residual, ell)?;
        let Some(comp) = comps.into_iter().next() else {
            break;
        };
        colour_component(&comp, ell, g.id_bound(), &mut colouring)?;
        if let Some((vertex, colour)) = colouring.conflict() {
            return Err(ColouringError::Improper { vertex, colour });
        }
        residual = residual.remove_edges(comp.union_graph.edges())?;
    }
    extend_to_proper(g, &colouring)
}

fn check_density(g: &Graph, bound: Rational) -> Result<(), ColouringError> {
    if g.vertex_count() == 0 {
        return Ok(());
    }
    let witness = max_density(g)?;
    if witness.value >= bound {
        return Err(ColouringError::DensityPrecondition { bound, witness });
    }
    Ok(())
}

fn colour_component(
    comp: &CLComponent,
    ell: usize,
    bound: usize,
    colouring: &mut EdgeColouring,
) -> Result<(), ColouringError> {
    let mut planner = cases::Planner::new(ell, bound, &comp.member_cycles);
    let plans = planner.plans(&comp.sequence, 0);
    let mut failures = Vec::new();
    for p in &plans {
        match plan::execute(p, &comp.member_cycles) {
            Ok(classes) => {
                for class in classes {
                    let c = colouring.fresh();
                    for e in class {
                        colouring.assign(e, c);
                    }
                }
                return Ok(());
            }
            Err(why) => failures.push(format!("{}: {}", p.label, why)),
        }
    }
    let mut reason = planner.notes().join("; ");
    if plans.is_empty() && reason.is_empty() {
        reason = "no candidate colouring plan".into();
    }
    if !failures.is_empty() {
        if !reason.is_empty() {
            reason.push_str("; ");
        }
        reason.push_str(&failures.join("; "));
    }
    Err(ColouringError::DeadEnd {
        reason,
        component: comp.to_json(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::enumerate_cycles;

    fn no_rainbow(g: &Graph, ell: usize, col: &EdgeColouring) -> bool {
        enumerate_cycles(g, ell).unwrap().iter().all(|c| {
            let mut cs: Vec<Colour> = c.edges().iter().map(|&e| col.get(e).unwrap()).collect();
            cs.sort();
            cs.dedup();
            cs.len() < ell
        })
    }

    #[test]
    fn pentagon_gets_one_repeated_pair() {
        let g = Graph::cycle(5);
        let col = colour_rainbow_free(&g, 5).unwrap();
        assert_eq!(col.len(), 5);
        assert!(col.conflict().is_none());
        let mut counts: BTreeMap<Colour, usize> = BTreeMap::new();
        for (_, c) in col.iter() {
            *counts.entry(c).or_default() += 1;
        }
        assert_eq!(counts.values().filter(|&&n| n == 2).count(), 1);
        assert!(no_rainbow(&g, 5, &col));
    }

    #[test]
    fn glued_pentagons() {
        let g = Graph::from_edges(
            8,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (0, 5),
                (5, 6),
                (6, 7),
                (7, 1),
            ],
        )
        .unwrap();
        let col = colour_rainbow_free(&g, 5).unwrap();
        assert!(col.conflict().is_none());
        assert!(no_rainbow(&g, 5, &col));
    }

    #[test]
    fn rejects_dense_input_with_witness() {
        match colour_rainbow_free(&Graph::complete_bipartite(2, 4), 5) {
            Err(ColouringError::DensityPrecondition { bound, witness }) => {
                assert_eq!(bound, Rational::new(4, 3));
                assert_eq!(witness.value, Rational::new(4, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            colour_rainbow_free(&Graph::cycle(4), 4),
            Err(ColouringError::UnsupportedLength(4))
        ));
    }

    #[test]
    fn extend_examples() {
        let g = Graph::cycle(5);
        let full = extend_to_proper(&g, &EdgeColouring::new()).unwrap();
        let mut cs: Vec<Colour> = full.iter().map(|(_, c)| c).collect();
        cs.dedup();
        assert_eq!(cs.len(), 5);

        let mut partial = EdgeColouring::new();
        partial.assign(Edge::new(0, 1), 7);
        partial.assign(Edge::new(2, 3), 7);
        let full = extend_to_proper(&g, &partial).unwrap();
        assert_eq!(full.len(), 5);
        assert_eq!(full.get(Edge::new(0, 1)), Some(7));
        assert_eq!(full.get(Edge::new(2, 3)), Some(7));
        assert!(full.conflict().is_none());

        let mut bad = EdgeColouring::new();
        bad.assign(Edge::new(0, 1), 1);
        bad.assign(Edge::new(1, 2), 1);
        assert!(matches!(
            extend_to_proper(&g, &bad),
            Err(ColouringError::Improper {
                vertex: 1,
                colour: 1
            })
        ));
    }

    #[test]
    fn colours_of_distinct_components_are_disjoint() {
        // two pentagons sharing a vertex
        let g = Graph::from_edges(
            9,
            [
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (0, 5),
                (5, 6),
                (6, 7),
                (7, 8),
                (8, 0),
            ],
        )
        .unwrap();
        let col = colour_rainbow_free(&g, 5).unwrap();
        let first: Vec<Colour> = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]
            .iter()
            .map(|&(a, b)| col.get(Edge::new(a, b)).unwrap())
            .collect();
        let second: Vec<Colour> = [(0, 5), (5, 6), (6, 7), (7, 8), (0, 8)]
            .iter()
            .map(|&(a, b)| col.get(Edge::new(a, b)).unwrap())
            .collect();
        assert!(first.iter().all(|c| !second.contains(c)));
    }
}
