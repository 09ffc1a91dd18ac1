//! Rainbow-C_4-free colourings along C_4-chains.

use crate::cycles::cl_components;
use crate::density::max_density;
use crate::graph::{Edge, Graph};
use crate::rational::Rational;

use super::oracle::rainbow_free_colouring;
use super::plan::{execute, Plan};
use super::{extend_to_proper, ColouringError, EdgeColouring};

/// Largest chain handed to the exhaustive fallback.
pub const C4_SEARCH_EDGE_CAP: usize = 16;

/// A proper colouring of `g` without a rainbow 4-cycle, provided every
/// maximal C_4-chain has density below 4/3.
pub fn colour_c4_rainbow_free(g: &Graph) -> Result<EdgeColouring, ColouringError> {
    let bound = Rational::new(4, 3);
    let mut colouring = EdgeColouring::new();
    let mut residual = g.clone();
    while let Some(comp) = cl_components(&residual, 4)?.into_iter().next() {
        let witness = max_density(&comp.union_graph)?;
        if witness.value >= bound {
            return Err(ColouringError::ChainTooDense { witness });
        }
        let simple = comp.sequence.steps.iter().all(|s| s.v_new == 2);
        let planned = if simple {
            execute(
                &Plan::default_rule("chain", comp.sequence.clone()),
                &comp.member_cycles,
            )
            .ok()
        } else {
            None
        };
        let classes = match planned {
            Some(classes) => classes,
            None => {
                let edges: Vec<Edge> = comp.union_graph.edges().iter().copied().collect();
                if edges.len() > C4_SEARCH_EDGE_CAP {
                    return Err(ColouringError::TooManyEdges {
                        edges: edges.len(),
                        cap: C4_SEARCH_EDGE_CAP,
                    });
                }
                let Some(colours) = rainbow_free_colouring(&edges, &comp.member_cycles) else {
                    return Err(ColouringError::DeadEnd {
                        reason: "every proper colouring of the chain has a rainbow 4-cycle".into(),
                        component: comp.to_json(),
                    });
                };
                let count = colours.iter().max().map_or(0, |&c| c as usize + 1);
                let mut classes = vec![Vec::new(); count];
                edges
                    .iter()
                    .zip(&colours)
                    .for_each(|(&e, &c)| classes[c as usize].push(e));
                classes
            }
        };
        for class in classes {
            let c = colouring.fresh();
            class.into_iter().for_each(|e| colouring.assign(e, c));
        }
        residual = residual.remove_edges(comp.union_graph.edges())?;
    }
    extend_to_proper(g, &colouring)
}
