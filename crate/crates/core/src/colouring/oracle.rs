//! Exhaustive search over proper colourings up to colour renaming.

use std::collections::BTreeMap;

use crate::cycles::{enumerate_cycles, Cycle};
use crate::graph::{Edge, Graph};

use super::ColouringError;

/// Largest edge count accepted by [`forces_rainbow_bruteforce`].
pub const FORCE_CHECK_EDGE_CAP: usize = 12;

/// A proper colouring of `edges` (restricted growth colour ids) in which no
/// cycle of `cycles` is rainbow, if one exists.
pub(crate) fn rainbow_free_colouring(edges: &[Edge], cycles: &[Cycle]) -> Option<Vec<u32>> {
    let index: BTreeMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut closing: Vec<Vec<Vec<usize>>> = vec![Vec::new(); edges.len()];
    for c in cycles {
        let ids: Vec<usize> = c.edge_set().iter().map(|e| index[e]).collect();
        let last = *ids.iter().max().expect("cycle has edges");
        closing[last].push(ids);
    }
    let adjacent: Vec<Vec<usize>> = (0..edges.len())
        .map(|i| {
            (0..i)
                .filter(|&j| edges[i].is_adjacent_to(edges[j]))
                .collect()
        })
        .collect();
    let mut colours = vec![0u32; edges.len()];
    search(0, 0, &mut colours, &adjacent, &closing).then_some(colours)
}

fn search(
    i: usize,
    used: u32,
    colours: &mut [u32],
    adjacent: &[Vec<usize>],
    closing: &[Vec<Vec<usize>>],
) -> bool {
    if i == colours.len() {
        return true;
    }
    for c in 0..=used {
        if adjacent[i].iter().any(|&j| colours[j] == c) {
            continue;
        }
        colours[i] = c;
        let rainbow = closing[i].iter().any(|ids| {
            let mut seen: Vec<u32> = ids.iter().map(|&j| colours[j]).collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        });
        if !rainbow && search(i + 1, used.max(c + 1), colours, adjacent, closing) {
            return true;
        }
    }
    false
}

/// Whether every proper edge colouring of `g` has a rainbow ℓ-cycle.
pub fn forces_rainbow_bruteforce(g: &Graph, ell: usize) -> Result<bool, ColouringError> {
    if g.edge_count() > FORCE_CHECK_EDGE_CAP {
        return Err(ColouringError::TooManyEdges {
            edges: g.edge_count(),
            cap: FORCE_CHECK_EDGE_CAP,
        });
    }
    let cycles = enumerate_cycles(g, ell)?;
    let edges: Vec<Edge> = g.edges().iter().copied().collect();
    Ok(rainbow_free_colouring(&edges, &cycles).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k24_forces_a_rainbow_c4() {
        assert!(forces_rainbow_bruteforce(&Graph::complete_bipartite(2, 4), 4).unwrap());
    }

    #[test]
    fn single_cycles_do_not_force() {
        assert!(!forces_rainbow_bruteforce(&Graph::cycle(4), 4).unwrap());
        assert!(!forces_rainbow_bruteforce(&Graph::cycle(5), 5).unwrap());
        assert!(!forces_rainbow_bruteforce(&Graph::complete_bipartite(2, 3), 4).unwrap());
    }

    #[test]
    fn no_cycles_means_no_force() {
        assert!(!forces_rainbow_bruteforce(&Graph::cycle(6), 5).unwrap());
    }

    #[test]
    fn edge_cap() {
        assert!(matches!(
            forces_rainbow_bruteforce(&Graph::complete(6), 4),
            Err(ColouringError::TooManyEdges { edges: 15, cap: 12 })
        ));
    }
}
