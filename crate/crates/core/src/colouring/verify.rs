//! Certificate checking from first principles.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cycles::{enumerate_cycles, Cycle, CycleError};
use crate::graph::{Edge, Graph, GraphError};

use super::{Colour, EdgeColouring};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("edge {0} has no colour")]
    Uncoloured(Edge),
    #[error("coloured edge {0} is not an edge of the graph")]
    ForeignEdge(Edge),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub proper: bool,
    pub rainbow_cycle: Option<Cycle>,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub graph: Graph,
    pub ell: usize,
    pub colouring: EdgeColouring,
    pub verdict: Verdict,
}

/// Wire form: `{n, ell, edges: [[u, v, colour], ...], proper, rainbow}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub n: usize,
    pub ell: usize,
    pub edges: Vec<[u64; 3]>,
    pub proper: bool,
    pub rainbow: Option<Vec<usize>>,
}

impl Certificate {
    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            n: self.graph.id_bound(),
            ell: self.ell,
            edges: self
                .colouring
                .iter()
                .map(|(e, c)| [e.u() as u64, e.v() as u64, c as u64])
                .collect(),
            proper: self.verdict.proper,
            rainbow: self
                .verdict
                .rainbow_cycle
                .as_ref()
                .map(|c| c.vertices().to_vec()),
        }
    }
}

impl CertificateJson {
    /// The graph and colouring the certificate talks about.
    pub fn parts(&self) -> Result<(Graph, EdgeColouring), VerifyError> {
        let g = Graph::from_edges(
            self.n,
            self.edges.iter().map(|t| (t[0] as usize, t[1] as usize)),
        )?;
        let assignment: BTreeMap<Edge, Colour> = self
            .edges
            .iter()
            .map(|t| (Edge::new(t[0] as usize, t[1] as usize), t[2] as Colour))
            .collect();
        Ok((g, EdgeColouring::from_assignment(assignment)))
    }
}

/// Recomputes properness and looks for a rainbow ℓ-cycle.
pub fn verify_certificate(
    g: &Graph,
    ell: usize,
    col: &EdgeColouring,
) -> Result<Certificate, VerifyError> {
    let colour_of = col.assignment();
    if let Some(e) = colour_of.keys().find(|&&e| !g.contains_edge(e)) {
        return Err(VerifyError::ForeignEdge(*e));
    }
    if let Some(e) = g.edges().iter().find(|e| !colour_of.contains_key(e)) {
        return Err(VerifyError::Uncoloured(*e));
    }
    let proper = g.vertices().all(|v| {
        let mut seen = BTreeSet::new();
        g.neighbours(v)
            .iter()
            .all(|&w| seen.insert(colour_of[&Edge::new(v, w)]))
    });
    let rainbow_cycle = enumerate_cycles(g, ell)?.into_iter().find(|c| {
        let colours: BTreeSet<Colour> = c.edge_set().iter().map(|e| colour_of[e]).collect();
        colours.len() == c.len()
    });
    Ok(Certificate {
        graph: g.clone(),
        ell,
        colouring: col.clone(),
        verdict: Verdict {
            proper,
            rainbow_cycle,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn around_pentagon(colours: [Colour; 5]) -> EdgeColouring {
        let mut col = EdgeColouring::new();
        for (i, c) in colours.into_iter().enumerate() {
            col.assign(Edge::new(i, (i + 1) % 5), c);
        }
        col
    }

    #[test]
    fn pentagon_with_repeats() {
        let cert =
            verify_certificate(&Graph::cycle(5), 5, &around_pentagon([1, 2, 1, 2, 3])).unwrap();
        assert!(cert.verdict.proper);
        assert_eq!(cert.verdict.rainbow_cycle, None);
    }

    #[test]
    fn rainbow_pentagon() {
        let cert =
            verify_certificate(&Graph::cycle(5), 5, &around_pentagon([1, 2, 3, 4, 5])).unwrap();
        assert!(cert.verdict.proper);
        assert_eq!(
            cert.verdict.rainbow_cycle,
            Some(Cycle::new(vec![0, 1, 2, 3, 4]))
        );
    }

    #[test]
    fn improper_is_reported() {
        let cert =
            verify_certificate(&Graph::cycle(5), 5, &around_pentagon([1, 1, 2, 3, 4])).unwrap();
        assert!(!cert.verdict.proper);
    }

    #[test]
    fn partial_is_an_error() {
        let mut col = around_pentagon([1, 2, 1, 2, 3]);
        col = EdgeColouring::from_assignment(
            col.iter().filter(|(e, _)| *e != Edge::new(0, 1)).collect(),
        );
        assert!(matches!(
            verify_certificate(&Graph::cycle(5), 5, &col),
            Err(VerifyError::Uncoloured(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::cycle(5);
        let cert = verify_certificate(&g, 5, &around_pentagon([1, 2, 3, 4, 5])).unwrap();
        let text = serde_json::to_string(&cert.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"n":5,"ell":5,"edges":[[0,1,1],[0,4,5],[1,2,2],[2,3,3],[3,4,4]],"proper":true,"rainbow":[0,1,2,3,4]}"#
        );
        let back: CertificateJson = serde_json::from_str(&text).unwrap();
        let (g2, col2) = back.parts().unwrap();
        assert_eq!(g2.edges(), g.edges());
        assert_eq!(verify_certificate(&g2, 5, &col2).unwrap().to_json(), back);
    }
}
