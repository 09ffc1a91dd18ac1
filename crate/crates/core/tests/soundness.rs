mod common;

use rainbow_cycles::colouring::{colour_rainbow_free, verify_certificate, ColouringError};
use rainbow_cycles::graph::serialize_edge_list;

fn check(ell: usize, count: usize, seed: u64) {
    let mut failures = Vec::new();
    for g in common::soundness_corpus(ell, count, seed) {
        match colour_rainbow_free(&g, ell) {
            Ok(col) => {
                let cert = verify_certificate(&g, ell, &col).unwrap();
                if !cert.verdict.proper || cert.verdict.rainbow_cycle.is_some() {
                    failures.push(format!(
                        "bad certificate {:?}\n{}",
                        cert.verdict,
                        serialize_edge_list(&g)
                    ));
                }
            }
            Err(ColouringError::DeadEnd { reason, .. }) => {
                failures.push(format!("dead end: {reason}\n{}", serialize_edge_list(&g)))
            }
            Err(e) => failures.push(format!("error {e}")),
        }
    }
    assert!(
        failures.is_empty(),
        "{} failures, first:\n{}",
        failures.len(),
        failures[0]
    );
}

fn seed(base: u64) -> u64 {
    base + std::env::var("SOUNDNESS_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

fn count() -> usize {
    std::env::var("SOUNDNESS_COUNT")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(150)
}

#[test]
fn pentagons() {
    check(5, count(), seed(11));
}

#[test]
fn hexagons() {
    check(6, count(), seed(12));
}

#[test]
fn heptagons() {
    check(7, count(), seed(13));
}
