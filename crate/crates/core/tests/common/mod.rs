//! Random test corpora shared by the integration tests.
#![allow(dead_code)]

use rainbow_cycles::density::max_density;
use rainbow_cycles::graph::{sample_gnp_with, Graph};
use rainbow_cycles::rational::Rational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_N: usize = 40;

struct Builder {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            n: 0,
            edges: Vec::new(),
            adj: Vec::new(),
        }
    }

    fn vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.n += 1;
        self.n - 1
    }

    fn edge(&mut self, a: usize, b: usize) -> bool {
        if a == b || self.adj[a].contains(&b) {
            return false;
        }
        self.adj[a].push(b);
        self.adj[b].push(a);
        self.edges.push((a, b));
        true
    }

    /// Path from `a` to `b` through `len − 1` new vertices.
    fn handle(&mut self, a: usize, b: usize, len: usize) {
        let mut prev = a;
        for _ in 1..len {
            let x = self.vertex();
            self.edge(prev, x);
            prev = x;
        }
        self.edge(prev, b);
    }

    fn cycle(&mut self, len: usize) {
        let first = self.vertex();
        let last = (1..len).fold(first, |prev, _| {
            let x = self.vertex();
            self.edge(prev, x);
            x
        });
        self.edge(last, first);
    }

    /// A self-avoiding walk with `len` edges avoiding `banned`, if found.
    fn walk(&self, rng: &mut ChaCha8Rng, len: usize, banned: &[usize]) -> Option<Vec<usize>> {
        let starts: Vec<usize> = (0..self.n)
            .filter(|v| !banned.contains(v) && !self.adj[*v].is_empty())
            .collect();
        let mut w = vec![*starts.choose(rng)?];
        while w.len() <= len {
            let last = *w.last().unwrap();
            let next: Vec<usize> = self.adj[last]
                .iter()
                .copied()
                .filter(|x| !w.contains(x) && !banned.contains(x))
                .collect();
            w.push(*next.choose(rng)?);
        }
        Some(w)
    }

    fn graph(&self) -> Graph {
        Graph::from_edges(self.n, self.edges.iter().copied()).unwrap()
    }
}

/// Glues ℓ-cycles onto earlier ones: handles over existing paths (A-type
/// steps), pairs of handles over two disjoint paths (B-type steps), fresh
/// cycles, and some stray edges.
pub fn sparse_construction(rng: &mut ChaCha8Rng, ell: usize) -> Graph {
    let mut b = Builder::new();
    b.cycle(ell);
    let rounds = rng.gen_range(1..=10);
    for _ in 0..rounds {
        if b.n + ell > MAX_N {
            break;
        }
        match rng.gen_range(0..10) {
            0..=3 => {
                let r = rng.gen_range(1..ell);
                if let Some(w) = b.walk(rng, r, &[]) {
                    b.handle(w[0], w[r], ell - r);
                }
            }
            4..=6 => {
                let r1 = rng.gen_range(1..ell - 2);
                let r2 = rng.gen_range(1..ell - 1 - r1);
                if let Some(p1) = b.walk(rng, r1, &[]) {
                    if let Some(p2) = b.walk(rng, r2, &p1) {
                        let t1 = rng.gen_range(1..ell - r1 - r2);
                        let t2 = ell - r1 - r2 - t1;
                        b.handle(p1[r1], p2[0], t1);
                        b.handle(p2[r2], p1[0], t2);
                    }
                }
            }
            7 => {
                let anchor = rng.gen_range(0..b.n);
                let first = b.n;
                b.cycle(ell);
                if rng.gen_bool(0.5) {
                    b.edge(anchor, first);
                }
            }
            _ => {
                let x = rng.gen_range(0..b.n);
                let y = rng.gen_range(0..b.n);
                b.edge(x, y);
            }
        }
    }
    if b.n < MAX_N && rng.gen_bool(0.3) {
        let x = rng.gen_range(0..b.n);
        let y = b.vertex();
        b.edge(x, y);
    }
    let g = b.graph();
    let mut perm: Vec<usize> = (0..g.id_bound()).collect();
    perm.shuffle(rng);
    g.relabel(&perm)
}

/// G(n, p) with n ≤ 40 and average degree around the ℓ-cycle density bound.
pub fn sparse_gnp(rng: &mut ChaCha8Rng, ell: usize) -> Graph {
    let n = rng.gen_range(ell..=MAX_N);
    let d = 2.0 * (ell as f64 - 1.0) / (ell as f64 - 2.0);
    let p = (rng.gen_range(0.4..1.1) * d / n as f64).min(1.0);
    sample_gnp_with(n, p, rng).unwrap()
}

pub fn below_bound(g: &Graph, ell: usize) -> bool {
    g.edge_count() == 0 || max_density(g).unwrap().value < Rational::cycle_m2(ell)
}

/// `count` graphs per family (sparse constructions, then G(n, p)), each
/// with exact maximum density below (ℓ−1)/(ℓ−2).
pub fn soundness_corpus(ell: usize, count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (ell as u64) << 32);
    let mut out = Vec::with_capacity(2 * count);
    for family in 0..2 {
        let mut kept = 0;
        while kept < count {
            let g = if family == 0 {
                sparse_construction(&mut rng, ell)
            } else {
                sparse_gnp(&mut rng, ell)
            };
            if below_bound(&g, ell) {
                out.push(g);
                kept += 1;
            }
        }
    }
    out
}
