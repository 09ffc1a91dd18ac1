//! Seeded Monte Carlo scans of G(n, p) at p = c·n^(−θ).
//!
//! Every (n, trial) pair owns one ChaCha8 stream, shared by all values of c.
//! Since G(n, p) keeps a pair iff its uniform draw is below p, the sampled
//! graphs are nested in c and every monotone property is monotone per trial.
//!
//! These are finite-size transition curves. They illustrate the scaling and
//! prove nothing about the asymptotic thresholds.

use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::colouring::{colour_rainbow_free, verify_certificate, ColouringError};
use crate::density::{find_small_dense_subgraph, max_density, DensityError};
use crate::graph::{sample_gnp_with, Graph, GraphError};
use crate::rational::Rational;

pub const DEFAULT_N: [usize; 3] = [50, 100, 200];
pub const DEFAULT_C: [f64; 8] = [0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0];
pub const DEFAULT_TRIALS: usize = 200;
/// Largest n accepted by [`colourability_scan`].
pub const COLOUR_SCAN_N_CAP: usize = 60;
/// Subgraph size bound of the obstruction search.
pub const OBSTRUCTION_MAX_VERTICES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColourerOutcome {
    Success,
    PreconditionFail,
    DeadEnd,
}

impl ColourerOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            ColourerOutcome::Success => "success",
            ColourerOutcome::PreconditionFail => "precondition_fail",
            ColourerOutcome::DeadEnd => "dead_end",
        }
    }
}

/// One sampled graph. `p` is `c · n^(−θ)` with θ documented per scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub ell: usize,
    pub n: usize,
    pub c: f64,
    pub p: f64,
    pub seed: u64,
    pub trial: usize,
    pub obstruction_found: bool,
    pub colourer_outcome: Option<ColourerOutcome>,
    pub density: Option<Rational>,
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("c must be finite and nonnegative, got {0}")]
    BadMultiplier(f64),
    #[error("cycle length {ell} is not supported by this scan")]
    UnsupportedLength { ell: usize },
    #[error("n = {n} exceeds the cap {cap} of this scan")]
    TooLarge { n: usize, cap: usize },
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Grid and seed shared by all scans.
#[derive(Clone, Debug)]
pub struct ScanParams {
    pub n_list: Vec<usize>,
    pub c_list: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Fill `elapsed_ms`. Off by default so that output is reproducible.
    pub timing: bool,
}

impl ScanParams {
    pub fn new(n_list: Vec<usize>, c_list: Vec<f64>, trials: usize, seed: u64) -> Self {
        ScanParams {
            n_list,
            c_list,
            trials,
            seed,
            timing: false,
        }
    }

    fn validate(&self) -> Result<(), ExperimentError> {
        if self.trials == 0 {
            return Err(ExperimentError::NoTrials);
        }
        if let Some(&c) = self.c_list.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(ExperimentError::BadMultiplier(c));
        }
        Ok(())
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// The stream of trial `trial` at size `n`; independent of c.
pub fn trial_rng(seed: u64, n: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(n as u64)));
    rng.set_stream(trial as u64);
    rng
}

/// c · n^(−θ), clamped to 1.
pub fn edge_probability(c: f64, n: usize, theta: Rational) -> f64 {
    (c * (n as f64).powf(-theta.to_f64())).min(1.0)
}

/// θ = 1/m₂(C_ℓ) = (ℓ−2)/(ℓ−1).
pub fn cycle_exponent(ell: usize) -> Rational {
    Rational::cycle_m2(ell).recip()
}

/// θ = 1/m(K_{2,4}) = 3/4.
pub fn k24_exponent() -> Rational {
    Rational::new(3, 4)
}

fn run_scan<F>(
    params: &ScanParams,
    ell: usize,
    theta: Rational,
    trial_fn: F,
) -> Result<Vec<TrialRecord>, ExperimentError>
where
    F: Fn(&Graph) -> Result<(bool, Option<ColourerOutcome>, Option<Rational>), ExperimentError>
        + Sync,
{
    params.validate()?;
    let jobs: Vec<(usize, f64, usize)> = params
        .n_list
        .iter()
        .flat_map(|&n| {
            params
                .c_list
                .iter()
                .flat_map(move |&c| (0..params.trials).map(move |t| (n, c, t)))
        })
        .collect();
    jobs.par_iter()
        .map(|&(n, c, trial)| {
            let p = edge_probability(c, n, theta);
            let start = Instant::now();
            let g = sample_gnp_with(n, p, &mut trial_rng(params.seed, n, trial))?;
            let (obstruction_found, colourer_outcome, density) = trial_fn(&g)?;
            let elapsed_ms = params.timing.then(|| start.elapsed().as_millis() as u64);
            Ok(TrialRecord {
                ell,
                n,
                c,
                p,
                seed: params.seed,
                trial,
                obstruction_found,
                colourer_outcome,
                density,
                elapsed_ms,
            })
        })
        .collect()
}

/// Two vertices with four common neighbours span a K_{2,4}.
pub fn contains_k24(g: &Graph) -> bool {
    let verts: Vec<usize> = g.vertices().filter(|&v| g.degree(v) >= 2).collect();
    let mut mark = vec![false; g.id_bound()];
    for (i, &a) in verts.iter().enumerate() {
        if g.degree(a) < 4 {
            continue;
        }
        g.neighbours(a).iter().for_each(|&x| mark[x] = true);
        let found = verts[i + 1..].iter().any(|&b| {
            g.degree(b) >= 4 && g.neighbours(b).iter().filter(|&&x| mark[x]).count() >= 4
        });
        g.neighbours(a).iter().for_each(|&x| mark[x] = false);
        if found {
            return true;
        }
    }
    false
}

/// K_{2,4} presence in G(n, c·n^(−3/4)). Records carry ℓ = 4.
pub fn k24_presence_scan(params: &ScanParams) -> Result<Vec<TrialRecord>, ExperimentError> {
    run_scan(params, 4, k24_exponent(), |g| {
        Ok((contains_k24(g), None, None))
    })
}

/// Subgraphs on at most 12 vertices with density at least m₂(C_ℓ) in
/// G(n, c·n^(−1/m₂(C_ℓ))). `density` is that of the witness found.
pub fn obstruction_scan(
    ell: usize,
    params: &ScanParams,
) -> Result<Vec<TrialRecord>, ExperimentError> {
    if !(4..=7).contains(&ell) {
        return Err(ExperimentError::UnsupportedLength { ell });
    }
    let bound = Rational::cycle_m2(ell);
    run_scan(params, ell, cycle_exponent(ell), |g| {
        let found = find_small_dense_subgraph(g, bound, OBSTRUCTION_MAX_VERTICES)?;
        Ok((found.is_some(), None, found.map(|w| w.value)))
    })
}

/// Runs the colourer on every sample below the density bound and verifies
/// the result. `density` is m(G); `obstruction_found` means m(G) ≥ m₂(C_ℓ).
pub fn colourability_scan(
    ell: usize,
    params: &ScanParams,
) -> Result<Vec<TrialRecord>, ExperimentError> {
    if ell < 5 {
        return Err(ExperimentError::UnsupportedLength { ell });
    }
    if let Some(&n) = params.n_list.iter().find(|&&n| n > COLOUR_SCAN_N_CAP) {
        return Err(ExperimentError::TooLarge {
            n,
            cap: COLOUR_SCAN_N_CAP,
        });
    }
    let bound = Rational::cycle_m2(ell);
    run_scan(params, ell, cycle_exponent(ell), |g| {
        let m = if g.vertex_count() == 0 {
            Rational::from_integer(0)
        } else {
            max_density(g)?.value
        };
        if m >= bound {
            return Ok((true, Some(ColourerOutcome::PreconditionFail), Some(m)));
        }
        let outcome = match colour_rainbow_free(g, ell) {
            Ok(col) => match verify_certificate(g, ell, &col) {
                Ok(cert) if cert.verdict.proper && cert.verdict.rainbow_cycle.is_none() => {
                    ColourerOutcome::Success
                }
                _ => ColourerOutcome::DeadEnd,
            },
            Err(ColouringError::DensityPrecondition { .. }) => ColourerOutcome::PreconditionFail,
            Err(_) => ColourerOutcome::DeadEnd,
        };
        Ok((false, Some(outcome), Some(m)))
    })
}

pub const CSV_HEADER: &str =
    "ell,n,c,p,seed,trial,obstruction_found,colourer_outcome,density,elapsed_ms";

/// Header plus one row per record; absent values are empty fields.
pub fn emit_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.ell,
            r.n,
            r.c,
            r.p,
            r.seed,
            r.trial,
            r.obstruction_found,
            r.colourer_outcome.map_or("", |o| o.as_str()),
            r.density
                .as_ref()
                .map(|d| d.to_string())
                .unwrap_or_default(),
            r.elapsed_ms.map(|t| t.to_string()).unwrap_or_default(),
        );
    }
    out
}

/// Fraction of trials with `obstruction_found` at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PresenceRow {
    pub n: usize,
    pub c: f64,
    pub trials: usize,
    pub found: usize,
    pub fraction: f64,
    /// Binomial standard error of `fraction`.
    pub sigma: f64,
    pub dead_ends: usize,
}

/// Per (n, c) summary in record order.
pub fn presence_summary(records: &[TrialRecord]) -> Vec<PresenceRow> {
    let mut rows: Vec<PresenceRow> = Vec::new();
    for r in records {
        let same = rows.last().is_some_and(|row| row.n == r.n && row.c == r.c);
        if !same {
            rows.push(PresenceRow {
                n: r.n,
                c: r.c,
                trials: 0,
                found: 0,
                fraction: 0.0,
                sigma: 0.0,
                dead_ends: 0,
            });
        }
        let row = rows.last_mut().expect("just pushed");
        row.trials += 1;
        row.found += r.obstruction_found as usize;
        row.dead_ends += (r.colourer_outcome == Some(ColourerOutcome::DeadEnd)) as usize;
    }
    for row in &mut rows {
        row.fraction = row.found as f64 / row.trials as f64;
        row.sigma = (row.fraction * (1.0 - row.fraction) / row.trials as f64).sqrt();
    }
    rows
}

/// Whether the fractions at one n never drop by more than three combined
/// standard errors between consecutive grid points.
pub fn nondecreasing_within_3_sigma(rows: &[PresenceRow]) -> bool {
    rows.windows(2).all(|w| {
        let slack = 3.0 * (w[0].sigma.powi(2) + w[1].sigma.powi(2)).sqrt();
        w[1].fraction + slack >= w[0].fraction
    })
}
