//! The `rbc` command line.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::colouring::{
    colour_c4_rainbow_free, colour_rainbow_free, forces_rainbow_bruteforce, verify_certificate,
    CertificateJson, ColouringError,
};
use crate::cycles::{cl_components, enumerate_cycles};
use crate::density::{max_2_density, max_density};
use crate::experiments::{
    colourability_scan, cycle_exponent, edge_probability, emit_csv, k24_presence_scan,
    obstruction_scan, presence_summary, ScanParams, TrialRecord, DEFAULT_C, DEFAULT_N,
    DEFAULT_TRIALS,
};
use crate::graph::{parse_edge_list_reporting, sample_gnp, serialize_edge_list, Graph};

#[derive(Parser, Debug)]
#[command(
    name = "rbc",
    version,
    about = "Rainbow-cycle-free edge colourings of sparse graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Input {
    /// Edge-list file, `-` for standard input
    #[arg(long)]
    input: PathBuf,
    /// Write to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct Scan {
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_N)]
    n: Vec<usize>,
    #[arg(long = "c-grid", value_delimiter = ',', default_values_t = DEFAULT_C)]
    c_grid: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    /// Record wall-clock time per trial (makes output irreproducible)
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maximum density m(G) with a densest vertex set
    Density(Input),
    /// Maximum 2-density m2(G)
    M2(Input),
    /// All ℓ-cycles
    Cycles {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        ell: usize,
    },
    /// C_ℓ-components with construction sequences
    Components {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        ell: usize,
    },
    /// Proper colouring without a rainbow ℓ-cycle, as a verified certificate
    Colour {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        ell: usize,
    },
    /// Re-check a certificate
    Verify(Input),
    /// Decide by exhaustive search whether every proper colouring has a rainbow ℓ-cycle
    ForceCheck {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        ell: usize,
    },
    /// Sample G(n, p); give either --p or --c (with --ell, p = c·n^(−1/m2(C_ℓ)))
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "c")]
        p: Option<f64>,
        #[arg(long, requires = "ell")]
        c: Option<f64>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// K_{2,4} presence in G(n, c·n^(−3/4))
    ScanK24(Scan),
    /// Small subgraphs of density ≥ m2(C_ℓ) in G(n, c·n^(−1/m2(C_ℓ)))
    ScanObstruction {
        #[command(flatten)]
        scan: Scan,
        #[arg(long)]
        ell: usize,
    },
    /// Colour and verify samples below the density bound
    ScanColour {
        #[command(flatten)]
        scan: Scan,
        #[arg(long)]
        ell: usize,
    },
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
    detail: Option<serde_json::Value>,
}

fn domain(message: impl ToString) -> Failure {
    Failure {
        code: 1,
        message: message.to_string(),
        detail: None,
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn read(&mut self, path: &PathBuf) -> Result<String, Failure> {
        if path.as_os_str() == "-" {
            let mut text = String::new();
            self.stdin.read_to_string(&mut text).map_err(domain)?;
            Ok(text)
        } else {
            fs::read_to_string(path).map_err(|e| domain(format!("{}: {e}", path.display())))
        }
    }

    fn graph(&mut self, path: &PathBuf) -> Result<Graph, Failure> {
        let text = self.read(path)?;
        let (g, warnings) = parse_edge_list_reporting(&text).map_err(domain)?;
        for w in warnings {
            let _ = writeln!(self.stderr, "warning: line {}: {}", w.line, w.message);
        }
        Ok(g)
    }

    fn emit(&mut self, output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
        match output {
            Some(path) => {
                fs::write(path, text).map_err(|e| domain(format!("{}: {e}", path.display())))
            }
            None => self.stdout.write_all(text.as_bytes()).map_err(domain),
        }
    }

    fn emit_json<T: Serialize>(
        &mut self,
        output: &Option<PathBuf>,
        value: &T,
    ) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(value).expect("serialisable");
        text.push('\n');
        self.emit(output, &text)
    }
}

fn csv_lines<I: IntoIterator<Item = String>>(header: &str, rows: I) -> String {
    let mut out = format!("{header}\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 on a domain error, 2 on a usage error.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io {
        stdin,
        stdout,
        stderr,
    };
    match dispatch(cli.command, &mut io) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(io.stderr, "error: {}", f.message);
            if let Some(detail) = f.detail {
                let _ = writeln!(
                    io.stderr,
                    "{}",
                    serde_json::to_string_pretty(&detail).expect("serialisable")
                );
            }
            f.code
        }
    }
}

fn usage(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
        detail: None,
    }
}

fn colouring_failure(e: ColouringError) -> Failure {
    let detail = match &e {
        ColouringError::DensityPrecondition { witness, .. }
        | ColouringError::ChainTooDense { witness } => Some(json!({ "witness": witness })),
        ColouringError::DeadEnd { component, .. } => Some(json!({ "component": component })),
        _ => None,
    };
    Failure {
        code: 1,
        message: e.to_string(),
        detail,
    }
}

fn dispatch(command: Command, io: &mut Io) -> Result<(), Failure> {
    match command {
        Command::Density(a) => {
            let g = io.graph(&a.input)?;
            let w = max_density(&g).map_err(domain)?;
            io.emit_json(&a.output, &w)
        }
        Command::M2(a) => {
            let g = io.graph(&a.input)?;
            let w = max_2_density(&g).map_err(domain)?;
            io.emit_json(&a.output, &w)
        }
        Command::Cycles { io: a, ell } => {
            let g = io.graph(&a.input)?;
            let cycles = enumerate_cycles(&g, ell).map_err(domain)?;
            if a.format == Some(Format::Csv) {
                let rows = cycles.iter().map(|c| {
                    c.vertices()
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                });
                io.emit(&a.output, &csv_lines("cycle", rows))
            } else {
                io.emit_json(
                    &a.output,
                    &json!({ "ell": ell, "count": cycles.len(), "cycles": cycles }),
                )
            }
        }
        Command::Components { io: a, ell } => {
            let g = io.graph(&a.input)?;
            let comps = cl_components(&g, ell).map_err(domain)?;
            let out: Vec<serde_json::Value> = comps.iter().map(|c| c.to_json()).collect();
            io.emit_json(&a.output, &out)
        }
        Command::Colour { io: a, ell } => {
            let g = io.graph(&a.input)?;
            let col = match ell {
                4 => colour_c4_rainbow_free(&g),
                _ => colour_rainbow_free(&g, ell),
            }
            .map_err(colouring_failure)?;
            let cert = verify_certificate(&g, ell, &col).map_err(domain)?;
            io.emit_json(&a.output, &cert.to_json())?;
            if !cert.verdict.proper || cert.verdict.rainbow_cycle.is_some() {
                return Err(domain("the colouring failed verification"));
            }
            Ok(())
        }
        Command::Verify(a) => {
            let text = io.read(&a.input)?;
            let claimed: CertificateJson = serde_json::from_str(&text)
                .map_err(|e| domain(format!("malformed certificate: {e}")))?;
            let (g, col) = claimed.parts().map_err(domain)?;
            let cert = verify_certificate(&g, claimed.ell, &col)
                .map_err(domain)?
                .to_json();
            io.emit_json(&a.output, &cert)?;
            if cert != claimed {
                return Err(domain(
                    "the stated verdict does not match the recomputed one",
                ));
            }
            if !cert.proper || cert.rainbow.is_some() {
                return Err(domain("the colouring is improper or has a rainbow cycle"));
            }
            Ok(())
        }
        Command::ForceCheck { io: a, ell } => {
            let g = io.graph(&a.input)?;
            let forces = forces_rainbow_bruteforce(&g, ell).map_err(domain)?;
            io.emit_json(&a.output, &json!({ "forces_rainbow": forces }))
        }
        Command::Gnp {
            n,
            p,
            c,
            ell,
            seed,
            output,
        } => {
            let p = match (p, c, ell) {
                (Some(p), _, _) => p,
                (None, Some(c), Some(ell)) if ell >= 3 => {
                    edge_probability(c, n, cycle_exponent(ell))
                }
                (None, Some(_), _) => return Err(usage("--ell must be at least 3")),
                _ => return Err(usage("give --p or --c with --ell")),
            };
            let g = sample_gnp(n, p, seed).map_err(domain)?;
            io.emit(&output, &serialize_edge_list(&g))
        }
        Command::ScanK24(s) => {
            let records = k24_presence_scan(&params(&s)).map_err(domain)?;
            finish_scan(io, &s, &records)
        }
        Command::ScanObstruction { scan, ell } => {
            let records = obstruction_scan(ell, &params(&scan)).map_err(domain)?;
            finish_scan(io, &scan, &records)
        }
        Command::ScanColour { scan, ell } => {
            let records = colourability_scan(ell, &params(&scan)).map_err(domain)?;
            finish_scan(io, &scan, &records)?;
            let dead = presence_summary(&records)
                .iter()
                .map(|r| r.dead_ends)
                .sum::<usize>();
            if dead > 0 {
                return Err(domain(format!("{dead} samples hit a dead end")));
            }
            Ok(())
        }
    }
}

fn params(s: &Scan) -> ScanParams {
    ScanParams {
        n_list: s.n.clone(),
        c_list: s.c_grid.clone(),
        trials: s.trials,
        seed: s.seed,
        timing: s.timing,
    }
}

fn finish_scan(io: &mut Io, s: &Scan, records: &[TrialRecord]) -> Result<(), Failure> {
    for row in presence_summary(records) {
        let _ = writeln!(
            io.stderr,
            "n={} c={} found {}/{} ({:.3} ± {:.3})",
            row.n, row.c, row.found, row.trials, row.fraction, row.sigma
        );
    }
    match s.format.unwrap_or(Format::Csv) {
        Format::Csv => io.emit(&s.output, &emit_csv(records)),
        Format::Json => io.emit_json(&s.output, &records),
    }
}
