//! Command-line front end: per-command JSON/CSV/text reports for root data,
//! Weyl-module analysis, Schur-module cross-checks, and geometric
//! verification.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 resource cap exceeded,
//! 4 verification failure (the failing report is still printed).

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::BTreeMap;
use std::process::ExitCode;
use weylrad::root_data::{DiagramType, Weight};
use weylrad::{Caps, Error};

#[derive(Parser)]
#[command(name = "weylrad", version, about = "Exact Weyl-module and shadow-space toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone)]
struct CapArgs {
    /// Maximum ambient dimension.
    #[arg(long, default_value_t = 4096)]
    max_ambient: usize,
    /// Maximum lattice rank.
    #[arg(long, default_value_t = 1024)]
    max_lattice: usize,
    /// Maximum number of Young-diagram boxes for group-ring computations.
    #[arg(long, default_value_t = 8)]
    max_boxes: usize,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        Caps {
            max_ambient: self.max_ambient,
            max_lattice: self.max_lattice,
            max_boxes: self.max_boxes,
            ..Caps::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Root-system summary: positive roots, longest word, opposition map.
    Rootsys {
        /// Diagram type: A, B, C, D, or E.
        dtype: char,
        rank: usize,
    },
    /// Weyl-module analysis: dimension, Smith invariants, modular data.
    Weyl {
        dtype: char,
        rank: usize,
        /// Node set, comma separated (repeats allowed in type A).
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        /// Dominant weight coefficients, comma separated.
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<i64>,
        /// Primes to reduce at.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        primes: Vec<u64>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Schur-module cross-check for a Young diagram.
    Schur {
        /// Row partition of the diagram, e.g. 2,1.
        #[arg(long, value_delimiter = ',')]
        shape: Vec<usize>,
        /// Entries range 1..=m; the module is for the rank m-1 diagram.
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        primes: Vec<u64>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Geometric verification on a finite shadow space.
    Geom {
        dtype: char,
        rank: usize,
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        /// Field size (prime).
        #[arg(long)]
        p: u64,
        /// Write the collinearity graph in DOT format to this path.
        #[arg(long)]
        dot: Option<std::path::PathBuf>,
        #[command(flatten)]
        caps: CapArgs,
    },
}

#[derive(Serialize)]
struct RootsysReport {
    #[serde(rename = "type")]
    dtype: String,
    rank: usize,
    positive_roots: usize,
    longest_word_length: usize,
    opposition: BTreeMap<String, usize>,
}

fn parse_type(c: char, rank: usize) -> Result<DiagramType, Error> {
    DiagramType::from_letter(c).ok_or(Error::UnsupportedDiagram { dtype: c, rank })
}

fn run(cli: &Cli) -> Result<(serde_json::Value, bool), Error> {
    match &cli.command {
        Command::Rootsys { dtype, rank } => {
            let t = parse_type(*dtype, *rank)?;
            let rs = weylrad::root_data::build_root_system(t, *rank)?;
            let all: Vec<usize> = (1..=*rank).collect();
            let w0 = weylrad::root_data::longest_element(&rs, &all)?;
            let opp = weylrad::root_data::opposition_map(&rs, &all)?;
            let report = RootsysReport {
                dtype: t.letter().to_string(),
                rank: *rank,
                positive_roots: rs.positive_roots.len(),
                longest_word_length: w0.len(),
                opposition: opp
                    .into_iter()
                    .map(|(a, b)| (a.to_string(), b))
                    .collect(),
            };
            Ok((serde_json::to_value(report).unwrap(), true))
        }
        Command::Weyl {
            dtype,
            rank,
            k,
            lambda,
            primes,
            caps,
        } => {
            let t = parse_type(*dtype, *rank)?;
            for &p in primes {
                if !weylrad::exact_linalg::is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
            }
            let nodes: Vec<usize> = if !k.is_empty() && lambda.is_empty() {
                k.clone()
            } else if k.is_empty() && !lambda.is_empty() {
                if lambda.len() != *rank {
                    return Err(Error::DimensionMismatch(format!(
                        "lambda has {} coefficients for rank {}",
                        lambda.len(),
                        rank
                    )));
                }
                let w = Weight(lambda.clone());
                if !w.is_dominant() {
                    return Err(Error::NotDominant(lambda.clone()));
                }
                let mut nodes = Vec::new();
                for (i, &c) in lambda.iter().enumerate() {
                    for _ in 0..c {
                        nodes.push(i + 1);
                    }
                }
                nodes
            } else {
                return Err(Error::DimensionMismatch(
                    "give exactly one of --k and --lambda".into(),
                ));
            };
            let report =
                weylrad::weyl_module::build_weyl_report(t, *rank, &nodes, primes, &caps.caps())?;
            Ok((serde_json::to_value(report).unwrap(), true))
        }
        Command::Schur {
            shape,
            m,
            primes,
            caps,
        } => {
            if *m < 2 {
                return Err(Error::DimensionMismatch("m must be at least 2".into()));
            }
            let rank = *m - 1;
            let diagram = weylrad::schur::YoungDiagram::from_rows(shape);
            if diagram.cols.iter().any(|&c| c > rank) {
                return Err(Error::InvalidDegrees {
                    dtype: 'A',
                    rank,
                    kset: diagram.cols.clone(),
                    reason: "columns longer than m-1 (strip full columns first)".into(),
                });
            }
            let mut lambda = vec![0i64; rank];
            for &c in &diagram.cols {
                lambda[c - 1] += 1;
            }
            let report = weylrad::schur::schur_vs_weyl_check(
                rank,
                &Weight(lambda),
                primes,
                &caps.caps(),
            )?;
            let ok = report.invariants_match && report.highest_tableau_norm_is_k;
            Ok((serde_json::to_value(report).unwrap(), ok))
        }
        Command::Geom {
            dtype,
            rank,
            k,
            p,
            dot,
            caps,
        } => {
            let t = parse_type(*dtype, *rank)?;
            let caps = caps.caps();
            if let Some(path) = dot {
                let sp = weylrad::geometry::build_shadow_space(t, *rank, k, *p, &caps)?;
                std::fs::write(path, sp.collinearity_dot())
                    .map_err(|e| Error::Verification(format!("cannot write dot file: {e}")))?;
            }
            let report = weylrad::geometry::run_geometry_check(t, *rank, k, *p, &caps)?;
            let ok = report.polarized
                && report.radical_match == "match"
                && report.quotient_polarized
                && report.residues_polarized;
            Ok((serde_json::to_value(report).unwrap(), ok))
        }
    }
}

fn flatten(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, String)>) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, val) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, val, out);
            }
        }
        serde_json::Value::Array(items) => {
            let rendered: Vec<String> = items
                .iter()
                .map(|x| match x {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            out.push((prefix.to_string(), rendered.join(" ")));
        }
        serde_json::Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn render(format: Format, value: &serde_json::Value) -> String {
    match format {
        Format::Json => serde_json::to_string(value).unwrap(),
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", value, &mut rows);
            let mut out = String::from("key,value\n");
            for (k, v) in rows {
                out.push_str(&format!("{k},{v}\n"));
            }
            out.trim_end().to_string()
        }
        Format::Text => {
            let mut rows = Vec::new();
            flatten("", value, &mut rows);
            rows.iter()
                .map(|(k, v)| format!("{k} = {v}"))
                .collect::<Vec<_>>()
                .join("\n")
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("WEYLRAD_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, ok)) => {
            println!("{}", render(cli.format, &value));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(Error::CapExceeded { what, needed, cap }) => {
            eprintln!("resource cap exceeded: {what} needs {needed}, cap {cap}");
            ExitCode::from(3)
        }
        Err(Error::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("run with --help for usage");
            ExitCode::from(2)
        }
    }
}
