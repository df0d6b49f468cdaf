//! Subcommands of the `boxcluster` binary, except `serve`, which lives in main.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde_json::Value;

use boxcluster::adm_seq::AdmissibleSequence;
use boxcluster::cluster_engine::mutate_seed;
use boxcluster::iboxes::{Chain, IBox};
use boxcluster::qdatum::{validate_q_datum, QDatum};
use boxcluster::quivers::{export_dot, gls_quiver, hl_quiver};
use boxcluster::root_data::{folded_datum, AffineType};
use boxcluster::suites::{run_suite, SuiteOptions, SUITES};
use boxcluster::tsystem_seed::{kr_label, seed_from_chain, t_relation};

use crate::session::resolve_sequence;

#[derive(Parser, Debug)]
#[command(name = "boxcluster", version, about = "Box chains, T-systems and cluster seeds for quantum affine types")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected a,b but got {s:?}"))?;
    let a = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    Ok((a, b))
}

#[derive(clap::Args, Debug, Clone)]
pub struct SeqArgs {
    /// Affine type, e.g. A3, B2, "A5^(2)".
    #[arg(long = "type")]
    pub ty: AffineType,
    /// "default" or a JSON file {period_i, period_p}.
    #[arg(long, default_value = "default")]
    pub seq: String,
}

impl SeqArgs {
    pub fn sequence(&self) -> anyhow::Result<AdmissibleSequence> {
        let v = if self.seq == "default" {
            Value::String(self.seq.clone())
        } else {
            let text = std::fs::read_to_string(&self.seq).with_context(|| format!("reading {}", self.seq))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", self.seq))?
        };
        Ok(resolve_sequence(self.ty, Some(&v))?)
    }
}

#[derive(clap::Args, Debug, Clone)]
pub struct ChainArgs {
    /// Chain as base:CODE, e.g. "0:LL".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "range")]
    pub chain: Option<Chain>,
    /// Range a,b of the canonical chain.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
    pub range: Option<(i64, i64)>,
}

impl ChainArgs {
    fn chain(&self) -> anyhow::Result<Chain> {
        match (&self.chain, self.range) {
            (Some(c), _) => Ok(c.clone()),
            (None, Some((a, b))) if a <= b => Ok(Chain::canonical(a, b)),
            (None, Some((a, b))) => bail!("empty range [{a},{b}]"),
            (None, None) => bail!("one of --chain or --range is required"),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a height function (--xi) or an admissible sequence.
    Validate {
        #[command(flatten)]
        seq: SeqArgs,
        /// Height function values ξ_1,…,ξ_n.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi: Option<Vec<i64>>,
    },
    /// Print the seed of a chain as JSON.
    Seed {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Mutate the seed of a chain at 1-based positions, in order.
    Mutate {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long = "at", value_delimiter = ',', required = true)]
        at: Vec<usize>,
    },
    /// Apply box moves to a chain.
    Boxmove {
        #[arg(long, allow_hyphen_values = true)]
        chain: Chain,
        #[arg(long = "at", value_delimiter = ',', required = true)]
        at: Vec<usize>,
        /// Also print the boxes for this type's default sequence.
        #[arg(long = "type")]
        ty: Option<AffineType>,
    },
    /// Print the T-system relation of an i-box.
    Tsystem {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long = "box", allow_hyphen_values = true, value_parser = parse_pair)]
        ibox: (i64, i64),
    },
    /// Run verification suites.
    Verify {
        /// Suite name or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long = "type")]
        ty: Option<AffineType>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        window: Option<(i64, i64)>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = SuiteOptions::default().seed)]
        seed: u64,
    },
    /// Print the GLS quiver of a window (or the HL quiver with --hl) in DOT.
    ExportDot {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_pair)]
        window: (i64, i64),
        #[arg(long)]
        hl: bool,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
        #[arg(long, env = "BOXCLUSTER_PORT", default_value_t = 8080)]
        port: u16,
        /// Persist sessions to this JSON file and restore them on start.
        #[arg(long)]
        state_file: Option<PathBuf>,
    },
}

/// Text to print and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }
}

/// Runs every command but `serve`. Errors are usage errors.
pub fn run(cmd: &Command) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Validate { seq, xi } => {
            let report = match xi {
                Some(xi) => {
                    let q = QDatum::new_unchecked(folded_datum(seq.ty)?, xi.clone())?;
                    validate_q_datum(&q)
                }
                None => seq.sequence()?.validate(),
            };
            let mut out = String::from(if report.ok { "PASS\n" } else { "FAIL\n" });
            for v in &report.violations {
                writeln!(out, "  {v}")?;
            }
            Ok(Outcome { stdout: out, code: if report.ok { 0 } else { 1 } })
        }
        Command::Seed { seq, chain } => {
            let bs = seed_from_chain(&seq.sequence()?, &chain.chain()?)?;
            Ok(Outcome::ok(serde_json::to_string_pretty(&bs)? + "\n"))
        }
        Command::Mutate { seq, chain, at } => {
            let bs = seed_from_chain(&seq.sequence()?, &chain.chain()?)?;
            let mut seed = bs.seed.clone();
            let mut touched = vec![false; seed.vars.len()];
            for &k in at {
                if k == 0 || k > seed.vars.len() {
                    bail!("position {k} is out of range 1..={}", seed.vars.len());
                }
                seed = mutate_seed(&seed, k - 1).map_err(|e| match e {
                    boxcluster::Error::FrozenVertex(_) => boxcluster::Error::FrozenVertex(k),
                    e => e,
                })?;
                touched[k - 1] = true;
            }
            let mut out = String::new();
            for (k, v) in seed.vars.iter().enumerate() {
                let label = if touched[k] { format!("μ{}", k + 1) } else { bs.labels[k].to_string() };
                writeln!(out, "{}\t{label}\t{}", k + 1, bs.render(v))?;
            }
            Ok(Outcome::ok(out))
        }
        Command::Boxmove { chain, at, ty } => {
            let mut c = chain.clone();
            for &s in at {
                c = c.box_move(s)?;
            }
            let mut out = format!("{c}\n");
            if let Some(t) = ty {
                let seq = boxcluster::presets::default_sequence(*t)?;
                writeln!(out, "{}", c.pretty(&seq))?;
            }
            Ok(Outcome::ok(out))
        }
        Command::Tsystem { seq, ibox } => {
            let s = seq.sequence()?;
            let b = IBox::new(ibox.0, ibox.1);
            let rel = t_relation(&s, b)?;
            Ok(Outcome::ok(format!("{rel}\n{} = {}\n", b, kr_label(&s, b)?)))
        }
        Command::Verify { suite, ty, window, budget, seed } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let opts = SuiteOptions { tag: *ty, window: *window, budget: *budget, seed: *seed };
            let mut out = String::new();
            let mut code = 0;
            for name in names {
                let r = run_suite(name, &opts)?;
                if r.ok {
                    writeln!(out, "PASS {name} ({} checks)", r.checked)?;
                } else {
                    code = 1;
                    writeln!(out, "FAIL {name} ({} checks)", r.checked)?;
                    for f in &r.failures {
                        writeln!(out, "  {f}")?;
                    }
                }
            }
            Ok(Outcome { stdout: out, code })
        }
        Command::ExportDot { seq, window, hl } => {
            let s = seq.sequence()?;
            let (a, b) = *window;
            let dot = if *hl {
                let q = gls_quiver(&s, a, b).map(|&k| s.at(k));
                export_dot(&hl_quiver(&s.datum, q.vertices()))
            } else {
                export_dot(&gls_quiver(&s, a, b))
            };
            Ok(Outcome::ok(dot + "\n"))
        }
        Command::Serve { .. } => bail!("serve is handled by the binary"),
    }
}
