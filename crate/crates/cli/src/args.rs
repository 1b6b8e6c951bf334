use std::path::PathBuf;

use chaoscope_core::DEFAULT_SCAN_BUDGET;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};

#[derive(Debug, Parser)]
#[command(name = "chaoscope", version, about = "Exact orbits and chaos diagnostics for inverse limits of bouquet covers")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write artifacts and a manifest.json into this directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Limit on scanned edges and materialized vertices.
    #[arg(long, global = true, env = "CHAOSCOPE_BUDGET", default_value_t = DEFAULT_SCAN_BUDGET)]
    pub budget: u64,
    /// A bouquet-mode .cover file to use instead of the built-in tower.
    #[arg(long, global = true)]
    pub cover: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
        }
    }
}

/// A spine position: `CYCLE:POS`, or `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spot {
    pub cycle: usize,
    pub position: BigUint,
}

impl std::str::FromStr for Spot {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "base" {
            return Ok(Spot {
                cycle: 0,
                position: BigUint::default(),
            });
        }
        let (c, p) = s.split_once(':').ok_or_else(|| format!("expected CYCLE:POS or base, got {s:?}"))?;
        Ok(Spot {
            cycle: c.parse().map_err(|_| format!("bad cycle index {c:?}"))?,
            position: p.parse().map_err(|_| format!("bad position {p:?}"))?,
        })
    }
}

#[derive(Debug, Args)]
pub struct HandleArgs {
    /// Spine level M.
    #[arg(long, default_value_t = 8)]
    pub spine: usize,
    /// Spine cycle; 0 gives the fixed point.
    #[arg(long)]
    pub cycle: Option<usize>,
    /// Spine position along the cycle.
    #[arg(long, default_value = "1")]
    pub pos: BigUint,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cycle lengths and k_n per level.
    Levels {
        #[arg(long, default_value_t = 3)]
        max: usize,
        /// Recount every cycle's image path in the explicit graphs.
        #[arg(long)]
        verify: bool,
    },
    /// Cover axioms on the explicit levels, and symbolic projection
    /// against the explicit vertex maps.
    Validate {
        #[arg(long, default_value_t = 3)]
        max: usize,
        /// Sampled vertices per level too large to check exhaustively.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// One level as an explicit graph.
    Materialize {
        #[arg(long)]
        level: usize,
        /// Shorthand for --format dot.
        #[arg(long)]
        dot: bool,
    },
    /// Columns of T^t(x) for a range of times.
    Orbit {
        #[arg(long, default_value_t = 2)]
        spine: usize,
        #[arg(long, default_value_t = 1)]
        cycle: usize,
        #[arg(long, default_value = "1")]
        pos: BigUint,
        /// Observation depth.
        #[arg(long, default_value_t = 1)]
        obs: usize,
        #[arg(long, default_value_t = 10)]
        horizon: u64,
        #[arg(long, default_value = "0")]
        from: BigInt,
        /// Explicit times, comma separated; replaces --from/--horizon.
        #[arg(long, value_delimiter = ',')]
        times: Vec<BigInt>,
    },
    /// Distance between two points after t steps.
    Distance {
        #[arg(long, default_value_t = 3)]
        spine: usize,
        #[arg(long)]
        a: Spot,
        #[arg(long)]
        b: Spot,
        #[arg(long, default_value = "0")]
        at: BigInt,
    },
    /// The fixed point stays fixed.
    FixedPoint {
        #[arg(long, default_value_t = 12)]
        spine: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,1000000,1000000000000")]
        deltas: Vec<BigUint>,
    },
    /// T^-d(T^d(x)) = x on seeded handles.
    Roundtrip {
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        spine: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_delta: u64,
    },
    /// Li-Yorke witnesses on seeded pairs.
    Liyorke {
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 8)]
        spine: usize,
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
        #[arg(long, default_value_t = 2)]
        prox_depth: usize,
        #[arg(long, default_value_t = 3)]
        sep_depth: usize,
        /// Draw only points off the base at this level at time 0; 0 draws uniformly.
        #[arg(long, default_value_t = 3)]
        condition_level: usize,
        /// Required fraction of pairs with a separation witness.
        #[arg(long, default_value_t = 0.9)]
        min_separated: f64,
    },
    /// Base hits of seeded handles in consecutive windows.
    Proximal {
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 8)]
        spine: usize,
        #[arg(long, default_value_t = 100)]
        handles: usize,
        #[arg(long, default_value_t = 10)]
        windows: u32,
        /// Defaults to the longest cycle at the level.
        #[arg(long)]
        window_len: Option<u64>,
    },
    /// Copies of c_{m,1} inside the image of c_{m+j,1}.
    MixingGaps {
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        j: Vec<usize>,
        /// Gaps that must occur, e.g. `0,2,3,5..100`.
        #[arg(long)]
        expect_gaps: Option<String>,
    },
    /// Cofiniteness of a numerical semigroup of return lengths.
    Semigroup {
        #[arg(long, value_delimiter = ',', default_value = "10,12,13")]
        gens: Vec<u64>,
        /// Values past the conductor checked by brute force.
        #[arg(long, default_value_t = 1000)]
        span: u64,
        /// Check each generator against the return lengths of this (m, j) scan.
        #[arg(long, value_delimiter = ',', default_value = "1,1")]
        realized_by: Vec<usize>,
    },
    /// Degree of one handle, or the degree checks on a seeded corpus.
    Degree {
        #[command(flatten)]
        handle: HandleArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        handles: usize,
    },
    /// Preimages of a vertex one level up.
    Lift {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        cycle: usize,
        #[arg(long, default_value = "1")]
        pos: BigUint,
        #[arg(long, default_value_t = 20)]
        max: usize,
    },
    /// Parse and validate a .cover file, or the built-in document.
    DslCheck {
        file: Option<PathBuf>,
        /// Check the built-in document up to this level instead of a file.
        #[arg(long)]
        builtin: Option<usize>,
        /// Also compare with the built-in formulas up to this level.
        #[arg(long)]
        compare: Option<usize>,
        /// Also run the mutation corpus.
        #[arg(long)]
        mutants: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Levels { .. } => "levels",
            Command::Validate { .. } => "validate",
            Command::Materialize { .. } => "materialize",
            Command::Orbit { .. } => "orbit",
            Command::Distance { .. } => "distance",
            Command::FixedPoint { .. } => "fixed-point",
            Command::Roundtrip { .. } => "roundtrip",
            Command::Liyorke { .. } => "liyorke",
            Command::Proximal { .. } => "proximal",
            Command::MixingGaps { .. } => "mixing-gaps",
            Command::Semigroup { .. } => "semigroup",
            Command::Degree { .. } => "degree",
            Command::Lift { .. } => "lift",
            Command::DslCheck { .. } => "dsl-check",
        }
    }
}
