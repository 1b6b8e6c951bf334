//! Symbolic bouquet graphs and the covers between them.
//!
//! Level `n` is a bouquet: a base vertex `v_{n,0}` with a loop `e_{n,0}`
//! and cycles `c_{n,1}, ..., c_{n,r}` that meet only at the base. The cover
//! `G_{n+1} -> G_n` is described by one [`PathExpr`] per cycle of level
//! `n + 1`: vertex `p` of `c_{n+1,i}` maps to the vertex reached after `p`
//! edges along that expression. Everything here works on those descriptions;
//! [`materialize`] turns small levels into explicit graphs.

mod construction;
mod level;
pub mod materialize;
mod occurrences;
mod path_expr;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decimal;
use crate::graph::GraphError;

pub use construction::{Construction, Lifts, SPINE_WARN_LEVEL};
pub use level::{build_level_spec, LevelSpec};
pub use materialize::{GraphStats, Materialized, VertexLayout};
pub use occurrences::OccurrenceReport;
pub use path_expr::{Atom, Hit, PathExpr, Ramp, RampTerm, RangePiece, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BouquetError {
    #[error("reference to cycle c{cycle}, but the level has {available} cycles")]
    UnknownCycle { cycle: usize, available: usize },
    #[error("term {term} has a zero count")]
    ZeroCount { term: usize },
    #[error("ramp term {term} has no blocks")]
    EmptyRamp { term: usize },
    #[error("offset {offset} is beyond the path length {length}")]
    OffsetOutOfRange { offset: BigUint, length: BigUint },
    #[error("level {level} has {count} cycles, no cycle {cycle}")]
    CycleIndexOutOfRange {
        level: usize,
        cycle: usize,
        count: usize,
    },
    #[error("position {position} is not interior to c{cycle} (length {length}) at level {level}")]
    PositionOutOfRange {
        level: usize,
        cycle: usize,
        position: BigUint,
        length: BigUint,
    },
    #[error("level {level} is not defined (highest level is {max})")]
    LevelUnavailable { level: usize, max: usize },
    #[error("level 0 has no level below it")]
    BottomLevel,
    #[error("level span {from}..{to} is empty")]
    EmptySpan { from: usize, to: usize },
    #[error("{what} needs {required}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: BigUint,
        budget: u64,
    },
    #[error("level {level}: {reason}")]
    InconsistentLevels { level: usize, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Position of a vertex inside one bouquet level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Locus {
    Base,
    /// `position` edges after leaving the base along `c_cycle`;
    /// always in `1..|c_cycle|`.
    OnCycle {
        cycle: usize,
        #[serde(with = "decimal")]
        position: BigUint,
    },
}

impl Locus {
    pub fn on_cycle(cycle: usize, position: impl Into<BigUint>) -> Self {
        Locus::OnCycle {
            cycle,
            position: position.into(),
        }
    }

    /// Cycle index, with 0 for the base.
    pub fn cycle_index(&self) -> usize {
        match self {
            Locus::Base => 0,
            Locus::OnCycle { cycle, .. } => *cycle,
        }
    }

    pub fn position(&self) -> BigUint {
        match self {
            Locus::Base => BigUint::default(),
            Locus::OnCycle { position, .. } => position.clone(),
        }
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Locus::Base)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexAddr {
    pub level: usize,
    pub locus: Locus,
}

impl VertexAddr {
    pub fn base(level: usize) -> Self {
        Self {
            level,
            locus: Locus::Base,
        }
    }

    pub fn on_cycle(level: usize, cycle: usize, position: impl Into<BigUint>) -> Self {
        Self {
            level,
            locus: Locus::on_cycle(cycle, position),
        }
    }
}

impl fmt::Display for VertexAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.locus {
            Locus::Base => write!(f, "L{}:base", self.level),
            Locus::OnCycle { cycle, position } => write!(f, "L{}:c{}@{}", self.level, cycle, position),
        }
    }
}
