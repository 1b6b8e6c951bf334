use num_bigint::BigUint;
use serde::Serialize;

use crate::decimal;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Bouquet,
    Materialized,
}

/// A parsed `.cover` file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverDocument {
    pub name: String,
    pub version: u32,
    pub mode: Mode,
    pub levels: Vec<LevelBlock>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelBlock {
    pub level: usize,
    pub body: LevelBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LevelBody {
    Bouquet { cycles: Vec<CycleDecl> },
    Materialized(GraphDecl),
}

/// `cN[len] := formula;` where the formula is the image of the cycle one
/// level down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleDecl {
    pub index: usize,
    #[serde(with = "decimal::option")]
    pub declared_length: Option<BigUint>,
    pub formula: Vec<FormulaTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum AtomRef {
    Edge,
    Cycle(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FormulaTerm {
    Run {
        #[serde(with = "decimal")]
        count: BigUint,
        atom: AtomRef,
    },
    Sum(Comprehension),
}

/// `sum(var=from..to) { body }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comprehension {
    pub var: String,
    #[serde(with = "decimal")]
    pub from: BigUint,
    pub to: Bound,
    pub body: Vec<SumTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Bound {
    Int(#[serde(with = "decimal")] BigUint),
    /// `k` of the level the formula is written over.
    K,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Coeff {
    Const(#[serde(with = "decimal")] BigUint),
    /// The comprehension variable.
    Var,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumTerm {
    pub coeff: Coeff,
    pub atom: AtomRef,
}

/// An explicit graph and, above level 0, its vertex map one level down.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphDecl {
    pub vertices: u64,
    pub edges: Vec<(u64, u64)>,
    pub map: Option<Vec<u64>>,
}

impl CoverDocument {
    pub fn empty(name: impl Into<String>, mode: Mode) -> Self {
        Self {
            name: name.into(),
            version: FORMAT_VERSION,
            mode,
            levels: Vec::new(),
        }
    }
}
