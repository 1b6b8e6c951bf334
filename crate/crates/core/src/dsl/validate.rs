use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use super::ast::*;
use super::DslError;
use crate::bouquet::{build_level_spec, Atom, BouquetError, Construction, LevelSpec, PathExpr, Ramp, RampTerm, Term};
use crate::graph::{
    validate_bidirectional, validate_edge_surjective, validate_homomorphism, CoverMap, MaterializedGraph, VertexId,
};

/// A rule broken by a document. Validation reports these as data.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    #[error("format version {found} is not supported (expected {FORMAT_VERSION})")]
    UnsupportedVersion { found: u32 },
    #[error("expected level {expected}, found level {found}")]
    LevelGap { expected: usize, found: usize },
    #[error("level 0 is the base vertex alone and declares no cycles")]
    BottomLevelHasCycles,
    #[error("level {level}: expected c{expected}, found c{found}")]
    CycleNumbering { level: usize, expected: usize, found: usize },
    #[error("level {level}, c{cycle}: reference to c{referenced}, but level {below} has {available} cycles", below = level - 1)]
    UnknownCycle {
        level: usize,
        cycle: usize,
        referenced: usize,
        available: usize,
    },
    #[error("level {level}, c{cycle}: formula must begin and end with `e`")]
    EdgeBoundViolation { level: usize, cycle: usize },
    #[error("level {level}, c{cycle}: declared length {declared}, formula length {computed}")]
    LengthMismatch {
        level: usize,
        cycle: usize,
        #[serde(with = "crate::decimal")]
        declared: BigUint,
        #[serde(with = "crate::decimal")]
        computed: BigUint,
    },
    #[error("level {level}, c{cycle}: a term has count zero")]
    ZeroCount { level: usize, cycle: usize },
    #[error("level {level}, c{cycle}: comprehension range is empty")]
    EmptyRange { level: usize, cycle: usize },
    #[error("level {level}, c{cycle}: length {length} is below 2")]
    ShortCycle {
        level: usize,
        cycle: usize,
        #[serde(with = "crate::decimal")]
        length: BigUint,
    },
    #[error("level {level}: {message}")]
    MalformedGraph { level: usize, message: String },
    #[error("level {level}: missing vertex map")]
    MissingMap { level: usize },
    #[error("level 0 has no level below it to map to")]
    MapOnBottomLevel,
    #[error("level {level}: {count} vertices lack an in- or out-edge")]
    NotEdgeSurjective { level: usize, count: usize },
    #[error("level {level}: {count} edges do not map to edges")]
    NotHomomorphism { level: usize, count: usize },
    #[error("level {level}: {count} vertices have neighbours with distinct images")]
    NotBidirectional { level: usize, count: usize },
}

fn lower_atom(a: &AtomRef) -> Atom {
    match a {
        AtomRef::Edge => Atom::Edge,
        AtomRef::Cycle(i) => Atom::Cycle(*i),
    }
}

/// Resolves `k` and turns a formula into path-expression terms.
pub fn lower_formula(formula: &[FormulaTerm], k: &BigUint) -> Vec<Term> {
    formula
        .iter()
        .map(|t| match t {
            FormulaTerm::Run { count, atom } => match atom {
                AtomRef::Edge => Term::edges(count.clone()),
                AtomRef::Cycle(i) => Term::cycles(*i, count.clone()),
            },
            FormulaTerm::Sum(s) => Term::Ramp(Ramp {
                from: s.from.clone(),
                to: match &s.to {
                    Bound::K => k.clone(),
                    Bound::Int(n) => n.clone(),
                },
                body: s
                    .body
                    .iter()
                    .map(|b| RampTerm {
                        atom: lower_atom(&b.atom),
                        per_index: match b.coeff {
                            Coeff::Var => BigUint::one(),
                            Coeff::Const(_) => BigUint::zero(),
                        },
                        constant: match &b.coeff {
                            Coeff::Var => BigUint::zero(),
                            Coeff::Const(n) => n.clone(),
                        },
                    })
                    .collect(),
            }),
        })
        .collect()
}

/// `2 (1 + sum of the cycle lengths)`.
pub fn k_of(lengths: &[BigUint]) -> BigUint {
    (lengths.iter().sum::<BigUint>() + 1u32) * 2u32
}

fn level_numbering(doc: &CoverDocument, out: &mut Vec<Violation>) -> bool {
    let first = doc.levels.first().map(|b| b.level).unwrap_or(0);
    let start = if first == 1 { 1 } else { 0 };
    for (i, block) in doc.levels.iter().enumerate() {
        if block.level != start + i {
            out.push(Violation::LevelGap {
                expected: start + i,
                found: block.level,
            });
            return false;
        }
    }
    true
}

/// Lengths and formulas per level, as far as the document is valid.
struct Lowered {
    // lengths[n] = cycle lengths of level n
    lengths: Vec<Vec<BigUint>>,
    // formulas[n] = formulas of the cycles of level n + 1
    formulas: Vec<Vec<Vec<Term>>>,
}

fn check_bouquet(doc: &CoverDocument, out: &mut Vec<Violation>) -> Lowered {
    let mut lowered = Lowered {
        lengths: vec![Vec::new()],
        formulas: Vec::new(),
    };
    if !level_numbering(doc, out) {
        return lowered;
    }
    for block in &doc.levels {
        let LevelBody::Bouquet { cycles } = &block.body else {
            continue;
        };
        let n = block.level;
        if n == 0 {
            if !cycles.is_empty() {
                out.push(Violation::BottomLevelHasCycles);
                return lowered;
            }
            continue;
        }
        let below = lowered.lengths[n - 1].clone();
        let k = k_of(&below);
        let before = out.len();
        let mut lengths = Vec::with_capacity(cycles.len());
        let mut formulas = Vec::with_capacity(cycles.len());
        for (i, decl) in cycles.iter().enumerate() {
            if decl.index != i + 1 {
                out.push(Violation::CycleNumbering {
                    level: n,
                    expected: i + 1,
                    found: decl.index,
                });
                continue;
            }
            let cycle = decl.index;
            let terms = lower_formula(&decl.formula, &k);
            match PathExpr::new(terms.clone(), &below) {
                Err(BouquetError::UnknownCycle { cycle: r, available }) => out.push(Violation::UnknownCycle {
                    level: n,
                    cycle,
                    referenced: r,
                    available,
                }),
                Err(BouquetError::ZeroCount { .. }) => out.push(Violation::ZeroCount { level: n, cycle }),
                Err(_) => out.push(Violation::EmptyRange { level: n, cycle }),
                Ok(expr) => {
                    if !expr.is_edge_bounded() {
                        out.push(Violation::EdgeBoundViolation { level: n, cycle });
                    }
                    if let Some(declared) = &decl.declared_length {
                        if declared != expr.len() {
                            out.push(Violation::LengthMismatch {
                                level: n,
                                cycle,
                                declared: declared.clone(),
                                computed: expr.len().clone(),
                            });
                        }
                    }
                    if expr.len() < &BigUint::from(2u32) {
                        out.push(Violation::ShortCycle {
                            level: n,
                            cycle,
                            length: expr.len().clone(),
                        });
                    }
                    lengths.push(expr.len().clone());
                    formulas.push(terms);
                }
            }
        }
        if out.len() > before {
            return lowered;
        }
        lowered.lengths.push(lengths);
        lowered.formulas.push(formulas);
    }
    lowered
}

fn check_materialized(doc: &CoverDocument, out: &mut Vec<Violation>) -> Vec<(Arc<MaterializedGraph>, Option<CoverMap>)> {
    let mut tower: Vec<(Arc<MaterializedGraph>, Option<CoverMap>)> = Vec::new();
    if !level_numbering(doc, out) {
        return tower;
    }
    if doc.levels.first().is_some_and(|b| b.level != 0) {
        out.push(Violation::LevelGap {
            expected: 0,
            found: doc.levels[0].level,
        });
        return tower;
    }
    for block in &doc.levels {
        let LevelBody::Materialized(g) = &block.body else {
            continue;
        };
        let n = block.level;
        let edges: Vec<_> = g.edges.iter().map(|&(u, v)| (u as VertexId, v as VertexId)).collect();
        let graph = match MaterializedGraph::new(g.vertices as usize, edges) {
            Ok(graph) => Arc::new(graph),
            Err(e) => {
                out.push(Violation::MalformedGraph {
                    level: n,
                    message: e.to_string(),
                });
                return tower;
            }
        };
        let bad = validate_edge_surjective(&graph).len();
        if bad > 0 {
            out.push(Violation::NotEdgeSurjective { level: n, count: bad });
        }
        let cover = match (n, &g.map) {
            (0, None) => None,
            (0, Some(_)) => {
                out.push(Violation::MapOnBottomLevel);
                None
            }
            (_, None) => {
                out.push(Violation::MissingMap { level: n });
                return tower;
            }
            (_, Some(map)) => {
                let lower = tower[n - 1].0.clone();
                let map = map.iter().map(|&v| v as VertexId).collect();
                match CoverMap::new(graph.clone(), lower, map) {
                    Ok(cover) => {
                        let bad = validate_homomorphism(&cover).len();
                        if bad > 0 {
                            out.push(Violation::NotHomomorphism { level: n, count: bad });
                        } else {
                            let bad = validate_bidirectional(&cover).len();
                            if bad > 0 {
                                out.push(Violation::NotBidirectional { level: n, count: bad });
                            }
                        }
                        Some(cover)
                    }
                    Err(e) => {
                        out.push(Violation::MalformedGraph {
                            level: n,
                            message: e.to_string(),
                        });
                        return tower;
                    }
                }
            }
        };
        tower.push((graph, cover));
    }
    tower
}

/// Every rule the document breaks; empty means valid.
pub fn validate_document(doc: &CoverDocument) -> Vec<Violation> {
    let mut out = Vec::new();
    if doc.version != FORMAT_VERSION {
        out.push(Violation::UnsupportedVersion { found: doc.version });
    }
    match doc.mode {
        Mode::Bouquet => {
            check_bouquet(doc, &mut out);
        }
        Mode::Materialized => {
            check_materialized(doc, &mut out);
        }
    }
    out
}

/// The tower a valid bouquet document describes.
pub fn to_construction(doc: &CoverDocument) -> Result<Construction, DslError> {
    if doc.mode != Mode::Bouquet {
        return Err(DslError::WrongMode { expected: Mode::Bouquet });
    }
    let mut violations = Vec::new();
    if doc.version != FORMAT_VERSION {
        violations.push(Violation::UnsupportedVersion { found: doc.version });
    }
    let lowered = check_bouquet(doc, &mut violations);
    if !violations.is_empty() {
        return Err(DslError::Invalid(violations));
    }
    let top = lowered.lengths.len() - 1;
    let mut specs = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let formulas = lowered.formulas.get(n).cloned().unwrap_or_default();
        specs.push(LevelSpec::new(n, lowered.lengths[n].clone(), formulas)?);
    }
    Ok(Construction::from_level_specs(specs)?)
}

/// An explicit level and its cover onto the level below, if any.
pub type MaterializedLevel = (Arc<MaterializedGraph>, Option<CoverMap>);

/// Explicit graphs of a valid materialized document, level 0 first.
pub fn to_materialized(doc: &CoverDocument) -> Result<Vec<MaterializedLevel>, DslError> {
    if doc.mode != Mode::Materialized {
        return Err(DslError::WrongMode {
            expected: Mode::Materialized,
        });
    }
    let mut violations = Vec::new();
    if doc.version != FORMAT_VERSION {
        violations.push(Violation::UnsupportedVersion { found: doc.version });
    }
    let tower = check_materialized(doc, &mut violations);
    if !violations.is_empty() {
        return Err(DslError::Invalid(violations));
    }
    Ok(tower)
}

/// Where a document departs from the built-in formulas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub level: usize,
    /// `None` when the cycle counts differ.
    pub cycle: Option<usize>,
}

/// Compares the lowered formulas of levels `1..=up_to` with the built-in
/// generator. Comprehensions are compared unexpanded (`k` resolved).
pub fn equivalence_mismatches(doc: &CoverDocument, up_to: usize) -> Vec<Mismatch> {
    let mut mismatches = Vec::new();
    let mut violations = Vec::new();
    let lowered = if doc.mode == Mode::Bouquet {
        check_bouquet(doc, &mut violations)
    } else {
        Lowered {
            lengths: vec![Vec::new()],
            formulas: Vec::new(),
        }
    };
    for n in 1..=up_to {
        let Some(formulas) = lowered.formulas.get(n - 1) else {
            mismatches.push(Mismatch { level: n, cycle: None });
            continue;
        };
        let spec = build_level_spec(n - 1);
        if formulas.len() != spec.image_formulas.len() {
            mismatches.push(Mismatch { level: n, cycle: None });
            continue;
        }
        for (i, (ours, theirs)) in formulas.iter().zip(&spec.image_formulas).enumerate() {
            if ours.as_slice() != theirs.terms() {
                mismatches.push(Mismatch {
                    level: n,
                    cycle: Some(i + 1),
                });
            }
        }
    }
    mismatches
}

pub fn builtin_equivalence(doc: &CoverDocument, up_to: usize) -> bool {
    validate_document(doc).is_empty() && equivalence_mismatches(doc, up_to).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn violations(text: &str) -> Vec<Violation> {
        validate_document(&parse(text).unwrap())
    }

    #[test]
    fn level_two_comprehension_has_length_695() {
        let doc = parse("cover t mode bouquet level 1 { c1 := 10 e; } level 2 { c1[695] := sum(j=1..k){ j e + 2 c1 } + e + e; c2 := 90 e; }").unwrap();
        assert!(validate_document(&doc).is_empty());
        let c = to_construction(&doc).unwrap();
        assert_eq!(c.cycle_length(2, 1).unwrap(), BigUint::from(695u32));
        assert!(builtin_equivalence(&doc, 2));
    }

    #[test]
    fn rule_violations() {
        assert_eq!(
            violations("cover t mode bouquet level 1 { c1 := 10 e; } level 2 { c1 := c1 + e; }"),
            vec![Violation::EdgeBoundViolation { level: 2, cycle: 1 }]
        );
        assert!(matches!(
            violations("cover t mode bouquet level 1 { c1[11] := 10 e; }")[..],
            [Violation::LengthMismatch { level: 1, cycle: 1, .. }]
        ));
        assert_eq!(
            violations("cover t mode bouquet level 1 { c1 := 10 e; } level 2 { c1 := e + c3 + e; c2 := 5 e; }"),
            vec![Violation::UnknownCycle {
                level: 2,
                cycle: 1,
                referenced: 3,
                available: 1
            }]
        );
        assert_eq!(
            violations("cover t mode bouquet level 1 { c1 := 10 e; } level 3 { }"),
            vec![Violation::LevelGap { expected: 2, found: 3 }]
        );
    }

    #[test]
    fn materialized_cover_is_checked() {
        let ok = "cover g mode materialized level 0 { vertices 1; edges 0->0; } level 1 { vertices 3; edges 0->0, 0->1, 1->2, 2->0; map 0, 0, 0; }";
        assert!(violations(ok).is_empty());
        assert_eq!(to_materialized(&parse(ok).unwrap()).unwrap().len(), 2);
        let split = "cover g mode materialized level 0 { vertices 2; edges 0->0, 0->1, 1->0; } level 1 { vertices 3; edges 0->0, 0->1, 1->2, 2->0; map 0, 0, 1; }";
        assert!(matches!(violations(split)[..], [Violation::NotBidirectional { level: 1, .. }]));
        let broken = "cover g mode materialized level 0 { vertices 2; edges 0->1; }";
        assert_eq!(violations(broken), vec![Violation::NotEdgeSurjective { level: 0, count: 2 }]);
    }
}
