use super::ast::*;
use super::serialize::serialize;
use crate::bouquet::{build_level_spec, Atom, Term};

fn atom_ref(a: &Atom) -> AtomRef {
    match a {
        Atom::Edge => AtomRef::Edge,
        Atom::Cycle(i) => AtomRef::Cycle(*i),
    }
}

/// The built-in tower up to `up_to` as a bouquet document, with declared
/// lengths and the first-cycle ramp written as a comprehension.
pub fn builtin_document(up_to: usize) -> CoverDocument {
    let mut doc = CoverDocument::empty("builtin", Mode::Bouquet);
    doc.levels.push(LevelBlock {
        level: 0,
        body: LevelBody::Bouquet { cycles: Vec::new() },
    });
    let mut spec = build_level_spec(0);
    for n in 1..=up_to {
        let lengths = spec.image_lengths();
        let cycles = spec
            .image_formulas
            .iter()
            .zip(lengths)
            .enumerate()
            .map(|(i, (f, len))| CycleDecl {
                index: i + 1,
                declared_length: Some(len),
                formula: f.terms().iter().map(|t| formula_term(t, &spec.k_value)).collect(),
            })
            .collect();
        doc.levels.push(LevelBlock {
            level: n,
            body: LevelBody::Bouquet { cycles },
        });
        spec = spec.builtin_successor();
    }
    doc
}

fn formula_term(t: &Term, k: &num_bigint::BigUint) -> FormulaTerm {
    match t {
        Term::EdgeRun { count } => FormulaTerm::Run {
            count: count.clone(),
            atom: AtomRef::Edge,
        },
        Term::CycleRun { cycle, count } => FormulaTerm::Run {
            count: count.clone(),
            atom: AtomRef::Cycle(*cycle),
        },
        Term::Ramp(r) => FormulaTerm::Sum(Comprehension {
            var: "j".into(),
            from: r.from.clone(),
            to: if &r.to == k { Bound::K } else { Bound::Int(r.to.clone()) },
            body: r
                .body
                .iter()
                .map(|b| SumTerm {
                    coeff: if b.per_index == 1u32.into() && b.constant == 0u32.into() {
                        Coeff::Var
                    } else {
                        Coeff::Const(b.constant.clone())
                    },
                    atom: atom_ref(&b.atom),
                })
                .collect(),
        }),
    }
}

/// A single-token edit of a valid document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mutant {
    pub name: &'static str,
    pub text: String,
}

// (name, occurrence to replace, replacement). Patterns refer to the
// canonical text of the built-in document up to level 3.
const EDITS: &[(&str, &str, &str)] = &[
    ("misspelled header keyword", "cover builtin", "covr builtin"),
    ("unknown mode", "mode bouquet", "mode bouqet"),
    ("future version", "version 1", "version 2"),
    ("skipped level", "level 2 {", "level 4 {"),
    ("repeated level", "level 1 {", "level 0 {"),
    ("wrong edge count", "c1[10] := 10 e;", "c1[10] := 11 e;"),
    ("wrong declared length", "c1[10]", "c1[12]"),
    ("cycle at the bottom level", "c1[10] := 10 e;", "c1[10] := 10 c1;"),
    ("misnumbered cycle", "c2[90]", "c3[90]"),
    ("wrong block multiplicity", "{ j e + 2 c1 } + e + e;", "{ j e + 3 c1 } + e + e;"),
    ("ramp starting at zero", "sum(j=1..k) { j e + 2 c1 } + e + e;", "sum(j=0..k) { j e + 2 c1 } + e + e;"),
    ("empty ramp", "sum(j=1..k) { j e + 2 c1 } + e + e;", "sum(j=1..0) { j e + 2 c1 } + e + e;"),
    ("short ramp", "sum(j=1..k) { j e + 2 c1 } + e + e;", "sum(j=1..21) { j e + 2 c1 } + e + e;"),
    ("unbound variable", "{ j e + 2 c1 } + e + e;", "{ i e + 2 c1 } + e + e;"),
    ("formula ending on a cycle", "+ e + e;", "+ e + c1;"),
    ("reference above the level", "c2[90] := 90 e;", "c2[90] := 90 c2;"),
    ("plain equals", "c2[90] := 90 e;", "c2[90] = 90 e;"),
    ("missing semicolon", "c2[90] := 90 e;", "c2[90] := 90 e"),
    ("zero count", "c3[12560] := 12560 e;", "c3[12560] := 0 e;"),
    ("single dot range", "sum(j=1..k)", "sum(j=1.k)"),
    ("dangling plus", "c2[182] := e + 2 c2 + e;", "c2[182] := e + 2 c2 + e +;"),
    ("wrong bracket", "level 3 {", "level 3 ("),
    ("formula starting on a cycle", "c2[182] := e +", "c2[182] := c2 +"),
    ("deep length off by one", "c1[3421640]", "c1[3421641]"),
    ("edge symbol as variable", "sum(j=", "sum(e="),
];

/// Single-token mutants of the built-in document, each of which must be
/// rejected by parsing or validation.
pub fn mutation_corpus() -> Vec<Mutant> {
    let base = serialize(&builtin_document(3));
    EDITS
        .iter()
        .map(|&(name, from, to)| {
            assert!(base.contains(from), "mutation pattern {from:?} not in built-in text");
            Mutant {
                name,
                text: base.replacen(from, to, 1),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse, validate_document};

    #[test]
    fn level_three_text() {
        let text = serialize(&builtin_document(3));
        assert!(text.contains("  c1[10] := 10 e;\n"));
        assert!(text.contains("  c1[695] := sum(j=1..k) { j e + 2 c1 } + e + e;\n"));
        assert!(text.contains("  c3[12560] := 12560 e;\n"));
    }

    #[test]
    fn every_mutant_is_rejected() {
        let corpus = mutation_corpus();
        assert!(corpus.len() >= 20);
        for m in corpus {
            let rejected = match parse(&m.text) {
                Err(_) => true,
                Ok(doc) => !validate_document(&doc).is_empty(),
            };
            assert!(rejected, "{} was accepted", m.name);
        }
    }
}
