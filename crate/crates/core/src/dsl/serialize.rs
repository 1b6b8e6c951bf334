use std::fmt::{self, Write};

use num_traits::One;

use super::ast::*;

/// Canonical text: one cycle or graph clause per line, comprehensions kept
/// as written, unit counts omitted.
pub fn serialize(doc: &CoverDocument) -> String {
    let mut out = String::new();
    write_document(&mut out, doc).expect("writing to a String");
    out
}

fn write_document(out: &mut String, doc: &CoverDocument) -> fmt::Result {
    let mode = match doc.mode {
        Mode::Bouquet => "bouquet",
        Mode::Materialized => "materialized",
    };
    writeln!(out, "cover {} version {} mode {mode}", doc.name, doc.version)?;
    for block in &doc.levels {
        writeln!(out)?;
        writeln!(out, "level {} {{", block.level)?;
        match &block.body {
            LevelBody::Bouquet { cycles } => {
                for c in cycles {
                    write!(out, "  c{}", c.index)?;
                    if let Some(len) = &c.declared_length {
                        write!(out, "[{len}]")?;
                    }
                    out.push_str(" := ");
                    write_formula(out, &c.formula)?;
                    out.push_str(";\n");
                }
            }
            LevelBody::Materialized(g) => {
                writeln!(out, "  vertices {};", g.vertices)?;
                out.push_str("  edges");
                for (i, (u, v)) in g.edges.iter().enumerate() {
                    out.push_str(if i == 0 { " " } else { ", " });
                    write!(out, "{u}->{v}")?;
                }
                out.push_str(";\n");
                if let Some(map) = &g.map {
                    out.push_str("  map");
                    for (i, v) in map.iter().enumerate() {
                        out.push_str(if i == 0 { " " } else { ", " });
                        write!(out, "{v}")?;
                    }
                    out.push_str(";\n");
                }
            }
        }
        out.push_str("}\n");
    }
    Ok(())
}

fn atom(a: &AtomRef) -> String {
    match a {
        AtomRef::Edge => "e".to_string(),
        AtomRef::Cycle(i) => format!("c{i}"),
    }
}

fn write_formula(out: &mut String, terms: &[FormulaTerm]) -> fmt::Result {
    for (i, term) in terms.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        match term {
            FormulaTerm::Run { count, atom: a } if count.is_one() => out.push_str(&atom(a)),
            FormulaTerm::Run { count, atom: a } => write!(out, "{count} {}", atom(a))?,
            FormulaTerm::Sum(s) => {
                write!(out, "sum({}={}..", s.var, s.from)?;
                match &s.to {
                    Bound::K => out.push('k'),
                    Bound::Int(n) => write!(out, "{n}")?,
                }
                out.push_str(") { ");
                for (j, t) in s.body.iter().enumerate() {
                    if j > 0 {
                        out.push_str(" + ");
                    }
                    match &t.coeff {
                        Coeff::Var => write!(out, "{} ", s.var)?,
                        Coeff::Const(n) if n.is_one() => {}
                        Coeff::Const(n) => write!(out, "{n} ")?,
                    }
                    out.push_str(&atom(&t.atom));
                }
                out.push_str(" }");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    #[test]
    fn empty_document_is_header_only() {
        let doc = CoverDocument::empty("blank", Mode::Bouquet);
        assert_eq!(serialize(&doc), "cover blank version 1 mode bouquet\n");
        assert_eq!(parse(&serialize(&doc)).unwrap(), doc);
    }

    #[test]
    fn comprehension_is_preserved() {
        let text = "cover t mode bouquet level 2 { c1 := sum(j=1..k){ j e + 2 c1 } + e + e; }";
        let doc = parse(text).unwrap();
        let canon = serialize(&doc);
        assert!(canon.contains("sum(j=1..k) { j e + 2 c1 } + e + e;"));
        assert_eq!(parse(&canon).unwrap(), doc);
        assert_eq!(serialize(&parse(&canon).unwrap()), canon);
    }
}
