use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::DslError;

pub fn parse(text: &str) -> Result<CoverDocument, DslError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let doc = p.document()?;
    p.expect(&Tok::Eof, "end of input")?;
    Ok(doc)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        &self.tokens[(self.pos + ahead).min(self.tokens.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> DslError {
        let t = self.peek();
        DslError::Syntax {
            line: t.line,
            column: t.column,
            expected: expected.to_string(),
            found: t.tok.to_string(),
        }
    }

    fn expect(&mut self, tok: &Tok, expected: &str) -> Result<Token, DslError> {
        if &self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.error(expected))
        }
    }

    fn is_word(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(w) if w == word)
    }

    fn keyword(&mut self, word: &str) -> Result<(), DslError> {
        if self.is_word(word) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("`{word}`")))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<String, DslError> {
        match &self.peek().tok {
            Tok::Ident(w) => {
                let w = w.clone();
                self.bump();
                Ok(w)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn int(&mut self, expected: &str) -> Result<BigUint, DslError> {
        match &self.peek().tok {
            Tok::Int(n) => {
                let n = n.clone();
                self.bump();
                Ok(n)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn small_int<T: TryFrom<u64>>(&mut self, expected: &str) -> Result<T, DslError> {
        let at = self.pos;
        let n = self.int(expected)?;
        n.to_u64().and_then(|v| T::try_from(v).ok()).ok_or_else(|| {
            self.pos = at;
            self.error(&format!("{expected} that fits in a machine word"))
        })
    }

    fn document(&mut self) -> Result<CoverDocument, DslError> {
        self.keyword("cover")?;
        let name = self.ident("a document name")?;
        let mut version = FORMAT_VERSION;
        if self.is_word("version") {
            self.bump();
            version = self.small_int("a version number")?;
        }
        self.keyword("mode")?;
        let mode = match self.ident("`bouquet` or `materialized`")?.as_str() {
            "bouquet" => Mode::Bouquet,
            "materialized" => Mode::Materialized,
            _ => {
                self.pos -= 1;
                return Err(self.error("`bouquet` or `materialized`"));
            }
        };
        let mut levels = Vec::new();
        while self.is_word("level") {
            levels.push(self.level(mode)?);
        }
        Ok(CoverDocument {
            name,
            version,
            mode,
            levels,
        })
    }

    fn level(&mut self, mode: Mode) -> Result<LevelBlock, DslError> {
        self.keyword("level")?;
        let level = self.small_int("a level number")?;
        self.expect(&Tok::LBrace, "`{`")?;
        let body = match mode {
            Mode::Bouquet => {
                let mut cycles = Vec::new();
                while self.peek().tok != Tok::RBrace {
                    cycles.push(self.cycle()?);
                }
                LevelBody::Bouquet { cycles }
            }
            Mode::Materialized => LevelBody::Materialized(self.graph()?),
        };
        self.expect(&Tok::RBrace, "`}`")?;
        Ok(LevelBlock { level, body })
    }

    // `c3` or `c 3`.
    fn cycle_ref(&mut self) -> Result<Option<usize>, DslError> {
        let word = match &self.peek().tok {
            Tok::Ident(w) => w.clone(),
            _ => return Ok(None),
        };
        if word == "c" && matches!(self.peek_at(1), Tok::Int(_)) {
            self.bump();
            return self.small_int("a cycle index").map(Some);
        }
        match word.strip_prefix('c') {
            Some(digits) if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => {
                let index = digits
                    .parse::<usize>()
                    .map_err(|_| self.error("a cycle index that fits in a machine word"))?;
                self.bump();
                Ok(Some(index))
            }
            _ => Ok(None),
        }
    }

    fn atom(&mut self) -> Result<AtomRef, DslError> {
        if self.is_word("e") {
            self.bump();
            return Ok(AtomRef::Edge);
        }
        match self.cycle_ref()? {
            Some(i) => Ok(AtomRef::Cycle(i)),
            None => Err(self.error("`e` or a cycle such as `c1`")),
        }
    }

    fn cycle(&mut self) -> Result<CycleDecl, DslError> {
        let index = self.cycle_ref()?.ok_or_else(|| self.error("a cycle declaration such as `c1`"))?;
        let mut declared_length = None;
        if self.peek().tok == Tok::LBracket {
            self.bump();
            declared_length = Some(self.int("a cycle length")?);
            self.expect(&Tok::RBracket, "`]`")?;
        }
        self.expect(&Tok::Assign, "`:=`")?;
        let mut formula = vec![self.term()?];
        while self.peek().tok == Tok::Plus {
            self.bump();
            formula.push(self.term()?);
        }
        self.expect(&Tok::Semi, "`;` or `+`")?;
        Ok(CycleDecl {
            index,
            declared_length,
            formula,
        })
    }

    fn term(&mut self) -> Result<FormulaTerm, DslError> {
        if self.is_word("sum") {
            return self.comprehension().map(FormulaTerm::Sum);
        }
        let count = match &self.peek().tok {
            Tok::Int(_) => self.int("a count")?,
            _ => BigUint::one(),
        };
        let atom = self.atom()?;
        Ok(FormulaTerm::Run { count, atom })
    }

    fn comprehension(&mut self) -> Result<Comprehension, DslError> {
        self.keyword("sum")?;
        self.expect(&Tok::LParen, "`(`")?;
        let var = self.ident("a variable name")?;
        if var == "e" || var == "k" || var == "sum" || var.starts_with('c') {
            self.pos -= 1;
            return Err(self.error("a variable name other than `e`, `k`, `sum` or a cycle"));
        }
        self.expect(&Tok::Eq, "`=`")?;
        let from = self.int("a lower bound")?;
        self.expect(&Tok::DotDot, "`..`")?;
        let to = if self.is_word("k") {
            self.bump();
            Bound::K
        } else {
            Bound::Int(self.int("an upper bound or `k`")?)
        };
        self.expect(&Tok::RParen, "`)`")?;
        self.expect(&Tok::LBrace, "`{`")?;
        let mut body = vec![self.sum_term(&var)?];
        while self.peek().tok == Tok::Plus {
            self.bump();
            body.push(self.sum_term(&var)?);
        }
        self.expect(&Tok::RBrace, "`}` or `+`")?;
        Ok(Comprehension { var, from, to, body })
    }

    fn sum_term(&mut self, var: &str) -> Result<SumTerm, DslError> {
        if self.is_word("sum") {
            return Err(self.error("a term (comprehensions do not nest)"));
        }
        let coeff = match &self.peek().tok {
            Tok::Int(_) => Coeff::Const(self.int("a count")?),
            Tok::Ident(w) if w == var => {
                self.bump();
                Coeff::Var
            }
            _ => Coeff::Const(BigUint::one()),
        };
        let atom = self.atom()?;
        Ok(SumTerm { coeff, atom })
    }

    fn graph(&mut self) -> Result<GraphDecl, DslError> {
        self.keyword("vertices")?;
        let vertices = self.small_int("a vertex count")?;
        self.expect(&Tok::Semi, "`;`")?;
        let mut edges = Vec::new();
        if self.is_word("edges") {
            self.bump();
            if self.peek().tok != Tok::Semi {
                loop {
                    let u = self.small_int("a vertex id")?;
                    self.expect(&Tok::Arrow, "`->`")?;
                    let v = self.small_int("a vertex id")?;
                    edges.push((u, v));
                    if self.peek().tok != Tok::Comma {
                        break;
                    }
                    self.bump();
                }
            }
            self.expect(&Tok::Semi, "`;` or `,`")?;
        }
        let mut map = None;
        if self.is_word("map") {
            self.bump();
            let mut images = Vec::new();
            if self.peek().tok != Tok::Semi {
                loop {
                    images.push(self.small_int("a vertex id")?);
                    if self.peek().tok != Tok::Comma {
                        break;
                    }
                    self.bump();
                }
            }
            self.expect(&Tok::Semi, "`;` or `,`")?;
            map = Some(images);
        }
        Ok(GraphDecl { vertices, edges, map })
    }
}
