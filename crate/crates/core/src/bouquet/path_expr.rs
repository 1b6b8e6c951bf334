//! Formal sums of base-edge runs and cycle runs.
//!
//! A [`PathExpr`] describes a closed path at the base vertex of a bouquet
//! graph, e.g. `e + 2 c1 + 3 e + 2 c1 + ...`. The quadratic run of blocks
//! `sum(j = a..b) { j e + 2 c1 }` is kept as a single [`Ramp`] term and is
//! never expanded: offsets inside it are located by inverting the block
//! prefix sum with an integer square root.

use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use super::{BouquetError, Locus};
use crate::decimal;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Atom {
    /// The base loop `e`.
    Edge,
    /// A full traversal of cycle `c_i` of the ambient level.
    Cycle(usize),
}

/// Count `per_index * j + constant` of one ramp body term in block `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RampTerm {
    pub atom: Atom,
    #[serde(with = "decimal")]
    pub per_index: BigUint,
    #[serde(with = "decimal")]
    pub constant: BigUint,
}

impl RampTerm {
    pub fn indexed(atom: Atom) -> Self {
        Self {
            atom,
            per_index: BigUint::one(),
            constant: BigUint::zero(),
        }
    }

    pub fn fixed(atom: Atom, count: impl Into<BigUint>) -> Self {
        Self {
            atom,
            per_index: BigUint::zero(),
            constant: count.into(),
        }
    }

    pub fn count_at(&self, j: &BigUint) -> BigUint {
        &self.per_index * j + &self.constant
    }
}

/// Blocks `from..=to`, block `j` being the body with counts evaluated at `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ramp {
    #[serde(with = "decimal")]
    pub from: BigUint,
    #[serde(with = "decimal")]
    pub to: BigUint,
    pub body: Vec<RampTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Term {
    EdgeRun {
        #[serde(with = "decimal")]
        count: BigUint,
    },
    CycleRun {
        cycle: usize,
        #[serde(with = "decimal")]
        count: BigUint,
    },
    Ramp(Ramp),
}

impl Term {
    pub fn edges(count: impl Into<BigUint>) -> Self {
        Term::EdgeRun {
            count: count.into(),
        }
    }

    pub fn cycles(cycle: usize, count: impl Into<BigUint>) -> Self {
        Term::CycleRun {
            cycle,
            count: count.into(),
        }
    }

    fn first_atom(&self) -> Option<&Atom> {
        match self {
            Term::EdgeRun { .. } => Some(&Atom::Edge),
            Term::CycleRun { .. } => None,
            Term::Ramp(r) => r.body.first().map(|t| &t.atom),
        }
    }

    fn last_atom(&self) -> Option<&Atom> {
        match self {
            Term::EdgeRun { .. } => Some(&Atom::Edge),
            Term::CycleRun { .. } => None,
            Term::Ramp(r) => r.body.last().map(|t| &t.atom),
        }
    }
}

// Block `j` has length `slope * j + intercept`.
#[derive(Debug, Clone)]
struct RampGeometry {
    slope: BigUint,
    intercept: BigUint,
    blocks: BigUint,
}

/// Where an offset along a path expression lands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hit {
    pub locus: Locus,
    /// Offset at which the enclosing cycle copy was entered; equals the
    /// queried offset when the locus is the base.
    pub entry: BigUint,
}

#[derive(Debug, Clone)]
pub struct PathExpr {
    terms: Vec<Term>,
    ambient: Vec<BigUint>,
    starts: Vec<BigUint>,
    ramps: Vec<Option<RampGeometry>>,
}

impl PartialEq for PathExpr {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for PathExpr {}

impl Serialize for PathExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PathExpr", 2)?;
        st.serialize_field("length", &self.len().to_string())?;
        st.serialize_field("terms", &self.terms)?;
        st.end()
    }
}

impl PathExpr {
    /// Builds an expression over a level whose cycles have the given lengths
    /// (`ambient[i - 1] = |c_i|`).
    pub fn new(terms: Vec<Term>, ambient: &[BigUint]) -> Result<Self, BouquetError> {
        let atom_len = |atom: &Atom| -> Result<BigUint, BouquetError> {
            match atom {
                Atom::Edge => Ok(BigUint::one()),
                Atom::Cycle(i) if *i >= 1 && *i <= ambient.len() => Ok(ambient[i - 1].clone()),
                Atom::Cycle(i) => Err(BouquetError::UnknownCycle {
                    cycle: *i,
                    available: ambient.len(),
                }),
            }
        };

        let mut starts = Vec::with_capacity(terms.len() + 1);
        let mut ramps = Vec::with_capacity(terms.len());
        let mut total = BigUint::zero();
        for (index, term) in terms.iter().enumerate() {
            starts.push(total.clone());
            let (len, geometry) = match term {
                Term::EdgeRun { count } => {
                    if count.is_zero() {
                        return Err(BouquetError::ZeroCount { term: index });
                    }
                    (count.clone(), None)
                }
                Term::CycleRun { cycle, count } => {
                    if count.is_zero() {
                        return Err(BouquetError::ZeroCount { term: index });
                    }
                    (count * atom_len(&Atom::Cycle(*cycle))?, None)
                }
                Term::Ramp(ramp) => {
                    if ramp.from > ramp.to || ramp.body.is_empty() {
                        return Err(BouquetError::EmptyRamp { term: index });
                    }
                    let mut slope = BigUint::zero();
                    let mut intercept = BigUint::zero();
                    for t in &ramp.body {
                        if t.count_at(&ramp.from).is_zero() {
                            return Err(BouquetError::ZeroCount { term: index });
                        }
                        let l = atom_len(&t.atom)?;
                        slope += &t.per_index * &l;
                        intercept += &t.constant * &l;
                    }
                    let blocks = &ramp.to - &ramp.from + 1u32;
                    let g = RampGeometry {
                        slope,
                        intercept,
                        blocks,
                    };
                    let len = g.prefix(&ramp.from, &g.blocks);
                    (len, Some(g))
                }
            };
            total += len;
            ramps.push(geometry);
        }
        starts.push(total);
        Ok(Self {
            terms,
            ambient: ambient.to_vec(),
            starts,
            ramps,
        })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of edges on the path.
    pub fn len(&self) -> &BigUint {
        self.starts.last().expect("starts is never empty")
    }

    pub fn is_empty(&self) -> bool {
        self.len().is_zero()
    }

    /// Offsets at which each top-level term begins.
    pub fn term_starts(&self) -> &[BigUint] {
        &self.starts[..self.terms.len()]
    }

    pub fn ambient_lengths(&self) -> &[BigUint] {
        &self.ambient
    }

    /// First and last edge both lie on the base loop.
    pub fn is_edge_bounded(&self) -> bool {
        let first = self.terms.first().and_then(Term::first_atom);
        let last = self.terms.last().and_then(Term::last_atom);
        first == Some(&Atom::Edge) && last == Some(&Atom::Edge)
    }

    fn atom_len(&self, atom: &Atom) -> BigUint {
        match atom {
            Atom::Edge => BigUint::one(),
            Atom::Cycle(i) => self.ambient[i - 1].clone(),
        }
    }

    /// The vertex reached after `offset` edges.
    pub fn locate(&self, offset: &BigUint) -> Result<Hit, BouquetError> {
        if offset > self.len() {
            return Err(BouquetError::OffsetOutOfRange {
                offset: offset.clone(),
                length: self.len().clone(),
            });
        }
        let base = || Hit {
            locus: Locus::Base,
            entry: offset.clone(),
        };
        if offset.is_zero() || offset == self.len() {
            return Ok(base());
        }
        let index = self.starts[1..].partition_point(|s| s <= offset);
        let local = offset - &self.starts[index];
        if local.is_zero() {
            return Ok(base());
        }
        match &self.terms[index] {
            Term::EdgeRun { .. } => Ok(base()),
            Term::CycleRun { cycle, .. } => Ok(self.within_cycle(*cycle, &local, offset)),
            Term::Ramp(ramp) => {
                let g = self.ramps[index].as_ref().expect("ramp geometry");
                let done = g.blocks_before(&ramp.from, &local);
                let j = &ramp.from + &done;
                let mut rest = local - g.prefix(&ramp.from, &done);
                for t in &ramp.body {
                    if rest.is_zero() {
                        return Ok(base());
                    }
                    let l = t.count_at(&j) * self.atom_len(&t.atom);
                    if rest < l {
                        return Ok(match t.atom {
                            Atom::Edge => base(),
                            Atom::Cycle(c) => self.within_cycle(c, &rest, offset),
                        });
                    }
                    rest -= l;
                }
                Ok(base())
            }
        }
    }

    fn within_cycle(&self, cycle: usize, local: &BigUint, offset: &BigUint) -> Hit {
        let position = local % &self.ambient[cycle - 1];
        if position.is_zero() {
            Hit {
                locus: Locus::Base,
                entry: offset.clone(),
            }
        } else {
            Hit {
                entry: offset - &position,
                locus: Locus::OnCycle { cycle, position },
            }
        }
    }

    /// Number of interior offsets `0 < p < len` whose vertex is `locus`.
    pub fn count_locus(&self, locus: &Locus) -> BigUint {
        // For the base every edge run edge and every cycle copy ends at the
        // base once; the final offset is excluded afterwards.
        let wanted = |atom: &Atom| match locus {
            Locus::Base => true,
            Locus::OnCycle { cycle, position } => {
                *atom == Atom::Cycle(*cycle) && position < &self.ambient[cycle - 1]
            }
        };
        let mut total = BigUint::zero();
        for term in &self.terms {
            match term {
                Term::EdgeRun { count } => {
                    if wanted(&Atom::Edge) {
                        total += count;
                    }
                }
                Term::CycleRun { cycle, count } => {
                    if wanted(&Atom::Cycle(*cycle)) {
                        total += count;
                    }
                }
                Term::Ramp(ramp) => {
                    let n = &ramp.to - &ramp.from + 1u32;
                    let index_sum = (&ramp.from + &ramp.to) * &n / 2u32;
                    for t in ramp.body.iter().filter(|t| wanted(&t.atom)) {
                        total += &t.per_index * &index_sum + &t.constant * &n;
                    }
                }
            }
        }
        if matches!(locus, Locus::Base) && !total.is_zero() {
            total -= 1u32;
        }
        total
    }

    /// Interior offsets whose vertex is `locus`, increasing, at most `max`.
    pub fn offsets_of(&self, locus: &Locus, max: usize) -> Vec<BigUint> {
        let mut found = Vec::new();
        if max == 0 {
            return found;
        }
        let len = self.len().clone();
        let _ = self.for_each_segment(|start, atom, count| {
            let atom_len = self.atom_len(atom);
            let mut push = |p: BigUint| {
                if p < len {
                    found.push(p);
                }
                if found.len() >= max {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            };
            match (locus, atom) {
                (Locus::Base, _) => {
                    let mut p = start.clone();
                    let mut r = BigUint::zero();
                    while &r < count {
                        p += &atom_len;
                        push(p.clone())?;
                        r += 1u32;
                    }
                }
                (Locus::OnCycle { cycle, position }, Atom::Cycle(c)) if c == cycle => {
                    let mut p = start + position;
                    let mut r = BigUint::zero();
                    while &r < count {
                        push(p.clone())?;
                        p += &atom_len;
                        r += 1u32;
                    }
                }
                _ => {}
            }
            ControlFlow::Continue(())
        });
        found
    }

    /// Visits the flattened runs `(start offset, atom, count)` in order,
    /// expanding ramps block by block.
    pub fn for_each_segment<F>(&self, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(&BigUint, &Atom, &BigUint) -> ControlFlow<()>,
    {
        for (term, start) in self.terms.iter().zip(&self.starts) {
            match term {
                Term::EdgeRun { count } => f(start, &Atom::Edge, count)?,
                Term::CycleRun { cycle, count } => f(start, &Atom::Cycle(*cycle), count)?,
                Term::Ramp(ramp) => {
                    let mut offset = start.clone();
                    let mut j = ramp.from.clone();
                    while j <= ramp.to {
                        for t in &ramp.body {
                            let count = t.count_at(&j);
                            f(&offset, &t.atom, &count)?;
                            offset += count * self.atom_len(&t.atom);
                        }
                        j += 1u32;
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    /// Fully expanded term list, or `None` if it would exceed `max_terms`.
    pub fn expanded_terms(&self, max_terms: usize) -> Option<Vec<Term>> {
        let mut out = Vec::new();
        let flow = self.for_each_segment(|_, atom, count| {
            if out.len() >= max_terms {
                return ControlFlow::Break(());
            }
            out.push(match atom {
                Atom::Edge => Term::edges(count.clone()),
                Atom::Cycle(c) => Term::cycles(*c, count.clone()),
            });
            ControlFlow::Continue(())
        });
        flow.is_continue().then_some(out)
    }
}

/// Cycle copies touched by an offset range, as reported by
/// [`PathExpr::visit_range`]. Base-loop runs contribute only base vertices
/// and are not reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangePiece {
    /// At least one complete copy of the cycle lies inside the range.
    Full { cycle: usize },
    /// Positions `lo..=hi` of one copy, `0 <= lo <= hi <= |c|`.
    Partial {
        cycle: usize,
        lo: BigUint,
        hi: BigUint,
    },
}

impl PathExpr {
    /// Reports the cycle copies meeting offsets `a..=b`. Work is
    /// proportional to the number of terms, not to the range length.
    pub fn visit_range<F>(&self, a: &BigUint, b: &BigUint, mut f: F)
    where
        F: FnMut(RangePiece),
    {
        if a > b {
            return;
        }
        for (index, term) in self.terms.iter().enumerate() {
            let (s, e) = (&self.starts[index], &self.starts[index + 1]);
            if e < a || s > b {
                continue;
            }
            match term {
                Term::EdgeRun { .. } => {}
                Term::CycleRun { cycle, count } => {
                    self.run_pieces(s, *cycle, count, a, b, &mut f);
                }
                Term::Ramp(ramp) => {
                    let g = self.ramps[index].as_ref().expect("ramp geometry");
                    let lo = if a > s { a - s } else { BigUint::zero() };
                    let hi = if b < e { b - s } else { e - s };
                    let first = g.blocks_before(&ramp.from, &lo.clone().min(e - s - 1u32));
                    let last = g.blocks_before(&ramp.from, &hi.clone().min(e - s - 1u32));
                    let visit_block = |block: &BigUint, f: &mut F| {
                        let j = &ramp.from + block;
                        let mut start = s + g.prefix(&ramp.from, block);
                        for t in &ramp.body {
                            let count = t.count_at(&j);
                            let len = &count * self.atom_len(&t.atom);
                            if let Atom::Cycle(c) = t.atom {
                                if !(&start + &len < *a || &start > b) {
                                    self.run_pieces(&start, c, &count, a, b, f);
                                }
                            }
                            start += len;
                        }
                    };
                    visit_block(&first, &mut f);
                    if last > first {
                        if last > &first + 1u32 {
                            for t in &ramp.body {
                                if let Atom::Cycle(c) = t.atom {
                                    f(RangePiece::Full { cycle: c });
                                }
                            }
                        }
                        visit_block(&last, &mut f);
                    }
                }
            }
        }
    }

    /// Smallest offset `>= pos` at which a copy of a cycle accepted by
    /// `accept` begins, with that cycle.
    pub fn next_copy_start<P>(&self, pos: &BigUint, accept: P) -> Option<(BigUint, usize)>
    where
        P: Fn(usize) -> bool,
    {
        let first_copy = |s: &BigUint, cycle: usize, count: &BigUint| -> Option<BigUint> {
            let l = &self.ambient[cycle - 1];
            let r = if pos > s { (pos - s + l - 1u32) / l } else { BigUint::zero() };
            (&r < count).then(|| s + r * l)
        };
        let from_index = self.starts[1..].partition_point(|e| e <= pos);
        for index in from_index..self.terms.len() {
            let s = &self.starts[index];
            match &self.terms[index] {
                Term::EdgeRun { .. } => {}
                Term::CycleRun { cycle, count } => {
                    if accept(*cycle) {
                        if let Some(at) = first_copy(s, *cycle, count) {
                            return Some((at, *cycle));
                        }
                    }
                }
                Term::Ramp(ramp) => {
                    if !ramp.body.iter().any(|t| matches!(t.atom, Atom::Cycle(c) if accept(c))) {
                        continue;
                    }
                    let g = self.ramps[index].as_ref().expect("ramp geometry");
                    let block = if pos > s { g.blocks_before(&ramp.from, &(pos - s)) } else { BigUint::zero() };
                    let check = |block: &BigUint| -> Option<(BigUint, usize)> {
                        let j = &ramp.from + block;
                        let mut off = s + g.prefix(&ramp.from, block);
                        for t in &ramp.body {
                            let count = t.count_at(&j);
                            if let Atom::Cycle(c) = t.atom {
                                if accept(c) {
                                    if let Some(at) = first_copy(&off, c, &count) {
                                        return Some((at, c));
                                    }
                                }
                            }
                            off += count * self.atom_len(&t.atom);
                        }
                        None
                    };
                    if let Some(hit) = check(&block) {
                        return Some(hit);
                    }
                    if &block + 1u32 < g.blocks {
                        if let Some(hit) = check(&(block + 1u32)) {
                            return Some(hit);
                        }
                    }
                }
            }
        }
        None
    }

    fn run_pieces<F>(&self, s: &BigUint, cycle: usize, count: &BigUint, a: &BigUint, b: &BigUint, f: &mut F)
    where
        F: FnMut(RangePiece),
    {
        let l = &self.ambient[cycle - 1];
        let end = s + count * l;
        let lo = if a > s { a - s } else { BigUint::zero() };
        let hi = if b < &end { b - s } else { &end - s };
        if lo > hi {
            return;
        }
        let (r1, rem1) = lo.div_rem(l);
        let (r2, rem2) = hi.div_rem(l);
        // Copy r covers relative offsets r*l ..= (r+1)*l.
        if r2 > &r1 + 1u32 || (r2 > r1 && rem1.is_zero()) {
            f(RangePiece::Full { cycle });
            return;
        }
        if r1 == r2 {
            if rem1.is_zero() && rem2.is_zero() {
                return;
            }
            f(RangePiece::Partial {
                cycle,
                lo: rem1,
                hi: rem2,
            });
        } else {
            f(RangePiece::Partial {
                cycle,
                lo: rem1,
                hi: l.clone(),
            });
            if !rem2.is_zero() {
                f(RangePiece::Partial {
                    cycle,
                    lo: BigUint::zero(),
                    hi: rem2,
                });
            }
        }
    }
}

impl RampGeometry {
    /// Total length of the `count` blocks starting at index `from`.
    fn prefix(&self, from: &BigUint, count: &BigUint) -> BigUint {
        if count.is_zero() {
            return BigUint::zero();
        }
        let first = &self.slope * from + &self.intercept;
        count * first + &self.slope * count * (count - 1u32) / 2u32
    }

    /// Largest `J < blocks` with `prefix(J) <= q`, for `q` inside the ramp.
    fn blocks_before(&self, from: &BigUint, q: &BigUint) -> BigUint {
        let mut j = if self.slope.is_zero() {
            q / &self.intercept
        } else {
            // prefix(J) <= q  <=>  A J^2 + b J - 2q <= 0,  b = 2(A from + B) - A
            let a = BigInt::from(self.slope.clone());
            let b = BigInt::from(2u32 * (&self.slope * from + &self.intercept)) - &a;
            let disc = &b * &b + BigInt::from(8u32) * &a * BigInt::from(q.clone());
            let root = (disc.sqrt() - b).div_floor(&(BigInt::from(2u32) * a));
            root.to_biguint().unwrap_or_default()
        };
        let last = &self.blocks - 1u32;
        if j > last {
            j = last.clone();
        }
        while j < last && &self.prefix(from, &(&j + 1u32)) <= q {
            j += 1u32;
        }
        while !j.is_zero() && &self.prefix(from, &j) > q {
            j -= 1u32;
        }
        j
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn ramp_1_to(k: u64) -> Term {
        Term::Ramp(Ramp {
            from: big(1),
            to: big(k),
            body: vec![
                RampTerm::indexed(Atom::Edge),
                RampTerm::fixed(Atom::Cycle(1), 2u32),
            ],
        })
    }

    #[test]
    fn ramp_length_matches_block_sum() {
        let p = PathExpr::new(vec![ramp_1_to(22), Term::edges(1u32), Term::edges(1u32)], &[big(10)])
            .unwrap();
        assert_eq!(p.len(), &big(695));
    }

    #[test]
    fn locate_agrees_with_expansion() {
        let p = PathExpr::new(
            vec![Term::edges(1u32), ramp_1_to(7), Term::cycles(2, 3u32), Term::edges(2u32)],
            &[big(5), big(4)],
        )
        .unwrap();
        // Walk the expanded path edge by edge.
        let mut expected = vec![Locus::Base];
        for t in p.expanded_terms(1000).unwrap() {
            match t {
                Term::EdgeRun { count } => {
                    for _ in 0..u64::try_from(count).unwrap() {
                        expected.push(Locus::Base);
                    }
                }
                Term::CycleRun { cycle, count } => {
                    let l = if cycle == 1 { 5 } else { 4 };
                    for _ in 0..u64::try_from(count).unwrap() {
                        for r in 1..=l {
                            expected.push(if r == l {
                                Locus::Base
                            } else {
                                Locus::OnCycle {
                                    cycle,
                                    position: big(r),
                                }
                            });
                        }
                    }
                }
                Term::Ramp(_) => unreachable!(),
            }
        }
        assert_eq!(expected.len() as u64 - 1, u64::try_from(p.len().clone()).unwrap());
        for (offset, want) in expected.iter().enumerate() {
            let hit = p.locate(&big(offset as u64)).unwrap();
            assert_eq!(&hit.locus, want, "offset {offset}");
            if let Locus::OnCycle { position, .. } = &hit.locus {
                assert_eq!(&hit.entry + position, big(offset as u64));
            }
        }
    }

    #[test]
    fn offset_past_end_is_rejected() {
        let p = PathExpr::new(vec![Term::edges(3u32)], &[]).unwrap();
        assert!(matches!(
            p.locate(&big(4)),
            Err(BouquetError::OffsetOutOfRange { .. })
        ));
    }

    #[test]
    fn unknown_cycle_is_rejected() {
        let err = PathExpr::new(vec![Term::edges(1u32), Term::cycles(2, 1u32)], &[big(3)])
            .unwrap_err();
        assert_eq!(
            err,
            BouquetError::UnknownCycle {
                cycle: 2,
                available: 1
            }
        );
    }

    #[test]
    fn counts_match_enumeration() {
        let p = PathExpr::new(
            vec![Term::edges(1u32), ramp_1_to(9), Term::cycles(2, 2u32), Term::edges(1u32)],
            &[big(6), big(3)],
        )
        .unwrap();
        for locus in [
            Locus::Base,
            Locus::OnCycle {
                cycle: 1,
                position: big(2),
            },
            Locus::OnCycle {
                cycle: 2,
                position: big(1),
            },
        ] {
            let all = p.offsets_of(&locus, usize::MAX);
            assert_eq!(BigUint::from(all.len()), p.count_locus(&locus));
            for o in &all {
                assert_eq!(p.locate(o).unwrap().locus, locus);
            }
        }
    }

    #[test]
    fn huge_ramp_is_located_without_expansion() {
        let k = BigUint::from(10u32).pow(40);
        let p = PathExpr::new(
            vec![
                Term::edges(1u32),
                Term::Ramp(Ramp {
                    from: big(1),
                    to: k.clone(),
                    body: vec![
                        RampTerm::indexed(Atom::Edge),
                        RampTerm::fixed(Atom::Cycle(1), 2u32),
                    ],
                }),
                Term::edges(1u32),
            ],
            &[big(10)],
        )
        .unwrap();
        // Last block is k edges then two copies of c1; one edge into the last copy.
        let end_of_ramp = p.len() - 1u32;
        let probe = &end_of_ramp - 10u32 + 1u32;
        assert_eq!(
            p.locate(&probe).unwrap().locus,
            Locus::OnCycle {
                cycle: 1,
                position: big(1)
            }
        );
        assert_eq!(p.locate(&(&end_of_ramp - 20u32 - 1u32)).unwrap().locus, Locus::Base);
    }
}
