use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{Atom, BouquetError, Construction, LevelSpec, Term};

const OFFSETS_KEPT: usize = 64;
const DESCRIPTOR_TERMS: usize = 64;

/// Complete copies of one level-`from` cycle inside the projected image of a
/// level-`to` cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OccurrenceReport {
    pub from_level: usize,
    pub to_level: usize,
    pub target_cycle: usize,
    pub source_cycle: usize,
    /// Edges in the projected image.
    pub image_length: u64,
    pub copy_count: u64,
    /// Start offsets of the first copies.
    pub offsets_truncated: Vec<u64>,
    /// Edges between consecutive copies -> number of times seen.
    pub gap_histogram: BTreeMap<u64, u64>,
    /// Runs up to and including the first copy.
    pub prefix: Vec<Term>,
    /// Runs from the last copy to the end.
    pub suffix: Vec<Term>,
    /// Edges before the first copy.
    pub leading_gap: u64,
    /// Edges after the last copy.
    pub trailing_gap: u64,
    pub budget: u64,
}

impl OccurrenceReport {
    pub fn gap_set(&self) -> Vec<u64> {
        self.gap_histogram.keys().copied().collect()
    }
}

struct Scan {
    target: usize,
    target_len: u64,
    offset: u64,
    copies: u64,
    gap: u64,
    offsets: Vec<u64>,
    histogram: BTreeMap<u64, u64>,
    pending: Vec<Term>,
    prefix: Option<Vec<Term>>,
    leading_gap: u64,
}

impl Scan {
    fn push_pending(&mut self, atom: &Atom, count: &BigUint) {
        match (self.pending.last_mut(), atom) {
            (Some(Term::EdgeRun { count: c }), Atom::Edge) => *c += count,
            (Some(Term::CycleRun { cycle, count: c }), Atom::Cycle(i)) if cycle == i => *c += count,
            _ => {
                if self.pending.len() < DESCRIPTOR_TERMS {
                    self.pending.push(match atom {
                        Atom::Edge => Term::edges(count.clone()),
                        Atom::Cycle(i) => Term::cycles(*i, count.clone()),
                    });
                }
            }
        }
    }

    fn segment(&mut self, atom: &Atom, count: &BigUint, lengths: &[u64]) {
        let n = count.to_u64().expect("scan budget keeps counts in u64");
        match atom {
            Atom::Cycle(i) if *i == self.target => {
                if self.copies == 0 {
                    let mut prefix = std::mem::take(&mut self.pending);
                    prefix.push(Term::cycles(*i, 1u32));
                    self.prefix = Some(prefix);
                    self.leading_gap = self.gap;
                } else {
                    *self.histogram.entry(self.gap).or_default() += 1;
                }
                if n > 1 {
                    *self.histogram.entry(0).or_default() += n - 1;
                }
                for r in 0..n {
                    if self.offsets.len() >= OFFSETS_KEPT {
                        break;
                    }
                    self.offsets.push(self.offset + r * self.target_len);
                }
                self.copies += n;
                self.offset += n * self.target_len;
                self.gap = 0;
                self.pending.clear();
            }
            _ => {
                let len = match atom {
                    Atom::Edge => n,
                    Atom::Cycle(i) => n * lengths[i - 1],
                };
                self.gap += len;
                self.offset += len;
                self.push_pending(atom, count);
            }
        }
    }
}

impl Construction {
    /// Visits the image of `c_{level,cycle}` projected down to `target_level`
    /// as a sequence of runs over level `target_level` symbols.
    ///
    /// The walk is linear in the number of runs, not edges, but cycle runs
    /// above `target_level` are unrolled copy by copy.
    pub fn expand_to_level<F>(
        &self,
        level: usize,
        cycle: usize,
        target_level: usize,
        mut visit: F,
    ) -> Result<ControlFlow<()>, BouquetError>
    where
        F: FnMut(&Atom, &BigUint) -> ControlFlow<()>,
    {
        if target_level >= level {
            return Err(BouquetError::EmptySpan {
                from: target_level,
                to: level,
            });
        }
        self.cycle_length(level, cycle)?;
        // specs[k] holds the formulas into level target_level + k.
        let specs = (target_level..level)
            .map(|n| self.spec(n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(unroll(&specs, level - target_level - 1, cycle, &mut visit))
    }

    /// Scans `phi_{to,from}(c_{to,source})` for complete copies of
    /// `c_{from,target}`.
    pub fn find_occurrences(
        &self,
        from: usize,
        to: usize,
        target_cycle: usize,
        source_cycle: usize,
        budget: u64,
    ) -> Result<OccurrenceReport, BouquetError> {
        if from >= to {
            return Err(BouquetError::EmptySpan { from, to });
        }
        let image_length = self.cycle_length(to, source_cycle)?;
        if image_length > BigUint::from(budget) {
            return Err(BouquetError::BudgetExceeded {
                what: "occurrence scan",
                required: image_length,
                budget,
            });
        }
        let image_length = image_length.to_u64().expect("bounded by budget");
        let lengths: Vec<u64> = self
            .cycle_lengths(from)?
            .iter()
            .map(|l| l.to_u64().expect("bounded by budget"))
            .collect();
        let target_len = *lengths
            .get(target_cycle.wrapping_sub(1))
            .ok_or(BouquetError::CycleIndexOutOfRange {
                level: from,
                cycle: target_cycle,
                count: lengths.len(),
            })?;

        let mut scan = Scan {
            target: target_cycle,
            target_len,
            offset: 0,
            copies: 0,
            gap: 0,
            offsets: Vec::new(),
            histogram: BTreeMap::new(),
            pending: Vec::new(),
            prefix: None,
            leading_gap: 0,
        };
        let _ = self.expand_to_level(to, source_cycle, from, |atom, count| {
            scan.segment(atom, count, &lengths);
            ControlFlow::Continue(())
        })?;
        debug_assert_eq!(scan.offset, image_length);

        let (prefix, suffix, leading_gap) = match scan.prefix {
            Some(prefix) => {
                let mut suffix = vec![Term::cycles(target_cycle, 1u32)];
                suffix.extend(scan.pending);
                (prefix, suffix, scan.leading_gap)
            }
            None => (scan.pending, Vec::new(), scan.gap),
        };
        Ok(OccurrenceReport {
            from_level: from,
            to_level: to,
            target_cycle,
            source_cycle,
            image_length,
            copy_count: scan.copies,
            offsets_truncated: scan.offsets,
            gap_histogram: scan.histogram,
            prefix,
            suffix,
            leading_gap,
            trailing_gap: if scan.copies > 0 { scan.gap } else { 0 },
            budget,
        })
    }
}

// Unrolls the formula of cycle `cycle` found in `specs[depth]`.
fn unroll<F>(specs: &[Arc<LevelSpec>], depth: usize, cycle: usize, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&Atom, &BigUint) -> ControlFlow<()>,
{
    let formula = &specs[depth].image_formulas[cycle - 1];
    formula.for_each_segment(|_, atom, count| match atom {
        Atom::Cycle(inner) if depth > 0 => {
            let mut r = BigUint::zero();
            while &r < count {
                unroll(specs, depth - 1, *inner, visit)?;
                r += 1u32;
            }
            ControlFlow::Continue(())
        }
        _ => visit(atom, count),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_SCAN_BUDGET;

    #[test]
    fn first_cycle_one_level_up() {
        let c = Construction::builtin();
        let r = c.find_occurrences(1, 2, 1, 1, DEFAULT_SCAN_BUDGET).unwrap();
        assert_eq!(r.image_length, 695);
        assert_eq!(r.copy_count, 44);
        let mut expected = vec![0];
        expected.extend(2..=22);
        assert_eq!(r.gap_set(), expected);
        assert_eq!(r.prefix, vec![Term::edges(1u32), Term::cycles(1, 1u32)]);
        assert_eq!(r.suffix, vec![Term::cycles(1, 1u32), Term::edges(2u32)]);
        assert_eq!(r.trailing_gap, 2);
        assert_eq!(&r.offsets_truncated[..3], &[1, 11, 23]);
    }

    #[test]
    fn last_cycle_image_has_no_copies() {
        let c = Construction::builtin();
        let r = c.find_occurrences(1, 2, 1, 2, DEFAULT_SCAN_BUDGET).unwrap();
        assert_eq!(r.copy_count, 0);
        assert!(r.gap_histogram.is_empty());
        assert_eq!(r.prefix, vec![Term::edges(90u32)]);
    }

    #[test]
    fn budget_is_enforced() {
        let c = Construction::builtin();
        let err = c.find_occurrences(1, 3, 1, 1, 1_000_000).unwrap_err();
        assert_eq!(
            err,
            BouquetError::BudgetExceeded {
                what: "occurrence scan",
                required: BigUint::from(3_421_640u32),
                budget: 1_000_000
            }
        );
    }

    #[test]
    fn expansion_length_matches_cycle_length() {
        let c = Construction::builtin();
        let mut total = 0u64;
        let lengths = [695u64, 90];
        let _ = c.expand_to_level(3, 1, 2, |atom, count| {
            let n = count.to_u64().unwrap();
            total += match atom {
                Atom::Edge => n,
                Atom::Cycle(i) => n * lengths[i - 1],
            };
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(total, 3_421_640);
    }
}
