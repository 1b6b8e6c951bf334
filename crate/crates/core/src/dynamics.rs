//! Points of the inverse limit and the shift map on them.
//!
//! A point is stored as one deep address (the spine) plus a time offset.
//! Because every cover sends the base to the base, the coordinates at lower
//! levels are projections of the spine coordinate, so columns are coherent
//! by construction. Moving the point forward by `t` moves the spine address
//! `t` edges along its cycle; this stays exact until the spine address
//! reaches the base of its level, after which the continuation depends on
//! levels above the spine and the handle reports [`DynamicsError::SpineExhausted`].

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bouquet::{Atom, BouquetError, Construction, Locus, Term, VertexAddr};
use crate::decimal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error(transparent)]
    Bouquet(#[from] BouquetError),
    #[error("offset {requested} is outside the spine's valid range {first_valid}..={last_valid}")]
    SpineExhausted {
        requested: BigInt,
        first_valid: BigInt,
        last_valid: BigInt,
    },
    #[error("depth {depth} exceeds the spine level {spine}")]
    DepthExceedsSpine { depth: usize, spine: usize },
    #[error("no handle satisfying the condition after {attempts} draws")]
    SamplingFailed { attempts: u64 },
}

/// A truncated point of the inverse limit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointHandle {
    spine_level: usize,
    initial: Locus,
    #[serde(with = "decimal::signed")]
    offset: BigInt,
}

/// `2^-k` for an exact distance, or only a bound when the columns agree on
/// every level both handles know.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceValue {
    /// First differing level is `level`; distance is `2^-level`.
    Exact { level: usize },
    /// Columns agree on levels `0..=depth`; distance is at most `2^-(depth+1)`.
    UpperBoundOnly { depth: usize },
}

impl DistanceValue {
    pub fn upper_bound(&self) -> f64 {
        match *self {
            DistanceValue::Exact { level } => 0.5f64.powi(level as i32),
            DistanceValue::UpperBoundOnly { depth } => 0.5f64.powi(depth as i32 + 1),
        }
    }

    pub fn exact_level(&self) -> Option<usize> {
        match *self {
            DistanceValue::Exact { level } => Some(level),
            DistanceValue::UpperBoundOnly { .. } => None,
        }
    }
}

impl PointHandle {
    /// The fixed point: base vertex at every level.
    pub fn fixed_point(spine_level: usize) -> Self {
        Self {
            spine_level,
            initial: Locus::Base,
            offset: BigInt::zero(),
        }
    }

    pub fn new(c: &Construction, spine: VertexAddr) -> Result<Self, DynamicsError> {
        c.check_addr(&spine)?;
        Ok(Self {
            spine_level: spine.level,
            initial: spine.locus,
            offset: BigInt::zero(),
        })
    }

    pub fn spine_level(&self) -> usize {
        self.spine_level
    }

    pub fn initial(&self) -> &Locus {
        &self.initial
    }

    pub fn offset(&self) -> &BigInt {
        &self.offset
    }

    pub fn is_fixed_point(&self) -> bool {
        self.initial.is_base()
    }

    /// Offsets at which the spine address is known, `None` when unbounded.
    pub fn valid_offsets(&self, c: &Construction) -> Result<Option<(BigInt, BigInt)>, DynamicsError> {
        match &self.initial {
            Locus::Base => Ok(None),
            Locus::OnCycle { cycle, position } => {
                let len = c.cycle_length(self.spine_level, *cycle)?;
                let p = BigInt::from(position.clone());
                Ok(Some((-&p, BigInt::from(len) - p)))
            }
        }
    }

    fn check_offset(&self, c: &Construction, offset: &BigInt) -> Result<(), DynamicsError> {
        if let Some((first, last)) = self.valid_offsets(c)? {
            if offset < &first || offset > &last {
                return Err(DynamicsError::SpineExhausted {
                    requested: offset.clone(),
                    first_valid: first,
                    last_valid: last,
                });
            }
        }
        Ok(())
    }

    /// Spine coordinate at the current offset.
    pub fn spine_addr(&self, c: &Construction) -> Result<VertexAddr, DynamicsError> {
        self.check_offset(c, &self.offset)?;
        let locus = match &self.initial {
            Locus::Base => Locus::Base,
            Locus::OnCycle { cycle, position } => {
                let p = BigInt::from(position.clone()) + &self.offset;
                let len = BigInt::from(c.cycle_length(self.spine_level, *cycle)?);
                if p.is_zero() || p == len {
                    Locus::Base
                } else {
                    Locus::OnCycle {
                        cycle: *cycle,
                        position: p.to_biguint().expect("checked against valid range"),
                    }
                }
            }
        };
        Ok(VertexAddr {
            level: self.spine_level,
            locus,
        })
    }

    /// Coordinates at levels `0..=depth`.
    pub fn column_of(&self, c: &Construction, depth: usize) -> Result<Vec<VertexAddr>, DynamicsError> {
        if depth > self.spine_level {
            return Err(DynamicsError::DepthExceedsSpine {
                depth,
                spine: self.spine_level,
            });
        }
        let spine = self.spine_addr(c)?;
        let mut column = c.column(&spine)?;
        column.truncate(depth + 1);
        Ok(column)
    }

    /// `T^delta` of the point; `delta` may be negative.
    pub fn step(&self, c: &Construction, delta: &BigInt) -> Result<PointHandle, DynamicsError> {
        let offset = &self.offset + delta;
        self.check_offset(c, &offset)?;
        Ok(PointHandle {
            spine_level: self.spine_level,
            initial: self.initial.clone(),
            offset,
        })
    }

    pub fn step_by(&self, c: &Construction, delta: i64) -> Result<PointHandle, DynamicsError> {
        self.step(c, &BigInt::from(delta))
    }

    /// Smallest `d >= 0` such that the level-`m` coordinate of `T^d` is the base.
    pub fn next_base_time(&self, c: &Construction, m: usize) -> Result<BigUint, DynamicsError> {
        if m > self.spine_level {
            return Err(DynamicsError::DepthExceedsSpine {
                depth: m,
                spine: self.spine_level,
            });
        }
        let spine = self.spine_addr(c)?;
        match spine.locus {
            Locus::Base => Ok(BigUint::zero()),
            Locus::OnCycle { cycle, position } => {
                let target = next_base_offset(c, spine.level, cycle, &position, m)?;
                Ok(target - position)
            }
        }
    }
}

// Smallest offset `q >= p` along `c_{level,cycle}` whose vertex projects to
// the base at level `m`. Offset `|c|` (the closing base) always qualifies.
fn next_base_offset(
    c: &Construction,
    level: usize,
    cycle: usize,
    p: &BigUint,
    m: usize,
) -> Result<BigUint, BouquetError> {
    let len = c.cycle_length(level, cycle)?;
    if p.is_zero() || p == &len {
        return Ok(p.clone());
    }
    if level == m {
        return Ok(len);
    }
    let below = c.spec(level - 1)?;
    let hit = below.image_formulas[cycle - 1].locate(p)?;
    match hit.locus {
        Locus::Base => Ok(p.clone()),
        Locus::OnCycle {
            cycle: inner,
            position,
        } => Ok(hit.entry + next_base_offset(c, level - 1, inner, &position, m)?),
    }
}

// Whether some interior vertex of `c_{level,cycle}` projects off the base
// at level `m`.
fn has_off_base(c: &Construction, level: usize, cycle: usize, m: usize) -> Result<bool, BouquetError> {
    if level == m {
        return Ok(true);
    }
    if m == 0 || level < m {
        return Ok(false);
    }
    let below = c.spec(level - 1)?;
    for term in below.image_formulas[cycle - 1].terms() {
        let inner: Vec<usize> = match term {
            Term::EdgeRun { .. } => Vec::new(),
            Term::CycleRun { cycle, .. } => vec![*cycle],
            Term::Ramp(r) => r
                .body
                .iter()
                .filter_map(|t| match t.atom {
                    Atom::Cycle(i) => Some(i),
                    Atom::Edge => None,
                })
                .collect(),
        };
        for i in inner {
            if has_off_base(c, level - 1, i, m)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

// Smallest offset `q >= p`, `q < |c|`, along `c_{level,cycle}` whose vertex
// projects off the base at level `m`.
fn next_off_base_offset(
    c: &Construction,
    level: usize,
    cycle: usize,
    p: &BigUint,
    m: usize,
) -> Result<Option<BigUint>, BouquetError> {
    let len = c.cycle_length(level, cycle)?;
    if m == 0 || p >= &len {
        return Ok(None);
    }
    if level == m {
        return Ok(Some(p.max(&BigUint::one()).clone()));
    }
    let below = c.spec(level - 1)?;
    let formula = &below.image_formulas[cycle - 1];
    let accepted = (1..=below.cycle_count())
        .map(|i| has_off_base(c, level - 1, i, m))
        .collect::<Result<Vec<_>, _>>()?;
    let mut pos = p.clone();
    while pos < len {
        let hit = formula.locate(&pos)?;
        let (start, inner, from) = match hit.locus {
            Locus::OnCycle { cycle: inner, position } => (hit.entry, inner, position),
            Locus::Base => {
                let next = formula.next_copy_start(&pos, |i| accepted[i - 1]);
                match next {
                    Some((start, inner)) => (start, inner, BigUint::zero()),
                    None => return Ok(None),
                }
            }
        };
        if let Some(x) = next_off_base_offset(c, level - 1, inner, &from, m)? {
            return Ok(Some(start + x));
        }
        pos = start + c.cycle_length(level - 1, inner)?;
    }
    Ok(None)
}

/// Metric distance, comparing levels `1..=min(spine levels)`.
pub fn distance(c: &Construction, a: &PointHandle, b: &PointHandle) -> Result<DistanceValue, DynamicsError> {
    let depth = a.spine_level.min(b.spine_level);
    let ca = a.column_of(c, depth)?;
    let cb = b.column_of(c, depth)?;
    Ok(first_difference(&ca, &cb)
        .map(|level| DistanceValue::Exact { level })
        .unwrap_or(DistanceValue::UpperBoundOnly { depth }))
}

pub(crate) fn first_difference(a: &[VertexAddr], b: &[VertexAddr]) -> Option<usize> {
    a.iter()
        .zip(b)
        .position(|(x, y)| x.locus != y.locus)
}

/// Draws a handle on the spine level with at least `reserve` forward steps
/// before its spine reaches the base. Cycle 1 is chosen with probability
/// 3/4, otherwise a uniform cycle among the rest.
pub fn random_handle<R: Rng + ?Sized>(
    c: &Construction,
    rng: &mut R,
    spine_level: usize,
    reserve: &BigUint,
) -> Result<PointHandle, DynamicsError> {
    let count = c.cycle_count(spine_level)?;
    if count == 0 {
        return Ok(PointHandle::fixed_point(spine_level));
    }
    let cycle = if count == 1 || rng.gen_bool(0.75) {
        1
    } else {
        rng.gen_range(2..=count)
    };
    let len = c.cycle_length(spine_level, cycle)?;
    let one = BigUint::one();
    let cap = if len > reserve + 1u32 {
        &len - reserve
    } else {
        len.clone()
    };
    let position = rng.gen_biguint_range(&one, &cap);
    PointHandle::new(c, VertexAddr::on_cycle(spine_level, cycle, position))
}

/// One row of an orbit trace: time and coordinates at levels `0..=depth`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitRow {
    #[serde(with = "decimal::signed")]
    pub t: BigInt,
    pub levels: Vec<Locus>,
}

pub fn orbit_trace<I>(
    c: &Construction,
    h: &PointHandle,
    depth: usize,
    times: I,
) -> Result<Vec<OrbitRow>, DynamicsError>
where
    I: IntoIterator<Item = BigInt>,
{
    times
        .into_iter()
        .map(|t| {
            let column = h.step(c, &t)?.column_of(c, depth)?;
            Ok(OrbitRow {
                t,
                levels: column.into_iter().map(|a| a.locus).collect(),
            })
        })
        .collect()
}

/// CSV with a `t` column and, per level `n`, `l{n}_cycle` (0 = base) and
/// `l{n}_pos`.
pub fn trace_csv(rows: &[OrbitRow], depth: usize) -> String {
    let mut out = String::from("t");
    for n in 0..=depth {
        let _ = write!(out, ",l{n}_cycle,l{n}_pos");
    }
    out.push('\n');
    for row in rows {
        let _ = write!(out, "{}", row.t);
        for locus in &row.levels {
            let _ = write!(out, ",{},{}", locus.cycle_index(), locus.position());
        }
        out.push('\n');
    }
    out
}

pub fn trace_jsonl(rows: &[OrbitRow]) -> String {
    #[derive(Serialize)]
    struct Level {
        cycle: usize,
        position: String,
    }
    #[derive(Serialize)]
    struct Line {
        t: String,
        levels: Vec<Level>,
    }
    let mut out = String::new();
    for row in rows {
        let line = Line {
            t: row.t.to_string(),
            levels: row
                .levels
                .iter()
                .map(|l| Level {
                    cycle: l.cycle_index(),
                    position: l.position().to_string(),
                })
                .collect(),
        };
        out.push_str(&serde_json::to_string(&line).expect("plain data"));
        out.push('\n');
    }
    out
}

impl PointHandle {
    /// Smallest `d >= 0` such that the level-`m` coordinate of `T^d` is off
    /// the base, or `None` if it stays at the base until the spine closes.
    pub fn next_off_base_time(&self, c: &Construction, m: usize) -> Result<Option<BigUint>, DynamicsError> {
        if m > self.spine_level {
            return Err(DynamicsError::DepthExceedsSpine {
                depth: m,
                spine: self.spine_level,
            });
        }
        self.check_offset(c, &self.offset)?;
        let Locus::OnCycle { cycle, position } = &self.initial else {
            return Ok(None);
        };
        let p = (BigInt::from(position.clone()) + &self.offset)
            .to_biguint()
            .expect("checked against valid range");
        Ok(next_off_base_offset(c, self.spine_level, *cycle, &p, m)?.map(|q| q - p))
    }

    /// Distance in steps to the spine's closing base, if bounded.
    pub fn forward_horizon(&self, c: &Construction) -> Result<Option<BigUint>, DynamicsError> {
        Ok(self.valid_offsets(c)?.map(|(_, last)| {
            let d = last - &self.offset;
            match d.sign() {
                Sign::Minus => BigUint::zero(),
                _ => d.to_biguint().expect("non-negative"),
            }
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn handle(c: &Construction, level: usize, cycle: usize, pos: u64) -> PointHandle {
        PointHandle::new(c, VertexAddr::on_cycle(level, cycle, pos)).unwrap()
    }

    #[test]
    fn fixed_point_column_is_all_base() {
        let c = Construction::builtin();
        let p = PointHandle::fixed_point(5);
        let col = p.column_of(&c, 5).unwrap();
        assert!(col.iter().all(|a| a.locus.is_base()));
        let moved = p.step(&c, &BigInt::from(10u64.pow(9))).unwrap();
        assert_eq!(moved.column_of(&c, 5).unwrap(), col);
        assert_eq!(
            distance(&c, &p, &PointHandle::fixed_point(9)).unwrap(),
            DistanceValue::UpperBoundOnly { depth: 5 }
        );
    }

    #[test]
    fn column_examples() {
        let c = Construction::builtin();
        let h = handle(&c, 2, 1, 1);
        let col: Vec<_> = h.column_of(&c, 2).unwrap();
        assert_eq!(
            col,
            vec![VertexAddr::base(0), VertexAddr::base(1), VertexAddr::on_cycle(2, 1, 1u32)]
        );
        let next = h.step_by(&c, 1).unwrap().column_of(&c, 1).unwrap();
        assert_eq!(next[1], VertexAddr::on_cycle(1, 1, 1u32));
        let on_last = handle(&c, 2, 2, 7).column_of(&c, 1).unwrap();
        assert_eq!(on_last[1], VertexAddr::base(1));
    }

    #[test]
    fn horizon_and_exhaustion() {
        let c = Construction::builtin();
        let h = handle(&c, 2, 1, 1);
        assert!(h.step_by(&c, 694).is_ok());
        match h.step_by(&c, 695) {
            Err(DynamicsError::SpineExhausted { last_valid, .. }) => {
                assert_eq!(last_valid, BigInt::from(694))
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
        assert!(h.step_by(&c, -1).is_ok());
        assert!(h.step_by(&c, -2).is_err());
        assert_eq!(h.forward_horizon(&c).unwrap(), Some(BigUint::from(694u32)));
    }

    #[test]
    fn step_round_trip() {
        let c = Construction::builtin();
        let h = handle(&c, 3, 1, 1000);
        let there = h.step_by(&c, 7).unwrap();
        assert_eq!(there.step_by(&c, -7).unwrap(), h);
    }

    #[test]
    fn distance_example() {
        let c = Construction::builtin();
        let h = handle(&c, 2, 1, 1);
        assert_eq!(
            distance(&c, &h, &PointHandle::fixed_point(2)).unwrap(),
            DistanceValue::Exact { level: 2 }
        );
        assert_eq!(
            distance(&c, &h, &h).unwrap(),
            DistanceValue::UpperBoundOnly { depth: 2 }
        );
    }

    #[test]
    fn next_base_time_examples() {
        let c = Construction::builtin();
        assert_eq!(handle(&c, 1, 1, 3).next_base_time(&c, 1).unwrap(), BigUint::from(7u32));
        assert_eq!(handle(&c, 2, 1, 2).next_base_time(&c, 1).unwrap(), BigUint::from(9u32));
        assert_eq!(handle(&c, 2, 1, 1).next_base_time(&c, 1).unwrap(), BigUint::zero());
        assert_eq!(
            PointHandle::fixed_point(4).next_base_time(&c, 3).unwrap(),
            BigUint::zero()
        );
    }

    #[test]
    fn next_off_base_time_matches_stepping() {
        let c = Construction::builtin();
        let cases = [(2, 1, 10u64, 1usize), (2, 1, 30, 2), (3, 1, 700, 2), (3, 2, 1, 2), (3, 3, 5, 2), (4, 2, 3, 3), (4, 1, 25, 3)];
        for (level, cycle, pos, m) in cases {
            let h = handle(&c, level, cycle, pos);
            let horizon = h.forward_horizon(&c).unwrap().unwrap();
            let horizon = u64::try_from(horizon).unwrap().min(200_000);
            let brute = (0..=horizon).find(|&t| {
                let col = h.step_by(&c, t as i64).unwrap().column_of(&c, m).unwrap();
                !col[m].locus.is_base()
            });
            let fast = h.next_off_base_time(&c, m).unwrap().map(|d| u64::try_from(d).unwrap());
            match brute {
                Some(t) => assert_eq!(fast, Some(t), "{level} {cycle} {pos} {m}"),
                None => assert!(fast.is_none_or(|d| d > horizon), "{level} {cycle} {pos} {m}"),
            }
        }
        assert_eq!(PointHandle::fixed_point(3).next_off_base_time(&c, 2).unwrap(), None);
    }

    #[test]
    fn csv_layout() {
        let c = Construction::builtin();
        let h = handle(&c, 2, 1, 1);
        let rows = orbit_trace(&c, &h, 1, (0..=3).map(BigInt::from)).unwrap();
        let csv = trace_csv(&rows, 1);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "t,l0_cycle,l0_pos,l1_cycle,l1_pos");
        assert_eq!(lines[1], "0,0,0,0,0");
        assert_eq!(lines[2], "1,0,0,1,1");
        assert_eq!(lines[3], "2,0,0,1,2");
        assert_eq!(trace_jsonl(&rows).lines().count(), 4);
    }
}
