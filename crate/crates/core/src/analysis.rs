//! Finite, checkable versions of the chaos properties of the limit system.
//!
//! Degrees, proximality certificates, Li-Yorke pair sampling, mixing-gap
//! reports and the return-length semigroup. Everything here is empirical:
//! a report says what a bounded computation saw, never more.

use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bouquet::{Atom, BouquetError, Construction, Locus, OccurrenceReport, RangePiece, Term};
use crate::dynamics::{first_difference, random_handle, DistanceValue, DynamicsError, PointHandle};

/// Cycle index of a vertex, infinite at the base.
///
/// Variant order makes every finite degree smaller than `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum DegreeValue {
    Finite(usize),
    Infinite,
}

impl DegreeValue {
    pub fn of_locus(locus: &Locus) -> Self {
        match locus {
            Locus::Base => DegreeValue::Infinite,
            Locus::OnCycle { cycle, .. } => DegreeValue::Finite(*cycle),
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            DegreeValue::Finite(i) => Some(i),
            DegreeValue::Infinite => None,
        }
    }
}

impl std::fmt::Display for DegreeValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DegreeValue::Finite(i) => write!(f, "{i}"),
            DegreeValue::Infinite => f.write_str("inf"),
        }
    }
}

/// Depth-`depth` estimate of the degree: minimum over levels `0..=depth`.
pub fn degree_of_column(c: &Construction, h: &PointHandle, depth: usize) -> Result<DegreeValue, DynamicsError> {
    let column = h.column_of(c, depth)?;
    Ok(column
        .iter()
        .map(|a| DegreeValue::of_locus(&a.locus))
        .min()
        .unwrap_or(DegreeValue::Infinite))
}

/// Degree estimates at every depth `0..=depth`.
pub fn degree_profile(c: &Construction, h: &PointHandle, depth: usize) -> Result<Vec<DegreeValue>, DynamicsError> {
    let column = h.column_of(c, depth)?;
    let mut best = DegreeValue::Infinite;
    Ok(column
        .iter()
        .map(|a| {
            best = best.min(DegreeValue::of_locus(&a.locus));
            best
        })
        .collect())
}

/// Result for one window of a proximality certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowHit {
    #[serde(with = "crate::decimal")]
    pub start: BigUint,
    #[serde(with = "crate::decimal")]
    pub length: BigUint,
    /// First time in `start..start+length` whose level-`m` coordinate is the
    /// base, so the point is within `2^-(m+1)` of the fixed point.
    #[serde(with = "crate::decimal::option")]
    pub hit: Option<BigUint>,
}

/// Checks each half-open window `[start, start + length)` for a base hit at
/// level `m`.
pub fn proximal_certificate(
    c: &Construction,
    h: &PointHandle,
    m: usize,
    windows: &[(BigUint, BigUint)],
) -> Result<Vec<WindowHit>, DynamicsError> {
    windows
        .iter()
        .map(|(start, length)| {
            let at = h.step(c, &BigInt::from(start.clone()))?;
            let d = at.next_base_time(c, m)?;
            Ok(WindowHit {
                start: start.clone(),
                length: length.clone(),
                hit: (&d < length).then(|| start + d),
            })
        })
        .collect()
}

/// Thresholds for a Li-Yorke scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LiYorkeParams {
    /// Times `0..=horizon` are examined.
    pub horizon: u64,
    /// Proximal witness: both points are the base at levels `0..=prox_depth`.
    pub prox_depth: usize,
    /// Separation witness: first difference at a level `<= sep_depth`.
    pub sep_depth: usize,
}

impl Default for LiYorkeParams {
    fn default() -> Self {
        Self {
            horizon: 10_000,
            prox_depth: 2,
            sep_depth: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub time: u64,
    pub distance: DistanceValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiYorkeReport {
    pub a: PointHandle,
    pub b: PointHandle,
    pub seed: Option<u64>,
    pub params: LiYorkeParams,
    pub proximal_witness: Option<Witness>,
    pub separation_witness: Option<Witness>,
}

impl LiYorkeReport {
    pub fn is_li_yorke_witnessed(&self) -> bool {
        self.proximal_witness.is_some() && self.separation_witness.is_some()
    }
}

fn check_valid_over(c: &Construction, h: &PointHandle, horizon: u64) -> Result<(), DynamicsError> {
    h.step(c, &BigInt::from(horizon)).map(|_| ())
}

/// Looks for a time where both points are close to the fixed point and a
/// time where they are far apart.
///
/// Both searches move between events (base hits and base departures)
/// rather than stepping one unit at a time, so a horizon costs time
/// proportional to the number of events in it.
pub fn li_yorke_test(
    c: &Construction,
    a: &PointHandle,
    b: &PointHandle,
    params: LiYorkeParams,
    seed: Option<u64>,
) -> Result<LiYorkeReport, DynamicsError> {
    check_valid_over(c, a, params.horizon)?;
    check_valid_over(c, b, params.horizon)?;
    let depth = a.spine_level().min(b.spine_level());
    let prox_depth = params.prox_depth.min(depth);
    let sep_depth = params.sep_depth.min(depth);

    let mut proximal_witness = None;
    let mut s = 0u64;
    while s <= params.horizon {
        let (at, bt) = (a.step_by(c, s as i64)?, b.step_by(c, s as i64)?);
        let da = at.next_base_time(c, prox_depth)?;
        let db = bt.next_base_time(c, prox_depth)?;
        if da.is_zero() && db.is_zero() {
            let ca = at.column_of(c, depth)?;
            let cb = bt.column_of(c, depth)?;
            let distance = first_difference(&ca, &cb)
                .map(|level| DistanceValue::Exact { level })
                .unwrap_or(DistanceValue::UpperBoundOnly { depth });
            proximal_witness = Some(Witness { time: s, distance });
            break;
        }
        match da.max(db).to_u64() {
            Some(jump) if jump <= params.horizon - s => s += jump,
            _ => break,
        }
    }

    // Columns that agree at `sep_depth` keep agreeing while both coordinates
    // sit at the base there, or while they share a non-base vertex (which
    // then moves along its cycle in lockstep), so the scan jumps between
    // those events.
    let mut separation_witness = None;
    let mut t = 0u64;
    while t <= params.horizon {
        let (at, bt) = (a.step_by(c, t as i64)?, b.step_by(c, t as i64)?);
        let ca = at.column_of(c, sep_depth)?;
        let cb = bt.column_of(c, sep_depth)?;
        if let Some(level) = first_difference(&ca, &cb) {
            separation_witness = Some(Witness {
                time: t,
                distance: DistanceValue::Exact { level },
            });
            break;
        }
        let jump = if ca[sep_depth].locus.is_base() {
            let da = at.next_off_base_time(c, sep_depth)?;
            let db = bt.next_off_base_time(c, sep_depth)?;
            match (da, db) {
                (Some(x), Some(y)) => x.min(y),
                (Some(x), None) | (None, Some(x)) => x,
                (None, None) => break,
            }
        } else {
            at.next_base_time(c, sep_depth)?
        };
        match jump.to_u64() {
            Some(j) if j >= 1 && j <= params.horizon - t => t += j,
            _ => break,
        }
    }

    Ok(LiYorkeReport {
        a: a.clone(),
        b: b.clone(),
        seed,
        params,
        proximal_witness,
        separation_witness,
    })
}

/// An occurrence scan together with the three structural checks made on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixingReport {
    pub m: usize,
    pub j: usize,
    pub occurrences: OccurrenceReport,
    /// `k_{m+j-1}`: every gap in `0..=gap_bound` was expected to occur.
    pub gap_bound: u64,
    /// Values in `0..=gap_bound` that never occur as a gap.
    pub missing_gaps: Vec<u64>,
    pub expected_prefix: Vec<Term>,
    pub prefix_ok: bool,
    /// `k_{m+j-1} - j`.
    pub trailing_bound: u64,
    pub trailing_ok: bool,
    /// Distances between starts of consecutive copies: `|c_{m,1}| + gap`.
    pub return_lengths: Vec<u64>,
}

/// Scans the image of `c_{m+j,1}` at level `m` for copies of `c_{m,1}`.
pub fn mixing_gap_report(c: &Construction, m: usize, j: usize, budget: u64) -> Result<MixingReport, BouquetError> {
    if m == 0 || j == 0 {
        return Err(BouquetError::EmptySpan { from: m, to: m + j });
    }
    let occurrences = c.find_occurrences(m, m + j, 1, 1, budget)?;
    let to_u64 = |v: BigUint, what: &'static str| {
        v.to_u64().ok_or(BouquetError::BudgetExceeded {
            what,
            required: v.clone(),
            budget: u64::MAX,
        })
    };
    let gap_bound = to_u64(c.k_value(m + j - 1)?, "gap bound")?;
    let cycle_len = to_u64(c.cycle_length(m, 1)?, "cycle length")?;

    let realized = &occurrences.gap_histogram;
    let missing_gaps = (0..=gap_bound).filter(|g| !realized.contains_key(g)).collect();
    let expected_prefix = vec![Term::edges(j as u64), Term::cycles(1, 1u32)];
    let prefix_ok = occurrences.prefix == expected_prefix;
    let trailing_bound = gap_bound.saturating_sub(j as u64);
    let trailing_ok = occurrences.copy_count > 0 && occurrences.trailing_gap <= trailing_bound;
    let return_lengths = realized.keys().map(|g| cycle_len + g).collect();

    Ok(MixingReport {
        m,
        j,
        occurrences,
        gap_bound,
        missing_gaps,
        expected_prefix,
        prefix_ok,
        trailing_bound,
        trailing_ok,
        return_lengths,
    })
}

/// Smallest `n` such that every integer `>= n` is a non-negative integer
/// combination of `gens`, or `None` if the generators have a common factor
/// (or there are none). The Frobenius number is `conductor - 1`.
pub fn conductor(gens: &[u64]) -> Option<u64> {
    let gens: Vec<u64> = gens.iter().copied().filter(|&g| g > 0).collect();
    let g = gens.iter().copied().reduce(|a, b| a.gcd(&b))?;
    if g != 1 {
        return None;
    }
    let smallest = *gens.iter().min()? as usize;
    let mut reachable = vec![true];
    let mut run = 1usize;
    let mut n = 0usize;
    while run < smallest {
        n += 1;
        let r = gens.iter().any(|&g| (g as usize) <= n && reachable[n - g as usize]);
        reachable.push(r);
        run = if r { run + 1 } else { 0 };
    }
    Some((n + 1 - run) as u64)
}

/// Whether `value` is a non-negative combination of `gens`, by direct search.
pub fn is_representable(value: u64, gens: &[u64]) -> bool {
    match gens.split_first() {
        None => value == 0,
        Some((&0, rest)) => is_representable(value, rest),
        Some((&g, rest)) => (0..=value / g).any(|k| is_representable(value - k * g, rest)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityFailure {
    pub index: usize,
    pub level: usize,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct StabilityReport {
    pub checked: usize,
    /// Handles failing the precondition (spine at the base, or no level
    /// below the spine on the spine's cycle) or without room for one step.
    pub excluded: usize,
    pub failures: Vec<StabilityFailure>,
    /// Handles whose depth `M - 1` degree estimate changed under one step,
    /// among those with at least two levels below the spine on the cycle.
    pub degree_changes: Vec<usize>,
}

impl StabilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.degree_changes.is_empty()
    }
}

/// Checks that a point sitting on cycle `i` at levels `N..=M` stays on
/// cycle `i` at levels `N+1..=M` after one step.
///
/// `N` is taken as small as possible for each handle. Since every image
/// formula starts and ends with the base loop, a level-`n` cycle can only
/// be left at level `n - 1` first.
pub fn degree_stability_check(c: &Construction, corpus: &[PointHandle]) -> Result<StabilityReport, DynamicsError> {
    let mut report = StabilityReport::default();
    for (index, h) in corpus.iter().enumerate() {
        let m = h.spine_level();
        let column = h.column_of(c, m)?;
        let i = column[m].locus.cycle_index();
        let next = h.step_by(c, 1);
        if i == 0 || next.is_err() {
            report.excluded += 1;
            continue;
        }
        let n = (0..=m)
            .rev()
            .take_while(|&l| column[l].locus.cycle_index() == i)
            .last()
            .expect("level m qualifies");
        if n == m {
            report.excluded += 1;
            continue;
        }
        report.checked += 1;
        let next = next.expect("checked above");
        let after = next.column_of(c, m)?;
        for level in n + 1..=m {
            if after[level].locus.cycle_index() != i {
                report.failures.push(StabilityFailure {
                    index,
                    level,
                    before: column[level].to_string(),
                    after: after[level].to_string(),
                });
            }
        }
        if n + 2 <= m && degree_of_column(c, h, m - 1)? != degree_of_column(c, &next, m - 1)? {
            report.degree_changes.push(index);
        }
    }
    Ok(report)
}

/// Degrees seen by the level-`n` coordinate over a time window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WindowDegrees {
    /// Minimum degree over the window.
    pub min: DegreeValue,
    /// Minimum over the level-`n` cycles traversed completely inside the
    /// window; `Infinite` when no cycle is traversed completely.
    pub complete_min: DegreeValue,
}

/// Minimum degree of the level-`n` coordinate of `T^j(h)` over
/// `j in from..=from + window`.
///
/// Computed from the image formulas without stepping through the window,
/// so windows of any size inside the spine's range are cheap.
pub fn degree_window_min(
    c: &Construction,
    h: &PointHandle,
    n: usize,
    from: &BigUint,
    window: &BigUint,
) -> Result<DegreeValue, DynamicsError> {
    degree_window(c, h, n, from, window).map(|w| w.min)
}

/// [`degree_window_min`] together with the complete-traversal minimum.
pub fn degree_window(
    c: &Construction,
    h: &PointHandle,
    n: usize,
    from: &BigUint,
    window: &BigUint,
) -> Result<WindowDegrees, DynamicsError> {
    let m = h.spine_level();
    if n > m {
        return Err(DynamicsError::DepthExceedsSpine { depth: n, spine: m });
    }
    let start = h.step(c, &BigInt::from(from.clone()))?;
    start.step(c, &BigInt::from(window.clone()))?;
    let (cycle, position) = match h.initial() {
        Locus::Base => {
            return Ok(WindowDegrees {
                min: DegreeValue::Infinite,
                complete_min: DegreeValue::Infinite,
            })
        }
        Locus::OnCycle { cycle, position } => (*cycle, position),
    };
    let p = (BigInt::from(position.clone()) + h.offset() + BigInt::from(from.clone()))
        .to_biguint()
        .expect("validated by step");
    let q = &p + window;
    let mut memo = HashMap::new();
    Ok(range_min(c, m, cycle, &p, &q, n, &mut memo)?)
}

/// Time until the spine's level `M - 1` coordinate starts a complete copy of
/// `c_{M-1,i+1}`, where `i` is the degree of the handle's column.
///
/// `None` when the degree is infinite, when `i + 1 >= M`, or when the rest
/// of the spine cycle holds no such copy. In the last case the points of
/// degree at most `i + 1` below the spine lie beyond what the handle knows,
/// so window minima over its range say nothing about them.
pub fn next_degree_encounter(c: &Construction, h: &PointHandle) -> Result<Option<BigUint>, DynamicsError> {
    let m = h.spine_level();
    let Some(i) = degree_of_column(c, h, m)?.finite() else {
        return Ok(None);
    };
    if m == 0 || i + 1 >= m {
        return Ok(None);
    }
    let Locus::OnCycle { cycle, position } = h.initial() else {
        return Ok(None);
    };
    h.spine_addr(c)?;
    let p = (BigInt::from(position.clone()) + h.offset())
        .to_biguint()
        .expect("offset checked by spine_addr");
    let spec = c.spec(m - 1)?;
    Ok(spec.image_formulas[*cycle - 1]
        .next_copy_start(&p, |r| r == i + 1)
        .map(|(start, _)| start - p))
}

// Degrees at level `n` over positions `a..=b` of `c_{level,cycle}`.
fn range_min(
    c: &Construction,
    level: usize,
    cycle: usize,
    a: &BigUint,
    b: &BigUint,
    n: usize,
    memo: &mut HashMap<(usize, usize), DegreeValue>,
) -> Result<WindowDegrees, BouquetError> {
    let len = c.cycle_length(level, cycle)?;
    let whole = a.is_zero() && b == &len;
    if level == n {
        let interior = !(a.is_zero() && b.is_zero()) && !(a == &len && b == &len);
        let d = if interior { DegreeValue::Finite(cycle) } else { DegreeValue::Infinite };
        return Ok(WindowDegrees {
            min: d,
            complete_min: if whole { d } else { DegreeValue::Infinite },
        });
    }
    if whole {
        let d = full_min(c, level, cycle, n, memo)?;
        return Ok(WindowDegrees { min: d, complete_min: d });
    }
    let spec = c.spec(level - 1)?;
    let mut best = WindowDegrees {
        min: DegreeValue::Infinite,
        complete_min: DegreeValue::Infinite,
    };
    let mut pieces = Vec::new();
    spec.image_formulas[cycle - 1].visit_range(a, b, |piece| pieces.push(piece));
    for piece in pieces {
        let w = match piece {
            RangePiece::Full { cycle } => {
                let d = full_min(c, level - 1, cycle, n, memo)?;
                WindowDegrees { min: d, complete_min: d }
            }
            RangePiece::Partial { cycle, lo, hi } => range_min(c, level - 1, cycle, &lo, &hi, n, memo)?,
        };
        best.min = best.min.min(w.min);
        best.complete_min = best.complete_min.min(w.complete_min);
    }
    Ok(best)
}

// Minimum degree at level `n` over all of `c_{level,cycle}`.
fn full_min(
    c: &Construction,
    level: usize,
    cycle: usize,
    n: usize,
    memo: &mut HashMap<(usize, usize), DegreeValue>,
) -> Result<DegreeValue, BouquetError> {
    if level == n {
        return Ok(DegreeValue::Finite(cycle));
    }
    if let Some(&d) = memo.get(&(level, cycle)) {
        return Ok(d);
    }
    let spec = c.spec(level - 1)?;
    let mut inner = BTreeSet::new();
    for term in spec.image_formulas[cycle - 1].terms() {
        match term {
            Term::CycleRun { cycle, .. } => {
                inner.insert(*cycle);
            }
            Term::Ramp(r) => inner.extend(r.body.iter().filter_map(|t| match t.atom {
                Atom::Cycle(i) => Some(i),
                Atom::Edge => None,
            })),
            Term::EdgeRun { .. } => {}
        }
    }
    let mut best = DegreeValue::Infinite;
    for i in inner {
        best = best.min(full_min(c, level - 1, i, n, memo)?);
    }
    memo.insert((level, cycle), best);
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Distinct points: every such pair of the system is Li-Yorke.
    ExpectedLiYorke,
    /// Same column at every shared level.
    Identical,
    /// Both handles are the fixed point.
    Fixed,
}

/// Why a verdict holds. These are facts proved about the system, attached
/// for the reader; the sampled witnesses are the only empirical part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    /// Every orbit comes arbitrarily close to the fixed point, so every
    /// pair is proximal.
    EveryPairProximal,
    /// Degrees differ by two or more, which rules out asymptotic pairs.
    DegreeGapAboveOne,
    /// Degrees differ by one: distinct points of adjacent degree are never
    /// asymptotic.
    AdjacentDegrees,
    /// Equal degrees: an asymptotic pair of equal degree must coincide.
    EqualDegrees,
    /// One point is fixed and the other is not; the fixed point has no
    /// asymptotic partner other than itself.
    FixedPointPartner,
    /// The columns agree on every level both handles know.
    SameColumns,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairClassification {
    pub deg_a: DegreeValue,
    pub deg_b: DegreeValue,
    pub verdict: Verdict,
    pub reasons: Vec<Reason>,
    pub distance: DistanceValue,
    pub witnesses: Option<LiYorkeReport>,
}

/// Degrees, verdict and (optionally) sampled witnesses for a pair.
pub fn classify_pair(
    c: &Construction,
    a: &PointHandle,
    b: &PointHandle,
    scan: Option<LiYorkeParams>,
) -> Result<PairClassification, DynamicsError> {
    let depth = a.spine_level().min(b.spine_level());
    let deg_a = degree_of_column(c, a, a.spine_level())?;
    let deg_b = degree_of_column(c, b, b.spine_level())?;
    let ca = a.column_of(c, depth)?;
    let cb = b.column_of(c, depth)?;
    let distance = first_difference(&ca, &cb)
        .map(|level| DistanceValue::Exact { level })
        .unwrap_or(DistanceValue::UpperBoundOnly { depth });

    let (verdict, reasons) = if a.is_fixed_point() && b.is_fixed_point() {
        (Verdict::Fixed, vec![Reason::SameColumns])
    } else if distance.exact_level().is_none() {
        (Verdict::Identical, vec![Reason::SameColumns])
    } else {
        let why = match (deg_a, deg_b) {
            (DegreeValue::Infinite, _) | (_, DegreeValue::Infinite) => Reason::FixedPointPartner,
            (DegreeValue::Finite(x), DegreeValue::Finite(y)) => match x.abs_diff(y) {
                0 => Reason::EqualDegrees,
                1 => Reason::AdjacentDegrees,
                _ => Reason::DegreeGapAboveOne,
            },
        };
        (Verdict::ExpectedLiYorke, vec![Reason::EveryPairProximal, why])
    };
    let witnesses = match scan {
        Some(params) => Some(li_yorke_test(c, a, b, params, None)?),
        None => None,
    };
    Ok(PairClassification {
        deg_a,
        deg_b,
        verdict,
        reasons,
        distance,
        witnesses,
    })
}

/// First `q` in `1..=max_q` with the same column at offsets `0` and `q`
/// (levels `0..=spine`), within the handle's valid range.
pub fn first_column_return(c: &Construction, h: &PointHandle, max_q: u64) -> Result<Option<u64>, DynamicsError> {
    let m = h.spine_level();
    let start = h.column_of(c, m)?;
    for q in 1..=max_q {
        let Ok(next) = h.step_by(c, q as i64) else {
            break;
        };
        if next.column_of(c, m)? == start {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

/// `count` handles drawn from a ChaCha stream seeded with `seed`, each with
/// at least `reserve` forward steps.
pub fn seeded_corpus(
    c: &Construction,
    seed: u64,
    count: usize,
    spine_level: usize,
    reserve: u64,
) -> Result<Vec<PointHandle>, DynamicsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reserve = BigUint::from(reserve);
    (0..count)
        .map(|_| random_handle(c, &mut rng, spine_level, &reserve))
        .collect()
}

/// Like [`seeded_corpus`], but keeps only handles whose level-`level`
/// coordinate is off the base at time 0.
///
/// Uniform spine positions mostly fall inside very long base runs of some
/// deep level, where every coordinate at or below `level` stays at the base
/// for longer than any practical horizon. Conditioning at time 0 removes
/// those points; each kept handle is still a uniform draw among the rest.
pub fn seeded_off_base_corpus(
    c: &Construction,
    seed: u64,
    count: usize,
    spine_level: usize,
    reserve: u64,
    level: usize,
) -> Result<Vec<PointHandle>, DynamicsError> {
    const MAX_DRAWS: u64 = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reserve = BigUint::from(reserve);
    let mut out = Vec::with_capacity(count);
    let mut draws = 0u64;
    while out.len() < count {
        if draws == MAX_DRAWS {
            return Err(DynamicsError::SamplingFailed { attempts: draws });
        }
        draws += 1;
        let h = random_handle(c, &mut rng, spine_level, &reserve)?;
        if !h.column_of(c, level)?[level].locus.is_base() {
            out.push(h);
        }
    }
    Ok(out)
}

/// Independent stream for task `index` of a run seeded with `seed`.
pub fn task_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
