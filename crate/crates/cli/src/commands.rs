use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use chaoscope_core::analysis::{
    conductor, degree_of_column, degree_profile, degree_stability_check, degree_window, is_representable, li_yorke_test,
    mixing_gap_report, next_degree_encounter, proximal_certificate, seeded_corpus, seeded_off_base_corpus, task_rng,
    DegreeValue, LiYorkeParams, LiYorkeReport, MixingReport,
};
use chaoscope_core::dsl::{
    builtin_document, equivalence_mismatches, mutation_corpus, parse, serialize, to_construction, validate_document,
    CoverDocument, Mode,
};
use chaoscope_core::dynamics::{distance, orbit_trace, trace_csv};
use chaoscope_core::graph::{
    validate_bidirectional, validate_edge_surjective, validate_homomorphism, CoverMap, MaterializedGraph, VertexPath,
};
use chaoscope_core::bouquet::{Atom, Term};
use chaoscope_core::{Construction, DistanceValue, PointHandle, VertexAddr};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::args::{Format, Spot};
use crate::report::Report;
use crate::CliError;

/// Above this many vertices a level's projection is sampled, not exhausted.
const EXHAUSTIVE_LIMIT: usize = 100_000;

fn short(n: &BigUint) -> String {
    let s = n.to_string();
    if s.len() <= 24 {
        s
    } else {
        format!("{}...{} ({} digits)", &s[..8], &s[s.len() - 6..], s.len())
    }
}

fn show(d: &DistanceValue) -> String {
    match d {
        DistanceValue::Exact { level } => format!("2^-{level} (first difference at level {level})"),
        DistanceValue::UpperBoundOnly { depth } => format!("<= 2^-{} (equal through level {depth})", depth + 1),
    }
}

fn terms(ts: &[Term]) -> String {
    let atom = |a: &Atom| match a {
        Atom::Edge => "e".to_string(),
        Atom::Cycle(i) => format!("c{i}"),
    };
    let parts: Vec<String> = ts
        .iter()
        .map(|t| match t {
            Term::EdgeRun { count } => format!("{count} e"),
            Term::CycleRun { cycle, count } => format!("{count} c{cycle}"),
            Term::Ramp(r) => {
                let body: Vec<String> = r
                    .body
                    .iter()
                    .map(|b| format!("({} j + {}) {}", b.per_index, b.constant, atom(&b.atom)))
                    .collect();
                format!("sum(j={}..{}) {{ {} }}", r.from, r.to, body.join(" + "))
            }
        })
        .collect();
    parts.join(" + ")
}

/// Compact `0, 2..22, 30` form of a sorted set.
fn ranges(values: impl IntoIterator<Item = u64>) -> String {
    let mut parts: Vec<(u64, u64)> = Vec::new();
    for v in values {
        match parts.last_mut() {
            Some((_, hi)) if *hi + 1 == v => *hi = v,
            _ => parts.push((v, v)),
        }
    }
    let out: Vec<String> = parts
        .into_iter()
        .map(|(a, b)| if a == b { a.to_string() } else { format!("{a}..{b}") })
        .collect();
    if out.is_empty() {
        "none".into()
    } else {
        out.join(", ")
    }
}

fn parse_ranges(spec: &str) -> Result<BTreeSet<u64>, CliError> {
    let bad = || CliError::Usage(format!("bad gap list {spec:?}; use e.g. 0,2,3,5..100"));
    let mut out = BTreeSet::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                out.extend(a..=b);
            }
            None => {
                out.insert(part.parse().map_err(|_| bad())?);
            }
        }
    }
    Ok(out)
}

pub fn load_document(path: &Path) -> Result<CoverDocument, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse(&text)?)
}

pub fn construction(cover: Option<&Path>) -> Result<Construction, CliError> {
    match cover {
        None => Ok(Construction::builtin()),
        Some(path) => {
            let doc = load_document(path)?;
            if doc.mode != Mode::Bouquet {
                return Err(CliError::Usage(format!(
                    "{} is a materialized document; only `validate` and `dsl-check` accept it",
                    path.display()
                )));
            }
            Ok(to_construction(&doc)?)
        }
    }
}

fn point(c: &Construction, spine: usize, cycle: usize, pos: &BigUint) -> Result<PointHandle, CliError> {
    if cycle == 0 {
        return Ok(PointHandle::fixed_point(spine));
    }
    Ok(PointHandle::new(c, VertexAddr::on_cycle(spine, cycle, pos.clone()))?)
}

pub fn levels(c: &Construction, max: usize, verify: bool, budget: u64) -> Result<Report, CliError> {
    #[derive(Serialize)]
    struct Row {
        level: usize,
        k: String,
        cycle_lengths: Vec<String>,
    }
    #[derive(Serialize)]
    struct Recount {
        level: usize,
        cycle: usize,
        length: String,
        image_edges: usize,
    }
    let mut rows = Vec::new();
    let mut text = String::from("level  k  cycle lengths\n");
    let mut csv = String::from("level,cycle,length,k\n");
    for n in 0..=max {
        let lengths = c.cycle_lengths(n)?;
        let k = c.k_value(n)?;
        let shown: Vec<String> = lengths.iter().map(short).collect();
        let _ = writeln!(text, "{n}  {}  {}", short(&k), if shown.is_empty() { "-".into() } else { shown.join(" ") });
        for (i, l) in lengths.iter().enumerate() {
            let _ = writeln!(csv, "{n},{},{l},{k}", i + 1);
        }
        rows.push(Row {
            level: n,
            k: k.to_string(),
            cycle_lengths: lengths.iter().map(ToString::to_string).collect(),
        });
    }

    let mut recounts = Vec::new();
    let mut skipped = Vec::new();
    let mut passed = true;
    if verify {
        for n in 1..=max {
            let m = match c.materialize_graph(n, budget) {
                Ok(m) => m,
                Err(chaoscope_core::bouquet::BouquetError::BudgetExceeded { .. }) => {
                    skipped.push(n);
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let cover = m.cover.as_ref().expect("levels above 0 have a cover");
            for i in 1..=m.layout.cycle_lengths().len() {
                let image: Vec<_> = m.layout.cycle_path(i).iter().map(|&v| cover.image(v)).collect();
                let edges = VertexPath::new(cover.target(), image)
                    .map_err(|e| CliError::Usage(format!("image of c_{{{n},{i}}} is not a path: {e}")))?
                    .edge_len();
                let length = c.cycle_length(n, i)?;
                passed &= BigUint::from(edges) == length;
                recounts.push(Recount {
                    level: n,
                    cycle: i,
                    length: length.to_string(),
                    image_edges: edges,
                });
            }
        }
        let bad: Vec<_> = recounts.iter().filter(|r| r.length != r.image_edges.to_string()).collect();
        let _ = writeln!(
            text,
            "recounted {} image paths in explicit graphs: {} mismatches{}",
            recounts.len(),
            bad.len(),
            if skipped.is_empty() { String::new() } else { format!("; levels {skipped:?} exceed the budget") }
        );
    }
    let body = json!({ "levels": rows, "recounts": verify.then_some(&recounts), "skipped_levels": skipped });
    Ok(Report::new(passed, text, body).with_csv(csv))
}

#[derive(Serialize)]
struct LevelCheck {
    level: usize,
    vertices: usize,
    edges: usize,
    surjectivity_violations: usize,
    homomorphism_violations: usize,
    bidirectional_violations: usize,
    projection_checked: usize,
    projection_exhaustive: bool,
    projection_mismatches: Vec<String>,
}

impl LevelCheck {
    fn ok(&self) -> bool {
        self.surjectivity_violations + self.homomorphism_violations + self.bidirectional_violations == 0
            && self.projection_mismatches.is_empty()
    }
}

fn axioms(level: usize, graph: &MaterializedGraph, cover: Option<&CoverMap>) -> LevelCheck {
    LevelCheck {
        level,
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        surjectivity_violations: validate_edge_surjective(graph).len(),
        homomorphism_violations: cover.map_or(0, |c| validate_homomorphism(c).len()),
        bidirectional_violations: cover.map_or(0, |c| validate_bidirectional(c).len()),
        projection_checked: 0,
        projection_exhaustive: false,
        projection_mismatches: Vec::new(),
    }
}

fn render_checks(checks: &[LevelCheck], skipped: &[usize]) -> String {
    let mut text = String::new();
    for ch in checks {
        let _ = write!(
            text,
            "level {}: {} vertices, {} edges; violations: surjectivity {}, homomorphism {}, bidirectional {}",
            ch.level,
            ch.vertices,
            ch.edges,
            ch.surjectivity_violations,
            ch.homomorphism_violations,
            ch.bidirectional_violations
        );
        if ch.projection_checked > 0 {
            let _ = write!(
                text,
                "; projection {} on {} vertices ({}), {} mismatches",
                if ch.projection_mismatches.is_empty() { "agrees" } else { "DIFFERS" },
                ch.projection_checked,
                if ch.projection_exhaustive { "all" } else { "sampled" },
                ch.projection_mismatches.len()
            );
        }
        text.push('\n');
    }
    if !skipped.is_empty() {
        let _ = writeln!(text, "levels {skipped:?} exceed the budget and were not materialized");
    }
    text
}

pub fn validate(cover: Option<&Path>, max: usize, samples: usize, budget: u64, seed: u64) -> Result<Report, CliError> {
    if let Some(path) = cover {
        let doc = load_document(path)?;
        if doc.mode == Mode::Materialized {
            let tower = chaoscope_core::dsl::to_materialized(&doc)?;
            let checks: Vec<_> = tower
                .iter()
                .enumerate()
                .take(max + 1)
                .map(|(n, (g, c))| axioms(n, g, c.as_ref()))
                .collect();
            let passed = checks.iter().all(LevelCheck::ok);
            return Ok(Report::new(passed, render_checks(&checks, &[]), json!({ "levels": checks })));
        }
    }
    let c = construction(cover)?;
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    for n in 0..=max {
        let m = match c.materialize_graph(n, budget) {
            Ok(m) => m,
            Err(chaoscope_core::bouquet::BouquetError::BudgetExceeded { .. }) => {
                skipped.extend(n..=max);
                break;
            }
            Err(e) => return Err(e.into()),
        };
        let mut check = axioms(n, &m.graph, m.cover.as_ref());
        if let (Some(cover), Some(lower_layout)) = (&m.cover, &m.lower_layout) {
            let count = m.graph.vertex_count();
            let ids: Vec<u32> = if count <= EXHAUSTIVE_LIMIT {
                check.projection_exhaustive = true;
                (0..count as u32).collect()
            } else {
                let mut rng = task_rng(seed, n as u64);
                (0..samples).map(|_| rng.gen_range(0..count as u32)).collect()
            };
            for id in ids {
                let addr = VertexAddr {
                    level: n,
                    locus: m.layout.locus(id),
                };
                let symbolic = c.project_addr(&addr)?;
                let explicit = lower_layout.locus(cover.image(id));
                if symbolic.locus != explicit && check.projection_mismatches.len() < 20 {
                    check.projection_mismatches.push(format!("{addr}: symbolic {symbolic}, explicit {explicit:?}"));
                }
                check.projection_checked += 1;
            }
        }
        checks.push(check);
    }
    let passed = checks.iter().all(LevelCheck::ok);
    let text = render_checks(&checks, &skipped);
    Ok(Report::new(passed, text, json!({ "seed": seed, "levels": checks, "skipped_levels": skipped })))
}

pub fn materialize(c: &Construction, level: usize, budget: u64) -> Result<Report, CliError> {
    let m = c.materialize_graph(level, budget)?;
    let stats = m.stats();
    let mut text = format!(
        "level {level}: {} vertices, {} edges, cycles of length {:?}\n",
        stats.vertex_count, stats.edge_count, stats.cycle_lengths
    );
    let mut csv = String::from("vertex,cycle,position,image_cycle,image_position\n");
    for v in 0..stats.vertex_count as u32 {
        let here = m.layout.locus(v);
        let (ic, ip) = match (&m.cover, &m.lower_layout) {
            (Some(cover), Some(lower)) => {
                let l = lower.locus(cover.image(v));
                (l.cycle_index().to_string(), l.position().to_string())
            }
            _ => (String::new(), String::new()),
        };
        let _ = writeln!(csv, "{v},{},{},{ic},{ip}", here.cycle_index(), here.position());
    }
    if m.cover.is_some() {
        text.push_str("vertex map onto the level below available with --format csv\n");
    }
    Ok(Report::new(true, text, &stats)
        .with_csv(csv)
        .with_dot(m.graph.to_dot(&format!("G{level}"))))
}

#[allow(clippy::too_many_arguments)]
pub fn orbit(
    c: &Construction,
    spine: usize,
    cycle: usize,
    pos: &BigUint,
    obs: usize,
    horizon: u64,
    from: &BigInt,
    times: &[BigInt],
) -> Result<Report, CliError> {
    let h = point(c, spine, cycle, pos)?;
    let times: Vec<BigInt> = if times.is_empty() {
        (0..=horizon).map(|t| from + BigInt::from(t)).collect()
    } else {
        times.to_vec()
    };
    let rows = orbit_trace(c, &h, obs, times)?;
    let mut text = String::new();
    for row in &rows {
        let _ = write!(text, "t={}", row.t);
        for (n, l) in row.levels.iter().enumerate() {
            let a = VertexAddr {
                level: n,
                locus: l.clone(),
            };
            let _ = write!(text, "  {a}");
        }
        text.push('\n');
    }
    let csv = trace_csv(&rows, obs);
    let body = json!({ "handle": h, "depth": obs, "rows": rows });
    Ok(Report::new(true, text, body).with_csv(csv).prefer(Format::Csv))
}

pub fn distance_cmd(c: &Construction, spine: usize, a: &Spot, b: &Spot, at: &BigInt) -> Result<Report, CliError> {
    let x = point(c, spine, a.cycle, &a.position)?.step(c, at)?;
    let y = point(c, spine, b.cycle, &b.position)?.step(c, at)?;
    let d = distance(c, &x, &y)?;
    let text = format!("t={at}: d = {}\n", show(&d));
    let body = json!({
        "t": at.to_string(),
        "distance": d,
        "upper_bound": d.upper_bound(),
        "a": x.column_of(c, spine)?.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "b": y.column_of(c, spine)?.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    Ok(Report::new(true, text, body))
}

pub fn fixed_point(c: &Construction, spine: usize, deltas: &[BigUint]) -> Result<Report, CliError> {
    let p = PointHandle::fixed_point(spine);
    let mut text = String::new();
    let mut results = Vec::new();
    for d in deltas {
        let column = p.step(c, &BigInt::from(d.clone()))?.column_of(c, spine)?;
        let fixed = column.iter().all(|a| a.locus.is_base());
        let _ = writeln!(text, "delta {d}: levels 0..={spine} {}", if fixed { "all base" } else { "NOT all base" });
        results.push(json!({ "delta": d.to_string(), "all_base": fixed }));
    }
    let passed = results.iter().all(|r| r["all_base"] == true);
    Ok(Report::new(passed, text, json!({ "spine": spine, "results": results })))
}

pub fn roundtrip(c: &Construction, count: usize, spine: usize, max_delta: u64, seed: u64) -> Result<Report, CliError> {
    let corpus = seeded_corpus(c, seed, count, spine, max_delta)?;
    let mut rng = task_rng(seed, 5);
    let mut failures = Vec::new();
    for (i, h) in corpus.iter().enumerate() {
        let d = BigInt::from(rng.gen_range(1..=max_delta.max(1)));
        let back = h.step(c, &d)?.step(c, &-&d)?;
        if &back != h {
            failures.push(i);
        }
    }
    let text = format!(
        "{count} handles at spine {spine}, delta in [1, {max_delta}]: {} failed round trips\n",
        failures.len()
    );
    let body = json!({ "seed": seed, "count": count, "spine": spine, "max_delta": max_delta, "failures": failures });
    Ok(Report::new(failures.is_empty(), text, body))
}

#[allow(clippy::too_many_arguments)]
pub fn liyorke(
    c: &Construction,
    pairs: usize,
    spine: usize,
    params: LiYorkeParams,
    condition_level: usize,
    min_separated: f64,
    seed: u64,
) -> Result<Report, CliError> {
    if !(0.0..=1.0).contains(&min_separated) {
        return Err(CliError::Usage("--min-separated must lie in [0, 1]".into()));
    }
    let corpus = if condition_level == 0 {
        seeded_corpus(c, seed, 2 * pairs, spine, params.horizon)?
    } else {
        seeded_off_base_corpus(c, seed, 2 * pairs, spine, params.horizon, condition_level)?
    };
    let mut reports: Vec<LiYorkeReport> = Vec::with_capacity(pairs);
    let mut csv = String::from("pair,proximal_time,proximal_distance,separation_time,separation_level\n");
    for (i, pair) in corpus.chunks(2).enumerate() {
        let r = li_yorke_test(c, &pair[0], &pair[1], params, Some(seed))?;
        let (pt, pd) = r
            .proximal_witness
            .map_or((String::new(), String::new()), |w| (w.time.to_string(), w.distance.upper_bound().to_string()));
        let (st, sl) = r.separation_witness.map_or((String::new(), String::new()), |w| {
            (w.time.to_string(), w.distance.exact_level().map_or(String::new(), |l| l.to_string()))
        });
        let _ = writeln!(csv, "{i},{pt},{pd},{st},{sl}");
        reports.push(r);
    }
    let identical = corpus.chunks(2).filter(|p| p[0] == p[1]).count();
    let proximal = reports.iter().filter(|r| r.proximal_witness.is_some()).count();
    let separated = reports.iter().filter(|r| r.separation_witness.is_some()).count();
    let needed = (min_separated * pairs as f64).ceil() as usize;
    let passed = identical == 0 && proximal == pairs && separated >= needed;
    let text = format!(
        "{pairs} pairs at spine {spine}, horizon {}: proximal {proximal}/{pairs} (d <= 2^-{}), separated {separated}/{pairs} (d >= 2^-{}, need {needed}){}\n",
        params.horizon,
        params.prox_depth + 1,
        params.sep_depth,
        if identical > 0 { format!("; {identical} pairs not distinct") } else { String::new() }
    );
    let body = json!({
        "seed": seed,
        "spine": spine,
        "params": params,
        "condition_level": condition_level,
        "pairs": pairs,
        "proximal": proximal,
        "separated": separated,
        "min_separated": min_separated,
        "reports": reports,
    });
    Ok(Report::new(passed, text, body).with_csv(csv))
}

#[allow(clippy::too_many_arguments)]
pub fn proximal(
    c: &Construction,
    level: usize,
    spine: usize,
    handles: usize,
    windows: u32,
    window_len: Option<u64>,
    seed: u64,
) -> Result<Report, CliError> {
    let len = match window_len {
        Some(l) => l,
        None => c
            .cycle_lengths(level)?
            .into_iter()
            .max()
            .and_then(|l| l.to_u64())
            .unwrap_or(1),
    };
    let reserve = len * windows as u64;
    let corpus = seeded_corpus(c, seed, handles, spine, reserve)?;
    let spans: Vec<(BigUint, BigUint)> = (0..windows as u64).map(|w| (BigUint::from(w * len), BigUint::from(len))).collect();
    let mut csv = String::from("handle,window_start,hit\n");
    let (mut hits, mut total) = (0usize, 0usize);
    let mut per_handle = Vec::new();
    for (i, h) in corpus.iter().enumerate() {
        let result = proximal_certificate(c, h, level, &spans)?;
        for w in &result {
            total += 1;
            hits += w.hit.is_some() as usize;
            let _ = writeln!(csv, "{i},{},{}", w.start, w.hit.as_ref().map_or(String::new(), ToString::to_string));
        }
        per_handle.push(result);
    }
    let text = format!(
        "{handles} handles at spine {spine}, level {level}: {hits}/{total} windows of length {len} contain a base hit\n"
    );
    let body = json!({ "seed": seed, "spine": spine, "level": level, "window_len": len, "hits": hits, "windows": total, "handles": per_handle });
    Ok(Report::new(hits == total, text, body).with_csv(csv))
}

pub fn mixing_gaps(c: &Construction, m: usize, js: &[usize], expect: Option<&str>, budget: u64) -> Result<Report, CliError> {
    let expected = expect.map(parse_ranges).transpose()?;
    let mut reports: Vec<MixingReport> = Vec::new();
    let mut text = String::new();
    let mut passed = true;
    let mut absent_expected = Vec::new();
    for &j in js {
        let r = mixing_gap_report(c, m, j, budget)?;
        let gaps = r.occurrences.gap_set();
        let realized: BTreeSet<u64> = gaps.iter().copied().collect();
        let _ = writeln!(
            text,
            "(m={m}, j={j}): {} copies of c_{{{m},1}} in c_{{{},1}} ({} edges)",
            r.occurrences.copy_count,
            m + j,
            r.occurrences.image_length
        );
        let _ = writeln!(text, "  gaps: {}", ranges(gaps.iter().copied()));
        let _ = writeln!(text, "  absent from 0..={}: {}", r.gap_bound, ranges(r.missing_gaps.iter().copied()));
        let _ = writeln!(
            text,
            "  prefix {}: {}",
            if r.prefix_ok { "confirmed" } else { "DIFFERS" },
            terms(&r.occurrences.prefix)
        );
        let _ = writeln!(
            text,
            "  trailing gap {} {} bound {}",
            r.occurrences.trailing_gap,
            if r.trailing_ok { "within" } else { "EXCEEDS" },
            r.trailing_bound
        );
        passed &= r.prefix_ok && r.trailing_ok;
        if let Some(want) = &expected {
            // Gaps are only expected up to the bound k_{m+j-1}.
            let absent: Vec<u64> = want
                .range(..=r.gap_bound)
                .filter(|g| !realized.contains(g))
                .copied()
                .collect();
            let _ = writeln!(
                text,
                "  expected gaps up to {} absent: {}",
                r.gap_bound,
                ranges(absent.iter().copied())
            );
            passed &= absent.is_empty();
            absent_expected.push(json!({ "j": j, "absent": absent }));
        }
        reports.push(r);
    }
    let body = json!({ "m": m, "budget": budget, "reports": reports, "expected_check": absent_expected });
    Ok(Report::new(passed, text, body))
}

pub fn semigroup(c: &Construction, gens: &[u64], span: u64, realized_by: &[usize], budget: u64) -> Result<Report, CliError> {
    let mut text = String::new();
    let mut passed = true;
    let mut realized = json!(null);
    if !realized_by.is_empty() {
        let [m, j] = realized_by else {
            return Err(CliError::Usage("--realized-by takes M,J".into()));
        };
        let r = mixing_gap_report(c, *m, *j, budget)?;
        let missing: Vec<u64> = gens.iter().copied().filter(|g| !r.return_lengths.contains(g)).collect();
        let _ = writeln!(
            text,
            "return lengths of (m={m}, j={j}): {}; generators not realized: {}",
            ranges(r.return_lengths.iter().copied()),
            ranges(missing.iter().copied())
        );
        passed &= missing.is_empty();
        realized = json!({ "m": m, "j": j, "return_lengths": r.return_lengths, "missing": missing });
    }
    let cond = conductor(gens);
    let mut unrepresentable = Vec::new();
    match cond {
        None => {
            passed = false;
            let _ = writeln!(text, "generators {gens:?} do not give a cofinite semigroup");
        }
        Some(n) => {
            unrepresentable = (n..n + span).filter(|&v| !is_representable(v, gens)).collect();
            let below_is_gap = n == 0 || !is_representable(n - 1, gens);
            passed &= unrepresentable.is_empty() && below_is_gap;
            let _ = writeln!(
                text,
                "generators {gens:?}: Frobenius number {}, conductor {n}; brute force over [{n}, {}]: {} unrepresentable",
                n as i64 - 1,
                n + span - 1,
                unrepresentable.len()
            );
        }
    }
    let body = json!({
        "generators": gens,
        "conductor": cond,
        "frobenius": cond.map(|n| n as i64 - 1),
        "span": span,
        "unrepresentable": unrepresentable,
        "realized": realized,
    });
    Ok(Report::new(passed, text, body))
}

pub fn degree_one(c: &Construction, spine: usize, cycle: usize, pos: &BigUint) -> Result<Report, CliError> {
    let h = point(c, spine, cycle, pos)?;
    let profile = degree_profile(c, &h, spine)?;
    let column = h.column_of(c, spine)?;
    let mut text = String::new();
    for (n, (a, d)) in column.iter().zip(&profile).enumerate() {
        let _ = writeln!(text, "depth {n}: {a}  degree estimate {d}");
    }
    let encounter = next_degree_encounter(c, &h)?;
    let mut windows = Vec::new();
    let mut passed = true;
    if let (Some(wait), Some(i)) = (&encounter, profile[spine].finite()) {
        let window = h.forward_horizon(c)?.unwrap_or_else(BigUint::one);
        let _ = writeln!(text, "c_{{{},{}}} begins after {wait} steps; window minima over the spine range:", spine - 1, i + 1);
        for n in i + 1..spine {
            let w = degree_window(c, &h, n, &BigUint::default(), &window)?;
            passed &= w.min <= DegreeValue::Finite(i + 1);
            let _ = writeln!(text, "  level {n}: {}", w.min);
            windows.push(json!({ "level": n, "min": w.min, "complete_min": w.complete_min }));
        }
    } else {
        text.push_str("window check does not apply (no lower-degree cycle ahead within the spine)\n");
    }
    let body = json!({
        "handle": h,
        "profile": profile,
        "encounter": encounter.map(|e| e.to_string()),
        "windows": windows,
    });
    Ok(Report::new(passed, text, body))
}

pub fn degree_corpus(c: &Construction, spine: usize, samples: usize, handles: usize, seed: u64) -> Result<Report, CliError> {
    let mut non_monotone = Vec::new();
    for (i, h) in seeded_corpus(c, seed, samples, spine, 0)?.iter().enumerate() {
        let p = degree_profile(c, h, spine)?;
        if !p.windows(2).all(|w| w[1] <= w[0]) {
            non_monotone.push(i);
        }
    }
    let corpus = seeded_corpus(c, seed, handles, spine, 1)?;
    let stability = degree_stability_check(c, &corpus)?;
    let (mut eligible, mut cases) = (0usize, 0usize);
    let mut window_failures = Vec::new();
    for (index, h) in corpus.iter().enumerate() {
        if next_degree_encounter(c, h)?.is_none() {
            continue;
        }
        let i = degree_of_column(c, h, spine)?.finite().expect("encounter implies a finite degree");
        let window = h.forward_horizon(c)?.expect("finite degree implies a bounded spine");
        eligible += 1;
        for n in i + 1..spine {
            cases += 1;
            let w = degree_window(c, h, n, &BigUint::default(), &window)?;
            if w.min > DegreeValue::Finite(i + 1) {
                window_failures.push(json!({ "handle": index, "level": n, "min": w.min, "bound": i + 1 }));
            }
        }
    }
    let passed = non_monotone.is_empty() && stability.passed() && window_failures.is_empty();
    let text = format!(
        "monotone in depth: {}/{samples}\nstability: {} checked, {} excluded, {} failures, {} degree changes\nwindow minimum <= i+1: {} of {cases} cases hold over {eligible} eligible handles ({} excluded)\n",
        samples - non_monotone.len(),
        stability.checked,
        stability.excluded,
        stability.failures.len(),
        stability.degree_changes.len(),
        cases - window_failures.len(),
        handles - eligible
    );
    let body = json!({
        "seed": seed,
        "spine": spine,
        "samples": samples,
        "non_monotone": non_monotone,
        "stability": stability,
        "window": { "eligible": eligible, "cases": cases, "failures": window_failures },
    });
    Ok(Report::new(passed, text, body))
}

pub fn lift(c: &Construction, level: usize, cycle: usize, pos: &BigUint, max: usize) -> Result<Report, CliError> {
    let addr = if cycle == 0 {
        VertexAddr::base(level)
    } else {
        VertexAddr::on_cycle(level, cycle, pos.clone())
    };
    let lifts = c.lift_choices(&addr, max)?;
    let mut text = format!("{addr} has {} preimages at level {}", lifts.total, level + 1);
    text.push_str(if BigUint::from(lifts.choices.len()) < lifts.total { "; first ones:\n" } else { ":\n" });
    for a in &lifts.choices {
        let _ = writeln!(text, "  {a}");
    }
    Ok(Report::new(true, text, &lifts))
}

pub fn dsl_check(
    file: Option<&Path>,
    builtin: Option<usize>,
    compare: Option<usize>,
    mutants: bool,
) -> Result<Report, CliError> {
    let (source, text) = match (file, builtin) {
        (Some(_), Some(_)) => return Err(CliError::Usage("give a file or --builtin, not both".into())),
        (Some(path), None) => (path.display().to_string(), std::fs::read_to_string(path)?),
        (None, Some(n)) => (format!("builtin up to level {n}"), serialize(&builtin_document(n))),
        (None, None) => return Err(CliError::Usage("give a .cover file or --builtin N".into())),
    };
    let mut out = String::new();
    let doc = match parse(&text) {
        Ok(doc) => doc,
        Err(e) => {
            let _ = writeln!(out, "{source}: {e}");
            return Ok(Report::new(false, out, json!({ "source": source, "parse_error": e.to_string() })));
        }
    };
    let violations = validate_document(&doc);
    let canonical = serialize(&doc);
    let round_trip = parse(&canonical).map(|d| d == doc && serialize(&d) == canonical).unwrap_or(false);
    let _ = writeln!(out, "{source}: {:?} document, {} level blocks", doc.mode, doc.levels.len());
    let _ = writeln!(out, "violations: {}", violations.len());
    for v in &violations {
        let _ = writeln!(out, "  {v}");
    }
    let _ = writeln!(out, "round trip: {}", if round_trip { "identical" } else { "DIFFERS" });
    let mut passed = violations.is_empty() && round_trip;

    let up_to = compare.or(builtin);
    let mismatches = up_to.map(|n| equivalence_mismatches(&doc, n));
    if let (Some(n), Some(ms)) = (up_to, &mismatches) {
        let _ = writeln!(out, "built-in formulas through level {n}: {} mismatches", ms.len());
        passed &= ms.is_empty();
    }
    let mut mutant_results = Vec::new();
    if mutants {
        for m in mutation_corpus() {
            let reason = match parse(&m.text) {
                Err(e) => Some(e.to_string()),
                Ok(d) => {
                    let vs = validate_document(&d);
                    if let Some(v) = vs.first() {
                        Some(v.to_string())
                    } else if !equivalence_mismatches(&d, 3).is_empty() {
                        Some("differs from the built-in formulas".into())
                    } else {
                        None
                    }
                }
            };
            passed &= reason.is_some();
            mutant_results.push(json!({ "name": m.name, "rejected": reason.is_some(), "reason": reason }));
        }
        let rejected = mutant_results.iter().filter(|r| r["rejected"] == true).count();
        let _ = writeln!(out, "mutants rejected: {rejected}/{}", mutant_results.len());
    }
    let body = json!({
        "source": source,
        "violations": violations,
        "round_trip": round_trip,
        "mismatches": mismatches,
        "mutants": mutant_results,
        "document": doc,
    });
    Ok(Report::new(passed, out, body))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_lists() {
        assert_eq!(ranges([0, 2, 3, 4, 7]), "0, 2..4, 7");
        assert_eq!(ranges([]), "none");
        let set = parse_ranges("0, 2..4,7").unwrap();
        assert_eq!(set.into_iter().collect::<Vec<_>>(), vec![0, 2, 3, 4, 7]);
        assert!(parse_ranges("2..x").is_err());
    }

    #[test]
    fn long_numbers_are_shortened() {
        assert_eq!(short(&BigUint::from(695u32)), "695");
        let big = BigUint::from(10u32).pow(30);
        assert_eq!(short(&big), "10000000...000000 (31 digits)");
    }

    #[test]
    fn formula_text() {
        let t = [Term::edges(2u32), Term::cycles(1, 1u32)];
        assert_eq!(terms(&t), "2 e + 1 c1");
    }
}
