use chaoscope_core::analysis::mixing_gap_report;
use chaoscope_core::bouquet::BouquetError;
use chaoscope_core::dynamics::{self, DynamicsError};
use chaoscope_core::{Construction, PointHandle, VertexAddr};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

/// Deepest level the table will show. Lengths at level 6 already run to
/// hundreds of digits, which is not useful on a page.
pub const MAX_TABLE_LEVEL: usize = 6;
pub const MAX_ORBIT_ROWS: u32 = 5_000;
pub const MAX_OBS_DEPTH: usize = 8;
/// Edges a single gap scan may visit; (1,2) needs about 3.4 million.
pub const SCAN_BUDGET: u64 = 20_000_000;

#[derive(Debug, Error)]
pub enum WebError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Bouquet(#[from] BouquetError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

fn input(msg: impl Into<String>) -> WebError {
    WebError::Input(msg.into())
}

fn to_json(v: impl Serialize) -> String {
    serde_json::to_string(&v).expect("plain data")
}

#[derive(Serialize)]
struct LevelRow {
    level: usize,
    k: String,
    lengths: Vec<String>,
}

pub fn level_table(max: usize) -> Result<String, WebError> {
    if max > MAX_TABLE_LEVEL {
        return Err(input(format!("level table stops at {MAX_TABLE_LEVEL}")));
    }
    let c = Construction::builtin();
    let rows = (0..=max)
        .map(|n| {
            Ok(LevelRow {
                level: n,
                k: c.k_value(n)?.to_string(),
                lengths: c.cycle_lengths(n)?.iter().map(ToString::to_string).collect(),
            })
        })
        .collect::<Result<Vec<_>, BouquetError>>()?;
    Ok(to_json(rows))
}

/// One orbit row: `t` and `[cycle, position]` per level, cycle 0 being the base.
#[derive(Serialize)]
struct TraceRow {
    t: String,
    cols: Vec<(usize, String)>,
}

pub fn orbit_trace(spine: usize, cycle: usize, pos: &str, obs: usize, from: &str, horizon: u32) -> Result<String, WebError> {
    if horizon >= MAX_ORBIT_ROWS {
        return Err(input(format!("horizon must be below {MAX_ORBIT_ROWS}")));
    }
    if obs > MAX_OBS_DEPTH {
        return Err(input(format!("observation depth must be at most {MAX_OBS_DEPTH}")));
    }
    let pos: BigUint = pos.trim().parse().map_err(|_| input(format!("bad position {pos:?}")))?;
    let from: BigInt = from.trim().parse().map_err(|_| input(format!("bad start time {from:?}")))?;
    let c = Construction::builtin();
    let h = if cycle == 0 {
        PointHandle::fixed_point(spine)
    } else {
        PointHandle::new(&c, VertexAddr::on_cycle(spine, cycle, pos))?
    };
    let times = (0..=horizon).map(|d| &from + BigInt::from(d));
    let rows: Vec<TraceRow> = dynamics::orbit_trace(&c, &h, obs, times)?
        .into_iter()
        .map(|r| TraceRow {
            t: r.t.to_string(),
            cols: r.levels.iter().map(|l| (l.cycle_index(), l.position().to_string())).collect(),
        })
        .collect();
    let lengths: Vec<Vec<String>> = (0..=obs)
        .map(|n| Ok(c.cycle_lengths(n)?.iter().map(ToString::to_string).collect()))
        .collect::<Result<_, BouquetError>>()?;
    Ok(to_json(json!({ "depth": obs, "lengths": lengths, "rows": rows })))
}

pub fn mixing_gaps(m: usize, j: usize) -> Result<String, WebError> {
    let c = Construction::builtin();
    let r = mixing_gap_report(&c, m, j, SCAN_BUDGET)?;
    let histogram: Vec<(u64, u64)> = r.occurrences.gap_histogram.iter().map(|(&g, &n)| (g, n)).collect();
    Ok(to_json(json!({
        "m": m,
        "j": j,
        "copies": r.occurrences.copy_count,
        "image_length": r.occurrences.image_length,
        "histogram": histogram,
        "gap_bound": r.gap_bound,
        "missing": r.missing_gaps,
        "prefix_ok": r.prefix_ok,
        "trailing_gap": r.occurrences.trailing_gap,
        "trailing_ok": r.trailing_ok,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn table_lists_known_lengths() {
        let v = parse(level_table(3).unwrap());
        assert_eq!(v[2]["lengths"], json!(["695", "90"]));
        assert_eq!(v[3]["k"], "6868766");
        assert!(level_table(MAX_TABLE_LEVEL + 1).is_err());
    }

    #[test]
    fn trace_starts_at_the_handle() {
        let v = parse(orbit_trace(2, 1, "1", 1, "0", 2).unwrap());
        let rows = v["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1]["cols"], json!([[0, "0"], [1, "1"]]));
        assert_eq!(v["lengths"][1], json!(["10"]));
    }

    #[test]
    fn trace_rejects_bad_input() {
        assert!(orbit_trace(2, 1, "x", 1, "0", 2).is_err());
        assert!(orbit_trace(2, 9, "1", 1, "0", 2).is_err());
        assert!(orbit_trace(2, 1, "1", 1, "0", MAX_ORBIT_ROWS).is_err());
    }

    #[test]
    fn first_gap_histogram() {
        let v = parse(mixing_gaps(1, 1).unwrap());
        assert_eq!(v["copies"], 44);
        assert_eq!(v["missing"], json!([1]));
        let gaps: Vec<u64> = v["histogram"].as_array().unwrap().iter().map(|p| p[0].as_u64().unwrap()).collect();
        assert_eq!(gaps, [0].into_iter().chain(2..=22).collect::<Vec<_>>());
    }
}
