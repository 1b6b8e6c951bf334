//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export returns a JSON string. The plain functions in [`api`] do
//! the work so they can be tested natively; the `#[wasm_bindgen]` wrappers
//! only turn errors into JavaScript exceptions.

pub mod api;

use wasm_bindgen::prelude::*;

fn js(r: Result<String, api::WebError>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

/// Cycle lengths and `k_n` for levels `0..=max`.
#[wasm_bindgen]
pub fn level_table(max: usize) -> Result<String, JsError> {
    js(api::level_table(max))
}

/// Columns of `T^t(x)` to depth `obs` for `t` in `from..=from+horizon`.
/// `pos` and `from` are decimal strings so they can exceed 2^53.
#[wasm_bindgen]
pub fn orbit_trace(spine: usize, cycle: usize, pos: &str, obs: usize, from: &str, horizon: u32) -> Result<String, JsError> {
    js(api::orbit_trace(spine, cycle, pos, obs, from, horizon))
}

/// Gap histogram of copies of `c_{m,1}` inside the image of `c_{m+j,1}`.
#[wasm_bindgen]
pub fn mixing_gaps(m: usize, j: usize) -> Result<String, JsError> {
    js(api::mixing_gaps(m, j))
}
