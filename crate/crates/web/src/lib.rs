//! Browser bindings. Each export takes plain numbers and strings and returns
//! a JSON document; the logic lives in [`demo`] so it runs natively too.

pub mod demo;

use wasm_bindgen::prelude::*;

fn js(r: Result<String, sdn_eigen::error::Error>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Random geometric graph with coordinates.
#[wasm_bindgen]
pub fn generate_graph(n: usize, seed: u32) -> Result<String, JsValue> {
    js(demo::graph(n, seed.into()))
}

/// Trial-averaged CE/NR curves of every algorithm for a spline filter.
#[wasm_bindgen]
pub fn convergence_curves(n: usize, seed: u32, m: usize, iterations: usize, trials: usize) -> Result<String, JsValue> {
    js(demo::curves(n, seed.into(), m, iterations, trials))
}

/// Final iterate of one algorithm, phase-aligned, for a vertex heatmap.
#[wasm_bindgen]
pub fn eigenvector(n: usize, seed: u32, filter: &str, algorithm: &str, iterations: usize) -> Result<String, JsValue> {
    js(demo::eigenvector(n, seed.into(), filter, algorithm, iterations))
}
