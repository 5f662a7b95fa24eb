//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each operation takes either a built-in fixture name or a JSON manifold
//! spec and returns JSON text. The plain functions are usable natively; the
//! `#[wasm_bindgen]` wrappers convert errors to JavaScript exceptions.

use statgeo::fixture::{builtin_fixture, Fixture, BUILTIN_NAMES};
use statgeo::report::Sampling;
use statgeo::spec_file::load;
use statgeo::structures::classify;
use statgeo::table::{box_center, coefficient_table, TableKind};
use statgeo::verify::check_fixture;
use wasm_bindgen::prelude::*;

fn fixture(input: &str) -> Result<(Fixture, Sampling), String> {
    let input = input.trim();
    if input.starts_with('{') {
        load(input, Sampling::default()).map_err(|e| e.to_string())
    } else {
        builtin_fixture(input).map(|f| (f, Sampling::default())).map_err(|e| e.to_string())
    }
}

/// Check report as JSON.
pub fn check_report(input: &str, points: usize, seed: u64) -> Result<String, String> {
    if points == 0 {
        return Err("points must be positive".into());
    }
    let (f, sampling) = fixture(input)?;
    Ok(check_fixture(&f, &sampling.with_points(points).with_seed(seed)).to_json())
}

/// Classification as JSON with a `summary` field, or `null` without an
/// almost contact structure.
pub fn classification(input: &str) -> Result<String, String> {
    let (f, sampling) = fixture(input)?;
    let Some(c) = classify(&f, &sampling).map_err(|e| e.to_string())? else {
        return Ok("null".into());
    };
    let mut v = serde_json::to_value(c).map_err(|e| e.to_string())?;
    v["summary"] = c.summary().into();
    Ok(v.to_string())
}

/// Coefficient table at the sampling box center as JSON.
pub fn table_json(input: &str, which: &str) -> Result<String, String> {
    let kind: TableKind = which.parse().map_err(|e: statgeo::error::GeometryError| e.to_string())?;
    let (f, sampling) = fixture(input)?;
    let t = coefficient_table(&f, kind, &box_center(&f, sampling.sample_box.as_deref())).map_err(|e| e.to_string())?;
    serde_json::to_string(&t).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn builtins() -> Vec<String> {
    BUILTIN_NAMES.iter().map(|s| s.to_string()).collect()
}

#[wasm_bindgen]
pub fn tables() -> Vec<String> {
    TableKind::NAMES.iter().map(|s| s.to_string()).collect()
}

#[wasm_bindgen]
pub fn check(input: &str, points: usize, seed: u64) -> Result<String, JsError> {
    check_report(input, points, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = classify)]
pub fn classify_js(input: &str) -> Result<String, JsError> {
    classification(input).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn table(input: &str, which: &str) -> Result<String, JsError> {
    table_json(input, which).map_err(|e| JsError::new(&e))
}
