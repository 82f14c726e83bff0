//! Browser bindings. Each export returns a JSON string; the plain functions
//! behind them are usable natively.

use rosen_core::algebra::GroupIndex;
use rosen_core::expansion::{convergents, orbit, parse_field_element, Alpha, Params};
use rosen_core::natext::{build_domain, heights, normalizing_constant, verify_ordering};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Longest expansion the page asks for.
pub const MAX_DIGITS: usize = 60;
const DIGITS: usize = 20;

fn setup(q: u32, alpha: &str) -> Result<(GroupIndex, Alpha), String> {
    let q = GroupIndex::new(q).map_err(|e| e.to_string())?;
    let alpha: Alpha = alpha.parse().map_err(|e: rosen_core::Error| e.to_string())?;
    Ok((q, alpha))
}

/// Digits, convergents and the orbit of x.
pub fn expand(q: u32, alpha: &str, x: &str, n: usize) -> Result<Value, String> {
    let (q, alpha) = setup(q, alpha)?;
    let p = Params::exact(q, &alpha).map_err(|e| e.to_string())?;
    let x = parse_field_element(x, q).map_err(|e| e.to_string())?;
    let orb = orbit(&x, n.clamp(1, MAX_DIGITS), &p).map_err(|e| e.to_string())?;
    let k = p.bound_constant();
    let rows: Vec<Value> = convergents(&orb.expansion.digits, &p)
        .into_iter()
        .skip(2)
        .zip(&orb.expansion.digits)
        .map(|(pair, digit)| {
            let value = &pair.r / &pair.s;
            let error = (&x - &value).abs();
            let bound = &k / (&pair.s * &pair.s);
            json!({
                "n": pair.n,
                "digit": digit.to_string(),
                "value": value.to_decimal(DIGITS),
                "error": error.to_f64(),
                "bound": bound.to_f64(),
                "holds": error <= bound,
            })
        })
        .collect();
    Ok(json!({
        "x": x.to_decimal(DIGITS),
        "interval": [p.left.to_f64(), p.right.to_f64()],
        "orbit": orb.points.iter().map(|t| t.to_f64()).collect::<Vec<_>>(),
        "terminated": orb.expansion.terminated,
        "convergents": rows,
    }))
}

/// Rectangles of the natural extension domain with its normalizing constant.
pub fn domain(q: u32, alpha: &str) -> Result<Value, String> {
    let (q, alpha) = setup(q, alpha)?;
    let dom = build_domain(q, &alpha).map_err(|e| e.to_string())?;
    let nc = normalizing_constant(q, &alpha).map_err(|e| e.to_string())?;
    let rects: Vec<Value> = dom
        .rects
        .iter()
        .map(|r| {
            json!({
                "index": r.index,
                "left": r.left.to_f64(),
                "right": r.right.to_f64(),
                "height": r.height.to_f64(),
                "exact": [r.left.to_string(), r.right.to_string(), r.height.to_string()],
            })
        })
        .collect();
    Ok(json!({
        "regime": dom.regime.to_string(),
        "rectangles": rects,
        "dropped": dom.dropped,
        "c": nc.value,
        "formula": nc.formula,
        "residual": nc.residual,
    }))
}

/// Exact check of the ordering, heights and mass.
pub fn verify(q: u32, alpha: &str) -> Result<Value, String> {
    let (q, alpha) = setup(q, alpha)?;
    let err = |e: rosen_core::Error| e.to_string();
    let cert = verify_ordering(q, &alpha).map_err(err)?;
    let hs = heights(q, &alpha).map_err(err)?;
    let dom = build_domain(q, &alpha).map_err(err)?;
    let nc = normalizing_constant(q, &alpha).map_err(err)?;
    let mut failures = cert.failures();
    failures.extend(hs.relations.iter().filter(|r| !r.holds).map(|r| r.statement.clone()));
    if !(dom.checks_hold() && nc.exact_match) {
        failures.push("domain closed forms".into());
    }
    Ok(json!({
        "passed": failures.is_empty(),
        "regime": dom.regime.to_string(),
        "chain": cert.chain,
        "comparisons": cert.comparisons.len(),
        "critical": dom.critical,
        "failures": failures,
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = expand)]
pub fn expand_js(q: u32, alpha: &str, x: &str, n: usize) -> Result<String, JsError> {
    to_js(expand(q, alpha, x, n))
}

#[wasm_bindgen(js_name = domain)]
pub fn domain_js(q: u32, alpha: &str) -> Result<String, JsError> {
    to_js(domain(q, alpha))
}

#[wasm_bindgen(js_name = verify)]
pub fn verify_js(q: u32, alpha: &str) -> Result<String, JsError> {
    to_js(verify(q, alpha))
}
