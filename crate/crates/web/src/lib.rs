//! wasm-bindgen bindings for the browser demo in `www/`.
//!
//! Every binding is a thin wrapper over a plain function returning
//! `Result<String, String>`, so the logic is testable off the browser.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use duploss::experiments;
use duploss::vp::{self, Direction};
use duploss::{bucket_scenario, radix_scenario, DupLossStep, Permutation, Scenario, SubWindowTarget};

/// Largest permutation the page will build a scenario for.
pub const MAX_DEMO_SIZE: usize = 400;

#[derive(Serialize)]
struct Trace {
    n: usize,
    width_limit: String,
    steps: Vec<DupLossStep>,
    /// Permutation before the first step and after each step.
    frames: Vec<Permutation>,
}

#[derive(Serialize)]
struct Vector {
    value: usize,
    from: usize,
    to: usize,
    direction: &'static str,
    size: usize,
}

#[derive(Serialize)]
struct Window {
    vp: bool,
    from: usize,
    to: usize,
}

#[derive(Serialize)]
struct Analysis {
    perm: Permutation,
    descents: Vec<usize>,
    inversions: u64,
    vectors: Vec<Vector>,
    domain: Vec<usize>,
    windows: Vec<Window>,
}

fn parse(perm: &str) -> Result<Permutation, String> {
    perm.parse::<Permutation>().map_err(|e| e.to_string())
}

fn json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

pub fn step_text(perm: &str, start: usize, width: usize, keep: &[usize]) -> Result<String, String> {
    let step = DupLossStep::new(start, width, keep.to_vec()).map_err(|e| e.to_string())?;
    duploss::apply_step(&parse(perm)?, &step)
        .map(|p| p.to_string())
        .map_err(|e| e.to_string())
}

pub fn trace_json(perm: &str, algo: &str, width: usize) -> Result<String, String> {
    let sigma = parse(perm)?;
    if sigma.len() > MAX_DEMO_SIZE {
        return Err(format!("demo is limited to n <= {MAX_DEMO_SIZE}"));
    }
    let sc: Scenario = match algo {
        "radix" => radix_scenario(&SubWindowTarget::whole(&sigma), sigma.len()),
        "bucket" => bucket_scenario(&sigma, width),
        other => return Err(format!("unknown algorithm {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    let frames = sc.trace().map_err(|e| e.to_string())?;
    json(&Trace {
        n: sc.n(),
        width_limit: sc.width_limit().to_string(),
        steps: sc.steps().to_vec(),
        frames,
    })
}

pub fn analysis_json(perm: &str) -> Result<String, String> {
    let sigma = parse(perm)?;
    let vectors = vp::vp_vectors(&sigma)
        .into_iter()
        .map(|v| Vector {
            value: v.value,
            from: v.from_position,
            to: v.to_position,
            direction: match v.direction() {
                Direction::Right => "right",
                Direction::Left => "left",
                Direction::Fixed => "fixed",
            },
            size: v.size(),
        })
        .collect();
    let windows = vp::free_window_decomposition(&sigma)
        .windows()
        .into_iter()
        .map(|(is_vp, w)| Window { vp: is_vp, from: *w.start(), to: *w.end() })
        .collect();
    json(&Analysis {
        descents: sigma.descents(),
        inversions: sigma.inversions(),
        vectors,
        domain: vp::vp_domain(&sigma).into_iter().collect(),
        windows,
        perm: sigma,
    })
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// One step applied to a one-line permutation; `keep` holds 1-based offsets.
#[wasm_bindgen(js_name = applyStep)]
pub fn apply_step(perm: &str, start: usize, width: usize, keep: Vec<usize>) -> Result<String, JsError> {
    js(step_text(perm, start, width, &keep))
}

/// Scenario from the identity to `perm` as JSON frames.
#[wasm_bindgen(js_name = scenarioTrace)]
pub fn scenario_trace(perm: &str, algo: &str, width: usize) -> Result<String, JsError> {
    js(trace_json(perm, algo, width))
}

#[wasm_bindgen(js_name = vpAnalysis)]
pub fn vp_analysis(perm: &str) -> Result<String, JsError> {
    js(analysis_json(perm))
}

#[wasm_bindgen(js_name = randomPermutation)]
pub fn random_permutation(n: usize, seed: u32) -> String {
    experiments::random_permutation(n, seed as u64).to_string()
}
