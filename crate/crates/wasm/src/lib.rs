//! Browser bindings: sum-DoF curves, region vertices with the CSIT
//! comparison, and a small Monte-Carlo run of the scheme. Every export takes
//! and returns JSON strings.

use dof_core::curve::{parse_grid, sum_dof_curve};
use dof_core::plan::{achieved_dof, decoding_rows, plan_for_target};
use dof_core::sim::{monte_carlo, SimOptions};
use dof_core::{AntennaConfig, DoFPoint, DoFRegion, Rational};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn approx(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Serialize)]
struct CurveRow {
    k: u32,
    ratio: String,
    x: f64,
    mode: &'static str,
    value: String,
    y: f64,
}

/// Normalized symmetric sum-DoF for every `K` in `ks` ("2,3,4") on the
/// `M/N` grid ("1/4:3:1/4" or a list).
pub fn curve_json(ks: &str, grid: &str) -> Result<String, String> {
    let ks: Vec<u32> = ks
        .split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|e| format!("bad K {s:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let ratios = parse_grid(grid).map_err(|e| e.to_string())?;
    let rows: Vec<CurveRow> = sum_dof_curve(&ks, &ratios)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|p| CurveRow {
            k: p.k,
            ratio: p.ratio.to_string(),
            x: approx(&p.ratio),
            mode: p.mode.tag(),
            value: p.normalized.to_string(),
            y: approx(&p.normalized),
        })
        .collect();
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct RegionView {
    config: String,
    halfspaces: Vec<String>,
    vertices: Vec<Vec<String>>,
    max_sum_dof: String,
}

#[derive(Serialize)]
struct RegionsView {
    no_csit: RegionView,
    delayed: RegionView,
    verdict: &'static str,
    witness: Option<String>,
}

fn view(cfg: &AntennaConfig, region: &DoFRegion) -> Result<RegionView, String> {
    let vertices = region.vertices().map_err(|e| e.to_string())?;
    Ok(RegionView {
        config: cfg.to_string(),
        halfspaces: region.halfspaces().iter().map(ToString::to_string).collect(),
        vertices: vertices
            .iter()
            .map(|v| v.coords().iter().map(ToString::to_string).collect())
            .collect(),
        max_sum_dof: region.max_sum_dof().map_err(|e| e.to_string())?.to_string(),
    })
}

/// Both regions of a config (`{"M":..,"N":[..]}`) and whether delayed CSIT
/// enlarges the region.
pub fn regions_json(config: &str) -> Result<String, String> {
    let cfg = AntennaConfig::from_json(config).map_err(|e| e.to_string())?;
    let none = DoFRegion::no_csit(&cfg);
    let delayed = DoFRegion::delayed_csit(&cfg);
    let witness = delayed.vertex_outside(&none).map_err(|e| e.to_string())?;
    let out = RegionsView {
        no_csit: view(&cfg, &none)?,
        delayed: view(&cfg, &delayed)?,
        verdict: if witness.is_some() { "strict inclusion" } else { "equal" },
        witness: witness.map(|w| w.to_string()),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct SimView {
    config: String,
    plan: String,
    slacks: Vec<i64>,
    achieved: String,
    trials: usize,
    successes: usize,
    worst_residual: f64,
}

/// Plans for `target` and runs `trials` noiseless trials from `seed`.
pub fn simulate_json(config: &str, target: &str, trials: u32, seed: u64) -> Result<String, String> {
    let cfg = AntennaConfig::from_json(config).map_err(|e| e.to_string())?;
    let target: DoFPoint = target.parse().map_err(|e: dof_core::Error| e.to_string())?;
    if target.dim() != cfg.k() {
        return Err(format!(
            "target has {} coordinates, config has {} receivers",
            target.dim(),
            cfg.k()
        ));
    }
    let plan = plan_for_target(&cfg, &target).map_err(|e| e.to_string())?;
    let summary = monte_carlo(&cfg, &plan, trials as usize, seed, &SimOptions::default()).map_err(|e| e.to_string())?;
    let out = SimView {
        config: cfg.to_string(),
        plan: format!(
            "Q={:?} T={:?} T2={} B={} beta={}",
            plan.q, plan.t, plan.t2, plan.b, plan.beta
        ),
        slacks: decoding_rows(&cfg, &plan).iter().map(|r| r.slack).collect(),
        achieved: achieved_dof(&plan).map_err(|e| e.to_string())?.to_string(),
        trials: summary.trials,
        successes: summary.successes,
        worst_residual: summary.worst_rel_error,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn curve(ks: &str, grid: &str) -> Result<String, JsValue> {
    curve_json(ks, grid).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn regions(config: &str) -> Result<String, JsValue> {
    regions_json(config).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn simulate(config: &str, target: &str, trials: u32, seed: u64) -> Result<String, JsValue> {
    simulate_json(config, target, trials, seed).map_err(|e| JsValue::from_str(&e))
}
