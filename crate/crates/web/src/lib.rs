//! wasm-bindgen entry points for the static page in `www/`. Every export
//! takes instance text and returns JSON; the plain functions underneath are
//! what the tests call.

use flp_core::formulations::{assemble_nbox, AssemblyOptions, CutLevel, PairwiseKind};
use flp_core::milp::{solve_lp, solve_milp, Limits, LpStatus};
use flp_core::oracle::{check_layout_tangent, layout_from_point};
use flp_core::{parse_instance, perturb_instance, write_instance, Axis, FlpInstance};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Node budget for a browser solve.
pub const NODE_LIMIT: usize = 20_000;

#[derive(Debug, Serialize)]
pub struct PlacedBox {
    pub id: usize,
    pub cx: f64,
    pub cy: f64,
    pub wx: f64,
    pub wy: f64,
    pub area: f64,
}

#[derive(Debug, Serialize)]
pub struct SolveView {
    pub status: String,
    pub objective: Option<f64>,
    pub bound: f64,
    pub root_bound: f64,
    pub gap_pct: Option<f64>,
    pub nodes: usize,
    pub time_ms: f64,
    pub floor: [f64; 2],
    pub boxes: Vec<PlacedBox>,
    /// Pairs `[i, j, cost]`, 1-based, for drawing flow lines.
    pub flows: Vec<(usize, usize, f64)>,
    pub feasible: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct BoundCell {
    pub formulation: String,
    pub cuts: String,
    pub lp_bound: Option<f64>,
    pub rows: usize,
    pub binaries: usize,
}

fn parse(text: &str) -> Result<FlpInstance, String> {
    parse_instance(text).map_err(|e| e.to_string())
}

fn options(formulation: &str, cuts: &str, symmetry: bool) -> Result<AssemblyOptions, String> {
    let kind: PairwiseKind = formulation.parse()?;
    let level: CutLevel = cuts.parse()?;
    Ok(AssemblyOptions::new(kind).cuts(level).symmetry(symmetry))
}

pub fn solve_view(text: &str, formulation: &str, cuts: &str, symmetry: bool, node_limit: usize) -> Result<SolveView, String> {
    let inst = parse(text)?;
    let opts = options(formulation, cuts, symmetry)?;
    let model = assemble_nbox(&inst, &opts).map_err(|e| e.to_string())?;
    let limits = Limits { nodes: Some(node_limit), ..Limits::default() };
    let r = solve_milp(&model, &limits);
    let layout = r.point.as_ref().map(|x| layout_from_point(&model, x, inst.n()));
    let boxes = match &layout {
        Some(lay) => inst
            .boxes
            .iter()
            .enumerate()
            .map(|(i, b)| PlacedBox {
                id: i + 1,
                cx: lay.c(i, Axis::X),
                cy: lay.c(i, Axis::Y),
                wx: lay.l(i, Axis::X),
                wy: lay.l(i, Axis::Y),
                area: b.area,
            })
            .collect(),
        None => Vec::new(),
    };
    let feasible = match &layout {
        Some(lay) => Some(check_layout_tangent(&inst, lay, opts.area_k).map_err(|e| e.to_string())?.feasible()),
        None => None,
    };
    let gap = r.gap_pct();
    Ok(SolveView {
        status: r.status.to_string(),
        objective: r.objective,
        bound: r.bound,
        root_bound: r.root_bound,
        gap_pct: gap.is_finite().then_some(gap),
        nodes: r.nodes,
        time_ms: r.time.as_secs_f64() * 1e3,
        floor: inst.floor,
        boxes,
        flows: inst.costs.iter().filter(|(_, &p)| p > 0.0).map(|(&(i, j), &p)| (i + 1, j + 1, p)).collect(),
        feasible,
    })
}

/// LP relaxation value of every formulation at every cut level.
pub fn bound_table(text: &str) -> Result<Vec<BoundCell>, String> {
    let inst = parse(text)?;
    let mut out = Vec::new();
    for kind in PairwiseKind::ALL {
        for level in CutLevel::ALL {
            if kind == PairwiseKind::Extended && level != CutLevel::None {
                continue;
            }
            let model = assemble_nbox(&inst, &AssemblyOptions::new(kind).cuts(level)).map_err(|e| e.to_string())?;
            let lp = solve_lp(&model.relaxed());
            out.push(BoundCell {
                formulation: kind.to_string(),
                cuts: level.to_string(),
                lp_bound: (lp.status == LpStatus::Optimal).then_some(lp.objective),
                rows: model.num_constraints(),
                binaries: model.binaries().count(),
            });
        }
    }
    Ok(out)
}

pub fn perturbed_text(text: &str, gamma: f64, alpha: f64, seed: u64) -> Result<String, String> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err("gamma must be nonnegative".into());
    }
    if !alpha.is_finite() || alpha < 1.0 {
        return Err("aspect ratio must be at least 1".into());
    }
    Ok(write_instance(&perturb_instance(&parse(text)?, gamma, alpha, seed)))
}

fn to_js<T: Serialize>(v: Result<T, String>) -> Result<String, JsValue> {
    v.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string())).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solve(text: &str, formulation: &str, cuts: &str, symmetry: bool) -> Result<String, JsValue> {
    to_js(solve_view(text, formulation, cuts, symmetry, NODE_LIMIT))
}

#[wasm_bindgen]
pub fn bounds(text: &str) -> Result<String, JsValue> {
    to_js(bound_table(text))
}

/// Seeds above 2^53 do not survive the trip through a JS number.
#[wasm_bindgen]
pub fn perturb(text: &str, gamma: f64, alpha: f64, seed: f64) -> Result<String, JsValue> {
    perturbed_text(text, gamma, alpha, seed as u64).map_err(|e| JsValue::from_str(&e))
}
