//! Browser bindings. Every export takes strings and returns JSON (or raw
//! bytes for the adjacency bitmap) so the page needs no glue beyond
//! `JSON.parse`.

use paleyvec::theorems::{predict_omega, OmegaPrediction};
use paleyvec::{Elem, FieldCtx, FieldSpec, GraphGU, SolverOptions, Subspace, SubspaceSpec};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Graphs larger than this are refused; the solver runs on the page's thread.
pub const MAX_ORDER: u32 = 4096;
/// Largest graph drawn on the canvas.
pub const MAX_DRAW: u32 = 729;
const MAX_SURVEY_ROWS: usize = 2000;

fn context(field: &str) -> Result<FieldCtx, String> {
    let spec: FieldSpec = field.parse().map_err(|e| format!("{e}"))?;
    FieldCtx::new(spec.p, spec.m, spec.n).map_err(|e| e.to_string())
}

fn subspace(ctx: &FieldCtx, spec: &str) -> Result<Subspace, String> {
    let spec: SubspaceSpec = spec.parse().map_err(|e| format!("{e}"))?;
    spec.resolve(ctx).map_err(|e| e.to_string())
}

fn graph<'a>(ctx: &'a FieldCtx, u: Subspace) -> Result<GraphGU<'a>, String> {
    GraphGU::build_with_budget(ctx, u, MAX_ORDER as usize).map_err(|e| e.to_string())
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

#[derive(Serialize)]
struct FieldSummary {
    field: String,
    p: u32,
    m: u32,
    n: u32,
    q: u32,
    order: u32,
    base_modulus: Vec<u32>,
    ext_modulus: Vec<u32>,
    /// polynomial names, omitted for large fields
    elements: Option<Vec<String>>,
}

pub fn field_summary_json(field: &str) -> Result<String, String> {
    let ctx = context(field)?;
    Ok(to_json(&FieldSummary {
        field: format!("{}^{}^{}", ctx.p(), ctx.m(), ctx.n()),
        p: ctx.p(),
        m: ctx.m(),
        n: ctx.n(),
        q: ctx.q(),
        order: ctx.size(),
        base_modulus: ctx.base_modulus().to_vec(),
        ext_modulus: ctx.ext_modulus().to_vec(),
        elements: (ctx.size() <= 256).then(|| ctx.elements().map(|a| ctx.pretty(a)).collect()),
    }))
}

#[derive(Serialize)]
struct OmegaOut {
    subspace: String,
    dim: usize,
    basis: Vec<String>,
    omega: usize,
    witness: Vec<Elem>,
    witness_pretty: Vec<String>,
    t: u32,
    r: u32,
    prediction: OmegaPrediction,
    #[serde(rename = "match")]
    matches: bool,
    nodes: u64,
}

pub fn omega_json(field: &str, sub: &str) -> Result<String, String> {
    let ctx = context(field)?;
    let u = subspace(&ctx, sub)?;
    let g = graph(&ctx, u.clone())?;
    let res = g
        .clique_number(&SolverOptions::default().with_dominance(true))
        .map_err(|e| e.to_string())?;
    let witness = GraphGU::witness_elems(&res);
    let dec = g.decompose(&witness).map_err(|e| e.to_string())?;
    let prediction = predict_omega(&ctx, &u).map_err(|e| e.to_string())?;
    Ok(to_json(&OmegaOut {
        subspace: u.to_spec(),
        dim: u.dim(),
        basis: u.basis().iter().map(|&b| ctx.pretty(b)).collect(),
        omega: res.omega,
        witness_pretty: witness.iter().map(|&a| ctx.pretty(a)).collect(),
        witness,
        t: dec.t,
        r: dec.r,
        matches: prediction.admits(res.omega as u64),
        prediction,
        nodes: res.nodes,
    }))
}

/// Row-major adjacency matrix, one byte per entry.
pub fn adjacency_bytes(field: &str, sub: &str) -> Result<Vec<u8>, String> {
    let ctx = context(field)?;
    if ctx.size() > MAX_DRAW {
        return Err(format!("drawing is limited to {MAX_DRAW} vertices"));
    }
    let u = subspace(&ctx, sub)?;
    let g = graph(&ctx, u)?;
    let n = ctx.size() as usize;
    let mut out = vec![0u8; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = g.graph().has_edge(i, j) as u8;
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct SurveyRow {
    basis: String,
    has_square: bool,
    s: Option<i8>,
    predicted: String,
    exact: usize,
    #[serde(rename = "match")]
    matches: bool,
}

/// Every subspace of dimension `dim` (0 means n-1), with exact and predicted ω.
pub fn survey_json(field: &str, dim: u32) -> Result<String, String> {
    let ctx = context(field)?;
    let n = ctx.n();
    let d = if dim == 0 { n - 1 } else { dim };
    if d == 0 || d >= n {
        return Err(format!("dimension must lie in 1..={}", n - 1));
    }
    let family = paleyvec::linalg::gaussian_binomial(ctx.q() as u64, n, d);
    if family > MAX_SURVEY_ROWS as u64 {
        return Err(format!(
            "{family} subspaces; the page lists at most {MAX_SURVEY_ROWS}"
        ));
    }
    let odd_even = !ctx.is_even() && n % 2 == 0 && d == n - 1;
    let mut rows = Vec::new();
    for u in Subspace::all_of_dim(&ctx, d as usize) {
        let err = |e: paleyvec::Error| e.to_string();
        let prediction = predict_omega(&ctx, &u).map_err(err)?;
        let s = if odd_even {
            Some(u.s_invariant(&ctx).map_err(err)?)
        } else {
            None
        };
        let has_square = u.contains_nonzero_square(&ctx).map_err(err)?;
        let basis = u.to_spec();
        let exact = graph(&ctx, u)?
            .clique_number(&SolverOptions::default().with_dominance(true))
            .map_err(err)?
            .omega;
        rows.push(SurveyRow {
            basis,
            has_square,
            s,
            predicted: prediction.to_string(),
            exact,
            matches: prediction.admits(exact as u64),
        });
    }
    Ok(to_json(&rows))
}

#[wasm_bindgen]
pub fn field_summary(field: &str) -> Result<String, JsValue> {
    field_summary_json(field).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn omega(field: &str, subspace: &str) -> Result<String, JsValue> {
    omega_json(field, subspace).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn adjacency(field: &str, subspace: &str) -> Result<Vec<u8>, JsValue> {
    adjacency_bytes(field, subspace).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn survey(field: &str, dim: u32) -> Result<String, JsValue> {
    survey_json(field, dim).map_err(|e| JsValue::from_str(&e))
}
