use std::io::Write;
use std::time::Instant;

use paleyvec::forms::{Form, FormInvariants, FormSpec};
use paleyvec::linalg::gaussian_binomial;
use paleyvec::theorems::{predict_omega, OmegaPrediction};
use paleyvec::verify::{self, SuiteConfig, SuiteReport};
use paleyvec::{Elem, Error, FieldCtx, FieldSpec, GraphGU, Subspace, SubspaceSpec};
use serde::Serialize;

use crate::{Budget, Dim, Failure, Format, Mode, SuiteArg};

const SCHEMA: u32 = 1;

type Out<'a> = &'a mut dyn Write;

fn context(spec: FieldSpec) -> Result<FieldCtx, Failure> {
    Ok(FieldCtx::new(spec.p, spec.m, spec.n)?)
}

fn unsupported(cmd: &str, format: Format) -> Failure {
    Failure::Usage(format!("{cmd} does not support --format {format:?}").to_lowercase())
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn json(out: Out, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct FieldReport {
    schema: u32,
    field: String,
    p: u32,
    m: u32,
    n: u32,
    q: u32,
    order: u32,
    log_tables: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    base_modulus: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ext_modulus: Option<Vec<u32>>,
}

pub fn field(
    out: Out,
    spec: FieldSpec,
    print_modulus: bool,
    format: Format,
) -> Result<(), Failure> {
    let ctx = context(spec)?;
    let r = FieldReport {
        schema: SCHEMA,
        field: spec.to_string(),
        p: ctx.p(),
        m: ctx.m(),
        n: ctx.n(),
        q: ctx.q(),
        order: ctx.size(),
        log_tables: ctx.has_tables(),
        base_modulus: print_modulus.then(|| ctx.base_modulus().to_vec()),
        ext_modulus: print_modulus.then(|| ctx.ext_modulus().to_vec()),
    };
    match format {
        Format::Json => json(out, &r),
        Format::Human => {
            writeln!(
                out,
                "field {}: p={} m={} n={} q={} order={}",
                r.field, r.p, r.m, r.n, r.q, r.order
            )?;
            writeln!(
                out,
                "arithmetic: {}",
                if r.log_tables {
                    "log tables"
                } else {
                    "polynomial"
                }
            )?;
            if let (Some(b), Some(e)) = (&r.base_modulus, &r.ext_modulus) {
                writeln!(out, "{}", join(b))?;
                writeln!(out, "{}", join(e))?;
            }
            Ok(())
        }
        Format::Csv => Err(unsupported("field", format)),
    }
}

#[derive(Serialize)]
struct DecompositionOut {
    t: u32,
    r: u32,
    v2: Vec<Elem>,
    v1: Vec<Elem>,
}

#[derive(Serialize)]
struct OmegaReport {
    schema: u32,
    field: String,
    subspace: String,
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<Elem>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decomposition: Option<DecompositionOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    prediction: Option<OmegaPrediction>,
    /// the predicted value when the prediction is exact
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted: Option<u64>,
    /// whether the exact value is admitted by the prediction
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    matches: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_ms: Option<f64>,
}

pub fn omega(
    out: Out,
    b: &Budget,
    spec: FieldSpec,
    sub: &SubspaceSpec,
    mode: Mode,
    timing: bool,
    format: Format,
) -> Result<(), Failure> {
    let ctx = context(spec)?;
    let u = sub.resolve(&ctx)?;
    if u.is_zero() {
        return Err(Error::ZeroDimension.into());
    }
    let mut r = OmegaReport {
        schema: SCHEMA,
        field: spec.to_string(),
        subspace: u.to_spec(),
        dim: u.dim(),
        omega: None,
        witness: None,
        decomposition: None,
        prediction: None,
        predicted: None,
        matches: None,
        runtime_ms: None,
    };
    let start = Instant::now();
    if mode != Mode::Predict {
        let g = GraphGU::build_with_budget(&ctx, u.clone(), b.max_vertices)?;
        let res = g.clique_number(&b.solver())?;
        let witness = GraphGU::witness_elems(&res);
        let dec = g.decompose(&witness)?;
        r.omega = Some(res.omega);
        r.decomposition = Some(DecompositionOut {
            t: dec.t,
            r: dec.r,
            v2: dec.v2_elems,
            v1: dec.v1,
        });
        r.witness = Some(witness);
    }
    if mode != Mode::Exact {
        let p = predict_omega(&ctx, &u)?;
        r.predicted = p.exact_value();
        r.prediction = Some(p);
    }
    if timing {
        r.runtime_ms = Some((start.elapsed().as_secs_f64() * 1e6).round() / 1e3);
    }
    if let (Some(w), Some(p)) = (r.omega, &r.prediction) {
        r.matches = Some(p.admits(w as u64));
    }
    match format {
        Format::Json => json(out, &r)?,
        Format::Human => {
            writeln!(
                out,
                "field {} subspace {} (dim {})",
                r.field, r.subspace, r.dim
            )?;
            if let (Some(w), Some(wit), Some(d)) = (r.omega, &r.witness, &r.decomposition) {
                writeln!(out, "omega: {w}")?;
                writeln!(out, "witness: {}", join(wit))?;
                writeln!(out, "decomposition: t={} r={}", d.t, d.r)?;
            }
            if let Some(p) = &r.prediction {
                writeln!(out, "prediction: {p} ({})", p.provenance)?;
            }
            if let Some(ms) = r.runtime_ms {
                writeln!(out, "runtime: {ms} ms")?;
            }
        }
        Format::Csv => return Err(unsupported("omega", format)),
    }
    if r.matches == Some(false) {
        return Err(Failure::Mismatch);
    }
    Ok(())
}

#[derive(Serialize)]
struct SurveyRow {
    basis: String,
    #[serde(rename = "d_U")]
    d: usize,
    has_square: bool,
    #[serde(rename = "D_U")]
    d_big: Option<u32>,
    #[serde(rename = "s_U")]
    s: Option<i8>,
    predicted: String,
    exact: usize,
    #[serde(rename = "match")]
    matches: bool,
}

fn survey_row(ctx: &FieldCtx, b: &Budget, u: Subspace, pretty: bool) -> Result<SurveyRow, Failure> {
    let basis = if pretty {
        u.basis()
            .iter()
            .map(|&e| ctx.pretty(e))
            .collect::<Vec<_>>()
            .join("; ")
    } else {
        u.basis()
            .iter()
            .map(|e| e.0.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let has_square = u.contains_nonzero_square(ctx)?;
    let d_big = match u.d_invariant(ctx) {
        Ok(d) => Some(d),
        Err(Error::NoNonzeroSquare) => None,
        Err(e) => return Err(e.into()),
    };
    let hyperplane = u.dim() + 1 == ctx.n() as usize;
    let s = if hyperplane && !ctx.is_even() && ctx.n().is_multiple_of(2) {
        Some(u.s_invariant(ctx)?)
    } else {
        None
    };
    let prediction = predict_omega(ctx, &u)?;
    let d = u.dim();
    let g = GraphGU::build_with_budget(ctx, u, b.max_vertices)?;
    let exact = g.clique_number(&b.solver())?.omega;
    Ok(SurveyRow {
        basis,
        d,
        has_square,
        d_big,
        s,
        predicted: prediction.to_string(),
        exact,
        matches: prediction.admits(exact as u64),
    })
}

pub fn survey(
    out: Out,
    b: &Budget,
    spec: FieldSpec,
    dim: Dim,
    pretty: bool,
    max_subspaces: usize,
    format: Format,
) -> Result<(), Failure> {
    let ctx = context(spec)?;
    let n = ctx.n();
    let d = dim.resolve(n);
    if d == 0 || d >= n {
        return Err(Error::DimensionOutOfRange {
            d: d as usize,
            max: n as usize - 1,
        }
        .into());
    }
    let count = gaussian_binomial(ctx.q() as u64, n, d);
    if count > max_subspaces as u64 {
        return Err(Error::BudgetExceeded {
            what: "subspace family",
            size: count as u128,
            limit: max_subspaces as u128,
        }
        .into());
    }
    if ctx.size() as usize > b.max_vertices {
        return Err(Error::BudgetExceeded {
            what: "graph",
            size: ctx.size() as u128,
            limit: b.max_vertices as u128,
        }
        .into());
    }
    let rows = Subspace::all_of_dim(&ctx, d as usize)
        .into_iter()
        .map(|u| survey_row(&ctx, b, u, pretty))
        .collect::<Result<Vec<_>, _>>()?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => json(out, &serde_json::json!({ "schema": SCHEMA, "rows": rows }))?,
        Format::Human => {
            let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
            for r in &rows {
                writeln!(
                    out,
                    "{:<24} d={} square={} D={} s={} predicted={} exact={} {}",
                    r.basis,
                    r.d,
                    r.has_square,
                    opt(r.d_big.map(|x| x.to_string())),
                    opt(r.s.map(|x| x.to_string())),
                    r.predicted,
                    r.exact,
                    if r.matches { "ok" } else { "MISMATCH" }
                )?;
            }
        }
    }
    if rows.iter().any(|r| !r.matches) {
        return Err(Failure::Mismatch);
    }
    Ok(())
}

pub fn verify(
    out: Out,
    b: &Budget,
    suite: SuiteArg,
    qmax: Option<u64>,
    nmax: Option<u32>,
    seed: u64,
    format: Format,
) -> Result<(), Failure> {
    let cfg = SuiteConfig {
        qmax,
        nmax,
        solver: b.solver(),
        max_cliques: b.max_cliques,
        max_vertices: b.max_vertices,
        seed,
        ..SuiteConfig::default()
    };
    let suites = match suite {
        SuiteArg::All => verify::Suite::ALL.to_vec(),
        SuiteArg::One(s) => vec![s],
    };
    let reports = suites
        .into_iter()
        .map(|s| verify::run_suite(s, &cfg))
        .collect::<Result<Vec<SuiteReport>, _>>()?;
    match format {
        Format::Json if reports.len() == 1 => json(out, &reports[0])?,
        Format::Json => json(
            out,
            &serde_json::json!({ "schema": SCHEMA, "suites": reports }),
        )?,
        Format::Human => {
            for r in &reports {
                writeln!(out, "{r}")?;
                for f in &r.failures {
                    writeln!(out, "  {f}")?;
                }
            }
        }
        Format::Csv => return Err(unsupported("verify", format)),
    }
    if reports.iter().all(SuiteReport::ok) {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

#[derive(Serialize)]
struct FormReport {
    schema: u32,
    field: String,
    #[serde(flatten)]
    invariants: FormInvariants,
}

pub fn form(
    out: Out,
    b: &Budget,
    spec: FieldSpec,
    form: &FormSpec,
    format: Format,
) -> Result<(), Failure> {
    let ctx = context(spec)?;
    if let FormSpec::Trace { lambda } = form {
        if lambda.0 >= ctx.size() {
            return Err(Failure::Usage(format!(
                "lambda index {} out of range for a field of order {}",
                lambda.0,
                ctx.size()
            )));
        }
    }
    if ctx.size() as usize > b.max_vertices {
        return Err(Error::BudgetExceeded {
            what: "orthogonality graph",
            size: ctx.size() as u128,
            limit: b.max_vertices as u128,
        }
        .into());
    }
    let f = Form::new(&ctx, form)?;
    let inv = f.invariants(&b.solver())?;
    match format {
        Format::Json => json(
            out,
            &FormReport {
                schema: SCHEMA,
                field: spec.to_string(),
                invariants: inv,
            },
        ),
        Format::Human => {
            writeln!(out, "gram:")?;
            for row in &inv.gram {
                writeln!(
                    out,
                    "  {}",
                    row.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
                )?;
            }
            if let Some(chi) = inv.chi {
                writeln!(out, "chi: {chi}")?;
            }
            if let Some(diag) = &inv.diagonal {
                writeln!(out, "diagonal: {}", join(diag))?;
            }
            let closed =
                |c: Option<u32>| c.map(|c| format!(" (closed form {c})")).unwrap_or_default();
            writeln!(out, "t: {}{}", inv.t.value, closed(inv.t.closed_form))?;
            writeln!(out, "t witness: {}", join(&inv.t.witness))?;
            let bound = inv
                .m
                .upper_bound
                .map(|u| format!(" (bound {u})"))
                .unwrap_or_default();
            writeln!(
                out,
                "M: {}{}{}",
                inv.m.value,
                closed(inv.m.closed_form),
                bound
            )?;
            writeln!(out, "M witness: {}", join(&inv.m.witness))?;
            Ok(())
        }
        Format::Csv => Err(unsupported("form", format)),
    }
}

pub struct BenchConfig {
    pub dim: Dim,
    pub reps: usize,
    pub limit: usize,
    pub compare_workers: usize,
}

#[derive(Serialize)]
struct BenchRow {
    class: String,
    instances: usize,
    omega: String,
    plain_median_ms: f64,
    plain_p95_ms: f64,
    pruned_median_ms: f64,
    pruned_p95_ms: f64,
    speedup: f64,
    modes_agree: bool,
    workers_agree: bool,
}

fn percentile(sorted: &[f64], pct: f64) -> f64 {
    let i = ((sorted.len() as f64 - 1.0) * pct).round() as usize;
    sorted[i]
}

fn millis(x: f64) -> f64 {
    (x * 1e3).round() / 1e3
}

fn bench_class(ctx: &FieldCtx, b: &Budget, cfg: &BenchConfig) -> Result<BenchRow, Failure> {
    let n = ctx.n();
    let d = cfg.dim.resolve(n);
    if d == 0 || d >= n {
        return Err(Error::DimensionOutOfRange {
            d: d as usize,
            max: n as usize - 1,
        }
        .into());
    }
    let subspaces: Vec<Subspace> = Subspace::all_of_dim(ctx, d as usize)
        .into_iter()
        .take(cfg.limit)
        .collect();
    let base = b.solver().with_workers(1);
    let mut times = [Vec::new(), Vec::new()];
    let mut omegas = std::collections::BTreeSet::new();
    let (mut modes_agree, mut workers_agree) = (true, true);
    for u in &subspaces {
        let g = GraphGU::build_with_budget(ctx, u.clone(), b.max_vertices)?;
        let mut seen = [None, None];
        for (k, dominance) in [false, true].into_iter().enumerate() {
            for _ in 0..cfg.reps {
                let start = Instant::now();
                let res = g.clique_number(&base.clone().with_dominance(dominance))?;
                times[k].push(start.elapsed().as_secs_f64() * 1e3);
                seen[k] = Some(res.omega);
            }
        }
        modes_agree &= seen[0] == seen[1];
        let one = g.clique_number(&base)?;
        let many = g.clique_number(&base.clone().with_workers(cfg.compare_workers))?;
        workers_agree &= one.omega == many.omega && one.witness == many.witness;
        omegas.extend(seen.into_iter().flatten());
    }
    for t in &mut times {
        t.sort_by(f64::total_cmp);
    }
    let [plain, pruned] = times;
    let (pm, qm) = (percentile(&plain, 0.5), percentile(&pruned, 0.5));
    Ok(BenchRow {
        class: format!("q={} n={} d={}", ctx.q(), n, d),
        instances: subspaces.len(),
        omega: join(omegas),
        plain_median_ms: millis(pm),
        plain_p95_ms: millis(percentile(&plain, 0.95)),
        pruned_median_ms: millis(qm),
        pruned_p95_ms: millis(percentile(&pruned, 0.95)),
        speedup: if qm > 0.0 {
            (pm / qm * 100.0).round() / 100.0
        } else {
            1.0
        },
        modes_agree,
        workers_agree,
    })
}

pub fn bench(
    out: Out,
    b: &Budget,
    fields: &[FieldSpec],
    cfg: &BenchConfig,
    format: Format,
) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for &spec in fields {
        let ctx = context(spec)?;
        rows.push(bench_class(&ctx, b, cfg)?);
    }
    match format {
        Format::Json => json(
            out,
            &serde_json::json!({ "schema": SCHEMA, "classes": rows }),
        )?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Human => {
            writeln!(
                out,
                "{:<16} {:>5} {:>8} {:>12} {:>12} {:>12} {:>12} {:>8} {:>6} {:>7}",
                "class",
                "inst",
                "omega",
                "plain med",
                "plain p95",
                "pruned med",
                "pruned p95",
                "speedup",
                "modes",
                "workers"
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:<16} {:>5} {:>8} {:>12.3} {:>12.3} {:>12.3} {:>12.3} {:>8.2} {:>6} {:>7}",
                    r.class,
                    r.instances,
                    r.omega,
                    r.plain_median_ms,
                    r.plain_p95_ms,
                    r.pruned_median_ms,
                    r.pruned_p95_ms,
                    r.speedup,
                    r.modes_agree,
                    r.workers_agree
                )?;
            }
        }
    }
    if rows.iter().all(|r| r.modes_agree && r.workers_agree) {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}
