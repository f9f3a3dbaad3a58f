//! Instance sweeps that reconcile exact clique numbers with the closed forms
//! and bounds, grouped into named suites.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{special_basis, Form};
use crate::gf::{prime_power, Elem, FieldCtx};
use crate::graph::{GraphGU, SolverOptions, DEFAULT_MAX_CLIQUES};
use crate::linalg::Subspace;
use crate::theorems::{
    census_class_size, check_bounds, hyperplane_omega, in_proper_subfield, omega_qn, predict_omega,
    q2_plane_clique_shape, sum_product_check,
};

pub const SCHEMA: u32 = 1;

/// (q, n) pairs.
pub type Grid = Vec<(u64, u32)>;

pub fn field(q: u64, n: u32) -> Result<FieldCtx> {
    let (p, m) = prime_power(q).ok_or_else(|| Error::Parse(format!("{q} is not a prime power")))?;
    FieldCtx::new(p, m, n)
}

pub fn hyperplane_grid() -> Grid {
    let mut g: Grid = (2..=6).map(|n| (2, n)).collect();
    g.extend((2..=4).map(|n| (3, n)));
    g.extend([(4, 2), (4, 3), (5, 2), (7, 2), (9, 2), (3, 5)]);
    g
}

pub fn low_dimension_grid() -> Grid {
    let mut g = Grid::new();
    for q in [2u64, 3, 4, 5] {
        for n in 2..=4 {
            if q.pow(n) <= 1024 {
                g.push((q, n));
            }
        }
    }
    g
}

/// Every (q, n) with q^n ≤ limit.
pub fn fields_up_to(limit: u64) -> Grid {
    let mut g = Grid::new();
    for q in 2..=limit {
        if prime_power(q).is_none() {
            continue;
        }
        let mut n = 2;
        while q.pow(n) <= limit {
            g.push((q, n));
            n += 1;
        }
    }
    g
}

pub fn forms_grid() -> Grid {
    vec![(3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (5, 4)]
}

pub fn census_grid() -> Grid {
    vec![(3, 2), (5, 2), (3, 4)]
}

pub fn sum_product_grid() -> Grid {
    vec![
        (2, 4),
        (4, 2),
        (2, 6),
        (8, 2),
        (3, 4),
        (9, 2),
        (2, 8),
        (4, 4),
        (16, 2),
    ]
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub instances: u64,
    pub passes: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport {
            schema: SCHEMA,
            suite: suite.into(),
            ..Default::default()
        }
    }

    /// Records one instance; `problems` empty means it passed.
    pub fn record(&mut self, label: impl fmt::Display, problems: Vec<String>) {
        self.instances += 1;
        if problems.is_empty() {
            self.passes += 1;
        } else {
            for p in problems {
                self.failures.push(format!("{label}: {p}"));
            }
        }
    }

    pub fn check(&mut self, label: impl fmt::Display, ok: bool, problem: impl FnOnce() -> String) {
        self.record(label, if ok { Vec::new() } else { vec![problem()] });
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.instances += other.instances;
        self.passes += other.passes;
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} instances, {} passed, {} failed",
            self.suite,
            self.instances,
            self.passes,
            self.instances - self.passes
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Main,
    Main1,
    Main3,
    PropBasic,
    NMinus1,
    Crucial,
    Basis,
    TraceEquiv,
    SumProduct,
    Census,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Main,
        Suite::Main1,
        Suite::Main3,
        Suite::PropBasic,
        Suite::NMinus1,
        Suite::Crucial,
        Suite::Basis,
        Suite::TraceEquiv,
        Suite::SumProduct,
        Suite::Census,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Main => "main",
            Suite::Main1 => "main1",
            Suite::Main3 => "main3",
            Suite::PropBasic => "prop-basic",
            Suite::NMinus1 => "n-1",
            Suite::Crucial => "crucial",
            Suite::Basis => "basis",
            Suite::TraceEquiv => "trace-equiv",
            Suite::SumProduct => "sumproduct",
            Suite::Census => "census",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub qmax: Option<u64>,
    pub nmax: Option<u32>,
    pub solver: SolverOptions,
    pub max_cliques: usize,
    pub max_vertices: usize,
    pub seed: u64,
    pub sum_product_pairs: usize,
    /// λ values tried per field by the form suites when q^n is large
    pub form_sample: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            qmax: None,
            nmax: None,
            solver: SolverOptions::default(),
            max_cliques: DEFAULT_MAX_CLIQUES,
            max_vertices: crate::graph::DEFAULT_MAX_VERTICES,
            seed: 1,
            sum_product_pairs: 1000,
            form_sample: 50,
        }
    }
}

impl SuiteConfig {
    fn filter(&self, grid: Grid) -> Grid {
        grid.into_iter()
            .filter(|&(q, n)| self.qmax.is_none_or(|m| q <= m) && self.nmax.is_none_or(|m| n <= m))
            .collect()
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut report = match suite {
        Suite::Main => omega_qn_sweep(&cfg.filter(hyperplane_grid()), cfg)?,
        Suite::NMinus1 => hyperplane_sweep(&cfg.filter(hyperplane_grid()), cfg)?,
        Suite::PropBasic => low_dimension_sweep(&cfg.filter(low_dimension_grid()), cfg)?,
        Suite::Main1 => structure_sweep(&cfg.filter(fields_up_to(256)), cfg)?,
        Suite::Main3 => bounds_sweep(&cfg.filter(fields_up_to(256)), cfg)?,
        Suite::Crucial => form_invariant_sweep(&cfg.filter(forms_grid()), cfg)?,
        Suite::Basis => special_basis_sweep(&cfg.filter(fields_up_to(625)))?,
        Suite::TraceEquiv => trace_equivalence_sweep(&cfg.filter(forms_grid()))?,
        Suite::SumProduct => sum_product_audit(&cfg.filter(sum_product_grid()), cfg)?,
        Suite::Census => census_sweep(&cfg.filter(census_grid()), cfg)?,
    };
    report.suite = suite.name().to_string();
    Ok(report)
}

fn exact_omega(ctx: &FieldCtx, u: &Subspace, cfg: &SuiteConfig) -> Result<u64> {
    let g = GraphGU::build_with_budget(ctx, u.clone(), cfg.max_vertices)?;
    Ok(g.clique_number(&cfg.solver)?.omega as u64)
}

/// One hyperplane with its s-invariant (when defined) and exact ω.
#[derive(Clone, Debug)]
pub struct HyperplaneRow {
    pub subspace: Subspace,
    pub s: Option<i8>,
    pub omega: u64,
}

pub fn hyperplane_rows(ctx: &FieldCtx, cfg: &SuiteConfig) -> Result<Vec<HyperplaneRow>> {
    let odd_even = !ctx.is_even() && ctx.n().is_multiple_of(2);
    Subspace::all_hyperplanes(ctx)
        .into_iter()
        .map(|(_, u)| {
            let s = if odd_even {
                Some(u.s_invariant(ctx)?)
            } else {
                None
            };
            let omega = exact_omega(ctx, &u, cfg)?;
            Ok(HyperplaneRow {
                subspace: u,
                s,
                omega,
            })
        })
        .collect()
}

/// Exact ω of every hyperplane against the hyperplane case table.
pub fn hyperplane_sweep(grid: &Grid, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("n-1");
    for &(q, n) in grid {
        let ctx = field(q, n)?;
        for row in hyperplane_rows(&ctx, cfg)? {
            let want = hyperplane_omega(q, n, row.s)?;
            r.check(
                format_args!("q={q} n={n} U={}", row.subspace),
                row.omega == want,
                || format!("exact {} vs formula {want}", row.omega),
            );
        }
    }
    Ok(r)
}

/// max over hyperplanes of exact ω against ω_{q,n}.
pub fn omega_qn_sweep(grid: &Grid, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("main");
    for &(q, n) in grid {
        let ctx = field(q, n)?;
        let best = hyperplane_rows(&ctx, cfg)?
            .iter()
            .map(|h| h.omega)
            .max()
            .unwrap_or(0);
        let want = omega_qn(q, n);
        r.check(format_args!("q={q} n={n}"), best == want, || {
            format!("max exact {best} vs ω_(q,n) {want}")
        });
    }
    Ok(r)
}

/// Every subspace of dimension 1 and 2 (proper) against the exact
/// dimension-1/2 predictions.
pub fn low_dimension_sweep(grid: &Grid, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("prop-basic");
    for &(q, n) in grid {
        let ctx = field(q, n)?;
        for d in (1..=2).filter(|&d| d < n as usize) {
            for u in Subspace::all_of_dim(&ctx, d) {
                let want = predict_omega(&ctx, &u)?
                    .exact_value()
                    .expect("dimensions 1 and 2 have exact predictions");
                let got = exact_omega(&ctx, &u, cfg)?;
                r.check(format_args!("q={q} n={n} U={u}"), got == want, || {
                    format!("exact {got} vs predicted {want}")
                });
            }
        }
    }
    Ok(r)
}

/// An orbit of subspaces under U -> a^2 U^{p^k}; these maps induce graph
/// isomorphisms G_U -> G_{a^2 U^{p^k}} given by x -> a x^{p^k}.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub rep: Subspace,
    pub size: usize,
}

/// Splits the given subspaces into orbits; representatives are the least
/// member of each orbit in the input order.
pub fn subspace_orbits(ctx: &FieldCtx, subspaces: &[Subspace]) -> Vec<Orbit> {
    // scalings by F_q^* fix every subspace, so one square per coset suffices
    let mut seen_scalar = HashSet::new();
    let squares: Vec<Elem> = ctx
        .nonzero()
        .map(|a| ctx.square(a))
        .filter(|&s| {
            let key = Subspace::span(ctx, [s]);
            seen_scalar.insert(key)
        })
        .collect();
    let degree = ctx.m() * ctx.n();
    let mut visited: HashSet<Subspace> = HashSet::new();
    let mut out = Vec::new();
    for u in subspaces {
        if visited.contains(u) {
            continue;
        }
        let mut size = 0;
        for k in 0..degree {
            let f = u.frobenius_image(ctx, k);
            for &a in &squares {
                if visited.insert(f.scaled(ctx, a)) {
                    size += 1;
                }
            }
        }
        out.push(Orbit {
            rep: u.clone(),
            size,
        });
    }
    out
}

/// All proper nonzero subspaces, grouped into orbits.
pub fn all_subspace_orbits(ctx: &FieldCtx) -> Vec<Orbit> {
    let mut all = Vec::new();
    for d in 1..ctx.n() as usize {
        all.extend(Subspace::all_of_dim(ctx, d));
    }
    subspace_orbits(ctx, &all)
}

/// Decomposition of every maximal clique of G_U.
pub fn check_structure(ctx: &FieldCtx, u: &Subspace, cfg: &SuiteConfig) -> Result<Vec<String>> {
    let g = GraphGU::build_with_budget(ctx, u.clone(), cfg.max_vertices)?;
    let mut bad = Vec::new();
    let mut first_err = None;
    let res = g.maximal_cliques(cfg.max_cliques, |c| {
        if first_err.is_some() {
            return;
        }
        match g.decompose(c) {
            Ok(_) => {}
            Err(Error::StructureViolation(msg)) => bad.push(msg),
            Err(e) => first_err = Some(e),
        }
        if !c.contains(&Elem::ZERO) {
            bad.push("maximal clique without 0".into());
        }
    });
    if let Some(e) = first_err {
        return Err(e);
    }
    match res {
        Ok(_) => {}
        Err(Error::CapExceeded(cap)) => bad.push(format!("more than {cap} maximal cliques")),
        Err(e) => return Err(e),
    }
    bad.truncate(5);
    Ok(bad)
}

/// Every maximal clique of every subspace (one per isomorphism orbit).
pub fn structure_sweep(grid: &Grid, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("main1");
    for &(q, n) in grid {
        let ctx = field(q, n)?;
        for orbit in all_subspace_orbits(&ctx) {
            let bad = check_structure(&ctx, &orbit.rep, cfg)?;
            r.record(format_args!("q={q} n={n} U={}", orbit.rep), bad);
        }
    }
    Ok(r)
}

/// Bounds and predictions for one subspace against its exact ω.
pub fn check_subspace_bounds(
    ctx: &FieldCtx,
    u: &Subspace,
    cfg: &SuiteConfig,
) -> Result<(u64, Vec<String>)> {
    let g = GraphGU::build_with_budget(ctx, u.clone(), cfg.max_vertices)?;
    let res = g.clique_number(&cfg.solver)?;
    let omega = res.omega as u64;
    let mut bad = check_bounds(ctx, u, omega)?;
    let pred = predict_omega(ctx, u)?;
    if !pred.admits(omega) {
        bad.push(format!("prediction {pred} excludes exact {omega}"));
    }
    if ctx.q() == 2 && u.dim() == 2 {
        let witness = GraphGU::witness_elems(&res);
        if !q2_plane_clique_shape(ctx, u, &witness)? {
            bad.push(format!(
                "maximum clique {witness:?} lacks the q = d = 2 shape"
            ));
        }
    }
    Ok((omega, bad))
}

pub fn bounds_sweep(grid: &Grid, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("main3");
    for &(q, n) in grid {
        let ctx = field(q, n)?;
        for orbit in all_subspace_orbits(&ctx) {
            let (_, bad) = check_subspace_bounds(&ctx, &orbit.rep, cfg)?;
            r.record(format_args!("q={q} n={n} U={}", orbit.rep), bad);
        }
    }
    Ok(r)
}

/// The λ values to test: all of F_{q^n}^* when there are at most `sample`
/// of them, else `sample` seeded draws.
pub fn lambda_sample(ctx: &FieldCtx, sample_size: usize, seed: u64) -> Vec<Elem> {
    let total = ctx.size() as usize - 1;
    if total <= sample_size {
        return ctx.nonzero().collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ctx.size() as u64);
    let mut picked: Vec<Elem> = sample(&mut rng, total, sample_size)
        .into_iter()
        .map(|i| Elem(i as u32 + 1))
        .collect();
    picked.sort_unstable();
    picked
}

/// t(B_λ) and M_B by search against the closed forms (odd q) or bounds
/// (even q).
pub fn form_invariant_sweep(grid: &Grid, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("crucial");
    for &(q, n) in grid {
        let ctx = field(q, n)?;
        for lambda in lambda_sample(&ctx, cfg.form_sample, cfg.seed) {
            let form = Form::trace(&ctx, lambda)?;
            let t = form.t_invariant()?;
            let m = form.m_invariant(&t, &cfg.solver)?;
            let mut bad = Vec::new();
            if !form.is_totally_isotropic(&t.witness)
                || Subspace::span(&ctx, t.witness.iter().copied()).dim() != t.value as usize
            {
                bad.push("isotropic witness does not check".into());
            }
            if 2 * t.value > n {
                bad.push(format!("t = {} exceeds n/2", t.value));
            }
            if let Some(tc) = t.closed_form {
                if tc != t.value {
                    bad.push(format!("t search {} vs closed form {tc}", t.value));
                }
            }
            if let Some(mc) = m.closed_form {
                if mc != m.value {
                    bad.push(format!("M search {} vs closed form {mc}", m.value));
                }
            }
            if let Some(ub) = m.upper_bound {
                if m.value > ub {
                    bad.push(format!("M search {} above bound {ub}", m.value));
                }
            }
            let pairwise = m
                .witness
                .iter()
                .enumerate()
                .all(|(i, &a)| m.witness[i + 1..].iter().all(|&b| form.eval(a, b) == 0));
            if !pairwise || m.witness.len() != m.value as usize {
                bad.push("orthogonal set witness does not check".into());
            }
            r.record(format_args!("q={q} n={n} λ={lambda}"), bad);
        }
    }
    Ok(r)
}

/// χ(B_λ) = χ(B_1) exactly when λ is a square, for every λ.
pub fn trace_equivalence_sweep(grid: &Grid) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("trace-equiv");
    for &(q, n) in grid {
        let ctx = field(q, n)?;
        if ctx.is_even() {
            continue;
        }
        let base = Form::trace(&ctx, Elem::ONE)?.chi()?;
        for lambda in ctx.nonzero() {
            let form = Form::trace(&ctx, lambda)?;
            let chi = form.chi()?;
            let same = chi == base;
            let square = ctx.is_square_full(lambda);
            let by_det = form.chi_by_determinant()?;
            r.check(
                format_args!("q={q} n={n} λ={lambda}"),
                same == square && by_det == chi,
                || {
                    format!(
                        "χ(B_λ) = {chi}, χ(B_1) = {base}, λ square: {square}, χ(det) = {by_det}"
                    )
                },
            );
        }
    }
    Ok(r)
}

pub fn special_basis_sweep(grid: &Grid) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("basis");
    for &(q, n) in grid {
        let ctx = field(q, n)?;
        let label = format!("q={q} n={n}");
        match special_basis(&ctx) {
            Ok(b) => {
                let expect_one = q % 2 == 0 || n % 2 == 1;
                let ok = if expect_one {
                    b.mu == 1
                } else {
                    !ctx.base().is_square(b.mu)
                };
                r.check(label, ok, || {
                    format!("μ = {} has the wrong square class", b.mu)
                });
            }
            Err(e) => r.record(label, vec![e.to_string()]),
        }
    }
    Ok(r)
}

/// Draws `count` pairs (A, B) meeting the preconditions per field and
/// checks the sum-product inequality on each.
pub fn sum_product_audit(grid: &Grid, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("sumproduct");
    for &(q, n) in grid {
        let ctx = field(q, n)?;
        let size = ctx.size() as usize;
        let mut rng =
            ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9) ^ size as u64 ^ q << 32);
        let cap = size.min(48);
        let mut done = 0;
        while done < cfg.sum_product_pairs {
            let na = rng.gen_range(2..=cap);
            let nb = rng.gen_range(1..=cap);
            let a: Vec<Elem> = sample(&mut rng, size, na)
                .into_iter()
                .map(|i| Elem(i as u32))
                .collect();
            let b: Vec<Elem> = sample(&mut rng, size, nb)
                .into_iter()
                .map(|i| Elem(i as u32))
                .collect();
            if in_proper_subfield(&ctx, &b) {
                continue;
            }
            done += 1;
            let rep = sum_product_check(&ctx, &a, &b)?;
            r.check(
                format_args!("q={q} n={n} |A|={na} |B|={nb}"),
                rep.holds,
                || format!("lhs {} vs rhs {:.4}", rep.lhs, rep.rhs_approx),
            );
        }
    }
    Ok(r)
}

/// Both s-classes of hyperplanes have (q^n - 1)/(2(q - 1)) members and a
/// single exact ω each.
pub fn census_sweep(grid: &Grid, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("census");
    for &(q, n) in grid {
        let ctx = field(q, n)?;
        if ctx.is_even() || n % 2 == 1 {
            continue;
        }
        let mut classes: BTreeMap<i8, (u64, BTreeSet<u64>)> = BTreeMap::new();
        for row in hyperplane_rows(&ctx, cfg)? {
            let e = classes.entry(row.s.expect("odd q, even n")).or_default();
            e.0 += 1;
            e.1.insert(row.omega);
        }
        let want = census_class_size(q, n);
        for s in [1i8, -1] {
            let (count, omegas) = classes.get(&s).cloned().unwrap_or_default();
            let mut bad = Vec::new();
            if count != want {
                bad.push(format!("{count} members, expected {want}"));
            }
            if omegas.len() != 1 {
                bad.push(format!("ω not constant on the class: {omegas:?}"));
            }
            r.record(format_args!("q={q} n={n} s={s}"), bad);
        }
    }
    Ok(r)
}

/// ω under every combination of dominance on/off and the given worker
/// counts must coincide.
pub fn solver_agreement(
    ctx: &FieldCtx,
    u: &Subspace,
    workers: &[usize],
    max_vertices: usize,
) -> Result<Vec<String>> {
    let g = GraphGU::build_with_budget(ctx, u.clone(), max_vertices)?;
    let mut seen = BTreeMap::new();
    for dominance in [false, true] {
        for &w in workers {
            let opts = SolverOptions::default()
                .with_dominance(dominance)
                .with_workers(w);
            let res = g.clique_number(&opts)?;
            seen.insert((dominance, w), (res.omega, res.witness));
        }
    }
    let first = seen.values().next().cloned();
    Ok(seen
        .iter()
        .filter(|(_, v)| Some(*v) != first.as_ref())
        .map(|((dom, w), (o, _))| {
            format!("dominance={dom} workers={w} gave ω={o}, witness differs or ω differs")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(hyperplane_grid().len(), 14);
        assert_eq!(low_dimension_grid().len(), 12);
        let small = fields_up_to(256);
        assert!(small.contains(&(2, 8)) && small.contains(&(16, 2)) && small.contains(&(3, 5)));
        assert!(!small.contains(&(6, 2)));
    }

    #[test]
    fn orbits_partition() {
        let ctx = field(2, 4).unwrap();
        let all: Vec<Subspace> = (1..4).flat_map(|d| Subspace::all_of_dim(&ctx, d)).collect();
        let orbits = subspace_orbits(&ctx, &all);
        assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), all.len());
    }

    #[test]
    fn report_counts() {
        let mut r = SuiteReport::new("x");
        r.check("a", true, || unreachable!());
        r.check("b", false, || "bad".into());
        assert_eq!((r.instances, r.passes), (2, 1));
        assert_eq!(r.failures, vec!["b: bad".to_string()]);
        assert!(!r.ok());
    }
}
