//! Exact maximum clique by branch and bound with a greedy colouring bound
//! over bitset candidate sets.
//!
//! Vertices are searched in descending-degree order and universal vertices
//! are placed in the clique up front. Root branches can be spread over
//! several workers that share the incumbent size through an atomic; the
//! reported witness is always the lexicographically least maximum clique,
//! recomputed afterwards, so results do not depend on the worker count.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

use super::{bits, BitGraph};
use crate::error::{Error, Result};
use crate::gf::BaseField;
use crate::linalg::Echelon;

const DEADLINE_POLL: u64 = 4096;

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub workers: usize,
    /// Prune extensions that violate the independence structure of maximal
    /// cliques in G_U. Ignored for graphs without field data.
    pub dominance: bool,
    pub deadline: Option<Instant>,
    /// Start the incumbent at the known lower bound for G_U.
    pub seed_lower_bound: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            workers: 1,
            dominance: false,
            deadline: None,
            seed_lower_bound: true,
        }
    }
}

impl SolverOptions {
    pub fn with_dominance(mut self, on: bool) -> Self {
        self.dominance = on;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueResult {
    pub omega: usize,
    /// Sorted vertex list, lexicographically least among maximum cliques.
    pub witness: Vec<usize>,
    /// Branch nodes expanded by the main search.
    pub nodes: u64,
}

/// Per-vertex field data for the structural pruning rule: whether v^2 ∈ U,
/// and the F_q coordinates of v.
pub(crate) struct DominanceInfo<'a> {
    k: &'a BaseField,
    n: usize,
    square_in_u: Vec<bool>,
    coords: Vec<u32>,
}

#[derive(Clone)]
struct DomState {
    /// span of the whole partial clique
    all: Echelon,
    /// span of members whose square lies in U
    v2: Echelon,
}

impl<'a> DominanceInfo<'a> {
    pub(crate) fn new(
        k: &'a BaseField,
        n: usize,
        square_in_u: Vec<bool>,
        coords: Vec<u32>,
    ) -> Self {
        DominanceInfo {
            k,
            n,
            square_in_u,
            coords,
        }
    }

    fn root(&self) -> DomState {
        DomState {
            all: Echelon::new(self.n),
            v2: Echelon::new(self.n),
        }
    }

    /// In a maximal clique the members with square outside U, together with
    /// a basis of the span of the others, are linearly independent. A partial
    /// clique breaking this lies in no maximal clique.
    fn admit(&self, st: &DomState, v: usize) -> Option<DomState> {
        let c = &self.coords[v * self.n..(v + 1) * self.n];
        if self.square_in_u[v] {
            if st.v2.contains(self.k, c) {
                return Some(st.clone());
            }
            if st.all.contains(self.k, c) {
                return None;
            }
            let mut next = st.clone();
            next.all.insert(self.k, c.to_vec());
            next.v2.insert(self.k, c.to_vec());
            Some(next)
        } else {
            if st.all.contains(self.k, c) {
                return None;
            }
            let mut next = st.clone();
            next.all.insert(self.k, c.to_vec());
            Some(next)
        }
    }
}

struct Search<'g> {
    h: &'g BitGraph,
    order: &'g [usize],
    dom: Option<&'g DominanceInfo<'g>>,
    best: &'g AtomicUsize,
    abort: &'g AtomicBool,
    deadline: Option<Instant>,
    nodes: u64,
}

impl Search<'_> {
    /// Greedy sequential colouring; vertices returned in nondecreasing colour.
    fn color_sort(&self, p: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = p.to_vec();
        let mut q = vec![0u64; p.len()];
        let mut order = Vec::with_capacity(bits::count(p));
        let mut colors = Vec::with_capacity(order.capacity());
        let mut color = 0;
        while !bits::is_empty(&uncolored) {
            color += 1;
            q.copy_from_slice(&uncolored);
            while let Some(v) = bits::first(&q) {
                bits::clear(&mut uncolored, v);
                bits::clear(&mut q, v);
                bits::and_not_assign(&mut q, self.h.neighbors(v));
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(DEADLINE_POLL) {
            if self.abort.load(Ordering::Relaxed) {
                return Err(Error::TimeLimit);
            }
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.abort.store(true, Ordering::Relaxed);
                    return Err(Error::TimeLimit);
                }
            }
        }
        Ok(())
    }

    fn admit(&self, st: &Option<DomState>, v: usize) -> Option<Option<DomState>> {
        match (self.dom, st) {
            (Some(d), Some(s)) => d.admit(s, self.order[v]).map(Some),
            _ => Some(None),
        }
    }

    fn expand(&mut self, size: usize, mut p: Vec<u64>, st: Option<DomState>) -> Result<()> {
        self.tick()?;
        let (order, colors) = self.color_sort(&p);
        let mut next = vec![0u64; p.len()];
        for i in (0..order.len()).rev() {
            if size + colors[i] <= self.best.load(Ordering::Relaxed) {
                return Ok(());
            }
            let v = order[i];
            if let Some(child) = self.admit(&st, v) {
                bits::and_into(&mut next, &p, self.h.neighbors(v));
                if bits::is_empty(&next) {
                    self.best.fetch_max(size + 1, Ordering::Relaxed);
                } else {
                    self.expand(size + 1, next.clone(), child)?;
                }
            }
            bits::clear(&mut p, v);
        }
        Ok(())
    }
}

/// Size of a maximum clique of `g`, with the lexicographically least
/// witness. `lower_bound` should be a lower bound on the clique number;
/// if no clique reaching it is found the search is repeated unseeded.
pub fn max_clique(g: &BitGraph, opts: &SolverOptions, lower_bound: usize) -> Result<CliqueResult> {
    solve(g, opts, lower_bound, None)
}

pub(crate) fn solve(
    g: &BitGraph,
    opts: &SolverOptions,
    lower_bound: usize,
    dom: Option<&DominanceInfo<'_>>,
) -> Result<CliqueResult> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok(CliqueResult {
            omega: 0,
            witness: Vec::new(),
            nodes: 0,
        });
    }
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]).then(a.cmp(&b)));
    let h = g.relabeled(&order);

    let forced = order.iter().take_while(|&&v| degrees[v] == n - 1).count();
    let mut root_state = dom.map(DominanceInfo::root);
    if let (Some(d), Some(st)) = (dom, root_state.as_mut()) {
        for &v in &order[..forced] {
            // universal vertices belong to every maximal clique
            if let Some(next) = d.admit(st, v) {
                *st = next;
            }
        }
    }
    let mut p0 = vec![0u64; h.words()];
    for v in forced..n {
        bits::set(&mut p0, v);
    }

    let (mut omega, mut nodes) = run(&h, &order, &p0, forced, lower_bound, dom, &root_state, opts)?;
    if lower_bound > 0 && omega + 1 == lower_bound && omega > forced {
        // seed was not attained: the supplied bound was wrong, search again
        let (o, extra) = run(&h, &order, &p0, forced, 0, dom, &root_state, opts)?;
        omega = o;
        nodes += extra;
    }
    let witness = lex_least_clique(g, omega, opts.deadline)?.ok_or_else(|| {
        Error::StructureViolation(format!("no clique of size {omega} found in witness pass"))
    })?;
    Ok(CliqueResult {
        omega,
        witness,
        nodes,
    })
}

#[allow(clippy::too_many_arguments)]
fn run(
    h: &BitGraph,
    order: &[usize],
    p0: &[u64],
    forced: usize,
    seed: usize,
    dom: Option<&DominanceInfo<'_>>,
    root_state: &Option<DomState>,
    opts: &SolverOptions,
) -> Result<(usize, u64)> {
    let best = AtomicUsize::new(forced.max(seed.saturating_sub(1)));
    if bits::is_empty(p0) {
        return Ok((forced, 0));
    }
    let abort = AtomicBool::new(false);
    let proto = Search {
        h,
        order,
        dom,
        best: &best,
        abort: &abort,
        deadline: opts.deadline,
        nodes: 0,
    };
    let (root_order, root_colors) = proto.color_sort(p0);
    let len = root_order.len();
    let next_task = AtomicUsize::new(0);

    let work = || -> Result<u64> {
        let mut s = Search {
            h,
            order,
            dom,
            best: &best,
            abort: &abort,
            deadline: opts.deadline,
            nodes: 0,
        };
        let mut p = vec![0u64; p0.len()];
        loop {
            let t = next_task.fetch_add(1, Ordering::Relaxed);
            if t >= len {
                break;
            }
            let i = len - 1 - t;
            if forced + root_colors[i] <= best.load(Ordering::Relaxed) {
                continue;
            }
            let v = root_order[i];
            let Some(child) = s.admit(root_state, v) else {
                continue;
            };
            p.copy_from_slice(p0);
            for &w in &root_order[i + 1..] {
                bits::clear(&mut p, w);
            }
            bits::and_assign(&mut p, h.neighbors(v));
            if bits::is_empty(&p) {
                best.fetch_max(forced + 1, Ordering::Relaxed);
            } else {
                s.expand(forced + 1, p.clone(), child)?;
            }
        }
        Ok(s.nodes)
    };

    let workers = opts.workers.max(1);
    let nodes = if workers == 1 {
        work()?
    } else {
        let outcome: Mutex<Result<u64>> = Mutex::new(Ok(0));
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| {
                    let r = work();
                    let mut acc = outcome.lock().expect("worker panicked");
                    match (acc.as_mut(), r) {
                        (Ok(total), Ok(k)) => *total += k,
                        (Ok(_), Err(e)) => *acc = Err(e),
                        (Err(_), _) => {}
                    }
                });
            }
        });
        outcome.into_inner().expect("worker panicked")?
    };
    Ok((best.load(Ordering::Relaxed), nodes))
}

fn color_count(g: &BitGraph, p: &[u64]) -> usize {
    let mut uncolored = p.to_vec();
    let mut q = vec![0u64; p.len()];
    let mut colors = 0;
    while !bits::is_empty(&uncolored) {
        colors += 1;
        q.copy_from_slice(&uncolored);
        while let Some(v) = bits::first(&q) {
            bits::clear(&mut uncolored, v);
            bits::clear(&mut q, v);
            bits::and_not_assign(&mut q, g.neighbors(v));
        }
    }
    colors
}

/// The lexicographically least clique of exactly `k` vertices (as a sorted
/// list), if any.
pub fn lex_least_clique(
    g: &BitGraph,
    k: usize,
    deadline: Option<Instant>,
) -> Result<Option<Vec<usize>>> {
    fn dfs(
        g: &BitGraph,
        c: &mut Vec<usize>,
        mut p: Vec<u64>,
        k: usize,
        deadline: Option<Instant>,
        nodes: &mut u64,
    ) -> Result<bool> {
        if c.len() == k {
            return Ok(true);
        }
        *nodes += 1;
        if (*nodes).is_multiple_of(DEADLINE_POLL) {
            if let Some(d) = deadline {
                if Instant::now() > d {
                    return Err(Error::TimeLimit);
                }
            }
        }
        if c.len() + color_count(g, &p) < k {
            return Ok(false);
        }
        let mut next = vec![0u64; p.len()];
        while c.len() + bits::count(&p) >= k {
            let Some(v) = bits::first(&p) else { break };
            bits::clear(&mut p, v);
            bits::and_into(&mut next, &p, g.neighbors(v));
            c.push(v);
            if dfs(g, c, next.clone(), k, deadline, nodes)? {
                return Ok(true);
            }
            c.pop();
        }
        Ok(false)
    }

    let n = g.vertex_count();
    if k == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut p = vec![0u64; g.words()];
    for v in 0..n {
        bits::set(&mut p, v);
    }
    let mut c = Vec::with_capacity(k);
    let mut nodes = 0;
    Ok(dfs(g, &mut c, p, k, deadline, &mut nodes)?.then_some(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive clique number by subset enumeration (tiny graphs only).
    fn brute_omega(g: &BitGraph) -> usize {
        let n = g.vertex_count();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let vs: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if vs.len() > best && g.is_clique(&vs) {
                best = vs.len();
            }
        }
        best
    }

    fn pseudo_random_graph(n: usize, seed: u64, density: u64) -> BitGraph {
        let mut x = seed;
        BitGraph::from_predicate(n, |_, _| {
            x = x
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (x >> 33) % 100 < density
        })
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        for seed in 0..40 {
            let g = pseudo_random_graph(14, seed, 30 + seed % 50);
            let want = brute_omega(&g);
            for workers in [1, 3] {
                let opts = SolverOptions::default().with_workers(workers);
                let r = max_clique(&g, &opts, 0).unwrap();
                assert_eq!(r.omega, want, "seed {seed}");
                assert!(g.is_clique(&r.witness));
                assert_eq!(r.witness.len(), want);
            }
        }
    }

    #[test]
    fn wrong_seed_is_recovered() {
        let g = pseudo_random_graph(12, 7, 20);
        let want = brute_omega(&g);
        let r = max_clique(&g, &SolverOptions::default(), want + 2).unwrap();
        assert_eq!(r.omega, want);
    }

    #[test]
    fn lex_least_is_least() {
        let g = pseudo_random_graph(13, 3, 60);
        let k = brute_omega(&g);
        let w = lex_least_clique(&g, k, None).unwrap().unwrap();
        let n = g.vertex_count();
        let mut all: Vec<Vec<usize>> = (0u32..(1 << n))
            .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|vs: &Vec<usize>| vs.len() == k && g.is_clique(vs))
            .collect();
        all.sort();
        assert_eq!(w, all[0]);
        assert_eq!(lex_least_clique(&g, k + 1, None).unwrap(), None);
    }

    #[test]
    fn complete_and_empty_graphs() {
        let k5 = BitGraph::from_predicate(5, |_, _| true);
        assert_eq!(
            max_clique(&k5, &SolverOptions::default(), 0).unwrap().omega,
            5
        );
        let e = BitGraph::new(6);
        let r = max_clique(&e, &SolverOptions::default(), 0).unwrap();
        assert_eq!(r.omega, 1);
        assert_eq!(r.witness, vec![0]);
    }

    #[test]
    fn expired_deadline_reports_time_limit() {
        let g = pseudo_random_graph(200, 11, 70);
        let opts = SolverOptions::default().with_deadline(Some(Instant::now()));
        assert_eq!(max_clique(&g, &opts, 0), Err(Error::TimeLimit));
    }
}
