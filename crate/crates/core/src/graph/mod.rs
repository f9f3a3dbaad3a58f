//! The graphs G_U and exact clique machinery over bit-packed adjacency.

mod bits;
mod clique;
mod decompose;
mod maximal;

pub use clique::{lex_least_clique, max_clique, CliqueResult, SolverOptions};
pub use decompose::CliqueDecomposition;
pub use maximal::for_each_maximal_clique;

pub(crate) use clique::{solve, DominanceInfo};

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldCtx};
use crate::linalg::Subspace;

/// Default cap on vertex count for adjacency construction.
pub const DEFAULT_MAX_VERTICES: usize = 65536;
/// Default cap for maximal-clique enumeration.
pub const DEFAULT_MAX_CLIQUES: usize = 1_000_000;

/// Undirected simple graph with one bitset row per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitGraph {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    /// Builds a graph from a symmetric predicate evaluated on pairs u < v.
    pub fn from_predicate(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = BitGraph::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                if edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        bits::count(self.neighbors(v))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n)
            .all(|u| bits::ones(self.neighbors(u)).all(|v| v < self.n && self.has_edge(v, u)))
            && (0..self.n).all(|v| !self.has_edge(v, v))
    }

    /// Graph with vertex i standing for vertex `order[i]` of `self`.
    pub fn relabeled(&self, order: &[usize]) -> BitGraph {
        let mut pos = vec![0usize; self.n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = BitGraph::new(self.n);
        for (i, &v) in order.iter().enumerate() {
            for w in bits::ones(self.neighbors(v)) {
                let j = pos[w];
                g.adj[i * g.words + j / 64] |= 1 << (j % 64);
            }
        }
        g
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &a)| vs[i + 1..].iter().all(|&b| a != b && self.has_edge(a, b)))
    }

    /// A clique that no outside vertex extends.
    pub fn is_maximal_clique(&self, vs: &[usize]) -> bool {
        if !self.is_clique(vs) {
            return false;
        }
        let mut common = vec![u64::MAX; self.words];
        bits::truncate(&mut common, self.n);
        for &v in vs {
            bits::and_assign(&mut common, self.neighbors(v));
        }
        bits::is_empty(&common)
    }
}

/// G_U: vertices are the elements of F_{q^n}, distinct a, b adjacent iff ab ∈ U.
#[derive(Clone, Debug)]
pub struct GraphGU<'a> {
    ctx: &'a FieldCtx,
    subspace: Subspace,
    has_square: bool,
    graph: BitGraph,
}

impl<'a> GraphGU<'a> {
    pub fn build(ctx: &'a FieldCtx, subspace: Subspace) -> Result<Self> {
        Self::build_with_budget(ctx, subspace, DEFAULT_MAX_VERTICES)
    }

    pub fn build_with_budget(
        ctx: &'a FieldCtx,
        subspace: Subspace,
        max_vertices: usize,
    ) -> Result<Self> {
        if subspace.is_zero() {
            return Err(Error::ZeroDimension);
        }
        let size = ctx.size() as usize;
        if size > max_vertices {
            return Err(Error::BudgetExceeded {
                what: "graph",
                size: size as u128,
                limit: max_vertices as u128,
            });
        }
        let members = subspace.elements(ctx)?;
        let inverses: Vec<Elem> = ctx
            .elements()
            .map(|a| ctx.inv(a).unwrap_or(Elem::ZERO))
            .collect();
        let mut graph = BitGraph::new(size);
        for v in 1..size {
            graph.add_edge(0, v);
        }
        // for each u ∈ U \ {0} the pairs with product u are (v, u/v)
        for &u in members.iter().filter(|u| !u.is_zero()) {
            for v in 1..size {
                let w = ctx.mul(u, inverses[v]).0 as usize;
                if w > v {
                    graph.add_edge(v, w);
                }
            }
        }
        let has_square = subspace.contains_nonzero_square(ctx)?;
        Ok(GraphGU {
            ctx,
            subspace,
            has_square,
            graph,
        })
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn graph(&self) -> &BitGraph {
        &self.graph
    }

    pub fn has_nonzero_square(&self) -> bool {
        self.has_square
    }

    pub fn has_edge(&self, a: Elem, b: Elem) -> bool {
        self.graph.has_edge(a.0 as usize, b.0 as usize)
    }

    /// max(3, q + min(1, d_U - 1)) when U holds a nonzero square, else 3.
    pub fn lower_bound(&self) -> usize {
        if self.has_square {
            let d = self.subspace.dim();
            (self.ctx.q() as usize + 1.min(d - 1)).max(3)
        } else {
            3
        }
    }

    pub(crate) fn dominance_info(&self) -> DominanceInfo<'a> {
        let ctx = self.ctx;
        let ech = self.subspace.echelon(ctx);
        let n = ctx.n() as usize;
        let mut coords = Vec::with_capacity(ctx.size() as usize * n);
        let mut square_in_u = Vec::with_capacity(ctx.size() as usize);
        for a in ctx.elements() {
            coords.extend(ctx.coords(a));
            square_in_u.push(ech.contains(ctx.base(), &ctx.coords(ctx.square(a))));
        }
        DominanceInfo::new(ctx.base(), n, square_in_u, coords)
    }

    /// Exact clique number with a lexicographically least witness.
    pub fn clique_number(&self, opts: &SolverOptions) -> Result<CliqueResult> {
        let seed = if opts.seed_lower_bound {
            self.lower_bound()
        } else {
            0
        };
        let dom = opts.dominance.then(|| self.dominance_info());
        solve(&self.graph, opts, seed, dom.as_ref())
    }

    pub fn witness_elems(result: &CliqueResult) -> Vec<Elem> {
        result.witness.iter().map(|&v| Elem(v as u32)).collect()
    }

    /// Calls `f` on every maximal clique; fails once more than `cap` are seen.
    pub fn maximal_cliques(&self, cap: usize, mut f: impl FnMut(&[Elem])) -> Result<usize> {
        let mut buf = Vec::new();
        for_each_maximal_clique(&self.graph, cap, |c| {
            buf.clear();
            buf.extend(c.iter().map(|&v| Elem(v as u32)));
            buf.sort_unstable();
            f(&buf);
        })
    }

    pub fn decompose(&self, clique: &[Elem]) -> Result<CliqueDecomposition> {
        CliqueDecomposition::of(self, clique)
    }
}
