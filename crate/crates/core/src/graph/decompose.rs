//! Splitting a maximal clique C of G_U into V2 = {α ∈ C : α² ∈ U} and
//! V1 = C \ V2, with the structural checks that split must pass.

use serde::Serialize;

use super::GraphGU;
use crate::error::{Error, Result};
use crate::gf::Elem;
use crate::linalg::Subspace;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueDecomposition {
    #[serde(skip)]
    pub v2: Subspace,
    pub v2_elems: Vec<Elem>,
    pub v1: Vec<Elem>,
    #[serde(skip)]
    pub w: Subspace,
    /// |V2| = q^t
    pub t: u32,
    /// |V1|
    pub r: u32,
}

impl CliqueDecomposition {
    pub fn of(g: &GraphGU<'_>, clique: &[Elem]) -> Result<Self> {
        let ctx = g.ctx();
        let u = g.subspace();
        let verts: Vec<usize> = clique.iter().map(|e| e.0 as usize).collect();
        if !g.graph().is_maximal_clique(&verts) {
            return Err(Error::NotMaximal);
        }
        let violation = |msg: String| Err(Error::StructureViolation(msg));

        let (mut v2_elems, mut v1): (Vec<Elem>, Vec<Elem>) = clique
            .iter()
            .copied()
            .partition(|&a| u.contains(ctx, ctx.square(a)));
        v2_elems.sort_unstable();
        v1.sort_unstable();

        // V2 must be a subspace: its span has exactly |V2| elements and all of
        // them are in V2.
        let v2 = Subspace::span(ctx, v2_elems.iter().copied());
        let t = v2.dim() as u32;
        if v2.cardinality(ctx) != v2_elems.len() as u64 {
            return violation(format!(
                "V2 has {} elements but spans a space of dimension {t}",
                v2_elems.len()
            ));
        }
        for x in v2.elements(ctx)? {
            if v2_elems.binary_search(&x).is_err() {
                return violation(format!("V2 is not closed: {x} missing"));
            }
        }

        let w = Subspace::span(ctx, v1.iter().copied());
        if w.dim() != v1.len() {
            return violation(format!("V1 has {} elements but rank {}", v1.len(), w.dim()));
        }
        if w.sum(ctx, &v2).dim() != w.dim() + v2.dim() {
            return violation("span(V1) meets V2 nontrivially".into());
        }

        let r = v1.len() as u32;
        let d = u.dim() as u32;
        let count_ok = if t == 0 { r <= d + 1 } else { r + t <= d };
        if !count_ok {
            return violation(format!(
                "count constraint fails: t = {t}, r = {r}, d_U = {d}"
            ));
        }
        Ok(CliqueDecomposition {
            v2,
            v2_elems,
            v1,
            w,
            t,
            r,
        })
    }

    pub fn size(&self) -> usize {
        self.v2_elems.len() + self.v1.len()
    }
}
