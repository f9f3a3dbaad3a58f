//! F_q-linear algebra inside F_{q^n}.
//!
//! Everything is expressed in the fixed polynomial basis 1, y, ..., y^{n-1}.
//! A [`Subspace`] stores its reduced row echelon basis with the pivot of each
//! row at its lowest nonzero coordinate, so two subspaces are equal exactly
//! when their stored bases are equal.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::{divisors, BaseField, Elem, FieldCtx, FieldOps};

/// Cap on the number of elements materialised by [`Subspace::elements`].
pub const ENUM_BUDGET: u64 = 1 << 24;

/// Incremental reduced row echelon form over F_q.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    n: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub(crate) fn new(n: usize) -> Self {
        Echelon {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub(crate) fn reduce(&self, k: &BaseField, v: &mut [u32]) {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *x = k.sub(*x, k.mul(c, r));
                    }
                }
            }
        }
    }

    pub(crate) fn contains(&self, k: &BaseField, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(k, &mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds a vector; returns false when it was already in the span.
    pub(crate) fn insert(&mut self, k: &BaseField, mut v: Vec<u32>) -> bool {
        debug_assert_eq!(v.len(), self.n);
        self.reduce(k, &mut v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let s = k.inv(v[piv]);
        for x in v.iter_mut() {
            *x = k.mul(*x, s);
        }
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                for (r, &x) in row.iter_mut().zip(&v) {
                    if x != 0 {
                        *r = k.sub(*r, k.mul(c, x));
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&p| p < piv);
        self.pivots.insert(pos, piv);
        self.rows.insert(pos, v);
        true
    }
}

/// An F_q-subspace of F_{q^n} in canonical echelon form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: Vec<Elem>,
}

impl Subspace {
    pub fn zero() -> Self {
        Subspace { basis: Vec::new() }
    }

    pub fn full(ctx: &FieldCtx) -> Self {
        let n = ctx.n() as usize;
        let basis = (0..n)
            .map(|j| {
                let mut c = vec![0; n];
                c[j] = 1;
                ctx.from_coords(&c)
            })
            .collect();
        Subspace { basis }
    }

    pub fn span<I: IntoIterator<Item = Elem>>(ctx: &FieldCtx, gens: I) -> Self {
        let mut ech = Echelon::new(ctx.n() as usize);
        for g in gens {
            if ech.rank() == ech.n {
                break;
            }
            ech.insert(ctx.base(), ctx.coords(g));
        }
        Self::from_echelon(ctx, &ech)
    }

    pub(crate) fn from_echelon(ctx: &FieldCtx, ech: &Echelon) -> Self {
        Subspace {
            basis: ech.rows().iter().map(|r| ctx.from_coords(r)).collect(),
        }
    }

    pub(crate) fn echelon(&self, ctx: &FieldCtx) -> Echelon {
        let n = ctx.n() as usize;
        let mut ech = Echelon::new(n);
        for &b in &self.basis {
            let c = ctx.coords(b);
            let piv = c.iter().position(|&x| x != 0).expect("nonzero basis row");
            ech.pivots.push(piv);
            ech.rows.push(c);
        }
        ech
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn cardinality(&self, ctx: &FieldCtx) -> u64 {
        (ctx.q() as u64).pow(self.dim() as u32)
    }

    pub fn contains(&self, ctx: &FieldCtx, x: Elem) -> bool {
        if x.is_zero() {
            return true;
        }
        self.echelon(ctx).contains(ctx.base(), &ctx.coords(x))
    }

    pub fn contains_subspace(&self, ctx: &FieldCtx, other: &Subspace) -> bool {
        let ech = self.echelon(ctx);
        other
            .basis
            .iter()
            .all(|&b| ech.contains(ctx.base(), &ctx.coords(b)))
    }

    pub fn sum(&self, ctx: &FieldCtx, other: &Subspace) -> Subspace {
        Subspace::span(ctx, self.basis.iter().chain(&other.basis).copied())
    }

    /// All elements, ordered lexicographically by coordinates at the pivot
    /// columns (first basis vector most significant).
    pub fn elements(&self, ctx: &FieldCtx) -> Result<Vec<Elem>> {
        let count = self.cardinality(ctx);
        if count > ENUM_BUDGET {
            return Err(Error::BudgetExceeded {
                what: "subspace enumeration",
                size: count as u128,
                limit: ENUM_BUDGET as u128,
            });
        }
        let q = ctx.q();
        let d = self.dim();
        let scaled: Vec<Vec<Elem>> = self
            .basis
            .iter()
            .map(|&b| (0..q).map(|c| ctx.scale(c, b)).collect())
            .collect();
        let mut out = Vec::with_capacity(count as usize);
        let mut digits = vec![0u32; d];
        for _ in 0..count {
            let x = digits.iter().enumerate().fold(Elem::ZERO, |acc, (i, &c)| {
                ctx.add(acc, scaled[i][c as usize])
            });
            out.push(x);
            // last basis vector varies fastest
            for i in (0..d).rev() {
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
            }
        }
        Ok(out)
    }

    /// The image a·U.
    pub fn scaled(&self, ctx: &FieldCtx, a: Elem) -> Subspace {
        Subspace::span(ctx, self.basis.iter().map(|&b| ctx.mul(a, b)))
    }

    /// The image of U under x -> x^{p^k}.
    pub fn frobenius_image(&self, ctx: &FieldCtx, k: u32) -> Subspace {
        Subspace::span(ctx, self.basis.iter().map(|&b| ctx.frobenius_abs(b, k)))
    }

    /// ker(x -> Tr(c x)), a hyperplane equal to c^{-1} U_{q,n}.
    pub fn hyperplane_from_functional(ctx: &FieldCtx, c: Elem) -> Result<Subspace> {
        if c.is_zero() {
            return Err(Error::ZeroFunctional);
        }
        let n = ctx.n() as usize;
        let row: Vec<u32> = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                ctx.trace(ctx.mul(c, ctx.from_coords(&e))).0
            })
            .collect();
        let m = FqMatrix::from_rows(vec![row]);
        let kernel = m.nullspace(ctx.base());
        Ok(Subspace::span(
            ctx,
            kernel.iter().map(|v| ctx.from_coords(v)),
        ))
    }

    /// The trace-zero hyperplane U_{q,n}.
    pub fn trace_kernel(ctx: &FieldCtx) -> Subspace {
        Self::hyperplane_from_functional(ctx, Elem::ONE).expect("1 is nonzero")
    }

    /// Every hyperplane once, tagged with δ such that U = δ·U_{q,n}.
    /// Functionals c are taken with leading coordinate 1, in index order.
    pub fn all_hyperplanes(ctx: &FieldCtx) -> Vec<(Elem, Subspace)> {
        ctx.nonzero()
            .filter(|&c| ctx.coords(c).into_iter().find(|&x| x != 0) == Some(1))
            .map(|c| {
                let delta = ctx.inv(c).expect("nonzero");
                let u = Self::hyperplane_from_functional(ctx, c).expect("nonzero");
                (delta, u)
            })
            .collect()
    }

    /// Every subspace of dimension d, enumerated directly as echelon forms.
    pub fn all_of_dim(ctx: &FieldCtx, d: usize) -> Vec<Subspace> {
        let n = ctx.n() as usize;
        let q = ctx.q();
        let mut out = Vec::new();
        if d > n {
            return out;
        }
        for pivots in combinations(n, d) {
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(i, &p)| {
                    let pv = &pivots;
                    ((p + 1)..n)
                        .filter(move |j| !pv.contains(j))
                        .map(move |j| (i, j))
                })
                .collect();
            let total = (q as u64).pow(free.len() as u32);
            let mut vals = vec![0u32; free.len()];
            for _ in 0..total {
                let mut rows = vec![vec![0u32; n]; d];
                for (i, &p) in pivots.iter().enumerate() {
                    rows[i][p] = 1;
                }
                for (&(i, j), &v) in free.iter().zip(&vals) {
                    rows[i][j] = v;
                }
                out.push(Subspace {
                    basis: rows.iter().map(|r| ctx.from_coords(r)).collect(),
                });
                for v in vals.iter_mut().rev() {
                    *v += 1;
                    if *v < q {
                        break;
                    }
                    *v = 0;
                }
            }
        }
        out.sort();
        out
    }

    /// Whether U contains a nonzero square of F_{q^n}.
    pub fn contains_nonzero_square(&self, ctx: &FieldCtx) -> Result<bool> {
        if self.is_zero() {
            return Ok(false);
        }
        if ctx.is_even() {
            return Ok(true);
        }
        // more nonzero elements than nonsquares
        if self.cardinality(ctx) - 1 > (ctx.size() as u64 - 1) / 2 {
            return Ok(true);
        }
        Ok(self
            .elements(ctx)?
            .into_iter()
            .any(|u| !u.is_zero() && ctx.is_square_full(u)))
    }

    /// D_U together with a square w = a^2 such that w·F_{q^{D_U}} ⊆ U.
    pub fn d_invariant_with_witness(&self, ctx: &FieldCtx) -> Result<(u32, Elem)> {
        let squares: Vec<Elem> = if self.is_zero() {
            Vec::new()
        } else {
            self.elements(ctx)?
                .into_iter()
                .filter(|&u| !u.is_zero() && ctx.is_square_full(u))
                .collect()
        };
        if squares.is_empty() {
            return Err(Error::NoNonzeroSquare);
        }
        let ech = self.echelon(ctx);
        for d in divisors(ctx.n()).into_iter().rev() {
            if d as usize > self.dim() {
                continue;
            }
            let sub_basis = Subspace::span(ctx, ctx.subfield_elements(d)?);
            for &w in &squares {
                let inside = sub_basis
                    .basis
                    .iter()
                    .all(|&b| ech.contains(ctx.base(), &ctx.coords(ctx.mul(w, b))));
                if inside {
                    return Ok((d, w));
                }
            }
        }
        unreachable!("d = 1 always succeeds once U holds a nonzero square")
    }

    /// Greatest divisor d of n with a^2 F_{q^d} ⊆ U for some a ≠ 0.
    pub fn d_invariant(&self, ctx: &FieldCtx) -> Result<u32> {
        self.d_invariant_with_witness(ctx).map(|(d, _)| d)
    }

    /// Whether U = a^2 F_{q^{d_U}} for some a ≠ 0 (needs d_U | n).
    pub fn is_scaled_subfield(&self, ctx: &FieldCtx) -> Result<bool> {
        if self.is_zero() || !ctx.n().is_multiple_of(self.dim() as u32) {
            return Ok(false);
        }
        match self.d_invariant(ctx) {
            Ok(d) => Ok(d as usize == self.dim()),
            Err(Error::NoNonzeroSquare) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// For a hyperplane, the functional c with U = ker Tr(c·), normalised to
    /// leading coordinate 1.
    pub fn trace_functional(&self, ctx: &FieldCtx) -> Result<Elem> {
        let n = ctx.n() as usize;
        if self.dim() + 1 != n {
            return Err(Error::WrongDimension {
                expected: n - 1,
                actual: self.dim(),
            });
        }
        let rows: Vec<Vec<u32>> = self
            .basis
            .iter()
            .map(|&b| {
                (0..n)
                    .map(|j| {
                        let mut e = vec![0; n];
                        e[j] = 1;
                        ctx.trace(ctx.mul(b, ctx.from_coords(&e))).0
                    })
                    .collect()
            })
            .collect();
        let kernel = FqMatrix::from_rows(rows).nullspace(ctx.base());
        debug_assert_eq!(kernel.len(), 1);
        let mut c = kernel.into_iter().next().ok_or(Error::DegenerateForm)?;
        let lead = c
            .iter()
            .copied()
            .find(|&x| x != 0)
            .expect("nonzero kernel vector");
        let s = ctx.base().inv(lead);
        for x in c.iter_mut() {
            *x = ctx.base().mul(*x, s);
        }
        Ok(ctx.from_coords(&c))
    }

    /// s(U) for a hyperplane when q is odd and n even: +1 iff U = a^2 U_{q,n}.
    pub fn s_invariant(&self, ctx: &FieldCtx) -> Result<i8> {
        if ctx.is_even() || !ctx.n().is_multiple_of(2) {
            return Err(Error::WrongParity);
        }
        let c = self.trace_functional(ctx)?;
        // U = c^{-1} U_{q,n}; c^{-1} is a square iff c is
        Ok(if ctx.is_square_full(c) { 1 } else { -1 })
    }

    pub fn to_spec(&self) -> String {
        let idx: Vec<String> = self.basis.iter().map(|b| b.0.to_string()).collect();
        format!("basis={}", idx.join(","))
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_spec())
    }
}

/// k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Number of d-dimensional subspaces of F_q^n.
pub fn gaussian_binomial(q: u64, n: u32, d: u32) -> u64 {
    if d > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..d {
        num *= (q as u128).pow(n - i) - 1;
        den *= (q as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// Textual subspace description: `basis=3,7,12` or `ker-trace-of=5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubspaceSpec {
    Basis(Vec<u32>),
    KerTraceOf(u32),
}

impl FromStr for SubspaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid subspace spec {s:?}"));
        let (key, val) = s.trim().split_once('=').ok_or_else(bad)?;
        match key.trim() {
            "basis" => {
                let val = val.trim();
                if val.is_empty() {
                    return Ok(SubspaceSpec::Basis(Vec::new()));
                }
                let idx = val
                    .split(',')
                    .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SubspaceSpec::Basis(idx))
            }
            "ker-trace-of" => Ok(SubspaceSpec::KerTraceOf(
                val.trim().parse().map_err(|_| bad())?,
            )),
            _ => Err(bad()),
        }
    }
}

impl SubspaceSpec {
    pub fn resolve(&self, ctx: &FieldCtx) -> Result<Subspace> {
        let check = |i: u32| {
            if i >= ctx.size() {
                Err(Error::Parse(format!(
                    "element index {i} out of range for a field of order {}",
                    ctx.size()
                )))
            } else {
                Ok(Elem(i))
            }
        };
        match self {
            SubspaceSpec::Basis(idx) => {
                let gens = idx.iter().map(|&i| check(i)).collect::<Result<Vec<_>>>()?;
                Ok(Subspace::span(ctx, gens))
            }
            SubspaceSpec::KerTraceOf(c) => Subspace::hyperplane_from_functional(ctx, check(*c)?),
        }
    }
}

/// Dense matrix over F_q with entries stored as F_q indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<u32> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged matrix");
        FqMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.data
            .chunks(self.cols.max(1))
            .map(<[u32]>::to_vec)
            .take(self.rows)
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, k: &BaseField, other: &FqMatrix) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = k.add(out.get(i, j), k.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// x^T A y
    pub fn bilinear(&self, k: &BaseField, x: &[u32], y: &[u32]) -> u32 {
        let mut acc = 0;
        for i in 0..self.rows {
            if x[i] == 0 {
                continue;
            }
            let mut r = 0;
            for j in 0..self.cols {
                r = k.add(r, k.mul(self.get(i, j), y[j]));
            }
            acc = k.add(acc, k.mul(x[i], r));
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// T^T A T
    pub fn congruent(&self, k: &BaseField, t: &FqMatrix) -> Self {
        t.transpose().mul(k, self).mul(k, t)
    }

    fn row_reduced(&self, k: &BaseField) -> (Self, Vec<usize>, u32) {
        // returns (rref, pivot columns, determinant factor for square input)
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut det = 1u32;
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                det = 0;
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let (a, b) = (m.get(r, j), m.get(p, j));
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
                det = k.neg(det);
            }
            let pv = m.get(r, c);
            det = k.mul(det, pv);
            let s = k.inv(pv);
            for j in 0..m.cols {
                m.set(r, j, k.mul(m.get(r, j), s));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f != 0 {
                    for j in 0..m.cols {
                        let v = k.sub(m.get(i, j), k.mul(f, m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if r < m.rows {
            det = 0;
        }
        (m, pivots, det)
    }

    pub fn rank(&self, k: &BaseField) -> usize {
        self.row_reduced(k).1.len()
    }

    pub fn determinant(&self, k: &BaseField) -> u32 {
        assert_eq!(self.rows, self.cols);
        self.row_reduced(k).2
    }

    pub fn is_invertible(&self, k: &BaseField) -> bool {
        self.rows == self.cols && self.rank(k) == self.rows
    }

    /// Basis of {x : A x = 0}.
    pub fn nullspace(&self, k: &BaseField) -> Vec<Vec<u32>> {
        let (m, pivots, _) = self.row_reduced(k);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = k.neg(m.get(r, f));
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_span(ctx: &FieldCtx, gens: &[Elem]) -> Vec<Elem> {
        let mut set = vec![Elem::ZERO];
        for &g in gens {
            let mut next = Vec::new();
            for &x in &set {
                for c in 0..ctx.q() {
                    next.push(ctx.add(x, ctx.scale(c, g)));
                }
            }
            next.sort();
            next.dedup();
            set = next;
        }
        set
    }

    #[test]
    fn span_basics() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        assert_eq!(Subspace::span(&ctx, []).dim(), 0);
        let a = Elem(5);
        assert_eq!(Subspace::span(&ctx, [a, ctx.scale(2, a)]).dim(), 1);
        let u = Subspace::span(&ctx, [Elem(4), Elem(10)]);
        assert_eq!(u.elements(&ctx).unwrap().len(), 9);
    }

    #[test]
    fn f4_inside_f16() {
        let ctx = FieldCtx::new(2, 1, 4).unwrap();
        let f4 = ctx.subfield_elements(2).unwrap();
        let u = Subspace::span(&ctx, f4.clone());
        assert_eq!(u.dim(), 2);
        let mut e = u.elements(&ctx).unwrap();
        e.sort();
        assert_eq!(e, f4);
    }

    #[test]
    fn contains_matches_brute_span() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        for gens in [
            vec![Elem(1)],
            vec![Elem(4), Elem(13)],
            vec![Elem(2), Elem(7), Elem(25)],
        ] {
            let u = Subspace::span(&ctx, gens.clone());
            let span = brute_span(&ctx, &gens);
            for x in ctx.elements() {
                assert_eq!(u.contains(&ctx, x), span.binary_search(&x).is_ok());
            }
            let mut e = u.elements(&ctx).unwrap();
            assert_eq!(e.len(), span.len());
            e.sort();
            assert_eq!(e, span);
        }
    }

    #[test]
    fn enumerate_small() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        assert_eq!(Subspace::zero().elements(&ctx).unwrap(), vec![Elem::ZERO]);
        let u = Subspace::span(&ctx, [Elem(4)]);
        assert_eq!(u.elements(&ctx).unwrap(), vec![Elem(0), Elem(4), Elem(8)]);
    }

    #[test]
    fn trace_kernel_of_f4() {
        let ctx = FieldCtx::new(2, 1, 2).unwrap();
        let u = Subspace::trace_kernel(&ctx);
        assert_eq!(u.elements(&ctx).unwrap(), vec![Elem(0), Elem(1)]);
    }

    #[test]
    fn hyperplane_counts() {
        for &(p, m, n) in &[(3, 1, 2), (2, 1, 3), (5, 1, 2), (2, 2, 2), (3, 1, 3)] {
            let ctx = FieldCtx::new(p, m, n).unwrap();
            let hs = Subspace::all_hyperplanes(&ctx);
            let q = ctx.q() as u64;
            assert_eq!(hs.len() as u64, (q.pow(n) - 1) / (q - 1));
            let mut set: Vec<&Subspace> = hs.iter().map(|(_, u)| u).collect();
            set.sort();
            set.dedup();
            assert_eq!(set.len(), hs.len());
            let base = Subspace::trace_kernel(&ctx);
            for (delta, u) in &hs {
                assert_eq!(u.dim(), n as usize - 1);
                assert_eq!(&base.scaled(&ctx, *delta), u);
                let c = u.trace_functional(&ctx).unwrap();
                assert_eq!(ctx.inv(c).unwrap(), *delta);
            }
        }
    }

    #[test]
    fn scaling_fixes_trace_kernel_only_for_base_scalars() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let u = Subspace::trace_kernel(&ctx);
        for d in ctx.nonzero() {
            assert_eq!(u.scaled(&ctx, d) == u, ctx.in_base_field(d), "{d}");
        }
    }

    #[test]
    fn all_of_dim_counts() {
        for &(p, n) in &[(2u32, 4u32), (3, 3), (2, 5)] {
            let ctx = FieldCtx::new(p, 1, n).unwrap();
            for d in 0..=n {
                let all = Subspace::all_of_dim(&ctx, d as usize);
                assert_eq!(all.len() as u64, gaussian_binomial(p as u64, n, d));
                for u in &all {
                    assert_eq!(u.dim(), d as usize);
                    assert_eq!(&Subspace::span(&ctx, u.basis().to_vec()), u);
                }
                let mut dedup = all.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), all.len());
            }
        }
    }

    #[test]
    fn square_content() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        assert!(Subspace::span(&ctx, [Elem(3)])
            .contains_nonzero_square(&ctx)
            .unwrap());
        // y in F_9 (i with i^2 = -1) is a square: i^4 = 1
        let f9 = FieldCtx::new(3, 1, 2).unwrap();
        assert!(Subspace::span(&f9, [Elem(3)])
            .contains_nonzero_square(&f9)
            .unwrap());
        // some line in F_9 carries only nonsquares
        let lines = Subspace::all_of_dim(&f9, 1);
        let bare: Vec<_> = lines
            .iter()
            .filter(|u| !u.contains_nonzero_square(&f9).unwrap())
            .collect();
        assert!(!bare.is_empty());
        for u in bare {
            for x in u.elements(&f9).unwrap() {
                assert!(x.is_zero() || !f9.is_square_full(x));
            }
        }
    }

    #[test]
    fn d_invariant_of_subfield() {
        let ctx = FieldCtx::new(2, 1, 4).unwrap();
        let f4 = Subspace::span(&ctx, ctx.subfield_elements(2).unwrap());
        assert_eq!(f4.d_invariant(&ctx).unwrap(), 2);
        assert!(f4.is_scaled_subfield(&ctx).unwrap());
        let a = Elem(7);
        let scaled = f4.scaled(&ctx, ctx.square(a));
        assert_eq!(scaled.d_invariant(&ctx).unwrap(), 2);
        let line = Subspace::span(&ctx, [Elem(6)]);
        assert_eq!(line.d_invariant(&ctx).unwrap(), 1);
    }

    #[test]
    fn d_invariant_without_square() {
        let f9 = FieldCtx::new(3, 1, 2).unwrap();
        let bare = Subspace::all_of_dim(&f9, 1)
            .into_iter()
            .find(|u| !u.contains_nonzero_square(&f9).unwrap())
            .unwrap();
        assert_eq!(bare.d_invariant(&f9), Err(Error::NoNonzeroSquare));
    }

    #[test]
    fn s_invariant_split() {
        let ctx = FieldCtx::new(5, 1, 2).unwrap();
        let hs = Subspace::all_hyperplanes(&ctx);
        let plus = hs
            .iter()
            .filter(|(_, u)| u.s_invariant(&ctx).unwrap() == 1)
            .count();
        assert_eq!(plus, 3);
        assert_eq!(Subspace::trace_kernel(&ctx).s_invariant(&ctx).unwrap(), 1);
        let odd = FieldCtx::new(3, 1, 3).unwrap();
        assert_eq!(
            Subspace::trace_kernel(&odd).s_invariant(&odd),
            Err(Error::WrongParity)
        );
        assert!(matches!(
            Subspace::span(&ctx, [Elem(1)]).s_invariant(&FieldCtx::new(3, 1, 4).unwrap()),
            Err(Error::WrongDimension { .. })
        ));
    }

    #[test]
    fn spec_parsing() {
        let ctx = FieldCtx::new(2, 1, 3).unwrap();
        let u: SubspaceSpec = "basis=3,5".parse().unwrap();
        assert_eq!(u.resolve(&ctx).unwrap().dim(), 2);
        let h: SubspaceSpec = "ker-trace-of=1".parse().unwrap();
        assert_eq!(h.resolve(&ctx).unwrap(), Subspace::trace_kernel(&ctx));
        assert!("basis=1,x".parse::<SubspaceSpec>().is_err());
        assert!("span=1".parse::<SubspaceSpec>().is_err());
        assert!(SubspaceSpec::Basis(vec![99]).resolve(&ctx).is_err());
        assert_eq!(
            SubspaceSpec::KerTraceOf(0).resolve(&ctx),
            Err(Error::ZeroFunctional)
        );
    }

    #[test]
    fn matrix_ops() {
        let ctx = FieldCtx::new(5, 1, 2).unwrap();
        let k = ctx.base();
        let a = FqMatrix::from_rows(vec![vec![1, 2], vec![3, 4]]);
        // det = 4 - 6 = -2 = 3 mod 5
        assert_eq!(a.determinant(k), 3);
        let s = FqMatrix::from_rows(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(s.rank(k), 1);
        let ns = s.nullspace(k);
        assert_eq!(ns.len(), 1);
        assert_eq!(s.bilinear(k, &[1, 0], &ns[0]), 0);
        assert_eq!(FqMatrix::identity(3).determinant(k), 1);
    }
}
