//! Symmetric F_q-bilinear forms on F_{q^n}: trace forms B_λ(x, y) = Tr(λxy)
//! and arbitrary Gram matrices in the polynomial basis.

use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{BaseField, Elem, FieldCtx, FieldOps, SCAN_BUDGET};
use crate::graph::{max_clique, BitGraph, SolverOptions};
use crate::linalg::{FqMatrix, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormSpec {
    Trace { lambda: Elem },
    Gram(FqMatrix),
}

impl FromStr for FormSpec {
    type Err = Error;

    /// `lambda=<index>` or `gram=a,b;c,d` (rows separated by `;`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid form spec {s:?}"));
        let (key, val) = s.trim().split_once('=').ok_or_else(bad)?;
        match key.trim() {
            "lambda" => Ok(FormSpec::Trace {
                lambda: Elem(val.trim().parse().map_err(|_| bad())?),
            }),
            "gram" => {
                let rows = val
                    .split(';')
                    .map(|r| {
                        r.split(',')
                            .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                if rows.iter().any(|r| r.len() != rows.len()) {
                    return Err(bad());
                }
                Ok(FormSpec::Gram(FqMatrix::from_rows(rows)))
            }
            _ => Err(bad()),
        }
    }
}

/// Gram matrix of the form in the basis 1, y, ..., y^{n-1}.
pub fn gram_matrix(ctx: &FieldCtx, spec: &FormSpec) -> Result<FqMatrix> {
    let n = ctx.n() as usize;
    let g = match spec {
        FormSpec::Trace { lambda } => {
            if lambda.is_zero() || lambda.0 >= ctx.size() {
                return Err(Error::DegenerateForm);
            }
            let basis: Vec<Elem> = (0..n).map(|j| unit(ctx, j)).collect();
            let mut g = FqMatrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = ctx.trace(ctx.mul(*lambda, ctx.mul(basis[i], basis[j]))).0;
                    g.set(i, j, v);
                    g.set(j, i, v);
                }
            }
            g
        }
        FormSpec::Gram(m) => {
            let in_range = (0..m.rows()).all(|i| m.row(i).iter().all(|&x| x < ctx.q()));
            if m.rows() != n || m.cols() != n || !m.is_symmetric() || !in_range {
                return Err(Error::DegenerateForm);
            }
            m.clone()
        }
    };
    if !g.is_invertible(ctx.base()) {
        return Err(Error::DegenerateForm);
    }
    Ok(g)
}

fn unit(ctx: &FieldCtx, j: usize) -> Elem {
    let mut c = vec![0; ctx.n() as usize];
    c[j] = 1;
    ctx.from_coords(&c)
}

fn sqrt_in(k: &BaseField, q: u32, a: u32) -> Option<u32> {
    (0..q).find(|&c| k.mul(c, c) == a)
}

/// A non-degenerate symmetric bilinear form bound to a field.
#[derive(Clone, Debug)]
pub struct Form<'a> {
    ctx: &'a FieldCtx,
    gram: FqMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TInvariant {
    /// found by exhaustive isotropic search
    pub value: u32,
    /// closed form from χ(B), odd q only
    pub closed_form: Option<u32>,
    /// basis of a totally isotropic subspace of dimension `value`
    pub witness: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MInvariant {
    /// found by maximum clique search on the orthogonality graph
    pub value: u32,
    /// q^t + n - 2t, odd q only
    pub closed_form: Option<u32>,
    /// upper bound for even q
    pub upper_bound: Option<u32>,
    pub witness: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormInvariants {
    pub gram: Vec<Vec<u32>>,
    pub chi: Option<i8>,
    pub diagonal: Option<Vec<u32>>,
    pub t: TInvariant,
    pub m: MInvariant,
}

impl<'a> Form<'a> {
    pub fn new(ctx: &'a FieldCtx, spec: &FormSpec) -> Result<Self> {
        Ok(Form {
            ctx,
            gram: gram_matrix(ctx, spec)?,
        })
    }

    pub fn trace(ctx: &'a FieldCtx, lambda: Elem) -> Result<Self> {
        Self::new(ctx, &FormSpec::Trace { lambda })
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn gram(&self) -> &FqMatrix {
        &self.gram
    }

    pub fn eval(&self, x: Elem, y: Elem) -> u32 {
        self.gram
            .bilinear(self.ctx.base(), &self.ctx.coords(x), &self.ctx.coords(y))
    }

    pub fn quadratic(&self, x: Elem) -> u32 {
        self.eval(x, x)
    }

    /// The form with Gram matrix T^T G T, i.e. (x, y) -> B(Tx, Ty).
    pub fn pulled_back(&self, t: &FqMatrix) -> Result<Self> {
        let g = self.gram.congruent(self.ctx.base(), t);
        Self::new(self.ctx, &FormSpec::Gram(g))
    }

    /// Diagonal entries a_i and a change of basis T with T^T G T = diag(a).
    /// Pivots are chosen by first index; a zero diagonal is repaired by
    /// adding the partner row and column of the first nonzero off-diagonal.
    pub fn diagonalize(&self) -> Result<(Vec<u32>, FqMatrix)> {
        if self.ctx.is_even() {
            return Err(Error::EvenCharacteristic);
        }
        let k = self.ctx.base();
        let n = self.gram.rows();
        let mut a = self.gram.clone();
        let mut t = FqMatrix::identity(n);

        // column_i += c column_j on T, and the congruence on A
        let add = |a: &mut FqMatrix, t: &mut FqMatrix, i: usize, j: usize, c: u32| {
            for r in 0..n {
                let v = k.add(a.get(i, r), k.mul(c, a.get(j, r)));
                a.set(i, r, v);
            }
            for r in 0..n {
                let v = k.add(a.get(r, i), k.mul(c, a.get(r, j)));
                a.set(r, i, v);
            }
            for r in 0..n {
                let v = k.add(t.get(r, i), k.mul(c, t.get(r, j)));
                t.set(r, i, v);
            }
        };
        let swap = |a: &mut FqMatrix, t: &mut FqMatrix, i: usize, j: usize| {
            if i == j {
                return;
            }
            for r in 0..n {
                let (x, y) = (a.get(i, r), a.get(j, r));
                a.set(i, r, y);
                a.set(j, r, x);
            }
            for r in 0..n {
                let (x, y) = (a.get(r, i), a.get(r, j));
                a.set(r, i, y);
                a.set(r, j, x);
                let (x, y) = (t.get(r, i), t.get(r, j));
                t.set(r, i, y);
                t.set(r, j, x);
            }
        };

        for step in 0..n {
            if let Some(i) = (step..n).find(|&i| a.get(i, i) != 0) {
                swap(&mut a, &mut t, step, i);
            } else {
                let pair = (step..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .find(|&(i, j)| a.get(i, j) != 0);
                let Some((i, j)) = pair else {
                    return Err(Error::DegenerateForm);
                };
                // new diagonal entry is 2·A[i][j] ≠ 0 in odd characteristic
                add(&mut a, &mut t, i, j, 1);
                swap(&mut a, &mut t, step, i);
            }
            let piv_inv = k.inv(a.get(step, step));
            for i in (step + 1)..n {
                let c = a.get(i, step);
                if c != 0 {
                    add(&mut a, &mut t, i, step, k.neg(k.mul(c, piv_inv)));
                }
            }
        }
        Ok(((0..n).map(|i| a.get(i, i)).collect(), t))
    }

    /// χ_q(B): product of χ(a_i) over a diagonalization.
    pub fn chi(&self) -> Result<i8> {
        let (diag, _) = self.diagonalize()?;
        let k = self.ctx.base();
        Ok(diag.iter().map(|&a| k.chi(a)).product())
    }

    /// χ_q(det G); equals [`Form::chi`] because congruence scales the
    /// determinant by a square.
    pub fn chi_by_determinant(&self) -> Result<i8> {
        if self.ctx.is_even() {
            return Err(Error::EvenCharacteristic);
        }
        let k = self.ctx.base();
        Ok(k.chi(self.gram.determinant(k)))
    }

    /// {w : B(u, w) = 0 for all u ∈ U}.
    pub fn orthogonal_complement(&self, u: &Subspace) -> Subspace {
        let ctx = self.ctx;
        let n = ctx.n() as usize;
        if u.is_zero() {
            return Subspace::full(ctx);
        }
        let gt = self.gram.transpose();
        let rows: Vec<Vec<u32>> = u
            .basis()
            .iter()
            .map(|&b| {
                let c = ctx.coords(b);
                (0..n)
                    .map(|j| {
                        (0..n).fold(0, |acc, i| {
                            ctx.base().add(acc, ctx.base().mul(c[i], gt.get(j, i)))
                        })
                    })
                    .collect()
            })
            .collect();
        let kernel = FqMatrix::from_rows(rows).nullspace(ctx.base());
        Subspace::span(ctx, kernel.iter().map(|v| ctx.from_coords(v)))
    }

    pub fn is_totally_isotropic(&self, vs: &[Elem]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &a)| vs[i..].iter().all(|&b| self.eval(a, b) == 0))
    }

    fn check_scan(&self) -> Result<()> {
        let size = self.ctx.size() as u64;
        if size > SCAN_BUDGET {
            return Err(Error::BudgetExceeded {
                what: "form search",
                size: size as u128,
                limit: SCAN_BUDGET as u128,
            });
        }
        Ok(())
    }

    /// t(B) by search, with the closed form alongside for odd q.
    pub fn t_invariant(&self) -> Result<TInvariant> {
        self.check_scan()?;
        let ctx = self.ctx;
        let n = ctx.n() as usize;
        let isotropic: Vec<Elem> = ctx.nonzero().filter(|&v| self.quadratic(v) == 0).collect();

        fn extend(
            f: &Form<'_>,
            cands: &[Elem],
            chosen: &mut Vec<Elem>,
            span: &Subspace,
            k: usize,
        ) -> bool {
            if chosen.len() == k {
                return true;
            }
            for (i, &v) in cands.iter().enumerate() {
                if cands.len() - i < k - chosen.len() {
                    break;
                }
                if span.contains(f.ctx, v) || chosen.iter().any(|&w| f.eval(v, w) != 0) {
                    continue;
                }
                chosen.push(v);
                let next = span.sum(f.ctx, &Subspace::span(f.ctx, [v]));
                if extend(f, &cands[i + 1..], chosen, &next, k) {
                    return true;
                }
                chosen.pop();
            }
            false
        }

        // a totally isotropic subspace has dimension at most n/2
        let mut found = (0, Vec::new());
        for k in (1..=n / 2).rev() {
            let mut chosen = Vec::new();
            if extend(self, &isotropic, &mut chosen, &Subspace::zero(), k) {
                found = (k as u32, chosen);
                break;
            }
        }
        let closed_form = if ctx.is_even() {
            None
        } else {
            Some(t_closed_form(ctx.q(), ctx.n(), self.chi()?))
        };
        Ok(TInvariant {
            value: found.0,
            closed_form,
            witness: found.1,
        })
    }

    /// The orthogonality graph: distinct u, w adjacent iff B(u, w) = 0.
    pub fn orthogonality_graph(&self) -> Result<BitGraph> {
        self.check_scan()?;
        let ctx = self.ctx;
        let size = ctx.size() as usize;
        if size > crate::graph::DEFAULT_MAX_VERTICES {
            return Err(Error::BudgetExceeded {
                what: "graph",
                size: size as u128,
                limit: crate::graph::DEFAULT_MAX_VERTICES as u128,
            });
        }
        let coords: Vec<Vec<u32>> = ctx.elements().map(|a| ctx.coords(a)).collect();
        let k = ctx.base();
        // B(u, ·) as a row vector u^T G, precomputed per vertex
        let n = ctx.n() as usize;
        let rows: Vec<Vec<u32>> = coords
            .iter()
            .map(|c| {
                (0..n)
                    .map(|j| (0..n).fold(0, |acc, i| k.add(acc, k.mul(c[i], self.gram.get(i, j)))))
                    .collect()
            })
            .collect();
        Ok(BitGraph::from_predicate(size, |u, w| {
            rows[u]
                .iter()
                .zip(&coords[w])
                .fold(0, |acc, (&a, &b)| k.add(acc, k.mul(a, b)))
                == 0
        }))
    }

    /// M_B by exact clique search, with the closed form (odd q) or the upper
    /// bound (even q) computed from t(B).
    pub fn m_invariant(&self, t: &TInvariant, opts: &SolverOptions) -> Result<MInvariant> {
        let ctx = self.ctx;
        let g = self.orthogonality_graph()?;
        let r = max_clique(&g, opts, 0)?;
        let (q, n) = (ctx.q() as u64, ctx.n() as u64);
        let formula = |t: u32| q.pow(t) + n - 2 * t as u64;
        let (closed_form, upper_bound) = match t.closed_form {
            Some(tc) => (Some(formula(tc) as u32), None),
            None if q == 2 && t.value <= 2 => (None, Some(n as u32 + 1)),
            None => (None, Some(formula(t.value) as u32)),
        };
        Ok(MInvariant {
            value: r.omega as u32,
            closed_form,
            upper_bound,
            witness: r.witness.iter().map(|&v| Elem(v as u32)).collect(),
        })
    }

    pub fn invariants(&self, opts: &SolverOptions) -> Result<FormInvariants> {
        let odd = !self.ctx.is_even();
        let t = self.t_invariant()?;
        let m = self.m_invariant(&t, opts)?;
        Ok(FormInvariants {
            gram: self.gram.to_rows(),
            chi: if odd { Some(self.chi()?) } else { None },
            diagonal: if odd {
                Some(self.diagonalize()?.0)
            } else {
                None
            },
            t,
            m,
        })
    }
}

/// t(B) for odd q: (n-1)/2 for odd n, (n + χ(B)χ(-1)^{n/2} - 1)/2 for even n.
pub fn t_closed_form(q: u32, n: u32, chi: i8) -> u32 {
    if n % 2 == 1 {
        return (n - 1) / 2;
    }
    let chi_minus_one: i64 = if q % 4 == 1 { 1 } else { -1 };
    let sign = chi as i64 * chi_minus_one.pow(n / 2);
    ((n as i64 + sign - 1) / 2) as u32
}

/// q^t + n - 2t
pub fn m_closed_form(q: u32, n: u32, t: u32) -> u64 {
    (q as u64).pow(t) + n as u64 - 2 * t as u64
}

/// A basis β_1..β_n with Tr(β_i β_j) = 0 for i ≠ j, Tr(β_i²) = 1 for i > 1
/// and Tr(β_1²) = μ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialBasis {
    pub basis: Vec<Elem>,
    pub mu: u32,
}

/// Deterministic backtracking scan: pick n-1 mutually orthogonal vectors of
/// norm 1 in index order, then take the orthogonal line that is left as β_1,
/// rescaled to norm 1 when its norm is a square.
pub fn special_basis(ctx: &FieldCtx) -> Result<SpecialBasis> {
    let form = Form::trace(ctx, Elem::ONE)?;
    form.check_scan()?;
    let k = ctx.base();
    let n = ctx.n() as usize;
    let unit_norm: Vec<Elem> = ctx.nonzero().filter(|&v| form.quadratic(v) == 1).collect();

    fn search(
        f: &Form<'_>,
        cands: &[Elem],
        chosen: &mut Vec<Elem>,
        target: usize,
    ) -> Option<SpecialBasis> {
        let ctx = f.ctx;
        let k = ctx.base();
        if chosen.len() == target {
            let rest = f.orthogonal_complement(&Subspace::span(ctx, chosen.iter().copied()));
            let b = *rest.basis().first()?;
            let norm = f.quadratic(b);
            let (beta, mu) = match sqrt_in(k, ctx.q(), norm) {
                Some(c) => (ctx.scale(k.inv(c), b), 1),
                None => (b, norm),
            };
            let mut basis = vec![beta];
            basis.extend(chosen.iter().copied());
            return Some(SpecialBasis { basis, mu });
        }
        for (i, &v) in cands.iter().enumerate() {
            if chosen.iter().any(|&w| f.eval(v, w) != 0) {
                continue;
            }
            chosen.push(v);
            if let Some(found) = search(f, &cands[i + 1..], chosen, target) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }

    let mut chosen = Vec::with_capacity(n);
    let out = search(&form, &unit_norm, &mut chosen, n - 1).ok_or_else(|| {
        Error::ConstructionFailed(format!("no special basis for q={}, n={n}", ctx.q()))
    })?;
    // the Gram class forces μ; recheck the result before returning it
    let gram_ok = (0..n).all(|i| {
        (0..n).all(|j| {
            let want = if i != j {
                0
            } else if i == 0 {
                out.mu
            } else {
                1
            };
            form.eval(out.basis[i], out.basis[j]) == want
        })
    });
    let expect_one = ctx.is_even() || (ctx.q() % 2 == 1 && n % 2 == 1);
    let mu_ok = if expect_one {
        out.mu == 1
    } else {
        !k.is_square(out.mu)
    };
    if !gram_ok || !mu_ok || Subspace::span(ctx, out.basis.iter().copied()).dim() != n {
        return Err(Error::ConstructionFailed(format!(
            "special basis check failed for q={}, n={n}",
            ctx.q()
        )));
    }
    Ok(out)
}
