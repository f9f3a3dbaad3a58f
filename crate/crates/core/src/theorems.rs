//! Closed forms and bounds for ω(G_U), and checkers that hold an exact
//! clique number against them.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{divisors, Elem, FieldCtx};
use crate::linalg::Subspace;

/// The largest clique number over all proper subspaces of F_{q^n}.
pub fn omega_qn(q: u64, n: u32) -> u64 {
    if q == 2 && (2..=5).contains(&n) {
        n as u64 + 1
    } else if n % 2 == 1 {
        q.pow((n - 1) / 2) + 1
    } else {
        q.pow(n / 2)
    }
}

/// ω(G_U) for a hyperplane U. `s` is s(U), required when q is odd and n even.
pub fn hyperplane_omega(q: u64, n: u32, s: Option<i8>) -> Result<u64> {
    if q == 2 && (2..=5).contains(&n) {
        return Ok(n as u64 + 1);
    }
    if q.is_multiple_of(2) || n % 2 == 1 {
        let h = n / 2;
        return Ok(q.pow(h) + (n - 2 * h) as u64);
    }
    let s = s.ok_or(Error::WrongParity)?;
    let q4 = q % 4; // 1 or 3 (that is, -1)
    let n4 = n % 4; // 0 or 2
    let big = matches!((q4, n4, s), (_, 0, -1) | (3, 2, 1) | (1, 2, -1));
    Ok(if big {
        q.pow(n / 2)
    } else {
        q.pow(n / 2 - 1) + 2
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredictionKind {
    ExactValue,
    FiniteCandidateSet,
    Interval,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaPrediction {
    pub kind: PredictionKind,
    /// Admissible values, ascending; a single entry for an exact prediction.
    pub values: Vec<u64>,
    pub lo: u64,
    pub hi: u64,
    pub provenance: String,
}

impl OmegaPrediction {
    fn exact(v: u64, provenance: &str) -> Self {
        OmegaPrediction {
            kind: PredictionKind::ExactValue,
            values: vec![v],
            lo: v,
            hi: v,
            provenance: provenance.to_string(),
        }
    }

    pub fn exact_value(&self) -> Option<u64> {
        (self.kind == PredictionKind::ExactValue).then(|| self.values[0])
    }

    pub fn admits(&self, omega: u64) -> bool {
        match self.kind {
            PredictionKind::Interval => (self.lo..=self.hi).contains(&omega),
            _ => self.values.contains(&omega),
        }
    }
}

impl fmt::Display for OmegaPrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PredictionKind::ExactValue => write!(f, "{}", self.values[0]),
            PredictionKind::FiniteCandidateSet => {
                let v: Vec<String> = self.values.iter().map(u64::to_string).collect();
                write!(f, "{{{}}}", v.join(","))
            }
            PredictionKind::Interval => write!(f, "[{},{}]", self.lo, self.hi),
        }
    }
}

/// κ_U = max{D_U, 7d_U/8 + 7/(32 log2 q)}, kept symbolically. Comparisons
/// use q^{7/(32 log2 q)} = 2^{7/32} and are decided in integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Kappa {
    pub q: u64,
    pub d: u32,
    pub d_big: u32,
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

impl Kappa {
    pub fn new(q: u64, d: u32, d_big: u32) -> Self {
        Kappa { q, d, d_big }
    }

    pub fn of(ctx: &FieldCtx, u: &Subspace) -> Result<Self> {
        let d_big = u.d_invariant(ctx)?;
        Ok(Kappa::new(ctx.q() as u64, u.dim() as u32, d_big))
    }

    /// Whether D_U is the larger term.
    pub fn subfield_term_dominates(&self) -> bool {
        // D ≥ 7d/8 + 7/(32 log2 q)  ⟺  q^{32D - 28d} ≥ 2^7
        let e = 32 * self.d_big as i64 - 28 * self.d as i64;
        e > 0 && big(self.q).pow(e as u32) >= big(1 << 7)
    }

    pub fn to_f64(&self) -> f64 {
        let other = 7.0 * self.d as f64 / 8.0 + 7.0 / (32.0 * (self.q as f64).log2());
        other.max(self.d_big as f64)
    }

    /// Whether the integer t satisfies t ≤ κ.
    pub fn admits_exponent(&self, t: u32) -> bool {
        if t <= self.d_big {
            return true;
        }
        // t ≤ 7d/8 + 7/(32 log2 q)  ⟺  q^{32t - 28d} ≤ 2^7
        let e = 32 * t as i64 - 28 * self.d as i64;
        e <= 0 || big(self.q).pow(e as u32) <= big(1 << 7)
    }

    /// Whether x ≤ q^κ + d_U.
    pub fn admits_omega(&self, x: u64) -> bool {
        let d = self.d as u64;
        if x <= d {
            return true;
        }
        let y = x - d;
        if big(y) <= big(self.q).pow(self.d_big) {
            return true;
        }
        // y ≤ 2^{7/32} q^{7d/8}  ⟺  y^32 ≤ 2^7 q^{28d}
        big(y).pow(32) <= (BigUint::one() << 7u32) * big(self.q).pow(28 * self.d)
    }

    /// ⌊q^κ + d_U⌋
    pub fn omega_ceiling(&self) -> u64 {
        let mut lo = self.q.pow(self.d_big) + self.d as u64;
        let mut hi = 2 * self.q.saturating_pow(self.d) + self.d as u64 + 2;
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.admits_omega(mid) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }
}

/// Lower bound on ω: 3, raised to q + min(1, d_U - 1) when U holds a
/// nonzero square.
pub fn lower_bound(q: u64, d: u32, has_square: bool) -> u64 {
    if has_square {
        (q + 1.min(d as u64 - 1)).max(3)
    } else {
        3
    }
}

/// Whether ω = q^t + r with the count constraint of the clique structure
/// theorem: t = 0 and r ≤ d + 1, or t ≥ 1 and r + t ≤ d.
pub fn has_structured_form(q: u64, d: u32, omega: u64) -> bool {
    if omega >= 1 && omega - 1 <= d as u64 + 1 {
        return true;
    }
    let mut qt = q;
    for t in 1..=d {
        if qt > omega {
            break;
        }
        if omega - qt + t as u64 <= d as u64 {
            return true;
        }
        qt = qt.saturating_mul(q);
    }
    false
}

/// Every prediction that applies to U, intersected.
pub fn predict_omega(ctx: &FieldCtx, u: &Subspace) -> Result<OmegaPrediction> {
    let n = ctx.n();
    let d = u.dim() as u32;
    if d == 0 || d >= n {
        return Err(Error::DimensionOutOfRange {
            d: d as usize,
            max: n as usize - 1,
        });
    }
    let q = ctx.q() as u64;
    let has_square = u.contains_nonzero_square(ctx)?;
    if d == 1 {
        let v = if q <= 3 || !has_square { 3 } else { q };
        return Ok(OmegaPrediction::exact(
            v,
            "dimension 1: 3 for q ≤ 3, else q or 3 by square content",
        ));
    }
    if d == 2 {
        let v = if q == 2 {
            4
        } else if !has_square {
            3
        } else if u.is_scaled_subfield(ctx)? {
            q * q
        } else {
            q + 1
        };
        return Ok(OmegaPrediction::exact(
            v,
            "dimension 2: 3 without squares, q^2 iff q = 2 or U = a^2 F_{q^2}, else q + 1",
        ));
    }
    if d == n - 1 {
        let s = if q % 2 == 1 && n.is_multiple_of(2) {
            Some(u.s_invariant(ctx)?)
        } else {
            None
        };
        return Ok(OmegaPrediction::exact(
            hyperplane_omega(q, n, s)?,
            "hyperplane: case table in (q mod 4, n mod 4, s(U))",
        ));
    }
    if !has_square {
        return Ok(OmegaPrediction::exact(3, "no nonzero square in U: ω = 3"));
    }
    if u.is_scaled_subfield(ctx)? {
        return Ok(OmegaPrediction::exact(q.pow(d), "U = a^2 F_{q^d}: ω = q^d"));
    }
    let kappa = Kappa::of(ctx, u)?;
    let lo = lower_bound(q, d, true).max(q.pow(kappa.d_big));
    let hi = omega_qn(q, n)
        .min(kappa.omega_ceiling())
        // U is not a scaled subfield, so ω < q^d; then ω ≤ q^{d-1} + 1
        .min(q.pow(d - 1) + 1);
    let values: Vec<u64> = (lo..=hi)
        .filter(|&v| has_structured_form(q, d, v))
        .filter(|&v| v <= d as u64 + 2 || exponent_within_kappa(q, d, v, &kappa))
        .collect();
    Ok(OmegaPrediction {
        kind: PredictionKind::FiniteCandidateSet,
        lo: values.first().copied().unwrap_or(lo),
        hi: values.last().copied().unwrap_or(hi),
        values,
        provenance: "intersection of ω_{q,n}, q^{D_U} ≤ ω ≤ q^κ + d_U, ω ≤ q^{d-1} + 1, the lower bound and ω = q^t + r".into(),
    })
}

/// Some split v = q^t + r with 1 ≤ t ≤ κ and r + t ≤ d.
fn exponent_within_kappa(q: u64, d: u32, v: u64, kappa: &Kappa) -> bool {
    let mut qt = q;
    for t in 1..=d {
        if qt > v {
            break;
        }
        if v - qt + t as u64 <= d as u64 && kappa.admits_exponent(t) {
            return true;
        }
        qt = qt.saturating_mul(q);
    }
    false
}

/// Checks the bounds that hold for every U against an exact ω; returns
/// descriptions of the violated ones.
pub fn check_bounds(ctx: &FieldCtx, u: &Subspace, omega: u64) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let q = ctx.q() as u64;
    let n = ctx.n();
    let d = u.dim() as u32;
    let has_square = u.contains_nonzero_square(ctx)?;
    if omega > omega_qn(q, n) {
        bad.push(format!("ω = {omega} exceeds ω_(q,n) = {}", omega_qn(q, n)));
    }
    if omega < lower_bound(q, d, has_square) {
        bad.push(format!(
            "ω = {omega} below the lower bound {}",
            lower_bound(q, d, has_square)
        ));
    }
    if !has_structured_form(q, d, omega) {
        bad.push(format!(
            "ω = {omega} is not q^t + r with the count constraint"
        ));
    }
    if has_square {
        let kappa = Kappa::of(ctx, u)?;
        if omega < q.pow(kappa.d_big) {
            bad.push(format!("ω = {omega} < q^D_U = {}", q.pow(kappa.d_big)));
        }
        if !kappa.admits_omega(omega) {
            bad.push(format!(
                "ω = {omega} > q^κ + d_U ≈ {:.3}",
                q as f64 * 0.0 + (q as f64).powf(kappa.to_f64()) + d as f64
            ));
        }
        if omega > d as u64 + 2 && !exponent_within_kappa(q, d, omega, &kappa) {
            bad.push(format!(
                "ω = {omega} has no split q^t + r with t ≤ κ, r + t ≤ d_U"
            ));
        }
    } else {
        if omega > d as u64 + 2 {
            bad.push(format!("ω = {omega} > d_U + 2 without a nonzero square"));
        }
        if omega != 3 {
            bad.push(format!("ω = {omega} ≠ 3 without a nonzero square"));
        }
    }
    if d >= 2 {
        bad.extend(check_q_power(ctx, u, omega)?);
    }
    Ok(bad)
}

/// ω ≤ q^d with equality iff q = d = 2 or U = a^2 F_{q^d}; and either
/// ω = q^d or ω ≤ q^{d-1} + 1.
pub fn check_q_power(ctx: &FieldCtx, u: &Subspace, omega: u64) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let q = ctx.q() as u64;
    let d = u.dim() as u32;
    let top = q.pow(d);
    if omega > top {
        bad.push(format!("ω = {omega} > q^d = {top}"));
    }
    let equality = (q == 2 && d == 2) || u.is_scaled_subfield(ctx)?;
    if (omega == top) != equality {
        bad.push(format!(
            "ω = {omega}, q^d = {top}, but the equality condition is {equality}"
        ));
    }
    if omega != top && omega > q.pow(d - 1) + 1 {
        bad.push(format!("ω = {omega} strictly between q^(d-1) + 1 and q^d"));
    }
    Ok(bad)
}

/// For q = 2 and U = {0, u, v, u + v}: whether a 4-clique has the form
/// {0, a, u/a, v/a} with a^2 = uv/(u + v) for some labelling of u, v.
pub fn q2_plane_clique_shape(ctx: &FieldCtx, u: &Subspace, clique: &[Elem]) -> Result<bool> {
    if ctx.q() != 2 || u.dim() != 2 || clique.len() != 4 || !clique.contains(&Elem::ZERO) {
        return Ok(false);
    }
    let nz: Vec<Elem> = u
        .elements(ctx)?
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect();
    let mut sorted = clique.to_vec();
    sorted.sort_unstable();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let (uu, vv) = (nz[i], nz[j]);
            let target = ctx.div(ctx.mul(uu, vv), ctx.add(uu, vv))?;
            for &a in clique.iter().filter(|a| !a.is_zero()) {
                if ctx.square(a) != target {
                    continue;
                }
                let mut want = vec![Elem::ZERO, a, ctx.div(uu, a)?, ctx.div(vv, a)?];
                want.sort_unstable();
                if want == sorted {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumProductReport {
    pub size_a: u64,
    pub size_b: u64,
    pub plus: u64,
    pub minus: u64,
    /// max of the two set sizes
    pub lhs: u64,
    /// 2^{-1/4} min{|A||B|^{1/7}, |A|^{6/7} |F|^{1/7}}, for display only
    pub rhs_approx: f64,
    pub holds: bool,
}

/// Whether `set` lies in some proper subfield of F_{q^n} (over the prime field).
pub fn in_proper_subfield(ctx: &FieldCtx, set: &[Elem]) -> bool {
    let total = ctx.m() * ctx.n();
    divisors(total)
        .into_iter()
        .filter(|&k| k < total)
        .any(|k| set.iter().all(|&b| ctx.frobenius_abs(b, k) == b))
}

/// max{|A + AB|, |A - AB|} ≥ 2^{-1/4} min{|A||B|^{1/7}, |A|^{6/7} |F|^{1/7}},
/// decided by comparing 28th powers in integers.
pub fn sum_product_check(ctx: &FieldCtx, a: &[Elem], b: &[Elem]) -> Result<SumProductReport> {
    let mut a = a.to_vec();
    a.sort_unstable();
    a.dedup();
    let mut b = b.to_vec();
    b.sort_unstable();
    b.dedup();
    if a.len() <= 1 {
        return Err(Error::PreconditionViolated("|A| must exceed 1".into()));
    }
    if b.is_empty() || in_proper_subfield(ctx, &b) {
        return Err(Error::PreconditionViolated(
            "B lies in a proper subfield".into(),
        ));
    }
    let size = ctx.size() as usize;
    let mut ab = vec![false; size];
    for &x in &a {
        for &y in &b {
            ab[ctx.mul(x, y).0 as usize] = true;
        }
    }
    let ab: Vec<Elem> = (0..size)
        .filter(|&i| ab[i])
        .map(|i| Elem(i as u32))
        .collect();
    let mut plus = vec![false; size];
    let mut minus = vec![false; size];
    for &x in &a {
        for &y in &ab {
            plus[ctx.add(x, y).0 as usize] = true;
            minus[ctx.sub(x, y).0 as usize] = true;
        }
    }
    let plus = plus.iter().filter(|&&t| t).count() as u64;
    let minus = minus.iter().filter(|&&t| t).count() as u64;
    let lhs = plus.max(minus);
    let (na, nb, nf) = (a.len() as u64, b.len() as u64, ctx.size() as u64);
    // 2^7 lhs^28 ≥ min{na^28 nb^4, na^24 nf^4}
    let left = (BigUint::one() << 7u32) * big(lhs).pow(28);
    let first = big(na).pow(28) * big(nb).pow(4);
    let second = big(na).pow(24) * big(nf).pow(4);
    let holds = left >= first.min(second);
    let rhs_approx = 2f64.powf(-0.25)
        * (na as f64 * (nb as f64).powf(1.0 / 7.0))
            .min((na as f64).powf(6.0 / 7.0) * (nf as f64).powf(1.0 / 7.0));
    Ok(SumProductReport {
        size_a: na,
        size_b: nb,
        plus,
        minus,
        lhs,
        rhs_approx,
        holds,
    })
}

/// Number of hyperplanes in each s-class when q is odd and n even.
pub fn census_class_size(q: u64, n: u32) -> u64 {
    (q.pow(n) - 1) / (2 * (q - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_qn_values() {
        assert_eq!(omega_qn(2, 3), 4);
        assert_eq!(omega_qn(3, 3), 4);
        assert_eq!(omega_qn(3, 4), 9);
        assert_eq!(omega_qn(2, 6), 8);
        assert_eq!(omega_qn(2, 7), 9);
    }

    #[test]
    fn hyperplane_table() {
        assert_eq!(hyperplane_omega(5, 2, Some(1)).unwrap(), 3);
        assert_eq!(hyperplane_omega(5, 2, Some(-1)).unwrap(), 5);
        assert_eq!(hyperplane_omega(3, 2, Some(1)).unwrap(), 3);
        assert_eq!(hyperplane_omega(3, 4, Some(-1)).unwrap(), 9);
        assert_eq!(hyperplane_omega(3, 4, Some(1)).unwrap(), 5);
        assert_eq!(hyperplane_omega(7, 2, Some(1)).unwrap(), 7);
        assert_eq!(hyperplane_omega(3, 3, None).unwrap(), 4);
        assert_eq!(hyperplane_omega(2, 6, None).unwrap(), 8);
        assert_eq!(hyperplane_omega(4, 3, None).unwrap(), 5);
        assert_eq!(hyperplane_omega(3, 2, None), Err(Error::WrongParity));
    }

    #[test]
    fn kappa_arithmetic() {
        // q = 2, d = 2, D = 2: max{2, 1.75 + 0.21875} = 2
        let k = Kappa::new(2, 2, 2);
        assert!(k.subfield_term_dominates());
        assert_eq!(k.to_f64(), 2.0);
        // q = 4, d = 8, D = 1: 7 + 7/64
        let k = Kappa::new(4, 8, 1);
        assert!(!k.subfield_term_dominates());
        assert!((k.to_f64() - (7.0 + 7.0 / 64.0)).abs() < 1e-12);
        assert!(k.admits_exponent(7));
        assert!(!k.admits_exponent(8));
        // D = d: κ = d
        for (q, d) in [(3u64, 3u32), (2, 5), (9, 2)] {
            let k = Kappa::new(q, d, d);
            assert!(k.subfield_term_dominates());
            assert_eq!(k.omega_ceiling(), q.pow(d) + d as u64);
        }
    }

    #[test]
    fn omega_ceiling_matches_floats() {
        for (q, d, dd) in [
            (2u64, 3u32, 1u32),
            (3, 4, 1),
            (5, 3, 1),
            (2, 6, 2),
            (4, 5, 1),
        ] {
            let k = Kappa::new(q, d, dd);
            let approx = (q as f64).powf(k.to_f64()) + d as f64;
            assert_eq!(k.omega_ceiling(), approx.floor() as u64, "{q} {d} {dd}");
        }
    }

    #[test]
    fn structured_form() {
        assert!(has_structured_form(2, 1, 3));
        assert!(!has_structured_form(2, 1, 4));
        assert!(has_structured_form(3, 2, 9));
        assert!(has_structured_form(3, 2, 4));
        assert!(!has_structured_form(3, 2, 6));
    }

    #[test]
    fn sum_product_in_f4() {
        let ctx = FieldCtx::new(2, 1, 2).unwrap();
        let r = sum_product_check(&ctx, &[Elem(0), Elem(1)], &[Elem(2)]).unwrap();
        assert_eq!(r.lhs, 4);
        assert!(r.holds);
        assert!((r.rhs_approx - 2f64.powf(0.75)).abs() < 1e-12);
        assert!(matches!(
            sum_product_check(&ctx, &[Elem(1)], &[Elem(2)]),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            sum_product_check(&ctx, &[Elem(0), Elem(1)], &[Elem(1)]),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn absolute_subfields_are_detected() {
        // F_4 sits inside F_16 built as F_2^4 and as F_4^2
        for ctx in [
            FieldCtx::new(2, 1, 4).unwrap(),
            FieldCtx::new(2, 2, 2).unwrap(),
        ] {
            let f4 = ctx
                .subfield_elements(if ctx.m() == 1 { 2 } else { 1 })
                .unwrap();
            assert!(in_proper_subfield(&ctx, &f4));
            let mut more = f4.clone();
            more.push(ctx.nonzero().find(|x| !f4.contains(x)).unwrap());
            assert!(!in_proper_subfield(&ctx, &more));
        }
    }

    #[test]
    fn census_sizes() {
        assert_eq!(census_class_size(3, 2), 2);
        assert_eq!(census_class_size(5, 2), 3);
        assert_eq!(census_class_size(3, 4), 20);
    }

    #[test]
    fn predictions_for_low_dimensions() {
        let f9 = FieldCtx::new(3, 1, 2).unwrap();
        for u in Subspace::all_of_dim(&f9, 1) {
            assert_eq!(predict_omega(&f9, &u).unwrap().exact_value(), Some(3));
        }
        let f25 = FieldCtx::new(5, 1, 2).unwrap();
        let mut seen: Vec<u64> = Subspace::all_of_dim(&f25, 1)
            .iter()
            .map(|u| predict_omega(&f25, u).unwrap().exact_value().unwrap())
            .collect();
        seen.sort();
        assert_eq!(seen, vec![3, 3, 3, 5, 5, 5]);
        assert!(matches!(
            predict_omega(&f25, &Subspace::full(&f25)),
            Err(Error::DimensionOutOfRange { .. })
        ));
    }
}
