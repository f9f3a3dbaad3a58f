//! Dense univariate polynomials over a small field, coefficients stored
//! constant term first. Only what modulus selection needs.

use crate::gf::FieldOps;

pub(crate) fn trim(p: &mut Vec<u32>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[u32]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

pub(crate) fn sub<K: FieldOps>(k: &K, a: &[u32], b: &[u32]) -> Vec<u32> {
    let len = a.len().max(b.len());
    let mut out: Vec<u32> = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            k.sub(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul<K: FieldOps>(k: &K, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = k.add(out[i + j], k.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem<K: FieldOps>(k: &K, a: &[u32], m: &[u32]) -> Vec<u32> {
    let dm = degree(m).expect("modulus must be nonzero");
    let lead_inv = k.inv(m[dm]);
    let mut r = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let f = k.mul(r[dr], lead_inv);
        let shift = dr - dm;
        for (j, &c) in m.iter().enumerate().take(dm + 1) {
            r[shift + j] = k.sub(r[shift + j], k.mul(f, c));
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mulmod<K: FieldOps>(k: &K, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    rem(k, &mul(k, a, b), m)
}

pub(crate) fn powmod<K: FieldOps>(k: &K, base: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = rem(k, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(k, &acc, &b, m);
        }
        b = mulmod(k, &b, &b, m);
        e >>= 1;
    }
    rem(k, &acc, m)
}

pub(crate) fn gcd<K: FieldOps>(k: &K, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(k, &x, &y);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or test: a polynomial of degree d is irreducible iff
/// gcd(f, x^(Q^i) - x) = 1 for every 1 <= i <= d/2.
pub(crate) fn is_irreducible<K: FieldOps>(k: &K, f: &[u32]) -> bool {
    let d = match degree(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = powmod(k, &h, k.order() as u64, f);
        let g = gcd(k, f, &sub(k, &h, &x));
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Least monic irreducible of the given degree, comparing coefficient
/// tuples from the constant term upward.
pub(crate) fn lex_least_irreducible<K: FieldOps>(k: &K, deg: usize) -> Vec<u32> {
    let q = k.order() as u64;
    let total = q.checked_pow(deg as u32).expect("search space overflow");
    for idx in 0..total {
        // c_0 is the most significant digit of idx
        let mut f = vec![0u32; deg + 1];
        let mut rest = idx;
        for j in (0..deg).rev() {
            f[j] = (rest % q) as u32;
            rest /= q;
        }
        f[deg] = 1;
        if deg >= 2 && f[0] == 0 {
            continue;
        }
        if is_irreducible(k, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
