//! Arithmetic in the tower F_p ⊂ F_q = F_{p^m} ⊂ F_{q^n}.
//!
//! Elements are integer indices. An element of F_{q^n} is the polynomial
//! `c_0 + c_1 y + ... + c_{n-1} y^{n-1}` over F_q and its index is
//! `sum idx(c_j) q^j`; each F_q coefficient is encoded the same way over F_p.
//! The whole index is therefore a base-p number with `mn` digits, and the
//! embedded copy of F_q is exactly the indices below `q`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;

/// Fields up to this order get log/antilog (and Zech, for odd p) tables.
pub const TABLE_BUDGET: u64 = 1 << 20;
/// Hard cap on q^n so that indices fit comfortably in a `u32`.
pub const FIELD_BUDGET: u64 = 1 << 31;
/// Cap on exhaustive scans over the field when no tables are present.
pub const SCAN_BUDGET: u64 = 1 << 24;

/// One element of F_{q^n}, by canonical index.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Field operations on raw indices. `inv(0)` is unspecified; callers check.
pub trait FieldOps {
    fn order(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inv(&self, a: u32) -> u32;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Self {
        PrimeField { p }
    }
}

impl FieldOps for PrimeField {
    fn order(&self) -> u32 {
        self.p
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    fn inv(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64 - 2)
    }
}

const NO_LOG: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Tables {
    /// multiplicative order, size - 1
    order: u32,
    log: Vec<u32>,
    /// exp[k] = g^k for k in 0..2*order
    exp: Vec<u32>,
    /// zech[k] = log(1 + g^k), NO_LOG when 1 + g^k = 0; empty for p = 2
    zech: Vec<u32>,
}

/// A simple extension `K[x]/(f)` with elements encoded as digit vectors in
/// radix `|K|`.
#[derive(Clone, Debug)]
pub struct ExtField<K> {
    coeffs: K,
    degree: usize,
    modulus: Vec<u32>,
    radix: u32,
    size: u32,
    p: u32,
    tables: Option<Tables>,
}

/// The middle field F_q of the tower.
pub type BaseField = ExtField<PrimeField>;

impl<K: FieldOps> ExtField<K> {
    fn new(coeffs: K, p: u32, modulus: Vec<u32>, with_tables: bool) -> Self {
        let degree = modulus.len() - 1;
        let radix = coeffs.order();
        let size = (radix as u64).pow(degree as u32) as u32;
        let mut field = ExtField {
            coeffs,
            degree,
            modulus,
            radix,
            size,
            p,
            tables: None,
        };
        if with_tables {
            field.tables = Some(field.build_tables());
        }
        field
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub(crate) fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = vec![0; self.degree];
        for d in out.iter_mut() {
            *d = a % self.radix;
            a /= self.radix;
        }
        out
    }

    pub(crate) fn from_digits(&self, digits: &[u32]) -> u32 {
        digits
            .iter()
            .rev()
            .fold(0u32, |acc, &d| acc * self.radix + d)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p;
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 || b > 0 {
            let d = (a % p + b % p) % p;
            out += d * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    fn neg_digits(&self, mut a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let p = self.p;
        let mut out = 0u32;
        let mut place = 1u32;
        while a > 0 {
            let d = a % p;
            if d != 0 {
                out += (p - d) * place;
            }
            a /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let pa = self.digits(a);
        let pb = self.digits(b);
        let mut r = poly::mulmod(&self.coeffs, &pa, &pb, &self.modulus);
        r.resize(self.degree, 0);
        self.from_digits(&r)
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        acc
    }

    fn primitive_slow(&self) -> u32 {
        let order = self.size as u64 - 1;
        if order == 1 {
            return 1;
        }
        let primes = prime_factors(order);
        (2..self.size)
            .find(|&g| primes.iter().all(|&r| self.pow_slow(g, order / r) != 1))
            .expect("multiplicative group is cyclic")
    }

    fn build_tables(&self) -> Tables {
        let order = self.size - 1;
        let g = self.primitive_slow();
        let mut log = vec![NO_LOG; self.size as usize];
        let mut exp = vec![0u32; 2 * order as usize];
        let mut x = 1u32;
        for k in 0..order {
            exp[k as usize] = x;
            exp[(k + order) as usize] = x;
            log[x as usize] = k;
            x = self.mul_slow(x, g);
        }
        let zech = if self.p == 2 {
            Vec::new()
        } else {
            (0..order)
                .map(|k| {
                    let s = self.add_digits(1, exp[k as usize]);
                    if s == 0 {
                        NO_LOG
                    } else {
                        log[s as usize]
                    }
                })
                .collect()
        };
        Tables {
            order,
            log,
            exp,
            zech,
        }
    }

    /// A generator of the multiplicative group when tables exist.
    pub fn primitive(&self) -> Option<u32> {
        self.tables.as_ref().map(|t| t.exp[1])
    }
}

impl<K: FieldOps> FieldOps for ExtField<K> {
    fn order(&self) -> u32 {
        self.size
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        match &self.tables {
            Some(t) => {
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                let la = t.log[a as usize];
                let lb = t.log[b as usize];
                let k = if lb >= la { lb - la } else { lb + t.order - la };
                let z = t.zech[k as usize];
                if z == NO_LOG {
                    0
                } else {
                    t.exp[(la + z) as usize]
                }
            }
            None => self.add_digits(a, b),
        }
    }

    fn neg(&self, a: u32) -> u32 {
        if self.p == 2 || a == 0 {
            return a;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.order / 2) as usize],
            None => self.neg_digits(a),
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_slow(a, b),
        }
    }

    fn inv(&self, a: u32) -> u32 {
        match &self.tables {
            Some(t) => {
                let l = t.log[a as usize];
                t.exp[((t.order - l) % t.order) as usize]
            }
            None => self.pow_slow(a, self.size as u64 - 2),
        }
    }

    fn pow(&self, a: u32, e: u64) -> u32 {
        match &self.tables {
            Some(t) => {
                if e == 0 {
                    return 1;
                }
                if a == 0 {
                    return 0;
                }
                let l = t.log[a as usize] as u64 * (e % t.order as u64);
                t.exp[(l % t.order as u64) as usize]
            }
            None => self.pow_slow(a, e),
        }
    }
}

impl BaseField {
    /// Quadratic character on F_q; 0 for zero. Meaningless for p = 2.
    pub fn chi(&self, a: u32) -> i8 {
        if a == 0 {
            0
        } else if self.pow(a, (self.size as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self, a: u32) -> bool {
        self.p == 2 || self.chi(a) >= 0
    }
}

pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= x {
        if x.is_multiple_of(d) {
            out.push(d);
            while x.is_multiple_of(d) {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

/// Splits a prime power into (p, m).
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut m = 0u32;
    let mut x = q;
    while x > 1 {
        x /= p;
        m += 1;
    }
    Some((p as u32, m))
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Where a square test is evaluated.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SquareLevel {
    Full,
    /// The subfield F_{q^d}, d | n.
    Subfield(u32),
}

/// The tower F_p ⊂ F_q ⊂ F_{q^n} with both moduli chosen lexicographically
/// least. Immutable after construction.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    n: u32,
    q: u32,
    size: u32,
    base: BaseField,
    ext: ExtField<BaseField>,
    /// Tr(y^j) for the polynomial basis
    trace_functional: Vec<u32>,
}

impl FieldCtx {
    pub fn new(p: u32, m: u32, n: u32) -> Result<Self> {
        Self::with_table_budget(p, m, n, TABLE_BUDGET)
    }

    pub fn with_table_budget(p: u32, m: u32, n: u32, table_budget: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::DegreeOutOfRange(format!("m = {m}, need m >= 1")));
        }
        if n < 2 {
            return Err(Error::DegreeOutOfRange(format!("n = {n}, need n >= 2")));
        }
        let q = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        let size = q.checked_pow(n).unwrap_or(u128::MAX);
        if size > FIELD_BUDGET as u128 || q > TABLE_BUDGET as u128 {
            return Err(Error::BudgetExceeded {
                what: "field",
                size,
                limit: FIELD_BUDGET as u128,
            });
        }
        let prime = PrimeField::new(p);
        let base_modulus = poly::lex_least_irreducible(&prime, m as usize);
        let base = ExtField::new(prime, p, base_modulus, true);
        let ext_modulus = poly::lex_least_irreducible(&base, n as usize);
        let ext = ExtField::new(base.clone(), p, ext_modulus, size <= table_budget as u128);
        let mut ctx = FieldCtx {
            p,
            m,
            n,
            q: q as u32,
            size: size as u32,
            base,
            ext,
            trace_functional: Vec::new(),
        };
        ctx.trace_functional = (0..n)
            .map(|j| {
                let mut c = vec![0; n as usize];
                c[j as usize] = 1;
                ctx.trace_by_powers(ctx.from_coords(&c)).0
            })
            .collect();
        Ok(ctx)
    }

    pub fn from_spec(spec: &str) -> Result<Self> {
        let FieldSpec { p, m, n } = spec.parse()?;
        Self::new(p, m, n)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// q^n
    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn is_even(&self) -> bool {
        self.p == 2
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn base_modulus(&self) -> &[u32] {
        self.base.modulus()
    }

    pub fn ext_modulus(&self) -> &[u32] {
        self.ext.modulus()
    }

    pub fn has_tables(&self) -> bool {
        self.ext.has_tables()
    }

    pub fn primitive(&self) -> Option<Elem> {
        self.ext.primitive().map(Elem)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.size).map(Elem)
    }

    /// F_q coordinates in the basis 1, y, ..., y^{n-1}.
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        self.ext.digits(a.0)
    }

    pub fn from_coords(&self, c: &[u32]) -> Elem {
        Elem(self.ext.from_digits(c))
    }

    /// Embeds an F_q element (by its index) as the constant polynomial.
    pub fn embed(&self, c: u32) -> Elem {
        debug_assert!(c < self.q);
        Elem(c)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.ext.add(a.0, b.0))
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.ext.sub(a.0, b.0))
    }

    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.ext.neg(a.0))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.ext.mul(a.0, b.0))
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Elem(self.ext.inv(a.0)))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        Elem(self.ext.pow(a.0, e))
    }

    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// Multiplies by a scalar from F_q.
    pub fn scale(&self, lambda: u32, a: Elem) -> Elem {
        let c: Vec<u32> = self
            .coords(a)
            .into_iter()
            .map(|x| self.base.mul(lambda, x))
            .collect();
        self.from_coords(&c)
    }

    fn q_power_exponent(&self, i: u32) -> u64 {
        let order = self.size as u64 - 1;
        let mut e = 1u64 % order.max(1);
        for _ in 0..(i % self.n) {
            e = e * self.q as u64 % order;
        }
        e
    }

    /// a^{q^i}
    pub fn frobenius(&self, a: Elem, i: u32) -> Elem {
        if a.is_zero() || a == Elem::ONE {
            return a;
        }
        if i.is_multiple_of(self.n) {
            return a;
        }
        let e = self.q_power_exponent(i);
        // e == 0 only when q^i ≡ 0 mod (q^n - 1), impossible for a nonzero power
        self.pow(a, e)
    }

    /// a^{p^k}, the absolute Frobenius.
    pub fn frobenius_abs(&self, a: Elem, k: u32) -> Elem {
        let mut x = a;
        for _ in 0..(k % (self.m * self.n)) {
            x = self.pow(x, self.p as u64);
        }
        x
    }

    /// Tr_n(a) as an element of the embedded F_q, via the cached functional.
    pub fn trace(&self, a: Elem) -> Elem {
        let c = self.coords(a);
        let t = c
            .iter()
            .zip(&self.trace_functional)
            .fold(0, |acc, (&x, &t)| self.base.add(acc, self.base.mul(x, t)));
        Elem(t)
    }

    /// Tr_n(a) = a + a^q + ... + a^{q^{n-1}} evaluated literally.
    pub fn trace_by_powers(&self, a: Elem) -> Elem {
        (0..self.n).fold(Elem::ZERO, |acc, i| self.add(acc, self.frobenius(a, i)))
    }

    pub fn check_divisor(&self, d: u32) -> Result<()> {
        if d == 0 || !self.n.is_multiple_of(d) {
            return Err(Error::NotADivisor { d, n: self.n });
        }
        Ok(())
    }

    /// Whether a lies in F_{q^d} (d | n).
    pub fn in_subfield(&self, a: Elem, d: u32) -> bool {
        self.frobenius(a, d) == a
    }

    pub fn in_base_field(&self, a: Elem) -> bool {
        self.in_subfield(a, 1)
    }

    pub fn is_square(&self, a: Elem, level: SquareLevel) -> Result<bool> {
        let (order, d) = match level {
            SquareLevel::Full => (self.size as u64, self.n),
            SquareLevel::Subfield(d) => {
                self.check_divisor(d)?;
                if !self.in_subfield(a, d) {
                    return Err(Error::NotInSubfield {
                        element: a.0,
                        degree: d,
                    });
                }
                ((self.q as u64).pow(d), d)
            }
        };
        let _ = d;
        if self.is_even() || a.is_zero() {
            return Ok(true);
        }
        Ok(self.pow(a, (order - 1) / 2) == Elem::ONE)
    }

    pub fn is_square_full(&self, a: Elem) -> bool {
        if self.is_even() || a.is_zero() {
            return true;
        }
        self.pow(a, (self.size as u64 - 1) / 2) == Elem::ONE
    }

    pub fn quadratic_character(&self, a: Elem) -> Result<i8> {
        if self.is_even() {
            return Err(Error::EvenCharacteristic);
        }
        if !self.in_base_field(a) {
            return Err(Error::NotInSubfield {
                element: a.0,
                degree: 1,
            });
        }
        Ok(self.base.chi(a.0))
    }

    /// The q^d fixed points of x -> x^{q^d}, sorted by index.
    pub fn subfield_elements(&self, d: u32) -> Result<Vec<Elem>> {
        self.check_divisor(d)?;
        let sub_order = (self.q as u64).pow(d) - 1;
        let mut out = match self.ext.primitive() {
            Some(g) => {
                let step = (self.size as u64 - 1) / sub_order;
                let h = self.pow(Elem(g), step);
                let mut v = Vec::with_capacity(sub_order as usize + 1);
                v.push(Elem::ZERO);
                let mut x = Elem::ONE;
                for _ in 0..sub_order {
                    v.push(x);
                    x = self.mul(x, h);
                }
                v
            }
            None => {
                if self.size as u64 > SCAN_BUDGET {
                    return Err(Error::BudgetExceeded {
                        what: "subfield scan",
                        size: self.size as u128,
                        limit: SCAN_BUDGET as u128,
                    });
                }
                self.elements()
                    .filter(|&a| self.in_subfield(a, d))
                    .collect()
            }
        };
        out.sort_unstable();
        Ok(out)
    }

    /// Renders an element as a polynomial in y, with F_q coefficients in x
    /// when m > 1.
    pub fn pretty(&self, a: Elem) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let c = self.coords(a);
        let mut terms = Vec::new();
        for (j, &cj) in c.iter().enumerate() {
            if cj == 0 {
                continue;
            }
            let coeff = if self.m == 1 {
                cj.to_string()
            } else {
                let ds = self.base.digits(cj);
                let parts: Vec<String> = ds
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d != 0)
                    .map(|(k, &d)| match (k, d) {
                        (0, d) => d.to_string(),
                        (1, 1) => "x".into(),
                        (1, d) => format!("{d}x"),
                        (k, 1) => format!("x^{k}"),
                        (k, d) => format!("{d}x^{k}"),
                    })
                    .collect();
                if parts.len() > 1 && j > 0 {
                    format!("({})", parts.join("+"))
                } else {
                    parts.join("+")
                }
            };
            let term = match (j, coeff.as_str()) {
                (0, _) => coeff,
                (1, "1") => "y".into(),
                (1, _) => format!("{coeff}y"),
                (_, "1") => format!("y^{j}"),
                _ => format!("{coeff}y^{j}"),
            };
            terms.push(term);
        }
        terms.join("+")
    }
}

/// Parsed field specification.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub m: u32,
    pub n: u32,
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `p^m^n`, `q^n` with q a prime power, and `q=<q or p^m>,n=<n>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid field spec {s:?}"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        let from_q = |q: u64, n: u64| -> Result<FieldSpec> {
            let (p, m) =
                prime_power(q).ok_or_else(|| Error::Parse(format!("{q} is not a prime power")))?;
            Ok(FieldSpec {
                p,
                m,
                n: u32::try_from(n).map_err(|_| bad())?,
            })
        };
        let s = s.trim();
        if s.contains('=') {
            let mut q = None;
            let mut n = None;
            for part in s.split(',') {
                let (k, v) = part.split_once('=').ok_or_else(bad)?;
                match k.trim() {
                    "q" => {
                        let v = v.trim();
                        q = Some(match v.split_once('^') {
                            Some((p, m)) => num(p)?.checked_pow(num(m)? as u32).ok_or_else(bad)?,
                            None => num(v)?,
                        });
                    }
                    "n" => n = Some(num(v)?),
                    _ => return Err(bad()),
                }
            }
            return from_q(q.ok_or_else(bad)?, n.ok_or_else(bad)?);
        }
        let parts: Vec<&str> = s.split('^').collect();
        match parts.as_slice() {
            [p, m, n] => {
                let p = num(p)?;
                if !is_prime(p) {
                    return Err(Error::NonPrime(p));
                }
                Ok(FieldSpec {
                    p: p as u32,
                    m: num(m)? as u32,
                    n: num(n)? as u32,
                })
            }
            [q, n] => from_q(num(q)?, num(n)?),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}^{}", self.p, self.m, self.n)
    }
}
