//! Exact arithmetic in prime fields `F_p` and extension fields `F_{p^e}`.
//!
//! An element is the coefficient vector of a polynomial of degree `< e` over
//! `F_p`, packed into a single integer as `sum c_i * p^i`. The packing is
//! bijective, so element equality is coefficient-vector equality and the
//! packed value doubles as a dense index into `0..q`.

mod extension;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use extension::ExtensionIso;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Orders up to this size get precomputed addition and multiplication tables.
const TABLE_LIMIT: u32 = 256;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Packed coefficient index in `0..q`.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Element with packed index `i`; callers guarantee `i < q`.
#[inline]
pub(crate) fn raw_element(i: u32) -> FieldElement {
    FieldElement(i)
}

/// A finite field `F_{p^e}` together with its defining modulus.
///
/// Cheap to clone; the tables live behind an `Arc`.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, low degree first, `e + 1` entries. Empty for prime fields.
    modulus: Vec<u32>,
    add: Option<Vec<u16>>,
    mul: Option<Vec<u16>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}", self.p(), self.e())?;
        if self.e() > 1 {
            write!(f, ", modulus {:?}", self.0.modulus)?;
        }
        write!(f, ")")
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q` into `(p, e)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl Field {
    /// Builds `F_{p^e}` using the lexicographically smallest monic irreducible
    /// modulus of degree `e`, comparing coefficients from the constant term up.
    pub fn new(p: u64, e: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::CompositeP(p));
        }
        if e == 0 {
            return Err(Error::BadRange("extension degree must be at least 1".into()));
        }
        let q = checked_order(p, e)?;
        let p = p as u32;
        if e == 1 {
            return Ok(Self::assemble(p, 1, q, Vec::new()));
        }
        let modulus = smallest_irreducible(p, e as usize);
        Ok(Self::assemble(p, e, q, modulus))
    }

    pub fn prime(p: u64) -> Result<Field> {
        Self::new(p, 1)
    }

    /// Field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Field> {
        let (p, e) = prime_power(q).ok_or(Error::CompositeP(q))?;
        Self::new(p, e)
    }

    /// Builds `F_{p^e}` from an explicit monic modulus (low degree first, leading 1 included).
    pub fn with_modulus(p: u64, modulus: Vec<u32>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::CompositeP(p));
        }
        if modulus.len() < 2 {
            return Err(Error::BadRange("modulus must have degree at least 1".into()));
        }
        let e = (modulus.len() - 1) as u32;
        let q = checked_order(p, e)?;
        let p = p as u32;
        if *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadRange(format!("modulus {modulus:?} is not monic over F_{p}")));
        }
        if e == 1 {
            return Ok(Self::assemble(p, 1, q, Vec::new()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::BadRange(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        Ok(Self::assemble(p, e, q, modulus))
    }

    fn assemble(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Field {
        let mut inner = Inner {
            p,
            e,
            q,
            modulus,
            add: None,
            mul: None,
        };
        if q <= TABLE_LIMIT {
            let qs = q as usize;
            let mut add = vec![0u16; qs * qs];
            let mut mul = vec![0u16; qs * qs];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = inner.slow_add(a, b) as u16;
                    mul[(a * q + b) as usize] = inner.slow_mul(a, b) as u16;
                }
            }
            inner.add = Some(add);
            inner.mul = Some(mul);
        }
        Field(Arc::new(inner))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.0.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Monic modulus, low degree first; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Element with packed index `i`.
    pub fn element(&self, i: u32) -> Result<FieldElement> {
        if i < self.q() {
            Ok(FieldElement(i))
        } else {
            Err(Error::BadRange(format!("element index {i} >= q = {}", self.q())))
        }
    }

    /// Image of the integer `n` under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p() as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.e() as usize || coeffs.iter().any(|&c| c >= self.p()) {
            return Err(Error::BadRange(format!(
                "{coeffs:?} is not a coefficient vector of length {} over F_{}",
                self.e(),
                self.p()
            )));
        }
        Ok(FieldElement(self.0.pack(coeffs)))
    }

    /// Coefficient vector of length `e`, constant term first.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        self.0.unpack(a.0)
    }

    /// All elements in packed-index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q()).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let inner = &*self.0;
        match &inner.add {
            Some(t) => FieldElement(t[(a.0 * inner.q + b.0) as usize] as u32),
            None => FieldElement(inner.slow_add(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let inner = &*self.0;
        if inner.e == 1 {
            return FieldElement((inner.p - a.0) % inner.p);
        }
        let c: Vec<u32> = inner.unpack(a.0).into_iter().map(|c| (inner.p - c) % inner.p).collect();
        FieldElement(inner.pack(&c))
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let inner = &*self.0;
        match &inner.mul {
            Some(t) => FieldElement(t[(a.0 * inner.q + b.0) as usize] as u32),
            None => FieldElement(inner.slow_mul(a.0, b.0)),
        }
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.q() as u64 - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `header line "p e"`, then the full monic modulus (omitted when `e = 1`).
    pub fn to_spec_string(&self) -> String {
        let mut s = format!("{} {}", self.p(), self.e());
        if self.e() > 1 {
            s.push('\n');
            s.push_str(&join_digits(self.modulus()));
        }
        s
    }

    pub fn parse_spec(text: &str) -> Result<Field> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::parse(1, "missing field header"))?;
        let nums = parse_numbers(header, 1)?;
        if nums.len() != 2 {
            return Err(Error::parse(1, "expected `p e`"));
        }
        let (p, e) = (nums[0], nums[1] as u32);
        if e <= 1 {
            return Field::new(p, e);
        }
        let modulus = lines.next().ok_or_else(|| Error::parse(2, "missing modulus"))?;
        let modulus: Vec<u32> = parse_numbers(modulus, 2)?.into_iter().map(|c| c as u32).collect();
        if modulus.len() != e as usize + 1 {
            return Err(Error::parse(2, format!("modulus must have {} coefficients", e + 1)));
        }
        Field::with_modulus(p, modulus)
    }

    /// Element as `e` space-separated base-`p` digits, constant term first.
    pub fn format_element(&self, a: FieldElement) -> String {
        join_digits(&self.coeffs(a))
    }

    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let digits: Vec<u32> = text
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|_| Error::parse(0, format!("bad digit `{t}`"))))
            .collect::<Result<_>>()?;
        self.from_coeffs(&digits)
    }
}

fn checked_order(p: u64, e: u32) -> Result<u32> {
    let mut q: u64 = 1;
    for _ in 0..e {
        q = q.saturating_mul(p);
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge(format!("{p}^{e}")));
        }
    }
    Ok(q as u32)
}

pub(crate) fn join_digits(d: &[u32]) -> String {
    d.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

pub(crate) fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| Error::parse(lineno, format!("bad integer `{t}`"))))
        .collect()
}

impl Inner {
    fn unpack(&self, mut a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    fn pack(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (x, y) = (self.unpack(a), self.unpack(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.pack(&s)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let prod = poly_mul(&self.unpack(a), &self.unpack(b), self.p);
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.e as usize, 0);
        self.pack(&r)
    }
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let p = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
        }
    }
    out.into_iter().map(|c| c as u32).collect()
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    while r.len() > dm {
        let lead = r.pop().unwrap() % p64;
        if lead != 0 {
            let off = r.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                r[off + i] = (r[off + i] + p64 - (lead * c as u64) % p64) % p64;
            }
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Exhaustive trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                g.push((t % p as u64) as u32);
                t /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, e: usize) -> Vec<u32> {
    let total = (p as u64).pow(e as u32);
    for idx in 0..total {
        // c_0 is the most significant digit of the lexicographic counter.
        let mut f = vec![0u32; e + 1];
        let mut t = idx;
        for j in (0..e).rev() {
            f[j] = (t % p as u64) as u32;
            t /= p as u64;
        }
        f[e] = 1;
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
