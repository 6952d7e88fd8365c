//! Sparse multivariate polynomials over `F_q` with Hasse derivatives and
//! multiplicities, plus the computable ingredients of the
//! multiplicity-based Kakeya argument.

mod hasse;
mod interp;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::gf::{Field, FieldElement};

pub use hasse::{binomial_mod_p, Multiplicity};
pub use interp::{
    find_vanishing_poly, key_bound, key_bound_threshold, monomials_up_to, KeyBound, NoSolutionCertificate,
    VanishingOutcome,
};

/// Exponent vector of a monomial. Ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multidegree(Vec<u32>);

impl Multidegree {
    pub fn new(exponents: Vec<u32>) -> Self {
        Multidegree(exponents)
    }

    pub fn zero(n: usize) -> Self {
        Multidegree(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn wt(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &Multidegree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn checked_sub(&self, other: &Multidegree) -> Option<Multidegree> {
        self.dominates(other)
            .then(|| Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn add(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All exponent vectors in `n` variables of total weight exactly `w`.
    pub fn of_weight(n: usize, w: u32) -> Vec<Multidegree> {
        fn rec(n: usize, w: u32, prefix: &mut Vec<u32>, out: &mut Vec<Multidegree>) {
            if prefix.len() + 1 == n {
                prefix.push(w);
                out.push(Multidegree(prefix.clone()));
                prefix.pop();
                return;
            }
            for first in (0..=w).rev() {
                prefix.push(first);
                rec(n, w - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if w == 0 {
                out.push(Multidegree(Vec::new()));
            }
            return out;
        }
        rec(n, w, &mut Vec::with_capacity(n), &mut out);
        out
    }
}

impl Ord for Multidegree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.wt().cmp(&other.wt()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Multidegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Polynomial in `n` variables with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    n: usize,
    terms: BTreeMap<Multidegree, FieldElement>,
}

impl Polynomial {
    pub fn zero(field: &Field, n: usize) -> Self {
        Polynomial {
            field: field.clone(),
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, n: usize, c: FieldElement) -> Self {
        Self::monomial(field, Multidegree::zero(n), c)
    }

    pub fn monomial(field: &Field, exps: Multidegree, c: FieldElement) -> Self {
        let mut p = Self::zero(field, exps.n());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The variable `x_i`.
    pub fn var(field: &Field, n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(field, Multidegree(e), FieldElement::ONE)
    }

    /// Sums the given terms; repeated exponents accumulate.
    pub fn from_terms(field: &Field, n: usize, terms: impl IntoIterator<Item = (Multidegree, FieldElement)>) -> Self {
        let mut p = Self::zero(field, n);
        for (e, c) in terms {
            assert_eq!(e.n(), n, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    /// Univariate polynomial from dense coefficients, constant first.
    pub fn univariate(field: &Field, coeffs: &[FieldElement]) -> Self {
        Self::from_terms(
            field,
            1,
            coeffs.iter().enumerate().map(|(i, &c)| (Multidegree(vec![i as u32]), c)),
        )
    }

    fn add_term(&mut self, e: Multidegree, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = f.add(*v, c);
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|e| e.wt())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Multidegree, FieldElement)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, e: &Multidegree) -> FieldElement {
        self.terms.get(e).copied().unwrap_or(FieldElement::ZERO)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let f = &self.field;
        Polynomial {
            field: f.clone(),
            n: self.n,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElement) -> Polynomial {
        let f = &self.field;
        Polynomial::from_terms(f, self.n, self.terms.iter().map(|(e, &a)| (e.clone(), f.mul(a, c))))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let f = &self.field;
        let mut out = Polynomial::zero(f, self.n);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                out.add_term(e1.add(e2), f.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(&self.field, self.n, FieldElement::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn eval_monomial(&self, e: &Multidegree, a: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        e.0.iter()
            .zip(a)
            .fold(FieldElement::ONE, |acc, (&k, &x)| f.mul(acc, f.pow(x, k as u64)))
    }

    pub fn eval(&self, a: &Point) -> FieldElement {
        assert_eq!(a.dim(), self.n, "evaluation point dimension");
        let f = &self.field;
        self.terms.iter().fold(FieldElement::ZERO, |acc, (e, &c)| {
            f.add(acc, f.mul(c, self.eval_monomial(e, a.coords())))
        })
    }

    /// Top-degree homogeneous component.
    pub fn homogeneous_part(&self) -> Result<Polynomial> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok(Polynomial {
            field: self.field.clone(),
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.wt() == d)
                .map(|(e, &c)| (e.clone(), c))
                .collect(),
        })
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut w = self.terms.keys().map(|e| e.wt());
        match w.next() {
            None => true,
            Some(first) => w.all(|x| x == first),
        }
    }

    /// `t -> P(a + b t)` as a univariate polynomial.
    pub fn restrict_to_line(&self, a: &Point, b: &Point) -> Result<Polynomial> {
        for p in [a, b] {
            if p.dim() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: p.dim(),
                });
            }
        }
        if b.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let f = &self.field;
        let linear: Vec<Polynomial> = a
            .coords()
            .iter()
            .zip(b.coords())
            .map(|(&ai, &bi)| Polynomial::univariate(f, &[ai, bi]))
            .collect();
        let mut out = Polynomial::zero(f, 1);
        for (e, &c) in &self.terms {
            let mut term = Polynomial::constant(f, 1, c);
            for (lin, &k) in linear.iter().zip(&e.0) {
                if k > 0 {
                    term = term.mul(&lin.pow(k));
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// One term per line: `coeff : e1 e2 ... en`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (e, &c) in &self.terms {
            let exps: Vec<String> = e.0.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{} : {}\n", self.field.format_element(c), exps.join(" ")));
        }
        s
    }

    pub fn parse_text(field: &Field, n: usize, text: &str) -> Result<Polynomial> {
        let mut p = Polynomial::zero(field, n);
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let ln = i + 1;
            let (c, e) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(ln, "expected `coeff : exponents`"))?;
            let c = field.parse_element(c).map_err(|err| Error::parse(ln, err.to_string()))?;
            let e: Vec<u32> = e
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| Error::parse(ln, format!("bad exponent `{t}`"))))
                .collect::<Result<_>>()?;
            if e.len() != n {
                return Err(Error::parse(ln, format!("expected {n} exponents, found {}", e.len())));
            }
            p.add_term(Multidegree(e), c);
        }
        Ok(p)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| format!("{}*x^{:?}", c.index(), e.0))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Outcome of the multiplicity form of the Schwartz-Zippel bound on a grid `U^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SzAudit {
    pub sum: u64,
    pub bound: u64,
    pub ok: bool,
}

/// Sums `mult(P, a)` over `a in U^n` and compares with `deg(P) * |U|^(n-1)`.
pub fn sz_mult_audit(p: &Polynomial, subset: &[FieldElement]) -> Result<SzAudit> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)? as u64;
    let mut u = subset.to_vec();
    u.sort();
    u.dedup();
    let n = p.n();
    let size = u.len() as u64;
    let bound = if n == 0 { 0 } else { d * size.pow(n as u32 - 1) };
    let mut sum = 0u64;
    let total = size.pow(n as u32);
    for mut idx in 0..total {
        let mut coords = vec![FieldElement::ZERO; n];
        for c in coords.iter_mut().rev() {
            *c = u[(idx % size) as usize];
            idx /= size;
        }
        match p.multiplicity(&Point::new(coords)) {
            Multiplicity::Finite(m) => sum += m as u64,
            Multiplicity::Infinite => unreachable!("nonzero polynomial"),
        }
    }
    Ok(SzAudit {
        sum,
        bound,
        ok: sum <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(field: &Field, n: usize, terms: &[(i64, &[u32])]) -> Polynomial {
        Polynomial::from_terms(
            field,
            n,
            terms.iter().map(|(c, e)| (Multidegree::new(e.to_vec()), field.from_int(*c))),
        )
    }

    #[test]
    fn grlex_order() {
        let a = Multidegree::new(vec![0, 2]);
        let b = Multidegree::new(vec![1, 1]);
        let c = Multidegree::new(vec![3, 0]);
        assert!(a < b && b < c);
        assert!(Multidegree::new(vec![0, 1]) < Multidegree::new(vec![1, 0]));
        assert_eq!(Multidegree::of_weight(3, 2).len(), 6);
        assert_eq!(Multidegree::of_weight(1, 4), vec![Multidegree::new(vec![4])]);
    }

    #[test]
    fn homogeneous_parts() {
        let f3 = Field::prime(3).unwrap();
        let p = poly(&f3, 2, &[(1, &[2, 1]), (1, &[1, 1]), (1, &[0, 1])]);
        assert_eq!(p.homogeneous_part().unwrap(), poly(&f3, 2, &[(1, &[2, 1])]));
        let q = poly(&f3, 1, &[(1, &[2]), (1, &[1]), (1, &[0])]);
        assert_eq!(q.homogeneous_part().unwrap(), poly(&f3, 1, &[(1, &[2])]));
        let h = poly(&f3, 2, &[(1, &[2, 0]), (2, &[1, 1])]);
        assert_eq!(h.homogeneous_part().unwrap(), h);
        assert_eq!(Polynomial::zero(&f3, 2).homogeneous_part(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn line_restrictions() {
        let f3 = Field::prime(3).unwrap();
        let xy = poly(&f3, 2, &[(1, &[1, 1])]);
        let a = Point::new(vec![f3.zero(), f3.zero()]);
        let diag = Point::new(vec![f3.one(), f3.one()]);
        assert_eq!(xy.restrict_to_line(&a, &diag).unwrap(), poly(&f3, 1, &[(1, &[2])]));
        let axis = Point::new(vec![f3.one(), f3.zero()]);
        let r = xy.restrict_to_line(&a, &axis).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.multiplicity(&Point::new(vec![f3.zero()])), Multiplicity::Infinite);
        assert_eq!(xy.restrict_to_line(&a, &a), Err(Error::ZeroDirection));

        let lin = poly(&f3, 2, &[(2, &[1, 0]), (1, &[0, 1]), (1, &[0, 0])]);
        let r = lin.restrict_to_line(&diag, &axis).unwrap();
        assert!(r.degree().unwrap() <= 1);
    }

    #[test]
    fn sz_audit_examples() {
        let f3 = Field::prime(3).unwrap();
        let all: Vec<_> = f3.elements().collect();
        let c = poly(&f3, 2, &[(2, &[0, 0])]);
        assert_eq!(sz_mult_audit(&c, &all).unwrap(), SzAudit { sum: 0, bound: 0, ok: true });
        let xy = poly(&f3, 2, &[(1, &[1, 1])]);
        assert_eq!(sz_mult_audit(&xy, &all).unwrap(), SzAudit { sum: 6, bound: 6, ok: true });
        for q in [2u64, 3, 5, 7] {
            let f = Field::prime(q).unwrap();
            let frob = poly(&f, 1, &[(1, &[q as u32]), (-1, &[1])]);
            let els: Vec<_> = f.elements().collect();
            assert_eq!(sz_mult_audit(&frob, &els).unwrap(), SzAudit { sum: q, bound: q, ok: true });
        }
        assert_eq!(sz_mult_audit(&Polynomial::zero(&f3, 2), &all), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn text_format() {
        let f4 = Field::new(2, 2).unwrap();
        let x = f4.from_coeffs(&[0, 1]).unwrap();
        let p = Polynomial::from_terms(
            &f4,
            2,
            [
                (Multidegree::new(vec![1, 0]), x),
                (Multidegree::new(vec![0, 0]), f4.one()),
            ],
        );
        let text = p.to_text();
        assert_eq!(text, "1 0 : 0 0\n0 1 : 1 0\n");
        assert_eq!(Polynomial::parse_text(&f4, 2, &text).unwrap(), p);
        assert!(Polynomial::parse_text(&f4, 2, "1 0 : 1").is_err());
    }
}
