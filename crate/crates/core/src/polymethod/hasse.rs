use std::fmt;

use super::{Multidegree, Polynomial};
use crate::geometry::Point;
use crate::gf::FieldElement;

/// Vanishing order of a polynomial at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    Finite(u32),
    /// Only the zero polynomial.
    Infinite,
}

impl Multiplicity {
    pub fn finite(self) -> Option<u32> {
        match self {
            Multiplicity::Finite(m) => Some(m),
            Multiplicity::Infinite => None,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(m) => write!(f, "{m}"),
            Multiplicity::Infinite => write!(f, "inf"),
        }
    }
}

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod_p(mut n: u64, mut k: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (nd, kd) = (n % p64, k % p64);
        if kd > nd {
            return 0;
        }
        // C(nd, kd) with nd < p: multiplicative formula, denominators invertible
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..kd {
            num = num * ((nd - i) % p64) % p64;
            den = den * ((i + 1) % p64) % p64;
        }
        acc = acc * num % p64 * mod_inv(den, p64) % p64;
        n /= p64;
        k /= p64;
    }
    acc as u32
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

impl Polynomial {
    /// Product of per-coordinate binomials `C(a_j, i_j)` reduced into the field.
    fn binom_product(&self, a: &Multidegree, i: &Multidegree) -> FieldElement {
        let p = self.field.p();
        let v = a
            .exponents()
            .iter()
            .zip(i.exponents())
            .fold(1u64, |acc, (&x, &y)| acc * binomial_mod_p(x as u64, y as u64, p) as u64 % p as u64);
        self.field.from_int(v as i64)
    }

    /// Coefficient of `z^i` in `P(x + z)`: the term `c x^a` contributes
    /// `C(a, i) c x^(a - i)` whenever `a >= i` componentwise.
    pub fn hasse_derivative(&self, i: &Multidegree) -> Polynomial {
        assert_eq!(i.n(), self.n, "derivative order length");
        let f = &self.field;
        Polynomial::from_terms(
            f,
            self.n,
            self.terms.iter().filter_map(|(a, &c)| {
                let rest = a.checked_sub(i)?;
                Some((rest, f.mul(c, self.binom_product(a, i))))
            }),
        )
    }

    /// `P^(i)(a)` without materialising the derivative.
    pub fn hasse_eval(&self, i: &Multidegree, point: &Point) -> FieldElement {
        let f = &self.field;
        self.terms.iter().fold(FieldElement::ZERO, |acc, (a, &c)| match a.checked_sub(i) {
            None => acc,
            Some(rest) => {
                let b = self.binom_product(a, i);
                if b.is_zero() {
                    return acc;
                }
                f.add(acc, f.mul(f.mul(c, b), self.eval_monomial(&rest, point.coords())))
            }
        })
    }

    /// Largest `N` such that every Hasse derivative of weight `< N` vanishes at `a`.
    pub fn multiplicity(&self, a: &Point) -> Multiplicity {
        assert_eq!(a.dim(), self.n, "point dimension");
        let Some(deg) = self.degree() else {
            return Multiplicity::Infinite;
        };
        for w in 0..=deg {
            let nonvanishing = Multidegree::of_weight(self.n, w)
                .iter()
                .filter(|i| self.terms.keys().any(|t| t.dominates(i)))
                .any(|i| !self.hasse_eval(i, a).is_zero());
            if nonvanishing {
                return Multiplicity::Finite(w);
            }
        }
        unreachable!("a top-degree derivative of a nonzero polynomial is a nonzero constant")
    }
}
