use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use super::{Multidegree, Polynomial};
use crate::error::{Error, Result};
use crate::exact::binomial;
use crate::geometry::{Matrix, Point};
use crate::gf::{Field, FieldElement};

/// Every exponent vector of total degree `<= d`, ascending in graded-lex order.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Multidegree> {
    let mut out: Vec<Multidegree> = (0..=d).flat_map(|w| Multidegree::of_weight(n, w)).collect();
    out.sort();
    out
}

/// The vanishing conditions have only the trivial solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoSolutionCertificate {
    pub equations: usize,
    pub unknowns: usize,
    /// Equals `unknowns`: the system has full column rank.
    pub rank: usize,
    pub hypothesis_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VanishingOutcome {
    Found {
        poly: Polynomial,
        /// Whether the dimension-count hypothesis guaranteed existence.
        hypothesis_holds: bool,
        equations: usize,
        unknowns: usize,
    },
    NoSolution(NoSolutionCertificate),
}

impl VanishingOutcome {
    pub fn poly(&self) -> Option<&Polynomial> {
        match self {
            VanishingOutcome::Found { poly, .. } => Some(poly),
            VanishingOutcome::NoSolution(_) => None,
        }
    }
}

/// Finds a nonzero polynomial of degree `<= d` vanishing at each target with
/// at least the requested multiplicity, or certifies that none exists.
///
/// The unknowns are the coefficients of all monomials of degree `<= d` in
/// ascending graded-lex order. Each point `x` with target `N` contributes one
/// equation `P^(i)(x) = 0` per `wt(i) < N`. The returned polynomial is the
/// kernel vector whose first free column is 1 and whose other free columns are 0.
pub fn find_vanishing_poly(
    field: &Field,
    n: usize,
    targets: &BTreeMap<Point, u32>,
    d: u32,
) -> Result<VanishingOutcome> {
    for x in targets.keys() {
        if x.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.dim(),
            });
        }
    }
    let monomials = monomials_up_to(n, d);
    let unknowns = monomials.len();
    let conditions: BigUint = targets
        .values()
        .map(|&m| binomial(m as u64 + n as u64 - 1, n as u64))
        .fold(BigUint::zero(), |a, b| a + b);
    let hypothesis_holds = conditions < binomial(d as u64 + n as u64, n as u64);

    let p = field.p();
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for (x, &mult) in targets {
        for w in 0..mult {
            for i in Multidegree::of_weight(n, w) {
                let row = monomials
                    .iter()
                    .map(|a| match a.checked_sub(&i) {
                        None => FieldElement::ZERO,
                        Some(rest) => {
                            let b = a
                                .exponents()
                                .iter()
                                .zip(i.exponents())
                                .fold(1u64, |acc, (&u, &v)| {
                                    acc * super::binomial_mod_p(u as u64, v as u64, p) as u64 % p as u64
                                });
                            let mono = rest
                                .exponents()
                                .iter()
                                .zip(x.coords())
                                .fold(FieldElement::ONE, |acc, (&k, &c)| {
                                    field.mul(acc, field.pow(c, k as u64))
                                });
                            field.mul(field.from_int(b as i64), mono)
                        }
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    let equations = rows.len();
    let system = Matrix::from_rows(unknowns, &rows);
    let kernel = system.null_space(field);
    match kernel.into_iter().next() {
        None => Ok(VanishingOutcome::NoSolution(NoSolutionCertificate {
            equations,
            unknowns,
            rank: unknowns,
            hypothesis_holds,
        })),
        Some(v) => {
            let poly = Polynomial::from_terms(field, n, monomials.into_iter().zip(v));
            Ok(VanishingOutcome::Found {
                poly,
                hypothesis_holds,
                equations,
                unknowns,
            })
        }
    }
}

/// Both sides of the finite-`m` counting inequality
/// `sum_x C(N|f(x)| + n - 1, n) >= C(d + n, n)` with `d = mq - r` and
/// `N = m(2q - 1)/r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyBound {
    pub m: u64,
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub holds: bool,
}

/// `values` are the `|f(x)|` over the whole space (zeros may be omitted).
pub fn key_bound(values: &[u64], q: u64, n: usize, r: u64, m: u64) -> Result<KeyBound> {
    if r == 0 {
        return Err(Error::BadRange("r must be positive".into()));
    }
    if m == 0 || !m.is_multiple_of(r) {
        return Err(Error::BadRange(format!("m = {m} must be a positive multiple of r = {r}")));
    }
    let big_n = m * (2 * q - 1) / r;
    let d = m * q - r;
    let n = n as u64;
    let lhs = values
        .iter()
        .filter(|&&v| v > 0)
        .map(|&v| binomial(big_n * v + n - 1, n))
        .fold(BigUint::zero(), |a, b| a + b);
    let rhs = binomial(d + n, n);
    Ok(KeyBound {
        m,
        holds: lhs >= rhs,
        lhs,
        rhs,
    })
}

/// Smallest multiple `m <= max_m` of `r` at which the inequality holds, if any.
pub fn key_bound_threshold(values: &[u64], q: u64, n: usize, r: u64, max_m: u64) -> Result<Option<KeyBound>> {
    let mut m = r;
    while m <= max_m {
        let kb = key_bound(values, q, n, r, m)?;
        if kb.holds {
            return Ok(Some(kb));
        }
        m += r;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Space;
    use crate::polymethod::Multiplicity;

    #[test]
    fn double_root_at_origin() {
        let f = Field::prime(3).unwrap();
        let sp = Space::new(f.clone(), 1);
        let targets = BTreeMap::from([(sp.point(&[0]), 2)]);
        let out = find_vanishing_poly(&f, 1, &targets, 2).unwrap();
        let p = out.poly().unwrap();
        let x2 = Polynomial::monomial(&f, Multidegree::new(vec![2]), f.one());
        assert_eq!(p, &x2);
    }

    #[test]
    fn vanishing_on_f2_squared() {
        let f = Field::prime(2).unwrap();
        let sp = Space::new(f.clone(), 2);
        let targets: BTreeMap<Point, u32> = (0..4).map(|i| (sp.point_at(i), 1)).collect();
        let out = find_vanishing_poly(&f, 2, &targets, 2).unwrap();
        let VanishingOutcome::Found { poly, hypothesis_holds, .. } = &out else {
            panic!("expected a solution");
        };
        assert!(hypothesis_holds);
        assert!(poly.degree().unwrap() <= 2);
        // canonical kernel element: y^2 + y
        let expect = Polynomial::from_terms(
            &f,
            2,
            [(Multidegree::new(vec![0, 2]), f.one()), (Multidegree::new(vec![0, 1]), f.one())],
        );
        assert_eq!(poly, &expect);
        for x in targets.keys() {
            assert!(poly.multiplicity(x) >= Multiplicity::Finite(1));
        }
    }

    #[test]
    fn boundary_of_hypothesis_uses_solver() {
        let f = Field::prime(3).unwrap();
        let sp = Space::new(f.clone(), 2);
        let targets = BTreeMap::from([(sp.point(&[0, 0]), 3)]);
        let out = find_vanishing_poly(&f, 2, &targets, 2).unwrap();
        match out {
            VanishingOutcome::NoSolution(c) => {
                assert!(!c.hypothesis_holds);
                assert_eq!(c.equations, 6);
                assert_eq!(c.unknowns, 6);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn key_bound_sides() {
        // f = 1 on a single point of F_2^1, r = 1, m = 1: N = 3, d = 1
        let kb = key_bound(&[1], 2, 1, 1, 1).unwrap();
        assert_eq!(kb.lhs, BigUint::from(3u32));
        assert_eq!(kb.rhs, BigUint::from(2u32));
        assert!(kb.holds);
        assert!(key_bound(&[1], 2, 1, 2, 3).is_err());
    }
}
