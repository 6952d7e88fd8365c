//! Fast invariant checks over tiny instances, run by `flab selftest`.

use num_bigint::BigUint;
use num_traits::Pow;

use crate::budget::Budget;
use crate::entropy::{ab_constants, check_entropic_bound, norm_bound_check, AbDirection, IntegerFunction, LogConstant, RationalDistribution};
use crate::error::Result;
use crate::exact::rat;
use crate::furstenberg::{bound_table, search_extremal, FurstenbergInstance, SearchOptions};
use crate::geometry::{enumerate_flats, enumerate_subspaces, qbinomial, Flat, Point, PointSet, Space};
use crate::gf::{ExtensionIso, Field};
use crate::incidence::{contained_subflats, haemers_check, FlatFamily};
use crate::polymethod::{Multidegree, Multiplicity, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: u64,
    pub ok: bool,
    pub detail: String,
}

type Check = fn() -> Result<(u64, Option<String>)>;

const CHECKS: &[(&str, Check)] = &[
    ("field-axioms", field_axioms),
    ("qbinomial-identities", qbinomial_identities),
    ("extremal-values", extremal_values),
    ("entropic-bound", entropic_bound),
    ("norm-bound", norm_bound),
    ("multiplicity-oracle", multiplicity_oracle),
    ("haemers", haemers),
    ("contained-subflats", subflats),
    ("extension-lines", extension_lines),
    ("ab-round-trip", ab_round_trip),
];

/// Runs every check; errors are reported as failures, not propagated.
pub fn run_all() -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|(name, f)| match f() {
            Ok((cases, None)) => CheckResult {
                name,
                cases,
                ok: true,
                detail: String::new(),
            },
            Ok((cases, Some(why))) => CheckResult {
                name,
                cases,
                ok: false,
                detail: why,
            },
            Err(e) => CheckResult {
                name,
                cases: 0,
                ok: false,
                detail: e.to_string(),
            },
        })
        .collect()
}

fn field_axioms() -> Result<(u64, Option<String>)> {
    let mut cases = 0;
    for q in [4u64, 8, 9] {
        let f = Field::of_order(q)?;
        let els: Vec<_> = f.elements().collect();
        for &a in &els {
            for &b in &els {
                cases += 1;
                let ok = f.add(a, b) == f.add(b, a)
                    && f.mul(a, b) == f.mul(b, a)
                    && (b.is_zero() || f.mul(f.div(a, b)?, b) == a)
                    && els.iter().all(|&c| f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                if !ok {
                    return Ok((cases, Some(format!("axiom failure in F_{q} at {}, {}", a.index(), b.index()))));
                }
            }
        }
    }
    Ok((cases, None))
}

fn qbinomial_identities() -> Result<(u64, Option<String>)> {
    let mut cases = 0;
    for q in [2u64, 3, 4, 5] {
        let qb = BigUint::from(q);
        for n in 1..=6u32 {
            for k in 0..=n {
                cases += 1;
                let v = qbinomial(n, k, q)?;
                if v != qbinomial(n, n - k, q)? {
                    return Ok((cases, Some(format!("symmetry fails at q={q} n={n} k={k}"))));
                }
                if k >= 1 && k < n {
                    let p1 = Pow::pow(&qb, k) * qbinomial(n - 1, k, q)? + qbinomial(n - 1, k - 1, q)?;
                    let p2 = qbinomial(n - 1, k, q)? + Pow::pow(&qb, n - k) * qbinomial(n - 1, k - 1, q)?;
                    if v != p1 || v != p2 {
                        return Ok((cases, Some(format!("Pascal fails at q={q} n={n} k={k}"))));
                    }
                }
                if q.pow(n) <= 256 {
                    let f = Field::of_order(q)?;
                    let count = enumerate_subspaces(&f, n as usize, k as usize, Budget::DEFAULT)?.count();
                    if BigUint::from(count) != v {
                        return Ok((cases, Some(format!("enumeration count fails at q={q} n={n} k={k}"))));
                    }
                }
            }
        }
    }
    Ok((cases, None))
}

fn extremal_values() -> Result<(u64, Option<String>)> {
    let f2 = Field::prime(2)?;
    let mut cases = 0;
    for (n, k, m, want) in [(2usize, 1usize, 2u64, 3u64), (2, 1, 1, 1)] {
        cases += 1;
        let inst = FurstenbergInstance::new(f2.clone(), n, k, m)?;
        let got = search_extremal(&inst, SearchOptions::default())?.exact();
        if got != Some(want) {
            return Ok((cases, Some(format!("K(2,{n},{k},{m}) = {got:?}, expected {want}"))));
        }
        if !bound_table(&inst, None)?.admits(want) {
            return Ok((cases, Some(format!("K(2,{n},{k},{m}) violates a lower bound"))));
        }
    }
    Ok((cases, None))
}

fn subsets(space: &Space) -> Vec<PointSet> {
    let pts: Vec<Point> = space.points(Budget::DEFAULT).expect("tiny").collect();
    (1u32..1 << pts.len())
        .map(|mask| {
            let chosen = (0..pts.len()).filter(|i| mask >> i & 1 == 1).map(|i| pts[i].clone());
            PointSet::from_points(space.clone(), chosen).expect("same space")
        })
        .collect()
}

fn entropic_bound() -> Result<(u64, Option<String>)> {
    let sp = Space::new(Field::prime(2)?, 2);
    let mut cases = 0;
    for s in subsets(&sp) {
        cases += 1;
        let r = check_entropic_bound(&RationalDistribution::uniform(&s)?, 1, Budget::DEFAULT)?;
        if !r.ok() {
            return Ok((cases, Some(format!("bound fails on a {}-point set", s.len()))));
        }
    }
    Ok((cases, None))
}

fn norm_bound() -> Result<(u64, Option<String>)> {
    let sp = Space::new(Field::prime(2)?, 2);
    let pts: Vec<Point> = sp.points(Budget::DEFAULT)?.collect();
    let mut cases = 0;
    for code in 0..81u32 {
        let vals: Vec<i64> = (0..4).map(|i| (code / 3u32.pow(i) % 3) as i64 - 1).collect();
        let f = IntegerFunction::new(sp.clone(), pts.iter().cloned().zip(vals))?;
        let (floor, _) = f.heaviest_line_floor(Budget::DEFAULT)?;
        for r in 1..=floor {
            cases += 1;
            let rep = norm_bound_check(&f, r, Budget::DEFAULT)?;
            if !rep.hypothesis_ok || !rep.ok {
                return Ok((cases, Some(format!("norm bound fails for code {code}, r = {r}"))));
            }
        }
    }
    Ok((cases, None))
}

/// Multiplicity read off `P(a + z)` built with ring operations only.
pub fn shifted_multiplicity(p: &Polynomial, a: &Point) -> Multiplicity {
    let f = p.field();
    let n = p.n();
    let shifted_vars: Vec<Polynomial> = (0..n)
        .map(|j| Polynomial::var(f, n, j).add(&Polynomial::constant(f, n, a.coords()[j])))
        .collect();
    let mut shifted = Polynomial::zero(f, n);
    for (e, c) in p.terms() {
        let mut term = Polynomial::constant(f, n, c);
        for (j, &k) in e.exponents().iter().enumerate() {
            term = term.mul(&shifted_vars[j].pow(k));
        }
        shifted = shifted.add(&term);
    }
    shifted
        .terms()
        .map(|(e, _)| e.wt())
        .min()
        .map_or(Multiplicity::Infinite, Multiplicity::Finite)
}

fn multiplicity_oracle() -> Result<(u64, Option<String>)> {
    let f = Field::prime(2)?;
    let sp = Space::new(f.clone(), 2);
    let monos: Vec<Multidegree> = (0..=2).flat_map(|w| Multidegree::of_weight(2, w)).collect();
    let mut cases = 0;
    for mask in 0u32..1 << monos.len() {
        let p = Polynomial::from_terms(
            &f,
            2,
            monos.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| (e.clone(), f.one())),
        );
        for a in sp.points(Budget::DEFAULT)? {
            cases += 1;
            if p.multiplicity(&a) != shifted_multiplicity(&p, &a) {
                return Ok((cases, Some(format!("multiplicity mismatch for {}", p.to_text().trim()))));
            }
        }
    }
    Ok((cases, None))
}

fn haemers() -> Result<(u64, Option<String>)> {
    let sp = Space::new(Field::prime(2)?, 2);
    let lines: Vec<Flat> = enumerate_flats(&sp.field, 2, 1, Budget::DEFAULT)?.collect();
    let mut sets = subsets(&sp);
    sets.push(PointSet::new(sp.clone()));
    let mut cases = 0;
    for s in &sets {
        for mask in 0u32..1 << lines.len() {
            cases += 1;
            let fam = FlatFamily::new(
                sp.clone(),
                1,
                (0..lines.len()).filter(|i| mask >> i & 1 == 1).map(|i| lines[i].clone()),
            )?;
            if !haemers_check(s, &fam)?.ok {
                return Ok((cases, Some(format!("Haemers bound fails for family mask {mask}"))));
            }
        }
    }
    Ok((cases, None))
}

/// Every choice of one of the two cosets per plane direction in `F_2^3`.
pub fn plane_direction_families() -> Result<Vec<FlatFamily>> {
    let f = Field::prime(2)?;
    let sp = Space::new(f.clone(), 3);
    let dirs: Vec<_> = enumerate_subspaces(&f, 3, 2, Budget::DEFAULT)?.collect();
    let off: Vec<Point> = dirs
        .iter()
        .map(|d| {
            sp.points(Budget::DEFAULT)
                .expect("tiny")
                .find(|p| !d.contains(&f, p.coords()))
                .expect("proper subspace")
        })
        .collect();
    (0u32..1 << dirs.len())
        .map(|mask| {
            let flats = dirs.iter().zip(&off).enumerate().map(|(i, (d, p))| {
                let through = if mask >> i & 1 == 1 { p.clone() } else { Point::zero(3) };
                Flat::new(&f, d.clone(), &through)
            });
            FlatFamily::new(sp.clone(), 2, flats)
        })
        .collect()
}

fn subflats() -> Result<(u64, Option<String>)> {
    let mut cases = 0;
    for fam in plane_direction_families()? {
        cases += 1;
        let r = contained_subflats(&fam, 1, SearchOptions::default())?;
        if !r.ok || r.bound != BigUint::from(21u32) {
            return Ok((cases, Some(format!("subflat count {} below bound {}", r.count, r.bound))));
        }
    }
    Ok((cases, None))
}

fn extension_lines() -> Result<(u64, Option<String>)> {
    let f2 = Field::prime(2)?;
    let f4 = Field::of_order(4)?;
    let iso = ExtensionIso::new(&f2, &f4)?;
    let mut cases = 0;
    for line in enumerate_subspaces(&f4, 2, 1, Budget::DEFAULT)? {
        cases += 1;
        if iso.lift_subspace(&line).rank() != 2 {
            return Ok((cases, Some("a lifted line is not a plane".into())));
        }
    }
    Ok((cases, None))
}

fn ab_round_trip() -> Result<(u64, Option<String>)> {
    let mut cases = 0;
    for (q, n, k) in [(2u64, 3usize, 1usize), (3, 4, 2), (5, 3, 2)] {
        for twice_t in 0..=2 * n as i64 {
            cases += 1;
            let c = LogConstant::new(q, rat(twice_t, 2))?;
            let back = ab_constants(AbDirection::BtoA, &ab_constants(AbDirection::AtoB, &c, n, k)?, n, k)?;
            if back != c {
                return Ok((cases, Some(format!("round trip fails for {c}"))));
            }
        }
    }
    Ok((cases, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for r in run_all() {
            assert!(r.ok, "{}: {}", r.name, r.detail);
            assert!(r.cases > 0, "{}", r.name);
        }
    }

    #[test]
    fn shifted_oracle_examples() {
        let f = Field::prime(5).unwrap();
        let sp = Space::new(f.clone(), 2);
        let p = Polynomial::monomial(&f, Multidegree::new(vec![2, 1]), f.one());
        assert_eq!(shifted_multiplicity(&p, &sp.point(&[0, 0])), Multiplicity::Finite(3));
        assert_eq!(shifted_multiplicity(&p, &sp.point(&[0, 1])), Multiplicity::Finite(2));
        assert_eq!(shifted_multiplicity(&p, &sp.point(&[1, 1])), Multiplicity::Finite(0));
    }

    #[test]
    fn there_are_128_families() {
        assert_eq!(plane_direction_families().unwrap().len(), 128);
    }
}
