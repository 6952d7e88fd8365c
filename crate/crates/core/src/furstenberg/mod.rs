//! `(k, m)`-Furstenberg sets: verification with witnesses, constructions,
//! bound tables and exhaustive extremal search.

mod bounds;
mod search;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Pow;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::entropy::OntoLinearMap;
use crate::error::{Error, Result};
use crate::geometry::{enumerate_subspaces, qbinomial, Flat, Point, PointSet, Space, Subspace};
use crate::gf::{ExtensionIso, Field};

pub use bounds::{bound_table, BoundKind, BoundReport, BoundRow};
pub use search::{search_extremal, SearchOptions, SearchOutcome};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FurstenbergInstance {
    pub field: Field,
    pub n: usize,
    pub k: usize,
    pub m: u64,
}

impl FurstenbergInstance {
    pub fn new(field: Field, n: usize, k: usize, m: u64) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidInstance(format!("need 1 <= k < n, got k = {k}, n = {n}")));
        }
        let q = field.q() as u64;
        let qk = BigUint::from(q).pow(k as u32);
        if m == 0 || BigUint::from(m) > qk {
            return Err(Error::InvalidInstance(format!("need 1 <= m <= q^k = {qk}, got m = {m}")));
        }
        Ok(FurstenbergInstance { field, n, k, m })
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    pub fn space(&self) -> Space {
        Space::new(self.field.clone(), self.n)
    }

    /// `m q^{n-k}`.
    pub fn trivial_size(&self) -> BigUint {
        BigUint::from(self.m) * BigUint::from(self.q()).pow((self.n - self.k) as u32)
    }
}

/// Best translate of one direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub direction: Subspace,
    pub flat: Flat,
    pub count: u64,
}

/// One entry per rank-`k` direction in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessFamily {
    pub entries: Vec<Coverage>,
}

impl WitnessFamily {
    /// Recounts every assigned flat directly and checks it holds `m` points.
    pub fn reverify(&self, set: &PointSet, m: u64) -> bool {
        let field = set.field();
        self.entries.iter().all(|c| {
            let count = set.iter().filter(|p| c.flat.contains(field, p)).count() as u64;
            c.flat.direction() == &c.direction && count == c.count && count >= m
        })
    }

    pub fn min_count(&self) -> Option<u64> {
        self.entries.iter().map(|c| c.count).min()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified(WitnessFamily),
    /// First direction in enumeration order whose translates all miss.
    Fails { direction: Subspace, best: u64 },
}

impl Verdict {
    pub fn is_furstenberg(&self) -> bool {
        matches!(self, Verdict::Verified(_))
    }
}

/// Largest intersection of `set` with a translate of `direction`; ties go to
/// the translate through the smallest point of the set.
pub fn direction_coverage(set: &PointSet, direction: &Subspace) -> Coverage {
    let field = set.field();
    let map = OntoLinearMap::from_kernel(field, direction);
    let mut fibers: BTreeMap<Point, (u64, &Point)> = BTreeMap::new();
    for p in set.iter() {
        fibers.entry(map.apply(field, p)).or_insert((0, p)).0 += 1;
    }
    let best = fibers
        .values()
        .fold(None::<(u64, &Point)>, |acc, &(c, p)| match acc {
            Some((bc, bp)) if bc > c || (bc == c && bp <= p) => Some((bc, bp)),
            _ => Some((c, p)),
        });
    let (count, through) = match best {
        Some((c, p)) => (c, p.clone()),
        None => (0, Point::zero(set.space.n)),
    };
    Coverage {
        direction: direction.clone(),
        flat: Flat::new(field, direction.clone(), &through),
        count,
    }
}

pub fn is_furstenberg(set: &PointSet, k: usize, m: u64, budget: Budget) -> Result<Verdict> {
    let n = set.space.n;
    let inst = FurstenbergInstance::new(set.field().clone(), n, k, m)?;
    let q = inst.q();
    let work = qbinomial(n as u32, k as u32, q)? * BigUint::from(q).pow((n - k) as u32);
    budget.check(&work)?;
    let directions: Vec<Subspace> = enumerate_subspaces(set.field(), n, k, budget)?.collect();
    let entries: Vec<Coverage> = directions.par_iter().map(|d| direction_coverage(set, d)).collect();
    if let Some(bad) = entries.iter().find(|c| c.count < m) {
        return Ok(Verdict::Fails {
            direction: bad.direction.clone(),
            best: bad.count,
        });
    }
    Ok(Verdict::Verified(WitnessFamily { entries }))
}

/// The first `m q^{n-k}` points in lexicographic order.
pub fn trivial_construction(inst: &FurstenbergInstance, budget: Budget) -> Result<PointSet> {
    let space = inst.space();
    let size = inst.trivial_size();
    if size > space.size() {
        return Err(Error::BadSize(format!("m q^(n-k) = {size} exceeds q^n = {}", space.size())));
    }
    let count = budget.check(&size)?;
    PointSet::from_points(space.clone(), (0..count).map(|i| space.point_at(i)))
}

/// Applies the coordinate-wise isomorphism `F_{q^k}^r -> F_q^{rk}`.
pub fn lift_construction(set: &PointSet, base: &Field) -> Result<(PointSet, ExtensionIso)> {
    let iso = ExtensionIso::new(base, set.field())?;
    let space = Space::new(base.clone(), set.space.n * iso.degree());
    let lifted = PointSet::from_points(space, set.iter().map(|p| iso.flatten_point(p)))?;
    Ok((lifted, iso))
}

/// Coverage of a lifted set over the images of the extension field's line
/// directions only; these are `k`-dimensional subspaces downstairs.
pub fn lifted_direction_coverage(
    lifted: &PointSet,
    iso: &ExtensionIso,
    r: usize,
    budget: Budget,
) -> Result<Vec<Coverage>> {
    let directions: Vec<Subspace> = enumerate_subspaces(iso.ext(), r, 1, budget)?.collect();
    Ok(directions
        .par_iter()
        .map(|d| direction_coverage(lifted, &iso.lift_subspace(d)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(space: &Space, pts: &[&[i64]]) -> PointSet {
        PointSet::from_points(space.clone(), pts.iter().map(|c| space.point(c))).unwrap()
    }

    #[test]
    fn whole_space_is_furstenberg() {
        for (q, n, k) in [(2u64, 3usize, 1usize), (2, 3, 2), (3, 2, 1)] {
            let f = Field::of_order(q).unwrap();
            let sp = Space::new(f, n);
            let all = PointSet::from_points(sp.clone(), sp.points(Budget::DEFAULT).unwrap()).unwrap();
            let m = q.pow(k as u32);
            let v = is_furstenberg(&all, k, m, Budget::DEFAULT).unwrap();
            let Verdict::Verified(w) = v else { panic!("F_q^n must verify") };
            assert!(w.reverify(&all, m));
        }
    }

    #[test]
    fn three_point_kakeya_set() {
        let sp = Space::new(Field::prime(2).unwrap(), 2);
        let s = set(&sp, &[&[0, 0], &[1, 0], &[0, 1]]);
        let v = is_furstenberg(&s, 1, 2, Budget::DEFAULT).unwrap();
        let Verdict::Verified(w) = v else { panic!() };
        assert_eq!(w.entries.len(), 3);
        assert!(w.reverify(&s, 2));
    }

    #[test]
    fn empty_set_fails() {
        let sp = Space::new(Field::prime(3).unwrap(), 2);
        let v = is_furstenberg(&PointSet::new(sp), 1, 1, Budget::DEFAULT).unwrap();
        assert!(matches!(v, Verdict::Fails { best: 0, .. }));
    }

    #[test]
    fn instance_validation() {
        let f = Field::prime(2).unwrap();
        assert!(FurstenbergInstance::new(f.clone(), 2, 2, 1).is_err());
        assert!(FurstenbergInstance::new(f.clone(), 2, 1, 3).is_err());
        assert!(FurstenbergInstance::new(f, 2, 1, 0).is_err());
    }

    #[test]
    fn trivial_constructions_verify() {
        let f2 = Field::prime(2).unwrap();
        let inst = FurstenbergInstance::new(f2, 2, 1, 2).unwrap();
        assert_eq!(trivial_construction(&inst, Budget::DEFAULT).unwrap().len(), 4);
        let f3 = Field::prime(3).unwrap();
        let inst = FurstenbergInstance::new(f3, 2, 1, 2).unwrap();
        let s = trivial_construction(&inst, Budget::DEFAULT).unwrap();
        assert_eq!(s.len(), 6);
        assert!(is_furstenberg(&s, 1, 2, Budget::DEFAULT).unwrap().is_furstenberg());
    }

    #[test]
    fn lifting_f4_plane() {
        let f2 = Field::prime(2).unwrap();
        let f4 = Field::of_order(4).unwrap();
        let big = Space::new(f4.clone(), 2);
        let all = PointSet::from_points(big.clone(), big.points(Budget::DEFAULT).unwrap()).unwrap();
        let (lifted, _) = lift_construction(&all, &f2).unwrap();
        assert_eq!(lifted.len(), 16);
        assert_eq!(lifted.space.n, 4);

        let line = PointSet::from_points(
            big.clone(),
            f4.elements().map(|a| Point::new(vec![a, f4.one()])),
        )
        .unwrap();
        assert_eq!(line.len(), 4);
        let (lifted, _) = lift_construction(&line, &f2).unwrap();
        let flat = crate::geometry::span(&lifted).unwrap();
        assert_eq!(flat.dim(), 2);
        assert!(lifted.iter().all(|p| flat.contains(&f2, p)));
    }
}
