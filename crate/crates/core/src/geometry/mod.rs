//! Points, linear subspaces and flats of `F_q^n`.
//!
//! Subspaces are stored by their reduced row echelon basis, which makes
//! structural equality coincide with set equality. A flat stores its
//! direction together with the unique coset representative that vanishes on
//! every pivot column of the direction.

mod enumerate;
pub mod formats;
mod matrix;
mod qbinom;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{Pow, ToPrimitive};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf::{raw_element, Field, FieldElement};

pub use enumerate::{enumerate_flats, enumerate_subspaces, FlatIter, SubspaceIter};
pub use matrix::{Matrix, Rref};
pub use qbinom::{flat_count, qbinomial};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point(Vec<FieldElement>);

impl Point {
    pub fn new(coords: Vec<FieldElement>) -> Self {
        Point(coords)
    }

    pub fn zero(n: usize) -> Self {
        Point(vec![FieldElement::ZERO; n])
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<FieldElement> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, field: &Field, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(&a, &b)| field.add(a, b)).collect())
    }

    pub fn sub(&self, field: &Field, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(&a, &b)| field.sub(a, b)).collect())
    }

    pub fn scale(&self, field: &Field, c: FieldElement) -> Point {
        Point(self.0.iter().map(|&a| field.mul(a, c)).collect())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<u32> = self.0.iter().map(|x| x.index()).collect();
        write!(f, "{v:?}")
    }
}

impl From<Vec<FieldElement>> for Point {
    fn from(v: Vec<FieldElement>) -> Self {
        Point(v)
    }
}

/// The ambient space `F_q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    pub field: Field,
    pub n: usize,
}

impl Space {
    pub fn new(field: Field, n: usize) -> Self {
        Space { field, n }
    }

    pub fn q(&self) -> u64 {
        self.field.q() as u64
    }

    /// `q^n` as an exact integer.
    pub fn size(&self) -> BigUint {
        Pow::pow(&BigUint::from(self.q()), self.n as u32)
    }

    pub fn size_u64(&self) -> Option<u64> {
        self.size().to_u64()
    }

    pub fn point(&self, ints: &[i64]) -> Point {
        assert_eq!(ints.len(), self.n);
        Point(ints.iter().map(|&x| self.field.from_int(x)).collect())
    }

    /// Point with the given lexicographic rank (coordinate 0 most significant).
    pub fn point_at(&self, mut index: u64) -> Point {
        let q = self.q();
        let mut coords = vec![FieldElement::ZERO; self.n];
        for c in coords.iter_mut().rev() {
            *c = raw_element((index % q) as u32);
            index /= q;
        }
        Point(coords)
    }

    pub fn index_of(&self, p: &Point) -> u64 {
        let q = self.q();
        p.0.iter().fold(0u64, |acc, c| acc * q + c.index() as u64)
    }

    /// Every point of the space in lexicographic order.
    pub fn points(&self, budget: Budget) -> Result<impl Iterator<Item = Point> + '_> {
        let total = budget.check(&self.size())?;
        Ok((0..total).map(move |i| self.point_at(i)))
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: p.dim(),
            });
        }
        Ok(())
    }
}

/// Deduplicated set of points sharing an ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    pub space: Space,
    members: BTreeSet<Point>,
}

impl PointSet {
    pub fn new(space: Space) -> Self {
        PointSet {
            space,
            members: BTreeSet::new(),
        }
    }

    pub fn from_points(space: Space, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut s = PointSet::new(space);
        for p in points {
            s.insert(p)?;
        }
        Ok(s)
    }

    pub fn insert(&mut self, p: Point) -> Result<bool> {
        self.space.check_point(&p)?;
        Ok(self.members.insert(p))
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.members.contains(p)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.members.iter()
    }

    pub fn field(&self) -> &Field {
        &self.space.field
    }
}

/// Linear subspace of `F_q^n` stored by its RREF basis.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            basis: Matrix::identity(n),
            pivots: (0..n).collect(),
        }
    }

    /// Span of arbitrary vectors of length `n`.
    pub fn span<V: AsRef<[FieldElement]>>(field: &Field, n: usize, vectors: &[V]) -> Self {
        let m = Matrix::from_rows(n, vectors);
        Self::from_matrix(field, &m)
    }

    /// Row space of `m`.
    pub fn from_matrix(field: &Field, m: &Matrix) -> Self {
        let r = m.rref(field);
        Subspace {
            basis: r.matrix.nonzero_rows(),
            pivots: r.pivots,
        }
    }

    pub(crate) fn from_rref_unchecked(basis: Matrix, pivots: Vec<usize>) -> Self {
        Subspace { basis, pivots }
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical representative of `v + self`: the unique element of the
    /// coset that is zero on every pivot column.
    pub fn reduce(&self, field: &Field, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = out[pc];
            if c.is_zero() {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.basis.row(i)) {
                *o = field.sub(*o, field.mul(c, b));
            }
        }
        out
    }

    pub fn contains(&self, field: &Field, v: &[FieldElement]) -> bool {
        self.reduce(field, v).iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, field: &Field, other: &Subspace) -> bool {
        other.basis.row_iter().all(|r| self.contains(field, r))
    }

    /// Smallest subspace containing both.
    pub fn join(&self, field: &Field, other: &Subspace) -> Subspace {
        let rows: Vec<&[FieldElement]> = self.basis.row_iter().chain(other.basis.row_iter()).collect();
        Subspace::span(field, self.ambient_dim(), &rows)
    }

    pub fn intersect(&self, field: &Field, other: &Subspace) -> Subspace {
        // Left kernel of the stacked bases gives the relations sum a_i u_i = sum b_j w_j.
        let n = self.ambient_dim();
        let k = self.rank();
        let rows: Vec<&[FieldElement]> = self.basis.row_iter().chain(other.basis.row_iter()).collect();
        let stacked = Matrix::from_rows(n, &rows);
        let relations = stacked.transpose().null_space(field);
        let vectors: Vec<Vec<FieldElement>> = relations
            .iter()
            .map(|rel| {
                let mut v = vec![FieldElement::ZERO; n];
                for (i, &a) in rel[..k].iter().enumerate() {
                    for (o, &b) in v.iter_mut().zip(self.basis.row(i)) {
                        *o = field.add(*o, field.mul(a, b));
                    }
                }
                v
            })
            .collect();
        Subspace::span(field, n, &vectors)
    }

    /// Basis of `{w : <w, v> = 0 for all v in self}`.
    pub fn annihilator(&self, field: &Field) -> Vec<Vec<FieldElement>> {
        self.basis.null_space(field)
    }

    /// All `q^k` vectors, coefficients enumerated lexicographically.
    pub fn vectors<'a>(&'a self, field: &'a Field) -> impl Iterator<Item = Vec<FieldElement>> + 'a {
        let k = self.rank();
        let q = field.q() as u64;
        let total = q.pow(k as u32);
        (0..total).map(move |mut idx| {
            let mut v = vec![FieldElement::ZERO; self.ambient_dim()];
            for i in (0..k).rev() {
                let c = raw_element((idx % q) as u32);
                idx /= q;
                if c.is_zero() {
                    continue;
                }
                for (o, &b) in v.iter_mut().zip(self.basis.row(i)) {
                    *o = field.add(*o, field.mul(c, b));
                }
            }
            v
        })
    }
}

/// Translate of a subspace, stored with its canonical shift.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Flat {
    direction: Subspace,
    shift: Point,
}

impl Flat {
    /// The flat `direction + through`.
    pub fn new(field: &Field, direction: Subspace, through: &Point) -> Self {
        let shift = Point(direction.reduce(field, through.coords()));
        Flat { direction, shift }
    }

    pub(crate) fn from_canonical(direction: Subspace, shift: Point) -> Self {
        Flat { direction, shift }
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn shift(&self) -> &Point {
        &self.shift
    }

    pub fn dim(&self) -> usize {
        self.direction.rank()
    }

    pub fn contains(&self, field: &Field, p: &Point) -> bool {
        self.direction.reduce(field, p.coords()) == self.shift.0
    }

    /// `other` is a subset of `self`.
    pub fn contains_flat(&self, field: &Field, other: &Flat) -> bool {
        self.direction.contains_subspace(field, &other.direction) && self.contains(field, &other.shift)
    }

    /// All points of the flat.
    pub fn points<'a>(&'a self, field: &'a Field) -> impl Iterator<Item = Point> + 'a {
        self.direction
            .vectors(field)
            .map(move |v| Point(v).add(field, &self.shift))
    }
}

/// Affine span of a nonempty point set.
pub fn span(points: &PointSet) -> Result<Flat> {
    let field = points.field();
    let mut it = points.iter();
    let base = it.next().ok_or(Error::EmptyInput)?;
    let diffs: Vec<Vec<FieldElement>> = it.map(|p| p.sub(field, base).into_coords()).collect();
    let direction = Subspace::span(field, points.space.n, &diffs);
    Ok(Flat::new(field, direction, base))
}

/// The `q^k` points of a flat as a point set.
pub fn flat_points(space: &Space, flat: &Flat, budget: Budget) -> Result<PointSet> {
    if flat.direction.ambient_dim() != space.n {
        return Err(Error::DimensionMismatch {
            expected: space.n,
            got: flat.direction.ambient_dim(),
        });
    }
    budget.check(&Pow::pow(&BigUint::from(space.q()), flat.dim() as u32))?;
    PointSet::from_points(space.clone(), flat.points(&space.field))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn span_of_single_point() {
        let sp = Space::new(f(3), 2);
        let s = PointSet::from_points(sp.clone(), [sp.point(&[1, 2])]).unwrap();
        let fl = span(&s).unwrap();
        assert_eq!(fl.dim(), 0);
        assert_eq!(fl.shift(), &sp.point(&[1, 2]));
    }

    #[test]
    fn span_of_two_points_is_axis_line() {
        let sp = Space::new(f(2), 2);
        let s = PointSet::from_points(sp.clone(), [sp.point(&[0, 0]), sp.point(&[1, 0])]).unwrap();
        let fl = span(&s).unwrap();
        assert_eq!(fl.dim(), 1);
        assert_eq!(fl.direction(), &Subspace::span(&sp.field, 2, &[sp.point(&[1, 0]).coords()]));
        assert!(fl.shift().is_zero());
    }

    #[test]
    fn span_of_three_points_is_plane() {
        let sp = Space::new(f(2), 3);
        let s = PointSet::from_points(
            sp.clone(),
            [sp.point(&[0, 0, 0]), sp.point(&[1, 0, 0]), sp.point(&[0, 1, 0])],
        )
        .unwrap();
        let fl = span(&s).unwrap();
        assert_eq!(fl.dim(), 2);
        for p in sp.points(Budget::DEFAULT).unwrap() {
            assert_eq!(fl.contains(&sp.field, &p), p.coords()[2].is_zero());
        }
    }

    #[test]
    fn span_errors_on_empty() {
        let sp = Space::new(f(2), 2);
        assert_eq!(span(&PointSet::new(sp)), Err(Error::EmptyInput));
    }

    #[test]
    fn diagonal_line_points() {
        let sp = Space::new(f(3), 2);
        let dir = Subspace::span(&sp.field, 2, &[sp.point(&[1, 1]).coords()]);
        let fl = Flat::new(&sp.field, dir, &Point::zero(2));
        let pts = flat_points(&sp, &fl, Budget::DEFAULT).unwrap();
        let expected =
            PointSet::from_points(sp.clone(), [sp.point(&[0, 0]), sp.point(&[1, 1]), sp.point(&[2, 2])]).unwrap();
        assert_eq!(pts, expected);
        assert_eq!(span(&pts).unwrap(), fl);
    }

    #[test]
    fn point_index_round_trip() {
        let sp = Space::new(f(5), 3);
        for i in 0..125 {
            assert_eq!(sp.index_of(&sp.point_at(i)), i);
        }
        assert_eq!(sp.point_at(7), sp.point(&[0, 1, 2]));
    }

    #[test]
    fn dimension_of_join_exhaustive_f2_cubed() {
        let field = f(2);
        let subs: Vec<Subspace> = (0..=3)
            .flat_map(|k| enumerate_subspaces(&field, 3, k, Budget::DEFAULT).unwrap())
            .collect();
        assert_eq!(subs.len(), 1 + 7 + 7 + 1);
        for a in &subs {
            for b in &subs {
                let join = a.join(&field, b);
                let meet = a.intersect(&field, b);
                assert_eq!(join.rank() + meet.rank(), a.rank() + b.rank());
                assert!(join.contains_subspace(&field, a) && join.contains_subspace(&field, b));
                assert!(a.contains_subspace(&field, &meet) && b.contains_subspace(&field, &meet));
            }
        }
    }
}
