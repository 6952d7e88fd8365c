use std::ops::Range;

use itertools::{Combinations, Itertools};

use super::{flat_count, qbinomial, Flat, Matrix, Point, Subspace};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gf::{raw_element, Field, FieldElement};

/// Increments a base-`q` odometer whose first digit is most significant.
/// Returns false on wrap-around.
fn advance(counter: &mut [u32], q: u32) -> bool {
    for d in counter.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

/// Every rank-`k` subspace of `F_q^n`, ordered by pivot set and then by free entries.
pub struct SubspaceIter {
    field: Field,
    n: usize,
    pivot_sets: Combinations<Range<usize>>,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    counter: Vec<u32>,
    pending: bool,
}

impl SubspaceIter {
    fn load(&mut self) -> bool {
        let Some(pivots) = self.pivot_sets.next() else {
            return false;
        };
        self.free = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| ((p + 1)..self.n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        self.counter = vec![0; self.free.len()];
        self.pivots = pivots;
        self.pending = true;
        true
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if !self.pending && !self.load() {
            return None;
        }
        let k = self.pivots.len();
        let mut basis = Matrix::zeros(k, self.n);
        for (i, &p) in self.pivots.iter().enumerate() {
            basis[(i, p)] = FieldElement::ONE;
        }
        for (&(i, c), &v) in self.free.iter().zip(&self.counter) {
            basis[(i, c)] = raw_element(v);
        }
        let out = Subspace::from_rref_unchecked(basis, self.pivots.clone());
        self.pending = advance(&mut self.counter, self.field.q());
        Some(out)
    }
}

pub fn enumerate_subspaces(field: &Field, n: usize, k: usize, budget: Budget) -> Result<SubspaceIter> {
    if k > n {
        return Err(Error::BadRange(format!("rank {k} exceeds dimension {n}")));
    }
    budget.check(&qbinomial(n as u32, k as u32, field.q() as u64)?)?;
    Ok(SubspaceIter {
        field: field.clone(),
        n,
        pivot_sets: (0..n).combinations(k),
        pivots: Vec::new(),
        free: Vec::new(),
        counter: Vec::new(),
        pending: false,
    })
}

/// Every `k`-flat of `F_q^n`: directions in subspace order, then shifts
/// lexicographically over the non-pivot coordinates.
pub struct FlatIter {
    subspaces: SubspaceIter,
    current: Option<(Subspace, Vec<usize>)>,
    counter: Vec<u32>,
    q: u32,
}

impl Iterator for FlatIter {
    type Item = Flat;

    fn next(&mut self) -> Option<Flat> {
        if self.current.is_none() {
            let s = self.subspaces.next()?;
            let free: Vec<usize> = (0..s.ambient_dim()).filter(|c| !s.pivots().contains(c)).collect();
            self.counter = vec![0; free.len()];
            self.current = Some((s, free));
        }
        let (s, free) = self.current.as_ref().unwrap();
        let mut shift = vec![FieldElement::ZERO; s.ambient_dim()];
        for (&c, &v) in free.iter().zip(&self.counter) {
            shift[c] = raw_element(v);
        }
        let flat = Flat::from_canonical(s.clone(), Point::new(shift));
        if !advance(&mut self.counter, self.q) {
            self.current = None;
        }
        Some(flat)
    }
}

pub fn enumerate_flats(field: &Field, n: usize, k: usize, budget: Budget) -> Result<FlatIter> {
    if k > n {
        return Err(Error::BadRange(format!("rank {k} exceeds dimension {n}")));
    }
    budget.check(&flat_count(n as u32, k as u32, field.q() as u64)?)?;
    Ok(FlatIter {
        subspaces: enumerate_subspaces(field, n, k, Budget::unlimited())?,
        current: None,
        counter: Vec::new(),
        q: field.q(),
    })
}
