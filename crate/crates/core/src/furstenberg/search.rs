use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{bound_table, trivial_construction, FurstenbergInstance};
use crate::budget::Budget;
use crate::entropy::OntoLinearMap;
use crate::error::Result;
use crate::geometry::{enumerate_subspaces, PointSet, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest `q^n` searched exhaustively.
    pub exact_limit: u64,
    /// Cap on search nodes and enumeration sizes.
    pub budget: Budget,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            exact_limit: 16,
            budget: Budget::DEFAULT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Exact {
        value: u64,
        witness: PointSet,
        nodes: u64,
    },
    Bounds {
        lower: u64,
        upper: u64,
        upper_witness: Option<PointSet>,
        reason: String,
    },
}

impl SearchOutcome {
    pub fn exact(&self) -> Option<u64> {
        match self {
            SearchOutcome::Exact { value, .. } => Some(*value),
            SearchOutcome::Bounds { .. } => None,
        }
    }
}

/// Points as bit positions (lexicographic index); each direction as its list
/// of cosets. Direction 0's first coset is the subspace itself.
struct Board {
    size: usize,
    directions: Vec<Vec<u128>>,
    /// `suffix[i]` has every bit `>= i`.
    suffix: Vec<u128>,
}

impl Board {
    fn new(inst: &FurstenbergInstance, budget: Budget) -> Result<Board> {
        let space = inst.space();
        let size = space.size_u64().expect("checked by caller") as usize;
        let field = &inst.field;
        let image_space = Space::new(field.clone(), inst.n - inst.k);
        let image_size = image_space.size_u64().expect("smaller than the space") as usize;
        let mut directions = Vec::new();
        for dir in enumerate_subspaces(field, inst.n, inst.k, budget)? {
            let map = OntoLinearMap::from_kernel(field, &dir);
            let mut cosets = vec![0u128; image_size];
            for i in 0..size {
                let y = map.apply(field, &space.point_at(i as u64));
                cosets[image_space.index_of(&y) as usize] |= 1u128 << i;
            }
            cosets.retain(|&c| c != 0);
            directions.push(cosets);
        }
        let mut suffix = vec![0u128; size + 1];
        for i in (0..size).rev() {
            suffix[i] = suffix[i + 1] | (1u128 << i);
        }
        Ok(Board {
            size,
            directions,
            suffix,
        })
    }

    /// Whether every direction can still reach `m` with `left` more points
    /// taken from positions `>= pos`.
    fn feasible(&self, chosen: u128, pos: usize, left: u32, m: u32) -> bool {
        let avail = self.suffix[pos];
        self.directions.iter().enumerate().all(|(d, cosets)| {
            let cosets = if d == 0 { &cosets[..1] } else { &cosets[..] };
            cosets.iter().any(|&c| {
                let have = (chosen & c).count_ones();
                have + left.min((avail & c).count_ones()) >= m
            })
        })
    }
}

struct Dfs<'a> {
    board: &'a Board,
    m: u32,
    target: u32,
    nodes: &'a AtomicU64,
    limit: u64,
}

impl Dfs<'_> {
    /// `None` when the node budget runs out.
    fn run(&self, chosen: u128, count: u32, pos: usize) -> Option<Option<u128>> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.limit {
            return None;
        }
        let left = self.target - count;
        if !self.board.feasible(chosen, pos, left, self.m) {
            return Some(None);
        }
        if left == 0 {
            return Some(Some(chosen));
        }
        if self.board.size - pos < left as usize {
            return Some(None);
        }
        if let Some(found) = self.run(chosen | (1u128 << pos), count + 1, pos + 1)? {
            return Some(Some(found));
        }
        self.run(chosen, count, pos + 1)
    }
}

/// Smallest size of a `(k, m)`-Furstenberg set, by exhaustive search when
/// `q^n` is within `exact_limit`, otherwise bounds.
///
/// Translating a set moves its witness flats with it, so the search may fix
/// the origin in the set and require the first direction's witness to be the
/// subspace itself.
pub fn search_extremal(inst: &FurstenbergInstance, opts: SearchOptions) -> Result<SearchOutcome> {
    let space = inst.space();
    let total = space.size_u64().filter(|&s| s <= opts.exact_limit.min(128));
    let Some(total) = total else {
        return bounds_only(inst, opts, format!("q^n exceeds the exact-search limit {}", opts.exact_limit));
    };
    let board = Board::new(inst, opts.budget)?;
    let m = inst.m as u32;
    let nodes = AtomicU64::new(0);
    for target in m.max(1)..=total as u32 {
        let dfs = Dfs {
            board: &board,
            m,
            target,
            nodes: &nodes,
            limit: opts.budget.0,
        };
        let found = if target == 1 {
            dfs.run(1, 1, 1)
        } else {
            // branch on the second point; each branch runs to completion so
            // node counts and the chosen witness do not depend on scheduling
            let branches: Vec<Option<Option<u128>>> = (1..total as usize)
                .into_par_iter()
                .map(|j| {
                    // points strictly between 0 and j are excluded in this branch
                    dfs.run(1u128 | (1u128 << j), 2, j + 1)
                })
                .collect();
            if branches.iter().any(|b| b.is_none()) {
                None
            } else {
                Some(branches.into_iter().flatten().flatten().next())
            }
        };
        match found {
            None => {
                return bounds_only(inst, opts, format!("node budget {} exhausted at size {target}", opts.budget.0));
            }
            Some(Some(mask)) => {
                let witness = PointSet::from_points(
                    space.clone(),
                    (0..total).filter(|i| mask >> i & 1 == 1).map(|i| space.point_at(i)),
                )?;
                return Ok(SearchOutcome::Exact {
                    value: target as u64,
                    witness,
                    nodes: nodes.load(Ordering::Relaxed),
                });
            }
            Some(None) => {}
        }
    }
    unreachable!("the whole space is always Furstenberg")
}

fn bounds_only(inst: &FurstenbergInstance, opts: SearchOptions, reason: String) -> Result<SearchOutcome> {
    let report = bound_table(inst, None)?;
    let lower = report.best_lower().to_u64().unwrap_or(u64::MAX);
    let upper = report.best_upper().to_u64().unwrap_or(u64::MAX);
    let upper_witness = trivial_construction(inst, opts.budget).ok();
    Ok(SearchOutcome::Bounds {
        lower,
        upper,
        upper_witness,
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::furstenberg::is_furstenberg;
    use crate::gf::Field;

    fn k_value(q: u64, n: usize, k: usize, m: u64) -> u64 {
        let inst = FurstenbergInstance::new(Field::of_order(q).unwrap(), n, k, m).unwrap();
        let out = search_extremal(&inst, SearchOptions::default()).unwrap();
        let SearchOutcome::Exact { value, witness, .. } = out else {
            panic!("expected exact result")
        };
        assert_eq!(witness.len() as u64, value);
        assert!(is_furstenberg(&witness, k, m, Budget::DEFAULT).unwrap().is_furstenberg());
        value
    }

    #[test]
    fn small_extremal_values() {
        assert_eq!(k_value(2, 2, 1, 2), 3);
        assert_eq!(k_value(2, 2, 1, 1), 1);
        assert_eq!(k_value(3, 2, 1, 1), 1);
    }

    #[test]
    fn kakeya_in_f3_plane() {
        let v = k_value(3, 2, 1, 3);
        assert!((3..=9).contains(&v));
        assert_eq!(v, 7);
    }

    #[test]
    fn large_instances_fall_back_to_bounds() {
        let inst = FurstenbergInstance::new(Field::prime(5).unwrap(), 2, 1, 5).unwrap();
        let out = search_extremal(&inst, SearchOptions::default()).unwrap();
        let SearchOutcome::Bounds { lower, upper, .. } = out else { panic!() };
        assert!(lower <= upper);
        // the full-flat construction formula gives (1 - 2/10) * 25
        assert_eq!(upper, 20);
    }
}
