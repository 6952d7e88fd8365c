//! q-ary min-entropy of rational distributions over `F_q^n` and projections.
//!
//! A distribution is a map `x -> f(x)` of positive integers with total `S`,
//! read as `Pr[R = x] = f(x) / S`. Every inequality here is checked after
//! exponentiating and clearing denominators, so no logarithm is ever
//! evaluated in floating point.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exact::format_rational;
use crate::geometry::{enumerate_subspaces, Matrix, Point, PointSet, Space, Subspace};
use crate::gf::Field;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::BadRange(format!("need 1 <= k < n, got k = {k}, n = {n}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalDistribution {
    space: Space,
    weights: BTreeMap<Point, u64>,
    total: u64,
}

impl RationalDistribution {
    pub fn new(space: Space, entries: impl IntoIterator<Item = (Point, u64)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        let mut total = 0u64;
        for (p, w) in entries {
            space.check_point(&p)?;
            if w == 0 {
                return Err(Error::BadRange("distribution weights must be positive".into()));
            }
            total = total
                .checked_add(w)
                .ok_or_else(|| Error::BadRange("total weight overflows".into()))?;
            if weights.insert(p, w).is_some() {
                return Err(Error::BadRange("point listed twice".into()));
            }
        }
        if weights.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(RationalDistribution { space, weights, total })
    }

    pub fn uniform(set: &PointSet) -> Result<Self> {
        RationalDistribution::new(set.space.clone(), set.iter().map(|p| (p.clone(), 1)))
    }

    /// Reads the weighted point format; weights must be positive.
    pub fn parse(text: &str) -> Result<Self> {
        let (space, entries) = crate::geometry::formats::parse_weighted(text)?;
        let entries = entries
            .into_iter()
            .map(|(p, w)| {
                u64::try_from(w)
                    .map(|w| (p, w))
                    .map_err(|_| Error::BadRange(format!("negative weight {w}")))
            })
            .collect::<Result<Vec<_>>>()?;
        RationalDistribution::new(space, entries)
    }

    pub fn to_text(&self) -> String {
        crate::geometry::formats::write_weighted(&self.space, self.weights.iter().map(|(p, &w)| (p, w as i64)))
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn weights(&self) -> &BTreeMap<Point, u64> {
        &self.weights
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn weight(&self, p: &Point) -> u64 {
        self.weights.get(p).copied().unwrap_or(0)
    }

    /// First point (in point order) of maximal weight.
    pub fn mode(&self) -> (&Point, u64) {
        let mut best = self.weights.iter().next().map(|(p, &w)| (p, w)).expect("nonempty");
        for (p, &w) in &self.weights {
            if w > best.1 {
                best = (p, w);
            }
        }
        best
    }

    pub fn min_entropy(&self) -> EntropyValue {
        EntropyValue {
            max_weight: self.mode().1,
            total: self.total,
        }
    }
}

/// `H = log_q(total / max_weight)`, stored as the integer pair.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EntropyValue {
    pub max_weight: u64,
    pub total: u64,
}

impl EntropyValue {
    /// `-log_q` of the max probability, as a float for display only.
    pub fn to_f64(&self, q: u64) -> f64 {
        (self.total as f64 / self.max_weight as f64).ln() / (q as f64).ln()
    }

    /// Whether `H` equals the integer `h` exactly.
    pub fn is_integer(&self, q: u64, h: u32) -> bool {
        big(self.max_weight) * big(q).pow(h) == big(self.total)
    }
}

impl Ord for EntropyValue {
    fn cmp(&self, other: &Self) -> Ordering {
        // larger max probability means smaller entropy
        let a = self.max_weight as u128 * other.total as u128;
        let b = other.max_weight as u128 * self.total as u128;
        b.cmp(&a)
    }
}

impl PartialOrd for EntropyValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for EntropyValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for EntropyValue {}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H = log_q({}/{})", self.total, self.max_weight)
    }
}

/// Full row rank map `F_q^n -> F_q^{n-k}` with its kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OntoLinearMap {
    matrix: Matrix,
    kernel: Subspace,
}

impl OntoLinearMap {
    pub fn new(field: &Field, matrix: Matrix) -> Result<Self> {
        if matrix.rank(field) != matrix.rows() {
            return Err(Error::InvalidInstance("linear map is not onto".into()));
        }
        let kernel = Subspace::span(field, matrix.cols(), &matrix.null_space(field));
        Ok(OntoLinearMap { matrix, kernel })
    }

    /// The map whose rows are the canonical annihilator basis of `kernel`.
    pub fn from_kernel(field: &Field, kernel: &Subspace) -> Self {
        let n = kernel.ambient_dim();
        let rows = kernel.annihilator(field);
        OntoLinearMap {
            matrix: Matrix::from_rows(n, &rows),
            kernel: kernel.clone(),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, field: &Field, p: &Point) -> Point {
        Point::new(self.matrix.apply(field, p.coords()))
    }

    /// `other` after `self`.
    pub fn then(&self, field: &Field, other: &OntoLinearMap) -> Result<OntoLinearMap> {
        if other.domain_dim() != self.codomain_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.codomain_dim(),
                got: other.domain_dim(),
            });
        }
        OntoLinearMap::new(field, other.matrix.mul(field, &self.matrix))
    }
}

pub fn pushforward(dist: &RationalDistribution, map: &OntoLinearMap) -> Result<RationalDistribution> {
    let n = dist.space.n;
    if map.domain_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: map.domain_dim(),
        });
    }
    let field = &dist.space.field;
    let mut weights: BTreeMap<Point, u64> = BTreeMap::new();
    for (p, &w) in &dist.weights {
        *weights.entry(map.apply(field, p)).or_default() += w;
    }
    Ok(RationalDistribution {
        space: Space::new(field.clone(), map.codomain_dim()),
        weights,
        total: dist.total,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropicWitness {
    pub map: OntoLinearMap,
    /// Codomain point carrying the largest pushforward weight.
    pub shift_value: Point,
    pub attained: EntropyValue,
}

/// Maximises the min-entropy of the pushforward over all rank-`k` kernels.
/// Ties go to the kernel that comes first in enumeration order.
pub fn best_projection(dist: &RationalDistribution, k: usize, budget: Budget) -> Result<EntropicWitness> {
    let n = dist.space.n;
    check_k(n, k)?;
    let field = &dist.space.field;
    let kernels: Vec<Subspace> = enumerate_subspaces(field, n, k, budget)?.collect();
    let best = kernels
        .par_iter()
        .enumerate()
        .map(|(i, kernel)| {
            let map = OntoLinearMap::from_kernel(field, kernel);
            let image = pushforward(dist, &map).expect("dimensions agree");
            let (v, _) = image.mode();
            let w = EntropicWitness {
                shift_value: v.clone(),
                attained: image.min_entropy(),
                map,
            };
            (i, w)
        })
        .reduce_with(|a, b| match a.1.attained.cmp(&b.1.attained) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => {
                if a.0 <= b.0 {
                    a
                } else {
                    b
                }
            }
        })
        .expect("at least one kernel");
    Ok(best.1)
}

/// Both sides of `g^n q^{nk} <= f^{n-k} S^k (2q-1)^{nk}`, where `g` is the
/// largest pushforward weight, `f` the largest input weight and `S` the total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSides {
    pub lhs: BigUint,
    pub rhs: BigUint,
    pub ok: bool,
}

impl BoundSides {
    /// `rhs / lhs`; at least 1 exactly when the inequality holds.
    pub fn margin(&self) -> BigRational {
        BigRational::new(self.rhs.clone().into(), self.lhs.clone().into())
    }
}

fn entropic_sides(q: u64, n: usize, k: usize, input: &EntropyValue, image: &EntropyValue) -> BoundSides {
    let (n32, k32) = (n as u32, k as u32);
    let lhs = big(image.max_weight).pow(n32) * big(q).pow(n32 * k32);
    let rhs = big(input.max_weight).pow(n32 - k32) * big(input.total).pow(k32) * big(2 * q - 1).pow(n32 * k32);
    BoundSides {
        ok: lhs <= rhs,
        lhs,
        rhs,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropicBoundReport {
    pub input: EntropyValue,
    pub witness: EntropicWitness,
    pub sides: BoundSides,
}

impl EntropicBoundReport {
    pub fn ok(&self) -> bool {
        self.sides.ok
    }
}

pub fn check_entropic_bound(dist: &RationalDistribution, k: usize, budget: Budget) -> Result<EntropicBoundReport> {
    let witness = best_projection(dist, k, budget)?;
    let input = dist.min_entropy();
    let sides = entropic_sides(dist.space.q(), dist.space.n, k, &input, &witness.attained);
    Ok(EntropicBoundReport { input, witness, sides })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionReport {
    /// One best codimension-one projection per stage.
    pub steps: Vec<EntropicWitness>,
    pub composed: OntoLinearMap,
    pub greedy: EntropyValue,
    pub direct: EntropicWitness,
    pub greedy_sides: BoundSides,
    pub direct_sides: BoundSides,
}

impl RecursionReport {
    pub fn greedy_le_direct(&self) -> bool {
        self.greedy <= self.direct.attained
    }

    pub fn ok(&self) -> bool {
        self.greedy_sides.ok && self.direct_sides.ok && self.greedy_le_direct()
    }
}

/// Projects away one dimension at a time `k` times, always taking the best
/// single step, and compares with the best direct rank-`k` projection.
pub fn check_recursion(dist: &RationalDistribution, k: usize, budget: Budget) -> Result<RecursionReport> {
    let n = dist.space.n;
    check_k(n, k)?;
    let field = &dist.space.field;
    let direct = best_projection(dist, k, budget)?;
    let mut steps = Vec::with_capacity(k);
    let mut current = dist.clone();
    let mut composed: Option<OntoLinearMap> = None;
    for _ in 0..k {
        let step = best_projection(&current, 1, budget)?;
        current = pushforward(&current, &step.map)?;
        composed = Some(match composed {
            None => step.map.clone(),
            Some(c) => c.then(field, &step.map)?,
        });
        steps.push(step);
    }
    let composed = composed.expect("k >= 1");
    let input = dist.min_entropy();
    let greedy = current.min_entropy();
    let q = dist.space.q();
    Ok(RecursionReport {
        greedy_sides: entropic_sides(q, n, k, &input, &greedy),
        direct_sides: entropic_sides(q, n, k, &input, &direct.attained),
        steps,
        composed,
        greedy,
        direct,
    })
}

/// Integer-valued function on `F_q^n`; unlisted points are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerFunction {
    space: Space,
    values: BTreeMap<Point, i64>,
}

impl IntegerFunction {
    pub fn new(space: Space, entries: impl IntoIterator<Item = (Point, i64)>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (p, v) in entries {
            space.check_point(&p)?;
            if values.insert(p, v).is_some() {
                return Err(Error::BadRange("point listed twice".into()));
            }
        }
        Ok(IntegerFunction { space, values })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (space, entries) = crate::geometry::formats::parse_weighted(text)?;
        IntegerFunction::new(space, entries)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn get(&self, p: &Point) -> i64 {
        self.values.get(p).copied().unwrap_or(0)
    }

    pub fn abs_values(&self) -> Vec<u64> {
        self.values.values().map(|v| v.unsigned_abs()).filter(|&v| v > 0).collect()
    }

    /// For each direction, the largest sum of `|f|` along a line in that
    /// direction; returns the minimum over directions and the first
    /// direction attaining it.
    pub fn heaviest_line_floor(&self, budget: Budget) -> Result<(u64, Subspace)> {
        let field = &self.space.field;
        let n = self.space.n;
        let mut best: Option<(u64, Subspace)> = None;
        for dir in enumerate_subspaces(field, n, 1, budget)? {
            let map = OntoLinearMap::from_kernel(field, &dir);
            let mut sums: BTreeMap<Point, u64> = BTreeMap::new();
            for (p, v) in &self.values {
                *sums.entry(map.apply(field, p)).or_default() += v.unsigned_abs();
            }
            let heavy = sums.values().copied().max().unwrap_or(0);
            if best.as_ref().is_none_or(|(b, _)| heavy < *b) {
                best = Some((heavy, dir));
            }
        }
        best.ok_or_else(|| Error::BadRange("need n >= 1".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormBoundReport {
    pub r: u64,
    pub hypothesis_ok: bool,
    /// First direction whose lines all carry less than `r`, if any.
    pub failing_direction: Option<Subspace>,
    /// `sum_x |f(x)|^n`.
    pub sum: BigUint,
    /// `r^n q^n`.
    pub bound_num: BigUint,
    /// `(2q - 1)^n`.
    pub bound_den: BigUint,
    /// `(2q - 1)^n sum >= r^n q^n`.
    pub ok: bool,
}

pub fn norm_bound_check(f: &IntegerFunction, r: u64, budget: Budget) -> Result<NormBoundReport> {
    if r == 0 {
        return Err(Error::BadRange("r must be positive".into()));
    }
    let n = f.space.n as u32;
    let q = f.space.q();
    let (floor, dir) = f.heaviest_line_floor(budget)?;
    let hypothesis_ok = floor >= r;
    let sum = f
        .values
        .values()
        .map(|v| big(v.unsigned_abs()).pow(n))
        .fold(BigUint::zero(), |a, b| a + b);
    let bound_num = big(r).pow(n) * big(q).pow(n);
    let bound_den = big(2 * q - 1).pow(n);
    Ok(NormBoundReport {
        r,
        hypothesis_ok,
        failing_direction: (!hypothesis_ok).then_some(dir),
        ok: &bound_den * &sum >= bound_num,
        sum,
        bound_num,
        bound_den,
    })
}

/// A positive real of the form `base^{-exponent}` (a constant `C`) or
/// `exponent * log_q(base)` (a constant `D`), depending on context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogConstant {
    pub base: u64,
    pub exponent: BigRational,
}

impl LogConstant {
    /// Rewrites `base` as its smallest integer root.
    pub fn new(base: u64, exponent: BigRational) -> Result<Self> {
        if base < 2 {
            return Err(Error::BadRange(format!("base must be at least 2, got {base}")));
        }
        if exponent.is_negative() {
            return Err(Error::BadRange(format!(
                "exponent must be nonnegative, got {}",
                format_rational(&exponent)
            )));
        }
        let (root, power) = minimal_root(base);
        Ok(LogConstant {
            base: root,
            exponent: exponent * BigRational::from_integer(power.into()),
        })
    }

    /// `exponent * log_q(base)` as a rational, when `q` is a power of `base`.
    pub fn in_units_of(&self, q: u64) -> Option<BigRational> {
        if self.exponent.is_zero() {
            return Some(BigRational::zero());
        }
        let (root, power) = minimal_root(q);
        (root == self.base).then(|| &self.exponent / BigRational::from_integer(power.into()))
    }

    pub fn to_f64(&self) -> Option<f64> {
        Some((self.base as f64).powf(-self.exponent.to_f64()?))
    }
}

impl fmt::Display for LogConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^(-{})", self.base, format_rational(&self.exponent))
    }
}

fn minimal_root(x: u64) -> (u64, u32) {
    for j in (2..=63u32).rev() {
        let r = x.nth_root(j);
        if r >= 2 && r.checked_pow(j) == Some(x) {
            return (r, j);
        }
    }
    (x, 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AbDirection {
    AtoB,
    BtoA,
}

/// From `C = b^{-t}` to `D = (k/n) t log_q b`, or from `D = s log_q b` to
/// `C = b^{-(n/k) s}`. Both sides share the `(base, exponent)` encoding.
pub fn ab_constants(direction: AbDirection, value: &LogConstant, n: usize, k: usize) -> Result<LogConstant> {
    check_k(n, k)?;
    if value.exponent.is_negative() {
        return Err(Error::BadRange("constant out of range".into()));
    }
    let ratio = BigRational::new(k.into(), n.into());
    let exponent = match direction {
        AbDirection::AtoB => &value.exponent * ratio,
        AbDirection::BtoA => &value.exponent / ratio,
    };
    LogConstant::new(value.base, exponent)
}

fn split_exponent(e: &BigRational) -> (u32, u32) {
    let num = e.numer().to_u32().expect("exponent numerator fits in u32");
    let den = e.denom().to_u32().expect("exponent denominator fits in u32");
    (num, den)
}

/// `|S| >= C m^{n/k}` with `C = base^{-exponent}`, decided as
/// `|S|^{k d} base^{k e} >= m^{n d}` where `exponent = e / d`.
pub fn check_a_statement(size: u64, m: u64, n: usize, k: usize, c: &LogConstant) -> bool {
    let (e, d) = split_exponent(&c.exponent);
    let (n, k) = (n as u32, k as u32);
    big(size).pow(k * d) * big(c.base).pow(k * e) >= big(m).pow(n * d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BStatementReport {
    pub witness: EntropicWitness,
    /// `|S|^{k d} base^{n e}`.
    pub lhs: BigUint,
    /// `g^{n d}` with `g` the largest fiber.
    pub rhs: BigUint,
    pub ok: bool,
}

/// Whether the best rank-`k` projection of the uniform distribution on `set`
/// keeps entropy at least `delta (n - k) - D`, with `|S| = q^{delta n}` and
/// `D = exponent * log_q(base)`.
pub fn check_b_statement(set: &PointSet, k: usize, d: &LogConstant, budget: Budget) -> Result<BStatementReport> {
    let dist = RationalDistribution::uniform(set)?;
    let witness = best_projection(&dist, k, budget)?;
    let (e, den) = split_exponent(&d.exponent);
    let n = set.space.n as u32;
    let size = set.len() as u64;
    let lhs = big(size).pow(k as u32 * den) * big(d.base).pow(n * e);
    let rhs = big(witness.attained.max_weight).pow(n * den);
    Ok(BStatementReport {
        ok: lhs >= rhs,
        witness,
        lhs,
        rhs,
    })
}

/// Weight 1 on every point of the space.
pub fn uniform_on_space(space: &Space, budget: Budget) -> Result<RationalDistribution> {
    RationalDistribution::new(space.clone(), space.points(budget)?.map(|p| (p, 1)))
}

impl fmt::Display for RationalDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
