//! Point-flat incidences and the counting lemmas built on them.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exact::{ceil_sqrt, format_rational, int, qpow, BoundValue};
use crate::furstenberg::{is_furstenberg, search_extremal, FurstenbergInstance, SearchOptions, Verdict};
use crate::geometry::formats::{format_flat, parse_flat, parse_header, write_header};
use crate::geometry::{enumerate_flats, flat_count, qbinomial, Flat, PointSet, Space, Subspace};

/// Distinct flats of one common rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatFamily {
    pub space: Space,
    rank: usize,
    flats: BTreeSet<Flat>,
}

impl FlatFamily {
    /// Fails on mixed ranks, wrong ambient dimension or repeated flats.
    pub fn new(space: Space, rank: usize, flats: impl IntoIterator<Item = Flat>) -> Result<Self> {
        if rank > space.n {
            return Err(Error::BadRange(format!("rank {rank} exceeds dimension {}", space.n)));
        }
        let mut set = BTreeSet::new();
        for f in flats {
            if f.direction().ambient_dim() != space.n {
                return Err(Error::DimensionMismatch {
                    expected: space.n,
                    got: f.direction().ambient_dim(),
                });
            }
            if f.dim() != rank {
                return Err(Error::InvalidInstance(format!("flat of rank {} in a rank {rank} family", f.dim())));
            }
            if !set.insert(f) {
                return Err(Error::InvalidInstance("flat listed twice".into()));
            }
        }
        Ok(FlatFamily { space, rank, flats: set })
    }

    /// Header followed by one `rows ; shift` line per flat; the rank is
    /// taken from the first flat (0 lines means rank 0).
    pub fn parse(text: &str) -> Result<Self> {
        let (space, body) = parse_header(text)?;
        let flats = body
            .into_iter()
            .map(|(ln, line)| parse_flat(&space, line, ln))
            .collect::<Result<Vec<_>>>()?;
        let rank = flats.first().map_or(0, |f| f.dim());
        FlatFamily::new(space, rank, flats)
    }

    pub fn to_text(&self) -> String {
        let mut s = write_header(&self.space);
        for f in &self.flats {
            s.push_str(&format_flat(&self.space.field, f));
            s.push('\n');
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Flat> {
        self.flats.iter()
    }
}

fn check_shared(s: &PointSet, l: &FlatFamily) -> Result<()> {
    if s.space.n != l.space.n {
        return Err(Error::DimensionMismatch {
            expected: l.space.n,
            got: s.space.n,
        });
    }
    if s.field() != &l.space.field {
        return Err(Error::IncompatibleFields("point set and flats use different fields".into()));
    }
    Ok(())
}

fn points_on(s: &PointSet, f: &Flat) -> u64 {
    s.iter().filter(|p| f.contains(s.field(), p)).count() as u64
}

pub fn count_incidences(s: &PointSet, l: &FlatFamily) -> Result<u64> {
    check_shared(s, l)?;
    let flats: Vec<&Flat> = l.iter().collect();
    Ok(flats.par_iter().map(|f| points_on(s, f)).sum())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HaemersReport {
    pub incidences: u64,
    /// `q^{k-n} |S| |L|`.
    pub term: BigRational,
    /// `q^k [n-1 choose k]_q |S| |L|`.
    pub radicand: BigUint,
    pub sqrt_ceil: BigUint,
    /// `I <= term + ceil(sqrt(radicand))`.
    pub ok: bool,
}

pub fn haemers_check(s: &PointSet, l: &FlatFamily) -> Result<HaemersReport> {
    let incidences = count_incidences(s, l)?;
    let q = s.space.q();
    let (n, k) = (s.space.n as u32, l.rank() as u32);
    let sl = BigUint::from(s.len()) * BigUint::from(l.len());
    let term = qpow(q, k as i64 - n as i64) * BigRational::from_integer(BigInt::from(sl.clone()));
    let gauss = if k < n { qbinomial(n - 1, k, q)? } else { BigUint::zero() };
    let radicand = BigUint::from(q).pow(k) * gauss * sl;
    let sqrt_ceil = ceil_sqrt(&radicand);
    let rhs = &term + BigRational::from_integer(BigInt::from(sqrt_ceil.clone()));
    Ok(HaemersReport {
        ok: BigRational::from_integer(incidences.into()) <= rhs,
        incidences,
        term,
        radicand,
        sqrt_ceil,
    })
}

fn check_delta_open(delta: &BigRational) -> Result<()> {
    if !delta.is_positive() || *delta >= BigRational::one() {
        return Err(Error::BadDelta(format!("delta must lie in (0, 1), got {}", format_rational(delta))));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatCount {
    pub flat: Flat,
    pub points: u64,
    pub rich: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoorFlatReport {
    /// Poor means fewer than this many points.
    pub threshold: BigRational,
    pub flats: Vec<FlatCount>,
    pub poor: u64,
    pub bound: BigRational,
    pub ok: bool,
}

/// Counts `l`-flats of `F_q^k` holding fewer than `delta m q^{l-k} + 1`
/// points of `s`, where `m = |s|`, against
/// `q^{k-l} [k choose l]_q / (1 + m q^{l-k} (1 - delta)^2)`.
pub fn poor_flat_census(s: &PointSet, l: usize, delta: &BigRational, budget: Budget) -> Result<PoorFlatReport> {
    check_delta_open(delta)?;
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let k = s.space.n;
    if l == 0 || l >= k {
        return Err(Error::BadRange(format!("need 1 <= l <= k - 1, got l = {l}, k = {k}")));
    }
    let q = s.space.q();
    let m = int(BigInt::from(s.len()));
    let scale = &m * qpow(q, l as i64 - k as i64);
    let threshold = delta * &scale + int(1);
    let all: Vec<Flat> = enumerate_flats(s.field(), k, l, budget)?.collect();
    let flats: Vec<FlatCount> = all
        .into_par_iter()
        .map(|flat| {
            let points = points_on(s, &flat);
            FlatCount {
                rich: int(points) >= threshold,
                flat,
                points,
            }
        })
        .collect();
    let poor = flats.iter().filter(|f| !f.rich).count() as u64;
    let one_minus = int(1) - delta;
    let gauss = BigRational::from_integer(BigInt::from(qbinomial(k as u32, l as u32, q)?));
    let bound = qpow(q, (k - l) as i64) * gauss / (int(1) + scale * &one_minus * &one_minus);
    Ok(PoorFlatReport {
        ok: int(poor) <= bound,
        threshold,
        flats,
        poor,
        bound,
    })
}

/// How the Furstenberg factor in the subflat bound was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KFactor {
    Exact(u64),
    /// `ceil(2^{-d} q^d)`: a `(j, q^j)`-Furstenberg set contains a line in
    /// every direction, so the Kakeya bound in dimension `d` applies.
    Kakeya(u64),
}

impl KFactor {
    pub fn value(&self) -> u64 {
        match self {
            KFactor::Exact(v) | KFactor::Kakeya(v) => *v,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubflatReport {
    pub count: u64,
    pub k_factor: KFactor,
    pub bound: BigUint,
    pub ok: bool,
}

/// Checks that `family` holds exactly one flat per rank-`k` direction.
pub fn check_direction_family(family: &FlatFamily) -> Result<()> {
    let sp = &family.space;
    let expected = qbinomial(sp.n as u32, family.rank() as u32, sp.q())?;
    let dirs: BTreeSet<&Subspace> = family.iter().map(|f| f.direction()).collect();
    if dirs.len() != family.len() {
        return Err(Error::NotADirectionFamily("two flats share a direction".into()));
    }
    if BigUint::from(dirs.len()) != expected {
        return Err(Error::NotADirectionFamily(format!(
            "{} directions covered out of {expected}",
            dirs.len()
        )));
    }
    Ok(())
}

/// Counts distinct `l`-flats lying inside some flat of a direction family of
/// `k`-flats, against `K(q, n-l, k-l, q^{k-l}) [n choose l]_q`.
pub fn contained_subflats(family: &FlatFamily, l: usize, opts: SearchOptions) -> Result<SubflatReport> {
    let k = family.rank();
    let sp = &family.space;
    let n = sp.n;
    if k < 2 || k >= n || l == 0 || l >= k {
        return Err(Error::BadRange(format!("need 2 <= k < n and 1 <= l < k, got k = {k}, l = {l}, n = {n}")));
    }
    check_direction_family(family)?;
    let q = sp.q();
    let work = flat_count(n as u32, l as u32, q)? * BigUint::from(family.len());
    opts.budget.check(&work)?;
    let field = &sp.field;
    let big: Vec<&Flat> = family.iter().collect();
    let small: Vec<Flat> = enumerate_flats(field, n, l, opts.budget)?.collect();
    let count = small
        .par_iter()
        .filter(|f| big.iter().any(|g| g.contains_flat(field, f)))
        .count() as u64;

    let inst = FurstenbergInstance::new(field.clone(), n - l, k - l, q.pow((k - l) as u32))?;
    let k_factor = match search_extremal(&inst, opts)?.exact() {
        Some(v) => KFactor::Exact(v),
        None => {
            let d = (n - l) as u32;
            let v = BigRational::new(BigInt::from(q).pow(d), BigInt::from(2u32).pow(d)).ceil();
            KFactor::Kakeya(v.to_integer().to_u64().expect("small"))
        }
    };
    let bound = BigUint::from(k_factor.value()) * qbinomial(n as u32, l as u32, q)?;
    Ok(SubflatReport {
        ok: BigUint::from(count) >= bound,
        count,
        k_factor,
        bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BecksReport {
    pub hypothesis_met: bool,
    /// Rich means at least this many points.
    pub threshold: BigRational,
    pub flats: Vec<FlatCount>,
    pub rich: u64,
    /// `2^{k-2-n} q^{n-k+1} [n choose k-1]_q`.
    pub bound: BigRational,
    /// `rich > bound`; meaningful only when the hypothesis is met.
    pub ok: bool,
}

/// Census of `(k-1)`-flats with at least `delta m / q + 1` points of a
/// verified `(k, m)`-Furstenberg set.
pub fn kakeya_becks_census(s: &PointSet, k: usize, m: u64, delta: &BigRational, budget: Budget) -> Result<BecksReport> {
    if *delta >= BigRational::one() {
        return Err(Error::BadDelta(format!("delta must be below 1, got {}", format_rational(delta))));
    }
    let n = s.space.n;
    if k < 2 {
        return Err(Error::BadRange(format!("need k >= 2, got {k}")));
    }
    if let Verdict::Fails { .. } = is_furstenberg(s, k, m, budget)? {
        return Err(Error::NotFurstenberg { k, m });
    }
    let q = s.space.q();
    let one_minus = int(1) - delta;
    let need = int(BigInt::from(2u32).pow((n + 3 - k) as u32) * BigInt::from(q));
    let hypothesis_met = int(m) * &one_minus * &one_minus >= need;
    let threshold = delta * int(m) / int(q) + int(1);
    let all: Vec<Flat> = enumerate_flats(s.field(), n, k - 1, budget)?.collect();
    let flats: Vec<FlatCount> = all
        .into_par_iter()
        .map(|flat| {
            let points = points_on(s, &flat);
            FlatCount {
                rich: int(points) >= threshold,
                flat,
                points,
            }
        })
        .collect();
    let rich = flats.iter().filter(|f| f.rich).count() as u64;
    let gauss = BigRational::from_integer(BigInt::from(qbinomial(n as u32, (k - 1) as u32, q)?));
    let bound = qpow(2, k as i64 - 2 - n as i64) * qpow(q, (n - k + 1) as i64) * gauss;
    Ok(BecksReport {
        hypothesis_met,
        ok: int(rich) > bound,
        threshold,
        flats,
        rich,
        bound,
    })
}

/// `(delta kappa / (kappa + 1) - sqrt(delta (1 - delta) / kappa)) q^n` with
/// `kappa = gamma q^l`.
pub fn heavy_flats_lower_bound(delta: &BigRational, gamma: &BigRational, l: usize, n: usize, q: u64) -> Result<BoundValue> {
    if !delta.is_positive() || *delta > BigRational::one() {
        return Err(Error::BadRange(format!("delta must lie in (0, 1], got {}", format_rational(delta))));
    }
    if !gamma.is_positive() {
        return Err(Error::BadRange(format!("gamma must be positive, got {}", format_rational(gamma))));
    }
    if l > n {
        return Err(Error::BadRange(format!("rank {l} exceeds dimension {n}")));
    }
    let kappa = gamma * qpow(q, l as i64);
    let qn = qpow(q, n as i64);
    let lead = delta * &kappa / (&kappa + int(1)) * &qn;
    let radicand = delta * (int(1) - delta) / &kappa;
    Ok(BoundValue::sqrt_diff(lead, qn, radicand))
}

/// The heavy-flat bound specialised to `l = k`, `delta = m q^{-k}` and
/// `binom(n, k)_q` flats, i.e. `gamma = q^{k-n}`.
pub fn heavy_flats_for_furstenberg(q: u64, n: usize, k: usize, m: u64) -> Result<BoundValue> {
    heavy_flats_lower_bound(&(int(m) * qpow(q, -(k as i64))), &qpow(q, k as i64 - n as i64), k, n, q)
}

/// `(1 - q^{n-2k} - sqrt(q^{n-k} / m)) m q^{n-k}`.
pub fn pure_incidence_bound(q: u64, n: usize, k: usize, m: u64) -> BoundValue {
    let mq = int(m) * qpow(q, (n - k) as i64);
    let lead = (int(1) - qpow(q, n as i64 - 2 * k as i64)) * &mq;
    let radicand = qpow(q, (n - k) as i64) / int(m);
    BoundValue::sqrt_diff(lead, mq, radicand)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyFlatsAudit {
    pub gamma: BigRational,
    pub bound: BoundValue,
    pub points: u64,
    pub ok: bool,
}

/// Checks the heavy-flat bound on a concrete configuration: every flat of
/// `l_flats` must hold at least `delta q^l` points of `p`.
pub fn heavy_flats_audit(p: &PointSet, l_flats: &FlatFamily, delta: &BigRational) -> Result<HeavyFlatsAudit> {
    check_shared(p, l_flats)?;
    if l_flats.is_empty() {
        return Err(Error::EmptyInput);
    }
    let q = p.space.q();
    let (n, l) = (p.space.n, l_flats.rank());
    let need = delta * qpow(q, l as i64);
    if let Some(f) = l_flats.iter().find(|f| int(points_on(p, f)) < need) {
        return Err(Error::InvalidInstance(format!(
            "flat {} holds fewer than {} points",
            format_flat(p.field(), f),
            format_rational(&need)
        )));
    }
    let total = BigRational::from_integer(BigInt::from(flat_count(n as u32, l as u32, q)?));
    let gamma = int(l_flats.len() as u64) / total;
    let bound = heavy_flats_lower_bound(delta, &gamma, l, n, q)?;
    let points = p.len() as u64;
    Ok(HeavyFlatsAudit {
        ok: bound.le(&int(points)).expect("explicit"),
        gamma,
        bound,
        points,
    })
}

/// Incidences counted from the point side; equals [`count_incidences`].
pub fn count_incidences_by_points(s: &PointSet, l: &FlatFamily) -> Result<u64> {
    check_shared(s, l)?;
    let field = s.field();
    let mut per_point: BTreeMap<_, u64> = BTreeMap::new();
    for p in s.iter() {
        per_point.insert(p, l.iter().filter(|f| f.contains(field, p)).count() as u64);
    }
    Ok(per_point.values().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::geometry::{enumerate_subspaces, Point};
    use crate::gf::Field;

    fn all_points(sp: &Space) -> PointSet {
        PointSet::from_points(sp.clone(), sp.points(Budget::DEFAULT).unwrap()).unwrap()
    }

    fn all_flats(sp: &Space, k: usize) -> FlatFamily {
        FlatFamily::new(sp.clone(), k, enumerate_flats(&sp.field, sp.n, k, Budget::DEFAULT).unwrap()).unwrap()
    }

    #[test]
    fn incidence_basics() {
        let sp = Space::new(Field::prime(2).unwrap(), 3);
        let lines = all_flats(&sp, 1);
        assert_eq!(count_incidences(&PointSet::new(sp.clone()), &lines).unwrap(), 0);
        for k in [1, 2] {
            let l = all_flats(&sp, k);
            let want = 8 * qbinomial(3, k as u32, 2).unwrap().to_u64().unwrap();
            assert_eq!(count_incidences(&all_points(&sp), &l).unwrap(), want);
            assert_eq!(count_incidences_by_points(&all_points(&sp), &l).unwrap(), want);
        }
        let one = PointSet::from_points(sp.clone(), [sp.point(&[1, 0, 1])]).unwrap();
        let fl = Flat::new(&sp.field, Subspace::span(&sp.field, 3, &[vec![sp.field.one(); 3]]), &sp.point(&[1, 0, 1]));
        let fam = FlatFamily::new(sp.clone(), 1, [fl]).unwrap();
        assert_eq!(count_incidences(&one, &fam).unwrap(), 1);
    }

    #[test]
    fn haemers_full_space_is_tight_in_first_term() {
        let sp = Space::new(Field::prime(3).unwrap(), 2);
        let lines = all_flats(&sp, 1);
        let r = haemers_check(&all_points(&sp), &lines).unwrap();
        assert_eq!(r.incidences, 9 * 4);
        assert_eq!(r.term, rat(36, 1));
        assert!(r.ok);
        let empty = haemers_check(&PointSet::new(sp.clone()), &lines).unwrap();
        assert_eq!(empty.incidences, 0);
        assert!(empty.ok);
    }

    #[test]
    fn family_rejects_duplicates_and_mixed_ranks() {
        let sp = Space::new(Field::prime(2).unwrap(), 2);
        let l: Vec<Flat> = enumerate_flats(&sp.field, 2, 1, Budget::DEFAULT).unwrap().collect();
        assert!(FlatFamily::new(sp.clone(), 1, [l[0].clone(), l[0].clone()]).is_err());
        let pt = enumerate_flats(&sp.field, 2, 0, Budget::DEFAULT).unwrap().next().unwrap();
        assert!(FlatFamily::new(sp.clone(), 1, [l[0].clone(), pt]).is_err());
        let fam = FlatFamily::new(sp.clone(), 1, l).unwrap();
        assert_eq!(FlatFamily::parse(&fam.to_text()).unwrap(), fam);
    }

    #[test]
    fn poor_census_examples() {
        let sp = Space::new(Field::prime(2).unwrap(), 2);
        let r = poor_flat_census(&all_points(&sp), 1, &rat(1, 4), Budget::DEFAULT).unwrap();
        assert_eq!(r.poor, 0);
        assert!(r.ok);
        let single = PointSet::from_points(sp.clone(), [sp.point(&[0, 0])]).unwrap();
        let r = poor_flat_census(&single, 1, &rat(1, 2), Budget::DEFAULT).unwrap();
        // threshold 5/4: every line is poor, and 6 exceeds the bound 16/3
        assert_eq!(r.threshold, rat(5, 4));
        assert_eq!(r.flats.len(), 6);
        assert_eq!(r.poor, 6);
        assert_eq!(r.bound, rat(16, 3));
        assert!(!r.ok);
        assert!(matches!(poor_flat_census(&single, 1, &rat(1, 1), Budget::DEFAULT), Err(Error::BadDelta(_))));
        assert!(matches!(poor_flat_census(&PointSet::new(sp), 1, &rat(1, 2), Budget::DEFAULT), Err(Error::EmptyInput)));
    }

    #[test]
    fn poor_census_sweep_counts_violations_over_f2_plane() {
        let sp = Space::new(Field::prime(2).unwrap(), 2);
        let pts: Vec<Point> = sp.points(Budget::DEFAULT).unwrap().collect();
        let mut failures = Vec::new();
        for mask in 1u32..16 {
            let s = PointSet::from_points(sp.clone(), (0..4).filter(|i| mask >> i & 1 == 1).map(|i| pts[i].clone())).unwrap();
            for d in [rat(1, 4), rat(1, 2), rat(3, 4)] {
                let r = poor_flat_census(&s, 1, &d, Budget::DEFAULT).unwrap();
                if !r.ok {
                    failures.push((mask, format_rational(&d)));
                }
            }
        }
        // independently counted: 29 of the 45 cases exceed the bound at q = 2
        assert_eq!(failures.len(), 29);
        assert!(failures.contains(&(15, "3/4".to_string())));
    }

    #[test]
    fn subflats_of_all_planes() {
        let f = Field::prime(2).unwrap();
        let sp = Space::new(f.clone(), 3);
        let planes: Vec<Flat> = enumerate_subspaces(&f, 3, 2, Budget::DEFAULT)
            .unwrap()
            .map(|s| Flat::new(&f, s, &Point::zero(3)))
            .collect();
        let fam = FlatFamily::new(sp.clone(), 2, planes.clone()).unwrap();
        let r = contained_subflats(&fam, 1, SearchOptions::default()).unwrap();
        assert_eq!(r.k_factor, KFactor::Exact(3));
        assert_eq!(r.bound, BigUint::from(21u32));
        assert!(r.ok);
        let missing = FlatFamily::new(sp, 2, planes[1..].to_vec()).unwrap();
        assert!(matches!(contained_subflats(&missing, 1, SearchOptions::default()), Err(Error::NotADirectionFamily(_))));
    }

    #[test]
    fn becks_census_on_full_space() {
        let sp = Space::new(Field::prime(2).unwrap(), 3);
        let r = kakeya_becks_census(&all_points(&sp), 2, 4, &rat(1, 2), Budget::DEFAULT).unwrap();
        assert!(!r.hypothesis_met);
        assert_eq!(r.rich, 28);
        assert!(r.ok);
        let small = PointSet::from_points(sp.clone(), [sp.point(&[0, 0, 0])]).unwrap();
        assert!(matches!(
            kakeya_becks_census(&small, 2, 4, &rat(1, 2), Budget::DEFAULT),
            Err(Error::NotFurstenberg { .. })
        ));
    }

    #[test]
    fn heavy_flats_values() {
        // delta = 1: second term vanishes
        let v = heavy_flats_lower_bound(&rat(1, 1), &rat(1, 1), 1, 2, 3).unwrap();
        assert_eq!(v, BoundValue::Rational(rat(27, 4)));
        assert_eq!(
            pure_incidence_bound(3, 3, 2, 9),
            BoundValue::SqrtDiff { rational: rat(18, 1), coeff: rat(27, 1), radicand: rat(1, 3) }
        );
        assert!(heavy_flats_lower_bound(&rat(0, 1), &rat(1, 1), 1, 2, 3).is_err());
    }

    #[test]
    fn specialised_lemma_dominates_closed_form() {
        for (q, n, k) in [(3u64, 3usize, 2usize), (2, 3, 2), (5, 3, 2), (2, 5, 3), (3, 4, 3)] {
            for m in (q.pow((n - k) as u32) + 1)..=q.pow(k as u32) {
                let lemma = heavy_flats_for_furstenberg(q, n, k, m).unwrap().to_f64().unwrap();
                let closed = pure_incidence_bound(q, n, k, m).to_f64().unwrap();
                assert!(lemma >= closed - 1e-9, "q={q} n={n} k={k} m={m}");
            }
        }
    }

    #[test]
    fn heavy_audit_on_full_space() {
        let sp = Space::new(Field::prime(3).unwrap(), 2);
        let r = heavy_flats_audit(&all_points(&sp), &all_flats(&sp, 1), &rat(1, 1)).unwrap();
        assert_eq!(r.gamma, rat(1, 1));
        assert!(r.ok);
    }
}
