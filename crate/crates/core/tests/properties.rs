use std::collections::BTreeMap;

use flab_core::budget::Budget;
use flab_core::entropy::{pushforward, OntoLinearMap, RationalDistribution};
use flab_core::furstenberg::{is_furstenberg, search_extremal, FurstenbergInstance, SearchOptions, Verdict};
use flab_core::geometry::formats::{format_flat, format_point, parse_flat, parse_point, parse_point_set, write_point_set};
use flab_core::geometry::{enumerate_subspaces, Flat, Matrix, Point, PointSet, Space, Subspace};
use flab_core::gf::{Field, FieldElement};
use flab_core::polymethod::{binomial_mod_p, Multidegree, Multiplicity, Polynomial};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]).prop_map(|q| Field::of_order(q).unwrap())
}

fn prime_field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| Field::prime(p).unwrap())
}

fn elements(f: &Field, len: usize) -> impl Strategy<Value = Vec<FieldElement>> {
    let f = f.clone();
    prop::collection::vec(0..f.q(), len).prop_map(move |v| v.into_iter().map(|i| f.element(i).unwrap()).collect())
}

fn poly(f: Field, n: usize, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    let q = f.q();
    prop::collection::vec((prop::collection::vec(0..=max_deg, n), 1..q), 0..6).prop_map(move |terms| {
        Polynomial::from_terms(
            &f,
            n,
            terms
                .into_iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= max_deg)
                .map(|(e, c)| (Multidegree::new(e), f.element(c).unwrap())),
        )
    })
}

fn poly_and_points() -> impl Strategy<Value = (Polynomial, Point, Point)> {
    (prime_field(), 1usize..=3).prop_flat_map(|(f, n)| {
        (poly(f.clone(), n, 4), elements(&f, n), elements(&f, n))
            .prop_map(|(p, a, b)| (p, Point::new(a), Point::new(b)))
    })
}

fn multidegree(n: usize, max: u32) -> impl Strategy<Value = Multidegree> {
    prop::collection::vec(0..=max, n).prop_map(Multidegree::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_inverse_and_distributivity(f in field(), a in 0u32..9, b in 0u32..9, c in 0u32..9) {
        let q = f.q();
        let (a, b, c) = (f.element(a % q).unwrap(), f.element(b % q).unwrap(), f.element(c % q).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
    }

    /// `P(a + b) = sum_i P^(i)(a) b^i`.
    #[test]
    fn hasse_taylor_expansion((p, a, b) in poly_and_points()) {
        let f = p.field().clone();
        let n = p.n();
        let deg = p.degree().unwrap_or(0);
        let mut total = FieldElement::ZERO;
        for w in 0..=deg {
            for i in Multidegree::of_weight(n, w) {
                let bi = i.exponents().iter().zip(b.coords()).fold(f.one(), |acc, (&e, &x)| f.mul(acc, f.pow(x, e as u64)));
                total = f.add(total, f.mul(p.hasse_eval(&i, &a), bi));
            }
        }
        prop_assert_eq!(total, p.eval(&Point::new(a.coords().iter().zip(b.coords()).map(|(&x, &y)| f.add(x, y)).collect())));
    }

    /// `(P^(i))^(j) = prod_k C(i_k + j_k, i_k) P^(i+j)`.
    #[test]
    fn hasse_chain_rule(((p, _, _), i, j) in poly_and_points().prop_flat_map(|t| {
        let n = t.0.n();
        (Just(t), multidegree(n, 2), multidegree(n, 2))
    })) {
        let f = p.field().clone();
        let lhs = p.hasse_derivative(&i).hasse_derivative(&j);
        let c = i.exponents().iter().zip(j.exponents()).fold(1u64, |acc, (&x, &y)| {
            acc * binomial_mod_p((x + y) as u64, x as u64, f.p()) as u64 % f.p() as u64
        });
        let rhs = p.hasse_derivative(&i.add(&j)).scale(f.from_int(c as i64));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplicity_is_additive_under_products(
        (p, a, _) in poly_and_points(),
        seed in any::<u64>(),
    ) {
        let f = p.field().clone();
        let n = p.n();
        let other = Polynomial::var(&f, n, (seed % n as u64) as usize)
            .add(&Polynomial::constant(&f, n, f.from_int(seed as i64 % 3)));
        let prod = p.mul(&other);
        match (p.multiplicity(&a), other.multiplicity(&a)) {
            (Multiplicity::Finite(x), Multiplicity::Finite(y)) => prop_assert_eq!(prod.multiplicity(&a), Multiplicity::Finite(x + y)),
            _ => prop_assert_eq!(prod.multiplicity(&a), Multiplicity::Infinite),
        }
    }

    #[test]
    fn line_restriction_matches_evaluation((p, a, b) in poly_and_points(), t in 0u32..7) {
        prop_assume!(!b.is_zero());
        let f = p.field().clone();
        let t = f.element(t % f.q()).unwrap();
        let r = p.restrict_to_line(&a, &b).unwrap();
        let on_line = Point::new(a.coords().iter().zip(b.coords()).map(|(&x, &y)| f.add(x, f.mul(t, y))).collect());
        prop_assert_eq!(r.eval(&Point::new(vec![t])), p.eval(&on_line));
    }

    #[test]
    fn polynomial_text_round_trip((p, _, _) in poly_and_points()) {
        prop_assert_eq!(Polynomial::parse_text(p.field(), p.n(), &p.to_text()).unwrap(), p);
    }

    #[test]
    fn join_meet_dimension_formula(
        (f, rows_u, rows_v) in field().prop_flat_map(|f| {
            let n = 4;
            (Just(f.clone()), prop::collection::vec(elements(&f, n), 0..4), prop::collection::vec(elements(&f, n), 0..4))
        })
    ) {
        let u = Subspace::span(&f, 4, &rows_u);
        let v = Subspace::span(&f, 4, &rows_v);
        prop_assert_eq!(u.join(&f, &v).rank() + u.intersect(&f, &v).rank(), u.rank() + v.rank());
        prop_assert!(u.join(&f, &v).contains_subspace(&f, &u));
        prop_assert!(u.contains_subspace(&f, &u.intersect(&f, &v)));
    }

    #[test]
    fn point_and_flat_text_round_trip(
        (f, dir_rows, shift) in field().prop_flat_map(|f| {
            (Just(f.clone()), prop::collection::vec(elements(&f, 3), 0..3), elements(&f, 3))
        })
    ) {
        let sp = Space::new(f.clone(), 3);
        let p = Point::new(shift);
        prop_assert_eq!(parse_point(&sp, &format_point(&f, &p), 1).unwrap(), p.clone());
        let flat = Flat::new(&f, Subspace::span(&f, 3, &dir_rows), &p);
        prop_assert_eq!(parse_flat(&sp, &format_flat(&f, &flat), 1).unwrap(), flat.clone());
        let set = PointSet::from_points(sp.clone(), flat.points(&f)).unwrap();
        prop_assert_eq!(parse_point_set(&write_point_set(&set)).unwrap(), set);
    }

    /// Maps with equal kernels produce the same multiset of fiber weights.
    #[test]
    fn pushforward_depends_only_on_kernel(weights in prop::collection::vec(0u64..5, 8)) {
        prop_assume!(weights.iter().any(|&w| w > 0));
        let f = Field::prime(2).unwrap();
        let sp = Space::new(f.clone(), 3);
        let dist = RationalDistribution::new(
            sp.clone(),
            sp.points(Budget::DEFAULT).unwrap().zip(weights).filter(|(_, w)| *w > 0),
        ).unwrap();
        for kernel in enumerate_subspaces(&f, 3, 1, Budget::DEFAULT).unwrap() {
            let a = OntoLinearMap::from_kernel(&f, &kernel);
            // a different labeling of the codomain: swap rows and add one to the other
            let m = a.matrix();
            let r0 = m.row(0).to_vec();
            let r1: Vec<_> = m.row(1).iter().zip(&r0).map(|(&x, &y)| f.add(x, y)).collect();
            let b = OntoLinearMap::new(&f, Matrix::from_rows(3, &[r1, r0])).unwrap();
            prop_assert_eq!(b.kernel(), a.kernel());
            let sorted = |d: RationalDistribution| {
                let mut w: Vec<u64> = d.weights().values().copied().collect();
                w.sort();
                w
            };
            let pa = pushforward(&dist, &a).unwrap();
            let pb = pushforward(&dist, &b).unwrap();
            prop_assert_eq!(pa.total(), dist.total());
            prop_assert!(pa.min_entropy() <= dist.min_entropy());
            prop_assert!(pa.min_entropy().max_weight * 4 >= pa.total());
            prop_assert_eq!(sorted(pa), sorted(pb));
        }
    }

    #[test]
    fn verifier_witnesses_reverify(mask in 1u32..512, m in 1u64..=3) {
        let sp = Space::new(Field::prime(3).unwrap(), 2);
        let pts: Vec<Point> = sp.points(Budget::DEFAULT).unwrap().collect();
        let s = PointSet::from_points(sp.clone(), (0..9).filter(|i| mask >> i & 1 == 1).map(|i| pts[i].clone())).unwrap();
        match is_furstenberg(&s, 1, m, Budget::DEFAULT).unwrap() {
            Verdict::Verified(w) => {
                prop_assert_eq!(w.entries.len(), 4);
                prop_assert!(w.reverify(&s, m));
            }
            Verdict::Fails { direction, best } => {
                prop_assert!(best < m);
                let field = sp.field.clone();
                let most = pts.iter().map(|p| {
                    let fl = Flat::new(&field, direction.clone(), p);
                    s.iter().filter(|x| fl.contains(&field, x)).count() as u64
                }).max().unwrap();
                prop_assert_eq!(most, best);
            }
        }
    }
}

#[test]
fn extremal_value_is_monotone_in_m() {
    let f2 = Field::prime(2).unwrap();
    for n in [2usize, 3] {
        let values: Vec<u64> = (1..=2)
            .map(|m| {
                let inst = FurstenbergInstance::new(f2.clone(), n, 1, m).unwrap();
                search_extremal(&inst, SearchOptions::default()).unwrap().exact().unwrap()
            })
            .collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]), "n = {n}: {values:?}");
    }
    let f3 = Field::prime(3).unwrap();
    let values: BTreeMap<u64, u64> = (1..=3)
        .map(|m| {
            let inst = FurstenbergInstance::new(f3.clone(), 2, 1, m).unwrap();
            (m, search_extremal(&inst, SearchOptions::default()).unwrap().exact().unwrap())
        })
        .collect();
    assert_eq!(values[&1], 1);
    assert_eq!(values[&3], 7);
    assert!(values[&1] <= values[&2] && values[&2] <= values[&3]);
}
