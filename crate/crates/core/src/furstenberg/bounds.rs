use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};
use serde::Serialize;

use super::FurstenbergInstance;
use crate::error::{Error, Result};
use crate::exact::{format_rational, int, qpow, rat, rpow, BoundValue};
use crate::incidence::pure_incidence_bound;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub source: &'static str,
    pub kind: BoundKind,
    pub value: BoundValue,
    pub applicable: bool,
    /// Why the row is or is not applicable.
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub instance: FurstenbergInstance,
    pub epsilon: Option<BigRational>,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn row(&self, source: &str) -> Option<&BoundRow> {
        self.rows.iter().find(|r| r.source == source)
    }

    /// Largest integer implied by the applicable lower rows (at least `m`).
    pub fn best_lower(&self) -> BigInt {
        self.rows
            .iter()
            .filter(|r| r.applicable && r.kind == BoundKind::Lower)
            .filter_map(|r| r.value.ceil())
            .fold(BigInt::from(self.instance.m), |a, b| a.max(b))
    }

    /// Smallest integer implied by the applicable rational upper rows.
    pub fn best_upper(&self) -> BigInt {
        self.rows
            .iter()
            .filter(|r| r.applicable && r.kind == BoundKind::Upper)
            .filter_map(|r| r.value.headline_rational().filter(|_| matches!(r.value, BoundValue::Rational(_))))
            .map(|v| v.numer().div_floor(v.denom()))
            .min()
            .expect("pigeonhole row is always present")
    }

    /// Whether `size` respects every applicable lower row.
    pub fn admits(&self, size: u64) -> bool {
        let t = BigRational::from_integer(size.into());
        self.rows
            .iter()
            .filter(|r| r.applicable && r.kind == BoundKind::Lower)
            .all(|r| r.value.le(&t).unwrap_or(true))
    }
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

/// Every known bound on the smallest `(k, m)`-Furstenberg set, with its
/// hypotheses evaluated for this instance.
pub fn bound_table(inst: &FurstenbergInstance, epsilon: Option<&BigRational>) -> Result<BoundReport> {
    if let Some(e) = epsilon {
        if !e.is_positive() || *e >= BigRational::one() {
            return Err(Error::BadEpsilon(format!("epsilon must lie in (0, 1), got {}", format_rational(e))));
        }
    }
    let q = inst.q();
    let (n, k, m) = (inst.n as u32, inst.k as u32, inst.m);
    let qn = qpow(q, n as i64);
    let full = BigUint::from(m) == BigUint::from(q).pow(k);
    let mq = int(big(m)) * qpow(q, (n - k) as i64);
    let mut rows = Vec::new();

    rows.push(BoundRow {
        source: "pigeonhole",
        kind: BoundKind::Upper,
        value: BoundValue::Rational(mq.clone()),
        applicable: true,
        note: "any m q^(n-k) points".into(),
    });

    rows.push(BoundRow {
        source: "kakeya",
        kind: BoundKind::Lower,
        value: BoundValue::Rational(&qn / rpow(&int(2), n)),
        applicable: k == 1 && m == q,
        note: "requires k = 1 and m = q".into(),
    });

    let ratio = BigRational::new(big(q).pow(k + 1), big(q).pow(k) + big(q) - 1);
    rows.push(BoundRow {
        source: "full-flat",
        kind: BoundKind::Lower,
        value: BoundValue::Rational(rpow(&ratio, n)),
        applicable: full,
        note: "requires m = q^k".into(),
    });

    let shrink = int(1) - BigRational::new(big(q) - 3, 2 * big(q).pow(k));
    rows.push(BoundRow {
        source: "full-flat-construction",
        kind: BoundKind::Upper,
        value: BoundValue::Rational(rpow(&shrink, n / (k + 1)) * &qn),
        applicable: full,
        note: "requires m = q^k".into(),
    });

    rows.push(BoundRow {
        source: "algebraic",
        kind: BoundKind::Lower,
        value: BoundValue::Unspecified,
        applicable: false,
        note: "C m^(n/k) with no explicit constant".into(),
    });

    let mn = int(big(m).pow(n));
    rows.push(BoundRow {
        source: "entropy",
        kind: BoundKind::Lower,
        value: BoundValue::root(&mn / rpow(&int(2), n * k), k),
        applicable: true,
        note: "m^(n/k) / 2^n; t >= rhs iff t^k 2^(nk) >= m^n".into(),
    });

    rows.push(match epsilon {
        None => BoundRow {
            source: "large-m",
            kind: BoundKind::Lower,
            value: BoundValue::Unspecified,
            applicable: false,
            note: "needs epsilon".into(),
        },
        Some(e) => {
            let threshold = int(big(2).pow(n + 7 - k) * big(q)) / (e * e);
            let ok = k >= 2 && int(big(m)) >= threshold;
            BoundRow {
                source: "large-m",
                kind: BoundKind::Lower,
                value: BoundValue::Rational((int(1) - e) * &mq),
                applicable: ok,
                note: format!("requires k >= 2 and m >= 2^(n+7-k) q / eps^2 = {}", format_rational(&threshold)),
            }
        }
    });

    let incidence = 2 * k > n && big(q).pow(n - k) < big(m);
    rows.push(BoundRow {
        source: "pure-incidence",
        kind: BoundKind::Lower,
        value: pure_incidence_bound(q, inst.n, inst.k, m),
        applicable: incidence,
        note: "requires n/2 < k and q^(n-k) < m".into(),
    });

    rows.push(BoundRow {
        source: "divisible",
        kind: BoundKind::Lower,
        value: BoundValue::root(rpow(&rat(m as i64, 2), n), k),
        applicable: n % k == 0,
        note: "(m/2)^(n/k); requires k | n".into(),
    });

    Ok(BoundReport {
        instance: inst.clone(),
        epsilon: epsilon.cloned(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn inst(q: u64, n: usize, k: usize, m: u64) -> FurstenbergInstance {
        FurstenbergInstance::new(Field::of_order(q).unwrap(), n, k, m).unwrap()
    }

    fn value(r: &BoundReport, s: &str) -> BoundValue {
        r.row(s).unwrap().value.clone()
    }

    #[test]
    fn q5_n4_k2_full() {
        let r = bound_table(&inst(5, 4, 2, 25), None).unwrap();
        assert_eq!(value(&r, "entropy"), BoundValue::Rational(rat(625, 16)));
        assert_eq!(value(&r, "divisible"), BoundValue::Rational(rat(625, 4)));
        assert!(r.row("divisible").unwrap().applicable);
    }

    #[test]
    fn kakeya_row() {
        let r = bound_table(&inst(2, 2, 1, 2), None).unwrap();
        assert_eq!(value(&r, "kakeya"), BoundValue::Rational(rat(1, 1)));
        assert!(r.row("kakeya").unwrap().applicable);
    }

    #[test]
    fn pigeonhole_row() {
        let r = bound_table(&inst(3, 3, 1, 3), None).unwrap();
        assert_eq!(value(&r, "pigeonhole"), BoundValue::Rational(rat(27, 1)));
        assert_eq!(r.best_upper(), BigInt::from(27));
    }

    #[test]
    fn fractional_exponent_stays_a_root() {
        let r = bound_table(&inst(2, 3, 2, 3), None).unwrap();
        // (3^3 / 2^6)^(1/2)
        assert_eq!(
            value(&r, "entropy"),
            BoundValue::Root {
                radicand: rat(27, 64),
                index: 2
            }
        );
    }

    #[test]
    fn pure_incidence_row() {
        let r = bound_table(&inst(3, 3, 2, 9), None).unwrap();
        let row = r.row("pure-incidence").unwrap();
        assert!(row.applicable);
        // (1 - 1/3 - sqrt(1/3)) * 27
        assert_eq!(row.value, BoundValue::SqrtDiff { rational: rat(18, 1), coeff: rat(27, 1), radicand: rat(1, 3) });
    }

    #[test]
    fn epsilon_validation_and_large_m() {
        let i = inst(3, 3, 2, 9);
        assert!(matches!(bound_table(&i, Some(&rat(0, 1))), Err(Error::BadEpsilon(_))));
        assert!(matches!(bound_table(&i, Some(&rat(1, 1))), Err(Error::BadEpsilon(_))));
        let r = bound_table(&i, Some(&rat(1, 2))).unwrap();
        let row = r.row("large-m").unwrap();
        assert!(!row.applicable);
        assert_eq!(row.value, BoundValue::Rational(rat(27, 2)));
    }

    #[test]
    fn full_flat_rows_are_ordered() {
        for q in [3u64, 5, 7] {
            for n in 2..=6usize {
                for k in 1..n {
                    let m = q.pow(k as u32);
                    let r = bound_table(&inst(q, n, k, m), None).unwrap();
                    let lo = r.row("full-flat").unwrap().value.headline_rational().unwrap().clone();
                    let hi = r.row("full-flat-construction").unwrap().value.headline_rational().unwrap().clone();
                    assert!(lo <= hi, "q={q} n={n} k={k}");
                }
            }
        }
    }
}
