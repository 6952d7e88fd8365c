use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use flab_core::entropy::{
    ab_constants, check_entropic_bound, check_recursion, norm_bound_check, AbDirection, BoundSides, EntropicWitness,
    EntropyValue, IntegerFunction, LogConstant, RationalDistribution,
};
use flab_core::exact::{parse_rational, BoundValue};
use flab_core::furstenberg::{
    bound_table, is_furstenberg, search_extremal, BoundKind, FurstenbergInstance, SearchOptions, SearchOutcome, Verdict,
};
use flab_core::geometry::formats::{format_flat, parse_header, parse_point, parse_point_set, parse_weighted, write_point_set};
use flab_core::incidence::{
    contained_subflats, haemers_check, heavy_flats_audit, heavy_flats_lower_bound, kakeya_becks_census, poor_flat_census,
    FlatCount, FlatFamily, KFactor,
};
use flab_core::polymethod::{find_vanishing_poly, key_bound, key_bound_threshold, sz_mult_audit, Polynomial, VanishingOutcome};
use flab_core::selftest;
use flab_core::{Field, FieldElement, PointSet, Space};
use num_rational::BigRational;
use serde_json::{json, Value};
use thiserror::Error;

use crate::output::{self, csv, point, rational, subspace, Report};
use crate::{AbArg, BoundsArgs, Command, EntropyCommand, Global, IncidenceCommand, InstanceArgs, PolyCommand, SearchArgs, VerifyArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] flab_core::Error),
    #[error("{0}")]
    Input(String),
    #[error("format {0} is not supported by this command")]
    UnsupportedFormat(output::Format),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: &Command, global: &Global) -> Result<()> {
    let report = match command {
        Command::Verify(a) => verify(a, global)?,
        Command::Search(a) => search(a, global)?,
        Command::Bounds(a) => bounds(a)?,
        Command::Entropy(c) => entropy(c, global)?,
        Command::Polycert(c) => polycert(c)?,
        Command::Incidence(c) => incidence(c, global)?,
        Command::Selftest => return selftest_cmd(global),
    };
    write(&report, global)
}

fn write(report: &Report, global: &Global) -> Result<()> {
    let bytes = report.emit(global.format).ok_or(CliError::UnsupportedFormat(global.format))?;
    match &global.output {
        Some(path) => fs::write(path, bytes).map_err(|e| CliError::Internal(format!("{}: {e}", path.display()))),
        None => {
            print!("{bytes}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_points(path: &Path) -> Result<PointSet> {
    Ok(parse_point_set(&read(path)?)?)
}

fn read_flats(path: &Path) -> Result<FlatFamily> {
    Ok(FlatFamily::parse(&read(path)?)?)
}

fn parse_rat(s: &str) -> Result<BigRational> {
    Ok(parse_rational(s)?)
}

fn instance(a: &InstanceArgs) -> Result<FurstenbergInstance> {
    Ok(FurstenbergInstance::new(Field::of_order(a.q)?, a.n, a.k, a.m)?)
}

fn bool_word(ok: bool) -> &'static str {
    if ok {
        "yes"
    } else {
        "no"
    }
}

fn verify(a: &VerifyArgs, g: &Global) -> Result<Report> {
    let set = read_points(&a.points)?;
    let f = set.field().clone();
    let verdict = is_furstenberg(&set, a.k, a.m, g.budget())?;
    Ok(match verdict {
        Verdict::Verified(w) => {
            let entries: Vec<Value> = w
                .entries
                .iter()
                .map(|c| {
                    json!({
                        "direction": subspace(&f, &c.direction),
                        "flat": format_flat(&f, &c.flat),
                        "count": c.count,
                    })
                })
                .collect();
            let mut text = format!("({}, {})-Furstenberg: yes ({} points, {} directions)\n", a.k, a.m, set.len(), entries.len());
            for c in &w.entries {
                text.push_str(&format!("{}  ->  {}  [{}]\n", subspace(&f, &c.direction), format_flat(&f, &c.flat), c.count));
            }
            let rows = w.entries.iter().enumerate().map(|(i, c)| {
                vec![i.to_string(), subspace(&f, &c.direction), format_flat(&f, &c.flat), c.count.to_string()]
            });
            Report::new(
                json!({"furstenberg": true, "k": a.k, "m": a.m, "size": set.len(), "witness": entries}),
                text,
            )
            .with_csv(csv("direction-id,direction,flat,count", rows))
        }
        Verdict::Fails { direction, best } => Report::new(
            json!({
                "furstenberg": false, "k": a.k, "m": a.m, "size": set.len(),
                "failing_direction": subspace(&f, &direction), "best_count": best,
            }),
            format!(
                "({}, {})-Furstenberg: no\ndirection {} meets the set in at most {} points\n",
                a.k,
                a.m,
                subspace(&f, &direction),
                best
            ),
        ),
    })
}

fn search(a: &SearchArgs, g: &Global) -> Result<Report> {
    let inst = instance(&a.instance)?;
    let opts = SearchOptions {
        exact_limit: a.exact_limit,
        budget: g.budget(),
    };
    let i = &a.instance;
    let head = format!("K(q={}, n={}, k={}, m={})", i.q, i.n, i.k, i.m);
    Ok(match search_extremal(&inst, opts)? {
        SearchOutcome::Exact { value, witness, nodes } => Report::new(
            json!({"exact": true, "value": value, "nodes": nodes, "witness": write_point_set(&witness)}),
            format!("{head} = {value}\nsearch nodes: {nodes}\nwitness:\n{}", write_point_set(&witness)),
        )
        .with_csv(csv("exact,lower,upper", [vec!["true".into(), value.to_string(), value.to_string()]])),
        SearchOutcome::Bounds {
            lower,
            upper,
            upper_witness,
            reason,
        } => {
            let mut text = format!("{lower} <= {head} <= {upper}\nreason: {reason}\n");
            if let Some(w) = &upper_witness {
                text.push_str("upper witness:\n");
                text.push_str(&write_point_set(w));
            }
            Report::new(
                json!({
                    "exact": false, "lower": lower, "upper": upper, "reason": reason,
                    "upper_witness": upper_witness.as_ref().map(write_point_set),
                }),
                text,
            )
            .with_csv(csv("exact,lower,upper", [vec!["false".into(), lower.to_string(), upper.to_string()]]))
        }
    })
}

fn bound_parts(v: &BoundValue) -> (Value, Value) {
    match v.headline_rational() {
        Some(r) => (json!(r.numer().to_string()), json!(r.denom().to_string())),
        None => (Value::Null, Value::Null),
    }
}

fn bounds(a: &BoundsArgs) -> Result<Report> {
    let inst = instance(&a.instance)?;
    let eps = a.epsilon.as_deref().map(parse_rat).transpose()?;
    let report = bound_table(&inst, eps.as_ref())?;
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            let (num, den) = bound_parts(&r.value);
            json!({
                "source": r.source,
                "kind": match r.kind { BoundKind::Lower => "lower", BoundKind::Upper => "upper" },
                "rhs_numerator": num,
                "rhs_denominator": den,
                "exponent_note": r.value.describe(),
                "applicable": r.applicable,
            })
        })
        .collect();
    let i = &a.instance;
    let mut text = format!("bounds for (k={}, m={})-Furstenberg sets in F_{}^{}\n", i.k, i.m, i.q, i.n);
    for r in &report.rows {
        let kind = match r.kind {
            BoundKind::Lower => ">=",
            BoundKind::Upper => "<=",
        };
        let flag = if r.applicable { "" } else { "  (not applicable)" };
        text.push_str(&format!("{:<24} {kind} {}{flag}\n", r.source, r.value));
    }
    text.push_str(&format!("best lower {}, best upper {}\n", report.best_lower(), report.best_upper()));
    let csv_rows = report
        .rows
        .iter()
        .map(|r| vec![r.source.to_string(), r.value.to_string(), r.applicable.to_string()]);
    Ok(Report::new(Value::Array(rows), text).with_csv(csv("source,rhs,applicable", csv_rows)))
}

fn entropy_json(h: &EntropyValue) -> Value {
    json!({"max_weight": h.max_weight, "total": h.total, "text": h.to_string()})
}

fn entropy_text(h: &EntropyValue) -> String {
    format!("{h}  (max_weight {}, total {})", h.max_weight, h.total)
}

fn witness_json(f: &Field, w: &EntropicWitness) -> Value {
    json!({
        "kernel": subspace(f, w.map.kernel()),
        "value": point(f, &w.shift_value),
        "attained": entropy_json(&w.attained),
    })
}

fn sides_json(s: &BoundSides) -> Value {
    json!({"lhs": s.lhs.to_string(), "rhs": s.rhs.to_string(), "ok": s.ok, "margin": rational(&s.margin())})
}

fn read_dist(path: &Path) -> Result<RationalDistribution> {
    Ok(RationalDistribution::parse(&read(path)?)?)
}

fn entropy(c: &EntropyCommand, g: &Global) -> Result<Report> {
    match c {
        EntropyCommand::Min { dist } => {
            let d = read_dist(dist)?;
            let h = d.min_entropy();
            Ok(Report::new(entropy_json(&h), format!("{}\n", entropy_text(&h)))
                .with_csv(csv("max_weight,total", [vec![h.max_weight.to_string(), h.total.to_string()]])))
        }
        EntropyCommand::Project { dist, k } => {
            let d = read_dist(dist)?;
            let f = d.space().field.clone();
            let w = flab_core::entropy::best_projection(&d, *k, g.budget())?;
            Ok(Report::new(
                witness_json(&f, &w),
                format!(
                    "kernel: {}\nmode value: {}\n{}\n",
                    subspace(&f, w.map.kernel()),
                    point(&f, &w.shift_value),
                    entropy_text(&w.attained)
                ),
            ))
        }
        EntropyCommand::Bound { dist, k } => {
            let d = read_dist(dist)?;
            let f = d.space().field.clone();
            let r = check_entropic_bound(&d, *k, g.budget())?;
            Ok(Report::new(
                json!({
                    "input": entropy_json(&r.input),
                    "witness": witness_json(&f, &r.witness),
                    "sides": sides_json(&r.sides),
                    "ok": r.ok(),
                }),
                format!(
                    "input {}\nbest rank-{k} kernel {}: {}\nlhs {}\nrhs {}\nholds: {}\n",
                    entropy_text(&r.input),
                    subspace(&f, r.witness.map.kernel()),
                    entropy_text(&r.witness.attained),
                    r.sides.lhs,
                    r.sides.rhs,
                    bool_word(r.ok())
                ),
            ))
        }
        EntropyCommand::Recursion { dist, k } => {
            let d = read_dist(dist)?;
            let f = d.space().field.clone();
            let r = check_recursion(&d, *k, g.budget())?;
            let mut text = String::new();
            for (i, s) in r.steps.iter().enumerate() {
                text.push_str(&format!("step {}: kernel {}  {}\n", i + 1, subspace(&f, s.map.kernel()), entropy_text(&s.attained)));
            }
            text.push_str(&format!(
                "greedy {}\ndirect {}\ngreedy <= direct: {}\nbound holds: {}\n",
                entropy_text(&r.greedy),
                entropy_text(&r.direct.attained),
                bool_word(r.greedy_le_direct()),
                bool_word(r.ok())
            ));
            Ok(Report::new(
                json!({
                    "steps": r.steps.iter().map(|s| witness_json(&f, s)).collect::<Vec<_>>(),
                    "composed_kernel": subspace(&f, r.composed.kernel()),
                    "greedy": entropy_json(&r.greedy),
                    "direct": witness_json(&f, &r.direct),
                    "greedy_sides": sides_json(&r.greedy_sides),
                    "direct_sides": sides_json(&r.direct_sides),
                    "greedy_le_direct": r.greedy_le_direct(),
                    "ok": r.ok(),
                }),
                text,
            ))
        }
        EntropyCommand::Norm { function, r } => {
            let func = IntegerFunction::parse(&read(function)?)?;
            let f = func.space().field.clone();
            let rep = norm_bound_check(&func, *r, g.budget())?;
            let failing = rep.failing_direction.as_ref().map(|s| subspace(&f, s));
            let mut text = format!("line hypothesis (every direction has a line summing to >= {}): {}\n", r, bool_word(rep.hypothesis_ok));
            if let Some(d) = &failing {
                text.push_str(&format!("failing direction: {d}\n"));
            }
            text.push_str(&format!(
                "sum |f|^n = {}\nbound = {}/{}\nholds: {}\n",
                rep.sum,
                rep.bound_num,
                rep.bound_den,
                bool_word(rep.ok)
            ));
            Ok(Report::new(
                json!({
                    "r": rep.r,
                    "hypothesis_ok": rep.hypothesis_ok,
                    "failing_direction": failing,
                    "sum": rep.sum.to_string(),
                    "bound_numerator": rep.bound_num.to_string(),
                    "bound_denominator": rep.bound_den.to_string(),
                    "ok": rep.ok,
                }),
                text,
            ))
        }
        EntropyCommand::Ab {
            direction,
            base,
            exponent,
            n,
            k,
            q,
        } => {
            let input = LogConstant::new(*base, parse_rat(exponent)?)?;
            let dir = match direction {
                AbArg::Atob => AbDirection::AtoB,
                AbArg::Btoa => AbDirection::BtoA,
            };
            let out = ab_constants(dir, &input, *n, *k)?;
            let units = q.and_then(|q| out.in_units_of(q));
            let text = match dir {
                AbDirection::AtoB => format!(
                    "C = {input}  ->  D = {} * log_q({})\n",
                    rational(&out.exponent),
                    out.base
                ),
                AbDirection::BtoA => format!(
                    "D = {} * log_q({})  ->  C = {out}\n",
                    rational(&input.exponent),
                    input.base
                ),
            };
            let text = match &units {
                Some(u) => format!("{text}in units of log_q(q): {}\n", rational(u)),
                None => text,
            };
            Ok(Report::new(
                json!({
                    "direction": dir,
                    "input": {"base": input.base, "exponent": rational(&input.exponent)},
                    "output": {"base": out.base, "exponent": rational(&out.exponent)},
                    "units_of_q": units.as_ref().map(rational),
                }),
                text,
            ))
        }
    }
}

/// Polynomial file: a `p e n` geometry header, then `coeff : exps` lines.
fn read_poly(path: &Path) -> Result<Polynomial> {
    let text = read(path)?;
    let (space, body) = parse_header(&text)?;
    let last = body.last().map_or(0, |(ln, _)| *ln);
    let mut lines = vec![""; last];
    for (ln, l) in body {
        lines[ln - 1] = l;
    }
    Ok(Polynomial::parse_text(&space.field, space.n, &lines.join("\n"))?)
}

fn parse_subset(field: &Field, s: &str) -> Result<Vec<FieldElement>> {
    s.split(',')
        .map(|t| {
            let i: u32 = t.trim().parse().map_err(|_| CliError::Input(format!("bad element index `{t}`")))?;
            Ok(field.element(i)?)
        })
        .collect()
}

fn polycert(c: &PolyCommand) -> Result<Report> {
    match c {
        PolyCommand::Audit { poly, subset } => {
            let p = read_poly(poly)?;
            let u = match subset {
                Some(s) => parse_subset(p.field(), s)?,
                None => p.field().elements().collect(),
            };
            let a = sz_mult_audit(&p, &u)?;
            Ok(Report::new(
                json!({"degree": p.degree(), "sum": a.sum, "bound": a.bound, "ok": a.ok}),
                format!(
                    "sum of multiplicities {} <= deg * |U|^(n-1) = {}: {}\n",
                    a.sum,
                    a.bound,
                    bool_word(a.ok)
                ),
            ))
        }
        PolyCommand::Mult { poly, point: pt } => {
            let p = read_poly(poly)?;
            let space = Space::new(p.field().clone(), p.n());
            let a = parse_point(&space, pt, 1)?;
            let m = p.multiplicity(&a);
            Ok(Report::new(
                json!({"point": point(&space.field, &a), "multiplicity": m.to_string()}),
                format!("mult(P, {}) = {m}\n", point(&space.field, &a)),
            ))
        }
        PolyCommand::Vanish { targets, degree } => {
            let (space, entries) = parse_weighted(&read(targets)?)?;
            let mut map = BTreeMap::new();
            for (p, w) in entries {
                let w = u32::try_from(w).map_err(|_| CliError::Input(format!("bad multiplicity {w}")))?;
                map.insert(p, w);
            }
            let header = flab_core::geometry::formats::write_header(&space);
            Ok(match find_vanishing_poly(&space.field, space.n, &map, *degree)? {
                VanishingOutcome::Found {
                    poly,
                    hypothesis_holds,
                    equations,
                    unknowns,
                } => Report::new(
                    json!({
                        "found": true, "equations": equations, "unknowns": unknowns,
                        "hypothesis_holds": hypothesis_holds, "poly": format!("{header}{}", poly.to_text()),
                    }),
                    format!("{header}{}", poly.to_text()),
                ),
                VanishingOutcome::NoSolution(cert) => Report::new(
                    json!({
                        "found": false, "equations": cert.equations, "unknowns": cert.unknowns,
                        "rank": cert.rank, "hypothesis_holds": cert.hypothesis_holds,
                    }),
                    format!(
                        "no nonzero polynomial of degree <= {degree}: rank {} = unknowns {} ({} equations)\n",
                        cert.rank, cert.unknowns, cert.equations
                    ),
                ),
            })
        }
        PolyCommand::Keybound { function, r, m, max_m } => {
            let func = IntegerFunction::parse(&read(function)?)?;
            let (q, n) = (func.space().q(), func.space().n);
            let values = func.abs_values();
            let kb = match (m, max_m) {
                (Some(m), _) => Some(key_bound(&values, q, n, *r, *m)?),
                (None, Some(max)) => key_bound_threshold(&values, q, n, *r, *max)?,
                (None, None) => return Err(CliError::Input("one of --m or --max-m is required".into())),
            };
            Ok(match kb {
                Some(kb) => Report::new(
                    json!({"m": kb.m, "lhs": kb.lhs.to_string(), "rhs": kb.rhs.to_string(), "holds": kb.holds}),
                    format!("m = {}\nlhs {}\nrhs {}\nholds: {}\n", kb.m, kb.lhs, kb.rhs, bool_word(kb.holds)),
                ),
                None => Report::new(
                    json!({"m": null, "holds": false}),
                    "no multiple of r up to --max-m satisfies the inequality\n".into(),
                ),
            })
        }
    }
}

fn census_csv(flats: &[FlatCount]) -> String {
    csv(
        "flat-id,point-count,rich/poor",
        flats.iter().enumerate().map(|(i, c)| {
            vec![
                i.to_string(),
                c.points.to_string(),
                if c.rich { "rich" } else { "poor" }.to_string(),
            ]
        }),
    )
}

fn census_json(f: &Field, flats: &[FlatCount]) -> Value {
    Value::Array(
        flats
            .iter()
            .enumerate()
            .map(|(i, c)| json!({"id": i, "flat": format_flat(f, &c.flat), "points": c.points, "rich": c.rich}))
            .collect(),
    )
}

fn incidence(c: &IncidenceCommand, g: &Global) -> Result<Report> {
    match c {
        IncidenceCommand::Haemers { points, flats } => {
            let s = read_points(points)?;
            let l = read_flats(flats)?;
            let r = haemers_check(&s, &l)?;
            Ok(Report::new(
                json!({
                    "incidences": r.incidences,
                    "term": rational(&r.term),
                    "radicand": r.radicand.to_string(),
                    "sqrt_ceil": r.sqrt_ceil.to_string(),
                    "ok": r.ok,
                }),
                format!(
                    "incidences {}\nbound {} + sqrt({})\nholds: {}\n",
                    r.incidences,
                    rational(&r.term),
                    r.radicand,
                    bool_word(r.ok)
                ),
            ))
        }
        IncidenceCommand::Poor { points, l, delta } => {
            let s = read_points(points)?;
            let f = s.field().clone();
            let r = poor_flat_census(&s, *l, &parse_rat(delta)?, g.budget())?;
            Ok(Report::new(
                json!({
                    "threshold": rational(&r.threshold),
                    "poor": r.poor,
                    "bound": rational(&r.bound),
                    "ok": r.ok,
                    "flats": census_json(&f, &r.flats),
                }),
                format!(
                    "{} flats, {} poor (fewer than {} points)\nbound {}\nholds: {}\n",
                    r.flats.len(),
                    r.poor,
                    rational(&r.threshold),
                    rational(&r.bound),
                    bool_word(r.ok)
                ),
            )
            .with_csv(census_csv(&r.flats)))
        }
        IncidenceCommand::Subflats { flats, l, exact_limit } => {
            let fam = read_flats(flats)?;
            let opts = SearchOptions {
                exact_limit: *exact_limit,
                budget: g.budget(),
            };
            let r = contained_subflats(&fam, *l, opts)?;
            let (how, kv) = match r.k_factor {
                KFactor::Exact(v) => ("exact", v),
                KFactor::Kakeya(v) => ("kakeya", v),
            };
            Ok(Report::new(
                json!({
                    "count": r.count, "k_factor": kv, "k_factor_source": how,
                    "bound": r.bound.to_string(), "ok": r.ok,
                }),
                format!(
                    "contained {l}-flats {}\nbound {} (Furstenberg factor {kv}, {how})\nholds: {}\n",
                    r.count,
                    r.bound,
                    bool_word(r.ok)
                ),
            ))
        }
        IncidenceCommand::Becks { points, k, m, delta } => {
            let s = read_points(points)?;
            let f = s.field().clone();
            let r = kakeya_becks_census(&s, *k, *m, &parse_rat(delta)?, g.budget())?;
            Ok(Report::new(
                json!({
                    "hypothesis_met": r.hypothesis_met,
                    "threshold": rational(&r.threshold),
                    "rich": r.rich,
                    "bound": rational(&r.bound),
                    "ok": r.ok,
                    "flats": census_json(&f, &r.flats),
                }),
                format!(
                    "hypothesis met: {}\n{} flats, {} rich (at least {} points)\nbound {}\nholds: {}\n",
                    bool_word(r.hypothesis_met),
                    r.flats.len(),
                    r.rich,
                    rational(&r.threshold),
                    rational(&r.bound),
                    bool_word(r.ok)
                ),
            )
            .with_csv(census_csv(&r.flats)))
        }
        IncidenceCommand::Heavy { delta, gamma, l, n, q } => {
            let v = heavy_flats_lower_bound(&parse_rat(delta)?, &parse_rat(gamma)?, *l, *n, *q)?;
            let (num, den) = bound_parts(&v);
            Ok(Report::new(
                json!({"value": v.to_string(), "rhs_numerator": num, "rhs_denominator": den, "exponent_note": v.describe()}),
                format!("points covered by heavy flats >= {v}\n"),
            ))
        }
        IncidenceCommand::HeavyAudit { points, flats, delta } => {
            let s = read_points(points)?;
            let l = read_flats(flats)?;
            let r = heavy_flats_audit(&s, &l, &parse_rat(delta)?)?;
            Ok(Report::new(
                json!({"gamma": rational(&r.gamma), "bound": r.bound.to_string(), "points": r.points, "ok": r.ok}),
                format!(
                    "gamma {}\ncovered points {} >= {}: {}\n",
                    rational(&r.gamma),
                    r.points,
                    r.bound,
                    bool_word(r.ok)
                ),
            ))
        }
    }
}

fn selftest_cmd(g: &Global) -> Result<()> {
    let results = selftest::run_all();
    let mut text = String::new();
    for r in &results {
        text.push_str(&format!("{:<22} {:>8} cases  {}", r.name, r.cases, if r.ok { "ok" } else { "FAIL" }));
        if !r.detail.is_empty() {
            text.push_str(&format!("  {}", r.detail));
        }
        text.push('\n');
    }
    let failed = results.iter().filter(|r| !r.ok).count();
    text.push_str(&format!("{} of {} checks passed\n", results.len() - failed, results.len()));
    let json = Value::Array(
        results
            .iter()
            .map(|r| json!({"name": r.name, "cases": r.cases, "ok": r.ok, "detail": r.detail}))
            .collect(),
    );
    let rows = results
        .iter()
        .map(|r| vec![r.name.to_string(), r.cases.to_string(), r.ok.to_string()]);
    write(&Report::new(json, text).with_csv(csv("check,cases,ok", rows)), g)?;
    if failed > 0 {
        return Err(CliError::Internal(format!("{failed} selftest checks failed")));
    }
    Ok(())
}
