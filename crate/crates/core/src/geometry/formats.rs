//! Text formats for point sets, weighted point sets and flat families.
//!
//! ```text
//! p e n
//! <modulus coefficients, low degree first>   (only when e > 1)
//! d d | d d | ...                            (one point per line)
//! ```
//!
//! Each coordinate is written as its `e` base-`p` digits. Weighted files add a
//! trailing integer to every point line. Flat files write one flat per line as
//! `row , row , ... ; shift`. Blank lines and lines starting with `#` are ignored.

use super::{Flat, Point, PointSet, Space, Subspace};
use crate::error::{Error, Result};
use crate::gf::{join_digits, parse_numbers, Field};

pub fn write_header(space: &Space) -> String {
    let f = &space.field;
    let mut s = format!("{} {} {}\n", f.p(), f.e(), space.n);
    if f.e() > 1 {
        s.push_str(&join_digits(f.modulus()));
        s.push('\n');
    }
    s
}

/// Splits a file into its ambient space and the numbered body lines.
pub fn parse_header(text: &str) -> Result<(Space, Vec<(usize, &str)>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `p e n` header"))?;
    let nums = parse_numbers(header, ln)?;
    if nums.len() != 3 {
        return Err(Error::parse(ln, "expected `p e n`"));
    }
    let (p, e, n) = (nums[0], nums[1] as u32, nums[2] as usize);
    let field = if e > 1 {
        let (ln, m) = lines.next().ok_or_else(|| Error::parse(ln + 1, "missing modulus line"))?;
        let modulus: Vec<u32> = parse_numbers(m, ln)?.into_iter().map(|c| c as u32).collect();
        if modulus.len() != e as usize + 1 {
            return Err(Error::parse(ln, format!("modulus needs {} coefficients", e + 1)));
        }
        Field::with_modulus(p, modulus)?
    } else {
        Field::new(p, e)?
    };
    Ok((Space::new(field, n), lines.collect()))
}

pub fn format_point(field: &Field, p: &Point) -> String {
    p.coords()
        .iter()
        .map(|&c| field.format_element(c))
        .collect::<Vec<_>>()
        .join(" | ")
}

pub fn parse_point(space: &Space, text: &str, line: usize) -> Result<Point> {
    let segments: Vec<&str> = text.split('|').collect();
    if segments.len() != space.n {
        return Err(Error::parse(
            line,
            format!("expected {} coordinates, found {}", space.n, segments.len()),
        ));
    }
    let coords = segments
        .iter()
        .map(|s| space.field.parse_element(s).map_err(|e| Error::parse(line, e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Point::new(coords))
}

pub fn write_point_set(set: &PointSet) -> String {
    let mut s = write_header(&set.space);
    for p in set.iter() {
        s.push_str(&format_point(set.field(), p));
        s.push('\n');
    }
    s
}

pub fn parse_point_set(text: &str) -> Result<PointSet> {
    let (space, body) = parse_header(text)?;
    let mut set = PointSet::new(space);
    for (ln, line) in body {
        let p = parse_point(&set.space, line, ln)?;
        set.insert(p)?;
    }
    Ok(set)
}

pub fn write_weighted<'a>(space: &Space, entries: impl IntoIterator<Item = (&'a Point, i64)>) -> String {
    let mut s = write_header(space);
    for (p, w) in entries {
        s.push_str(&format!("{} {}\n", format_point(&space.field, p), w));
    }
    s
}

/// Parses a point file whose lines carry one trailing integer each.
pub fn parse_weighted(text: &str) -> Result<(Space, Vec<(Point, i64)>)> {
    let (space, body) = parse_header(text)?;
    let mut out = Vec::with_capacity(body.len());
    for (ln, line) in body {
        let (coords, weight) = line
            .trim_end()
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| Error::parse(ln, "missing weight"))?;
        let weight: i64 = weight
            .parse()
            .map_err(|_| Error::parse(ln, format!("bad weight `{weight}`")))?;
        out.push((parse_point(&space, coords, ln)?, weight));
    }
    Ok((space, out))
}

pub fn format_flat(field: &Field, flat: &Flat) -> String {
    let rows: Vec<String> = flat
        .direction()
        .basis()
        .row_iter()
        .map(|r| format_point(field, &Point::new(r.to_vec())))
        .collect();
    format!("{} ; {}", rows.join(" , "), format_point(field, flat.shift()))
}

pub fn parse_flat(space: &Space, text: &str, line: usize) -> Result<Flat> {
    let (rows, shift) = text
        .split_once(';')
        .ok_or_else(|| Error::parse(line, "expected `rows ; shift`"))?;
    let rows: Vec<Point> = rows
        .split(',')
        .filter(|r| !r.trim().is_empty())
        .map(|r| parse_point(space, r, line))
        .collect::<Result<_>>()?;
    let shift = parse_point(space, shift, line)?;
    let vecs: Vec<&[crate::FieldElement]> = rows.iter().map(|r| r.coords()).collect();
    let direction = Subspace::span(&space.field, space.n, &vecs);
    if direction.rank() != rows.len() {
        return Err(Error::parse(line, "direction rows are linearly dependent"));
    }
    Ok(Flat::new(&space.field, direction, &shift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::geometry::enumerate_flats;

    #[test]
    fn point_line_layout() {
        let f = Field::new(2, 2).unwrap();
        let sp = Space::new(f.clone(), 2);
        let x = f.from_coeffs(&[0, 1]).unwrap();
        let p = Point::new(vec![f.one(), x]);
        assert_eq!(format_point(&f, &p), "1 0 | 0 1");
        let set = PointSet::from_points(sp, [p]).unwrap();
        assert_eq!(write_point_set(&set), "2 2 2\n1 1 1\n1 0 | 0 1\n");
        assert_eq!(parse_point_set(&write_point_set(&set)).unwrap(), set);
    }

    #[test]
    fn weighted_lines() {
        let text = "3 1 2\n0 | 1 4\n2 | 2 -1\n";
        let (space, entries) = parse_weighted(text).unwrap();
        assert_eq!(entries[0], (space.point(&[0, 1]), 4));
        assert_eq!(entries[1], (space.point(&[2, 2]), -1));
        let again = write_weighted(&space, entries.iter().map(|(p, w)| (p, *w)));
        assert_eq!(again, text);
    }

    #[test]
    fn every_flat_round_trips() {
        let f = Field::new(3, 1).unwrap();
        let sp = Space::new(f.clone(), 3);
        for k in 0..=3 {
            for flat in enumerate_flats(&f, 3, k, Budget::DEFAULT).unwrap() {
                let line = format_flat(&f, &flat);
                assert_eq!(parse_flat(&sp, &line, 1).unwrap(), flat, "{line}");
            }
        }
    }

    #[test]
    fn malformed_input() {
        assert!(parse_point_set("2 1 2\n0 | 1 | 1\n").is_err());
        assert!(parse_point_set("2 1 2\n0 | 2\n").is_err());
        assert!(parse_point_set("").is_err());
        assert!(parse_weighted("2 1 2\n0 | 1\n").is_err());
    }
}
