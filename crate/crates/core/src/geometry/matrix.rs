use std::fmt;

use crate::gf::{Field, FieldElement};

/// Dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

/// Result of row reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = FieldElement::ONE;
        }
        m
    }

    /// Builds a matrix from rows of equal length. `cols` is needed when there are no rows.
    pub fn from_rows<R: AsRef<[FieldElement]>>(cols: usize, rows: &[R]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix row");
            data.extend_from_slice(r.as_ref());
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[FieldElement]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, field: &Field, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        self.row_iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(FieldElement::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = field.add(out[(i, j)], field.mul(a, other[(k, j)]));
                }
            }
        }
        out
    }

    /// Reduced row echelon form. Zero rows are kept at the bottom so the shape is unchanged.
    pub fn rref(&self, field: &Field) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = field.inv(m[(r, c)]).expect("pivot is nonzero");
            for j in c..m.cols {
                m[(r, j)] = field.mul(m[(r, j)], inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m[(i, c)];
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let sub = field.mul(factor, m[(r, j)]);
                    m[(i, j)] = field.sub(m[(i, j)], sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rref(field).rank
    }

    /// Basis of `{v : self * v = 0}`: one vector per free column, with that
    /// column set to 1 and every other free column set to 0.
    pub fn null_space(&self, field: &Field) -> Vec<Vec<FieldElement>> {
        let Rref { matrix, pivots, .. } = self.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[f] = FieldElement::ONE;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(matrix[(i, f)]);
                }
                v
            })
            .collect()
    }

    /// Drops all-zero rows.
    pub fn nonzero_rows(&self) -> Matrix {
        let rows: Vec<&[FieldElement]> = self
            .row_iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect();
        Matrix::from_rows(self.cols, &rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<u32>> = self
            .row_iter()
            .map(|r| r.iter().map(|x| x.index()).collect())
            .collect();
        write!(f, "Matrix{rows:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(field: &Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<FieldElement>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_int(x)).collect())
            .collect();
        Matrix::from_rows(cols, &rows)
    }

    #[test]
    fn identity_is_reduced() {
        let f = Field::prime(3).unwrap();
        let id = Matrix::identity(4);
        let r = id.rref(&f);
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 4);
    }

    #[test]
    fn equal_rows_collapse() {
        let f = Field::prime(2).unwrap();
        let r = mat(&f, &[&[1, 1], &[1, 1]]).rref(&f);
        assert_eq!(r.matrix, mat(&f, &[&[1, 1], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn hand_reduced_example() {
        let f = Field::prime(2).unwrap();
        let r = mat(&f, &[&[0, 1, 1], &[1, 1, 0]]).rref(&f);
        assert_eq!(r.matrix, mat(&f, &[&[1, 0, 1], &[0, 1, 1]]));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_is_idempotent_and_kernel_is_annihilated() {
        let f = Field::prime(5).unwrap();
        let m = mat(&f, &[&[1, 2, 3, 4], &[2, 4, 1, 1], &[3, 1, 4, 0]]);
        let r = m.rref(&f);
        assert_eq!(r.matrix.rref(&f).matrix, r.matrix);
        let ns = m.null_space(&f);
        assert_eq!(ns.len(), 4 - r.rank);
        for v in ns {
            assert!(m.apply(&f, &v).iter().all(|x| x.is_zero()));
        }
    }
}
