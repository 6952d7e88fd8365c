use super::{Field, FieldElement};
use crate::error::{Error, Result};
use crate::geometry::{Matrix, Point, Subspace};

/// `F_q`-linear identification of `F_{q^k}` with `F_q^k`, extended
/// coordinate-wise to `F_{q^k}^r -> F_q^{rk}`.
///
/// The base field is embedded through a root of its modulus inside the
/// extension, and the extension is expanded in the basis `1, x, ..., x^{k-1}`
/// where `x` is the generator of the extension's own modulus.
#[derive(Clone, Debug)]
pub struct ExtensionIso {
    base: Field,
    ext: Field,
    degree: usize,
    /// Image of each base element, indexed by packed base index.
    embedding: Vec<FieldElement>,
    /// `x^j` for `j < degree`.
    basis: Vec<FieldElement>,
    /// Maps extension coefficients over `F_p` to base coordinates over `F_p`.
    to_coords: Matrix,
    prime: Field,
}

impl ExtensionIso {
    pub fn new(base: &Field, ext: &Field) -> Result<Self> {
        if base.p() != ext.p() || !ext.e().is_multiple_of(base.e()) {
            return Err(Error::IncompatibleFields(format!(
                "{base:?} is not a subfield of {ext:?}"
            )));
        }
        let e = base.e() as usize;
        let degree = (ext.e() / base.e()) as usize;
        let prime = Field::prime(base.p() as u64)?;
        let constant = |c: u32| super::raw_element(c);

        let alpha = if e == 1 {
            None
        } else {
            let m = base.modulus();
            let root = ext
                .elements()
                .find(|&a| {
                    let v = m.iter().rev().fold(FieldElement::ZERO, |acc, &c| {
                        ext.add(ext.mul(acc, a), constant(c))
                    });
                    v.is_zero()
                })
                .ok_or_else(|| Error::IncompatibleFields("base modulus has no root in extension".into()))?;
            Some(root)
        };
        let embed = |c: FieldElement| -> FieldElement {
            match alpha {
                None => c,
                Some(a) => base.coeffs(c).iter().rev().fold(FieldElement::ZERO, |acc, &d| {
                    ext.add(ext.mul(acc, a), constant(d))
                }),
            }
        };
        let embedding: Vec<FieldElement> = base.elements().map(embed).collect();

        let x = if ext.e() > 1 { constant(ext.p()) } else { FieldElement::ONE };
        let basis: Vec<FieldElement> = (0..degree).map(|j| ext.pow(x, j as u64)).collect();

        // Column j*e + i holds the F_p coefficients of alpha^i * x^j.
        let dim = ext.e() as usize;
        let mut a = Matrix::zeros(dim, dim);
        for (j, &w) in basis.iter().enumerate() {
            for i in 0..e {
                let yi = match alpha {
                    None => FieldElement::ONE,
                    Some(al) => ext.pow(al, i as u64),
                };
                for (r, c) in ext.coeffs(ext.mul(yi, w)).into_iter().enumerate() {
                    a[(r, j * e + i)] = constant(c);
                }
            }
        }
        let to_coords = invert(&prime, &a)
            .ok_or_else(|| Error::IncompatibleFields("basis is singular".into()))?;

        Ok(ExtensionIso {
            base: base.clone(),
            ext: ext.clone(),
            degree,
            embedding,
            basis,
            to_coords,
            prime,
        })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    /// `k = [F_{q^k} : F_q]`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn embed(&self, c: FieldElement) -> FieldElement {
        self.embedding[c.index() as usize]
    }

    /// `F_q`-basis of the extension used for flattening.
    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    /// Base-field coordinates of one extension element.
    pub fn coords(&self, b: FieldElement) -> Vec<FieldElement> {
        let digits: Vec<FieldElement> = self.ext.coeffs(b).into_iter().map(super::raw_element).collect();
        let flat = self.to_coords.apply(&self.prime, &digits);
        let e = self.base.e() as usize;
        flat.chunks(e)
            .map(|ch| {
                let c: Vec<u32> = ch.iter().map(|d| d.index()).collect();
                self.base.from_coeffs(&c).expect("digits lie in F_p")
            })
            .collect()
    }

    pub fn element(&self, coords: &[FieldElement]) -> FieldElement {
        coords
            .iter()
            .zip(&self.basis)
            .fold(FieldElement::ZERO, |acc, (&c, &w)| self.ext.add(acc, self.ext.mul(self.embed(c), w)))
    }

    /// `F_{q^k}^r -> F_q^{rk}`, coordinate blocks of length `k` in order.
    pub fn flatten(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        v.iter().flat_map(|&b| self.coords(b)).collect()
    }

    pub fn unflatten(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if !v.len().is_multiple_of(self.degree) {
            return Err(Error::DimensionMismatch {
                expected: self.degree * v.len().div_ceil(self.degree),
                got: v.len(),
            });
        }
        Ok(v.chunks(self.degree).map(|ch| self.element(ch)).collect())
    }

    pub fn flatten_point(&self, p: &Point) -> Point {
        Point::new(self.flatten(p.coords()))
    }

    /// Image of an `F_{q^k}`-subspace of `F_{q^k}^r` as an `F_q`-subspace of `F_q^{rk}`.
    pub fn lift_subspace(&self, s: &Subspace) -> Subspace {
        let mut gens = Vec::with_capacity(s.rank() * self.degree);
        for row in s.basis().row_iter() {
            for &w in &self.basis {
                let scaled: Vec<FieldElement> = row.iter().map(|&c| self.ext.mul(c, w)).collect();
                gens.push(self.flatten(&scaled));
            }
        }
        Subspace::span(&self.base, s.ambient_dim() * self.degree, &gens)
    }
}

fn invert(field: &Field, a: &Matrix) -> Option<Matrix> {
    let n = a.rows();
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)];
        }
        aug[(i, n + i)] = FieldElement::ONE;
    }
    let r = aug.rref(field);
    if r.pivots.iter().take(n).copied().ne(0..n) {
        return None;
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = r.matrix[(i, n + j)];
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::geometry::{enumerate_subspaces, Space};

    #[test]
    fn trivial_extension_is_identity() {
        let f = Field::prime(5).unwrap();
        let iso = ExtensionIso::new(&f, &f).unwrap();
        for a in f.elements() {
            assert_eq!(iso.flatten(&[a]), vec![a]);
        }
    }

    #[test]
    fn f4_over_f2_flattens_coefficients() {
        let f2 = Field::prime(2).unwrap();
        let f4 = Field::new(2, 2).unwrap();
        let iso = ExtensionIso::new(&f2, &f4).unwrap();
        let x = f4.from_coeffs(&[0, 1]).unwrap();
        let got: Vec<u32> = iso.flatten(&[f4.one(), x]).iter().map(|c| c.index()).collect();
        assert_eq!(got, vec![1, 0, 0, 1]);
    }

    #[test]
    fn f4_squared_round_trip() {
        let f2 = Field::prime(2).unwrap();
        let f4 = Field::new(2, 2).unwrap();
        let iso = ExtensionIso::new(&f2, &f4).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                let flat = iso.flatten(&[a, b]);
                assert_eq!(iso.unflatten(&flat).unwrap(), vec![a, b]);
            }
        }
    }

    #[test]
    fn non_prime_base_is_linear_and_bijective() {
        // F_16 viewed over F_4
        let f4 = Field::new(2, 2).unwrap();
        let f16 = Field::new(2, 4).unwrap();
        let iso = ExtensionIso::new(&f4, &f16).unwrap();
        assert_eq!(iso.degree(), 2);
        for c in f4.elements() {
            for d in f4.elements() {
                assert_eq!(iso.embed(f4.mul(c, d)), f16.mul(iso.embed(c), iso.embed(d)));
                assert_eq!(iso.embed(f4.add(c, d)), f16.add(iso.embed(c), iso.embed(d)));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for b in f16.elements() {
            let c = iso.coords(b);
            assert_eq!(iso.element(&c), b);
            assert!(seen.insert(c.clone()));
            for s in f4.elements() {
                let scaled = f16.mul(iso.embed(s), b);
                let expect: Vec<_> = c.iter().map(|&x| f4.mul(s, x)).collect();
                assert_eq!(iso.coords(scaled), expect);
            }
        }
    }

    #[test]
    fn incompatible_fields() {
        let f3 = Field::prime(3).unwrap();
        let f4 = Field::new(2, 2).unwrap();
        let f8 = Field::new(2, 3).unwrap();
        assert!(matches!(ExtensionIso::new(&f3, &f4), Err(Error::IncompatibleFields(_))));
        assert!(matches!(ExtensionIso::new(&f4, &f8), Err(Error::IncompatibleFields(_))));
    }

    #[test]
    fn lines_lift_to_rank_k_subspaces() {
        let f2 = Field::prime(2).unwrap();
        let f4 = Field::new(2, 2).unwrap();
        let iso = ExtensionIso::new(&f2, &f4).unwrap();
        let up = Space::new(f4.clone(), 2);
        for line in enumerate_subspaces(&f4, 2, 1, Budget::DEFAULT).unwrap() {
            let lifted = iso.lift_subspace(&line);
            assert_eq!(lifted.rank(), 2);
            // every vector of the line lands in the lifted subspace
            for v in line.vectors(&f4) {
                assert!(lifted.contains(&f2, &iso.flatten(&v)));
            }
        }
        assert_eq!(up.n, 2);
    }
}
