//! The six standard forms and isotropy tests.

use serde::Serialize;

use super::field::{Elem, FieldSpec};
use super::subspace::{null_space, rref, Subspace};
use crate::error::{Error, Result};
use crate::qcore::{Family, PolarParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FormKind {
    Quadratic,
    Alternating,
    Hermitian,
}

/// A non-degenerate form on GF(q)^n.
///
/// For `Quadratic`, `coeffs[i][j]` (i <= j) is the coefficient of `x_i x_j`.
/// For the sesquilinear kinds it is the Gram matrix, with
/// `f(x, y) = sum x_i g_ij σ(y_j)` and `σ` the identity or conjugation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormSpec {
    pub kind: FormKind,
    pub ambient_dim: usize,
    pub coeffs: Vec<Vec<Elem>>,
}

/// Least `c` (by element index) with `x^2 + x + c` irreducible over the field.
pub fn elliptic_constant(f: &FieldSpec) -> Elem {
    f.elements()
        .find(|&c| f.elements().all(|x| f.add(f.add(f.mul(x, x), x), c) != 0))
        .expect("every finite field has an irreducible monic quadratic x^2 + x + c")
}

pub fn standard_form(p: &PolarParams, f: &FieldSpec) -> Result<FormSpec> {
    if f.q != p.q() {
        return Err(Error::DimensionMismatch(format!("field order {} for {}", f.q, p)));
    }
    let d = p.d();
    let n = p.family().vector_dim(d);
    let mut coeffs = vec![vec![0 as Elem; n]; n];
    let kind = match p.family() {
        Family::HyperbolicQPlus => {
            for k in 0..d {
                coeffs[2 * k][2 * k + 1] = 1;
            }
            FormKind::Quadratic
        }
        Family::ParabolicQ => {
            coeffs[0][0] = 1;
            for k in 0..d {
                coeffs[2 * k + 1][2 * k + 2] = 1;
            }
            FormKind::Quadratic
        }
        Family::EllipticQMinus => {
            coeffs[0][0] = 1;
            coeffs[0][1] = 1;
            coeffs[1][1] = elliptic_constant(f);
            for k in 1..=d {
                coeffs[2 * k][2 * k + 1] = 1;
            }
            FormKind::Quadratic
        }
        Family::Symplectic => {
            for k in 0..d {
                coeffs[2 * k][2 * k + 1] = 1;
                coeffs[2 * k + 1][2 * k] = f.neg(1);
            }
            FormKind::Alternating
        }
        Family::HermitianOddDim | Family::HermitianEvenDim => {
            if f.deg != 2 {
                return Err(Error::NonSquareOrder { family: p.family().tag(), q: f.q });
            }
            for (i, row) in coeffs.iter_mut().enumerate() {
                row[i] = 1;
            }
            FormKind::Hermitian
        }
    };
    Ok(FormSpec { kind, ambient_dim: n, coeffs })
}

impl FormSpec {
    /// `Q(v)` for quadrics, `f(v, v)` for the sesquilinear kinds.
    pub fn value(&self, fld: &FieldSpec, v: &[Elem]) -> Elem {
        match self.kind {
            FormKind::Quadratic => {
                let mut acc = 0;
                for i in 0..self.ambient_dim {
                    if v[i] == 0 {
                        continue;
                    }
                    for j in i..self.ambient_dim {
                        let c = self.coeffs[i][j];
                        if c != 0 && v[j] != 0 {
                            acc = fld.add(acc, fld.mul(c, fld.mul(v[i], v[j])));
                        }
                    }
                }
                acc
            }
            FormKind::Alternating | FormKind::Hermitian => self.pair(fld, v, v),
        }
    }

    /// The polar bilinear form `Q(x+y) - Q(x) - Q(y)` for quadrics, the form
    /// itself otherwise.
    pub fn pair(&self, fld: &FieldSpec, x: &[Elem], y: &[Elem]) -> Elem {
        let n = self.ambient_dim;
        let mut acc = 0;
        match self.kind {
            FormKind::Quadratic => {
                for i in 0..n {
                    for j in i..n {
                        let c = self.coeffs[i][j];
                        if c == 0 {
                            continue;
                        }
                        let t = if i == j {
                            fld.add(fld.mul(x[i], y[i]), fld.mul(x[i], y[i]))
                        } else {
                            fld.add(fld.mul(x[i], y[j]), fld.mul(x[j], y[i]))
                        };
                        acc = fld.add(acc, fld.mul(c, t));
                    }
                }
            }
            FormKind::Alternating | FormKind::Hermitian => {
                let herm = self.kind == FormKind::Hermitian;
                for i in 0..n {
                    if x[i] == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let g = self.coeffs[i][j];
                        if g == 0 || y[j] == 0 {
                            continue;
                        }
                        let yj = if herm { fld.conj(y[j]) } else { y[j] };
                        acc = fld.add(acc, fld.mul(fld.mul(x[i], g), yj));
                    }
                }
            }
        }
        acc
    }

    /// Coefficients `l` with `pair(u, x) = 0 <=> l · x = 0`.
    fn functional(&self, fld: &FieldSpec, u: &[Elem]) -> Vec<Elem> {
        let n = self.ambient_dim;
        (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                let c = self.pair(fld, u, &e);
                // f(u, x) = sum c_j σ(x_j); applying σ (an involution) gives a linear condition
                if self.kind == FormKind::Hermitian {
                    fld.conj(c)
                } else {
                    c
                }
            })
            .collect()
    }

    /// `U^⊥` as the null space of the polarity restricted to `U`.
    pub fn perp(&self, fld: &FieldSpec, u: &Subspace) -> Subspace {
        let rows: Vec<Vec<Elem>> = u.rows().iter().map(|r| self.functional(fld, r)).collect();
        let mut basis = if rows.is_empty() {
            (0..self.ambient_dim)
                .map(|j| {
                    let mut e = vec![0; self.ambient_dim];
                    e[j] = 1;
                    e
                })
                .collect()
        } else {
            null_space(fld, &rows, self.ambient_dim)
        };
        rref(fld, &mut basis);
        Subspace::from_canonical(self.ambient_dim, basis)
    }

    pub fn is_singular_vector(&self, fld: &FieldSpec, v: &[Elem]) -> bool {
        match self.kind {
            FormKind::Alternating => true,
            _ => self.value(fld, v) == 0,
        }
    }
}

pub fn is_totally_isotropic(s: &Subspace, form: &FormSpec, fld: &FieldSpec) -> Result<bool> {
    if s.ambient() != form.ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "subspace in dimension {} vs form in dimension {}",
            s.ambient(),
            form.ambient_dim
        )));
    }
    let rows = s.rows();
    for (i, a) in rows.iter().enumerate() {
        if form.kind == FormKind::Quadratic && form.value(fld, a) != 0 {
            return Ok(false);
        }
        let from = if form.kind == FormKind::Hermitian { i } else { i + 1 };
        for b in &rows[from..] {
            if form.pair(fld, a, b) != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::field::make_field;
    use crate::geometry::subspace::points_of_span;

    fn singular_points(p: &PolarParams) -> usize {
        let f = make_field(p.q()).unwrap();
        let form = standard_form(p, &f).unwrap();
        let n = form.ambient_dim;
        let identity: Vec<Vec<Elem>> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
        points_of_span(&f, &identity, n)
            .into_iter()
            .filter(|v| form.is_singular_vector(&f, v))
            .count()
    }

    #[test]
    fn hyperbolic_form_q2() {
        let p = PolarParams::new(Family::HyperbolicQPlus, 2, 2).unwrap();
        let f = make_field(2).unwrap();
        let form = standard_form(&p, &f).unwrap();
        assert_eq!(form.kind, FormKind::Quadratic);
        assert_eq!(form.ambient_dim, 4);
        assert_eq!(form.value(&f, &[1, 1, 0, 0]), 1);
        assert_eq!(form.value(&f, &[0, 0, 1, 1]), 1);
        assert_eq!(form.value(&f, &[1, 0, 1, 0]), 0);
    }

    #[test]
    fn symplectic_form_q3() {
        let p = PolarParams::new(Family::Symplectic, 3, 2).unwrap();
        let f = make_field(3).unwrap();
        let form = standard_form(&p, &f).unwrap();
        assert_eq!(form.kind, FormKind::Alternating);
        // x0 y1 - x1 y0
        assert_eq!(form.pair(&f, &[1, 0, 0, 0], &[0, 1, 0, 0]), 1);
        assert_eq!(form.pair(&f, &[0, 1, 0, 0], &[1, 0, 0, 0]), 2);
        assert_eq!(form.pair(&f, &[0, 0, 1, 0], &[0, 0, 0, 1]), 1);
    }

    #[test]
    fn elliptic_q2_has_five_points() {
        let p = PolarParams::new(Family::EllipticQMinus, 2, 1).unwrap();
        let f = make_field(2).unwrap();
        let form = standard_form(&p, &f).unwrap();
        assert_eq!(form.coeffs[1][1], 1);
        assert_eq!(singular_points(&p), 5);
    }

    #[test]
    fn elliptic_constant_choice() {
        assert_eq!(elliptic_constant(&make_field(2).unwrap()), 1);
        assert_eq!(elliptic_constant(&make_field(3).unwrap()), 2);
    }

    #[test]
    fn point_counts_of_rank_one_spaces() {
        // a rank-1 polar space has q^ε + 1 points
        for (fam, q, expect) in [
            (Family::HyperbolicQPlus, 3, 2),
            (Family::ParabolicQ, 5, 6),
            (Family::EllipticQMinus, 3, 10),
            (Family::HermitianOddDim, 4, 3),
            (Family::HermitianEvenDim, 4, 9),
            (Family::HermitianEvenDim, 9, 28),
        ] {
            let p = PolarParams::new(fam, q, 1).unwrap();
            assert_eq!(singular_points(&p), expect, "{p}");
        }
    }

    #[test]
    fn isotropy_examples() {
        let p = PolarParams::new(Family::HyperbolicQPlus, 2, 2).unwrap();
        let f = make_field(2).unwrap();
        let form = standard_form(&p, &f).unwrap();
        assert!(is_totally_isotropic(&Subspace::zero(4), &form, &f).unwrap());
        let e0 = Subspace::span(&f, 4, &[vec![1, 0, 0, 0]]).unwrap();
        assert!(is_totally_isotropic(&e0, &form, &f).unwrap());
        let e01 = Subspace::span(&f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        assert!(!is_totally_isotropic(&e01, &form, &f).unwrap());
        assert!(is_totally_isotropic(&Subspace::zero(5), &form, &f).is_err());
    }

    #[test]
    fn perp_dimension() {
        let p = PolarParams::new(Family::HermitianOddDim, 4, 2).unwrap();
        let f = make_field(4).unwrap();
        let form = standard_form(&p, &f).unwrap();
        let u = Subspace::span(&f, 4, &[vec![1, 1, 0, 0]]).unwrap();
        let perp = form.perp(&f, &u);
        assert_eq!(perp.dim(), 3);
        assert!(perp.contains(&f, &u));
        assert_eq!(form.perp(&f, &Subspace::zero(4)).dim(), 4);
    }
}
