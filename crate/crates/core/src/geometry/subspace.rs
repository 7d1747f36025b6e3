//! Subspaces of GF(q)^n in canonical reduced row echelon form.

use serde::{Deserialize, Serialize};

use super::field::{Elem, FieldSpec};
use crate::error::{Error, Result};

/// A subspace stored by its unique reduced row echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Elem>>,
}

/// In-place reduced row echelon form; returns the pivot columns. Zero rows
/// are dropped.
pub fn rref(f: &FieldSpec, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]);
        f.scale(&mut rows[r], inv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let coef = f.neg(row[c]);
                f.axpy(row, coef, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(f: &FieldSpec, rows: &[Vec<Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of `{x : rows · x = 0}` (plain dot product).
pub fn null_space(f: &FieldSpec, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; ncols];
            v[fc] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect()
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize(f: &FieldSpec, v: &mut [Elem]) {
    if let Some(&lead) = v.iter().find(|&&x| x != 0) {
        let inv = f.inv(lead);
        f.scale(v, inv);
    }
}

/// Projective points of the span of `basis`: one normalized vector per
/// 1-space, in a fixed order.
pub fn points_of_span(f: &FieldSpec, basis: &[Vec<Elem>], ambient: usize) -> Vec<Vec<Elem>> {
    let m = basis.len();
    let q = f.order();
    let mut out = Vec::new();
    let mut coeffs = vec![0 as Elem; m];
    // leading coefficient position `lead` is 1, later positions run freely
    for lead in 0..m {
        let tail = m - lead - 1;
        let count = q.pow(tail as u32);
        for idx in 0..count {
            coeffs.iter_mut().for_each(|c| *c = 0);
            coeffs[lead] = 1;
            let mut rest = idx;
            for c in coeffs.iter_mut().skip(lead + 1) {
                *c = (rest % q) as Elem;
                rest /= q;
            }
            let mut v = vec![0; ambient];
            for (b, &c) in basis.iter().zip(&coeffs) {
                f.axpy(&mut v, c, b);
            }
            normalize(f, &mut v);
            out.push(v);
        }
    }
    out
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new() }
    }

    /// Span of arbitrary vectors.
    pub fn span(f: &FieldSpec, ambient: usize, vectors: &[Vec<Elem>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {ambient}",
                v.len()
            )));
        }
        let mut rows = vectors.to_vec();
        rref(f, &mut rows);
        Ok(Subspace { ambient, rows })
    }

    /// Wraps rows already known to be in canonical form.
    pub(crate) fn from_canonical(ambient: usize, rows: Vec<Vec<Elem>>) -> Self {
        Subspace { ambient, rows }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    /// Row-major bytes of the canonical basis.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.rows.concat()
    }

    fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("canonical rows are nonzero"))
            .collect()
    }

    /// Reduces `v` modulo this subspace; zero iff `v` lies in it.
    pub fn reduce(&self, f: &FieldSpec, v: &[Elem]) -> Vec<Elem> {
        let mut w = v.to_vec();
        for (row, pc) in self.rows.iter().zip(self.pivots()) {
            let c = w[pc];
            if c != 0 {
                f.axpy(&mut w, f.neg(c), row);
            }
        }
        w
    }

    pub fn contains_vector(&self, f: &FieldSpec, v: &[Elem]) -> bool {
        self.reduce(f, v).iter().all(|&x| x == 0)
    }

    pub fn contains(&self, f: &FieldSpec, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_vector(f, r))
    }

    /// `self + <v>`, or `None` if `v` already lies in `self`.
    pub fn extend_by(&self, f: &FieldSpec, v: &[Elem]) -> Option<Subspace> {
        let w = self.reduce(f, v);
        if w.iter().all(|&x| x == 0) {
            return None;
        }
        let mut rows = self.rows.clone();
        rows.push(w);
        rref(f, &mut rows);
        Some(Subspace { ambient: self.ambient, rows })
    }

    pub fn sum(&self, f: &FieldSpec, other: &Subspace) -> Subspace {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        rref(f, &mut rows);
        Subspace { ambient: self.ambient, rows }
    }

    /// Annihilator under the standard dot product.
    pub fn annihilator(&self, f: &FieldSpec) -> Subspace {
        let mut rows = null_space(f, &self.rows, self.ambient);
        rref(f, &mut rows);
        Subspace { ambient: self.ambient, rows }
    }

    pub fn intersection(&self, f: &FieldSpec, other: &Subspace) -> Subspace {
        let mut ann = self.annihilator(f).rows;
        ann.extend(other.annihilator(f).rows);
        let mut rows = null_space(f, &ann, self.ambient);
        rref(f, &mut rows);
        Subspace { ambient: self.ambient, rows }
    }

    /// Projective points of this subspace.
    pub fn points(&self, f: &FieldSpec) -> Vec<Vec<Elem>> {
        points_of_span(f, &self.rows, self.ambient)
    }
}

/// `dim a + dim b - rank [a; b]`.
pub fn intersection_dim(f: &FieldSpec, a: &Subspace, b: &Subspace) -> usize {
    let mut rows = Vec::with_capacity(a.dim() + b.dim());
    rows.extend(a.rows.iter().cloned());
    rows.extend(b.rows.iter().cloned());
    a.dim() + b.dim() - rref(f, &mut rows).len()
}

/// Every `k`-subspace of GF(q)^n, enumerated by pivot pattern. Used for
/// brute-force counting on small ambient spaces.
pub fn all_subspaces(f: &FieldSpec, n: usize, k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(f, n, k, 0, &mut pivots, &mut out);
    out
}

/// Every `k`-subspace of `s`, as subspaces of the ambient space.
pub fn subspaces_within(f: &FieldSpec, s: &Subspace, k: usize) -> Vec<Subspace> {
    all_subspaces(f, s.dim(), k)
        .into_iter()
        .map(|c| {
            let vecs: Vec<Vec<Elem>> = c
                .rows
                .iter()
                .map(|coef| {
                    let mut v = vec![0; s.ambient];
                    for (b, &x) in s.rows.iter().zip(coef) {
                        f.axpy(&mut v, x, b);
                    }
                    v
                })
                .collect();
            Subspace::span(f, s.ambient, &vecs).expect("lengths match the ambient dimension")
        })
        .collect()
}

fn choose_pivots(
    f: &FieldSpec,
    n: usize,
    k: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    out: &mut Vec<Subspace>,
) {
    if pivots.len() == k {
        // free positions: for row i, columns > pivot_i that are not pivots
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &pc)| ((pc + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let q = f.order();
        let total = q.checked_pow(free.len() as u32).expect("subspace enumeration too large");
        for idx in 0..total {
            let mut rows = vec![vec![0 as Elem; n]; k];
            for (i, &pc) in pivots.iter().enumerate() {
                rows[i][pc] = 1;
            }
            let mut rest = idx;
            for &(i, c) in &free {
                rows[i][c] = (rest % q) as Elem;
                rest /= q;
            }
            out.push(Subspace { ambient: n, rows });
        }
        return;
    }
    for c in start..n {
        pivots.push(c);
        choose_pivots(f, n, k, c + 1, pivots, out);
        pivots.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::field::make_field;
    use crate::qcore::gauss;
    use num_bigint::BigInt;

    #[test]
    fn subspace_counts_match_gauss() {
        for (q, n) in [(2u64, 4usize), (2, 5), (3, 3), (4, 3)] {
            let f = make_field(q).unwrap();
            for k in 0..=n {
                let subs = all_subspaces(&f, n, k);
                assert_eq!(BigInt::from(subs.len()), gauss(n as i64, k as i64, q).unwrap());
            }
        }
    }

    #[test]
    fn intersection_dims() {
        let f = make_field(2).unwrap();
        let a = Subspace::span(&f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let b = Subspace::span(&f, 4, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        assert_eq!(intersection_dim(&f, &a, &a), 2);
        assert_eq!(intersection_dim(&f, &a, &b), 0);
        let c = Subspace::span(&f, 4, &[vec![1, 1, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        assert_eq!(intersection_dim(&f, &a, &c), 1);
        assert_eq!(a.intersection(&f, &c).dim(), 1);
        assert!(a.intersection(&f, &c).contains_vector(&f, &[1, 1, 0, 0]));
    }

    #[test]
    fn canonical_form_is_unique() {
        let f = make_field(3).unwrap();
        let a = Subspace::span(&f, 3, &[vec![1, 2, 0], vec![0, 1, 1]]).unwrap();
        let b = Subspace::span(&f, 3, &[vec![1, 1, 2], vec![2, 0, 2]]).unwrap();
        assert_eq!(a, b);
        assert!(Subspace::span(&f, 3, &[vec![1, 0]]).is_err());
    }

    #[test]
    fn points_count() {
        let f = make_field(4).unwrap();
        let s = Subspace::span(&f, 4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]]).unwrap();
        let pts = s.points(&f);
        assert_eq!(pts.len(), 21);
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 21);
    }
}
