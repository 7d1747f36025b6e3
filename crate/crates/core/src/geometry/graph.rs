//! Dual polar graphs: generators as vertices, intersection codimension as
//! the relation.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::enumerate::{enumerate_generators_capped, PolarSpace, DEFAULT_CAP};
use super::field::{Elem, FieldSpec};
use super::form::is_totally_isotropic;
use super::subspace::{intersection_dim, rref, Subspace};
use crate::error::{Error, Result};
use crate::qcore::{count_codim, PolarParams};

#[derive(Debug, Clone)]
pub struct DualPolarGraph {
    space: PolarSpace,
    vertices: Vec<Subspace>,
    /// Row-major `n × n` codimension matrix.
    codim: Vec<u8>,
}

/// `d - dim(a ∩ b)` for two `d`-spaces, as the rank of `b` reduced modulo `a`.
pub fn generator_codim(f: &FieldSpec, a: &Subspace, b: &Subspace) -> usize {
    let mut rows: Vec<Vec<Elem>> = b.rows().iter().map(|r| a.reduce(f, r)).collect();
    rref(f, &mut rows).len()
}

impl DualPolarGraph {
    /// Assembles a graph from parts, checking every structural invariant.
    pub fn from_parts(params: PolarParams, vertices: Vec<Subspace>, codim: Vec<u8>) -> Result<Self> {
        let g = DualPolarGraph { space: PolarSpace::new(params)?, vertices, codim };
        g.check_invariants()?;
        Ok(g)
    }

    pub fn params(&self) -> &PolarParams {
        &self.space.params
    }

    pub fn space(&self) -> &PolarSpace {
        &self.space
    }

    pub fn field(&self) -> &FieldSpec {
        &self.space.field
    }

    pub fn d(&self) -> usize {
        self.space.params.d()
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Subspace] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Subspace {
        &self.vertices[i]
    }

    pub fn codim_bytes(&self) -> &[u8] {
        &self.codim
    }

    #[inline]
    pub fn codim(&self, i: usize, j: usize) -> usize {
        self.codim[i * self.vertices.len() + j] as usize
    }

    pub fn codim_row(&self, i: usize) -> &[u8] {
        let n = self.n();
        &self.codim[i * n..(i + 1) * n]
    }

    /// Index of a generator, if present.
    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.vertices.binary_search(s).ok()
    }

    /// Number of vertices at each codimension from vertex `i`.
    pub fn profile(&self, i: usize) -> Vec<usize> {
        let mut out = vec![0; self.d() + 1];
        for &c in self.codim_row(i) {
            out[c as usize] += 1;
        }
        out
    }

    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n();
        let d = self.d();
        if self.codim.len() != n * n {
            return Err(Error::Inconsistent(format!("codim matrix has {} entries for n = {n}", self.codim.len())));
        }
        let expected_n = crate::qcore::num_generators(self.params());
        if BigInt::from(n) != expected_n {
            return Err(Error::Inconsistent(format!("{n} vertices, formula gives {expected_n}")));
        }
        if let Some(v) = self.vertices.iter().find(|v| v.dim() != d || v.ambient() != self.space.ambient()) {
            return Err(Error::Inconsistent(format!("vertex {v:?} is not a generator-sized subspace")));
        }
        if !self.vertices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Inconsistent("vertices are not strictly sorted".into()));
        }
        for i in 0..n {
            if self.codim(i, i) != 0 {
                return Err(Error::Inconsistent(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                if self.codim(i, j) != self.codim(j, i) || self.codim(i, j) > d {
                    return Err(Error::Inconsistent(format!("bad codim entry at ({i},{j})")));
                }
            }
        }
        if let Some((v, s, got, want)) = self.profile_mismatch() {
            return Err(Error::Inconsistent(format!(
                "vertex {v}: {got} vertices at codimension {s}, formula gives {want}"
            )));
        }
        Ok(())
    }

    /// First vertex whose codimension profile disagrees with the counting
    /// formula, as `(vertex, s, observed, expected)`.
    pub fn profile_mismatch(&self) -> Option<(usize, usize, usize, BigInt)> {
        let expected: Vec<BigInt> = (0..=self.d())
            .map(|s| count_codim(self.params(), s as i64).expect("s in range"))
            .collect();
        (0..self.n()).find_map(|v| {
            self.profile(v)
                .into_iter()
                .enumerate()
                .find(|(s, c)| BigInt::from(*c) != expected[*s])
                .map(|(s, c)| (v, s, c, expected[s].clone()))
        })
    }

    /// 0/1 matrix of relation `s`.
    pub fn relation_matrix(&self, s: usize) -> Vec<Vec<i64>> {
        (0..self.n())
            .map(|i| self.codim_row(i).iter().map(|&c| i64::from(c as usize == s)).collect())
            .collect()
    }

    /// `h[i][j] = |{z : codim(x,z) = i, codim(z,y) = j}|`.
    pub fn triple_counts(&self, x: usize, y: usize) -> Vec<Vec<usize>> {
        let d = self.d();
        let mut h = vec![vec![0; d + 1]; d + 1];
        for (&a, &b) in self.codim_row(x).iter().zip(self.codim_row(y)) {
            h[a as usize][b as usize] += 1;
        }
        h
    }

    /// All relation matrices commute iff every `triple_counts(x, y)` is
    /// symmetric. Returns a violating pair if one exists.
    pub fn commuting_violation(&self) -> Option<(usize, usize)> {
        let n = self.n();
        (0..n).into_par_iter().find_map_first(|x| {
            (0..n).find_map(|y| {
                let h = self.triple_counts(x, y);
                let sym = (0..h.len()).all(|i| (0..i).all(|j| h[i][j] == h[j][i]));
                (!sym).then_some((x, y))
            })
        })
    }

    /// Intersection numbers `p_{ij}^k`, checked for constancy over up to
    /// `samples` random pairs per `k`.
    pub fn intersection_numbers(&self, samples: usize, seed: u64) -> Result<Vec<Vec<Vec<usize>>>> {
        let n = self.n();
        let d = self.d();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(d + 1);
        for k in 0..=d {
            let mut pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| self.codim(x, y) == k).collect();
            pairs.shuffle(&mut rng);
            pairs.truncate(samples);
            let first = self.triple_counts(pairs[0].0, pairs[0].1);
            for &(x, y) in &pairs[1..] {
                if self.triple_counts(x, y) != first {
                    return Err(Error::Inconsistent(format!(
                        "intersection numbers differ for pairs ({},{}) and ({x},{y}) at k = {k}",
                        pairs[0].0, pairs[0].1
                    )));
                }
            }
            out.push(first);
        }
        Ok(out)
    }

    /// Pairwise codimension at most `t` on `set`.
    pub fn is_ekr_set(&self, set: &[usize], t: usize) -> bool {
        set.iter().enumerate().all(|(a, &x)| set[a + 1..].iter().all(|&y| self.codim(x, y) <= t))
    }

    /// Vertices outside `set` compatible with every member at level `t`.
    pub fn extension_vertices(&self, set: &[usize], t: usize) -> Vec<usize> {
        let mut inside = vec![false; self.n()];
        set.iter().for_each(|&v| inside[v] = true);
        (0..self.n())
            .filter(|&v| !inside[v] && set.iter().all(|&s| self.codim(v, s) <= t))
            .collect()
    }

    pub fn is_maximal_ekr(&self, set: &[usize], t: usize) -> bool {
        self.is_ekr_set(set, t) && self.extension_vertices(set, t).is_empty()
    }

    /// Generators meeting vertex `g0` in dimension at least `d - t/2`.
    pub fn example_even(&self, g0: usize, t: usize) -> Result<Vec<usize>> {
        if t % 2 != 0 || t > self.d() {
            return Err(Error::Parity(format!("example_even needs even t in 0..={}, got {t}", self.d())));
        }
        if g0 >= self.n() {
            return Err(Error::OutOfRange(format!("vertex {g0} of {}", self.n())));
        }
        Ok((0..self.n()).filter(|&v| self.codim(g0, v) <= t / 2).collect())
    }

    /// Generators meeting the `(d-1)`-space `u` in dimension at least
    /// `d - (t+1)/2`.
    pub fn example_odd(&self, u: &Subspace, t: usize) -> Result<Vec<usize>> {
        let d = self.d();
        if t % 2 != 1 || t > d {
            return Err(Error::Parity(format!("example_odd needs odd t in 1..={d}, got {t}")));
        }
        self.check_isotropic(u, Some(d - 1))?;
        let need = d - (t + 1) / 2;
        Ok(self.meeting_at_least(u, need))
    }

    /// All generators containing `s`.
    pub fn point_pencil(&self, s: &Subspace) -> Result<Vec<usize>> {
        self.check_isotropic(s, None)?;
        Ok(self.meeting_at_least(s, s.dim()))
    }

    /// Vertices meeting `s` in dimension at least `k`.
    pub fn meeting_at_least(&self, s: &Subspace, k: usize) -> Vec<usize> {
        let f = self.field();
        (0..self.n()).filter(|&v| intersection_dim(f, &self.vertices[v], s) >= k).collect()
    }

    fn check_isotropic(&self, s: &Subspace, dim: Option<usize>) -> Result<()> {
        if let Some(k) = dim {
            if s.dim() != k {
                return Err(Error::DimensionMismatch(format!("expected a {k}-space, got dimension {}", s.dim())));
            }
        }
        if !is_totally_isotropic(s, &self.space.form, self.field())? {
            return Err(Error::Inconsistent("subspace is not totally isotropic".into()));
        }
        Ok(())
    }

    /// Intersection of the given vertices.
    pub fn common_meet(&self, set: &[usize]) -> Subspace {
        let f = self.field();
        let mut it = set.iter();
        let Some(&first) = it.next() else {
            return Subspace::zero(self.space.ambient());
        };
        it.fold(self.vertices[first].clone(), |acc, &v| acc.intersection(f, &self.vertices[v]))
    }
}

pub fn build_graph(p: &PolarParams) -> Result<DualPolarGraph> {
    build_graph_capped(p, DEFAULT_CAP)
}

pub fn build_graph_capped(p: &PolarParams, cap: usize) -> Result<DualPolarGraph> {
    let vertices = enumerate_generators_capped(p, cap)?;
    let space = PolarSpace::new(*p)?;
    let n = vertices.len();
    let f = &space.field;
    let rows: Vec<Vec<u8>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| if i == j { 0 } else { generator_codim(f, &vertices[i], &vertices[j]) as u8 }).collect())
        .collect();
    let codim = rows.concat();
    let g = DualPolarGraph { space, vertices, codim };
    g.check_invariants()?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{num_generators, omega, Family};

    fn graph(fam: Family, q: u64, d: usize) -> DualPolarGraph {
        build_graph(&PolarParams::new(fam, q, d).unwrap()).unwrap()
    }

    #[test]
    fn symplectic_w32_profile() {
        let g = graph(Family::Symplectic, 2, 2);
        assert_eq!(g.n(), 15);
        for v in 0..g.n() {
            assert_eq!(g.profile(v), vec![1, 6, 8]);
        }
        assert_eq!(graph(Family::HyperbolicQPlus, 2, 2).n(), 6);
    }

    #[test]
    fn codim_agrees_with_intersection_dim() {
        let g = graph(Family::Symplectic, 2, 3);
        let f = g.field();
        for i in (0..g.n()).step_by(7) {
            for j in 0..g.n() {
                let meet = intersection_dim(f, g.vertex(i), g.vertex(j));
                assert_eq!(g.codim(i, j), 3 - meet);
            }
        }
    }

    #[test]
    fn relations_commute_and_are_regular() {
        for (fam, q, d) in [(Family::Symplectic, 2, 3), (Family::HermitianOddDim, 4, 2), (Family::ParabolicQ, 3, 2)] {
            let g = graph(fam, q, d);
            assert_eq!(g.commuting_violation(), None);
            let p = g.intersection_numbers(60, 7).unwrap();
            // p_{ij}^0 = δ_ij n_i
            for (i, row) in p[0].iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    let expect = if i == j { g.profile(0)[i] } else { 0 };
                    assert_eq!(v, expect);
                }
            }
        }
    }

    #[test]
    fn even_example_size_and_maximality() {
        let g = graph(Family::Symplectic, 2, 3);
        let set = g.example_even(0, 2).unwrap();
        // 1 + count_codim(1) = 1 + 14
        assert_eq!(set.len(), 15);
        assert!(g.is_maximal_ekr(&set, 2));
        assert!(g.example_even(0, 1).is_err());
    }

    #[test]
    fn odd_example_is_maximal() {
        let g = graph(Family::Symplectic, 2, 3);
        let f = g.field().clone();
        let u = crate::geometry::subspace::subspaces_within(&f, g.vertex(5), 2).remove(0);
        let set = g.example_odd(&u, 1).unwrap();
        assert_eq!(set.len(), 3);
        assert!(g.is_maximal_ekr(&set, 1));
        let set = g.example_odd(&u, 3).unwrap();
        assert!(g.is_ekr_set(&set, 3));

        let g = graph(Family::HyperbolicQPlus, 2, 4);
        let f = g.field().clone();
        let u = crate::geometry::subspace::subspaces_within(&f, g.vertex(0), 3).remove(0);
        let set = g.example_odd(&u, 3).unwrap();
        assert!(g.is_maximal_ekr(&set, 3));
        assert!(g.example_odd(&u, 2).is_err());
    }

    #[test]
    fn point_pencil_size() {
        let g = graph(Family::Symplectic, 2, 3);
        let p0 = Subspace::span(g.field(), 6, &[vec![1, 0, 0, 0, 0, 0]]).unwrap();
        let pencil = g.point_pencil(&p0).unwrap();
        let p = PolarParams::new(Family::Symplectic, 2, 3).unwrap();
        assert_eq!(BigInt::from(pencil.len()), omega(&p, 2));
        assert_eq!(pencil.len(), 15);
        assert!(g.is_ekr_set(&pencil, 2));
        let bad = Subspace::span(g.field(), 6, &[vec![1, 0, 0, 0, 0, 0], vec![0, 1, 0, 0, 0, 0]]).unwrap();
        assert!(g.point_pencil(&bad).is_err());
    }

    #[test]
    fn from_parts_rejects_corruption() {
        let g = graph(Family::HyperbolicQPlus, 2, 2);
        let p = *g.params();
        let mut codim = g.codim_bytes().to_vec();
        assert!(DualPolarGraph::from_parts(p, g.vertices().to_vec(), codim.clone()).is_ok());
        codim[1] = if codim[1] == 1 { 2 } else { 1 };
        codim[g.n()] = codim[1];
        assert!(DualPolarGraph::from_parts(p, g.vertices().to_vec(), codim).is_err());
        assert_eq!(BigInt::from(g.n()), num_generators(&p));
    }
}
