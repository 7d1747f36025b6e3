//! Breadth-first enumeration of totally isotropic subspaces.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::field::{make_field, Elem, FieldSpec};
use super::form::{standard_form, FormSpec};
use super::subspace::{points_of_span, rref, Subspace};
use crate::error::{Error, Result};
use crate::qcore::{num_generators, PolarParams};

pub const DEFAULT_CAP: usize = 5000;

/// Field, form and parameters bundled for the geometric routines.
#[derive(Debug, Clone)]
pub struct PolarSpace {
    pub params: PolarParams,
    pub field: FieldSpec,
    pub form: FormSpec,
}

impl PolarSpace {
    pub fn new(params: PolarParams) -> Result<Self> {
        let field = make_field(params.q())?;
        let form = standard_form(&params, &field)?;
        Ok(PolarSpace { params, field, form })
    }

    pub fn ambient(&self) -> usize {
        self.form.ambient_dim
    }

    /// Singular points of the whole space.
    pub fn singular_points(&self) -> Vec<Vec<Elem>> {
        let n = self.ambient();
        let id: Vec<Vec<Elem>> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
        points_of_span(&self.field, &id, n)
            .into_iter()
            .filter(|v| self.form.is_singular_vector(&self.field, v))
            .collect()
    }

    /// All totally isotropic subspaces `U + <c>` of one dimension more, where
    /// `c` runs over singular points of a complement of `U` in `U^⊥`. Each
    /// extension is produced exactly once.
    pub fn extensions(&self, u: &Subspace) -> Vec<Subspace> {
        let f = &self.field;
        let perp = self.form.perp(f, u);
        let mut comp: Vec<Vec<Elem>> = perp.rows().iter().map(|r| u.reduce(f, r)).collect();
        rref(f, &mut comp);
        if comp.is_empty() {
            return Vec::new();
        }
        points_of_span(f, &comp, self.ambient())
            .into_iter()
            .filter(|c| self.form.is_singular_vector(f, c))
            .map(|c| u.extend_by(f, &c).expect("complement point lies outside U"))
            .collect()
    }

    /// Totally isotropic subspaces of dimension `k`, sorted.
    pub fn isotropic_subspaces(&self, k: usize) -> Vec<Subspace> {
        let mut level = vec![Subspace::zero(self.ambient())];
        for _ in 0..k {
            let mut next: Vec<Subspace> = level.par_iter().flat_map_iter(|u| self.extensions(u)).collect();
            next.par_sort_unstable();
            next.dedup();
            level = next;
        }
        level
    }
}

/// All generators of the polar space, canonical, duplicate-free and sorted.
pub fn enumerate_generators(p: &PolarParams) -> Result<Vec<Subspace>> {
    enumerate_generators_capped(p, DEFAULT_CAP)
}

pub fn enumerate_generators_capped(p: &PolarParams, cap: usize) -> Result<Vec<Subspace>> {
    let expected = num_generators(p);
    if expected > BigInt::from(cap) {
        return Err(Error::CapExceeded { expected: expected.to_string(), cap });
    }
    let space = PolarSpace::new(*p)?;
    let gens = space.isotropic_subspaces(p.d());
    if BigInt::from(gens.len()) != expected {
        return Err(Error::Inconsistent(format!(
            "enumerated {} generators of {}, formula gives {expected}",
            gens.len(),
            p.notation()
        )));
    }
    Ok(gens)
}
