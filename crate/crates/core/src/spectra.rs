//! Eigenvalues of the dual polar association scheme.
//!
//! `P[r][s]` is the eigenvalue of the codimension-`s` relation on the `r`-th
//! common eigenspace. `lambda(r, a)` is the eigenvalue of
//! `A_d + A_{d-1} + ... + A_{d-a}`, the distance graph whose cliques the
//! Hoffman bound controls.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::DualPolarGraph;
use crate::qcore::{binom2, gauss_q, num_generators, ExactInt, ExactRat, PolarParams};

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn check_index(p: &PolarParams, name: &str, v: i64, hi: i64) -> Result<()> {
    if !(0..=hi).contains(&v) {
        return Err(Error::OutOfRange(format!("{name} = {v} not in 0..={hi} for {}", p.notation())));
    }
    Ok(())
}

/// Eigenvalue `P_{r,s}` by the alternating double sum.
pub fn eigenvalue_p(p: &PolarParams, r: i64, s: i64) -> Result<ExactInt> {
    let d = p.d() as i64;
    check_index(p, "r", r, d)?;
    check_index(p, "s", s, d)?;
    let q = p.q();
    let te = p.twice_epsilon();
    let mut acc = ExactInt::zero();
    for t in (r - s).max(0)..=(d - s).min(r) {
        let g = gauss_q(d - r, d - s - t, q) * gauss_q(r, t, q);
        if g.is_zero() {
            continue;
        }
        let m = s - r + t;
        let term = g * p.qpow_half(2 * binom2(r - t) + 2 * binom2(m) + m * te);
        acc += term * sign(r - t);
    }
    Ok(acc)
}

pub fn p_matrix(p: &PolarParams) -> Vec<Vec<ExactInt>> {
    let d = p.d() as i64;
    (0..=d)
        .map(|r| (0..=d).map(|s| eigenvalue_p(p, r, s).expect("indices in range")).collect())
        .collect()
}

/// `A(r, s, a)`; zero when a Gaussian factor vanishes.
pub fn a_term(p: &PolarParams, r: i64, s: i64, a: i64) -> ExactInt {
    let d = p.d() as i64;
    let q = p.q();
    let g = gauss_q(d - r, s, q) * gauss_q(r - 1, a - s, q);
    if g.is_zero() {
        return g;
    }
    let m = d - r - s;
    g * p.qpow_half(2 * binom2(m) + m * p.twice_epsilon() + 2 * binom2(r - a + s))
}

/// Admissible `s` range of the closed form for `lambda(r, a)`, `r > 0`.
pub fn s_range(d: i64, r: i64, a: i64) -> std::ops::RangeInclusive<i64> {
    (a - r + 1).max(0)..=a.min(d - r)
}

/// `lambda_r^a` by the closed form.
pub fn lambda(p: &PolarParams, r: i64, a: i64) -> Result<ExactInt> {
    let d = p.d() as i64;
    check_index(p, "r", r, d)?;
    check_index(p, "a", a, d - 1)?;
    if r == 0 {
        let mut acc = ExactInt::zero();
        for s in 0..=a {
            let m = d - s;
            acc += gauss_q(d, s, p.q()) * p.qpow_half(2 * binom2(m) + m * p.twice_epsilon());
        }
        return Ok(acc);
    }
    let mut acc = ExactInt::zero();
    for s in s_range(d, r, a) {
        acc += a_term(p, r, s, a) * sign(s);
    }
    Ok(acc * sign(r + a))
}

/// `lambda_r^a` as a partial row sum of the P-matrix.
pub fn lambda_from_p(p: &PolarParams, r: i64, a: i64) -> Result<ExactInt> {
    let d = p.d() as i64;
    check_index(p, "a", a, d - 1)?;
    (0..=a).map(|s| eigenvalue_p(p, r, d - s)).sum()
}

/// Closed forms for `lambda_1^a`, `lambda_d^a` and `lambda_{d-1}^a`.
pub fn lambda_first(p: &PolarParams, a: i64) -> ExactInt {
    let d = p.d() as i64;
    let m = d - a - 1;
    -gauss_q(d - 1, a, p.q()) * p.qpow_half(2 * binom2(m) + m * p.twice_epsilon())
}

pub fn lambda_last(p: &PolarParams, a: i64) -> ExactInt {
    let d = p.d() as i64;
    gauss_q(d - 1, a, p.q()) * p.qpow_half(2 * binom2(d - a)) * sign(d - a)
}

pub fn lambda_second_last(p: &PolarParams, a: i64) -> ExactInt {
    let d = p.d() as i64;
    let q = p.q();
    let x = gauss_q(d - 2, a, q) * p.qpow_half(2 * binom2(d - a - 1) + p.twice_epsilon()) * sign(d - 1 + a);
    let y = gauss_q(d - 2, a - 1, q) * p.qpow_half(2 * binom2(d - a)) * sign(d + a);
    x + y
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigTable {
    pub a: usize,
    #[serde(serialize_with = "ser_ints")]
    pub values: Vec<ExactInt>,
    /// Indices `r >= 1` attaining the minimum value.
    pub argmin: Vec<usize>,
    /// Indices `r >= 1` attaining the maximum absolute value.
    pub argmax_abs: Vec<usize>,
}

impl EigTable {
    pub fn lambda_min(&self) -> &ExactInt {
        &self.values[self.argmin[0]]
    }

    pub fn max_abs(&self) -> ExactInt {
        self.values[self.argmax_abs[0]].abs()
    }

    pub fn valency(&self) -> &ExactInt {
        &self.values[0]
    }

    /// Distinct eigenvalues, in order of first appearance.
    pub fn distinct(&self) -> Vec<ExactInt> {
        let mut out: Vec<ExactInt> = Vec::new();
        for v in &self.values {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }
}

/// All `lambda_r^a` with exhaustive extremal indices over `r = 1..=d`.
pub fn eig_table(p: &PolarParams, a: usize) -> Result<EigTable> {
    let d = p.d();
    let values: Vec<ExactInt> = (0..=d).map(|r| lambda(p, r as i64, a as i64)).collect::<Result<_>>()?;
    let min = values[1..].iter().min().expect("d >= 1").clone();
    let max_abs = values[1..].iter().map(|v| v.abs()).max().expect("d >= 1");
    let argmin = (1..=d).filter(|&r| values[r] == min).collect();
    let argmax_abs = (1..=d).filter(|&r| values[r].abs() == max_abs).collect();
    Ok(EigTable { a, values, argmin, argmax_abs })
}

/// Smallest eigenvalue and largest absolute eigenvalue over `r >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremal {
    pub lambda_min: ExactInt,
    pub argmin: Vec<usize>,
    pub max_abs: ExactInt,
    pub argmax_abs: Vec<usize>,
}

pub fn extremal_eigs(p: &PolarParams, a: usize) -> Result<Extremal> {
    let t = eig_table(p, a)?;
    Ok(Extremal { lambda_min: t.lambda_min().clone(), max_abs: t.max_abs(), argmin: t.argmin, argmax_abs: t.argmax_abs })
}

/// Eigenmatrices, valencies and multiplicities of the scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeSpectrum {
    pub params: PolarParams,
    pub p: Vec<Vec<ExactInt>>,
    pub valencies: Vec<ExactInt>,
    pub multiplicities: Vec<ExactInt>,
    pub q: Vec<Vec<ExactRat>>,
}

pub fn multiplicities(p: &PolarParams) -> Result<Vec<ExactInt>> {
    multiplicities_of(p, &p_matrix(p))
}

fn multiplicities_of(p: &PolarParams, pm: &[Vec<ExactInt>]) -> Result<Vec<ExactInt>> {
    let n = num_generators(p);
    let vals = &pm[0];
    pm.iter()
        .enumerate()
        .map(|(j, row)| {
            let norm: ExactRat = row
                .iter()
                .zip(vals)
                .map(|(x, k)| ExactRat::new(x * x, k.clone()))
                .fold(ExactRat::zero(), |a, b| a + b);
            let m = ExactRat::from_integer(n.clone()) / norm;
            if !m.is_integer() || !m.is_positive() {
                return Err(Error::Inconsistent(format!("multiplicity m_{j} = {m} for {}", p.notation())));
            }
            Ok(m.to_integer())
        })
        .collect()
}

pub fn q_matrix(p: &PolarParams) -> Result<Vec<Vec<ExactRat>>> {
    Ok(scheme_spectrum(p)?.q)
}

pub fn scheme_spectrum(p: &PolarParams) -> Result<SchemeSpectrum> {
    let pm = p_matrix(p);
    let mult = multiplicities_of(p, &pm)?;
    let vals = pm[0].clone();
    let size = pm.len();
    let q: Vec<Vec<ExactRat>> = (0..size)
        .map(|i| (0..size).map(|j| ExactRat::new(&mult[j] * &pm[j][i], vals[i].clone())).collect())
        .collect();
    let spec = SchemeSpectrum { params: *p, p: pm, valencies: vals, multiplicities: mult, q };
    spec.check_orthogonality()?;
    Ok(spec)
}

impl SchemeSpectrum {
    /// `PQ = nI` and the row/column sums of valencies and multiplicities.
    pub fn check_orthogonality(&self) -> Result<()> {
        let n = num_generators(&self.params);
        let size = self.p.len();
        let sum_n: ExactInt = self.valencies.iter().sum();
        let sum_m: ExactInt = self.multiplicities.iter().sum();
        if sum_n != n || sum_m != n {
            return Err(Error::Inconsistent(format!("valency sum {sum_n}, multiplicity sum {sum_m}, n = {n}")));
        }
        for r in 0..size {
            for k in 0..size {
                let v: ExactRat = (0..size)
                    .map(|i| ExactRat::from_integer(self.p[r][i].clone()) * &self.q[i][k])
                    .fold(ExactRat::zero(), |a, b| a + b);
                let want = if r == k { ExactRat::from_integer(n.clone()) } else { ExactRat::zero() };
                if v != want {
                    return Err(Error::Inconsistent(format!("(PQ)[{r}][{k}] = {v}")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let ints = |v: &[ExactInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let d = self.params.d();
        let tables: Vec<serde_json::Value> = (0..d)
            .map(|a| {
                let t = eig_table(&self.params, a).expect("a < d");
                serde_json::json!({ "a": a, "values": ints(&t.values), "argmin": t.argmin, "argmax_abs": t.argmax_abs })
            })
            .collect();
        serde_json::json!({
            "schema_version": 1,
            "params": {
                "family": self.params.family().tag(),
                "q": self.params.q(),
                "d": d,
                "notation": self.params.notation(),
            },
            "P": self.p.iter().map(|r| ints(r)).collect::<Vec<_>>(),
            "valencies": ints(&self.valencies),
            "multiplicities": ints(&self.multiplicities),
            "lambda_tables": tables,
        })
    }
}

pub(crate) fn ser_ints<S: serde::Serializer>(v: &[ExactInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Outcome of the exact annihilation test on a concrete graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumCheck {
    pub t: usize,
    #[serde(serialize_with = "ser_ints")]
    pub eigenvalues: Vec<ExactInt>,
    pub annihilated: bool,
    pub ones_eigenvalue_ok: bool,
    /// `(row, col, value)` of a nonzero entry of the product, if any.
    pub witness: Option<(usize, usize, String)>,
}

impl SpectrumCheck {
    pub fn passed(&self) -> bool {
        self.annihilated && self.ones_eigenvalue_ok
    }
}

/// Checks `prod (M - λI) = 0` for `M = sum_{s>t} A_s` and the predicted
/// eigenvalue set, plus the row sums of `M`.
pub fn verify_spectrum(g: &DualPolarGraph, t: usize) -> Result<SpectrumCheck> {
    let p = g.params();
    let d = g.d();
    if t > d {
        return Err(Error::OutOfRange(format!("t = {t} > d = {d}")));
    }
    let n = g.n();
    let eigenvalues: Vec<ExactInt> = if t == d {
        vec![ExactInt::zero()]
    } else {
        eig_table(p, d - t - 1)?.distinct()
    };
    let k_expected = if t == d { ExactInt::zero() } else { lambda(p, 0, (d - t - 1) as i64)? };
    let ones_eigenvalue_ok =
        (0..n).all(|x| ExactInt::from(g.codim_row(x).iter().filter(|&&c| c as usize > t).count()) == k_expected);

    let witness = annihilation_witness(g, t, &eigenvalues)?;
    Ok(SpectrumCheck { t, eigenvalues, annihilated: witness.is_none(), ones_eigenvalue_ok, witness })
}

/// First nonzero entry of `prod_{λ} (M - λI)` for `M = sum_{s>t} A_s`, or
/// `None` if the product vanishes.
pub fn annihilation_witness(g: &DualPolarGraph, t: usize, eigenvalues: &[ExactInt]) -> Result<Option<(usize, usize, String)>> {
    let n = g.n();
    let lams: Vec<i128> = eigenvalues
        .iter()
        .map(|l| l.to_i128().ok_or_else(|| Error::Unsupported(format!("eigenvalue {l} exceeds i128"))))
        .collect::<Result<_>>()?;
    if lams.is_empty() {
        return Err(Error::OutOfRange("empty eigenvalue list".into()));
    }
    // columns of M as index lists
    let cols: Vec<Vec<usize>> = (0..n).map(|j| (0..n).filter(|&k| g.codim(k, j) > t).collect()).collect();
    let overflow = || Error::Unsupported("annihilation product exceeds i128".into());

    let mut x: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(g.codim(i, j) > t) - if i == j { lams[0] } else { 0 }).collect())
        .collect();
    for &lam in &lams[1..] {
        x = x
            .par_iter()
            .map(|row| {
                (0..n)
                    .map(|j| {
                        let mut acc: i128 = 0;
                        for &k in &cols[j] {
                            acc = acc.checked_add(row[k]).ok_or_else(overflow)?;
                        }
                        acc.checked_sub(row[j].checked_mul(lam).ok_or_else(overflow)?).ok_or_else(overflow)
                    })
                    .collect::<Result<Vec<i128>>>()
            })
            .collect::<Result<_>>()?;
    }
    Ok((0..n).find_map(|i| (0..n).find(|&j| x[i][j] != 0).map(|j| (i, j, x[i][j].to_string()))))
}

/// Violations of the four extremal-eigenvalue cases at one `a`.
pub fn extremal_position_violations(p: &PolarParams, a: usize) -> Result<Vec<String>> {
    let d = p.d();
    let t = eig_table(p, a)?;
    let te = p.twice_epsilon();
    let mut out = Vec::new();
    let tag = |c: &str| format!("{} a={a}: case ({c})", p.notation());
    if te >= 2 && !t.argmax_abs.contains(&1) {
        out.push(tag("a"));
    }
    if te <= 2 && !t.argmax_abs.contains(&d) {
        out.push(tag("b"));
    }
    let odd_gap = (d - a) % 2 == 1;
    if (!odd_gap || te >= 2) && !t.argmin.contains(&1) {
        out.push(tag("c"));
    }
    if odd_gap && te <= 2 && !t.argmin.contains(&d) {
        out.push(tag("d"));
    }
    Ok(out)
}

/// Violations of the unimodality sign conditions on `A(r, s, a)` and of the
/// bound `|lambda_r^a| <= max_s A(r, s, a)`.
pub fn unimodality_violations(p: &PolarParams, a: usize) -> Result<Vec<String>> {
    let d = p.d() as i64;
    let a = a as i64;
    let te = p.twice_epsilon();
    let mut out = Vec::new();
    for r in 1..=d {
        let range = s_range(d, r, a);
        let (lo, hi) = (*range.start(), *range.end());
        for s in lo..hi {
            // 2s + ε - a in half steps
            let h = 4 * s + te - 2 * a;
            let x = a_term(p, r, s, a);
            let y = a_term(p, r, s + 1, a);
            if h >= 1 && x <= y {
                out.push(format!("{} r={r} s={s} a={a}: expected decrease", p.notation()));
            }
            if h <= -1 && x >= y {
                out.push(format!("{} r={r} s={s} a={a}: expected increase", p.notation()));
            }
        }
        let bound = range.map(|s| a_term(p, r, s, a)).max().unwrap_or_else(BigInt::zero);
        if lambda(p, r, a)?.abs() > bound {
            out.push(format!("{} r={r} a={a}: |lambda| above max A", p.notation()));
        }
    }
    Ok(out)
}

/// Least common multiple of the denominators.
pub(crate) fn lcm_of_denominators<'a>(it: impl Iterator<Item = &'a ExactRat>) -> ExactInt {
    it.fold(ExactInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_graph;
    use crate::qcore::{count_codim, Family};

    fn params(f: Family, q: u64, d: usize) -> PolarParams {
        PolarParams::new(f, q, d).unwrap()
    }

    fn int(v: i64) -> ExactInt {
        ExactInt::from(v)
    }

    #[test]
    fn first_row_is_valencies() {
        for f in Family::ALL {
            for q in [4u64, 9] {
                for d in 1..=6 {
                    let p = params(f, q, d);
                    assert_eq!(eigenvalue_p(&p, 0, 0).unwrap(), int(1));
                    for s in 0..=d as i64 {
                        assert_eq!(eigenvalue_p(&p, 0, s).unwrap(), count_codim(&p, s).unwrap());
                    }
                }
            }
        }
        assert!(eigenvalue_p(&params(Family::Symplectic, 2, 2), 3, 0).is_err());
    }

    #[test]
    fn two_lambda_paths_agree() {
        for f in Family::ALL {
            for q in [2u64, 3, 4] {
                let Ok(_) = PolarParams::new(f, q, 1) else { continue };
                for d in 1..=8 {
                    let p = params(f, q, d);
                    for a in 0..d as i64 {
                        for r in 0..=d as i64 {
                            assert_eq!(lambda(&p, r, a).unwrap(), lambda_from_p(&p, r, a).unwrap(), "{p} r={r} a={a}");
                        }
                        assert_eq!(lambda(&p, 1, a).unwrap(), lambda_first(&p, a));
                        assert_eq!(lambda(&p, 1, a).unwrap(), -a_term(&p, 1, a, a));
                        assert_eq!(lambda(&p, d as i64, a).unwrap(), lambda_last(&p, a));
                        assert_eq!(lambda_last(&p, a), a_term(&p, d as i64, 0, a) * sign(d as i64 + a));
                        if d >= 2 {
                            assert_eq!(lambda(&p, d as i64 - 1, a).unwrap(), lambda_second_last(&p, a));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn small_rank_values() {
        for f in Family::ALL {
            for q in [4u64, 9] {
                let p = params(f, q, 2);
                assert_eq!(lambda(&p, 1, 0).unwrap(), -p.qpow_half(p.twice_epsilon()));
                assert_eq!(lambda(&p, 2, 0).unwrap(), int(q as i64));
                for r in 1..=2 {
                    assert_eq!(lambda(&p, r, 1).unwrap(), int(-1));
                }
            }
        }
    }

    #[test]
    fn a_term_example() {
        // W, q=2, d=4: A(2,1,1) = [2 1] q^{C(1,2)+1} [1 0] q^{C(2,2)} = 3 * 2 * 2
        let p = params(Family::Symplectic, 2, 4);
        assert_eq!(a_term(&p, 2, 1, 1), int(12));
        // lambda_2^1 = (-1)^3 (A(2,0,1) - A(2,1,1))
        let expect = -(a_term(&p, 2, 0, 1) - a_term(&p, 2, 1, 1));
        assert_eq!(lambda(&p, 2, 1).unwrap(), expect);
    }

    #[test]
    fn extremal_examples() {
        let p = params(Family::HyperbolicQPlus, 3, 4);
        let e = extremal_eigs(&p, 1).unwrap();
        assert!(e.argmin.contains(&4));
        let p = params(Family::Symplectic, 3, 4);
        assert_eq!(extremal_eigs(&p, 2).unwrap().argmin, vec![1]);
        let e = extremal_eigs(&p, 3).unwrap();
        assert_eq!(e.lambda_min, int(-1));
        assert_eq!(e.argmin, vec![1, 2, 3, 4]);
    }

    #[test]
    fn multiplicities_and_orthogonality() {
        for f in Family::ALL {
            for q in [2u64, 3, 4] {
                let Ok(_) = PolarParams::new(f, q, 1) else { continue };
                for d in 1..=6 {
                    let p = params(f, q, d);
                    let s = scheme_spectrum(&p).unwrap();
                    assert_eq!(s.multiplicities[0], int(1));
                }
            }
        }
        let m = multiplicities(&params(Family::Symplectic, 2, 2)).unwrap();
        assert_eq!(m, vec![int(1), int(9), int(5)]);
    }

    #[test]
    fn spectrum_w32() {
        let g = build_graph(&params(Family::Symplectic, 2, 2)).unwrap();
        let c = verify_spectrum(&g, 1).unwrap();
        assert_eq!(c.eigenvalues, vec![int(8), int(-2), int(2)]);
        assert!(c.passed());
        let c = verify_spectrum(&g, 2).unwrap();
        assert_eq!(c.eigenvalues, vec![int(0)]);
        assert!(c.passed());
        assert!(verify_spectrum(&g, 3).is_err());
    }

    #[test]
    fn wrong_spectrum_is_caught() {
        // dropping an eigenvalue must leave a nonzero product
        let g = build_graph(&params(Family::HyperbolicQPlus, 2, 3)).unwrap();
        for t in 0..=3 {
            assert!(verify_spectrum(&g, t).unwrap().passed(), "t={t}");
        }
        let full = verify_spectrum(&g, 1).unwrap().eigenvalues;
        assert!(full.len() >= 2);
        assert!(annihilation_witness(&g, 1, &full[1..]).unwrap().is_some());
        let mut shifted = full.clone();
        shifted[0] += 1;
        assert!(annihilation_witness(&g, 1, &shifted).unwrap().is_some());
    }

    #[test]
    fn json_export_uses_strings() {
        let s = scheme_spectrum(&params(Family::Symplectic, 2, 2)).unwrap();
        let j = s.to_json();
        assert_eq!(j["P"][0][2], "8");
        assert_eq!(j["multiplicities"][1], "9");
        assert_eq!(j["lambda_tables"][0]["values"][1], "-2");
    }
}
