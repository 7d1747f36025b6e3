//! Exact rational simplex and the Delsarte LP bound on the dual polar scheme.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bounds::rat_string;
use crate::error::{Error, Result};
use crate::qcore::{num_generators, ExactRat, PolarParams};
use crate::spectra::{lcm_of_denominators, q_matrix};

pub const DEFAULT_MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<ExactRat>,
    pub relation: Relation,
    pub rhs: ExactRat,
}

/// Maximize `objective · x` subject to the constraints and `x >= lower`.
#[derive(Debug, Clone, PartialEq)]
pub struct LPProblem {
    pub num_vars: usize,
    pub objective: Vec<ExactRat>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<ExactRat>,
}

impl LPProblem {
    pub fn new(objective: Vec<ExactRat>) -> Self {
        let n = objective.len();
        LPProblem { num_vars: n, objective, constraints: Vec::new(), lower: vec![ExactRat::zero(); n] }
    }

    pub fn add(&mut self, coeffs: Vec<ExactRat>, relation: Relation, rhs: ExactRat) -> &mut Self {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars;
        if self.objective.len() != n || self.lower.len() != n {
            return Err(Error::DimensionMismatch(format!("objective/lower length vs {n} variables")));
        }
        if let Some((i, _)) = self.constraints.iter().enumerate().find(|(_, c)| c.coeffs.len() != n) {
            return Err(Error::DimensionMismatch(format!("constraint {i} does not have {n} coefficients")));
        }
        Ok(())
    }

    /// Whether `x` satisfies every constraint exactly.
    pub fn is_feasible(&self, x: &[ExactRat]) -> bool {
        x.len() == self.num_vars
            && x.iter().zip(&self.lower).all(|(v, l)| v >= l)
            && self.constraints.iter().all(|c| {
                let lhs: ExactRat = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }

    pub fn value_at(&self, x: &[ExactRat]) -> ExactRat {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Plain-text dump, one constraint per line.
    pub fn to_text(&self) -> String {
        let row = |v: &[ExactRat]| v.iter().map(rat_string).collect::<Vec<_>>().join(" ");
        let mut out = format!("vars {}\nmax {}\nlower {}\n", self.num_vars, row(&self.objective), row(&self.lower));
        for c in &self.constraints {
            out += &format!("{} {} {}\n", row(&c.coeffs), c.relation, rat_string(&c.rhs));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LPStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LPResult {
    pub status: LPStatus,
    /// Optimal value; zero unless the status is optimal.
    pub value: ExactRat,
    pub solution: Vec<ExactRat>,
    pub iterations: usize,
}

struct Tableau {
    /// Rows of `[a | b]`.
    rows: Vec<Vec<ExactRat>>,
    basis: Vec<usize>,
    cols: usize,
    iterations: usize,
    max_pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &ExactRat {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        let pr = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pr) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
        self.iterations += 1;
    }

    /// Maximize `cost` over the allowed columns with Bland's rule.
    fn run(&mut self, cost: &[ExactRat], allowed: &[bool]) -> Result<Outcome> {
        loop {
            if self.iterations >= self.max_pivots {
                return Err(Error::IterationCap(self.max_pivots));
            }
            let entering = (0..self.cols).find(|&j| {
                allowed[j] && !self.basis.contains(&j) && {
                    let mut r = cost[j].clone();
                    for (i, &b) in self.basis.iter().enumerate() {
                        if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                            r -= &cost[b] * &self.rows[i][j];
                        }
                    }
                    r.is_positive()
                }
            });
            let Some(e) = entering else { return Ok(Outcome::Optimal) };
            let mut best: Option<(ExactRat, usize, usize)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((r, _, b)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                };
                if better {
                    best = Some((ratio, i, self.basis[i]));
                }
            }
            let Some((_, r, _)) = best else { return Ok(Outcome::Unbounded) };
            self.pivot(r, e);
        }
    }
}

pub fn simplex_solve(prob: &LPProblem) -> Result<LPResult> {
    simplex_solve_capped(prob, DEFAULT_MAX_PIVOTS)
}

/// Two-phase tableau simplex over the rationals, lowest-index pivoting.
pub fn simplex_solve_capped(prob: &LPProblem, max_pivots: usize) -> Result<LPResult> {
    prob.validate()?;
    let n = prob.num_vars;
    let m = prob.constraints.len();
    // shift x = y + lower so that y >= 0
    let mut rows: Vec<(Vec<ExactRat>, Relation, ExactRat)> = prob
        .constraints
        .iter()
        .map(|c| {
            let shift: ExactRat = c.coeffs.iter().zip(&prob.lower).map(|(a, l)| a * l).sum();
            let mut rhs = &c.rhs - shift;
            let mut coeffs = c.coeffs.clone();
            let mut rel = c.relation;
            if rhs.is_negative() {
                rhs = -rhs;
                coeffs.iter_mut().for_each(|v| *v = -v.clone());
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            (coeffs, rel, rhs)
        })
        .collect();
    let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let art_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let cols = n + slack_count + art_count;
    let mut table = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut a) = (n, n + slack_count);
    for (coeffs, rel, rhs) in rows.drain(..) {
        let mut row = coeffs;
        row.resize(cols + 1, ExactRat::zero());
        row[cols] = rhs;
        match rel {
            Relation::Le => {
                row[s] = ExactRat::one();
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -ExactRat::one();
                row[a] = ExactRat::one();
                basis.push(a);
                s += 1;
                a += 1;
            }
            Relation::Eq => {
                row[a] = ExactRat::one();
                basis.push(a);
                a += 1;
            }
        }
        table.push(row);
    }
    let mut tab = Tableau { rows: table, basis, cols, iterations: 0, max_pivots };
    let is_art = |j: usize| j >= n + slack_count;

    if art_count > 0 {
        let cost: Vec<ExactRat> =
            (0..cols).map(|j| if is_art(j) { -ExactRat::one() } else { ExactRat::zero() }).collect();
        tab.run(&cost, &vec![true; cols])?;
        let infeas: ExactRat = (0..m).filter(|&i| is_art(tab.basis[i])).map(|i| tab.rhs(i).clone()).sum();
        if infeas.is_positive() {
            return Ok(LPResult {
                status: LPStatus::Infeasible,
                value: ExactRat::zero(),
                solution: Vec::new(),
                iterations: tab.iterations,
            });
        }
        // drive zero-level artificials out, dropping redundant rows
        let mut i = 0;
        while i < tab.rows.len() {
            if is_art(tab.basis[i]) {
                if let Some(j) = (0..n + slack_count).find(|&j| !tab.rows[i][j].is_zero()) {
                    tab.pivot(i, j);
                } else {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }

    let mut cost = prob.objective.clone();
    cost.resize(cols, ExactRat::zero());
    let allowed: Vec<bool> = (0..cols).map(|j| !is_art(j)).collect();
    let outcome = tab.run(&cost, &allowed)?;
    if let Outcome::Unbounded = outcome {
        return Ok(LPResult {
            status: LPStatus::Unbounded,
            value: ExactRat::zero(),
            solution: Vec::new(),
            iterations: tab.iterations,
        });
    }
    let mut x = prob.lower.clone();
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] += tab.rhs(i);
        }
    }
    debug_assert!(prob.is_feasible(&x));
    Ok(LPResult { status: LPStatus::Optimal, value: prob.value_at(&x), solution: x, iterations: tab.iterations })
}

/// The Delsarte LP for `{0..t}`-cliques, with rows cleared of denominators.
pub fn delsarte_problem(p: &PolarParams, t: usize) -> Result<LPProblem> {
    let d = p.d();
    if t > d {
        return Err(Error::OutOfRange(format!("t = {t} > d = {d}")));
    }
    let q = q_matrix(p)?;
    let mut prob = LPProblem::new(vec![ExactRat::one(); t + 1]);
    let mut first = vec![ExactRat::zero(); t + 1];
    first[0] = ExactRat::one();
    prob.add(first, Relation::Eq, ExactRat::one());
    for j in 0..=d {
        let col: Vec<ExactRat> = (0..=t).map(|i| q[i][j].clone()).collect();
        let l = ExactRat::from_integer(lcm_of_denominators(col.iter()));
        let row: Vec<ExactRat> = col.into_iter().map(|v| v * &l).collect();
        if row.iter().all(|v| !v.is_negative()) {
            continue;
        }
        prob.add(row, Relation::Ge, ExactRat::zero());
    }
    Ok(prob)
}

pub fn delsarte_lp(p: &PolarParams, t: usize) -> Result<LPResult> {
    let res = simplex_solve(&delsarte_problem(p, t)?)?;
    match res.status {
        LPStatus::Optimal => {
            let n = ExactRat::from_integer(num_generators(p));
            if res.value > n {
                return Err(Error::Inconsistent(format!("LP value {} exceeds n for {}", res.value, p.notation())));
            }
            Ok(res)
        }
        s => Err(Error::Inconsistent(format!("Delsarte LP for {} is {s:?}", p.notation()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::hoffman_bound;
    use crate::qcore::Family;
    use proptest::prelude::*;

    fn r(v: i64) -> ExactRat {
        ExactRat::from_integer(v.into())
    }

    fn rv(v: &[i64]) -> Vec<ExactRat> {
        v.iter().map(|&x| r(x)).collect()
    }

    #[test]
    fn single_variable() {
        let mut p = LPProblem::new(rv(&[1]));
        p.add(rv(&[1]), Relation::Le, r(5));
        let res = simplex_solve(&p).unwrap();
        assert_eq!(res.status, LPStatus::Optimal);
        assert_eq!(res.value, r(5));
    }

    #[test]
    fn statuses() {
        let mut p = LPProblem::new(rv(&[1, 1]));
        p.add(rv(&[1, -1]), Relation::Le, r(1));
        assert_eq!(simplex_solve(&p).unwrap().status, LPStatus::Unbounded);
        let mut p = LPProblem::new(rv(&[1]));
        p.add(rv(&[1]), Relation::Le, r(1)).add(rv(&[1]), Relation::Ge, r(2));
        assert_eq!(simplex_solve(&p).unwrap().status, LPStatus::Infeasible);
        let mut p = LPProblem::new(rv(&[1, 2]));
        p.add(rv(&[1]), Relation::Le, r(1));
        assert!(simplex_solve(&p).is_err());
    }

    #[test]
    fn lower_bounds_and_equalities() {
        // max x + y, x + y = 4, x >= 1, y >= 2 -> 4; min side via -x
        let mut p = LPProblem::new(rv(&[-1, 0]));
        p.lower = rv(&[1, 2]);
        p.add(rv(&[1, 1]), Relation::Eq, r(4));
        let res = simplex_solve(&p).unwrap();
        assert_eq!(res.value, r(-1));
        assert_eq!(res.solution, rv(&[1, 3]));
        // redundant equality rows
        let mut p = LPProblem::new(rv(&[1, 1]));
        p.add(rv(&[1, 1]), Relation::Eq, r(2)).add(rv(&[2, 2]), Relation::Eq, r(4));
        assert_eq!(simplex_solve(&p).unwrap().value, r(2));
    }

    #[test]
    fn cycling_instance_terminates() {
        // degenerate instance that cycles under the largest-coefficient rule
        let h = |n: i64, d: i64| ExactRat::new(n.into(), d.into());
        let mut p = LPProblem::new(rv(&[10, -57, -9, -24]));
        p.add(vec![h(1, 2), h(-11, 2), h(-5, 2), r(9)], Relation::Le, r(0));
        p.add(vec![h(1, 2), h(-3, 2), h(-1, 2), r(1)], Relation::Le, r(0));
        p.add(rv(&[1, 0, 0, 0]), Relation::Le, r(1));
        let res = simplex_solve_capped(&p, 50).unwrap();
        assert_eq!(res.value, r(1));
    }

    fn dual(p: &LPProblem) -> LPProblem {
        // max c x, A x <= b, x >= 0  <->  max -b y, A^T y >= c, y >= 0
        let m = p.constraints.len();
        let mut d = LPProblem::new(p.constraints.iter().map(|c| -c.rhs.clone()).collect());
        for j in 0..p.num_vars {
            d.add((0..m).map(|i| p.constraints[i].coeffs[j].clone()).collect(), Relation::Ge, p.objective[j].clone());
        }
        d
    }

    proptest! {
        #[test]
        fn strong_duality(
            n in 1usize..4,
            m in 1usize..4,
            a in proptest::collection::vec(-3i64..6, 16),
            b in proptest::collection::vec(0i64..8, 4),
            c in proptest::collection::vec(-4i64..6, 4),
        ) {
            let mut p = LPProblem::new(rv(&c[..n]));
            for i in 0..m {
                p.add(rv(&a[i * 4..i * 4 + n]), Relation::Le, r(b[i]));
            }
            let primal = simplex_solve(&p).unwrap();
            let dl = simplex_solve(&dual(&p)).unwrap();
            match primal.status {
                LPStatus::Optimal => {
                    prop_assert!(p.is_feasible(&primal.solution));
                    prop_assert_eq!(dl.status, LPStatus::Optimal);
                    prop_assert_eq!(primal.value, -dl.value);
                }
                LPStatus::Unbounded => prop_assert_eq!(dl.status, LPStatus::Infeasible),
                LPStatus::Infeasible => prop_assert!(false, "x = 0 is feasible"),
            }
        }
    }

    #[test]
    fn delsarte_examples() {
        let p = PolarParams::new(Family::Symplectic, 2, 2).unwrap();
        assert_eq!(delsarte_lp(&p, 1).unwrap().value, r(3));
        assert_eq!(delsarte_lp(&p, 2).unwrap().value, r(15));
        assert_eq!(delsarte_lp(&p, 0).unwrap().value, r(1));
        let p = PolarParams::new(Family::HyperbolicQPlus, 2, 3).unwrap();
        assert_eq!(delsarte_lp(&p, 2).unwrap().value, r(15));
        assert_eq!(delsarte_lp(&p, 3).unwrap().value, r(30));
    }

    #[test]
    fn delsarte_below_hoffman_and_monotone() {
        for f in Family::ALL {
            for q in [2u64, 3, 4] {
                for d in 1..=6 {
                    let Ok(p) = PolarParams::new(f, q, d) else { continue };
                    let mut last = r(0);
                    for t in 0..=d {
                        let res = delsarte_lp(&p, t).unwrap();
                        assert!(delsarte_problem(&p, t).unwrap().is_feasible(&res.solution));
                        assert!(res.value >= last, "{p} t={t}");
                        if t > 0 && t < d {
                            assert!(res.value <= hoffman_bound(&p, t).unwrap(), "{p} t={t}");
                        }
                        last = res.value;
                    }
                    assert_eq!(last, r(0) + ExactRat::from_integer(num_generators(&p)));
                }
            }
        }
    }

    #[test]
    fn text_dump() {
        let p = PolarParams::new(Family::Symplectic, 2, 2).unwrap();
        let txt = delsarte_problem(&p, 1).unwrap().to_text();
        assert!(txt.starts_with("vars 2\nmax 1 1\n"));
    }
}
