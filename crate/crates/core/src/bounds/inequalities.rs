//! Numeric checks of the estimates the stability argument rests on.
//!
//! Integer and rational inequalities are compared exactly. Anything involving
//! a logarithm is compared in double precision with absolute tolerance
//! [`LOG_TOL`]; the derivative bound on `α` uses a central difference.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{
    b_even, b_odd, example_size_exact, ln_generator_factor, ln_int, ln_rat, y_lower, BoundContext,
};
use crate::qcore::{binom2, gauss_q, num_generators, psi_even, psi_odd, qpow, ExactInt, ExactRat, Family, PolarParams};

pub const LOG_TOL: f64 = 1e-9;
pub const FD_STEP: f64 = 1e-5;
pub const FD_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityGrid {
    pub qs: Vec<u64>,
    /// Largest rank for the polar-space inequalities.
    pub max_d: usize,
    /// Largest `n` for the Gaussian coefficient inequalities.
    pub max_n: i64,
    pub x_max: f64,
    pub x_points: usize,
    pub max_z: i64,
}

impl Default for InequalityGrid {
    fn default() -> Self {
        InequalityGrid { qs: vec![2, 3, 4, 5, 7, 8, 9], max_d: 40, max_n: 30, x_max: 1000.0, x_points: 4001, max_z: 12 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub lemma: String,
    pub instances: u64,
    pub violations: Vec<String>,
}

impl InequalityCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Default)]
struct Tally {
    instances: u64,
    violations: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.violations.push(witness());
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.instances += other.instances;
        self.violations.extend(other.violations);
        self
    }

    fn finish(self, lemma: &str) -> InequalityCheck {
        InequalityCheck { lemma: lemma.into(), instances: self.instances, violations: self.violations }
    }
}

fn rat(n: impl Into<ExactInt>, d: impl Into<ExactInt>) -> ExactRat {
    ExactRat::new(n.into(), d.into())
}

/// `q^{h/2}` squared, as a rational.
fn q_pow_rat(q: u64, e: i64) -> ExactRat {
    if e >= 0 {
        ExactRat::from_integer(qpow(q, e))
    } else {
        ExactRat::new(ExactInt::one(), qpow(q, -e))
    }
}

/// `lhs <= q^{h/2} r` for non-negative `lhs`, `r`, decided exactly by squaring.
fn le_half_power(lhs: &ExactRat, q: u64, h: i64, r: &ExactRat) -> bool {
    lhs * lhs <= q_pow_rat(q, h) * r * r
}

fn ln_pos(x: &ExactInt) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        ln_int(x)
    }
}

fn x_grid(g: &InequalityGrid) -> Vec<f64> {
    let n = g.x_points.max(2);
    // dense near zero, reaching x_max
    (0..n).map(|i| g.x_max * (i as f64 / (n - 1) as f64).powi(3)).collect()
}

fn lemma_6_1(g: &InequalityGrid) -> InequalityCheck {
    let mut t = Tally::default();
    for x in x_grid(g) {
        let lo = 2.0 * x / (2.0 + x);
        let mid = x.ln_1p();
        let hi = x / 2.0 * (2.0 + x) / (1.0 + x);
        t.check(lo <= mid + LOG_TOL && mid <= hi + LOG_TOL, || format!("x={x}: {lo} <= {mid} <= {hi}"));
    }
    t.finish("6.1")
}

fn alpha_fn(q: f64, x: f64) -> f64 {
    q.powf(-x).ln_1p() / q.powf(-x - 1.0).ln_1p()
}

fn lemma_6_2(g: &InequalityGrid) -> InequalityCheck {
    let tallies: Vec<Tally> = g
        .qs
        .par_iter()
        .map(|&q| {
            let qf = q as f64;
            let mut t = Tally::default();
            for i in 1..=400 {
                let x = 0.05 * i as f64;
                let fd = (alpha_fn(qf, x + FD_STEP) - alpha_fn(qf, x - FD_STEP)) / (2.0 * FD_STEP);
                let qx = qf.powf(x);
                let l = qf.powf(-x - 1.0).ln_1p();
                let num = (qx * (2.0 * qf - 2.0) - 1.0) * qf.ln();
                let den = 2.0 * qf * qx * (2.0 * qx + 1.0) * (qx + 1.0) * (qf * qx + 1.0) * l * l;
                let bound = num / den;
                t.check(fd >= bound - FD_TOL && fd > -FD_TOL, || format!("q={q} x={x}: f'~{fd} < {bound}"));
            }
            t
        })
        .collect();
    tallies.into_iter().fold(Tally::default(), Tally::merge).finish("6.2")
}

fn ln_g(q: f64, x: f64) -> f64 {
    ln_generator_factor(q, x)
}

fn lemma_6_3(g: &InequalityGrid) -> InequalityCheck {
    let mut t = Tally::default();
    for &q in &g.qs {
        let qf = q as f64;
        for i in 0..200 {
            let (x0, x1) = (0.05 * i as f64, 0.05 * (i + 1) as f64);
            let (a, b) = (ln_g(qf, x0), ln_g(qf, x1));
            t.check(b <= a + LOG_TOL, || format!("q={q}: g({x1})={b} > g({x0})={a} (log)"));
        }
    }
    for i in 0..280 {
        let (q0, q1) = (2.0 + 0.05 * i as f64, 2.0 + 0.05 * (i + 1) as f64);
        let (a, b) = (ln_g(q0, 0.0), ln_g(q1, 0.0));
        t.check(b <= a + LOG_TOL, || format!("g(0,{q1})={b} > g(0,{q0})={a} (log)"));
    }
    t.finish("6.3")
}

fn lemma_6_4(g: &InequalityGrid) -> (InequalityCheck, InequalityCheck) {
    let mut ta = Tally::default();
    let mut tb = Tally::default();
    for &q in &g.qs {
        for f in families_for(q) {
            for d in 1..=g.max_d {
                let p = PolarParams::new(f, q, d).unwrap();
                let e = p.twice_epsilon() as f64 / 2.0;
                let h = 2 * binom2(d as i64) + d as i64 * p.twice_epsilon();
                let n = num_generators(&p);
                ta.check(p.qpow_half(h) <= n, || format!("{}: q^(de+C(d,2)) > n", p.notation()));
                let lng = ln_generator_factor(q as f64, e);
                let ln_lhs = ln_int(&n) - h as f64 / 2.0 * (q as f64).ln();
                tb.check(ln_lhs <= lng + LOG_TOL, || format!("{}: {ln_lhs} > {lng}", p.notation()));
            }
        }
    }
    (ta.finish("6.4a"), tb.finish("6.4b"))
}

fn lemma_6_5_6_6(g: &InequalityGrid) -> Vec<InequalityCheck> {
    let mut a = Tally::default();
    let mut b = Tally::default();
    let mut c = Tally::default();
    let mut six = Tally::default();
    for &q in &g.qs {
        for n in 0..=g.max_n {
            if n >= 1 {
                let lhs = gauss_q(n, 1, q) * (q - 1);
                c.check(lhs <= qpow(q, n), || format!("q={q} n={n}: (q-1)[n 1] > q^n"));
            }
            for k in 0..=n {
                let gs = gauss_q(n, k, q);
                let top = qpow(q, k * (n - k));
                if q >= 3 {
                    a.check(gs <= &top * 2u32, || format!("q={q} n={n} k={k}: [n k] > 2 q^(k(n-k))"));
                }
                if q >= 4 {
                    b.check(&gs * q <= &top * (q + 2), || format!("q={q} n={n} k={k}: [n k] > (1+2/q) q^(k(n-k))"));
                }
                if n > k && k > 0 {
                    six.check(&top * (q + 1) <= &gs * q, || format!("q={q} n={n} k={k}: (1+1/q) q^(k(n-k)) > [n k]"));
                }
            }
        }
    }
    vec![a.finish("6.5a"), b.finish("6.5b"), c.finish("6.5c"), six.finish("6.6")]
}

/// `γ^2 / (1 - q^{-2})`.
fn gamma_sq_geo(ctx: &BoundContext) -> ExactRat {
    let q2 = ExactInt::from(ctx.q * ctx.q);
    &ctx.gamma * &ctx.gamma * rat(q2.clone(), q2 - 1u32)
}

fn families_for(q: u64) -> Vec<Family> {
    Family::ALL.into_iter().filter(|&f| PolarParams::new(f, q, 1).is_ok()).collect()
}

fn lemma_9_1(g: &InequalityGrid) -> InequalityCheck {
    let mut t = Tally::default();
    for &q in g.qs.iter().filter(|&&q| q >= 3) {
        let ctx = BoundContext::new(q, 0).expect("q >= 3");
        let r = gamma_sq_geo(&ctx);
        for d in 1..=g.max_d as i64 {
            for tt in 1..=d {
                if 5 * tt > 2 * d + 1 {
                    continue;
                }
                let (lhs, e) = if tt % 2 == 0 {
                    let k = tt / 2;
                    (psi_even(d, tt, q).unwrap(), 3 * k * k + k * (d - 4 * k) - (d - 5 * k + 2))
                } else {
                    let k = (tt - 1) / 2;
                    // (t/2-1/2)(3t/2-3/2) + (d-2t+1)(t/2-1/2) - (d-5t/2+7/2)
                    (psi_odd(d, tt, q).unwrap(), 3 * k * k + k * (d - 4 * k - 1) - (d - 5 * k + 1))
                };
                let lhs = ExactRat::from_integer(lhs);
                t.check(le_half_power(&lhs, q, 2 * e, &r), || format!("q={q} d={d} t={tt}: psi > q^{e} γ²/(1-q^-2)"));
            }
        }
    }
    t.finish("9.1")
}

fn lemma_9_2(g: &InequalityGrid) -> InequalityCheck {
    let jobs: Vec<(u64, Family, usize, usize)> = g
        .qs
        .iter()
        .filter(|&&q| q >= 3)
        .flat_map(|&q| families_for(q).into_iter().map(move |f| (q, f)))
        .flat_map(|(q, f)| (2..=g.max_d).flat_map(move |d| (2..=d).map(move |t| (q, f, d, t))))
        .filter(|&(_, _, d, t)| 5 * t <= 2 * d)
        .collect();
    let tallies: Vec<Tally> = jobs
        .par_iter()
        .map(|&(q, f, d, t)| {
            let mut tally = Tally::default();
            let p = PolarParams::new(f, q, d).unwrap();
            let ctx = BoundContext::for_params(&p).unwrap();
            let te = p.twice_epsilon();
            let (di, ti) = (d as i64, t as i64);
            let lnq = (q as f64).ln();
            let lng = ctx.ln_gen_factor();
            let gam = ctx.gamma.clone();
            let g2 = &gam * &gam;
            let geo = gamma_sq_geo(&ctx);
            let tag = format!("{} t={t}", p.notation());
            let float_le = |lhs: &ExactInt, h: i64, r: &ExactRat, with_g: bool| {
                ln_pos(lhs) <= h as f64 / 2.0 * lnq + ln_rat(r) + if with_g { lng } else { 0.0 } + LOG_TOL
            };
            if t % 2 == 0 {
                let k = ti / 2;
                let b = b_even(&p, t).unwrap();
                let base = (k - 1) * (di - 2 * ti + 1) + ti * (ti - 2);
                let h1 = if te >= 2 { 2 * (base + binom2(ti)) + ti * te } else { 2 * (base + binom2(ti + 1)) };
                tally.check(float_le(&b.values[0], h1, &g2, true), || format!("{tag}: b1 even"));
                let h2 = k * te + 2 * binom2(k) + 2 * ti * (di + 5) / 2 - ti * ti / 2 - 2 * di - 4;
                let lhs = ExactRat::from_integer(b.values[1].clone());
                tally.check(le_half_power(&lhs, q, h2, &geo), || format!("{tag}: b2 even"));
            } else {
                let k = (ti - 1) / 2;
                let b = b_odd(&p, t).unwrap();
                let h1 = 2 * ((ti - 3) / 2 * (di - 2 * ti + 2) + (ti - 3) * ti + binom2(ti)) + ti * te;
                tally.check(float_le(&b.values[0], h1, &g2, true), || format!("{tag}: b1 odd"));
                let h2 = (k + 1) * te + 2 * binom2(k + 1) + 2 * (k * di + 4 * k - k * k - di - 1);
                tally.check(float_le(&b.values[1], h2, &geo, true), || format!("{tag}: b2 odd"));
                let h3 = k * te + 2 * binom2(k) + 2 * (k * di - k * k);
                let lhs = ExactRat::from_integer(b.values[2].clone());
                tally.check(le_half_power(&lhs, q, h3, &gam), || format!("{tag}: b3 odd"));
            }
            tally
        })
        .collect();
    tallies.into_iter().fold(Tally::default(), Tally::merge).finish("9.2")
}

fn lemma_9_4(g: &InequalityGrid) -> InequalityCheck {
    let mut t = Tally::default();
    for &q in &g.qs {
        for f in families_for(q) {
            for d in 4..=g.max_d.min(24) {
                let p = PolarParams::new(f, q, d).unwrap();
                let te = p.twice_epsilon();
                let di = d as i64;
                for tt in 2..=d - 2 {
                    let y = y_lower(&p, tt).unwrap();
                    let ex = example_size_exact(&p, tt).unwrap();
                    t.check(y <= ex, || format!("{} t={tt}: y > example", p.notation()));
                    let ti = tt as i64;
                    // y >= q^{h/2} (1 + 1/q), times (1 + q^{-ε}) for odd t
                    let ok = if tt % 2 == 0 {
                        let k = ti / 2;
                        let h = k * te + 2 * binom2(k) + 2 * k * (di - k);
                        &y * q >= p.qpow_half(h) * (q + 1)
                    } else {
                        let k = (ti - 1) / 2;
                        let m = k + 1;
                        let h = m * te + 2 * binom2(m) + 2 * k * (di - m);
                        &y * q * p.qpow_half(te) >= p.qpow_half(h) * (q + 1) * (p.qpow_half(te) + 1u32)
                    };
                    t.check(ok, || format!("{} t={tt}: y below its power bound", p.notation()));
                }
            }
        }
    }
    t.finish("9.4")
}

fn lemma_9_5(g: &InequalityGrid) -> (InequalityCheck, InequalityCheck) {
    let mut a = Tally::default();
    let mut b = Tally::default();
    for &q in g.qs.iter().filter(|&&q| q >= 3) {
        for te in 0..=4 {
            let ctx = BoundContext::new(q, te).unwrap();
            let qf = q as f64;
            let gam: f64 = ln_rat(&ctx.gamma).exp();
            let gen = ctx.ln_gen_factor().exp();
            let geo = 1.0 / (1.0 - qf.powi(-2));
            let e = ctx.epsilon();
            for z in 3..=g.max_z {
                let lhs = qf.powi(z as i32) * (1.0 + 1.0 / qf);
                let rhs = gam * gam * (gen + geo);
                a.check(lhs.ln() + LOG_TOL >= rhs.ln(), || format!("q={q} e={e} z={z}: {lhs} < {rhs}"));
                if z >= 4 {
                    let lhs = lhs * (1.0 + qf.powf(-e));
                    let rhs = gam * qf.powf(z as f64 - e) + gam * gam * gen * (2.0 + geo);
                    b.check(lhs.ln() + LOG_TOL >= rhs.ln(), || format!("q={q} e={e} z={z}: {lhs} < {rhs}"));
                }
            }
        }
    }
    (a.finish("9.5a"), b.finish("9.5b"))
}

/// Every inequality on the grid, in a fixed order.
pub fn inequality_suite(g: &InequalityGrid) -> Vec<InequalityCheck> {
    let mut out = vec![lemma_6_1(g), lemma_6_2(g), lemma_6_3(g)];
    let (a, b) = lemma_6_4(g);
    out.push(a);
    out.push(b);
    out.extend(lemma_6_5_6_6(g));
    out.push(lemma_9_1(g));
    out.push(lemma_9_2(g));
    out.push(lemma_9_4(g));
    let (a, b) = lemma_9_5(g);
    out.push(a);
    out.push(b);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> InequalityGrid {
        InequalityGrid { qs: vec![2, 3, 4, 9], max_d: 16, max_n: 12, x_max: 100.0, x_points: 200, max_z: 8 }
    }

    #[test]
    fn suite_passes_on_small_grid() {
        for c in inequality_suite(&small()) {
            assert!(c.instances > 0, "{} checked nothing", c.lemma);
            assert!(c.passed(), "{}: {:?}", c.lemma, &c.violations[..c.violations.len().min(5)]);
        }
    }

    #[test]
    fn spot_values() {
        // (1 + 1/2) 16 = 24 <= [4 2]_2 = 35
        assert_eq!(gauss_q(4, 2, 2), ExactInt::from(35));
        assert!(ExactInt::from(24) <= gauss_q(4, 2, 2));
        assert_eq!(gauss_q(4, 2, 3), ExactInt::from(130));
        assert!(gauss_q(4, 2, 3) <= ExactInt::from(162));
        assert_eq!(2.0 * 0.0 / 2.0, 0f64.ln_1p());
    }

    #[test]
    fn half_power_comparison() {
        // 5 <= 3^{1/2} * 3 = 5.196..., 6 > it
        let three = ExactRat::from_integer(3.into());
        assert!(le_half_power(&ExactRat::from_integer(5.into()), 3, 1, &three));
        assert!(!le_half_power(&ExactRat::from_integer(6.into()), 3, 1, &three));
        assert!(le_half_power(&rat(1, 4), 4, -2, &ExactRat::one()));
        assert!(!le_half_power(&rat(1, 2), 4, -2, &ExactRat::one()));
    }
}
