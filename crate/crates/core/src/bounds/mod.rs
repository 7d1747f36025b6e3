//! Upper bounds on EKR sets, the stability constants and the example sizes
//! they are compared against.

pub mod inequalities;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{
    binom2, count_codim, gauss_q, num_generators, omega, psi_bar_odd, psi_even, psi_odd, ExactInt, ExactRat,
    PolarParams,
};
use crate::spectra::{eig_table, lambda, ser_ints};

pub use inequalities::{inequality_suite, InequalityCheck, InequalityGrid};

/// Natural logarithm of a positive big integer.
pub fn ln_int(x: &ExactInt) -> f64 {
    assert!(x.is_positive(), "logarithm of non-positive integer");
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let mant = (x >> shift).to_f64().expect("60-bit value fits f64");
    mant.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_rat(x: &ExactRat) -> f64 {
    ln_int(x.numer()) - ln_int(x.denom())
}

/// `x` moved up by `k` representable doubles.
pub fn inflate_ulps(mut x: f64, k: u32) -> f64 {
    for _ in 0..k {
        x = x.next_up();
    }
    x
}

/// `α` with `α log(1+q^{-e-1}) = log(1+q^{-e})`.
pub fn alpha(q: f64, e: f64) -> f64 {
    (1.0 + q.powf(-e)).ln() / (1.0 + q.powf(-e - 1.0)).ln()
}

/// `log((1+q^{-e})^{α/(α-1)})`.
pub fn ln_generator_factor(q: f64, e: f64) -> f64 {
    let a = alpha(q, e);
    a / (a - 1.0) * (1.0 + q.powf(-e)).ln()
}

/// Constants `α` and `γ` for a given order and type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundContext {
    pub q: u64,
    pub twice_epsilon: i64,
    pub alpha: f64,
    #[serde(serialize_with = "ser_rat")]
    pub gamma: ExactRat,
}

impl BoundContext {
    pub fn new(q: u64, twice_epsilon: i64) -> Result<Self> {
        if q < 3 {
            return Err(Error::Unsupported(format!("explicit estimates need q >= 3, got q = {q}")));
        }
        let gamma = if q == 3 { ExactRat::from_integer(2.into()) } else { ExactRat::new((q + 2).into(), q.into()) };
        Ok(BoundContext { q, twice_epsilon, alpha: alpha(q as f64, twice_epsilon as f64 / 2.0), gamma })
    }

    pub fn for_params(p: &PolarParams) -> Result<Self> {
        BoundContext::new(p.q(), p.twice_epsilon())
    }

    pub fn epsilon(&self) -> f64 {
        self.twice_epsilon as f64 / 2.0
    }

    /// `log((1+q^{-ε})^{α/(α-1)})`.
    pub fn ln_gen_factor(&self) -> f64 {
        ln_generator_factor(self.q as f64, self.epsilon())
    }

    pub fn ln_gamma(&self) -> f64 {
        ln_rat(&self.gamma)
    }
}

fn check_t(p: &PolarParams, t: usize) -> Result<()> {
    if t == 0 || t >= p.d() {
        return Err(Error::OutOfRange(format!("t = {t} must satisfy 0 < t < d = {}", p.d())));
    }
    Ok(())
}

/// `n λ_min / (λ_min - k)` for the graph `sum_{s>t} A_s`.
pub fn hoffman_bound(p: &PolarParams, t: usize) -> Result<ExactRat> {
    check_t(p, t)?;
    let table = eig_table(p, p.d() - t - 1)?;
    let n = num_generators(p);
    let lmin = table.lambda_min().clone();
    let k = table.valency().clone();
    Ok(ExactRat::new(n * &lmin, lmin - k))
}

pub fn hoffman_floor(p: &PolarParams, t: usize) -> Result<ExactInt> {
    Ok(hoffman_bound(p, t)?.floor().to_integer())
}

/// Exponent (in half steps) of the power of `q` in the explicit estimate.
fn explicit_half_exponent(p: &PolarParams, t: usize) -> i64 {
    let d = p.d() as i64;
    let t = t as i64;
    let te = p.twice_epsilon();
    if t % 2 == 1 || te >= 2 {
        2 * (t * (d - t - 1) + binom2(t)) + t * te
    } else {
        2 * (t * (d - t - 1) + binom2(t + 1))
    }
}

/// Natural log of the explicit estimate of `c_{d,t}`.
pub fn explicit_hoffman_ln(p: &PolarParams, t: usize) -> Result<f64> {
    check_t(p, t)?;
    let ctx = BoundContext::for_params(p)?;
    let h = explicit_half_exponent(p, t);
    Ok(ctx.ln_gamma() + ctx.ln_gen_factor() + h as f64 / 2.0 * (p.q() as f64).ln())
}

/// The explicit estimate, inflated by four ulps; `inf` when out of range.
pub fn explicit_hoffman(p: &PolarParams, t: usize) -> Result<f64> {
    Ok(inflate_ulps(explicit_hoffman_ln(p, t)?.exp(), 4))
}

/// How the unknown clique number inside `b_1` was bounded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CSubstitution {
    /// Rank of the smaller polar space.
    pub rank: usize,
    pub t: usize,
    #[serde(serialize_with = "ser_int")]
    pub value: ExactInt,
    /// `generators`, `hoffman`, or `unused` when the Gaussian factor is zero.
    pub source: String,
}

/// Certified upper bound on `c_{rank,t}`: the smaller of the generator count
/// and the Hoffman floor.
pub fn certified_clique_bound(p: &PolarParams, rank: usize, t: usize) -> Result<CSubstitution> {
    let small = p.with_rank(rank)?;
    let total = num_generators(&small);
    if t == 0 || t >= rank {
        return Ok(CSubstitution { rank, t, value: total, source: "generators".into() });
    }
    let hf = hoffman_floor(&small, t)?;
    Ok(if hf < total {
        CSubstitution { rank, t, value: hf, source: "hoffman".into() }
    } else {
        CSubstitution { rank, t, value: total, source: "generators".into() }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BConstants {
    #[serde(serialize_with = "ser_ints")]
    pub values: Vec<ExactInt>,
    pub substitution: CSubstitution,
}

impl BConstants {
    /// `b1 + b2` for even `t`, `2 b1 + b2 + b3` for odd `t`.
    pub fn combined(&self) -> ExactInt {
        match self.values.as_slice() {
            [b1, b2] => b1 + b2,
            [b1, b2, b3] => b1 * 2u32 + b2 + b3,
            _ => unreachable!("two or three constants"),
        }
    }
}

/// `(b1, b2)` for even `t`.
pub fn b_even(p: &PolarParams, t: usize) -> Result<BConstants> {
    let d = p.d() as i64;
    let ti = t as i64;
    if t % 2 != 0 {
        return Err(Error::Parity(format!("b_even needs even t, got {t}")));
    }
    if d < 2 * ti {
        return Err(Error::OutOfRange(format!("b_even needs d >= 2t, got d = {d}, t = {t}")));
    }
    let k = ti / 2;
    let g = gauss_q(d - 3 * k, k - 1, p.q());
    let substitution = if g.is_zero() {
        CSubstitution { rank: (2 * t).saturating_sub(1), t, value: ExactInt::zero(), source: "unused".into() }
    } else {
        certified_clique_bound(p, 2 * t - 1, t)?
    };
    let b1 = g * &substitution.value;
    let b2 = p.qpow_half(k * p.twice_epsilon() + 2 * binom2(k)) * psi_even(d, ti, p.q())?;
    Ok(BConstants { values: vec![b1, b2], substitution })
}

/// `(b1, b2, b3)` for odd `t`.
pub fn b_odd(p: &PolarParams, t: usize) -> Result<BConstants> {
    let d = p.d() as i64;
    let ti = t as i64;
    if t % 2 != 1 {
        return Err(Error::Parity(format!("b_odd needs odd t, got {t}")));
    }
    if d < 2 * ti - 1 {
        return Err(Error::OutOfRange(format!("b_odd needs d >= 2t - 1, got d = {d}, t = {t}")));
    }
    let k = (ti - 1) / 2;
    // [d - 3t/2 + 1/2, (t-3)/2]
    let g = gauss_q(d - 3 * k - 1, k - 1, p.q());
    let substitution = if g.is_zero() {
        CSubstitution { rank: (2 * t).saturating_sub(2), t, value: ExactInt::zero(), source: "unused".into() }
    } else {
        certified_clique_bound(p, 2 * t - 2, t)?
    };
    let b1 = g * &substitution.value;
    let b2 = omega(p, k + 1) * psi_odd(d, ti, p.q())?;
    let b3 = p.qpow_half(k * p.twice_epsilon() + 2 * binom2(k)) * psi_bar_odd(d, ti, p.q())?;
    Ok(BConstants { values: vec![b1, b2, b3], substitution })
}

pub fn b_constants(p: &PolarParams, t: usize) -> Result<BConstants> {
    if t % 2 == 0 {
        b_even(p, t)
    } else {
        b_odd(p, t)
    }
}

/// Generators meeting a fixed generator in codimension exactly `t/2` (even
/// `t`), or meeting a fixed `(d-1)`-space in dimension exactly
/// `d - (t+1)/2` (odd `t`).
pub fn y_lower(p: &PolarParams, t: usize) -> Result<ExactInt> {
    let d = p.d();
    if t < 2 || t > d {
        return Err(Error::OutOfRange(format!("y needs 2 <= t <= d, got t = {t}, d = {d}")));
    }
    Ok(if t % 2 == 0 {
        count_codim(p, (t / 2) as i64)?
    } else {
        odd_layer(p, ((t + 1) / 2) as i64)
    })
}

/// Generators `H` with `dim(H ∩ U) = d - m` for a fixed `(d-1)`-space `U`.
fn odd_layer(p: &PolarParams, m: i64) -> ExactInt {
    let d = p.d() as i64;
    let te = p.twice_epsilon();
    let g = gauss_q(d - 1, m - 1, p.q());
    let apart = p.qpow_half(m * te + 2 * binom2(m));
    let through = p.qpow_half(2 * (m - 1) + (m - 1) * te + 2 * binom2(m - 1));
    g * (apart + through)
}

/// Size of the constructed example at level `t`: all generators within
/// codimension `t/2` of a generator (even), or meeting a `(d-1)`-space in
/// dimension at least `d - (t+1)/2` (odd).
pub fn example_size_exact(p: &PolarParams, t: usize) -> Result<ExactInt> {
    let d = p.d();
    if t > d {
        return Err(Error::OutOfRange(format!("t = {t} > d = {d}")));
    }
    if t % 2 == 0 {
        (0..=(t / 2) as i64).map(|s| count_codim(p, s)).sum()
    } else {
        Ok((1..=((t + 1) / 2) as i64).map(|m| odd_layer(p, m)).sum())
    }
}

/// The five degree gaps between example sizes and stability constants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaGaps {
    #[serde(serialize_with = "ser_rat")]
    pub delta1_even: ExactRat,
    #[serde(serialize_with = "ser_rat")]
    pub delta2_even: ExactRat,
    #[serde(serialize_with = "ser_rat")]
    pub delta1_odd: ExactRat,
    #[serde(serialize_with = "ser_rat")]
    pub delta2_odd: ExactRat,
    #[serde(serialize_with = "ser_rat")]
    pub delta3_odd: ExactRat,
}

impl DeltaGaps {
    pub fn as_array(&self) -> [&ExactRat; 5] {
        [&self.delta1_even, &self.delta2_even, &self.delta1_odd, &self.delta2_odd, &self.delta3_odd]
    }
}

/// Gaps in eighths, from `d`, `t` and `2ε`.
pub fn delta_gaps_raw(d: i64, t: i64, twice_epsilon: i64) -> DeltaGaps {
    let e8 = |num: i64| ExactRat::new(num.into(), 8.into());
    let te = twice_epsilon;
    // d + 1 - (2ε+1) t/4 - 5t²/8  or  d + 1 - (5-2ε) t/4 - 5t²/8
    let lin = if te >= 2 { te + 1 } else { 5 - te };
    DeltaGaps {
        delta1_even: e8(8 * d + 8 - 2 * lin * t - 5 * t * t),
        delta2_even: e8(8 * d + 16 - 20 * t),
        // d + 25/8 + ε/2 - (ε+1) t/2 - 5t²/8
        delta1_odd: e8(8 * d + 25 + 2 * te - 2 * (te + 2) * t - 5 * t * t),
        delta2_odd: e8(8 * d + 28 - 20 * t),
        delta3_odd: e8(4 * te),
    }
}

pub fn delta_gaps(p: &PolarParams, t: usize) -> DeltaGaps {
    delta_gaps_raw(p.d() as i64, t as i64, p.twice_epsilon())
}

/// `t <= sqrt(8d/5) - 2` (q >= 3) or `t <= sqrt(8d/9) - 2` (q = 2).
pub fn threshold_raw(q: u64, d: usize, t: usize) -> bool {
    let c = if q >= 3 { 5 } else { 9 };
    c * (t + 2) * (t + 2) <= 8 * d
}

pub fn threshold(p: &PolarParams, t: usize) -> bool {
    threshold_raw(p.q(), p.d(), t)
}

/// The proof obligations on the gaps at parameters passing the threshold.
pub fn delta_obligations_hold(g: &DeltaGaps, t: usize) -> bool {
    let three = ExactRat::from_integer(3.into());
    let four = ExactRat::from_integer(4.into());
    if t % 2 == 0 {
        t < 2 || (g.delta1_even >= three && g.delta2_even >= three)
    } else {
        t < 3 || (g.delta1_odd >= four && g.delta2_odd >= four)
    }
}

/// Whether the constructed example beats the certified stability constants.
pub fn stability_verdict(p: &PolarParams, t: usize) -> Result<bool> {
    let b = b_constants(p, t)?;
    Ok(example_size_exact(p, t)? > b.combined())
}

/// Every bound and constant for one `(params, t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub schema_version: u32,
    pub family: String,
    pub notation: String,
    pub q: u64,
    pub d: usize,
    pub t: usize,
    #[serde(serialize_with = "ser_int")]
    pub n: ExactInt,
    #[serde(serialize_with = "ser_opt_rat")]
    pub hoffman: Option<ExactRat>,
    #[serde(serialize_with = "ser_opt_int")]
    pub hoffman_floor: Option<ExactInt>,
    pub explicit_bound: Option<f64>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub lp_bound: Option<ExactRat>,
    pub b_constants: Option<BConstants>,
    #[serde(serialize_with = "ser_opt_int")]
    pub y_lower: Option<ExactInt>,
    #[serde(serialize_with = "ser_int")]
    pub example_size_exact: ExactInt,
    pub delta_gaps: DeltaGaps,
    pub threshold_ok: bool,
    pub stability_ok: Option<bool>,
}

pub fn bound_report(p: &PolarParams, t: usize, with_lp: bool) -> Result<BoundReport> {
    let d = p.d();
    if t > d {
        return Err(Error::OutOfRange(format!("t = {t} > d = {d}")));
    }
    let in_range = t > 0 && t < d;
    let hoffman = if in_range { Some(hoffman_bound(p, t)?) } else { None };
    let hoffman_floor = hoffman.as_ref().map(|h| h.floor().to_integer());
    let explicit_bound = if in_range && p.q() >= 3 { Some(explicit_hoffman(p, t)?) } else { None };
    let lp_bound = if with_lp { Some(crate::lp::delsarte_lp(p, t)?.value) } else { None };
    let b = b_constants(p, t).ok();
    let example = example_size_exact(p, t)?;
    let stability_ok = b.as_ref().map(|b| example > b.combined());
    Ok(BoundReport {
        schema_version: 1,
        family: p.family().tag().into(),
        notation: p.notation(),
        q: p.q(),
        d,
        t,
        n: num_generators(p),
        hoffman,
        hoffman_floor,
        explicit_bound,
        lp_bound,
        b_constants: b,
        y_lower: y_lower(p, t).ok(),
        example_size_exact: example,
        delta_gaps: delta_gaps(p, t),
        threshold_ok: threshold(p, t),
        stability_ok,
    })
}

/// `p/q` form, or a plain integer when the denominator is 1.
pub fn rat_string(r: &ExactRat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn ser_rat<S: serde::Serializer>(r: &ExactRat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_string(r))
}

pub(crate) fn ser_int<S: serde::Serializer>(r: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_rat<S: serde::Serializer>(r: &Option<ExactRat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&rat_string(r)),
        None => s.serialize_none(),
    }
}

fn ser_opt_int<S: serde::Serializer>(r: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// `lambda_0^{d-t-1}`, the valency of the graph `sum_{s>t} A_s`.
pub fn disjointness_valency(p: &PolarParams, t: usize) -> Result<ExactInt> {
    check_t(p, t)?;
    lambda(p, 0, (p.d() - t - 1) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::Family;

    fn params(f: Family, q: u64, d: usize) -> PolarParams {
        PolarParams::new(f, q, d).unwrap()
    }

    fn int(v: i64) -> ExactInt {
        ExactInt::from(v)
    }

    fn rat(v: i64) -> ExactRat {
        ExactRat::from_integer(v.into())
    }

    #[test]
    fn hoffman_examples() {
        assert_eq!(hoffman_bound(&params(Family::Symplectic, 2, 2), 1).unwrap(), rat(3));
        assert_eq!(hoffman_bound(&params(Family::HyperbolicQPlus, 2, 3), 2).unwrap(), rat(15));
        assert_eq!(hoffman_bound(&params(Family::HermitianOddDim, 4, 2), 1).unwrap(), rat(3));
        assert_eq!(hoffman_bound(&params(Family::EllipticQMinus, 2, 2), 1).unwrap(), rat(5));
        assert_eq!(disjointness_valency(&params(Family::Symplectic, 2, 2), 1).unwrap(), int(8));
        assert!(hoffman_bound(&params(Family::Symplectic, 2, 2), 2).is_err());
        assert!(hoffman_bound(&params(Family::Symplectic, 2, 2), 0).is_err());
    }

    #[test]
    fn explicit_dominates_exact() {
        for f in Family::ALL {
            for q in [3u64, 4, 5, 9] {
                let Ok(_) = PolarParams::new(f, q, 1) else { continue };
                for d in 2..=12 {
                    let p = params(f, q, d);
                    for t in 1..d {
                        let ex = explicit_hoffman_ln(&p, t).unwrap();
                        let h = ln_rat(&hoffman_bound(&p, t).unwrap());
                        assert!(h <= ex + 1e-12, "{p} t={t}: {h} > {ex}");
                    }
                }
            }
        }
        let p = params(Family::Symplectic, 3, 4);
        let e = explicit_hoffman(&p, 2).unwrap();
        assert!(ExactRat::from_float(e).unwrap() >= hoffman_bound(&p, 2).unwrap());
        assert!(explicit_hoffman(&params(Family::Symplectic, 2, 4), 2).is_err());
        // huge ranks stay finite in the log domain
        assert!(explicit_hoffman_ln(&params(Family::EllipticQMinus, 4, 40), 20).unwrap().is_finite());
    }

    #[test]
    fn explicit_cases_agree_at_epsilon_one() {
        let p = params(Family::Symplectic, 3, 7);
        for t in 1..7i64 {
            let d = 7i64;
            assert_eq!(t * (d - t - 1) + binom2(t) + t, t * (d - t - 1) + binom2(t + 1));
            assert_eq!(explicit_half_exponent(&p, t as usize), 2 * (t * (d - t - 1) + binom2(t + 1)));
        }
    }

    #[test]
    fn b_examples() {
        for f in Family::ALL {
            for q in [3u64, 4, 9] {
                let Ok(_) = PolarParams::new(f, q, 1) else { continue };
                for d in 4..=20 {
                    assert!(b_even(&params(f, q, d), 2).unwrap().values[1].is_zero());
                }
            }
        }
        let p = params(Family::Symplectic, 2, 8);
        let b = b_odd(&p, 3).unwrap();
        assert_eq!(b.values[2], int(480));
        assert_eq!(b.values[2], p.qpow_half(2) * psi_bar_odd(8, 3, 2).unwrap());
        // t = 2: the Gaussian factor is 1 and b1 is the certified c_{3,2}
        let p = params(Family::Symplectic, 3, 6);
        let b = b_even(&p, 2).unwrap();
        let c = certified_clique_bound(&p, 3, 2).unwrap();
        assert_eq!(b.values[0], c.value);
        assert!(b_even(&p, 3).is_err());
        assert!(b_odd(&p, 2).is_err());
        assert!(b_even(&params(Family::Symplectic, 3, 3), 2).is_err());
    }

    #[test]
    fn certified_clique_bound_picks_minimum() {
        let p = params(Family::Symplectic, 3, 5);
        let c = certified_clique_bound(&p, 3, 2).unwrap();
        let small = params(Family::Symplectic, 3, 3);
        assert_eq!(c.source, "hoffman");
        assert_eq!(c.value, hoffman_floor(&small, 2).unwrap());
        assert!(c.value <= num_generators(&small));
    }

    #[test]
    fn example_sizes() {
        let p = params(Family::Symplectic, 2, 4);
        assert_eq!(y_lower(&p, 2).unwrap(), int(30));
        assert_eq!(example_size_exact(&p, 2).unwrap(), int(31));
        assert_eq!(y_lower(&p, 3).unwrap(), int(84));
        assert!(y_lower(&p, 3).unwrap() <= example_size_exact(&p, 3).unwrap());
        assert_eq!(example_size_exact(&p, 0).unwrap(), int(1));
        // t = 1: generators through a (d-1)-space
        assert_eq!(example_size_exact(&p, 1).unwrap(), int(3));
        assert!(y_lower(&p, 1).is_err());
        let p = params(Family::Symplectic, 2, 4);
        let expect = gauss_q(3, 1, 2) * (int(8) + int(4));
        assert_eq!(y_lower(&p, 3).unwrap(), expect);
    }

    #[test]
    fn delta_examples() {
        let g = delta_gaps_raw(10, 2, 2);
        assert_eq!(g.delta2_even, rat(7));
        assert_eq!(g.delta1_even, rat(7));
        for te in 0..=4 {
            assert_eq!(delta_gaps_raw(12, 3, te).delta3_odd, ExactRat::new(te.into(), 2.into()));
        }
        // both branches coincide at ε = 1
        assert_eq!(delta_gaps_raw(20, 4, 2).delta1_even, {
            let d = 20i64;
            let t = 4i64;
            ExactRat::new((8 * d + 8 - 2 * 3 * t - 5 * t * t).into(), 8.into())
        });
    }

    #[test]
    fn threshold_examples() {
        assert!(threshold_raw(3, 10, 2));
        assert!(!threshold_raw(2, 17, 2));
        assert!(threshold_raw(2, 18, 2));
        assert!(threshold_raw(3, 1, 0) == (20 <= 8));
    }

    #[test]
    fn obligations_follow_from_threshold() {
        for te in 0..=4 {
            for d in 1..=200usize {
                for t in 0..=d {
                    if threshold_raw(3, d, t) {
                        assert!(delta_obligations_hold(&delta_gaps_raw(d as i64, t as i64, te), t), "d={d} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn threshold_implies_stability() {
        for q in [3u64, 4] {
            for f in Family::ALL {
                for d in 1..=30 {
                    let Ok(p) = PolarParams::new(f, q, d) else { continue };
                    for t in (0..=d).filter(|&t| threshold(&p, t)) {
                        assert!(stability_verdict(&p, t).unwrap(), "{p} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn report_json() {
        let p = params(Family::Symplectic, 3, 6);
        let r = bound_report(&p, 2, false).unwrap();
        assert_eq!(r.hoffman_floor.clone().unwrap(), r.hoffman.clone().unwrap().floor().to_integer());
        assert!(r.example_size_exact <= r.hoffman_floor.clone().unwrap());
        let j = serde_json::to_value(&r).unwrap();
        assert!(j["n"].is_string());
        assert!(j["delta_gaps"]["delta2_even"].is_string());
        let r = bound_report(&p, 6, false).unwrap();
        assert!(r.hoffman.is_none());
        assert!(r.example_size_exact < r.n);
    }

    #[test]
    fn stability_small_cases() {
        // t = 1: pencils of (d-1)-spaces beat the single b3 = 1
        let p = params(Family::Symplectic, 3, 6);
        assert!(stability_verdict(&p, 1).unwrap());
        assert!(stability_verdict(&p, 0).unwrap());
    }

    #[test]
    fn log_helpers() {
        let x = int(10).pow(300u32);
        assert!((ln_int(&x) - 300.0 * 10f64.ln()).abs() < 1e-9);
        assert!(inflate_ulps(1.0, 4) > 1.0);
        assert_eq!(rat_string(&ExactRat::new(6.into(), 4.into())), "3/2");
    }
}
