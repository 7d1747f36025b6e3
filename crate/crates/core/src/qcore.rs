//! Exact q-analog counting: Gaussian coefficients, generator counts and the
//! subspace counting functions used by the stability constants.
//!
//! Every value is an arbitrary-precision integer. Powers with a half-integer
//! exponent (the Hermitian types) are evaluated in base `r = sqrt(q)`, so no
//! real arithmetic ever enters this module.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ExactInt = BigInt;
pub type ExactRat = BigRational;

/// The six classical families, in the order used for the type table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Hyperbolic quadric Q+(2d-1, q).
    #[serde(rename = "Qplus")]
    HyperbolicQPlus,
    /// Hermitian variety H(2d-1, q), q square.
    #[serde(rename = "Hodd")]
    HermitianOddDim,
    /// Parabolic quadric Q(2d, q).
    #[serde(rename = "Q")]
    ParabolicQ,
    /// Symplectic space W(2d-1, q).
    #[serde(rename = "W")]
    Symplectic,
    /// Hermitian variety H(2d, q), q square.
    #[serde(rename = "Heven")]
    HermitianEvenDim,
    /// Elliptic quadric Q-(2d+1, q).
    #[serde(rename = "Qminus")]
    EllipticQMinus,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::HyperbolicQPlus,
        Family::HermitianOddDim,
        Family::ParabolicQ,
        Family::Symplectic,
        Family::HermitianEvenDim,
        Family::EllipticQMinus,
    ];

    /// `2ε` for this family: 0, 1, 2, 2, 3, 4.
    pub fn twice_epsilon(self) -> i64 {
        match self {
            Family::HyperbolicQPlus => 0,
            Family::HermitianOddDim => 1,
            Family::ParabolicQ => 2,
            Family::Symplectic => 2,
            Family::HermitianEvenDim => 3,
            Family::EllipticQMinus => 4,
        }
    }

    pub fn is_hermitian(self) -> bool {
        matches!(self, Family::HermitianOddDim | Family::HermitianEvenDim)
    }

    /// Short command-line tag.
    pub fn tag(self) -> &'static str {
        match self {
            Family::HyperbolicQPlus => "Qplus",
            Family::HermitianOddDim => "Hodd",
            Family::ParabolicQ => "Q",
            Family::Symplectic => "W",
            Family::HermitianEvenDim => "Heven",
            Family::EllipticQMinus => "Qminus",
        }
    }

    /// Vector dimension of the ambient space for rank `d`.
    pub fn vector_dim(self, d: usize) -> usize {
        match self {
            Family::HyperbolicQPlus | Family::HermitianOddDim | Family::Symplectic => 2 * d,
            Family::ParabolicQ | Family::HermitianEvenDim => 2 * d + 1,
            Family::EllipticQMinus => 2 * d + 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Qplus" | "Q+" | "hyperbolic" => Ok(Family::HyperbolicQPlus),
            "Hodd" | "hermitian-odd" => Ok(Family::HermitianOddDim),
            "Q" | "parabolic" => Ok(Family::ParabolicQ),
            "W" | "symplectic" => Ok(Family::Symplectic),
            "Heven" | "hermitian-even" => Ok(Family::HermitianEvenDim),
            "Qminus" | "Q-" | "elliptic" => Ok(Family::EllipticQMinus),
            other => Err(Error::Parse(format!("unknown family '{other}'"))),
        }
    }
}

/// Returns `(p, k)` with `q = p^k` if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Integer square root when `q` is a perfect square.
pub fn exact_sqrt(q: u64) -> Option<u64> {
    let r = (q as f64).sqrt().round() as u64;
    (r.checked_mul(r) == Some(q)).then_some(r)
}

/// Rank, order and type of a classical polar space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolarParams {
    family: Family,
    q: u64,
    d: usize,
    twice_epsilon: i64,
}

impl PolarParams {
    pub fn new(family: Family, q: u64, d: usize) -> Result<Self> {
        if prime_power(q).is_none() {
            return Err(Error::InvalidOrder(q));
        }
        if d < 1 {
            return Err(Error::InvalidRank(d as i64));
        }
        let twice_epsilon = family.twice_epsilon();
        if twice_epsilon % 2 == 1 && exact_sqrt(q).is_none() {
            return Err(Error::NonSquareOrder { family: family.tag(), q });
        }
        Ok(PolarParams { family, q, d, twice_epsilon })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn twice_epsilon(&self) -> i64 {
        self.twice_epsilon
    }

    /// ε as an exact rational.
    pub fn epsilon(&self) -> ExactRat {
        ExactRat::new(self.twice_epsilon.into(), 2.into())
    }

    /// Same family and order at another rank.
    pub fn with_rank(&self, d: usize) -> Result<Self> {
        PolarParams::new(self.family, self.q, d)
    }

    /// `q^(half_steps/2)`; the constructor guarantees that odd exponents only
    /// occur for square `q`.
    pub fn qpow_half(&self, half_steps: i64) -> ExactInt {
        HalfPower::new(self.q, half_steps)
            .eval()
            .expect("half-power exponent must be non-negative and admissible for this order")
    }

    /// Classical notation such as `W(5,2)` or `Q-(5,2)`, projective dimension.
    pub fn notation(&self) -> String {
        let d = self.d;
        let q = self.q;
        match self.family {
            Family::HyperbolicQPlus => format!("Q+({},{q})", 2 * d - 1),
            Family::HermitianOddDim => format!("H({},{q})", 2 * d - 1),
            Family::ParabolicQ => format!("Q({},{q})", 2 * d),
            Family::Symplectic => format!("W({},{q})", 2 * d - 1),
            Family::HermitianEvenDim => format!("H({},{q})", 2 * d),
            Family::EllipticQMinus => format!("Q-({},{q})", 2 * d + 1),
        }
    }
}

impl fmt::Display for PolarParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [d={}]", self.notation(), self.d)
    }
}

/// `q^(half_steps/2)` evaluated exactly. When `half_steps` is odd the power is
/// taken in `base_root = sqrt(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfPower {
    pub q: u64,
    pub base_root: u64,
    pub half_steps: i64,
}

impl HalfPower {
    pub fn new(q: u64, half_steps: i64) -> Self {
        let base_root = exact_sqrt(q).unwrap_or(q);
        HalfPower { q, base_root, half_steps }
    }

    fn magnitude(&self) -> Result<ExactInt> {
        let h = self.half_steps.unsigned_abs();
        if h % 2 == 0 {
            Ok(Pow::pow(ExactInt::from(self.q), h / 2))
        } else if self.base_root * self.base_root == self.q {
            Ok(Pow::pow(ExactInt::from(self.base_root), h))
        } else {
            Err(Error::OddHalfPower { q: self.q, half_steps: self.half_steps })
        }
    }

    /// Integer value; negative exponents are rejected.
    pub fn eval(&self) -> Result<ExactInt> {
        if self.half_steps < 0 {
            return Err(Error::NegativeExponent { half_steps: self.half_steps });
        }
        self.magnitude()
    }

    /// Rational value, allowing negative exponents.
    pub fn eval_rational(&self) -> Result<ExactRat> {
        let m = self.magnitude()?;
        if self.half_steps < 0 {
            Ok(ExactRat::new(ExactInt::one(), m))
        } else {
            Ok(ExactRat::from_integer(m))
        }
    }
}

/// `n choose 2` for any integer `n`.
pub fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

pub(crate) fn qpow(q: u64, e: i64) -> ExactInt {
    assert!(e >= 0, "negative integer power {e}");
    Pow::pow(ExactInt::from(q), e as u64)
}

pub(crate) fn gauss_q(n: i64, k: i64, q: u64) -> ExactInt {
    assert!(q >= 2, "Gaussian coefficient needs q >= 2");
    if k < 0 || k > n {
        return ExactInt::zero();
    }
    let k = k.min(n - k);
    let qb = ExactInt::from(q);
    let mut acc = ExactInt::one();
    for i in 1..=k {
        let num: ExactInt = Pow::pow(&qb, (n - i + 1) as u64) - 1u32;
        let den: ExactInt = Pow::pow(&qb, i as u64) - 1u32;
        // prefix products are themselves Gaussian coefficients
        acc = acc * num / den;
    }
    acc
}

/// Gaussian coefficient `[n k]_q`; zero outside `0 <= k <= n`.
pub fn gauss(n: i64, k: i64, q: u64) -> Result<ExactInt> {
    if q < 2 {
        return Err(Error::InvalidOrder(q));
    }
    Ok(gauss_q(n, k, q))
}

/// Number of generators: `prod_{i<d} (q^(i+ε) + 1)`.
pub fn num_generators(p: &PolarParams) -> ExactInt {
    omega(p, p.d() as i64)
}

/// Generators meeting a fixed generator in codimension `s`.
pub fn count_codim(p: &PolarParams, s: i64) -> Result<ExactInt> {
    let d = p.d() as i64;
    if !(0..=d).contains(&s) {
        return Err(Error::OutOfRange(format!("codimension s = {s} not in 0..={d}")));
    }
    Ok(gauss_q(d, d - s, p.q()) * p.qpow_half(2 * binom2(s) + s * p.twice_epsilon()))
}

/// r-spaces of GF(q)^d meeting a fixed s-space in a fixed u-space.
pub fn psi12(d: i64, r: i64, s: i64, u: i64, q: u64) -> ExactInt {
    if !(0 <= u && u <= s && s <= d) {
        return ExactInt::zero();
    }
    let g = gauss_q(d - s, r - u, q);
    if g.is_zero() {
        return g;
    }
    g * qpow(q, (r - u) * (s - u))
}

/// r-spaces of GF(q)^d meeting a fixed s-space in some u-space.
pub fn psi2(d: i64, r: i64, s: i64, u: i64, q: u64) -> ExactInt {
    if !(0 <= s && s <= d) {
        return ExactInt::zero();
    }
    let g = gauss_q(s, u, q);
    if g.is_zero() {
        return g;
    }
    g * psi12(d, r, s, u, q)
}

/// z-spaces of GF(q)^d meeting a fixed x-space X in a z2-space and a fixed
/// y-space Y inside X in a z1-space.
pub fn psi3(d: i64, x: i64, y: i64, z: i64, z1: i64, z2: i64, q: u64) -> ExactInt {
    if !(0 <= y && y <= x && x <= d) {
        return ExactInt::zero();
    }
    psi2(x, z2, y, z1, q) * psi12(d, z, x, z2, q)
}

/// Closed form of the even-`t` count (sum over `i = 1..t/2-1`).
pub fn psi_even(d: i64, t: i64, q: u64) -> Result<ExactInt> {
    if t % 2 != 0 || t < 0 {
        return Err(Error::Parity(format!("psi_even needs even t >= 0, got {t}")));
    }
    // guard of the defining psi3: 0 <= d-2t+1 <= d-3t/2 <= d
    if d - 2 * t + 1 < 0 {
        return Ok(ExactInt::zero());
    }
    let k = t / 2;
    let mut sum = ExactInt::zero();
    for i in 1..k {
        let g = gauss_q(d - 2 * t + 1, k - i, q) * gauss_q(k - 1, i, q);
        if !g.is_zero() {
            sum += g * qpow(q, (k - 1 - i) * (k - i));
        }
    }
    Ok(sum * qpow(q, 3 * k * k))
}

/// Closed form of the odd-`t` count (sum over `i = 1..(t-3)/2`).
pub fn psi_odd(d: i64, t: i64, q: u64) -> Result<ExactInt> {
    if t % 2 != 1 || t < 0 {
        return Err(Error::Parity(format!("psi_odd needs odd t >= 1, got {t}")));
    }
    // guard of the defining psi3 in rank d-1: 0 <= d-2t+2 <= d-3t/2+1/2 <= d-1
    if d - 2 * t + 2 < 0 || d < 1 {
        return Ok(ExactInt::zero());
    }
    let k = (t - 1) / 2;
    let mut sum = ExactInt::zero();
    for i in 1..k {
        let g = gauss_q(d - 2 * t + 2, k - i, q) * gauss_q(k - 1, i, q);
        if !g.is_zero() {
            sum += g * qpow(q, (k - 1 - i) * (k - i));
        }
    }
    Ok(sum * qpow(q, 3 * k * k))
}

/// Closed form of the odd-`t` count of (d - t/2 + 1/2)-spaces meeting a fixed
/// (d - 3t/2 + 1/2)-space in a (d - 2t + 1)-space.
pub fn psi_bar_odd(d: i64, t: i64, q: u64) -> Result<ExactInt> {
    if t % 2 != 1 || t < 0 {
        return Err(Error::Parity(format!("psi_bar_odd needs odd t >= 1, got {t}")));
    }
    let k = (t - 1) / 2;
    let s = d - 3 * k - 1;
    if !(0 <= s && s <= d) {
        return Ok(ExactInt::zero());
    }
    let g = gauss_q(s, k, q);
    if g.is_zero() {
        return Ok(g);
    }
    Ok(g * qpow(q, (3 * k + 1) * k))
}

/// Generators through a fixed (d-r)-space: `prod_{i<r} (q^(i+ε) + 1)`.
pub fn omega(p: &PolarParams, r: i64) -> ExactInt {
    if !(0..=p.d() as i64).contains(&r) {
        return ExactInt::zero();
    }
    let te = p.twice_epsilon();
    (0..r).fold(ExactInt::one(), |acc, i| acc * (p.qpow_half(2 * i + te) + 1u32))
}

/// Generators of a rank-`m` space of the same type meeting a fixed generator
/// trivially: `q^(C(m,2) + mε)`.
pub fn disjoint_generators(p: &PolarParams, m: i64) -> ExactInt {
    assert!(m >= 0);
    p.qpow_half(2 * binom2(m) + m * p.twice_epsilon())
}
