//! Small finite fields by lookup table.
//!
//! Elements are stored as `u8` indices. For a degree-2 extension the element
//! `a + b·x` has index `a + p·b`, where `x` is a root of the canonical modulus.

use serde::Serialize;

use crate::error::{Error, Result};

pub type Elem = u8;

pub const SUPPORTED_ORDERS: [u64; 6] = [2, 3, 4, 5, 7, 9];

/// Field description plus precomputed arithmetic tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub p: u64,
    pub deg: u32,
    /// `[m0, m1]` for the modulus `x^2 + m1·x + m0` when `deg == 2`.
    pub modulus: Option<[u64; 2]>,
    pub q: u64,
    #[serde(skip)]
    add: Vec<Elem>,
    #[serde(skip)]
    mul: Vec<Elem>,
    #[serde(skip)]
    neg: Vec<Elem>,
    #[serde(skip)]
    inv: Vec<Elem>,
    #[serde(skip)]
    frob: Vec<Elem>,
}

/// Builds the field of order `q`. GF(4) uses `x^2 + x + 1`, GF(9) uses `x^2 + 1`.
pub fn make_field(q: u64) -> Result<FieldSpec> {
    let (p, deg, modulus) = match q {
        2 | 3 | 5 | 7 => (q, 1, None),
        4 => (2, 2, Some([1, 1])),
        9 => (3, 2, Some([1, 0])),
        _ => return Err(Error::UnsupportedField(q)),
    };
    let n = q as usize;
    let decode = |e: usize| -> (u64, u64) { ((e as u64) % p, (e as u64) / p) };
    let encode = |a: u64, b: u64| -> Elem { ((a % p) + p * (b % p)) as Elem };

    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = decode(i);
            let (c, d) = decode(j);
            add[i * n + j] = encode(a + c, b + d);
            mul[i * n + j] = match modulus {
                None => ((i as u64 * j as u64) % p) as Elem,
                Some([m0, m1]) => {
                    // (a + bx)(c + dx) = ac + (ad + bc)x + bd x^2, x^2 = -m1 x - m0
                    let bd = b * d;
                    let c0 = a * c + bd * (p - m0) % p;
                    let c1 = a * d + b * c + bd * ((p - m1) % p);
                    encode(c0 % p, c1 % p)
                }
            };
        }
    }
    let mut neg = vec![0; n];
    let mut inv = vec![0; n];
    for i in 0..n {
        for j in 0..n {
            if add[i * n + j] == 0 {
                neg[i] = j as Elem;
            }
            if i != 0 && mul[i * n + j] == 1 {
                inv[i] = j as Elem;
            }
        }
    }
    let mut frob = vec![0; n];
    for i in 0..n {
        let mut acc: Elem = 1;
        for _ in 0..p {
            acc = mul[acc as usize * n + i];
        }
        frob[i] = acc;
    }
    Ok(FieldSpec { p, deg, modulus, q, add, mul, neg, inv, frob })
}

impl FieldSpec {
    #[inline]
    pub fn order(&self) -> usize {
        self.q as usize
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    /// `x -> x^p`; the Hermitian conjugation `x -> x^sqrt(q)` when `deg == 2`.
    #[inline]
    pub fn conj(&self, a: Elem) -> Elem {
        self.frob[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q as usize).map(|e| e as Elem)
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// `row += c · other`
    pub fn axpy(&self, row: &mut [Elem], c: Elem, other: &[Elem]) {
        if c == 0 {
            return;
        }
        for (r, &o) in row.iter_mut().zip(other) {
            *r = self.add(*r, self.mul(c, o));
        }
    }

    pub fn scale(&self, row: &mut [Elem], c: Elem) {
        for r in row.iter_mut() {
            *r = self.mul(*r, c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supported_orders() {
        let f = make_field(2).unwrap();
        assert_eq!((f.p, f.deg, f.modulus), (2, 1, None));
        let f = make_field(4).unwrap();
        assert_eq!((f.p, f.deg, f.modulus), (2, 2, Some([1, 1])));
        assert!(matches!(make_field(6), Err(Error::UnsupportedField(6))));
        assert!(make_field(8).is_err());
    }

    #[test]
    fn field_axioms() {
        for q in SUPPORTED_ORDERS {
            let f = make_field(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1, "q={q} a={a}");
                }
                // conj is an automorphism of order deg
                let mut c = a;
                for _ in 0..f.deg {
                    c = f.conj(c);
                }
                assert_eq!(c, a);
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.conj(f.mul(a, b)), f.mul(f.conj(a), f.conj(b)));
                    for c in f.elements() {
                        let lhs = f.mul(a, f.add(b, c));
                        let rhs = f.add(f.mul(a, b), f.mul(a, c));
                        assert_eq!(lhs, rhs);
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }
}
