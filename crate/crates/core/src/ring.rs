//! Exact arithmetic in the local ring Z/p^r and its residue field F_p.
//!
//! Every scalar is a canonical residue in `[0, p^r)`. The module provides the
//! p-adic digit decomposition, low/high truncations of the digit expansion,
//! exact division by powers of p and unit inversion. These are the primitives
//! the layered lifting decoders are built from.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("exponent r must be at least 1")]
    ZeroExponent,
    #[error("modulus {p}^{r} does not fit in 31 bits")]
    ModulusTooLarge { p: u64, r: u32 },
    #[error("digit index {index} out of range for r = {r}")]
    IndexOutOfRange { index: u32, r: u32 },
    #[error("{value} is not divisible by {p}^{power}")]
    NotDivisible { value: u64, p: u64, power: u32 },
    #[error("{0} is not a unit")]
    NotAUnit(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The pair (p, r) defining the ring Z/p^r, with the modulus cached.
///
/// `p` is verified prime at construction; an invalid modulus would silently
/// break every digit identity downstream.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingParams {
    p: u64,
    r: u32,
    modulus: u64,
}

impl fmt::Debug for RingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.r)
    }
}

impl RingParams {
    pub fn new(p: u64, r: u32) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if r == 0 {
            return Err(RingError::ZeroExponent);
        }
        let mut modulus: u64 = 1;
        for _ in 0..r {
            modulus = modulus
                .checked_mul(p)
                .filter(|m| *m <= 1 << 31)
                .ok_or(RingError::ModulusTooLarge { p, r })?;
        }
        Ok(RingParams { p, r, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// p^i for 0 <= i <= r.
    pub fn p_pow(&self, i: u32) -> u64 {
        debug_assert!(i <= self.r);
        self.p.pow(i)
    }

    /// Canonical residue of an arbitrary integer.
    pub fn scalar(&self, v: i64) -> RingScalar {
        let m = self.modulus as i64;
        RingScalar {
            value: v.rem_euclid(m) as u64,
            params: *self,
        }
    }

    pub fn zero(&self) -> RingScalar {
        self.scalar(0)
    }

    pub fn one(&self) -> RingScalar {
        self.scalar(1)
    }
}

/// An element of Z/p^r in canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingScalar {
    value: u64,
    params: RingParams,
}

// Debug and Display both print the bare residue.
impl fmt::Debug for RingScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for RingScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl RingScalar {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Residue modulo p, i.e. the image in F_p.
    pub fn mod_p(&self) -> u64 {
        self.value % self.params.p
    }

    /// True iff the element is invertible; over the local ring Z/p^r this is
    /// exactly the condition p does not divide the value.
    pub fn is_unit(&self) -> bool {
        self.mod_p() != 0
    }

    /// The p-adic digit expansion: value = sum_j digits[j] * p^j.
    pub fn padic_expand(&self) -> DigitVector {
        let p = self.params.p;
        let mut v = self.value;
        let digits = (0..self.params.r)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect();
        DigitVector {
            digits,
            p,
        }
    }

    /// Digits 0..=i of the expansion, recombined: sum_{j<=i} z_j p^j.
    pub fn truncate_low(&self, i: u32) -> Result<RingScalar, RingError> {
        if i >= self.params.r {
            return Err(RingError::IndexOutOfRange {
                index: i,
                r: self.params.r,
            });
        }
        let keep = self.params.p_pow(i + 1);
        Ok(RingScalar {
            value: self.value % keep,
            params: self.params,
        })
    }

    /// Digits i..r-1 of the expansion, recombined: sum_{j>=i} z_j p^j.
    pub fn truncate_high(&self, i: u32) -> Result<RingScalar, RingError> {
        if i >= self.params.r {
            return Err(RingError::IndexOutOfRange {
                index: i,
                r: self.params.r,
            });
        }
        let drop = self.params.p_pow(i);
        Ok(RingScalar {
            value: self.value - self.value % drop,
            params: self.params,
        })
    }

    /// Exact division by p^i. The quotient stays typed over Z/p^r; callers
    /// reduce mod p when a formula lands in the residue field.
    pub fn exact_div_pow(&self, i: u32) -> Result<RingScalar, RingError> {
        let d = self.params.p_pow(i.min(self.params.r));
        if i > self.params.r || self.value % d != 0 {
            return Err(RingError::NotDivisible {
                value: self.value,
                p: self.params.p,
                power: i,
            });
        }
        Ok(RingScalar {
            value: self.value / d,
            params: self.params,
        })
    }

    /// Multiplicative inverse; defined exactly for units.
    pub fn inverse(&self) -> Result<RingScalar, RingError> {
        if !self.is_unit() {
            return Err(RingError::NotAUnit(self.value));
        }
        // extended Euclid on (value, p^r); gcd is 1 for units
        let (mut r0, mut r1) = (self.params.modulus as i64, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.params.scalar(t0))
    }
}

impl Add for RingScalar {
    type Output = RingScalar;
    fn add(self, rhs: RingScalar) -> RingScalar {
        assert_eq!(self.params, rhs.params, "mixed ring parameters");
        RingScalar {
            value: (self.value + rhs.value) % self.params.modulus,
            params: self.params,
        }
    }
}

impl Sub for RingScalar {
    type Output = RingScalar;
    fn sub(self, rhs: RingScalar) -> RingScalar {
        assert_eq!(self.params, rhs.params, "mixed ring parameters");
        RingScalar {
            value: (self.value + self.params.modulus - rhs.value) % self.params.modulus,
            params: self.params,
        }
    }
}

impl Mul for RingScalar {
    type Output = RingScalar;
    fn mul(self, rhs: RingScalar) -> RingScalar {
        assert_eq!(self.params, rhs.params, "mixed ring parameters");
        RingScalar {
            value: (self.value * rhs.value) % self.params.modulus,
            params: self.params,
        }
    }
}

impl Neg for RingScalar {
    type Output = RingScalar;
    fn neg(self) -> RingScalar {
        RingScalar {
            value: (self.params.modulus - self.value) % self.params.modulus,
            params: self.params,
        }
    }
}

/// The r base-p digits of a scalar, least significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitVector {
    digits: Vec<u64>,
    p: u64,
}

impl DigitVector {
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn get(&self, i: usize) -> u64 {
        self.digits[i]
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Inverse of `padic_expand`.
    pub fn recompose(&self, params: RingParams) -> RingScalar {
        assert_eq!(params.p, self.p);
        assert_eq!(params.r as usize, self.digits.len());
        let mut v = 0u64;
        for &d in self.digits.iter().rev() {
            v = v * self.p + d;
        }
        params.scalar(v as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z8() -> RingParams {
        RingParams::new(2, 3).unwrap()
    }

    fn z9() -> RingParams {
        RingParams::new(3, 2).unwrap()
    }

    #[test]
    fn params_validation() {
        assert_eq!(RingParams::new(4, 2), Err(RingError::NotPrime(4)));
        assert_eq!(RingParams::new(2, 0), Err(RingError::ZeroExponent));
        assert!(matches!(
            RingParams::new(2, 40),
            Err(RingError::ModulusTooLarge { .. })
        ));
        assert_eq!(RingParams::new(3, 2).unwrap().modulus(), 9);
    }

    #[test]
    fn expand_examples() {
        assert_eq!(z8().scalar(6).padic_expand().digits(), &[0, 1, 1]);
        assert_eq!(z8().scalar(0).padic_expand().digits(), &[0, 0, 0]);
        assert_eq!(z9().scalar(7).padic_expand().digits(), &[1, 2]);
    }

    #[test]
    fn truncate_examples() {
        let x = z8().scalar(7);
        assert_eq!(x.truncate_low(1).unwrap().value(), 3);
        assert_eq!(x.truncate_low(2).unwrap().value(), 7);
        assert_eq!(z9().scalar(7).truncate_low(0).unwrap().value(), 1);

        assert_eq!(x.truncate_high(1).unwrap().value(), 6);
        assert_eq!(x.truncate_high(0).unwrap().value(), 7);
        assert_eq!(z9().scalar(7).truncate_high(1).unwrap().value(), 6);

        assert!(matches!(
            x.truncate_low(3),
            Err(RingError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn exact_div_examples() {
        assert_eq!(z8().scalar(4).exact_div_pow(2).unwrap().value(), 1);
        assert_eq!(z8().scalar(6).exact_div_pow(1).unwrap().value(), 3);
        assert!(matches!(
            z8().scalar(3).exact_div_pow(1),
            Err(RingError::NotDivisible { .. })
        ));
    }

    #[test]
    fn unit_inverse_examples() {
        assert_eq!(z8().scalar(3).inverse().unwrap().value(), 3);
        assert_eq!(z9().scalar(2).inverse().unwrap().value(), 5);
        assert_eq!(z8().scalar(4).inverse(), Err(RingError::NotAUnit(4)));
    }

    // Exhaustive identities for every modulus used in the test systems.
    fn small_moduli() -> Vec<RingParams> {
        vec![
            RingParams::new(2, 2).unwrap(),
            z8(),
            z9(),
            RingParams::new(3, 3).unwrap(),
            RingParams::new(5, 2).unwrap(),
        ]
    }

    #[test]
    fn round_trip_exhaustive() {
        for params in small_moduli() {
            for v in 0..params.modulus() {
                let x = params.scalar(v as i64);
                assert_eq!(x.padic_expand().recompose(params), x);
            }
        }
    }

    #[test]
    fn split_identity_exhaustive() {
        for params in small_moduli() {
            for v in 0..params.modulus() {
                let x = params.scalar(v as i64);
                for i in 0..params.r() - 1 {
                    let lo = x.truncate_low(i).unwrap();
                    let hi = x.truncate_high(i + 1).unwrap();
                    assert_eq!(lo + hi, x, "split at {i} of {v} in {params:?}");
                }
            }
        }
    }

    #[test]
    fn unit_inverse_exhaustive() {
        for params in small_moduli() {
            for v in 1..params.modulus() {
                let x = params.scalar(v as i64);
                if x.is_unit() {
                    assert_eq!(x * x.inverse().unwrap(), params.one());
                } else {
                    assert!(x.inverse().is_err());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn expand_digits_bounded(v in 0u64..2187) {
            let params = RingParams::new(3, 7).unwrap();
            let x = params.scalar(v as i64);
            let d = x.padic_expand();
            prop_assert_eq!(d.len(), 7);
            prop_assert!(d.digits().iter().all(|&d| d < 3));
            prop_assert_eq!(d.recompose(params), x);
        }
    }
}
