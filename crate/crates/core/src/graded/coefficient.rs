use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::GradedError;

/// The ring a polynomial's coefficients live in.
///
/// `Localized(p)` is Z_(p): rationals whose reduced denominator is prime to `p`.
/// `Rational` is only used for logarithm/exponential intermediates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    PrimeField(u64),
    Localized(u64),
    Rational,
}

/// A coefficient normalized for its [`Ring`].
///
/// Prime-field values are stored as integers in `[0, p)`; localized values
/// carry a denominator prime to `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coefficient(BigRational);

impl Coefficient {
    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as a small integer, if it is one.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

fn p_divides(p: u64, n: &BigInt) -> bool {
    (n % BigInt::from(p)).is_zero()
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc: u128 = 1 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Deterministic primality test, adequate for the small primes this crate handles.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn prime(&self) -> Option<u64> {
        match *self {
            Ring::PrimeField(p) | Ring::Localized(p) => Some(p),
            Ring::Rational => None,
        }
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, Ring::PrimeField(_))
    }

    pub fn zero(&self) -> Coefficient {
        Coefficient(BigRational::zero())
    }

    pub fn one(&self) -> Coefficient {
        Coefficient(BigRational::one())
    }

    pub fn from_int(&self, n: i64) -> Coefficient {
        self.normalize(BigRational::from_integer(BigInt::from(n)))
            .expect("integers lie in every coefficient ring")
    }

    /// Brings a rational value into this ring, failing when the value is not
    /// `p`-integral for a prime-field or localized ring.
    pub fn normalize(&self, q: BigRational) -> Result<Coefficient, GradedError> {
        match *self {
            Ring::Rational => Ok(Coefficient(q)),
            Ring::Localized(p) => {
                if p_divides(p, q.denom()) {
                    Err(GradedError::NotIntegral {
                        value: q.to_string(),
                        prime: p,
                    })
                } else {
                    Ok(Coefficient(q))
                }
            }
            Ring::PrimeField(p) => {
                let pb = BigInt::from(p);
                let den = q.denom().mod_floor(&pb);
                if den.is_zero() {
                    return Err(GradedError::NotIntegral {
                        value: q.to_string(),
                        prime: p,
                    });
                }
                let num = q.numer().mod_floor(&pb).to_u64().expect("reduced below p");
                let inv = mod_inverse(den.to_u64().expect("reduced below p"), p);
                let v = (num as u128 * inv as u128 % p as u128) as u64;
                Ok(Coefficient(BigRational::from_integer(BigInt::from(v))))
            }
        }
    }

    /// Unchecked normalization for results of ring operations on values that
    /// are already in this ring (closure guarantees success).
    fn close(&self, q: BigRational) -> Coefficient {
        match *self {
            Ring::PrimeField(p) => {
                let pb = BigInt::from(p);
                Coefficient(BigRational::from_integer(q.numer().mod_floor(&pb)))
            }
            _ => Coefficient(q),
        }
    }

    pub fn add(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        self.close(&a.0 + &b.0)
    }

    pub fn sub(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        self.close(&a.0 - &b.0)
    }

    pub fn neg(&self, a: &Coefficient) -> Coefficient {
        self.close(-a.0.clone())
    }

    pub fn mul(&self, a: &Coefficient, b: &Coefficient) -> Coefficient {
        self.close(&a.0 * &b.0)
    }

    /// Multiplicative inverse, when it exists in this ring.
    pub fn inverse(&self, a: &Coefficient) -> Option<Coefficient> {
        if a.is_zero() {
            return None;
        }
        match *self {
            Ring::Rational => Some(Coefficient(a.0.recip())),
            Ring::Localized(p) => {
                if p_divides(p, a.0.numer()) {
                    None
                } else {
                    Some(Coefficient(a.0.recip()))
                }
            }
            Ring::PrimeField(p) => {
                let v = a.0.numer().to_u64()?;
                Some(self.from_int(mod_inverse(v, p) as i64))
            }
        }
    }

    /// Whether `a` is a unit of this ring.
    pub fn is_unit(&self, a: &Coefficient) -> bool {
        self.inverse(a).is_some()
    }

    /// Reduces a coefficient of this ring into `F_p`. Rational coefficients must be
    /// `p`-integral.
    pub fn reduce_mod_p(&self, a: &Coefficient, p: u64) -> Result<Coefficient, GradedError> {
        Ring::PrimeField(p).normalize(a.0.clone())
    }

    /// Signed display helper: returns (is_negative, absolute value) for
    /// characteristic-zero rings; prime-field values are never negative.
    pub fn sign_split(&self, a: &Coefficient) -> (bool, Coefficient) {
        match self {
            Ring::PrimeField(_) => (false, a.clone()),
            _ => (a.0.is_negative(), Coefficient(a.0.abs())),
        }
    }
}
