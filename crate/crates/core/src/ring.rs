//! Coefficient rings: the integers, the rationals and prime fields.
//!
//! Every scalar is stored as a [`BigRational`] kept in the ring's normal
//! form: integers for `Z`, reduced fractions for `Q` and residues in
//! `0..p` for `Fp`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Z,
    Q,
    Fp(u64),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn fp(p: u64) -> Result<Ring> {
        if is_prime(p) {
            Ok(Ring::Fp(p))
        } else {
            Err(Error::Ring(format!("{p} is not prime")))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::Z | Ring::Q => 0,
            Ring::Fp(p) => *p,
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Z)
    }

    /// Brings an arbitrary rational into normal form, failing when it has no
    /// image in the ring (a non-integer over `Z`, or a denominator divisible by `p`).
    pub fn normalize(&self, x: &Scalar) -> Result<Scalar> {
        match self {
            Ring::Q => Ok(x.clone()),
            Ring::Z => {
                if x.is_integer() {
                    Ok(x.clone())
                } else {
                    Err(Error::Ring(format!("{x} is not an integer")))
                }
            }
            Ring::Fp(p) => {
                let p = BigInt::from(*p);
                let num = x.numer().mod_floor(&p);
                let den = x.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::Ring(format!("{x} has no image mod {p}")));
                }
                let inv = mod_inverse(&den, &p).expect("p prime");
                Ok(BigRational::from_integer((num * inv).mod_floor(&p)))
            }
        }
    }

    /// Normal form of an element known to live in the ring.
    pub fn norm(&self, x: Scalar) -> Scalar {
        match self {
            Ring::Fp(_) => self.normalize(&x).expect("element of the ring"),
            _ => x,
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.norm(BigRational::from_integer(v.into()))
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.norm(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.norm(-a)
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        match self {
            Ring::Z => a.is_integer() && a.abs().is_one(),
            _ => !a.is_zero(),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if !self.is_unit(a) {
            return Err(Error::Ring(format!("{a} is not a unit in {self}")));
        }
        Ok(self.norm(a.recip()))
    }

    /// Small integer value of a normalized scalar, for display.
    pub fn to_i64(&self, a: &Scalar) -> Option<i64> {
        if a.is_integer() {
            a.to_integer().to_i64()
        } else {
            None
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(p);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(p))
    } else {
        None
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => write!(f, "Z"),
            Ring::Q => write!(f, "Q"),
            Ring::Fp(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ring> {
        match s.trim() {
            "Z" | "z" => Ok(Ring::Z),
            "Q" | "q" => Ok(Ring::Q),
            t if t.starts_with('F') || t.starts_with('f') => {
                let p: u64 = t[1..]
                    .parse()
                    .map_err(|_| Error::Ring(format!("cannot parse '{s}'")))?;
                Ring::fp(p)
            }
            _ => Err(Error::Ring(format!("unknown ring '{s}' (use Z, Q or Fp)"))),
        }
    }
}

/// Parses an integer or fraction such as `-3` or `1/2`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let bad = || Error::Params(format!("cannot parse '{s}' as a number"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parse_rings() {
        assert_eq!("Z".parse::<Ring>().unwrap(), Ring::Z);
        assert_eq!("F3".parse::<Ring>().unwrap(), Ring::Fp(3));
        assert!("F4".parse::<Ring>().is_err());
        assert!("R".parse::<Ring>().is_err());
        assert_eq!(Ring::Fp(5).to_string(), "F5");
    }

    #[test]
    fn prime_field_normal_form() {
        let f = Ring::Fp(3);
        assert_eq!(f.from_i64(-1), q(2, 1));
        assert_eq!(f.normalize(&q(1, 2)).unwrap(), q(2, 1));
        assert!(f.normalize(&q(1, 3)).is_err());
        assert_eq!(f.inv(&q(2, 1)).unwrap(), q(2, 1));
        assert!(f.inv(&q(0, 1)).is_err());
    }

    #[test]
    fn integer_units() {
        assert!(Ring::Z.is_unit(&q(-1, 1)));
        assert!(!Ring::Z.is_unit(&q(2, 1)));
        assert!(Ring::Z.normalize(&q(1, 2)).is_err());
        assert_eq!(Ring::Q.inv(&q(2, 1)).unwrap(), q(1, 2));
    }

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("-3").unwrap(), q(-3, 1));
        assert_eq!(parse_scalar("2/4").unwrap(), q(1, 2));
        assert!(parse_scalar("x").is_err());
        assert!(parse_scalar("1/0").is_err());
    }
}
