//! Exact coefficient rings: the integers, the rationals and prime fields.
//!
//! Structure constants of every algebra in this crate are integers, so most
//! arithmetic happens on [`Scalar::Int`]. Integer scalars act on the other
//! rings through the canonical map, which is how a product computed over Z is
//! transported to F_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Integer,
    Rational,
    /// The prime field F_p.
    Prime(u64),
}

impl Ring {
    pub fn zero(self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(self, v: &BigInt) -> Scalar {
        match self {
            Ring::Integer => Scalar::Int(v.clone()),
            Ring::Rational => Scalar::Rat(BigRational::from_integer(v.clone())),
            Ring::Prime(p) => Scalar::Mod { value: reduce_bigint(v, p), p },
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Ring::Prime(p) => p,
            _ => 0,
        }
    }

    /// Parses a coefficient written in decimal (`"-3"`), as a fraction
    /// (`"1/2"`, rational ring only) or as a residue.
    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Malformed(format!("cannot read coefficient {s:?} in ring {self}"));
        match self {
            Ring::Integer => BigInt::from_str(s).map(Scalar::Int).map_err(|_| bad()),
            Ring::Rational => {
                let q = match s.split_once('/') {
                    Some((a, b)) => {
                        let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
                        let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
                        if b.is_zero() {
                            return Err(bad());
                        }
                        BigRational::new(a, b)
                    }
                    None => BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?),
                };
                Ok(Scalar::Rat(q))
            }
            Ring::Prime(_) => {
                let v = BigInt::from_str(s).map_err(|_| bad())?;
                Ok(self.from_bigint(&v))
            }
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integer => write!(f, "Z"),
            Ring::Rational => write!(f, "Q"),
            Ring::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Z" => Ok(Ring::Integer),
            "Q" => Ok(Ring::Rational),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::Malformed(format!("unknown ring {other:?}")))?;
                if !is_prime(p) {
                    return Err(Error::Precondition(format!("{p} is not prime")));
                }
                Ok(Ring::Prime(p))
            }
        }
    }
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

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

fn inverse_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    let (mut base, mut exp, mut acc) = (a as u128 % p as u128, p - 2, 1u128);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        exp >>= 1;
    }
    Some(acc as u64)
}

/// An exact coefficient. No floating point is used anywhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Mod { value: u64, p: u64 },
}

impl Scalar {
    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Int(_) => Ring::Integer,
            Scalar::Rat(_) => Ring::Rational,
            Scalar::Mod { p, .. } => Ring::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_one(),
            Scalar::Rat(v) => v.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    /// Integer value when the scalar is an integer (or an integral rational).
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Int(v) => Some(v.clone()),
            Scalar::Rat(v) if v.is_integer() => Some(v.to_integer()),
            _ => None,
        }
    }

    /// Moves the scalar into `ring`. Rationals only enter Z when integral and
    /// enter F_p when the denominator is invertible.
    pub fn coerce(&self, ring: Ring) -> Result<Scalar> {
        if self.ring() == ring {
            return Ok(self.clone());
        }
        let fail = || Error::ContextMismatch(format!("cannot map {self} from {} into {ring}", self.ring()));
        match (self, ring) {
            (Scalar::Int(v), _) => Ok(ring.from_bigint(v)),
            (Scalar::Rat(v), Ring::Integer) if v.is_integer() => Ok(Scalar::Int(v.to_integer())),
            (Scalar::Rat(v), Ring::Prime(p)) => {
                let num = reduce_bigint(v.numer(), p);
                let den = inverse_mod(reduce_bigint(v.denom(), p), p).ok_or_else(fail)?;
                Ok(Scalar::Mod { value: (num as u128 * den as u128 % p as u128) as u64, p })
            }
            _ => Err(fail()),
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Scalar {
        match self {
            Scalar::Int(v) => Scalar::Int(v * k),
            Scalar::Rat(v) => Scalar::Rat(v * BigRational::from_integer(k.clone())),
            Scalar::Mod { value, p } => {
                let k = reduce_bigint(k, *p);
                Scalar::Mod { value: (*value as u128 * k as u128 % *p as u128) as u64, p: *p }
            }
        }
    }

    fn binary(&self, other: &Scalar, op: fn(&BigRational, &BigRational) -> BigRational, mop: fn(u128, u128, u128) -> u128) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => {
                let r = op(&BigRational::from_integer(a.clone()), &BigRational::from_integer(b.clone()));
                Scalar::Int(r.to_integer())
            }
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) => {
                assert_eq!(p, q, "mixing residues modulo different primes");
                Scalar::Mod { value: mop(*a as u128, *b as u128, *p as u128) as u64, p: *p }
            }
            (Scalar::Mod { p, .. }, other) | (other, Scalar::Mod { p, .. }) => {
                let lhs = self.coerce(Ring::Prime(*p)).expect("coefficient maps to F_p");
                let rhs = other.coerce(Ring::Prime(*p)).expect("coefficient maps to F_p");
                lhs.binary(&rhs, op, mop)
            }
            _ => Scalar::Rat(op(&self.to_rational(), &other.to_rational())),
        }
    }

    fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Int(v) => BigRational::from_integer(v.clone()),
            Scalar::Rat(v) => v.clone(),
            Scalar::Mod { value, .. } => BigRational::from_integer(BigInt::from(*value)),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if let (Scalar::Int(a), Scalar::Int(b)) = (self, rhs) {
            return Scalar::Int(a + b);
        }
        self.binary(rhs, |a, b| a + b, |a, b, p| (a + b) % p)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if let (Scalar::Int(a), Scalar::Int(b)) = (self, rhs) {
            return Scalar::Int(a * b);
        }
        self.binary(rhs, |a, b| a * b, |a, b, p| a * b % p)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Int(v) => Scalar::Int(-v),
            Scalar::Rat(v) => Scalar::Rat(-v),
            Scalar::Mod { value, p } => Scalar::Mod { value: (p - value) % p, p: *p },
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Rat(v) if v.is_integer() => write!(f, "{}", v.numer()),
            Scalar::Rat(v) => write!(f, "{}/{}", v.numer(), v.denom()),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Scalar {
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_negative(),
            Scalar::Rat(v) => v.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_and_promotion() {
        let f5 = Ring::Prime(5);
        assert_eq!(f5.from_int(-1), Scalar::Mod { value: 4, p: 5 });
        let two = Ring::Integer.from_int(2);
        let x = &f5.from_int(3) * &two;
        assert_eq!(x, f5.from_int(1));
        let half = Ring::Rational.parse_scalar("1/2").unwrap();
        assert_eq!((&half + &half), Ring::Rational.one());
        assert_eq!(half.coerce(Ring::Prime(3)).unwrap(), Ring::Prime(3).from_int(2));
        assert!(half.coerce(Ring::Integer).is_err());
    }

    #[test]
    fn ring_labels_round_trip() {
        for ring in [Ring::Integer, Ring::Rational, Ring::Prime(7)] {
            assert_eq!(ring.to_string().parse::<Ring>().unwrap(), ring);
        }
        assert!("Fp:6".parse::<Ring>().is_err());
    }
}
