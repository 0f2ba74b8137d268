//! Exact rational numbers and p-adic valuations.
//!
//! `Rat` is always stored reduced: gcd(|num|, den) = 1, den >= 1,
//! canonical zero is 0/1. These invariants come from the backing
//! `BigRational`, which normalizes on construction.

use crate::arith::check_prime;
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// An exact rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// num/den, reduced. Errors on a zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Input("zero denominator".into()));
        }
        Ok(Rat(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_bigs(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Input("zero denominator".into()));
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::Input("division by zero".into()));
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn pow(&self, e: i32) -> Rat {
        Rat(self.0.pow(e))
    }

    /// Fractional part in [0, 1): x - floor(x).
    pub fn mod_one(&self) -> Rat {
        Rat(&self.0 - self.0.floor())
    }

    /// Denominator as u64 when it fits.
    pub fn denom_u64(&self) -> Option<u64> {
        self.denom().to_u64()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// Residue of a p-integral rational mod p: num * den^{-1} in [0, p).
    pub fn residue_mod(&self, p: u64) -> Result<u64> {
        let pb = BigInt::from(p);
        let den = (self.denom() % &pb + &pb) % &pb;
        let den = den.to_u64().unwrap();
        if den == 0 {
            return Err(Error::Input(format!(
                "{self} has negative {p}-adic valuation"
            )));
        }
        let num = ((self.numer() % &pb + &pb) % &pb).to_u64().unwrap();
        let inv = crate::fp::inv_mod(den, p);
        Ok(((num as u128 * inv as u128) % p as u128) as u64)
    }
}

/// A p-adic valuation: finite, or +infinity for the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_nonnegative(&self) -> bool {
        match self {
            Valuation::Finite(v) => *v >= 0,
            Valuation::Infinite => true,
        }
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

fn int_val(mut n: BigUint, p: u64) -> i64 {
    let p = BigUint::from(p);
    let mut v = 0i64;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// The p-adic valuation v_p(x), with |x|_p = p^{-v_p(x)}.
pub fn vp(x: &Rat, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let vn = int_val(x.numer().magnitude().clone(), p);
    let vd = int_val(x.denom().magnitude().clone(), p);
    Ok(Valuation::Finite(vn - vd))
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Parses `a` or `a/b` with optional leading sign.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |m: &str| Error::Input(format!("bad rational '{s}': {m}"));
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s).map_err(|_| bad("not an integer"))?;
                Ok(Rat::from_bigint(n))
            }
            Some((a, b)) => {
                let n = BigInt::from_str(a.trim()).map_err(|_| bad("bad numerator"))?;
                let d = BigInt::from_str(b.trim()).map_err(|_| bad("bad denominator"))?;
                if d.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(Rat(BigRational::new(n, d)))
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rat(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rat> for &'a Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

/// Sign of the numerator: -1, 0, or 1.
pub fn sign(x: &Rat) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
