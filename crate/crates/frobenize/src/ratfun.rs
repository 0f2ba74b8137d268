//! Rational functions over Q(z), stored fully reduced with monic denominator,
//! and the Gauss valuation.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rat::{vp, Rat, Valuation};
use std::fmt;

/// num/den with gcd(num, den) = 1 and den monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Input("zero denominator polynomial".into()));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let lead_inv = den.leading().recip()?;
        Ok(RatFun {
            num: num.scale(&lead_inv),
            den: den.scale(&lead_inv),
        })
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFun {
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatFun {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    /// The monomial z.
    pub fn var() -> Self {
        RatFun::from_poly(Poly::var())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatFun::new(num, den).unwrap()
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }

    pub fn scale(&self, c: &Rat) -> RatFun {
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        if other.is_zero() {
            return Err(Error::Input(
                "division by the zero rational function".into(),
            ));
        }
        RatFun::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> Result<RatFun> {
        RatFun::one().div(self)
    }

    pub fn pow(&self, e: i32) -> Result<RatFun> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = RatFun::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> RatFun {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        RatFun::new(num, self.den.mul(&self.den)).unwrap()
    }

    /// Value at x, or None when x is a pole.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(x) / &d)
    }

    /// True when the function has no pole at x (reduced form, so a denominator
    /// zero is a genuine pole).
    pub fn regular_at(&self, x: &Rat) -> bool {
        !self.den.eval(x).is_zero()
    }

    /// Substitution z -> z + gamma.
    pub fn shift(&self, gamma: &Rat) -> RatFun {
        RatFun::new(self.num.shift(gamma), self.den.shift(gamma)).unwrap()
    }

    /// Substitution z -> 1/z, re-expressed as a rational function of z.
    pub fn subst_inv(&self) -> RatFun {
        if self.is_zero() {
            return RatFun::zero();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        // f(1/z) = z^(dd-dn) * rev(num) / rev(den)
        let mut num = self.num.reverse();
        let mut den = self.den.reverse();
        if dd >= dn {
            num = num.mul_monomial(&Rat::one(), dd - dn);
        } else {
            den = den.mul_monomial(&Rat::one(), dn - dd);
        }
        RatFun::new(num, den).unwrap()
    }

    /// Order of vanishing at x: positive for a zero, negative for a pole.
    /// None for the zero function.
    pub fn order_at(&self, x: &Rat) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let count = |p: &Poly| -> i64 {
            let mut q = p.clone();
            let factor = Poly::from_coeffs(vec![-x, Rat::one()]);
            let mut k = 0;
            loop {
                let (quot, rem) = q.div_rem(&factor);
                if rem.is_zero() {
                    k += 1;
                    q = quot;
                } else {
                    return k;
                }
            }
        };
        Some(count(&self.num) - count(&self.den))
    }
}

/// Gauss valuation: v with |f|_{G,p} = p^{-v}, computed as the minimum p-adic
/// valuation over numerator coefficients minus the same for the denominator.
/// Invariant under scaling numerator and denominator by a common polynomial.
pub fn gauss_valuation(f: &RatFun, p: u64) -> Result<i64> {
    if f.is_zero() {
        return Err(Error::Input("gauss valuation of the zero function".into()));
    }
    let min_val = |poly: &Poly| -> Result<i64> {
        let mut best: Option<i64> = None;
        for c in poly.coeffs() {
            if c.is_zero() {
                continue;
            }
            if let Valuation::Finite(v) = vp(c, p)? {
                best = Some(match best {
                    None => v,
                    Some(b) => b.min(v),
                });
            }
        }
        Ok(best.expect("nonzero polynomial"))
    };
    Ok(min_val(f.num())? - min_val(f.den())?)
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        // A single nonnegative-integer monomial needs no parentheses.
        let simple = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() == 1
            && self.num.leading().is_integer()
            && !self.num.leading().is_negative();
        if simple {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    fn p(cs: &[i64]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&n| Rat::from_int(n)).collect())
    }

    #[test]
    fn reduction_and_monic_den() {
        // (2z^2 - 2) / (4z + 4) = (z - 1)/2 after reduction
        let f = RatFun::new(p(&[-2, 0, 2]), p(&[4, 4])).unwrap();
        assert_eq!(f.num(), &Poly::from_coeffs(vec![r(-1, 2), r(1, 2)]));
        assert_eq!(f.den(), &Poly::one());
    }

    #[test]
    fn gauss_examples() {
        // (1 - 2z)/(z(1 - z)) at p = 5
        let f = RatFun::new(p(&[1, -2]), p(&[0, 1, -1])).unwrap();
        assert_eq!(gauss_valuation(&f, 5).unwrap(), 0);
        // (1/2)/z at p = 2
        let g = RatFun::new(Poly::constant(r(1, 2)), p(&[0, 1])).unwrap();
        assert_eq!(gauss_valuation(&g, 2).unwrap(), -1);
        // 4z + 8 at p = 2
        let h = RatFun::from_poly(p(&[8, 4]));
        assert_eq!(gauss_valuation(&h, 2).unwrap(), 2);
    }

    #[test]
    fn gauss_scale_invariance() {
        let f = RatFun::new(p(&[1, -2]), p(&[0, 1, -1])).unwrap();
        let s = p(&[3, 0, 7]);
        let g = RatFun::new(f.num().mul(&s), f.den().mul(&s)).unwrap();
        assert_eq!(
            gauss_valuation(&f, 5).unwrap(),
            gauss_valuation(&g, 5).unwrap()
        );
    }

    #[test]
    fn substitution_inverse() {
        // f = 1/z; f(1/z) = z
        let f = RatFun::new(Poly::one(), p(&[0, 1])).unwrap();
        assert_eq!(f.subst_inv(), RatFun::from_poly(p(&[0, 1])));
        // f = (1+z)/(1-z): f(1/z) = (z+1)/(z-1)
        let g = RatFun::new(p(&[1, 1]), p(&[1, -1])).unwrap();
        assert_eq!(g.subst_inv(), RatFun::new(p(&[1, 1]), p(&[-1, 1])).unwrap());
        assert_eq!(g.subst_inv().subst_inv(), g);
    }

    #[test]
    fn orders() {
        let f = RatFun::new(p(&[0, 0, 1]), p(&[1, 1])).unwrap(); // z^2/(1+z)
        assert_eq!(f.order_at(&Rat::zero()), Some(2));
        assert_eq!(f.order_at(&r(-1, 1)), Some(-1));
        assert_eq!(f.order_at(&Rat::one()), Some(0));
    }
}
