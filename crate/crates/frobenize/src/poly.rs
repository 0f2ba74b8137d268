//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored ascending (index = degree) with no trailing zero
//! except for the zero polynomial, which is the empty coefficient list.

use crate::arith::divisors;
use crate::error::{Error, Result};
use crate::rat::Rat;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// z - the monomial of degree 1.
    pub fn var() -> Self {
        Poly {
            coeffs: vec![Rat::zero(), Rat::one()],
        }
    }

    pub fn monomial(c: Rat, deg: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial answers None.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| &Rat::from_int(k as i64) * c)
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(&self.coeff(k) + &other.coeff(k));
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn mul_monomial(&self, c: &Rat, deg: usize) -> Poly {
        if self.is_zero() || c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); deg];
        coeffs.extend(self.coeffs.iter().map(|a| a * c));
        Poly::from_coeffs(coeffs)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder; deg rem < deg divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let d = divisor.degree().unwrap();
        let lead_inv = divisor.leading().recip().unwrap();
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < d {
                break;
            }
            let c = &rem.leading() * &lead_inv;
            let k = rd - d;
            quot = quot.add(&Poly::monomial(c.clone(), k));
            rem = rem.sub(&divisor.mul_monomial(&c, k));
        }
        (quot, rem)
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor);
        if !r.is_zero() {
            return Err(Error::Input("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.leading().recip().unwrap();
        self.scale(&inv)
    }

    /// Composition self(z + gamma).
    pub fn shift(&self, gamma: &Rat) -> Poly {
        let lin = Poly::from_coeffs(vec![gamma.clone(), Rat::one()]);
        self.compose(&lin)
    }

    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Coefficient list reversed: z^deg * self(1/z).
    pub fn reverse(&self) -> Poly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Poly::from_coeffs(coeffs)
    }

    /// Multiplicity of the root 0, i.e. the z-adic valuation. Zero poly answers None.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Clears denominators and content: returns primitive integer coefficients
    /// with positive leading coefficient, equal to self up to a rational scalar.
    fn primitive_integer(&self) -> Vec<BigInt> {
        assert!(!self.is_zero());
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        if ints.last().unwrap().is_negative() {
            content = -content;
        }
        for v in &mut ints {
            *v /= &content;
        }
        ints
    }
}

/// All rational roots of a nonzero polynomial, with multiplicity, plus the
/// rational-root-free cofactor. The product of the (z - root) factors times
/// the cofactor reproduces the input exactly.
pub fn rational_roots(p: &Poly) -> Result<(Vec<Rat>, Poly)> {
    if p.is_zero() {
        return Err(Error::Input("rational_roots of the zero polynomial".into()));
    }
    let mut roots: Vec<Rat> = Vec::new();
    let mut rem = p.clone();

    // Strip roots at zero first so the trailing coefficient is nonzero.
    if let Some(k) = rem.order_at_zero() {
        if k > 0 {
            roots.extend(std::iter::repeat_n(Rat::zero(), k));
            rem = Poly::from_coeffs(rem.coeffs()[k..].to_vec());
        }
    }
    if rem.is_constant() {
        return Ok((roots, rem));
    }

    let ints = rem.primitive_integer();
    let c0 = ints.first().unwrap().magnitude().clone();
    let cn = ints.last().unwrap().magnitude().clone();
    let mut num_divs = divisors(&c0);
    let mut den_divs = divisors(&cn);
    num_divs.sort();
    den_divs.sort();

    for a in &num_divs {
        for b in &den_divs {
            if a.gcd(b) != BigUint::one() {
                continue;
            }
            for sgn in [1i64, -1] {
                let cand = Rat::from_bigs(
                    BigInt::from(a.clone()) * BigInt::from(sgn),
                    BigInt::from(b.clone()),
                )?;
                while !rem.is_constant() && rem.eval(&cand).is_zero() {
                    let factor = Poly::from_coeffs(vec![-&cand, Rat::one()]);
                    rem = rem.div_exact(&factor)?;
                    roots.push(cand.clone());
                }
            }
        }
    }
    roots.sort();
    Ok((roots, rem))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign_str, mag) = if c.is_negative() {
                (if first { "-" } else { " - " }, c.abs())
            } else {
                (if first { "" } else { " + " }, c.clone())
            };
            write!(f, "{sign_str}")?;
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if k == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{k}")?;
                }
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
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

    fn poly(cs: &[(i64, i64)]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&(n, d)| r(n, d)).collect())
    }

    #[test]
    fn trailing_zero_invariant() {
        let p = poly(&[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(p.degree(), Some(0));
        assert!(Poly::from_coeffs(vec![Rat::zero()]).is_zero());
    }

    #[test]
    fn division_and_gcd() {
        let a = poly(&[(-1, 1), (0, 1), (1, 1)]); // z^2 - 1
        let b = poly(&[(1, 1), (1, 1)]); // z + 1
        let (q, rem) = a.div_rem(&b);
        assert!(rem.is_zero());
        assert_eq!(q, poly(&[(-1, 1), (1, 1)]));
        assert_eq!(a.gcd(&b), b.monic());
    }

    #[test]
    fn roots_with_multiplicity() {
        // lambda^2 - (5/6) lambda + 1/6 = (l - 1/2)(l - 1/3)
        let p = poly(&[(1, 6), (-5, 6), (1, 1)]);
        let (roots, rem) = rational_roots(&p).unwrap();
        assert_eq!(roots, vec![r(1, 3), r(1, 2)]);
        assert_eq!(rem, Poly::one());

        let p = poly(&[(1, 1), (0, 1), (1, 1)]); // l^2 + 1
        let (roots, rem) = rational_roots(&p).unwrap();
        assert!(roots.is_empty());
        assert_eq!(rem, p);

        let p = Poly::monomial(Rat::one(), 3); // l^3
        let (roots, rem) = rational_roots(&p).unwrap();
        assert_eq!(roots, vec![Rat::zero(), Rat::zero(), Rat::zero()]);
        assert_eq!(rem, Poly::one());
    }

    #[test]
    fn roots_reconstruction() {
        let p = poly(&[(3, 2), (1, 1), (7, 3), (2, 1)]);
        let (roots, rem) = rational_roots(&p).unwrap();
        let mut back = rem;
        for root in roots {
            back = back.mul(&Poly::from_coeffs(vec![-&root, Rat::one()]));
        }
        assert_eq!(back, p);
    }

    #[test]
    fn shift_and_reverse() {
        let p = poly(&[(0, 1), (0, 1), (1, 1)]); // z^2
        assert_eq!(p.shift(&r(1, 1)), poly(&[(1, 1), (2, 1), (1, 1)]));
        let q = poly(&[(1, 1), (2, 1)]); // 2z + 1
        assert_eq!(q.reverse(), poly(&[(2, 1), (1, 1)]));
    }
}
