//! Parser for the operator expression language.
//!
//! ```text
//! operator := term (('+' | '-') term)*
//! term     := [coeff '*']? deriv | coeff
//! deriv    := ('D' | 'T') ['^' posint]      # D = d/dz, T = z*d/dz
//! coeff    := rational function in z using integers, z, + - * / ^ ( )
//! ```
//!
//! One basis per expression, whitespace insignificant. Terms with equal
//! derivative power are combined, so "D + D" parses as "2*D".

use crate::error::{Error, Result};
use crate::operator::{Basis, DiffOp};
use crate::rat::Rat;
use crate::ratfun::RatFun;
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Z,
    DerivD,
    DerivT,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LPar,
    RPar,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().unwrap();
                toks.push((Tok::Int(n), start));
            }
            'z' => {
                toks.push((Tok::Z, i));
                i += 1;
            }
            'D' => {
                toks.push((Tok::DerivD, i));
                i += 1;
            }
            'T' => {
                toks.push((Tok::DerivT, i));
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LPar, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RPar, i));
                i += 1;
            }
            _ => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
}

/// One parsed top-level term: signed coefficient times an optional derivative
/// power, with the byte position of the derivative symbol.
struct Term {
    coeff: RatFun,
    deriv: Option<(Basis, u32, usize)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(t, _)| t.clone());
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let pos = self.pos();
        match self.next() {
            Some(t) if t == tok => Ok(()),
            _ => Err(Error::Parse {
                pos,
                msg: format!("expected {what}"),
            }),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    /// Unsigned integer literal as u32.
    fn parse_uint(&mut self, what: &str) -> Result<u32> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Int(n)) => u32::try_from(&n).map_err(|_| Error::Parse {
                pos,
                msg: format!("{what} out of range"),
            }),
            _ => Err(Error::Parse {
                pos,
                msg: format!("expected {what}"),
            }),
        }
    }

    /// coeff := full-precedence rational-function expression (no D/T inside).
    fn parse_coeff_expr(&mut self) -> Result<RatFun> {
        let mut acc = self.parse_coeff_product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.parse_coeff_product()?);
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.sub(&self.parse_coeff_product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_coeff_product(&mut self) -> Result<RatFun> {
        let mut acc = self.parse_coeff_unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc.mul(&self.parse_coeff_unary()?);
                }
                Some(Tok::Slash) => {
                    self.next();
                    let pos = self.pos();
                    let rhs = self.parse_coeff_unary()?;
                    acc = acc.div(&rhs).map_err(|_| Error::Parse {
                        pos,
                        msg: "division by zero".into(),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_coeff_unary(&mut self) -> Result<RatFun> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                Ok(self.parse_coeff_unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.next();
                self.parse_coeff_unary()
            }
            _ => self.parse_coeff_power(),
        }
    }

    fn parse_coeff_power(&mut self) -> Result<RatFun> {
        let base = self.parse_coeff_atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            let e = self.parse_uint("nonnegative integer exponent")?;
            if e > 4096 {
                return self.err("exponent too large");
            }
            return base.pow(e as i32).map_err(|e| Error::Parse {
                pos: self.pos(),
                msg: e.to_string(),
            });
        }
        Ok(base)
    }

    fn parse_coeff_atom(&mut self) -> Result<RatFun> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Int(n)) => Ok(RatFun::constant(Rat::from_bigint(n))),
            Some(Tok::Z) => Ok(RatFun::var()),
            Some(Tok::LPar) => {
                let inner = self.parse_coeff_expr()?;
                self.expect(Tok::RPar, "')'")?;
                Ok(inner)
            }
            Some(Tok::DerivD) | Some(Tok::DerivT) => Err(Error::Parse {
                pos,
                msg: "derivative symbol not allowed inside a coefficient".into(),
            }),
            _ => Err(Error::Parse {
                pos,
                msg: "expected a coefficient atom".into(),
            }),
        }
    }

    /// deriv := ('D' | 'T') ['^' posint]
    fn parse_deriv(&mut self) -> Result<(Basis, u32)> {
        let basis = match self.next() {
            Some(Tok::DerivD) => Basis::Ddz,
            Some(Tok::DerivT) => Basis::Delta,
            _ => unreachable!("caller checked"),
        };
        let mut power = 1u32;
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            let pos = self.pos();
            power = self.parse_uint("positive integer derivative power")?;
            if power == 0 {
                return Err(Error::Parse {
                    pos,
                    msg: "derivative power must be >= 1".into(),
                });
            }
            if power > 64 {
                return Err(Error::Parse {
                    pos,
                    msg: "derivative power too large".into(),
                });
            }
        }
        Ok((basis, power))
    }

    /// term := [coeff '*']? deriv | coeff, parsed as a flat product chain in
    /// which the derivative symbol may only be the final factor.
    fn parse_term(&mut self) -> Result<Term> {
        let mut coeff = RatFun::one();
        let mut saw_factor = false;
        let mut deriv: Option<(Basis, u32, usize)> = None;
        let mut dividing = false;
        loop {
            if matches!(self.peek(), Some(Tok::DerivD) | Some(Tok::DerivT)) {
                if dividing {
                    return self.err("derivative symbol cannot appear in a denominator");
                }
                let dpos = self.pos();
                let (b, pw) = self.parse_deriv()?;
                deriv = Some((b, pw, dpos));
                // Nothing may follow the derivative within the term.
                if matches!(
                    self.peek(),
                    Some(Tok::Star) | Some(Tok::Slash) | Some(Tok::Caret)
                ) {
                    return self.err("the derivative symbol must be the last factor of a term");
                }
                break;
            }
            let pos = self.pos();
            let f = self.parse_coeff_power()?;
            coeff = if dividing {
                coeff.div(&f).map_err(|_| Error::Parse {
                    pos,
                    msg: "division by zero".into(),
                })?
            } else {
                coeff.mul(&f)
            };
            saw_factor = true;
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    dividing = false;
                }
                Some(Tok::Slash) => {
                    self.next();
                    dividing = true;
                }
                _ => break,
            }
        }
        if !saw_factor && deriv.is_none() {
            return self.err("expected a term");
        }
        Ok(Term { coeff, deriv })
    }
}

/// Parses an operator expression into an exact DiffOp. Terms of equal
/// derivative power are added; the written top order must survive with a
/// nonzero coefficient.
pub fn parse_operator(text: &str) -> Result<DiffOp> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        end: text.len(),
    };

    let mut terms: Vec<Term> = Vec::new();
    let mut sign = Rat::one();
    if p.peek() == Some(&Tok::Minus) {
        p.next();
        sign = Rat::from_int(-1);
    } else if p.peek() == Some(&Tok::Plus) {
        p.next();
    }
    loop {
        let mut t = p.parse_term()?;
        t.coeff = t.coeff.scale(&sign);
        terms.push(t);
        match p.peek() {
            Some(Tok::Plus) => {
                p.next();
                sign = Rat::one();
            }
            Some(Tok::Minus) => {
                p.next();
                sign = Rat::from_int(-1);
            }
            None => break,
            _ => return p.err("expected '+' or '-' between terms"),
        }
    }

    let mut basis: Option<Basis> = None;
    let mut written_order = 0usize;
    for t in &terms {
        if let Some((b, pw, pos)) = t.deriv {
            match basis {
                None => basis = Some(b),
                Some(b0) if b0 != b => return Err(Error::MixedBasis { pos }),
                _ => {}
            }
            written_order = written_order.max(pw as usize);
        }
    }
    let basis = basis.unwrap_or(Basis::Ddz);

    let mut coeffs = vec![RatFun::zero(); written_order + 1];
    for t in terms {
        let pw = t.deriv.map(|(_, pw, _)| pw as usize).unwrap_or(0);
        coeffs[pw] = coeffs[pw].add(&t.coeff);
    }
    if coeffs[written_order].is_zero() {
        if written_order == 0 || coeffs.iter().all(|c| c.is_zero()) {
            if written_order > 0 {
                return Err(Error::ZeroLeadingCoeff {
                    order: written_order,
                });
            }
            return Err(Error::ZeroOperator);
        }
        return Err(Error::ZeroLeadingCoeff {
            order: written_order,
        });
    }
    DiffOp::new(basis, coeffs)
}

/// Parses a standalone rational function in z (the coefficient sublanguage).
pub fn parse_ratfun(text: &str) -> Result<RatFun> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        end: text.len(),
    };
    let f = p.parse_coeff_expr()?;
    if p.peek().is_some() {
        return p.err("trailing input after expression");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    #[test]
    fn parses_gauss_operator() {
        let op = parse_operator("D^2 + ((1-2*z)/(z*(1-z)))*D - 1/(4*z*(1-z))").unwrap();
        assert_eq!(op.order(), 2);
        assert_eq!(op.basis(), Basis::Ddz);
        assert!(op.is_monic());
        // a_1 = (1-2z)/(z - z^2) normalized with monic denominator: (2z-1)/(z^2-z)
        let a1 = op.coeffs()[1].clone();
        assert_eq!(a1.eval(&r(1, 3)).unwrap(), r(3, 2));
        let a0 = op.coeffs()[0].clone();
        assert_eq!(a0.eval(&r(1, 2)).unwrap(), -Rat::one());
    }

    #[test]
    fn parses_delta_symbol() {
        let op = parse_operator("T").unwrap();
        assert_eq!(op.basis(), Basis::Delta);
        assert_eq!(op.order(), 1);
        assert_eq!(op.coeffs()[1], RatFun::one());
    }

    #[test]
    fn combines_like_terms() {
        let op = parse_operator("D + D").unwrap();
        assert_eq!(op.order(), 1);
        assert_eq!(op.coeffs()[1], RatFun::constant(r(2, 1)));
    }

    #[test]
    fn rejects_mixed_bases() {
        assert!(matches!(
            parse_operator("D + T"),
            Err(Error::MixedBasis { .. })
        ));
    }

    #[test]
    fn rejects_cancelled_leading_coefficient() {
        assert!(matches!(
            parse_operator("D^2 - D^2 + D"),
            Err(Error::ZeroLeadingCoeff { order: 2 })
        ));
        assert!(matches!(
            parse_operator("D - D"),
            Err(Error::ZeroLeadingCoeff { order: 1 })
        ));
        assert!(matches!(parse_operator("1 - 1"), Err(Error::ZeroOperator)));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_operator("D^2 + )z") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(parse_operator("2*(D)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("D*2"), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("1/D"), Err(Error::Parse { .. })));
    }

    #[test]
    fn leading_minus_and_constants() {
        let op = parse_operator("-D + 1/2").unwrap();
        assert_eq!(op.coeffs()[1], RatFun::constant(r(-1, 1)));
        assert_eq!(op.coeffs()[0], RatFun::constant(r(1, 2)));
    }

    #[test]
    fn parses_ratfun_language() {
        let f = parse_ratfun("(1-2*z)/(z*(1-z))").unwrap();
        assert_eq!(f.eval(&r(1, 3)).unwrap(), r(3, 2));
        assert!(parse_ratfun("z*(").is_err());
        assert!(parse_ratfun("D").is_err());
    }
}
