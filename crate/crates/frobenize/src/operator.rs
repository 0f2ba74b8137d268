//! Differential operators over Q(z) in the d/dz and delta = z*d/dz bases:
//! basis conversion, variable inversion, singular points, Fuchs criterion,
//! indicial polynomials, exponents, companion matrices.

use crate::error::{Error, Result};
use crate::poly::{rational_roots, Poly};
use crate::rat::Rat;
use crate::ratfun::RatFun;
use std::fmt;

/// Which derivation the coefficient list refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// d/dz, written `D` in the expression language.
    Ddz,
    /// delta = z * d/dz, written `T`.
    Delta,
}

/// A point of P^1(Q) where an operator may be singular.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SingularPoint {
    Finite(Rat),
    Infinity,
}

impl SingularPoint {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            SingularPoint::Finite(x) => Some(x),
            SingularPoint::Infinity => None,
        }
    }
}

impl PartialOrd for SingularPoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SingularPoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use SingularPoint::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinity) => std::cmp::Ordering::Less,
            (Infinity, Finite(_)) => std::cmp::Ordering::Greater,
            (Infinity, Infinity) => std::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularPoint::Finite(x) => write!(f, "{x}"),
            SingularPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Exponent multiset of an operator at one singular (or ordinary) point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentReport {
    pub point: SingularPoint,
    /// Sorted ascending, with multiplicity.
    pub exponents: Vec<Rat>,
    pub regular: bool,
}

/// Per-point regularity data from the Fuchs test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuchsReport {
    pub fuchsian: bool,
    /// (singular point, regular?) for every singular point.
    pub points: Vec<(SingularPoint, bool)>,
}

impl FuchsReport {
    pub fn offending(&self) -> Vec<String> {
        self.points
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(pt, _)| pt.to_string())
            .collect()
    }
}

/// A linear differential operator sum coeffs[i] * ∂^i with nonzero leading
/// coefficient, ∂ being the basis derivation.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    basis: Basis,
    coeffs: Vec<RatFun>,
}

/// Signed Stirling numbers of the first kind s[j][k], 0 <= k <= j <= n:
/// delta(delta-1)...(delta-j+1) = sum_k s[j][k] delta^k, equivalently
/// d^j/dz^j = z^{-j} * sum_k s[j][k] delta^k.
fn stirling_first(n: usize) -> Vec<Vec<i128>> {
    let mut s = vec![vec![0i128; n + 1]; n + 1];
    s[0][0] = 1;
    for j in 0..n {
        for k in 0..=j {
            let v = s[j][k];
            if v == 0 {
                continue;
            }
            s[j + 1][k + 1] += v;
            s[j + 1][k] -= (j as i128) * v;
        }
    }
    s
}

/// Stirling numbers of the second kind S[k][j]:
/// delta^k = sum_j S[k][j] z^j d^j/dz^j.
fn stirling_second(n: usize) -> Vec<Vec<i128>> {
    let mut s = vec![vec![0i128; n + 1]; n + 1];
    s[0][0] = 1;
    for k in 0..n {
        for j in 0..=k {
            let v = s[k][j];
            if v == 0 {
                continue;
            }
            s[k + 1][j + 1] += v;
            s[k + 1][j] += (j as i128) * v;
        }
    }
    s
}

/// Polynomials w[j][k] with (-z^2 d/dz)^j = sum_k w[j][k](z) d^k/dz^k,
/// the change of derivation under z -> 1/z.
fn inversion_weights(n: usize) -> Vec<Vec<Poly>> {
    let mut w = vec![vec![Poly::zero(); n + 1]; n + 1];
    w[0][0] = Poly::one();
    let neg_z2 = Poly::monomial(Rat::from_int(-1), 2);
    for j in 0..n {
        for k in 0..=j {
            if w[j][k].is_zero() {
                continue;
            }
            let bump = neg_z2.mul(&w[j][k].derivative());
            w[j + 1][k] = w[j + 1][k].add(&bump);
            let carry = neg_z2.mul(&w[j][k]);
            w[j + 1][k + 1] = w[j + 1][k + 1].add(&carry);
        }
    }
    w
}

impl DiffOp {
    /// Builds an operator, trimming trailing zero coefficients. Errors if all
    /// coefficients vanish.
    pub fn new(basis: Basis, mut coeffs: Vec<RatFun>) -> Result<Self> {
        while matches!(coeffs.last(), Some(c) if c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroOperator);
        }
        Ok(DiffOp { basis, coeffs })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn leading(&self) -> &RatFun {
        self.coeffs.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == &RatFun::one()
    }

    pub fn monic(&self) -> DiffOp {
        if self.is_monic() {
            return self.clone();
        }
        let lead = self.leading().clone();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.div(&lead).expect("leading coefficient is nonzero"))
            .collect();
        DiffOp {
            basis: self.basis,
            coeffs,
        }
    }

    /// The operator in the d/dz basis, monic.
    pub fn ddz_monic(&self) -> Result<DiffOp> {
        match self.basis {
            Basis::Ddz => Ok(self.monic()),
            Basis::Delta => Ok(self.to_ddz()?.monic()),
        }
    }

    /// Monic local delta-form coefficients at gamma: the list [q_n, ..., q_1, 1]
    /// indexed by delta-power, i.e. result[k] multiplies delta^k after the
    /// substitution z -> z + gamma. Requires the d/dz basis.
    pub fn delta_q(&self, gamma: &Rat) -> Result<Vec<RatFun>> {
        if self.basis != Basis::Ddz {
            return Err(Error::Input(
                "delta-form conversion expects the d/dz basis".into(),
            ));
        }
        let op = self.monic();
        let n = op.order();
        let s = stirling_first(n);
        let mut q = vec![RatFun::zero(); n + 1];
        for j in 0..=n {
            let a = op.coeffs[j].shift(gamma);
            for (k, qk) in q.iter_mut().enumerate().take(j + 1) {
                if s[j][k] == 0 {
                    continue;
                }
                let weight = Poly::monomial(Rat::from_bigint(s[j][k].into()), n - j);
                *qk = qk.add(&a.mul(&RatFun::from_poly(weight)));
            }
        }
        Ok(q)
    }

    /// Rewrites a monic d/dz operator in the local delta basis at gamma
    /// (variable shifted so gamma maps to 0). The result is the same operator,
    /// so its leading coefficient is z^{-n}, not 1.
    pub fn to_delta_at(&self, gamma: &Rat) -> Result<DiffOp> {
        let n = self.order();
        let q = self.delta_q(gamma)?;
        let zn = RatFun::new(Poly::one(), Poly::monomial(Rat::one(), n))?;
        let coeffs = q.iter().map(|c| c.mul(&zn)).collect();
        DiffOp::new(Basis::Delta, coeffs)
    }

    /// Rewrites a delta-basis operator in the d/dz basis (exact, not monic).
    pub fn to_ddz(&self) -> Result<DiffOp> {
        if self.basis != Basis::Delta {
            return Err(Error::Input("to_ddz expects the delta basis".into()));
        }
        let n = self.order();
        let s = stirling_second(n);
        let mut out = vec![RatFun::zero(); n + 1];
        for k in 0..=n {
            if self.coeffs[k].is_zero() {
                continue;
            }
            for (j, oj) in out.iter_mut().enumerate().take(k + 1) {
                if s[k][j] == 0 {
                    continue;
                }
                let weight = Poly::monomial(Rat::from_bigint(s[k][j].into()), j);
                *oj = oj.add(&self.coeffs[k].mul(&RatFun::from_poly(weight)));
            }
        }
        DiffOp::new(Basis::Ddz, out)
    }

    /// The operator obtained under z -> 1/z, normalized monic. Exponents of
    /// self at infinity equal exponents of the result at 0.
    pub fn invert_variable(&self) -> Result<DiffOp> {
        if self.basis != Basis::Ddz {
            return Err(Error::Input(
                "invert_variable expects the d/dz basis".into(),
            ));
        }
        let op = self.monic();
        let n = op.order();
        let w = inversion_weights(n);
        let mut out = vec![RatFun::zero(); n + 1];
        for j in 0..=n {
            let a = op.coeffs[j].subst_inv();
            if a.is_zero() {
                continue;
            }
            for (k, ok) in out.iter_mut().enumerate().take(j + 1) {
                if w[j][k].is_zero() {
                    continue;
                }
                *ok = ok.add(&a.mul(&RatFun::from_poly(w[j][k].clone())));
            }
        }
        Ok(DiffOp::new(Basis::Ddz, out)?.monic())
    }

    /// Finite singular points (poles of the monic coefficients) plus infinity
    /// when 0 is singular for the inverted operator. Errors with SplitFailure
    /// when a coefficient denominator has an irrational root.
    pub fn singular_points(&self) -> Result<Vec<SingularPoint>> {
        let op = self.ddz_monic()?;
        let n = op.order();
        let mut finite: Vec<Rat> = Vec::new();
        for i in 0..n {
            let den = op.coeffs[i].den();
            if den.is_constant() {
                continue;
            }
            let (roots, rem) = rational_roots(den)?;
            if !rem.is_constant() {
                return Err(Error::SplitFailure {
                    context: format!("denominator of coefficient of D^{i}"),
                    remainder: rem.to_string(),
                });
            }
            for r in roots {
                if !finite.contains(&r) {
                    finite.push(r);
                }
            }
        }
        finite.sort();
        let mut points: Vec<SingularPoint> =
            finite.into_iter().map(SingularPoint::Finite).collect();
        let inverted = op.invert_variable()?;
        let zero = Rat::zero();
        if (0..inverted.order()).any(|i| !inverted.coeffs[i].regular_at(&zero)) {
            points.push(SingularPoint::Infinity);
        }
        Ok(points)
    }

    /// Fuchs test: at every finite singular point the local delta-form
    /// coefficients must be pole-free at 0, and likewise at 0 after inversion.
    pub fn is_fuchsian(&self) -> Result<FuchsReport> {
        let op = self.ddz_monic()?;
        let points = op.singular_points()?;
        let zero = Rat::zero();
        let mut report = Vec::new();
        let mut all = true;
        for pt in &points {
            let regular = match pt {
                SingularPoint::Finite(gamma) => {
                    op.delta_q(gamma)?.iter().all(|q| q.regular_at(&zero))
                }
                SingularPoint::Infinity => op
                    .invert_variable()?
                    .delta_q(&zero)?
                    .iter()
                    .all(|q| q.regular_at(&zero)),
            };
            all &= regular;
            report.push((pt.clone(), regular));
        }
        Ok(FuchsReport {
            fuchsian: all,
            points: report,
        })
    }

    /// The degree-n indicial polynomial at a regular singular or ordinary
    /// point. For infinity it is computed through invert_variable.
    pub fn indicial_polynomial(&self, pt: &SingularPoint) -> Result<Poly> {
        let op = self.ddz_monic()?;
        match pt {
            SingularPoint::Infinity => op.invert_variable()?.indicial_at_finite(&Rat::zero()),
            SingularPoint::Finite(gamma) => op.indicial_at_finite(gamma),
        }
    }

    fn indicial_at_finite(&self, gamma: &Rat) -> Result<Poly> {
        let q = self.delta_q(gamma)?;
        let zero = Rat::zero();
        let mut coeffs = Vec::with_capacity(q.len());
        for qk in &q {
            match qk.eval(&zero) {
                Some(v) => coeffs.push(v),
                None => {
                    return Err(Error::IrregularPoint {
                        point: gamma.to_string(),
                    });
                }
            }
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    /// Exponents at a point: the rational roots of the indicial polynomial.
    /// SplitFailure if an indicial root is irrational.
    pub fn exponents(&self, pt: &SingularPoint) -> Result<ExponentReport> {
        let indicial = self.indicial_polynomial(pt)?;
        let (roots, rem) = rational_roots(&indicial)?;
        if !rem.is_constant() {
            return Err(Error::SplitFailure {
                context: format!("indicial polynomial at {pt}"),
                remainder: rem.to_string(),
            });
        }
        Ok(ExponentReport {
            point: pt.clone(),
            exponents: roots,
            regular: true,
        })
    }

    /// Companion matrix of a monic d/dz operator: subdiagonal identity with
    /// last row (-a_n, ..., -a_1).
    pub fn companion_matrix(&self) -> Result<Vec<Vec<RatFun>>> {
        let op = self.ddz_monic()?;
        let n = op.order();
        if n == 0 {
            return Err(Error::Input(
                "companion matrix of an order-0 operator".into(),
            ));
        }
        let mut m = vec![vec![RatFun::zero(); n]; n];
        for i in 0..n.saturating_sub(1) {
            m[i][i + 1] = RatFun::one();
        }
        for j in 0..n {
            m[n - 1][j] = op.coeffs[j].neg();
        }
        Ok(m)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.basis {
            Basis::Ddz => "D",
            Basis::Delta => "T",
        };
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            let one = c == &RatFun::one();
            match (i, one) {
                (0, _) => write!(f, "({c})")?,
                (1, true) => write!(f, "{sym}")?,
                (1, false) => write!(f, "({c})*{sym}")?,
                (_, true) => write!(f, "{sym}^{i}")?,
                (_, false) => write!(f, "({c})*{sym}^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
