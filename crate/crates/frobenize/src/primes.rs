//! Admissible prime sets for strong Frobenius structures, and the associated
//! uniform and per-prime minimal periods.
//!
//! For an eligible operator (Fuchsian, rational singular points and exponents)
//! a prime p is admitted when every element of the ambient set is a p-adic
//! unit and every companion-matrix entry has nonnegative Gauss valuation.

use crate::arith::{check_prime, euler_phi, multiplicative_order, primes_up_to};
use crate::error::{Error, Result};
use crate::operator::DiffOp;
use crate::rat::{vp, Rat, Valuation};
use crate::ratfun::{gauss_valuation, RatFun};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use std::fmt;

/// The finite set of rationals whose p-adic unit condition defines the
/// admissible primes: nonzero singular points, points shifted by m,
/// pairwise differences, and exponent denominators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientSet {
    /// Nonzero, deduplicated, sorted.
    pub elements: Vec<Rat>,
    /// Shift used for the gamma + m entries: the smallest positive integer
    /// with -m not a finite singular point.
    pub m_shift: u64,
}

/// Why a prime was excluded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExclusionReason {
    /// An ambient element has nonzero p-adic valuation.
    AmbientNotUnit(Rat),
    /// A companion entry (coefficient index i, i.e. -a_{n-i}) has negative
    /// Gauss valuation.
    GaussNorm(usize),
    /// Excluded by the family theorem's blanket small-prime condition.
    ExcludedSmall,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExclusionReason::AmbientNotUnit(u) => write!(f, "ambient-not-unit({u})"),
            ExclusionReason::GaussNorm(i) => write!(f, "gauss-norm(entry {i})"),
            ExclusionReason::ExcludedSmall => write!(f, "excluded-small"),
        }
    }
}

/// Per-prime admissibility verdict with both periods when admitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeVerdict {
    pub p: u64,
    pub in_s: bool,
    pub reasons: Vec<ExclusionReason>,
    /// Uniform period: phi(d) for the hypergeometric family, the product of
    /// the unit-group orders of the exponent denominators for general
    /// operators. Independent of p.
    pub h_uniform: Option<BigUint>,
    /// Smallest h with p^h * e = e mod Z for every exponent e.
    pub h_min: Option<u64>,
}

/// Everything the per-prime tests need, computed once per operator.
#[derive(Clone, Debug)]
pub struct OperatorPrimeData {
    pub ambient: AmbientSet,
    /// Last companion row entries -a_n, ..., -a_1 (the only nonconstant ones).
    pub companion_row: Vec<RatFun>,
    /// Exponent denominators with multiplicity, over all singular points.
    pub exponent_denoms: Vec<u64>,
    /// lcm of the exponent denominators.
    pub d_lcm: u64,
    /// Uniform period for general operators: product of phi(b) over all
    /// exponent denominators b.
    pub l_uniform: BigUint,
}

fn exponent_denominator(e: &Rat) -> Result<u64> {
    e.denom_u64()
        .ok_or_else(|| Error::Input(format!("exponent denominator of {e} exceeds u64")))
}

/// Checks eligibility (Fuchsian, rational data) and gathers the ambient set,
/// companion entries, and exponent denominators.
pub fn analyze_operator_primes(op: &DiffOp) -> Result<OperatorPrimeData> {
    let op = op.ddz_monic()?;
    let fuchs = op.is_fuchsian()?;
    if !fuchs.fuchsian {
        return Err(Error::NotFuchsian {
            points: fuchs.offending(),
        });
    }
    let points = op.singular_points()?;
    let finite: Vec<Rat> = points.iter().filter_map(|p| p.finite().cloned()).collect();

    // Smallest positive m with -m not a finite singular point.
    let mut m = 1u64;
    loop {
        let neg_m = Rat::from_int(-(m as i64));
        if !finite.contains(&neg_m) {
            break;
        }
        m += 1;
    }

    let mut elements: Vec<Rat> = Vec::new();
    let push = |x: Rat, elements: &mut Vec<Rat>| {
        if !x.is_zero() && !elements.contains(&x) {
            elements.push(x);
        }
    };
    for gamma in &finite {
        push(gamma.clone(), &mut elements);
        push(gamma + &Rat::from_int(m as i64), &mut elements);
    }
    for (i, gi) in finite.iter().enumerate() {
        for (j, gj) in finite.iter().enumerate() {
            if i != j {
                push(gi - gj, &mut elements);
            }
        }
    }

    let mut exponent_denoms: Vec<u64> = Vec::new();
    for pt in &points {
        let rep = op.exponents(pt)?;
        for e in &rep.exponents {
            let b = exponent_denominator(e)?;
            exponent_denoms.push(b);
            push(Rat::from_int(b as i64), &mut elements);
        }
    }
    elements.sort();

    let mut d_lcm = 1u64;
    let mut l_uniform = BigUint::one();
    for &b in &exponent_denoms {
        d_lcm = d_lcm.lcm(&b);
        l_uniform *= BigUint::from(euler_phi(b));
    }

    let companion = op.companion_matrix()?;
    let companion_row = companion.last().cloned().unwrap_or_default();

    Ok(OperatorPrimeData {
        ambient: AmbientSet {
            elements,
            m_shift: m,
        },
        companion_row,
        exponent_denoms,
        d_lcm,
        l_uniform,
    })
}

/// Verdict for one prime against the general (ambient set + Gauss norm) test.
pub fn prime_verdict(data: &OperatorPrimeData, p: u64) -> Result<PrimeVerdict> {
    check_prime(p)?;
    let mut reasons = Vec::new();
    for u in &data.ambient.elements {
        if vp(u, p)? != Valuation::Finite(0) {
            reasons.push(ExclusionReason::AmbientNotUnit(u.clone()));
        }
    }
    for (i, entry) in data.companion_row.iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        if gauss_valuation(entry, p)? < 0 {
            reasons.push(ExclusionReason::GaussNorm(i));
        }
    }
    reasons.dedup();
    let in_s = reasons.is_empty();
    let (h_uniform, h_min) = if in_s {
        (
            Some(data.l_uniform.clone()),
            Some(multiplicative_order(p, data.d_lcm)?),
        )
    } else {
        (None, None)
    };
    Ok(PrimeVerdict {
        p,
        in_s,
        reasons,
        h_uniform,
        h_min,
    })
}

/// Verdicts for every prime up to `bound`, ascending.
pub fn prime_set(data: &OperatorPrimeData, bound: u64) -> Result<Vec<PrimeVerdict>> {
    primes_up_to(bound)
        .into_iter()
        .map(|p| prime_verdict(data, p))
        .collect()
}

/// lcm of the parameter denominators d_{alpha,beta}.
pub fn parameter_lcm(alpha: &[Rat], beta: &[Rat]) -> Result<u64> {
    let mut d = 1u64;
    for x in alpha.iter().chain(beta) {
        d = d.lcm(&exponent_denominator(x)?);
    }
    Ok(d)
}

/// The hypergeometric family shortcut: p admitted iff p != 2 and every
/// parameter is a p-adic integer. Takes the full n-tuple of betas.
pub fn hypergeometric_prime_verdict(alpha: &[Rat], beta: &[Rat], p: u64) -> Result<PrimeVerdict> {
    check_prime(p)?;
    let mut reasons = Vec::new();
    if p == 2 {
        reasons.push(ExclusionReason::ExcludedSmall);
    }
    for x in alpha.iter().chain(beta) {
        if let Valuation::Finite(v) = vp(x, p)? {
            if v < 0 {
                reasons.push(ExclusionReason::AmbientNotUnit(Rat::from_bigint(
                    x.denom().clone(),
                )));
            }
        }
    }
    reasons.dedup();
    let in_s = reasons.is_empty();
    let d = parameter_lcm(alpha, beta)?;
    let (h_uniform, h_min) = if in_s {
        (
            Some(BigUint::from(euler_phi(d))),
            Some(multiplicative_order(p, d)?),
        )
    } else {
        (None, None)
    };
    Ok(PrimeVerdict {
        p,
        in_s,
        reasons,
        h_uniform,
        h_min,
    })
}

/// Family-shortcut verdicts for every prime up to `bound`.
pub fn hypergeometric_prime_set(
    alpha: &[Rat],
    beta: &[Rat],
    bound: u64,
) -> Result<Vec<PrimeVerdict>> {
    primes_up_to(bound)
        .into_iter()
        .map(|p| hypergeometric_prime_verdict(alpha, beta, p))
        .collect()
}

/// Uniform period of the hypergeometric family: phi(lcm of parameter denominators).
pub fn uniform_period_hypergeometric(alpha: &[Rat], beta: &[Rat]) -> Result<u64> {
    Ok(euler_phi(parameter_lcm(alpha, beta)?))
}

/// Minimal period: the multiplicative order of p modulo the lcm of the
/// exponent denominators, i.e. the smallest h with p^h e = e (mod Z) for all
/// exponents e. Errors when p divides some denominator.
pub fn minimal_period(d_lcm: u64, p: u64) -> Result<u64> {
    check_prime(p)?;
    multiplicative_order(p, d_lcm)
}
