//! Mod-p algebraicity certification: exact series expansion, p-integrality,
//! reduction, and the search for Frobenius-semilinear relations
//! r_j f^{p^{jh}} + ... + r_0 f = 0 over F_p(z), with degree bounds compared
//! against p^{n^2 h} and the refined p^{nrh}.
//!
//! Relations are truncation-level certificates: the search runs on
//! N_work = (j_max+1)(deg_max+1) + 64 series coefficients and every returned
//! relation is re-verified against an independently recomputed series at
//! doubled precision N2 = 2*N_work, recorded in `verified_to`.

use crate::arith::check_prime;
use crate::error::{Error, Result};
use crate::fp::{rref_rows, FpMatrix, FpPoly};
use crate::operator::{DiffOp, SingularPoint};
use crate::poly::Poly;
use crate::primes::{
    analyze_operator_primes, hypergeometric_prime_verdict, minimal_period, prime_verdict,
};
use crate::rat::{Rat, Valuation};
use num_bigint::BigUint;
use std::fmt;

/// A truncated power series over F_p: coefficients of z^0..z^(N-1).
#[derive(Clone, PartialEq, Eq)]
pub struct FpSeries {
    pub p: u64,
    coeffs: Vec<u64>,
}

impl FpSeries {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        Ok(FpSeries {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn truncate(&self, n: usize) -> FpSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(n);
        FpSeries { p: self.p, coeffs }
    }

    /// Product truncated to `n` coefficients.
    pub fn mul_trunc(&self, other: &FpSeries, n: usize) -> FpSeries {
        debug_assert_eq!(self.p, other.p);
        let p = self.p;
        let mut out = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            if a == 0 {
                continue;
            }
            let top = (n - i).min(other.coeffs.len());
            for (j, &b) in other.coeffs.iter().enumerate().take(top) {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        FpSeries { p, coeffs: out }
    }

    /// Polynomial times series, truncated to `n` coefficients.
    pub fn mul_poly_trunc(&self, poly: &FpPoly, n: usize) -> FpSeries {
        let p = self.p;
        let mut out = vec![0u64; n];
        for (d, &c) in poly.coeffs().iter().enumerate() {
            if c == 0 || d >= n {
                continue;
            }
            let top = (n - d).min(self.coeffs.len());
            for (k, &a) in self.coeffs.iter().enumerate().take(top) {
                out[d + k] = (out[d + k] + c * a) % p;
            }
        }
        FpSeries { p, coeffs: out }
    }
}

impl fmt::Debug for FpSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<u64> = self.coeffs.iter().take(8).copied().collect();
        write!(f, "FpSeries(p={}, N={}, {head:?}...)", self.p, self.len())
    }
}

/// Parameters of a generalized hypergeometric series nFn-1: n alphas and
/// n-1 betas, the trailing beta_n = 1 being implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypSeries {
    pub alpha: Vec<Rat>,
    pub beta: Vec<Rat>,
}

impl HypSeries {
    pub fn new(alpha: Vec<Rat>, beta: Vec<Rat>) -> Result<(Self, Vec<String>)> {
        if alpha.is_empty() || beta.len() + 1 != alpha.len() {
            return Err(Error::Input(
                "series parameters: n alphas and n-1 betas required".into(),
            ));
        }
        let mut warnings = Vec::new();
        let full_beta: Vec<Rat> = beta.iter().cloned().chain([Rat::one()]).collect();
        if !crate::families::hypergeometric_irreducible(&alpha, &full_beta) {
            warnings.push("some alpha_i - beta_j is an integer: the operator is reducible".into());
        }
        for x in alpha.iter().chain(&beta) {
            if !(x > &Rat::zero() && x <= &Rat::one()) {
                warnings.push(format!("parameter {x} outside (0, 1]"));
            }
        }
        Ok((HypSeries { alpha, beta }, warnings))
    }

    pub fn order(&self) -> usize {
        self.alpha.len()
    }

    /// The n-tuple of betas with the implicit 1 appended.
    pub fn beta_full(&self) -> Vec<Rat> {
        self.beta.iter().cloned().chain([Rat::one()]).collect()
    }
}

/// Exact coefficients a(0..N-1) of the hypergeometric series via the ratio
/// a(k+1)/a(k) = prod(alpha_i + k) / (prod(beta_j + k) * (k+1)).
pub fn hyper_coeffs(spec: &HypSeries, n: usize) -> Result<Vec<Rat>> {
    let mut out = Vec::with_capacity(n);
    let mut a = Rat::one();
    for k in 0..n {
        out.push(a.clone());
        if k + 1 == n {
            break;
        }
        let kq = Rat::from_int(k as i64);
        let mut num = Rat::one();
        for al in &spec.alpha {
            num = &num * &(al + &kq);
        }
        let mut den = Rat::from_int((k + 1) as i64);
        for be in &spec.beta {
            let f = be + &kq;
            if f.is_zero() {
                return Err(Error::UndefinedSeries {
                    beta: be.to_string(),
                });
            }
            den = &den * &f;
        }
        a = &(&a * &num) / &den;
    }
    Ok(out)
}

/// Index of the first coefficient with negative p-adic valuation, if any.
pub fn first_nonintegral(coeffs: &[Rat], p: u64) -> Result<Option<usize>> {
    check_prime(p)?;
    for (k, c) in coeffs.iter().enumerate() {
        if let Valuation::Finite(v) = crate::rat::vp(c, p)? {
            if v < 0 {
                return Ok(Some(k));
            }
        }
    }
    Ok(None)
}

/// True iff every coefficient of the truncation is a p-adic integer.
pub fn integrality(coeffs: &[Rat], p: u64) -> Result<bool> {
    Ok(first_nonintegral(coeffs, p)?.is_none())
}

/// Reduction mod p; errors with the offending index when a coefficient is
/// not p-integral.
pub fn reduce_mod_p(coeffs: &[Rat], p: u64) -> Result<FpSeries> {
    check_prime(p)?;
    let mut out = Vec::with_capacity(coeffs.len());
    for (k, c) in coeffs.iter().enumerate() {
        match c.residue_mod(p) {
            Ok(res) => out.push(res),
            Err(_) => return Err(Error::NonIntegral { index: k, p }),
        }
    }
    Ok(FpSeries { p, coeffs: out })
}

fn i128_of(x: &num_bigint::BigInt, what: &str) -> Result<i128> {
    use num_traits::ToPrimitive;
    x.to_i128()
        .ok_or_else(|| Error::Input(format!("{what} too large for exact unit tracking")))
}

/// Hypergeometric series mod p at scale, without big rationals: each ratio
/// factor t is split exactly as p^v * unit, so the coefficient valuations are
/// exact and the first non-integral index is reported precisely.
pub fn hyper_series_fp(spec: &HypSeries, p: u64, n: usize) -> Result<FpSeries> {
    check_prime(p)?;
    let split = |mut t: i128| -> (i64, u64) {
        debug_assert!(t != 0);
        let pi = p as i128;
        let mut v = 0i64;
        while t % pi == 0 {
            t /= pi;
            v += 1;
        }
        let u = ((t % pi + pi) % pi) as u64;
        (v, u)
    };
    let params = |xs: &[Rat]| -> Result<Vec<(i128, i128)>> {
        xs.iter()
            .map(|x| {
                Ok((
                    i128_of(x.numer(), "parameter numerator")?,
                    i128_of(x.denom(), "parameter denominator")?,
                ))
            })
            .collect()
    };
    let alphas = params(&spec.alpha)?;
    let betas = params(&spec.beta)?;

    let mut out = Vec::with_capacity(n);
    let mut val = 0i64; // v_p(a(k))
    let mut unit = 1u64; // unit part of a(k) mod p
    let mut terminated = false;
    for k in 0..n {
        if terminated {
            out.push(0);
            continue;
        }
        if val < 0 {
            return Err(Error::NonIntegral { index: k, p });
        }
        out.push(if val > 0 { 0 } else { unit });
        if k + 1 == n {
            break;
        }
        let kk = k as i128;
        let lin = |a: i128, b: i128| -> Result<i128> {
            kk.checked_mul(b)
                .and_then(|x| x.checked_add(a))
                .ok_or_else(|| Error::Input("parameter too large for exact unit tracking".into()))
        };
        for &(a, b) in &alphas {
            let t = lin(a, b)?;
            if t == 0 {
                terminated = true;
                break;
            }
            let (v, u) = split(t);
            val += v;
            unit = unit * u % p;
            let (v, u) = split(b);
            val -= v;
            unit = unit * crate::fp::inv_mod(u, p) % p;
        }
        if terminated {
            continue;
        }
        for &(c, d) in &betas {
            let t = lin(c, d)?;
            if t == 0 {
                return Err(Error::UndefinedSeries {
                    beta: format!("{c}/{d}"),
                });
            }
            let (v, u) = split(t);
            val -= v;
            unit = unit * crate::fp::inv_mod(u, p) % p;
            let (v, u) = split(d);
            val += v;
            unit = unit * u % p;
        }
        let (v, u) = split(kk + 1);
        val -= v;
        unit = unit * crate::fp::inv_mod(u, p) % p;
    }
    Ok(FpSeries { p, coeffs: out })
}

/// The unique normalized power-series solution f (f(0) = 1) of the operator
/// at 0, via the local delta-basis coefficient recurrence. Requires 0 to be
/// an ordinary or regular singular point with exponent 0; at a resonant index
/// with nonzero obstruction the error names the blocking index, and at an
/// obstruction-free resonant index the free coefficient is normalized to 0.
pub fn series_from_operator(op: &DiffOp, n_coeffs: usize) -> Result<Vec<Rat>> {
    let op = op.ddz_monic()?;
    let q = op.delta_q(&Rat::zero())?;
    // Common denominator of the q_k, so the recurrence has polynomial weights.
    let mut den = Poly::one();
    for qk in &q {
        let g = den.gcd(qk.den());
        den = den.mul(&qk.den().div_exact(&g)?);
    }
    if den.eval(&Rat::zero()).is_zero() {
        return Err(Error::IrregularPoint { point: "0".into() });
    }
    let weights: Vec<Poly> = q
        .iter()
        .map(|qk| {
            let scale = den.div_exact(qk.den())?;
            Ok(qk.num().mul(&scale))
        })
        .collect::<Result<_>>()?;
    let max_deg = weights.iter().filter_map(|w| w.degree()).max().unwrap_or(0);

    // Indicial values I(M) = sum_k weights[k](0) M^k.
    let indicial = |m: &Rat| -> Rat {
        let mut acc = Rat::zero();
        let mut pw = Rat::one();
        for w in &weights {
            acc = &acc + &(&w.coeff(0) * &pw);
            pw = &pw * m;
        }
        acc
    };
    if !indicial(&Rat::zero()).is_zero() {
        return Err(Error::Input(
            "0 is not an exponent at z = 0: no power-series solution with f(0) = 1".into(),
        ));
    }

    let mut a: Vec<Rat> = Vec::with_capacity(n_coeffs);
    a.push(Rat::one());
    for m in 1..n_coeffs {
        let mq = Rat::from_int(m as i64);
        let mut s = Rat::zero();
        for j in 1..=max_deg.min(m) {
            let prev = &a[m - j];
            if prev.is_zero() {
                continue;
            }
            let base = Rat::from_int((m - j) as i64);
            let mut pw = Rat::one();
            for w in &weights {
                let c = w.coeff(j);
                if !c.is_zero() {
                    s = &s + &(&(&c * prev) * &pw);
                }
                pw = &pw * &base;
            }
        }
        let im = indicial(&mq);
        if im.is_zero() {
            if s.is_zero() {
                a.push(Rat::zero());
            } else {
                return Err(Error::Resonance { index: m });
            }
        } else {
            a.push(-&(&s / &im));
        }
    }
    Ok(a)
}

/// The Frobenius twist g(z) = f(z^{p^e}) truncated to f's length:
/// g[k p^e] = f[k], zero elsewhere. Over F_p this equals f^{p^e}.
pub fn frobenius_twist(f: &FpSeries, e: u32) -> FpSeries {
    let n = f.len();
    let mut out = vec![0u64; n];
    match (f.p as u128).checked_pow(e) {
        Some(stride) => {
            let mut idx: u128 = 0;
            let mut k = 0usize;
            while idx < n as u128 {
                out[idx as usize] = f.coeff(k);
                k += 1;
                idx += stride;
            }
        }
        None => {
            if n > 0 {
                out[0] = f.coeff(0);
            }
        }
    }
    FpSeries {
        p: f.p,
        coeffs: out,
    }
}

/// An explicit Frobenius-semilinear relation
/// sum_{i<=j} r_i(z) f(z)^{p^{ih}} = 0 (mod z^{verified_to}).
#[derive(Clone, Debug)]
pub struct FrobeniusRelation {
    pub p: u64,
    pub h: u64,
    /// Level: highest twist index with a nonzero coefficient polynomial.
    pub j: u32,
    /// r_0..r_j; r_j is nonzero and monic.
    pub r: Vec<FpPoly>,
    /// Minimal coefficient degree at which the search succeeded.
    pub deg: u32,
    /// The relation holds modulo z^verified_to against a recomputed series.
    pub verified_to: usize,
}

impl FrobeniusRelation {
    /// Residual sum r_i * twist(f, i*h) truncated to `n` coefficients.
    pub fn residual(&self, f: &FpSeries, n: usize) -> FpSeries {
        let p = f.p;
        let mut acc = FpSeries {
            p,
            coeffs: vec![0; n],
        };
        for (i, ri) in self.r.iter().enumerate() {
            if ri.is_zero() {
                continue;
            }
            let tw = frobenius_twist(f, (i as u64 * self.h) as u32);
            let term = tw.mul_poly_trunc(ri, n);
            for k in 0..n {
                acc.coeffs[k] = (acc.coeffs[k] + term.coeff(k)) % p;
            }
        }
        acc
    }
}

/// A truncation-level minimal polynomial P(z, Y) with P(z, f) = 0 mod z^verified_to.
#[derive(Clone, Debug)]
pub struct MinPoly {
    pub p: u64,
    /// Degree in Y (the algebraicity degree certified at this truncation).
    pub degree: u32,
    /// Coefficients P_0..P_degree of Y^0..Y^degree; P_degree nonzero, monic.
    pub coeffs: Vec<FpPoly>,
    pub deg: u32,
    pub verified_to: usize,
}

impl MinPoly {
    pub fn residual(&self, f: &FpSeries, n: usize) -> FpSeries {
        let p = f.p;
        let mut acc = FpSeries {
            p,
            coeffs: vec![0; n],
        };
        let mut power = FpSeries {
            p,
            coeffs: vec![0; n],
        };
        if n > 0 {
            power.coeffs[0] = 1;
        }
        for (i, pi) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = power.mul_trunc(f, n);
            }
            if pi.is_zero() {
                continue;
            }
            let term = power.mul_poly_trunc(pi, n);
            for k in 0..n {
                acc.coeffs[k] = (acc.coeffs[k] + term.coeff(k)) % p;
            }
        }
        acc
    }
}

/// Builds the Hermite-Pade matrix whose kernel vectors are coefficient lists
/// (group g, degree d) with sum_g P_g(z) * series_g(z) = 0 mod z^rows.
fn hp_matrix(series: &[FpSeries], deg: usize, rows: usize, p: u64) -> FpMatrix {
    let groups = series.len();
    let cols = groups * (deg + 1);
    let mut m = FpMatrix::zeros(p, rows, cols);
    for (g, s) in series.iter().enumerate() {
        for d in 0..=deg {
            let col = g * (deg + 1) + d;
            for row in d..rows {
                let v = s.coeff(row - d);
                if v != 0 {
                    m.set(row, col, v);
                }
            }
        }
    }
    m
}

/// Kernel of the Hermite-Pade system, possibly empty.
fn hp_kernel(series: &[FpSeries], deg: usize, rows: usize, p: u64) -> Vec<Vec<u64>> {
    hp_matrix(series, deg, rows, p).kernel()
}

/// Deterministic witness from a kernel: RREF the basis, take the row with the
/// latest pivot (the lexicographically smallest ray), split into polynomials,
/// and scale so the highest-index nonzero polynomial is monic.
fn canonical_witness(p: u64, kernel: Vec<Vec<u64>>, deg: usize) -> Vec<FpPoly> {
    let rows = rref_rows(p, kernel);
    let v = rows.last().expect("nonempty kernel").clone();
    let mut polys: Vec<FpPoly> = v
        .chunks(deg + 1)
        .map(|chunk| FpPoly::new(p, chunk.to_vec()).unwrap())
        .collect();
    while matches!(polys.last(), Some(q) if q.is_zero()) {
        polys.pop();
    }
    let top_lead = polys.last().expect("nonzero witness").leading();
    let inv = crate::fp::inv_mod(top_lead, p);
    for q in polys.iter_mut() {
        *q = q.scale(inv);
    }
    polys
}

/// Working row count for a search over `groups` series with coefficient
/// degree at most `deg`: the unknown count plus a 64-row guard, raised to any
/// caller-imposed floor.
fn working_rows(groups: usize, deg: usize, min_rows: usize) -> usize {
    (groups * (deg + 1) + 64).max(min_rows)
}

/// Searches for the Frobenius-semilinear relation with lexicographically
/// minimal (level j, coefficient degree D), j <= j_max, D <= deg_max.
///
/// The kernel search runs on N_work rows; a candidate level is accepted only
/// when the kernel recomputed on N2 = 2*N_work rows is also nonzero, and the
/// returned witness is drawn from that doubled-precision kernel. The caller
/// must supply at least N2 series coefficients; `min_precision` raises N_work
/// (and with it `verified_to`) above the formula value.
///
/// A level j participates only when p^{jh} < N2: past that, the twist
/// degenerates to a constant inside the verification window and any kernel
/// vector through it would certify nothing.
pub fn find_relation(
    f: &FpSeries,
    h: u64,
    j_max: u32,
    deg_max: u32,
    min_precision: usize,
) -> Result<FrobeniusRelation> {
    if f.is_zero() {
        return Err(Error::Input("relation search over the zero series".into()));
    }
    if j_max == 0 {
        return Err(Error::Input("j_max must be at least 1".into()));
    }
    if h == 0 {
        return Err(Error::Input("the period h must be at least 1".into()));
    }
    let p = f.p;
    let n_work = working_rows(j_max as usize + 1, deg_max as usize, min_precision);
    let n2 = 2 * n_work;
    if f.len() < n2 {
        return Err(Error::PrecisionInsufficient {
            needed: n2,
            have: f.len(),
        });
    }

    let mut twists = Vec::with_capacity(j_max as usize + 1);
    for i in 0..=j_max {
        let e = u32::try_from(i as u64 * h)
            .map_err(|_| Error::Input("twist exponent overflow".into()))?;
        twists.push(frobenius_twist(f, e));
    }

    let mut skipped = 0u32;
    for j in 1..=j_max {
        let stride = u32::try_from(j as u64 * h)
            .ok()
            .and_then(|e| (p as u128).checked_pow(e));
        if !matches!(stride, Some(s) if s < n2 as u128) {
            skipped += 1;
            continue;
        }
        let series = &twists[..=j as usize];
        if hp_kernel(series, deg_max as usize, n_work, p).is_empty() {
            continue;
        }
        if hp_kernel(series, deg_max as usize, n2, p).is_empty() {
            // Accidental kernel at working precision; the level is spurious.
            continue;
        }
        let good = |d: usize| -> bool {
            !hp_kernel(series, d, n_work, p).is_empty() && !hp_kernel(series, d, n2, p).is_empty()
        };
        let mut lo = 0usize;
        let mut hi = deg_max as usize;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if good(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let deg = lo;
        let kernel = hp_kernel(series, deg, n2, p);
        let polys = canonical_witness(p, kernel, deg);
        let j_eff = (polys.len() - 1) as u32;
        return Ok(FrobeniusRelation {
            p,
            h,
            j: j_eff,
            r: polys,
            deg: deg as u32,
            verified_to: n2,
        });
    }
    let skipped_note = if skipped > 0 {
        format!(
            " ({skipped} level(s) skipped: p^(jh) >= {n2}; raise the precision floor to search them)"
        )
    } else {
        String::new()
    };
    Err(Error::NotFound {
        detail: format!("no relation with level <= {j_max} and degree <= {deg_max}{skipped_note}"),
    })
}

/// Brute-force Hermite-Pade oracle: the minimal d <= d_max such that some
/// nonzero P(z, Y) with deg_Y P = d and coefficient degrees <= deg_max kills
/// f, re-verified at doubled precision like `find_relation`.
pub fn oracle_min_poly(
    f: &FpSeries,
    d_max: u32,
    deg_max: u32,
    min_precision: usize,
) -> Result<MinPoly> {
    if f.is_zero() {
        return Err(Error::Input("oracle over the zero series".into()));
    }
    if d_max == 0 {
        return Err(Error::Input("d_max must be at least 1".into()));
    }
    let p = f.p;
    let n_work = working_rows(d_max as usize + 1, deg_max as usize, min_precision);
    let n2 = 2 * n_work;
    if f.len() < n2 {
        return Err(Error::PrecisionInsufficient {
            needed: n2,
            have: f.len(),
        });
    }

    let mut powers = Vec::with_capacity(d_max as usize + 1);
    let mut one = FpSeries {
        p,
        coeffs: vec![0; f.len()],
    };
    one.coeffs[0] = 1;
    powers.push(one);
    for i in 1..=d_max as usize {
        powers.push(powers[i - 1].mul_trunc(f, f.len()));
    }

    for d in 1..=d_max {
        let series = &powers[..=d as usize];
        if hp_kernel(series, deg_max as usize, n_work, p).is_empty() {
            continue;
        }
        if hp_kernel(series, deg_max as usize, n2, p).is_empty() {
            continue;
        }
        let good = |dd: usize| -> bool {
            !hp_kernel(series, dd, n_work, p).is_empty() && !hp_kernel(series, dd, n2, p).is_empty()
        };
        let mut lo = 0usize;
        let mut hi = deg_max as usize;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if good(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let deg = lo;
        let kernel = hp_kernel(series, deg, n2, p);
        let polys = canonical_witness(p, kernel, deg);
        let degree = (polys.len() - 1) as u32;
        return Ok(MinPoly {
            p,
            degree,
            coeffs: polys,
            deg: deg as u32,
            verified_to: n2,
        });
    }
    Err(Error::NotFound {
        detail: format!(
            "no annihilating polynomial with Y-degree <= {d_max} and coefficient degree <= {deg_max}"
        ),
    })
}

/// Where the certified series comes from.
#[derive(Clone, Debug)]
pub enum SeriesSource {
    Hypergeometric(HypSeries),
    Operator(DiffOp),
}

/// A certification problem: the series source plus the operator data the
/// bounds depend on (order, exponent-denominator lcm, exponents at 0).
#[derive(Clone, Debug)]
pub struct CertifyProblem {
    pub source: SeriesSource,
    pub n: usize,
    pub d_lcm: u64,
    pub exps_at_zero: Vec<Rat>,
}

impl CertifyProblem {
    pub fn hypergeometric(spec: HypSeries) -> Result<Self> {
        let n = spec.order();
        let beta_full = spec.beta_full();
        let d_lcm = crate::primes::parameter_lcm(&spec.alpha, &beta_full)?;
        let exps_at_zero: Vec<Rat> = {
            let mut e: Vec<Rat> = beta_full.iter().map(|b| &Rat::one() - b).collect();
            e.sort();
            e
        };
        Ok(CertifyProblem {
            source: SeriesSource::Hypergeometric(spec),
            n,
            d_lcm,
            exps_at_zero,
        })
    }

    pub fn from_operator(op: DiffOp) -> Result<Self> {
        let op = op.ddz_monic()?;
        let data = analyze_operator_primes(&op)?;
        let n = op.order();
        let exps_at_zero = op.exponents(&SingularPoint::Finite(Rat::zero()))?.exponents;
        Ok(CertifyProblem {
            source: SeriesSource::Operator(op),
            n,
            d_lcm: data.d_lcm,
            exps_at_zero,
        })
    }

    /// Exact rational coefficients of the normalized solution.
    pub fn series_coeffs(&self, n: usize) -> Result<Vec<Rat>> {
        match &self.source {
            SeriesSource::Hypergeometric(spec) => hyper_coeffs(spec, n),
            SeriesSource::Operator(op) => series_from_operator(op, n),
        }
    }

    /// The reduction mod p, failing with the index of the first coefficient
    /// that is not a p-adic integer.
    pub fn series_fp(&self, p: u64, n: usize) -> Result<FpSeries> {
        match &self.source {
            SeriesSource::Hypergeometric(spec) => hyper_series_fp(spec, p, n),
            SeriesSource::Operator(op) => reduce_mod_p(&series_from_operator(op, n)?, p),
        }
    }

    /// Admissibility verdict for p, via the family shortcut or the general test.
    pub fn prime_gate(&self, p: u64) -> Result<crate::primes::PrimeVerdict> {
        match &self.source {
            SeriesSource::Hypergeometric(spec) => {
                hypergeometric_prime_verdict(&spec.alpha, &spec.beta_full(), p)
            }
            SeriesSource::Operator(op) => {
                let data = analyze_operator_primes(op)?;
                prime_verdict(&data, p)
            }
        }
    }

    /// Heuristic dimension r of the Frobenius-stable solution space used by
    /// the refined bound p^{nrh}: r = 1 when 0 is an exponent at 0 and no
    /// other distinct exponent value is an integer (a repeated 0 forces a
    /// logarithmic partner, so it stays admissible); otherwise r = n.
    pub fn refined_r(&self) -> (u32, bool) {
        let zero = Rat::zero();
        let has_zero = self.exps_at_zero.contains(&zero);
        let others_ok = self
            .exps_at_zero
            .iter()
            .all(|e| e == &zero || !e.is_integer());
        if has_zero && others_ok {
            (1, true)
        } else {
            (self.n as u32, false)
        }
    }
}

/// Search controls for `certify`.
#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// Maximal twist level; defaults to n^2 (the theorem range).
    pub j_max: Option<u32>,
    /// First coefficient-degree cap tried.
    pub deg_start: u32,
    /// Degree cap: deg_start doubles until it reaches this.
    pub deg_cap: u32,
    /// Floor on the working precision (raises verified_to).
    pub min_precision: usize,
    /// Override for the refined-bound r.
    pub refined_r: Option<u32>,
    /// Skip the prime-set admissibility gate.
    pub force: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            j_max: None,
            deg_start: 64,
            deg_cap: 512,
            min_precision: 0,
            refined_r: None,
            force: false,
        }
    }
}

/// A certified algebraicity statement: the relation plus the bound comparison.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub relation: FrobeniusRelation,
    /// p^{jh} for the found level j.
    pub degree_bound: BigUint,
    /// p^{n^2 h}.
    pub theorem_bound: BigUint,
    /// p^{nrh} with the r actually used.
    pub refined_bound: BigUint,
    pub refined_r: u32,
    pub refined_r_heuristic: bool,
    pub h: u64,
    pub n: usize,
}

fn pow_big(p: u64, e: u64) -> Result<BigUint> {
    let e = u32::try_from(e).map_err(|_| Error::Input("bound exponent overflow".into()))?;
    Ok(BigUint::from(p).pow(e))
}

/// Runs the certification pipeline for one prime: admissibility gate,
/// integrality, minimal period, then the relation search with an escalating
/// degree schedule. A NotFound inside the theorem range (j_max >= n^2) is
/// reported as a red flag, never silently swallowed.
pub fn certify(problem: &CertifyProblem, p: u64, opts: &CertifyOptions) -> Result<Certificate> {
    check_prime(p)?;
    if !opts.force {
        let gate = problem.prime_gate(p)?;
        if !gate.in_s {
            return Err(Error::NotInPrimeSet {
                p,
                reasons: gate.reasons.iter().map(|x| x.to_string()).collect(),
            });
        }
    }
    let h = minimal_period(problem.d_lcm, p)?;
    let n = problem.n;
    let j_max = opts.j_max.unwrap_or((n * n) as u32);

    let mut deg = opts.deg_start.max(1);
    let last_not_found = loop {
        let n_work = working_rows(j_max as usize + 1, deg as usize, opts.min_precision);
        let f = problem.series_fp(p, 2 * n_work)?;
        match find_relation(&f, h, j_max, deg, opts.min_precision) {
            Ok(relation) => {
                let (r, heuristic) = match opts.refined_r {
                    Some(r) => (r, false),
                    None => problem.refined_r(),
                };
                let degree_bound = pow_big(p, relation.j as u64 * h)?;
                let theorem_bound = pow_big(p, (n * n) as u64 * h)?;
                let refined_bound = pow_big(p, n as u64 * r as u64 * h)?;
                return Ok(Certificate {
                    relation,
                    degree_bound,
                    theorem_bound,
                    refined_bound,
                    refined_r: r,
                    refined_r_heuristic: heuristic,
                    h,
                    n,
                });
            }
            Err(Error::NotFound { detail }) => {
                if deg >= opts.deg_cap {
                    break detail;
                }
                deg = (deg * 2).min(opts.deg_cap);
            }
            Err(e) => return Err(e),
        }
    };
    let detail = format!(
        "{last_not_found} (degree schedule exhausted at cap {})",
        opts.deg_cap
    );
    if j_max as usize >= n * n {
        Err(Error::RedFlag { detail })
    } else {
        Err(Error::NotFound { detail })
    }
}
