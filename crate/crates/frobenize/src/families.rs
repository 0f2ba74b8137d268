//! Constructors for the supported operator families: generalized
//! hypergeometric, Jordan-Pochhammer, and order-1 operators.

use crate::error::{Error, Result};
use crate::operator::{Basis, DiffOp};
use crate::poly::{rational_roots, Poly};
use crate::rat::Rat;
use crate::ratfun::RatFun;

/// Elementary symmetric polynomials e_0..e_n of the given values.
fn elementary_symmetric(values: &[Rat]) -> Vec<Rat> {
    let mut e = vec![Rat::zero(); values.len() + 1];
    e[0] = Rat::one();
    for (i, v) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            let bump = &e[k - 1] * v;
            e[k] = &e[k] + &bump;
        }
    }
    e
}

/// Rising factorial (a)_k = a (a+1) ... (a+k-1).
pub fn rising_factorial(a: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc = &acc * &(a + &Rat::from_int(i as i64));
    }
    acc
}

/// True when alpha_i - beta_j is never an integer (the hypergeometric
/// irreducibility condition).
pub fn hypergeometric_irreducible(alpha: &[Rat], beta: &[Rat]) -> bool {
    alpha
        .iter()
        .all(|a| beta.iter().all(|b| !(a - b).is_integer()))
}

/// The generalized hypergeometric operator in the delta basis:
/// (delta + beta_1 - 1)...(delta + beta_n - 1) - z (delta + alpha_1)...(delta + alpha_n).
///
/// Takes n alphas and n betas; the operator annihilates nFn-1(alpha; beta'; z)
/// when the last beta is 1. The leading delta^n coefficient is 1 - z, so the
/// result is not monic; convert with `to_ddz().monic()` for the d/dz form.
pub fn hypergeometric_operator(alpha: &[Rat], beta: &[Rat]) -> Result<DiffOp> {
    let n = alpha.len();
    if n == 0 || beta.len() != n {
        return Err(Error::Input(
            "hypergeometric operator needs n alphas and n betas, n >= 1".into(),
        ));
    }
    let beta_minus_one: Vec<Rat> = beta.iter().map(|b| b - &Rat::one()).collect();
    let ea = elementary_symmetric(alpha);
    let eb = elementary_symmetric(&beta_minus_one);
    // Coefficient of delta^k: e_{n-k}(beta-1) - z * e_{n-k}(alpha).
    let coeffs = (0..=n)
        .map(|k| {
            let poly = Poly::from_coeffs(vec![eb[n - k].clone(), -&ea[n - k]]);
            RatFun::from_poly(poly)
        })
        .collect();
    DiffOp::new(Basis::Delta, coeffs)
}

/// The Jordan-Pochhammer operator, monic in the d/dz basis.
///
/// With Q(z) = prod (z - alpha_i) and R(z) = Q(z) * sum b_i/(z - alpha_i):
/// sum_{k=0}^{n} (-1)^k (a)_k/k! Q^(k) d^{n-k} plus
/// sum_{k=0}^{n-1} (-1)^{k+1} (a+1)_k/k! R^(k) d^{n-1-k}.
/// Exponents at alpha_i are {0, 1, ..., n-2, a+n-1+b_i} and
/// at infinity {-(a+1), ..., -(a+n-1), -(a + sum b_i)}.
pub fn jordan_pochhammer_operator(a: &Rat, alphas: &[Rat], bs: &[Rat]) -> Result<DiffOp> {
    let n = alphas.len();
    if n == 0 || bs.len() != n {
        return Err(Error::Input("need n alphas and n bs, n >= 1".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            if alphas[i] == alphas[j] {
                return Err(Error::Input(format!(
                    "repeated singular point alpha = {}",
                    alphas[i]
                )));
            }
        }
    }
    let mut q = Poly::one();
    for alpha in alphas {
        q = q.mul(&Poly::from_coeffs(vec![-alpha, Rat::one()]));
    }
    let mut r = Poly::zero();
    for (alpha, b) in alphas.iter().zip(bs) {
        let factor = Poly::from_coeffs(vec![-alpha, Rat::one()]);
        r = r.add(&q.div_exact(&factor)?.scale(b));
    }

    let mut coeffs = vec![Poly::zero(); n + 1];
    let mut q_deriv = q;
    let mut factorial = Rat::one();
    for k in 0..=n as u32 {
        if k > 0 {
            factorial = &factorial * &Rat::from_int(k as i64);
            q_deriv = q_deriv.derivative();
        }
        let sign = if k % 2 == 0 {
            Rat::one()
        } else {
            Rat::from_int(-1)
        };
        let c = &(&sign * &rising_factorial(a, k)) / &factorial;
        coeffs[n - k as usize] = coeffs[n - k as usize].add(&q_deriv.scale(&c));
    }
    let a_plus_one = a + &Rat::one();
    let mut r_deriv = r;
    let mut factorial = Rat::one();
    for k in 0..n as u32 {
        if k > 0 {
            factorial = &factorial * &Rat::from_int(k as i64);
            r_deriv = r_deriv.derivative();
        }
        let sign = if k % 2 == 0 {
            Rat::from_int(-1)
        } else {
            Rat::one()
        };
        let c = &(&sign * &rising_factorial(&a_plus_one, k)) / &factorial;
        coeffs[n - 1 - k as usize] = coeffs[n - 1 - k as usize].add(&r_deriv.scale(&c));
    }

    let op = DiffOp::new(
        Basis::Ddz,
        coeffs.into_iter().map(RatFun::from_poly).collect(),
    )?;
    Ok(op.monic())
}

/// Irreducibility conditions for the Jordan-Pochhammer monodromy tuple:
/// a, b_1, ..., b_n and a + b_1 + ... + b_n all non-integers.
pub fn pochhammer_irreducible(a: &Rat, bs: &[Rat]) -> bool {
    if a.is_integer() {
        return false;
    }
    if bs.iter().any(|b| b.is_integer()) {
        return false;
    }
    let mut sum = a.clone();
    for b in bs {
        sum = &sum + b;
    }
    !sum.is_integer()
}

/// The order-1 operator d/dz - Q(z), requiring Q to have only simple rational
/// poles and a zero at infinity, so the operator is Fuchsian with exponents
/// equal to the residues of Q.
pub fn order_one_operator(q: &RatFun) -> Result<DiffOp> {
    if !q.is_zero() {
        let (roots, rem) = rational_roots(q.den())?;
        if !rem.is_constant() {
            return Err(Error::SplitFailure {
                context: "poles of Q".into(),
                remainder: rem.to_string(),
            });
        }
        for i in 0..roots.len().saturating_sub(1) {
            if roots[i] == roots[i + 1] {
                return Err(Error::NotFuchsian {
                    points: vec![roots[i].to_string()],
                });
            }
        }
        let deg_num = q.num().degree().unwrap_or(0);
        let deg_den = q.den().degree().unwrap_or(0);
        if deg_num + 1 > deg_den {
            return Err(Error::NotFuchsian {
                points: vec!["inf".into()],
            });
        }
    }
    DiffOp::new(Basis::Ddz, vec![q.neg(), RatFun::one()])
}
