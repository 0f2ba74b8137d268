//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! and enforcing its wall-clock budget. Run with `cargo test --test acceptance`
//! (add `-- --nocapture` to see the lines).

use frobenize::arith::{euler_phi, primes_up_to};
use frobenize::certify::{
    certify, find_relation, frobenius_twist, hyper_coeffs, hyper_series_fp, integrality,
    oracle_min_poly, reduce_mod_p, CertifyOptions, CertifyProblem, FpSeries, HypSeries,
};
use frobenize::families::{hypergeometric_operator, order_one_operator};
use frobenize::fp::FpPoly;
use frobenize::operator::{Basis, DiffOp, SingularPoint};
use frobenize::poly::Poly;
use frobenize::primes::{
    analyze_operator_primes, hypergeometric_prime_set, minimal_period, prime_set,
    uniform_period_hypergeometric,
};
use frobenize::rat::Rat;
use frobenize::ratfun::RatFun;
use frobenize::rigidity::{
    centralizer_dim, hypergeometric_local_data, katz_rigidity, pochhammer_local_data, JordanType,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::panic::{catch_unwind, UnwindSafe};
use std::time::{Duration, Instant};

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d).unwrap()
}

fn criterion(number: u32, description: &str, limit: Duration, body: impl FnOnce() + UnwindSafe) {
    let started = Instant::now();
    let outcome = catch_unwind(body);
    let elapsed = started.elapsed();
    let status = if outcome.is_ok() && elapsed <= limit {
        "PASS"
    } else {
        "FAIL"
    };
    println!("criterion {number}: {status} ({elapsed:?}, limit {limit:?}) - {description}");
    if let Err(cause) = outcome {
        std::panic::resume_unwind(cause);
    }
    assert!(
        elapsed <= limit,
        "criterion {number} exceeded its budget: {elapsed:?} > {limit:?}"
    );
}

fn unit_interval_rat(rng: &mut StdRng) -> Rat {
    let d = rng.gen_range(2..=10);
    r(rng.gen_range(1..=d), d)
}

#[test]
fn criterion_1_hypergeometric_exponent_closed_forms() {
    criterion(
        1,
        "hypergeometric exponents match the closed forms exactly, 20 random tuples",
        Duration::from_secs(5),
        || {
            let mut rng = StdRng::seed_from_u64(101);
            for trial in 0..20 {
                let n = [2usize, 3, 4][trial % 3];
                let alpha: Vec<Rat> = (0..n).map(|_| unit_interval_rat(&mut rng)).collect();
                let beta: Vec<Rat> = (0..n).map(|_| unit_interval_rat(&mut rng)).collect();
                let op = hypergeometric_operator(&alpha, &beta).unwrap();

                let mut at0: Vec<Rat> = beta.iter().map(|b| &Rat::one() - b).collect();
                at0.sort();
                let mut at1: Vec<Rat> = (0..n as i64 - 1).map(Rat::from_int).collect();
                let mut tail = Rat::from_int(-1);
                for (b, a) in beta.iter().zip(&alpha) {
                    tail = &tail + &(b - a);
                }
                at1.push(tail);
                at1.sort();
                let mut atinf = alpha.clone();
                atinf.sort();

                assert_eq!(
                    op.exponents(&SingularPoint::Finite(Rat::zero()))
                        .unwrap()
                        .exponents,
                    at0
                );
                assert_eq!(
                    op.exponents(&SingularPoint::Finite(Rat::one()))
                        .unwrap()
                        .exponents,
                    at1
                );
                assert_eq!(
                    op.exponents(&SingularPoint::Infinity).unwrap().exponents,
                    atinf
                );
            }
        },
    );
}

/// Exact commutant oracle over Q: realize the Jordan type as a rational
/// matrix, solve MC = CM by Gaussian elimination, count the kernel dimension.
fn commutant_dim_oracle(jt: &JordanType) -> usize {
    let n = jt.dim();
    let mut m = vec![vec![Rat::zero(); n]; n];
    let mut pos = 0usize;
    for (res, sizes) in jt.blocks() {
        let eig = res + &r(2, 1);
        for &s in sizes {
            for k in 0..s {
                m[pos + k][pos + k] = eig.clone();
                if k + 1 < s {
                    m[pos + k][pos + k + 1] = Rat::one();
                }
            }
            pos += s;
        }
    }
    let dim = n * n;
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(dim);
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![Rat::zero(); dim];
            for k in 0..n {
                row[k * n + j] = &row[k * n + j] + &m[i][k];
                row[i * n + k] = &row[i * n + k] - &m[k][j];
            }
            rows.push(row);
        }
    }
    let mut rank = 0usize;
    let mut used = vec![false; rows.len()];
    for col in 0..dim {
        let Some(pivot) = (0..rows.len()).find(|&i| !used[i] && !rows[i][col].is_zero()) else {
            continue;
        };
        used[pivot] = true;
        rank += 1;
        let inv = rows[pivot][col].recip().unwrap();
        let prow: Vec<Rat> = rows[pivot].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == pivot || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (c, v) in row.iter_mut().enumerate() {
                *v = &*v - &(&f * &prow[c]);
            }
        }
    }
    dim - rank
}

fn all_jordan_types(n_max: usize) -> Vec<JordanType> {
    fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=max.min(n)).rev() {
            for mut rest in partitions(n - first, first) {
                let mut v = vec![first];
                v.append(&mut rest);
                out.push(v);
            }
        }
        out
    }
    fn compositions(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=n {
            for mut rest in compositions(n - first) {
                let mut v = vec![first];
                v.append(&mut rest);
                out.push(v);
            }
        }
        out
    }
    let mut types = Vec::new();
    for n in 1..=n_max {
        for mults in compositions(n) {
            let mut stack: Vec<(usize, Vec<Vec<usize>>)> = vec![(0, Vec::new())];
            while let Some((idx, acc)) = stack.pop() {
                if idx == mults.len() {
                    types.push(
                        JordanType::new(
                            acc.iter()
                                .enumerate()
                                .map(|(i, sizes)| (r(i as i64, 17), sizes.clone()))
                                .collect(),
                        )
                        .unwrap(),
                    );
                    continue;
                }
                for p in partitions(mults[idx], mults[idx]) {
                    let mut next = acc.clone();
                    next.push(p);
                    stack.push((idx + 1, next));
                }
            }
        }
    }
    types
}

#[test]
fn criterion_2_katz_rigidity_and_commutant_oracle() {
    criterion(
        2,
        "Katz counts reach 2(n^2-1) for hypergeometric data and n+1 reflections; centralizer dims match the exact commutant solve, n <= 4",
        Duration::from_secs(1),
        || {
            let mut rng = StdRng::seed_from_u64(102);
            for n in 1..=6usize {
                let alpha: Vec<Rat> = (0..n).map(|_| r(rng.gen_range(1..=10), 11)).collect();
                let beta: Vec<Rat> = (0..n).map(|_| r(rng.gen_range(1..=12), 13)).collect();
                let (types, irr) = hypergeometric_local_data(&alpha, &beta).unwrap();
                assert!(irr);
                let rep = katz_rigidity(&types, n, irr).unwrap();
                assert_eq!(rep.sum, 2 * (n * n - 1));
                assert!(rep.rigid);

                let a = r(rng.gen_range(1..=10), 11);
                let mut alphas: Vec<Rat> = Vec::new();
                while alphas.len() < n {
                    let c = r(rng.gen_range(-8..=8), 1);
                    if !alphas.contains(&c) {
                        alphas.push(c);
                    }
                }
                let bs: Vec<Rat> = (0..n).map(|_| r(rng.gen_range(1..=12), 13)).collect();
                let (types, irr) = pochhammer_local_data(&a, &alphas, &bs).unwrap();
                assert!(irr);
                let rep = katz_rigidity(&types, n, irr).unwrap();
                assert_eq!(rep.sum, 2 * (n * n - 1));
                assert!(rep.rigid);
            }
            let types = all_jordan_types(4);
            assert!(types.len() > 30);
            for jt in &types {
                assert_eq!(
                    centralizer_dim(jt),
                    commutant_dim_oracle(jt),
                    "centralizer mismatch for {jt:?}"
                );
            }
        },
    );
}

#[test]
fn criterion_3_prime_set_and_period_for_paper_example() {
    criterion(
        3,
        "2F1(1/2,1/2;2/3): admitted primes <= 100 are exactly p > 3; h_uniform = phi(6) = 2; h_min = 1 iff p = 1 mod 6",
        Duration::from_secs(5),
        || {
            let alpha = [r(1, 2), r(1, 2)];
            let beta_full = [r(2, 3), Rat::one()];
            let op = hypergeometric_operator(&alpha, &beta_full).unwrap();
            let data = analyze_operator_primes(&op).unwrap();
            let general = prime_set(&data, 100).unwrap();
            let family = hypergeometric_prime_set(&alpha, &beta_full, 100).unwrap();
            for (g, f) in general.iter().zip(&family) {
                let expect = g.p > 3;
                assert_eq!(g.in_s, expect, "general verdict at p = {}", g.p);
                assert_eq!(f.in_s, expect, "family verdict at p = {}", f.p);
                if expect {
                    let want_h = if g.p % 6 == 1 { 1 } else { 2 };
                    assert_eq!(g.h_min, Some(want_h));
                    assert_eq!(f.h_min, Some(want_h));
                    assert_eq!(f.h_uniform.as_ref().map(|x| x.to_string()), Some("2".into()));
                }
            }
            assert_eq!(uniform_period_hypergeometric(&alpha, &beta_full).unwrap(), 2);
            assert_eq!(euler_phi(6), 2);
        },
    );
}

#[test]
fn criterion_4_order_one_valuation_criterion() {
    criterion(
        4,
        "order-1 y' = (alpha/z) y: the excluded primes are exactly those dividing den(alpha), bound 50",
        Duration::from_secs(1),
        || {
            for alpha in [r(1, 2), r(1, 3), r(5, 7)] {
                let q = RatFun::new(
                    Poly::constant(alpha.clone()),
                    Poly::from_coeffs(vec![Rat::zero(), Rat::one()]),
                )
                .unwrap();
                let op = order_one_operator(&q).unwrap();
                let data = analyze_operator_primes(&op).unwrap();
                let verdicts = prime_set(&data, 50).unwrap();
                let den = alpha.denom_u64().unwrap();
                for v in &verdicts {
                    assert_eq!(v.in_s, den % v.p != 0, "alpha = {alpha}, p = {}", v.p);
                }
            }
        },
    );
}

#[test]
fn criterion_5_certification_closed_form_case() {
    criterion(
        5,
        "1F0(1/2) mod p, p in {3,5,7,11}: j = 1 with (1-z)^((p-1)/2) f^p - f = 0 normalized; oracle degree 2 with (1-z)Y^2 - 1; verified >= 512",
        Duration::from_secs(10),
        || {
            let (spec, _) = HypSeries::new(vec![r(1, 2)], vec![]).unwrap();
            for p in [3u64, 5, 7, 11] {
                let h = minimal_period(2, p).unwrap();
                assert_eq!(h, 1);
                let f = hyper_series_fp(&spec, p, 2 * 512 + 200).unwrap();
                let rel = find_relation(&f, h, 1, 16, 512).unwrap();
                assert!(rel.verified_to >= 512);
                assert_eq!(rel.j, 1);
                // Expected normalized relation, built independently:
                // scale ((1-z)^m, -1) so the top polynomial is monic.
                let m = ((p - 1) / 2) as u32;
                let one_minus_z = FpPoly::new(p, vec![1, p - 1]).unwrap();
                let top = one_minus_z.pow(m);
                let scale = frobenize::fp::inv_mod(top.leading(), p);
                let want_r1 = top.scale(scale);
                let want_r0 = FpPoly::new(p, vec![(p - 1) * scale % p]).unwrap();
                assert_eq!(rel.r[1], want_r1, "p = {p}");
                assert_eq!(rel.r[0], want_r0, "p = {p}");
                // Re-verification against a fresh series.
                let fresh = hyper_series_fp(&spec, p, rel.verified_to).unwrap();
                assert!(rel.residual(&fresh, rel.verified_to).is_zero());

                let mp = oracle_min_poly(&f, 4, 8, 256).unwrap();
                assert!(mp.verified_to >= 512);
                assert_eq!(mp.degree, 2);
                // (1-z) Y^2 - 1, normalized: (z-1) Y^2 + 1.
                assert_eq!(mp.coeffs[2], FpPoly::new(p, vec![p - 1, 1]).unwrap());
                assert!(mp.coeffs[1].is_zero());
                assert_eq!(mp.coeffs[0], FpPoly::new(p, vec![1]).unwrap());
                // Consistency: the oracle degree is within the semilinear bound p^{jh}.
                assert!(mp.degree as u64 <= p.pow(rel.j * rel.h as u32));
            }
        },
    );
}

#[test]
fn criterion_6_certification_paper_example() {
    criterion(
        6,
        "2F1(1/2,1/2;2/3) mod 7: integral to 2000; relation at level j <= 4 = n^2 h; bounds 2401 and 49; doubled-precision re-verification",
        Duration::from_secs(60),
        || {
            let (spec, _) = HypSeries::new(vec![r(1, 2), r(1, 2)], vec![r(2, 3)]).unwrap();
            // Integrality to 2000, via the exact rationals and the fast path.
            let exact = hyper_coeffs(&spec, 2000).unwrap();
            assert!(integrality(&exact, 7).unwrap());
            let fast = hyper_series_fp(&spec, 7, 2000).unwrap();
            assert_eq!(reduce_mod_p(&exact, 7).unwrap(), fast);

            let problem = CertifyProblem::hypergeometric(spec.clone()).unwrap();
            let cert = certify(&problem, 7, &CertifyOptions::default()).unwrap();
            assert_eq!(cert.h, 1);
            assert!(cert.relation.j <= 4, "level {} exceeds n^2 h = 4", cert.relation.j);
            assert_eq!(cert.theorem_bound.to_string(), "2401");
            assert_eq!(cert.refined_bound.to_string(), "49");
            assert_eq!(cert.refined_r, 1);
            assert!(cert.degree_bound <= cert.theorem_bound);
            // Re-verify the relation against a freshly generated series.
            let fresh = hyper_series_fp(&spec, 7, cert.relation.verified_to).unwrap();
            assert!(cert.relation.residual(&fresh, cert.relation.verified_to).is_zero());
        },
    );
}

#[test]
fn criterion_7_certification_diagonal_example() {
    criterion(
        7,
        "2F1(1/2,1/2;1) mod p, p in {3,5,7}: oracle degree <= p-1; relation level j <= 2; Frobenius-ratio congruence cross-check",
        Duration::from_secs(30),
        || {
            let (spec, _) = HypSeries::new(vec![r(1, 2), r(1, 2)], vec![Rat::one()]).unwrap();
            let problem = CertifyProblem::hypergeometric(spec.clone()).unwrap();
            for p in [3u64, 5, 7] {
                let cert = certify(&problem, p, &CertifyOptions::default()).unwrap();
                assert_eq!(cert.h, 1);
                assert!(cert.relation.j <= 2, "level {} > 2 at p = {p}", cert.relation.j);
                assert_eq!(cert.theorem_bound.to_string(), (p * p * p * p).to_string());
                assert_eq!(cert.refined_bound.to_string(), (p * p).to_string());
                assert_eq!(cert.refined_r, 1);

                let f = hyper_series_fp(&spec, p, 1400).unwrap();
                let mp = oracle_min_poly(&f, (p - 1) as u32, 2 * p as u32, 0).unwrap();
                assert!((mp.degree as u64) < p, "oracle degree {} > p-1", mp.degree);
                // Consistency: the oracle degree is within the semilinear bound.
                let semilinear_bound = p.pow(cert.relation.j * cert.h as u32);
                assert!(mp.degree as u64 <= semilinear_bound);

                // Independent congruence: f = A(z) f(z^p) with A the
                // degree-(p-1) truncation of f, computed from exact rationals.
                let exact = hyper_coeffs(&spec, 700).unwrap();
                let reduced = reduce_mod_p(&exact, p).unwrap();
                let a_poly = FpPoly::new(p, reduced.coeffs()[..p as usize].to_vec()).unwrap();
                let rhs = frobenius_twist(&reduced, 1).mul_poly_trunc(&a_poly, 700);
                assert_eq!(rhs, reduced.truncate(700), "Frobenius-ratio congruence at p = {p}");
            }
        },
    );
}

#[test]
fn criterion_8_structural_property_suites() {
    criterion(
        8,
        "basis roundtrip, inversion involution, Fuchs relation, ordinary exponents, h_min | phi(d), relation re-verification",
        Duration::from_secs(120),
        || {
            let mut rng = StdRng::seed_from_u64(108);

            // Basis-conversion roundtrip and inversion involution on random
            // monic operators.
            for order in 1..=4usize {
                for _ in 0..4 {
                    let mut coeffs: Vec<RatFun> = (0..order)
                        .map(|_| {
                            let num = Poly::from_coeffs(
                                (0..rng.gen_range(1..=3))
                                    .map(|_| r(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
                                    .collect(),
                            );
                            let den = Poly::from_coeffs(vec![
                                r(rng.gen_range(1..=4), 1),
                                r(rng.gen_range(0..=3), 1),
                            ]);
                            RatFun::new(num, den).unwrap()
                        })
                        .collect();
                    coeffs.push(RatFun::one());
                    let op = DiffOp::new(Basis::Ddz, coeffs).unwrap();
                    let back = op.to_delta_at(&Rat::zero()).unwrap().to_ddz().unwrap();
                    assert_eq!(back, op);
                    let twice = op.invert_variable().unwrap().invert_variable().unwrap();
                    assert_eq!(twice, op);
                }
            }

            // Fuchs relation and ordinary-point exponents for family operators.
            for trial in 0..4 {
                let n = 2 + trial % 2;
                let alpha: Vec<Rat> = (0..n).map(|_| unit_interval_rat(&mut rng)).collect();
                let beta: Vec<Rat> = (0..n).map(|_| unit_interval_rat(&mut rng)).collect();
                let op = hypergeometric_operator(&alpha, &beta).unwrap().to_ddz().unwrap();
                let points = op.singular_points().unwrap();
                let mut total = Rat::zero();
                for pt in &points {
                    for e in op.exponents(pt).unwrap().exponents {
                        total = &total + &e;
                    }
                }
                let rc = points.len() as i64;
                let nn = n as i64;
                assert_eq!(total, r((rc - 2) * nn * (nn - 1), 2));
                // Exponents at the ordinary point 2 are {0, .., n-1}.
                let rep = op.exponents(&SingularPoint::Finite(r(2, 1))).unwrap();
                let expect: Vec<Rat> = (0..nn).map(Rat::from_int).collect();
                assert_eq!(rep.exponents, expect);
            }

            // h_min divides phi(d) over all admitted primes up to 200.
            let alpha = [r(1, 2), r(1, 2)];
            let beta_full = [r(2, 3), Rat::one()];
            let d = frobenize::primes::parameter_lcm(&alpha, &beta_full).unwrap();
            for p in primes_up_to(200) {
                if d.is_multiple_of(p) {
                    continue;
                }
                let h = minimal_period(d, p).unwrap();
                assert_eq!(euler_phi(d) % h, 0);
            }

            // Doubled-precision re-verification of every emitted relation.
            let cases: Vec<(HypSeries, u64)> = vec![
                (HypSeries::new(vec![r(1, 2)], vec![]).unwrap().0, 3),
                (HypSeries::new(vec![r(1, 2)], vec![]).unwrap().0, 11),
                (HypSeries::new(vec![r(1, 2), r(1, 2)], vec![r(2, 3)]).unwrap().0, 7),
                (HypSeries::new(vec![r(1, 2), r(1, 2)], vec![Rat::one()]).unwrap().0, 5),
                (HypSeries::new(vec![r(1, 3), r(2, 3)], vec![r(1, 2)]).unwrap().0, 7),
            ];
            for (spec, p) in cases {
                let d = frobenize::primes::parameter_lcm(&spec.alpha, &spec.beta_full()).unwrap();
                let h = minimal_period(d, p).unwrap();
                let n = spec.order() as u32;
                let f = hyper_series_fp(&spec, p, 2 * ((n * n + 1) as usize * 33 + 64)).unwrap();
                let rel = find_relation(&f, h, n * n, 32, 0).unwrap();
                let fresh = hyper_series_fp(&spec, p, rel.verified_to).unwrap();
                assert!(
                    rel.residual(&fresh, rel.verified_to).is_zero(),
                    "re-verification failed for p = {p}"
                );
            }

            // The zero-residual check also covers a rational series.
            let f = FpSeries::new(3, vec![1; 600]).unwrap();
            let rel = find_relation(&f, 1, 1, 8, 0).unwrap();
            assert!(rel.residual(&f.truncate(rel.verified_to), rel.verified_to).is_zero());
        },
    );
}
