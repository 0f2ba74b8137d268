//! Integer arithmetic helpers: primality, totient, multiplicative order,
//! and complete factorization for rational-root candidate enumeration.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Primes are restricted to machine-word size so F_p arithmetic stays in
/// native words with exact reduction.
pub const MAX_PRIME: u64 = 1 << 31;

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // These witnesses are deterministic for all n < 2^64.
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Validate a prime modulus for F_p work: prime and below the word-size cap.
pub fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Input(format!("{p} is not prime")));
    }
    if p >= MAX_PRIME {
        return Err(Error::Input(format!("prime {p} exceeds the 2^31 cap")));
    }
    Ok(())
}

/// All primes up to and including `bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2usize;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// Euler totient by trial-division factorization.
pub fn euler_phi(d: u64) -> u64 {
    assert!(d >= 1);
    let mut n = d;
    let mut phi = 1u64;
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            let mut qk = 1u64;
            while n.is_multiple_of(q) {
                n /= q;
                qk *= q;
            }
            phi *= qk / q * (q - 1);
        }
        q += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// Smallest h >= 1 with p^h = 1 mod d; requires gcd(p, d) = 1.
pub fn multiplicative_order(p: u64, d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::Input("multiplicative order modulo 0".into()));
    }
    if d == 1 {
        return Ok(1);
    }
    if p.gcd(&d) != 1 {
        return Err(Error::Input(format!("gcd({p}, {d}) != 1: order undefined")));
    }
    let mut h = 1u64;
    let mut x = p % d;
    while x != 1 {
        x = mulmod(x, p, d);
        h += 1;
    }
    Ok(h)
}

fn biguint_is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime(v);
    }
    // Miller-Rabin on BigUint for the rare oversized cofactor.
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while (&d % &two).is_zero() {
        d >>= 1;
        s += 1;
    }
    'outer: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    // n is odd, composite, not a prime power of a small prime.
    let one = BigUint::one();
    let mut c = BigUint::from(1u32);
    loop {
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        let mut d = one.clone();
        while d.is_one() {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && &d != n {
            return d;
        }
        c += 1u32;
    }
}

/// Complete factorization of a positive integer into (prime, exponent) pairs.
pub fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut n = n.clone();
    if n.is_zero() || n.is_one() {
        return out;
    }
    for q in 2u64..4096 {
        let q_big = BigUint::from(q);
        if &q_big * &q_big > n {
            break;
        }
        if (&n % &q_big).is_zero() {
            let mut e = 0u32;
            while (&n % &q_big).is_zero() {
                n /= &q_big;
                e += 1;
            }
            out.push((q_big, e));
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if biguint_is_prime(&m) {
            match out.iter_mut().find(|(p, _)| *p == m) {
                Some((_, e)) => *e += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    out
}

/// All positive divisors of n, unsorted count-capped by the factorization.
pub fn divisors(n: &BigUint) -> Vec<BigUint> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in factor(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(2147483647));
        assert!(!is_prime(1));
        assert!(!is_prime(561)); // Carmichael
        assert!(!is_prime(6));
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(6), 2);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(7, 6).unwrap(), 1);
        assert_eq!(multiplicative_order(5, 6).unwrap(), 2);
        assert_eq!(multiplicative_order(3, 1).unwrap(), 1);
        assert!(multiplicative_order(3, 6).is_err());
    }

    #[test]
    fn factorization_roundtrip() {
        for n in [2u64, 12, 97, 1024, 600851475143, 999999999989] {
            let n = BigUint::from(n);
            let f = factor(&n);
            let mut prod = BigUint::one();
            for (p, e) in &f {
                assert!(biguint_is_prime(p));
                prod *= p.pow(*e);
            }
            assert_eq!(prod, n);
        }
    }

    #[test]
    fn divisor_lists() {
        let mut d: Vec<u64> = divisors(&BigUint::from(12u32))
            .iter()
            .map(|x| x.to_u64().unwrap())
            .collect();
        d.sort();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }
}
