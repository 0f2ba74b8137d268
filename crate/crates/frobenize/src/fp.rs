//! Dense linear algebra and polynomials over a prime field F_p, p < 2^31.
//!
//! Elements are residues in [0, p) stored as u64; products fit in u64 before
//! reduction because p^2 < 2^62.

use crate::arith::check_prime;
use crate::error::Result;
use std::fmt;

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue, via Fermat.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
    pow_mod(a, p - 2, p)
}

/// A polynomial over F_p: residues ascending by degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct FpPoly {
    pub p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        let mut f = FpPoly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        f.trim();
        Ok(f)
    }

    pub fn zero(p: u64) -> Self {
        FpPoly {
            p,
            coeffs: Vec::new(),
        }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(0)) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        let mut f = FpPoly {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect(),
        };
        f.trim();
        f
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(add_mod(self.coeff(k), other.coeff(k), self.p));
        }
        let mut f = FpPoly { p: self.p, coeffs };
        f.trim();
        f
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = (coeffs[i + j] + a * b) % self.p;
            }
        }
        let mut f = FpPoly { p: self.p, coeffs };
        f.trim();
        f
    }

    pub fn pow(&self, e: u32) -> FpPoly {
        let mut acc = FpPoly::new(self.p, vec![1]).unwrap();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "z")?,
                1 => write!(f, "{c}*z")?,
                _ if c == 1 => write!(f, "z^{k}")?,
                _ => write!(f, "{c}*z^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.p)
    }
}

/// Dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row.into_iter().map(|x| x % p));
        }
        FpMatrix {
            p,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = FpMatrix::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u128;
                for j in 0..self.cols {
                    acc += self.get(i, j) as u128 * v[j] as u128;
                }
                (acc % self.p as u128) as u64
            })
            .collect()
    }

    /// In-place reduced row echelon form; returns the pivot column list.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, row * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(row, col), p);
            for j in col..self.cols {
                let v = mul_mod(self.get(row, j), inv, p);
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col);
                if f == 0 {
                    continue;
                }
                let neg = p - f;
                for j in col..self.cols {
                    let v = (self.get(r, j) + neg * self.get(row, j)) % p;
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel {v : Mv = 0}. Empty iff the kernel is trivial.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut set = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                set[c] = Some(r);
            }
            set
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                let entry = m.get(r, free);
                if entry != 0 {
                    v[c] = p - entry;
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Reduce a set of vectors to RREF and return the nonzero rows, pivots ascending.
pub fn rref_rows(p: u64, vectors: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    if vectors.is_empty() {
        return vectors;
    }
    let mut m = FpMatrix::from_rows(p, vectors);
    let pivots = m.rref();
    (0..pivots.len())
        .map(|r| (0..m.cols).map(|j| m.get(r, j)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_identity_is_trivial() {
        let m = FpMatrix::identity(5, 3);
        assert!(m.kernel().is_empty());
    }

    #[test]
    fn kernel_of_zero_matrix_is_everything() {
        let m = FpMatrix::zeros(3, 2, 3);
        let k = m.kernel();
        assert_eq!(k.len(), 3);
        for v in &k {
            assert_eq!(m.mul_vec(v), vec![0, 0]);
        }
    }

    #[test]
    fn kernel_column_relation() {
        // [[1,1],[2,2]] over F_3: kernel spanned by (1, 2).
        let m = FpMatrix::from_rows(3, vec![vec![1, 1], vec![2, 2]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(m.mul_vec(&k[0]), vec![0, 0]);
        // Normalize to first coordinate 1 and compare.
        let inv = inv_mod(k[0][0], 3);
        let v: Vec<u64> = k[0].iter().map(|&x| mul_mod(x, inv, 3)).collect();
        assert_eq!(v, vec![1, 2]);
    }

    #[test]
    fn rank_nullity() {
        let m = FpMatrix::from_rows(7, vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank() + m.kernel().len(), 3);
    }

    #[test]
    fn poly_arithmetic() {
        let p = FpPoly::new(5, vec![1, 2, 3]).unwrap();
        let q = FpPoly::new(5, vec![4, 1]).unwrap();
        let r = p.mul(&q);
        // (3z^2+2z+1)(z+4) = 3z^3 + 14z^2 + 9z + 4 = 3z^3 + 4z^2 + 4z + 4 mod 5
        assert_eq!(r.coeffs(), &[4, 4, 4, 3]);
        assert_eq!(p.monic().leading(), 1);
    }
}
