use alloc::vec;
use alloc::vec::Vec;

use super::field::poly::inv_mod;
use crate::group::GroupElement;

/// A square matrix over `F_p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpMatrix {
    p: u32,
    dim: usize,
    entries: Vec<u32>,
}

impl FpMatrix {
    pub fn identity(p: u32, dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        FpMatrix { p, dim, entries }
    }

    pub fn from_rows(p: u32, dim: usize, entries: Vec<u32>) -> Self {
        assert_eq!(entries.len(), dim * dim);
        FpMatrix { p, dim, entries: entries.into_iter().map(|x| x % p).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.dim + j] = v % self.p;
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let p = self.p as u64;
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k] as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out[idx] = ((out[idx] as u64 + a * other.entries[k * n + j] as u64) % p) as u32;
                }
            }
        }
        FpMatrix { p: self.p, dim: n, entries: out }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.p, self.dim);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        (0..self.dim)
            .map(|i| (0..self.dim).fold(0u64, |acc, j| (acc + self.get(i, j) as u64 * v[j] as u64) % p) as u32)
            .collect()
    }

    pub fn rank(&self) -> usize {
        let n = self.dim;
        let p = self.p;
        let mut m = self.entries.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| m[r * n + col] != 0) else {
                continue;
            };
            for j in 0..n {
                m.swap(rank * n + j, pivot * n + j);
            }
            let inv = inv_mod(m[rank * n + col], p) as u64;
            for r in 0..n {
                if r == rank || m[r * n + col] == 0 {
                    continue;
                }
                let f = m[r * n + col] as u64 * inv % p as u64;
                for j in 0..n {
                    let t = f * m[rank * n + j] as u64 % p as u64;
                    m[r * n + j] = ((m[r * n + j] as u64 + p as u64 - t) % p as u64) as u32;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl GroupElement for FpMatrix {
    fn compose(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn identity_like(&self) -> Self {
        Self::identity(self.p, self.dim)
    }

    fn is_invertible(&self) -> bool {
        self.rank() == self.dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_powers() {
        let m = FpMatrix::from_rows(2, 2, vec![0, 1, 1, 1]);
        assert!(m.is_invertible());
        assert_eq!(m.pow(3), FpMatrix::identity(2, 2));
        let singular = FpMatrix::from_rows(3, 2, vec![1, 2, 2, 1]);
        assert_eq!(singular.rank(), 1);
        assert_eq!(m.apply(&[1, 0]), vec![0, 1]);
    }
}
