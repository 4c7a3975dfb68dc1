use std::hash::Hash;

use crate::arith::mod_inv;

/// Square matrix over the prime field `F_p`, `p < 2^32`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FpMat {
    dim: usize,
    prime: u32,
    data: Vec<u32>,
}

#[inline]
fn mulmod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

impl FpMat {
    pub fn from_vec(dim: usize, prime: u32, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), dim * dim, "entry count must be dim²");
        Self { dim, prime, data }
    }

    pub fn identity(dim: usize, prime: u32) -> Self {
        Self::scalar(dim, prime, 1)
    }

    pub fn scalar(dim: usize, prime: u32, c: u32) -> Self {
        let mut data = vec![0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = c % prime;
        }
        Self { dim, prime, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.dim + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let p = self.prime as u64;
        let mut data = vec![0u32; n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            for j in 0..n {
                let mut acc: u64 = 0;
                for k in 0..n {
                    acc += row[k] as u64 * other.data[k * n + j] as u64;
                    if k & 7 == 7 {
                        acc %= p;
                    }
                }
                data[i * n + j] = (acc % p) as u32;
            }
        }
        Self {
            dim: n,
            prime: self.prime,
            data,
        }
    }

    /// `A v` for a column vector `v`.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let n = self.dim;
        let p = self.prime as u64;
        (0..n)
            .map(|i| {
                let acc = (0..n).fold(0u64, |acc, k| {
                    (acc + self.data[i * n + k] as u64 * v[k] as u64) % p
                });
                acc as u32
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let p = self.prime;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n, p).data;
        for c in 0..n {
            let r = (c..n).find(|&r| a[r * n + c] != 0)?;
            if r != c {
                for k in 0..n {
                    a.swap(r * n + k, c * n + k);
                    inv.swap(r * n + k, c * n + k);
                }
            }
            let piv = mod_inv(a[c * n + c] as u64, p as u64)? as u32;
            for k in 0..n {
                a[c * n + k] = mulmod(a[c * n + k], piv, p);
                inv[c * n + k] = mulmod(inv[c * n + k], piv, p);
            }
            for r in 0..n {
                let f = a[r * n + c];
                if r == c || f == 0 {
                    continue;
                }
                for k in 0..n {
                    a[r * n + k] = (a[r * n + k] + p - mulmod(f, a[c * n + k], p)) % p;
                    inv[r * n + k] = (inv[r * n + k] + p - mulmod(f, inv[c * n + k], p)) % p;
                }
            }
        }
        Some(Self {
            dim: n,
            prime: p,
            data: inv,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.scalar_value() == Some(1)
    }

    /// `Some(c)` when the matrix is `c·I`.
    pub fn scalar_value(&self) -> Option<u32> {
        let n = self.dim;
        let c = self.data[0];
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { c } else { 0 };
                if self.data[i * n + j] != want {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// `det(I − tA)` as coefficients `c_0 = 1, c_1, …, c_N`, via the
    /// Faddeev–LeVerrier recurrence (requires `p > N`).
    pub fn det_one_minus_t(&self) -> Vec<u32> {
        let n = self.dim;
        let p = self.prime;
        assert!((p as usize) > n, "prime must exceed the dimension");
        // charpoly x^n + c1 x^{n-1} + ... + cn; det(I - tA) = 1 + c1 t + ... + cn t^n
        let mut out = vec![0u32; n + 1];
        out[0] = 1;
        let mut mk = Self::identity(n, p);
        let mut prev = 1u32;
        for k in 1..=n {
            if k > 1 {
                mk = self.mul(&mk);
                for i in 0..n {
                    mk.data[i * n + i] = (mk.data[i * n + i] + prev) % p;
                }
            }
            let am = self.mul(&mk);
            let tr = (0..n).fold(0u64, |acc, i| (acc + am.data[i * n + i] as u64) % p as u64) as u32;
            let kinv = mod_inv(k as u64, p as u64).expect("k < p") as u32;
            prev = mulmod(p - tr % p, kinv, p) % p;
            out[k] = prev;
        }
        out
    }

    /// Multiplicative order, giving up past `cap`.
    pub fn order(&self, cap: u64) -> Option<u64> {
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.mul(self);
        }
        None
    }
}

/// Hash key for an `F_p` vector or matrix: bit-packed into a `u128` when the
/// entries fit, otherwise the raw entries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ElemKey {
    Packed(u128),
    Wide(Box<[u32]>),
}

/// Encoder/decoder between entry vectors of fixed length and [`ElemKey`].
#[derive(Clone, Copy, Debug)]
pub struct KeyCodec {
    len: usize,
    bits: u32,
}

impl KeyCodec {
    pub fn new(len: usize, prime: u32) -> Self {
        let bits = 32 - (prime - 1).leading_zeros();
        Self {
            len,
            bits: bits.max(1),
        }
    }

    pub fn is_packed(&self) -> bool {
        self.len as u32 * self.bits <= 128
    }

    pub fn encode(&self, entries: &[u32]) -> ElemKey {
        debug_assert_eq!(entries.len(), self.len);
        if self.is_packed() {
            let mut k: u128 = 0;
            for &e in entries {
                k = (k << self.bits) | e as u128;
            }
            ElemKey::Packed(k)
        } else {
            ElemKey::Wide(entries.into())
        }
    }

    pub fn decode(&self, key: &ElemKey) -> Vec<u32> {
        match key {
            ElemKey::Wide(v) => v.to_vec(),
            ElemKey::Packed(k) => {
                let mask = (1u128 << self.bits) - 1;
                let mut out = vec![0u32; self.len];
                let mut k = *k;
                for slot in out.iter_mut().rev() {
                    *slot = (k & mask) as u32;
                    k >>= self.bits;
                }
                out
            }
        }
    }

    /// Approximate bytes per stored key, for budget estimates.
    pub fn key_bytes(&self) -> usize {
        if self.is_packed() {
            16
        } else {
            16 + 4 * self.len
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let a = FpMat::from_vec(2, 7, vec![1, 2, 3, 5]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(FpMat::from_vec(2, 7, vec![1, 2, 2, 4]).inverse().is_none());
    }

    #[test]
    fn codec_round_trip() {
        for (len, p) in [(16, 61), (36, 7), (36, 61), (4, 4_294_967_291)] {
            let c = KeyCodec::new(len, p);
            let v: Vec<u32> = (0..len as u32).map(|i| (i * 7 + 3) % p).collect();
            assert_eq!(c.decode(&c.encode(&v)), v);
        }
        assert!(KeyCodec::new(16, 61).is_packed());
        assert!(!KeyCodec::new(36, 61).is_packed());
    }

    #[test]
    fn det_one_minus_t_diagonal() {
        // diag(2, 3) over F_7: (1-2t)(1-3t) = 1 - 5t + 6t^2
        let a = FpMat::from_vec(2, 7, vec![2, 0, 0, 3]);
        assert_eq!(a.det_one_minus_t(), vec![1, 2, 6]);
    }
}
