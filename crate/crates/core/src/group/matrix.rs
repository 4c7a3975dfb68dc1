use std::fmt;

use crate::arith::{ArithError, Cyclo, ReductionMap};

use super::fp::FpMat;
use super::GroupError;

/// Square matrix over `Q(ζ_m)`, stored row-major with every entry at the
/// common conductor `m`.
#[derive(Clone, PartialEq, Eq)]
pub struct CycloMatrix {
    dim: usize,
    conductor: u32,
    entries: Vec<Cyclo>,
}

fn lcm(a: u32, b: u32) -> u32 {
    use num_integer::Integer;
    a.lcm(&b)
}

impl CycloMatrix {
    /// Builds a matrix from rows, lifting entries to their common conductor.
    /// Fails on ragged input or a singular matrix.
    pub fn from_rows(rows: Vec<Vec<Cyclo>>) -> Result<Self, GroupError> {
        let m = Self::from_rows_unchecked(rows)?;
        if m.det().is_zero() {
            return Err(GroupError::Singular);
        }
        Ok(m)
    }

    /// As [`from_rows`](Self::from_rows) without the determinant check.
    pub fn from_rows_unchecked(rows: Vec<Vec<Cyclo>>) -> Result<Self, GroupError> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(GroupError::Malformed("matrix must be square and non-empty".into()));
        }
        let conductor = rows
            .iter()
            .flatten()
            .fold(1, |acc, c| lcm(acc, c.conductor()));
        let entries = rows.into_iter().flatten().map(|c| c.lift(conductor)).collect();
        Ok(Self {
            dim,
            conductor,
            entries,
        })
    }

    pub fn identity(dim: usize, conductor: u32) -> Self {
        Self::scalar(dim, &Cyclo::one(conductor))
    }

    pub fn scalar(dim: usize, c: &Cyclo) -> Self {
        let m = c.conductor();
        let mut entries = vec![Cyclo::zero(m); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = c.clone();
        }
        Self {
            dim,
            conductor: m,
            entries,
        }
    }

    pub fn diagonal(diag: &[Cyclo]) -> Self {
        let dim = diag.len();
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            diag[i].clone()
                        } else {
                            Cyclo::zero(diag[i].conductor())
                        }
                    })
                    .collect()
            })
            .collect();
        Self::from_rows_unchecked(rows).expect("square by construction")
    }

    /// Permutation matrix sending basis vector `e_j` to `e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let dim = perm.len();
        let mut entries = vec![Cyclo::zero(1); dim * dim];
        for (j, &i) in perm.iter().enumerate() {
            entries[i * dim + j] = Cyclo::one(1);
        }
        Self {
            dim,
            conductor: 1,
            entries,
        }
    }

    /// Block-diagonal matrix from square blocks.
    pub fn block_diagonal(blocks: &[&CycloMatrix]) -> Self {
        let dim: usize = blocks.iter().map(|b| b.dim).sum();
        let mut rows = vec![vec![Cyclo::zero(1); dim]; dim];
        let mut off = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    rows[off + i][off + j] = b.get(i, j).clone();
                }
            }
            off += b.dim;
        }
        Self::from_rows_unchecked(rows).expect("square by construction")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclo {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<Cyclo>> {
        self.entries.chunks(self.dim).map(<[Cyclo]>::to_vec).collect()
    }

    pub fn lift(&self, target: u32) -> Self {
        Self {
            dim: self.dim,
            conductor: target,
            entries: self.entries.iter().map(|c| c.lift(target)).collect(),
        }
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        let rows = self
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|x| x * c).collect())
            .collect();
        Self::from_rows_unchecked(rows).expect("square by construction")
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in product");
        let m = lcm(self.conductor, other.conductor);
        let a = if m == self.conductor { self.clone() } else { self.lift(m) };
        let b = if m == other.conductor { other.clone() } else { other.lift(m) };
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Cyclo::zero(m);
                for k in 0..n {
                    let x = a.get(i, k);
                    let y = b.get(k, j);
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    acc = &acc + &(x * y);
                }
                entries.push(acc);
            }
        }
        Self {
            dim: n,
            conductor: m,
            entries,
        }
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> Cyclo {
        let n = self.dim;
        let mut a = self.rows();
        let mut det = Cyclo::one(self.conductor);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Cyclo::zero(self.conductor);
            };
            if p != c {
                a.swap(p, c);
                det = -&det;
            }
            det = &det * &a[c][c];
            let inv = a[c][c].inv().expect("nonzero pivot");
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] * &inv;
                for k in c..n {
                    let t = &f * &a[c][k];
                    a[r][k] = &a[r][k] - &t;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<Self, GroupError> {
        let n = self.dim;
        let m = self.conductor;
        let mut a = self.rows();
        let mut inv = Self::identity(n, m).rows();
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[r][c].is_zero())
                .ok_or(GroupError::Singular)?;
            a.swap(p, c);
            inv.swap(p, c);
            let piv = a[c][c].inv().map_err(|_| GroupError::Singular)?;
            for k in 0..n {
                a[c][k] = &a[c][k] * &piv;
                inv[c][k] = &inv[c][k] * &piv;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for k in 0..n {
                    let t = &f * &a[c][k];
                    a[r][k] = &a[r][k] - &t;
                    let t = &f * &inv[c][k];
                    inv[r][k] = &inv[r][k] - &t;
                }
            }
        }
        Ok(Self {
            dim: n,
            conductor: m,
            entries: inv.into_iter().flatten().map(|c| c.lift(m)).collect(),
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).conj());
            }
        }
        Self {
            dim: n,
            conductor: self.conductor,
            entries,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.scalar_value().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the matrix equals `c·I`.
    pub fn scalar_value(&self) -> Option<Cyclo> {
        let n = self.dim;
        let c = self.get(0, 0);
        for i in 0..n {
            for j in 0..n {
                let x = self.get(i, j);
                let ok = if i == j { x == c } else { x.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c.clone())
    }

    pub fn is_unitary(&self) -> bool {
        self.mul(&self.adjoint()).is_identity()
    }

    /// Image under a reduction map whose conductor is a multiple of ours.
    pub fn reduce(&self, map: &ReductionMap) -> Result<FpMat, ArithError> {
        let data = self
            .entries
            .iter()
            .map(|c| map.reduce(c).map(|v| v as u32))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FpMat::from_vec(self.dim, map.prime() as u32, data))
    }

    /// Characteristic polynomial `det(xI − A)`, constant term first, by the
    /// Faddeev–LeVerrier recurrence.
    pub fn charpoly(&self) -> Vec<Cyclo> {
        let n = self.dim;
        let m = self.conductor;
        let mut coeffs = vec![Cyclo::zero(m); n + 1];
        coeffs[n] = Cyclo::one(m);
        let mut mk = Self::identity(n, m);
        let mut prev = Cyclo::one(m);
        for k in 1..=n {
            if k > 1 {
                let shifted = Self::scalar(n, &prev);
                mk = self.mul(&mk).add(&shifted);
            }
            let am = self.mul(&mk);
            let tr = (0..n).fold(Cyclo::zero(m), |acc, i| &acc + am.get(i, i));
            prev = tr.scale(&num_rational::BigRational::new((-1).into(), (k as i64).into()));
            coeffs[n - k] = prev.clone();
        }
        coeffs
    }

    fn add(&self, other: &Self) -> Self {
        let m = lcm(self.conductor, other.conductor);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| &x.lift(m) + &y.lift(m))
            .collect();
        Self {
            dim: self.dim,
            conductor: m,
            entries,
        }
    }
}

impl fmt::Debug for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.entries.chunks(self.dim))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u32, k: i64) -> Cyclo {
        Cyclo::zeta(m, k)
    }

    #[test]
    fn inverse_and_det() {
        let a = CycloMatrix::from_rows(vec![
            vec![z(4, 1), Cyclo::from_int(4, 2)],
            vec![Cyclo::one(4), Cyclo::from_int(4, 3)],
        ])
        .unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        // det = 3i - 2
        assert_eq!(a.det(), &z(4, 1).mul_int(3) - &Cyclo::from_int(4, 2));
    }

    #[test]
    fn singular_rejected() {
        let r = CycloMatrix::from_rows(vec![
            vec![Cyclo::one(1), Cyclo::from_int(1, 2)],
            vec![Cyclo::from_int(1, 2), Cyclo::from_int(1, 4)],
        ]);
        assert!(matches!(r, Err(GroupError::Singular)));
    }

    #[test]
    fn permutation_convention() {
        let p = CycloMatrix::permutation(&[1, 2, 0]);
        assert_eq!(p.get(1, 0), &Cyclo::one(1));
        assert_eq!(p.mul(&p).mul(&p), CycloMatrix::identity(3, 1));
    }

    #[test]
    fn charpoly_of_rotation() {
        // diag(i, -i) has charpoly x^2 + 1
        let d = CycloMatrix::diagonal(&[z(4, 1), z(4, 3)]);
        let cp = d.charpoly();
        assert_eq!(cp[0], Cyclo::one(4));
        assert!(cp[1].is_zero());
        assert!(cp[2].is_one());
    }
}
