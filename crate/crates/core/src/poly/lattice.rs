use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;


use crate::arith::Cyclo;

use super::polynomial::{smoothness_necessary, HomogPoly};
use super::PolyError;

/// The finite group of diagonal (or block-scalar) matrices fixing a form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalStabilizer {
    pub order: BigUint,
    /// Nonzero Smith invariants `d_1 | d_2 | …`, including any ones.
    pub elementary_divisors: Vec<BigUint>,
}

/// Smith normal form diagonal of an integer matrix (rows × cols): the
/// nonzero invariant factors in divisibility order.
pub fn smith_normal_form(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let nr = a.len();
    let nc = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            // clear column t
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..nc {
                    let s = &q * &a[t][j];
                    a[i][j] -= s;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    dirty = true;
                }
            }
            // clear row t
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let s = &q * &row[t];
                    row[j] -= s;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // enforce divisibility of the remaining block
            let bad = (t + 1..nr)
                .flat_map(|i| (t + 1..nc).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..nc {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Exact integer determinant by Bareiss elimination.
pub fn integer_det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn stabilizer_from_rows(rows: &[Vec<i64>], n: usize) -> Result<DiagonalStabilizer, PolyError> {
    let snf = smith_normal_form(rows);
    if snf.len() < n {
        return Err(PolyError::RankDeficient { rank: snf.len(), n });
    }
    let divisors: Vec<BigUint> = snf
        .iter()
        .map(|d| d.to_biguint().expect("nonnegative"))
        .collect();
    let order = divisors.iter().product();
    Ok(DiagonalStabilizer {
        order,
        elementary_divisors: divisors,
    })
}

fn rows_i64(f: &HomogPoly) -> Vec<Vec<i64>> {
    f.exponent_rows()
        .into_iter()
        .map(|r| r.into_iter().map(i64::from).collect())
        .collect()
}

/// Diagonal matrices `diag(c)` with `∏ c_j^{m_ij} = 1` for every term, as
/// `Z^N` modulo the row lattice of the exponent matrix.
pub fn diagonal_stabilizer(f: &HomogPoly) -> Result<DiagonalStabilizer, PolyError> {
    stabilizer_from_rows(&rows_i64(f), f.nvars())
}

/// Block-scalar matrices fixing `f`: the same lattice computation on
/// exponents summed within each block.
pub fn block_scalar_stabilizer(
    f: &HomogPoly,
    blocks: &[Vec<usize>],
) -> Result<DiagonalStabilizer, PolyError> {
    let rows: Vec<Vec<i64>> = f
        .exponent_rows()
        .into_iter()
        .map(|e| {
            blocks
                .iter()
                .map(|b| b.iter().map(|&j| i64::from(e[j])).sum())
                .collect()
        })
        .collect();
    stabilizer_from_rows(&rows, blocks.len())
}

/// The witness minor of the necessary smoothness condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorReport {
    pub rows: Vec<Vec<u32>>,
    pub det: BigInt,
    pub bound: BigUint,
    pub within_bound: bool,
}

/// Determinant of the square minor built from per-variable witnesses,
/// checked against `0 < det ≤ d^N`.
pub fn exponent_minor_bound(f: &HomogPoly) -> Result<MinorReport, PolyError> {
    let rep = smoothness_necessary(f);
    let rows: Vec<Vec<u32>> = rep
        .witnesses
        .iter()
        .enumerate()
        .map(|(j, w)| w.clone().ok_or(PolyError::NoWitness { var: j }))
        .collect::<Result<_, _>>()?;
    let int_rows: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| i64::from(x)).collect())
        .collect();
    let det = integer_det(&int_rows);
    let bound = BigUint::from(f.degree()).pow(f.nvars() as u32);
    let within_bound = det.is_positive() && det.magnitude() <= &bound;
    Ok(MinorReport {
        rows,
        det,
        bound,
        within_bound,
    })
}

/// Substitutes `x_j = c_j y_{b(j)}`, collapsing each block to one variable.
pub fn collapse_blocks(
    f: &HomogPoly,
    blocks: &[Vec<usize>],
    constants: &[i64],
) -> Result<HomogPoly, PolyError> {
    let n = f.nvars();
    let mut owner = vec![usize::MAX; n];
    for (b, vars) in blocks.iter().enumerate() {
        for &j in vars {
            owner[j] = b;
        }
    }
    if owner.contains(&usize::MAX) || constants.len() != n {
        return Err(PolyError::Precondition(
            "blocks must cover every variable and constants must match".into(),
        ));
    }
    let m = f.conductor();
    let terms = f.terms().iter().map(|(mono, c)| {
        let mut e = vec![0u32; blocks.len()];
        let mut scale = BigInt::one();
        for (j, &k) in mono.exponents().iter().enumerate() {
            e[owner[j]] += k;
            scale *= BigInt::from(constants[j]).pow(k);
        }
        let s = Cyclo::from_rational(m, &num_rational::BigRational::from_integer(scale));
        (e, c * &s)
    });
    HomogPoly::new(blocks.len(), f.degree(), terms)
}

/// Result of the seeded block collapse.
#[derive(Debug, Clone)]
pub struct CollapseReport {
    /// 1-based index of the first draw whose collapse keeps every per-block
    /// special monomial; `None` when all draws failed.
    pub successful_draw: Option<usize>,
    pub constants: Vec<i64>,
    pub collapsed: Option<HomogPoly>,
}

/// Tries up to `draws` fixed-seed choices of nonzero constants in
/// `[-50, 50]` and keeps the first collapse passing the smoothness check.
pub fn collapse_with_seed(
    f: &HomogPoly,
    blocks: &[Vec<usize>],
    seed: u64,
    draws: usize,
) -> Result<CollapseReport, PolyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Vec::new();
    for draw in 1..=draws {
        let constants: Vec<i64> = (0..f.nvars())
            .map(|_| loop {
                let c = rng.gen_range(-50i64..=50);
                if c != 0 {
                    break c;
                }
            })
            .collect();
        match collapse_blocks(f, blocks, &constants) {
            Ok(g) if smoothness_necessary(&g).pass() => {
                return Ok(CollapseReport {
                    successful_draw: Some(draw),
                    constants,
                    collapsed: Some(g),
                })
            }
            Ok(_) | Err(PolyError::Empty) => {}
            Err(e) => return Err(e),
        }
        last = constants;
    }
    Ok(CollapseReport {
        successful_draw: None,
        constants: last,
        collapsed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_small() {
        let d = smith_normal_form(&[vec![3, 1, 0], vec![0, 3, 1], vec![1, 0, 3]]);
        let prod: BigInt = d.iter().product();
        assert_eq!(prod, BigInt::from(28));
        let d = smith_normal_form(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn klein_and_fermat() {
        let klein =
            HomogPoly::from_int_terms(3, 4, &[(&[3, 1, 0], 1), (&[0, 3, 1], 1), (&[1, 0, 3], 1)])
                .unwrap();
        let s = diagonal_stabilizer(&klein).unwrap();
        assert_eq!(s.order, BigUint::from(28u32));
        let m = exponent_minor_bound(&klein).unwrap();
        assert_eq!(m.det, BigInt::from(28));
        assert!(m.within_bound);
        let f = diagonal_stabilizer(&HomogPoly::fermat(3, 5)).unwrap();
        assert_eq!(f.order, BigUint::from(125u32));
        assert_eq!(f.elementary_divisors, vec![BigUint::from(5u32); 3]);
    }

    #[test]
    fn rank_deficient() {
        let f = HomogPoly::from_int_terms(2, 2, &[(&[1, 1], 1)]).unwrap();
        assert_eq!(
            diagonal_stabilizer(&f),
            Err(PolyError::RankDeficient { rank: 1, n: 2 })
        );
    }

    #[test]
    fn bareiss() {
        assert_eq!(integer_det(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(integer_det(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 4]]), BigInt::from(24));
    }

    #[test]
    fn collapse_two_blocks() {
        // x0^3 + x1^3 + x2^3 + x3^3 with blocks {0,1},{2,3}
        let f = HomogPoly::fermat(4, 3);
        let blocks = vec![vec![0, 1], vec![2, 3]];
        let rep = collapse_with_seed(&f, &blocks, 7, 8).unwrap();
        assert!(rep.successful_draw.is_some());
        let s = block_scalar_stabilizer(&f, &blocks).unwrap();
        assert_eq!(s.order, BigUint::from(9u32));
    }
}
