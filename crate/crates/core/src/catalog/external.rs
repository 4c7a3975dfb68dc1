//! Primitive groups whose generators are not printed alongside the bounds
//! they witness, built here from standard constructions and shipped as
//! group files under `data/external/`.

use crate::arith::Cyclo;
use crate::group::{CycloMatrix, GeneratedGroup, GroupError, GroupFile};

use super::build::{int, sqrt_m7, z};

/// A shipped generator file and the construction that produces it.
pub struct ExternalGroup {
    pub id: &'static str,
    pub file_name: &'static str,
    pub shipped: &'static str,
    pub provenance: &'static str,
    pub build: fn() -> Vec<CycloMatrix>,
    /// Smallest positive degree of a semi-invariant claimed for the group.
    pub semiinvariant_degree: u32,
    /// Order of the derived subgroup.
    pub derived_order: u128,
}

pub const EXTERNAL: &[ExternalGroup] = &[
    ExternalGroup {
        id: "sp4-3",
        file_name: "sp4_3_dim4.json",
        shipped: include_str!("../../../../data/external/sp4_3_dim4.json"),
        provenance: "Weil representation of Sp4(3) on functions on F_3^2 (odd part), \
                     generated by GL2(F_3) substitutions, the phase w^(x0^2) and the Fourier transform",
        build: weil_odd,
        semiinvariant_degree: 12,
        derived_order: 51840,
    },
    ExternalGroup {
        id: "psp4-3",
        file_name: "psp4_3_dim5.json",
        shipped: include_str!("../../../../data/external/psp4_3_dim5.json"),
        provenance: "Weil representation of Sp4(3) on functions on F_3^2 (even part), \
                     generated by GL2(F_3) substitutions, the phase w^(x0^2) and the Fourier transform",
        build: weil_even,
        semiinvariant_degree: 4,
        derived_order: 25920,
    },
    ExternalGroup {
        id: "2a7",
        file_name: "2a7_dim4.json",
        shipped: include_str!("../../../../data/external/2a7_dim4.json"),
        provenance: "spin lifts (g_a - g_b)(g_b - g_c)/2 of the 3-cycles (1 2 c) in the Clifford algebra \
                     on 7 generators, restricted to the sqrt(7)-eigenspace of g_1 + ... + g_7",
        build: spin_2a7,
        semiinvariant_degree: 8,
        derived_order: 5040,
    },
    ExternalGroup {
        id: "2s6",
        file_name: "2s6_dim4.json",
        shipped: include_str!("../../../../data/external/2s6_dim4.json"),
        provenance: "spin lifts (g_a - g_(a+1))/sqrt(2) of adjacent transpositions in the Clifford algebra \
                     on 6 generators, restricted to the sqrt(6)-eigenspace of (g_1 + ... + g_6) g_1 ... g_6",
        build: spin_2s6,
        semiinvariant_degree: 8,
        derived_order: 720,
    },
];

impl ExternalGroup {
    pub fn group(&self) -> Result<GeneratedGroup, GroupError> {
        GroupFile::from_json(self.shipped)?.to_group()
    }

    /// Group file regenerated from the construction.
    pub fn regenerate(&self) -> Result<GroupFile, GroupError> {
        let mut f = GroupFile::from_group(&GeneratedGroup::new((self.build)())?);
        f.provenance = Some(self.provenance.to_string());
        Ok(f)
    }
}

pub fn external(id: &str) -> Option<&'static ExternalGroup> {
    EXTERNAL.iter().find(|e| e.id == id)
}

fn point(i: usize) -> [usize; 2] {
    [i / 3, i % 3]
}

fn index(x: [usize; 2]) -> usize {
    3 * x[0] + x[1]
}

fn neg(i: usize) -> usize {
    let [a, b] = point(i);
    index([(3 - a) % 3, (3 - b) % 3])
}

/// Operators on functions `F_3² → Q(ω)`, as 9×9 matrices over conductor 3.
fn weil_operators() -> Vec<Vec<Vec<Cyclo>>> {
    let zero = || vec![vec![Cyclo::zero(3); 9]; 9];
    let mut ops = Vec::new();
    // f ↦ f(A⁻¹x) for generators A of GL2(F_3); entry (x, A⁻¹x) is 1
    let gl2: [[[usize; 2]; 2]; 3] = [[[1, 1], [0, 1]], [[0, 2], [1, 0]], [[1, 0], [0, 2]]];
    for a in gl2 {
        let mut m = zero();
        for x in 0..9 {
            let [u, v] = point(x);
            let y = [(a[0][0] * u + a[0][1] * v) % 3, (a[1][0] * u + a[1][1] * v) % 3];
            m[index(y)][x] = Cyclo::one(3);
        }
        ops.push(m);
    }
    let mut phase = zero();
    for x in 0..9 {
        let [u, _] = point(x);
        phase[x][x] = z(3, (u * u) as i64);
    }
    ops.push(phase);
    let mut fourier = zero();
    let third = super::build::frac(1, 3);
    for x in 0..9 {
        for y in 0..9 {
            let [a, b] = point(x);
            let [c, d] = point(y);
            fourier[x][y] = z(3, ((a * c + b * d) % 3) as i64).scale(&third);
        }
    }
    ops.push(fourier);
    ops
}

/// Representatives of the nonzero classes of `F_3²` modulo `±1`.
const REPS: [usize; 4] = [1, 3, 4, 5];

fn weil_odd() -> Vec<CycloMatrix> {
    weil_operators()
        .into_iter()
        .map(|m| {
            let rows = REPS
                .iter()
                .map(|&s| {
                    REPS.iter()
                        .map(|&r| &m[s][r] - &m[s][neg(r)])
                        .collect()
                })
                .collect();
            CycloMatrix::from_rows(rows).expect("restriction of an invertible operator")
        })
        .collect()
}

fn weil_even() -> Vec<CycloMatrix> {
    let basis = [0, 1, 3, 4, 5];
    weil_operators()
        .into_iter()
        .map(|m| {
            let rows = basis
                .iter()
                .map(|&s| {
                    basis
                        .iter()
                        .map(|&r| {
                            if r == 0 {
                                m[s][0].clone()
                            } else {
                                &m[s][r] + &m[s][neg(r)]
                            }
                        })
                        .collect()
                })
                .collect();
            CycloMatrix::from_rows(rows).expect("restriction of an invertible operator")
        })
        .collect()
}

fn kron(a: &[Vec<Cyclo>], b: &[Vec<Cyclo>]) -> Vec<Vec<Cyclo>> {
    let (n, k) = (a.len(), b.len());
    (0..n * k)
        .map(|i| (0..n * k).map(|j| &a[i / k][j / k] * &b[i % k][j % k]).collect())
        .collect()
}

/// `2^⌊n/2⌋`-dimensional matrices of `n` anticommuting involutions built
/// from Pauli tensors.
fn gammas(n: usize) -> Vec<Vec<Vec<Cyclo>>> {
    let i = z(4, 1);
    let o = int(0);
    let id = vec![vec![int(1), o.clone()], vec![o.clone(), int(1)]];
    let x = vec![vec![o.clone(), int(1)], vec![int(1), o.clone()]];
    let y = vec![vec![o.clone(), -&i], vec![i.clone(), o.clone()]];
    let zz = vec![vec![int(1), o.clone()], vec![o, int(-1)]];
    let qubits = n / 2;
    let tensor = |factors: Vec<&Vec<Vec<Cyclo>>>| {
        factors
            .into_iter()
            .fold(vec![vec![int(1)]], |acc, f| kron(&acc, f))
    };
    let mut out = Vec::new();
    for k in 0..n {
        let q = k / 2;
        let mut factors: Vec<&Vec<Vec<Cyclo>>> = Vec::new();
        for j in 0..qubits {
            factors.push(if j < q {
                &zz
            } else if j > q {
                &id
            } else if k % 2 == 0 {
                &x
            } else {
                &y
            });
        }
        if q == qubits {
            // the last generator for odd n is the product Z ⊗ … ⊗ Z
            factors = vec![&zz; qubits];
        }
        out.push(tensor(factors));
    }
    out
}

fn madd(a: &[Vec<Cyclo>], b: &[Vec<Cyclo>], s: i64) -> Vec<Vec<Cyclo>> {
    a.iter()
        .zip(b)
        .map(|(r, t)| r.iter().zip(t).map(|(x, y)| x + &y.mul_int(s)).collect())
        .collect()
}

fn mmul(a: &[Vec<Cyclo>], b: &[Vec<Cyclo>]) -> Vec<Vec<Cyclo>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(int(0), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

fn mscale(a: &[Vec<Cyclo>], c: &Cyclo) -> Vec<Vec<Cyclo>> {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

/// Basis of the kernel of `a`, one vector per free column, in reduced form.
fn nullspace(a: &[Vec<Cyclo>]) -> Vec<Vec<Cyclo>> {
    let mut m: Vec<Vec<Cyclo>> = a.to_vec();
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(r) = (row..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(row, r);
        let inv = m[row][c].inv().expect("nonzero pivot");
        m[row] = m[row].iter().map(|x| x * &inv).collect();
        for r in 0..m.len() {
            if r != row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![int(0); cols];
            v[free] = int(1);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&m[r][free];
            }
            v
        })
        .collect()
}

/// Matrices of operators commuting with `c`, restricted to the eigenspace
/// of `c` for `lambda`.
fn restrict(ops: &[Vec<Vec<Cyclo>>], c: &[Vec<Cyclo>], lambda: &Cyclo) -> Vec<CycloMatrix> {
    let n = c.len();
    let shifted: Vec<Vec<Cyclo>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { &c[i][j] - lambda } else { c[i][j].clone() })
                .collect()
        })
        .collect();
    let basis = nullspace(&shifted);
    // each basis vector has a 1 at its free coordinate and 0 at the others
    let free: Vec<usize> = basis
        .iter()
        .map(|v| {
            (0..n)
                .find(|&i| v[i].is_one() && basis.iter().filter(|w| !w[i].is_zero()).count() == 1)
                .expect("free coordinate")
        })
        .collect();
    ops.iter()
        .map(|op| {
            let images: Vec<Vec<Cyclo>> = basis
                .iter()
                .map(|v| {
                    (0..n)
                        .map(|i| (0..n).fold(int(0), |acc, k| &acc + &(&op[i][k] * &v[k])))
                        .collect()
                })
                .collect();
            let rows = free
                .iter()
                .map(|&f| images.iter().map(|img| img[f].clone()).collect())
                .collect();
            CycloMatrix::from_rows(rows).expect("restriction of an invertible operator")
        })
        .collect()
}

fn spin_2a7() -> Vec<CycloMatrix> {
    let g = gammas(7);
    let half = Cyclo::from_rational(1, &super::build::frac(1, 2));
    let lifts: Vec<Vec<Vec<Cyclo>>> = (2..7)
        .map(|c| mscale(&mmul(&madd(&g[0], &g[1], -1), &madd(&g[1], &g[c], -1)), &half))
        .collect();
    let total = g[1..].iter().fold(g[0].clone(), |acc, x| madd(&acc, x, 1));
    // √7 = −i·(i√7)
    let sqrt7 = &(-&z(28, 7)) * &sqrt_m7(28);
    restrict(&lifts, &total, &sqrt7)
}

fn spin_2s6() -> Vec<CycloMatrix> {
    let g = gammas(6);
    let sqrt2 = &z(8, 1) + &z(8, -1);
    let inv_sqrt2 = sqrt2.inv().expect("nonzero");
    let lifts: Vec<Vec<Vec<Cyclo>>> = (0..5)
        .map(|a| mscale(&madd(&g[a], &g[a + 1], -1), &inv_sqrt2))
        .collect();
    let total = g[1..].iter().fold(g[0].clone(), |acc, x| madd(&acc, x, 1));
    let chirality = g[1..].iter().fold(g[0].clone(), |acc, x| mmul(&acc, x));
    let c = mmul(&total, &chirality);
    let sqrt3 = &z(12, 1) + &z(12, -1);
    restrict(&lifts, &c, &(&sqrt2 * &sqrt3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_relations() {
        for n in [6, 7] {
            let g = gammas(n);
            for a in 0..n {
                for b in 0..n {
                    let ab = mmul(&g[a], &g[b]);
                    let ba = mmul(&g[b], &g[a]);
                    let s = madd(&ab, &ba, 1);
                    let expect = if a == b { 2 } else { 0 };
                    for (i, row) in s.iter().enumerate() {
                        for (j, x) in row.iter().enumerate() {
                            assert_eq!(*x, int(if i == j { expect } else { 0 }));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn shipped_files_match_constructions() {
        for e in EXTERNAL {
            let regen = e.regenerate().unwrap();
            let shipped = GroupFile::from_json(e.shipped).unwrap();
            assert_eq!(regen, shipped, "{}", e.id);
        }
    }
}
