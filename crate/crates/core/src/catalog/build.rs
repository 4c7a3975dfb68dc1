//! Generator matrices and defining forms of the catalogued examples and
//! primitive groups.

use num_rational::BigRational;

use crate::arith::Cyclo;
use crate::group::CycloMatrix;
use crate::poly::HomogPoly;

pub(crate) fn z(m: u32, k: i64) -> Cyclo {
    Cyclo::zeta(m, k)
}

pub(crate) fn int(v: i64) -> Cyclo {
    Cyclo::from_int(1, v)
}

pub(crate) fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub(crate) fn mat(rows: Vec<Vec<Cyclo>>) -> CycloMatrix {
    CycloMatrix::from_rows(rows).expect("catalog matrices are invertible")
}

fn sum(terms: &[(i64, Cyclo)]) -> Cyclo {
    terms
        .iter()
        .fold(int(0), |acc, (c, x)| &acc + &x.mul_int(*c))
}

/// `√5 = ε − ε² − ε³ + ε⁴` for `ε = ζ_5`, at conductor `m` (a multiple of 5).
pub(crate) fn sqrt5(m: u32) -> Cyclo {
    let e = |k: i64| z(m, k * (m / 5) as i64);
    sum(&[(1, e(1)), (-1, e(2)), (-1, e(3)), (1, e(4))])
}

/// `√−7` as the quadratic Gauss sum over `ζ_7`, at a multiple `m` of 7.
pub(crate) fn sqrt_m7(m: u32) -> Cyclo {
    let e = |k: i64| z(m, k * (m / 7) as i64);
    sum(&[(1, e(1)), (1, e(2)), (-1, e(3)), (1, e(4)), (-1, e(5)), (-1, e(6))])
}

/// `i√3 = ω − ω²` at a multiple `m` of 3.
pub(crate) fn i_sqrt3(m: u32) -> Cyclo {
    let w = |k: i64| z(m, k * (m / 3) as i64);
    &w(1) - &w(2)
}

fn block_products(blocks: &[CycloMatrix], copies: usize) -> Vec<CycloMatrix> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; copies];
    loop {
        let parts: Vec<&CycloMatrix> = idx.iter().map(|&i| &blocks[i]).collect();
        out.push(CycloMatrix::block_diagonal(&parts));
        let mut k = copies;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < blocks.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Permutation of 2×2 blocks: block `j` goes to block `perm[j]`.
fn block_perm(perm: &[usize], size: usize) -> CycloMatrix {
    let mut p = Vec::new();
    for &b in perm {
        for k in 0..size {
            p.push(b * size + k);
        }
    }
    CycloMatrix::permutation(&p)
}

pub fn ex_1_4_generators() -> Vec<CycloMatrix> {
    let m = 28;
    let e = |k: i64| z(m, 4 * k);
    let i = z(m, 7);
    let m1 = CycloMatrix::diagonal(&[&i * &e(4), &i * &e(2), &i * &e(1)]);
    let m2 = CycloMatrix::permutation(&[1, 2, 0]);
    let alpha = sqrt_m7(m).inv().expect("nonzero");
    let a = &e(1) - &e(6);
    let b = &e(2) - &e(5);
    let c = &e(4) - &e(3);
    let m3 = mat(vec![
        vec![a.clone(), b.clone(), c.clone()],
        vec![b.clone(), c.clone(), a.clone()],
        vec![c, a, b],
    ])
    .scale(&alpha);
    vec![m1, m2, m3]
}

pub fn klein_quartic() -> HomogPoly {
    HomogPoly::from_int_terms(3, 4, &[(&[3, 1, 0], 1), (&[0, 3, 1], 1), (&[1, 0, 3], 1)])
        .expect("valid form")
}

fn tau(m: u32) -> Cyclo {
    (&int(1) + &sqrt5(m)).scale(&frac(1, 2))
}

/// The fourth generator exactly as printed for the Wiman example, first row
/// `(1, τ, τ⁻¹)`; it is not unitary and has infinite order.
pub fn ex_1_6_m4_printed() -> CycloMatrix {
    let m = 15;
    let t = tau(m);
    let ti = &t - &int(1);
    mat(vec![
        vec![int(1), t.clone(), ti.clone()],
        vec![ti.clone(), t.clone(), int(1)],
        vec![t, int(-1), ti],
    ])
    .scale(&Cyclo::from_rational(1, &frac(1, 2)))
}

/// The fourth generator with first row `(1, τ⁻¹, −τ)`, the unique sign and
/// position change making the printed matrix orthogonal.
pub fn ex_1_6_m4_corrected() -> CycloMatrix {
    let m = 15;
    let t = tau(m);
    let ti = &t - &int(1);
    mat(vec![
        vec![int(1), ti.clone(), -&t],
        vec![ti.clone(), t.clone(), int(1)],
        vec![t, int(-1), ti],
    ])
    .scale(&Cyclo::from_rational(1, &frac(1, 2)))
}

pub fn ex_1_6_generators() -> Vec<CycloMatrix> {
    let m = 15;
    let zeta = |k: i64| z(m, 5 * k);
    let m1 = CycloMatrix::diagonal(&[int(1), int(-1), int(1)]);
    let m2 = CycloMatrix::permutation(&[2, 0, 1]);
    let m3 = mat(vec![
        vec![int(1), int(0), int(0)],
        vec![int(0), int(0), zeta(2)],
        vec![int(0), -&zeta(1), int(0)],
    ]);
    vec![m1, m2, m3, ex_1_6_m4_corrected()]
}

pub fn wiman_sextic() -> HomogPoly {
    HomogPoly::from_int_terms(
        3,
        6,
        &[
            (&[3, 3, 0], 10),
            (&[5, 0, 1], 9),
            (&[0, 5, 1], 9),
            (&[2, 2, 2], -45),
            (&[1, 1, 4], -135),
            (&[0, 0, 6], 27),
        ],
    )
    .expect("valid form")
}

pub fn ex_1_6_2_generators() -> Vec<CycloMatrix> {
    let m = 3;
    let w = |k: i64| z(m, k);
    let m1 = CycloMatrix::diagonal(&[int(1), w(1), w(2)]);
    let m2 = CycloMatrix::permutation(&[2, 0, 1]);
    let s = i_sqrt3(m).inv().expect("nonzero");
    let m3 = mat(vec![
        vec![int(1), int(1), int(1)],
        vec![int(1), w(1), w(2)],
        vec![int(1), w(2), w(1)],
    ])
    .scale(&s);
    // ε = −ω² is a primitive sixth root with ε² = ω, and ε⁵ = −ω
    let eps = -&w(2);
    let eps5 = -&w(1);
    let m4 = CycloMatrix::diagonal(&[eps.clone(), eps, eps5]);
    vec![m1, m2, m3, m4]
}

pub fn hessian_sextic() -> HomogPoly {
    HomogPoly::from_int_terms(
        3,
        6,
        &[
            (&[6, 0, 0], 1),
            (&[0, 6, 0], 1),
            (&[0, 0, 6], 1),
            (&[3, 3, 0], -10),
            (&[3, 0, 3], -10),
            (&[0, 3, 3], -10),
        ],
    )
    .expect("valid form")
}

pub fn ex_2_4_generators() -> Vec<CycloMatrix> {
    let i = z(4, 1);
    let m1 = CycloMatrix::permutation(&[2, 3, 0, 1]);
    let m2 = CycloMatrix::permutation(&[1, 0, 3, 2]);
    let m3 = CycloMatrix::diagonal(&[int(1), int(-1), int(-1), int(1)]);
    let m4 = CycloMatrix::diagonal(&[int(1), int(1), int(-1), int(-1)]);
    let ni = -&i;
    let o = int(0);
    let m5 = mat(vec![
        vec![ni.clone(), o.clone(), o.clone(), i.clone()],
        vec![o.clone(), int(1), int(1), o.clone()],
        vec![int(1), o.clone(), o.clone(), int(1)],
        vec![o.clone(), ni, i.clone(), o],
    ])
    .scale(&(&int(1) + &i).scale(&frac(1, 2)));
    let m6 = CycloMatrix::diagonal(&[int(1), int(1), int(1), int(-1)]);
    vec![m1, m2, m3, m4, m5, m6]
}

pub fn ex_2_4_quartic() -> HomogPoly {
    let mut terms: Vec<(Vec<u32>, i64)> = Vec::new();
    for a in 0..4 {
        let mut e = vec![0; 4];
        e[a] = 4;
        terms.push((e, 1));
        for b in a + 1..4 {
            let mut e = vec![0; 4];
            e[a] = 2;
            e[b] = 2;
            terms.push((e, -6));
        }
    }
    HomogPoly::new(4, 4, terms.into_iter().map(|(e, c)| (e, int(c)))).expect("valid form")
}

fn ex_2_6_blocks() -> Vec<CycloMatrix> {
    let m = 24;
    let i = z(m, 6);
    let half = Cyclo::from_rational(1, &frac(1, 2));
    let m1 = mat(vec![
        vec![&int(1) + &i, &int(1) + &i],
        vec![&int(-1) + &i, &int(1) - &i],
    ])
    .scale(&half);
    let m2 = mat(vec![vec![int(0), int(1)], vec![int(-1), int(0)]]);
    let m3 = CycloMatrix::diagonal(&[z(m, 1), z(m, 19)]);
    vec![m1, m2, m3]
}

pub fn ex_2_6_generators() -> Vec<CycloMatrix> {
    let mut g = block_products(&ex_2_6_blocks(), 2);
    g.push(block_perm(&[1, 0], 2));
    g
}

pub fn ex_2_6_sextic() -> HomogPoly {
    HomogPoly::from_int_terms(
        4,
        6,
        &[
            (&[5, 1, 0, 0], 1),
            (&[1, 5, 0, 0], -1),
            (&[0, 0, 5, 1], 1),
            (&[0, 0, 1, 5], -1),
        ],
    )
    .expect("valid form")
}

/// The two 2×2 generators of the central extension of `A_5` by `μ_12`.
pub fn icosahedral_blocks() -> Vec<CycloMatrix> {
    let m = 60;
    let e = |k: i64| z(m, 12 * k);
    let m1 = CycloMatrix::diagonal(&[z(m, 1), z(m, 49)]);
    let s = sqrt5(m).inv().expect("nonzero");
    let a = &e(4) - &e(1);
    let b = &e(2) - &e(3);
    let c = &e(1) - &e(4);
    let m2 = mat(vec![vec![a, b.clone()], vec![b, c]]).scale(&s);
    vec![m1, m2]
}

pub fn ex_2_12_generators() -> Vec<CycloMatrix> {
    let mut g = block_products(&icosahedral_blocks(), 2);
    g.push(block_perm(&[1, 0], 2));
    g
}

fn dodecic_block(nvars: usize, a: usize, b: usize) -> Vec<(Vec<u32>, Cyclo)> {
    let mono = |x: u32, y: u32| {
        let mut e = vec![0; nvars];
        e[a] = x;
        e[b] = y;
        e
    };
    vec![
        (mono(11, 1), int(1)),
        (mono(6, 6), int(11)),
        (mono(1, 11), int(-1)),
    ]
}

pub fn ex_2_12_dodecic() -> HomogPoly {
    let mut t = dodecic_block(4, 0, 1);
    t.extend(dodecic_block(4, 2, 3));
    HomogPoly::new(4, 12, t).expect("valid form")
}

pub fn ex_4_6_generators() -> Vec<CycloMatrix> {
    let w = |k: i64| z(3, k);
    let transposition = CycloMatrix::permutation(&[1, 0, 2, 3, 4, 5]);
    let cycle = CycloMatrix::permutation(&[1, 2, 3, 4, 5, 0]);
    let diag = CycloMatrix::diagonal(&[w(1), w(2), int(1), int(1), int(1), int(1)]);
    let third = Cyclo::from_rational(1, &frac(-1, 3));
    let rows = (0..6)
        .map(|i| {
            (0..6)
                .map(|j| if i == j { &int(1) + &third } else { third.clone() })
                .collect()
        })
        .collect();
    vec![transposition, cycle, diag, mat(rows)]
}

pub fn todd_sextic() -> HomogPoly {
    let mut terms: Vec<(Vec<u32>, Cyclo)> = Vec::new();
    for a in 0..6 {
        let mut e = vec![0; 6];
        e[a] = 6;
        terms.push((e, int(1)));
        for b in a + 1..6 {
            let mut e = vec![0; 6];
            e[a] = 3;
            e[b] = 3;
            terms.push((e, int(-10)));
        }
    }
    terms.push((vec![1; 6], int(-180)));
    HomogPoly::new(6, 6, terms).expect("valid form")
}

pub fn ex_4_12_generators() -> Vec<CycloMatrix> {
    let mut g = block_products(&icosahedral_blocks(), 3);
    g.push(block_perm(&[1, 0, 2], 2));
    g.push(block_perm(&[1, 2, 0], 2));
    g
}

pub fn ex_4_12_dodecic() -> HomogPoly {
    let mut t = dodecic_block(6, 0, 1);
    t.extend(dodecic_block(6, 2, 3));
    t.extend(dodecic_block(6, 4, 5));
    HomogPoly::new(6, 12, t).expect("valid form")
}

/// Diagonal `ζ_d`-scalings and all permutations of `N = n + 2` coordinates.
pub fn fermat_generators(nvars: usize, d: u32) -> Vec<CycloMatrix> {
    let mut diag = vec![int(1); nvars];
    diag[0] = z(d, 1);
    let mut gens = vec![CycloMatrix::diagonal(&diag)];
    if nvars > 1 {
        let swap: Vec<usize> = (0..nvars)
            .map(|i| match i {
                0 => 1,
                1 => 0,
                _ => i,
            })
            .collect();
        let cyc: Vec<usize> = (0..nvars).map(|i| (i + 1) % nvars).collect();
        gens.push(CycloMatrix::permutation(&swap));
        gens.push(CycloMatrix::permutation(&cyc));
    }
    gens
}

/// Quaternion `a + bi + cj + dk` as the complex matrix
/// `[[a + bi, c + di], [−c + di, a − bi]]`, coefficients at conductor `m`.
fn quaternion(m: u32, a: &Cyclo, b: &Cyclo, c: &Cyclo, d: &Cyclo) -> CycloMatrix {
    let i = z(m, (m / 4) as i64);
    mat(vec![
        vec![a + &(b * &i), c + &(d * &i)],
        vec![&(-c) + &(d * &i), a - &(b * &i)],
    ])
}

/// Binary tetrahedral group `2.A_4` in `SU(2)`.
pub fn binary_tetrahedral() -> Vec<CycloMatrix> {
    let m = 4;
    let h = Cyclo::from_rational(1, &frac(1, 2));
    let (o, l) = (int(0), int(1));
    vec![
        quaternion(m, &o, &l, &o, &o),
        quaternion(m, &o, &o, &l, &o),
        quaternion(m, &h, &h, &h, &h),
    ]
}

/// Binary octahedral group `2.S_4`: adds `(1 + i)/√2`.
pub fn binary_octahedral() -> Vec<CycloMatrix> {
    let mut g: Vec<CycloMatrix> = binary_tetrahedral().iter().map(|x| x.lift(8)).collect();
    g.push(CycloMatrix::diagonal(&[z(8, 1), z(8, -1)]));
    g
}

/// Binary icosahedral group `2.A_5`: `i`, `j` and `(τ + i + τ⁻¹ j)/2`.
pub fn binary_icosahedral() -> Vec<CycloMatrix> {
    let m = 20;
    let t = tau(m);
    let ti = &t - &int(1);
    let h = frac(1, 2);
    let (o, l) = (int(0), int(1));
    vec![
        quaternion(m, &o, &l, &o, &o),
        quaternion(m, &o, &o, &l, &o),
        quaternion(m, &t.scale(&h), &l.scale(&h), &ti.scale(&h), &o),
    ]
}

/// Quaternion group `Q_8`.
pub fn quaternion_group() -> Vec<CycloMatrix> {
    binary_tetrahedral()[..2].to_vec()
}

/// The rotation group of the icosahedron in `SO(3)`: the cyclic coordinate
/// permutation and the corrected Wiman-example generator.
pub fn icosahedral_rotations() -> Vec<CycloMatrix> {
    vec![CycloMatrix::permutation(&[2, 0, 1]), ex_1_6_m4_corrected()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots() {
        assert_eq!(&sqrt5(15) * &sqrt5(15), int(5));
        assert_eq!(&sqrt_m7(28) * &sqrt_m7(28), int(-7));
        assert_eq!(&i_sqrt3(3) * &i_sqrt3(3), int(-3));
        let t = tau(15);
        assert_eq!(&(&t * &t) - &t, int(1));
    }

    #[test]
    fn printed_wiman_generator_is_not_unitary() {
        assert!(!ex_1_6_m4_printed().is_unitary());
        assert!(ex_1_6_m4_corrected().is_unitary());
        assert!(ex_1_6_m4_corrected().det().is_one());
    }

    #[test]
    fn generator_counts() {
        assert_eq!(ex_2_6_generators().len(), 10);
        assert_eq!(ex_2_12_generators().len(), 5);
        assert_eq!(ex_4_12_generators().len(), 10);
        assert_eq!(todd_sextic().terms().len(), 6 + 15 + 1);
    }
}
