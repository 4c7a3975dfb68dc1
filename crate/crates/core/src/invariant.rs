//! Molien series, Reynolds-operator bases of invariant forms, and smallest
//! degrees of semi-invariants.

use std::collections::{BTreeMap, HashMap};

use num_integer::binomial;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{mod_inv, ArithError, Cyclo};
use crate::group::{
    enumerate, enumerate_exact, ChainElement, CycloMatrix, FpMat, GeneratedGroup, GroupError,
    GroupOptions, Reduced, StabChain, Tracked,
};
use crate::poly::{HomogPoly, PolyError};

pub const DEFAULT_DEGREE_CAP: u32 = 24;
/// Largest group averaged in exact cyclotomic arithmetic.
pub const EXACT_MOLIEN_MAX: usize = 5000;
/// Largest number of degree-`k` monomials a Reynolds basis is computed for.
pub const BASIS_MONOMIAL_CAP: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("{what} exceeds the cap {cap}")]
    CapExceeded { what: String, cap: usize },
    #[error("averaged Molien coefficient at degree {degree} is not a non-negative integer")]
    NonIntegral { degree: u32 },
    #[error("Molien prefixes disagree at primes {p1} and {p2}")]
    PrimeDisagreement { p1: u64, p2: u64 },
    #[error("no semi-invariant of positive degree up to {0}")]
    NoneBelowCap(u32),
    #[error("Reynolds rank {rank} disagrees with the trace {trace}")]
    RankMismatch { rank: usize, trace: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MolienMethod {
    /// Exact averaging over the enumerated group in `Q(ζ_m)`.
    Exact,
    /// Averaging modulo two primes exceeding every coefficient bound.
    Modular,
}

/// Dimensions of the spaces of invariant forms of degree `0..=cap`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MolienPrefix {
    pub group_order: u128,
    pub coefficients: Vec<u64>,
    pub method: MolienMethod,
}

impl MolienPrefix {
    pub fn dimension(&self, k: u32) -> Option<u64> {
        self.coefficients.get(k as usize).copied()
    }

    /// Positive degrees carrying a nonzero invariant.
    pub fn positive_degrees(&self) -> Vec<u32> {
        (1..self.coefficients.len())
            .filter(|&k| self.coefficients[k] > 0)
            .map(|k| k as u32)
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct InvariantOptions {
    pub group: GroupOptions,
    pub exact_max: usize,
    pub basis_cap: usize,
}

impl Default for InvariantOptions {
    fn default() -> Self {
        Self {
            group: GroupOptions::default(),
            exact_max: EXACT_MOLIEN_MAX,
            basis_cap: BASIS_MONOMIAL_CAP,
        }
    }
}

fn monomial_count(nvars: usize, k: u32) -> u128 {
    binomial((nvars + k as usize - 1) as u128, k as u128)
}

/// Molien coefficients up to degree `cap`: exact averaging for small groups,
/// modular averaging otherwise.
pub fn molien_series(
    g: &GeneratedGroup,
    cap: u32,
    opts: &InvariantOptions,
) -> Result<MolienPrefix, InvariantError> {
    let red = g.reduce_from(101)?;
    let probe = enumerate(&red.gens, &opts.group.closure_limits())?;
    if probe.order() <= opts.exact_max {
        molien_exact(g, &red, cap, opts)
    } else {
        molien_modular(g, cap, opts)
    }
}

/// Exact averaging of `1/det(I − t·g)` over the enumerated group.
pub fn molien_exact(
    g: &GeneratedGroup,
    red: &Reduced,
    cap: u32,
    opts: &InvariantOptions,
) -> Result<MolienPrefix, InvariantError> {
    let closure = enumerate_exact(&red.gens, g.generators(), &opts.group.closure_limits())?;
    let m = g.conductor();
    let len = cap as usize + 1;
    let mut total = vec![Cyclo::zero(m); len];
    // elements with equal det(I − t·g) modulo p usually agree exactly, so
    // series are cached per residue and reused after an exact comparison
    let mut seen: HashMap<Vec<u32>, Vec<(Vec<Cyclo>, Vec<Cyclo>)>> = HashMap::new();
    let elements = closure.exact().expect("exact closure carries matrices");
    for (i, a) in elements.iter().enumerate() {
        let q = one_minus_t_exact(a);
        let bucket = seen.entry(closure.element(i).det_one_minus_t()).or_default();
        let pos = match bucket.iter().position(|(r, _)| *r == q) {
            Some(pos) => pos,
            None => {
                let s = series_inverse(&q, len);
                bucket.push((q, s));
                bucket.len() - 1
            }
        };
        for (t, s) in total.iter_mut().zip(&bucket[pos].1) {
            *t = &*t + s;
        }
    }
    let order = closure.order();
    let mut coefficients = Vec::with_capacity(len);
    for (k, t) in total.iter().enumerate() {
        let v = t
            .as_rational()
            .map(|r| r / num_rational::BigRational::from_integer(order.into()))
            .filter(|r| r.is_integer() && !r.numer().is_negative())
            .ok_or(InvariantError::NonIntegral { degree: k as u32 })?;
        coefficients.push(
            u64::try_from(v.to_integer()).map_err(|_| InvariantError::NonIntegral { degree: k as u32 })?,
        );
    }
    Ok(MolienPrefix {
        group_order: order as u128,
        coefficients,
        method: MolienMethod::Exact,
    })
}

/// Coefficients of `det(I − t·A)`, constant term first.
fn one_minus_t_exact(a: &CycloMatrix) -> Vec<Cyclo> {
    let chi = a.charpoly();
    let n = a.dim();
    (0..=n).map(|j| chi[n - j].clone()).collect()
}

/// First `len` coefficients of `1/q(t)` for `q(0) = 1`.
fn series_inverse(q: &[Cyclo], len: usize) -> Vec<Cyclo> {
    let m = q[0].conductor();
    let mut a: Vec<Cyclo> = Vec::with_capacity(len);
    for k in 0..len {
        if k == 0 {
            a.push(Cyclo::one(m));
            continue;
        }
        let mut acc = Cyclo::zero(m);
        for j in 1..q.len().min(k + 1) {
            acc = &acc - &(&q[j] * &a[k - j]);
        }
        a.push(acc);
    }
    a
}

fn series_inverse_mod(q: &[u32], len: usize, p: u64) -> Vec<u64> {
    let mut a: Vec<u64> = Vec::with_capacity(len);
    for k in 0..len {
        if k == 0 {
            a.push(1);
            continue;
        }
        let mut acc = 0u64;
        for j in 1..q.len().min(k + 1) {
            acc = (acc + q[j] as u64 * a[k - j]) % p;
        }
        a.push((p - acc) % p);
    }
    a
}

fn molien_at(red: &Reduced, cap: u32, opts: &InvariantOptions) -> Result<(u128, Vec<u64>), InvariantError> {
    let p = red.map.prime();
    let closure = enumerate(&red.gens, &opts.group.closure_limits())?;
    let order = closure.order() as u64;
    let mut classes: HashMap<Vec<u32>, u64> = HashMap::new();
    for x in closure.iter() {
        *classes.entry(x.det_one_minus_t()).or_default() += 1;
    }
    let len = cap as usize + 1;
    let mut total = vec![0u64; len];
    for (q, count) in classes {
        let s = series_inverse_mod(&q, len, p);
        for (t, v) in total.iter_mut().zip(s) {
            *t = (*t + v * (count % p)) % p;
        }
    }
    let inv = mod_inv(order % p, p).ok_or(ArithError::NonInvertibleDenominator { prime: p })?;
    Ok((order as u128, total.into_iter().map(|t| t * inv % p).collect()))
}

/// Modular averaging at two primes `p ≡ 1 (mod m)` exceeding the group order
/// and the number of monomials of degree `cap`, where the residues are the
/// dimensions themselves.
pub fn molien_modular(
    g: &GeneratedGroup,
    cap: u32,
    opts: &InvariantOptions,
) -> Result<MolienPrefix, InvariantError> {
    let bound = monomial_count(g.dim(), cap).max(101);
    if bound >= (1u128 << 31) {
        return Err(InvariantError::CapExceeded {
            what: "monomial count".into(),
            cap: 1 << 31,
        });
    }
    let mut red = g.reduce_from(bound as u64 + 1)?;
    let probe = enumerate(&red.gens, &opts.group.closure_limits())?;
    if probe.order() as u64 >= red.map.prime() {
        red = g.reduce_from(probe.order() as u64 + 1)?;
    }
    let red2 = g.reduce_from(red.map.prime() + 1)?;
    let (order, c1) = molien_at(&red, cap, opts)?;
    let (order2, c2) = molien_at(&red2, cap, opts)?;
    if order != order2 || c1 != c2 {
        return Err(InvariantError::PrimeDisagreement {
            p1: red.map.prime(),
            p2: red2.map.prime(),
        });
    }
    if c1.first() != Some(&1) {
        return Err(InvariantError::NonIntegral { degree: 0 });
    }
    Ok(MolienPrefix {
        group_order: order,
        coefficients: c1,
        method: MolienMethod::Modular,
    })
}

/// Dimension of the space of invariant forms of degree `k`.
pub fn invariant_dimension(
    g: &GeneratedGroup,
    k: u32,
    opts: &InvariantOptions,
) -> Result<u64, InvariantError> {
    Ok(molien_series(g, k, opts)?.coefficients[k as usize])
}

/// Monomials of degree `k` in `n` variables, largest exponent of `x0` first.
fn monomials(n: usize, k: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e);
            rec(n, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

/// Dense action of `F_p` matrices on forms of degree `k`.
struct SymPower {
    n: usize,
    p: u64,
    /// monomials per degree `0..=k`
    monos: Vec<Vec<Vec<u32>>>,
    /// `up[j][a][v]`: index of `monos[j][a] + e_v` in degree `j + 1`
    up: Vec<Vec<Vec<usize>>>,
}

impl SymPower {
    fn new(n: usize, k: u32, p: u64) -> Self {
        let monos: Vec<Vec<Vec<u32>>> = (0..=k).map(|j| monomials(n, j)).collect();
        let mut up = Vec::new();
        for j in 0..k as usize {
            let index: HashMap<&Vec<u32>, usize> =
                monos[j + 1].iter().enumerate().map(|(i, m)| (m, i)).collect();
            let table = monos[j]
                .iter()
                .map(|m| {
                    (0..n)
                        .map(|v| {
                            let mut e = m.clone();
                            e[v] += 1;
                            index[&e]
                        })
                        .collect()
                })
                .collect();
            up.push(table);
        }
        Self { n, p, monos, up }
    }

    fn size(&self) -> usize {
        self.monos.last().map_or(1, Vec::len)
    }

    /// Column `b` holds the coefficients of `m_b(A x)`.
    fn matrix(&self, a: &FpMat) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut images: Vec<Vec<u64>> = vec![vec![1]];
        for j in 0..self.monos.len() - 1 {
            let width = self.monos[j + 1].len();
            let next: Vec<Vec<u64>> = self.monos[j + 1]
                .iter()
                .map(|b| {
                    let v = b.iter().position(|&e| e > 0).expect("positive degree");
                    let mut lower = b.clone();
                    lower[v] -= 1;
                    let ai = self.monos[j]
                        .binary_search_by(|m| lower.cmp(m))
                        .expect("monomial listed");
                    let mut out = vec![0u64; width];
                    for (c, &coeff) in images[ai].iter().enumerate() {
                        if coeff == 0 {
                            continue;
                        }
                        for w in 0..self.n {
                            let x = a.get(v, w) as u64;
                            if x != 0 {
                                let slot = &mut out[self.up[j][c][w]];
                                *slot = (*slot + coeff * x) % p;
                            }
                        }
                    }
                    out
                })
                .collect();
            images = next;
        }
        images
    }
}

fn mat_mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    // column-major: result column j = a applied to column j of b
    b.iter()
        .map(|col| {
            let mut out = vec![0u64; a.len()];
            for (k, &x) in col.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (o, &y) in out.iter_mut().zip(&a[k]) {
                    *o = (*o + x * y) % p;
                }
            }
            out
        })
        .collect()
}

/// Greedy independent columns modulo `p`.
fn pivot_columns(cols: &[Vec<u64>], p: u64) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut pivots = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        for (lead, b) in &basis {
            let c = v[*lead];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + (p - c) * y) % p;
                }
            }
        }
        if let Some(lead) = v.iter().position(|&x| x != 0) {
            let inv = mod_inv(v[lead], p).expect("prime modulus");
            for x in v.iter_mut() {
                *x = *x * inv % p;
            }
            for (_, b) in basis.iter_mut() {
                let c = b[lead];
                if c != 0 {
                    for (x, y) in b.iter_mut().zip(&v) {
                        *x = (*x + (p - c) * y) % p;
                    }
                }
            }
            basis.push((lead, v));
            pivots.push(j);
        }
    }
    pivots
}

/// A basis of the invariant forms of degree `k`, as Reynolds images
/// `Σ_g m(g x)` of monomials `m`. The sum runs over a stabilizer chain as
/// nested sums over its transversals, the monomials are selected modulo a
/// prime, and only the selected images are computed exactly. Each element
/// is scaled to have leading coefficient 1.
pub fn reynolds_basis(
    g: &GeneratedGroup,
    k: u32,
    opts: &InvariantOptions,
) -> Result<Vec<HomogPoly>, InvariantError> {
    let n = g.dim();
    let size = monomial_count(n, k);
    if size > opts.basis_cap as u128 {
        return Err(InvariantError::CapExceeded {
            what: format!("{size} monomials of degree {k}"),
            cap: opts.basis_cap,
        });
    }
    let mut lower = (size as u64 + 1).max(1000);
    let (red, chain) = loop {
        let red = g.reduce_from(lower)?;
        let p = red.map.prime() as u32;
        let m = g.conductor();
        let gens = red
            .gens
            .iter()
            .zip(g.generators())
            .map(|(a, b)| Tracked::new(a.clone(), b.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let id = Tracked::new(FpMat::identity(n, p), CycloMatrix::identity(n, m))?;
        let chain = StabChain::build(&gens, id, opts.group.bsgs_options())?;
        if chain.order() % red.map.prime() as u128 != 0 {
            break (red, chain);
        }
        lower = red.map.prime() + 1;
    };
    let p = red.map.prime();
    let sym = SymPower::new(n, k, p);
    let mut total: Option<Vec<Vec<u64>>> = None;
    for level in chain.transversals() {
        let mut sum = vec![vec![0u64; sym.size()]; sym.size()];
        for u in level {
            let s = sym.matrix(u.fp());
            for (a, b) in sum.iter_mut().zip(&s) {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = (*x + y) % p;
                }
            }
        }
        total = Some(match total {
            None => sum,
            Some(t) => mat_mul_mod(&sum, &t, p),
        });
    }
    let total = total.unwrap_or_else(|| {
        (0..sym.size())
            .map(|j| {
                let mut c = vec![0; sym.size()];
                c[j] = 1;
                c
            })
            .collect()
    });
    let pivots = pivot_columns(&total, p);
    let trace = (0..total.len()).fold(0u64, |acc, j| (acc + total[j][j]) % p);
    let order = (chain.order() % p as u128) as u64;
    let trace = trace * mod_inv(order, p).expect("p does not divide the order") % p;
    if trace != pivots.len() as u64 {
        return Err(InvariantError::RankMismatch {
            rank: pivots.len(),
            trace,
        });
    }
    let monos = &sym.monos[k as usize];
    let m = g.conductor();
    pivots
        .into_iter()
        .map(|j| {
            let mut f = HomogPoly::new(n, k, [(monos[j].clone(), Cyclo::one(m))])?;
            for level in chain.transversals() {
                f = transversal_sum(&f, level)?;
            }
            let lead = f.terms().values().next().expect("nonzero image").inv()?;
            Ok(f.scale(&lead).expect("nonzero scale"))
        })
        .collect()
}

fn transversal_sum(f: &HomogPoly, level: &[Tracked]) -> Result<HomogPoly, InvariantError> {
    let mut acc: BTreeMap<Vec<u32>, Cyclo> = BTreeMap::new();
    for u in level {
        let image = f.substitute(&u.exact)?;
        for (mono, c) in image.terms() {
            match acc.get_mut(&mono.0) {
                Some(slot) => *slot = &*slot + c,
                None => {
                    acc.insert(mono.0.clone(), c.clone());
                }
            }
        }
    }
    Ok(HomogPoly::new(f.nvars(), f.degree(), acc)?)
}

/// Positive degrees up to `cap` carrying a semi-invariant: the positive
/// degrees of the Molien series of the derived subgroup.
pub fn semiinvariant_degrees(
    g: &GeneratedGroup,
    cap: u32,
    opts: &InvariantOptions,
) -> Result<Vec<u32>, InvariantError> {
    let derived = g.derived_subgroup(&opts.group)?;
    Ok(molien_series(&derived, cap, opts)?.positive_degrees())
}

pub fn smallest_semiinvariant_degree(
    g: &GeneratedGroup,
    cap: u32,
    opts: &InvariantOptions,
) -> Result<u32, InvariantError> {
    semiinvariant_degrees(g, cap, opts)?
        .first()
        .copied()
        .ok_or(InvariantError::NoneBelowCap(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build;
    use crate::poly::is_invariant;

    fn group(gens: Vec<CycloMatrix>) -> GeneratedGroup {
        GeneratedGroup::new(gens).unwrap()
    }

    #[test]
    fn trivial_group_counts_monomials() {
        let g = group(vec![CycloMatrix::identity(3, 1)]);
        let s = molien_series(&g, 6, &InvariantOptions::default()).unwrap();
        for k in 0..=6u32 {
            assert_eq!(s.coefficients[k as usize] as u128, monomial_count(3, k));
        }
        let basis = reynolds_basis(&g, 1, &InvariantOptions::default()).unwrap();
        assert_eq!(basis.len(), 3);
    }

    #[test]
    fn minus_identity_kills_odd_degrees() {
        let g = group(vec![CycloMatrix::scalar(2, &Cyclo::from_int(1, -1))]);
        let s = molien_series(&g, 9, &InvariantOptions::default()).unwrap();
        for k in (1..=9).step_by(2) {
            assert_eq!(s.coefficients[k], 0);
        }
        assert_eq!(s.coefficients[2], 3);
    }

    #[test]
    fn exact_and_modular_agree() {
        let g = group(build::binary_octahedral());
        let opts = InvariantOptions::default();
        let red = g.reduce_from(101).unwrap();
        let a = molien_exact(&g, &red, 12, &opts).unwrap();
        let b = molien_modular(&g, 12, &opts).unwrap();
        assert_eq!(a.coefficients, b.coefficients);
        assert_eq!(a.positive_degrees()[0], 8);
    }

    #[test]
    fn quaternion_reynolds_matches_molien() {
        let g = group(build::quaternion_group());
        let opts = InvariantOptions::default();
        for k in 0..=6 {
            let basis = reynolds_basis(&g, k, &opts).unwrap();
            assert_eq!(basis.len() as u64, invariant_dimension(&g, k, &opts).unwrap());
            for f in &basis {
                assert!(is_invariant(g.generators(), f).unwrap());
            }
        }
    }
}
