use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::arith::{format_literal, Cyclo};
use crate::group::CycloMatrix;

use super::PolyError;

/// Exponent vector, ordered graded-lexicographically with `x_0` largest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A nonzero homogeneous form in `nvars` variables over `Q(ζ_m)`.
#[derive(Clone)]
pub struct HomogPoly {
    nvars: usize,
    degree: u32,
    conductor: u32,
    terms: BTreeMap<Monomial, Cyclo>,
}

// equality ignores the conductor the coefficients happen to be stored at
impl PartialEq for HomogPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.degree == other.degree && self.terms == other.terms
    }
}

impl Eq for HomogPoly {}

impl HomogPoly {
    /// Collects terms, summing repeated monomials and dropping zeros.
    pub fn new(
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Cyclo)>,
    ) -> Result<Self, PolyError> {
        let mut map: BTreeMap<Monomial, Cyclo> = BTreeMap::new();
        let mut conductor = 1u32;
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(PolyError::Malformed(format!(
                    "exponent vector of length {} for {nvars} variables",
                    exps.len()
                )));
            }
            let mono = Monomial(exps);
            if mono.degree() != degree {
                return Err(PolyError::NotHomogeneous {
                    expected: degree,
                    found: mono.degree(),
                });
            }
            conductor = num_integer::lcm(conductor, c.conductor());
            match map.get_mut(&mono) {
                Some(acc) => *acc = &*acc + &c,
                None => {
                    map.insert(mono, c);
                }
            }
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(PolyError::Empty);
        }
        for c in map.values_mut() {
            *c = c.lift(conductor);
        }
        Ok(Self {
            nvars,
            degree,
            conductor,
            terms: map,
        })
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_terms(nvars: usize, degree: u32, terms: &[(&[u32], i64)]) -> Result<Self, PolyError> {
        Self::new(
            nvars,
            degree,
            terms.iter().map(|(e, c)| (e.to_vec(), Cyclo::from_int(1, *c))),
        )
    }

    /// `Σ x_i^d`.
    pub fn fermat(nvars: usize, degree: u32) -> Self {
        Self::new(
            nvars,
            degree,
            (0..nvars).map(|i| {
                let mut e = vec![0; nvars];
                e[i] = degree;
                (e, Cyclo::one(1))
            }),
        )
        .expect("fermat form is valid")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Cyclo> {
        &self.terms
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&Cyclo> {
        self.terms.get(&Monomial(exps.to_vec()))
    }

    /// Exponent rows of all terms in serialization order.
    pub fn exponent_rows(&self) -> Vec<Vec<u32>> {
        self.terms.keys().map(|m| m.0.clone()).collect()
    }

    pub fn scale(&self, c: &Cyclo) -> Option<Self> {
        if c.is_zero() {
            return None;
        }
        Self::new(
            self.nvars,
            self.degree,
            self.terms.iter().map(|(m, x)| (m.0.clone(), x * c)),
        )
        .ok()
    }

    /// `f(A x)`: substitutes `x_i ↦ Σ_j A_ij x_j`.
    pub fn substitute(&self, a: &CycloMatrix) -> Result<Self, PolyError> {
        let n = self.nvars;
        if a.dim() != n {
            return Err(PolyError::DimensionMismatch {
                matrix: a.dim(),
                nvars: n,
            });
        }
        let m = num_integer::lcm(self.conductor, a.conductor());
        let linear: Vec<Sparse> = (0..n)
            .map(|i| {
                let mut s = Sparse::new();
                for j in 0..n {
                    let c = a.get(i, j);
                    if !c.is_zero() {
                        let mut e = vec![0; n];
                        e[j] = 1;
                        s.insert(e, c.lift(m));
                    }
                }
                s
            })
            .collect();
        // cache powers of each linear form
        let mut powers: Vec<Vec<Sparse>> = linear
            .iter()
            .map(|l| {
                let mut one = Sparse::new();
                one.insert(vec![0; n], Cyclo::one(m));
                vec![one, l.clone()]
            })
            .collect();
        let mut out = Sparse::new();
        for (mono, coeff) in &self.terms {
            let mut acc = Sparse::new();
            acc.insert(vec![0; n], coeff.lift(m));
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = sparse_mul(powers[i].last().unwrap(), &linear[i]);
                    powers[i].push(next);
                }
                acc = sparse_mul(&acc, &powers[i][e as usize]);
            }
            for (k, v) in acc {
                let slot = out.entry(k).or_insert_with(|| Cyclo::zero(m));
                *slot = &*slot + &v;
            }
        }
        Self::new(n, self.degree, out).map_err(|e| match e {
            PolyError::Empty => PolyError::Precondition(
                "substitution by a singular matrix annihilated the form".into(),
            ),
            e => e,
        })
    }

    /// Rendering in the literal syntax, e.g. `(1*z^0)*x0^3*x1 + …`.
    pub fn to_text(&self) -> String {
        self.terms
            .iter()
            .map(|(m, c)| format!("({})*{}", format_literal(c), m))
            .join(" + ")
    }
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

type Sparse = BTreeMap<Vec<u32>, Cyclo>;

fn sparse_mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let prod = ca * cb;
            match out.get_mut(&e) {
                Some(slot) => *slot = &*slot + &prod,
                None => {
                    out.insert(e, prod);
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `g·f = f(g⁻¹ x)`.
pub fn act(g: &CycloMatrix, f: &HomogPoly) -> Result<HomogPoly, PolyError> {
    if g.dim() != f.nvars() {
        return Err(PolyError::DimensionMismatch {
            matrix: g.dim(),
            nvars: f.nvars(),
        });
    }
    f.substitute(&g.inverse()?)
}

/// True when every generator fixes `f`.
pub fn is_invariant(gens: &[CycloMatrix], f: &HomogPoly) -> Result<bool, PolyError> {
    for g in gens {
        if act(g, f)? != *f {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-generator scalars `χ(g)` with `g·f = χ(g) f`, or `None` when some
/// image is not proportional to `f`.
pub fn semi_invariant_character(
    gens: &[CycloMatrix],
    f: &HomogPoly,
) -> Result<Option<Vec<Cyclo>>, PolyError> {
    let (lead, lead_c) = f.terms.iter().next().expect("nonzero form");
    let lead_inv = lead_c.inv().expect("nonzero coefficient");
    let mut chars = Vec::with_capacity(gens.len());
    for g in gens {
        let h = act(g, f)?;
        let Some(hc) = h.terms.get(lead) else {
            return Ok(None);
        };
        let chi = hc * &lead_inv;
        match f.scale(&chi) {
            Some(scaled) if scaled == h => chars.push(chi),
            _ => return Ok(None),
        }
    }
    Ok(Some(chars))
}

/// Per-variable witnesses for the necessary smoothness condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothReport {
    /// For each variable, the witnessing monomial `x_j^d` or `x_j^{d-1} x_k`.
    pub witnesses: Vec<Option<Vec<u32>>>,
}

impl SmoothReport {
    pub fn pass(&self) -> bool {
        self.witnesses.iter().all(Option::is_some)
    }

    pub fn failing(&self) -> Vec<usize> {
        self.witnesses
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_none())
            .map(|(j, _)| j)
            .collect()
    }
}

/// Checks each variable has a monomial `x_j^d` or `x_j^{d-1} x_k` (`k ≠ j`);
/// witnesses prefer `x_j^d`, then the smallest `k`.
pub fn smoothness_necessary(f: &HomogPoly) -> SmoothReport {
    let n = f.nvars();
    let d = f.degree();
    let witnesses = (0..n)
        .map(|j| {
            let mut pure = vec![0; n];
            pure[j] = d;
            if f.coeff(&pure).is_some() {
                return Some(pure);
            }
            (0..n).filter(|&k| k != j).find_map(|k| {
                let mut e = vec![0; n];
                e[j] = d - 1;
                e[k] = 1;
                f.coeff(&e).map(|_| e)
            })
        })
        .collect();
    SmoothReport { witnesses }
}

/// True when for every `k`-subset `S` of variables some monomial of `f`
/// involves none of them.
pub fn avoids_variables(f: &HomogPoly, k: usize) -> Result<bool, PolyError> {
    let n = f.nvars();
    if k == 0 || k >= n {
        return Err(PolyError::Precondition(format!(
            "need 0 < k < {n}, got k = {k}"
        )));
    }
    let supports: Vec<Vec<usize>> = f
        .terms
        .keys()
        .map(|m| (0..n).filter(|&i| m.0[i] > 0).collect())
        .collect();
    Ok((0..n).combinations(k).all(|s| {
        supports
            .iter()
            .any(|sup| sup.iter().all(|i| !s.contains(i)))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein() -> HomogPoly {
        HomogPoly::from_int_terms(3, 4, &[(&[3, 1, 0], 1), (&[0, 3, 1], 1), (&[1, 0, 3], 1)]).unwrap()
    }

    #[test]
    fn grlex_order() {
        let f = HomogPoly::from_int_terms(2, 2, &[(&[0, 2], 1), (&[1, 1], 1), (&[2, 0], 1)]).unwrap();
        let rows = f.exponent_rows();
        assert_eq!(rows, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn identity_and_scalar_action() {
        let f = klein();
        assert_eq!(act(&CycloMatrix::identity(3, 1), &f).unwrap(), f);
        let c = Cyclo::zeta(8, 1);
        let g = CycloMatrix::scalar(3, &c);
        let expected = f.scale(&c.pow(-4).unwrap()).unwrap();
        assert_eq!(act(&g, &f).unwrap(), expected);
    }

    #[test]
    fn cyclic_permutation_fixes_klein() {
        let p = CycloMatrix::permutation(&[1, 2, 0]);
        assert!(is_invariant(&[p], &klein()).unwrap());
    }

    #[test]
    fn sextic_character() {
        // x^5 y - x y^5 under diag(ζ8, ζ8^-1)
        let f = HomogPoly::from_int_terms(2, 6, &[(&[5, 1], 1), (&[1, 5], -1)]).unwrap();
        let g = CycloMatrix::diagonal(&[Cyclo::zeta(8, 1), Cyclo::zeta(8, -1)]);
        let chi = semi_invariant_character(&[g], &f).unwrap().unwrap();
        assert_eq!(chi[0], Cyclo::from_int(8, -1));
    }

    #[test]
    fn smoothness_conditions() {
        assert!(smoothness_necessary(&HomogPoly::fermat(4, 5)).pass());
        let k = smoothness_necessary(&klein());
        assert!(k.pass());
        assert_eq!(k.witnesses[0], Some(vec![3, 1, 0]));
        let bad = HomogPoly::from_int_terms(2, 3, &[(&[3, 0], 1)]).unwrap();
        assert_eq!(smoothness_necessary(&bad).failing(), vec![1]);
    }

    #[test]
    fn avoid_sets() {
        let f = HomogPoly::from_int_terms(3, 2, &[(&[1, 1, 0], 1), (&[1, 0, 1], 1)]).unwrap();
        assert!(!avoids_variables(&f, 1).unwrap());
        assert!(avoids_variables(&HomogPoly::fermat(4, 3), 2).unwrap());
        assert!(avoids_variables(&f, 0).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let g = CycloMatrix::identity(2, 1);
        assert!(matches!(
            act(&g, &klein()),
            Err(PolyError::DimensionMismatch { matrix: 2, nvars: 3 })
        ));
    }
}
