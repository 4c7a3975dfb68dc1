//! The partition bound calculus: `Ξ(N)`, `B(π, d)`, exceptional partitions
//! and the large-`N` sweep showing only the Fermat partition survives.
//!
//! `B(π, d) = μ₁!⋯μ_N! · ∏ Ξ(block) · d^r` bounds the order of the linear
//! automorphism group of a degree-`d` form whose symmetry group has
//! primitive-decomposition partition `π` with `r` blocks. All comparisons are
//! exact integer comparisons; ratios are rendered only for output.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("degree must be at least 3, got {0}")]
    DegreeTooSmall(u32),
    #[error("the Fermat partition (1^{0}) is excluded")]
    FermatPartition(u32),
    #[error("partition {0} is not exceptional for degree 3")]
    NotExceptional(Partition),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A partition of `N` into positive block sizes, stored non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    blocks: Vec<u32>,
}

impl Partition {
    pub fn new(mut blocks: Vec<u32>) -> Result<Self, BoundError> {
        if blocks.is_empty() {
            return Err(BoundError::InvalidPartition("no blocks".into()));
        }
        if blocks.contains(&0) {
            return Err(BoundError::InvalidPartition("zero block size".into()));
        }
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { blocks })
    }

    /// The Fermat partition `(1^n)`.
    pub fn fermat(n: u32) -> Self {
        Self {
            blocks: vec![1; n as usize],
        }
    }

    pub fn blocks(&self) -> &[u32] {
        &self.blocks
    }

    /// `N`, the integer being partitioned.
    pub fn total(&self) -> u32 {
        self.blocks.iter().sum()
    }

    /// Number of blocks `r`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_fermat(&self) -> bool {
        self.blocks.iter().all(|&b| b == 1)
    }

    /// `μ_k` for `k = 1..=N`, at index `k - 1`.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut mu = vec![0; self.total() as usize];
        for &b in &self.blocks {
            mu[b as usize - 1] += 1;
        }
        mu
    }

    /// Concatenation `π ⊕ π'`.
    pub fn concat(&self, other: &Partition) -> Partition {
        let mut blocks = self.blocks.clone();
        blocks.extend_from_slice(&other.blocks);
        Partition::new(blocks).expect("concatenation of valid partitions")
    }

    /// Parses a comma-separated block list such as `4,2,1`.
    pub fn parse(s: &str) -> Result<Self, BoundError> {
        let blocks = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| BoundError::InvalidPartition(format!("{t:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(blocks)
    }

    /// Comma-separated block list, the inverse of [`parse`](Self::parse).
    pub fn to_list(&self) -> String {
        self.blocks
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Partition {
    /// Exponential notation, e.g. `(2^2,1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.blocks.len() {
            let b = self.blocks[i];
            let run = self.blocks[i..].iter().take_while(|&&x| x == b).count();
            if run == 1 {
                parts.push(b.to_string());
            } else {
                parts.push(format!("{b}^{run}"));
            }
            i += run;
        }
        write!(f, "({})", parts.join(","))
    }
}

/// All partitions of `n` in descending lexicographic order, starting at `(n)`.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition {
                blocks: cur.clone(),
            });
            return;
        }
        for b in (1..=rest.min(max)).rev() {
            cur.push(b);
            rec(rest - b, b, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Dimensions with an exceptional primitive-group bound, and that bound.
pub const XI_EXCEPTIONS: [(u32, u64); 9] = [
    (2, 60),
    (3, 360),
    (4, 25_920),
    (5, 25_920),
    (6, 6_531_840),
    (7, 1_451_520),
    (8, 348_364_800),
    (9, 4_199_040),
    (12, 448_345_497_600),
];

/// Upper bound on `[G : Z(G)]` over primitive subgroups of `GL_N(C)`.
pub fn xi(n: u32) -> BigUint {
    assert!(n >= 1, "xi is defined for N >= 1");
    if n == 1 {
        return BigUint::one();
    }
    match XI_EXCEPTIONS.iter().find(|(k, _)| *k == n) {
        Some(&(_, v)) => BigUint::from(v),
        None => factorial(n + 1),
    }
}

/// `B(π, d)`.
pub fn bound_b(pi: &Partition, d: u32) -> Result<BigUint, BoundError> {
    if d < 3 {
        return Err(BoundError::DegreeTooSmall(d));
    }
    Ok(bound_b_unchecked(pi, d))
}

fn bound_b_unchecked(pi: &Partition, d: u32) -> BigUint {
    coefficient(pi) * BigUint::from(d).pow(pi.len() as u32)
}

/// The degree-free factor `μ₁!⋯μ_N! ∏ Ξ(block)`.
fn coefficient(pi: &Partition) -> BigUint {
    let perm: BigUint = pi
        .multiplicities()
        .into_iter()
        .filter(|&m| m > 1)
        .map(factorial)
        .product();
    let prim: BigUint = pi.blocks().iter().map(|&b| xi(b)).product();
    perm * prim
}

/// `B((1^N), d) = N! d^N`.
pub fn fermat_bound(n: u32, d: u32) -> BigUint {
    factorial(n) * BigUint::from(d).pow(n)
}

/// `B(π, 3) / B((1^N), 3)`.
pub fn ratio_at_3(pi: &Partition) -> BigRational {
    let num = bound_b_unchecked(pi, 3);
    let den = fermat_bound(pi.total(), 3);
    BigRational::new(num.into(), den.into())
}

fn check_candidate(pi: &Partition) -> Result<(), BoundError> {
    if pi.is_fermat() {
        return Err(BoundError::FermatPartition(pi.total()));
    }
    if bound_b_unchecked(pi, 3) < fermat_bound(pi.total(), 3) {
        return Err(BoundError::NotExceptional(pi.clone()));
    }
    Ok(())
}

/// Largest `d ≥ 3` with `B(π, d) ≥ B((1^N), d)`.
///
/// Since `B(π,d)/B((1^N),d) = C · d^{r-N}` with `r < N`, the answer is
/// `⌊(C)^{1/(N-r)}⌋` where `C = coefficient / N!`, computed with an integer
/// root of `⌊C⌋`.
pub fn max_exceptional_degree(pi: &Partition) -> Result<u32, BoundError> {
    check_candidate(pi)?;
    let n = pi.total();
    let gap = n - pi.len() as u32;
    let floor_c = coefficient(pi) / factorial(n);
    let d = floor_c.nth_root(gap);
    Ok(d.to_u32().expect("degree fits in u32"))
}

/// Same as [`max_exceptional_degree`] by a direct scan over `d`.
pub fn max_exceptional_degree_scan(pi: &Partition) -> Result<u32, BoundError> {
    check_candidate(pi)?;
    let n = pi.total();
    let mut d = 3;
    while bound_b_unchecked(pi, d + 1) >= fermat_bound(n, d + 1) {
        d += 1;
    }
    Ok(d)
}

/// Renders a positive rational to three significant figures, rounding half up.
pub fn render_sig3(r: &BigRational) -> String {
    assert!(*r > BigRational::zero(), "positive ratio expected");
    let ten = BigRational::from_integer(10.into());
    // exponent e with 10^e <= r < 10^(e+1)
    let mut e: i32 = 0;
    let mut probe = r.clone();
    while probe >= ten {
        probe /= &ten;
        e += 1;
    }
    while probe < BigRational::one() {
        probe *= &ten;
        e -= 1;
    }
    let scale_pow = 2 - e;
    let scaled = if scale_pow >= 0 {
        r * ten.clone().pow(scale_pow)
    } else {
        r / ten.clone().pow(-scale_pow)
    };
    let half = BigRational::new(1.into(), 2.into());
    let mut digits = (scaled + half).floor().to_integer();
    let mut decimals = scale_pow;
    if digits >= 1000.into() {
        digits /= 10;
        decimals -= 1;
    }
    let s = digits.to_string();
    if decimals <= 0 {
        let zeros = "0".repeat((-decimals) as usize);
        format!("{s}{zeros}")
    } else {
        let d = decimals as usize;
        let padded = format!("{s:0>width$}", width = d + 1);
        let (int, frac) = padded.split_at(padded.len() - d);
        format!("{int}.{frac}")
    }
}

/// True when `exact` is within one unit in the last displayed digit of the
/// decimal string `shown` (accepts both truncated and rounded renderings).
pub fn ratio_matches(shown: &str, exact: &BigRational) -> bool {
    let shown = shown.trim();
    let (int, frac) = shown.split_once('.').unwrap_or((shown, ""));
    let Ok(digits) = format!("{int}{frac}").parse::<i64>() else {
        return false;
    };
    let scale = BigRational::from_integer(10.into()).pow(frac.len() as i32);
    let value = BigRational::new(digits.into(), 1.into()) / &scale;
    let unit = scale.recip();
    let diff = if &value > exact {
        &value - exact
    } else {
        exact - &value
    };
    diff <= unit
}

/// One row of the exceptional-partition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalRow {
    pub index: usize,
    pub n: u32,
    pub partition: Partition,
    pub max_d: u32,
    #[serde(skip)]
    pub ratio: Option<BigRational>,
    pub ratio_display: String,
}

/// Every exceptional partition of every `N` in `n_min..=n_max`, ordered by
/// `N` and then descending lexicographically, numbered from 1.
pub fn enumerate_exceptional(n_min: u32, n_max: u32) -> Result<Vec<ExceptionalRow>, BoundError> {
    if n_min < 2 || n_min > n_max {
        return Err(BoundError::Precondition(format!(
            "need 2 <= n_min <= n_max, got {n_min}..{n_max}"
        )));
    }
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let fermat = fermat_bound(n, 3);
        for pi in partitions(n) {
            if pi.is_fermat() || bound_b_unchecked(&pi, 3) < fermat {
                continue;
            }
            let max_d = max_exceptional_degree(&pi)?;
            let ratio = ratio_at_3(&pi);
            rows.push(ExceptionalRow {
                index: rows.len() + 1,
                n,
                ratio_display: render_sig3(&ratio),
                ratio: Some(ratio),
                partition: pi,
                max_d,
            });
        }
    }
    Ok(rows)
}

/// Outcome of checking that no non-Fermat partition of `N` is exceptional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighDimReport {
    pub n: u32,
    pub holds: bool,
    /// The non-Fermat partition with the largest `B(π,3)`.
    pub worst: Partition,
    /// `B(worst,3) / B((1^N),3)`; below 1 exactly when `holds`.
    pub worst_ratio: BigRational,
    pub partitions_checked: usize,
}

pub fn verify_no_exceptional(n: u32) -> Result<HighDimReport, BoundError> {
    if n < 27 {
        return Err(BoundError::Precondition(format!(
            "N must be at least 27, got {n}"
        )));
    }
    let fermat = fermat_bound(n, 3);
    let mut best: Option<(BigUint, Partition)> = None;
    let all = partitions(n);
    let checked = all.len();
    for pi in all {
        if pi.is_fermat() {
            continue;
        }
        let b = bound_b_unchecked(&pi, 3);
        if best.as_ref().is_none_or(|(bb, _)| b > *bb) {
            best = Some((b, pi));
        }
    }
    let (b, worst) = best.expect("N >= 27 has non-Fermat partitions");
    let holds = b < fermat;
    Ok(HighDimReport {
        n,
        holds,
        worst,
        worst_ratio: BigRational::new(b.into(), fermat.into()),
        partitions_checked: checked,
    })
}

/// Runs [`verify_no_exceptional`] for each `N` in the range, one worker per
/// `N`, returning reports in `N` order.
pub fn highdim_sweep(n_min: u32, n_max: u32) -> Result<Vec<HighDimReport>, BoundError> {
    let ns: Vec<u32> = (n_min..=n_max).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = ns
            .iter()
            .map(|&n| s.spawn(move || verify_no_exceptional(n)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(blocks: &[u32]) -> Partition {
        Partition::new(blocks.to_vec()).unwrap()
    }

    #[test]
    fn xi_values() {
        assert_eq!(xi(1), BigUint::from(1u32));
        assert_eq!(xi(6), BigUint::from(6_531_840u32));
        assert_eq!(xi(10), BigUint::from(39_916_800u32));
        assert_eq!(xi(11), factorial(12));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(bound_b(&p(&[2]), 3).unwrap(), BigUint::from(180u32));
        assert_eq!(bound_b(&p(&[1, 1]), 3).unwrap(), BigUint::from(18u32));
        assert_eq!(render_sig3(&ratio_at_3(&p(&[2]))), "10.0");
        assert_eq!(bound_b(&p(&[2, 1, 1, 1]), 3).unwrap(), BigUint::from(29_160u32));
        assert_eq!(fermat_bound(5, 3), BigUint::from(29_160u32));
        assert_eq!(render_sig3(&ratio_at_3(&p(&[2, 1, 1, 1]))), "1.00");
        assert_eq!(bound_b(&p(&[1, 1, 1, 1]), 7).unwrap(), fermat_bound(4, 7));
        assert!(matches!(bound_b(&p(&[2]), 2), Err(BoundError::DegreeTooSmall(2))));
    }

    #[test]
    fn max_degree_examples() {
        assert_eq!(max_exceptional_degree(&p(&[2])).unwrap(), 30);
        assert_eq!(max_exceptional_degree(&p(&[2, 2, 2])).unwrap(), 12);
        assert_eq!(
            max_exceptional_degree(&p(&[1, 1, 1])),
            Err(BoundError::FermatPartition(3))
        );
        assert!(matches!(
            max_exceptional_degree(&p(&[3, 3, 3, 1])),
            Err(BoundError::NotExceptional(_))
        ));
    }

    #[test]
    fn partitions_descending_lex() {
        let ps: Vec<String> = partitions(5).iter().map(Partition::to_list).collect();
        assert_eq!(
            ps,
            ["5", "4,1", "3,2", "3,1,1", "2,2,1", "2,1,1,1", "1,1,1,1,1"]
        );
        assert_eq!(partitions(26).len(), 2436);
    }

    #[test]
    fn display_forms() {
        assert_eq!(p(&[2, 2, 1]).to_string(), "(2^2,1)");
        assert_eq!(p(&[4, 2, 1]).to_list(), "4,2,1");
        assert_eq!(Partition::parse("1, 2,4").unwrap(), p(&[4, 2, 1]));
        assert!(Partition::parse("2,,1").is_err());
        assert_eq!(p(&[3, 1]).multiplicities(), vec![1, 0, 1, 0]);
    }

    #[test]
    fn sig3_rendering() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(render_sig3(&r(20, 3)), "6.67");
        assert_eq!(render_sig3(&r(425, 4)), "106");
        assert_eq!(render_sig3(&r(9995, 10)), "1000");
        assert_eq!(render_sig3(&r(1, 8)), "0.125");
        assert!(ratio_matches("6.66", &r(20, 3)));
        assert!(ratio_matches("6.67", &r(20, 3)));
        assert!(!ratio_matches("6.64", &r(20, 3)));
    }

    #[test]
    fn highdim_precondition() {
        assert!(matches!(
            verify_no_exceptional(26),
            Err(BoundError::Precondition(_))
        ));
        let rep = verify_no_exceptional(27).unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn small_n_range_counts() {
        let rows = enumerate_exceptional(5, 5).unwrap();
        let got: Vec<String> = rows.iter().map(|r| r.partition.to_string()).collect();
        assert_eq!(got, ["(5)", "(4,1)", "(3,2)", "(2^2,1)", "(2,1^3)"]);
        assert!(enumerate_exceptional(1, 3).is_err());
    }
}
