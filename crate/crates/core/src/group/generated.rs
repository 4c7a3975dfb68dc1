use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{find_reduction_prime_capped, Cyclo, ReductionMap, DEFAULT_PRIME_SEARCH_CAP};

use super::bsgs::{BsgsOptions, StabChain};
use super::closure::{enumerate, Closure, ClosureLimits};
use super::fp::FpMat;
use super::matrix::CycloMatrix;
use super::GroupError;

/// Largest element count attempted by a default closure.
pub const TIER1_MAX: usize = 2_000_000;
/// Largest element count attempted by an opt-in packed-key closure.
pub const TIER2_MAX: usize = 50_000_000;

/// How an order was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    Closure,
    CompactClosure,
    SchreierSims,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Auto,
    Closure,
    Bsgs,
}

/// Budgets and knobs for order computations.
#[derive(Debug, Clone, Copy)]
pub struct GroupOptions {
    pub strategy: Strategy,
    pub max_elements: usize,
    /// Allows closures up to [`TIER2_MAX`] when keys pack into 128 bits and
    /// Schreier–Sims is not in play.
    pub tier2: bool,
    /// Allows falling back to Schreier–Sims when closure caps are hit.
    pub allow_bsgs: bool,
    pub memory_budget_mb: usize,
    pub seed: u64,
    /// Forces the first reduction prime.
    pub prime: Option<u64>,
}

impl Default for GroupOptions {
    fn default() -> Self {
        Self {
            strategy: Strategy::Auto,
            max_elements: TIER1_MAX,
            tier2: false,
            allow_bsgs: true,
            memory_budget_mb: 2048,
            seed: 0x5eed,
            prime: None,
        }
    }
}

impl GroupOptions {
    pub(crate) fn closure_limits(&self) -> ClosureLimits {
        ClosureLimits {
            max_elements: self.max_elements,
            memory_budget_bytes: self.memory_budget_mb << 20,
        }
    }

    pub(crate) fn bsgs_options(&self) -> BsgsOptions {
        // each stored orbit point holds a vector, two matrices and a key
        let per_point = 256;
        BsgsOptions {
            seed: self.seed,
            max_points: ((self.memory_budget_mb << 20) / per_point).max(1024),
            ..BsgsOptions::default()
        }
    }
}

/// Orders and related invariants of a generated group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub order: u128,
    pub scalar_order: u64,
    pub pgl_order: u128,
    pub center_order: Option<u64>,
    pub tier: Tier,
    pub primes: Vec<u64>,
}

/// Generators reduced modulo one prime.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub map: ReductionMap,
    pub gens: Vec<FpMat>,
}

/// A finite group given by invertible generators of equal dimension over a
/// common cyclotomic field.
#[derive(Debug, Clone)]
pub struct GeneratedGroup {
    dim: usize,
    conductor: u32,
    generators: Vec<CycloMatrix>,
}

impl GeneratedGroup {
    pub fn new(generators: Vec<CycloMatrix>) -> Result<Self, GroupError> {
        let first = generators.first().ok_or(GroupError::NoGenerators)?;
        let dim = first.dim();
        if generators.iter().any(|g| g.dim() != dim) {
            return Err(GroupError::DimensionMismatch);
        }
        let conductor = generators
            .iter()
            .fold(1u32, |acc, g| acc.lcm(&g.conductor()));
        let generators = generators.iter().map(|g| g.lift(conductor)).collect();
        Ok(Self {
            dim,
            conductor,
            generators,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn generators(&self) -> &[CycloMatrix] {
        &self.generators
    }

    /// Reduces the generators modulo the smallest usable prime `≥ lower`.
    pub fn reduce_from(&self, lower: u64) -> Result<Reduced, GroupError> {
        let mut lower = lower.max(3);
        loop {
            let map = find_reduction_prime_capped(self.conductor, lower, DEFAULT_PRIME_SEARCH_CAP)?;
            match self.reduce_with(&map) {
                Ok(r) => return Ok(r),
                Err(GroupError::Arith(crate::arith::ArithError::NonInvertibleDenominator {
                    ..
                })) => lower = map.prime() + 1,
                Err(e) => return Err(e),
            }
        }
    }

    pub fn reduce_with(&self, map: &ReductionMap) -> Result<Reduced, GroupError> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.reduce(map))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Reduced { map: *map, gens })
    }

    /// Two reductions at distinct primes; the first honours `forced` when set.
    pub fn two_reductions(&self, forced: Option<u64>) -> Result<(Reduced, Reduced), GroupError> {
        let first = match forced {
            Some(p) => {
                let map = find_reduction_prime_capped(self.conductor, p, DEFAULT_PRIME_SEARCH_CAP)?;
                if map.prime() != p {
                    return Err(GroupError::Malformed(format!(
                        "{p} is not a prime congruent to 1 mod {}",
                        self.conductor
                    )));
                }
                self.reduce_with(&map)?
            }
            None => self.reduce_from(3)?,
        };
        let second = self.reduce_from(first.map.prime() + 1)?;
        Ok((first, second))
    }

    /// Checks each generator has finite order: its order modulo `p` is the
    /// only candidate, confirmed by an exact power.
    pub fn check_finite_orders(&self, red: &Reduced) -> Result<Vec<u64>, GroupError> {
        let mut orders = Vec::new();
        for (index, (g, gp)) in self.generators.iter().zip(&red.gens).enumerate() {
            let k = gp
                .order(red.map.prime().pow(2))
                .ok_or(GroupError::NonFiniteOrder { index })?;
            if !exact_pow(g, k).is_identity() {
                return Err(GroupError::NonFiniteOrder { index });
            }
            orders.push(k);
        }
        Ok(orders)
    }

    /// Order, scalar and center data with two-prime agreement.
    pub fn summary(&self, opts: &GroupOptions) -> Result<GroupSummary, GroupError> {
        let (r1, r2) = self.two_reductions(opts.prime)?;
        self.check_finite_orders(&r1)?;
        let s1 = self.summary_at(&r1, opts)?;
        let s2 = self.summary_at(&r2, opts)?;
        if s1.order != s2.order || s1.scalar_order != s2.scalar_order {
            return Err(GroupError::FaithfulnessSuspect {
                p1: r1.map.prime(),
                p2: r2.map.prime(),
                o1: s1.order,
                o2: s2.order,
            });
        }
        let center_order = match (s1.center_order, s2.center_order) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        };
        Ok(GroupSummary {
            center_order,
            primes: vec![r1.map.prime(), r2.map.prime()],
            ..s1
        })
    }

    /// Summary computed at a single prime.
    pub fn summary_at(&self, red: &Reduced, opts: &GroupOptions) -> Result<GroupSummary, GroupError> {
        let try_closure = matches!(opts.strategy, Strategy::Auto | Strategy::Closure);
        if try_closure {
            let limits = opts.closure_limits();
            match enumerate(&red.gens, &limits) {
                Ok(c) => return Ok(self.closure_summary(&c, red, Tier::Closure)),
                Err(GroupError::CapExceeded { .. })
                    if opts.tier2 && (opts.strategy == Strategy::Closure || !opts.allow_bsgs) =>
                {
                    let packed = super::fp::KeyCodec::new(self.dim * self.dim, red.map.prime() as u32)
                        .is_packed();
                    if !packed {
                        return Err(GroupError::CapExceeded {
                            cap: opts.max_elements,
                        });
                    }
                    let limits = ClosureLimits {
                        max_elements: TIER2_MAX,
                        ..limits
                    };
                    let c = enumerate(&red.gens, &limits)?;
                    return Ok(self.closure_summary(&c, red, Tier::CompactClosure));
                }
                Err(e @ (GroupError::CapExceeded { .. } | GroupError::BudgetExceeded(_))) => {
                    if opts.strategy == Strategy::Closure || !opts.allow_bsgs {
                        return Err(e);
                    }
                }
                Err(e) => return Err(e),
            }
        }
        let chain = self.chain(red, opts)?;
        let order = chain.order();
        let scalar_order = self.scalar_order_in(&chain, red);
        let center_order = if self.is_irreducible_mod(red) {
            Some(scalar_order)
        } else {
            None
        };
        Ok(GroupSummary {
            order,
            scalar_order,
            pgl_order: order / scalar_order as u128,
            center_order,
            tier: Tier::SchreierSims,
            primes: vec![red.map.prime()],
        })
    }

    fn closure_summary(&self, c: &Closure, red: &Reduced, tier: Tier) -> GroupSummary {
        let order = c.order() as u128;
        let scalar_order = c.scalar_count() as u64;
        GroupSummary {
            order,
            scalar_order,
            pgl_order: order / scalar_order as u128,
            center_order: Some(c.center_count(&red.gens) as u64),
            tier,
            primes: vec![red.map.prime()],
        }
    }

    /// Stabilizer chain of the reduction.
    pub fn chain(&self, red: &Reduced, opts: &GroupOptions) -> Result<StabChain<FpMat>, GroupError> {
        StabChain::build(
            &red.gens,
            FpMat::identity(self.dim, red.map.prime() as u32),
            opts.bsgs_options(),
        )
    }

    /// Candidate scalars: every root of unity in `Q(ζ_m)`, i.e. `±ζ_m^k`.
    pub fn scalar_candidates(&self) -> Vec<Cyclo> {
        let m = self.conductor;
        let mut out: Vec<Cyclo> = Vec::new();
        for k in 0..m as i64 {
            let z = Cyclo::zeta(m, k);
            for c in [z.clone(), -&z] {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Number of scalar matrices `cI` lying in the group, by sifting.
    pub fn scalar_order_in(&self, chain: &StabChain<FpMat>, red: &Reduced) -> u64 {
        let p = red.map.prime() as u32;
        self.scalar_candidates()
            .iter()
            .filter(|c| {
                let v = red.map.reduce(c).expect("roots of unity reduce") as u32;
                chain.contains(&FpMat::scalar(self.dim, p, v))
            })
            .count() as u64
    }

    /// True when the reduced generators span the full matrix algebra, which
    /// certifies absolute irreducibility in characteristic zero as well.
    pub fn is_irreducible_mod(&self, red: &Reduced) -> bool {
        let n = self.dim;
        let p = red.map.prime() as u32;
        let mut basis = Echelon::new(n * n, p);
        let mut queue = vec![FpMat::identity(n, p)];
        basis.insert(queue[0].data().to_vec());
        let mut i = 0;
        while i < queue.len() && basis.rank() < n * n {
            let x = queue[i].clone();
            for g in &red.gens {
                let y = x.mul(g);
                if basis.insert(y.data().to_vec()) {
                    queue.push(y);
                }
            }
            i += 1;
        }
        basis.rank() == n * n
    }

    pub fn is_irreducible(&self) -> Result<bool, GroupError> {
        Ok(self.is_irreducible_mod(&self.reduce_from(3)?))
    }

    /// Generators of the derived subgroup: the normal closure of the
    /// generator commutators, with membership decided by sifting modulo `p`.
    pub fn derived_subgroup(&self, opts: &GroupOptions) -> Result<GeneratedGroup, GroupError> {
        let red = self.reduce_from(3)?;
        let p = red.map.prime() as u32;
        let inverses = self
            .generators
            .iter()
            .map(CycloMatrix::inverse)
            .collect::<Result<Vec<_>, _>>()?;
        let mut normal: Vec<CycloMatrix> = Vec::new();
        let mut normal_fp: Vec<FpMat> = Vec::new();
        let mut chain: Option<StabChain<FpMat>> = None;
        let identity = FpMat::identity(self.dim, p);
        let mut pending: Vec<CycloMatrix> = Vec::new();
        for a in 0..self.generators.len() {
            for b in a + 1..self.generators.len() {
                let c = inverses[a]
                    .mul(&inverses[b])
                    .mul(&self.generators[a])
                    .mul(&self.generators[b]);
                pending.push(c);
            }
        }
        while let Some(c) = pending.pop() {
            let cp = c.reduce(&red.map)?;
            if cp.is_identity() {
                continue;
            }
            if chain.as_ref().is_some_and(|ch| ch.contains(&cp)) {
                continue;
            }
            normal.push(c.clone());
            normal_fp.push(cp);
            chain = Some(StabChain::build(&normal_fp, identity.clone(), opts.bsgs_options())?);
            for (g, gi) in self.generators.iter().zip(&inverses) {
                pending.push(gi.mul(&c).mul(g));
            }
        }
        if normal.is_empty() {
            normal.push(CycloMatrix::identity(self.dim, self.conductor));
        }
        GeneratedGroup::new(normal)
    }

    /// Permutation of blocks induced by each generator, for a generator set
    /// that is block-monomial with respect to `blocks`.
    pub fn block_permutations(&self, blocks: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, GroupError> {
        self.generators
            .iter()
            .map(|g| {
                blocks
                    .iter()
                    .map(|src| {
                        let mut target = None;
                        for (t, dst) in blocks.iter().enumerate() {
                            let hit = src
                                .iter()
                                .any(|&j| dst.iter().any(|&i| !g.get(i, j).is_zero()));
                            if hit {
                                if target.is_some() {
                                    return Err(GroupError::Malformed(
                                        "generator is not block-monomial".into(),
                                    ));
                                }
                                target = Some(t);
                            }
                        }
                        target.ok_or(GroupError::Singular)
                    })
                    .collect()
            })
            .collect()
    }
}

fn exact_pow(g: &CycloMatrix, mut k: u64) -> CycloMatrix {
    let mut acc = CycloMatrix::identity(g.dim(), g.conductor());
    let mut sq = g.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul(&sq);
        }
        k >>= 1;
        if k > 0 {
            sq = sq.mul(&sq);
        }
    }
    acc
}

/// Order of the permutation group generated by `perms` (small degrees only).
pub fn permutation_group_order(perms: &[Vec<usize>]) -> usize {
    use std::collections::HashSet;
    let Some(first) = perms.first() else { return 1 };
    let n = first.len();
    let id: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut queue = vec![id];
    let mut i = 0;
    while i < queue.len() {
        for p in perms {
            let q: Vec<usize> = queue[i].iter().map(|&x| p[x]).collect();
            if seen.insert(q.clone()) {
                queue.push(q);
            }
        }
        i += 1;
    }
    seen.len()
}

/// Incremental row-echelon basis over `F_p`.
struct Echelon {
    p: u32,
    rows: Vec<(usize, Vec<u32>)>,
    width: usize,
}

impl Echelon {
    fn new(width: usize, p: u32) -> Self {
        Self {
            p,
            rows: Vec::new(),
            width,
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; keeps it and returns true when
    /// independent.
    fn insert(&mut self, mut v: Vec<u32>) -> bool {
        let p = self.p as u64;
        debug_assert_eq!(v.len(), self.width);
        for (piv, row) in &self.rows {
            let f = v[*piv] as u64;
            if f == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = ((*x as u64 + p * p - f * r as u64) % p) as u32;
            }
        }
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = crate::arith::mod_inv(v[piv] as u64, p).expect("nonzero") ;
        for x in v.iter_mut() {
            *x = ((*x as u64 * inv) % p) as u32;
        }
        self.rows.push((piv, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(m: u32, k: i64) -> Cyclo {
        Cyclo::zeta(m, k)
    }

    fn fermat_gens(n: usize, d: u32) -> GeneratedGroup {
        let mut gens = Vec::new();
        let mut diag = vec![Cyclo::one(d); n];
        diag[0] = c(d, 1);
        gens.push(CycloMatrix::diagonal(&diag));
        let swap: Vec<usize> = (0..n).map(|i| match i { 0 => 1, 1 => 0, _ => i }).collect();
        let cyc: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        gens.push(CycloMatrix::permutation(&swap));
        gens.push(CycloMatrix::permutation(&cyc));
        GeneratedGroup::new(gens).unwrap()
    }

    #[test]
    fn trivial_group() {
        let g = GeneratedGroup::new(vec![CycloMatrix::identity(3, 1)]).unwrap();
        let s = g.summary(&GroupOptions::default()).unwrap();
        assert_eq!((s.order, s.scalar_order, s.pgl_order), (1, 1, 1));
    }

    #[test]
    fn fermat_cubic_curve() {
        let g = fermat_gens(3, 3);
        let s = g.summary(&GroupOptions::default()).unwrap();
        assert_eq!(s.order, 162);
        assert_eq!(s.scalar_order, 3);
        let b = g
            .summary(&GroupOptions {
                strategy: Strategy::Bsgs,
                ..Default::default()
            })
            .unwrap();
        assert_eq!(b.order, 162);
        assert_eq!(b.scalar_order, 3);
        assert_eq!(b.tier, Tier::SchreierSims);
    }

    #[test]
    fn infinite_order_detected() {
        let g = CycloMatrix::from_rows(vec![
            vec![Cyclo::one(1), Cyclo::one(1)],
            vec![Cyclo::zero(1), Cyclo::one(1)],
        ])
        .unwrap();
        let grp = GeneratedGroup::new(vec![g]).unwrap();
        assert!(matches!(
            grp.summary(&GroupOptions::default()),
            Err(GroupError::NonFiniteOrder { index: 0 })
        ));
    }

    #[test]
    fn derived_subgroup_of_symmetric_group() {
        let g = fermat_gens(3, 1);
        // S_3 permutation matrices: derived subgroup is A_3
        let d = g.derived_subgroup(&GroupOptions::default()).unwrap();
        assert_eq!(d.summary(&GroupOptions::default()).unwrap().order, 3);
    }

    #[test]
    fn irreducibility() {
        let g = fermat_gens(3, 3);
        assert!(g.is_irreducible().unwrap());
        let d = GeneratedGroup::new(vec![CycloMatrix::diagonal(&[c(4, 1), c(4, 3)])]).unwrap();
        assert!(!d.is_irreducible().unwrap());
    }

    #[test]
    fn block_perms() {
        let g = CycloMatrix::permutation(&[2, 3, 0, 1]);
        let grp = GeneratedGroup::new(vec![g]).unwrap();
        let perms = grp.block_permutations(&[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(perms, vec![vec![1, 0]]);
        assert_eq!(permutation_group_order(&perms), 2);
    }
}
