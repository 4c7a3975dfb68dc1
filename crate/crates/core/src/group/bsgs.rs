//! Schreier–Sims stabilizer chains for matrix groups acting on vectors of
//! `F_p^N`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fp::{ElemKey, FpMat, KeyCodec};
use super::matrix::CycloMatrix;
use super::GroupError;

/// Group element usable in a stabilizer chain: a matrix acting on `F_p^N`.
pub trait ChainElement: Clone {
    fn compose(&self, other: &Self) -> Self;
    fn invert(&self) -> Self;
    fn is_identity(&self) -> bool;
    fn act(&self, v: &[u32]) -> Vec<u32>;
    fn fp(&self) -> &FpMat;
}

impl ChainElement for FpMat {
    fn compose(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn invert(&self) -> Self {
        self.inverse().expect("group elements are invertible")
    }

    fn is_identity(&self) -> bool {
        FpMat::is_identity(self)
    }

    fn act(&self, v: &[u32]) -> Vec<u32> {
        self.apply(v)
    }

    fn fp(&self) -> &FpMat {
        self
    }
}

/// An `F_p` matrix together with the exact matrix it reduces from, and the
/// exact inverse, so chains over it carry exact transversals.
#[derive(Clone, Debug)]
pub struct Tracked {
    pub fp: FpMat,
    pub exact: CycloMatrix,
    pub exact_inv: CycloMatrix,
}

impl Tracked {
    pub fn new(fp: FpMat, exact: CycloMatrix) -> Result<Self, GroupError> {
        let exact_inv = exact.inverse()?;
        Ok(Self {
            fp,
            exact,
            exact_inv,
        })
    }
}

impl ChainElement for Tracked {
    fn compose(&self, other: &Self) -> Self {
        Self {
            fp: self.fp.mul(&other.fp),
            exact: self.exact.mul(&other.exact),
            exact_inv: other.exact_inv.mul(&self.exact_inv),
        }
    }

    fn invert(&self) -> Self {
        Self {
            fp: self.fp.inverse().expect("group elements are invertible"),
            exact: self.exact_inv.clone(),
            exact_inv: self.exact.clone(),
        }
    }

    fn is_identity(&self) -> bool {
        self.fp.is_identity()
    }

    fn act(&self, v: &[u32]) -> Vec<u32> {
        self.fp.apply(v)
    }

    fn fp(&self) -> &FpMat {
        &self.fp
    }
}

/// Tuning and budget for [`StabChain::build`].
#[derive(Debug, Clone, Copy)]
pub struct BsgsOptions {
    pub seed: u64,
    /// Total orbit points stored across all levels.
    pub max_points: usize,
    /// Base-point candidates examined when a level is created.
    pub base_candidates: usize,
    /// Consecutive trivially-sifting random elements ending the random phase.
    pub random_quiet_rounds: usize,
}

impl Default for BsgsOptions {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            max_points: 4_000_000,
            base_candidates: 32,
            random_quiet_rounds: 40,
        }
    }
}

struct Level<E> {
    point: Vec<u32>,
    gens: Vec<E>,
    gen_invs: Vec<E>,
    orbit: HashMap<ElemKey, usize>,
    points: Vec<Vec<u32>>,
    reps: Vec<E>,
    inv_reps: Vec<E>,
}

/// A base and strong generating set with explicit transversals.
pub struct StabChain<E> {
    dim: usize,
    prime: u32,
    codec: KeyCodec,
    levels: Vec<Level<E>>,
    opts: BsgsOptions,
    identity: E,
    rng: ChaCha8Rng,
}

impl<E: ChainElement> StabChain<E> {
    /// Builds a verified chain for `⟨gens⟩`: a seeded random Schreier–Sims
    /// phase followed by a deterministic Schreier-generator check that adds
    /// anything the random phase missed.
    pub fn build(gens: &[E], identity: E, opts: BsgsOptions) -> Result<Self, GroupError> {
        if gens.is_empty() {
            return Err(GroupError::NoGenerators);
        }
        let dim = identity.fp().dim();
        let prime = identity.fp().prime();
        let mut chain = Self {
            dim,
            prime,
            codec: KeyCodec::new(dim, prime),
            levels: Vec::new(),
            opts,
            identity,
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
        };
        for g in gens {
            let (res, l) = chain.sift(g.clone(), 0);
            if !res.is_identity() {
                chain.insert(res, 0, l)?;
            }
        }
        chain.random_phase(gens)?;
        chain.complete()?;
        Ok(chain)
    }

    fn random_phase(&mut self, gens: &[E]) -> Result<(), GroupError> {
        if self.levels.is_empty() {
            return Ok(());
        }
        // product replacement
        let mut state: Vec<E> = gens.iter().cycle().take(gens.len().max(10)).cloned().collect();
        let mut acc = self.identity.clone();
        let k = state.len();
        let step = |rng: &mut ChaCha8Rng, state: &mut Vec<E>, acc: &mut E| {
            let i = rng.gen_range(0..k);
            let mut j = rng.gen_range(0..k - 1);
            if j >= i {
                j += 1;
            }
            let r = if rng.gen_bool(0.5) {
                state[j].clone()
            } else {
                state[j].invert()
            };
            state[i] = state[i].compose(&r);
            *acc = acc.compose(&state[i]);
        };
        for _ in 0..50 {
            step(&mut self.rng, &mut state, &mut acc);
        }
        let mut quiet = 0;
        while quiet < self.opts.random_quiet_rounds {
            step(&mut self.rng, &mut state, &mut acc);
            let (res, l) = self.sift(acc.clone(), 0);
            if res.is_identity() {
                quiet += 1;
            } else {
                quiet = 0;
                self.insert(res, 0, l)?;
            }
        }
        Ok(())
    }

    fn complete(&mut self) -> Result<(), GroupError> {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let lv = i as usize;
            let mut found = None;
            'scan: for b in 0..self.levels[lv].points.len() {
                for s in 0..self.levels[lv].gens.len() {
                    let level = &self.levels[lv];
                    let image = level.gens[s].act(&level.points[b]);
                    let c = level.orbit[&self.codec.encode(&image)];
                    let h = level.inv_reps[c]
                        .compose(&level.gens[s])
                        .compose(&level.reps[b]);
                    let (res, l) = self.sift(h, lv + 1);
                    if !res.is_identity() {
                        found = Some((res, l));
                        break 'scan;
                    }
                }
            }
            match found {
                Some((res, l)) => {
                    self.insert(res, lv + 1, l)?;
                    i = l as isize;
                }
                None => i -= 1,
            }
        }
        Ok(())
    }

    /// Sifts `h` through levels `start..`; returns the residue and the level
    /// where it stopped (`levels.len()` if it passed every level).
    fn sift(&self, mut h: E, start: usize) -> (E, usize) {
        for l in start..self.levels.len() {
            let level = &self.levels[l];
            let image = h.act(&level.point);
            match level.orbit.get(&self.codec.encode(&image)) {
                None => return (h, l),
                Some(&c) => h = level.inv_reps[c].compose(&h),
            }
        }
        let len = self.levels.len();
        (h, len)
    }

    fn insert(&mut self, h: E, from: usize, to: usize) -> Result<(), GroupError> {
        if to == self.levels.len() {
            let point = self.choose_base_point(&h, to);
            self.levels.push(Level {
                point,
                gens: Vec::new(),
                gen_invs: Vec::new(),
                orbit: HashMap::new(),
                points: Vec::new(),
                reps: Vec::new(),
                inv_reps: Vec::new(),
            });
        }
        let hinv = h.invert();
        for l in from..=to {
            self.levels[l].gens.push(h.clone());
            self.levels[l].gen_invs.push(hinv.clone());
            self.rebuild_orbit(l)?;
        }
        Ok(())
    }

    fn rebuild_orbit(&mut self, l: usize) -> Result<(), GroupError> {
        let stored_elsewhere: usize = self
            .levels
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != l)
            .map(|(_, lv)| lv.points.len())
            .sum();
        let codec = self.codec;
        let identity = self.identity.clone();
        let max_points = self.opts.max_points;
        let level = &mut self.levels[l];
        level.orbit.clear();
        level.points.clear();
        level.reps.clear();
        level.inv_reps.clear();
        level.orbit.insert(codec.encode(&level.point), 0);
        level.points.push(level.point.clone());
        level.reps.push(identity.clone());
        level.inv_reps.push(identity);
        let mut i = 0;
        while i < level.points.len() {
            for s in 0..level.gens.len() {
                let image = level.gens[s].act(&level.points[i]);
                let key = codec.encode(&image);
                if level.orbit.contains_key(&key) {
                    continue;
                }
                level.orbit.insert(key, level.points.len());
                level.points.push(image);
                let rep = level.gens[s].compose(&level.reps[i]);
                let inv = level.inv_reps[i].compose(&level.gen_invs[s]);
                level.reps.push(rep);
                level.inv_reps.push(inv);
                if stored_elsewhere + level.points.len() > max_points {
                    return Err(GroupError::BudgetExceeded(format!(
                        "stabilizer chain exceeds {max_points} orbit points"
                    )));
                }
            }
            i += 1;
        }
        Ok(())
    }

    /// Picks a vector moved by `h` whose orbit under the enclosing level's
    /// generators is smallest among the basis vectors and a random sample.
    fn choose_base_point(&mut self, h: &E, level: usize) -> Vec<u32> {
        let n = self.dim;
        let p = self.prime;
        let mut candidates: Vec<Vec<u32>> = (0..n)
            .map(|k| {
                let mut v = vec![0; n];
                v[k] = 1;
                v
            })
            .collect();
        while candidates.len() < self.opts.base_candidates.max(n) {
            let v: Vec<u32> = (0..n).map(|_| self.rng.gen_range(0..p)).collect();
            candidates.push(v);
        }
        let moved: Vec<Vec<u32>> = candidates
            .into_iter()
            .filter(|v| h.act(v) != *v)
            .collect();
        let probe: Vec<E> = if level == 0 {
            vec![h.clone()]
        } else {
            let mut g = self.levels[level - 1].gens.clone();
            g.push(h.clone());
            g
        };
        let mut best: Option<(usize, Vec<u32>)> = None;
        for v in moved {
            let cap = best.as_ref().map_or(self.opts.max_points, |(s, _)| *s);
            if let Some(size) = orbit_size_capped(&probe, &v, self.codec, cap) {
                if best.as_ref().is_none_or(|(s, _)| size < *s) {
                    best = Some((size, v));
                }
            }
        }
        match best {
            Some((_, v)) => v,
            None => (0..n)
                .map(|k| {
                    let mut v = vec![0; n];
                    v[k] = 1;
                    v
                })
                .find(|v| h.act(v) != *v)
                .expect("a non-identity matrix moves some basis vector"),
        }
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.points.len() as u128).product()
    }

    pub fn base_len(&self) -> usize {
        self.levels.len()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.points.len()).collect()
    }

    pub fn contains(&self, g: &E) -> bool {
        let (res, _) = self.sift(g.clone(), 0);
        res.is_identity()
    }

    /// Coset representatives per level, outermost first; every element is
    /// uniquely a product `t_0 t_1 ⋯ t_k` with `t_i` from level `i`.
    pub fn transversals(&self) -> Vec<&[E]> {
        self.levels.iter().map(|l| l.reps.as_slice()).collect()
    }

    pub fn strong_generators(&self) -> &[E] {
        self.levels.first().map_or(&[], |l| l.gens.as_slice())
    }
}

fn orbit_size_capped<E: ChainElement>(
    gens: &[E],
    v: &[u32],
    codec: KeyCodec,
    cap: usize,
) -> Option<usize> {
    let mut seen = std::collections::HashSet::new();
    let mut queue = vec![v.to_vec()];
    seen.insert(codec.encode(v));
    let mut i = 0;
    while i < queue.len() {
        for g in gens {
            let w = g.act(&queue[i]);
            if seen.insert(codec.encode(&w)) {
                if seen.len() > cap {
                    return None;
                }
                queue.push(w);
            }
        }
        i += 1;
    }
    Some(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(p: u32, images: &[usize]) -> FpMat {
        let n = images.len();
        let mut d = vec![0; n * n];
        for (j, &i) in images.iter().enumerate() {
            d[i * n + j] = 1;
        }
        FpMat::from_vec(n, p, d)
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 2..=6usize {
            let swap: Vec<usize> = (0..n).map(|i| match i { 0 => 1, 1 => 0, _ => i }).collect();
            let cyc: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let gens = [perm(7, &swap), perm(7, &cyc)];
            let chain = StabChain::build(&gens, FpMat::identity(n, 7), BsgsOptions::default()).unwrap();
            let fact: u128 = (1..=n as u128).product();
            assert_eq!(chain.order(), fact);
            assert!(chain.contains(&perm(7, &swap)));
            assert!(!chain.contains(&FpMat::scalar(n, 7, 3)));
        }
    }

    #[test]
    fn monomial_group_order() {
        // diag(-1,1,1) and the 3-cycle over F_7 generate 2^3 ⋊ C_3
        let d = FpMat::from_vec(3, 7, vec![6, 0, 0, 0, 1, 0, 0, 0, 1]);
        let c = perm(7, &[1, 2, 0]);
        let chain = StabChain::build(&[d, c], FpMat::identity(3, 7), BsgsOptions::default()).unwrap();
        assert_eq!(chain.order(), 24);
    }

    #[test]
    fn budget_is_enforced() {
        let swap = perm(7, &[1, 0, 2, 3, 4, 5]);
        let cyc = perm(7, &[1, 2, 3, 4, 5, 0]);
        let opts = BsgsOptions {
            max_points: 3,
            ..Default::default()
        };
        assert!(matches!(
            StabChain::build(&[swap, cyc], FpMat::identity(6, 7), opts),
            Err(GroupError::BudgetExceeded(_))
        ));
    }
}
