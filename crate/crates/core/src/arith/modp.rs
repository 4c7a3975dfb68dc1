use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{ArithError, Cyclo};

/// Default number of candidates `1 + k·m` inspected by [`find_reduction_prime`].
pub const DEFAULT_PRIME_SEARCH_CAP: u64 = 10_000_000;

pub fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `None` for zero.
pub fn mod_inv(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(mod_pow(a, p - 2, p))
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn has_exact_order(x: u64, order: u64, p: u64) -> bool {
    mod_pow(x, order, p) == 1
        && prime_factors(order)
            .into_iter()
            .all(|q| mod_pow(x, order / q, p) != 1)
}

/// Ring homomorphism `Z[ζ_m][1/D] → F_p` sending `ζ_m` to an element of exact
/// order `m`, for a prime `p ≡ 1 (mod m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReductionMap {
    conductor: u32,
    prime: u64,
    root: u64,
}

impl ReductionMap {
    /// Validates the data: `p` prime, `p ≡ 1 (mod m)`, `root` of exact order `m`.
    pub fn new(conductor: u32, prime: u64, root: u64) -> Option<Self> {
        let m = conductor as u64;
        if conductor == 0 || !is_prime(prime) || !(prime - 1).is_multiple_of(m) || prime >= 1 << 32 {
            return None;
        }
        if !has_exact_order(root % prime, m, prime) {
            return None;
        }
        Some(Self {
            conductor,
            prime,
            root: root % prime,
        })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    /// Image of `ζ_m^k` where `m` is the map's conductor.
    pub fn root_power(&self, k: i64) -> u64 {
        let m = self.conductor as i64;
        mod_pow(self.root, k.rem_euclid(m) as u64, self.prime)
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        let r = n.mod_floor(&BigInt::from(self.prime));
        r.to_u64().expect("residue fits in u64")
    }

    /// Image of a cyclotomic number whose conductor divides the map's.
    pub fn reduce(&self, a: &Cyclo) -> Result<u64, ArithError> {
        let m = a.conductor();
        if !self.conductor.is_multiple_of(m) {
            return Err(ArithError::ConductorMismatch {
                value: m,
                map: self.conductor,
            });
        }
        let p = self.prime;
        let den = self.reduce_int(a.denominator());
        let den_inv = mod_inv(den, p).ok_or(ArithError::NonInvertibleDenominator { prime: p })?;
        let step = (self.conductor / m) as u64;
        let r = mod_pow(self.root, step, p);
        let mut acc = 0u64;
        let mut pw = 1u64;
        for c in a.numerators() {
            if !c.is_zero() {
                let cm = self.reduce_int(c);
                acc = (acc + (cm as u128 * pw as u128 % p as u128) as u64) % p;
            }
            pw = (pw as u128 * r as u128 % p as u128) as u64;
        }
        Ok((acc as u128 * den_inv as u128 % p as u128) as u64)
    }
}

/// Smallest prime `p ≥ lower_bound` with `p ≡ 1 (mod m)`, plus a verified
/// root of order `m`.
pub fn find_reduction_prime(m: u32, lower_bound: u64) -> ReductionMap {
    find_reduction_prime_capped(m, lower_bound, DEFAULT_PRIME_SEARCH_CAP)
        .expect("prime search cap exceeded")
}

/// As [`find_reduction_prime`], inspecting at most `cap` candidates.
pub fn find_reduction_prime_capped(
    m: u32,
    lower_bound: u64,
    cap: u64,
) -> Result<ReductionMap, ArithError> {
    assert!(m >= 1, "conductor must be positive");
    let step = m as u64;
    let lower = lower_bound.max(2);
    // first candidate 1 + k m >= lower
    let k0 = (lower - 1).div_ceil(step);
    let mut p = 1 + k0 * step;
    if p < 2 {
        p += step;
    }
    let start = p;
    for _ in 0..cap {
        if is_prime(p) {
            let factors = prime_factors(p - 1);
            let gen = (2..p)
                .find(|&g| factors.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))
                .unwrap_or(1);
            let root = mod_pow(gen, (p - 1) / step, p);
            if let Some(map) = ReductionMap::new(m, p, root) {
                return Ok(map);
            }
        }
        p += step;
    }
    Err(ArithError::PrimeSearchCap {
        modulus: step,
        from: start,
        to: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn primes_congruent_to_one() {
        assert_eq!(find_reduction_prime(60, 2).prime(), 61);
        assert_eq!(find_reduction_prime(28, 2).prime(), 29);
        assert_eq!(find_reduction_prime(1, 2).prime(), 2);
        assert_eq!(find_reduction_prime(3, 8).prime(), 13);
        // scanning by hand: 1 + 60k for k = 1, 2, 3 gives 61, 121 = 11², 181
        assert_eq!(find_reduction_prime(60, 62).prime(), 181);
    }

    #[test]
    fn search_cap_is_reported() {
        let err = find_reduction_prime_capped(60, 62, 1).unwrap_err();
        assert!(matches!(err, ArithError::PrimeSearchCap { .. }));
    }

    #[test]
    fn reduce_basics() {
        let map = find_reduction_prime(12, 2);
        assert_eq!(map.reduce(&Cyclo::one(12)).unwrap(), 1);
        assert_eq!(map.reduce(&Cyclo::zeta(12, 1)).unwrap(), map.root());
        let i = Cyclo::zeta(4, 1);
        let p = map.prime();
        let ri = map.reduce(&i).unwrap();
        assert_eq!(map.reduce(&(&i * &i)).unwrap(), p - 1);
        assert_eq!(ri * ri % p, p - 1);
    }

    #[test]
    fn bad_denominator_is_signalled() {
        let map = find_reduction_prime(4, 5);
        let third = Cyclo::from_rational(4, &BigRational::new(1.into(), 5.into()));
        assert_eq!(
            map.reduce(&third),
            Err(ArithError::NonInvertibleDenominator { prime: 5 })
        );
    }

    #[test]
    fn map_validation() {
        assert!(ReductionMap::new(4, 13, 5).is_some());
        assert!(ReductionMap::new(4, 13, 12).is_none());
        assert!(ReductionMap::new(4, 11, 3).is_none());
    }
}
