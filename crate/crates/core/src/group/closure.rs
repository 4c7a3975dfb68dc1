use indexmap::IndexSet;

use super::fp::{ElemKey, FpMat, KeyCodec};
use super::matrix::CycloMatrix;
use super::GroupError;

/// Every element of a finite matrix group over `F_p`, found by breadth-first
/// closure under right multiplication by the generators.
///
/// Elements are stored only as hash keys; matrices are decoded on demand.
/// When built with [`enumerate_exact`], the exact characteristic-zero matrix
/// of each element is kept in the same order.
pub struct Closure {
    dim: usize,
    prime: u32,
    codec: KeyCodec,
    elements: IndexSet<ElemKey>,
    exact: Option<Vec<CycloMatrix>>,
}

/// Limits for closure enumeration.
#[derive(Debug, Clone, Copy)]
pub struct ClosureLimits {
    pub max_elements: usize,
    pub memory_budget_bytes: usize,
}

impl Default for ClosureLimits {
    fn default() -> Self {
        Self {
            max_elements: 2_000_000,
            memory_budget_bytes: 2 << 30,
        }
    }
}

fn check_limits(len: usize, codec: &KeyCodec, limits: &ClosureLimits) -> Result<(), GroupError> {
    if len > limits.max_elements {
        return Err(GroupError::CapExceeded {
            cap: limits.max_elements,
        });
    }
    // key plus index-map bucket overhead
    let bytes = len * (codec.key_bytes() + 16);
    if bytes > limits.memory_budget_bytes {
        return Err(GroupError::BudgetExceeded(format!(
            "closure needs about {} MiB",
            bytes >> 20
        )));
    }
    Ok(())
}

/// Enumerates `⟨gens⟩` over `F_p`.
pub fn enumerate(gens: &[FpMat], limits: &ClosureLimits) -> Result<Closure, GroupError> {
    let first = gens.first().ok_or(GroupError::NoGenerators)?;
    let dim = first.dim();
    let prime = first.prime();
    let codec = KeyCodec::new(dim * dim, prime);
    let mut elements = IndexSet::new();
    elements.insert(codec.encode(FpMat::identity(dim, prime).data()));
    let mut i = 0;
    while i < elements.len() {
        let x = FpMat::from_vec(dim, prime, codec.decode(&elements[i]));
        for g in gens {
            let y = x.mul(g);
            if elements.insert(codec.encode(y.data())) {
                check_limits(elements.len(), &codec, limits)?;
            }
        }
        i += 1;
    }
    Ok(Closure {
        dim,
        prime,
        codec,
        elements,
        exact: None,
    })
}

/// As [`enumerate`], also carrying the exact matrix of every element.
/// `exact_gens[k]` must reduce to `gens[k]`.
pub fn enumerate_exact(
    gens: &[FpMat],
    exact_gens: &[CycloMatrix],
    limits: &ClosureLimits,
) -> Result<Closure, GroupError> {
    let first = gens.first().ok_or(GroupError::NoGenerators)?;
    assert_eq!(gens.len(), exact_gens.len(), "generator lists differ in length");
    let dim = first.dim();
    let prime = first.prime();
    let m = exact_gens
        .iter()
        .fold(1, |acc, g| num_integer::lcm(acc, g.conductor()));
    let codec = KeyCodec::new(dim * dim, prime);
    let mut elements = IndexSet::new();
    let mut exact = vec![CycloMatrix::identity(dim, m)];
    elements.insert(codec.encode(FpMat::identity(dim, prime).data()));
    let mut i = 0;
    while i < elements.len() {
        let x = FpMat::from_vec(dim, prime, codec.decode(&elements[i]));
        for (g, ge) in gens.iter().zip(exact_gens) {
            let y = x.mul(g);
            if elements.insert(codec.encode(y.data())) {
                check_limits(elements.len(), &codec, limits)?;
                exact.push(exact[i].mul(ge));
            }
        }
        i += 1;
    }
    Ok(Closure {
        dim,
        prime,
        codec,
        elements,
        exact: Some(exact),
    })
}

impl Closure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn element(&self, i: usize) -> FpMat {
        FpMat::from_vec(self.dim, self.prime, self.codec.decode(&self.elements[i]))
    }

    pub fn iter(&self) -> impl Iterator<Item = FpMat> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn exact(&self) -> Option<&[CycloMatrix]> {
        self.exact.as_deref()
    }

    pub fn contains(&self, g: &FpMat) -> bool {
        self.elements.contains(&self.codec.encode(g.data()))
    }

    /// Number of scalar matrices in the group.
    pub fn scalar_count(&self) -> usize {
        self.iter().filter(|g| g.scalar_value().is_some()).count()
    }

    /// Number of elements commuting with every generator.
    pub fn center_count(&self, gens: &[FpMat]) -> usize {
        self.iter()
            .filter(|g| gens.iter().all(|s| g.commutes_with(s)))
            .count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group() {
        // diag(2, 4) over F_7 has order 3
        let g = FpMat::from_vec(2, 7, vec![2, 0, 0, 4]);
        let c = enumerate(&[g], &ClosureLimits::default()).unwrap();
        assert_eq!(c.order(), 3);
        assert_eq!(c.scalar_count(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        // S_3 as permutation matrices over F_7
        let swap = FpMat::from_vec(3, 7, vec![0, 1, 0, 1, 0, 0, 0, 0, 1]);
        let cyc = FpMat::from_vec(3, 7, vec![0, 0, 1, 1, 0, 0, 0, 1, 0]);
        let limits = ClosureLimits {
            max_elements: 4,
            ..Default::default()
        };
        assert!(matches!(
            enumerate(&[swap.clone(), cyc.clone()], &limits),
            Err(GroupError::CapExceeded { cap: 4 })
        ));
        let c = enumerate(&[swap, cyc], &ClosureLimits::default()).unwrap();
        assert_eq!(c.order(), 6);
    }
}
