//! Registry of the exceptional hypersurfaces, the Fermat family and the
//! primitive groups whose invariant degrees are checked, with their
//! expected numbers.

pub mod build;
pub mod external;
mod verify;

pub use verify::{
    bound_consistency, exit_code, primitive_ids, verify_all, verify_example, verify_primitive,
    Check, CheckStatus, Overall, Profile, VerificationReport, VerifyOptions,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::format_literal;
use crate::bounds::{BoundError, Partition};
use crate::group::{CycloMatrix, GeneratedGroup, GroupError, GroupFile};
use crate::poly::{HomogPoly, PolyError, PolyFile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown example id `{0}`")]
    UnknownId(String),
    #[error("malformed registry: {0}")]
    Malformed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Expected orders of `Lin(f)`, its scalar subgroup and `Lin(X)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub linf_order: u128,
    pub scalar_order: u64,
    pub linx_order: u128,
}

/// Whether the stored form is expected to be invariant under the stored
/// generators, or only known to live in other coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolynomialRole {
    Invariant,
    OtherCoordinates,
}

/// A discrepancy in the printed data and how the registry works around it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Erratum {
    /// Generator `index` is stored corrected; `printed` is the matrix as
    /// printed.
    CorrectedGenerator {
        index: usize,
        printed: Vec<Vec<String>>,
        note: String,
    },
    /// The form is invariant only after substituting `x_j ↦ c_j x_j`.
    CoordinateChange { diagonal: Vec<String>, note: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleRecord {
    pub id: String,
    pub n: u32,
    pub d: u32,
    pub generators: GroupFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<PolyFile>,
    pub polynomial_role: PolynomialRole,
    /// Coordinate blocks of the primitive decomposition.
    pub blocks: Vec<Vec<usize>>,
    pub expected: Expected,
    /// Order computations are run only when tier 3 is enabled.
    #[serde(default)]
    pub tier3: bool,
    #[serde(default)]
    pub errata: Vec<Erratum>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl ExampleRecord {
    pub fn group(&self) -> Result<GeneratedGroup, CatalogError> {
        Ok(self.generators.to_group()?)
    }

    pub fn form(&self) -> Result<Option<HomogPoly>, CatalogError> {
        Ok(self.polynomial.as_ref().map(PolyFile::to_poly).transpose()?)
    }

    pub fn partition(&self) -> Result<Partition, CatalogError> {
        Ok(Partition::new(
            self.blocks.iter().map(|b| b.len() as u32).collect(),
        )?)
    }

    pub fn is_fermat(&self) -> bool {
        self.id.starts_with("fermat")
    }
}

/// The bounds on `|Aut(X)|` for the six exceptional `(n, d)`.
pub const MAIN_THEOREM_BOUNDS: [(u32, u32, u128); 6] = [
    (1, 4, 168),
    (1, 6, 360),
    (2, 6, 6912),
    (2, 12, 86400),
    (4, 6, 6531840),
    (4, 12, 186624000),
];

pub fn main_theorem_bound(n: u32, d: u32) -> Option<u128> {
    MAIN_THEOREM_BOUNDS
        .iter()
        .find(|(a, b, _)| *a == n && *b == d)
        .map(|t| t.2)
}

fn group_file(gens: Vec<CycloMatrix>) -> GroupFile {
    GroupFile::from_group(&GeneratedGroup::new(gens).expect("catalog generators are consistent"))
}

fn rows_of(m: &CycloMatrix) -> Vec<Vec<String>> {
    m.rows()
        .iter()
        .map(|r| r.iter().map(format_literal).collect())
        .collect()
}

fn blocks_of(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let b = (start..start + s).collect();
            start += s;
            b
        })
        .collect()
}

struct Entry {
    id: &'static str,
    n: u32,
    d: u32,
    gens: fn() -> Vec<CycloMatrix>,
    form: fn() -> HomogPoly,
    role: PolynomialRole,
    block_sizes: &'static [usize],
    expected: (u128, u64, u128),
    tier3: bool,
    notes: &'static [&'static str],
}

const ENTRIES: [Entry; 8] = [
    Entry {
        id: "ex-1-4",
        n: 1,
        d: 4,
        gens: build::ex_1_4_generators,
        form: build::klein_quartic,
        role: PolynomialRole::Invariant,
        block_sizes: &[3],
        expected: (672, 4, 168),
        tier3: false,
        notes: &["Klein quartic; Lin(X) is PSL2(7)"],
    },
    Entry {
        id: "ex-1-6",
        n: 1,
        d: 6,
        gens: build::ex_1_6_generators,
        form: build::wiman_sextic,
        role: PolynomialRole::OtherCoordinates,
        block_sizes: &[3],
        expected: (2160, 6, 360),
        tier3: false,
        notes: &["Wiman sextic; Lin(X) is A6 (Valentiner group)"],
    },
    Entry {
        id: "ex-1-6-2",
        n: 1,
        d: 6,
        gens: build::ex_1_6_2_generators,
        form: build::hessian_sextic,
        role: PolynomialRole::Invariant,
        block_sizes: &[3],
        expected: (1296, 6, 216),
        tier3: false,
        notes: &["Lin(X) is the Hessian group of order 216"],
    },
    Entry {
        id: "ex-2-4",
        n: 2,
        d: 4,
        gens: build::ex_2_4_generators,
        form: build::ex_2_4_quartic,
        role: PolynomialRole::Invariant,
        block_sizes: &[4],
        expected: (7680, 4, 1920),
        tier3: false,
        notes: &["Lin(X) is an extension of S5 by (Z/2)^4"],
    },
    Entry {
        id: "ex-2-6",
        n: 2,
        d: 6,
        gens: build::ex_2_6_generators,
        form: build::ex_2_6_sextic,
        role: PolynomialRole::Invariant,
        block_sizes: &[2, 2],
        expected: (41472, 6, 6912),
        tier3: false,
        notes: &["two copies of the binary octahedral curve x^5y - xy^5"],
    },
    Entry {
        id: "ex-2-12",
        n: 2,
        d: 12,
        gens: build::ex_2_12_generators,
        form: build::ex_2_12_dodecic,
        role: PolynomialRole::Invariant,
        block_sizes: &[2, 2],
        expected: (1036800, 12, 86400),
        tier3: false,
        notes: &["two copies of the binary icosahedral invariant of degree 12"],
    },
    Entry {
        id: "ex-4-6",
        n: 4,
        d: 6,
        gens: build::ex_4_6_generators,
        form: build::todd_sextic,
        role: PolynomialRole::Invariant,
        block_sizes: &[6],
        expected: (39191040, 6, 6531840),
        tier3: false,
        notes: &[
            "Todd sextic; Lin(X) is 6.PSU4(3).2 modulo scalars",
            "generated by a transposition, a 6-cycle, diag(w, w^2, 1, 1, 1, 1) and I - J/3",
        ],
    },
    Entry {
        id: "ex-4-12",
        n: 4,
        d: 12,
        gens: build::ex_4_12_generators,
        form: build::ex_4_12_dodecic,
        role: PolynomialRole::Invariant,
        block_sizes: &[2, 2, 2],
        expected: (2239488000, 12, 186624000),
        tier3: true,
        notes: &["three copies of the binary icosahedral invariant of degree 12"],
    },
];

fn errata_for(id: &str) -> Vec<Erratum> {
    match id {
        "ex-1-6" => vec![Erratum::CorrectedGenerator {
            index: 3,
            printed: rows_of(&build::ex_1_6_m4_printed().lift(15)),
            note: "the printed matrix is not unitary and has infinite order; the stored one \
                   has first row (1, 1/t, -t)"
                .into(),
        }],
        "ex-2-4" => vec![Erratum::CoordinateChange {
            diagonal: ["1*z^1", "1*z^0", "1*z^0", "1*z^1"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            note: "the generators fix f(Dx) for D = diag(i, 1, 1, i) rather than f".into(),
        }],
        _ => Vec::new(),
    }
}

/// The eight exceptional examples, in order.
pub fn registry() -> Vec<ExampleRecord> {
    ENTRIES
        .iter()
        .map(|s| {
            let form = (s.form)();
            ExampleRecord {
                id: s.id.to_string(),
                n: s.n,
                d: s.d,
                generators: group_file((s.gens)()),
                polynomial: Some(PolyFile::from_poly(&form)),
                polynomial_role: s.role,
                blocks: blocks_of(s.block_sizes),
                expected: Expected {
                    linf_order: s.expected.0,
                    scalar_order: s.expected.1,
                    linx_order: s.expected.2,
                },
                tier3: s.tier3,
                errata: errata_for(s.id),
                notes: s.notes.iter().map(|n| n.to_string()).collect(),
            }
        })
        .collect()
}

fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// The Fermat hypersurface of dimension `n` and degree `d`.
pub fn fermat_record(n: u32, d: u32) -> ExampleRecord {
    let nvars = n as usize + 2;
    let linf = factorial(n + 2) * (d as u128).pow(n + 2);
    ExampleRecord {
        id: format!("fermat-{n}-{d}"),
        n,
        d,
        generators: group_file(build::fermat_generators(nvars, d)),
        polynomial: Some(PolyFile::from_poly(&HomogPoly::fermat(nvars, d))),
        polynomial_role: PolynomialRole::Invariant,
        blocks: (0..nvars).map(|i| vec![i]).collect(),
        expected: Expected {
            linf_order: linf,
            scalar_order: d as u64,
            linx_order: linf / d as u128,
        },
        tier3: false,
        errata: Vec::new(),
        notes: vec!["diagonal roots of unity and coordinate permutations".into()],
    }
}

/// Looks up an exceptional example, or `fermat-<n>-<d>`.
pub fn lookup(id: &str) -> Result<ExampleRecord, CatalogError> {
    if let Some(rest) = id.strip_prefix("fermat-") {
        let parts: Vec<&str> = rest.split('-').collect();
        if let [n, d] = parts[..] {
            if let (Ok(n), Ok(d)) = (n.parse::<u32>(), d.parse::<u32>()) {
                if d >= 3 && n + 2 <= 12 {
                    return Ok(fermat_record(n, d));
                }
            }
        }
        return Err(CatalogError::UnknownId(id.to_string()));
    }
    registry()
        .into_iter()
        .find(|r| r.id == id)
        .ok_or_else(|| CatalogError::UnknownId(id.to_string()))
}

/// Reads a registry override: a JSON list of records.
pub fn registry_from_json(s: &str) -> Result<Vec<ExampleRecord>, CatalogError> {
    serde_json::from_str(s).map_err(|e| CatalogError::Malformed(e.to_string()))
}

/// Primitive groups with a claimed smallest semi-invariant degree.
pub struct PrimitiveGroup {
    pub id: &'static str,
    pub description: &'static str,
    pub build: fn() -> Vec<CycloMatrix>,
    pub semiinvariant_degree: u32,
    /// Further positive degrees claimed, beyond the smallest.
    pub next_degree: Option<u32>,
}

pub const PRIMITIVE_GROUPS: [PrimitiveGroup; 6] = [
    PrimitiveGroup {
        id: "2a5",
        description: "binary icosahedral group in dimension 2",
        build: build::binary_icosahedral,
        semiinvariant_degree: 12,
        next_degree: None,
    },
    PrimitiveGroup {
        id: "2s4",
        description: "binary octahedral group in dimension 2",
        build: build::binary_octahedral,
        semiinvariant_degree: 6,
        next_degree: None,
    },
    PrimitiveGroup {
        id: "2a4",
        description: "binary tetrahedral group in dimension 2",
        build: build::binary_tetrahedral,
        semiinvariant_degree: 4,
        next_degree: None,
    },
    PrimitiveGroup {
        id: "valentiner",
        description: "Valentiner group in dimension 3",
        build: build::ex_1_6_generators,
        semiinvariant_degree: 6,
        next_degree: None,
    },
    PrimitiveGroup {
        id: "klein",
        description: "Klein group of order 168 (with scalars) in dimension 3",
        build: build::ex_1_4_generators,
        semiinvariant_degree: 4,
        next_degree: Some(6),
    },
    PrimitiveGroup {
        id: "a5-dim3",
        description: "icosahedral rotation group in dimension 3",
        build: build::icosahedral_rotations,
        semiinvariant_degree: 2,
        next_degree: Some(4),
    },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_self_consistent() {
        let reg = registry();
        assert_eq!(reg.len(), 8);
        for r in &reg {
            let e = r.expected;
            assert_eq!(e.linf_order, e.scalar_order as u128 * e.linx_order, "{}", r.id);
            let f = r.form().unwrap().unwrap();
            assert_eq!(f.degree(), r.d);
            assert_eq!(f.nvars(), r.n as usize + 2);
            assert_eq!(r.partition().unwrap().total(), r.n + 2);
        }
    }

    #[test]
    fn registry_round_trips() {
        let reg = registry();
        let json = serde_json::to_string(&reg).unwrap();
        assert_eq!(registry_from_json(&json).unwrap(), reg);
        assert!(registry_from_json("[]").unwrap().is_empty());
    }

    #[test]
    fn lookup_handles_fermat_ids() {
        let r = lookup("fermat-2-5").unwrap();
        assert_eq!(r.expected.linf_order, 15000);
        assert_eq!(r.expected.linx_order, 3000);
        assert!(lookup("ex-9-9").is_err());
        assert!(lookup("fermat-2").is_err());
    }
}
