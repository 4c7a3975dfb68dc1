use serde::{Deserialize, Serialize};

use crate::arith::{format_literal, parse_literal};

use super::{CycloMatrix, GeneratedGroup, GroupError};

/// On-disk group description: generators as rows of cyclotomic literals at a
/// file-level conductor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub conductor: u32,
    pub dimension: usize,
    pub generators: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl GroupFile {
    pub fn from_json(s: &str) -> Result<Self, GroupError> {
        serde_json::from_str(s).map_err(|e| GroupError::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("group file serializes")
    }

    pub fn from_group(g: &GeneratedGroup) -> Self {
        let m = g.conductor();
        let generators = g
            .generators()
            .iter()
            .map(|mat| {
                mat.lift(m)
                    .rows()
                    .iter()
                    .map(|r| r.iter().map(format_literal).collect())
                    .collect()
            })
            .collect();
        Self {
            conductor: m,
            dimension: g.dim(),
            generators,
            provenance: None,
        }
    }

    pub fn to_group(&self) -> Result<GeneratedGroup, GroupError> {
        if self.conductor == 0 {
            return Err(GroupError::Malformed("conductor must be positive".into()));
        }
        let mut mats = Vec::with_capacity(self.generators.len());
        for (k, rows) in self.generators.iter().enumerate() {
            if rows.len() != self.dimension || rows.iter().any(|r| r.len() != self.dimension) {
                return Err(GroupError::Malformed(format!(
                    "generator {k} is not {0}x{0}",
                    self.dimension
                )));
            }
            let parsed = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|s| parse_literal(s, self.conductor))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| GroupError::Malformed(e.to_string()))?;
            mats.push(CycloMatrix::from_rows(parsed)?.lift(self.conductor));
        }
        GeneratedGroup::new(mats)
    }
}
