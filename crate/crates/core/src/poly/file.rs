use serde::{Deserialize, Serialize};

use crate::arith::{format_literal, parse_literal};

use super::{HomogPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

/// On-disk polynomial: terms in graded-lex order with literal coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyFile {
    pub conductor: u32,
    pub nvars: usize,
    pub degree: u32,
    pub terms: Vec<PolyTerm>,
}

impl PolyFile {
    pub fn from_json(s: &str) -> Result<Self, PolyError> {
        serde_json::from_str(s).map_err(|e| PolyError::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polynomial file serializes")
    }

    pub fn from_poly(f: &HomogPoly) -> Self {
        Self {
            conductor: f.conductor(),
            nvars: f.nvars(),
            degree: f.degree(),
            terms: f
                .terms()
                .iter()
                .map(|(m, c)| PolyTerm {
                    exponents: m.exponents().to_vec(),
                    coeff: format_literal(&c.lift(f.conductor())),
                })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> Result<HomogPoly, PolyError> {
        if self.conductor == 0 {
            return Err(PolyError::Malformed("conductor must be positive".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                parse_literal(&t.coeff, self.conductor)
                    .map(|c| (t.exponents.clone(), c))
                    .map_err(|e| PolyError::Malformed(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        HomogPoly::new(self.nvars, self.degree, terms)
    }
}
