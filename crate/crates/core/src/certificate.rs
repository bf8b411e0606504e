use std::collections::BTreeSet;

use crate::symcore::SymbolicSet;

/// Re-checkable evidence attached to a membership verdict.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Certificate {
    /// `M ∩ Σ_{j≥index} π_{index,j}^{-1}[dual] = ∅` with `dual` in the dual filter of Fin^index.
    Limit { index: usize, dual: SymbolicSet },
    /// A point of summand `summand` defeating a candidate certificate.
    Refutation { summand: usize, point: Vec<u64> },
    /// `∏_l (smalls[l])^c ⊆ φ_level(A)`, each `smalls[l]` in Fin^{l+1}.
    Rectangle { level: usize, smalls: Vec<SymbolicSet> },
    /// `A ⊆ remainder ∪ ⋃ {⋃_{s∈B} X_s : (l, B) ∈ generators}`.
    Decomposition {
        generators: Vec<(usize, SymbolicSet)>,
        remainder: BTreeSet<u64>,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Limit { .. } => "limit",
            Certificate::Refutation { .. } => "refutation",
            Certificate::Rectangle { .. } => "rectangle",
            Certificate::Decomposition { .. } => "decomposition",
        }
    }
}
