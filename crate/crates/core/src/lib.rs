//! Exact, certificate-producing decision procedures for Fubini powers of
//! `Fin`, the inductive limit `Fin_ω`, Katětov's `Fin^ω`, inductive limits of
//! quasi-homomorphism systems and the ideal `Fin'_ω`, together with the
//! greedy embedding construction into `Fin'_ω`.

pub mod certificate;
pub mod embed;
pub mod error;
pub mod finprime;
pub mod ideal;
pub mod limits;
pub mod partition;
pub mod quasisys;
pub mod random;
pub mod sumspace;
pub mod symcore;

pub use certificate::Certificate;
pub use error::{Error, Result};
pub use finprime::{BlockFormula, CertifiedSet};
pub use ideal::{IdealDescriptor, SetValue};
pub use partition::{FamilyId, Stack};
pub use quasisys::QuasiHomSystem;
pub use sumspace::{MapExpr, SumSymbolicSet};
pub use symcore::{Conjunct, Pred, SetOp, SymbolicSet};
