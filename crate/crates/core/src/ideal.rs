//! Descriptors naming the ideals of the calculus and a single membership
//! dispatcher over them.

use crate::error::{Error, Result};
use crate::finprime::{finprime_member, upfamily_member, BlockFormula, CertifiedSet, Expr};
use crate::partition::FamilyId;
use crate::quasisys::fubini_member;
use crate::sumspace::{finomega_member, finpow_omega_member, SumSymbolicSet};
use crate::symcore::SymbolicSet;

/// How the components of a Fubini sum are chosen.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Components {
    /// `Fin^j` on the summand `ω^j`.
    FinPowByIndex,
    /// One ideal for every summand.
    Uniform(Box<IdealDescriptor>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IdealDescriptor {
    FinPow(usize),
    FinOmegaLimit,
    FinOmegaKatetov,
    FinPrime(FamilyId),
    FubiniSum {
        index: Box<IdealDescriptor>,
        components: Components,
    },
    Restriction(Box<IdealDescriptor>, SetValue),
    GeneratedBy(Vec<CertifiedSet>),
}

/// A set in one of the three universes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetValue {
    Level(SymbolicSet),
    Sum(SumSymbolicSet),
    Certified(CertifiedSet),
}

impl SetValue {
    fn universe(&self) -> &'static str {
        match self {
            SetValue::Level(_) => "a level set",
            SetValue::Sum(_) => "a sum set",
            SetValue::Certified(_) => "a certified set",
        }
    }

    fn is_subset(&self, other: &SetValue) -> Result<bool> {
        match (self, other) {
            (SetValue::Level(a), SetValue::Level(b)) => a.is_subset(b),
            (SetValue::Sum(a), SetValue::Sum(b)) => a.is_subset(b),
            _ => Err(Error::Unsupported(format!(
                "inclusion of {} in {}",
                self.universe(),
                other.universe()
            ))),
        }
    }
}

impl IdealDescriptor {
    /// Checks finite depth bookkeeping and the restriction invariant where it
    /// is decidable: the carrier must not itself be small.
    pub fn validate(&self) -> Result<()> {
        match self {
            IdealDescriptor::FinPow(0) => Err(Error::Malformed("Fin^0".into())),
            IdealDescriptor::FubiniSum { index, components } => {
                index.validate()?;
                if let Components::Uniform(c) = components {
                    c.validate()?;
                }
                Ok(())
            }
            IdealDescriptor::Restriction(base, carrier) => {
                base.validate()?;
                if member(base, carrier)? {
                    return Err(Error::Malformed("restriction to a member of the base ideal".into()));
                }
                Ok(())
            }
            IdealDescriptor::GeneratedBy(gens) => {
                if let Some(first) = gens.first() {
                    if gens.iter().any(|g| g.family() != first.family()) {
                        return Err(Error::Malformed("generators from different families".into()));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Membership of `value` in the ideal named by `desc`.
pub fn member(desc: &IdealDescriptor, value: &SetValue) -> Result<bool> {
    match (desc, value) {
        (IdealDescriptor::FinPow(n), SetValue::Level(s)) => crate::symcore::fin_member(s, *n),
        (IdealDescriptor::FinOmegaLimit, SetValue::Sum(m)) => Ok(finomega_member(m)?.is_some()),
        (IdealDescriptor::FinOmegaKatetov, SetValue::Sum(m)) => finpow_omega_member(m),
        (IdealDescriptor::FinPrime(fam), SetValue::Certified(a)) => {
            if a.family() != *fam {
                return Err(Error::FamilyMismatch(fam.to_string(), a.family().to_string()));
            }
            Ok(finprime_member(a)?.is_some())
        }
        (IdealDescriptor::FubiniSum { .. }, SetValue::Sum(m)) => fubini_member(desc, m),
        (IdealDescriptor::Restriction(base, carrier), _) => {
            if !value.is_subset(carrier)? {
                return Err(Error::Precondition(
                    "set is not contained in the restriction carrier".into(),
                ));
            }
            member(base, value)
        }
        (IdealDescriptor::GeneratedBy(gens), SetValue::Certified(a)) => generated_member(gens, a),
        _ => Err(Error::Unsupported(format!(
            "membership of {} in {desc:?}",
            value.universe()
        ))),
    }
}

/// `A` belongs to the ideal generated by `gens` (together with the finite
/// sets) iff `A ∖ ⋃ gens` is finite. Outside finite parts, a point's
/// membership depends only on its cell stack, and every satisfiable
/// combination of cell conditions is realised by infinitely many points, so
/// this is the validity of "profile(A) ⇒ ⋁ profile(G)" over cell stacks.
pub fn generated_member(gens: &[CertifiedSet], a: &CertifiedSet) -> Result<bool> {
    if let Some(g) = gens.iter().find(|g| g.family() != a.family()) {
        return Err(Error::FamilyMismatch(a.family().to_string(), g.family().to_string()));
    }
    let bad = Expr::and(vec![
        a.profile(),
        Expr::negate(Expr::or(gens.iter().map(CertifiedSet::profile).collect())),
    ]);
    let top = bad.max_level().unwrap_or(0);
    // `bad` is satisfiable iff its negation is not valid; validity of a
    // formula is membership of the formula in the up-family with every
    // B'_l empty, which the up-closure decision reports directly.
    let negated = BlockFormula::new(top, Expr::negate(bad))?;
    Ok(match upfamily_member(&negated)? {
        Some(smalls) => smalls.iter().all(SymbolicSet::is_empty),
        None => false,
    })
}
