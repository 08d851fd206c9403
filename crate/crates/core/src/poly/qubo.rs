use std::collections::{BTreeMap, BTreeSet};

use super::{Assignment, Coeff, Polynomial, VarId};
use crate::error::{Error, Result};

/// One pair substitution `z = x·y` made during order reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    pub ancilla: VarId,
    pub replaces: (VarId, VarId),
    pub penalty_weight: Coeff,
}

impl Substitution {
    pub fn is_satisfied(&self, a: &Assignment) -> Result<bool> {
        let z = a.bit(self.ancilla)?;
        Ok(z == (a.bit(self.replaces.0)? && a.bit(self.replaces.1)?))
    }
}

/// A degree-≤2 polynomial together with the substitutions that produced it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qubo {
    pub base: Polynomial,
    pub ledger: Vec<Substitution>,
}

impl Qubo {
    pub fn new(base: Polynomial, ledger: Vec<Substitution>) -> Result<Self> {
        if base.degree() > 2 {
            return Err(Error::invalid(format!("QUBO base has degree {}", base.degree())));
        }
        Ok(Qubo { base, ledger })
    }

    pub fn from_quadratic(base: Polynomial) -> Result<Self> {
        Self::new(base, Vec::new())
    }

    pub fn num_vars(&self) -> usize {
        self.base.support().len()
    }

    /// Undirected interaction graph: `v` is adjacent to every variable it
    /// shares a quadratic term with.
    pub fn adjacency(&self) -> BTreeMap<VarId, BTreeSet<VarId>> {
        let mut adj: BTreeMap<VarId, BTreeSet<VarId>> = BTreeMap::new();
        for (mono, _) in self.base.terms() {
            match mono.vars() {
                [v] => {
                    adj.entry(*v).or_default();
                }
                [a, b] => {
                    adj.entry(*a).or_default().insert(*b);
                    adj.entry(*b).or_default().insert(*a);
                }
                _ => {}
            }
        }
        adj
    }

    pub fn clamp(&self, partial: &Assignment) -> Qubo {
        Qubo { base: self.base.clamp(partial), ledger: self.ledger.clone() }
    }
}
