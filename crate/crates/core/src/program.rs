//! What every compiled program exposes: its registry, Hamiltonian, reduced
//! QUBO, logic blocks and a decode table naming the semantic variables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::QuantumInt;
use crate::poly::{int, Assignment, Coeff, Polynomial, Qubo, Role, VarId, VariableRegistry};

/// Scale applied to every logic-gadget block before it is composed with
/// objective terms, so a broken gadget costs at least 2.
pub const LOGIC_WEIGHT: i64 = 2;

pub fn logic_weight() -> Coeff {
    int(LOGIC_WEIGHT)
}

pub trait Program {
    fn registry(&self) -> &VariableRegistry;
    /// Composed Hamiltonian before order reduction.
    fn hamiltonian(&self) -> &Polynomial;
    fn qubo(&self) -> &Qubo;
    /// Unscaled logic blocks; each is zero iff its gadget is consistent.
    fn logic(&self) -> &[Polynomial];
    fn decode_table(&self) -> DecodeTable;
    /// Bindings for values fixed at build time (array contents, targets).
    fn clamp(&self) -> &Assignment;
    /// Bits of the data array the program operates on.
    fn storage(&self) -> Vec<VarId> {
        Vec::new()
    }
}

/// Fixed-size array of equal-width unsigned registers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArraySpec {
    pub element_width: usize,
    pub elements: Vec<QuantumInt>,
}

impl ArraySpec {
    /// Allocates `{name}[i].bit{l}` for every element, grouped per element.
    pub fn allocate(registry: &mut VariableRegistry, name: &str, n: usize, width: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("array needs at least one element"));
        }
        if width == 0 || width > 63 {
            return Err(Error::invalid(format!("element width {width} outside 1..=63")));
        }
        let elements = (0..n)
            .map(|i| {
                let elem = format!("{name}[{i}]");
                QuantumInt::allocate(registry, &elem, width, Role::Input, &elem)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ArraySpec { element_width: width, elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn bits(&self) -> Vec<Vec<VarId>> {
        self.elements.iter().map(|e| e.bits().to_vec()).collect()
    }

    /// Bindings that load `values` into the array.
    pub fn clamp_values(&self, values: &[u64]) -> Result<Assignment> {
        if values.len() != self.len() {
            return Err(Error::LengthMismatch { left: values.len(), right: self.len() });
        }
        let mut a = Assignment::new();
        for (e, &v) in self.elements.iter().zip(values) {
            a.extend(&e.clamp(v)?);
        }
        Ok(a)
    }

    pub fn values(&self, a: &Assignment) -> Vec<u64> {
        self.elements.iter().map(|e| register_value(e.bits(), a)).collect()
    }
}

/// LSB-first value of `bits`; unbound bits read as 0.
pub fn register_value(bits: &[VarId], a: &Assignment) -> u64 {
    bits.iter().enumerate().fold(0, |acc, (j, &b)| acc | (u64::from(a.get(b).unwrap_or(false)) << j))
}

pub fn flag(v: VarId, a: &Assignment) -> bool {
    a.get(v).unwrap_or(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchVariant {
    Summation,
    LogicalOr,
    Count,
}

impl std::str::FromStr for SearchVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" | "summation" => Ok(SearchVariant::Summation),
            "or" | "logical_or" => Ok(SearchVariant::LogicalOr),
            "count" => Ok(SearchVariant::Count),
            _ => Err(Error::invalid(format!("unknown search variant `{s}`"))),
        }
    }
}

impl std::fmt::Display for SearchVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SearchVariant::Summation => "summation",
            SearchVariant::LogicalOr => "logical_or",
            SearchVariant::Count => "count",
        })
    }
}

/// Semantic names for program variables, serialized into the variable map.
/// Registers are LSB-first bit lists; indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecodeTable {
    Search {
        variant: SearchVariant,
        #[serde(rename = "A")]
        array: Vec<Vec<VarId>>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        n: Option<Vec<VarId>>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        x: Option<Vec<VarId>>,
        #[serde(rename = "I")]
        match_flags: Vec<VarId>,
        #[serde(rename = "V")]
        value_flags: Vec<VarId>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        not_found: Option<VarId>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        found: Option<VarId>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        count: Option<Vec<VarId>>,
    },
    Assign {
        #[serde(rename = "A")]
        array: Vec<Vec<VarId>>,
        n: Vec<VarId>,
        x: Vec<VarId>,
        #[serde(rename = "I")]
        match_flags: Vec<VarId>,
    },
    Bounds {
        #[serde(rename = "A")]
        array: Vec<Vec<VarId>>,
        x: Vec<VarId>,
        #[serde(rename = "C")]
        compare_flags: Vec<VarId>,
        spans: Vec<VarId>,
    },
    Sort {
        #[serde(rename = "A")]
        source: Vec<Vec<VarId>>,
        #[serde(rename = "B")]
        dest: Vec<Vec<VarId>>,
        #[serde(rename = "M")]
        mapping: Vec<Vec<VarId>>,
        copy_ancillas: Vec<VarId>,
    },
}

/// Decoded meaning of one assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decoded {
    Search {
        #[serde(rename = "A")]
        array: Vec<u64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        x: Option<u64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        n: Option<u64>,
        /// Indices with both I_i and V_i set.
        selected: Vec<usize>,
        /// Indices with V_i set.
        matches: Vec<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        not_found: Option<u8>,
        #[serde(skip_serializing_if = "Option::is_none")]
        found: Option<u8>,
        #[serde(skip_serializing_if = "Option::is_none")]
        count: Option<u64>,
    },
    Assign {
        #[serde(rename = "A")]
        array: Vec<u64>,
        n: u64,
        x: u64,
    },
    Bounds {
        #[serde(rename = "A")]
        array: Vec<u64>,
        x: u64,
        #[serde(rename = "C")]
        compare: Vec<u8>,
        spans: Vec<u8>,
        result: crate::bounds::BoundsResult,
    },
    Sort {
        #[serde(rename = "A")]
        source: Vec<u64>,
        sorted: Vec<u64>,
        perm: Vec<usize>,
    },
}

impl DecodeTable {
    pub fn decode(&self, a: &Assignment) -> Result<Decoded> {
        match self {
            DecodeTable::Search { .. } => crate::search::decode_table(self, a),
            DecodeTable::Assign { array, n, x, .. } => Ok(Decoded::Assign {
                array: array.iter().map(|b| register_value(b, a)).collect(),
                n: register_value(n, a),
                x: register_value(x, a),
            }),
            DecodeTable::Bounds { .. } => crate::bounds::decode_table(self, a),
            DecodeTable::Sort { .. } => crate::sort::decode_table(self, a),
        }
    }
}

/// True when every logic block is zero and every substitution holds.
pub fn logic_consistent(p: &dyn Program, a: &Assignment) -> Result<bool> {
    for block in p.logic() {
        if !crate::gadgets::satisfied(block, a)? {
            return Ok(false);
        }
    }
    for sub in &p.qubo().ledger {
        if !sub.is_satisfied(a)? {
            return Ok(false);
        }
    }
    Ok(true)
}
