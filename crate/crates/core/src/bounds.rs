//! Bounding-index search over sorted arrays: `C_i = A[i] > x` and
//! `span_i = ¬C_i ∧ C_{i+1}`, so `span_i = 1` exactly when
//! `A[i] ≤ x < A[i+1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::{check_widths, int_greater_than_in, GadgetBuilder, GadgetResult, QuantumInt, Signal};
use crate::poly::{reduce_to_quadratic, Assignment, Polynomial, Qubo, Role, VarId, VariableRegistry};
use crate::program::{flag, logic_weight, register_value, ArraySpec, DecodeTable, Decoded, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum BoundsResult {
    /// `A[i] ≤ x < A[i+1]`.
    InSpan(usize),
    BelowRange,
    AboveRange,
}

/// `C_i = [A[i] > x]` for every element.
pub fn build_compare_flags(array: &ArraySpec, x: &QuantumInt, registry: &mut VariableRegistry) -> Result<Vec<GadgetResult>> {
    array
        .elements
        .iter()
        .enumerate()
        .map(|(i, elem)| {
            check_widths(elem, x)?;
            let label = format!("C[{i}]");
            let mut g = GadgetBuilder::new(registry, &label, "compare");
            let out = int_greater_than_in(&mut g, elem, x)?;
            g.finish(out, Some(&label))
        })
        .collect()
}

/// `span_i = ¬C_i ∧ C_{i+1}`; one AND gadget and no other variable per span.
pub fn build_span_flags(compare: &[VarId], registry: &mut VariableRegistry) -> Result<Vec<GadgetResult>> {
    compare
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let label = format!("span[{i}]");
            let mut g = GadgetBuilder::new(registry, &label, "span");
            let out = g.and2(!Signal::var(w[0]), Signal::var(w[1]));
            g.finish(out, Some(&label))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct BoundsProgram {
    pub registry: VariableRegistry,
    pub hamiltonian: Polynomial,
    pub qubo: Qubo,
    pub logic: Vec<Polynomial>,
    pub clamp: Assignment,
    pub array: ArraySpec,
    pub target: QuantumInt,
    pub compare_flags: Vec<VarId>,
    pub span_flags: Vec<VarId>,
}

/// Allocation order: array, target, comparators, spans.
pub fn compile_bounds(n_elements: usize, element_width: usize) -> Result<BoundsProgram> {
    let mut reg = VariableRegistry::new();
    let array = ArraySpec::allocate(&mut reg, "A", n_elements, element_width)?;
    let target = QuantumInt::allocate(&mut reg, "x", element_width, Role::Input, "x")?;
    let lambda = logic_weight();
    let mut hamiltonian = Polynomial::zero();
    let mut logic = Vec::new();
    let compare = build_compare_flags(&array, &target, &mut reg)?;
    let compare_flags: Vec<VarId> = compare.iter().map(|g| g.output).collect();
    let spans = build_span_flags(&compare_flags, &mut reg)?;
    let span_flags = spans.iter().map(|g| g.output).collect();
    for g in compare.into_iter().chain(spans) {
        hamiltonian += g.hamiltonian.scale(&lambda);
        logic.push(g.hamiltonian);
    }
    let qubo = reduce_to_quadratic(&hamiltonian, &mut reg);
    Ok(BoundsProgram {
        registry: reg,
        hamiltonian,
        qubo,
        logic,
        clamp: Assignment::new(),
        array,
        target,
        compare_flags,
        span_flags,
    })
}

impl BoundsProgram {
    pub fn with_values(mut self, values: Option<&[u64]>, target: Option<u64>) -> Result<Self> {
        if let Some(values) = values {
            self.clamp.extend(&self.array.clamp_values(values)?);
        }
        if let Some(t) = target {
            self.clamp.extend(&self.target.clamp(t)?);
        }
        Ok(self)
    }

    pub fn decode(&self, a: &Assignment) -> Result<BoundsResult> {
        decode_bounds(&self.compare_flags, &self.span_flags, a)
    }
}

/// The unique set span wins; otherwise `C_0 = 1` means below range and
/// `C_{N−1} = 0` above range.
pub fn decode_bounds(compare: &[VarId], spans: &[VarId], a: &Assignment) -> Result<BoundsResult> {
    let set: Vec<usize> = spans.iter().enumerate().filter(|(_, &s)| flag(s, a)).map(|(i, _)| i).collect();
    match set.as_slice() {
        [i] => Ok(BoundsResult::InSpan(*i)),
        [] => {
            if compare.first().is_some_and(|&c| flag(c, a)) {
                Ok(BoundsResult::BelowRange)
            } else if compare.last().is_some_and(|&c| !flag(c, a)) {
                Ok(BoundsResult::AboveRange)
            } else {
                Err(Error::Inconsistent("no span set and no limit condition holds".into()))
            }
        }
        many => Err(Error::Inconsistent(format!("{} span flags set: {many:?}", many.len()))),
    }
}

/// Classical reference: `C_i = A[i] > x` scanned left to right.
pub fn classical_bounds(values: &[u64], x: u64) -> BoundsResult {
    if values.first().is_some_and(|&a| a > x) {
        return BoundsResult::BelowRange;
    }
    match values.windows(2).position(|w| w[0] <= x && x < w[1]) {
        Some(i) => BoundsResult::InSpan(i),
        None => BoundsResult::AboveRange,
    }
}

impl Program for BoundsProgram {
    fn registry(&self) -> &VariableRegistry {
        &self.registry
    }
    fn hamiltonian(&self) -> &Polynomial {
        &self.hamiltonian
    }
    fn qubo(&self) -> &Qubo {
        &self.qubo
    }
    fn logic(&self) -> &[Polynomial] {
        &self.logic
    }
    fn clamp(&self) -> &Assignment {
        &self.clamp
    }
    fn storage(&self) -> Vec<VarId> {
        self.array.bits().concat()
    }
    fn decode_table(&self) -> DecodeTable {
        DecodeTable::Bounds {
            array: self.array.bits(),
            x: self.target.bits().to_vec(),
            compare_flags: self.compare_flags.clone(),
            spans: self.span_flags.clone(),
        }
    }
}

pub(crate) fn decode_table(table: &DecodeTable, a: &Assignment) -> Result<Decoded> {
    let DecodeTable::Bounds { array, x, compare_flags, spans } = table else {
        return Err(Error::invalid("not a bounds decode table"));
    };
    Ok(Decoded::Bounds {
        array: array.iter().map(|b| register_value(b, a)).collect(),
        x: register_value(x, a),
        compare: compare_flags.iter().map(|&c| u8::from(flag(c, a))).collect(),
        spans: spans.iter().map(|&s| u8::from(flag(s, a))).collect(),
        result: decode_bounds(compare_flags, spans, a)?,
    })
}
