//! Unordered-array search: index and value matchers, the squared-sum search
//! term with and without a failure flag, the logical-OR variant, match
//! counting, multi-field predicates, and assignment through a run-time index.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::{
    bits_for, check_widths, int_equality_const_in, int_equality_in, int_greater_than_const_in,
    int_less_than_const_in, GadgetBuilder, GadgetResult, QuantumInt, Signal,
};
use crate::poly::{
    int, ratio, reduce_to_quadratic, Assignment, Polynomial, Qubo, Role, VarId, VariableRegistry,
};
use crate::program::{
    flag, logic_weight, register_value, ArraySpec, DecodeTable, Decoded, Program, SearchVariant,
};

fn check_lengths(i_flags: &[VarId], v_flags: &[VarId]) -> Result<()> {
    if i_flags.len() != v_flags.len() {
        return Err(Error::LengthMismatch { left: i_flags.len(), right: v_flags.len() });
    }
    if i_flags.is_empty() {
        return Err(Error::invalid("search over an empty array"));
    }
    Ok(())
}

/// `I_i = [n == i]` for every `i < n_elements`.
pub fn build_index_matchers(index: &QuantumInt, n_elements: usize, registry: &mut VariableRegistry) -> Result<Vec<GadgetResult>> {
    if index.capacity() < n_elements as u128 {
        return Err(Error::invalid(format!(
            "{}-bit index cannot address {n_elements} elements",
            index.width()
        )));
    }
    (0..n_elements)
        .map(|i| {
            let label = format!("I[{i}]");
            let mut g = GadgetBuilder::new(registry, &label, "index-match");
            let out = int_equality_const_in(&mut g, index, i as u64)?;
            g.finish(out, Some(&label))
        })
        .collect()
}

/// `V_i = [A[i] == x]`, bitwise.
pub fn build_value_matchers(array: &ArraySpec, x: &QuantumInt, registry: &mut VariableRegistry) -> Result<Vec<GadgetResult>> {
    array
        .elements
        .iter()
        .enumerate()
        .map(|(i, elem)| {
            check_widths(elem, x)?;
            let label = format!("V[{i}]");
            let mut g = GadgetBuilder::new(registry, &label, "value-match");
            let out = int_equality_in(&mut g, elem, x)?;
            g.finish(out, Some(&label))
        })
        .collect()
}

fn product_sum(i_flags: &[VarId], v_flags: &[VarId]) -> Polynomial {
    i_flags
        .iter()
        .zip(v_flags)
        .map(|(&i, &v)| Polynomial::monomial(&[i, v], int(1)))
        .sum()
}

/// `(1 − Σ I_i·V_i)²`, expanded (degree 4).
pub fn h_search_basic(i_flags: &[VarId], v_flags: &[VarId]) -> Result<Polynomial> {
    check_lengths(i_flags, v_flags)?;
    Ok((&Polynomial::one() - &product_sum(i_flags, v_flags)).square())
}

/// `(1 − not_found − Σ I_i·V_i)² + ½·not_found`.
pub fn h_search_with_failure(
    i_flags: &[VarId],
    v_flags: &[VarId],
    registry: &mut VariableRegistry,
) -> Result<(Polynomial, VarId)> {
    check_lengths(i_flags, v_flags)?;
    let not_found = registry.fresh_var("not_found", Role::Derived, "search")?;
    Ok((failure_term(not_found, &product_sum(i_flags, v_flags)), not_found))
}

fn failure_term(not_found: VarId, selected: &Polynomial) -> Polynomial {
    let nf = Polynomial::var(not_found);
    let inner = &(&Polynomial::one() - &nf) - selected;
    inner.square() + nf.scale(&ratio(1, 2))
}

/// The logical-OR search: `found = ⋁ (I_i ∧ V_i)` built from pairwise
/// gadgets, then `(1 − not_found − found)² + ½·not_found`.
#[derive(Debug, Clone)]
pub struct OrSearch {
    /// `(1 − not_found − found)² + ½·not_found` only.
    pub search_term: Polynomial,
    /// Product gates and the OR tree, unscaled.
    pub gadgets: Polynomial,
    pub not_found: VarId,
    pub found: VarId,
    pub products: Vec<VarId>,
    pub or_ancillas: Vec<VarId>,
}

impl OrSearch {
    /// Search term plus logic-weighted gadgets.
    pub fn hamiltonian(&self) -> Polynomial {
        &self.search_term + &self.gadgets.scale(&logic_weight())
    }
}

pub fn h_search_or_variant(i_flags: &[VarId], v_flags: &[VarId], registry: &mut VariableRegistry) -> Result<OrSearch> {
    check_lengths(i_flags, v_flags)?;
    let mut gadgets = Polynomial::zero();
    let mut products = Vec::with_capacity(i_flags.len());
    for (k, (&i, &v)) in i_flags.iter().zip(v_flags).enumerate() {
        let label = format!("P[{k}]");
        let mut g = GadgetBuilder::new(registry, &label, "product");
        let out = g.and2(Signal::var(i), Signal::var(v));
        let res = g.finish(out, Some(&label))?;
        gadgets += res.hamiltonian;
        products.push(res.output);
    }
    let mut g = GadgetBuilder::new(registry, "found", "or-tree");
    let sigs: Vec<Signal> = products.iter().map(|&p| Signal::var(p)).collect();
    let out = g.or_all(&sigs);
    let tree = g.finish(out, Some("found"))?;
    gadgets += tree.hamiltonian;
    let not_found = registry.fresh_var("not_found", Role::Derived, "search")?;
    let search_term = failure_term(not_found, &Polynomial::var(tree.output));
    Ok(OrSearch { search_term, gadgets, not_found, found: tree.output, products, or_ancillas: tree.ancillas })
}

/// `(value(count) − Σ V_i)²`; already quadratic.
pub fn h_count_matches(v_flags: &[VarId], count: &QuantumInt) -> Result<Polynomial> {
    let need = bits_for(v_flags.len() + 1);
    if count.width() < need {
        return Err(Error::invalid(format!(
            "{}-bit count cannot hold {} matches (need {need} bits)",
            count.width(),
            v_flags.len()
        )));
    }
    let mut diff = Polynomial::zero();
    for (j, &b) in count.bits().iter().enumerate() {
        diff += Polynomial::monomial(&[b], int(1i64 << j));
    }
    for &v in v_flags {
        diff = &diff - &Polynomial::var(v);
    }
    Ok(diff.square())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompareOp {
    Eq,
    Gt,
    Lt,
}

/// Per-element condition: comparisons of bit fields against constants,
/// combined by AND.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Compare { offset: usize, width: usize, op: CompareOp, constant: u64 },
    And(Vec<Predicate>),
}

impl Predicate {
    pub fn validate(&self, element_width: usize) -> Result<()> {
        match self {
            Predicate::Compare { offset, width, .. } => {
                if *width == 0 || offset + width > element_width {
                    return Err(Error::invalid(format!(
                        "field [{offset}, {}) outside {element_width}-bit element",
                        offset + width
                    )));
                }
                Ok(())
            }
            Predicate::And(parts) => {
                if parts.is_empty() {
                    return Err(Error::invalid("empty predicate conjunction"));
                }
                parts.iter().try_for_each(|p| p.validate(element_width))
            }
        }
    }

    fn leaves<'p>(&'p self, out: &mut Vec<&'p Predicate>) {
        match self {
            Predicate::Compare { .. } => out.push(self),
            Predicate::And(parts) => parts.iter().for_each(|p| p.leaves(out)),
        }
    }

    /// Classical evaluation against an element value.
    pub fn holds(&self, value: u64) -> bool {
        match self {
            Predicate::Compare { offset, width, op, constant } => {
                let field = (value >> offset) & ((1u64 << width) - 1);
                match op {
                    CompareOp::Eq => field == *constant,
                    CompareOp::Gt => field > *constant,
                    CompareOp::Lt => field < *constant,
                }
            }
            Predicate::And(parts) => parts.iter().all(|p| p.holds(value)),
        }
    }
}

/// Parses `offset:width OP constant` clauses joined by `&`, with OP one of
/// `==`, `>`, `<`. Example: `0:4>1 & 4:4==0`.
impl FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for clause in s.split('&') {
            let clause = clause.trim();
            let (field, op, constant) = if let Some((l, r)) = clause.split_once("==") {
                (l, CompareOp::Eq, r)
            } else if let Some((l, r)) = clause.split_once('>') {
                (l, CompareOp::Gt, r)
            } else if let Some((l, r)) = clause.split_once('<') {
                (l, CompareOp::Lt, r)
            } else {
                return Err(Error::invalid(format!("no comparison in predicate clause `{clause}`")));
            };
            let (offset, width) = field
                .trim()
                .split_once(':')
                .ok_or_else(|| Error::invalid(format!("field `{field}` is not offset:width")))?;
            let num = |t: &str| t.trim().parse::<u64>().map_err(|e| Error::invalid(format!("`{t}`: {e}")));
            parts.push(Predicate::Compare {
                offset: num(offset)? as usize,
                width: num(width)? as usize,
                op,
                constant: num(constant)?,
            });
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Predicate::And(parts) })
    }
}

/// Value flags from a predicate instead of equality with a target.
pub fn build_predicate_matchers(array: &ArraySpec, p: &Predicate, registry: &mut VariableRegistry) -> Result<Vec<GadgetResult>> {
    p.validate(array.element_width)?;
    let mut leaves = Vec::new();
    p.leaves(&mut leaves);
    array
        .elements
        .iter()
        .enumerate()
        .map(|(i, elem)| {
            let label = format!("V[{i}]");
            let mut g = GadgetBuilder::new(registry, &label, "predicate");
            let mut flags = Vec::with_capacity(leaves.len());
            for leaf in &leaves {
                let Predicate::Compare { offset, width, op, constant } = leaf else { unreachable!() };
                let field = elem.slice(*offset, *width)?;
                flags.push(match op {
                    CompareOp::Eq => {
                        if u128::from(*constant) >= field.capacity() {
                            Signal::Const(false)
                        } else {
                            int_equality_const_in(&mut g, &field, *constant)?
                        }
                    }
                    CompareOp::Gt => {
                        if u128::from(*constant) >= field.capacity() {
                            Signal::Const(false)
                        } else {
                            int_greater_than_const_in(&mut g, &field, *constant)?
                        }
                    }
                    CompareOp::Lt => {
                        if u128::from(*constant) >= field.capacity() {
                            Signal::Const(true)
                        } else {
                            int_less_than_const_in(&mut g, &field, *constant)?
                        }
                    }
                });
            }
            let out = g.and_all(&flags);
            g.finish(out, Some(&label))
        })
        .collect()
}

/// `A[n] == x` through a run-time index `n`.
#[derive(Debug, Clone)]
pub struct ArrayAssign {
    /// `Σ_i I_i·Hamming(A[i], x) + (1 − Σ I_i)²` plus weighted matchers;
    /// cubic before reduction.
    pub hamiltonian: Polynomial,
    pub match_flags: Vec<VarId>,
    pub logic: Vec<Polynomial>,
}

pub fn h_array_assign(array: &ArraySpec, index: &QuantumInt, x: &QuantumInt, registry: &mut VariableRegistry) -> Result<ArrayAssign> {
    for elem in &array.elements {
        check_widths(elem, x)?;
    }
    let matchers = build_index_matchers(index, array.len(), registry)?;
    let mut h = Polynomial::zero();
    let mut one_hot = Polynomial::one();
    for (m, elem) in matchers.iter().zip(&array.elements) {
        let i = Polynomial::var(m.output);
        h += &i * &crate::gadgets::bit_assign_equal(elem, x)?;
        one_hot = &one_hot - &i;
    }
    h += one_hot.square();
    let mut logic = Vec::new();
    for m in &matchers {
        h += m.hamiltonian.scale(&logic_weight());
        logic.push(m.hamiltonian.clone());
    }
    Ok(ArrayAssign { hamiltonian: h, match_flags: matchers.iter().map(|m| m.output).collect(), logic })
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub n_elements: usize,
    pub element_width: usize,
    pub variant: SearchVariant,
    /// Replaces equality with the target when set.
    pub predicate: Option<Predicate>,
    /// Defaults to the minimum width that addresses every element.
    pub index_width: Option<usize>,
}

impl SearchConfig {
    pub fn new(n_elements: usize, element_width: usize, variant: SearchVariant) -> Self {
        SearchConfig { n_elements, element_width, variant, predicate: None, index_width: None }
    }
}

#[derive(Debug, Clone)]
pub struct SearchProgram {
    pub registry: VariableRegistry,
    pub hamiltonian: Polynomial,
    pub qubo: Qubo,
    pub logic: Vec<Polynomial>,
    pub clamp: Assignment,
    pub variant: SearchVariant,
    pub array: ArraySpec,
    pub index: Option<QuantumInt>,
    pub target: Option<QuantumInt>,
    pub match_flags: Vec<VarId>,
    pub value_flags: Vec<VarId>,
    pub not_found: Option<VarId>,
    pub found: Option<VarId>,
    pub products: Vec<VarId>,
    pub or_ancillas: Vec<VarId>,
    pub count: Option<QuantumInt>,
}

/// Builds a complete search program over a fresh registry.
///
/// Allocation order: array, target, index (or count), matcher flags, search
/// variables, reduction ancillas.
pub fn compile_search(config: &SearchConfig) -> Result<SearchProgram> {
    let n = config.n_elements;
    let mut reg = VariableRegistry::new();
    let array = ArraySpec::allocate(&mut reg, "A", n, config.element_width)?;
    let target = match config.predicate {
        None => Some(QuantumInt::allocate(&mut reg, "x", config.element_width, Role::Input, "x")?),
        Some(_) => None,
    };
    let lambda = logic_weight();
    let mut hamiltonian = Polynomial::zero();
    let mut logic = Vec::new();

    let (index, count) = match config.variant {
        SearchVariant::Count => {
            let width = bits_for(n + 1);
            (None, Some(QuantumInt::allocate(&mut reg, "count", width, Role::Input, "count")?))
        }
        _ => {
            let width = config.index_width.unwrap_or_else(|| bits_for(n));
            if width < bits_for(n) {
                return Err(Error::invalid(format!("{width}-bit index cannot address {n} elements")));
            }
            (Some(QuantumInt::allocate(&mut reg, "n", width, Role::Input, "n")?), None)
        }
    };

    let mut match_flags = Vec::new();
    if let Some(index) = &index {
        for m in build_index_matchers(index, n, &mut reg)? {
            hamiltonian += m.hamiltonian.scale(&lambda);
            logic.push(m.hamiltonian);
            match_flags.push(m.output);
        }
    }
    let value_matchers = match (&config.predicate, &target) {
        (Some(p), _) => build_predicate_matchers(&array, p, &mut reg)?,
        (None, Some(x)) => build_value_matchers(&array, x, &mut reg)?,
        (None, None) => unreachable!(),
    };
    let mut value_flags = Vec::new();
    for m in value_matchers {
        hamiltonian += m.hamiltonian.scale(&lambda);
        logic.push(m.hamiltonian);
        value_flags.push(m.output);
    }

    let (mut not_found, mut found, mut products, mut or_ancillas) = (None, None, Vec::new(), Vec::new());
    match config.variant {
        SearchVariant::Summation => {
            let (term, nf) = h_search_with_failure(&match_flags, &value_flags, &mut reg)?;
            hamiltonian += term;
            not_found = Some(nf);
        }
        SearchVariant::LogicalOr => {
            let or = h_search_or_variant(&match_flags, &value_flags, &mut reg)?;
            hamiltonian += or.hamiltonian();
            logic.push(or.gadgets.clone());
            not_found = Some(or.not_found);
            found = Some(or.found);
            products = or.products;
            or_ancillas = or.or_ancillas;
        }
        SearchVariant::Count => {
            hamiltonian += h_count_matches(&value_flags, count.as_ref().expect("count register"))?;
        }
    }

    let qubo = reduce_to_quadratic(&hamiltonian, &mut reg);
    Ok(SearchProgram {
        registry: reg,
        hamiltonian,
        qubo,
        logic,
        clamp: Assignment::new(),
        variant: config.variant,
        array,
        index,
        target,
        match_flags,
        value_flags,
        not_found,
        found,
        products,
        or_ancillas,
        count,
    })
}

impl SearchProgram {
    /// Loads constant array contents and, optionally, a constant target.
    pub fn with_values(mut self, values: Option<&[u64]>, target: Option<u64>) -> Result<Self> {
        if let Some(values) = values {
            self.clamp.extend(&self.array.clamp_values(values)?);
        }
        if let Some(t) = target {
            let x = self.target.as_ref().ok_or_else(|| Error::invalid("predicate search has no target register"))?;
            self.clamp.extend(&x.clamp(t)?);
        }
        Ok(self)
    }

    pub fn decode(&self, a: &Assignment) -> Result<Decoded> {
        decode_table(&self.decode_table(), a)
    }
}

impl Program for SearchProgram {
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
        DecodeTable::Search {
            variant: self.variant,
            array: self.array.bits(),
            n: self.index.as_ref().map(|q| q.bits().to_vec()),
            x: self.target.as_ref().map(|q| q.bits().to_vec()),
            match_flags: self.match_flags.clone(),
            value_flags: self.value_flags.clone(),
            not_found: self.not_found,
            found: self.found,
            count: self.count.as_ref().map(|q| q.bits().to_vec()),
        }
    }
}

pub(crate) fn decode_table(table: &DecodeTable, a: &Assignment) -> Result<Decoded> {
    let DecodeTable::Search { array, n, x, match_flags, value_flags, not_found, found, count, .. } = table else {
        return Err(Error::invalid("not a search decode table"));
    };
    let matches: Vec<usize> = value_flags.iter().enumerate().filter(|(_, &v)| flag(v, a)).map(|(i, _)| i).collect();
    let selected = match_flags
        .iter()
        .zip(value_flags)
        .enumerate()
        .filter(|(_, (&i, &v))| flag(i, a) && flag(v, a))
        .map(|(k, _)| k)
        .collect();
    Ok(Decoded::Search {
        array: array.iter().map(|b| register_value(b, a)).collect(),
        x: x.as_ref().map(|b| register_value(b, a)),
        n: n.as_ref().map(|b| register_value(b, a)),
        selected,
        matches,
        not_found: not_found.map(|v| u8::from(flag(v, a))),
        found: found.map(|v| u8::from(flag(v, a))),
        count: count.as_ref().map(|b| register_value(b, a)),
    })
}

/// `A[n] = x` as a standalone program: ground states carry the array with
/// element `n` equal to `x` and every other element free.
#[derive(Debug, Clone)]
pub struct AssignProgram {
    pub registry: VariableRegistry,
    pub hamiltonian: Polynomial,
    pub qubo: Qubo,
    pub logic: Vec<Polynomial>,
    pub clamp: Assignment,
    pub array: ArraySpec,
    pub index: QuantumInt,
    pub value: QuantumInt,
    pub match_flags: Vec<VarId>,
}

/// Allocation order: array, index, value, matchers, reduction ancillas.
pub fn compile_assign(n_elements: usize, element_width: usize) -> Result<AssignProgram> {
    let mut reg = VariableRegistry::new();
    let array = ArraySpec::allocate(&mut reg, "A", n_elements, element_width)?;
    let index = QuantumInt::allocate(&mut reg, "n", bits_for(n_elements), Role::Input, "n")?;
    let value = QuantumInt::allocate(&mut reg, "x", element_width, Role::Input, "x")?;
    let assign = h_array_assign(&array, &index, &value, &mut reg)?;
    let qubo = reduce_to_quadratic(&assign.hamiltonian, &mut reg);
    Ok(AssignProgram {
        registry: reg,
        hamiltonian: assign.hamiltonian,
        qubo,
        logic: assign.logic,
        clamp: Assignment::new(),
        array,
        index,
        value,
        match_flags: assign.match_flags,
    })
}

impl AssignProgram {
    /// Binds any of the initial array, the index and the value.
    pub fn with_values(mut self, values: Option<&[u64]>, index: Option<u64>, value: Option<u64>) -> Result<Self> {
        if let Some(values) = values {
            self.clamp.extend(&self.array.clamp_values(values)?);
        }
        if let Some(i) = index {
            if i as usize >= self.array.len() {
                return Err(Error::invalid(format!("index {i} outside an array of {}", self.array.len())));
            }
            self.clamp.extend(&self.index.clamp(i)?);
        }
        if let Some(v) = value {
            self.clamp.extend(&self.value.clamp(v)?);
        }
        Ok(self)
    }
}

impl Program for AssignProgram {
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
        DecodeTable::Assign {
            array: self.array.bits(),
            n: self.index.bits().to_vec(),
            x: self.value.bits().to_vec(),
            match_flags: self.match_flags.clone(),
        }
    }
}
