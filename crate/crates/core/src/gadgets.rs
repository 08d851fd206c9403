//! Penalty gadgets: Boolean logic, bitwise equality and unsigned comparators.
//!
//! Every gadget Hamiltonian is non-negative and is exactly zero on the
//! assignments where its output and ancillas hold their intended values.
//! Negation never allocates a variable; a negated input enters the penalty as
//! `1 − x`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{
    int, reduce_to_quadratic, Assignment, Monomial, Polynomial, Role, VarId, VariableRegistry,
};

/// Unsigned fixed-width integer register, least significant bit first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumInt {
    bits: Vec<VarId>,
}

impl QuantumInt {
    pub fn from_bits(bits: Vec<VarId>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::invalid("quantum integer needs at least one bit"));
        }
        let mut sorted = bits.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != bits.len() {
            return Err(Error::invalid("quantum integer bits must be distinct"));
        }
        Ok(QuantumInt { bits })
    }

    /// Allocates `width` fresh bits labelled `name.bit0`, `name.bit1`, ...
    pub fn allocate(registry: &mut VariableRegistry, name: &str, width: usize, role: Role, group: &str) -> Result<Self> {
        let bits = (0..width)
            .map(|j| registry.fresh_var(&format!("{name}.bit{j}"), role, group))
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(bits)
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[VarId] {
        &self.bits
    }

    pub fn bit(&self, j: usize) -> VarId {
        self.bits[j]
    }

    /// Largest representable value plus one.
    pub fn capacity(&self) -> u128 {
        1u128 << self.width()
    }

    pub fn value(&self, a: &Assignment) -> Result<u64> {
        let mut v = 0u64;
        for (j, &b) in self.bits.iter().enumerate() {
            if a.bit(b)? {
                v |= 1 << j;
            }
        }
        Ok(v)
    }

    /// Bindings that set this register to `value`.
    pub fn clamp(&self, value: u64) -> Result<Assignment> {
        if u128::from(value) >= self.capacity() {
            return Err(Error::invalid(format!("value {value} does not fit in {} bits", self.width())));
        }
        Ok(self.bits.iter().enumerate().map(|(j, &b)| (b, (value >> j) & 1 == 1)).collect())
    }

    /// View of `width` bits starting at `offset`.
    pub fn slice(&self, offset: usize, width: usize) -> Result<QuantumInt> {
        if width == 0 || offset + width > self.width() {
            return Err(Error::invalid(format!(
                "field [{offset}, {}) outside {}-bit register",
                offset + width,
                self.width()
            )));
        }
        Ok(QuantumInt { bits: self.bits[offset..offset + width].to_vec() })
    }
}

pub(crate) fn check_widths(x: &QuantumInt, y: &QuantumInt) -> Result<()> {
    if x.width() != y.width() {
        return Err(Error::WidthMismatch { left: x.width(), right: y.width() });
    }
    Ok(())
}

/// Bits needed to represent `n` distinct values; at least 1.
pub fn bits_for(n: usize) -> usize {
    let mut k = 1;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub var: VarId,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: VarId) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: VarId) -> Self {
        Literal { var, negated: true }
    }

    fn poly(self) -> Polynomial {
        Polynomial::literal(self.var, self.negated)
    }
}

/// A Boolean value known at compile time or carried by a literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signal {
    Const(bool),
    Lit(Literal),
}

impl std::ops::Not for Signal {
    type Output = Signal;
    fn not(self) -> Signal {
        match self {
            Signal::Const(b) => Signal::Const(!b),
            Signal::Lit(l) => Signal::Lit(Literal { var: l.var, negated: !l.negated }),
        }
    }
}

impl Signal {
    pub fn var(v: VarId) -> Self {
        Signal::Lit(Literal::pos(v))
    }

    fn poly(self) -> Polynomial {
        match self {
            Signal::Const(true) => Polynomial::one(),
            Signal::Const(false) => Polynomial::zero(),
            Signal::Lit(l) => l.poly(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetResult {
    pub output: VarId,
    pub hamiltonian: Polynomial,
    pub ancillas: Vec<VarId>,
}

/// Accumulates penalty terms and allocated variables for one gadget.
pub struct GadgetBuilder<'r> {
    registry: &'r mut VariableRegistry,
    prefix: String,
    group: String,
    hamiltonian: Polynomial,
    created: Vec<VarId>,
}

impl<'r> GadgetBuilder<'r> {
    pub fn new(registry: &'r mut VariableRegistry, prefix: &str, group: &str) -> Self {
        GadgetBuilder {
            registry,
            prefix: prefix.to_string(),
            group: group.to_string(),
            hamiltonian: Polynomial::zero(),
            created: Vec::new(),
        }
    }

    pub fn registry(&mut self) -> &mut VariableRegistry {
        self.registry
    }

    fn fresh(&mut self, kind: &str) -> VarId {
        let v = self.registry.fresh_unique(&format!("{}.{kind}", self.prefix), Role::Ancilla, &self.group);
        self.created.push(v);
        v
    }

    pub fn add_penalty(&mut self, p: Polynomial) {
        self.hamiltonian += p;
    }

    pub fn and2(&mut self, a: Signal, b: Signal) -> Signal {
        match (a, b) {
            (Signal::Const(false), _) | (_, Signal::Const(false)) => Signal::Const(false),
            (Signal::Const(true), s) | (s, Signal::Const(true)) => s,
            (Signal::Lit(x), Signal::Lit(y)) if x.var == y.var => {
                if x.negated == y.negated {
                    a
                } else {
                    Signal::Const(false)
                }
            }
            (Signal::Lit(x), Signal::Lit(y)) => {
                let z = self.fresh("and");
                let (px, py, pz) = (x.poly(), y.poly(), Polynomial::var(z));
                // xy − 2xz − 2yz + 3z
                let pen = &(&(&px * &py) - &(&px * &pz).scale(&int(2))) - &(&py * &pz).scale(&int(2));
                self.add_penalty(pen + pz.scale(&int(3)));
                Signal::var(z)
            }
        }
    }

    pub fn or2(&mut self, a: Signal, b: Signal) -> Signal {
        match (a, b) {
            (Signal::Const(true), _) | (_, Signal::Const(true)) => Signal::Const(true),
            (Signal::Const(false), s) | (s, Signal::Const(false)) => s,
            (Signal::Lit(x), Signal::Lit(y)) if x.var == y.var => {
                if x.negated == y.negated {
                    a
                } else {
                    Signal::Const(true)
                }
            }
            (Signal::Lit(x), Signal::Lit(y)) => {
                let z = self.fresh("or");
                let (px, py, pz) = (x.poly(), y.poly(), Polynomial::var(z));
                // x + y + z + xy − 2xz − 2yz
                let mut pen = &(&px + &py) + &pz;
                pen += &px * &py;
                pen = &pen - &(&px * &pz).scale(&int(2));
                pen = &pen - &(&py * &pz).scale(&int(2));
                self.add_penalty(pen);
                Signal::var(z)
            }
        }
    }

    /// Majority of three; with three literals this is the full-adder carry
    /// `(a + b + c − 2·carry − parity)²` with the parity bit as ancilla.
    pub fn maj3(&mut self, a: Signal, b: Signal, c: Signal) -> Signal {
        let sigs = [a, b, c];
        if let Some(k) = sigs.iter().position(|s| matches!(s, Signal::Const(_))) {
            let rest: Vec<Signal> = sigs.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &s)| s).collect();
            return match sigs[k] {
                Signal::Const(true) => self.or2(rest[0], rest[1]),
                _ => self.and2(rest[0], rest[1]),
            };
        }
        let carry = self.fresh("maj");
        let parity = self.fresh("par");
        let sum = &(&a.poly() + &b.poly()) + &c.poly();
        let diff = &(&sum - &Polynomial::var(carry).scale(&int(2))) - &Polynomial::var(parity);
        self.add_penalty(diff.square());
        Signal::var(carry)
    }

    fn reduce_balanced(&mut self, inputs: &[Signal], op: fn(&mut Self, Signal, Signal) -> Signal) -> Signal {
        let mut level = inputs.to_vec();
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            for pair in level.chunks(2) {
                next.push(if pair.len() == 2 { op(self, pair[0], pair[1]) } else { pair[0] });
            }
            level = next;
        }
        level[0]
    }

    pub fn and_all(&mut self, inputs: &[Signal]) -> Signal {
        if inputs.is_empty() {
            return Signal::Const(true);
        }
        self.reduce_balanced(inputs, Self::and2)
    }

    pub fn or_all(&mut self, inputs: &[Signal]) -> Signal {
        if inputs.is_empty() {
            return Signal::Const(false);
        }
        self.reduce_balanced(inputs, Self::or2)
    }

    /// `value(a) > value(b)` over equal-length LSB-first signal vectors, as a
    /// ripple of majority gates: `g_j = MAJ(a_j, ¬b_j, g_{j−1})`.
    pub fn greater_than(&mut self, a: &[Signal], b: &[Signal]) -> Signal {
        let mut g = Signal::Const(false);
        for (&aj, &bj) in a.iter().zip(b) {
            g = self.maj3(aj, !bj, g);
        }
        g
    }

    /// `C = [x == y]` from the cubic `1 + 2xy − x − y − C + 2xC + 2yC − 4xyC`,
    /// reduced to quadratic form with one ancilla.
    pub fn bit_equality(&mut self, x: VarId, y: VarId) -> Result<VarId> {
        if x == y {
            return Err(Error::invalid("bit equality of a variable with itself"));
        }
        let c = self.fresh("eq");
        let raw = bit_equality_cubic(x, y, c) + Polynomial::one();
        let before = self.registry.len();
        let reduced = reduce_to_quadratic(&raw, self.registry);
        for k in before..self.registry.len() {
            self.created.push(VarId(k as u32));
        }
        self.add_penalty(reduced.base);
        Ok(c)
    }

    /// Turns a signal into a variable. Literals pass through when positive;
    /// negations and constants get a fresh variable pinned by a penalty.
    pub fn materialize(&mut self, s: Signal) -> VarId {
        match s {
            Signal::Lit(l) if !l.negated => l.var,
            _ => {
                let z = self.fresh("val");
                // (z − s)²
                let diff = &Polynomial::var(z) - &s.poly();
                self.add_penalty(diff.square());
                z
            }
        }
    }

    /// Finishes the gadget. A fresh output variable is renamed to
    /// `output_label` (when given) and marked derived.
    pub fn finish(mut self, output: Signal, output_label: Option<&str>) -> Result<GadgetResult> {
        let out = self.materialize(output);
        if self.created.contains(&out) {
            let label = match output_label {
                Some(l) => l.to_string(),
                None => self.registry.label(out).to_string(),
            };
            self.registry.rename(out, &label, Role::Derived)?;
        }
        let ancillas = self.created.iter().copied().filter(|&v| v != out).collect();
        Ok(GadgetResult { output: out, hamiltonian: self.hamiltonian, ancillas })
    }
}

/// The raw cubic `2xy − x − y − C + 2xC + 2yC − 4xyC`; equals −1 exactly
/// when `C = [x == y]` and 0 otherwise.
pub fn bit_equality_cubic(x: VarId, y: VarId, c: VarId) -> Polynomial {
    let mut p = Polynomial::zero();
    p.add_term(Monomial::new(vec![x, y]), int(2));
    p.add_term(Monomial::new(vec![x]), int(-1));
    p.add_term(Monomial::new(vec![y]), int(-1));
    p.add_term(Monomial::new(vec![c]), int(-1));
    p.add_term(Monomial::new(vec![x, c]), int(2));
    p.add_term(Monomial::new(vec![y, c]), int(2));
    p.add_term(Monomial::new(vec![x, y, c]), int(-4));
    p
}

pub fn bit_equality(x: VarId, y: VarId, registry: &mut VariableRegistry) -> Result<GadgetResult> {
    let mut g = GadgetBuilder::new(registry, "beq", "gadget");
    let c = g.bit_equality(x, y)?;
    g.finish(Signal::var(c), None)
}

pub fn and_tree(inputs: &[VarId], registry: &mut VariableRegistry) -> Result<GadgetResult> {
    if inputs.is_empty() {
        return Err(Error::invalid("AND of no inputs"));
    }
    let mut g = GadgetBuilder::new(registry, "and", "gadget");
    let sigs: Vec<Signal> = inputs.iter().map(|&v| Signal::var(v)).collect();
    let out = g.and_all(&sigs);
    g.finish(out, None)
}

pub fn or_tree(inputs: &[VarId], registry: &mut VariableRegistry) -> Result<GadgetResult> {
    if inputs.is_empty() {
        return Err(Error::invalid("OR of no inputs"));
    }
    let mut g = GadgetBuilder::new(registry, "or", "gadget");
    let sigs: Vec<Signal> = inputs.iter().map(|&v| Signal::var(v)).collect();
    let out = g.or_all(&sigs);
    g.finish(out, None)
}

/// Per-bit equality flags combined by an AND tree.
pub fn int_equality_in(g: &mut GadgetBuilder<'_>, x: &QuantumInt, y: &QuantumInt) -> Result<Signal> {
    check_widths(x, y)?;
    let flags = x
        .bits()
        .iter()
        .zip(y.bits())
        .map(|(&a, &b)| g.bit_equality(a, b).map(Signal::var))
        .collect::<Result<Vec<_>>>()?;
    Ok(g.and_all(&flags))
}

pub fn int_equality(x: &QuantumInt, y: &QuantumInt, registry: &mut VariableRegistry) -> Result<GadgetResult> {
    let mut g = GadgetBuilder::new(registry, "ieq", "gadget");
    let out = int_equality_in(&mut g, x, y)?;
    g.finish(out, None)
}

fn const_bits(c: u64, width: usize) -> Vec<Signal> {
    (0..width).map(|j| Signal::Const((c >> j) & 1 == 1)).collect()
}

fn check_const(x: &QuantumInt, c: u64) -> Result<()> {
    if u128::from(c) >= x.capacity() {
        return Err(Error::invalid(format!("constant {c} does not fit in {} bits", x.width())));
    }
    Ok(())
}

pub(crate) fn lits(x: &QuantumInt) -> Vec<Signal> {
    x.bits().iter().map(|&v| Signal::var(v)).collect()
}

/// AND of the literals `x_j` / `¬x_j` selected by the bits of `c`.
pub fn int_equality_const_in(g: &mut GadgetBuilder<'_>, x: &QuantumInt, c: u64) -> Result<Signal> {
    check_const(x, c)?;
    let literals: Vec<Signal> = x
        .bits()
        .iter()
        .enumerate()
        .map(|(j, &v)| Signal::Lit(Literal { var: v, negated: (c >> j) & 1 == 0 }))
        .collect();
    Ok(g.and_all(&literals))
}

pub fn int_equality_const(x: &QuantumInt, c: u64, registry: &mut VariableRegistry) -> Result<GadgetResult> {
    let mut g = GadgetBuilder::new(registry, "ieqc", "gadget");
    let out = int_equality_const_in(&mut g, x, c)?;
    g.finish(out, None)
}

pub fn int_greater_than_in(g: &mut GadgetBuilder<'_>, x: &QuantumInt, y: &QuantumInt) -> Result<Signal> {
    check_widths(x, y)?;
    Ok(g.greater_than(&lits(x), &lits(y)))
}

pub fn int_greater_than(x: &QuantumInt, y: &QuantumInt, registry: &mut VariableRegistry) -> Result<GadgetResult> {
    let mut g = GadgetBuilder::new(registry, "gt", "gadget");
    let out = int_greater_than_in(&mut g, x, y)?;
    g.finish(out, None)
}

/// `value(x) > c` with the constant folded into the chain.
pub fn int_greater_than_const_in(g: &mut GadgetBuilder<'_>, x: &QuantumInt, c: u64) -> Result<Signal> {
    check_const(x, c)?;
    Ok(g.greater_than(&lits(x), &const_bits(c, x.width())))
}

/// `value(x) < c` with the constant folded into the chain.
pub fn int_less_than_const_in(g: &mut GadgetBuilder<'_>, x: &QuantumInt, c: u64) -> Result<Signal> {
    if u128::from(c) > x.capacity() {
        return Err(Error::invalid(format!("constant {c} out of range for {} bits", x.width())));
    }
    if u128::from(c) == x.capacity() {
        return Ok(Signal::Const(true));
    }
    Ok(g.greater_than(&const_bits(c, x.width()), &lits(x)))
}

/// Comparator plus a penalty on its flag: zero iff `value(x) ≤ value(y)` and
/// every comparator variable is consistent.
pub struct LeqConstraint {
    pub comparator: GadgetResult,
    pub energy: Polynomial,
}

pub const ORDER_FLAG_PENALTY: i64 = 1;

pub fn int_leq(x: &QuantumInt, y: &QuantumInt, registry: &mut VariableRegistry, label: &str) -> Result<LeqConstraint> {
    let mut g = GadgetBuilder::new(registry, label, "order");
    let gt = int_greater_than_in(&mut g, x, y)?;
    let comparator = g.finish(gt, Some(&format!("{label}.gt")))?;
    let energy = &comparator.hamiltonian + &Polynomial::var(comparator.output).scale(&int(ORDER_FLAG_PENALTY));
    Ok(LeqConstraint { comparator, energy })
}

pub fn int_leq_constraint(x: &QuantumInt, y: &QuantumInt, registry: &mut VariableRegistry) -> Result<Polynomial> {
    Ok(int_leq(x, y, registry, "leq")?.energy)
}

/// `Σ_j (x_j − y_j)²`: the Hamming distance between the registers.
pub fn bit_assign_equal(x: &QuantumInt, y: &QuantumInt) -> Result<Polynomial> {
    check_widths(x, y)?;
    let mut p = Polynomial::zero();
    for (&a, &b) in x.bits().iter().zip(y.bits()) {
        p += (&Polynomial::var(a) - &Polynomial::var(b)).square();
    }
    Ok(p)
}

/// True when `p` is zero on `a`.
pub(crate) fn satisfied(p: &Polynomial, a: &Assignment) -> Result<bool> {
    Ok(p.evaluate(a)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{brute_ground, ground_values};
    use std::collections::BTreeSet;

    fn inputs(reg: &mut VariableRegistry, n: usize) -> Vec<VarId> {
        (0..n).map(|k| reg.fresh_var(&format!("in{k}"), Role::Input, "in").unwrap()).collect()
    }

    fn clamp_bits(vars: &[VarId], mask: u64) -> Assignment {
        vars.iter().enumerate().map(|(k, &v)| (v, (mask >> k) & 1 == 1)).collect()
    }

    /// Checks that for every clamp of `ins`, the gadget's ground energy is 0
    /// and the output is the single value `f(mask)`.
    fn check_truth_table(g: &GadgetResult, ins: &[VarId], f: impl Fn(u64) -> bool) {
        for mask in 0..1u64 << ins.len() {
            let clamp = clamp_bits(ins, mask);
            let (min, ground) = brute_ground(&g.hamiltonian, &clamp, &ins.iter().chain([&g.output]).copied().collect::<Vec<_>>());
            assert_eq!(min, int(0), "mask {mask:b}");
            let outs = ground_values(&ground, g.output);
            assert_eq!(outs, BTreeSet::from([f(mask)]), "mask {mask:b}");
        }
    }

    #[test]
    fn raw_cubic_rows() {
        let mut reg = VariableRegistry::new();
        let v = inputs(&mut reg, 3);
        let p = bit_equality_cubic(v[0], v[1], v[2]);
        for m in 0..8u64 {
            let a = clamp_bits(&v, m);
            let (x, y, c) = (m & 1, (m >> 1) & 1, (m >> 2) & 1);
            let e = p.evaluate(&a).unwrap();
            if c == u64::from(x == y) {
                assert_eq!(e, int(-1));
            } else {
                assert_eq!(e, int(0));
            }
        }
        // X=1, Y=1, C=1 by hand: 2 − 1 − 1 − 1 + 2 + 2 − 4 = −1.
        assert_eq!(p.evaluate(&clamp_bits(&v, 0b111)).unwrap(), int(-1));
    }

    #[test]
    fn bit_equality_truth_table() {
        let mut reg = VariableRegistry::new();
        let v = inputs(&mut reg, 2);
        let g = bit_equality(v[0], v[1], &mut reg).unwrap();
        assert_eq!(g.ancillas.len(), 1);
        assert!(g.hamiltonian.degree() <= 2);
        check_truth_table(&g, &v, |m| (m & 1) == (m >> 1));
    }

    #[test]
    fn bit_equality_rejects_same_variable() {
        let mut reg = VariableRegistry::new();
        let v = inputs(&mut reg, 1);
        assert!(bit_equality(v[0], v[0], &mut reg).is_err());
    }

    #[test]
    fn and_tree_cases() {
        let mut reg = VariableRegistry::new();
        let v = inputs(&mut reg, 4);
        let single = and_tree(&v[..1], &mut reg).unwrap();
        assert_eq!(single.output, v[0]);
        assert!(single.ancillas.is_empty());
        assert!(single.hamiltonian.is_zero());

        let two = and_tree(&v[..2], &mut reg).unwrap();
        check_truth_table(&two, &v[..2], |m| m == 0b11);

        let four = and_tree(&v, &mut reg).unwrap();
        assert_eq!(four.ancillas.len(), 2);
        check_truth_table(&four, &v, |m| m == 0b1111);
        assert!(and_tree(&[], &mut reg).is_err());
    }

    #[test]
    fn or_tree_cases() {
        let mut reg = VariableRegistry::new();
        let v = inputs(&mut reg, 8);
        assert_eq!(or_tree(&v[..1], &mut reg).unwrap().output, v[0]);
        let two = or_tree(&v[..2], &mut reg).unwrap();
        check_truth_table(&two, &v[..2], |m| m != 0);
        let eight = or_tree(&v, &mut reg).unwrap();
        check_truth_table(&eight, &v, |m| m != 0);
        assert!(or_tree(&[], &mut reg).is_err());
    }

    #[test]
    fn int_equality_exhaustive() {
        for width in 1..=2usize {
            let mut reg = VariableRegistry::new();
            let x = QuantumInt::allocate(&mut reg, "x", width, Role::Input, "x").unwrap();
            let y = QuantumInt::allocate(&mut reg, "y", width, Role::Input, "y").unwrap();
            let g = int_equality(&x, &y, &mut reg).unwrap();
            if width == 1 {
                assert_eq!(g.ancillas.len(), 1);
            }
            let ins: Vec<VarId> = x.bits().iter().chain(y.bits()).copied().collect();
            check_truth_table(&g, &ins, |m| (m & ((1 << width) - 1)) == (m >> width));
        }
    }

    #[test]
    fn int_equality_equal_constants() {
        let mut reg = VariableRegistry::new();
        let x = QuantumInt::allocate(&mut reg, "x", 3, Role::Input, "x").unwrap();
        let y = QuantumInt::allocate(&mut reg, "y", 3, Role::Input, "y").unwrap();
        let g = int_equality(&x, &y, &mut reg).unwrap();
        let mut clamp = x.clamp(5).unwrap();
        clamp.extend(&y.clamp(5).unwrap());
        let (min, ground) = brute_ground(&g.hamiltonian, &clamp, &[g.output]);
        assert_eq!(min, int(0));
        assert_eq!(ground_values(&ground, g.output), BTreeSet::from([true]));
    }

    #[test]
    fn int_equality_width_mismatch() {
        let mut reg = VariableRegistry::new();
        let x = QuantumInt::allocate(&mut reg, "x", 3, Role::Input, "x").unwrap();
        let y = QuantumInt::allocate(&mut reg, "y", 2, Role::Input, "y").unwrap();
        assert_eq!(int_equality(&x, &y, &mut reg).unwrap_err(), Error::WidthMismatch { left: 3, right: 2 });
    }

    #[test]
    fn int_equality_const_cases() {
        let mut reg = VariableRegistry::new();
        let x = QuantumInt::allocate(&mut reg, "x", 3, Role::Input, "x").unwrap();
        let g = int_equality_const(&x, 5, &mut reg).unwrap();
        check_truth_table(&g, x.bits(), |m| m == 5);

        let y = QuantumInt::allocate(&mut reg, "y", 3, Role::Input, "y").unwrap();
        let full = int_equality(&x, &y, &mut reg).unwrap();
        assert!(g.ancillas.len() < full.ancillas.len());

        let w = QuantumInt::allocate(&mut reg, "w", 2, Role::Input, "w").unwrap();
        let zero = int_equality_const(&w, 0, &mut reg).unwrap();
        check_truth_table(&zero, w.bits(), |m| m == 0);

        assert!(int_equality_const(&w, 4, &mut reg).is_err());
    }

    #[test]
    fn greater_than_exhaustive() {
        for width in 1..=3usize {
            let mut reg = VariableRegistry::new();
            let x = QuantumInt::allocate(&mut reg, "x", width, Role::Input, "x").unwrap();
            let y = QuantumInt::allocate(&mut reg, "y", width, Role::Input, "y").unwrap();
            let g = int_greater_than(&x, &y, &mut reg).unwrap();
            // 2K − 1 variables: one AND at the bottom, carry + parity above.
            assert_eq!(g.ancillas.len() + 1, 2 * width - 1);
            let ins: Vec<VarId> = x.bits().iter().chain(y.bits()).copied().collect();
            check_truth_table(&g, &ins, |m| (m & ((1 << width) - 1)) > (m >> width));
        }
    }

    #[test]
    fn greater_than_small_cases() {
        let mut reg = VariableRegistry::new();
        let x = QuantumInt::allocate(&mut reg, "x", 2, Role::Input, "x").unwrap();
        let y = QuantumInt::allocate(&mut reg, "y", 2, Role::Input, "y").unwrap();
        let g = int_greater_than(&x, &y, &mut reg).unwrap();
        let mut clamp = x.clamp(3).unwrap();
        clamp.extend(&y.clamp(2).unwrap());
        let (_, ground) = brute_ground(&g.hamiltonian, &clamp, &[g.output]);
        assert_eq!(ground_values(&ground, g.output), BTreeSet::from([true]));
    }

    #[test]
    fn constant_comparators() {
        let mut reg = VariableRegistry::new();
        let x = QuantumInt::allocate(&mut reg, "x", 3, Role::Input, "x").unwrap();
        for c in 0..8u64 {
            let mut g = GadgetBuilder::new(&mut reg, "gtc", "t");
            let s = int_greater_than_const_in(&mut g, &x, c).unwrap();
            let gt = g.finish(s, None).unwrap();
            check_truth_table(&gt, x.bits(), |m| m > c);

            let mut g = GadgetBuilder::new(&mut reg, "ltc", "t");
            let s = int_less_than_const_in(&mut g, &x, c).unwrap();
            let lt = g.finish(s, None).unwrap();
            check_truth_table(&lt, x.bits(), |m| m < c);
        }
    }

    #[test]
    fn leq_constraint_exhaustive() {
        let mut reg = VariableRegistry::new();
        let x = QuantumInt::allocate(&mut reg, "x", 2, Role::Input, "x").unwrap();
        let y = QuantumInt::allocate(&mut reg, "y", 2, Role::Input, "y").unwrap();
        let h = int_leq_constraint(&x, &y, &mut reg).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let mut clamp = x.clamp(a).unwrap();
                clamp.extend(&y.clamp(b).unwrap());
                let (min, _) = brute_ground(&h, &clamp, &[]);
                if a <= b {
                    assert_eq!(min, int(0), "{a} <= {b}");
                } else {
                    assert!(min >= int(1), "{a} > {b}");
                }
            }
        }
    }

    #[test]
    fn bit_assign_is_hamming_distance() {
        let mut reg = VariableRegistry::new();
        let x = QuantumInt::allocate(&mut reg, "x", 3, Role::Input, "x").unwrap();
        let y = QuantumInt::allocate(&mut reg, "y", 3, Role::Input, "y").unwrap();
        let h = bit_assign_equal(&x, &y).unwrap();
        let mut a = x.clamp(5).unwrap();
        a.extend(&y.clamp(2).unwrap());
        assert_eq!(h.evaluate(&a).unwrap(), int(3));
        let mut same = x.clamp(6).unwrap();
        same.extend(&y.clamp(6).unwrap());
        assert_eq!(h.evaluate(&same).unwrap(), int(0));

        let x1 = x.slice(0, 1).unwrap();
        let y1 = y.slice(0, 1).unwrap();
        let mut expected = &Polynomial::var(x.bit(0)) + &Polynomial::var(y.bit(0));
        expected.add_term(Monomial::new(vec![x.bit(0), y.bit(0)]), int(-2));
        assert_eq!(bit_assign_equal(&x1, &y1).unwrap(), expected);
    }

    #[test]
    fn gadgets_are_nonnegative() {
        let mut reg = VariableRegistry::new();
        let x = QuantumInt::allocate(&mut reg, "x", 2, Role::Input, "x").unwrap();
        let y = QuantumInt::allocate(&mut reg, "y", 2, Role::Input, "y").unwrap();
        for g in [int_equality(&x, &y, &mut reg).unwrap(), int_greater_than(&x, &y, &mut reg).unwrap()] {
            let support: Vec<VarId> = g.hamiltonian.support().into_iter().collect();
            assert!(support.len() <= 16);
            for m in 0..1u64 << support.len() {
                let a = clamp_bits(&support, m);
                assert!(g.hamiltonian.evaluate(&a).unwrap() >= int(0));
            }
        }
    }

    #[test]
    fn composed_gadgets_keep_truth_tables() {
        let mut reg = VariableRegistry::new();
        let x = QuantumInt::allocate(&mut reg, "x", 2, Role::Input, "x").unwrap();
        let y = QuantumInt::allocate(&mut reg, "y", 2, Role::Input, "y").unwrap();
        let eq = int_equality(&x, &y, &mut reg).unwrap();
        let gt = int_greater_than(&x, &y, &mut reg).unwrap();
        let h = &eq.hamiltonian + &gt.hamiltonian;
        for a in 0..4 {
            for b in 0..4 {
                let mut clamp = x.clamp(a).unwrap();
                clamp.extend(&y.clamp(b).unwrap());
                let (min, ground) = brute_ground(&h, &clamp, &[eq.output, gt.output]);
                assert_eq!(min, int(0));
                assert_eq!(ground_values(&ground, eq.output), BTreeSet::from([a == b]));
                assert_eq!(ground_values(&ground, gt.output), BTreeSet::from([a > b]));
            }
        }
    }

    #[test]
    fn or_tree_internal_degree_at_most_four() {
        for n in [2usize, 3, 7, 16, 33, 100, 128] {
            let mut reg = VariableRegistry::new();
            let v = inputs(&mut reg, n);
            let g = or_tree(&v, &mut reg).unwrap();
            let q = crate::poly::Qubo::from_quadratic(g.hamiltonian.clone()).unwrap();
            let adj = q.adjacency();
            for a in g.ancillas.iter().chain([&g.output]) {
                assert!(adj[a].len() <= 4, "n={n}: degree {}", adj[a].len());
            }
        }
    }
}
