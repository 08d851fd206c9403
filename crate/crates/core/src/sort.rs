//! Sorting by constraint: a one-hot mapping matrix `M`, a conditional bitwise
//! copy from the source array `A` into the destination `B`, and ordering
//! constraints `B[i] ≤ B[i+1]`.

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::gadgets::{check_widths, int_leq};
use crate::poly::{
    int, pair_penalty, Assignment, Coeff, Monomial, Polynomial, Qubo, Role, Substitution, VarId, VariableRegistry,
};
use crate::program::{flag, logic_weight, register_value, ArraySpec, DecodeTable, Decoded, Program};

fn check_square(m: &[Vec<VarId>]) -> Result<()> {
    if m.is_empty() {
        return Err(Error::invalid("empty mapping matrix"));
    }
    for row in m {
        if row.len() != m.len() {
            return Err(Error::LengthMismatch { left: row.len(), right: m.len() });
        }
    }
    Ok(())
}

/// `Σ_j (1 − Σ_i M_ij)² + Σ_i (1 − Σ_j M_ij)²`.
pub fn h_mapping(m: &[Vec<VarId>]) -> Result<Polynomial> {
    check_square(m)?;
    let n = m.len();
    let mut h = Polynomial::zero();
    for j in 0..n {
        let col: Polynomial = m.iter().map(|row| Polynomial::var(row[j])).sum();
        h += (&Polynomial::one() - &col).square();
    }
    for row in m {
        let r: Polynomial = row.iter().map(|&v| Polynomial::var(v)).sum();
        h += (&Polynomial::one() - &r).square();
    }
    Ok(h)
}

fn check_shapes(m: &[Vec<VarId>], a: &ArraySpec, b: &ArraySpec) -> Result<()> {
    check_square(m)?;
    if a.len() != m.len() || b.len() != m.len() {
        return Err(Error::LengthMismatch { left: a.len().max(b.len()), right: m.len() });
    }
    check_widths(&a.elements[0], &b.elements[0])
}

/// `Σ_ij M_ij · Σ_l (A[i]_l + B[j]_l − 2·A[i]_l·B[j]_l)`, cubic.
pub fn h_assign_raw(m: &[Vec<VarId>], a: &ArraySpec, b: &ArraySpec) -> Result<Polynomial> {
    check_shapes(m, a, b)?;
    let mut h = Polynomial::zero();
    for (i, row) in m.iter().enumerate() {
        for (j, &mij) in row.iter().enumerate() {
            for (&al, &bl) in a.elements[i].bits().iter().zip(b.elements[j].bits()) {
                h.add_term(Monomial::new(vec![mij, al]), int(1));
                h.add_term(Monomial::new(vec![mij, bl]), int(1));
                h.add_term(Monomial::new(vec![mij, al, bl]), int(-2));
            }
        }
    }
    Ok(h)
}

/// The copy block after substituting `z = A[i]_l·B[j]_l` for every
/// `(i, j, l)`.
#[derive(Debug, Clone)]
pub struct CopyAssign {
    pub hamiltonian: Polynomial,
    /// `ancillas[i][j][l]`.
    pub ancillas: Vec<Vec<Vec<VarId>>>,
    pub substitutions: Vec<Substitution>,
}

/// Quadratic copy block scaled by `weight`, with one ancilla per `(i, j, l)`.
pub fn h_assign(
    m: &[Vec<VarId>],
    a: &ArraySpec,
    b: &ArraySpec,
    weight: &Coeff,
    registry: &mut VariableRegistry,
) -> Result<CopyAssign> {
    check_shapes(m, a, b)?;
    let two = int(2);
    let penalty = Coeff::one() + (weight * &two).abs();
    let mut h = Polynomial::zero();
    let mut ancillas = Vec::with_capacity(m.len());
    let mut substitutions = Vec::new();
    for (i, row) in m.iter().enumerate() {
        let mut grid_row = Vec::with_capacity(row.len());
        for (j, &mij) in row.iter().enumerate() {
            let mut cell = Vec::with_capacity(a.element_width);
            for (l, (&al, &bl)) in a.elements[i].bits().iter().zip(b.elements[j].bits()).enumerate() {
                let z = registry.fresh_var(&format!("copy[{i}][{j}][{l}]"), Role::Ancilla, "copy")?;
                h.add_term(Monomial::new(vec![mij, al]), weight.clone());
                h.add_term(Monomial::new(vec![mij, bl]), weight.clone());
                h.add_term(Monomial::new(vec![mij, z]), -(weight * &two));
                h += pair_penalty(al, bl, z).scale(&penalty);
                substitutions.push(Substitution { ancilla: z, replaces: (al, bl), penalty_weight: penalty.clone() });
                cell.push(z);
            }
            grid_row.push(cell);
        }
        ancillas.push(grid_row);
    }
    Ok(CopyAssign { hamiltonian: h, ancillas, substitutions })
}

/// Ordering constraints over consecutive destination elements.
#[derive(Debug, Clone)]
pub struct Ordering {
    /// Logic-weighted comparators plus the flag penalties.
    pub hamiltonian: Polynomial,
    /// Unscaled comparator blocks.
    pub logic: Vec<Polynomial>,
    pub flags: Vec<VarId>,
}

pub fn h_ordering(b: &ArraySpec, registry: &mut VariableRegistry) -> Result<Ordering> {
    if b.len() < 2 {
        return Err(Error::invalid("ordering needs at least two elements"));
    }
    let lambda = logic_weight();
    let mut hamiltonian = Polynomial::zero();
    let mut logic = Vec::new();
    let mut flags = Vec::new();
    for (i, w) in b.elements.windows(2).enumerate() {
        let leq = int_leq(&w[0], &w[1], registry, &format!("ord[{i}]"))?;
        let flag_term = &leq.energy - &leq.comparator.hamiltonian;
        hamiltonian += leq.comparator.hamiltonian.scale(&lambda);
        hamiltonian += flag_term;
        logic.push(leq.comparator.hamiltonian);
        flags.push(leq.comparator.output);
    }
    Ok(Ordering { hamiltonian, logic, flags })
}

/// Block weights. Every block is non-negative and all three vanish together
/// on valid sorts, so any positive weights give the same ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortWeights {
    pub mapping: Coeff,
    pub assign: Coeff,
}

impl Default for SortWeights {
    fn default() -> Self {
        SortWeights { mapping: int(1), assign: int(1) }
    }
}

#[derive(Debug, Clone)]
pub struct SortProgram {
    pub registry: VariableRegistry,
    pub hamiltonian: Polynomial,
    pub qubo: Qubo,
    pub logic: Vec<Polynomial>,
    pub clamp: Assignment,
    pub source: ArraySpec,
    pub dest: ArraySpec,
    /// `mapping[i][j] = 1` sends `A[i]` to `B[j]`.
    pub mapping: Vec<Vec<VarId>>,
    pub copy_ancillas: Vec<Vec<Vec<VarId>>>,
    pub order_flags: Vec<VarId>,
}

/// Allocation order: `A`, `B`, `M`, copy ancillas, comparators.
pub fn build_sort(n: usize, element_width: usize, weights: &SortWeights) -> Result<SortProgram> {
    if n < 2 {
        return Err(Error::invalid("sorting needs at least two elements"));
    }
    let mut reg = VariableRegistry::new();
    let source = ArraySpec::allocate(&mut reg, "A", n, element_width)?;
    let dest = ArraySpec::allocate(&mut reg, "B", n, element_width)?;
    let mapping = (0..n)
        .map(|i| (0..n).map(|j| reg.fresh_var(&format!("M[{i}][{j}]"), Role::Derived, "mapping")).collect())
        .collect::<Result<Vec<Vec<VarId>>>>()?;
    let copy = h_assign(&mapping, &source, &dest, &weights.assign, &mut reg)?;
    let order = h_ordering(&dest, &mut reg)?;

    let mut hamiltonian = h_mapping(&mapping)?.scale(&weights.mapping);
    hamiltonian += copy.hamiltonian;
    hamiltonian += order.hamiltonian;
    let qubo = Qubo::new(hamiltonian.clone(), copy.substitutions)?;
    Ok(SortProgram {
        registry: reg,
        hamiltonian,
        qubo,
        logic: order.logic,
        clamp: Assignment::new(),
        source,
        dest,
        mapping,
        copy_ancillas: copy.ancillas,
        order_flags: order.flags,
    })
}

impl SortProgram {
    pub fn with_values(mut self, values: &[u64]) -> Result<Self> {
        self.clamp.extend(&self.source.clamp_values(values)?);
        Ok(self)
    }

    pub fn copy_ancilla_count(&self) -> usize {
        self.copy_ancillas.iter().flatten().map(Vec::len).sum()
    }

    pub fn decode(&self, a: &Assignment) -> Result<PermutationDecode> {
        decode_permutation(&self.mapping, &self.source.bits(), &self.dest.bits(), a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationDecode {
    /// `perm[j] = i` means `B[j]` takes `A[i]`.
    pub perm: Vec<usize>,
    pub source: Vec<u64>,
    pub sorted: Vec<u64>,
}

pub fn decode_permutation(
    mapping: &[Vec<VarId>],
    source: &[Vec<VarId>],
    dest: &[Vec<VarId>],
    a: &Assignment,
) -> Result<PermutationDecode> {
    let n = mapping.len();
    let mut perm = vec![usize::MAX; n];
    for (i, row) in mapping.iter().enumerate() {
        let set: Vec<usize> = row.iter().enumerate().filter(|(_, &v)| flag(v, a)).map(|(j, _)| j).collect();
        let [j] = set.as_slice() else {
            return Err(Error::Inconsistent(format!("row {i} of M has {} entries set", set.len())));
        };
        if perm[*j] != usize::MAX {
            return Err(Error::Inconsistent(format!("column {j} of M has more than one entry set")));
        }
        perm[*j] = i;
    }
    Ok(PermutationDecode {
        perm,
        source: source.iter().map(|b| register_value(b, a)).collect(),
        sorted: dest.iter().map(|b| register_value(b, a)).collect(),
    })
}

impl Program for SortProgram {
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
        self.source.bits().concat()
    }
    fn decode_table(&self) -> DecodeTable {
        DecodeTable::Sort {
            source: self.source.bits(),
            dest: self.dest.bits(),
            mapping: self.mapping.clone(),
            copy_ancillas: self.copy_ancillas.iter().flatten().flatten().copied().collect(),
        }
    }
}

pub(crate) fn decode_table(table: &DecodeTable, a: &Assignment) -> Result<Decoded> {
    let DecodeTable::Sort { source, dest, mapping, .. } = table else {
        return Err(Error::invalid("not a sort decode table"));
    };
    let d = decode_permutation(mapping, source, dest, a)?;
    Ok(Decoded::Sort { source: d.source, sorted: d.sorted, perm: d.perm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::brute_ground;
    use std::collections::BTreeSet;

    fn matrix(reg: &mut VariableRegistry, n: usize) -> Vec<Vec<VarId>> {
        (0..n)
            .map(|i| (0..n).map(|j| reg.fresh_var(&format!("m{i}{j}"), Role::Input, "m").unwrap()).collect())
            .collect()
    }

    fn set_matrix(m: &[Vec<VarId>], ones: &[(usize, usize)]) -> Assignment {
        let mut a = Assignment::new();
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                a.set(v, ones.contains(&(i, j)));
            }
        }
        a
    }

    #[test]
    fn mapping_examples() {
        let mut reg = VariableRegistry::new();
        let m = matrix(&mut reg, 2);
        let h = h_mapping(&m).unwrap();
        assert_eq!(h.degree(), 2);
        assert_eq!(h.evaluate(&set_matrix(&m, &[(0, 0), (1, 1)])).unwrap(), int(0));
        assert_eq!(h.evaluate(&set_matrix(&m, &[])).unwrap(), int(4));
        assert_eq!(h.evaluate(&set_matrix(&m, &[(0, 0), (0, 1)])).unwrap(), int(2));
        assert!(h_mapping(&[vec![m[0][0]], vec![m[1][0], m[1][1]]]).is_err());
    }

    #[test]
    fn mapping_zero_exactly_on_permutations() {
        let mut reg = VariableRegistry::new();
        let m = matrix(&mut reg, 3);
        let h = h_mapping(&m).unwrap();
        let (min, ground) = brute_ground(&h, &Assignment::new(), &[]);
        assert_eq!(min, int(0));
        assert_eq!(ground.len(), 6);
    }

    fn arrays(n: usize, k: usize) -> (VariableRegistry, ArraySpec, ArraySpec, Vec<Vec<VarId>>) {
        let mut reg = VariableRegistry::new();
        let a = ArraySpec::allocate(&mut reg, "A", n, k).unwrap();
        let b = ArraySpec::allocate(&mut reg, "B", n, k).unwrap();
        let m = matrix(&mut reg, n);
        (reg, a, b, m)
    }

    #[test]
    fn assign_examples() {
        let (_, a, b, m) = arrays(2, 2);
        let h = h_assign_raw(&m, &a, &b).unwrap();
        let mut asg = set_matrix(&m, &[(0, 1)]);
        asg.extend(&a.clamp_values(&[2, 0]).unwrap());
        asg.extend(&b.clamp_values(&[0, 2]).unwrap());
        assert_eq!(h.evaluate(&asg).unwrap(), int(0));
        asg.extend(&b.clamp_values(&[0, 3]).unwrap());
        assert_eq!(h.evaluate(&asg).unwrap(), int(1));
        let mut asg = set_matrix(&m, &[]);
        asg.extend(&a.clamp_values(&[3, 1]).unwrap());
        asg.extend(&b.clamp_values(&[0, 2]).unwrap());
        assert_eq!(h.evaluate(&asg).unwrap(), int(0));
    }

    #[test]
    fn assign_uses_one_ancilla_per_bit_pair() {
        let (mut reg, a, b, m) = arrays(3, 2);
        let before = reg.len();
        let c = h_assign(&m, &a, &b, &int(1), &mut reg).unwrap();
        assert_eq!(reg.len() - before, 2 * 9);
        assert_eq!(c.substitutions.len(), 18);
        assert_eq!(c.hamiltonian.degree(), 2);
    }

    #[test]
    fn reduced_assign_matches_raw_minimum() {
        let (mut reg, a, b, m) = arrays(2, 1);
        let raw = h_assign_raw(&m, &a, &b).unwrap();
        let c = h_assign(&m, &a, &b, &int(1), &mut reg).unwrap();
        let fixed: Vec<VarId> = a.bits().concat().into_iter().chain(b.bits().concat()).chain(m.concat()).collect();
        for mask in 0..1u64 << fixed.len() {
            let clamp: Assignment = fixed.iter().enumerate().map(|(k, &v)| (v, (mask >> k) & 1 == 1)).collect();
            let (min, _) = brute_ground(&c.hamiltonian, &clamp, &[]);
            assert_eq!(min, raw.evaluate(&clamp).unwrap());
        }
    }

    #[test]
    fn ordering_examples() {
        let mut reg = VariableRegistry::new();
        let b = ArraySpec::allocate(&mut reg, "B", 3, 2).unwrap();
        let o = h_ordering(&b, &mut reg).unwrap();
        let (min, _) = brute_ground(&o.hamiltonian, &b.clamp_values(&[1, 2, 3]).unwrap(), &[]);
        assert_eq!(min, int(0));

        let mut reg = VariableRegistry::new();
        let b = ArraySpec::allocate(&mut reg, "B", 2, 2).unwrap();
        let o = h_ordering(&b, &mut reg).unwrap();
        let (min, _) = brute_ground(&o.hamiltonian, &b.clamp_values(&[2, 1]).unwrap(), &[]);
        assert!(min >= int(1));
        let (min, _) = brute_ground(&o.hamiltonian, &b.clamp_values(&[2, 2]).unwrap(), &[]);
        assert_eq!(min, int(0));

        let mut reg = VariableRegistry::new();
        let b = ArraySpec::allocate(&mut reg, "B", 1, 2).unwrap();
        assert!(h_ordering(&b, &mut reg).is_err());
    }

    fn sort_grounds(values: &[u64], k: usize) -> (SortProgram, Vec<PermutationDecode>) {
        let p = build_sort(values.len(), k, &SortWeights::default()).unwrap().with_values(values).unwrap();
        let (min, ground) = brute_ground(&p.qubo.base, &p.clamp, &[]);
        assert_eq!(min, int(0));
        let decoded = ground.iter().map(|a| p.decode(a).unwrap()).collect();
        (p, decoded)
    }

    #[test]
    fn sort_two_elements() {
        let (p, d) = sort_grounds(&[1, 0], 1);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].sorted, vec![0, 1]);
        assert_eq!(d[0].perm, vec![1, 0]);
        assert_eq!(p.copy_ancilla_count(), 4);

        let (_, d) = sort_grounds(&[0, 0], 1);
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|x| x.sorted == vec![0, 0]));

        let (_, d) = sort_grounds(&[1, 2], 2);
        assert!(d.iter().any(|x| x.perm == vec![0, 1]));
    }

    #[test]
    fn sort_three_elements_degeneracy() {
        let (_, d) = sort_grounds(&[1, 0, 1], 1);
        assert_eq!(d.len(), 2);
        for x in &d {
            assert_eq!(x.sorted, vec![0, 1, 1]);
            let applied: Vec<u64> = x.perm.iter().map(|&i| x.source[i]).collect();
            assert_eq!(applied, x.sorted);
        }
        let perms: BTreeSet<Vec<usize>> = d.into_iter().map(|x| x.perm).collect();
        assert_eq!(perms.len(), 2);
    }

    #[test]
    fn decode_rejects_non_permutations() {
        let (_, a, b, m) = arrays(2, 1);
        let asg = set_matrix(&m, &[(0, 0)]);
        assert!(matches!(decode_permutation(&m, &a.bits(), &b.bits(), &asg), Err(Error::Inconsistent(_))));
        let asg = set_matrix(&m, &[(0, 0), (1, 0)]);
        assert!(matches!(decode_permutation(&m, &a.bits(), &b.bits(), &asg), Err(Error::Inconsistent(_))));
        let asg = set_matrix(&m, &[(0, 0), (1, 1)]);
        assert_eq!(decode_permutation(&m, &a.bits(), &b.bits(), &asg).unwrap().perm, vec![0, 1]);
    }

    #[test]
    fn structure_is_input_order_agnostic() {
        let base = build_sort(3, 2, &SortWeights::default()).unwrap();
        for values in [[0u64, 1, 2], [2, 1, 0], [1, 2, 0]] {
            let p = build_sort(3, 2, &SortWeights::default()).unwrap().with_values(&values).unwrap();
            let clamped = p.qubo.clamp(&p.clamp);
            let reference = base.qubo.clamp(&base.source.clamp_values(&[0, 1, 2]).unwrap());
            assert_eq!(clamped.adjacency(), reference.adjacency());
            assert_eq!(p.registry.len(), base.registry.len());
        }
    }
}
