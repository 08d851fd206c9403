use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::poly::Role;
use crate::program::Program;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub total_vars: usize,
    pub input_vars: usize,
    pub derived_vars: usize,
    pub ancilla_vars: usize,
    /// Bits of the data array itself.
    pub storage_vars: usize,
    /// `total_vars − storage_vars`.
    pub machinery_vars: usize,
    pub term_count: usize,
    pub max_degree: usize,
    /// Degree → number of variables; covers every registered variable.
    pub degree_histogram: BTreeMap<usize, usize>,
}

/// Counts by role and QUBO adjacency degree. The degree of `v` is the number
/// of distinct variables sharing a quadratic term with it.
pub fn resource_report(p: &dyn Program) -> ResourceReport {
    let reg = p.registry();
    let adj = p.qubo().adjacency();
    let storage: BTreeSet<_> = p.storage().into_iter().collect();
    let mut histogram = BTreeMap::new();
    for info in reg.iter() {
        let d = adj.get(&info.id).map_or(0, BTreeSet::len);
        *histogram.entry(d).or_insert(0) += 1;
    }
    ResourceReport {
        total_vars: reg.len(),
        input_vars: reg.count_role(Role::Input),
        derived_vars: reg.count_role(Role::Derived),
        ancilla_vars: reg.count_role(Role::Ancilla),
        storage_vars: storage.len(),
        machinery_vars: reg.len() - storage.len(),
        term_count: p.qubo().base.term_count(),
        max_degree: histogram.keys().next_back().copied().unwrap_or(0),
        degree_histogram: histogram,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramComparison {
    pub threshold: usize,
    /// Degree → (count in a, count in b).
    pub buckets: BTreeMap<usize, (usize, usize)>,
    /// Variables with degree strictly above the threshold, per report.
    pub above_threshold: (usize, usize),
}

pub fn degree_histogram_compare(a: &ResourceReport, b: &ResourceReport, threshold: usize) -> HistogramComparison {
    let mut buckets: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (&d, &c) in &a.degree_histogram {
        buckets.entry(d).or_default().0 = c;
    }
    for (&d, &c) in &b.degree_histogram {
        buckets.entry(d).or_default().1 = c;
    }
    let above = |r: &ResourceReport| r.degree_histogram.range(threshold + 1..).map(|(_, c)| c).sum();
    HistogramComparison { threshold, buckets, above_threshold: (above(a), above(b)) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{GadgetBuilder, Signal};
    use crate::poly::{reduce_to_quadratic, Assignment, Polynomial, Qubo, VariableRegistry};
    use crate::program::{DecodeTable, SearchVariant};
    use crate::search::{compile_search, SearchConfig};
    use crate::sort::{build_sort, SortWeights};

    struct Bare {
        registry: VariableRegistry,
        h: Polynomial,
        qubo: Qubo,
        clamp: Assignment,
    }

    impl Program for Bare {
        fn registry(&self) -> &VariableRegistry {
            &self.registry
        }
        fn hamiltonian(&self) -> &Polynomial {
            &self.h
        }
        fn qubo(&self) -> &Qubo {
            &self.qubo
        }
        fn logic(&self) -> &[Polynomial] {
            &[]
        }
        fn decode_table(&self) -> DecodeTable {
            DecodeTable::Assign { array: vec![], n: vec![], x: vec![], match_flags: vec![] }
        }
        fn clamp(&self) -> &Assignment {
            &self.clamp
        }
    }

    #[test]
    fn empty_and_single_and() {
        let empty = Bare { registry: VariableRegistry::new(), h: Polynomial::zero(), qubo: Qubo::default(), clamp: Assignment::new() };
        assert_eq!(resource_report(&empty), ResourceReport::default());

        let mut reg = VariableRegistry::new();
        let x = reg.fresh_var("x", Role::Input, "t").unwrap();
        let y = reg.fresh_var("y", Role::Input, "t").unwrap();
        let mut g = GadgetBuilder::new(&mut reg, "and", "t");
        let out = g.and2(Signal::var(x), Signal::var(y));
        let res = g.finish(out, None).unwrap();
        let qubo = reduce_to_quadratic(&res.hamiltonian, &mut reg);
        let p = Bare { registry: reg, h: res.hamiltonian, qubo, clamp: Assignment::new() };
        let r = resource_report(&p);
        assert_eq!(r.total_vars, 3);
        assert_eq!(r.max_degree, 2);
        assert_eq!(r.degree_histogram.values().sum::<usize>(), 3);
        assert_eq!(r.input_vars + r.derived_vars + r.ancilla_vars, r.total_vars);
    }

    #[test]
    fn sort_copy_ancillas() {
        let p = build_sort(2, 1, &SortWeights::default()).unwrap();
        assert_eq!(p.copy_ancilla_count(), 4);
        let r = resource_report(&p);
        assert_eq!(r.storage_vars, 2);
        assert_eq!(r.degree_histogram.values().sum::<usize>(), r.total_vars);
    }

    #[test]
    fn degree_symmetry() {
        let p = compile_search(&SearchConfig::new(5, 3, SearchVariant::LogicalOr)).unwrap();
        let adj = p.qubo.adjacency();
        let mut edges = 0;
        for (v, ns) in &adj {
            for n in ns {
                assert!(adj[n].contains(v));
            }
            edges += ns.len();
        }
        let quadratic = p.qubo.base.terms().filter(|(m, _)| m.degree() == 2).count();
        assert_eq!(edges, 2 * quadratic);
    }

    #[test]
    fn histogram_comparison() {
        let a = resource_report(&compile_search(&SearchConfig::new(16, 4, SearchVariant::Summation)).unwrap());
        let b = resource_report(&compile_search(&SearchConfig::new(16, 4, SearchVariant::LogicalOr)).unwrap());
        let same = degree_histogram_compare(&a, &a, 8);
        assert!(same.buckets.values().all(|(x, y)| x == y));
        assert_eq!(same.above_threshold.0, same.above_threshold.1);
        let cmp = degree_histogram_compare(&a, &b, 8);
        assert_eq!(cmp.buckets.values().map(|c| c.0).sum::<usize>(), a.total_vars);
        assert_eq!(cmp.buckets.values().map(|c| c.1).sum::<usize>(), b.total_vars);
    }
}
