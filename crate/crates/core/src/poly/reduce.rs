use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};

use super::{int, Coeff, Monomial, Polynomial, Qubo, Role, Substitution, VarId, VariableRegistry};

/// `x·y − 2x·z − 2y·z + 3z`: zero iff `z = x·y`, at least 1 otherwise.
pub fn pair_penalty(x: VarId, y: VarId, z: VarId) -> Polynomial {
    let mut p = Polynomial::zero();
    p.add_term(Monomial::new(vec![x, y]), int(1));
    p.add_term(Monomial::new(vec![x, z]), int(-2));
    p.add_term(Monomial::new(vec![y, z]), int(-2));
    p.add_term(Monomial::new(vec![z]), int(3));
    p
}

type Pair = (VarId, VarId);

/// Higher-order terms plus incremental pair statistics.
struct HighOrder {
    terms: Vec<Option<(Vec<VarId>, Coeff)>>,
    by_mono: HashMap<Vec<VarId>, usize>,
    pair_terms: HashMap<Pair, BTreeSet<usize>>,
    queue: BTreeSet<(Reverse<usize>, VarId, VarId)>,
}

impl HighOrder {
    fn new() -> Self {
        HighOrder { terms: Vec::new(), by_mono: HashMap::new(), pair_terms: HashMap::new(), queue: BTreeSet::new() }
    }

    fn pairs(vars: &[VarId]) -> impl Iterator<Item = Pair> + '_ {
        vars.iter().enumerate().flat_map(move |(i, &a)| vars[i + 1..].iter().map(move |&b| (a, b)))
    }

    fn bump(&mut self, pair: Pair, idx: usize, add: bool) {
        let set = self.pair_terms.entry(pair).or_default();
        let old = set.len();
        if add {
            set.insert(idx);
        } else {
            set.remove(&idx);
        }
        let new = set.len();
        if old > 0 {
            self.queue.remove(&(Reverse(old), pair.0, pair.1));
        }
        if new > 0 {
            self.queue.insert((Reverse(new), pair.0, pair.1));
        } else {
            self.pair_terms.remove(&pair);
        }
    }

    fn insert(&mut self, vars: Vec<VarId>, c: Coeff) {
        if let Some(&idx) = self.by_mono.get(&vars) {
            let slot = self.terms[idx].as_mut().expect("indexed term is live");
            slot.1 += c;
            if slot.1.is_zero() {
                self.remove(idx);
            }
            return;
        }
        let idx = self.terms.len();
        for pair in Self::pairs(&vars).collect::<Vec<_>>() {
            self.bump(pair, idx, true);
        }
        self.by_mono.insert(vars.clone(), idx);
        self.terms.push(Some((vars, c)));
    }

    fn remove(&mut self, idx: usize) -> (Vec<VarId>, Coeff) {
        let (vars, c) = self.terms[idx].take().expect("term removed twice");
        for pair in Self::pairs(&vars).collect::<Vec<_>>() {
            self.bump(pair, idx, false);
        }
        self.by_mono.remove(&vars);
        (vars, c)
    }

    /// Most frequent pair, lowest pair first among ties.
    fn best_pair(&self) -> Option<Pair> {
        self.queue.iter().next().map(|&(_, a, b)| (a, b))
    }
}

/// Reduces `poly` to quadratic form by repeated pair substitution.
///
/// Each step picks the pair of variables occurring in the most terms of
/// degree > 2 (ties broken by the lowest `(VarId, VarId)`), allocates an
/// ancilla `z`, replaces `x·y` by `z` in every such term, and adds
/// `P·(xy − 2xz − 2yz + 3z)` with `P = 1 + Σ|c|` over all terms containing the
/// pair. Minimum energy and the minimizing assignments (after dropping the
/// ancillas) are preserved exactly.
pub fn reduce_to_quadratic(poly: &Polynomial, registry: &mut VariableRegistry) -> Qubo {
    let mut low = Polynomial::constant(poly.offset().clone());
    let mut high = HighOrder::new();
    for (mono, c) in poly.terms() {
        if mono.degree() > 2 {
            high.insert(mono.vars().to_vec(), c.clone());
        } else {
            low.add_term(mono.clone(), c.clone());
        }
    }

    let mut ledger = Vec::new();
    while let Some((x, y)) = high.best_pair() {
        let members: Vec<usize> = high.pair_terms[&(x, y)].iter().copied().collect();
        let mut weight = Coeff::one() + low.coefficient(&[x, y]).abs();
        for &idx in &members {
            weight += high.terms[idx].as_ref().expect("live term").1.abs();
        }

        let z = registry.fresh_unique(
            &format!("red({},{})", registry.label(x), registry.label(y)),
            Role::Ancilla,
            "reduction",
        );
        for idx in members {
            let (vars, c) = high.remove(idx);
            let mut next: Vec<VarId> = vars.into_iter().filter(|&v| v != x && v != y).collect();
            next.push(z);
            next.sort_unstable();
            if next.len() > 2 {
                high.insert(next, c);
            } else {
                low.add_term(Monomial::new(next), c);
            }
        }
        low += pair_penalty(x, y, z).scale(&weight);
        ledger.push(Substitution { ancilla: z, replaces: (x, y), penalty_weight: weight });
    }

    Qubo { base: low, ledger }
}
