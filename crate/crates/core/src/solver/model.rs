use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{Assignment, Coeff, Polynomial, VarId};

/// A clamped quadratic polynomial over its free variables with every
/// coefficient multiplied by a common denominator, so energies are exact
/// `i64` values.
#[derive(Debug, Clone)]
pub struct IntModel {
    /// Free variables, ascending.
    pub vars: Vec<VarId>,
    pub linear: Vec<i64>,
    /// Symmetric: `(j, J_ij)` appears in both rows.
    pub couplings: Vec<Vec<(u32, i64)>>,
    pub offset: i64,
    /// Real energy = integer energy / scale.
    pub scale: BigInt,
    pub clamp: Assignment,
}

/// Magnitude budget so that sums of coefficients cannot overflow.
const MAX_MASS: i64 = i64::MAX / 4;

impl IntModel {
    pub fn new(h: &Polynomial, clamp: &Assignment) -> Result<Self> {
        Self::with_extra(h, clamp, &[])
    }

    /// Also treats `extra` as free variables when they are not clamped.
    pub fn with_extra(h: &Polynomial, clamp: &Assignment, extra: &[VarId]) -> Result<Self> {
        let clamped = h.clamp(clamp);
        if clamped.degree() > 2 {
            return Err(Error::invalid(format!(
                "exact solvers need a quadratic model; got degree {}",
                clamped.degree()
            )));
        }
        // Variables whose terms all vanish under the clamp stay free.
        let mut support = h.support();
        support.extend(extra.iter().copied());
        let vars: Vec<VarId> = support.into_iter().filter(|&v| !clamp.contains(v)).collect();
        let pos = |v: VarId| vars.binary_search(&v).expect("support variable");

        let mut scale = clamped.offset().denom().clone();
        for (_, c) in clamped.terms() {
            scale = scale.lcm(c.denom());
        }
        let mut mass = BigInt::zero();
        let mut to_int = |c: &Coeff| -> Result<i64> {
            let v = c.numer() * (&scale / c.denom());
            mass += v.abs();
            v.to_i64().ok_or_else(|| Error::Numeric(format!("coefficient {c} too large after scaling by {scale}")))
        };

        let offset = to_int(clamped.offset())?;
        let mut linear = vec![0i64; vars.len()];
        let mut couplings: Vec<Vec<(u32, i64)>> = vec![Vec::new(); vars.len()];
        for (mono, c) in clamped.terms() {
            let ci = to_int(c)?;
            match mono.vars() {
                [v] => linear[pos(*v)] = ci,
                [a, b] => {
                    let (i, j) = (pos(*a), pos(*b));
                    couplings[i].push((j as u32, ci));
                    couplings[j].push((i as u32, ci));
                }
                _ => unreachable!("degree checked"),
            }
        }
        if mass > BigInt::from(MAX_MASS) {
            return Err(Error::Numeric(format!("scaled coefficient mass {mass} exceeds the i64 budget")));
        }
        Ok(IntModel { vars, linear, couplings, offset, scale, clamp: clamp.clone() })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn exact(&self, e: i64) -> Coeff {
        Coeff::new(BigInt::from(e), self.scale.clone())
    }

    pub fn to_f64(&self, e: i64) -> f64 {
        e as f64 / self.scale.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn scale_is_one(&self) -> bool {
        self.scale.is_one()
    }

    /// From-scratch energy.
    pub fn energy(&self, state: &[bool]) -> i64 {
        let mut e = self.offset;
        for (i, &x) in state.iter().enumerate() {
            if x {
                e += self.linear[i];
                e += self.couplings[i].iter().filter(|&&(j, _)| (j as usize) > i && state[j as usize]).map(|&(_, c)| c).sum::<i64>();
            }
        }
        e
    }

    pub fn state_from_mask(&self, mask: u64) -> Vec<bool> {
        (0..self.len()).map(|k| (mask >> k) & 1 == 1).collect()
    }

    /// Full assignment: clamp bindings plus the free variables.
    pub fn assignment(&self, state: &[bool]) -> Assignment {
        let mut a = self.clamp.clone();
        for (&v, &x) in self.vars.iter().zip(state) {
            a.set(v, x);
        }
        a
    }
}

/// Single-flip delta evaluation over an [`IntModel`].
#[derive(Debug, Clone)]
pub struct IncrementalEvaluator<'m> {
    model: &'m IntModel,
    state: Vec<bool>,
    /// `field_k = h_k + Σ_j J_kj x_j`.
    field: Vec<i64>,
    energy: i64,
}

impl<'m> IncrementalEvaluator<'m> {
    pub fn new(model: &'m IntModel, state: Vec<bool>) -> Self {
        assert_eq!(state.len(), model.len(), "state length");
        let field = (0..model.len())
            .map(|k| model.linear[k] + model.couplings[k].iter().filter(|&&(j, _)| state[j as usize]).map(|&(_, c)| c).sum::<i64>())
            .collect();
        let energy = model.energy(&state);
        IncrementalEvaluator { model, state, field, energy }
    }

    pub fn energy(&self) -> i64 {
        self.energy
    }

    pub fn state(&self) -> &[bool] {
        &self.state
    }

    /// Energy change if bit `k` were flipped.
    #[inline]
    pub fn delta(&self, k: usize) -> i64 {
        if self.state[k] {
            -self.field[k]
        } else {
            self.field[k]
        }
    }

    /// Flips bit `k` and returns the energy change.
    #[inline]
    pub fn flip(&mut self, k: usize) -> i64 {
        let d = self.delta(k);
        self.state[k] = !self.state[k];
        let sign = if self.state[k] { 1 } else { -1 };
        for &(j, c) in &self.model.couplings[k] {
            self.field[j as usize] += sign * c;
        }
        self.energy += d;
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, ratio, Monomial, Role, VariableRegistry};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn arb_quadratic(nvars: u32) -> impl Strategy<Value = Polynomial> {
        let term = (0..nvars, 0..nvars, -20i64..20, 1i64..4);
        (prop::collection::vec(term, 0..30), -5i64..5).prop_map(|(ts, off)| {
            let mut p = Polynomial::constant(int(off));
            for (a, b, n, d) in ts {
                p.add_term(Monomial::new(vec![VarId(a), VarId(b)]), ratio(n, d));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn delta_matches_full_evaluation(p in arb_quadratic(10), seed in any::<u64>()) {
            let model = IntModel::new(&p, &Assignment::new()).unwrap();
            if model.is_empty() {
                return Ok(());
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let start: Vec<bool> = (0..model.len()).map(|_| rng.gen()).collect();
            let mut ev = IncrementalEvaluator::new(&model, start);
            for _ in 0..10_000 / 64 {
                let k = rng.gen_range(0..model.len());
                ev.flip(k);
                let exact = p.evaluate(&model.assignment(ev.state())).unwrap();
                prop_assert_eq!(model.exact(ev.energy()), exact);
            }
        }
    }

    #[test]
    fn ten_thousand_flips_stay_exact() {
        let mut reg = VariableRegistry::new();
        let v: Vec<VarId> = (0..12).map(|k| reg.fresh_var(&format!("v{k}"), Role::Input, "t").unwrap()).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut p = Polynomial::constant(ratio(1, 3));
        for _ in 0..40 {
            let (a, b) = (rng.gen_range(0..12), rng.gen_range(0..12));
            p.add_term(Monomial::new(vec![v[a], v[b]]), ratio(rng.gen_range(-9..10), rng.gen_range(1..7)));
        }
        let model = IntModel::new(&p, &Assignment::new()).unwrap();
        let mut ev = IncrementalEvaluator::new(&model, vec![false; model.len()]);
        for _ in 0..10_000 {
            ev.flip(rng.gen_range(0..model.len()));
            assert_eq!(model.exact(ev.energy()), p.evaluate(&model.assignment(ev.state())).unwrap());
        }
    }

    #[test]
    fn rejects_cubic_and_huge() {
        let p = Polynomial::monomial(&[VarId(0), VarId(1), VarId(2)], int(1));
        assert!(IntModel::new(&p, &Assignment::new()).is_err());
        let p = Polynomial::monomial(&[VarId(0)], int(i64::MAX));
        assert!(matches!(IntModel::new(&p, &Assignment::new()), Err(Error::Numeric(_))));
    }

    #[test]
    fn clamp_removes_variables() {
        let p = Polynomial::monomial(&[VarId(0), VarId(1), VarId(2)], int(1)) + Polynomial::var(VarId(3));
        let clamp: Assignment = [(VarId(0), false)].into_iter().collect();
        let m = IntModel::new(&p, &clamp).unwrap();
        assert_eq!(m.vars, vec![VarId(1), VarId(2), VarId(3)]);
        assert_eq!(m.couplings.iter().map(Vec::len).sum::<usize>(), 0);
    }
}
