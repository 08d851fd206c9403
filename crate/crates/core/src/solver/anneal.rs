use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::model::{IncrementalEvaluator, IntModel};
use super::{Method, Sample, SolveResult};
use crate::error::{Error, Result};
use crate::parallel::{map_indexed, Parallelism};
use crate::poly::{Assignment, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub sweeps: usize,
    pub reads: usize,
    pub beta_start: f64,
    pub beta_end: f64,
    pub seed: u64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule { sweeps: 1000, reads: 100, beta_start: 0.1, beta_end: 10.0, seed: 0 }
    }
}

impl AnnealSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.reads == 0 || self.sweeps == 0 {
            return Err(Error::invalid("annealing needs at least one read and one sweep"));
        }
        if !(self.beta_start > 0.0 && self.beta_start < self.beta_end && self.beta_end.is_finite()) {
            return Err(Error::invalid(format!(
                "need 0 < beta_start < beta_end, got {} and {}",
                self.beta_start, self.beta_end
            )));
        }
        Ok(())
    }

    /// Geometric interpolation from `beta_start` to `beta_end`.
    pub fn beta(&self, sweep: usize) -> f64 {
        if self.sweeps == 1 {
            return self.beta_end;
        }
        let t = sweep as f64 / (self.sweeps - 1) as f64;
        self.beta_start * (self.beta_end / self.beta_start).powf(t)
    }

    fn read_seed(&self, read: usize) -> u64 {
        // splitmix64 step keeps neighbouring reads decorrelated
        let mut z = self.seed.wrapping_add((read as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// One Metropolis chain; returns the lowest-energy state it visited.
fn run_read(model: &IntModel, schedule: &AnnealSchedule, read: usize) -> (i64, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(schedule.read_seed(read));
    let start: Vec<bool> = (0..model.len()).map(|_| rng.gen()).collect();
    let mut ev = IncrementalEvaluator::new(model, start);
    let mut best = (ev.energy(), ev.state().to_vec());
    let unit = model.to_f64(1);
    for sweep in 0..schedule.sweeps {
        let beta = schedule.beta(sweep) * unit;
        for k in 0..model.len() {
            let d = ev.delta(k);
            if d <= 0 || rng.gen::<f64>() < (-beta * d as f64).exp() {
                ev.flip(k);
                if ev.energy() < best.0 {
                    best = (ev.energy(), ev.state().to_vec());
                }
            }
        }
    }
    best
}

/// Independent single-spin-flip Metropolis reads over a quadratic `h` with
/// `clamp` applied. Reads are seeded from `schedule.seed` and their index,
/// so the result does not depend on the parallelism mode.
pub fn simulated_anneal(
    h: &Polynomial,
    clamp: &Assignment,
    schedule: &AnnealSchedule,
    parallelism: Parallelism,
) -> Result<SolveResult> {
    schedule.validate()?;
    let model = IntModel::new(h, clamp)?;
    let reads = map_indexed(parallelism, schedule.reads, |r| run_read(&model, schedule, r));

    let mut hist: BTreeMap<(i64, Vec<bool>), usize> = BTreeMap::new();
    for read in reads {
        *hist.entry(read).or_default() += 1;
    }
    let mut samples = Vec::with_capacity(hist.len());
    for ((e, state), multiplicity) in hist {
        let assignment = model.assignment(&state);
        let energy = h.evaluate(&assignment)?;
        if energy != model.exact(e) {
            return Err(Error::Numeric(format!("annealed energy {} disagrees with exact {energy}", model.exact(e))));
        }
        samples.push(Sample { assignment, energy, multiplicity });
    }
    let ground_energy = samples[0].energy.clone();
    let ground: Vec<&Sample> = samples.iter().take_while(|s| s.energy == ground_energy).collect();
    Ok(SolveResult {
        ground_energy: ground_energy.clone(),
        ground_states: ground.iter().map(|s| s.assignment.clone()).collect(),
        ground_count: ground.iter().map(|s| s.multiplicity as u64).sum(),
        samples: Some(samples),
        method: Method::Annealed,
        exhausted: false,
        free_vars: model.vars.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, Monomial, VarId};
    use crate::solver::{enumerate_ground_states, EnumerateOptions};

    fn frustrated(n: u32) -> Polynomial {
        let mut p = Polynomial::zero();
        for k in 0..n {
            p.add_term(Monomial::new(vec![VarId(k), VarId((k + 1) % n)]), int(2));
            p.add_term(Monomial::new(vec![VarId(k)]), int(-1));
            p.add_term(Monomial::new(vec![VarId(k), VarId((k + 3) % n)]), int(if k % 2 == 0 { 1 } else { -1 }));
        }
        p
    }

    #[test]
    fn deterministic_and_mode_independent() {
        let p = frustrated(14);
        let s = AnnealSchedule { sweeps: 200, reads: 16, seed: 42, ..Default::default() };
        let a = simulated_anneal(&p, &Assignment::new(), &s, Parallelism::Parallel).unwrap();
        let b = simulated_anneal(&p, &Assignment::new(), &s, Parallelism::Sequential).unwrap();
        let c = simulated_anneal(&p, &Assignment::new(), &s, Parallelism::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.samples.as_ref().unwrap().iter().map(|s| s.multiplicity).sum::<usize>(), 16);
    }

    #[test]
    fn never_below_exhaustive() {
        for n in [6, 9, 13] {
            let p = frustrated(n);
            let exact = enumerate_ground_states(&p, &Assignment::new(), &EnumerateOptions::default()).unwrap();
            let s = AnnealSchedule { sweeps: 300, reads: 20, seed: n as u64, ..Default::default() };
            let sa = simulated_anneal(&p, &Assignment::new(), &s, Parallelism::Parallel).unwrap();
            assert!(sa.ground_energy >= exact.ground_energy);
            assert_eq!(sa.ground_energy, exact.ground_energy, "n={n}");
        }
    }

    #[test]
    fn zero_qubo_reads_zero() {
        let p = Polynomial::zero() + Polynomial::monomial(&[VarId(0)], int(0));
        let s = AnnealSchedule { sweeps: 10, reads: 5, ..Default::default() };
        let r = simulated_anneal(&p, &Assignment::new(), &s, Parallelism::Parallel).unwrap();
        assert!(r.samples.unwrap().iter().all(|x| x.energy == int(0)));
        assert!(!r.exhausted);
    }

    #[test]
    fn schedule_validation() {
        let bad = AnnealSchedule { beta_start: 2.0, beta_end: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = AnnealSchedule { reads: 0, ..Default::default() };
        assert!(bad.validate().is_err());
        let s = AnnealSchedule { sweeps: 3, beta_start: 1.0, beta_end: 4.0, ..Default::default() };
        assert!((s.beta(1) - 2.0).abs() < 1e-12);
    }
}
