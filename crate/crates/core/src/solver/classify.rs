use serde::{Deserialize, Serialize};

use super::model::IntModel;
use crate::error::{Error, Result};
use crate::parallel::{map_indexed, Parallelism};
use crate::poly::{Assignment, Coeff};
use crate::program::{flag, logic_consistent, Program};
use crate::search::SearchProgram;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateClass {
    ValidFound,
    ValidNotFound,
    Invalid,
}

/// Minimum energy per class; `None` when the class is empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassMinima {
    pub valid_found: Option<Coeff>,
    pub valid_not_found: Option<Coeff>,
    pub invalid: Option<Coeff>,
    pub states: u64,
}

impl ClassMinima {
    pub fn get(&self, class: StateClass) -> Option<&Coeff> {
        match class {
            StateClass::ValidFound => self.valid_found.as_ref(),
            StateClass::ValidNotFound => self.valid_not_found.as_ref(),
            StateClass::Invalid => self.invalid.as_ref(),
        }
    }

    fn slot(&mut self, class: StateClass) -> &mut Option<Coeff> {
        match class {
            StateClass::ValidFound => &mut self.valid_found,
            StateClass::ValidNotFound => &mut self.valid_not_found,
            StateClass::Invalid => &mut self.invalid,
        }
    }

    fn offer(&mut self, class: StateClass, e: Coeff) {
        let slot = self.slot(class);
        if slot.as_ref().is_none_or(|m| e < *m) {
            *slot = Some(e);
        }
    }

    fn merge(&mut self, other: ClassMinima) {
        for class in [StateClass::ValidFound, StateClass::ValidNotFound, StateClass::Invalid] {
            if let Some(e) = other.get(class) {
                self.offer(class, e.clone());
            }
        }
        self.states += other.states;
    }
}

/// Class of a full assignment of a search program: consistent logic plus
/// either exactly one selected match with `not_found = 0`, or none with
/// `not_found = 1`.
pub fn search_class(p: &SearchProgram, a: &Assignment) -> Result<StateClass> {
    let nf = p.not_found.ok_or_else(|| Error::invalid("classification needs a not_found flag"))?;
    if !logic_consistent(p, a)? {
        return Ok(StateClass::Invalid);
    }
    let selected = p.match_flags.iter().zip(&p.value_flags).filter(|(&i, &v)| flag(i, a) && flag(v, a)).count();
    Ok(match (flag(nf, a), selected) {
        (false, 1) => StateClass::ValidFound,
        (true, 0) => StateClass::ValidNotFound,
        _ => StateClass::Invalid,
    })
}

/// Enumerates every completion of `clamp` over the program's QUBO and its
/// logic variables, recording the minimum QUBO energy per class.
pub fn classify_states<P, F>(p: &P, clamp: &Assignment, free_limit: usize, parallelism: Parallelism, classify: F) -> Result<ClassMinima>
where
    P: Program + Sync,
    F: Fn(&P, &Assignment) -> Result<StateClass> + Sync + Send,
{
    let extra: Vec<_> = p.logic().iter().flat_map(|b| b.support()).collect();
    let model = IntModel::with_extra(&p.qubo().base, clamp, &extra)?;
    let n = model.len();
    if n > free_limit {
        return Err(Error::Capacity { free: n, limit: free_limit });
    }
    let chunk_bits = n.min(8);
    let low = n - chunk_bits;
    let parts = map_indexed(parallelism, 1usize << chunk_bits, |t| -> Result<ClassMinima> {
        let mut acc = ClassMinima::default();
        for m in 0..1u64 << low {
            let state = model.state_from_mask(((t as u64) << low) | m);
            let a = model.assignment(&state);
            acc.offer(classify(p, &a)?, model.exact(model.energy(&state)));
            acc.states += 1;
        }
        Ok(acc)
    });
    let mut out = ClassMinima::default();
    for part in parts {
        out.merge(part?);
    }
    Ok(out)
}
