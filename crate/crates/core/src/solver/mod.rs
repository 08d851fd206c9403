//! Exact ground-state enumeration and a seeded simulated-annealing sampler.

mod anneal;
mod classify;
mod exhaustive;
mod model;

pub use anneal::{simulated_anneal, AnnealSchedule};
pub use classify::{classify_states, search_class, ClassMinima, StateClass};
pub use exhaustive::{enumerate_ground_states, enumerate_model, EnumerateOptions, DEFAULT_FREE_LIMIT, DEFAULT_GROUND_CAP};
pub use model::{IncrementalEvaluator, IntModel};

use serde::{Deserialize, Serialize};

use crate::poly::{Assignment, Coeff, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    Annealed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub assignment: Assignment,
    pub energy: Coeff,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub ground_energy: Coeff,
    /// Full assignments (clamp included), lexicographic by variable bits.
    pub ground_states: Vec<Assignment>,
    /// Minimizers found: all of them when exhaustive, reads that hit the
    /// minimum when annealed.
    pub ground_count: u64,
    /// Annealing histogram ordered by energy, then state.
    pub samples: Option<Vec<Sample>>,
    pub method: Method,
    pub exhausted: bool,
    pub free_vars: Vec<VarId>,
}
