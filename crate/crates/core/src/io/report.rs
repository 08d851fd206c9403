use serde::{Deserialize, Serialize};

use super::ExactValue;
use crate::error::{Error, Result};
use crate::poly::{Assignment, VarId};
use crate::program::{DecodeTable, Decoded};
use crate::solver::{Method, SolveResult};

/// One assignment: its bits over the free variables (in `free_vars` order)
/// and, when decodable, its meaning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateReport {
    pub bits: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoded: Option<Decoded>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decode_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub energy: ExactValue,
    pub multiplicity: usize,
    pub state: StateReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub method: Method,
    pub exhausted: bool,
    pub ground_energy: ExactValue,
    pub ground_count: u64,
    pub free_vars: Vec<VarId>,
    pub ground_states: Vec<StateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<SampleReport>>,
}

fn state(free: &[VarId], a: &Assignment, table: Option<&DecodeTable>) -> StateReport {
    let bits = free.iter().map(|&v| if a.get(v) == Some(true) { '1' } else { '0' }).collect();
    let (decoded, decode_error) = match table.map(|t| t.decode(a)) {
        None => (None, None),
        Some(Ok(d)) => (Some(d), None),
        Some(Err(e)) => (None, Some(e.to_string())),
    };
    StateReport { bits, decoded, decode_error }
}

impl SolveReport {
    pub fn new(r: &SolveResult, table: Option<&DecodeTable>) -> Self {
        SolveReport {
            method: r.method,
            exhausted: r.exhausted,
            ground_energy: ExactValue::from(&r.ground_energy),
            ground_count: r.ground_count,
            free_vars: r.free_vars.clone(),
            ground_states: r.ground_states.iter().map(|a| state(&r.free_vars, a, table)).collect(),
            samples: r.samples.as_ref().map(|ss| {
                ss.iter()
                    .map(|s| SampleReport {
                        energy: ExactValue::from(&s.energy),
                        multiplicity: s.multiplicity,
                        state: state(&r.free_vars, &s.assignment, table),
                    })
                    .collect()
            }),
        }
    }

    /// Fails when a ground state cannot be decoded consistently.
    pub fn check_decoded(&self) -> Result<()> {
        match self.ground_states.iter().find_map(|s| s.decode_error.as_ref()) {
            Some(e) => Err(Error::Inconsistent(e.clone())),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
