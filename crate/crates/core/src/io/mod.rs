//! File formats: QUBO text, the JSON variable map, exact energies in JSON,
//! and atomic writes.

mod qubo_text;
mod report;

pub use qubo_text::{emit_qubo, format_coeff, parse_coeff, parse_qubo};
pub use report::{SampleReport, SolveReport, StateReport};

use std::io::Write;
use std::path::Path;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Assignment, Coeff, VarId, VarInfo, VariableRegistry};
use crate::program::{DecodeTable, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClampEntry {
    pub id: VarId,
    pub value: u8,
}

/// Sidecar describing every variable of a QUBO, how to decode it, and the
/// bindings fixed at build time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarMap {
    pub variables: Vec<VarInfo>,
    pub decode: DecodeTable,
    #[serde(default)]
    pub clamp: Vec<ClampEntry>,
}

impl VarMap {
    pub fn from_program(p: &dyn Program) -> Self {
        VarMap {
            variables: p.registry().iter().cloned().collect(),
            decode: p.decode_table(),
            clamp: p.clamp().iter().map(|(id, b)| ClampEntry { id, value: u8::from(b) }).collect(),
        }
    }

    pub fn registry(&self) -> Result<VariableRegistry> {
        VariableRegistry::from_entries(self.variables.clone())
    }

    pub fn clamp_assignment(&self) -> Result<Assignment> {
        self.clamp
            .iter()
            .map(|e| match e.value {
                0 | 1 => Ok((e.id, e.value == 1)),
                v => Err(Error::invalid(format!("clamp value {v} for {} is not 0 or 1", e.id))),
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("variable map serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    }
}

/// An exact rational for JSON: `"p/q"` (or an integer string) plus a
/// floating-point convenience copy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactValue {
    pub exact: String,
    pub decimal: f64,
}

impl From<&Coeff> for ExactValue {
    fn from(c: &Coeff) -> Self {
        let exact = if c.is_integer() { c.numer().to_string() } else { format!("{}/{}", c.numer(), c.denom()) };
        ExactValue { exact, decimal: c.to_f64().unwrap_or(f64::NAN) }
    }
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let io_err = |e: std::io::Error| Error::invalid(format!("{}: {e}", path.display()));
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::invalid(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(io_err)
}
