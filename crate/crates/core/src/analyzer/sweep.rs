use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::resource::resource_report;
use crate::bounds::compile_bounds;
use crate::error::{Error, Result};
use crate::parallel::{map_slice, Parallelism};
use crate::poly::{Role, VarId, VariableRegistry};
use crate::program::{ArraySpec, Program, SearchVariant};
use crate::search::{compile_search, h_search_basic, SearchConfig};
use crate::sort::{build_sort, h_assign_raw, h_mapping, SortWeights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builder {
    SearchSum,
    SearchOr,
    Bounds,
    Sort,
}

impl Builder {
    pub fn name(self) -> &'static str {
        match self {
            Builder::SearchSum => "search_sum",
            Builder::SearchOr => "search_or",
            Builder::Bounds => "bounds",
            Builder::Sort => "sort",
        }
    }

    fn variant(self) -> &'static str {
        match self {
            Builder::SearchSum => "summation",
            Builder::SearchOr => "logical_or",
            Builder::Bounds | Builder::Sort => "default",
        }
    }

    fn build(self, n: usize, kv: usize) -> Result<Box<dyn Program + Send>> {
        Ok(match self {
            Builder::SearchSum => Box::new(compile_search(&SearchConfig::new(n, kv, SearchVariant::Summation))?),
            Builder::SearchOr => Box::new(compile_search(&SearchConfig::new(n, kv, SearchVariant::LogicalOr))?),
            Builder::Bounds => Box::new(compile_bounds(n, kv)?),
            Builder::Sort => Box::new(build_sort(n, kv, &SortWeights::default())?),
        })
    }
}

impl FromStr for Builder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "search_sum" => Ok(Builder::SearchSum),
            "search_or" => Ok(Builder::SearchOr),
            "bounds" => Ok(Builder::Bounds),
            "sort" => Ok(Builder::Sort),
            _ => Err(Error::invalid(format!("unknown builder `{s}` (search_sum, search_or, bounds, sort)"))),
        }
    }
}

/// One sweep point. `total_vars` counts machinery only: the data array's
/// own bits are excluded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub builder: String,
    pub variant: String,
    pub n: usize,
    pub kv: usize,
    pub total_vars: usize,
    pub ancilla_vars: usize,
    pub max_degree: usize,
    pub term_count: usize,
    pub build_millis: u64,
    pub error: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub parallelism: Parallelism,
    /// When false `build_millis` is written as 0, making output reproducible
    /// byte for byte.
    pub timing: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { parallelism: Parallelism::Parallel, timing: true }
    }
}

/// Builds every point (no solving). Rows follow the order of `ns`; a point
/// that fails to build records its error and the sweep continues.
pub fn sweep(builder: Builder, ns: &[usize], kv: usize, opts: &SweepOptions) -> Result<Vec<SweepRow>> {
    if ns.is_empty() {
        return Err(Error::invalid("sweep needs at least one N"));
    }
    Ok(map_slice(opts.parallelism, ns, |&n| {
        let start = Instant::now();
        let built = builder.build(n, kv);
        let millis = if opts.timing { start.elapsed().as_millis() as u64 } else { 0 };
        let mut row = SweepRow {
            builder: builder.name().into(),
            variant: builder.variant().into(),
            n,
            kv,
            total_vars: 0,
            ancilla_vars: 0,
            max_degree: 0,
            term_count: 0,
            build_millis: millis,
            error: String::new(),
        };
        match built {
            Ok(p) => {
                let r = resource_report(p.as_ref());
                row.total_vars = r.machinery_vars;
                row.ancilla_vars = r.ancilla_vars;
                row.max_degree = r.max_degree;
                row.term_count = r.term_count;
            }
            Err(e) => row.error = e.to_string(),
        }
        row
    }))
}

/// CSV with the header
/// `builder,variant,n,kv,total_vars,ancilla_vars,max_degree,term_count,build_millis,error`.
pub fn write_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::invalid(format!("csv: {e}"));
    if rows.is_empty() {
        w.write_record(["builder", "variant", "n", "kv", "total_vars", "ancilla_vars", "max_degree", "term_count", "build_millis", "error"])
            .map_err(io)?;
    }
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.flush().map_err(|e| Error::invalid(format!("csv: {e}")))
}

fn flags(reg: &mut VariableRegistry, name: &str, n: usize) -> Vec<VarId> {
    (0..n).map(|i| reg.fresh_var(&format!("{name}[{i}]"), Role::Derived, name).expect("fresh registry")).collect()
}

fn matrix(reg: &mut VariableRegistry, n: usize) -> Vec<Vec<VarId>> {
    (0..n).map(|i| flags(reg, &format!("M[{i}]"), n)).collect()
}

/// Non-constant terms of `(1 − Σ I_i·V_i)²`.
pub fn search_block_term_count(n: usize) -> Result<usize> {
    let mut reg = VariableRegistry::new();
    let i = flags(&mut reg, "I", n);
    let v = flags(&mut reg, "V", n);
    Ok(h_search_basic(&i, &v)?.term_count())
}

/// Non-constant terms of the one-to-one mapping block.
pub fn mapping_term_count(n: usize) -> Result<usize> {
    let mut reg = VariableRegistry::new();
    Ok(h_mapping(&matrix(&mut reg, n))?.term_count())
}

/// Non-constant terms of the conditional copy block before substitution.
pub fn assign_term_count(n: usize, kv: usize) -> Result<usize> {
    let mut reg = VariableRegistry::new();
    let a = ArraySpec::allocate(&mut reg, "A", n, kv)?;
    let b = ArraySpec::allocate(&mut reg, "B", n, kv)?;
    let m = matrix(&mut reg, n);
    Ok(h_assign_raw(&m, &a, &b)?.term_count())
}
