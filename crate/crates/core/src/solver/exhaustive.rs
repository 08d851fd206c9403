use std::collections::BTreeSet;

use super::model::{IncrementalEvaluator, IntModel};
use super::{Method, SolveResult};
use crate::error::{Error, Result};
use crate::parallel::{map_indexed, Parallelism};
use crate::poly::{Assignment, Polynomial};

pub const DEFAULT_FREE_LIMIT: usize = 24;
pub const DEFAULT_GROUND_CAP: usize = 4096;

/// Top bits fixed per chunk; the chunk count does not depend on the
/// parallelism mode, so results are identical either way.
const CHUNK_BITS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub free_limit: usize,
    /// Ground states kept, lowest in lexicographic order first.
    pub cap: usize,
    pub parallelism: Parallelism,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { free_limit: DEFAULT_FREE_LIMIT, cap: DEFAULT_GROUND_CAP, parallelism: Parallelism::Parallel }
    }
}

/// Ordering key: the lowest variable is the most significant bit.
fn lex_key(mask: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        mask.reverse_bits() >> (64 - n)
    }
}

struct ChunkBest {
    energy: i64,
    count: u64,
    keys: BTreeSet<u64>,
}

impl ChunkBest {
    fn offer(&mut self, e: i64, key: u64, cap: usize) {
        if e < self.energy {
            self.energy = e;
            self.count = 0;
            self.keys.clear();
        }
        if e == self.energy {
            self.count += 1;
            if self.keys.len() < cap {
                self.keys.insert(key);
            } else if let Some(&last) = self.keys.last() {
                if key < last {
                    self.keys.pop_last();
                    self.keys.insert(key);
                }
            }
        }
    }
}

/// Exact minimum of a quadratic `h` over every completion of `clamp`.
///
/// Walks each chunk in Gray-code order so consecutive states differ in one
/// bit and cost one delta update.
pub fn enumerate_ground_states(h: &Polynomial, clamp: &Assignment, opts: &EnumerateOptions) -> Result<SolveResult> {
    let model = IntModel::new(h, clamp)?;
    enumerate_model(&model, opts)
}

pub fn enumerate_model(model: &IntModel, opts: &EnumerateOptions) -> Result<SolveResult> {
    let n = model.len();
    if n > opts.free_limit || n > 63 {
        return Err(Error::Capacity { free: n, limit: opts.free_limit.min(63) });
    }
    let cap = opts.cap.max(1);
    let chunk_bits = n.min(CHUNK_BITS);
    let low_bits = n - chunk_bits;
    let chunks = map_indexed(opts.parallelism, 1usize << chunk_bits, |t| {
        let high = (t as u64) << low_bits;
        let mut ev = IncrementalEvaluator::new(model, model.state_from_mask(high));
        let mut best = ChunkBest { energy: i64::MAX, count: 0, keys: BTreeSet::new() };
        let mut mask = high;
        best.offer(ev.energy(), lex_key(mask, n), cap);
        for g in 1u64..1u64 << low_bits {
            let k = g.trailing_zeros() as usize;
            ev.flip(k);
            mask ^= 1 << k;
            best.offer(ev.energy(), lex_key(mask, n), cap);
        }
        best
    });

    let energy = chunks.iter().map(|c| c.energy).min().expect("at least one chunk");
    let mut count = 0u64;
    let mut keys = BTreeSet::new();
    for c in chunks.into_iter().filter(|c| c.energy == energy) {
        count += c.count;
        keys.extend(c.keys);
    }
    let ground_states = keys
        .into_iter()
        .take(cap)
        .map(|key| model.assignment(&model.state_from_mask(lex_key(key, n))))
        .collect();
    Ok(SolveResult {
        ground_energy: model.exact(energy),
        ground_states,
        ground_count: count,
        samples: None,
        method: Method::Exhaustive,
        exhausted: true,
        free_vars: model.vars.clone(),
    })
}
