//! Reference oracles shared by the integration tests. Nothing here calls the
//! library's solvers: energies are summed term by term for every assignment.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use qanneal::poly::{Assignment, Coeff, Polynomial, VarId};

/// Minimum of `h` over all completions of `clamp` (plus `extra` variables)
/// and every minimizer.
pub fn brute_ground(h: &Polynomial, clamp: &Assignment, extra: &[VarId]) -> (Coeff, Vec<Assignment>) {
    let mut free: BTreeSet<VarId> = h.support().into_iter().filter(|v| !clamp.contains(*v)).collect();
    free.extend(extra.iter().copied().filter(|v| !clamp.contains(*v)));
    let free: Vec<VarId> = free.into_iter().collect();
    assert!(free.len() <= 24, "brute force over {} variables", free.len());

    let mut scale = h.offset().denom().clone();
    for (_, c) in h.terms() {
        scale = scale.lcm(c.denom());
    }
    let scaled = |c: &Coeff| (c.numer() * (&scale / c.denom())).to_i128().expect("coefficient fits i128");
    let mut offset = scaled(h.offset());
    let mut terms: Vec<(u32, i128)> = Vec::new();
    for (mono, c) in h.terms() {
        let mut mask = 0u32;
        let mut alive = true;
        for &v in mono.vars() {
            match clamp.get(v) {
                Some(true) => {}
                Some(false) => alive = false,
                None => mask |= 1 << free.binary_search(&v).unwrap(),
            }
        }
        match (alive, mask) {
            (false, _) => {}
            (true, 0) => offset += scaled(c),
            (true, m) => terms.push((m, scaled(c))),
        }
    }
    let mut best = i128::MAX;
    let mut masks = Vec::new();
    for m in 0..1u32 << free.len() {
        let e = offset + terms.iter().filter(|&&(t, _)| t & !m == 0).map(|&(_, c)| c).sum::<i128>();
        if e < best {
            best = e;
            masks.clear();
        }
        if e == best {
            masks.push(m);
        }
    }
    let ground = masks
        .into_iter()
        .map(|m| {
            let mut a = clamp.clone();
            for (k, &v) in free.iter().enumerate() {
                a.set(v, (m >> k) & 1 == 1);
            }
            a
        })
        .collect();
    (Coeff::new(BigInt::from(best), scale), ground)
}

/// Values `0..2^width` in every combination of length `n`.
pub fn all_arrays(n: usize, width: usize) -> Vec<Vec<u64>> {
    let base = 1u64 << width;
    (0..base.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let v = code % base;
                    code /= base;
                    v
                })
                .collect()
        })
        .collect()
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
