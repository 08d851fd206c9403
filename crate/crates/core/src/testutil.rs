//! Naive reference enumeration for tests. Deliberately independent of the
//! solver module: every assignment is scored from scratch as a sum over
//! terms, with no incremental updates.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::poly::{Assignment, Coeff, Polynomial, VarId};

/// Minimum of `h` over all completions of `clamp`, and every minimizer.
/// Variables in `extra` are enumerated even if they do not occur in `h`.
pub fn brute_ground(h: &Polynomial, clamp: &Assignment, extra: &[VarId]) -> (Coeff, Vec<Assignment>) {
    let mut free: BTreeSet<VarId> = h.support().into_iter().filter(|v| !clamp.contains(*v)).collect();
    free.extend(extra.iter().copied().filter(|v| !clamp.contains(*v)));
    let free: Vec<VarId> = free.into_iter().collect();
    assert!(free.len() <= 24, "brute force over {} variables", free.len());

    let mut scale = BigInt::from(1);
    for (_, c) in h.terms() {
        scale = scale.lcm(c.denom());
    }
    scale = scale.lcm(h.offset().denom());
    let scaled = |c: &Coeff| (c.numer() * (&scale / c.denom())).to_i128().expect("test coefficient fits i128");

    // Each term as (mask of free variables it needs, coefficient); terms
    // killed by the clamp are dropped.
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
        if alive {
            if mask == 0 {
                offset += scaled(c);
            } else {
                terms.push((mask, scaled(c)));
            }
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
            debug_assert_eq!(h.evaluate(&a).unwrap(), Coeff::new(BigInt::from(best), scale.clone()));
            a
        })
        .collect();
    (Coeff::new(BigInt::from(best), scale), ground)
}

pub fn ground_values(ground: &[Assignment], v: VarId) -> BTreeSet<bool> {
    ground.iter().map(|a| a.get(v).expect("variable enumerated")).collect()
}
