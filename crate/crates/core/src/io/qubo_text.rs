use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Coeff, Monomial, Polynomial, Qubo, Substitution, VarId};

/// Exact decimal when the denominator is `2^a·5^b`, `p/q` otherwise.
pub fn format_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        return c.numer().to_string();
    }
    let mut den = c.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0u32, 0u32);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", c.numer(), c.denom());
    }
    let digits = twos.max(fives);
    let scaled = c.numer().abs() * (BigInt::from(10).pow(digits) / c.denom());
    let s = format!("{:0>width$}", scaled.to_string(), width = digits as usize + 1);
    let (int_part, frac) = s.split_at(s.len() - digits as usize);
    let sign = if c.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac}")
}

/// Inverse of [`format_coeff`]; also accepts exponent-free decimals and
/// integers with a leading `+`.
pub fn parse_coeff(s: &str) -> std::result::Result<Coeff, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().map_err(|e| format!("`{s}`: {e}"))?;
        let d: BigInt = d.parse().map_err(|e| format!("`{s}`: {e}"))?;
        if d.is_zero() {
            return Err(format!("`{s}`: zero denominator"));
        }
        return Ok(Coeff::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac.is_empty()
        || !int_part.chars().chain(frac.chars()).all(|ch| ch.is_ascii_digit())
    {
        return Err(format!("`{s}` is not a number"));
    }
    let digits = format!("{int_part}{frac}");
    let n: BigInt = digits.parse().map_err(|e| format!("`{s}`: {e}"))?;
    let c = Coeff::new(n, BigInt::from(10).pow(frac.len() as u32));
    Ok(if neg { -c } else { c })
}

/// QUBO text: comments, `c offset`, one `c ledger <z> <x> <y> <weight>` line
/// per substitution, the `p qubo` header, then diagonal and off-diagonal
/// lines `i j coefficient` with `i ≤ j`.
pub fn emit_qubo(q: &Qubo, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    let _ = writeln!(out, "c offset {}", format_coeff(q.base.offset()));
    for s in &q.ledger {
        let _ = writeln!(
            out,
            "c ledger {} {} {} {}",
            s.ancilla.0,
            s.replaces.0 .0,
            s.replaces.1 .0,
            format_coeff(&s.penalty_weight)
        );
    }
    let mut diag = Vec::new();
    let mut off = Vec::new();
    for (m, c) in q.base.terms() {
        match m.vars() {
            [v] => diag.push((v.0, v.0, c)),
            [a, b] => off.push((a.0, b.0, c)),
            _ => unreachable!("QUBO terms are at most quadratic"),
        }
    }
    let nodes = q.base.support().last().map_or(0, |v| v.0 as u64 + 1);
    let _ = writeln!(out, "p qubo 0 {nodes} {} {}", diag.len(), off.len());
    for (i, j, c) in diag.into_iter().chain(off) {
        let _ = writeln!(out, "{i} {j} {}", format_coeff(c));
    }
    out
}

pub fn parse_qubo(text: &str) -> Result<Qubo> {
    let err = |line: usize, message: String| Error::Parse { line, message };
    let mut base = Polynomial::zero();
    let mut ledger = Vec::new();
    let mut header: Option<(u64, usize, usize)> = None;
    let (mut n_diag, mut n_off) = (0usize, 0usize);
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "c" || line.starts_with("c ") {
            let rest: Vec<&str> = line.split_whitespace().skip(1).collect();
            match rest.as_slice() {
                ["offset", v] => base.add_constant(parse_coeff(v).map_err(|m| err(line_no, m))?),
                ["ledger", z, x, y, w] => {
                    let id = |t: &str| t.parse::<u32>().map(VarId).map_err(|e| err(line_no, format!("`{t}`: {e}")));
                    ledger.push(Substitution {
                        ancilla: id(z)?,
                        replaces: (id(x)?, id(y)?),
                        penalty_weight: parse_coeff(w).map_err(|m| err(line_no, m))?,
                    });
                }
                _ => {}
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.first() == Some(&"p") {
            if header.is_some() {
                return Err(err(line_no, "duplicate header".into()));
            }
            let ["p", "qubo", _, nodes, nd, no] = fields.as_slice() else {
                return Err(err(line_no, format!("bad header `{line}`")));
            };
            let num = |t: &str| t.parse::<u64>().map_err(|e| err(line_no, format!("`{t}`: {e}")));
            header = Some((num(nodes)?, num(nd)? as usize, num(no)? as usize));
            continue;
        }
        let Some((nodes, _, _)) = header else {
            return Err(err(line_no, "term before `p qubo` header".into()));
        };
        let [i, j, c] = fields.as_slice() else {
            return Err(err(line_no, format!("expected `i j coefficient`, got `{line}`")));
        };
        let i: u32 = i.parse().map_err(|e| err(line_no, format!("`{i}`: {e}")))?;
        let j: u32 = j.parse().map_err(|e| err(line_no, format!("`{j}`: {e}")))?;
        if i > j {
            return Err(err(line_no, format!("term {i} {j} violates i <= j")));
        }
        if u64::from(j) >= nodes {
            return Err(err(line_no, format!("variable {j} outside header's {nodes} nodes")));
        }
        let c = parse_coeff(c).map_err(|m| err(line_no, m))?;
        if i == j {
            n_diag += 1;
            base.add_term(Monomial::new(vec![VarId(i)]), c);
        } else {
            n_off += 1;
            base.add_term(Monomial::new(vec![VarId(i), VarId(j)]), c);
        }
    }
    let Some((_, nd, no)) = header else {
        return Err(err(text.lines().count().max(1), "missing `p qubo` header".into()));
    };
    if (nd, no) != (n_diag, n_off) {
        return Err(err(
            text.lines().count(),
            format!("header declares {nd}+{no} terms, file has {n_diag}+{n_off}"),
        ));
    }
    Qubo::new(base, ledger)
}
