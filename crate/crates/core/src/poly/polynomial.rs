use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::VarId;
use crate::error::{Error, Result};

pub type Coeff = BigRational;

/// A product of distinct variables, kept sorted. `x·x` collapses to `x`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<VarId>);

impl Monomial {
    pub fn new(mut vars: Vec<VarId>) -> Self {
        vars.sort_unstable();
        vars.dedup();
        Monomial(vars)
    }

    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn vars(&self) -> &[VarId] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Sorted union of two monomials.
    pub fn product(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

impl From<&[VarId]> for Monomial {
    fn from(vars: &[VarId]) -> Self {
        Monomial::new(vars.to_vec())
    }
}

/// 0/1 values for a set of variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(BTreeMap<VarId, bool>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: VarId, bit: bool) {
        self.0.insert(v, bit);
    }

    pub fn get(&self, v: VarId) -> Option<bool> {
        self.0.get(&v).copied()
    }

    pub fn bit(&self, v: VarId) -> Result<bool> {
        self.get(v).ok_or(Error::MissingVariable(v))
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.0.contains_key(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }

    /// Adds every binding of `other`, overriding existing ones.
    pub fn extend(&mut self, other: &Assignment) {
        for (v, b) in other.iter() {
            self.set(v, b);
        }
    }

    /// True when every binding in `partial` agrees with this assignment.
    pub fn extends(&self, partial: &Assignment) -> bool {
        partial.iter().all(|(v, b)| self.get(v) == Some(b))
    }

    pub fn restrict(&self, vars: &BTreeSet<VarId>) -> Assignment {
        Assignment(self.0.iter().filter(|(v, _)| vars.contains(v)).map(|(&v, &b)| (v, b)).collect())
    }
}

impl FromIterator<(VarId, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (VarId, bool)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

/// Multilinear pseudo-boolean polynomial with exact rational coefficients.
///
/// Canonical form: no zero coefficients, idempotence applied, and the
/// constant part held in `offset` rather than as a unit monomial. Two equal
/// polynomials therefore compare equal structurally.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Coeff>,
    offset: Coeff,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new(), offset: Coeff::zero() }
    }

    pub fn constant(c: Coeff) -> Self {
        Polynomial { terms: BTreeMap::new(), offset: c }
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn var(v: VarId) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial(vec![v]), Coeff::one());
        p
    }

    /// `v` when `negated` is false, `1 - v` otherwise.
    pub fn literal(v: VarId, negated: bool) -> Self {
        if negated {
            &Self::one() - &Self::var(v)
        } else {
            Self::var(v)
        }
    }

    pub fn monomial(vars: &[VarId], c: Coeff) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(vars.to_vec()), c);
        p
    }

    /// Adds `c` times `mono`, keeping canonical form.
    pub fn add_term(&mut self, mono: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        if mono.degree() == 0 {
            self.offset += c;
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_constant(&mut self, c: Coeff) {
        self.offset += c;
    }

    pub fn offset(&self) -> &Coeff {
        &self.offset
    }

    /// Non-constant terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, vars: &[VarId]) -> Coeff {
        let mono = Monomial::new(vars.to_vec());
        if mono.degree() == 0 {
            return self.offset.clone();
        }
        self.terms.get(&mono).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Number of non-constant terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.offset.is_zero()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn support(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars().iter().copied()).collect()
    }

    /// Sum of absolute values of all coefficients, offset included.
    pub fn coefficient_mass(&self) -> Coeff {
        self.terms.values().fold(self.offset.abs(), |acc, c| acc + c.abs())
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
            offset: &self.offset * c,
        }
    }

    pub fn square(&self) -> Polynomial {
        self * self
    }

    /// Exact value under `a`, which must cover the support.
    pub fn evaluate(&self, a: &Assignment) -> Result<Coeff> {
        let mut total = self.offset.clone();
        for (mono, c) in &self.terms {
            let mut on = true;
            for &v in mono.vars() {
                if !a.bit(v)? {
                    on = false;
                }
            }
            if on {
                total += c;
            }
        }
        Ok(total)
    }

    /// Substitutes the constants in `partial` and re-canonicalizes.
    pub fn clamp(&self, partial: &Assignment) -> Polynomial {
        let mut out = Polynomial::constant(self.offset.clone());
        'terms: for (mono, c) in &self.terms {
            let mut kept = Vec::with_capacity(mono.degree());
            for &v in mono.vars() {
                match partial.get(v) {
                    Some(false) => continue 'terms,
                    Some(true) => {}
                    None => kept.push(v),
                }
            }
            out.add_term(Monomial(kept), c.clone());
        }
        out
    }

    /// Renders with caller-supplied variable names; used in diagnostics.
    pub fn display_with<'a>(&'a self, name: &'a dyn Fn(VarId) -> String) -> impl fmt::Display + 'a {
        DisplayPoly { poly: self, name }
    }
}

struct DisplayPoly<'a> {
    poly: &'a Polynomial,
    name: &'a dyn Fn(VarId) -> String,
}

impl fmt::Display for DisplayPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.poly.offset.is_zero() || self.poly.terms.is_empty() {
            write!(f, "{}", self.poly.offset)?;
            first = false;
        }
        for (mono, c) in &self.poly.terms {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            if !mag.is_one() {
                write!(f, "{mag}·")?;
            }
            let names: Vec<String> = mono.vars().iter().map(|&v| (self.name)(v)).collect();
            write!(f, "{}", names.join("·"))?;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: VarId| v.to_string();
        DisplayPoly { poly: self, name: &name }.fmt(f)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl std::ops::AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        self.offset += &rhs.offset;
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl std::ops::AddAssign<Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: Polynomial) {
        self.offset += rhs.offset;
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            offset: -&self.offset,
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += &(-rhs);
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::constant(&self.offset * &rhs.offset);
        if !rhs.offset.is_zero() {
            for (m, c) in &self.terms {
                out.add_term(m.clone(), c * &rhs.offset);
            }
        }
        if !self.offset.is_zero() {
            for (m, c) in &rhs.terms {
                out.add_term(m.clone(), c * &self.offset);
            }
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.product(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Mul<&Coeff> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Coeff) -> Polynomial {
        self.scale(rhs)
    }
}

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        iter.fold(Polynomial::zero(), |acc, p| acc + p)
    }
}
