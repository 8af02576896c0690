use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::monomial::{GeneratorSet, Monomial, MonomialOrder};
use super::ring::{Field, IntegerRing, PrimeField, RationalField, Ring};
use super::PolyError;

/// Result of a homogeneity query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(u32),
    Inhomogeneous,
}

/// Sparse polynomial over a coefficient ring, with terms stored in strictly
/// descending degrevlex order and no zero coefficients.
#[derive(Clone)]
pub struct Polynomial<R: Ring> {
    ring: R,
    vars: Arc<GeneratorSet>,
    terms: Vec<(Monomial, R::Elem)>,
}

impl<R: Ring> PartialEq for Polynomial<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && same_vars(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl<R: Ring> Eq for Polynomial<R> {}

fn same_vars(a: &Arc<GeneratorSet>, b: &Arc<GeneratorSet>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn desc(a: &Monomial, b: &Monomial) -> Ordering {
    MonomialOrder::DegRevLex.compare(b, a)
}

impl<R: Ring> Polynomial<R> {
    pub fn zero(ring: R, vars: Arc<GeneratorSet>) -> Self {
        Polynomial {
            ring,
            vars,
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: R, vars: Arc<GeneratorSet>, c: R::Elem) -> Self {
        let one = vars.one();
        Self::from_terms(ring, vars, vec![(one, c)])
    }

    pub fn one(ring: R, vars: Arc<GeneratorSet>) -> Self {
        let c = ring.one();
        Self::constant(ring, vars, c)
    }

    /// The generator at position `pos` of the variable set.
    pub fn var(ring: R, vars: Arc<GeneratorSet>, pos: usize) -> Self {
        let m = vars.variable(pos);
        let c = ring.one();
        Self::from_terms(ring, vars, vec![(m, c)])
    }

    pub fn monomial(ring: R, vars: Arc<GeneratorSet>, m: Monomial, c: R::Elem) -> Self {
        Self::from_terms(ring, vars, vec![(m, c)])
    }

    /// Builds a canonical polynomial from arbitrary terms: like monomials are
    /// merged and zero coefficients dropped.
    pub fn from_terms(ring: R, vars: Arc<GeneratorSet>, terms: Vec<(Monomial, R::Elem)>) -> Self {
        let mut acc: HashMap<Monomial, R::Elem> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.exponents().len(), vars.len());
            match acc.get_mut(&m) {
                Some(existing) => *existing = ring.add(existing, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        terms.sort_by(|a, b| desc(&a.0, &b.0));
        Polynomial { ring, vars, terms }
    }

    /// Caller guarantees canonical (sorted, nonzero, distinct) terms.
    pub(crate) fn from_sorted_terms(
        ring: R,
        vars: Arc<GeneratorSet>,
        terms: Vec<(Monomial, R::Elem)>,
    ) -> Self {
        debug_assert!(terms.windows(2).all(|w| desc(&w[0].0, &w[1].0) == Ordering::Less));
        Polynomial { ring, vars, terms }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn vars(&self) -> &Arc<GeneratorSet> {
        &self.vars
    }

    pub fn terms(&self) -> &[(Monomial, R::Elem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading term under degrevlex.
    pub fn leading(&self) -> Option<&(Monomial, R::Elem)> {
        self.terms.first()
    }

    pub fn coefficient(&self, m: &Monomial) -> R::Elem {
        self.terms
            .binary_search_by(|(t, _)| desc(t, m))
            .map(|idx| self.terms[idx].1.clone())
            .unwrap_or_else(|_| self.ring.zero())
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let Some((first, _)) = self.terms.first() else {
            return Homogeneity::Zero;
        };
        let d = first.degree();
        if self.terms.iter().all(|(m, _)| m.degree() == d) {
            Homogeneity::Homogeneous(d)
        } else {
            Homogeneity::Inhomogeneous
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch {
                left: self.ring.tag(),
                right: other.ring.tag(),
            });
        }
        if !same_vars(&self.vars, &other.vars) {
            return Err(PolyError::GeneratorMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let ring = &self.ring;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (Some(x), Some(y)) => desc(&x.0, &y.0),
            };
            match ord {
                Ordering::Less => out.push(a.next().unwrap().clone()),
                Ordering::Greater => {
                    let (m, c) = b.next().unwrap();
                    let c = if negate { ring.neg(c) } else { c.clone() };
                    out.push((m.clone(), c));
                }
                Ordering::Equal => {
                    let (m, x) = a.next().unwrap();
                    let (_, y) = b.next().unwrap();
                    let c = if negate { ring.sub(x, y) } else { ring.add(x, y) };
                    if !ring.is_zero(&c) {
                        out.push((m.clone(), c));
                    }
                }
            }
        }
        Self::from_sorted_terms(self.ring.clone(), self.vars.clone(), out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let ring = &self.ring;
        let mut acc: HashMap<Monomial, R::Elem> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ring.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(e) => *e = ring.add(e, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        terms.sort_by(|a, b| desc(&a.0, &b.0));
        Ok(Self::from_sorted_terms(self.ring.clone(), self.vars.clone(), terms))
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.ring.neg(c)))
            .collect();
        Self::from_sorted_terms(self.ring.clone(), self.vars.clone(), terms)
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        if self.ring.is_zero(c) {
            return Self::zero(self.ring.clone(), self.vars.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, x)| (m.clone(), self.ring.mul(x, c)))
            .filter(|(_, x)| !self.ring.is_zero(x))
            .collect();
        Self::from_sorted_terms(self.ring.clone(), self.vars.clone(), terms)
    }

    /// Multiplies by a monomial; preserves term order because every graded
    /// order used here is multiplicative.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| (t.mul(m), c.clone()))
            .collect();
        Self::from_sorted_terms(self.ring.clone(), self.vars.clone(), terms)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.vars.clone());
        for _ in 0..exp {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Re-expresses the coefficients in another ring.
    pub fn map_ring<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> Polynomial<S> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(c)))
            .filter(|(_, c)| !target.is_zero(c))
            .collect();
        Polynomial::from_sorted_terms(target, self.vars.clone(), terms)
    }
}

impl<F: Field> Polynomial<F> {
    /// Scales so the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = self.ring.inv(lc);
                self.scale(&inv)
            }
        }
    }
}

impl Polynomial<IntegerRing> {
    pub fn to_rational(&self) -> Polynomial<RationalField> {
        self.map_ring(RationalField, |c| RationalField.from_bigint(c))
    }

    pub fn reduce_mod(&self, field: PrimeField) -> Polynomial<PrimeField> {
        self.map_ring(field, |c| field.from_bigint(c))
    }

    pub fn integer(vars: Arc<GeneratorSet>, c: i64) -> Self {
        Self::constant(IntegerRing, vars, BigInt::from(c))
    }
}

impl<R: Ring> fmt::Display for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = self.ring.is_negative(c);
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = self.ring.fmt_abs(c);
            let factors: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(pos, &e)| {
                    let name = self.vars.name(pos);
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == "1" {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for Polynomial<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial[{}]({self})", self.ring.tag())
    }
}
