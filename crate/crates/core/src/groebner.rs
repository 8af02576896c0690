//! Buchberger's algorithm for homogeneous ideals over a field, normal forms,
//! and Hilbert functions of the graded quotient.
//!
//! Pairs are selected by the normal strategy (smallest lcm degree first, ties
//! broken by creation order) and pruned with the Gebauer–Möller update, which
//! implements Buchberger's coprime and chain criteria. The result is the
//! reduced, monic basis sorted by ascending leading monomial.
//!
//! [`hilbert_linear_algebra`] computes the same graded ranks by plain row
//! reduction of the degree slice of the ideal, without any Gröbner basis.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::poly::{
    Field, GeneratorSet, Homogeneity, Monomial, MonomialOrder, PolyError, Polynomial,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("no generators given; use the zero-ideal basis instead")]
    NoGenerators,
    #[error("generator {index} is not homogeneous")]
    Inhomogeneous { index: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(
        "degree slice too large: {monomials} monomials x {rows} relation rows exceeds cap {cap}"
    )]
    SliceTooLarge {
        monomials: usize,
        rows: usize,
        cap: usize,
    },
}

/// Terms sorted descending under the basis' monomial order.
type Terms<F> = Vec<(Monomial, <F as crate::poly::Ring>::Elem)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HilbertMethod {
    StandardMonomials,
    LinearAlgebra,
}

/// Graded ranks of a quotient ring, `ranks[d]` for `d = 0..=max_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertFunction {
    pub ranks: Vec<usize>,
    pub method: HilbertMethod,
}

impl HilbertFunction {
    pub fn rank(&self, degree: usize) -> usize {
        self.ranks.get(degree).copied().unwrap_or(0)
    }

    /// Ranks with trailing zeros removed.
    pub fn trimmed(&self) -> &[usize] {
        let end = self.ranks.iter().rposition(|&r| r != 0).map_or(0, |p| p + 1);
        &self.ranks[..end]
    }

    pub fn total(&self) -> usize {
        self.ranks.iter().sum()
    }
}

#[derive(Clone)]
pub struct GroebnerBasis<F: Field> {
    field: F,
    vars: Arc<GeneratorSet>,
    order: MonomialOrder,
    elements: Vec<Terms<F>>,
    source: Vec<Polynomial<F>>,
}

impl<F: Field> fmt::Debug for GroebnerBasis<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroebnerBasis")
            .field("order", &self.order)
            .field("basis", &self.basis())
            .finish()
    }
}

/// Computes the reduced Gröbner basis of the ideal spanned by `generators`.
///
/// Coefficients must come from a field; that requirement is carried by the
/// type parameter. Inhomogeneous input is rejected.
pub fn buchberger<F: Field>(
    generators: &[Polynomial<F>],
    order: MonomialOrder,
) -> Result<GroebnerBasis<F>, GroebnerError> {
    let Some(first) = generators.first() else {
        return Err(GroebnerError::NoGenerators);
    };
    let field = first.ring().clone();
    let vars = first.vars().clone();
    for (index, g) in generators.iter().enumerate() {
        if g.ring() != &field {
            return Err(PolyError::RingMismatch {
                left: field.tag(),
                right: g.ring().tag(),
            }
            .into());
        }
        if g.vars() != &vars && **g.vars() != *vars {
            return Err(PolyError::GeneratorMismatch.into());
        }
        if g.homogeneity() == Homogeneity::Inhomogeneous {
            return Err(GroebnerError::Inhomogeneous { index });
        }
    }
    let mut engine = Engine::new(field.clone(), vars.clone(), order);
    for g in generators {
        engine.insert(to_terms(g, order));
    }
    engine.run();
    let elements = engine.into_reduced_basis();
    Ok(GroebnerBasis {
        field,
        vars,
        order,
        elements,
        source: generators.to_vec(),
    })
}

fn to_terms<F: Field>(p: &Polynomial<F>, order: MonomialOrder) -> Terms<F> {
    let mut terms = p.terms().to_vec();
    if order != MonomialOrder::DegRevLex {
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
    }
    terms
}

impl<F: Field> GroebnerBasis<F> {
    /// Basis of the zero ideal over the given generator set.
    pub fn zero_ideal(field: F, vars: Arc<GeneratorSet>, order: MonomialOrder) -> Self {
        GroebnerBasis {
            field,
            vars,
            order,
            elements: Vec::new(),
            source: Vec::new(),
        }
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vars(&self) -> &Arc<GeneratorSet> {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn source(&self) -> &[Polynomial<F>] {
        &self.source
    }

    pub fn basis(&self) -> Vec<Polynomial<F>> {
        self.elements
            .iter()
            .map(|t| Polynomial::from_terms(self.field.clone(), self.vars.clone(), t.clone()))
            .collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|t| t[0].0.clone()).collect()
    }

    /// Complete reduction modulo the basis. Zero exactly on ideal members.
    pub fn normal_form(&self, p: &Polynomial<F>) -> Polynomial<F> {
        let reducers: Vec<&Terms<F>> = self.elements.iter().collect();
        let reduced = reduce_full(&self.field, &reducers, to_terms(p, self.order), self.order);
        Polynomial::from_terms(self.field.clone(), self.vars.clone(), reduced)
    }

    pub fn contains(&self, p: &Polynomial<F>) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Checks Buchberger's criterion exhaustively: every S-polynomial of
    /// every pair of basis elements reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let reducers: Vec<&Terms<F>> = self.elements.iter().collect();
        let weights = self.vars.weights();
        for i in 0..self.elements.len() {
            for j in i + 1..self.elements.len() {
                let s = s_polynomial(
                    &self.field,
                    &self.elements[i],
                    &self.elements[j],
                    weights,
                    self.order,
                );
                if !reduce_full(&self.field, &reducers, s, self.order).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// No leading monomial divides any monomial of another element, and every
    /// element is monic.
    pub fn is_reduced(&self) -> bool {
        self.elements.iter().enumerate().all(|(i, e)| {
            self.field.is_one(&e[0].1)
                && self.elements.iter().enumerate().all(|(j, other)| {
                    i == j || other.iter().all(|(m, _)| !e[0].0.divides(m))
                })
        })
    }

    /// Counts standard monomials (those outside the leading-term ideal) in
    /// each degree up to `max_degree`.
    pub fn hilbert_function(&self, max_degree: usize) -> HilbertFunction {
        let leads = self.leading_monomials();
        let weights = self.vars.weights();
        let nvars = self.vars.len();
        let mut levels: Vec<Vec<Monomial>> = Vec::with_capacity(max_degree + 1);
        let one = self.vars.one();
        levels.push(if leads.iter().any(|l| l.divides(&one)) {
            Vec::new()
        } else {
            vec![one]
        });
        for d in 1..=max_degree {
            let mut level = Vec::new();
            // every standard monomial is m * x_i with m standard and x_i its
            // last variable, so each one is produced exactly once
            for pos in 0..nvars {
                let w = weights[pos] as usize;
                if w > d {
                    continue;
                }
                let x = self.vars.variable(pos);
                for m in &levels[d - w] {
                    if m.last_variable().is_some_and(|last| last > pos) {
                        continue;
                    }
                    let candidate = m.mul(&x);
                    if !leads.iter().any(|l| l.divides(&candidate)) {
                        level.push(candidate);
                    }
                }
            }
            levels.push(level);
        }
        HilbertFunction {
            ranks: levels.iter().map(Vec::len).collect(),
            method: HilbertMethod::StandardMonomials,
        }
    }

    /// Standard monomials of one degree, descending.
    pub fn standard_monomials(&self, degree: u32) -> Vec<Monomial> {
        let leads = self.leading_monomials();
        let mut ms: Vec<Monomial> = self
            .vars
            .monomials_of_degree(degree)
            .into_iter()
            .filter(|m| !leads.iter().any(|l| l.divides(m)))
            .collect();
        ms.sort_by(|a, b| self.order.compare(b, a));
        ms
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    seq: usize,
}

struct Engine<F: Field> {
    field: F,
    vars: Arc<GeneratorSet>,
    order: MonomialOrder,
    polys: Vec<Terms<F>>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    seq: usize,
}

impl<F: Field> Engine<F> {
    fn new(field: F, vars: Arc<GeneratorSet>, order: MonomialOrder) -> Self {
        Engine {
            field,
            vars,
            order,
            polys: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            seq: 0,
        }
    }

    fn reducers(&self) -> Vec<&Terms<F>> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(p, _)| p)
            .collect()
    }

    fn insert(&mut self, p: Terms<F>) {
        let reduced = reduce_full(&self.field, &self.reducers(), p, self.order);
        if reduced.is_empty() {
            return;
        }
        let monic = make_monic(&self.field, reduced);
        self.update(monic);
    }

    fn run(&mut self) {
        while let Some(idx) = self.select_pair() {
            let pair = self.pairs.swap_remove(idx);
            let s = s_polynomial(
                &self.field,
                &self.polys[pair.i],
                &self.polys[pair.j],
                self.vars.weights(),
                self.order,
            );
            self.insert(s);
        }
    }

    fn select_pair(&self) -> Option<usize> {
        self.pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.lcm
                    .degree()
                    .cmp(&b.lcm.degree())
                    .then(a.seq.cmp(&b.seq))
            })
            .map(|(idx, _)| idx)
    }

    /// Gebauer–Möller update with a new basis element.
    fn update(&mut self, h: Terms<F>) {
        let weights = self.vars.weights().to_vec();
        let h_idx = self.polys.len();
        let lm_h = h[0].0.clone();

        let mut candidates: Vec<(usize, Monomial)> = (0..self.polys.len())
            .filter(|&g| self.active[g])
            .map(|g| (g, lm_h.lcm(&self.polys[g][0].0, &weights)))
            .collect();
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        while !candidates.is_empty() {
            let (g1, lcm1) = candidates.remove(0);
            let coprime = lm_h.is_coprime(&self.polys[g1][0].0);
            let dominated = candidates
                .iter()
                .chain(kept.iter())
                .any(|(_, lcm2)| lcm2.divides(&lcm1));
            if coprime || !dominated {
                kept.push((g1, lcm1));
            }
        }
        let new_pairs: Vec<(usize, Monomial)> = kept
            .into_iter()
            .filter(|(g, _)| !lm_h.is_coprime(&self.polys[*g][0].0))
            .collect();

        let polys = &self.polys;
        self.pairs.retain(|p| {
            let l_i = lm_h.lcm(&polys[p.i][0].0, &weights);
            let l_j = lm_h.lcm(&polys[p.j][0].0, &weights);
            !(lm_h.divides(&p.lcm) && l_i != p.lcm && l_j != p.lcm)
        });
        for (g, lcm) in new_pairs {
            self.pairs.push(Pair {
                i: g,
                j: h_idx,
                lcm,
                seq: self.seq,
            });
            self.seq += 1;
        }

        for g in 0..self.polys.len() {
            if self.active[g] && lm_h.divides(&self.polys[g][0].0) {
                self.active[g] = false;
            }
        }
        self.polys.push(h);
        self.active.push(true);
    }

    fn into_reduced_basis(self) -> Vec<Terms<F>> {
        let mut minimal: Vec<Terms<F>> = self
            .polys
            .into_iter()
            .zip(self.active)
            .filter(|(_, a)| *a)
            .map(|(p, _)| p)
            .collect();
        minimal.sort_by(|a, b| self.order.compare(&a[0].0, &b[0].0));
        let mut reduced = Vec::with_capacity(minimal.len());
        for idx in 0..minimal.len() {
            let others: Vec<&Terms<F>> = minimal
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != idx)
                .map(|(_, p)| p)
                .collect();
            let mut p = minimal[idx].clone();
            let lead = p.remove(0);
            let tail = reduce_full(&self.field, &others, p, self.order);
            let mut full = Vec::with_capacity(tail.len() + 1);
            full.push(lead);
            full.extend(tail);
            reduced.push(full);
        }
        reduced
    }
}

fn make_monic<F: Field>(field: &F, p: Terms<F>) -> Terms<F> {
    let inv = field.inv(&p[0].1);
    if field.is_one(&inv) {
        return p;
    }
    p.into_iter().map(|(m, c)| (m, field.mul(&c, &inv))).collect()
}

fn s_polynomial<F: Field>(
    field: &F,
    f: &Terms<F>,
    g: &Terms<F>,
    weights: &[u32],
    order: MonomialOrder,
) -> Terms<F> {
    let (lm_f, lc_f) = &f[0];
    let (lm_g, lc_g) = &g[0];
    let lcm = lm_f.lcm(lm_g, weights);
    let uf = lm_f.quotient_of(&lcm).expect("lcm divisible");
    let ug = lm_g.quotient_of(&lcm).expect("lcm divisible");
    // lc_g * uf * f - lc_f * ug * g, with the leading terms cancelling
    let a: Terms<F> = f[1..]
        .iter()
        .map(|(m, c)| (m.mul(&uf), field.mul(c, lc_g)))
        .collect();
    sub_scaled(field, &a, lc_f, &ug, &g[1..], order)
}

/// `p - c * u * g`, merging two descending term lists.
fn sub_scaled<F: Field>(
    field: &F,
    p: &[(Monomial, F::Elem)],
    c: &F::Elem,
    u: &Monomial,
    g: &[(Monomial, F::Elem)],
    order: MonomialOrder,
) -> Terms<F> {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let mut a = p.iter().peekable();
    let mut b = g.iter().map(|(m, x)| (m.mul(u), x)).peekable();
    loop {
        let ord = match (a.peek(), b.peek()) {
            (None, None) => break,
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (Some(x), Some(y)) => order.compare(&x.0, &y.0),
        };
        match ord {
            Ordering::Greater => out.push(a.next().unwrap().clone()),
            Ordering::Less => {
                let (m, x) = b.next().unwrap();
                out.push((m, field.neg(&field.mul(c, x))));
            }
            Ordering::Equal => {
                let (m, x) = a.next().unwrap();
                let (_, y) = b.next().unwrap();
                let v = field.sub(x, &field.mul(c, y));
                if !field.is_zero(&v) {
                    out.push((m.clone(), v));
                }
            }
        }
    }
    out
}

/// Full reduction of `p` by monic `reducers`.
fn reduce_full<F: Field>(
    field: &F,
    reducers: &[&Terms<F>],
    mut p: Terms<F>,
    order: MonomialOrder,
) -> Terms<F> {
    let mut out: Terms<F> = Vec::new();
    let mut start = 0;
    while start < p.len() {
        let (m, c) = &p[start];
        let hit = reducers
            .iter()
            .find_map(|g| g[0].0.quotient_of(m).map(|u| (g, u)));
        match hit {
            Some((g, u)) => {
                let lc = &g[0].1;
                let factor = if field.is_one(lc) {
                    c.clone()
                } else {
                    field.div(c, lc)
                };
                p = sub_scaled(field, &p[start + 1..], &factor, &u, &g[1..], order);
                start = 0;
            }
            None => {
                out.push(p[start].clone());
                start += 1;
            }
        }
    }
    out
}

/// Quotient rank in one degree by linear algebra on the degree slice: the
/// span of `monomial * generator` products is row-reduced against the
/// monomial basis of that degree. `cap` bounds `#monomials * #rows`.
pub fn hilbert_linear_algebra<F: Field>(
    generators: &[Polynomial<F>],
    vars: &Arc<GeneratorSet>,
    degree: u32,
    cap: usize,
) -> Result<usize, GroebnerError> {
    let monomials = vars.monomials_of_degree(degree);
    let column: HashMap<&Monomial, usize> =
        monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut multipliers = Vec::new();
    let mut rows = 0usize;
    for (index, g) in generators.iter().enumerate() {
        let d = match g.homogeneity() {
            Homogeneity::Zero => continue,
            Homogeneity::Homogeneous(d) => d,
            Homogeneity::Inhomogeneous => return Err(GroebnerError::Inhomogeneous { index }),
        };
        if d > degree {
            continue;
        }
        let us = vars.monomials_of_degree(degree - d);
        rows += us.len();
        multipliers.push((g, us));
    }
    if monomials.len().saturating_mul(rows) > cap {
        return Err(GroebnerError::SliceTooLarge {
            monomials: monomials.len(),
            rows,
            cap,
        });
    }
    let Some(field) = generators.first().map(|g| g.ring().clone()) else {
        return Ok(monomials.len());
    };

    // sparse echelon form keyed by pivot column; pivot entries are one
    let mut pivots: HashMap<usize, Vec<(usize, F::Elem)>> = HashMap::new();
    for (g, us) in multipliers {
        for u in us {
            let mut row: Vec<(usize, F::Elem)> = g
                .terms()
                .iter()
                .map(|(m, c)| (column[&m.mul(&u)], c.clone()))
                .collect();
            row.sort_by_key(|(col, _)| *col);
            while let Some((lead, c)) = row.first().cloned() {
                match pivots.get(&lead) {
                    Some(pivot) => row = axpy_row(&field, &row[1..], &c, &pivot[1..]),
                    None => {
                        let inv = field.inv(&c);
                        let normalized = row
                            .into_iter()
                            .map(|(col, x)| (col, field.mul(&x, &inv)))
                            .collect();
                        pivots.insert(lead, normalized);
                        break;
                    }
                }
            }
        }
    }
    Ok(monomials.len() - pivots.len())
}

/// `row - c * pivot`, both sorted by column.
fn axpy_row<F: Field>(
    field: &F,
    row: &[(usize, F::Elem)],
    c: &F::Elem,
    pivot: &[(usize, F::Elem)],
) -> Vec<(usize, F::Elem)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut a, mut b) = (row.iter().peekable(), pivot.iter().peekable());
    loop {
        match (a.peek(), b.peek()) {
            (None, None) => break,
            (Some(_), None) => out.push(a.next().unwrap().clone()),
            (None, Some(_)) => {
                let (col, x) = b.next().unwrap();
                out.push((*col, field.neg(&field.mul(c, x))));
            }
            (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                Ordering::Less => out.push(a.next().unwrap().clone()),
                Ordering::Greater => {
                    let (col, v) = b.next().unwrap();
                    out.push((*col, field.neg(&field.mul(c, v))));
                }
                Ordering::Equal => {
                    let (col, x) = a.next().unwrap();
                    let (_, y) = b.next().unwrap();
                    let v = field.sub(x, &field.mul(c, y));
                    if !field.is_zero(&v) {
                        out.push((*col, v));
                    }
                }
            },
        }
    }
    out
}
