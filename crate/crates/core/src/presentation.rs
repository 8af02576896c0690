//! The presented Chow ring of the moduli space of `n` iterated blowups.
//!
//! Generators are the divisor classes `D(i,j)` for `i < j`, the pullbacks
//! `d(i,a)` of the degree-one classes of the surface and the point classes
//! `pt(i)`. The ideal contains, in this order:
//!
//! * per slot `i`: `d(i,a) d(i,b) - M_ab pt(i)`, `pt(i) d(i,a)`, `pt(i)^2`;
//! * per pair `i < j`, pairs ordered by `(j, i)`:
//!   `D(i,j) (d(i,a) - d(j,a))`, `D(i,j) (pt(i) - pt(j))`,
//!   `D(i,j) (D(m,i) - D(m,j))` for `m < i`, and `P_ij(-D(i,j))`.
//!
//! `P_ij(T) = T^2 + c1 T + c0` with
//! `c1 = -K(j) - sum_{m<i} D(m,j)` and
//! `c0 = kappa(i,j) - sum_{m<i} D(m,i) D(m,j)`,
//! where `kappa(i,j) = pt(i) + pt(j) + sum_ab (M^-1)_ab d(i,a) d(j,b)` is the
//! class of the diagonal.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::groebner::{buchberger, hilbert_linear_algebra, GroebnerBasis, GroebnerError, HilbertFunction};
use crate::poly::{
    Generator, GeneratorSet, Homogeneity, IntegerRing, MonomialOrder, Polynomial, PrimeField,
    RationalField,
};
use crate::surface::SurfaceData;

type ZPoly = Polynomial<IntegerRing>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("invalid slot pair ({i}, {j}) for n = {n}")]
    BadSlots { i: usize, j: usize, n: usize },
    #[error("degree map needs a homogeneous class of degree {expected}")]
    WrongDegree { expected: u32 },
    #[error("top graded piece has rank {rank}, expected 1")]
    TopNotRankOne { rank: usize },
    #[error("degree {value} of an integral class is not an integer")]
    NonIntegral { value: String },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BettiMethod {
    Groebner,
    Product,
    Recursion,
    LinearAlgebra,
}

impl BettiMethod {
    pub fn name(&self) -> &'static str {
        match self {
            BettiMethod::Groebner => "groebner",
            BettiMethod::Product => "product",
            BettiMethod::Recursion => "recursion",
            BettiMethod::LinearAlgebra => "linalg",
        }
    }
}

/// Graded ranks `b_0..b_{2n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub n: usize,
    pub ranks: Vec<u64>,
    pub method: BettiMethod,
}

impl BettiTable {
    pub fn is_palindromic(&self) -> bool {
        self.ranks.iter().eq(self.ranks.iter().rev())
    }

    pub fn total(&self) -> u64 {
        self.ranks.iter().sum()
    }

    fn from_hilbert(n: usize, h: &HilbertFunction, method: BettiMethod) -> Self {
        BettiTable {
            n,
            ranks: (0..=2 * n).map(|d| h.rank(d) as u64).collect(),
            method,
        }
    }
}

/// Coefficients of `P_ij(T) = T^2 + linear T + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeelPolynomial {
    pub linear: ZPoly,
    pub constant: ZPoly,
}

pub struct PresentedRing {
    n: usize,
    surface: SurfaceData,
    vars: Arc<GeneratorSet>,
    ideal: Vec<ZPoly>,
    rational: OnceLock<Arc<GroebnerBasis<RationalField>>>,
    modular: Mutex<HashMap<u64, Arc<OnceLock<Arc<GroebnerBasis<PrimeField>>>>>>,
}

impl std::fmt::Debug for PresentedRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PresentedRing")
            .field("surface", &self.surface.name)
            .field("n", &self.n)
            .field("generators", &self.vars.len())
            .field("relations", &self.ideal.len())
            .finish()
    }
}

/// Integer polynomial builders over the generator set of `F[S, n]`.
struct Classes<'a> {
    surface: &'a SurfaceData,
    vars: &'a Arc<GeneratorSet>,
}

impl Classes<'_> {
    fn gen(&self, g: Generator) -> ZPoly {
        let pos = self.vars.position(&g).expect("generator in set");
        Polynomial::var(IntegerRing, self.vars.clone(), pos)
    }

    fn divisor(&self, i: usize, j: usize) -> ZPoly {
        self.gen(Generator::Divisor { i, j })
    }

    fn d(&self, slot: usize, a: usize) -> ZPoly {
        self.gen(Generator::Surface { slot, a })
    }

    fn pt(&self, slot: usize) -> ZPoly {
        self.gen(Generator::Point { slot })
    }

    fn int(&self, c: i64) -> ZPoly {
        Polynomial::integer(self.vars.clone(), c)
    }

    fn zero(&self) -> ZPoly {
        Polynomial::zero(IntegerRing, self.vars.clone())
    }

    fn kunneth_diagonal(&self, i: usize, j: usize) -> ZPoly {
        let inv = self.surface.inverse_intersection();
        let mut acc = self.pt(i).add(&self.pt(j)).unwrap();
        for a in 0..self.surface.k {
            for b in 0..self.surface.k {
                if inv[a][b] == 0 {
                    continue;
                }
                let term = self
                    .d(i, a + 1)
                    .mul(&self.d(j, b + 1))
                    .unwrap()
                    .mul(&self.int(inv[a][b]))
                    .unwrap();
                acc = acc.add(&term).unwrap();
            }
        }
        acc
    }

    fn keel_polynomial(&self, i: usize, j: usize) -> KeelPolynomial {
        let mut linear = self.zero();
        for (a, &k) in self.surface.canonical.iter().enumerate() {
            if k != 0 {
                let t = self.d(j, a + 1).mul(&self.int(-k)).unwrap();
                linear = linear.add(&t).unwrap();
            }
        }
        let mut constant = self.kunneth_diagonal(i, j);
        for m in 1..i {
            linear = linear.sub(&self.divisor(m, j)).unwrap();
            let corr = self.divisor(m, i).mul(&self.divisor(m, j)).unwrap();
            constant = constant.sub(&corr).unwrap();
        }
        KeelPolynomial { linear, constant }
    }
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<(), PresentationError> {
    if i == 0 || i >= j || j > n {
        return Err(PresentationError::BadSlots { i, j, n });
    }
    Ok(())
}

/// Class of the diagonal between slots `i < j` of `S^n`.
pub fn kunneth_diagonal(
    surface: &SurfaceData,
    n: usize,
    i: usize,
    j: usize,
) -> Result<ZPoly, PresentationError> {
    check_pair(n, i, j)?;
    let vars = Arc::new(GeneratorSet::for_blowups(n, surface.k));
    Ok(Classes { surface, vars: &vars }.kunneth_diagonal(i, j))
}

/// The quadratic blowup polynomial `P_ij` for the divisor `D(i,j)`.
pub fn keel_polynomial(
    surface: &SurfaceData,
    n: usize,
    i: usize,
    j: usize,
) -> Result<KeelPolynomial, PresentationError> {
    check_pair(n, i, j)?;
    let vars = Arc::new(GeneratorSet::for_blowups(n, surface.k));
    Ok(Classes { surface, vars: &vars }.keel_polynomial(i, j))
}

/// Pairs `(i, j)` with `i < j <= n`, ordered lexicographically by `(j, i)`.
pub fn slot_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (2..=n).flat_map(|j| (1..j).map(move |i| (i, j)))
}

/// Coefficients of `prod_{i<n} (q^2 + (k+i) q + 1)`, constant term first.
pub fn betti_product(surface: &SurfaceData, n: usize) -> BettiTable {
    let mut coeffs = vec![1u64];
    for i in 0..n {
        let factor = [1, surface.k as u64 + i as u64, 1];
        let mut next = vec![0u64; coeffs.len() + 2];
        for (a, &x) in coeffs.iter().enumerate() {
            for (b, &y) in factor.iter().enumerate() {
                next[a + b] += x * y;
            }
        }
        coeffs = next;
    }
    BettiTable {
        n,
        ranks: coeffs,
        method: BettiMethod::Product,
    }
}

/// `b_{m+1,j} = b_{m,j} + (m+k) b_{m,j-1} + b_{m,j-2}` from `b_0 = (1)`.
pub fn betti_recursion(surface: &SurfaceData, n: usize) -> BettiTable {
    let k = surface.k as u64;
    let mut b = vec![1u64];
    for m in 0..n as u64 {
        let at = |v: &Vec<u64>, j: i64| if j < 0 { 0 } else { v.get(j as usize).copied().unwrap_or(0) };
        b = (0..b.len() as i64 + 2)
            .map(|j| at(&b, j) + (m + k) * at(&b, j - 1) + at(&b, j - 2))
            .collect();
    }
    BettiTable {
        n,
        ranks: b,
        method: BettiMethod::Recursion,
    }
}

impl PresentedRing {
    pub fn build(surface: &SurfaceData, n: usize) -> Self {
        let vars = Arc::new(GeneratorSet::for_blowups(n, surface.k));
        let c = Classes { surface, vars: &vars };
        let k = surface.k;
        let mut ideal = Vec::new();
        for i in 1..=n {
            for a in 1..=k {
                for b in a..=k {
                    let m_ab = surface.intersection[a - 1][b - 1];
                    let rel = c
                        .d(i, a)
                        .mul(&c.d(i, b))
                        .unwrap()
                        .sub(&c.pt(i).mul(&c.int(m_ab)).unwrap())
                        .unwrap();
                    ideal.push(rel);
                }
            }
            for a in 1..=k {
                ideal.push(c.pt(i).mul(&c.d(i, a)).unwrap());
            }
            ideal.push(c.pt(i).pow(2));
        }
        for (i, j) in slot_pairs(n) {
            let dij = c.divisor(i, j);
            for a in 1..=k {
                ideal.push(dij.mul(&c.d(i, a).sub(&c.d(j, a)).unwrap()).unwrap());
            }
            ideal.push(dij.mul(&c.pt(i).sub(&c.pt(j)).unwrap()).unwrap());
            for m in 1..i {
                let diff = c.divisor(m, i).sub(&c.divisor(m, j)).unwrap();
                ideal.push(dij.mul(&diff).unwrap());
            }
            // P(-D) = D^2 - c1 D + c0
            let keel = c.keel_polynomial(i, j);
            let rel = dij
                .pow(2)
                .sub(&keel.linear.mul(&dij).unwrap())
                .unwrap()
                .add(&keel.constant)
                .unwrap();
            ideal.push(rel);
        }
        ideal.retain(|p| !p.is_zero());
        PresentedRing {
            n,
            surface: surface.clone(),
            vars,
            ideal,
            rational: OnceLock::new(),
            modular: Mutex::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn surface(&self) -> &SurfaceData {
        &self.surface
    }

    pub fn vars(&self) -> &Arc<GeneratorSet> {
        &self.vars
    }

    pub fn ideal(&self) -> &[ZPoly] {
        &self.ideal
    }

    pub fn top_degree(&self) -> u32 {
        2 * self.n as u32
    }

    fn classes(&self) -> Classes<'_> {
        Classes {
            surface: &self.surface,
            vars: &self.vars,
        }
    }

    pub fn divisor(&self, i: usize, j: usize) -> ZPoly {
        self.classes().divisor(i, j)
    }

    pub fn d(&self, slot: usize, a: usize) -> ZPoly {
        self.classes().d(slot, a)
    }

    pub fn pt(&self, slot: usize) -> ZPoly {
        self.classes().pt(slot)
    }

    pub fn parse(&self, expr: &str) -> Result<ZPoly, crate::poly::ParseError> {
        crate::poly::parse(expr, &self.vars)
    }

    /// Reduced Gröbner basis over QQ, computed at most once.
    pub fn groebner_rational(&self) -> Arc<GroebnerBasis<RationalField>> {
        self.rational
            .get_or_init(|| {
                let gens: Vec<_> = self.ideal.iter().map(ZPoly::to_rational).collect();
                Arc::new(self.compute_basis(RationalField, gens))
            })
            .clone()
    }

    /// Reduced Gröbner basis over ZZ/p, computed at most once per prime.
    pub fn groebner_mod(&self, p: u64) -> Result<Arc<GroebnerBasis<PrimeField>>, PresentationError> {
        let field = PrimeField::new(p).ok_or(PresentationError::NotPrime(p))?;
        let cell = {
            let mut map = self.modular.lock().expect("basis cache poisoned");
            map.entry(p).or_default().clone()
        };
        Ok(cell
            .get_or_init(|| {
                let gens: Vec<_> = self
                    .ideal
                    .iter()
                    .map(|g| g.reduce_mod(field))
                    .filter(|g| !g.is_zero())
                    .collect();
                Arc::new(self.compute_basis(field, gens))
            })
            .clone())
    }

    fn compute_basis<F: crate::poly::Field>(&self, field: F, gens: Vec<Polynomial<F>>) -> GroebnerBasis<F> {
        if gens.is_empty() {
            return GroebnerBasis::zero_ideal(field, self.vars.clone(), MonomialOrder::DegRevLex);
        }
        buchberger(&gens, MonomialOrder::DegRevLex).expect("presentation ideal is homogeneous")
    }

    pub fn hilbert_rational(&self, max_degree: usize) -> HilbertFunction {
        self.groebner_rational().hilbert_function(max_degree)
    }

    pub fn hilbert_mod(&self, p: u64, max_degree: usize) -> Result<HilbertFunction, PresentationError> {
        Ok(self.groebner_mod(p)?.hilbert_function(max_degree))
    }

    pub fn betti_groebner(&self) -> BettiTable {
        BettiTable::from_hilbert(self.n, &self.hilbert_rational(2 * self.n), BettiMethod::Groebner)
    }

    /// Ranks by per-degree row reduction over QQ, bypassing Gröbner bases.
    pub fn betti_linear_algebra(&self, cap: usize) -> Result<BettiTable, PresentationError> {
        let gens: Vec<_> = self.ideal.iter().map(ZPoly::to_rational).collect();
        let ranks = (0..=2 * self.n as u32)
            .map(|d| hilbert_linear_algebra(&gens, &self.vars, d, cap).map(|r| r as u64))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BettiTable {
            n: self.n,
            ranks,
            method: BettiMethod::LinearAlgebra,
        })
    }

    pub fn normal_form(&self, p: &ZPoly) -> Polynomial<RationalField> {
        self.groebner_rational().normal_form(&p.to_rational())
    }

    pub fn contains(&self, p: &ZPoly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// `pt(1) * ... * pt(n)`, the pullback of the point class of `S^n`.
    pub fn fundamental_point(&self) -> ZPoly {
        (1..=self.n).fold(Polynomial::integer(self.vars.clone(), 1), |acc, i| {
            acc.mul(&self.pt(i)).unwrap()
        })
    }

    /// Degree of a top-dimensional class as an exact rational, normalized so
    /// that `pt(1) * ... * pt(n)` has degree one.
    pub fn degree_rational(&self, p: &ZPoly) -> Result<BigRational, PresentationError> {
        let top = self.top_degree();
        match p.homogeneity() {
            Homogeneity::Zero => return Ok(BigRational::zero()),
            Homogeneity::Homogeneous(d) if d == top => {}
            _ => return Err(PresentationError::WrongDegree { expected: top }),
        }
        let gb = self.groebner_rational();
        let standard = gb.standard_monomials(top);
        if standard.len() != 1 {
            return Err(PresentationError::TopNotRankOne {
                rank: standard.len(),
            });
        }
        let basis_monomial = &standard[0];
        let reference = gb
            .normal_form(&self.fundamental_point().to_rational())
            .coefficient(basis_monomial);
        if reference.is_zero() {
            return Err(PresentationError::TopNotRankOne { rank: 0 });
        }
        let value = gb.normal_form(&p.to_rational()).coefficient(basis_monomial);
        Ok(value / reference)
    }

    pub fn degree(&self, p: &ZPoly) -> Result<BigInt, PresentationError> {
        let value = self.degree_rational(p)?;
        if !value.is_integer() {
            return Err(PresentationError::NonIntegral {
                value: value.to_string(),
            });
        }
        Ok(value.to_integer())
    }

    pub fn kunneth_diagonal(&self, i: usize, j: usize) -> Result<ZPoly, PresentationError> {
        check_pair(self.n, i, j)?;
        Ok(self.classes().kunneth_diagonal(i, j))
    }

    pub fn keel_polynomial(&self, i: usize, j: usize) -> Result<KeelPolynomial, PresentationError> {
        check_pair(self.n, i, j)?;
        Ok(self.classes().keel_polynomial(i, j))
    }

    /// Classes that must vanish in the ring, with labels: the diagonal
    /// relations `D(i,j) (d(i,a) - d(j,a))`, the triple relations
    /// `D(j,k) (D(i,j) - D(i,k))`, cubes of degree-one slot classes, and
    /// `P_ij(-D(i,j))`.
    pub fn relation_classes(&self) -> Vec<(String, ZPoly)> {
        let c = self.classes();
        let k = self.surface.k;
        let mut out = Vec::new();
        for i in 1..=self.n {
            for a in 1..=k {
                for b in a..=k {
                    for e in b..=k {
                        let cube = c.d(i, a).mul(&c.d(i, b)).unwrap().mul(&c.d(i, e)).unwrap();
                        out.push((format!("cube d{i}_{a}*d{i}_{b}*d{i}_{e}"), cube));
                    }
                }
            }
        }
        for (i, j) in slot_pairs(self.n) {
            let dij = c.divisor(i, j);
            for a in 1..=k {
                let rel = dij.mul(&c.d(i, a).sub(&c.d(j, a)).unwrap()).unwrap();
                out.push((format!("D{i}_{j}*(d{i}_{a}-d{j}_{a})"), rel));
            }
            let keel = c.keel_polynomial(i, j);
            let p = dij
                .pow(2)
                .sub(&keel.linear.mul(&dij).unwrap())
                .unwrap()
                .add(&keel.constant)
                .unwrap();
            out.push((format!("P{i}_{j}(-D{i}_{j})"), p));
        }
        for kk in 3..=self.n {
            for j in 2..kk {
                for i in 1..j {
                    let rel = c
                        .divisor(j, kk)
                        .mul(&c.divisor(i, j).sub(&c.divisor(i, kk)).unwrap())
                        .unwrap();
                    out.push((format!("D{j}_{kk}*(D{i}_{j}-D{i}_{kk})"), rel));
                }
            }
        }
        out
    }

    /// Generator names with degrees, in variable order.
    pub fn generator_list(&self) -> Vec<(String, u32)> {
        (0..self.vars.len())
            .map(|p| (self.vars.name(p), self.vars.weights()[p]))
            .collect()
    }

    /// One relation per line in the canonical syntax.
    pub fn dump_relations(&self) -> Vec<String> {
        self.ideal.iter().map(ToString::to_string).collect()
    }
}

#[allow(dead_code)]
fn _assert_sync() {
    fn is<T: Send + Sync>() {}
    is::<PresentedRing>();
}
