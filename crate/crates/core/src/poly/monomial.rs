use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

/// A ring generator of the presented Chow ring. Slots are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Divisor class `D{i}_{j}` with `i < j`.
    Divisor { i: usize, j: usize },
    /// Pullback `d{slot}_{a}` of the `a`-th degree-one class of the surface.
    Surface { slot: usize, a: usize },
    /// Pullback `pt{slot}` of the point class.
    Point { slot: usize },
}

impl Generator {
    /// Codimension grading.
    pub fn degree(&self) -> u32 {
        match self {
            Generator::Divisor { .. } | Generator::Surface { .. } => 1,
            Generator::Point { .. } => 2,
        }
    }
}

/// An ordered list of generators. Position 0 is the largest variable.
///
/// The monomial orders compare exponent vectors position by position, so the
/// order of this list is the variable order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
    weights: Vec<u32>,
    index: HashMap<Generator, usize>,
    h_alias: bool,
}

impl GeneratorSet {
    /// Arbitrary order; duplicates are rejected.
    pub fn new(gens: Vec<Generator>) -> Option<Self> {
        let mut index = HashMap::with_capacity(gens.len());
        for (pos, g) in gens.iter().enumerate() {
            if let Generator::Divisor { i, j } = g {
                if i >= j || *i == 0 {
                    return None;
                }
            }
            if index.insert(*g, pos).is_some() {
                return None;
            }
        }
        let weights = gens.iter().map(Generator::degree).collect();
        Some(GeneratorSet {
            gens,
            weights,
            index,
            h_alias: false,
        })
    }

    /// Enables the `H{i}` alias when every surface class has index 1.
    pub fn with_h_alias(mut self) -> Self {
        self.h_alias = self
            .gens
            .iter()
            .all(|g| !matches!(g, Generator::Surface { a, .. } if *a != 1));
        self
    }

    /// The generators of `A*(F[S,n])` for a surface of Picard rank `k`, in the
    /// fixed variable order:
    ///
    /// 1. `D(i,j)` descending by `(j, i)`, so `D2_3 > D1_3 > D1_2`;
    /// 2. `d(i,a)` ascending by `(i, a)`, so `d1_1 > d1_2 > d2_1`;
    /// 3. `pt(i)` ascending by `i`, so `pt1 > pt2`.
    ///
    /// For `k = 1` the classes `d{i}_1` print as `H{i}`.
    pub fn for_blowups(n: usize, k: usize) -> Self {
        let mut gens = Vec::with_capacity(n * (n.saturating_sub(1)) / 2 + n * k + n);
        for j in (1..=n).rev() {
            for i in (1..j).rev() {
                gens.push(Generator::Divisor { i, j });
            }
        }
        for slot in 1..=n {
            for a in 1..=k {
                gens.push(Generator::Surface { slot, a });
            }
        }
        for slot in 1..=n {
            gens.push(Generator::Point { slot });
        }
        let mut set = GeneratorSet::new(gens).expect("distinct generators");
        set.h_alias = k == 1;
        set
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn position(&self, g: &Generator) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Whether `H{i}` is accepted and printed for `d{i}_1`.
    pub fn h_alias(&self) -> bool {
        self.h_alias
    }

    pub fn name(&self, pos: usize) -> String {
        match self.gens[pos] {
            Generator::Divisor { i, j } => format!("D{i}_{j}"),
            Generator::Surface { slot, a } if self.h_alias && a == 1 => format!("H{slot}"),
            Generator::Surface { slot, a } => format!("d{slot}_{a}"),
            Generator::Point { slot } => format!("pt{slot}"),
        }
    }

    pub fn monomial(&self, exps: &[u16]) -> Monomial {
        assert_eq!(exps.len(), self.len(), "exponent vector length");
        Monomial::new(exps.iter().copied().collect(), &self.weights)
    }

    pub fn one(&self) -> Monomial {
        Monomial::new(SmallVec::from_elem(0, self.len()), &self.weights)
    }

    pub fn variable(&self, pos: usize) -> Monomial {
        let mut exps: SmallVec<[u16; 16]> = SmallVec::from_elem(0, self.len());
        exps[pos] = 1;
        Monomial::new(exps, &self.weights)
    }

    /// All monomials of weighted degree exactly `degree`, in descending
    /// degrevlex order.
    pub fn monomials_of_degree(&self, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps: SmallVec<[u16; 16]> = SmallVec::from_elem(0, self.len());
        self.fill_monomials(0, degree, &mut exps, &mut out);
        out.sort_by(|a, b| MonomialOrder::DegRevLex.compare(b, a));
        out
    }

    fn fill_monomials(
        &self,
        pos: usize,
        remaining: u32,
        exps: &mut SmallVec<[u16; 16]>,
        out: &mut Vec<Monomial>,
    ) {
        if pos == self.len() {
            if remaining == 0 {
                out.push(Monomial::new(exps.clone(), &self.weights));
            }
            return;
        }
        let w = self.weights[pos];
        let mut e = 0u32;
        while e * w <= remaining {
            exps[pos] = e as u16;
            self.fill_monomials(pos + 1, remaining - e * w, exps, out);
            e += 1;
        }
        exps[pos] = 0;
    }
}

/// Exponent vector with its cached weighted degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u16; 16]>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: SmallVec<[u16; 16]>, weights: &[u32]) -> Self {
        debug_assert_eq!(exps.len(), weights.len());
        let degree = exps
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u32 * w)
            .sum();
        Monomial { exps, degree }
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
            degree: other.degree - self.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial, weights: &[u32]) -> Monomial {
        Monomial::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
            weights,
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Highest variable position with a nonzero exponent.
    pub fn last_variable(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{:?}", self.exps.as_slice())
    }
}

/// Graded monomial orders. Both compare weighted degree first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    DegLex,
}

impl MonomialOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        a.degree.cmp(&b.degree).then_with(|| match self {
            MonomialOrder::DegLex => a.exps.cmp(&b.exps),
            MonomialOrder::DegRevLex => {
                for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_vars() -> GeneratorSet {
        // H1 > H2
        GeneratorSet::new(vec![
            Generator::Surface { slot: 1, a: 1 },
            Generator::Surface { slot: 2, a: 1 },
        ])
        .unwrap()
    }

    #[test]
    fn degrevlex_basic() {
        let g = two_vars();
        let h1sq = g.monomial(&[2, 0]);
        let h1h2 = g.monomial(&[1, 1]);
        assert_eq!(MonomialOrder::DegRevLex.compare(&h1sq, &h1h2), Ordering::Greater);
        let h1 = g.monomial(&[1, 0]);
        for order in [MonomialOrder::DegRevLex, MonomialOrder::DegLex] {
            assert_eq!(order.compare(&h1, &h1sq), Ordering::Less);
        }
    }

    #[test]
    fn point_class_tie_break_is_fixed() {
        let g = GeneratorSet::for_blowups(2, 1);
        let pt1 = g.variable(g.position(&Generator::Point { slot: 1 }).unwrap());
        let h1 = g.variable(g.position(&Generator::Surface { slot: 1, a: 1 }).unwrap());
        let h2 = g.variable(g.position(&Generator::Surface { slot: 2, a: 1 }).unwrap());
        let h1h2 = h1.mul(&h2);
        assert_eq!(pt1.degree(), 2);
        assert_eq!(h1h2.degree(), 2);
        // pt1 is a later variable than H1, H2, so it loses the revlex tie-break.
        let ord = MonomialOrder::DegRevLex.compare(&pt1, &h1h2);
        assert_eq!(ord, Ordering::Less);
        assert_eq!(ord, MonomialOrder::DegRevLex.compare(&pt1, &h1h2));
        assert_eq!(MonomialOrder::DegRevLex.compare(&h1h2, &pt1), Ordering::Greater);
    }

    #[test]
    fn documented_variable_order() {
        let g = GeneratorSet::for_blowups(3, 2);
        let names: Vec<_> = (0..g.len()).map(|p| g.name(p)).collect();
        assert_eq!(
            names,
            [
                "D2_3", "D1_3", "D1_2", "d1_1", "d1_2", "d2_1", "d2_2", "d3_1", "d3_2", "pt1",
                "pt2", "pt3"
            ]
        );
        assert_eq!(GeneratorSet::for_blowups(3, 2).len(), 3 * 2 + 3 + 3);
        let p2 = GeneratorSet::for_blowups(2, 1);
        assert_eq!(p2.name(1), "H1");
    }

    #[test]
    fn monomial_enumeration_counts() {
        let g = GeneratorSet::for_blowups(2, 1);
        // 3 degree-one and 2 degree-two variables
        assert_eq!(g.monomials_of_degree(0).len(), 1);
        assert_eq!(g.monomials_of_degree(1).len(), 3);
        assert_eq!(g.monomials_of_degree(2).len(), 6 + 2);
        let ms = g.monomials_of_degree(3);
        for w in ms.windows(2) {
            assert_eq!(MonomialOrder::DegRevLex.compare(&w[0], &w[1]), Ordering::Greater);
        }
    }

    #[test]
    fn divisibility_and_lcm() {
        let g = two_vars();
        let a = g.monomial(&[2, 1]);
        let b = g.monomial(&[1, 3]);
        let l = a.lcm(&b, g.weights());
        assert_eq!(l.exponents(), &[2, 3]);
        assert!(a.divides(&l) && b.divides(&l));
        assert_eq!(a.quotient_of(&l).unwrap().exponents(), &[0, 2]);
        assert!(b.quotient_of(&a).is_none());
        assert!(!a.is_coprime(&b));
        assert!(g.monomial(&[1, 0]).is_coprime(&g.monomial(&[0, 4])));
    }
}
