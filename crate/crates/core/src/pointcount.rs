//! Brute-force enumeration of the `F_q`-points of the moduli space.
//!
//! A point of `F[n]` over `F_q` is a tuple `(p_1, ..., p_n)` with `p_m` a
//! rational point of the surface `S_m`, the blowup of `S_1` at
//! `p_1, ..., p_{m-1}`. Points are abstract tokens: the `r(q)` base points of
//! `S_1`, and for each stage `m` the `q + 1` points of the exceptional line
//! created by blowing up `p_m`. A token is present on `S_m` when it was
//! created before stage `m` and was not itself blown up.
//!
//! The model assumes `|S_1(F_q)| = r(q)`, i.e. a split Picard lattice.

use rayon::prelude::*;
use thiserror::Error;

use crate::surface::SurfaceData;

/// Default cap on the number of enumerated tuples.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("enumeration of {formula} tuples exceeds budget {budget}")]
    BudgetExceeded { formula: u128, budget: u64 },
    #[error("invalid divisor ({i}, {j}) for n = {n}")]
    BadDivisor { i: usize, j: usize, n: usize },
    #[error("invalid point tuple: {0}")]
    InvalidTuple(String),
    #[error("q = {0} must be at least 2")]
    BadQ(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointToken {
    /// One of the `r(q)` rational points of `S_1`.
    Base(u64),
    /// Point `slot` (in `0..=q`) of the line created by the `stage`-th blowup.
    Exceptional { stage: usize, slot: u64 },
}

/// A rational point of `F[n]`: the centers `p_1..p_n` of the tower.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointTuple {
    q: u64,
    points: Vec<PointToken>,
}

impl PointTuple {
    /// Validates that every `p_m` lives on `S_m`.
    pub fn new(surface: &SurfaceData, q: u64, points: Vec<PointToken>) -> Result<Self, CountError> {
        let r = surface.r_value(q);
        for (idx, p) in points.iter().enumerate() {
            let stage = idx + 1;
            match *p {
                PointToken::Base(b) if b >= r => {
                    return Err(CountError::InvalidTuple(format!("base point {b} >= r(q) = {r}")))
                }
                PointToken::Exceptional { stage: s, slot } if s == 0 || s >= stage || slot > q => {
                    return Err(CountError::InvalidTuple(format!(
                        "p_{stage} = E({s},{slot}) does not exist on S_{stage}"
                    )))
                }
                _ => {}
            }
            if points[..idx].contains(p) {
                return Err(CountError::InvalidTuple(format!(
                    "p_{stage} was already blown up"
                )));
            }
        }
        Ok(PointTuple { q, points })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PointToken] {
        &self.points
    }

    /// Center of the `stage`-th blowup.
    pub fn center(&self, stage: usize) -> PointToken {
        self.points[stage - 1]
    }

    /// Image of `token` on `S_target`.
    pub fn project(&self, token: PointToken, target: usize) -> PointToken {
        project_with(&self.points, token, target)
    }

    /// Whether the tuple lies on `D(i,j)`: `p_j` maps to `p_i` on `S_i`.
    pub fn in_divisor(&self, i: usize, j: usize) -> bool {
        assert!(i >= 1 && i < j && j <= self.points.len(), "bad divisor index");
        in_divisor_with(&self.points, i, j)
    }

    /// The image under the forgetful map `F[n] -> F[j]`.
    pub fn truncate(&self, j: usize) -> PointTuple {
        PointTuple {
            q: self.q,
            points: self.points[..j].to_vec(),
        }
    }
}

fn project_with(centers: &[PointToken], mut token: PointToken, target: usize) -> PointToken {
    while let PointToken::Exceptional { stage, .. } = token {
        if stage < target {
            break;
        }
        token = centers[stage - 1];
    }
    token
}

fn in_divisor_with(centers: &[PointToken], i: usize, j: usize) -> bool {
    project_with(centers, centers[j - 1], i) == centers[i - 1]
}

/// `prod_{i<n} (r(q) + i q)`.
pub fn point_count_formula(surface: &SurfaceData, n: usize, q: u64) -> u128 {
    let r = surface.r_value(q) as u128;
    (0..n as u128).map(|i| r + i * q as u128).product()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    /// Every tuple, constraints ignored.
    None,
    /// Tuples lying on every listed divisor.
    All,
    /// Tuples lying on exactly the listed divisors and no other.
    Exact,
}

/// Index of `D(i,j)` in the membership bit mask.
fn pair_bit(i: usize, j: usize) -> u32 {
    ((j - 1) * (j - 2) / 2 + (i - 1)) as u32
}

/// Depth-first enumerator over valid tuples with a fixed first entry.
struct Walker {
    n: usize,
    r: u64,
    q: u64,
    stack: Vec<PointToken>,
    masks: Vec<u64>,
}

impl Walker {
    fn new(n: usize, r: u64, q: u64) -> Self {
        Walker {
            n,
            r,
            q,
            stack: Vec::with_capacity(n),
            masks: Vec::with_capacity(n + 1),
        }
    }

    /// Tokens present on `S_stage` given the current prefix, in canonical
    /// order: base points by index, then exceptional points by (stage, slot).
    fn available(&self, stage: usize) -> impl Iterator<Item = PointToken> + '_ {
        let base = (0..self.r).map(PointToken::Base);
        let exc = (1..stage).flat_map(move |s| {
            (0..=self.q).map(move |slot| PointToken::Exceptional { stage: s, slot })
        });
        base.chain(exc).filter(move |t| !self.stack[..stage - 1].contains(t))
    }

    fn push(&mut self, token: PointToken) {
        self.stack.push(token);
        let j = self.stack.len();
        let mut mask = self.masks.last().copied().unwrap_or(0);
        for i in 1..j {
            if in_divisor_with(&self.stack, i, j) {
                mask |= 1 << pair_bit(i, j);
            }
        }
        self.masks.push(mask);
    }

    fn pop(&mut self) {
        self.stack.pop();
        self.masks.pop();
    }

    /// Calls `leaf` on every completion of the current prefix. `fiber` sees
    /// the number of choices for the last point of every length-`n-1` prefix.
    fn walk(&mut self, leaf: &mut dyn FnMut(&[PointToken], u64), fiber: &mut dyn FnMut(u64)) {
        let depth = self.stack.len();
        if depth == self.n {
            leaf(&self.stack, *self.masks.last().unwrap_or(&0));
            return;
        }
        let choices: Vec<PointToken> = self.available(depth + 1).collect();
        if depth + 1 == self.n {
            fiber(choices.len() as u64);
        }
        for t in choices {
            self.push(t);
            self.walk(leaf, fiber);
            self.pop();
        }
    }
}

fn check_budget(surface: &SurfaceData, n: usize, q: u64, budget: u64) -> Result<u128, CountError> {
    if q < 2 {
        return Err(CountError::BadQ(q));
    }
    let formula = point_count_formula(surface, n, q);
    if formula > budget as u128 {
        return Err(CountError::BudgetExceeded { formula, budget });
    }
    Ok(formula)
}

fn check_divisors(n: usize, divisors: &[(usize, usize)]) -> Result<u64, CountError> {
    if n > 11 {
        // 55 pairs is the most a u64 mask holds
        return Err(CountError::BadDivisor { i: 0, j: n, n });
    }
    let mut mask = 0u64;
    for &(i, j) in divisors {
        if i == 0 || i >= j || j > n {
            return Err(CountError::BadDivisor { i, j, n });
        }
        mask |= 1 << pair_bit(i, j);
    }
    Ok(mask)
}

/// Runs `leaf` over all tuples in parallel over the choice of `p_1` and folds
/// the per-branch results with `combine`.
fn par_fold<T: Send + Default>(
    surface: &SurfaceData,
    n: usize,
    q: u64,
    visit: impl Fn(&mut T, &[PointToken], u64) + Sync,
    on_fiber: impl Fn(&mut T, u64) + Sync,
    combine: impl Fn(T, T) -> T + Sync + Send,
) -> T {
    let r = surface.r_value(q);
    if n == 0 {
        let mut acc = T::default();
        visit(&mut acc, &[], 0);
        return acc;
    }
    (0..r)
        .into_par_iter()
        .map(|b| {
            let mut acc = T::default();
            let mut walker = Walker::new(n, r, q);
            if n == 1 {
                on_fiber(&mut acc, r);
            }
            walker.push(PointToken::Base(b));
            let cell = std::cell::RefCell::new(&mut acc);
            walker.walk(
                &mut |tuple, mask| visit(&mut cell.borrow_mut(), tuple, mask),
                &mut |size| on_fiber(&mut cell.borrow_mut(), size),
            );
            acc
        })
        .reduce(T::default, combine)
}

/// Number of `F_q`-points of `F[n]`, optionally restricted to divisors.
pub fn count_points(
    surface: &SurfaceData,
    n: usize,
    q: u64,
    divisors: &[(usize, usize)],
    mode: CountMode,
    budget: u64,
) -> Result<u64, CountError> {
    check_budget(surface, n, q, budget)?;
    let required = check_divisors(n, divisors)?;
    let count = par_fold(
        surface,
        n,
        q,
        |acc: &mut u64, _, mask| {
            let hit = match mode {
                CountMode::None => true,
                CountMode::All => mask & required == required,
                CountMode::Exact => mask == required,
            };
            *acc += hit as u64;
        },
        |_, _| {},
        |a, b| a + b,
    );
    Ok(count)
}

/// Every valid tuple, in canonical order. Intended for small sizes.
pub fn enumerate_tuples(
    surface: &SurfaceData,
    n: usize,
    q: u64,
    budget: u64,
) -> Result<Vec<PointTuple>, CountError> {
    check_budget(surface, n, q, budget)?;
    let r = surface.r_value(q);
    let mut out = Vec::new();
    let mut walker = Walker::new(n, r, q);
    walker.walk(
        &mut |tuple, _| {
            out.push(PointTuple {
                q,
                points: tuple.to_vec(),
            })
        },
        &mut |_| {},
    );
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleCheck {
    pub triple: (usize, usize, usize),
    /// `|D_ij ∩ D_jk|`
    pub left: u64,
    /// `|D_ik ∩ D_jk|`
    pub right: u64,
    /// Tuples in exactly one of the two sets.
    pub mismatched: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub n: usize,
    pub q: u64,
    pub total: u64,
    pub formula: u128,
    pub divisor_counts: Vec<((usize, usize), u64)>,
    pub triples: Vec<TripleCheck>,
    pub expected_fiber: u64,
    /// Sizes of fibers that differ from `expected_fiber`, with multiplicity.
    pub bad_fibers: Vec<(u64, u64)>,
    pub fibers_seen: u64,
}

impl CountReport {
    pub fn total_matches(&self) -> bool {
        self.total as u128 == self.formula
    }

    pub fn triples_agree(&self) -> bool {
        self.triples.iter().all(|t| t.mismatched == 0)
    }

    pub fn fibers_uniform(&self) -> bool {
        self.bad_fibers.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.total_matches() && self.triples_agree() && self.fibers_uniform()
    }

    /// One entry per check, `(label, ok, detail)`.
    pub fn entries(&self) -> Vec<(String, bool, String)> {
        let mut out = vec![(
            format!("total n={} q={}", self.n, self.q),
            self.total_matches(),
            format!("brute {} formula {}", self.total, self.formula),
        )];
        out.push((
            format!("fibers n={} q={}", self.n, self.q),
            self.fibers_uniform(),
            format!(
                "{} fibers, expected size {}, deviating {:?}",
                self.fibers_seen, self.expected_fiber, self.bad_fibers
            ),
        ));
        for t in &self.triples {
            let (i, j, k) = t.triple;
            out.push((
                format!("D{i}_{j}*D{j}_{k} = D{i}_{k}*D{j}_{k} q={}", self.q),
                t.mismatched == 0,
                format!("{} vs {} points, {} mismatched", t.left, t.right, t.mismatched),
            ));
        }
        out
    }
}

#[derive(Default)]
struct Tally {
    total: u64,
    divisors: Vec<u64>,
    left: Vec<u64>,
    right: Vec<u64>,
    mismatched: Vec<u64>,
    fibers: std::collections::BTreeMap<u64, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        fn add(a: &mut Vec<u64>, b: Vec<u64>) {
            if a.len() < b.len() {
                a.resize(b.len(), 0);
            }
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self.total += other.total;
        add(&mut self.divisors, other.divisors);
        add(&mut self.left, other.left);
        add(&mut self.right, other.right);
        add(&mut self.mismatched, other.mismatched);
        for (k, v) in other.fibers {
            *self.fibers.entry(k).or_default() += v;
        }
        self
    }
}

/// Brute-force totals, divisor sizes, the triple set identity
/// `D_ij ∩ D_jk = D_ik ∩ D_jk`, and fiber sizes of `F[n] -> F[n-1]`.
pub fn verify_counts(
    surface: &SurfaceData,
    n: usize,
    q: u64,
    budget: u64,
) -> Result<CountReport, CountError> {
    let formula = check_budget(surface, n, q, budget)?;
    check_divisors(n, &[])?;
    let pairs: Vec<(usize, usize)> = crate::presentation::slot_pairs(n).collect();
    let triples: Vec<(usize, usize, usize)> = (3..=n)
        .flat_map(|k| (2..k).flat_map(move |j| (1..j).map(move |i| (i, j, k))))
        .collect();
    let bits: Vec<(u32, u32, u32)> = triples
        .iter()
        .map(|&(i, j, k)| (pair_bit(i, j), pair_bit(j, k), pair_bit(i, k)))
        .collect();
    let npairs = pairs.len();
    let ntriples = triples.len();
    let tally = par_fold(
        surface,
        n,
        q,
        |acc: &mut Tally, _, mask| {
            if acc.divisors.is_empty() {
                acc.divisors = vec![0; npairs];
                acc.left = vec![0; ntriples];
                acc.right = vec![0; ntriples];
                acc.mismatched = vec![0; ntriples];
            }
            acc.total += 1;
            for (idx, count) in acc.divisors.iter_mut().enumerate() {
                *count += (mask >> idx) & 1;
            }
            for (t, &(ij, jk, ik)) in bits.iter().enumerate() {
                let on = |b: u32| (mask >> b) & 1 == 1;
                let left = on(ij) && on(jk);
                let right = on(ik) && on(jk);
                acc.left[t] += left as u64;
                acc.right[t] += right as u64;
                acc.mismatched[t] += (left != right) as u64;
            }
        },
        |acc, size| *acc.fibers.entry(size).or_default() += 1,
        Tally::merge,
    );
    let expected_fiber = if n == 0 {
        1
    } else {
        surface.r_value(q) + (n as u64 - 1) * q
    };
    let fibers_seen = if n == 0 { 1 } else { tally.fibers.values().sum() };
    let bad_fibers = tally
        .fibers
        .iter()
        .filter(|(size, _)| **size != expected_fiber)
        .map(|(s, c)| (*s, *c))
        .collect();
    let get = |v: &Vec<u64>, idx: usize| v.get(idx).copied().unwrap_or(0);
    Ok(CountReport {
        n,
        q,
        total: tally.total,
        formula,
        divisor_counts: pairs
            .iter()
            .map(|&(i, j)| ((i, j), get(&tally.divisors, pair_bit(i, j) as usize)))
            .collect(),
        triples: triples
            .iter()
            .enumerate()
            .map(|(t, &triple)| TripleCheck {
                triple,
                left: get(&tally.left, t),
                right: get(&tally.right, t),
                mismatched: get(&tally.mismatched, t),
            })
            .collect(),
        expected_fiber,
        bad_fibers,
        fibers_seen,
    })
}
