//! Lattice data of a rational surface: the intersection form on the
//! degree-one classes and the canonical class, which together determine the
//! Chow ring of the surface and of its powers.
//!
//! # File format
//!
//! Plain text, one keyword per line, `#` starts a comment:
//!
//! ```text
//! name p1xp1
//! k 2
//! M 0 1
//!   1 0
//! K -2 -2
//! ```
//!
//! `M` is followed by `k*k` integers in row-major order, which may continue on
//! the following lines. `euler <int>` may be given and must equal `k + 2`.
//!
//! Hirzebruch surfaces `fa:<a>` use the basis (section `C` with `C^2 = -a`,
//! fiber `f`), so `M = [[-a, 1], [1, 0]]` and `K = (-2, -(a+2))`.

use std::fmt::Write as _;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("intersection matrix is not symmetric")]
    NotSymmetric,
    #[error("intersection matrix has determinant {det}, expected +1 or -1")]
    NotUnimodular { det: i64 },
    #[error("euler characteristic {euler} does not equal k + 2 = {expected}")]
    EulerMismatch { euler: i64, expected: i64 },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("unknown surface selector `{0}`")]
    UnknownSelector(String),
    #[error("cannot read surface file {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceData {
    pub name: String,
    /// Rank of the degree-one part of the Chow ring.
    pub k: usize,
    /// `intersection[a][b]` is the degree of `d_a * d_b`.
    pub intersection: Vec<Vec<i64>>,
    /// Canonical class in the `d` basis.
    pub canonical: Vec<i64>,
    pub euler: i64,
    /// Set for lattices that did not come from a built-in preset.
    pub experimental: bool,
}

impl SurfaceData {
    pub fn p2() -> Self {
        Self::preset("p2", vec![vec![1]], vec![-3])
    }

    pub fn p1xp1() -> Self {
        Self::preset("p1xp1", vec![vec![0, 1], vec![1, 0]], vec![-2, -2])
    }

    /// The Hirzebruch surface `F_a`.
    pub fn hirzebruch(a: u32) -> Self {
        let a = a as i64;
        Self::preset(
            &format!("fa:{a}"),
            vec![vec![-a, 1], vec![1, 0]],
            vec![-2, -(a + 2)],
        )
    }

    fn preset(name: &str, intersection: Vec<Vec<i64>>, canonical: Vec<i64>) -> Self {
        let k = canonical.len();
        SurfaceData {
            name: name.to_string(),
            k,
            intersection,
            canonical,
            euler: k as i64 + 2,
            experimental: false,
        }
    }

    /// The blowup at `m` further points: each new exceptional class `e`
    /// has `e^2 = -1`, is orthogonal to everything else, and adds `+e` to `K`.
    pub fn blown_up(&self, m: usize) -> Self {
        let k = self.k + m;
        let mut intersection = vec![vec![0; k]; k];
        for (a, row) in self.intersection.iter().enumerate() {
            intersection[a][..self.k].copy_from_slice(row);
        }
        for e in self.k..k {
            intersection[e][e] = -1;
        }
        let mut canonical = self.canonical.clone();
        canonical.extend(std::iter::repeat(1).take(m));
        SurfaceData {
            name: if m == 0 {
                self.name.clone()
            } else {
                format!("{}+blowups:{m}", self.name)
            },
            k,
            intersection,
            canonical,
            euler: k as i64 + 2,
            experimental: self.experimental,
        }
    }

    /// Resolves `p2 | p1xp1 | fa:<a> | file:<path>`, optionally followed by
    /// `+blowups:<m>`.
    pub fn from_selector(selector: &str) -> Result<Self, SurfaceError> {
        let (base, blowups) = match selector.split_once("+blowups:") {
            Some((base, m)) => {
                let m: usize = m
                    .parse()
                    .map_err(|_| SurfaceError::UnknownSelector(selector.to_string()))?;
                (base, m)
            }
            None => (selector, 0),
        };
        let surface = match base {
            "p2" => Self::p2(),
            "p1xp1" => Self::p1xp1(),
            _ => {
                if let Some(a) = base.strip_prefix("fa:") {
                    let a: u32 = a
                        .parse()
                        .map_err(|_| SurfaceError::UnknownSelector(selector.to_string()))?;
                    Self::hirzebruch(a)
                } else if let Some(path) = base.strip_prefix("file:") {
                    Self::read_file(Path::new(path))?
                } else {
                    return Err(SurfaceError::UnknownSelector(selector.to_string()));
                }
            }
        };
        Ok(surface.blown_up(blowups))
    }

    pub fn read_file(path: &Path) -> Result<Self, SurfaceError> {
        let content = std::fs::read_to_string(path).map_err(|e| SurfaceError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&content)
    }

    /// Parses the line-oriented file format and validates the lattice.
    pub fn parse(content: &str) -> Result<Self, SurfaceError> {
        let mut name = None;
        let mut k: Option<usize> = None;
        let mut matrix: Option<Vec<i64>> = None;
        let mut canonical: Option<Vec<i64>> = None;
        let mut euler: Option<i64> = None;
        let mut pending_matrix = false;

        let malformed = |line: usize, message: &str| SurfaceError::Malformed {
            line,
            message: message.to_string(),
        };
        let ints = |line: usize, tokens: &[&str]| -> Result<Vec<i64>, SurfaceError> {
            tokens
                .iter()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| malformed(line, &format!("expected integer, got `{t}`")))
                })
                .collect()
        };

        for (idx, raw) in content.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let keyword = tokens[0];
            let is_keyword = matches!(keyword, "name" | "k" | "M" | "K" | "euler");
            if !is_keyword {
                if !pending_matrix {
                    return Err(malformed(line_no, &format!("unknown keyword `{keyword}`")));
                }
                let m = matrix.as_mut().expect("matrix started");
                m.extend(ints(line_no, &tokens)?);
                continue;
            }
            if let Some(m) = &matrix {
                if pending_matrix && k.is_some_and(|k| m.len() < k * k) {
                    return Err(malformed(line_no, "matrix M has too few entries"));
                }
            }
            pending_matrix = false;
            match keyword {
                "name" => name = Some(tokens[1..].join(" ")),
                "k" => {
                    let v = ints(line_no, &tokens[1..])?;
                    match v.as_slice() {
                        [v] if *v > 0 => k = Some(*v as usize),
                        _ => return Err(malformed(line_no, "k takes one positive integer")),
                    }
                }
                "M" => {
                    if matrix.is_some() {
                        return Err(malformed(line_no, "duplicate M"));
                    }
                    matrix = Some(ints(line_no, &tokens[1..])?);
                    pending_matrix = true;
                }
                "K" => canonical = Some(ints(line_no, &tokens[1..])?),
                "euler" => {
                    let v = ints(line_no, &tokens[1..])?;
                    match v.as_slice() {
                        [v] => euler = Some(*v),
                        _ => return Err(malformed(line_no, "euler takes one integer")),
                    }
                }
                _ => unreachable!(),
            }
        }

        let last = content.lines().count();
        let k = k.ok_or_else(|| malformed(last, "missing `k`"))?;
        let entries = matrix.ok_or_else(|| malformed(last, "missing `M`"))?;
        if entries.len() != k * k {
            return Err(malformed(
                last,
                &format!("M needs {} entries, found {}", k * k, entries.len()),
            ));
        }
        let canonical = canonical.ok_or_else(|| malformed(last, "missing `K`"))?;
        if canonical.len() != k {
            return Err(malformed(last, &format!("K needs {k} entries")));
        }
        let intersection: Vec<Vec<i64>> = entries.chunks(k).map(<[i64]>::to_vec).collect();
        let expected = k as i64 + 2;
        if let Some(euler) = euler {
            if euler != expected {
                return Err(SurfaceError::EulerMismatch { euler, expected });
            }
        }
        let surface = SurfaceData {
            name: name.unwrap_or_else(|| "custom".to_string()),
            k,
            intersection,
            canonical,
            euler: expected,
            experimental: true,
        };
        surface.validate()?;
        Ok(surface)
    }

    pub fn validate(&self) -> Result<(), SurfaceError> {
        let m = &self.intersection;
        if m.len() != self.k || m.iter().any(|row| row.len() != self.k) {
            return Err(SurfaceError::Malformed {
                line: 0,
                message: "intersection matrix has wrong shape".into(),
            });
        }
        for a in 0..self.k {
            for b in 0..a {
                if m[a][b] != m[b][a] {
                    return Err(SurfaceError::NotSymmetric);
                }
            }
        }
        let det = self.determinant();
        if det.abs() != 1 {
            return Err(SurfaceError::NotUnimodular { det });
        }
        if self.euler != self.k as i64 + 2 {
            return Err(SurfaceError::EulerMismatch {
                euler: self.euler,
                expected: self.k as i64 + 2,
            });
        }
        Ok(())
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "name {}", self.name).unwrap();
        writeln!(out, "k {}", self.k).unwrap();
        for (a, row) in self.intersection.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            let lead = if a == 0 { "M" } else { " " };
            writeln!(out, "{lead} {}", cells.join(" ")).unwrap();
        }
        let cells: Vec<String> = self.canonical.iter().map(i64::to_string).collect();
        writeln!(out, "K {}", cells.join(" ")).unwrap();
        out
    }

    /// Coefficients of `r(q) = q^2 + k q + 1`, constant term first.
    pub fn r_polynomial(&self) -> [u64; 3] {
        [1, self.k as u64, 1]
    }

    /// Value of `r(q)`, the number of rational points over `F_q`.
    pub fn r_value(&self, q: u64) -> u64 {
        q * q + self.k as u64 * q + 1
    }

    /// Intersection pairing of two degree-one classes given in the `d` basis.
    pub fn pairing(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut total = 0;
        for a in 0..self.k {
            for b in 0..self.k {
                total += x[a] * self.intersection[a][b] * y[b];
            }
        }
        total
    }

    pub fn determinant(&self) -> i64 {
        let mut m = self.rational_matrix();
        let k = self.k;
        let mut det = BigRational::one();
        for col in 0..k {
            let Some(pivot) = (col..k).find(|&r| !m[r][col].is_zero()) else {
                return 0;
            };
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            det *= m[col][col].clone();
            for r in col + 1..k {
                let factor = &m[r][col] / &m[col][col];
                for c in col..k {
                    let sub = &factor * &m[col][c];
                    m[r][c] -= sub;
                }
            }
        }
        det.to_integer().to_i64().expect("determinant fits in i64")
    }

    /// Inverse of the intersection matrix; integral because it is unimodular.
    pub fn inverse_intersection(&self) -> Vec<Vec<i64>> {
        let k = self.k;
        let mut m = self.rational_matrix();
        let mut inv: Vec<Vec<BigRational>> = (0..k)
            .map(|r| {
                (0..k)
                    .map(|c| if r == c { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        for col in 0..k {
            let pivot = (col..k)
                .find(|&r| !m[r][col].is_zero())
                .expect("unimodular matrix is invertible");
            m.swap(pivot, col);
            inv.swap(pivot, col);
            let p = m[col][col].clone();
            for c in 0..k {
                m[col][c] /= p.clone();
                inv[col][c] /= p.clone();
            }
            for r in 0..k {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone();
                for c in 0..k {
                    let a = &factor * &m[col][c];
                    m[r][c] -= a;
                    let b = &factor * &inv[col][c];
                    inv[r][c] -= b;
                }
            }
        }
        inv.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| {
                        assert!(x.is_integer(), "inverse of unimodular matrix is integral");
                        x.to_integer().to_i64().expect("fits in i64")
                    })
                    .collect()
            })
            .collect()
    }

    fn rational_matrix(&self) -> Vec<Vec<BigRational>> {
        self.intersection
            .iter()
            .map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect()
    }
}
