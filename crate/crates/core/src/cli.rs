//! Command-line front end.
//!
//! Every subcommand produces a list of records. In text mode each record is
//! one line; with `--format json-lines` each is one JSON object carrying a
//! `kind` field.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::pointcount::{self, CountError, CountMode, DEFAULT_BUDGET};
use crate::poly::{prime_power, Polynomial, RationalField};
use crate::presentation::{self, BettiMethod, BettiTable, PresentedRing};
use crate::surface::SurfaceData;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_PRIMES: [u64; 5] = [2, 3, 5, 7, 101];

#[derive(Parser, Debug)]
#[command(
    name = "blowupchow",
    version,
    about = "Chow rings of moduli spaces of iterated blowups of rational surfaces"
)]
pub struct CliConfig {
    /// Surface: p2, p1xp1, fa:<a> or file:<path>, optionally followed by +blowups:<m>
    #[arg(long, global = true, default_value = "p2")]
    pub surface: String,

    /// Number of blowups
    #[arg(short = 'n', global = true)]
    pub n: Option<usize>,

    /// Field size for point counts, a prime power
    #[arg(short = 'q', global = true)]
    pub q: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Maximum number of enumerated tuples, also the cap on linear-algebra slice size
    #[arg(long, global = true, env = "BLOWUPCHOW_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,

    /// Primes for the mod-p Hilbert comparison
    #[arg(long, global = true, value_delimiter = ',', default_values_t = DEFAULT_PRIMES)]
    pub modp_primes: Vec<u64>,

    /// Seed for the randomized normal-form checks in `verify`
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the generators and the defining relations
    Present,
    /// Graded ranks b_0..b_2n
    Betti {
        #[arg(long, value_enum, default_value_t = MethodArg::Groebner)]
        method: MethodArg,
    },
    /// Degree of a top-dimensional class
    Degree {
        #[arg(long)]
        monomial: String,
    },
    /// Count F_q-points by enumeration and compare with the product formula
    Count {
        /// Restrict to the divisor D(i,j); repeat to intersect
        #[arg(long, value_parser = parse_pair)]
        divisor: Vec<(usize, usize)>,
    },
    /// Run every consistency check
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Groebner,
    Product,
    Recursion,
    Linalg,
    All,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (i, j) = s
        .split_once(',')
        .ok_or_else(|| format!("expected i,j but got {s:?}"))?;
    let i = i.trim().parse().map_err(|_| format!("bad index {i:?}"))?;
    let j = j.trim().parse().map_err(|_| format!("bad index {j:?}"))?;
    Ok((i, j))
}

struct Record {
    text: String,
    json: Value,
}

fn record(text: impl Into<String>, json: Value) -> Record {
    Record {
        text: text.into(),
        json,
    }
}

struct Outcome {
    records: Vec<Record>,
    code: i32,
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    execute(&cfg, out, err)
}

pub fn execute(cfg: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cfg.command {
        Command::Present => cmd_present(cfg),
        Command::Betti { method } => cmd_betti(cfg, *method),
        Command::Degree { monomial } => cmd_degree(cfg, monomial),
        Command::Count { divisor } => cmd_count(cfg, divisor),
        Command::Verify => cmd_verify(cfg),
    };
    match result {
        Ok(outcome) => {
            for r in &outcome.records {
                let line = match cfg.format {
                    Format::Text => r.text.clone(),
                    Format::JsonLines => r.json.to_string(),
                };
                if writeln!(out, "{line}").is_err() {
                    return EXIT_FAILURE;
                }
            }
            outcome.code
        }
        Err(UsageError(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}

/// Entry point for the binary.
pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn load_surface(cfg: &CliConfig) -> Result<SurfaceData, UsageError> {
    Ok(SurfaceData::from_selector(&cfg.surface)?)
}

fn require_n(cfg: &CliConfig) -> Result<usize, UsageError> {
    cfg.n.ok_or_else(|| UsageError("-n is required".into()))
}

fn check_q(q: u64) -> Result<u64, UsageError> {
    if q < 2 || prime_power(q).is_none() {
        return Err(UsageError(format!("q = {q} is not a prime power >= 2")));
    }
    Ok(q)
}

fn check_budget(cfg: &CliConfig) -> Result<(), UsageError> {
    if cfg.budget == 0 {
        return Err(UsageError("budget must be positive".into()));
    }
    Ok(())
}

/// Total rank `prod (k + 2 + i)`, or None when it does not fit in a u64.
fn total_rank(surface: &SurfaceData, n: usize) -> Option<u64> {
    let mut total: u64 = 1;
    for i in 0..n as u64 {
        total = total.checked_mul(surface.k as u64 + 2 + i)?;
    }
    Some(total)
}

/// Presentations get built only when their quotient is small enough that
/// Gröbner bases are feasible: total rank at most `budget / 1000`.
fn check_algebra_size(cfg: &CliConfig, surface: &SurfaceData, n: usize) -> Result<(), UsageError> {
    let limit = (cfg.budget / 1000).max(1);
    match total_rank(surface, n) {
        Some(t) if t <= limit => Ok(()),
        _ => Err(UsageError(format!(
            "n = {n} exceeds the algebra budget (total rank must be at most {limit})"
        ))),
    }
}

fn ranks_text(ranks: &[u64]) -> String {
    let cells: Vec<String> = ranks.iter().map(u64::to_string).collect();
    format!("({})", cells.join(","))
}

fn cmd_present(cfg: &CliConfig) -> Result<Outcome, UsageError> {
    let surface = load_surface(cfg)?;
    let n = require_n(cfg)?;
    check_budget(cfg)?;
    check_algebra_size(cfg, &surface, n)?;
    let ring = PresentedRing::build(&surface, n);
    let gens = ring.generator_list();
    let rels = ring.dump_relations();
    let mut records = vec![record(
        format!("surface {} n {} k {}", surface.name, n, surface.k),
        json!({"kind": "surface", "name": surface.name, "n": n, "k": surface.k,
               "experimental": surface.experimental}),
    )];
    records.push(record(
        format!("generators {}", gens.len()),
        json!({"kind": "generators", "count": gens.len()}),
    ));
    for (name, degree) in &gens {
        records.push(record(
            format!("{name} {degree}"),
            json!({"kind": "generator", "name": name, "degree": degree}),
        ));
    }
    records.push(record(
        format!("relations {}", rels.len()),
        json!({"kind": "relations", "count": rels.len()}),
    ));
    for rel in rels {
        records.push(record(rel.clone(), json!({"kind": "relation", "relation": rel})));
    }
    Ok(Outcome {
        records,
        code: EXIT_OK,
    })
}

fn betti_record(table: &BettiTable) -> Record {
    record(
        format!("{} {}", table.method.name(), ranks_text(&table.ranks)),
        json!({"kind": "betti", "method": table.method.name(), "n": table.n,
               "ranks": table.ranks}),
    )
}

fn cmd_betti(cfg: &CliConfig, method: MethodArg) -> Result<Outcome, UsageError> {
    let surface = load_surface(cfg)?;
    let n = require_n(cfg)?;
    check_budget(cfg)?;
    if total_rank(&surface, n).is_none() {
        return Err(UsageError(format!("n = {n} overflows the rank table")));
    }
    let methods: Vec<BettiMethod> = match method {
        MethodArg::Groebner => vec![BettiMethod::Groebner],
        MethodArg::Product => vec![BettiMethod::Product],
        MethodArg::Recursion => vec![BettiMethod::Recursion],
        MethodArg::Linalg => vec![BettiMethod::LinearAlgebra],
        MethodArg::All => vec![
            BettiMethod::Groebner,
            BettiMethod::Product,
            BettiMethod::Recursion,
            BettiMethod::LinearAlgebra,
        ],
    };
    let mut records = Vec::new();
    let mut tables = Vec::new();
    let mut code = EXIT_OK;
    let mut ring = None;
    for m in methods {
        let table = match m {
            BettiMethod::Product => Ok(presentation::betti_product(&surface, n)),
            BettiMethod::Recursion => Ok(presentation::betti_recursion(&surface, n)),
            BettiMethod::Groebner | BettiMethod::LinearAlgebra => {
                if let Err(UsageError(message)) = check_algebra_size(cfg, &surface, n) {
                    Err(message)
                } else {
                    let ring = ring.get_or_insert_with(|| PresentedRing::build(&surface, n));
                    if m == BettiMethod::Groebner {
                        Ok(ring.betti_groebner())
                    } else {
                        let cap = usize::try_from(cfg.budget).unwrap_or(usize::MAX);
                        ring.betti_linear_algebra(cap).map_err(|e| e.to_string())
                    }
                }
            }
        };
        match table {
            Ok(t) => {
                records.push(betti_record(&t));
                tables.push(t);
            }
            Err(message) => {
                records.push(record(
                    format!("{} SKIPPED {message}", m.name()),
                    json!({"kind": "betti-skipped", "method": m.name(), "reason": message}),
                ));
                code = EXIT_FAILURE;
            }
        }
    }
    if method == MethodArg::All {
        let agree = code == EXIT_OK && tables.windows(2).all(|w| w[0].ranks == w[1].ranks);
        let verdict = if agree { "AGREE" } else { "DISAGREE" };
        records.push(record(verdict, json!({"kind": "verdict", "agree": agree})));
        if !agree {
            code = EXIT_FAILURE;
        }
    }
    Ok(Outcome { records, code })
}

fn cmd_degree(cfg: &CliConfig, expr: &str) -> Result<Outcome, UsageError> {
    let surface = load_surface(cfg)?;
    let n = require_n(cfg)?;
    check_budget(cfg)?;
    check_algebra_size(cfg, &surface, n)?;
    let ring = PresentedRing::build(&surface, n);
    let class = ring.parse(expr)?;
    let value = ring.degree(&class)?;
    Ok(Outcome {
        records: vec![record(
            value.to_string(),
            json!({"kind": "degree", "monomial": expr, "degree": value.to_string()}),
        )],
        code: EXIT_OK,
    })
}

fn cmd_count(cfg: &CliConfig, divisors: &[(usize, usize)]) -> Result<Outcome, UsageError> {
    let surface = load_surface(cfg)?;
    let n = require_n(cfg)?;
    let q = check_q(cfg.q.ok_or_else(|| UsageError("-q is required".into()))?)?;
    check_budget(cfg)?;
    for &(i, j) in divisors {
        if i == 0 || i >= j || j > n {
            return Err(UsageError(format!("invalid divisor ({i}, {j}) for n = {n}")));
        }
    }
    let formula = pointcount::point_count_formula(&surface, n, q);
    let mut records = Vec::new();
    let mut code = EXIT_OK;
    if divisors.is_empty() {
        match pointcount::count_points(&surface, n, q, &[], CountMode::None, cfg.budget) {
            Ok(count) => {
                let ok = count as u128 == formula;
                let status = if ok { "MATCH" } else { "MISMATCH" };
                if !ok {
                    code = EXIT_FAILURE;
                }
                records.push(record(
                    format!("total {n} {q} {count} {formula} {status}"),
                    json!({"kind": "total", "n": n, "q": q, "count": count,
                           "formula": formula.to_string(), "status": status}),
                ));
            }
            Err(CountError::BudgetExceeded { .. }) => records.push(record(
                format!("total {n} {q} - {formula} SKIPPED-BRUTE"),
                json!({"kind": "total", "n": n, "q": q, "count": null,
                       "formula": formula.to_string(), "status": "SKIPPED-BRUTE"}),
            )),
            Err(e) => return Err(UsageError(e.to_string())),
        }
        return Ok(Outcome { records, code });
    }
    let mut queries: Vec<(String, Vec<(usize, usize)>)> = divisors
        .iter()
        .map(|&(i, j)| (format!("divisor {i} {j}"), vec![(i, j)]))
        .collect();
    if divisors.len() > 1 {
        let names: Vec<String> = divisors.iter().map(|(i, j)| format!("D{i}_{j}")).collect();
        queries.push((format!("intersection {}", names.join(" ")), divisors.to_vec()));
    }
    for (label, set) in queries {
        let pairs: Vec<[usize; 2]> = set.iter().map(|&(i, j)| [i, j]).collect();
        match pointcount::count_points(&surface, n, q, &set, CountMode::All, cfg.budget) {
            Ok(count) => records.push(record(
                format!("{label} {count}"),
                json!({"kind": "divisor", "n": n, "q": q, "divisors": pairs, "count": count}),
            )),
            Err(CountError::BudgetExceeded { .. }) => records.push(record(
                format!("{label} - SKIPPED-BRUTE"),
                json!({"kind": "divisor", "n": n, "q": q, "divisors": pairs, "count": null,
                       "status": "SKIPPED-BRUTE"}),
            )),
            Err(e) => return Err(UsageError(e.to_string())),
        }
    }
    Ok(Outcome { records, code })
}

/// Collects PASS/FAIL/SKIP lines for `verify`.
struct Checks {
    records: Vec<Record>,
    failed: usize,
}

impl Checks {
    fn push(&mut self, status: &str, label: &str, detail: String) {
        if status == "FAIL" {
            self.failed += 1;
        }
        self.records.push(record(
            format!("{status} {label}: {detail}"),
            json!({"kind": "check", "status": status, "check": label, "detail": detail}),
        ));
    }

    fn check(&mut self, ok: bool, label: &str, detail: String) {
        self.push(if ok { "PASS" } else { "FAIL" }, label, detail);
    }
}

/// Reference degrees of top classes of `F[S, n]`, `n >= 1`, as
/// `(expression, value)`. For `n >= 2` these are products of classes on
/// slots 1 and 2 with `pt(3)..pt(n)`, whose degrees come from the
/// self-intersection formula for the exceptional divisor of the blown-up
/// diagonal of `S x S`.
pub fn golden_degrees(surface: &SurfaceData, n: usize) -> Vec<(String, i64)> {
    let k = surface.k;
    let name = |slot: usize, a: usize| {
        if k == 1 {
            format!("H{slot}")
        } else {
            format!("d{slot}_{a}")
        }
    };
    let basis = |a: usize| {
        let mut v = vec![0; k];
        v[a] = 1;
        v
    };
    let canonical = &surface.canonical;
    let k2 = surface.pairing(canonical, canonical);
    let mut out = Vec::new();
    if n == 1 {
        for a in 0..k {
            for b in a..k {
                let expr = format!("{}*{}", name(1, a + 1), name(1, b + 1));
                out.push((expr, surface.intersection[a][b]));
            }
        }
        out.push(("pt1".to_string(), 1));
        return out;
    }
    if n == 0 {
        return out;
    }
    let tail: String = (3..=n).map(|m| format!("*pt{m}")).collect();
    out.push((format!("pt1*pt2{tail}"), 1));
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                for e in 0..k {
                    let expr = format!(
                        "{}*{}*{}*{}{tail}",
                        name(1, a + 1),
                        name(1, b + 1),
                        name(2, c + 1),
                        name(2, e + 1)
                    );
                    out.push((expr, surface.intersection[a][b] * surface.intersection[c][e]));
                }
            }
        }
    }
    for a in 0..k {
        for b in 0..k {
            let expr = format!("D1_2^2*{}*{}{tail}", name(1, a + 1), name(2, b + 1));
            out.push((expr, -surface.intersection[a][b]));
        }
    }
    for a in 0..k {
        let kd = surface.pairing(canonical, &basis(a));
        out.push((format!("D1_2^3*{}{tail}", name(1, a + 1)), kd));
        out.push((format!("D1_2^3*{}{tail}", name(2, a + 1)), kd));
    }
    out.push((format!("D1_2^2*pt1{tail}"), -1));
    out.push((format!("D1_2^2*pt2{tail}"), -1));
    out.push((format!("D1_2^4{tail}"), surface.euler - k2));
    out
}

fn random_class(
    rng: &mut ChaCha8Rng,
    ring: &PresentedRing,
    degree: u32,
) -> Polynomial<crate::poly::IntegerRing> {
    let vars = ring.vars();
    let monomials = vars.monomials_of_degree(degree);
    let mut p = Polynomial::integer(vars.clone(), 0);
    if monomials.is_empty() {
        return p;
    }
    for _ in 0..4 {
        let m = monomials[rng.gen_range(0..monomials.len())].clone();
        let c: i64 = rng.gen_range(-3..=3);
        let term = Polynomial::monomial(crate::poly::IntegerRing, vars.clone(), m, c.into());
        p = p.add(&term).unwrap();
    }
    p
}

fn verify_presentation(cfg: &CliConfig, surface: &SurfaceData, n: usize, checks: &mut Checks) {
    let tag = format!("n={n}");
    if let Err(UsageError(message)) = check_algebra_size(cfg, surface, n) {
        checks.push("SKIP", &format!("presentation {tag}"), message);
        return;
    }
    let ring = PresentedRing::build(surface, n);
    checks.check(
        true,
        &format!("build {tag}"),
        format!("{} generators, {} relations", ring.vars().len(), ring.ideal().len()),
    );

    let groebner = ring.betti_groebner();
    let gb = ring.groebner_rational();
    checks.check(
        gb.satisfies_buchberger_criterion() && gb.is_reduced(),
        &format!("buchberger {tag}"),
        format!("{} basis elements", gb.len()),
    );
    let product = presentation::betti_product(surface, n);
    let recursion = presentation::betti_recursion(surface, n);
    for other in [&product, &recursion] {
        checks.check(
            groebner.ranks == other.ranks,
            &format!("hilbert groebner=={} {tag}", other.method.name()),
            format!("{} vs {}", ranks_text(&groebner.ranks), ranks_text(&other.ranks)),
        );
    }
    let cap = usize::try_from(cfg.budget).unwrap_or(usize::MAX);
    match ring.betti_linear_algebra(cap) {
        Ok(linalg) => checks.check(
            groebner.ranks == linalg.ranks,
            &format!("hilbert groebner==linalg {tag}"),
            format!("{} vs {}", ranks_text(&groebner.ranks), ranks_text(&linalg.ranks)),
        ),
        Err(e) => checks.push("SKIP", &format!("hilbert groebner==linalg {tag}"), e.to_string()),
    }
    let full = ring.hilbert_rational(2 * n + 2);
    checks.check(
        full.rank(2 * n + 1) == 0 && full.rank(2 * n + 2) == 0,
        &format!("hilbert vanishes above {} {tag}", 2 * n),
        format!("ranks {} {}", full.rank(2 * n + 1), full.rank(2 * n + 2)),
    );
    for &p in &cfg.modp_primes {
        match ring.hilbert_mod(p, 2 * n + 2) {
            Ok(h) => checks.check(
                h.ranks == full.ranks,
                &format!("hilbert mod {p} {tag}"),
                format!("{:?} vs {:?}", h.trimmed(), full.trimmed()),
            ),
            Err(e) => checks.check(false, &format!("hilbert mod {p} {tag}"), e.to_string()),
        }
    }

    let relations = ring.relation_classes();
    let failing: Vec<&str> = relations
        .iter()
        .filter(|(_, r)| !ring.contains(r))
        .map(|(label, _)| label.as_str())
        .collect();
    checks.check(
        failing.is_empty(),
        &format!("relations vanish {tag}"),
        if failing.is_empty() {
            format!("{} of {}", relations.len(), relations.len())
        } else {
            format!("nonzero: {}", failing.join(", "))
        },
    );

    for (expr, expected) in golden_degrees(surface, n) {
        let got = ring
            .parse(&expr)
            .map_err(|e| e.to_string())
            .and_then(|c| ring.degree(&c).map_err(|e| e.to_string()));
        match got {
            Ok(v) => checks.check(
                v == expected.into(),
                &format!("degree {expr} {tag}"),
                format!("{v} vs {expected}"),
            ),
            Err(e) => checks.check(false, &format!("degree {expr} {tag}"), e),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bad = 0;
    let trials = 16;
    for _ in 0..trials {
        let da = rng.gen_range(0..=n as u32);
        let db = rng.gen_range(0..=n as u32);
        let a = random_class(&mut rng, &ring, da);
        let b = random_class(&mut rng, &ring, db);
        let direct = ring.normal_form(&a.mul(&b).unwrap());
        let na: Polynomial<RationalField> = ring.normal_form(&a);
        let nb = ring.normal_form(&b);
        if direct != gb.normal_form(&na.mul(&nb).unwrap()) {
            bad += 1;
        }
        if da + db == 2 * n as u32 {
            let lhs = ring.degree_rational(&a.mul(&b).unwrap()).ok();
            let rhs = ring.degree_rational(&b.mul(&a).unwrap()).ok();
            if lhs.is_none() || lhs != rhs {
                bad += 1;
            }
        }
    }
    checks.check(
        bad == 0,
        &format!("normal form multiplicative {tag}"),
        format!("{trials} random pairs, seed {}, {bad} failures", cfg.seed),
    );
}

fn verify_counts(cfg: &CliConfig, surface: &SurfaceData, n: usize, q: u64, checks: &mut Checks) {
    match pointcount::verify_counts(surface, n, q, cfg.budget) {
        Ok(report) => {
            for (label, ok, detail) in report.entries() {
                checks.check(ok, &format!("count {label}"), detail);
            }
        }
        Err(CountError::BudgetExceeded { formula, budget }) => checks.push(
            "SKIP",
            &format!("count total n={n} q={q}"),
            format!("formula {formula} exceeds budget {budget}"),
        ),
        Err(e) => checks.check(false, &format!("count n={n} q={q}"), e.to_string()),
    }
}

fn cmd_verify(cfg: &CliConfig) -> Result<Outcome, UsageError> {
    let surface = load_surface(cfg)?;
    check_budget(cfg)?;
    for &p in &cfg.modp_primes {
        if !crate::poly::is_prime(p) {
            return Err(UsageError(format!("{p} is not a prime")));
        }
    }
    let ns: Vec<usize> = match cfg.n {
        Some(n) => vec![n],
        None => vec![1, 2, 3],
    };
    let qs: Vec<u64> = match cfg.q {
        Some(q) => vec![check_q(q)?],
        None => vec![2, 3],
    };
    let mut checks = Checks {
        records: Vec::new(),
        failed: 0,
    };
    checks.records.push(record(
        format!("surface {} k {}", surface.name, surface.k),
        json!({"kind": "surface", "name": surface.name, "k": surface.k,
               "experimental": surface.experimental}),
    ));
    for &n in &ns {
        verify_presentation(cfg, &surface, n, &mut checks);
    }
    for &n in &ns {
        for &q in &qs {
            verify_counts(cfg, &surface, n, q, &mut checks);
        }
    }
    let failed = checks.failed;
    let summary = if failed == 0 {
        "all PASS".to_string()
    } else {
        format!("{failed} FAIL")
    };
    checks
        .records
        .push(record(summary, json!({"kind": "summary", "failed": failed})));
    Ok(Outcome {
        records: checks.records,
        code: if failed == 0 { EXIT_OK } else { EXIT_FAILURE },
    })
}
