//! The registered suites: one per property, each with a default space,
//! trial count and mode.

use itertools::Itertools;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::properties::Property;
use super::report::{Mode, SuiteReport};
use super::runner::{run, stream, Verdict};
use super::sample;
use super::space::{Filter, SearchSpace, DEFAULT_BUDGET};
use crate::analysis::{analyze_full_schmidt, analyze_vector_case, full_schmidt_target, sr2_rank_via_pencil};
use crate::bipartite::{family_rank, BipartiteMatrix, BipartiteShape};
use crate::canonical::gen_full_schmidt_canonical;
use crate::document::MatrixDocument;
use crate::error::{Error, Result};
use crate::linalg::{
    complete_columns, determinant, minimal_kernel_polynomial, nullspace, pencil_singular_directions, rank, rat,
    ExactMatrix,
};
use crate::Rational;

pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub trials: Option<u64>,
    /// `None` runs the suite's default mode.
    pub mode: Option<Mode>,
    pub shape: Option<BipartiteShape>,
    pub entries: Option<Vec<Rational>>,
    pub budget: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            trials: None,
            mode: None,
            shape: None,
            entries: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteInfo {
    pub name: &'static str,
    pub statement: &'static str,
    pub default_mode: Mode,
    pub default_trials: u64,
    pub supports_exhaustive: bool,
}

const fn info(name: &'static str, statement: &'static str, default_mode: Mode, default_trials: u64, exhaustive: bool) -> SuiteInfo {
    SuiteInfo {
        name,
        statement,
        default_mode,
        default_trials,
        supports_exhaustive: exhaustive,
    }
}

pub const SUITES: &[SuiteInfo] = &[
    info("inequality", "rank(M^Γ) ≤ Sr(M)·rank(M) for both partial transposes; saturation forces Sr ≤ min(m1·n2, m2·n1)", Mode::Exhaustive, 10_000, true),
    info("sr-invariance", "Sr(M) = Sr(M^ΓA) = Sr(M^ΓB) = Sr(Mᵀ)", Mode::Random, 1_000, true),
    info("sr3-strictness", "a 2×2-outer matrix of Schmidt rank 3 never saturates", Mode::Exhaustive, 10_000, true),
    info("vector-case", "for column-vector outer factors, saturation iff rank[S_1 … S_K] = K·rank[S_1; …; S_K]", Mode::Random, 1_000, true),
    info("pencil-root-bound", "a regular order-n pencil has at most n singular directions, counted with multiplicity", Mode::Exhaustive, 2_000, true),
    info("pencil-rank-sum", "rank(A⊗B + C⊗D) = Σ_j rank(a_j·B + c_j·D) for diagonal A, C", Mode::Random, 500, false),
    info("reduce-sr2", "the Sr-2 reduction witness reproduces its output and preserves rank, Sr and rank Γ_B", Mode::Random, 500, true),
    info("block-diagonal-gamma", "a block-diagonal matrix has the rank of its partial transposes", Mode::Random, 500, true),
    info("full-schmidt-canonical", "the canonical full-Schmidt grid has rank r, Sr m1·n1, rank Γ m1·n1·r, and is recognized through local disguises", Mode::Random, 54, false),
    info("local-equivalence", "local equivalence preserves rank, Sr and both partial-transpose ranks", Mode::Random, 1_000, true),
    info("block-rank-bounds", "r(A_1) ≤ r[A_1 … A_n] ≤ Σ r(A_i) and r(A) + r(C) ≤ r[A 0; B C]", Mode::Random, 500, false),
    info("right-multiplication", "right multiplication by an invertible matrix preserves independence and span membership", Mode::Random, 500, false),
    info("singular-span-columns", "if span{A, B} has no full-column-rank member, after a column change Q some s columns of AQ and BQ lie in an (s−1)-dimensional subspace", Mode::Random, 300, false),
    info("corner-block-rank", "rank A = rank A_1 iff R(A) = R[A_1; A_3] and R(A_3ᵀ) ⊆ R(A_1ᵀ)", Mode::Random, 500, false),
    info("direct-sum-rank", "rank[B C] = rank B + rank C iff R(B) ∩ R(C) = 0", Mode::Random, 500, false),
    info("product-gamma", "a Kronecker product A⊗B has the rank of its partial transposes", Mode::Random, 500, true),
    info("kron-rank", "rank(A⊗B) = rank(A)·rank(B)", Mode::Random, 500, false),
    info("2x2-sr2", "2×2-outer Sr-2 analyzer agrees with direct ranks and saturates only on the row or column pattern", Mode::Random, 500, true),
];

pub fn suite_info(name: &str) -> Option<&'static SuiteInfo> {
    SUITES.iter().find(|s| s.name == name)
}

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

fn doc(m: &BipartiteMatrix) -> Value {
    serde_json::to_value(MatrixDocument::from_matrix(m)).expect("document serializes")
}

/// Every matrix of `space`, skipping those its filter rejects.
pub fn exhaustive_check(space: &SearchSpace, property: Property, budget: u64) -> Result<SuiteReport> {
    let count = space.checked_size(budget)?;
    Ok(run(
        property.name(),
        property.statement(),
        Mode::Exhaustive,
        None,
        count,
        |i| space.instance(i),
        |m, i| {
            if !space.accepts(m) {
                return Verdict::Reject;
            }
            property.check(m, &mut stream(0, i))
        },
        doc,
    ))
}

/// `trials` samples from `space`. A Schmidt-rank filter `k` makes the
/// sampler draw sums of `k` random Kronecker products.
pub fn random_check(space: &SearchSpace, property: Property, trials: u64, seed: u64) -> Result<SuiteReport> {
    if trials == 0 {
        return Err(Error::InfeasibleParameters("trials must be at least 1".into()));
    }
    Ok(run(
        property.name(),
        property.statement(),
        Mode::Random,
        Some(seed),
        trials,
        |i| {
            let mut rng = stream(seed, i);
            match space.filter {
                Some(Filter::SchmidtRank(k)) => sample::schmidt_sum(&mut rng, space.shape, k, &space.entries),
                _ => sample::bipartite(&mut rng, space.shape, &space.entries),
            }
        },
        |m, i| {
            if !space.accepts(m) {
                return Verdict::Reject;
            }
            property.check(m, &mut stream(!seed, i))
        },
        doc,
    ))
}

/// Runs a registered suite.
pub fn lemma_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    let info = suite_info(name).ok_or_else(|| Error::UnknownSuite(name.to_string()))?;
    let mode = opts.mode.unwrap_or(info.default_mode);
    if mode == Mode::Exhaustive && !info.supports_exhaustive {
        return Err(Error::InfeasibleParameters(format!("suite `{name}` has no exhaustive mode")));
    }
    let trials = opts.trials.unwrap_or(info.default_trials);
    if mode == Mode::Random && trials == 0 {
        return Err(Error::InfeasibleParameters("trials must be at least 1".into()));
    }
    let ctx = Ctx { info, opts, trials };
    let mut report = match (name, mode) {
        ("pencil-root-bound", Mode::Exhaustive) => pencil_exhaustive(&ctx),
        ("pencil-root-bound", Mode::Random) => Ok(pencil_random(&ctx)),
        (_, Mode::Exhaustive) => matrix_exhaustive(&ctx),
        ("inequality", _) => Ok(ctx.matrix_random(Property::Inequality, |rng, s, e| {
            let shape = s.unwrap_or(BipartiteShape { m1: 2, n1: 2, m2: 3, n2: 3 });
            mixed(rng, shape, e)
        })),
        ("sr-invariance", _) => Ok(ctx.matrix_random_with(Property::SrInvariance, sample::small_rationals(), |rng, s, e| {
            let shape = s.unwrap_or_else(|| sample::shape_up_to(rng, 3));
            mixed(rng, shape, e)
        })),
        ("sr3-strictness", _) => Ok(ctx.matrix_random_with(Property::Sr3Strictness, sample::small_rationals(), |rng, s, e| {
            sr3_instance(rng, s.unwrap_or(BipartiteShape { m1: 2, n1: 2, m2: 2, n2: 2 }), e)
        })),
        ("vector-case", _) => Ok(vector_random(&ctx)),
        ("pencil-rank-sum", _) => Ok(pencil_rank_random(&ctx)),
        ("reduce-sr2", _) => Ok(ctx.matrix_random(Property::ReduceSr2, |rng, s, e| {
            let shape = s.unwrap_or_else(|| loop {
                let sh = sample::shape_up_to(rng, 3);
                if sh.m1 * sh.n1 >= 2 && sh.m2 * sh.n2 >= 2 {
                    break sh;
                }
            });
            schmidt_exact(rng, shape, 2, e)
        })),
        ("block-diagonal-gamma", _) => Ok(ctx.matrix_random(Property::BlockDiagonalGamma, block_diagonal_instance)),
        ("full-schmidt-canonical", _) => Ok(full_schmidt_random(&ctx)),
        ("local-equivalence", _) => Ok(ctx.matrix_random(Property::LocalEquivalence, |rng, s, e| {
            let shape = s.unwrap_or_else(|| sample::shape_up_to(rng, 3));
            mixed(rng, shape, e)
        })),
        ("block-rank-bounds", _) => Ok(block_rank_bounds(&ctx)),
        ("right-multiplication", _) => Ok(right_multiplication(&ctx)),
        ("singular-span-columns", _) => Ok(singular_span_columns(&ctx)),
        ("corner-block-rank", _) => Ok(corner_block_rank(&ctx)),
        ("direct-sum-rank", _) => Ok(direct_sum_rank(&ctx)),
        ("product-gamma", _) => Ok(ctx.matrix_random(Property::ProductGamma, |rng, s, e| {
            let shape = s.unwrap_or_else(|| sample::shape_up_to(rng, 3));
            product_instance(rng, shape, e)
        })),
        ("kron-rank", _) => Ok(kron_rank(&ctx)),
        ("2x2-sr2", _) => Ok(ctx.matrix_random(Property::TwoByTwoSr2, two_by_two_instance)),
        _ => Err(Error::UnknownSuite(name.to_string())),
    }?;
    report.suite = info.name.to_string();
    report.statement = info.statement.to_string();
    Ok(report)
}

struct Ctx<'a> {
    info: &'static SuiteInfo,
    opts: &'a SuiteOptions,
    trials: u64,
}

type Sampler = fn(&mut ChaCha8Rng, Option<BipartiteShape>, &[Rational]) -> BipartiteMatrix;

impl Ctx<'_> {
    fn entries_or(&self, default: Vec<Rational>) -> Vec<Rational> {
        self.opts.entries.clone().unwrap_or(default)
    }

    fn matrix_random(&self, property: Property, sampler: Sampler) -> SuiteReport {
        self.matrix_random_with(property, sample::small_integers(), sampler)
    }

    fn matrix_random_with(&self, property: Property, default_entries: Vec<Rational>, sampler: Sampler) -> SuiteReport {
        let entries = self.entries_or(default_entries);
        let seed = self.opts.seed;
        let shape = self.opts.shape;
        run(
            self.info.name,
            self.info.statement,
            Mode::Random,
            Some(seed),
            self.trials,
            |i| sampler(&mut stream(seed, i), shape, &entries),
            |m, i| property.check(m, &mut stream(!seed, i)),
            doc,
        )
    }

    /// Generic random run over a custom instance type.
    fn custom<T>(
        &self,
        make: impl Fn(&mut ChaCha8Rng) -> T + Sync,
        check: impl Fn(&T) -> Verdict + Sync,
        show: impl Fn(&T) -> Value + Sync,
    ) -> SuiteReport {
        let seed = self.opts.seed;
        run(
            self.info.name,
            self.info.statement,
            Mode::Random,
            Some(seed),
            self.trials,
            |i| make(&mut stream(seed, i)),
            |t, _| check(t),
            show,
        )
    }
}

fn matrix_exhaustive(ctx: &Ctx) -> Result<SuiteReport> {
    let two = |m2, n2| BipartiteShape { m1: 2, n1: 2, m2, n2 };
    let (property, default_shape, filter) = match ctx.info.name {
        "inequality" => (Property::Inequality, two(2, 2), None),
        "sr-invariance" => (Property::SrInvariance, BipartiteShape { m1: 2, n1: 1, m2: 2, n2: 1 }, None),
        "sr3-strictness" => (Property::Sr3Strictness, two(2, 2), Some(Filter::SchmidtRank(3))),
        "vector-case" => (Property::VectorCase, BipartiteShape { m1: 2, n1: 1, m2: 2, n2: 2 }, None),
        "reduce-sr2" => (Property::ReduceSr2, two(2, 2), Some(Filter::SchmidtRank(2))),
        "block-diagonal-gamma" => (Property::BlockDiagonalGamma, two(2, 2), None),
        "local-equivalence" => (Property::LocalEquivalence, BipartiteShape { m1: 1, n1: 2, m2: 2, n2: 2 }, None),
        "product-gamma" => (Property::ProductGamma, two(2, 2), Some(Filter::SchmidtRank(1))),
        "2x2-sr2" => (Property::TwoByTwoSr2, two(2, 2), Some(Filter::SchmidtRank(2))),
        other => return Err(Error::InfeasibleParameters(format!("suite `{other}` has no exhaustive mode"))),
    };
    let mut space = SearchSpace::new(ctx.opts.shape.unwrap_or(default_shape));
    if let Some(e) = &ctx.opts.entries {
        space = space.with_entries(e.clone());
    }
    if let Some(f) = filter {
        space = space.with_filter(f);
    }
    exhaustive_check(&space, property, ctx.opts.budget)
}

// ---- samplers -------------------------------------------------------------

fn mixed(rng: &mut ChaCha8Rng, shape: BipartiteShape, entries: &[Rational]) -> BipartiteMatrix {
    let max_terms = (shape.m1 * shape.n1).min(shape.m2 * shape.n2);
    let terms = rng.gen_range(1..=max_terms);
    match rng.gen_range(0..3) {
        0 => sample::bipartite(rng, shape, entries),
        1 => sample::sparse_schmidt_sum(rng, shape, terms, entries),
        _ => sample::schmidt_sum(rng, shape, terms, entries),
    }
}

/// A sum of `k` products, resampled until its Schmidt rank is exactly `k`
/// (the last draw is returned if that never happens).
fn schmidt_exact(rng: &mut ChaCha8Rng, shape: BipartiteShape, k: usize, entries: &[Rational]) -> BipartiteMatrix {
    let mut m = sample::sparse_schmidt_sum(rng, shape, k, entries);
    for attempt in 0..64 {
        if m.schmidt_rank() == k {
            break;
        }
        m = if attempt % 2 == 0 {
            sample::schmidt_sum(rng, shape, k, entries)
        } else {
            sample::sparse_schmidt_sum(rng, shape, k, entries)
        };
    }
    m
}

fn sr3_instance(rng: &mut ChaCha8Rng, shape: BipartiteShape, entries: &[Rational]) -> BipartiteMatrix {
    let (m2, n2) = (shape.m2, shape.n2);
    let inner = |rng: &mut ChaCha8Rng| {
        let r = rng.gen_range(1..=m2.min(n2));
        sample::low_rank(rng, m2, n2, r, entries)
    };
    let mut last = BipartiteMatrix::zeros(shape);
    for _ in 0..64 {
        let m = match rng.gen_range(0..4) {
            0 => sample::sparse_schmidt_sum(rng, shape, 3, entries),
            1 => sample::schmidt_sum(rng, shape, 3, entries),
            2 => {
                let (s1, s2, s3) = (inner(rng), inner(rng), inner(rng));
                BipartiteMatrix::from_blocks(shape, &[vec![s1, s2], vec![s3, ExactMatrix::zeros(m2, n2)]]).unwrap()
            }
            _ => {
                let (s1, s2, s3) = (inner(rng), inner(rng), inner(rng));
                BipartiteMatrix::from_blocks(shape, &[vec![s1, s2.clone()], vec![s2, s3]]).unwrap()
            }
        };
        let m = if rng.gen_bool(0.5) {
            m.apply_local(&sample::witness(rng, shape, entries)).unwrap()
        } else {
            m
        };
        if m.schmidt_rank() == 3 {
            return m;
        }
        last = m;
    }
    last
}

fn block_diagonal_instance(rng: &mut ChaCha8Rng, shape: Option<BipartiteShape>, entries: &[Rational]) -> BipartiteMatrix {
    let shape = shape.unwrap_or_else(|| {
        let k = rng.gen_range(1..=3);
        BipartiteShape::new(k, k, rng.gen_range(1..=3), rng.gen_range(1..=3)).unwrap()
    });
    let grid: Vec<Vec<ExactMatrix>> = (0..shape.m1)
        .map(|i| {
            (0..shape.n1)
                .map(|j| {
                    if i == j {
                        let r = rng.gen_range(0..=shape.m2.min(shape.n2));
                        sample::low_rank(rng, shape.m2, shape.n2, r, entries)
                    } else {
                        ExactMatrix::zeros(shape.m2, shape.n2)
                    }
                })
                .collect()
        })
        .collect();
    BipartiteMatrix::from_blocks(shape, &grid).unwrap()
}

fn product_instance(rng: &mut ChaCha8Rng, shape: BipartiteShape, entries: &[Rational]) -> BipartiteMatrix {
    let ra = rng.gen_range(0..=shape.m1.min(shape.n1));
    let rb = rng.gen_range(0..=shape.m2.min(shape.n2));
    let a = sample::low_rank(rng, shape.m1, shape.n1, ra, entries);
    let b = sample::low_rank(rng, shape.m2, shape.n2, rb, entries);
    BipartiteMatrix::new(shape, a.kron(&b)).unwrap()
}

fn two_by_two_instance(rng: &mut ChaCha8Rng, shape: Option<BipartiteShape>, entries: &[Rational]) -> BipartiteMatrix {
    let shape = shape.unwrap_or_else(|| BipartiteShape::new(2, 2, rng.gen_range(1..=3), rng.gen_range(1..=3)).unwrap());
    let (m2, n2) = (shape.m2, shape.n2);
    let e = |i, j| ExactMatrix::unit(2, 2, i, j);
    let inner = |rng: &mut ChaCha8Rng| {
        let r = rng.gen_range(1..=m2.min(n2));
        sample::low_rank(rng, m2, n2, r, entries)
    };
    let (r1, r2) = match rng.gen_range(0..5) {
        0 => (e(0, 0), e(1, 0)),
        1 => (e(0, 0), e(0, 1)),
        2 => (e(0, 0), e(1, 1)),
        3 => (ExactMatrix::identity(2), e(0, 1)),
        _ => (sample::matrix(rng, 2, 2, entries), sample::matrix(rng, 2, 2, entries)),
    };
    let m = BipartiteMatrix::from_terms(&[(r1, inner(rng)), (r2, inner(rng))]).unwrap();
    m.apply_local(&sample::witness(rng, shape, entries)).unwrap()
}

// ---- pencils --------------------------------------------------------------

#[derive(Clone, Debug)]
struct Pair {
    a: ExactMatrix,
    b: ExactMatrix,
}

fn show_pair(p: &Pair) -> Value {
    json!({ "A": p.a, "B": p.b })
}

/// Independent regularity test: `det(A + tB)` has degree ≤ n, so n + 1
/// zero samples mean it vanishes identically.
fn pencil_is_singular(a: &ExactMatrix, b: &ExactMatrix) -> bool {
    (0..=a.rows() as i64).all(|t| rank(&(a + &b.scale(&rat(t)))) < a.rows())
}

fn check_pencil(p: &Pair) -> Verdict {
    let n = p.a.rows();
    if pencil_is_singular(&p.a, &p.b) {
        return Verdict::Reject;
    }
    let roots = match pencil_singular_directions(&p.a, &p.b) {
        Ok(r) => r,
        Err(e) => return Verdict::Violation(format!("root finder failed: {e}")),
    };
    if !roots.regular {
        return Verdict::Violation("regular pencil reported singular".into());
    }
    let rational: usize = roots.directions.iter().map(|d| d.multiplicity).sum();
    if roots.count_with_multiplicity > n || rational + roots.irrational_degree != roots.count_with_multiplicity {
        return Verdict::Violation(format!(
            "{} roots with multiplicity for order {n} ({} rational, {} irrational)",
            roots.count_with_multiplicity, rational, roots.irrational_degree
        ));
    }
    for d in &roots.directions {
        if rank(&d.evaluate(&p.a, &p.b)) == n {
            return Verdict::Violation(format!("direction ({} : {}) is not rank-deficient", d.a, d.b));
        }
    }
    // every deficient small direction must be among the reported ones
    for (a, b) in (-3i64..=3).cartesian_product(-3i64..=3) {
        if (a, b) == (0, 0) {
            continue;
        }
        let m = &p.a.scale(&rat(a)) + &p.b.scale(&rat(b));
        let deficient = determinant(&m).map(|d| d == rat(0)).unwrap_or(false);
        let listed = roots.directions.iter().any(|d| d.matches(&a.into(), &b.into()));
        if deficient != listed {
            return Verdict::Violation(format!("direction ({a} : {b}) deficient = {deficient}, listed = {listed}"));
        }
    }
    Verdict::Pass
}

fn pencil_exhaustive(ctx: &Ctx) -> Result<SuiteReport> {
    let entries = ctx.entries_or(vec![rat(-1), rat(0), rat(1)]);
    let base = entries.len() as u128;
    let size = base.pow(8);
    if size > ctx.opts.budget as u128 {
        return Err(Error::BudgetExceeded {
            size,
            budget: ctx.opts.budget as u128,
        });
    }
    Ok(run(
        ctx.info.name,
        ctx.info.statement,
        Mode::Exhaustive,
        None,
        size as u64,
        |mut i| {
            let mut digits = [0usize; 8];
            for d in digits.iter_mut().rev() {
                *d = (i % base as u64) as usize;
                i /= base as u64;
            }
            let pick = |k: usize| entries[digits[k]].clone();
            Pair {
                a: ExactMatrix::from_fn(2, 2, |r, c| pick(r * 2 + c)),
                b: ExactMatrix::from_fn(2, 2, |r, c| pick(4 + r * 2 + c)),
            }
        },
        |p, _| check_pencil(p),
        show_pair,
    ))
}

fn pencil_random(ctx: &Ctx) -> SuiteReport {
    let entries = ctx.entries_or(sample::small_integers());
    ctx.custom(
        |rng| {
            let n = rng.gen_range(1..=3);
            let a = sample::matrix(rng, n, n, &entries);
            let b = if rng.gen_bool(0.3) {
                // share structure with A so rational roots are common
                &sample::invertible(rng, n, &entries) * &sample::matrix(rng, n, n, &entries)
            } else {
                sample::matrix(rng, n, n, &entries)
            };
            Pair { a, b }
        },
        check_pencil,
        show_pair,
    )
}

#[derive(Clone, Debug)]
struct Quad {
    a: ExactMatrix,
    b: ExactMatrix,
    c: ExactMatrix,
    d: ExactMatrix,
}

fn pencil_rank_random(ctx: &Ctx) -> SuiteReport {
    let entries = ctx.entries_or(sample::small_integers());
    ctx.custom(
        |rng| {
            let (d, f) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let diag = |rng: &mut ChaCha8Rng| {
                let v: Vec<Rational> = (0..d).map(|_| sample::matrix(rng, 1, 1, &entries).get(0, 0).clone()).collect();
                ExactMatrix::diag(&v)
            };
            let inner = |rng: &mut ChaCha8Rng| {
                let r = rng.gen_range(0..=f);
                sample::low_rank(rng, f, f, r, &entries)
            };
            Quad {
                a: diag(rng),
                c: diag(rng),
                b: inner(rng),
                d: inner(rng),
            }
        },
        |q| {
            let direct = rank(&(&q.a.kron(&q.b) + &q.c.kron(&q.d)));
            let summed: usize = (0..q.a.rows())
                .map(|j| rank(&(&q.b.scale(q.a.get(j, j)) + &q.d.scale(q.c.get(j, j)))))
                .sum();
            match sr2_rank_via_pencil(&q.a, &q.c, &q.b, &q.d) {
                Ok(v) => Verdict::check(v == direct && summed == direct, || {
                    format!("pencil sum {v} (recomputed {summed}) vs direct rank {direct}")
                }),
                Err(e) => Verdict::Violation(format!("{e}")),
            }
        },
        |q| json!({ "A": q.a, "B": q.b, "C": q.c, "D": q.d }),
    )
}

// ---- analyzers --------------------------------------------------------------

#[derive(Clone, Debug)]
struct VectorInstance {
    r: Vec<ExactMatrix>,
    s: Vec<ExactMatrix>,
}

fn vector_random(ctx: &Ctx) -> SuiteReport {
    let entries = ctx.entries_or(sample::small_integers());
    let fixed = ctx.opts.shape;
    ctx.custom(
        |rng| loop {
            let k = rng.gen_range(2..=3);
            let (m1, m2, n2) = match fixed {
                Some(s) => (s.m1.max(k), s.m2, s.n2),
                None => (rng.gen_range(k..=k + 1), rng.gen_range(1..=6), rng.gen_range(1..=4)),
            };
            if k > m2 * n2 {
                continue;
            }
            let r: Vec<ExactMatrix> = (0..k).map(|_| sample::matrix(rng, m1, 1, &entries)).collect();
            let s: Vec<ExactMatrix> = if rng.gen_bool(0.5) {
                let d = rng.gen_range(1..=m2.min(n2));
                let v = sample::matrix(rng, d, n2, &entries);
                (0..k).map(|_| &sample::matrix(rng, m2, d, &entries) * &v).collect()
            } else {
                (0..k)
                    .map(|_| {
                        let rk = rng.gen_range(1..=m2.min(n2));
                        sample::low_rank(rng, m2, n2, rk, &entries)
                    })
                    .collect()
            };
            let rm = ExactMatrix::hstack(&r.iter().collect::<Vec<_>>()).unwrap();
            if rank(&rm) == k && family_rank(&s) == k {
                return VectorInstance { r, s };
            }
        },
        |v| {
            let pairs: Vec<_> = v.r.iter().cloned().zip(v.s.iter().cloned()).collect();
            let m = BipartiteMatrix::from_terms(&pairs).unwrap();
            let direct = rank(m.partial_transpose(crate::System::B).matrix()) == v.r.len() * rank(m.matrix());
            match analyze_vector_case(&v.r, &v.s) {
                Ok(a) => Verdict::check(
                    a.report.saturated == direct && a.report.witness.is_some() == direct && a.certificate.is_some() == direct,
                    || format!("analyzer saturated = {}, brute force = {direct}", a.report.saturated),
                ),
                Err(e) => Verdict::Violation(format!("analyzer error: {e}")),
            }
        },
        |v| {
            let pairs: Vec<_> = v.r.iter().cloned().zip(v.s.iter().cloned()).collect();
            doc(&BipartiteMatrix::from_terms(&pairs).unwrap())
        },
    )
}

const CANONICAL_SWEEP: [(usize, usize); 6] = [(1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (3, 3)];

#[derive(Clone, Debug)]
struct CanonicalInstance {
    m1: usize,
    n1: usize,
    r: usize,
    matrix: BipartiteMatrix,
}

fn full_schmidt_random(ctx: &Ctx) -> SuiteReport {
    let entries = ctx.entries_or(sample::small_integers());
    let seed = ctx.opts.seed;
    let sweep = (CANONICAL_SWEEP.len() * 3) as u64;
    run(
        ctx.info.name,
        ctx.info.statement,
        Mode::Random,
        Some(seed),
        ctx.trials,
        |i| {
            let mut rng = stream(seed, i);
            let slot = if i < sweep { i as usize } else { rng.gen_range(0..sweep as usize) };
            let (m1, n1) = CANONICAL_SWEEP[slot / 3];
            let r = slot % 3 + 1;
            let canonical = gen_full_schmidt_canonical(m1, n1, r).unwrap();
            let matrix = if i < sweep {
                canonical
            } else {
                canonical.apply_local(&sample::witness(&mut rng, canonical.shape(), &entries)).unwrap()
            };
            CanonicalInstance { m1, n1, r, matrix }
        },
        |c, _| {
            let m = &c.matrix;
            let (rk, sr, g) = (
                rank(m.matrix()),
                rank(&m.realign()),
                rank(m.partial_transpose(crate::System::B).matrix()),
            );
            if (rk, sr, g) != (c.r, c.m1 * c.n1, c.m1 * c.n1 * c.r) {
                return Verdict::Violation(format!("(rank, Sr, rank Γ) = {:?}", (rk, sr, g)));
            }
            let s = m.shape();
            let target = full_schmidt_target(c.m1, c.n1, c.r, s.m2, s.n2).unwrap();
            match analyze_full_schmidt(m) {
                Ok(a) => {
                    let reached = a.report.witness.as_ref().and_then(|w| m.apply_local(w).ok());
                    Verdict::check(a.report.saturated && reached.as_ref() == Some(&target), || {
                        "analyzer failed to reach the canonical form".into()
                    })
                }
                Err(e) => Verdict::Violation(format!("analyzer error: {e}")),
            }
        },
        |c| doc(&c.matrix),
    )
}

// ---- linear-algebra facts ---------------------------------------------------

fn random_low_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize, entries: &[Rational]) -> ExactMatrix {
    let r = rng.gen_range(0..=rows.min(cols));
    sample::low_rank(rng, rows, cols, r, entries)
}

fn block_rank_bounds(ctx: &Ctx) -> SuiteReport {
    let entries = ctx.entries_or(sample::small_integers());
    ctx.custom(
        |rng| {
            let m = rng.gen_range(1..=4);
            let blocks: Vec<ExactMatrix> = (0..rng.gen_range(1..=4))
                .map(|_| {
                    let c = rng.gen_range(1..=3);
                    random_low_rank(rng, m, c, &entries)
                })
                .collect();
            let (p, q, s, t) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
            let a = random_low_rank(rng, p, q, &entries);
            let b = sample::matrix(rng, s, q, &entries);
            let c = random_low_rank(rng, s, t, &entries);
            (blocks, a, b, c)
        },
        |(blocks, a, b, c)| {
            let joined = rank(&ExactMatrix::hstack(&blocks.iter().collect::<Vec<_>>()).unwrap());
            let first = rank(&blocks[0]);
            let sum: usize = blocks.iter().map(rank).sum();
            if !(first <= joined && joined <= sum) {
                return Verdict::Violation(format!("r(A_1) = {first}, r[A_1 … A_n] = {joined}, Σ r(A_i) = {sum}"));
            }
            let top = ExactMatrix::hstack(&[a, &ExactMatrix::zeros(a.rows(), c.cols())]).unwrap();
            let bottom = ExactMatrix::hstack(&[b, c]).unwrap();
            let whole = rank(&ExactMatrix::vstack(&[&top, &bottom]).unwrap());
            Verdict::check(rank(a) + rank(c) <= whole, || {
                format!("r(A) + r(C) = {} exceeds r[A 0; B C] = {whole}", rank(a) + rank(c))
            })
        },
        |(blocks, a, b, c)| json!({ "blocks": blocks, "A": a, "B": b, "C": c }),
    )
}

fn right_multiplication(ctx: &Ctx) -> SuiteReport {
    let entries = ctx.entries_or(sample::small_integers());
    ctx.custom(
        |rng| loop {
            let (m2, n2) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let n = rng.gen_range(1..=(m2 * n2).min(4));
            let family: Vec<ExactMatrix> = (0..n).map(|_| sample::matrix(rng, m2, n2, &entries)).collect();
            if family_rank(&family) != n {
                continue;
            }
            let coeffs: Vec<Rational> = (0..n).map(|_| sample::matrix(rng, 1, 1, &entries).get(0, 0).clone()).collect();
            let extra = family
                .iter()
                .zip(&coeffs)
                .fold(ExactMatrix::zeros(m2, n2), |acc, (a, c)| &acc + &a.scale(c));
            let r = sample::invertible(rng, n2, &entries);
            return (family, extra, r);
        },
        |(family, extra, r)| {
            let moved: Vec<ExactMatrix> = family.iter().map(|a| a * r).collect();
            let independent = family_rank(&moved) == family.len();
            let mut with_extra = moved.clone();
            with_extra.push(extra * r);
            let in_span = family_rank(&with_extra) == family.len();
            Verdict::check(independent && in_span, || {
                format!("independent after R: {independent}, extra still in span: {in_span}")
            })
        },
        |(family, extra, r)| json!({ "family": family, "extra": extra, "R": r }),
    )
}

/// `rank(αA + βB) < n` for every `(α, β)`, decided from `n + 1` samples of
/// each `n×n` minor's degree-`n` polynomial.
fn lacks_full_column_rank(a: &ExactMatrix, b: &ExactMatrix) -> bool {
    let n = a.cols();
    rank(b) < n && (0..=n as i64).all(|t| rank(&(a + &b.scale(&rat(t)))) < n)
}

/// Columns `S`, `|S| = s`, with `[A_S B_S]` of rank at most `s − 1`.
pub(crate) fn literal_column_subset(a: &ExactMatrix, b: &ExactMatrix) -> Option<Vec<usize>> {
    let n = a.cols();
    (1..=n).find_map(|s| {
        (0..n).combinations(s).find(|cols| {
            let joined = ExactMatrix::hstack(&[&a.select_columns(cols), &b.select_columns(cols)]).unwrap();
            rank(&joined) < s
        })
    })
}

/// The column change `Q` and size `s` for which the first `s` columns of
/// `AQ` and `BQ` span at most `s − 1` dimensions, built from a minimal
/// polynomial kernel vector of `A + tB`.
pub(crate) fn transformed_column_subset(a: &ExactMatrix, b: &ExactMatrix) -> Option<(ExactMatrix, usize)> {
    let coeffs = minimal_kernel_polynomial(a, b).ok()??;
    let x = ExactMatrix::hstack(&coeffs.iter().collect::<Vec<_>>()).ok()?;
    let q = complete_columns(&x).ok()?;
    let s = coeffs.len();
    let cols: Vec<usize> = (0..s).collect();
    let joined = ExactMatrix::hstack(&[&(a * &q).select_columns(&cols), &(b * &q).select_columns(&cols)]).ok()?;
    (rank(&joined) < s).then_some((q, s))
}

fn singular_span_columns(ctx: &Ctx) -> SuiteReport {
    let entries = ctx.entries_or(sample::small_integers());
    ctx.custom(
        |rng| {
            let n = rng.gen_range(2..=3);
            let m = rng.gen_range(n..=n + 1);
            let (a, b) = match rng.gen_range(0..3) {
                0 => {
                    let c = sample::matrix(rng, m, n - 1, &entries);
                    (&c * &sample::matrix(rng, n - 1, n, &entries), &c * &sample::matrix(rng, n - 1, n, &entries))
                }
                1 => {
                    let k = sample::matrix(rng, n - 1, n, &entries);
                    (&sample::matrix(rng, m, n - 1, &entries) * &k, &sample::matrix(rng, m, n - 1, &entries) * &k)
                }
                _ => {
                    let eps = rng.gen_range(1..n);
                    let mut a0 = ExactMatrix::zeros(m, n);
                    let mut b0 = ExactMatrix::zeros(m, n);
                    for i in 0..eps {
                        a0.set(i, i, rat(1));
                        b0.set(i, i + 1, rat(1));
                    }
                    let (rows, cols) = (m - eps, n - eps - 1);
                    a0.set_block(eps, eps + 1, &sample::matrix(rng, rows, cols, &entries));
                    b0.set_block(eps, eps + 1, &sample::matrix(rng, rows, cols, &entries));
                    let p = sample::invertible(rng, m, &entries);
                    let q = sample::invertible(rng, n, &entries);
                    (&(&p * &a0) * &q, &(&p * &b0) * &q)
                }
            };
            Pair { a, b }
        },
        |p| {
            if !lacks_full_column_rank(&p.a, &p.b) {
                return Verdict::Reject;
            }
            if literal_column_subset(&p.a, &p.b).is_some() || transformed_column_subset(&p.a, &p.b).is_some() {
                Verdict::Pass
            } else {
                Verdict::Violation("no column subset, even after the kernel column change".into())
            }
        },
        show_pair,
    )
}

fn in_column_span(basis: &ExactMatrix, vectors: &ExactMatrix) -> bool {
    if vectors.cols() == 0 {
        return true;
    }
    if basis.cols() == 0 {
        return vectors.is_zero();
    }
    rank(&ExactMatrix::hstack(&[basis, vectors]).unwrap()) == rank(basis)
}

fn corner_block_rank(ctx: &Ctx) -> SuiteReport {
    let entries = ctx.entries_or(sample::small_integers());
    ctx.custom(
        |rng| {
            let (a, b) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
            let (c, d) = (rng.gen_range(1..a), rng.gen_range(1..b));
            let whole = if rng.gen_bool(0.5) {
                let a1 = random_low_rank(rng, c, d, &entries);
                let x = sample::matrix(rng, d, b - d, &entries);
                let y = sample::matrix(rng, a - c, c, &entries);
                let mut blocks = [a1.clone(), &a1 * &x, &y * &a1, &(&y * &a1) * &x];
                if rng.gen_bool(0.3) {
                    let k = rng.gen_range(1..4);
                    let (r, cc) = blocks[k].shape();
                    blocks[k] = sample::matrix(rng, r, cc, &entries);
                }
                let top = ExactMatrix::hstack(&[&blocks[0], &blocks[1]]).unwrap();
                let bottom = ExactMatrix::hstack(&[&blocks[2], &blocks[3]]).unwrap();
                ExactMatrix::vstack(&[&top, &bottom]).unwrap()
            } else {
                random_low_rank(rng, a, b, &entries)
            };
            (whole, c, d)
        },
        |(whole, c, d)| {
            let (a, b) = whole.shape();
            let a1 = whole.submatrix(0, 0, *c, *d);
            let a3 = whole.submatrix(*c, 0, a - c, *d);
            let left = whole.submatrix(0, 0, a, *d);
            let lhs = rank(whole) == rank(&a1);
            let ranges_equal = in_column_span(&left, whole) && in_column_span(whole, &left);
            let rows_contained = in_column_span(&a1.transpose(), &a3.transpose());
            let _ = b;
            Verdict::check(lhs == (ranges_equal && rows_contained), || {
                format!("rank A = rank A_1 is {lhs}; range conditions are ({ranges_equal}, {rows_contained})")
            })
        },
        |(whole, c, d)| json!({ "A": whole, "c": c, "d": d }),
    )
}

fn direct_sum_rank(ctx: &Ctx) -> SuiteReport {
    let entries = ctx.entries_or(sample::small_integers());
    ctx.custom(
        |rng| {
            let m = rng.gen_range(1..=4);
            let bc = rng.gen_range(1..=3);
            let b = random_low_rank(rng, m, bc, &entries);
            let c = if rng.gen_bool(0.5) {
                let k = rng.gen_range(1..=2);
                let mix = sample::matrix(rng, b.cols(), k, &entries);
                let shared = &b * &mix;
                ExactMatrix::hstack(&[&shared, &random_low_rank(rng, m, 1, &entries)]).unwrap()
            } else {
                let cc = rng.gen_range(1..=3);
                random_low_rank(rng, m, cc, &entries)
            };
            (b, c)
        },
        |(b, c)| {
            let lhs = rank(&ExactMatrix::hstack(&[b, c]).unwrap()) == rank(b) + rank(c);
            // dim(R(B) ∩ R(C)) from the kernel of [B_basis, −C_basis]
            let basis = |x: &ExactMatrix| {
                let pivots = crate::linalg::rref_with_witness(x).pivots;
                x.select_columns(&pivots)
            };
            let (bb, cb) = (basis(b), basis(c));
            let meet = if bb.cols() == 0 || cb.cols() == 0 {
                0
            } else {
                nullspace(&ExactMatrix::hstack(&[&bb, &-&cb]).unwrap()).cols()
            };
            Verdict::check(lhs == (meet == 0), || {
                format!("rank additivity is {lhs} but the ranges meet in dimension {meet}")
            })
        },
        |(b, c)| json!({ "B": b, "C": c }),
    )
}

fn kron_rank(ctx: &Ctx) -> SuiteReport {
    let entries = ctx.entries_or(sample::small_integers());
    ctx.custom(
        |rng| {
            let (p, q, s, t) = (rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3));
            Pair {
                a: random_low_rank(rng, p, q, &entries),
                b: random_low_rank(rng, s, t, &entries),
            }
        },
        |p| {
            let (ra, rb, rk) = (rank(&p.a), rank(&p.b), rank(&p.a.kron(&p.b)));
            Verdict::check(rk == ra * rb, || format!("rank(A⊗B) = {rk}, rank A · rank B = {ra}·{rb}"))
        },
        show_pair,
    )
}
