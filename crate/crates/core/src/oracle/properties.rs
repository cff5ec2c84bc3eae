//! Matrix-level properties. Each check recomputes its ground truth from
//! ranks of explicitly assembled matrices rather than trusting the analyzer
//! under test.

use rand_chacha::ChaCha8Rng;

use super::runner::Verdict;
use super::sample;
use crate::analysis::{
    analyze_2x2_sr2, analyze_full_schmidt, analyze_sr3_order4, analyze_vector_matrix, full_schmidt_target, kmax_bound,
    reduce_sr2, Sr2Case,
};
use crate::bipartite::{BipartiteMatrix, System};
use crate::linalg::{rank, ExactMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Inequality,
    SrInvariance,
    Sr3Strictness,
    VectorCase,
    TwoByTwoSr2,
    ReduceSr2,
    FullSchmidt,
    LocalEquivalence,
    BlockDiagonalGamma,
    ProductGamma,
}

/// Ranks computed straight from the definitions.
struct Ground {
    rank: usize,
    sr: usize,
    gamma_a: usize,
    gamma_b: usize,
}

impl Ground {
    fn of(m: &BipartiteMatrix) -> Self {
        Self {
            rank: rank(m.matrix()),
            sr: rank(&m.realign()),
            gamma_a: rank(m.partial_transpose(System::A).matrix()),
            gamma_b: rank(m.partial_transpose(System::B).matrix()),
        }
    }

    fn saturated(&self) -> bool {
        self.gamma_b == self.sr * self.rank
    }
}

impl Property {
    pub const ALL: [Property; 10] = [
        Property::Inequality,
        Property::SrInvariance,
        Property::Sr3Strictness,
        Property::VectorCase,
        Property::TwoByTwoSr2,
        Property::ReduceSr2,
        Property::FullSchmidt,
        Property::LocalEquivalence,
        Property::BlockDiagonalGamma,
        Property::ProductGamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Inequality => "inequality",
            Property::SrInvariance => "sr-invariance",
            Property::Sr3Strictness => "sr3-strictness",
            Property::VectorCase => "vector-case",
            Property::TwoByTwoSr2 => "2x2-sr2",
            Property::ReduceSr2 => "reduce-sr2",
            Property::FullSchmidt => "full-schmidt",
            Property::LocalEquivalence => "local-equivalence",
            Property::BlockDiagonalGamma => "block-diagonal-gamma",
            Property::ProductGamma => "product-gamma",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Property::Inequality => {
                "rank of either partial transpose is at most Sr·rank; saturation forces Sr ≤ min(m1·n2, m2·n1)"
            }
            Property::SrInvariance => "Sr(M) = Sr(M^ΓA) = Sr(M^ΓB) = Sr(Mᵀ)",
            Property::Sr3Strictness => "a 2×2-outer matrix of Schmidt rank 3 never saturates",
            Property::VectorCase => "vector-case verdict and witness agree with direct ranks",
            Property::TwoByTwoSr2 => {
                "2×2-outer Schmidt-rank-2 verdict agrees with direct ranks; saturation only for the row or column pattern"
            }
            Property::ReduceSr2 => "Sr-2 reduction witness maps M to the emitted form, preserving rank, Sr and rank Γ_B",
            Property::FullSchmidt => {
                "full-Schmidt verdict agrees with direct ranks and saturating witnesses reach the canonical grid"
            }
            Property::LocalEquivalence => "local equivalence preserves rank, Sr and both partial-transpose ranks",
            Property::BlockDiagonalGamma => "a block-diagonal matrix has the rank of its partial transposes",
            Property::ProductGamma => "a Kronecker product has the rank of its partial transposes",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn check(self, m: &BipartiteMatrix, rng: &mut ChaCha8Rng) -> Verdict {
        match self {
            Property::Inequality => inequality(m),
            Property::SrInvariance => sr_invariance(m),
            Property::Sr3Strictness => sr3_strictness(m),
            Property::VectorCase => vector_case(m),
            Property::TwoByTwoSr2 => two_by_two(m),
            Property::ReduceSr2 => reduce(m),
            Property::FullSchmidt => full_schmidt(m),
            Property::LocalEquivalence => local_equivalence(m, rng),
            Property::BlockDiagonalGamma => block_diagonal(m),
            Property::ProductGamma => product_gamma(m),
        }
    }
}

fn inequality(m: &BipartiteMatrix) -> Verdict {
    let g = Ground::of(m);
    let bound = g.sr * g.rank;
    if g.gamma_b > bound || g.gamma_a > bound {
        return Verdict::Violation(format!(
            "rank Γ_A = {}, rank Γ_B = {} exceed Sr·rank = {}·{}",
            g.gamma_a, g.gamma_b, g.sr, g.rank
        ));
    }
    let kmax = kmax_bound(m.shape());
    Verdict::check(!(g.rank > 0 && g.saturated()) || g.sr <= kmax, || {
        format!("saturated with Sr = {} above min(m1·n2, m2·n1) = {kmax}", g.sr)
    })
}

fn sr_invariance(m: &BipartiteMatrix) -> Verdict {
    let srs = [
        m.schmidt_rank(),
        m.partial_transpose(System::A).schmidt_rank(),
        m.partial_transpose(System::B).schmidt_rank(),
        m.transpose().schmidt_rank(),
    ];
    Verdict::check(srs.iter().all(|&s| s == srs[0]), || {
        format!("Sr of M, M^ΓA, M^ΓB, Mᵀ = {srs:?}")
    })
}

fn sr3_strictness(m: &BipartiteMatrix) -> Verdict {
    let s = m.shape();
    if s.m1 != 2 || s.n1 != 2 {
        return Verdict::Reject;
    }
    let g = Ground::of(m);
    if g.sr != 3 {
        return Verdict::Reject;
    }
    if g.saturated() {
        return Verdict::Violation(format!("saturated: rank {}, rank Γ_B {}", g.rank, g.gamma_b));
    }
    match analyze_sr3_order4(m) {
        Ok(rep) => Verdict::check(!rep.saturated && rep.gap == (3 * g.rank - g.gamma_b) as i64, || {
            format!("analyzer gap {} disagrees with direct ranks", rep.gap)
        }),
        Err(e) => Verdict::Violation(format!("analyzer error: {e}")),
    }
}

fn vector_case(m: &BipartiteMatrix) -> Verdict {
    let s = m.shape();
    if s.n1 != 1 && s.m1 != 1 {
        return Verdict::Reject;
    }
    let g = Ground::of(m);
    if g.sr < 2 {
        return Verdict::Reject;
    }
    let analysis = match analyze_vector_matrix(m) {
        Ok(a) => a,
        Err(e) => return Verdict::Violation(format!("analyzer error: {e}")),
    };
    if analysis.report.saturated != g.saturated() {
        return Verdict::Violation(format!(
            "analyzer says saturated = {}, direct ranks say {}",
            analysis.report.saturated,
            g.saturated()
        ));
    }
    match (&analysis.report.witness, g.saturated()) {
        (Some(w), true) => Verdict::check(m.apply_local(w).is_ok() && analysis.certificate.is_some(), || {
            "witness or certificate missing".into()
        }),
        (None, false) => Verdict::Pass,
        _ => Verdict::Violation("witness presence does not match verdict".into()),
    }
}

fn two_by_two(m: &BipartiteMatrix) -> Verdict {
    let s = m.shape();
    if s.m1 != 2 || s.n1 != 2 {
        return Verdict::Reject;
    }
    let g = Ground::of(m);
    if g.sr != 2 {
        return Verdict::Reject;
    }
    let a = match analyze_2x2_sr2(m) {
        Ok(a) => a,
        Err(e) => return Verdict::Violation(format!("analyzer error: {e}")),
    };
    if a.report.saturated != g.saturated() {
        return Verdict::Violation(format!("analyzer verdict {} vs direct {}", a.report.saturated, g.saturated()));
    }
    let Some(case) = a.case else {
        return Verdict::check(!g.saturated() && a.report.witness.is_none(), || "saturated without a case".into());
    };
    let (Some(w), Some(n)) = (&a.report.witness, &a.reduced) else {
        return Verdict::Violation("case without witness".into());
    };
    if m.apply_local(w).as_ref() != Ok(n) {
        return Verdict::Violation("witness does not reproduce the reduced form".into());
    }
    let (b1, b2, zero) = match case {
        Sr2Case::ColumnPattern => (n.block(0, 0), n.block(1, 0), [n.block(0, 1), n.block(1, 1)]),
        Sr2Case::RowPattern => (n.block(0, 0), n.block(0, 1), [n.block(1, 0), n.block(1, 1)]),
    };
    let stacked = rank(&ExactMatrix::vstack(&[&b1, &b2]).unwrap());
    let side = rank(&ExactMatrix::hstack(&[&b1, &b2]).unwrap());
    let pattern_ok = match case {
        Sr2Case::ColumnPattern => side == 2 * stacked,
        Sr2Case::RowPattern => stacked == 2 * side,
    };
    Verdict::check(pattern_ok && zero.iter().all(ExactMatrix::is_zero), || {
        format!("{case:?} form fails its rank condition (stacked {stacked}, side-by-side {side})")
    })
}

fn reduce(m: &BipartiteMatrix) -> Verdict {
    let g = Ground::of(m);
    if g.sr != 2 {
        return Verdict::Reject;
    }
    let red = match reduce_sr2(m) {
        Ok(r) => r,
        Err(e) => return Verdict::Violation(format!("reduction error: {e}")),
    };
    if m.apply_local(&red.witness).as_ref() != Ok(&red.reduced) {
        return Verdict::Violation("witness does not reproduce the reduced matrix".into());
    }
    let h = Ground::of(&red.reduced);
    Verdict::check(h.rank == g.rank && h.sr == 2 && h.gamma_b == g.gamma_b, || {
        format!(
            "invariants moved: rank {}→{}, Sr 2→{}, rank Γ_B {}→{}",
            g.rank, h.rank, h.sr, g.gamma_b, h.gamma_b
        )
    })
}

fn full_schmidt(m: &BipartiteMatrix) -> Verdict {
    let s = m.shape();
    let g = Ground::of(m);
    if g.sr != s.m1 * s.n1 || s.m1 * s.n1 > s.m2 * s.n2 {
        return Verdict::Reject;
    }
    let a = match analyze_full_schmidt(m) {
        Ok(a) => a,
        Err(e) => return Verdict::Violation(format!("analyzer error: {e}")),
    };
    if a.report.saturated != g.saturated() {
        return Verdict::Violation(format!("analyzer verdict {} vs direct {}", a.report.saturated, g.saturated()));
    }
    if !g.saturated() {
        return Verdict::check(a.report.witness.is_none(), || "witness for an unsaturated matrix".into());
    }
    let target = full_schmidt_target(s.m1, s.n1, g.rank, s.m2, s.n2).expect("valid shape");
    let reached = a.report.witness.as_ref().and_then(|w| m.apply_local(w).ok());
    Verdict::check(reached.as_ref() == Some(&target), || "witness misses the canonical grid".into())
}

fn local_equivalence(m: &BipartiteMatrix, rng: &mut ChaCha8Rng) -> Verdict {
    let w = sample::witness(rng, m.shape(), &sample::small_integers());
    let n = m.apply_local(&w).expect("sampled witness is invertible");
    let (g, h) = (Ground::of(m), Ground::of(&n));
    Verdict::check(
        (g.rank, g.sr, g.gamma_a, g.gamma_b) == (h.rank, h.sr, h.gamma_a, h.gamma_b),
        || {
            format!(
                "(rank, Sr, ΓA, ΓB) moved from {:?} to {:?}",
                (g.rank, g.sr, g.gamma_a, g.gamma_b),
                (h.rank, h.sr, h.gamma_a, h.gamma_b)
            )
        },
    )
}

fn is_block_diagonal(m: &BipartiteMatrix) -> bool {
    let s = m.shape();
    s.m1 == s.n1 && (0..s.m1).all(|i| (0..s.n1).all(|j| i == j || m.block(i, j).is_zero()))
}

fn block_diagonal(m: &BipartiteMatrix) -> Verdict {
    if !is_block_diagonal(m) {
        return Verdict::Reject;
    }
    let g = Ground::of(m);
    Verdict::check(g.rank == g.gamma_a && g.rank == g.gamma_b, || {
        format!("rank {}, rank Γ_A {}, rank Γ_B {}", g.rank, g.gamma_a, g.gamma_b)
    })
}

fn product_gamma(m: &BipartiteMatrix) -> Verdict {
    let g = Ground::of(m);
    if g.sr > 1 {
        return Verdict::Reject;
    }
    Verdict::check(g.rank == g.gamma_a && g.rank == g.gamma_b, || {
        format!("rank {}, rank Γ_A {}, rank Γ_B {}", g.rank, g.gamma_a, g.gamma_b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::BipartiteShape;
    use crate::canonical::gen_full_schmidt_canonical;
    use crate::oracle::runner::stream;

    #[test]
    fn names_round_trip() {
        for p in Property::ALL {
            assert_eq!(Property::from_name(p.name()), Some(p));
        }
        assert_eq!(Property::from_name("nope"), None);
    }

    #[test]
    fn canonical_passes_every_applicable_property() {
        let m = gen_full_schmidt_canonical(2, 2, 1).unwrap();
        let mut rng = stream(0, 0);
        for p in Property::ALL {
            assert_ne!(
                std::mem::discriminant(&p.check(&m, &mut rng)),
                std::mem::discriminant(&Verdict::Violation(String::new())),
                "{p:?}"
            );
        }
        assert_eq!(Property::FullSchmidt.check(&m, &mut rng), Verdict::Pass);
    }

    #[test]
    fn rejections() {
        let m = BipartiteMatrix::new(BipartiteShape::new(2, 2, 2, 2).unwrap(), ExactMatrix::identity(4)).unwrap();
        let mut rng = stream(0, 0);
        assert_eq!(Property::Sr3Strictness.check(&m, &mut rng), Verdict::Reject);
        assert_eq!(Property::VectorCase.check(&m, &mut rng), Verdict::Reject);
        assert_eq!(Property::BlockDiagonalGamma.check(&m, &mut rng), Verdict::Pass);
        assert_eq!(Property::ProductGamma.check(&m, &mut rng), Verdict::Pass);
    }
}
