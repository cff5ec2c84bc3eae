use serde::{Deserialize, Serialize};

use crate::bipartite::{BipartiteMatrix, BipartiteShape};
use crate::error::{Error, Result};
use crate::linalg::{rat, ExactMatrix};
use crate::Rational;

/// Default cap on the number of instances an exhaustive run may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

/// Budget from `PTRANK_BUDGET`, falling back to [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> u64 {
    std::env::var("PTRANK_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Filter {
    /// Keep only matrices of exactly this Schmidt rank.
    SchmidtRank(usize),
    NonZero,
}

impl Filter {
    pub fn accepts(&self, m: &BipartiteMatrix) -> bool {
        match *self {
            Filter::SchmidtRank(k) => m.schmidt_rank() == k,
            Filter::NonZero => !m.is_zero(),
        }
    }
}

/// All matrices of one shape with entries from a finite set.
///
/// Instance `i` reads `i` in base `|entries|`, most significant digit
/// first, over the row-major entries of the full matrix; the last entry
/// varies fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpace {
    pub shape: BipartiteShape,
    pub entries: Vec<Rational>,
    pub filter: Option<Filter>,
}

impl SearchSpace {
    pub fn new(shape: BipartiteShape) -> Self {
        Self {
            shape,
            entries: vec![rat(0), rat(1)],
            filter: None,
        }
    }

    pub fn with_entries(mut self, entries: Vec<Rational>) -> Self {
        self.entries = entries;
        self
    }

    pub fn with_filter(mut self, filter: Filter) -> Self {
        self.filter = Some(filter);
        self
    }

    /// `|entries|^(entry count)`, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        let base = self.entries.len() as u128;
        let mut acc: u128 = 1;
        for _ in 0..self.shape.entry_count() {
            acc = acc.saturating_mul(base);
        }
        acc
    }

    /// Size as a `u64` if within `budget`.
    pub fn checked_size(&self, budget: u64) -> Result<u64> {
        let size = self.size();
        if size > budget as u128 {
            return Err(Error::BudgetExceeded {
                size,
                budget: budget as u128,
            });
        }
        Ok(size as u64)
    }

    pub fn instance(&self, mut index: u64) -> BipartiteMatrix {
        let base = self.entries.len() as u64;
        let n = self.shape.entry_count();
        let mut digits = vec![0usize; n];
        for d in digits.iter_mut().rev() {
            *d = (index % base) as usize;
            index /= base;
        }
        let cols = self.shape.cols();
        let data = ExactMatrix::from_fn(self.shape.rows(), cols, |i, j| self.entries[digits[i * cols + j]].clone());
        BipartiteMatrix::new(self.shape, data).expect("shape fits")
    }

    pub fn accepts(&self, m: &BipartiteMatrix) -> bool {
        self.filter.is_none_or(|f| f.accepts(m))
    }
}
