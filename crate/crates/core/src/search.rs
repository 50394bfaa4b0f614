//! Bounded search for tridiagonal pairs of a prescribed shape over GF(p).
//!
//! `A` is fixed to `diag(0·I_{ρ_0}, 1·I_{ρ_1}, …, d·I_{ρ_d})` and `A*` ranges
//! over matrices whose only nonzero blocks are on the block tridiagonal.
//! Candidates are numbered `0, 1, 2, …`; candidate `c` depends only on the
//! spec and on `c`, so any split of the index range into shards yields the
//! same instances.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactalg::{Field, Matrix};
use crate::tdpair::{validate_pair, TriDiagonalPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search runs over a prime field, not {0}")]
    NotPrimeField(Field),
    #[error("field GF({p}) is too small for diameter {d}")]
    FieldTooSmall { p: u32, d: usize },
    #[error("budget must be positive")]
    BudgetZero,
    #[error("invalid shape {shape:?}: {reason}")]
    InvalidShape { shape: Vec<usize>, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exhaustive,
    Randomized,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    field: Field,
    shape: Vec<usize>,
    budget: u64,
    seed: u64,
    mode: Mode,
    /// Candidate indices `start..end` handled by this spec.
    range: (u64, u64),
}

impl SearchSpec {
    pub fn new(
        field: Field,
        dim: usize,
        shape: Vec<usize>,
        budget: u64,
        seed: u64,
        mode: Mode,
    ) -> Result<Self, SearchError> {
        let Some(p) = field.modulus() else {
            return Err(SearchError::NotPrimeField(field));
        };
        let invalid = |reason: &str| SearchError::InvalidShape {
            shape: shape.clone(),
            reason: reason.into(),
        };
        if shape.is_empty() || shape.contains(&0) {
            return Err(invalid("entries must be positive"));
        }
        if shape.iter().sum::<usize>() != dim {
            return Err(invalid(&format!("entries do not sum to {dim}")));
        }
        if !shape.iter().eq(shape.iter().rev()) {
            return Err(invalid("not symmetric"));
        }
        let d = shape.len() - 1;
        if (p as usize) <= d {
            return Err(SearchError::FieldTooSmall { p, d });
        }
        if budget == 0 {
            return Err(SearchError::BudgetZero);
        }
        let mut spec = SearchSpec {
            field,
            shape,
            budget,
            seed,
            mode,
            range: (0, 0),
        };
        spec.range = (0, spec.candidate_count());
        Ok(spec)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.shape.iter().sum()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn range(&self) -> (u64, u64) {
        self.range
    }

    /// Number of candidate indices: the budget, capped by the size of the
    /// whole space in exhaustive mode.
    pub fn candidate_count(&self) -> u64 {
        match self.mode {
            Mode::Randomized => self.budget,
            Mode::Exhaustive => self.space_size().map_or(self.budget, |n| n.min(self.budget)),
        }
    }

    /// `p^k` for `k` free entries of `A*`, or `None` if it overflows.
    pub fn space_size(&self) -> Option<u64> {
        let p = self.field.modulus().expect("prime field") as u64;
        p.checked_pow(self.free_positions().len() as u32)
    }

    fn block_of(&self) -> Vec<usize> {
        self.shape
            .iter()
            .enumerate()
            .flat_map(|(b, &rho)| std::iter::repeat_n(b, rho))
            .collect()
    }

    /// Row-major positions of `A*` allowed to be nonzero.
    pub fn free_positions(&self) -> Vec<(usize, usize)> {
        let block = self.block_of();
        let n = block.len();
        (0..n)
            .flat_map(|r| (0..n).map(move |c| (r, c)))
            .filter(|&(r, c)| block[r].abs_diff(block[c]) <= 1)
            .collect()
    }

    /// The fixed operator `A`.
    pub fn a_matrix(&self) -> Matrix {
        let diag: Vec<_> = self.block_of().iter().map(|&b| self.field.from_i64(b as i64)).collect();
        Matrix::diagonal(self.field, &diag)
    }

    /// `A*` for candidate index `counter`.
    pub fn candidate(&self, counter: u64) -> Matrix {
        let p = self.field.modulus().expect("prime field") as u64;
        let free = self.free_positions();
        let n = self.dim();
        let mut m = Matrix::zeros(self.field, n, n);
        match self.mode {
            Mode::Exhaustive => {
                // base-p digits, last free position least significant
                let mut rest = counter;
                for &(r, c) in free.iter().rev() {
                    m[(r, c)] = self.field.from_i64((rest % p) as i64);
                    rest /= p;
                }
            }
            Mode::Randomized => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(counter);
                for &(r, c) in &free {
                    m[(r, c)] = self.field.from_i64(rng.gen_range(0..p) as i64);
                }
            }
        }
        m
    }

    /// The same spec restricted to indices `start..end` (clamped to the
    /// current range).
    pub fn window(&self, start: u64, end: u64) -> SearchSpec {
        let lo = start.clamp(self.range.0, self.range.1);
        let hi = end.clamp(lo, self.range.1);
        self.with_range(lo, hi)
    }

    fn with_range(&self, start: u64, end: u64) -> SearchSpec {
        SearchSpec {
            range: (start, end),
            ..self.clone()
        }
    }
}

/// A validated instance together with the candidate index that produced it.
#[derive(Clone, Debug)]
pub struct Hit {
    pub counter: u64,
    pub pair: TriDiagonalPair,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub instances: Vec<Hit>,
    pub candidates_tried: u64,
    pub elapsed: Duration,
}

/// Runs every candidate in the spec's index range through `validate_pair`,
/// keeping those of the requested shape.
pub fn search_shape(spec: &SearchSpec) -> SearchResult {
    let started = Instant::now();
    let a = spec.a_matrix();
    let (start, end) = spec.range;
    let mut instances = Vec::new();
    for counter in start..end {
        let astar = spec.candidate(counter);
        if let Ok(pair) = validate_pair(&a, &astar) {
            if pair.shape().rho() == spec.shape.as_slice() {
                instances.push(Hit { counter, pair });
            }
        }
    }
    dedup(&mut instances);
    SearchResult {
        instances,
        candidates_tried: end - start,
        elapsed: started.elapsed(),
    }
}

/// Splits the candidate range into `workers` contiguous shards whose sizes
/// differ by at most one.
pub fn partition_seeds(spec: &SearchSpec, workers: usize) -> Vec<SearchSpec> {
    assert!(workers >= 1, "at least one worker");
    let (start, end) = spec.range;
    let total = end - start;
    let w = workers as u64;
    let mut shards = Vec::with_capacity(workers);
    let mut lo = start;
    for k in 0..w {
        let size = total / w + u64::from(k < total % w);
        shards.push(spec.with_range(lo, lo + size));
        lo += size;
    }
    shards
}

/// Combines shard results: instances ordered by candidate index, with
/// duplicate `A*` matrices dropped.
pub fn merge_results(parts: Vec<SearchResult>) -> SearchResult {
    let mut instances: Vec<Hit> = Vec::new();
    let mut candidates_tried = 0;
    let mut elapsed = Duration::ZERO;
    for part in parts {
        instances.extend(part.instances);
        candidates_tried += part.candidates_tried;
        elapsed = elapsed.max(part.elapsed);
    }
    instances.sort_by_key(|h| h.counter);
    dedup(&mut instances);
    SearchResult {
        instances,
        candidates_tried,
        elapsed,
    }
}

fn dedup(hits: &mut Vec<Hit>) {
    let mut seen = BTreeSet::new();
    hits.retain(|h| seen.insert(h.pair.astar().to_string()));
}
