use super::field::{Field, Scalar};
use super::matrix::{axpy, Vector};

/// Result of offering a vector to a [`SpanReducer`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    /// The vector was independent of everything inserted before; it got this index.
    Independent(usize),
    /// The vector was dependent. The coefficients `t` (one per inserted vector,
    /// with the offered vector last and `t.last() == 1`) satisfy `Σ t_j v_j = 0`.
    Dependent(Vector),
}

/// Incrementally maintained echelon basis that also records, for every
/// stored row, how it combines the vectors originally inserted. Used for
/// Krylov sequences and algebra closures where vectors arrive one at a time.
#[derive(Clone, Debug)]
pub struct SpanReducer {
    field: Field,
    len: usize,
    // (pivot column, reduced row, combination of accepted inputs)
    rows: Vec<(usize, Vector, Vector)>,
}

impl SpanReducer {
    pub fn new(field: Field, len: usize) -> Self {
        SpanReducer {
            field,
            len,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.len
    }

    /// Reduces `v` against the stored rows. Returns the residual and the
    /// combination (over accepted inputs plus a trailing slot for `v`).
    fn reduce(&self, v: &[Scalar]) -> (Vector, Vector) {
        assert_eq!(v.len(), self.len, "vector length");
        let k = self.rows.len();
        let mut residual = v.to_vec();
        let mut combo = vec![self.field.zero(); k + 1];
        combo[k] = self.field.one();
        for (pivot, row, row_combo) in &self.rows {
            if residual[*pivot].is_zero() {
                continue;
            }
            let c = -&residual[*pivot];
            axpy(&mut residual, &c, row);
            axpy(&mut combo[..k], &c, row_combo);
        }
        (residual, combo)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).0.iter().all(Scalar::is_zero)
    }

    pub fn insert(&mut self, v: &[Scalar]) -> Insertion {
        let (residual, mut combo) = self.reduce(v);
        let Some(pivot) = residual.iter().position(|x| !x.is_zero()) else {
            return Insertion::Dependent(combo);
        };
        let inv = residual[pivot].inv().expect("nonzero pivot");
        let row: Vector = residual.iter().map(|x| x * &inv).collect();
        for c in combo.iter_mut() {
            *c = &*c * &inv;
        }
        // rows carry combinations over all inputs seen so far; pad older ones lazily
        let k = self.rows.len();
        for (_, _, rc) in self.rows.iter_mut() {
            rc.push(self.field.zero());
        }
        self.rows.push((pivot, row, combo));
        Insertion::Independent(k)
    }
}
