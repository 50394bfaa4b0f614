use super::echelon::{Insertion, SpanReducer};
use super::field::{Field, Scalar};
use super::matrix::Matrix;
use super::poly::Polynomial;
use super::subspace::Subspace;
use super::AlgebraError;

/// Monic minimal polynomial from the first linear dependence among
/// `I, M, M², …` viewed as vectors in End(V).
pub fn min_poly(m: &Matrix) -> Polynomial {
    assert!(m.is_square(), "minimal polynomial of a non-square matrix");
    let field = m.field();
    let n = m.rows();
    let mut reducer = SpanReducer::new(field, n * n);
    let mut power = Matrix::identity(field, n);
    loop {
        match reducer.insert(power.entries()) {
            Insertion::Independent(_) => power = power.mul(m),
            Insertion::Dependent(t) => return Polynomial::new(field, t),
        }
    }
}

/// Eigenvalues (pairwise distinct) with their eigenspaces for an operator
/// that is diagonalizable over its ground field. The sequence order is
/// meaningful: downstream code reorders it to match a tridiagonal ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenDecomposition {
    operator: Matrix,
    eigenvalues: Vec<Scalar>,
    eigenspaces: Vec<Subspace>,
}

impl EigenDecomposition {
    /// Diagonalizes `m`, listing eigenvalues in canonical order. Fails unless
    /// the minimal polynomial splits into distinct linear factors over the field.
    pub fn new(m: &Matrix) -> Result<Self, AlgebraError> {
        if !m.is_square() {
            return Err(AlgebraError::Shape(format!(
                "eigen-decomposition of a {}x{} matrix",
                m.rows(),
                m.cols()
            )));
        }
        let field = m.field();
        let mp = min_poly(m);
        let degree = mp.degree().expect("minimal polynomial is nonzero");
        let not_diag = |reason: String| AlgebraError::NotDiagonalizableOverField { field, reason };
        if !mp.is_square_free() {
            return Err(not_diag(format!("minimal polynomial {mp} has a repeated factor")));
        }
        let eigenvalues = mp.roots();
        if eigenvalues.len() != degree {
            return Err(not_diag(format!(
                "minimal polynomial {mp} has {} of {degree} roots in {field}",
                eigenvalues.len()
            )));
        }
        let eigenspaces: Vec<Subspace> = eigenvalues.iter().map(|t| m.shift(t).kernel()).collect();
        debug_assert_eq!(eigenspaces.iter().map(Subspace::dim).sum::<usize>(), m.rows());
        Ok(EigenDecomposition {
            operator: m.clone(),
            eigenvalues,
            eigenspaces,
        })
    }

    pub fn operator(&self) -> &Matrix {
        &self.operator
    }

    pub fn field(&self) -> Field {
        self.operator.field()
    }

    pub fn dim(&self) -> usize {
        self.operator.rows()
    }

    /// Number of eigenspaces.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Number of eigenspaces minus one.
    pub fn diameter(&self) -> usize {
        self.len() - 1
    }

    pub fn eigenvalues(&self) -> &[Scalar] {
        &self.eigenvalues
    }

    pub fn eigenspaces(&self) -> &[Subspace] {
        &self.eigenspaces
    }

    pub fn eigenvalue(&self, i: usize) -> &Scalar {
        &self.eigenvalues[i]
    }

    pub fn eigenspace(&self, i: usize) -> &Subspace {
        &self.eigenspaces[i]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.eigenspaces.iter().map(Subspace::dim).collect()
    }

    /// The same decomposition listed in the order `order[0], order[1], …`.
    pub fn reordered(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.len(), "ordering length");
        EigenDecomposition {
            operator: self.operator.clone(),
            eigenvalues: order.iter().map(|&i| self.eigenvalues[i].clone()).collect(),
            eigenspaces: order.iter().map(|&i| self.eigenspaces[i].clone()).collect(),
        }
    }

    pub fn reversed(&self) -> Self {
        let order: Vec<usize> = (0..self.len()).rev().collect();
        self.reordered(&order)
    }

    /// Index of the eigenvalue `theta`, if present.
    pub fn position(&self, theta: &Scalar) -> Option<usize> {
        self.eigenvalues.iter().position(|t| t == theta)
    }

    /// `V_lo + … + V_hi` (zero if the range is empty).
    pub fn partial_sum(&self, lo: usize, hi_inclusive: isize) -> Subspace {
        let field = self.field();
        if hi_inclusive < lo as isize {
            return Subspace::zero(field, self.dim());
        }
        Subspace::sum_all(field, self.dim(), &self.eigenspaces[lo..=hi_inclusive as usize])
    }

    /// Primitive idempotents by Lagrange interpolation:
    /// `E_i = ∏_{j≠i} (M - θ_j I)/(θ_i - θ_j)`, in the current order.
    pub fn primitive_idempotents(&self) -> Vec<Matrix> {
        let n = self.dim();
        (0..self.len())
            .map(|i| {
                let ti = &self.eigenvalues[i];
                self.eigenvalues
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(Matrix::identity(self.field(), n), |acc, (_, tj)| {
                        let denom = (ti - tj).inv().expect("distinct eigenvalues");
                        acc.mul(&self.operator.shift(tj)).scale(&denom)
                    })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn min_poly_examples() {
        let d = Matrix::diagonal(Q, &[Q.from_i64(2), Q.from_i64(2), Q.from_i64(3)]);
        assert_eq!(
            min_poly(&d),
            Polynomial::from_roots(Q, &[Q.from_i64(2), Q.from_i64(3)])
        );
        assert_eq!(min_poly(&Matrix::zeros(Q, 3, 3)), Polynomial::from_roots(Q, &[Q.zero()]));
        let nil = Matrix::from_i64(Q, &[&[0, 1], &[0, 0]]);
        assert_eq!(min_poly(&nil), Polynomial::from_roots(Q, &[Q.zero(), Q.zero()]));
    }

    #[test]
    fn swap_matrix_over_gf3() {
        let f = Field::prime(3).unwrap();
        let m = Matrix::from_i64(f, &[&[0, 1], &[1, 0]]);
        let e = EigenDecomposition::new(&m).unwrap();
        assert_eq!(e.eigenvalues(), &[f.from_i64(1), f.from_i64(2)]);
        assert_eq!(e.eigenspace(0), &Subspace::span(f, 2, &[vec![f.one(), f.one()]]));
        assert_eq!(e.eigenspace(1), &Subspace::span(f, 2, &[vec![f.one(), f.from_i64(2)]]));
    }

    #[test]
    fn diagonal_has_one_dimensional_eigenspaces() {
        let d = Matrix::diagonal(Q, &[Q.zero(), Q.one(), Q.from_i64(2)]);
        let e = EigenDecomposition::new(&d).unwrap();
        assert_eq!(e.dims(), vec![1, 1, 1]);
    }

    #[test]
    fn nilpotent_and_irrational_are_rejected() {
        let nil = Matrix::from_i64(Q, &[&[0, 1], &[0, 0]]);
        assert!(matches!(
            EigenDecomposition::new(&nil),
            Err(AlgebraError::NotDiagonalizableOverField { .. })
        ));
        // λ² - 2
        let rot = Matrix::from_i64(Q, &[&[0, 2], &[1, 0]]);
        assert!(EigenDecomposition::new(&rot).is_err());
    }

    #[test]
    fn idempotents_of_diag() {
        let d = Matrix::diagonal(Q, &[Q.zero(), Q.one()]);
        let es = EigenDecomposition::new(&d).unwrap().primitive_idempotents();
        assert_eq!(es[0], Matrix::diagonal(Q, &[Q.one(), Q.zero()]));
        assert_eq!(es[1], Matrix::diagonal(Q, &[Q.zero(), Q.one()]));
        let scalar = Matrix::from_i64(Q, &[&[7]]);
        let es = EigenDecomposition::new(&scalar).unwrap().primitive_idempotents();
        assert_eq!(es, vec![Matrix::identity(Q, 1)]);
    }

    #[test]
    fn idempotents_of_swap_over_q() {
        // θ = -1, 1 in canonical order, so E = (I - M)/2, (I + M)/2
        let m = Matrix::from_i64(Q, &[&[0, 1], &[1, 0]]);
        let eig = EigenDecomposition::new(&m).unwrap();
        let es = eig.primitive_idempotents();
        let i = Matrix::identity(Q, 2);
        let half = Q.from_ratio(1, 2);
        assert_eq!(es[0], i.sub(&m).scale(&half));
        assert_eq!(es[1], i.add(&m).scale(&half));
        // E_i E_j = δ_ij E_i, Σ E_i = I, M = Σ θ_i E_i by direct multiplication
        for a in 0..2 {
            for b in 0..2 {
                let p = es[a].mul(&es[b]);
                if a == b {
                    assert_eq!(p, es[a]);
                } else {
                    assert!(p.is_zero());
                }
            }
        }
        assert_eq!(es[0].add(&es[1]), i);
        let recon = es[0]
            .scale(eig.eigenvalue(0))
            .add(&es[1].scale(eig.eigenvalue(1)));
        assert_eq!(recon, m);
    }
}
