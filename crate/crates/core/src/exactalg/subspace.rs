use std::fmt;

use super::field::{Field, Scalar};
use super::matrix::{axpy, Matrix, Vector};
use super::AlgebraError;

/// A subspace of K^n held by its unique reduced row-echelon basis, so that
/// equality of subspaces is equality of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary vectors of length `ambient`.
    pub fn span(field: Field, ambient: usize, vectors: &[Vector]) -> Self {
        let rows = Matrix::from_rows(field, ambient, vectors.to_vec()).expect("spanning vectors");
        Self::row_space(&rows)
    }

    /// Row space of a matrix.
    pub fn row_space(m: &Matrix) -> Self {
        let r = m.rref();
        let rows = (0..r.rank).map(|i| r.reduced.row(i).to_vec()).collect();
        Subspace {
            ambient: m.cols(),
            basis: Matrix::from_rows(m.field(), m.cols(), rows).expect("rref rows"),
            pivots: r.pivots,
        }
    }

    /// Column space of a matrix.
    pub fn column_space(m: &Matrix) -> Self {
        Self::row_space(&m.transpose())
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// The canonical RREF basis, one basis vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    fn compatible(&self, other: &Subspace) -> Result<(), AlgebraError> {
        if self.field() != other.field() {
            return Err(AlgebraError::FieldMismatch(self.field(), other.field()));
        }
        if self.ambient != other.ambient {
            return Err(AlgebraError::Shape(format!(
                "subspaces of K^{} and K^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn try_sum(&self, other: &Subspace) -> Result<Subspace, AlgebraError> {
        self.compatible(other)?;
        if other.is_zero() || self.is_full() {
            return Ok(self.clone());
        }
        if self.is_zero() || other.is_full() {
            return Ok(other.clone());
        }
        Ok(Self::row_space(&self.basis.vstack(&other.basis)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        self.try_sum(other).expect("compatible subspaces")
    }

    /// Intersection from the kernel of `[X^T | -Y^T]`: each kernel vector
    /// gives coefficients of a common vector in the basis of `self`.
    pub fn try_intersect(&self, other: &Subspace) -> Result<Subspace, AlgebraError> {
        self.compatible(other)?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        let field = self.field();
        let (a, b) = (self.dim(), other.dim());
        let mut system = Matrix::zeros(field, self.ambient, a + b);
        for (i, row) in self.basis_vectors().into_iter().enumerate() {
            for (r, x) in row.into_iter().enumerate() {
                system[(r, i)] = x;
            }
        }
        for (j, row) in other.basis_vectors().into_iter().enumerate() {
            for (r, x) in row.iter().enumerate() {
                system[(r, a + j)] = -x;
            }
        }
        let common: Vec<Vector> = system
            .kernel()
            .basis_vectors()
            .into_iter()
            .map(|coeffs| self.combine(&coeffs[..a]))
            .collect();
        Ok(Self::span(field, self.ambient, &common))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        self.try_intersect(other).expect("compatible subspaces")
    }

    /// `self ⊆ other`.
    pub fn try_leq(&self, other: &Subspace) -> Result<bool, AlgebraError> {
        self.compatible(other)?;
        if self.dim() > other.dim() {
            return Ok(false);
        }
        Ok(self.basis_vectors().iter().all(|v| other.contains(v)))
    }

    pub fn leq(&self, other: &Subspace) -> bool {
        self.try_leq(other).expect("compatible subspaces")
    }

    /// Linear combination of the canonical basis rows.
    pub fn combine(&self, coeffs: &[Scalar]) -> Vector {
        let mut v = vec![self.field().zero(); self.ambient];
        for (r, c) in coeffs.iter().enumerate() {
            axpy(&mut v, c, self.basis.row(r));
        }
        v
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is outside
    /// the subspace. The RREF basis makes the coordinates the pivot entries.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient, "vector length");
        let coeffs: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        (self.combine(&coeffs) == v).then_some(coeffs)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    /// `M W` for a square matrix `M` acting on K^n.
    pub fn image(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        let images: Vec<Vector> = self.basis_vectors().iter().map(|v| m.mul_vec(v)).collect();
        Self::span(self.field(), m.rows(), &images)
    }

    /// `M W ⊆ W`.
    pub fn is_invariant_under(&self, m: &Matrix) -> bool {
        self.basis_vectors().iter().all(|v| self.contains(&m.mul_vec(v)))
    }

    /// Rows `c` with `c · v = 0` for every `v` in the subspace, so that
    /// membership becomes the linear condition `C v = 0`.
    pub fn annihilator(&self) -> Matrix {
        let rows = self.basis.kernel().basis_vectors();
        Matrix::from_rows(self.field(), self.ambient, rows).expect("annihilator rows")
    }

    /// Sum of a family of subspaces of K^n (the zero subspace if empty).
    pub fn sum_all<'a>(field: Field, ambient: usize, parts: impl IntoIterator<Item = &'a Subspace>) -> Subspace {
        let rows: Vec<Vector> = parts.into_iter().flat_map(|s| s.basis_vectors()).collect();
        Self::span(field, ambient, &rows)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{}", self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn e(n: usize, i: usize) -> Vector {
        (0..n).map(|j| Q.from_i64((i == j) as i64)).collect()
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn sum_examples() {
        let x = Subspace::span(Q, 3, &[e(3, 0)]);
        let y = Subspace::span(Q, 3, &[e(3, 1)]);
        assert_eq!(x.sum(&y), Subspace::span(Q, 3, &[e(3, 0), e(3, 1)]));
        assert_eq!(x.sum(&Subspace::zero(Q, 3)), x);
        let a = Subspace::span(Q, 2, &[v(&[1, 1])]);
        let b = Subspace::span(Q, 2, &[v(&[1, -1])]);
        assert_eq!(a.sum(&b), Subspace::full(Q, 2));
    }

    #[test]
    fn intersect_examples() {
        let x = Subspace::span(Q, 3, &[e(3, 0), e(3, 1)]);
        let y = Subspace::span(Q, 3, &[e(3, 1), e(3, 2)]);
        assert_eq!(x.intersect(&y), Subspace::span(Q, 3, &[e(3, 1)]));
        assert_eq!(x.intersect(&Subspace::full(Q, 3)), x);
        let a = Subspace::span(Q, 2, &[v(&[1, 0])]);
        let b = Subspace::span(Q, 2, &[v(&[0, 1])]);
        assert!(a.intersect(&b).is_zero());
    }

    #[test]
    fn intersect_skew_planes() {
        // x+y+z=0 and x=y meet in span{(1,1,-2)}
        let p1 = Subspace::span(Q, 3, &[v(&[1, -1, 0]), v(&[0, 1, -1])]);
        let p2 = Subspace::span(Q, 3, &[v(&[1, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(p1.intersect(&p2), Subspace::span(Q, 3, &[v(&[1, 1, -2])]));
    }

    #[test]
    fn containment_examples() {
        let z = Subspace::zero(Q, 2);
        let a = Subspace::span(Q, 2, &[v(&[1, 1])]);
        assert!(z.leq(&a));
        let x = Subspace::span(Q, 3, &[e(3, 0)]);
        assert!(x.leq(&Subspace::span(Q, 3, &[e(3, 0), e(3, 1)])));
        assert!(!a.leq(&Subspace::span(Q, 2, &[v(&[1, 0])])));
    }

    #[test]
    fn mismatches_are_errors() {
        let a = Subspace::full(Q, 2);
        let b = Subspace::full(Q, 3);
        assert!(a.try_sum(&b).is_err());
        assert!(a.try_intersect(&b).is_err());
        let g = Subspace::full(Field::prime(3).unwrap(), 2);
        assert!(matches!(a.try_leq(&g), Err(AlgebraError::FieldMismatch(..))));
    }

    #[test]
    fn annihilator_cuts_out_the_subspace() {
        let w = Subspace::span(Q, 3, &[v(&[1, 2, 3])]);
        let c = w.annihilator();
        assert_eq!(c.rows(), 2);
        assert!(c.mul_vec(&v(&[2, 4, 6])).iter().all(Scalar::is_zero));
        assert!(!c.mul_vec(&v(&[1, 0, 0])).iter().all(Scalar::is_zero));
    }

    #[test]
    fn coordinates_reconstruct_members() {
        let w = Subspace::span(Q, 3, &[v(&[1, 2, 0]), v(&[0, 1, 1])]);
        let x = v(&[2, 7, 3]);
        let c = w.coordinates(&x).unwrap();
        assert_eq!(w.combine(&c), x);
        assert!(w.coordinates(&v(&[0, 0, 1])).is_none());
    }
}
