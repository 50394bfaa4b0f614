//! Validation of candidate tridiagonal pairs: diagonalizability, the
//! block-tridiagonal eigenspace orderings, irreducibility, diameter and shape.

mod irreducible;
mod ordering;
mod witness;

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::exactalg::{AlgebraError, EigenDecomposition, Field, Matrix, Polynomial, Scalar, Subspace};

pub use irreducible::{
    closure_algebra, irreducible, is_common_invariant_proper, spin, IrreducibilityReport,
    IrreducibilityVerdict,
};
pub use ordering::{support_graph, support_path_orderings};
pub use witness::{reducibility_witness_from_tau_kernel, WitnessError};

/// Which operator of the pair an error refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    AStar,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::A => write!(f, "A"),
            Side::AStar => write!(f, "A*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TdPairError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("the underlying space must have positive dimension")]
    EmptySpace,
    #[error("{side} is not diagonalizable over the field: {reason}")]
    NotDiagonalizableOverField { side: Side, reason: String },
    #[error("no ordering of the eigenspaces of {side} makes the partner act block-tridiagonally")]
    NoTridiagonalOrdering { side: Side },
    #[error("A has {d_plus_one} eigenspaces but A* has {delta_plus_one}", d_plus_one = .d + 1, delta_plus_one = .delta + 1)]
    DiameterMismatch { d: usize, delta: usize },
    #[error("A and A* share the invariant subspace {witness}")]
    NotIrreducible { witness: Subspace },
    #[error("irreducibility could not be decided: {diagnostic}")]
    InconclusiveIrreducibility { diagnostic: String },
    #[error("shape invariant violated: {0}")]
    ShapeInvariant(String),
}

/// The eigenspace dimensions `(ρ_0, …, ρ_d)` of a tridiagonal pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShapeVector(Vec<usize>);

impl ShapeVector {
    /// Checks `ρ_i ≥ 1`, symmetry and unimodality.
    pub fn new(rho: Vec<usize>) -> Result<Self, TdPairError> {
        if rho.is_empty() || rho.contains(&0) {
            return Err(TdPairError::ShapeInvariant(format!("{rho:?} has a zero entry")));
        }
        let shape = ShapeVector(rho);
        if !shape.is_symmetric() {
            return Err(TdPairError::ShapeInvariant(format!("{shape} is not symmetric")));
        }
        if !shape.is_unimodal() {
            return Err(TdPairError::ShapeInvariant(format!("{shape} is not unimodal")));
        }
        Ok(shape)
    }

    /// Any vector of counts, without the shape checks.
    pub fn unchecked(rho: Vec<usize>) -> Self {
        ShapeVector(rho)
    }

    pub fn rho(&self) -> &[usize] {
        &self.0
    }

    pub fn diameter(&self) -> usize {
        self.0.len() - 1
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// `ρ_{i-1} ≤ ρ_i` for `1 ≤ i ≤ d/2`.
    pub fn is_unimodal(&self) -> bool {
        let d = self.diameter();
        (1..=d / 2).all(|i| self.0[i - 1] <= self.0[i])
    }

    /// Shape `(1, 1, …, 1)`.
    pub fn is_leonard(&self) -> bool {
        self.0.iter().all(|&r| r == 1)
    }
}

impl fmt::Display for ShapeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A pair `A, A*` with its eigenspaces listed in a fixed order
/// `V_0..V_d` and `V*_0..V*_δ`. No axioms are implied by this type alone;
/// [`TriDiagonalPair`] is the validated form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedPair {
    eig_a: EigenDecomposition,
    eig_astar: EigenDecomposition,
}

impl OrderedPair {
    pub fn from_decompositions(eig_a: EigenDecomposition, eig_astar: EigenDecomposition) -> Self {
        assert_eq!(eig_a.dim(), eig_astar.dim(), "operators on different spaces");
        OrderedPair { eig_a, eig_astar }
    }

    /// Diagonalizes both operators and picks block-tridiagonal orderings
    /// (axioms (i)–(iii)) without checking irreducibility. Among the two
    /// traversals on each side the one with the lexicographically least
    /// eigenvalue sequence is used; the other is returned as the alternative.
    pub fn discover(a: &Matrix, astar: &Matrix) -> Result<(Self, Alternatives), TdPairError> {
        check_operands(a, astar)?;
        let diag = |m: &Matrix, side| {
            EigenDecomposition::new(m).map_err(|e| match e {
                AlgebraError::NotDiagonalizableOverField { reason, .. } => {
                    TdPairError::NotDiagonalizableOverField { side, reason }
                }
                other => TdPairError::Algebra(other),
            })
        };
        let eig_a = diag(a, Side::A)?;
        let eig_astar = diag(astar, Side::AStar)?;
        let (eig_a, alt_a) = choose_ordering(&eig_a, astar, Side::A)?;
        let (eig_astar, alt_astar) = choose_ordering(&eig_astar, a, Side::AStar)?;
        if eig_a.len() != eig_astar.len() {
            return Err(TdPairError::DiameterMismatch {
                d: eig_a.diameter(),
                delta: eig_astar.diameter(),
            });
        }
        Ok((
            OrderedPair { eig_a, eig_astar },
            Alternatives {
                ordering_a: alt_a,
                ordering_astar: alt_astar,
            },
        ))
    }

    pub fn a(&self) -> &Matrix {
        self.eig_a.operator()
    }

    pub fn astar(&self) -> &Matrix {
        self.eig_astar.operator()
    }

    pub fn eig_a(&self) -> &EigenDecomposition {
        &self.eig_a
    }

    pub fn eig_astar(&self) -> &EigenDecomposition {
        &self.eig_astar
    }

    pub fn field(&self) -> Field {
        self.a().field()
    }

    pub fn dim(&self) -> usize {
        self.a().rows()
    }

    /// Number of A-eigenspaces minus one.
    pub fn diameter(&self) -> usize {
        self.eig_a.diameter()
    }

    pub fn theta(&self, i: usize) -> &Scalar {
        self.eig_a.eigenvalue(i)
    }

    pub fn theta_star(&self, i: usize) -> &Scalar {
        self.eig_astar.eigenvalue(i)
    }

    pub fn v(&self, i: usize) -> &Subspace {
        self.eig_a.eigenspace(i)
    }

    pub fn vstar(&self, i: usize) -> &Subspace {
        self.eig_astar.eigenspace(i)
    }

    /// The pair `A*, A` with the same orderings.
    pub fn swapped(&self) -> OrderedPair {
        OrderedPair {
            eig_a: self.eig_astar.clone(),
            eig_astar: self.eig_a.clone(),
        }
    }

    /// `τ_i = (λ - θ_0)(λ - θ_1)…(λ - θ_{i-1})`.
    pub fn tau(&self, i: usize) -> Polynomial {
        Polynomial::from_roots(self.field(), &self.eig_a.eigenvalues()[..i])
    }

    pub fn tau_matrix(&self, i: usize) -> Matrix {
        self.tau(i).eval_matrix(self.a())
    }

    /// `A* V_i ⊆ V_{i-1} + V_i + V_{i+1}` for every i, and the same with the
    /// roles of A and A* exchanged.
    pub fn is_block_tridiagonal(&self) -> bool {
        fn one_side(eig: &EigenDecomposition, partner: &Matrix) -> bool {
            let last = eig.len() as isize - 1;
            (0..eig.len()).all(|i| {
                let lo = i.saturating_sub(1);
                let hi = (i as isize + 1).min(last);
                eig.eigenspace(i).image(partner).leq(&eig.partial_sum(lo, hi))
            })
        }
        one_side(&self.eig_a, self.astar()) && one_side(&self.eig_astar, self.a())
    }
}

/// The traversal not chosen on each side (eigenvalue sequences).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alternatives {
    pub ordering_a: Option<Vec<Scalar>>,
    pub ordering_astar: Option<Vec<Scalar>>,
}

fn check_operands(a: &Matrix, astar: &Matrix) -> Result<(), TdPairError> {
    if a.field() != astar.field() {
        return Err(AlgebraError::FieldMismatch(a.field(), astar.field()).into());
    }
    if !a.is_square() || !astar.is_square() || a.rows() != astar.rows() {
        return Err(AlgebraError::Shape(format!(
            "A is {}x{} and A* is {}x{}",
            a.rows(),
            a.cols(),
            astar.rows(),
            astar.cols()
        ))
        .into());
    }
    if a.rows() == 0 {
        return Err(TdPairError::EmptySpace);
    }
    Ok(())
}

fn lex_cmp(a: &[Scalar], b: &[Scalar]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.canonical_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn choose_ordering(
    eig: &EigenDecomposition,
    partner: &Matrix,
    side: Side,
) -> Result<(EigenDecomposition, Option<Vec<Scalar>>), TdPairError> {
    let mut candidates: Vec<EigenDecomposition> = support_path_orderings(eig, partner)
        .iter()
        .map(|order| eig.reordered(order))
        .collect();
    if candidates.is_empty() {
        return Err(TdPairError::NoTridiagonalOrdering { side });
    }
    candidates.sort_by(|x, y| lex_cmp(x.eigenvalues(), y.eigenvalues()));
    let alternative = candidates.get(1).map(|e| e.eigenvalues().to_vec());
    Ok((candidates.swap_remove(0), alternative))
}

/// A pair that satisfies all four tridiagonal-pair axioms, with its
/// eigenspace orderings, diameter and shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriDiagonalPair {
    pair: OrderedPair,
    shape: ShapeVector,
    alternatives: Alternatives,
    irreducibility: IrreducibilityReport,
}

impl TriDiagonalPair {
    pub fn ordered(&self) -> &OrderedPair {
        &self.pair
    }

    pub fn shape(&self) -> &ShapeVector {
        &self.shape
    }

    pub fn diameter(&self) -> usize {
        self.pair.diameter()
    }

    pub fn alternatives(&self) -> &Alternatives {
        &self.alternatives
    }

    pub fn irreducibility(&self) -> &IrreducibilityReport {
        &self.irreducibility
    }

    pub fn a(&self) -> &Matrix {
        self.pair.a()
    }

    pub fn astar(&self) -> &Matrix {
        self.pair.astar()
    }

    pub fn field(&self) -> Field {
        self.pair.field()
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }

    /// Same pair with the A-side (and/or A*-side) ordering reversed. Every
    /// axiom is preserved by reversal, so the result is still validated.
    pub fn with_reversed(&self, reverse_a: bool, reverse_astar: bool) -> TriDiagonalPair {
        let flip = |eig: &EigenDecomposition, rev: bool| if rev { eig.reversed() } else { eig.clone() };
        let flip_alt = |eig: &EigenDecomposition, alt: &Option<Vec<Scalar>>, rev: bool| {
            if rev {
                Some(eig.eigenvalues().to_vec())
            } else {
                alt.clone()
            }
        };
        TriDiagonalPair {
            pair: OrderedPair {
                eig_a: flip(&self.pair.eig_a, reverse_a),
                eig_astar: flip(&self.pair.eig_astar, reverse_astar),
            },
            shape: self.shape.clone(),
            alternatives: Alternatives {
                ordering_a: flip_alt(&self.pair.eig_a, &self.alternatives.ordering_a, reverse_a),
                ordering_astar: flip_alt(
                    &self.pair.eig_astar,
                    &self.alternatives.ordering_astar,
                    reverse_astar,
                ),
            },
            irreducibility: self.irreducibility.clone(),
        }
    }
}

impl std::ops::Deref for TriDiagonalPair {
    type Target = OrderedPair;
    fn deref(&self) -> &OrderedPair {
        &self.pair
    }
}

/// Runs the full axiom pipeline on a candidate `(A, A*)`.
pub fn validate_pair(a: &Matrix, astar: &Matrix) -> Result<TriDiagonalPair, TdPairError> {
    let (pair, alternatives) = match OrderedPair::discover(a, astar) {
        Ok(found) => found,
        Err(e @ TdPairError::NoTridiagonalOrdering { .. }) => {
            // a disconnected support graph usually comes with a common invariant subspace
            if let IrreducibilityVerdict::Reducible { witness } = irreducible(a, astar).verdict {
                return Err(TdPairError::NotIrreducible { witness });
            }
            return Err(e);
        }
        Err(e) => return Err(e),
    };
    let irreducibility = irreducible(a, astar);
    match &irreducibility.verdict {
        IrreducibilityVerdict::Irreducible => {}
        IrreducibilityVerdict::Reducible { witness } => {
            return Err(TdPairError::NotIrreducible {
                witness: witness.clone(),
            })
        }
        IrreducibilityVerdict::Inconclusive { diagnostic } => {
            return Err(TdPairError::InconclusiveIrreducibility {
                diagnostic: diagnostic.clone(),
            })
        }
    }
    let shape = shape_of(&pair)?;
    Ok(TriDiagonalPair {
        pair,
        shape,
        alternatives,
        irreducibility,
    })
}

fn shape_of(pair: &OrderedPair) -> Result<ShapeVector, TdPairError> {
    let rho = pair.eig_a().dims();
    let rho_star = pair.eig_astar().dims();
    if rho != rho_star {
        return Err(TdPairError::ShapeInvariant(format!(
            "dim V_i = {rho:?} but dim V*_i = {rho_star:?}"
        )));
    }
    ShapeVector::new(rho)
}

/// Recomputes the shape of a validated pair, re-asserting `dim V_i = dim V*_i`,
/// symmetry and unimodality.
pub fn shape(pair: &TriDiagonalPair) -> Result<ShapeVector, TdPairError> {
    let s = shape_of(pair.ordered())?;
    if &s != pair.shape() {
        return Err(TdPairError::ShapeInvariant(format!(
            "recorded shape {} differs from recomputed {s}",
            pair.shape()
        )));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn krawtchouk() -> (Matrix, Matrix) {
        (
            Matrix::from_i64(Q, &[&[0, 0, 0], &[1, 1, 0], &[0, 1, 2]]),
            Matrix::from_i64(Q, &[&[0, 1, 0], &[0, 1, 1], &[0, 0, 2]]),
        )
    }

    #[test]
    fn diameter_zero_pair() {
        let a = Matrix::from_i64(Q, &[&[3]]);
        let b = Matrix::from_i64(Q, &[&[5]]);
        let p = validate_pair(&a, &b).unwrap();
        assert_eq!(p.diameter(), 0);
        assert_eq!(p.shape().rho(), &[1]);
        assert_eq!(shape(&p).unwrap().rho(), &[1]);
    }

    #[test]
    fn krawtchouk_split_form_validates() {
        let (a, b) = krawtchouk();
        let p = validate_pair(&a, &b).unwrap();
        assert_eq!(p.diameter(), 2);
        assert_eq!(p.shape().rho(), &[1, 1, 1]);
        let theta: Vec<String> = p.eig_a().eigenvalues().iter().map(ToString::to_string).collect();
        assert_eq!(theta, ["0", "1", "2"]);
        assert_eq!(
            p.alternatives().ordering_a,
            Some(vec![Q.from_i64(2), Q.one(), Q.zero()])
        );
        assert!(p.is_block_tridiagonal());
    }

    #[test]
    fn reducible_diagonal_pair_is_rejected_with_witness() {
        // d = 1 with diagonal partner: the support graph has no edge
        let d = Matrix::diagonal(Q, &[Q.zero(), Q.one()]);
        let e0 = Subspace::span(Q, 2, &[vec![Q.one(), Q.zero()]]);
        match validate_pair(&d, &d) {
            Err(TdPairError::NotIrreducible { witness }) => assert_eq!(witness, e0),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(irreducible(&d, &d).witness(), Some(&e0));
    }

    #[test]
    fn direct_sum_is_not_irreducible() {
        // Krawtchouk pair ⊕ a 1-dim pair sharing eigenvalues (0, 0)
        let (a, b) = krawtchouk();
        let grow = |m: &Matrix| {
            let mut g = Matrix::zeros(Q, 4, 4);
            for i in 0..3 {
                for j in 0..3 {
                    g[(i, j)] = m[(i, j)].clone();
                }
            }
            g
        };
        match validate_pair(&grow(&a), &grow(&b)) {
            Err(TdPairError::NotIrreducible { witness }) => {
                assert!(is_common_invariant_proper(&witness, &[&grow(&a), &grow(&b)]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nilpotent_operator_fails_axiom_one() {
        let a = Matrix::from_i64(Q, &[&[0, 1], &[0, 0]]);
        let b = Matrix::identity(Q, 2);
        assert!(matches!(
            validate_pair(&a, &b),
            Err(TdPairError::NotDiagonalizableOverField { side: Side::A, .. })
        ));
    }

    #[test]
    fn diameter_mismatch_is_reported() {
        // A has 3 eigenspaces; A* = (1,1,1)(0,1,0)^T has 2, each side a path
        let a = Matrix::diagonal(Q, &[Q.zero(), Q.one(), Q.from_i64(2)]);
        let b = Matrix::from_i64(Q, &[&[0, 1, 0], &[0, 1, 0], &[0, 1, 0]]);
        assert_eq!(
            validate_pair(&a, &b),
            Err(TdPairError::DiameterMismatch { d: 2, delta: 1 })
        );
    }

    #[test]
    fn operand_errors() {
        let a = Matrix::zeros(Q, 2, 2);
        let b = Matrix::zeros(Q, 3, 3);
        assert!(matches!(validate_pair(&a, &b), Err(TdPairError::Algebra(_))));
        let e = Matrix::zeros(Q, 0, 0);
        assert_eq!(validate_pair(&e, &e), Err(TdPairError::EmptySpace));
    }

    #[test]
    fn shape_checks() {
        assert!(ShapeVector::new(vec![1, 2, 1]).is_ok());
        assert!(ShapeVector::new(vec![1, 2]).is_err());
        assert!(ShapeVector::new(vec![2, 1, 2]).is_err());
        assert!(ShapeVector::new(vec![1, 0, 1]).is_err());
        assert!(ShapeVector::new(vec![1, 1, 1]).unwrap().is_leonard());
    }
}
