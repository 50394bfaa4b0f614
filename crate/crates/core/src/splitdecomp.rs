//! The split decomposition `V = U_0 + … + U_d` with
//! `U_i = (V*_0 + … + V*_i) ∩ (V_i + … + V_d)`, the τ-basis of the algebra
//! generated by `A`, and per-identity verification reports.

use thiserror::Error;

use crate::exactalg::{is_zero_vector, Matrix, Polynomial, SpanReducer, Subspace, Vector};
use crate::exactalg::Insertion;
use crate::tdpair::OrderedPair;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("τ_{index}(A)u = 0")]
    TauKernel { index: usize },
    #[error("τ_{index}(A)u is not in U_{index}")]
    OutsideSplitComponent { index: usize },
    #[error("the vectors τ_i(A)u are linearly dependent")]
    Dependent,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Booleans for each identity the split decomposition must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    /// `V = U_0 ⊕ … ⊕ U_d`.
    pub direct_sum: bool,
    /// `U_0 + … + U_i = V*_0 + … + V*_i`, per i.
    pub lower_partial_sums: Vec<bool>,
    /// `U_i + … + U_d = V_i + … + V_d`, per i.
    pub upper_partial_sums: Vec<bool>,
    /// `τ_i(A) U_0 ⊆ U_i`, per i.
    pub tau_containments: Vec<bool>,
}

impl SplitReport {
    pub fn all_hold(&self) -> bool {
        self.direct_sum
            && self.lower_partial_sums.iter().all(|&b| b)
            && self.upper_partial_sums.iter().all(|&b| b)
            && self.tau_containments.iter().all(|&b| b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitDecomposition {
    pair: OrderedPair,
    components: Vec<Subspace>,
    report: SplitReport,
}

impl SplitDecomposition {
    /// Wraps arbitrary components without recomputing them; the report is
    /// evaluated on what was supplied. Useful for negative controls.
    pub fn from_components(pair: &OrderedPair, components: Vec<Subspace>) -> Self {
        assert_eq!(components.len(), pair.diameter() + 1, "one component per eigenspace");
        let report = evaluate(pair, &components);
        SplitDecomposition {
            pair: pair.clone(),
            components,
            report,
        }
    }

    pub fn pair(&self) -> &OrderedPair {
        &self.pair
    }

    pub fn components(&self) -> &[Subspace] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Subspace {
        &self.components[i]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(Subspace::dim).collect()
    }

    pub fn report(&self) -> &SplitReport {
        &self.report
    }
}

/// Computes every `U_i` from its defining intersection and evaluates the
/// direct-sum, partial-sum and τ-containment identities.
pub fn split_subspaces(pair: &OrderedPair) -> SplitDecomposition {
    let d = pair.diameter();
    let components = (0..=d)
        .map(|i| {
            let lower = pair.eig_astar().partial_sum(0, i as isize);
            let upper = pair.eig_a().partial_sum(i, d as isize);
            lower.intersect(&upper)
        })
        .collect();
    SplitDecomposition::from_components(pair, components)
}

fn evaluate(pair: &OrderedPair, u: &[Subspace]) -> SplitReport {
    let d = pair.diameter();
    let (field, n) = (pair.field(), pair.dim());
    let mut running = Subspace::zero(field, n);
    let mut dims = 0;
    let mut direct_sum = true;
    for ui in u {
        running = running.sum(ui);
        dims += ui.dim();
        direct_sum &= running.dim() == dims;
    }
    direct_sum &= running.is_full();

    let lower_partial_sums = (0..=d)
        .map(|i| Subspace::sum_all(field, n, &u[..=i]) == pair.eig_astar().partial_sum(0, i as isize))
        .collect();
    let upper_partial_sums = (0..=d)
        .map(|i| Subspace::sum_all(field, n, &u[i..]) == pair.eig_a().partial_sum(i, d as isize))
        .collect();
    let tau_containments = (0..=d)
        .map(|i| u[0].image(&pair.tau_matrix(i)).leq(&u[i]))
        .collect();
    SplitReport {
        direct_sum,
        lower_partial_sums,
        upper_partial_sums,
        tau_containments,
    }
}

/// Per-index results for the raising and lowering containments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaisingLoweringReport {
    /// `(A - θ_i I) U_i ⊆ U_{i+1}` with `U_{d+1} = 0`.
    pub raising: Vec<bool>,
    /// `(A* - θ*_i I) U_i ⊆ U_{i-1}` with `U_{-1} = 0`.
    pub lowering: Vec<bool>,
}

impl RaisingLoweringReport {
    pub fn all_hold(&self) -> bool {
        self.raising.iter().chain(&self.lowering).all(|&b| b)
    }
}

pub fn verify_raising_lowering(sd: &SplitDecomposition) -> RaisingLoweringReport {
    let pair = sd.pair();
    let d = pair.diameter();
    let zero = Subspace::zero(pair.field(), pair.dim());
    let u = sd.components();
    let raising = (0..=d)
        .map(|i| {
            let target = if i < d { &u[i + 1] } else { &zero };
            u[i].image(&pair.a().shift(pair.theta(i))).leq(target)
        })
        .collect();
    let lowering = (0..=d)
        .map(|i| {
            let target = if i > 0 { &u[i - 1] } else { &zero };
            u[i].image(&pair.astar().shift(pair.theta_star(i))).leq(target)
        })
        .collect();
    RaisingLoweringReport { raising, lowering }
}

/// The polynomials `τ_0, …, τ_d` and the matrices `τ_i(A)`, a basis of the
/// subalgebra generated by `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauBasis {
    pub taus: Vec<Polynomial>,
    pub matrices: Vec<Matrix>,
}

impl TauBasis {
    /// Coefficients `α` with `X = Σ α_i τ_i(A)`, or `None` if `X` is not in
    /// the span.
    pub fn coordinates(&self, x: &Matrix) -> Option<Vector> {
        let field = x.field();
        let mut reducer = SpanReducer::new(field, x.entries().len());
        for m in &self.matrices {
            reducer.insert(m.entries());
        }
        match reducer.insert(x.entries()) {
            Insertion::Independent(_) => None,
            // Σ t_j τ_j(A) + 1·X = 0
            Insertion::Dependent(t) => Some(t[..self.matrices.len()].iter().map(|c| -c).collect()),
        }
    }

    /// `Σ α_i τ_i(A)`.
    pub fn combine(&self, alpha: &[crate::exactalg::Scalar]) -> Matrix {
        let m0 = &self.matrices[0];
        self.matrices
            .iter()
            .zip(alpha)
            .fold(Matrix::zeros(m0.field(), m0.rows(), m0.cols()), |acc, (m, a)| acc.add(&m.scale(a)))
    }
}

pub fn tau_basis(pair: &OrderedPair) -> Result<TauBasis, SplitError> {
    let d = pair.diameter();
    let taus: Vec<Polynomial> = (0..=d).map(|i| pair.tau(i)).collect();
    let matrices: Vec<Matrix> = taus.iter().map(|t| t.eval_matrix(pair.a())).collect();
    let mut reducer = SpanReducer::new(pair.field(), pair.dim() * pair.dim());
    for m in &matrices {
        if let Insertion::Dependent(_) = reducer.insert(m.entries()) {
            return Err(SplitError::Invariant("τ_i(A) are linearly dependent".into()));
        }
    }
    Ok(TauBasis { taus, matrices })
}

/// `(τ_i(A) u)_{i=0..d}` for nonzero `u ∈ V*_0`, checked to lie in the
/// matching split components and to be linearly independent.
pub fn tau_images(pair: &OrderedPair, u: &[crate::exactalg::Scalar]) -> Result<Vec<Vector>, SplitError> {
    if u.len() != pair.dim() || is_zero_vector(u) {
        return Err(SplitError::HypothesisNotMet("u must be a nonzero vector of V".into()));
    }
    if !pair.vstar(0).contains(u) {
        return Err(SplitError::HypothesisNotMet("u is not in V*_0".into()));
    }
    let d = pair.diameter();
    let images: Vec<Vector> = (0..=d).map(|i| pair.tau_matrix(i).mul_vec(u)).collect();
    if let Some(index) = images.iter().position(|v| is_zero_vector(v)) {
        return Err(SplitError::TauKernel { index });
    }
    let sd = split_subspaces(pair);
    if let Some(index) = (0..=d).find(|&i| !sd.component(i).contains(&images[i])) {
        return Err(SplitError::OutsideSplitComponent { index });
    }
    let mut reducer = SpanReducer::new(pair.field(), pair.dim());
    for v in &images {
        if let Insertion::Dependent(_) = reducer.insert(v) {
            return Err(SplitError::Dependent);
        }
    }
    Ok(images)
}
