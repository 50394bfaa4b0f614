use thiserror::Error;

use crate::exactalg::{is_zero_vector, EigenDecomposition, Scalar, Subspace};

use super::irreducible::is_common_invariant_proper;
use super::OrderedPair;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("constructed subspace {0} is not a common invariant subspace")]
    CheckFailed(Subspace),
}

/// For a nonzero `u ∈ V*_0` killed by `τ_i(A)` (`1 ≤ i ≤ d`), builds
///
/// `W = Σ_{r<i} (V*_0 + … + V*_r) ∩ (V_0 + … + V_{i-r-1})`,
///
/// which contains `u`, misses `V*_d`, and is invariant under both operators
/// whenever the orderings are block-tridiagonal. The three properties are
/// checked before the subspace is returned.
pub fn reducibility_witness_from_tau_kernel(
    eig_a: &EigenDecomposition,
    eig_astar: &EigenDecomposition,
    u: &[Scalar],
    i: usize,
) -> Result<Subspace, WitnessError> {
    let pair = OrderedPair::from_decompositions(eig_a.clone(), eig_astar.clone());
    let d = pair.diameter();
    let not_met = |msg: String| Err(WitnessError::HypothesisNotMet(msg));
    if i == 0 || i > d {
        return not_met(format!("index {i} outside 1..={d}"));
    }
    if u.len() != pair.dim() || is_zero_vector(u) {
        return not_met("u must be a nonzero vector of V".into());
    }
    if !pair.vstar(0).contains(u) {
        return not_met("u is not in V*_0".into());
    }
    if !is_zero_vector(&pair.tau_matrix(i).mul_vec(u)) {
        return not_met(format!("τ_{i}(A)u ≠ 0"));
    }
    let w = (0..i).fold(Subspace::zero(pair.field(), pair.dim()), |acc, r| {
        let flag_star = eig_astar.partial_sum(0, r as isize);
        let flag = eig_a.partial_sum(0, (i - r - 1) as isize);
        acc.sum(&flag_star.intersect(&flag))
    });
    if !w.contains(u) || !is_common_invariant_proper(&w, &[pair.a(), pair.astar()]) {
        return Err(WitnessError::CheckFailed(w));
    }
    Ok(w)
}
