//! Leonard pairs among tridiagonal pairs: detection through the switching
//! element, affine uniqueness of `A` given its eigenspaces, and split-form
//! generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactalg::{is_zero_vector, Field, Matrix, Scalar, SpanReducer, Subspace, Vector};
use crate::exactalg::Insertion;
use crate::splitdecomp::{tau_basis, SplitError};
use crate::tdpair::{validate_pair, OrderedPair, ShapeVector, Side, TdPairError, TriDiagonalPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LeonardError {
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("the pair has diameter 0")]
    DiameterZero,
    #[error("eigenspace {index} of {side} differs between the two pairs")]
    EigenspaceMismatch { side: Side, index: usize },
    #[error("first split sequence has a zero at position {index}")]
    ZeroVarphi { index: usize },
    #[error("not a Leonard pair (shape {shape})")]
    NotLeonard { shape: ShapeVector },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("generated pair failed validation: {0}")]
    GeneratedPairInvalid(TdPairError),
    #[error("no valid parameters found after {attempts} attempts")]
    ExhaustedRetries { attempts: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl From<SplitError> for LeonardError {
    fn from(e: SplitError) -> Self {
        LeonardError::Invariant(e.to_string())
    }
}

/// A nonzero `X = Σ α_i τ_i(A)` with `X V*_0 ⊆ V*_d`, normalized so that
/// the last nonzero `α_i` is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeonardCertificate {
    pub alpha: Vec<Scalar>,
    pub x: Matrix,
    /// Dimension of the space of all such `α`.
    pub solution_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Detection {
    Leonard(LeonardCertificate),
    NotLeonard { shape: ShapeVector },
}

impl Detection {
    pub fn certificate(&self) -> Option<&LeonardCertificate> {
        match self {
            Detection::Leonard(c) => Some(c),
            Detection::NotLeonard { .. } => None,
        }
    }
}

/// Basis of `{α : Σ α_i τ_i(A) V*_0 ⊆ V*_d}` in RREF.
pub fn switching_solutions(pair: &OrderedPair) -> Subspace {
    let d = pair.diameter();
    let field = pair.field();
    let constraints = pair.vstar(d).annihilator();
    let seeds = pair.vstar(0).basis_vectors();
    let images: Vec<Vec<Vector>> = (0..=d)
        .map(|i| {
            let t = pair.tau_matrix(i);
            seeds.iter().map(|b| constraints.mul_vec(&t.mul_vec(b))).collect()
        })
        .collect();
    // one equation per (seed, constraint row), one unknown per α_i
    let mut rows = Vec::new();
    #[allow(clippy::needless_range_loop)]
    for s in 0..seeds.len() {
        for c in 0..constraints.rows() {
            rows.push((0..=d).map(|i| images[i][s][c].clone()).collect());
        }
    }
    Matrix::from_rows(field, d + 1, rows).expect("constraint system").kernel()
}

/// Decides whether a validated pair is Leonard by solving for a nonzero
/// element of the algebra generated by `A` that maps `V*_0` into `V*_d`.
pub fn detect_leonard(pair: &TriDiagonalPair) -> Detection {
    let detection = detect_ordered(pair.ordered());
    assert_eq!(
        detection.certificate().is_some(),
        pair.shape().is_leonard(),
        "switching solution exists for shape {}",
        pair.shape()
    );
    match detection {
        Detection::NotLeonard { .. } => Detection::NotLeonard {
            shape: pair.shape().clone(),
        },
        found => found,
    }
}

fn detect_ordered(pair: &OrderedPair) -> Detection {
    let solutions = switching_solutions(pair);
    let Some(raw) = solutions.basis_vectors().into_iter().next() else {
        return Detection::NotLeonard {
            shape: ShapeVector::unchecked(pair.eig_a().dims()),
        };
    };
    let last = raw.iter().rposition(|a| !a.is_zero()).expect("nonzero solution");
    let lead = raw[last].inv().expect("nonzero");
    let alpha: Vec<Scalar> = raw.iter().map(|a| a * &lead).collect();
    let x = combine_tau(pair, &alpha);
    assert!(!x.is_zero(), "certificate X is zero");
    assert!(
        pair.vstar(0).image(&x).leq(pair.vstar(pair.diameter())),
        "certificate X does not map V*_0 into V*_d"
    );
    Detection::Leonard(LeonardCertificate {
        alpha,
        x,
        solution_dim: solutions.dim(),
    })
}

fn combine_tau(pair: &OrderedPair, alpha: &[Scalar]) -> Matrix {
    let n = pair.dim();
    alpha
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .fold(Matrix::zeros(pair.field(), n, n), |acc, (i, a)| {
            acc.add(&pair.tau_matrix(i).scale(a))
        })
}

/// `(τ_0(A)u, …, τ_d(A)u)`, checked to be a basis of `V`.
pub fn leonard_basis(
    pair: &OrderedPair,
    cert: &LeonardCertificate,
    u: &[Scalar],
) -> Result<Vec<Vector>, LeonardError> {
    if cert.alpha.len() != pair.diameter() + 1 {
        return Err(LeonardError::HypothesisNotMet("certificate belongs to another pair".into()));
    }
    if u.len() != pair.dim() || is_zero_vector(u) || !pair.vstar(0).contains(u) {
        return Err(LeonardError::HypothesisNotMet("u must be a nonzero vector of V*_0".into()));
    }
    let basis: Vec<Vector> = (0..=pair.diameter())
        .map(|i| pair.tau_matrix(i).mul_vec(u))
        .collect();
    let mut reducer = SpanReducer::new(pair.field(), pair.dim());
    for v in &basis {
        if let Insertion::Dependent(_) = reducer.insert(v) {
            return Err(LeonardError::Invariant("τ_i(A)u are dependent".into()));
        }
    }
    if !reducer.is_full() {
        return Err(LeonardError::Invariant("τ_i(A)u do not span V".into()));
    }
    Ok(basis)
}

/// Matrix of `m` with respect to the given basis (as columns).
pub fn matrix_in_basis(m: &Matrix, basis: &[Vector]) -> Option<Matrix> {
    let p = Matrix::from_columns(m.field(), m.rows(), basis);
    Some(p.inverse()?.mul(m).mul(&p))
}

/// `X = rA + sI`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub r: Scalar,
    pub s: Scalar,
}

/// `A' = rA + sI` and `A*' = r* A* + s* I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineRelation {
    pub a: Affine,
    pub astar: Affine,
}

/// Writes `X ∈ D` with `X V*_0 ⊆ V*_0 + V*_1` as `rA + sI`.
pub fn reduce_to_affine(pair: &OrderedPair, x: &Matrix) -> Result<Affine, LeonardError> {
    if pair.diameter() == 0 {
        return Err(LeonardError::DiameterZero);
    }
    if x.field() != pair.field() || x.rows() != pair.dim() || !x.is_square() {
        return Err(LeonardError::HypothesisNotMet("X has the wrong shape or field".into()));
    }
    let tb = tau_basis(pair)?;
    let alpha = tb
        .coordinates(x)
        .ok_or_else(|| LeonardError::HypothesisNotMet("X is not in the algebra generated by A".into()))?;
    let flag = pair.eig_astar().partial_sum(0, 1);
    if !pair.vstar(0).image(x).leq(&flag) {
        return Err(LeonardError::HypothesisNotMet("X V*_0 is not contained in V*_0 + V*_1".into()));
    }
    if let Some(i) = (2..alpha.len()).find(|&i| !alpha[i].is_zero()) {
        return Err(LeonardError::Invariant(format!("τ-coefficient {i} of X is nonzero")));
    }
    let r = alpha[1].clone();
    let s = &alpha[0] - &(&r * pair.theta(0));
    Ok(Affine { r, s })
}

/// For two pairs sharing all eigenspaces (each side possibly reversed),
/// expresses the operators of `q` affinely in those of `p`.
pub fn affine_relation(p: &OrderedPair, q: &OrderedPair) -> Result<AffineRelation, LeonardError> {
    if p.field() != q.field() || p.dim() != q.dim() {
        return Err(LeonardError::HypothesisNotMet("pairs live on different spaces".into()));
    }
    check_same_eigenspaces(p.eig_a(), q.eig_a(), Side::A)?;
    check_same_eigenspaces(p.eig_astar(), q.eig_astar(), Side::AStar)?;
    let one_side = |p: &OrderedPair, target: &Matrix| -> Result<Affine, LeonardError> {
        if p.diameter() == 0 {
            let r = p.field().one();
            let s = &target[(0, 0)] - p.theta(0);
            return Ok(Affine { r, s });
        }
        let aff = reduce_to_affine(p, target)?;
        if aff.r.is_zero() {
            return Err(LeonardError::Invariant("affine coefficient r is zero".into()));
        }
        Ok(aff)
    };
    Ok(AffineRelation {
        a: one_side(p, q.a())?,
        astar: one_side(&p.swapped(), q.astar())?,
    })
}

fn check_same_eigenspaces(
    p: &crate::exactalg::EigenDecomposition,
    q: &crate::exactalg::EigenDecomposition,
    side: Side,
) -> Result<(), LeonardError> {
    let (ps, qs) = (p.eigenspaces(), q.eigenspaces());
    let k = ps.len().min(qs.len());
    let direct = (0..k).find(|&i| ps[i] != qs[i]);
    if ps.len() == qs.len() {
        let reversed_matches = ps.iter().zip(qs.iter().rev()).all(|(x, y)| x == y);
        if direct.is_none() || reversed_matches {
            return Ok(());
        }
    }
    Err(LeonardError::EigenspaceMismatch {
        side,
        index: direct.unwrap_or(k),
    })
}

/// Eigenvalue sequences and split sequences of a Leonard system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeonardParameterSet {
    pub theta: Vec<Scalar>,
    pub theta_star: Vec<Scalar>,
    /// First split sequence `ϕ_1, …, ϕ_d`.
    pub varphi: Vec<Scalar>,
    /// Second split sequence `φ_1, …, φ_d`.
    pub phi: Vec<Scalar>,
}

impl LeonardParameterSet {
    pub fn new(
        theta: Vec<Scalar>,
        theta_star: Vec<Scalar>,
        varphi: Vec<Scalar>,
        phi: Vec<Scalar>,
    ) -> Result<Self, LeonardError> {
        let params = LeonardParameterSet {
            theta,
            theta_star,
            varphi,
            phi,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn diameter(&self) -> usize {
        self.theta.len().saturating_sub(1)
    }

    pub fn field(&self) -> Field {
        self.theta[0].field()
    }

    /// Lengths, common field, distinct eigenvalues, nonzero split sequences.
    pub fn validate(&self) -> Result<(), LeonardError> {
        let bad = |msg: String| Err(LeonardError::InvalidParameters(msg));
        if self.theta.is_empty() {
            return bad("θ is empty".into());
        }
        let d = self.diameter();
        if self.theta_star.len() != d + 1 || self.varphi.len() != d || self.phi.len() != d {
            return bad(format!("expected {} eigenvalues and {d} split values on each side", d + 1));
        }
        let field = self.field();
        let all = self.theta.iter().chain(&self.theta_star).chain(&self.varphi).chain(&self.phi);
        if all.clone().any(|x| x.field() != field) {
            return bad("mixed fields".into());
        }
        for (name, seq) in [("θ", &self.theta), ("θ*", &self.theta_star)] {
            for i in 0..seq.len() {
                if seq[..i].contains(&seq[i]) {
                    return bad(format!("{name} has a repeated value {}", seq[i]));
                }
            }
        }
        if let Some(i) = self.varphi.iter().position(Scalar::is_zero) {
            return bad(format!("ϕ_{} is zero", i + 1));
        }
        if let Some(i) = self.phi.iter().position(Scalar::is_zero) {
            return bad(format!("φ_{} is zero", i + 1));
        }
        Ok(())
    }
}

/// `S = Σ_r (φ_d φ_{d-1} ⋯ φ_{d-r+1}) / (ϕ_1 ϕ_2 ⋯ ϕ_r) E_r`, with `E_r`
/// the primitive idempotent of `A` for `θ_r`.
pub fn switching_from_sequences(
    params: &LeonardParameterSet,
    eig_a: &crate::exactalg::EigenDecomposition,
) -> Result<Matrix, LeonardError> {
    let d = params.diameter();
    if params.varphi.len() != d || params.phi.len() != d || eig_a.len() != d + 1 {
        return Err(LeonardError::HypothesisNotMet("sequence lengths do not match the diameter".into()));
    }
    if let Some(i) = params.varphi.iter().position(Scalar::is_zero) {
        return Err(LeonardError::ZeroVarphi { index: i + 1 });
    }
    let order = params
        .theta
        .iter()
        .map(|t| eig_a.position(t))
        .collect::<Option<Vec<usize>>>()
        .ok_or_else(|| LeonardError::HypothesisNotMet("θ does not match the eigenvalues of A".into()))?;
    let idem = eig_a.reordered(&order).primitive_idempotents();
    let field = params.field();
    let n = eig_a.dim();
    let mut coeff = field.one();
    let mut s = Matrix::zeros(field, n, n);
    for (r, e) in idem.iter().enumerate() {
        if r > 0 {
            coeff = (&coeff * &params.phi[d - r]).div(&params.varphi[r - 1]).expect("ϕ_r nonzero");
        }
        s = s.add(&e.scale(&coeff));
    }
    Ok(s)
}

/// The switching element obtained by solving, normalized by `α_d = 1`.
pub fn switching_via_solve(pair: &TriDiagonalPair) -> Result<Matrix, LeonardError> {
    match detect_leonard(pair) {
        Detection::NotLeonard { shape } => Err(LeonardError::NotLeonard { shape }),
        Detection::Leonard(cert) => {
            if cert.solution_dim != 1 {
                return Err(LeonardError::Invariant(format!(
                    "switching solutions form a space of dimension {}",
                    cert.solution_dim
                )));
            }
            if !cert.alpha[pair.diameter()].is_one() {
                return Err(LeonardError::Invariant("α_d is zero".into()));
            }
            Ok(cert.x)
        }
    }
}

/// `A` lower bidiagonal with diagonal `θ` and 1 below it; `A*` upper
/// bidiagonal with diagonal `θ*` and `ϕ` above it. The validated pair is
/// returned with its orderings matching `θ` and `θ*`.
pub fn split_form_matrices(params: &LeonardParameterSet) -> (Matrix, Matrix) {
    let field = params.field();
    let n = params.theta.len();
    let mut a = Matrix::zeros(field, n, n);
    let mut astar = Matrix::zeros(field, n, n);
    for i in 0..n {
        a[(i, i)] = params.theta[i].clone();
        astar[(i, i)] = params.theta_star[i].clone();
        if i > 0 {
            a[(i, i - 1)] = field.one();
            astar[(i - 1, i)] = params.varphi[i - 1].clone();
        }
    }
    (a, astar)
}

pub fn generate_split_form(params: &LeonardParameterSet) -> Result<TriDiagonalPair, LeonardError> {
    params.validate()?;
    let (a, astar) = split_form_matrices(params);
    let pair = validate_pair(&a, &astar).map_err(LeonardError::GeneratedPairInvalid)?;
    orient_to(&pair, params).ok_or_else(|| {
        LeonardError::Invariant("validated orderings do not match the parameter order".into())
    })
}

/// The pair with each ordering reversed as needed so that the eigenvalue
/// sequences equal `θ` and `θ*`; `None` if neither orientation matches.
pub fn orient_to(pair: &TriDiagonalPair, params: &LeonardParameterSet) -> Option<TriDiagonalPair> {
    let matches = |seq: &[Scalar], target: &[Scalar]| -> Option<bool> {
        if seq == target {
            Some(false)
        } else if seq.iter().rev().eq(target.iter()) {
            Some(true)
        } else {
            None
        }
    };
    let rev_a = matches(pair.eig_a().eigenvalues(), &params.theta)?;
    let rev_astar = matches(pair.eig_astar().eigenvalues(), &params.theta_star)?;
    Some(pair.with_reversed(rev_a, rev_astar))
}

const RANDOM_ATTEMPTS: usize = 2000;

/// Deterministic pseudo-random Leonard pair of diameter `d` over `field`.
pub fn random_leonard(
    field: Field,
    d: usize,
    seed: u64,
) -> Result<(LeonardParameterSet, TriDiagonalPair), LeonardError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_ATTEMPTS {
        let Some(params) = sample_parameters(field, d, &mut rng) else {
            continue;
        };
        if params.validate().is_err() {
            continue;
        }
        if let Ok(pair) = generate_split_form(&params) {
            return Ok((params, pair));
        }
    }
    Err(LeonardError::ExhaustedRetries {
        attempts: RANDOM_ATTEMPTS,
    })
}

fn random_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field.modulus() {
        Some(p) => field.from_i64(rng.gen_range(0..p as i64)),
        None => field.from_i64(rng.gen_range(-6..=6)),
    }
}

/// Eigenvalue sequences satisfying a common three-term recurrence, and split
/// sequences determined by them and a free `φ_1`.
fn sample_parameters(field: Field, d: usize, rng: &mut ChaCha8Rng) -> Option<LeonardParameterSet> {
    let beta_plus_one = &random_scalar(field, rng) + &field.one();
    let sequence = |rng: &mut ChaCha8Rng| {
        let mut t: Vec<Scalar> = (0..3).map(|_| random_scalar(field, rng)).collect();
        while t.len() < d + 1 {
            let i = t.len();
            let step = &beta_plus_one * &(&t[i - 1] - &t[i - 2]);
            t.push(&t[i - 3] + &step);
        }
        t.truncate(d + 1);
        t
    };
    let theta = sequence(rng);
    let theta_star = sequence(rng);
    if d == 0 {
        return Some(LeonardParameterSet {
            theta,
            theta_star,
            varphi: Vec::new(),
            phi: Vec::new(),
        });
    }
    let phi_1 = random_scalar(field, rng);
    let span = &theta[0] - &theta[d];
    // Σ_{h<i} (θ_h - θ_{d-h}) / (θ_0 - θ_d)
    let partial = |i: usize| -> Option<Scalar> {
        let num = (0..i).fold(field.zero(), |acc, h| &acc + &(&theta[h] - &theta[d - h]));
        num.div(&span)
    };
    let varphi_at = |i: usize| -> Option<Scalar> {
        let lead = &phi_1 * &partial(i)?;
        Some(&lead + &(&(&theta_star[i] - &theta_star[0]) * &(&theta[i - 1] - &theta[d])))
    };
    let varphi_1 = varphi_at(1)?;
    let varphi = (1..=d).map(varphi_at).collect::<Option<Vec<_>>>()?;
    let phi = (1..=d)
        .map(|i| {
            let lead = &varphi_1 * &partial(i)?;
            Some(&lead + &(&(&theta_star[i] - &theta_star[0]) * &(&theta[d - i + 1] - &theta[0])))
        })
        .collect::<Option<Vec<_>>>()?;
    Some(LeonardParameterSet {
        theta,
        theta_star,
        varphi,
        phi,
    })
}
