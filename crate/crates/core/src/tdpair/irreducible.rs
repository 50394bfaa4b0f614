use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{
    EigenDecomposition, Field, Insertion, Matrix, Polynomial, Scalar, SpanReducer, Subspace, Vector,
};

/// Cap on the number of seed vectors spun up from one kernel before the
/// finite-field test gives up.
const MAX_KERNEL_SEEDS: u64 = 250_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrreducibilityVerdict {
    Irreducible,
    /// `witness` is a common invariant subspace with `0 ≠ W ≠ V`.
    Reducible { witness: Subspace },
    Inconclusive { diagnostic: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityReport {
    pub verdict: IrreducibilityVerdict,
    /// Dimension of the unital algebra generated by `A` and `A*`.
    pub closure_dim: usize,
}

impl IrreducibilityReport {
    pub fn is_irreducible(&self) -> bool {
        matches!(self.verdict, IrreducibilityVerdict::Irreducible)
    }

    pub fn witness(&self) -> Option<&Subspace> {
        match &self.verdict {
            IrreducibilityVerdict::Reducible { witness } => Some(witness),
            _ => None,
        }
    }
}

/// True iff `0 ≠ W ≠ V` and `W` is invariant under every generator.
pub fn is_common_invariant_proper(w: &Subspace, generators: &[&Matrix]) -> bool {
    !w.is_zero() && !w.is_full() && generators.iter().all(|g| w.is_invariant_under(g))
}

fn reducible(w: Subspace, a: &Matrix, astar: &Matrix) -> IrreducibilityVerdict {
    assert!(
        is_common_invariant_proper(&w, &[a, astar]),
        "reducibility witness {w} failed its invariance check"
    );
    IrreducibilityVerdict::Reducible { witness: w }
}

/// Basis of the unital algebra generated by the given matrices, as a
/// subspace of End(V): close `{I}` under right multiplication by generators.
pub fn closure_algebra(generators: &[&Matrix]) -> Vec<Matrix> {
    let first = generators.first().expect("at least one generator");
    let field = first.field();
    let n = first.rows();
    let mut reducer = SpanReducer::new(field, n * n);
    let identity = Matrix::identity(field, n);
    reducer.insert(identity.entries());
    let mut basis = vec![identity];
    let mut next = 0;
    while next < basis.len() && !reducer.is_full() {
        let x = basis[next].clone();
        next += 1;
        for g in generators {
            let y = x.mul(g);
            if let Insertion::Independent(_) = reducer.insert(y.entries()) {
                basis.push(y);
            }
        }
    }
    basis
}

/// Smallest subspace containing `v` and invariant under every generator.
pub fn spin(v: &[Scalar], generators: &[&Matrix]) -> Subspace {
    let field = v[0].field();
    let n = v.len();
    let mut reducer = SpanReducer::new(field, n);
    let mut found: Vec<Vector> = Vec::new();
    if let Insertion::Independent(_) = reducer.insert(v) {
        found.push(v.to_vec());
    }
    let mut next = 0;
    while next < found.len() && !reducer.is_full() {
        let x = found[next].clone();
        next += 1;
        for g in generators {
            let y = g.mul_vec(&x);
            if let Insertion::Independent(_) = reducer.insert(&y) {
                found.push(y);
            }
        }
    }
    Subspace::span(field, n, &found)
}

/// Decides whether `A, A*` have a common invariant subspace other than 0 and V.
///
/// The fast path is the closure algebra being all of End(V). Over GF(p) the
/// remaining cases use a kernel spin-up test with its dual, which is complete.
/// Over Q every common invariant subspace splits along the eigenspaces of a
/// diagonalizable generator, so seeds are searched eigenspace by eigenspace;
/// this is complete when every eigenspace has dimension at most 2.
pub fn irreducible(a: &Matrix, astar: &Matrix) -> IrreducibilityReport {
    assert!(a.is_square() && astar.is_square() && a.rows() == astar.rows());
    assert_eq!(a.field(), astar.field());
    let n = a.rows();
    let algebra = closure_algebra(&[a, astar]);
    let closure_dim = algebra.len();
    let verdict = if n <= 1 || closure_dim == n * n {
        IrreducibilityVerdict::Irreducible
    } else {
        match a.field() {
            Field::Prime(_) => spin_up_test(a, astar, &algebra),
            Field::Rationals => eigenspace_search(a, astar, &algebra),
        }
    };
    IrreducibilityReport { verdict, closure_dim }
}

fn standard_basis_seed(a: &Matrix, astar: &Matrix) -> Option<Subspace> {
    let field = a.field();
    let n = a.rows();
    (0..n).find_map(|i| {
        let mut e = vec![field.zero(); n];
        e[i] = field.one();
        let w = spin(&e, &[a, astar]);
        (!w.is_full()).then_some(w)
    })
}

/// Singular element of the algebra with the smallest nullity found among the
/// basis elements (and a few random combinations) shifted by an eigenvalue.
fn singular_element(algebra: &[Matrix], rng: &mut ChaCha8Rng) -> Option<(Matrix, Subspace)> {
    let field = algebra[0].field();
    let mut candidates: Vec<Matrix> = algebra.to_vec();
    for _ in 0..16 {
        let combo = algebra.iter().fold(Matrix::zeros(field, algebra[0].rows(), algebra[0].cols()), |acc, m| {
            acc.add(&m.scale(&field.from_i64(rng.gen_range(-3..=3))))
        });
        candidates.push(combo);
    }
    let mut best: Option<(Matrix, Subspace)> = None;
    for y in candidates {
        for c in crate::exactalg::min_poly(&y).roots() {
            let x = y.shift(&c);
            let ker = x.kernel();
            if best.as_ref().is_none_or(|(_, k)| ker.dim() < k.dim()) {
                best = Some((x, ker));
            }
            if best.as_ref().is_some_and(|(_, k)| k.dim() == 1) {
                return best;
            }
        }
    }
    best
}

/// Number of 1-dimensional subspaces of GF(p)^k, if it fits.
fn projective_count(p: u32, k: usize) -> Option<u64> {
    let total = (p as u64).checked_pow(k as u32)?;
    Some((total - 1) / (p as u64 - 1))
}

/// Representatives of every 1-dimensional subspace of a subspace of GF(p)^n.
fn projective_points(ker: &Subspace, p: u32) -> impl Iterator<Item = Vector> + '_ {
    let k = ker.dim();
    let field = ker.field();
    // the leading nonzero coordinate is 1
    (0..k).flat_map(move |lead| {
        let tail = k - lead - 1;
        let count = (p as u64).pow(tail as u32);
        (0..count).map(move |mut idx| {
            let mut coeffs = vec![field.zero(); k];
            coeffs[lead] = field.one();
            for c in coeffs.iter_mut().skip(lead + 1) {
                *c = field.from_i64((idx % p as u64) as i64);
                idx /= p as u64;
            }
            ker.combine(&coeffs)
        })
    })
}

fn spin_up_test(a: &Matrix, astar: &Matrix, algebra: &[Matrix]) -> IrreducibilityVerdict {
    let p = a.field().modulus().expect("finite field");
    if let Some(w) = standard_basis_seed(a, astar) {
        return reducible(w, a, astar);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let Some((x, ker)) = singular_element(algebra, &mut rng) else {
        return IrreducibilityVerdict::Inconclusive {
            diagnostic: "no singular element found in the closure algebra".into(),
        };
    };
    let dual_ker = x.transpose().kernel();
    let seeds = projective_count(p, ker.dim()).zip(projective_count(p, dual_ker.dim()));
    if !seeds.is_some_and(|(s, t)| s + t <= MAX_KERNEL_SEEDS) {
        return IrreducibilityVerdict::Inconclusive {
            diagnostic: format!(
                "kernel spin-up over GF({p}) needs seeds from kernels of dimension {} and {}",
                ker.dim(),
                dual_ker.dim()
            ),
        };
    }
    for v in projective_points(&ker, p) {
        let w = spin(&v, &[a, astar]);
        if !w.is_full() {
            return reducible(w, a, astar);
        }
    }
    let (at, astart) = (a.transpose(), astar.transpose());
    for f in projective_points(&dual_ker, p) {
        let u = spin(&f, &[&at, &astart]);
        if !u.is_full() {
            // annihilator of a proper dual submodule is a proper submodule
            return reducible(u.basis().kernel(), a, astar);
        }
    }
    IrreducibilityVerdict::Irreducible
}

fn eigenspace_search(a: &Matrix, astar: &Matrix, algebra: &[Matrix]) -> IrreducibilityVerdict {
    let mut notes = Vec::new();
    for (label, m) in [("A", a), ("A*", astar)] {
        let eig = match EigenDecomposition::new(m) {
            Ok(eig) => eig,
            Err(_) => {
                notes.push(format!("{label} is not diagonalizable over Q"));
                continue;
            }
        };
        if let Some(big) = eig.dims().into_iter().find(|&r| r > 2) {
            notes.push(format!("{label} has an eigenspace of dimension {big}"));
            continue;
        }
        return match search_eigenspaces(&eig, a, astar, algebra) {
            Ok(None) => IrreducibilityVerdict::Irreducible,
            Ok(Some(w)) => reducible(w, a, astar),
            Err(msg) => IrreducibilityVerdict::Inconclusive { diagnostic: msg },
        };
    }
    IrreducibilityVerdict::Inconclusive {
        diagnostic: format!(
            "closure algebra is proper and the eigenspace search is out of range: {}",
            notes.join("; ")
        ),
    }
}

/// Every minimal common invariant subspace meets some eigenspace, so it is
/// spun from a vector of that eigenspace. For a plane spanned by `x, y` the
/// seeds `a x + y` that spin to something proper make `[T_k (a x + y)]_k`
/// rank deficient, hence are roots of `det([T_k (a x + y)]_k R)` for any `R`.
fn search_eigenspaces(
    eig: &EigenDecomposition,
    a: &Matrix,
    astar: &Matrix,
    algebra: &[Matrix],
) -> Result<Option<Subspace>, String> {
    let field = a.field();
    let n = a.rows();
    let proper = |v: &[Scalar]| {
        let w = spin(v, &[a, astar]);
        (!w.is_full()).then_some(w)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xd15c);
    for space in eig.eigenspaces() {
        let basis = space.basis_vectors();
        if let Some(w) = proper(&basis[0]) {
            return Ok(Some(w));
        }
        if basis.len() == 1 {
            continue;
        }
        let (x, y) = (&basis[0], &basis[1]);
        let mut resolved = false;
        for _attempt in 0..4 {
            let mix = Matrix::from_rows(
                field,
                n,
                (0..algebra.len())
                    .map(|_| (0..n).map(|_| field.from_i64(rng.gen_range(-5..=5))).collect())
                    .collect(),
            )
            .expect("mixing matrix");
            let det_at = |t: &Scalar| {
                let v: Vector = x.iter().zip(y).map(|(xi, yi)| &(t * xi) + yi).collect();
                let cols: Vec<Vector> = algebra.iter().map(|m| m.mul_vec(&v)).collect();
                Matrix::from_columns(field, n, &cols).mul(&mix).determinant()
            };
            let points: Vec<Scalar> = (0..=n as i64).map(|k| field.from_i64(k)).collect();
            let values: Vec<Scalar> = points.iter().map(det_at).collect();
            let poly = interpolate(&points, &values);
            if poly.is_zero() {
                let v: Vector = y.clone();
                if let Some(w) = proper(&v) {
                    return Ok(Some(w));
                }
                // unlucky mixing matrix; draw another
                continue;
            }
            for t in poly.roots() {
                let v: Vector = x.iter().zip(y).map(|(xi, yi)| &(&t * xi) + yi).collect();
                if let Some(w) = proper(&v) {
                    return Ok(Some(w));
                }
            }
            resolved = true;
            break;
        }
        if !resolved {
            return Err("degenerate determinant polynomial for every mixing matrix".into());
        }
    }
    Ok(None)
}

/// Lagrange interpolation through `(points[i], values[i])`.
fn interpolate(points: &[Scalar], values: &[Scalar]) -> Polynomial {
    let field = points[0].field();
    let mut acc = Polynomial::zero(field);
    for (i, (xi, yi)) in points.iter().zip(values).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = Polynomial::constant(yi.clone());
        for (j, xj) in points.iter().enumerate() {
            if i != j {
                let denom = (xi - xj).inv().expect("distinct nodes");
                basis = basis.mul(&Polynomial::linear(xj)).scale(&denom);
            }
        }
        acc = acc.add(&basis);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn common_eigenvector_is_a_witness() {
        let d = Matrix::diagonal(Q, &[Q.zero(), Q.one()]);
        let report = irreducible(&d, &d);
        let e0 = Subspace::span(Q, 2, &[vec![Q.one(), Q.zero()]]);
        assert_eq!(report.witness(), Some(&e0));
    }

    #[test]
    fn closure_algebra_of_d1_split_pair_is_everything() {
        let a = Matrix::from_i64(Q, &[&[0, 0], &[1, 1]]);
        let astar = Matrix::from_i64(Q, &[&[0, 1], &[0, 1]]);
        let report = irreducible(&a, &astar);
        assert_eq!(report.closure_dim, 4);
        assert!(report.is_irreducible());
    }

    #[test]
    fn one_by_one_is_irreducible() {
        let a = Matrix::from_i64(Q, &[&[3]]);
        let b = Matrix::from_i64(Q, &[&[5]]);
        assert!(irreducible(&a, &b).is_irreducible());
    }

    #[test]
    fn rational_rotation_is_irreducible_but_not_absolutely() {
        // both generate Q(i) inside End(Q^2): no rational invariant line
        let a = Matrix::from_i64(Q, &[&[0, -1], &[1, 0]]);
        let b = Matrix::from_i64(Q, &[&[1, -2], &[2, 1]]);
        let report = irreducible(&a, &b);
        assert_eq!(report.closure_dim, 2);
        // A is not diagonalizable over Q and A* has no rational eigenvalues either
        assert!(matches!(report.verdict, IrreducibilityVerdict::Inconclusive { .. }));
    }

    #[test]
    fn plane_search_finds_hidden_line_over_q() {
        // A = diag(0,0,1), A* fixes the line spanned by (1,2,0) inside V_0
        let a = Matrix::diagonal(Q, &[Q.zero(), Q.zero(), Q.one()]);
        // A* (1,2,0) = (1,2,0); A* acts on the rest so no standard basis vector works
        let p = Matrix::from_i64(Q, &[&[1, 0, 1], &[2, 1, 0], &[0, 0, 1]]);
        let pinv = p.inverse().unwrap();
        let d = Matrix::from_i64(Q, &[&[1, 0, 0], &[0, 2, 1], &[0, 1, 3]]);
        let astar = p.mul(&d).mul(&pinv);
        let report = irreducible(&a, &astar);
        let w = report.witness().expect("reducible");
        assert!(w.contains(&[Q.one(), Q.from_i64(2), Q.zero()]));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = Polynomial::from_roots(Q, &[Q.from_ratio(1, 3), Q.from_i64(-2), Q.from_i64(4)]);
        let xs: Vec<Scalar> = (0..4).map(|k| Q.from_i64(k)).collect();
        let ys: Vec<Scalar> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys), p);
    }
}
