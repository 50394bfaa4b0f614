//! Independent oracles shared by the integration tests: brute-force subspace
//! enumeration over tiny prime fields, a split-sequence computation by
//! raising maps, and random fixtures.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tdpair::leonard::{random_leonard, LeonardParameterSet};
use tdpair::tdpair::TriDiagonalPair;
use tdpair::{Field, Matrix, Scalar, Subspace};

pub type Small = Vec<u32>;

pub fn residue(s: &Scalar) -> u32 {
    match s {
        Scalar::Residue { value, .. } => *value,
        Scalar::Rational(_) => panic!("oracle works over prime fields only"),
    }
}

pub fn to_small(m: &Matrix) -> Vec<Small> {
    (0..m.rows()).map(|r| m.row(r).iter().map(residue).collect()).collect()
}

pub fn all_vectors(p: u32, n: usize) -> Vec<Small> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn mat_vec(p: u32, m: &[Small], v: &[u32]) -> Small {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<u32>() % p)
        .collect()
}

/// Every linear combination of `gens`, as a set of vectors.
pub fn span_set(p: u32, n: usize, gens: &[Small]) -> BTreeSet<Small> {
    let mut set = BTreeSet::new();
    set.insert(vec![0; n]);
    for g in gens {
        let current: Vec<Small> = set.iter().cloned().collect();
        for v in current {
            for c in 1..p {
                let w: Small = v.iter().zip(g).map(|(a, b)| (a + c * b) % p).collect();
                set.insert(w);
            }
        }
    }
    set
}

pub fn subspace_set(s: &Subspace, p: u32) -> BTreeSet<Small> {
    let gens: Vec<Small> = s.basis_vectors().iter().map(|v| v.iter().map(residue).collect()).collect();
    span_set(p, s.ambient_dim(), &gens)
}

/// Every subspace of GF(p)^n, each as its vector set.
pub fn all_subspaces(p: u32, n: usize) -> BTreeSet<BTreeSet<Small>> {
    let vectors = all_vectors(p, n);
    let mut found: BTreeSet<BTreeSet<Small>> = BTreeSet::new();
    found.insert(span_set(p, n, &[]));
    let mut frontier: Vec<BTreeSet<Small>> = found.iter().cloned().collect();
    while let Some(s) = frontier.pop() {
        for v in &vectors {
            if s.contains(v) {
                continue;
            }
            let mut gens: Vec<Small> = s.iter().cloned().collect();
            gens.push(v.clone());
            let bigger = span_set(p, n, &gens);
            if found.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    found
}

/// Whether some subspace other than 0 and V is invariant under every matrix.
pub fn has_common_invariant(p: u32, n: usize, mats: &[Vec<Small>], subspaces: &BTreeSet<BTreeSet<Small>>) -> bool {
    let full = p.pow(n as u32) as usize;
    subspaces
        .iter()
        .filter(|s| s.len() > 1 && s.len() < full)
        .any(|s| mats.iter().all(|m| s.iter().all(|v| s.contains(&mat_vec(p, m, v)))))
}

pub fn random_matrix(field: Field, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let p = field.modulus().expect("prime field") as i64;
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Matrix::from_i64(field, &refs)
}

pub fn random_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field.modulus() {
        Some(p) => field.from_i64(rng.gen_range(0..p as i64)),
        None => field.from_ratio(rng.gen_range(-20..=20), rng.gen_range(1..=9)),
    }
}

pub fn random_nonzero(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = random_scalar(field, rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// The superdiagonal of `A*` in the basis `u_0, (A - θ_0)u_0, …` where `u_0`
/// spans the `θ*_0`-eigenspace of `A*`, for the eigenvalue order `theta`.
pub fn split_sequence(a: &Matrix, astar: &Matrix, theta: &[Scalar], theta_star_0: &Scalar) -> Vec<Scalar> {
    let field = a.field();
    let n = a.rows();
    let kernel = astar.shift(theta_star_0).kernel();
    assert_eq!(kernel.dim(), 1, "oracle expects a Leonard pair");
    let mut basis = vec![kernel.basis_vectors()[0].clone()];
    for t in &theta[..n - 1] {
        let next = a.shift(t).mul_vec(basis.last().unwrap());
        basis.push(next);
    }
    let p = Matrix::from_columns(field, n, &basis);
    let m = p.inverse().expect("raising basis is a basis").mul(astar).mul(&p);
    (1..n).map(|i| m[(i - 1, i)].clone()).collect()
}

/// First and second split sequences of a Leonard pair in its current
/// orderings.
pub fn split_sequences(pair: &TriDiagonalPair) -> (Vec<Scalar>, Vec<Scalar>) {
    let theta = pair.eig_a().eigenvalues().to_vec();
    let reversed: Vec<Scalar> = theta.iter().rev().cloned().collect();
    let ts0 = pair.theta_star(0);
    (
        split_sequence(pair.a(), pair.astar(), &theta, ts0),
        split_sequence(pair.a(), pair.astar(), &reversed, ts0),
    )
}

pub fn oracle_parameters(pair: &TriDiagonalPair) -> LeonardParameterSet {
    let (varphi, phi) = split_sequences(pair);
    LeonardParameterSet::new(
        pair.eig_a().eigenvalues().to_vec(),
        pair.eig_astar().eigenvalues().to_vec(),
        varphi,
        phi,
    )
    .expect("oracle sequences form a valid parameter set")
}

/// Fields and diameters for the random Leonard suite: Q, GF(5), GF(7),
/// GF(13) in turn, with `d` cycling through `0..=6` (`0..=4` over GF(5),
/// which has only five distinct eigenvalues).
pub fn suite_plan(count: usize) -> Vec<(Field, usize, u64)> {
    let fields = [
        Field::Rationals,
        Field::prime(5).unwrap(),
        Field::prime(7).unwrap(),
        Field::prime(13).unwrap(),
    ];
    (0..count)
        .map(|i| {
            let field = fields[i % 4];
            let max_d = field.modulus().map_or(6, |p| (p as usize - 1).min(6));
            let d = (i / 4) % (max_d + 1);
            (field, d, 1000 + i as u64)
        })
        .collect()
}

pub fn leonard_suite(count: usize) -> Vec<(LeonardParameterSet, TriDiagonalPair)> {
    suite_plan(count)
        .into_iter()
        .map(|(f, d, seed)| random_leonard(f, d, seed).expect("random Leonard pair"))
        .collect()
}
