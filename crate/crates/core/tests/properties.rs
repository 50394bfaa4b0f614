mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tdpair::exactalg::{min_poly, EigenDecomposition};
use tdpair::leonard::{
    affine_relation, detect_leonard, leonard_basis, matrix_in_basis, random_leonard, reduce_to_affine, Affine,
};
use tdpair::splitdecomp::{split_subspaces, tau_basis, tau_images, verify_raising_lowering};
use tdpair::tdpair::validate_pair;
use tdpair::{Field, Matrix, Subspace, Vector};

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rationals),
        Just(Field::prime(2).unwrap()),
        Just(Field::prime(3).unwrap()),
        Just(Field::prime(7).unwrap()),
    ]
}

fn matrix_from(field: Field, rows: usize, cols: usize, raw: &[i64]) -> Matrix {
    let data: Vec<Vec<i64>> = raw.chunks(cols).take(rows).map(<[i64]>::to_vec).collect();
    let refs: Vec<&[i64]> = data.iter().map(Vec::as_slice).collect();
    Matrix::from_i64(field, &refs)
}

fn vectors_from(field: Field, n: usize, raw: &[i64]) -> Vec<Vector> {
    raw.chunks(n).map(|c| c.iter().map(|&x| field.from_i64(x)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent(field in field_strategy(), rows in 1usize..5, cols in 1usize..5,
                          raw in prop::collection::vec(-3i64..4, 25)) {
        let m = matrix_from(field, rows, cols, &raw);
        let once = m.rref();
        let twice = once.reduced.rref();
        prop_assert_eq!(&once.reduced, &twice.reduced);
        prop_assert_eq!(once.rank, twice.rank);
        prop_assert_eq!(m.kernel().dim(), cols - once.rank);
    }

    #[test]
    fn modular_dimension_identity(field in field_strategy(), n in 1usize..5, kx in 0usize..4, ky in 0usize..4,
                                  raw in prop::collection::vec(-2i64..3, 32)) {
        let vs = vectors_from(field, n, &raw);
        let x = Subspace::span(field, n, &vs[..kx.min(vs.len())]);
        let y = Subspace::span(field, n, &vs[kx.min(vs.len())..(kx + ky).min(vs.len())]);
        let sum = x.sum(&y);
        let meet = x.intersect(&y);
        prop_assert_eq!(sum.dim() + meet.dim(), x.dim() + y.dim());
        prop_assert!(meet.leq(&x) && meet.leq(&y) && x.leq(&sum) && y.leq(&sum));
    }

    #[test]
    fn eigen_decomposition_invariants(field in prop_oneof![Just(Field::Rationals), Just(Field::prime(7).unwrap())],
                                      n in 1usize..5,
                                      diag in prop::collection::vec(0i64..3, 5),
                                      raw in prop::collection::vec(-2i64..3, 25)) {
        let p = matrix_from(field, n, n, &raw);
        prop_assume!(p.inverse().is_some());
        let d = Matrix::diagonal(field, &diag[..n].iter().map(|&x| field.from_i64(x)).collect::<Vec<_>>());
        let m = p.mul(&d).mul(&p.inverse().unwrap());
        prop_assert!(min_poly(&m).eval_matrix(&m).is_zero());
        let eig = EigenDecomposition::new(&m).unwrap();
        prop_assert_eq!(eig.dims().iter().sum::<usize>(), n);
        let idem = eig.primitive_idempotents();
        let mut total = Matrix::zeros(field, n, n);
        let mut spectral = Matrix::zeros(field, n, n);
        for (i, e) in idem.iter().enumerate() {
            for (j, f) in idem.iter().enumerate() {
                let expected = if i == j { e.clone() } else { Matrix::zeros(field, n, n) };
                prop_assert_eq!(e.mul(f), expected);
            }
            total = total.add(e);
            spectral = spectral.add(&e.scale(eig.eigenvalue(i)));
            for v in eig.eigenspace(i).basis_vectors() {
                let scaled: Vector = v.iter().map(|x| x * eig.eigenvalue(i)).collect();
                prop_assert_eq!(m.mul_vec(&v), scaled);
            }
        }
        prop_assert_eq!(total, Matrix::identity(field, n));
        prop_assert_eq!(spectral, m);
    }
}

fn random_pairs() -> impl Strategy<Value = (Field, usize, u64)> {
    (
        prop_oneof![
            Just(Field::Rationals),
            Just(Field::prime(7).unwrap()),
            Just(Field::prime(11).unwrap()),
        ],
        0usize..5,
        any::<u64>(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn leonard_pairs_satisfy_split_identities((field, d, seed) in random_pairs()) {
        let (_, pair) = random_leonard(field, d, seed).unwrap();
        prop_assert!(pair.is_block_tridiagonal());
        let sd = split_subspaces(&pair);
        prop_assert!(sd.report().all_hold());
        prop_assert!(verify_raising_lowering(&sd).all_hold());
        prop_assert_eq!(sd.dims(), pair.shape().rho().to_vec());
        let tb = tau_basis(&pair).unwrap();
        prop_assert_eq!(tb.taus.len(), d + 1);
        for (i, t) in tb.taus.iter().enumerate() {
            prop_assert_eq!(t.degree(), Some(i));
            prop_assert!(t.is_monic());
        }
    }

    #[test]
    fn tau_image_combinations_are_nonzero((field, d, seed) in random_pairs()) {
        let (_, pair) = random_leonard(field, d, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = pair.vstar(0).basis_vectors()[0].clone();
        let c = common::random_nonzero(field, &mut rng);
        let u: Vector = b.iter().map(|x| x * &c).collect();
        let images = tau_images(&pair, &u).unwrap();
        for _ in 0..10 {
            let alpha: Vec<_> = loop {
                let a: Vec<_> = (0..=d).map(|_| common::random_scalar(field, &mut rng)).collect();
                if a.iter().any(|x| !x.is_zero()) {
                    break a;
                }
            };
            let combo = images.iter().zip(&alpha).fold(vec![field.zero(); pair.dim()], |acc, (v, a)| {
                acc.iter().zip(v).map(|(x, y)| x + &(y * a)).collect()
            });
            prop_assert!(combo.iter().any(|x| !x.is_zero()));
        }
    }

    #[test]
    fn certificates_and_leonard_bases((field, d, seed) in random_pairs()) {
        let (_, pair) = random_leonard(field, d, seed).unwrap();
        let detection = detect_leonard(&pair);
        let cert = detection.certificate().unwrap();
        prop_assert_eq!(cert.solution_dim, 1);
        prop_assert!(cert.alpha.iter().all(|a| !a.is_zero()));
        prop_assert!(cert.alpha[d].is_one());
        prop_assert!(tau_basis(&pair).unwrap().coordinates(&cert.x).is_some());
        prop_assert!(pair.vstar(0).image(&cert.x).leq(pair.vstar(d)));
        let u = pair.vstar(0).basis_vectors()[0].clone();
        let basis = leonard_basis(&pair, cert, &u).unwrap();
        let m = matrix_in_basis(pair.a(), &basis).unwrap();
        for i in 0..=d {
            for j in 0..=d {
                let expected = if i == j {
                    pair.theta(i).clone()
                } else if i == j + 1 {
                    field.one()
                } else {
                    field.zero()
                };
                prop_assert_eq!(&m[(i, j)], &expected);
            }
        }
    }

    #[test]
    fn affine_round_trips((field, d, seed) in random_pairs()) {
        prop_assume!(d >= 1);
        let (_, pair) = random_leonard(field, d, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let r = common::random_nonzero(field, &mut rng);
        let s = common::random_scalar(field, &mut rng);
        let rs = common::random_nonzero(field, &mut rng);
        let ss = common::random_scalar(field, &mut rng);
        let x = pair.a().affine(&r, &s);
        prop_assert_eq!(reduce_to_affine(&pair, &x).unwrap(), Affine { r: r.clone(), s: s.clone() });
        let q = validate_pair(&x, &pair.astar().affine(&rs, &ss)).unwrap();
        let rel = affine_relation(&pair, &q).unwrap();
        prop_assert_eq!(rel.a, Affine { r, s });
        prop_assert_eq!(rel.astar, Affine { r: rs, s: ss });
    }
}
