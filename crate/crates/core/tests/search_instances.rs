use tdpair::leonard::{detect_leonard, switching_via_solve, LeonardError};
use tdpair::search::{merge_results, partition_seeds, search_shape, Mode, SearchSpec};
use tdpair::splitdecomp::{split_subspaces, tau_images, verify_raising_lowering, SplitError};
use tdpair::tdpair::{reducibility_witness_from_tau_kernel, shape, validate_pair, OrderedPair};
use tdpair::{Field, Matrix};

fn gf3() -> Field {
    Field::prime(3).unwrap()
}

#[test]
fn shape_121_instances_are_not_leonard() {
    let spec = SearchSpec::new(gf3(), 4, vec![1, 2, 1], 60_000, 3, Mode::Randomized).unwrap();
    let result = search_shape(&spec);
    assert!(!result.instances.is_empty(), "no (1,2,1) instance in 60000 candidates");
    for hit in &result.instances {
        let pair = &hit.pair;
        assert_eq!(shape(pair).unwrap().rho(), &[1, 2, 1]);
        assert!(pair.is_block_tridiagonal());
        let sd = split_subspaces(pair);
        assert_eq!(sd.dims(), vec![1, 2, 1]);
        assert!(sd.report().all_hold());
        assert!(verify_raising_lowering(&sd).all_hold());
        assert!(detect_leonard(pair).certificate().is_none());
        assert!(matches!(switching_via_solve(pair), Err(LeonardError::NotLeonard { .. })));
        let again = validate_pair(pair.a(), pair.astar()).unwrap();
        assert_eq!(again.shape(), pair.shape());
    }
}

#[test]
fn sharded_randomized_search_is_order_independent() {
    let spec = SearchSpec::new(gf3(), 4, vec![1, 2, 1], 20_000, 9, Mode::Randomized).unwrap();
    let whole = search_shape(&spec);
    let mut parts: Vec<_> = partition_seeds(&spec, 4).iter().map(search_shape).collect();
    parts.reverse();
    let merged = merge_results(parts);
    let key = |r: &tdpair::search::SearchResult| {
        r.instances.iter().map(|h| (h.counter, h.pair.astar().to_string())).collect::<Vec<_>>()
    };
    assert_eq!(key(&whole), key(&merged));
    assert_eq!(merged.candidates_tried, 20_000);
}

#[test]
fn exhaustive_shape_111_over_gf5_window() {
    let spec = SearchSpec::new(Field::prime(5).unwrap(), 3, vec![1, 1, 1], 2_000_000, 0, Mode::Exhaustive).unwrap();
    // the last 30000 indices of the 5^7 space
    let (_, end) = spec.range();
    let result = search_shape(&spec.window(end - 30_000, end));
    assert!(!result.instances.is_empty());
    for hit in &result.instances {
        let cert = detect_leonard(&hit.pair).certificate().cloned().unwrap();
        assert_eq!(cert.solution_dim, 1);
    }
}

/// Krawtchouk pair ⊕ a 1-dimensional pair with eigenvalues (0, 0): the
/// τ-images of `e_3` collapse and the kernel index yields a witness.
#[test]
fn tau_images_on_reducible_candidate_trigger_witness() {
    let q = Field::Rationals;
    let a = Matrix::from_i64(q, &[&[0, 0, 0, 0], &[1, 1, 0, 0], &[0, 1, 2, 0], &[0, 0, 0, 0]]);
    let b = Matrix::from_i64(q, &[&[0, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 2, 0], &[0, 0, 0, 0]]);
    assert!(validate_pair(&a, &b).is_err());
    let (pair, _) = OrderedPair::discover(&a, &b).unwrap();
    let u = vec![q.zero(), q.zero(), q.zero(), q.one()];
    let index = match tau_images(&pair, &u) {
        Err(SplitError::TauKernel { index }) => index,
        other => panic!("expected a τ-kernel failure, got {other:?}"),
    };
    assert_eq!(index, 1);
    let w = reducibility_witness_from_tau_kernel(pair.eig_a(), pair.eig_astar(), &u, index).unwrap();
    assert!(w.contains(&u) && !w.is_full());
    assert!(w.is_invariant_under(&a) && w.is_invariant_under(&b));
}
