mod common;

use common::*;
use crewpair::network::{enumerate_pairings_lenient, ConnectionGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn enumeration_matches_brute_force_on_random_instances() {
    let nonempty = checks::enumeration_matches_brute_force(20240601, 120).unwrap();
    assert!(nonempty >= 60, "only {nonempty} instances had any pairing");
}

#[test]
fn worker_count_does_not_change_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let inst = random_small_instance(&mut rng, 12);
        let g = ConnectionGraph::for_instance(&inst);
        let a = enumerate_pairings_lenient(&inst, &g, Some(1)).unwrap();
        let b = enumerate_pairings_lenient(&inst, &g, Some(4)).unwrap();
        assert_eq!(a.flight_lists(), b.flight_lists());
    }
}

#[test]
fn subset_enumeration_and_mask_dp_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..200 {
        let f = rng.gen_range(1..=8);
        let n = rng.gen_range(1..=12);
        let all = random_coverable(&mut rng, f, n);
        if all.len() > 16 {
            continue;
        }
        let p = [0, 1, 50, 1000][rng.gen_range(0..4)];
        assert_eq!(subset_enumeration_optimum(&all, p), flight_mask_optimum(&all, p));
    }
}

#[test]
fn exact_solver_matches_exhaustive_search_on_enumerated_instances() {
    let solved = checks::exact_matches_exhaustive_on_enumerated(424242, 150).unwrap();
    assert!(solved >= 50, "only {solved} coverable instances");
}

#[test]
fn exact_solver_matches_exhaustive_search_on_random_covers() {
    checks::exact_matches_exhaustive_on_random_covers(99, 300).unwrap();
}
