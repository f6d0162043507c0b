//! Property suites for circuits, circuit moves, monotone weights, and pivot
//! runs.

use std::sync::Arc;

use proptest::prelude::{proptest, ProptestConfig};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use matchpoly::lp::{
    circuit_move, circuit_vectors, monotone_weights, pivot_run, rational, CircuitVector, PivotRule,
    PolytopePoint, Rational,
};
use matchpoly::reduction::{build_reduction, random_hamiltonian_digraph, two_flip_witness};
use matchpoly::skeleton::{
    alternating_cycles, enumerate_perfect_matchings, find_perfect_matching, is_adjacent,
    skeleton_distance,
};
use matchpoly::{BipartiteGraph, PerfectMatching};
use num::{One, Zero};

fn random_graph_with_matching(
    seed: u64,
    n: usize,
    p: f64,
) -> (Arc<BipartiteGraph>, PerfectMatching) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|a| (a, perm[a])).collect();
    for (a, &pa) in perm.iter().enumerate() {
        for b in 0..n {
            if b != pa && rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    let g = BipartiteGraph::build(n, n, &edges).unwrap();
    let m = find_perfect_matching(&g).expect("planted matching");
    (g, m)
}

/// One random circuit move from a random vertex; returns false when the
/// sampled graph had no alternating cycle to move along.
fn check_one_circuit_move(seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let n = rng.gen_range(3..=7);
    let (g, _) = random_graph_with_matching(seed, n, 0.4);
    let all = enumerate_perfect_matchings(&g, 50_000).unwrap();
    let m = all[rng.gen_range(0..all.len())].clone();
    let cycles = alternating_cycles(&m, 2 * n);
    if cycles.is_empty() {
        return false;
    }
    let cycle = cycles[rng.gen_range(0..cycles.len())].clone();
    let alpha = rational(rng.gen_range(1..=9), rng.gen_range(1..=9));
    let circuit = CircuitVector::for_flip(&m, cycle.clone(), alpha).unwrap();
    assert!(circuit.sums_to_zero_everywhere());

    let x = PolytopePoint::from_matching(&m);
    let (moved, t_star) = circuit_move(&x, &circuit).unwrap();
    moved.check_feasible().unwrap();
    assert!(moved.is_vertex());
    assert!((t_star * circuit.magnitude().clone()).is_one());
    let landed = moved.to_matching().unwrap();
    assert_eq!(landed, m.flip(&cycle).unwrap());
    assert!(is_adjacent(&m, &landed).unwrap());
    true
}

#[test]
fn random_circuit_moves_land_on_adjacent_vertices() {
    let mut moved = 0;
    let mut seed = 0;
    while moved < 300 {
        if check_one_circuit_move(seed) {
            moved += 1;
        }
        seed += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Circuit moves from polytope vertices stay 0/1-valued, feasible, and
    /// adjacent, with t* * alpha = 1, for arbitrary seeds.
    #[test]
    fn circuit_move_invariants_hold(seed in 0u64..100_000) {
        check_one_circuit_move(seed);
    }
}

#[test]
fn monotone_weights_verified_by_enumeration_on_reduction_instances() {
    for n in 2..=4 {
        for seed in 0..3 {
            let (d, ham) = random_hamiltonian_digraph(seed, n, 0.3).unwrap();
            let r = build_reduction(&d, Some(&ham)).unwrap();
            let path = two_flip_witness(&r, &ham).unwrap();
            let ms = path.replay().unwrap();
            let w = monotone_weights(&ms[0], &ms[1], &ms[2]).unwrap();

            let all = enumerate_perfect_matchings(r.graph(), 1_000_000).unwrap();
            let w2 = w.matching_weight(r.m2());
            for m in &all {
                if m != r.m2() {
                    assert!(w.matching_weight(m) < w2, "n = {n}, seed = {seed}");
                }
            }
            let chain = [
                w.matching_weight(&ms[0]),
                w.matching_weight(&ms[1]),
                w.matching_weight(&ms[2]),
            ];
            assert!(chain[0] < chain[1] && chain[1] < chain[2]);
            // Weight values stay in {0, 1, 1 + 1/N}.
            let heavy = rational(r.vertex_count() as i64 + 1, r.vertex_count() as i64);
            for e in 0..r.graph().edge_count() {
                let v = w.weight(e);
                assert!(v.is_zero() || v.is_one() || *v == heavy);
            }
        }
    }
}

#[test]
fn greedy_4cycle_needs_n_steps_while_distance_is_two() {
    for n in 3..=6 {
        let (d, ham) = random_hamiltonian_digraph(7 + n as u64, n, 0.3).unwrap();
        let r = build_reduction(&d, Some(&ham)).unwrap();
        let path = two_flip_witness(&r, &ham).unwrap();
        let ms = path.replay().unwrap();
        let w = monotone_weights(&ms[0], &ms[1], &ms[2]).unwrap();

        let run = pivot_run(&w, r.m1(), PivotRule::Greedy4Cycle, 10 * n).unwrap();
        assert!(!run.truncated);
        assert!(
            run.steps() >= n,
            "greedy took {} steps for n = {n}",
            run.steps()
        );
        assert_eq!(run.path.end().unwrap(), *r.m2());
        assert_eq!(
            skeleton_distance(r.m1(), r.m2(), 1_000_000).unwrap(),
            Some(2)
        );
        // Strictly monotone trace.
        for pair in run.weight_trace.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }
}

#[test]
fn any_improving_reaches_the_unique_optimum() {
    for n in 2..=4 {
        let (d, ham) = random_hamiltonian_digraph(n as u64, n, 0.3).unwrap();
        let r = build_reduction(&d, Some(&ham)).unwrap();
        let path = two_flip_witness(&r, &ham).unwrap();
        let ms = path.replay().unwrap();
        let w = monotone_weights(&ms[0], &ms[1], &ms[2]).unwrap();

        let run = pivot_run(&w, r.m1(), PivotRule::AnyImproving, 1_000).unwrap();
        assert!(!run.truncated);
        let terminal = run.path.end().unwrap();
        assert_eq!(terminal, *r.m2());
        // The terminal matching is the enumerated optimum.
        let all = enumerate_perfect_matchings(r.graph(), 1_000_000).unwrap();
        let best: Rational = all.iter().map(|m| w.matching_weight(m)).max().unwrap();
        assert_eq!(w.matching_weight(&terminal), best);
    }
}

#[test]
fn shortest_improving_also_terminates_at_the_optimum() {
    let (d, ham) = random_hamiltonian_digraph(11, 3, 0.3).unwrap();
    let r = build_reduction(&d, Some(&ham)).unwrap();
    let path = two_flip_witness(&r, &ham).unwrap();
    let ms = path.replay().unwrap();
    let w = monotone_weights(&ms[0], &ms[1], &ms[2]).unwrap();
    let run = pivot_run(&w, r.m1(), PivotRule::ShortestImproving, 1_000).unwrap();
    assert!(!run.truncated);
    assert_eq!(run.path.end().unwrap(), *r.m2());
    for pair in run.weight_trace.windows(2) {
        assert!(pair[0] < pair[1]);
    }
}

#[test]
fn alternating_cycles_match_the_undirected_enumeration_route() {
    // Two independent enumeration routes must agree: directed cycles of the
    // matching orientation versus undirected even cycles (circuit supports)
    // filtered down to the alternating ones.
    for seed in 0..20 {
        let (g, m) = random_graph_with_matching(seed, 6, 0.35);
        let directed = alternating_cycles(&m, 12);
        let alternating_supports: Vec<_> = circuit_vectors(&g, 12)
            .into_iter()
            .filter(|c| {
                let ids: Vec<_> = c.cycle().edge_ids(&g).unwrap();
                ids.iter()
                    .enumerate()
                    .all(|(i, &e)| m.contains(e) == (m.contains(ids[0]) == (i % 2 == 0)))
            })
            .collect();
        assert_eq!(directed.len(), alternating_supports.len(), "seed = {seed}");
        let mut keys1: Vec<_> = directed.iter().map(|c| c.undirected_key()).collect();
        let mut keys2: Vec<_> = alternating_supports
            .iter()
            .map(|c| c.cycle().undirected_key())
            .collect();
        keys1.sort();
        keys2.sort();
        assert_eq!(keys1, keys2);
    }
}

#[test]
fn circuit_supports_are_single_cycles() {
    // Support minimality: a simple cycle's edge set has no even cycle
    // strictly inside it, so it suffices that every support is one cycle.
    let (g, _) = random_graph_with_matching(3, 5, 0.4);
    for circuit in circuit_vectors(&g, 10) {
        let mut degree = std::collections::HashMap::new();
        for &e in circuit
            .positive_edges()
            .iter()
            .chain(circuit.negative_edges())
        {
            let (u, v) = g.endpoints(e);
            *degree.entry(u).or_insert(0) += 1;
            *degree.entry(v).or_insert(0) += 1;
        }
        assert!(degree.values().all(|&d| d == 2));
        assert_eq!(degree.len(), circuit.cycle().len());
        assert_eq!(
            circuit.positive_edges().len(),
            circuit.negative_edges().len()
        );
    }
}
