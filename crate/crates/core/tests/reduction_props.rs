//! Randomized and constructed suites for the reduction pipeline.

use std::collections::HashSet;

use matchpoly::recovery::compute_flip_cycles;
use matchpoly::reduction::{
    build_reduction, contract_cycle, contraction_factor, extract_long_cycle,
    random_hamiltonian_digraph, two_flip_witness, ReductionInstance,
};
use matchpoly::skeleton::{is_adjacent, skeleton_distance, sym_diff_decompose, FlipPath};
use matchpoly::{Cycle, Vertex};

/// Lifts a directed cycle of the source digraph through the gadgets.
fn lift_cycle(r: &ReductionInstance, c: &Cycle) -> Cycle {
    let vs = c.vertices();
    let n = vs.len();
    let arc_id = |u: usize, w: usize| r.source().arcs().binary_search(&(u, w)).unwrap();
    let mut lifted: Vec<Vertex> = Vec::new();
    for i in 0..n {
        let v = vs[i];
        let in_arc = arc_id(vs[(i + n - 1) % n], v);
        let out_arc = arc_id(v, vs[(i + 1) % n]);
        lifted.extend(r.gadgets()[v].through_path(r.arc_in_rank(in_arc), r.arc_out_rank(out_arc)));
    }
    Cycle::new(lifted).unwrap()
}

#[test]
fn random_instances_keep_every_invariant() {
    for n in 2..=6 {
        for seed in 0..20 {
            let (d, ham) = random_hamiltonian_digraph(seed, n, 0.3).unwrap();
            let r = build_reduction(&d, Some(&ham)).unwrap();
            r.verify().unwrap();
            assert!(r.vertex_count() < 8 * n * n);
            assert!(r.graph().is_subcubic());
            let dec = sym_diff_decompose(r.m1(), r.m2()).unwrap();
            assert_eq!(dec.len(), n);
            assert!(dec.cycles().iter().all(|c| c.len() == 4));

            let path = two_flip_witness(&r, &ham).unwrap();
            let ms = path.replay().unwrap();
            assert_eq!(ms.last().unwrap(), r.m2());
            assert!(is_adjacent(&ms[0], &ms[1]).unwrap());
            assert!(is_adjacent(&ms[1], &ms[2]).unwrap());
        }
    }
}

#[test]
fn witness_trace_cycles_match_the_construction() {
    let (d, ham) = random_hamiltonian_digraph(5, 5, 0.3).unwrap();
    let r = build_reduction(&d, Some(&ham)).unwrap();
    let path = two_flip_witness(&r, &ham).unwrap();
    let (orientations, directed_steps) = path.replay_orientations().unwrap();
    let recomputed = compute_flip_cycles(&orientations).unwrap();
    assert_eq!(recomputed, directed_steps);
    assert_eq!(recomputed.len(), 2);
}

#[test]
fn lifted_source_cycles_contract_back_with_the_bound() {
    let mut contracted = 0;
    for seed in 0..30 {
        let n = 3 + (seed as usize % 6);
        let (d, ham) = random_hamiltonian_digraph(seed, n, 0.35).unwrap();
        let r = build_reduction(&d, Some(&ham)).unwrap();
        let (cycles, _) = d.directed_cycles_capped(n, 200);
        for c in cycles {
            let lifted = lift_cycle(&r, &c);
            r.d_prime().check_directed(&lifted).unwrap();
            // contract_cycle re-verifies the shrink factor internally.
            let back = contract_cycle(&r, &lifted).unwrap();
            assert_eq!(back, c);
            assert!(back.len() * contraction_factor(n) >= lifted.len());
            contracted += 1;
        }
    }
    assert!(contracted > 50);
}

#[test]
fn witness_extraction_on_random_instances() {
    for seed in 0..10 {
        let n = 8;
        let (d, ham) = random_hamiltonian_digraph(seed, n, 0.3).unwrap();
        let r = build_reduction(&d, Some(&ham)).unwrap();
        let path = two_flip_witness(&r, &ham).unwrap();
        let out = extract_long_cycle(&r, &path).unwrap();
        assert!(d.is_directed_cycle(&out.cycle));
        // k = 2, so ell = ceil(n^(1/4)).
        assert_eq!(out.ell, 2);
        assert!(out.cycle.len() * contraction_factor(n) >= out.ell);
    }
}

/// A 2n-step path that flips one gadget 4-cycle per pair of big flips: the
/// forward lift of the Hamiltonian cycle (long side at every pending
/// gadget, short side at already-flipped ones) followed by its reverse
/// traversal that complements the target gadget only.
fn detour_path(r: &ReductionInstance, ham: &Cycle) -> FlipPath {
    let hv = ham.vertices();
    let n = hv.len();
    let arc_id = |u: usize, w: usize| r.source().arcs().binary_search(&(u, w)).unwrap();
    let mut steps = Vec::new();
    let mut flipped: HashSet<usize> = HashSet::new();
    for j in 0..n {
        let target = hv[j];
        let mut v1: Vec<Vertex> = Vec::new();
        for idx in 0..n {
            let v = hv[idx];
            let in_arc = arc_id(hv[(idx + n - 1) % n], v);
            let out_arc = arc_id(v, hv[(idx + 1) % n]);
            let g = &r.gadgets()[v];
            let c = g.cycle_vertices();
            v1.extend(g.in_ascent(r.arc_in_rank(in_arc)));
            if flipped.contains(&v) {
                v1.extend([c[0], c[3]]);
            } else {
                v1.extend(c);
            }
            v1.extend(g.out_descent(r.arc_out_rank(out_arc)));
        }
        steps.push(Cycle::new(v1).unwrap());

        let mut v2: Vec<Vertex> = Vec::new();
        for idx in (0..n).rev() {
            let v = hv[idx];
            let in_arc = arc_id(hv[(idx + n - 1) % n], v);
            let out_arc = arc_id(v, hv[(idx + 1) % n]);
            let g = &r.gadgets()[v];
            let c = g.cycle_vertices();
            let mut descent = g.out_descent(r.arc_out_rank(out_arc)).to_vec();
            descent.reverse();
            v2.extend(descent);
            if v == target || flipped.contains(&v) {
                v2.extend([c[3], c[0]]);
            } else {
                v2.extend([c[3], c[2], c[1], c[0]]);
            }
            let mut ascent = g.in_ascent(r.arc_in_rank(in_arc)).to_vec();
            ascent.reverse();
            v2.extend(ascent);
        }
        steps.push(Cycle::new(v2).unwrap());
        flipped.insert(target);
    }
    FlipPath::new(r.m1().clone(), steps)
}

#[test]
fn long_detour_paths_still_extract_a_valid_cycle() {
    for (seed, n) in [(1u64, 3usize), (2, 4), (3, 5)] {
        let (d, ham) = random_hamiltonian_digraph(seed, n, 0.3).unwrap();
        let r = build_reduction(&d, Some(&ham)).unwrap();
        let path = detour_path(&r, &ham);
        assert_eq!(path.len(), 2 * n);
        let ms = path.replay().unwrap();
        assert_eq!(ms.last().unwrap(), r.m2());
        let out = extract_long_cycle(&r, &path).unwrap();
        assert!(d.is_directed_cycle(&out.cycle));
        assert!(out.cycle.len() * contraction_factor(n) >= out.ell);
    }
}

#[test]
fn oracle_distance_is_two_on_small_instances() {
    for n in 2..=5 {
        for seed in 0..5 {
            let (d, ham) = random_hamiltonian_digraph(seed, n, 0.3).unwrap();
            let r = build_reduction(&d, Some(&ham)).unwrap();
            assert_eq!(
                skeleton_distance(r.m1(), r.m2(), 1_000_000).unwrap(),
                Some(2),
                "n = {n}, seed = {seed}"
            );
        }
    }
}
