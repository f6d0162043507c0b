//! Independent oracles for the skeleton module: a Ryser-style permanent
//! count against the backtracking enumeration, and a second flip-graph BFS
//! built from pairwise adjacency against the lazy distance oracle.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use matchpoly::skeleton::{enumerate_perfect_matchings, is_adjacent, skeleton_distance};
use matchpoly::{BipartiteGraph, PerfectMatching};

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Arc<BipartiteGraph> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    BipartiteGraph::build(n, n, &edges).unwrap()
}

/// Permanent of the biadjacency matrix by Ryser's inclusion-exclusion
/// formula: the number of perfect matchings, computed without any
/// enumeration.
fn permanent(g: &BipartiteGraph) -> i64 {
    let n = g.n_side();
    let mut rows = vec![0u32; n];
    for &(a, b) in g.edge_pairs() {
        rows[a] |= 1 << b;
    }
    let mut total: i64 = 0;
    for subset in 0u32..(1 << n) {
        let mut product: i64 = 1;
        for &row in &rows {
            product *= (row & subset).count_ones() as i64;
            if product == 0 {
                break;
            }
        }
        let sign = if (n as u32 - subset.count_ones()) % 2 == 0 {
            1
        } else {
            -1
        };
        total += sign * product;
    }
    total
}

#[test]
fn enumeration_count_matches_the_permanent() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut nonzero = 0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=7);
        let g = random_graph(&mut rng, n, 0.5);
        let count = enumerate_perfect_matchings(&g, 100_000).unwrap().len();
        assert_eq!(count as i64, permanent(&g));
        if count > 0 {
            nonzero += 1;
        }
    }
    assert!(nonzero > 50);
}

/// Breadth-first distances over the flip graph whose edges come from
/// pairwise adjacency checks, not from cycle enumeration.
fn distances_by_adjacency(all: &[PerfectMatching], from: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; all.len()];
    dist[from] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(i) = queue.pop_front() {
        for j in 0..all.len() {
            if dist[j].is_none() && is_adjacent(&all[i], &all[j]).unwrap() {
                dist[j] = Some(dist[i].unwrap() + 1);
                queue.push_back(j);
            }
        }
    }
    dist
}

#[test]
fn lazy_distance_oracle_matches_the_adjacency_bfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let mut compared = 0;
    while compared < 60 {
        let n = rng.gen_range(3..=6);
        let g = random_graph(&mut rng, n, 0.5);
        let all = match enumerate_perfect_matchings(&g, 500) {
            Ok(all) if all.len() >= 2 => all,
            _ => continue,
        };
        let from = rng.gen_range(0..all.len());
        let reference = distances_by_adjacency(&all, from);
        for (j, expected) in reference.iter().enumerate() {
            assert_eq!(
                skeleton_distance(&all[from], &all[j], 100_000).unwrap(),
                *expected
            );
        }
        compared += 1;
    }
}
