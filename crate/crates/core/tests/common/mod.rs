//! Oracles written independently of the library's search code, plus random
//! graph and instance corpora shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resmatch::e2sat::{gen_random, E2SatInstance, Literal};
use resmatch::graph::Edge;
use resmatch::Graph;

/// β by memoised recursion over vertex subsets: the lowest vertex is either
/// left unmatched or matched to one of its neighbours.
pub fn beta_by_subsets(n: usize, edges: &[Edge]) -> usize {
    assert!(n <= 24, "subset oracle is for small graphs");
    let mut adj = vec![0u32; n];
    for &(u, v) in edges {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    fn go(mask: u32, adj: &[u32], memo: &mut HashMap<u32, usize>) -> usize {
        if mask == 0 {
            return 0;
        }
        if let Some(&b) = memo.get(&mask) {
            return b;
        }
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut best = go(rest, adj, memo);
        let mut nbrs = adj[v] & rest;
        while nbrs != 0 {
            let w = nbrs.trailing_zeros();
            nbrs &= nbrs - 1;
            best = best.max(1 + go(rest & !(1 << w), adj, memo));
        }
        memo.insert(mask, best);
        best
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    go(full, &adj, &mut HashMap::new())
}

pub fn graph_beta(g: &Graph) -> usize {
    beta_by_subsets(g.vertex_count(), g.edges())
}

/// All maximum matchings by scanning every edge subset, sorted.
pub fn max_matchings_by_subsets(g: &Graph) -> Vec<Vec<Edge>> {
    let edges = g.edges();
    assert!(edges.len() <= 20, "subset oracle is for small graphs");
    let mut best = 0;
    let mut found: Vec<Vec<Edge>> = Vec::new();
    for mask in 0u32..1 << edges.len() {
        let mut used = vec![false; g.vertex_count()];
        let mut ok = true;
        let mut chosen = Vec::new();
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if used[u] || used[v] {
                    ok = false;
                    break;
                }
                used[u] = true;
                used[v] = true;
                chosen.push((u, v));
            }
        }
        if !ok {
            continue;
        }
        if chosen.len() > best {
            best = chosen.len();
            found.clear();
        }
        if chosen.len() == best {
            found.push(chosen);
        }
    }
    found.sort();
    found
}

/// (min, max) of β(G \ F) over the maximum matchings from the subset scan.
pub fn residual_range_by_subsets(g: &Graph) -> (usize, usize) {
    let mut lo = usize::MAX;
    let mut hi = 0;
    for f in max_matchings_by_subsets(g) {
        let rest: Vec<Edge> = g
            .edges()
            .iter()
            .copied()
            .filter(|e| !f.contains(e))
            .collect();
        let r = beta_by_subsets(g.vertex_count(), &rest);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo, hi)
}

/// Exhaustive Max E2-SAT over bit patterns, counting clauses directly.
pub fn max_sat_by_patterns(inst: &E2SatInstance) -> usize {
    let n = inst.num_vars();
    (0u32..1 << n)
        .map(|bits| {
            inst.clauses()
                .iter()
                .filter(|c| {
                    c.literals()
                        .iter()
                        .any(|l| (bits >> (l.var() - 1) & 1 == 1) != l.is_negated())
                })
                .count()
        })
        .max()
        .unwrap_or(0)
}

pub fn path(k: usize) -> Graph {
    let edges: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
    Graph::new(k + 1, &edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges).unwrap()
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges: Vec<_> = (0..a)
        .flat_map(|i| (0..b).map(move |j| (i, a + j)))
        .collect();
    Graph::new(a + b, &edges).unwrap()
}

/// Random bipartite graph with `left + right` vertices and edge probability `p`.
pub fn random_bipartite(rng: &mut ChaCha8Rng, left: usize, right: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..left {
        for j in 0..right {
            if rng.gen_bool(p) {
                edges.push((i, left + j));
            }
        }
    }
    Graph::new(left + right, &edges).unwrap()
}

/// Random simple graph on `n` vertices with at most `max_edges` edges.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, max_edges: usize) -> Graph {
    let mut pairs: Vec<Edge> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    for i in (1..pairs.len()).rev() {
        pairs.swap(i, rng.gen_range(0..=i));
    }
    let take = rng.gen_range(0..=max_edges.min(pairs.len()));
    pairs.truncate(take);
    Graph::new(n, &pairs).unwrap()
}

/// Every strict instance over two variables: clause subsets of size 2..=4 of
/// the four distinct 2-clauses, in a fixed order.
pub fn n2_corpus() -> Vec<E2SatInstance> {
    let all = [(1, 2), (1, -2), (-1, 2), (-1, -2)];
    let mut out = Vec::new();
    for mask in 0u32..16 {
        let chosen: Vec<(i64, i64)> = (0..4)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| all[i])
            .collect();
        if chosen.len() >= 2 {
            out.push(E2SatInstance::from_codes(2, &chosen).unwrap());
        }
    }
    out
}

/// `count` seeded strict instances with `n` variables and m in n..=max_m.
pub fn random_corpus(n: usize, max_m: usize, count: usize, seed: u64) -> Vec<(u64, E2SatInstance)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.gen_range(n..=max_m);
            let s: u64 = rng.gen();
            (s, gen_random(n, m, s).unwrap())
        })
        .collect()
}

pub fn lit(code: i64) -> Literal {
    Literal::from_dimacs(code).unwrap()
}
