//! Maximum matchings: Hopcroft–Karp for bipartite graphs, an exhaustive
//! branch-and-bound oracle for general graphs, enumeration of every maximum
//! matching and forced-edge analysis.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::graph::{norm, Bipartition, Edge, Graph};

const NONE: usize = usize::MAX;

/// A set of pairwise disjoint edges of some host graph, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    /// Validates that every edge is in `host` and no vertex is used twice.
    pub fn new(host: &Graph, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut used = vec![false; host.vertex_count()];
        let mut list = Vec::new();
        for (u, v) in edges {
            if !host.has_edge(u, v) {
                return Err(Error::NotAMatching(format!(
                    "{{{}, {}}} is not an edge of the graph",
                    id_or_index(host, u),
                    id_or_index(host, v)
                )));
            }
            for w in [u, v] {
                if std::mem::replace(&mut used[w], true) {
                    return Err(Error::NotAMatching(format!(
                        "vertex {} is covered twice",
                        host.id(w)
                    )));
                }
            }
            list.push(norm(u, v));
        }
        list.sort_unstable();
        Ok(Matching { edges: list })
    }

    /// Builds a matching from id pairs such as those in a matching file.
    pub fn from_id_pairs(host: &Graph, pairs: &[[i64; 2]]) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&[a, b]| {
                let u = host.index_of(a).ok_or(Error::VertexOutOfRange(a))?;
                let v = host.index_of(b).ok_or(Error::VertexOutOfRange(b))?;
                Ok((u, v))
            })
            .collect::<Result<Vec<_>>>()?;
        Matching::new(host, edges)
    }

    pub(crate) fn from_sorted_unchecked(edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Matching { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&norm(u, v)).is_ok()
    }

    pub fn is_perfect(&self, host: &Graph) -> bool {
        2 * self.len() == host.vertex_count()
    }

    /// Sorted `[id, id]` pairs, the serialized form.
    pub fn to_id_pairs(&self, host: &Graph) -> Vec<[i64; 2]> {
        let mut pairs: Vec<_> = self.edges.iter().map(|&e| host.id_pair(e)).collect();
        pairs.sort_unstable();
        pairs
    }
}

fn id_or_index(g: &Graph, v: usize) -> i64 {
    if v < g.vertex_count() {
        g.id(v)
    } else {
        v as i64
    }
}

/// Node budget for exhaustive searches. Exceeding it is an error, never a
/// silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub nodes: u64,
}

impl Budget {
    pub const DEFAULT_NODES: u64 = 20_000_000;
    pub const ENV_VAR: &'static str = "RESMATCH_BUDGET";

    pub const fn new(nodes: u64) -> Self {
        Budget { nodes }
    }

    /// Default budget, overridden by `RESMATCH_BUDGET` when it parses.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map_or_else(Budget::default, Budget::new)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_NODES)
    }
}

pub(crate) struct Meter {
    used: u64,
    limit: u64,
}

impl Meter {
    pub(crate) fn new(budget: Budget) -> Self {
        Meter {
            used: 0,
            limit: budget.nodes,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

/// Hopcroft–Karp over an explicit edge list. `side[v] == false` marks the
/// left side. Returns the mate array.
fn hopcroft_karp_mates(n: usize, side: &[bool], edges: &[Edge]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        let (l, r) = if side[u] { (v, u) } else { (u, v) };
        adj[l].push(r);
    }
    let left: Vec<usize> = (0..n).filter(|&v| !side[v] && !adj[v].is_empty()).collect();
    let mut mate = vec![NONE; n];
    let mut dist = vec![usize::MAX; n];

    // Greedy start keeps the number of phases small.
    for &l in &left {
        if let Some(&r) = adj[l].iter().find(|&&r| mate[r] == NONE) {
            mate[l] = r;
            mate[r] = l;
        }
    }

    loop {
        let mut queue = VecDeque::new();
        for &l in &left {
            if mate[l] == NONE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = mate[r];
                if next == NONE {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        let mut cursor = vec![0usize; n];
        for &l in &left {
            if mate[l] == NONE {
                augment(l, &adj, &mut mate, &mut dist, &mut cursor);
            }
        }
    }
    mate
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    mate: &mut [usize],
    dist: &mut [usize],
    cursor: &mut [usize],
) -> bool {
    while cursor[l] < adj[l].len() {
        let r = adj[l][cursor[l]];
        cursor[l] += 1;
        let next = mate[r];
        let ok =
            next == NONE || (dist[next] == dist[l] + 1 && augment(next, adj, mate, dist, cursor));
        if ok {
            mate[l] = r;
            mate[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

fn mates_to_edges(mate: &[usize]) -> Vec<Edge> {
    mate.iter()
        .enumerate()
        .filter(|&(u, &v)| v != NONE && u < v)
        .map(|(u, &v)| (u, v))
        .collect()
}

/// Maximum matching of a bipartite graph by Hopcroft–Karp.
pub fn max_matching_bipartite(g: &Graph, sides: &Bipartition) -> Result<Matching> {
    sides.check(g)?;
    let mate = hopcroft_karp_mates(g.vertex_count(), sides.sides(), g.edges());
    Ok(Matching::from_sorted_unchecked(mates_to_edges(&mate)))
}

/// Exhaustive branch-and-bound over vertices; exact on any graph.
fn brute_force(n: usize, edges: &[Edge], meter: &mut Meter) -> Result<Vec<Edge>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut search = Brute {
        adj,
        blocked: vec![false; n],
        current: Vec::new(),
        best: Vec::new(),
        meter,
    };
    search.run(0)?;
    let mut best = search.best;
    best.sort_unstable();
    Ok(best)
}

struct Brute<'m> {
    adj: Vec<Vec<usize>>,
    blocked: Vec<bool>,
    current: Vec<Edge>,
    best: Vec<Edge>,
    meter: &'m mut Meter,
}

impl Brute<'_> {
    fn live(&self, v: usize) -> bool {
        !self.blocked[v] && self.adj[v].iter().any(|&w| !self.blocked[w])
    }

    fn run(&mut self, from: usize) -> Result<()> {
        self.meter.tick()?;
        let n = self.adj.len();
        let Some(u) = (from..n).find(|&v| self.live(v)) else {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            return Ok(());
        };
        let live = (u..n).filter(|&v| self.live(v)).count();
        if self.current.len() + live / 2 <= self.best.len() {
            return Ok(());
        }
        self.blocked[u] = true;
        for i in 0..self.adj[u].len() {
            let w = self.adj[u][i];
            if self.blocked[w] {
                continue;
            }
            self.blocked[w] = true;
            self.current.push(norm(u, w));
            self.run(u + 1)?;
            self.current.pop();
            self.blocked[w] = false;
        }
        // leave u exposed
        self.run(u + 1)?;
        self.blocked[u] = false;
        Ok(())
    }
}

/// Matching number by exhaustive search, independent of Hopcroft–Karp.
pub fn max_matching_size(g: &Graph, budget: Budget) -> Result<usize> {
    Ok(brute_force(g.vertex_count(), g.edges(), &mut Meter::new(budget))?.len())
}

fn number_of(
    n: usize,
    edges: &[Edge],
    coloring: Option<&Bipartition>,
    meter: &mut Meter,
) -> Result<usize> {
    match coloring {
        Some(c) => Ok(mates_to_edges(&hopcroft_karp_mates(n, c.sides(), edges)).len()),
        None => Ok(brute_force(n, edges, meter)?.len()),
    }
}

/// A maximum matching: Hopcroft–Karp when the graph is bipartite, the
/// exhaustive search otherwise.
pub fn maximum_matching(g: &Graph, budget: Budget) -> Result<Matching> {
    match g.two_coloring() {
        Some(c) => max_matching_bipartite(g, &c),
        None => Ok(Matching::from_sorted_unchecked(brute_force(
            g.vertex_count(),
            g.edges(),
            &mut Meter::new(budget),
        )?)),
    }
}

/// The matching number β(g).
pub fn matching_number(g: &Graph, budget: Budget) -> Result<usize> {
    let coloring = g.two_coloring();
    number_of(
        g.vertex_count(),
        g.edges(),
        coloring.as_ref(),
        &mut Meter::new(budget),
    )
}

/// Visits every maximum matching once, in lexicographic order of the sorted
/// edge lists. The visitor may stop the walk early.
pub fn for_each_max_matching<F>(g: &Graph, budget: Budget, visit: F) -> Result<()>
where
    F: FnMut(&Matching) -> ControlFlow<()>,
{
    let mut meter = Meter::new(budget);
    let coloring = g.two_coloring();
    let target = number_of(g.vertex_count(), g.edges(), coloring.as_ref(), &mut meter)?;
    let mut walk = Enumerator {
        edges: g.edges(),
        n: g.vertex_count(),
        coloring,
        target,
        covered: vec![false; g.vertex_count()],
        chosen: Vec::with_capacity(target),
        scratch: Vec::new(),
        meter,
        visit,
    };
    walk.dfs(0).map(|_| ())
}

struct Enumerator<'g, F> {
    edges: &'g [Edge],
    n: usize,
    coloring: Option<Bipartition>,
    target: usize,
    covered: Vec<bool>,
    chosen: Vec<Edge>,
    scratch: Vec<Edge>,
    meter: Meter,
    visit: F,
}

impl<F> Enumerator<'_, F>
where
    F: FnMut(&Matching) -> ControlFlow<()>,
{
    fn open(&self, e: Edge) -> bool {
        !self.covered[e.0] && !self.covered[e.1]
    }

    /// Size of a maximum matching among edges `idx..` that avoid covered
    /// vertices.
    fn bound(&mut self, idx: usize) -> Result<usize> {
        let mut scratch = std::mem::take(&mut self.scratch);
        scratch.clear();
        scratch.extend(self.edges[idx..].iter().copied().filter(|&e| self.open(e)));
        let b = number_of(self.n, &scratch, self.coloring.as_ref(), &mut self.meter);
        self.scratch = scratch;
        b
    }

    fn dfs(&mut self, idx: usize) -> Result<ControlFlow<()>> {
        self.meter.tick()?;
        if self.chosen.len() == self.target {
            let m = Matching::from_sorted_unchecked(self.chosen.clone());
            return Ok((self.visit)(&m));
        }
        if self.chosen.len() + self.bound(idx)? < self.target {
            return Ok(ControlFlow::Continue(()));
        }
        let Some(at) = (idx..self.edges.len()).find(|&i| self.open(self.edges[i])) else {
            return Ok(ControlFlow::Continue(()));
        };
        let (u, v) = self.edges[at];
        self.covered[u] = true;
        self.covered[v] = true;
        self.chosen.push((u, v));
        let flow = self.dfs(at + 1)?;
        self.chosen.pop();
        self.covered[u] = false;
        self.covered[v] = false;
        if flow.is_break() {
            return Ok(flow);
        }
        self.dfs(at + 1)
    }
}

/// Every maximum matching in lexicographic order; fails with
/// [`Error::LimitExceeded`] if there are more than `limit`.
pub fn enumerate_max_matchings(g: &Graph, limit: usize, budget: Budget) -> Result<Vec<Matching>> {
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_max_matching(g, budget, |m| {
        if out.len() == limit {
            overflow = true;
            return ControlFlow::Break(());
        }
        out.push(m.clone());
        ControlFlow::Continue(())
    })?;
    if overflow {
        return Err(Error::LimitExceeded(limit));
    }
    Ok(out)
}

/// Edges contained in every maximum matching: `e` such that β(g − e) < β(g).
pub fn forced_edges(g: &Graph, budget: Budget) -> Result<Vec<Edge>> {
    let mut meter = Meter::new(budget);
    let coloring = g.two_coloring();
    let n = g.vertex_count();
    let beta = number_of(n, g.edges(), coloring.as_ref(), &mut meter)?;
    let mut rest = Vec::with_capacity(g.edge_count());
    let mut forced = Vec::new();
    for (i, &e) in g.edges().iter().enumerate() {
        rest.clear();
        rest.extend_from_slice(&g.edges()[..i]);
        rest.extend_from_slice(&g.edges()[i + 1..]);
        if number_of(n, &rest, coloring.as_ref(), &mut meter)? < beta {
            forced.push(e);
        }
    }
    Ok(forced)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(k: usize) -> Graph {
        let edges: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
        Graph::new(k + 1, &edges).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::new(10, &edges).unwrap()
    }

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn hopcroft_karp_sizes() {
        let p4 = path(4);
        let sides = p4.two_coloring().unwrap();
        assert_eq!(max_matching_bipartite(&p4, &sides).unwrap().len(), 2);

        let k33 = Graph::new(
            6,
            &(0..3)
                .flat_map(|i| (3..6).map(move |j| (i, j)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let sides = k33.two_coloring().unwrap();
        assert_eq!(max_matching_bipartite(&k33, &sides).unwrap().len(), 3);

        let empty = Graph::new(4, &[]).unwrap();
        let sides = Bipartition::from_sides(vec![false; 4]);
        assert!(max_matching_bipartite(&empty, &sides).unwrap().is_empty());
    }

    #[test]
    fn hopcroft_karp_rejects_bad_split() {
        let g = path(2);
        let sides = Bipartition::from_sides(vec![false, false, true]);
        assert_eq!(
            max_matching_bipartite(&g, &sides),
            Err(Error::InvalidBipartition(0, 1))
        );
    }

    #[test]
    fn brute_force_sizes() {
        let triangle = cycle(3);
        assert_eq!(max_matching_size(&triangle, b()).unwrap(), 1);
        assert_eq!(max_matching_size(&cycle(5), b()).unwrap(), 2);
        assert_eq!(max_matching_size(&petersen(), b()).unwrap(), 5);
        assert_eq!(
            max_matching_size(&Graph::new(0, &[]).unwrap(), b()).unwrap(),
            0
        );
    }

    #[test]
    fn budget_is_loud() {
        assert_eq!(
            max_matching_size(&petersen(), Budget::new(3)),
            Err(Error::BudgetExceeded(3))
        );
    }

    #[test]
    fn enumeration_examples() {
        let all = enumerate_max_matchings(&path(4), 10, b()).unwrap();
        let lists: Vec<_> = all.iter().map(|m| m.edges().to_vec()).collect();
        assert_eq!(
            lists,
            vec![
                vec![(0, 1), (2, 3)],
                vec![(0, 1), (3, 4)],
                vec![(1, 2), (3, 4)]
            ]
        );
        assert_eq!(
            enumerate_max_matchings(&cycle(4), 10, b()).unwrap().len(),
            2
        );
        assert_eq!(
            enumerate_max_matchings(&cycle(5), 10, b()).unwrap().len(),
            5
        );
        assert_eq!(
            enumerate_max_matchings(&cycle(5), 4, b()),
            Err(Error::LimitExceeded(4))
        );
        // Petersen has exactly six perfect matchings.
        assert_eq!(
            enumerate_max_matchings(&petersen(), 100, b())
                .unwrap()
                .len(),
            6
        );
    }

    #[test]
    fn forced_edge_examples() {
        let single = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(forced_edges(&single, b()).unwrap(), vec![(0, 1)]);
        assert!(forced_edges(&path(4), b()).unwrap().is_empty());
        assert_eq!(forced_edges(&path(3), b()).unwrap(), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn matching_validation() {
        let g = path(3);
        assert!(Matching::new(&g, [(0, 1), (2, 3)]).is_ok());
        assert!(matches!(
            Matching::new(&g, [(0, 1), (1, 2)]),
            Err(Error::NotAMatching(_))
        ));
        assert!(matches!(
            Matching::new(&g, [(0, 2)]),
            Err(Error::NotAMatching(_))
        ));
        let m = Matching::new(&g, [(3, 2), (1, 0)]).unwrap();
        assert_eq!(m.to_id_pairs(&g), vec![[0, 1], [2, 3]]);
        assert!(m.is_perfect(&g));
        assert_eq!(Matching::from_id_pairs(&g, &[[2, 3], [0, 1]]).unwrap(), m);
    }
}
