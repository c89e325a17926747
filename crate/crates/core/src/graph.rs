//! Simple undirected graphs, plane embeddings with the parity bipartition,
//! special-family classification and the JSON / DOT file surfaces.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An edge as a pair of dense vertex indices with `0 <= u < v`.
pub type Edge = (usize, usize);

pub(crate) fn norm(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coord {
    pub x: i64,
    pub y: i64,
}

impl Coord {
    pub const fn new(x: i64, y: i64) -> Self {
        Coord { x, y }
    }

    /// `(x + y) mod 2`, always 0 or 1.
    pub fn parity(self) -> u8 {
        (self.x + self.y).rem_euclid(2) as u8
    }
}

/// A simple undirected graph over dense vertex indices `0..n`.
///
/// Every vertex also carries an external integer id (used by the file
/// format) and an optional plane coordinate. Graphs are immutable once
/// built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<i64>,
    coords: Vec<Option<Coord>>,
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph on vertices `0..vertex_count` whose ids equal their
    /// indices.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let ids = (0..vertex_count as i64).collect();
        Self::from_parts(ids, vec![None; vertex_count], edges)
    }

    /// Builds a graph whose vertices carry the given ids; edges are given by
    /// id.
    pub fn with_ids(ids: Vec<i64>, edges: &[(i64, i64)]) -> Result<Self> {
        let n = ids.len();
        Self::labeled(ids, vec![None; n], edges)
    }

    /// Builds a graph from ids, optional coordinates and id-addressed edges.
    pub fn labeled(
        ids: Vec<i64>,
        coords: Vec<Option<Coord>>,
        edges: &[(i64, i64)],
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(ids.len());
        for (i, &id) in ids.iter().enumerate() {
            if index.insert(id, i).is_some() {
                return Err(Error::DuplicateVertexId(id));
            }
        }
        let lookup = |id: i64| index.get(&id).copied().ok_or(Error::VertexOutOfRange(id));
        let dense = edges
            .iter()
            .map(|&(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(ids, coords, &dense)
    }

    pub(crate) fn from_parts(
        ids: Vec<i64>,
        coords: Vec<Option<Coord>>,
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        let n = ids.len();
        assert_eq!(coords.len(), n, "one coordinate slot per vertex");
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange(w as i64));
                }
            }
            if u == v {
                return Err(Error::SelfLoop(ids[u]));
            }
            let e = norm(u, v);
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(ids[e.0], ids[e.1]));
            }
            adj[u].push(v);
            adj[v].push(u);
            list.push(e);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        list.sort_unstable();
        Ok(Graph {
            ids,
            coords,
            adj,
            edges: list,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending `(u, v)` order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn id(&self, v: usize) -> i64 {
        self.ids[v]
    }

    pub fn ids(&self) -> &[i64] {
        &self.ids
    }

    pub fn coord(&self, v: usize) -> Option<Coord> {
        self.coords[v]
    }

    pub fn coords(&self) -> &[Option<Coord>] {
        &self.coords
    }

    pub fn index_of(&self, id: i64) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    /// The edge written with external ids, smaller id first.
    pub fn id_pair(&self, e: Edge) -> [i64; 2] {
        let (a, b) = (self.ids[e.0], self.ids[e.1]);
        if a <= b {
            [a, b]
        } else {
            [b, a]
        }
    }

    /// Same vertices (ids and coordinates kept), edges filtered by `keep`.
    pub fn edge_subgraph(&self, mut keep: impl FnMut(Edge) -> bool) -> Graph {
        let kept: Vec<Edge> = self.edges.iter().copied().filter(|&e| keep(e)).collect();
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(u, v) in &kept {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Graph {
            ids: self.ids.clone(),
            coords: self.coords.clone(),
            adj,
            edges: kept,
        }
    }

    /// `G \ removed`: the edge-deleted graph on the same vertex set.
    pub fn without_edges(&self, removed: &[Edge]) -> Graph {
        let gone: HashSet<Edge> = removed.iter().map(|&(u, v)| norm(u, v)).collect();
        self.edge_subgraph(|e| !gone.contains(&e))
    }

    /// Disjoint union; vertices of `other` are shifted past this graph's and
    /// get fresh ids following the largest id of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count();
        let base = self.ids.iter().copied().max().map_or(0, |m| m + 1);
        let mut ids = self.ids.clone();
        ids.extend((0..other.vertex_count() as i64).map(|i| base + i));
        let mut coords = self.coords.clone();
        coords.extend(other.coords.iter().copied());
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Graph::from_parts(ids, coords, &edges).expect("union of simple graphs is simple")
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// A proper 2-colouring by BFS (`true` = second side), if one exists.
    pub fn two_coloring(&self) -> Option<Bipartition> {
        let n = self.vertex_count();
        let mut side: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for &w in &self.adj[u] {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(Bipartition {
            side: side.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            vertices: self.vertex_count(),
            edges: self.edge_count(),
            max_degree: self.max_degree(),
            connected: self.is_connected(),
        }
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self
                .ids
                .iter()
                .zip(&self.coords)
                .map(|(&id, c)| VertexRecord {
                    id,
                    x: c.map(|c| c.x),
                    y: c.map(|c| c.y),
                })
                .collect(),
            edges: self.edges.iter().map(|&e| self.id_pair(e)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("graph file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::GraphFormat(e.to_string()))?;
        file.into_graph()
    }

    /// Graphviz rendering; `pos` is pinned when the vertex has a coordinate.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for (v, &id) in self.ids.iter().enumerate() {
            match self.coords[v] {
                Some(c) => writeln!(out, "  {id} [label=\"{id}\", pos=\"{},{}!\"];", c.x, c.y),
                None => writeln!(out, "  {id} [label=\"{id}\"];"),
            }
            .unwrap();
        }
        for &e in &self.edges {
            let [a, b] = self.id_pair(e);
            writeln!(out, "  {a} -- {b};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_graph(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Graph> {
    Graph::new(vertex_count, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub connected: bool,
}

/// On-disk graph: vertices with optional coordinates, edges by id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<[i64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: i64,
    pub x: Option<i64>,
    pub y: Option<i64>,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<Graph> {
        let mut ids = Vec::with_capacity(self.vertices.len());
        let mut coords = Vec::with_capacity(self.vertices.len());
        for rec in &self.vertices {
            ids.push(rec.id);
            coords.push(match (rec.x, rec.y) {
                (Some(x), Some(y)) => Some(Coord { x, y }),
                (None, None) => None,
                _ => {
                    return Err(Error::GraphFormat(format!(
                        "vertex {} has only one of x and y",
                        rec.id
                    )))
                }
            });
        }
        let edges: Vec<(i64, i64)> = self.edges.iter().map(|&[a, b]| (a, b)).collect();
        Graph::labeled(ids, coords, &edges)
    }
}

/// Two-sided vertex split; `side(v) == true` puts `v` on the second side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    side: Vec<bool>,
}

impl Bipartition {
    pub fn from_sides(side: Vec<bool>) -> Self {
        Bipartition { side }
    }

    pub fn side(&self, v: usize) -> bool {
        self.side[v]
    }

    pub fn sides(&self) -> &[bool] {
        &self.side
    }

    pub fn first(&self) -> Vec<usize> {
        (0..self.side.len()).filter(|&v| !self.side[v]).collect()
    }

    pub fn second(&self) -> Vec<usize> {
        (0..self.side.len()).filter(|&v| self.side[v]).collect()
    }

    /// Checks that the split has one entry per vertex and every edge crosses.
    pub fn check(&self, g: &Graph) -> Result<()> {
        if self.side.len() != g.vertex_count() {
            return Err(Error::BipartitionLength {
                expected: g.vertex_count(),
                got: self.side.len(),
            });
        }
        match g
            .edges()
            .iter()
            .find(|&&(u, v)| self.side[u] == self.side[v])
        {
            Some(&(u, v)) => Err(Error::InvalidBipartition(g.id(u), g.id(v))),
            None => Ok(()),
        }
    }
}

/// A graph in which every vertex has a distinct integer plane coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedGraph {
    graph: Graph,
}

impl EmbeddedGraph {
    pub fn new(graph: Graph) -> Result<Self> {
        let mut owner: HashMap<Coord, usize> = HashMap::with_capacity(graph.vertex_count());
        for v in 0..graph.vertex_count() {
            let c = graph
                .coord(v)
                .ok_or(Error::MissingCoordinate(graph.id(v)))?;
            if let Some(&u) = owner.get(&c) {
                return Err(Error::DuplicateCoordinate(
                    graph.id(u),
                    graph.id(v),
                    c.x,
                    c.y,
                ));
            }
            owner.insert(c, v);
        }
        Ok(EmbeddedGraph { graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn coord(&self, v: usize) -> Coord {
        self.graph
            .coord(v)
            .expect("embedded vertices carry coordinates")
    }
}

/// Splits an embedded graph by the parity of `x + y`; fails on the first edge
/// whose endpoints share that parity.
pub fn parity_bipartition(g: &EmbeddedGraph) -> Result<Bipartition> {
    let graph = g.graph();
    for &(u, v) in graph.edges() {
        let (a, b) = (g.coord(u), g.coord(v));
        let dx = (a.x - b.x).abs() % 2;
        let dy = (a.y - b.y).abs() % 2;
        if dx == dy {
            return Err(Error::ParityViolation(graph.id(u), graph.id(v)));
        }
    }
    Ok(Bipartition {
        side: (0..graph.vertex_count())
            .map(|v| g.coord(v).parity() == 1)
            .collect(),
    })
}

/// One connected piece of a graph with maximum degree at most two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Component {
    /// A path with the given number of edges (0 is an isolated vertex).
    Path(usize),
    Cycle(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SpecialClass {
    Path(usize),
    Cycle(usize),
    /// Components sorted, so the tag is independent of vertex labels.
    DegreeAtMostTwo(Vec<Component>),
    RegularBipartite(usize),
    General,
}

pub fn classify_special(g: &Graph) -> SpecialClass {
    if g.max_degree() <= 2 {
        let mut parts: Vec<Component> = g
            .components()
            .iter()
            .map(|comp| classify_component(g, comp))
            .collect();
        if parts.len() == 1 {
            return match parts[0] {
                Component::Path(k) => SpecialClass::Path(k),
                Component::Cycle(k) => SpecialClass::Cycle(k),
            };
        }
        parts.sort_unstable();
        return SpecialClass::DegreeAtMostTwo(parts);
    }
    let r = g.degree(0);
    if r >= 2 && (0..g.vertex_count()).all(|v| g.degree(v) == r) && g.two_coloring().is_some() {
        return SpecialClass::RegularBipartite(r);
    }
    SpecialClass::General
}

fn classify_component(g: &Graph, comp: &[usize]) -> Component {
    let edges = comp.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
    if edges == comp.len() {
        Component::Cycle(edges)
    } else {
        Component::Path(edges)
    }
}
