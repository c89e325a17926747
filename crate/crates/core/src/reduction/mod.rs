//! Reductions from strict Max E2-SAT to the residual matching problems.
//!
//! Each clause C_j becomes a block of two pair gadgets (one per literal) in
//! the coordinate band y ∈ [4j−3, 4j]. The ports of every occurrence of x_i
//! are strung into a cycle S_i whose edges alternate between `class_h` (the
//! port pairs v11v12, v21v22) and `class_v` (v12v21 plus the link from v22
//! to the next occurrence's v11). Every perfect matching of the assembled
//! graph takes one full class on each cycle, which is how assignments and
//! perfect matchings correspond.
//!
//! Layout per clause j with base id b = (j−1)·size:
//!
//! | theorem | size | column (x=−1) | x=0 pair | gadget g      |
//! |---------|------|---------------|----------|---------------|
//! | 1       | 22   | b..b+3        | b+4, b+5 | b+6+8g..+8    |
//! | 2       | 20   | b..b+3        | –        | b+4+8g..+8    |
//!
//! Inside a gadget the order is v11 v12 v21 v22 u11 u12 u21 u22.

mod artifact;
mod validate;

use std::collections::HashSet;

use serde::Serialize;

pub use artifact::dot_diagram;
pub use validate::{validate_reduction, CheckOutcome, CheckStatus, ValidationReport};

use crate::e2sat::{count_satisfied, require_strict, Assignment, Clause, E2SatInstance};
use crate::error::{Error, Result};
use crate::graph::{norm, Coord, Edge, EmbeddedGraph, Graph};
use crate::matching::{matching_number, Budget, Matching};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    One,
    Two,
}

impl Theorem {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Theorem::One),
            2 => Some(Theorem::Two),
            _ => None,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Theorem::One => 1,
            Theorem::Two => 2,
        }
    }

    pub fn block_size(self) -> usize {
        match self {
            Theorem::One => 22,
            Theorem::Two => 20,
        }
    }

    fn gadget_offset(self) -> usize {
        match self {
            Theorem::One => 6,
            Theorem::Two => 4,
        }
    }

    pub fn forced_per_clause(self) -> usize {
        match self {
            Theorem::One => 7,
            Theorem::Two => 6,
        }
    }

    pub fn expected_vertices(self, m: usize) -> usize {
        self.block_size() * m
    }

    pub fn expected_edges(self, m: usize) -> usize {
        match self {
            Theorem::One => 24 * m - 1,
            Theorem::Two => 22 * m - 1,
        }
    }

    /// The decision threshold k for satisfaction threshold K.
    pub fn threshold(self, m: usize, big_k: usize) -> usize {
        match self {
            Theorem::One => 7 * m + big_k - 1,
            Theorem::Two => 8 * m - 1 - big_k,
        }
    }

    /// Residual of one clause block given whether its clause is satisfied.
    pub fn local_residual(self, satisfied: bool) -> usize {
        match (self, satisfied) {
            (Theorem::One, true) | (Theorem::Two, false) => 6,
            _ => 5,
        }
    }

    /// β(G_I \ F_ε) when ε satisfies `sat` of the `m` clauses.
    pub fn residual_formula(self, m: usize, sat: usize) -> usize {
        2 * m - 1 + sat * self.local_residual(true) + (m - sat) * self.local_residual(false)
    }

    /// The bit ε_i encoded by taking class_h on S_i.
    pub fn class_h_bit(self) -> bool {
        self == Theorem::Two
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Spine,
    U,
    Port,
}

/// Where a gadget sits: first vertex id and the top-left cell of its 2×4
/// coordinate box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetAnchor {
    pub base: usize,
    pub x: i64,
    pub y: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairGadget {
    pub polarity: Polarity,
    /// v11, v12, v21, v22
    pub ports: [usize; 4],
    /// u11, u12, u21, u22
    pub u: [usize; 4],
    pub coords: [Coord; 8],
    pub edges: Vec<Edge>,
}

impl PairGadget {
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.ports.iter().chain(&self.u).copied()
    }

    pub fn forced(&self) -> [Edge; 2] {
        [norm(self.u[0], self.u[1]), norm(self.u[2], self.u[3])]
    }

    pub fn class_h(&self) -> [Edge; 2] {
        [
            norm(self.ports[0], self.ports[1]),
            norm(self.ports[2], self.ports[3]),
        ]
    }

    pub fn inner_vertical(&self) -> Edge {
        norm(self.ports[1], self.ports[2])
    }
}

/// Ports and u-vertices fill a 2×4 box. Cells with even x+y take v12, v22,
/// u11, u22 in (x, y) order; odd cells take v11, v21, u12, u21.
pub fn build_pair_gadget(polarity: Polarity, anchor: GadgetAnchor) -> PairGadget {
    const EVEN: [usize; 4] = [1, 3, 4, 7];
    const ODD: [usize; 4] = [0, 2, 5, 6];
    let mut coords = [Coord::new(0, 0); 8];
    let (mut even, mut odd) = (EVEN.iter(), ODD.iter());
    for dx in 0..2 {
        for dy in 0..4 {
            let c = Coord::new(anchor.x + dx, anchor.y + dy);
            let slot = if c.parity() == 0 {
                even.next()
            } else {
                odd.next()
            };
            coords[*slot.expect("four cells of each parity")] = c;
        }
    }
    let id = |k: usize| anchor.base + k;
    let [a, b, c, d, p, q, r, s] = [0, 1, 2, 3, 4, 5, 6, 7].map(id);
    let sense = match polarity {
        Polarity::Positive => a,
        Polarity::Negative => c,
    };
    let edges = [(a, b), (b, c), (c, d), (p, q), (r, s), (sense, p), (b, r)]
        .into_iter()
        .map(|(x, y)| norm(x, y))
        .collect();
    PairGadget {
        polarity,
        ports: [a, b, c, d],
        u: [p, q, r, s],
        coords,
        edges,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseBlock {
    pub j: usize,
    pub clause: Clause,
    pub gadgets: [PairGadget; 2],
    /// Column vertices (−1, 4j−3..4j), then the x=0 pair for theorem 1.
    pub spine: Vec<usize>,
    pub spine_coords: Vec<Coord>,
    /// E(G(C_j)): block-internal edges plus the incoming cycle links of both
    /// gadgets (the links are added by [`link_variable_cycles`]).
    pub edges: Vec<Edge>,
    pub forced: Vec<Edge>,
}

impl ClauseBlock {
    fn column(&self) -> &[usize] {
        &self.spine[..4]
    }

    fn layout(&self) -> impl Iterator<Item = (usize, Coord, Role)> + '_ {
        let spine = self
            .spine
            .iter()
            .zip(&self.spine_coords)
            .map(|(&v, &c)| (v, c, Role::Spine));
        let gadgets = self.gadgets.iter().flat_map(|g| {
            g.vertices()
                .zip(g.coords)
                .enumerate()
                .map(|(k, (v, c))| (v, c, if k < 4 { Role::Port } else { Role::U }))
        });
        spine.chain(gadgets)
    }
}

fn polarity_of(negated: bool) -> Polarity {
    if negated {
        Polarity::Negative
    } else {
        Polarity::Positive
    }
}

pub fn build_clause_block(theorem: Theorem, clause: &Clause, j: usize) -> ClauseBlock {
    let base = (j - 1) * theorem.block_size();
    let top = 4 * j as i64 - 3;
    let mut spine: Vec<usize> = (base..base + 4).collect();
    let mut spine_coords: Vec<Coord> = (0..4).map(|t| Coord::new(-1, top + t)).collect();
    let gadgets = [0usize, 1].map(|g| {
        let lit = clause.literals()[g];
        build_pair_gadget(
            polarity_of(lit.is_negated()),
            GadgetAnchor {
                base: base + theorem.gadget_offset() + 8 * g,
                x: 1 + 2 * g as i64,
                y: top,
            },
        )
    });
    let mut edges = vec![norm(base, base + 1), norm(base + 2, base + 3)];
    let mut forced = edges.clone();
    for g in &gadgets {
        edges.extend_from_slice(&g.edges);
        forced.extend(g.forced());
    }
    match theorem {
        Theorem::One => {
            let (o1, o2) = (base + 4, base + 5);
            spine.extend([o1, o2]);
            spine_coords.extend([Coord::new(0, top + 2), Coord::new(0, top + 3)]);
            edges.push(norm(o1, o2));
            forced.push(norm(o1, o2));
            for g in &gadgets {
                edges.push(norm(o2, g.u[2]));
            }
        }
        Theorem::Two => edges.push(norm(gadgets[0].u[2], gadgets[1].u[0])),
    }
    ClauseBlock {
        j,
        clause: *clause,
        gadgets,
        spine,
        spine_coords,
        edges,
        forced,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableCycle {
    pub var: usize,
    /// (clause j, literal slot) in ascending j.
    pub occurrences: Vec<(usize, usize)>,
    /// v11 v12 v21 v22 of each occurrence in turn; consecutive entries (and
    /// last to first) are joined by cycle edges.
    pub vertices: Vec<usize>,
    pub class_h: Vec<Edge>,
    pub class_v: Vec<Edge>,
}

impl VariableCycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges in walk order, starting with the first occurrence's v11v12.
    pub fn walk(&self) -> Vec<Edge> {
        let k = self.vertices.len();
        (0..k)
            .map(|t| norm(self.vertices[t], self.vertices[(t + 1) % k]))
            .collect()
    }
}

/// Strings the occurrences of each variable into its cycle and records each
/// incoming link v22 → v11 in the block of the receiving occurrence.
pub fn link_variable_cycles(
    blocks: &mut [ClauseBlock],
    inst: &E2SatInstance,
) -> Result<Vec<VariableCycle>> {
    let mut cycles = Vec::with_capacity(inst.num_vars());
    for var in 1..=inst.num_vars() {
        let occ = inst.occurrences(var);
        if occ.len() < 2 {
            return Err(Error::NotStrict(format!(
                "x{var} occurs in {} clause(s)",
                occ.len()
            )));
        }
        let ports = |(j, g): (usize, usize)| blocks[j - 1].gadgets[g].ports;
        let mut cycle = VariableCycle {
            var,
            occurrences: occ.clone(),
            vertices: Vec::with_capacity(4 * occ.len()),
            class_h: Vec::new(),
            class_v: Vec::new(),
        };
        let mut links = Vec::with_capacity(occ.len());
        for (t, &here) in occ.iter().enumerate() {
            let next = occ[(t + 1) % occ.len()];
            let [a, b, c, d] = ports(here);
            let link = norm(d, ports(next)[0]);
            cycle.vertices.extend([a, b, c, d]);
            cycle.class_h.extend([norm(a, b), norm(c, d)]);
            cycle.class_v.extend([norm(b, c), link]);
            links.push((next.0, link));
        }
        for (j, link) in links {
            blocks[j - 1].edges.push(link);
        }
        cycle.class_h.sort_unstable();
        cycle.class_v.sort_unstable();
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// The x=−1 column as one path through all 4m spine vertices, plus an edge
/// from u12 of each block's first gadget to (−1, 4j−1).
pub fn attach_connector(blocks: &[ClauseBlock]) -> Vec<Edge> {
    let mut connector = Vec::with_capacity(3 * blocks.len());
    for (t, block) in blocks.iter().enumerate() {
        let col = block.column();
        connector.push(norm(col[1], col[2]));
        if let Some(next) = blocks.get(t + 1) {
            connector.push(norm(col[3], next.column()[0]));
        }
        connector.push(norm(block.gadgets[0].u[1], col[2]));
    }
    connector.sort_unstable();
    connector
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionArtifact {
    pub theorem: Theorem,
    pub instance: E2SatInstance,
    /// The satisfaction threshold K.
    pub big_k: usize,
    /// The residual threshold k.
    pub k: usize,
    pub graph: EmbeddedGraph,
    pub blocks: Vec<ClauseBlock>,
    pub cycles: Vec<VariableCycle>,
    pub forced: Vec<Edge>,
    pub connector: Vec<Edge>,
    pub roles: Vec<Role>,
}

pub fn reduce(inst: &E2SatInstance, big_k: usize, theorem: Theorem) -> Result<ReductionArtifact> {
    require_strict(inst)?;
    let m = inst.num_clauses();
    if big_k < 1 || big_k > m {
        return Err(Error::ThresholdOutOfRange { k: big_k, m });
    }
    let mut blocks: Vec<ClauseBlock> = inst
        .clauses()
        .iter()
        .enumerate()
        .map(|(idx, c)| build_clause_block(theorem, c, idx + 1))
        .collect();
    let cycles = link_variable_cycles(&mut blocks, inst)?;
    let connector = attach_connector(&blocks);

    let total = theorem.expected_vertices(m);
    let mut coords = vec![None; total];
    let mut roles = vec![Role::Spine; total];
    for block in &blocks {
        for (v, c, role) in block.layout() {
            coords[v] = Some(c);
            roles[v] = role;
        }
    }
    let mut edges: Vec<Edge> = blocks
        .iter()
        .flat_map(|b| b.edges.iter().copied())
        .collect();
    edges.extend_from_slice(&connector);
    let graph = Graph::from_parts((0..total as i64).collect(), coords, &edges)?;
    let mut forced: Vec<Edge> = blocks
        .iter()
        .flat_map(|b| b.forced.iter().copied())
        .collect();
    forced.sort_unstable();
    for block in &mut blocks {
        block.edges.sort_unstable();
        block.forced.sort_unstable();
    }
    Ok(ReductionArtifact {
        theorem,
        instance: inst.clone(),
        big_k,
        k: theorem.threshold(m, big_k),
        graph: EmbeddedGraph::new(graph)?,
        blocks,
        cycles,
        forced,
        connector,
        roles,
    })
}

impl ReductionArtifact {
    pub fn graph(&self) -> &Graph {
        self.graph.graph()
    }

    pub fn m(&self) -> usize {
        self.instance.num_clauses()
    }

    pub fn n(&self) -> usize {
        self.instance.num_vars()
    }

    /// The class of S_var chosen when ε_var = `bit`.
    pub fn class_for(&self, var: usize, bit: bool) -> &[Edge] {
        let c = &self.cycles[var - 1];
        if bit == self.theorem.class_h_bit() {
            &c.class_h
        } else {
            &c.class_v
        }
    }

    /// Test hook: the same artifact with one graph edge deleted and all
    /// metadata left untouched.
    #[doc(hidden)]
    pub fn with_edge_removed(&self, e: Edge) -> ReductionArtifact {
        let graph = self.graph().without_edges(&[norm(e.0, e.1)]);
        ReductionArtifact {
            graph: EmbeddedGraph::new(graph).expect("coordinates unchanged"),
            ..self.clone()
        }
    }
}

/// F_ε: every forced edge plus, on each cycle, the class encoding ε_i.
pub fn assignment_to_matching(art: &ReductionArtifact, eps: &Assignment) -> Result<Matching> {
    if eps.len() != art.n() {
        return Err(Error::AssignmentLength {
            expected: art.n(),
            got: eps.len(),
        });
    }
    let mut edges = art.forced.clone();
    for var in 1..=art.n() {
        edges.extend_from_slice(art.class_for(var, eps.get(var)));
    }
    Matching::new(art.graph(), edges)
}

pub fn matching_to_assignment(art: &ReductionArtifact, f: &Matching) -> Result<Assignment> {
    let f = Matching::new(art.graph(), f.edges().iter().copied())?;
    if !f.is_perfect(art.graph()) {
        return Err(Error::NotPerfect {
            size: f.len(),
            vertices: art.graph().vertex_count(),
        });
    }
    let holds = |class: &[Edge]| class.iter().all(|&(u, v)| f.contains(u, v));
    let h_bit = art.theorem.class_h_bit();
    let bits = art
        .cycles
        .iter()
        .map(|c| {
            if holds(&c.class_h) {
                Ok(h_bit)
            } else if holds(&c.class_v) {
                Ok(!h_bit)
            } else {
                Err(Error::MixedClasses(c.var))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Assignment::new(bits))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    /// Values of the clause's first and second variable; the others are 0.
    pub setting: [bool; 2],
    pub satisfied: bool,
    pub residual: usize,
    pub expected: usize,
}

pub(crate) fn table_rows(art: &ReductionArtifact, j: usize) -> Result<Vec<TableRow>> {
    let block = j
        .checked_sub(1)
        .and_then(|i| art.blocks.get(i))
        .ok_or(Error::ClauseOutOfRange(j))?;
    let [l1, l2] = block.clause.literals();
    let mine: HashSet<Edge> = block.edges.iter().copied().collect();
    let mut rows = Vec::with_capacity(4);
    for setting in [[false, false], [false, true], [true, false], [true, true]] {
        let mut bits = vec![false; art.n()];
        bits[l1.var() - 1] = setting[0];
        bits[l2.var() - 1] = setting[1];
        let eps = Assignment::new(bits);
        let f = assignment_to_matching(art, &eps)?;
        let rest = art
            .graph()
            .edge_subgraph(|e| mine.contains(&e) && !f.contains(e.0, e.1));
        let satisfied = block.clause.satisfied_by(&eps);
        rows.push(TableRow {
            setting,
            satisfied,
            residual: matching_number(&rest, Budget::default())?,
            expected: art.theorem.local_residual(satisfied),
        });
    }
    Ok(rows)
}

/// β of block j after removing F_ε, for each setting of the clause's two
/// variables. Fails if any entry differs from the 6/5 (theorem 1) or 5/6
/// (theorem 2) rule.
pub fn clause_residual_table(art: &ReductionArtifact, j: usize) -> Result<Vec<TableRow>> {
    let rows = table_rows(art, j)?;
    if let Some(bad) = rows.iter().find(|r| r.residual != r.expected) {
        return Err(Error::TableMismatch {
            clause: j,
            setting: format!("{}{}", bad.setting[0] as u8, bad.setting[1] as u8),
            got: bad.residual,
            expected: bad.expected,
        });
    }
    Ok(rows)
}

/// K′ for ε and the residual the accounting identity predicts.
pub fn predicted_residual(art: &ReductionArtifact, eps: &Assignment) -> Result<(usize, usize)> {
    let sat = count_satisfied(&art.instance, eps)?;
    Ok((sat, art.theorem.residual_formula(art.m(), sat)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residual::residual_after;

    fn sample() -> E2SatInstance {
        E2SatInstance::from_codes(2, &[(1, 2), (-1, 2)]).unwrap()
    }

    #[test]
    fn gadget_shape() {
        for pol in [Polarity::Positive, Polarity::Negative] {
            let g = build_pair_gadget(
                pol,
                GadgetAnchor {
                    base: 0,
                    x: 1,
                    y: 1,
                },
            );
            assert_eq!(g.edges.len(), 7);
            assert!(g.edges.contains(&(4, 5)) && g.edges.contains(&(6, 7)));
            for &(u, v) in &g.edges {
                let (a, b) = (g.coords[u], g.coords[v]);
                assert_ne!(a.parity(), b.parity());
            }
        }
        let p = build_pair_gadget(
            Polarity::Positive,
            GadgetAnchor {
                base: 0,
                x: 1,
                y: 1,
            },
        );
        let n = build_pair_gadget(
            Polarity::Negative,
            GadgetAnchor {
                base: 0,
                x: 1,
                y: 1,
            },
        );
        assert!(p.edges.contains(&(0, 4)) && n.edges.contains(&(2, 4)));
    }

    #[test]
    fn sizes_and_thresholds() {
        let a = reduce(&sample(), 2, Theorem::One).unwrap();
        assert_eq!(
            (a.k, a.graph().vertex_count(), a.graph().edge_count()),
            (15, 44, 47)
        );
        let b = reduce(&sample(), 1, Theorem::Two).unwrap();
        assert_eq!(
            (b.k, b.graph().vertex_count(), b.graph().edge_count()),
            (14, 40, 43)
        );
        assert_eq!(a.cycles.iter().map(|c| c.len()).collect::<Vec<_>>(), [8, 8]);
        assert_eq!(a.forced.len(), 14);
        assert_eq!(b.forced.len(), 12);
    }

    #[test]
    fn reduce_errors() {
        let once = E2SatInstance::from_codes(3, &[(1, 2), (-1, 3), (1, 3)]).unwrap();
        assert!(matches!(
            reduce(&once, 1, Theorem::One),
            Err(Error::NotStrict(_))
        ));
        assert_eq!(
            reduce(&sample(), 3, Theorem::One),
            Err(Error::ThresholdOutOfRange { k: 3, m: 2 })
        );
        assert_eq!(
            reduce(&sample(), 0, Theorem::Two),
            Err(Error::ThresholdOutOfRange { k: 0, m: 2 })
        );
    }

    #[test]
    fn forward_map_examples() {
        let a = reduce(&sample(), 2, Theorem::One).unwrap();
        let budget = Budget::default();
        let f = assignment_to_matching(&a, &Assignment::from_bits(&[0, 1])).unwrap();
        assert_eq!(f.len(), 22);
        assert!(f.is_perfect(a.graph()));
        assert_eq!(residual_after(a.graph(), &f, budget).unwrap(), 15);
        let f = assignment_to_matching(&a, &Assignment::from_bits(&[0, 0])).unwrap();
        assert_eq!(residual_after(a.graph(), &f, budget).unwrap(), 14);
        assert_eq!(
            matching_to_assignment(&a, &f).unwrap(),
            Assignment::from_bits(&[0, 0])
        );
    }

    #[test]
    fn round_trip_and_tables() {
        for th in [Theorem::One, Theorem::Two] {
            let a = reduce(&sample(), 1, th).unwrap();
            for eps in Assignment::all(2) {
                let f = assignment_to_matching(&a, &eps).unwrap();
                assert_eq!(matching_to_assignment(&a, &f).unwrap(), eps);
            }
            for j in 1..=2 {
                clause_residual_table(&a, j).unwrap();
            }
            assert_eq!(
                clause_residual_table(&a, 3),
                Err(Error::ClauseOutOfRange(3))
            );
        }
    }

    #[test]
    fn backward_map_rejects() {
        let a = reduce(&sample(), 1, Theorem::One).unwrap();
        let partial = Matching::new(a.graph(), a.forced.iter().copied()).unwrap();
        assert!(matches!(
            matching_to_assignment(&a, &partial),
            Err(Error::NotPerfect { .. })
        ));
    }
}
