use std::collections::HashMap;
use std::fmt::Write;

use serde::Serialize;

use super::{ReductionArtifact, Role};
use crate::graph::{Edge, GraphFile};

#[derive(Serialize)]
struct ArtifactFile {
    #[serde(flatten)]
    graph: GraphFile,
    meta: Meta,
}

#[derive(Serialize)]
struct Meta {
    theorem: u8,
    k: usize,
    #[serde(rename = "K")]
    big_k: usize,
    m: usize,
    n: usize,
    clauses: Vec<[i64; 2]>,
    forced: Vec<[i64; 2]>,
    connector: Vec<[i64; 2]>,
    clause_blocks: Vec<BlockMeta>,
    cycles: Vec<CycleMeta>,
    roles: RoleMeta,
}

#[derive(Serialize)]
struct BlockMeta {
    j: usize,
    spine: Vec<i64>,
    gadgets: Vec<GadgetMeta>,
    edges: Vec<[i64; 2]>,
}

#[derive(Serialize)]
struct GadgetMeta {
    polarity: super::Polarity,
    ports: [i64; 4],
    u: [i64; 4],
}

#[derive(Serialize)]
struct CycleMeta {
    variable: usize,
    vertices: Vec<i64>,
    class_h: Vec<[i64; 2]>,
    class_v: Vec<[i64; 2]>,
}

#[derive(Serialize)]
struct RoleMeta {
    spine: Vec<i64>,
    u: Vec<i64>,
    port: Vec<i64>,
}

impl ReductionArtifact {
    fn pairs(&self, edges: &[Edge]) -> Vec<[i64; 2]> {
        edges.iter().map(|&e| self.graph().id_pair(e)).collect()
    }

    fn ids(&self, vs: impl IntoIterator<Item = usize>) -> Vec<i64> {
        vs.into_iter().map(|v| self.graph().id(v)).collect()
    }

    fn file(&self) -> ArtifactFile {
        let by_role =
            |role: Role| self.ids((0..self.roles.len()).filter(|&v| self.roles[v] == role));
        let meta = Meta {
            theorem: self.theorem.number(),
            k: self.k,
            big_k: self.big_k,
            m: self.m(),
            n: self.n(),
            clauses: self
                .instance
                .clauses()
                .iter()
                .map(|c| c.literals().map(|l| l.to_dimacs()))
                .collect(),
            forced: self.pairs(&self.forced),
            connector: self.pairs(&self.connector),
            clause_blocks: self
                .blocks
                .iter()
                .map(|b| BlockMeta {
                    j: b.j,
                    spine: self.ids(b.spine.iter().copied()),
                    gadgets: b
                        .gadgets
                        .iter()
                        .map(|g| GadgetMeta {
                            polarity: g.polarity,
                            ports: g.ports.map(|v| self.graph().id(v)),
                            u: g.u.map(|v| self.graph().id(v)),
                        })
                        .collect(),
                    edges: self.pairs(&b.edges),
                })
                .collect(),
            cycles: self
                .cycles
                .iter()
                .map(|c| CycleMeta {
                    variable: c.var,
                    vertices: self.ids(c.vertices.iter().copied()),
                    class_h: self.pairs(&c.class_h),
                    class_v: self.pairs(&c.class_v),
                })
                .collect(),
            roles: RoleMeta {
                spine: by_role(Role::Spine),
                u: by_role(Role::U),
                port: by_role(Role::Port),
            },
        };
        ArtifactFile {
            graph: self.graph().to_file(),
            meta,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.file()).expect("artifact serializes")
    }

    /// The artifact file: the graph file plus a `meta` object.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.file()).expect("artifact serializes");
        s.push('\n');
        s
    }
}

/// Graphviz drawing of an artifact with pinned coordinates. Forced edges are
/// bold, class_h blue, class_v red, connector edges dashed grey.
pub fn dot_diagram(art: &ReductionArtifact) -> String {
    let mut style: HashMap<Edge, &str> = HashMap::new();
    for &e in &art.connector {
        style.insert(e, "color=gray50, style=dashed");
    }
    for c in &art.cycles {
        for &e in &c.class_h {
            style.insert(e, "color=blue");
        }
        for &e in &c.class_v {
            style.insert(e, "color=red");
        }
    }
    for &e in &art.forced {
        style.insert(e, "penwidth=3");
    }
    let g = art.graph();
    let mut out = String::new();
    writeln!(out, "graph G_I {{").unwrap();
    writeln!(
        out,
        "  node [shape=circle, fontsize=9, width=0.35, fixedsize=true];"
    )
    .unwrap();
    for v in 0..g.vertex_count() {
        let c = art.graph.coord(v);
        let (label, shape) = vertex_label(art, v);
        writeln!(
            out,
            "  {} [label=\"{}\", shape={}, pos=\"{},{}!\"];",
            g.id(v),
            label,
            shape,
            2 * c.x,
            -2 * c.y
        )
        .unwrap();
    }
    for &e in g.edges() {
        let [a, b] = g.id_pair(e);
        match style.get(&e) {
            Some(s) => writeln!(out, "  {a} -- {b} [{s}];").unwrap(),
            None => writeln!(out, "  {a} -- {b};").unwrap(),
        }
    }
    out.push_str("}\n");
    out
}

fn vertex_label(art: &ReductionArtifact, v: usize) -> (String, &'static str) {
    const PORTS: [&str; 4] = ["v11", "v12", "v21", "v22"];
    const US: [&str; 4] = ["u11", "u12", "u21", "u22"];
    for b in &art.blocks {
        for g in &b.gadgets {
            if let Some(k) = g.ports.iter().position(|&p| p == v) {
                return (PORTS[k].to_string(), "circle");
            }
            if let Some(k) = g.u.iter().position(|&p| p == v) {
                return (US[k].to_string(), "circle");
            }
        }
        if b.spine.contains(&v) {
            return (art.graph().id(v).to_string(), "box");
        }
    }
    (art.graph().id(v).to_string(), "circle")
}

#[cfg(test)]
mod tests {
    use super::super::{reduce, Theorem};
    use crate::e2sat::E2SatInstance;
    use crate::graph::Graph;

    #[test]
    fn json_carries_graph_and_meta() {
        let inst = E2SatInstance::from_codes(2, &[(1, 2), (-1, 2)]).unwrap();
        let art = reduce(&inst, 2, Theorem::One).unwrap();
        let text = art.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["meta"]["k"], 15);
        assert_eq!(v["meta"]["K"], 2);
        assert_eq!(v["meta"]["cycles"].as_array().unwrap().len(), 2);
        assert_eq!(v["meta"]["roles"]["spine"].as_array().unwrap().len(), 12);
        let g = Graph::from_json(&text).unwrap();
        assert_eq!(&g, art.graph());
        assert_eq!(text, reduce(&inst, 2, Theorem::One).unwrap().to_json());
    }
}
