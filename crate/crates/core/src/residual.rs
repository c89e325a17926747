//! Residual matching numbers β(G \ F) over the maximum matchings F of G:
//! optimisation, decision, and closed forms for paths, cycles, graphs of
//! maximum degree two and regular bipartite graphs.

use std::ops::ControlFlow;

use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::{classify_special, norm, Component, Edge, Graph, SpecialClass};
use crate::matching::{
    for_each_max_matching, matching_number, max_matching_bipartite, Budget, Matching,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualSummary {
    pub beta: usize,
    pub min_residual: usize,
    pub max_residual: usize,
    pub min_witness: Matching,
    pub max_witness: Matching,
}

impl ResidualSummary {
    pub fn to_json(&self, host: &Graph) -> serde_json::Value {
        json!({
            "beta": self.beta,
            "min": self.min_residual,
            "max": self.max_residual,
            "min_witness": self.min_witness.to_id_pairs(host),
            "max_witness": self.max_witness.to_id_pairs(host),
        })
    }
}

fn residual_unchecked(g: &Graph, f: &Matching, budget: Budget) -> Result<usize> {
    matching_number(&g.without_edges(f.edges()), budget)
}

/// β of `(V(g), E(g) \ f)` for a maximum matching `f` of `g`.
pub fn residual_after(g: &Graph, f: &Matching, budget: Budget) -> Result<usize> {
    let f = Matching::new(g, f.edges().iter().copied())?;
    let beta = matching_number(g, budget)?;
    if f.len() != beta {
        return Err(Error::NotMaximum {
            size: f.len(),
            beta,
        });
    }
    residual_unchecked(g, &f, budget)
}

/// Full scan of the maximum matchings. Witnesses are the first attainers in
/// enumeration order.
pub fn summarize(g: &Graph, budget: Budget) -> Result<ResidualSummary> {
    let mut best: Option<ResidualSummary> = None;
    let mut failure = None;
    for_each_max_matching(g, budget, |m| {
        let r = match residual_unchecked(g, m, budget) {
            Ok(r) => r,
            Err(e) => {
                failure = Some(e);
                return ControlFlow::Break(());
            }
        };
        match &mut best {
            None => {
                best = Some(ResidualSummary {
                    beta: m.len(),
                    min_residual: r,
                    max_residual: r,
                    min_witness: m.clone(),
                    max_witness: m.clone(),
                })
            }
            Some(s) => {
                if r < s.min_residual {
                    s.min_residual = r;
                    s.min_witness = m.clone();
                }
                if r > s.max_residual {
                    s.max_residual = r;
                    s.max_witness = m.clone();
                }
            }
        }
        ControlFlow::Continue(())
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(best.expect("every graph has at least one maximum matching"))
}

pub fn max_residual(g: &Graph, budget: Budget) -> Result<(usize, Matching)> {
    let s = summarize(g, budget)?;
    Ok((s.max_residual, s.max_witness))
}

pub fn min_residual(g: &Graph, budget: Budget) -> Result<(usize, Matching)> {
    let s = summarize(g, budget)?;
    Ok((s.min_residual, s.min_witness))
}

fn first_witness(
    g: &Graph,
    budget: Budget,
    accept: impl Fn(usize) -> bool,
) -> Result<Option<Matching>> {
    let mut found = None;
    let mut failure = None;
    for_each_max_matching(g, budget, |m| match residual_unchecked(g, m, budget) {
        Ok(r) if accept(r) => {
            found = Some(m.clone());
            ControlFlow::Break(())
        }
        Ok(_) => ControlFlow::Continue(()),
        Err(e) => {
            failure = Some(e);
            ControlFlow::Break(())
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

/// First maximum matching F (enumeration order) with β(G \ F) ≥ k.
pub fn witness_ge(g: &Graph, k: usize, budget: Budget) -> Result<Option<Matching>> {
    first_witness(g, budget, |r| r >= k)
}

/// First maximum matching F (enumeration order) with β(G \ F) ≤ k.
pub fn witness_le(g: &Graph, k: usize, budget: Budget) -> Result<Option<Matching>> {
    first_witness(g, budget, |r| r <= k)
}

/// Is there a maximum matching F with β(G \ F) ≥ k? Always true for k = 0.
pub fn decide_ge(g: &Graph, k: usize, budget: Budget) -> Result<bool> {
    if k == 0 {
        return Ok(true);
    }
    Ok(witness_ge(g, k, budget)?.is_some())
}

/// Is there a maximum matching F with β(G \ F) ≤ k?
pub fn decide_le(g: &Graph, k: usize, budget: Budget) -> Result<bool> {
    Ok(witness_le(g, k, budget)?.is_some())
}

/// Closed-form summary for the families where the problems are easy, or
/// `None` for any other graph.
pub fn special_case_residual(g: &Graph) -> Option<ResidualSummary> {
    match classify_special(g) {
        SpecialClass::Path(_) | SpecialClass::Cycle(_) | SpecialClass::DegreeAtMostTwo(_) => {
            Some(degree_two_summary(g))
        }
        SpecialClass::RegularBipartite(_) => {
            let sides = g.two_coloring()?;
            let perfect = max_matching_bipartite(g, &sides).ok()?;
            let half = g.vertex_count() / 2;
            Some(ResidualSummary {
                beta: half,
                min_residual: half,
                max_residual: half,
                min_witness: perfect.clone(),
                max_witness: perfect,
            })
        }
        SpecialClass::General => None,
    }
}

fn degree_two_summary(g: &Graph) -> ResidualSummary {
    let mut s = ResidualSummary {
        beta: 0,
        min_residual: 0,
        max_residual: 0,
        min_witness: Matching::default(),
        max_witness: Matching::default(),
    };
    let mut min_edges = Vec::new();
    let mut max_edges = Vec::new();
    for comp in g.components() {
        let (kind, walk) = trace(g, &comp);
        // edge i of the walk is walk[i]..walk[i+1]; 0-based
        let edge = |i: usize| norm(walk[i], walk[(i + 1) % walk.len()]);
        let every_other = |from: usize, to: usize| (from..to).step_by(2).map(edge);
        match kind {
            Component::Path(n) if n % 2 == 0 => {
                let k = n / 2;
                s.beta += k;
                s.max_residual += k;
                max_edges.extend(every_other(0, n));
                if k >= 2 {
                    // e1 together with e4, e6, ..., e2k
                    s.min_residual += k - 1;
                    min_edges.push(edge(0));
                    min_edges.extend(every_other(3, n));
                } else {
                    s.min_residual += k;
                    min_edges.extend(every_other(0, n));
                }
            }
            Component::Path(n) => {
                let k = n / 2;
                s.beta += k + 1;
                s.min_residual += k;
                s.max_residual += k;
                min_edges.extend(every_other(0, n));
                max_edges.extend(every_other(0, n));
            }
            Component::Cycle(n) => {
                let half = n / 2;
                s.beta += half;
                s.min_residual += half;
                s.max_residual += half;
                min_edges.extend(every_other(0, 2 * half));
                max_edges.extend(every_other(0, 2 * half));
            }
        }
    }
    s.min_witness = Matching::new(g, min_edges).expect("closed-form witness is a matching");
    s.max_witness = Matching::new(g, max_edges).expect("closed-form witness is a matching");
    s
}

/// Walks a path or cycle component from its smallest endpoint (or smallest
/// vertex for a cycle) and returns the vertex sequence.
fn trace(g: &Graph, comp: &[usize]) -> (Component, Vec<usize>) {
    let edges = comp.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
    let is_cycle = edges == comp.len();
    let start = if is_cycle {
        comp[0]
    } else {
        *comp
            .iter()
            .find(|&&v| g.degree(v) <= 1)
            .expect("paths have an end")
    };
    let mut walk = vec![start];
    let mut prev = usize::MAX;
    let mut at = start;
    while walk.len() < comp.len() {
        let next = *g
            .neighbors(at)
            .iter()
            .find(|&&w| w != prev && w != start)
            .expect("component is a path or cycle");
        prev = at;
        at = next;
        walk.push(at);
    }
    let kind = if is_cycle {
        Component::Cycle(edges)
    } else {
        Component::Path(edges)
    };
    (kind, walk)
}

/// Edges of `g` along a path or cycle component, in walk order. Exposed for
/// tests and reports that talk about e1, e2, ...
pub fn walk_edges(g: &Graph, comp: &[usize]) -> Vec<Edge> {
    let (kind, walk) = trace(g, comp);
    let n = match kind {
        Component::Path(n) | Component::Cycle(n) => n,
    };
    (0..n)
        .map(|i| norm(walk[i], walk[(i + 1) % walk.len()]))
        .collect()
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

    fn m(g: &Graph, edges: &[Edge]) -> Matching {
        Matching::new(g, edges.iter().copied()).unwrap()
    }

    const B: Budget = Budget::new(1_000_000);

    #[test]
    fn residual_after_examples() {
        let c4 = cycle(4);
        assert_eq!(
            residual_after(&c4, &m(&c4, &[(0, 1), (2, 3)]), B).unwrap(),
            2
        );
        let p4 = path(4);
        assert_eq!(
            residual_after(&p4, &m(&p4, &[(0, 1), (3, 4)]), B).unwrap(),
            1
        );
        assert_eq!(
            residual_after(&p4, &m(&p4, &[(0, 1), (2, 3)]), B).unwrap(),
            2
        );
        assert_eq!(
            residual_after(&p4, &m(&p4, &[(1, 2)]), B),
            Err(Error::NotMaximum { size: 1, beta: 2 })
        );
    }

    #[test]
    fn optimisation_examples() {
        let p4 = path(4);
        assert_eq!(
            max_residual(&p4, B).unwrap(),
            (2, m(&p4, &[(0, 1), (2, 3)]))
        );
        assert_eq!(
            min_residual(&p4, B).unwrap(),
            (1, m(&p4, &[(0, 1), (3, 4)]))
        );

        let p5 = path(5);
        assert_eq!(
            max_residual(&p5, B).unwrap(),
            (2, m(&p5, &[(0, 1), (2, 3), (4, 5)]))
        );
        assert_eq!(max_residual(&cycle(6), B).unwrap().0, 3);

        let p2 = path(2);
        assert_eq!(min_residual(&p2, B).unwrap(), (1, m(&p2, &[(0, 1)])));
        assert_eq!(min_residual(&cycle(7), B).unwrap().0, 3);
    }

    #[test]
    fn decision_examples() {
        let p4 = path(4);
        assert!(decide_ge(&p4, 2, B).unwrap());
        assert!(!decide_ge(&p4, 3, B).unwrap());
        assert!(decide_ge(&p4, 0, B).unwrap());
        assert!(!decide_le(&p4, 0, B).unwrap());
        assert!(decide_le(&p4, 1, B).unwrap());
        let empty = Graph::new(0, &[]).unwrap();
        assert!(decide_ge(&empty, 0, B).unwrap());
        assert!(decide_le(&empty, 0, B).unwrap());
    }

    #[test]
    fn closed_forms() {
        let s = special_case_residual(&path(6)).unwrap();
        assert_eq!((s.min_residual, s.max_residual), (2, 3));
        let k33 = Graph::new(
            6,
            &(0..3)
                .flat_map(|i| (3..6).map(move |j| (i, j)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let s = special_case_residual(&k33).unwrap();
        assert_eq!((s.min_residual, s.max_residual), (3, 3));
        let union = path(2).disjoint_union(&cycle(4));
        let s = special_case_residual(&union).unwrap();
        assert_eq!((s.min_residual, s.max_residual), (3, 3));
        let full = summarize(&union, B).unwrap();
        assert_eq!((full.min_residual, full.max_residual), (3, 3));
        let k4 = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(special_case_residual(&k4).is_none());
    }

    #[test]
    fn closed_form_witnesses_attain_values() {
        for g in [
            path(1),
            path(2),
            path(4),
            path(7),
            path(8),
            cycle(5),
            cycle(8),
        ] {
            let s = special_case_residual(&g).unwrap();
            assert_eq!(
                residual_after(&g, &s.min_witness, B).unwrap(),
                s.min_residual
            );
            assert_eq!(
                residual_after(&g, &s.max_witness, B).unwrap(),
                s.max_residual
            );
        }
    }

    #[test]
    fn summary_json_shape() {
        let p4 = path(4);
        let v = summarize(&p4, B).unwrap().to_json(&p4);
        assert_eq!(v["beta"], 2);
        assert_eq!(v["min"], 1);
        assert_eq!(v["max"], 2);
        assert_eq!(v["min_witness"], json!([[0, 1], [3, 4]]));
    }
}
