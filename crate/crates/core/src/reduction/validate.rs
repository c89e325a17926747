use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{
    assignment_to_matching, matching_to_assignment, predicted_residual, table_rows,
    ReductionArtifact, Theorem,
};
use crate::e2sat::{max_sat_bruteforce, Assignment};
use crate::error::Result;
use crate::graph::{parity_bipartition, Edge};
use crate::matching::{enumerate_max_matchings, forced_edges, matching_number, Budget};
use crate::residual::{decide_ge, decide_le, summarize};

/// Behavioural checks enumerate 2^n assignments and all perfect matchings;
/// beyond this size they are skipped.
pub const DESK_MAX_VARS: usize = 4;
pub const DESK_MAX_CLAUSES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<Value>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome {
            name,
            status: CheckStatus::Pass,
            detail: String::new(),
            counterexamples: Vec::new(),
        }
    }

    fn fail(&mut self, why: impl Into<String>) {
        self.status = CheckStatus::Fail;
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(&why.into());
    }

    fn require(&mut self, ok: bool, why: impl FnOnce() -> String) {
        if !ok {
            self.fail(why());
        }
    }

    fn skipped(name: &'static str, why: &str) -> Self {
        CheckOutcome {
            name,
            status: CheckStatus::Skipped,
            detail: why.into(),
            counterexamples: Vec::new(),
        }
    }

    fn finish(mut self, ok_detail: impl FnOnce() -> String) -> Self {
        if self.status == CheckStatus::Pass && self.detail.is_empty() {
            self.detail = ok_detail();
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reproducer {
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub theorem: u8,
    pub m: usize,
    pub n: usize,
    pub thresholds: Vec<usize>,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    pub reproducer: Reproducer,
}

impl ValidationReport {
    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.reproducer.seed = Some(seed);
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Runs every structural and behavioural check on `art`. The equivalence
/// check covers each satisfaction threshold in `thresholds` (the artifact's
/// own K when empty).
pub fn validate_reduction(
    art: &ReductionArtifact,
    thresholds: &[usize],
    budget: Budget,
) -> ValidationReport {
    let thresholds = if thresholds.is_empty() {
        vec![art.big_k]
    } else {
        thresholds.to_vec()
    };
    let mut checks = vec![
        structure(art),
        counts(art, budget),
        forced(art, budget),
        cycles(art),
    ];
    let desk = art.n() <= DESK_MAX_VARS && art.m() <= DESK_MAX_CLAUSES;
    if desk {
        checks.push(clause_tables(art));
        checks.push(census(art, budget));
        checks.push(accounting(art, budget));
        checks.push(equivalence(art, &thresholds, budget));
    } else {
        let why = format!(
            "instance larger than the desk limit (n <= {DESK_MAX_VARS}, m <= {DESK_MAX_CLAUSES})"
        );
        for name in [
            "clause_tables",
            "perfect_matchings",
            "accounting",
            "equivalence",
        ] {
            checks.push(CheckOutcome::skipped(name, &why));
        }
    }
    ValidationReport {
        theorem: art.theorem.number(),
        m: art.m(),
        n: art.n(),
        thresholds,
        passed: checks.iter().all(|c| c.status != CheckStatus::Fail),
        checks,
        reproducer: Reproducer {
            instance: art.instance.to_dimacs(),
            seed: None,
        },
    }
}

fn structure(art: &ReductionArtifact) -> CheckOutcome {
    let g = art.graph();
    let mut c = CheckOutcome::new("structure");
    c.require(g.max_degree() == 3, || {
        format!("max degree {}", g.max_degree())
    });
    c.require(g.is_connected(), || "graph is disconnected".into());
    if let Err(e) = parity_bipartition(&art.graph) {
        c.fail(e.to_string());
    }
    c.finish(|| "max degree 3, connected, parity bipartition valid".into())
}

fn counts(art: &ReductionArtifact, budget: Budget) -> CheckOutcome {
    let g = art.graph();
    let (th, m) = (art.theorem, art.m());
    let mut c = CheckOutcome::new("counts");
    let (v, e) = (g.vertex_count(), g.edge_count());
    c.require(v == th.expected_vertices(m), || {
        format!("|V| = {v}, expected {}", th.expected_vertices(m))
    });
    c.require(e == th.expected_edges(m), || {
        format!("|E| = {e}, expected {}", th.expected_edges(m))
    });
    match matching_number(g, budget) {
        Ok(beta) => c.require(2 * beta == v, || {
            format!("beta = {beta}, |V|/2 = {}", v / 2)
        }),
        Err(err) => c.fail(err.to_string()),
    }
    let want_k = th.threshold(m, art.big_k);
    c.require(art.k == want_k, || {
        format!("k = {}, expected {want_k}", art.k)
    });
    c.finish(|| format!("|V| = {v}, |E| = {e}, beta = {}, k = {}", v / 2, art.k))
}

fn forced(art: &ReductionArtifact, budget: Budget) -> CheckOutcome {
    let mut c = CheckOutcome::new("forced_edges");
    let want = art.theorem.forced_per_clause() * art.m();
    match forced_edges(art.graph(), budget) {
        Ok(found) => {
            c.require(found == art.forced, || {
                let found: HashSet<Edge> = found.iter().copied().collect();
                let listed: HashSet<Edge> = art.forced.iter().copied().collect();
                format!(
                    "{} forced edges not recorded, {} recorded edges not forced",
                    found.difference(&listed).count(),
                    listed.difference(&found).count()
                )
            });
            c.require(found.len() == want, || {
                format!("{} forced edges, expected {want}", found.len())
            });
        }
        Err(e) => c.fail(e.to_string()),
    }
    c.finish(|| format!("{want} forced edges: spine pairs and u-pairs"))
}

fn cycles(art: &ReductionArtifact) -> CheckOutcome {
    let g = art.graph();
    let mut c = CheckOutcome::new("cycles");
    let r = art.instance.occurrence_counts();
    for cyc in &art.cycles {
        let i = cyc.var;
        let walk = cyc.walk();
        c.require(cyc.len() == 4 * r[i - 1], || {
            format!("S_{i} has length {}, expected {}", cyc.len(), 4 * r[i - 1])
        });
        let distinct: HashSet<usize> = cyc.vertices.iter().copied().collect();
        c.require(distinct.len() == cyc.len(), || {
            format!("S_{i} repeats a vertex")
        });
        let h: HashSet<Edge> = cyc.class_h.iter().copied().collect();
        let v: HashSet<Edge> = cyc.class_v.iter().copied().collect();
        c.require(h.is_disjoint(&v), || format!("classes of S_{i} overlap"));
        let alternates = walk.iter().enumerate().all(|(t, e)| {
            if t % 2 == 0 {
                h.contains(e)
            } else {
                v.contains(e)
            }
        });
        c.require(alternates && h.len() + v.len() == walk.len(), || {
            format!("S_{i} does not alternate between class_h and class_v")
        });
        for (name, class) in [("class_h", &cyc.class_h), ("class_v", &cyc.class_v)] {
            let mut seen = HashSet::new();
            let perfect =
                class.iter().all(|&(a, b)| seen.insert(a) && seen.insert(b)) && seen == distinct;
            c.require(perfect, || {
                format!("{name} of S_{i} is not a perfect matching of V(S_{i})")
            });
        }
        let missing = walk.iter().filter(|&&(a, b)| !g.has_edge(a, b)).count();
        c.require(missing == 0, || {
            format!("{missing} edges of S_{i} absent from the graph")
        });
        let on_cycle: HashSet<Edge> = walk.iter().copied().collect();
        let chords = g
            .edges()
            .iter()
            .filter(|&&(a, b)| distinct.contains(&a) && distinct.contains(&b))
            .filter(|e| !on_cycle.contains(e))
            .count();
        c.require(chords == 0, || {
            format!("S_{i} has {chords} chord(s), not induced")
        });
        let mut ports: Vec<Edge> = cyc
            .occurrences
            .iter()
            .flat_map(|&(j, s)| art.blocks[j - 1].gadgets[s].class_h())
            .collect();
        ports.sort_unstable();
        c.require(ports == cyc.class_h, || {
            format!("class_h of S_{i} is not the port pairs")
        });
    }
    c.finish(|| {
        format!(
            "{} cycles, each of length 4 r(i), alternating, induced",
            art.cycles.len()
        )
    })
}

fn clause_tables(art: &ReductionArtifact) -> CheckOutcome {
    let mut c = CheckOutcome::new("clause_tables");
    let tables: Vec<_> = (1..=art.m())
        .into_par_iter()
        .map(|j| (j, table_rows(art, j)))
        .collect();
    for (j, rows) in tables {
        match rows {
            Ok(rows) => {
                for row in rows.iter().filter(|r| r.residual != r.expected) {
                    c.fail(format!(
                        "clause {j}: residual {} expected {}",
                        row.residual, row.expected
                    ));
                    c.counterexamples.push(json!({ "clause": j, "row": row }));
                }
            }
            Err(e) => c.fail(format!("clause {j}: {e}")),
        }
    }
    let (hi, lo) = (
        art.theorem.local_residual(true),
        art.theorem.local_residual(false),
    );
    c.finish(|| format!("every block: {hi} when satisfied, {lo} otherwise"))
}

fn census(art: &ReductionArtifact, budget: Budget) -> CheckOutcome {
    let mut c = CheckOutcome::new("perfect_matchings");
    let g = art.graph();
    let want = 1usize << art.n();
    let all = match enumerate_max_matchings(g, want, budget) {
        Ok(all) => all,
        Err(e) => {
            c.fail(e.to_string());
            return c;
        }
    };
    if let Some(f) = all.first() {
        c.require(f.is_perfect(g), || {
            format!("maximum matchings have size {}", f.len())
        });
    }
    if c.status == CheckStatus::Fail {
        return c;
    }
    c.require(all.len() == want, || {
        format!("{} perfect matchings, expected {want}", all.len())
    });
    for f in &all {
        let back = matching_to_assignment(art, f)
            .and_then(|eps| Ok((assignment_to_matching(art, &eps)?, eps)));
        match back {
            Ok((fe, _)) if &fe == f => {}
            Ok((_, eps)) => {
                c.fail(format!("a perfect matching differs from F_{eps}"));
                c.counterexamples
                    .push(json!({ "matching": f.to_id_pairs(g) }));
            }
            Err(e) => {
                c.fail(e.to_string());
                c.counterexamples
                    .push(json!({ "matching": f.to_id_pairs(g) }));
            }
        }
    }
    c.finish(|| format!("{want} perfect matchings, each equal to F_eps for its eps"))
}

/// (K′, measured residual, predicted residual) for one assignment.
type Audit = (usize, usize, usize);

fn accounting(art: &ReductionArtifact, budget: Budget) -> CheckOutcome {
    let mut c = CheckOutcome::new("accounting");
    let g = art.graph();
    let outcomes: Vec<(Assignment, Result<Audit>)> = Assignment::all(art.n())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|eps| {
            let res = (|| {
                let f = assignment_to_matching(art, &eps)?;
                if !f.is_perfect(g) {
                    return Err(crate::Error::NotPerfect {
                        size: f.len(),
                        vertices: g.vertex_count(),
                    });
                }
                let got = matching_number(&g.without_edges(f.edges()), budget)?;
                let (sat, want) = predicted_residual(art, &eps)?;
                Ok((sat, got, want))
            })();
            (eps, res)
        })
        .collect();
    for (eps, res) in outcomes {
        match res {
            Ok((_, got, want)) if got == want => {}
            Ok((sat, got, want)) => {
                c.fail(format!("eps = {eps}: residual {got}, formula {want}"));
                c.counterexamples.push(json!({
                    "eps": eps.to_string(), "satisfied": sat, "residual": got, "expected": want
                }));
            }
            Err(e) => {
                c.fail(format!("eps = {eps}: {e}"));
                c.counterexamples
                    .push(json!({ "eps": eps.to_string(), "error": e.to_string() }));
            }
        }
    }
    c.finish(|| {
        let (hi, lo) = (
            art.theorem.local_residual(true),
            art.theorem.local_residual(false),
        );
        format!(
            "beta(G \\ F_eps) = 2m-1 + {hi}K' + {lo}(m-K') for all {} assignments",
            1usize << art.n()
        )
    })
}

fn equivalence(art: &ReductionArtifact, thresholds: &[usize], budget: Budget) -> CheckOutcome {
    let mut c = CheckOutcome::new("equivalence");
    let g = art.graph();
    let m = art.m();
    let opt = match max_sat_bruteforce(&art.instance) {
        Ok((opt, _)) => opt,
        Err(e) => {
            c.fail(e.to_string());
            return c;
        }
    };
    let mut run = || -> Result<()> {
        let s = summarize(g, budget)?;
        match art.theorem {
            Theorem::One => {
                let want = 7 * m - 1 + opt;
                c.require(s.max_residual == want, || {
                    format!(
                        "max residual {}, expected 7m-1+OPT = {want}",
                        s.max_residual
                    )
                });
            }
            Theorem::Two => {
                let want = 8 * m - 1 - opt;
                c.require(s.min_residual == want, || {
                    format!(
                        "min residual {}, expected 8m-1-OPT = {want}",
                        s.min_residual
                    )
                });
            }
        }
        for &big_k in thresholds {
            if big_k < 1 || big_k > m {
                c.fail(format!("K = {big_k} outside 1..={m}"));
                continue;
            }
            let k = art.theorem.threshold(m, big_k);
            let yes = match art.theorem {
                Theorem::One => decide_ge(g, k, budget)?,
                Theorem::Two => decide_le(g, k, budget)?,
            };
            if yes != (opt >= big_k) {
                c.fail(format!("K = {big_k}: decision {yes}, OPT = {opt}"));
                c.counterexamples
                    .push(json!({ "K": big_k, "k": k, "decision": yes, "opt": opt }));
            }
        }
        Ok(())
    };
    if let Err(e) = run() {
        c.fail(e.to_string());
    }
    c.finish(|| format!("OPT = {opt}; decision matches OPT >= K for K in {thresholds:?}"))
}
