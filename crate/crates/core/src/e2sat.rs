//! Max E2-SAT instances in a width-2 DIMACS subset, with a brute-force
//! optimum and a seeded generator of strict instances.

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_VARS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: usize,
    negated: bool,
}

impl Literal {
    /// `var` is 1-based.
    pub const fn new(var: usize, negated: bool) -> Self {
        Literal { var, negated }
    }

    pub const fn pos(var: usize) -> Self {
        Literal::new(var, false)
    }

    pub const fn neg(var: usize) -> Self {
        Literal::new(var, true)
    }

    pub fn from_dimacs(code: i64) -> Option<Self> {
        match code {
            0 => None,
            c => Some(Literal::new(c.unsigned_abs() as usize, c < 0)),
        }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    pub fn var(self) -> usize {
        self.var
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    pub fn eval(self, a: &Assignment) -> bool {
        a.get(self.var) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

/// Two literals over distinct variables, lower variable first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    lits: [Literal; 2],
}

impl Clause {
    pub fn first(&self) -> Literal {
        self.lits[0]
    }

    pub fn second(&self) -> Literal {
        self.lits[1]
    }

    pub fn literals(&self) -> [Literal; 2] {
        self.lits
    }

    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        self.lits.iter().any(|l| l.eval(a))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {})", self.lits[0], self.lits[1])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment(bits)
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Assignment(bits.iter().map(|&b| b != 0).collect())
    }

    /// The `index`-th assignment in lexicographic order, x1 most significant.
    pub fn from_index(n: usize, index: u64) -> Self {
        Assignment((0..n).map(|i| index >> (n - 1 - i) & 1 == 1).collect())
    }

    pub fn all(n: usize) -> impl Iterator<Item = Assignment> {
        (0..1u64 << n).map(move |i| Assignment::from_index(n, i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Value of x_var, 1-based.
    pub fn get(&self, var: usize) -> bool {
        self.0[var - 1]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.0.iter().map(|&b| b as u8).collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0
            .iter()
            .try_for_each(|&b| f.write_str(if b { "1" } else { "0" }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct E2SatInstance {
    n: usize,
    clauses: Vec<Clause>,
}

impl E2SatInstance {
    /// Validates and normalises; clause numbers in errors are 1-based.
    pub fn new(n: usize, clauses: Vec<[Literal; 2]>) -> Result<Self> {
        let mut seen = HashMap::new();
        let mut out = Vec::with_capacity(clauses.len());
        for (idx, [a, b]) in clauses.into_iter().enumerate() {
            let j = idx + 1;
            for l in [a, b] {
                if l.var == 0 || l.var > n {
                    return Err(Error::LiteralOutOfRange { var: l.var, n });
                }
            }
            if a.var == b.var {
                return Err(Error::RepeatedVariable {
                    clause: j,
                    var: a.var,
                });
            }
            let c = Clause {
                lits: if a.var < b.var { [a, b] } else { [b, a] },
            };
            if let Some(&first) = seen.get(&c) {
                return Err(Error::DuplicateClause { clause: j, first });
            }
            seen.insert(c, j);
            out.push(c);
        }
        Ok(E2SatInstance { n, clauses: out })
    }

    /// Clauses given as DIMACS literal codes.
    pub fn from_codes(n: usize, codes: &[(i64, i64)]) -> Result<Self> {
        let mut clauses = Vec::with_capacity(codes.len());
        for (idx, &(a, b)) in codes.iter().enumerate() {
            match (Literal::from_dimacs(a), Literal::from_dimacs(b)) {
                (Some(a), Some(b)) => clauses.push([a, b]),
                _ => return Err(Error::ClauseWidth { clause: idx + 1 }),
            }
        }
        Self::new(n, clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Clause `j`, 1-based.
    pub fn clause(&self, j: usize) -> Option<&Clause> {
        j.checked_sub(1).and_then(|i| self.clauses.get(i))
    }

    /// r(i) for every variable, indexed from 0 for x1.
    pub fn occurrence_counts(&self) -> Vec<usize> {
        let mut r = vec![0; self.n];
        for c in &self.clauses {
            for l in c.lits {
                r[l.var - 1] += 1;
            }
        }
        r
    }

    /// Occurrences of x_var as (clause j 1-based, slot 0|1), ascending in j.
    pub fn occurrences(&self, var: usize) -> Vec<(usize, usize)> {
        let mut occ = Vec::new();
        for (idx, c) in self.clauses.iter().enumerate() {
            for (slot, l) in c.lits.iter().enumerate() {
                if l.var == var {
                    occ.push((idx + 1, slot));
                }
            }
        }
        occ
    }

    pub fn with_clause(&self, lits: [Literal; 2]) -> Result<Self> {
        let mut all: Vec<_> = self.clauses.iter().map(|c| c.lits).collect();
        all.push(lits);
        Self::new(self.n, all)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.n, self.clauses.len());
        for c in &self.clauses {
            out.push_str(&format!(
                "{} {} 0\n",
                c.lits[0].to_dimacs(),
                c.lits[1].to_dimacs()
            ));
        }
        out
    }
}

impl fmt::Display for E2SatInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.clauses.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" & "))
    }
}

/// Variables whose occurrence count is below two, as (variable, r(i)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictViolation {
    pub var: usize,
    pub occurrences: usize,
}

impl fmt::Display for StrictViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{} occurs in {} clause(s)", self.var, self.occurrences)
    }
}

pub fn validate_strict(inst: &E2SatInstance) -> std::result::Result<(), Vec<StrictViolation>> {
    let bad: Vec<_> = inst
        .occurrence_counts()
        .into_iter()
        .enumerate()
        .filter(|&(_, r)| r < 2)
        .map(|(i, r)| StrictViolation {
            var: i + 1,
            occurrences: r,
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

pub(crate) fn require_strict(inst: &E2SatInstance) -> Result<()> {
    validate_strict(inst).map_err(|v| {
        let parts: Vec<_> = v.iter().map(|x| x.to_string()).collect();
        Error::NotStrict(parts.join(", "))
    })
}

pub fn count_satisfied(inst: &E2SatInstance, a: &Assignment) -> Result<usize> {
    if a.len() != inst.n {
        return Err(Error::AssignmentLength {
            expected: inst.n,
            got: a.len(),
        });
    }
    Ok(inst.clauses.iter().filter(|c| c.satisfied_by(a)).count())
}

pub fn max_sat_bruteforce(inst: &E2SatInstance) -> Result<(usize, Assignment)> {
    max_sat_bruteforce_limited(inst, DEFAULT_MAX_VARS)
}

/// Exact optimum; the witness is the lexicographically first optimal
/// assignment.
pub fn max_sat_bruteforce_limited(
    inst: &E2SatInstance,
    max_vars: usize,
) -> Result<(usize, Assignment)> {
    if inst.n > max_vars {
        return Err(Error::TooManyVariables(inst.n, max_vars));
    }
    let mut best = (0, Assignment::from_index(inst.n, 0));
    let mut have = false;
    for a in Assignment::all(inst.n) {
        let s = count_satisfied(inst, &a)?;
        if !have || s > best.0 {
            best = (s, a);
            have = true;
            if best.0 == inst.clauses.len() {
                break;
            }
        }
    }
    Ok(best)
}

pub fn parse_e2sat(text: &str) -> Result<E2SatInstance> {
    let mut header: Option<(usize, usize)> = None;
    let mut codes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let err = |message: String| Error::Dimacs {
            line: line_no,
            message,
        };
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err("second header line".into()));
            }
            let parts: Vec<_> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", n, m] => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| err(format!("malformed header {line:?}")))?);
            continue;
        }
        let Some((n, _)) = header else {
            return Err(err("clause before the \"p cnf\" header".into()));
        };
        let mut nums = Vec::new();
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| err(format!("bad literal {tok:?}")))?;
            nums.push(v);
        }
        let clause = codes.len() + 1;
        match nums.iter().position(|&v| v == 0) {
            Some(p) if p + 1 == nums.len() => nums.pop(),
            Some(_) => return Err(err("tokens after the terminating 0".into())),
            None => return Err(err("clause is not terminated by 0".into())),
        };
        if nums.len() != 2 {
            return Err(Error::ClauseWidth { clause });
        }
        for &v in &nums {
            if v.unsigned_abs() as usize > n {
                return Err(Error::LiteralOutOfRange {
                    var: v.unsigned_abs() as usize,
                    n,
                });
            }
        }
        codes.push((nums[0], nums[1]));
    }
    let (n, m) = header.ok_or_else(|| Error::Dimacs {
        line: 0,
        message: "missing \"p cnf\" header".into(),
    })?;
    if codes.len() != m {
        return Err(Error::Dimacs {
            line: 0,
            message: format!("header declares {m} clauses, found {}", codes.len()),
        });
    }
    E2SatInstance::from_codes(n, &codes)
}

const GEN_ATTEMPTS: usize = 200;

/// Seeded strict instance with `n` variables and `m` distinct clauses.
pub fn gen_random(n: usize, m: usize, seed: u64) -> Result<E2SatInstance> {
    let total = 2 * n * n.saturating_sub(1);
    if n < 2 {
        return Err(Error::Infeasible(format!(
            "need at least 2 variables, got {n}"
        )));
    }
    if m > total {
        return Err(Error::Infeasible(format!(
            "{m} clauses but only {total} distinct 2-clauses over {n} variables"
        )));
    }
    if m < n {
        return Err(Error::Infeasible(format!(
            "{m} clauses give {} literal slots, strictness needs {}",
            2 * m,
            2 * n
        )));
    }
    let mut pool = Vec::with_capacity(total);
    for a in 1..=n {
        for b in a + 1..=n {
            for (na, nb) in [(false, false), (false, true), (true, false), (true, true)] {
                pool.push([Literal::new(a, na), Literal::new(b, nb)]);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GEN_ATTEMPTS {
        if let Some(chosen) = attempt(n, m, &pool, &mut rng) {
            let inst = E2SatInstance::new(n, chosen)?;
            debug_assert!(validate_strict(&inst).is_ok());
            return Ok(inst);
        }
    }
    Err(Error::Infeasible(format!(
        "no strict instance found for n={n}, m={m} after {GEN_ATTEMPTS} attempts"
    )))
}

fn attempt(
    n: usize,
    m: usize,
    pool: &[[Literal; 2]],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<[Literal; 2]>> {
    let mut used = vec![false; pool.len()];
    let mut r = vec![0usize; n + 1];
    let mut out = Vec::with_capacity(m);
    let deficit = |r: &[usize]| {
        r[1..]
            .iter()
            .map(|&c| 2usize.saturating_sub(c))
            .sum::<usize>()
    };
    for step in 0..m {
        let left_after = m - step - 1;
        let candidates: Vec<usize> = (0..pool.len())
            .filter(|&i| !used[i])
            .filter(|&i| {
                let [a, b] = pool[i];
                r[a.var] += 1;
                r[b.var] += 1;
                let ok = deficit(&r) <= 2 * left_after;
                r[a.var] -= 1;
                r[b.var] -= 1;
                ok
            })
            .collect();
        let &pick = candidates.choose(rng)?;
        used[pick] = true;
        let [a, b] = pool[pick];
        r[a.var] += 1;
        r[b.var] += 1;
        out.push(pool[pick]);
    }
    // literal order inside a clause is cosmetic; randomise it so the parser's
    // normalisation is exercised
    for c in &mut out {
        if rng.gen_bool(0.5) {
            c.swap(0, 1);
        }
    }
    (deficit(&r) == 0).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: usize, codes: &[(i64, i64)]) -> E2SatInstance {
        E2SatInstance::from_codes(n, codes).unwrap()
    }

    #[test]
    fn parse_examples() {
        let i = parse_e2sat("p cnf 2 2\n1 2 0\n-1 2 0\n").unwrap();
        assert_eq!(i.num_vars(), 2);
        assert_eq!(
            i.clauses()[0].literals(),
            [Literal::pos(1), Literal::pos(2)]
        );
        assert_eq!(
            i.clauses()[1].literals(),
            [Literal::neg(1), Literal::pos(2)]
        );

        assert_eq!(
            parse_e2sat("p cnf 2 1\n1 0\n"),
            Err(Error::ClauseWidth { clause: 1 })
        );
        assert_eq!(
            parse_e2sat("p cnf 2 2\n1 2 0\n1 2 0\n"),
            Err(Error::DuplicateClause {
                clause: 2,
                first: 1
            })
        );
        assert_eq!(
            parse_e2sat("p cnf 2 2\n2 1 0\n1 2 0\n"),
            Err(Error::DuplicateClause {
                clause: 2,
                first: 1
            })
        );
        assert_eq!(
            parse_e2sat("p cnf 2 1\n1 -1 0\n"),
            Err(Error::RepeatedVariable { clause: 1, var: 1 })
        );
        assert!(matches!(
            parse_e2sat("p cnf x 1\n"),
            Err(Error::Dimacs { line: 1, .. })
        ));
        assert!(matches!(parse_e2sat("1 2 0\n"), Err(Error::Dimacs { .. })));
        assert!(matches!(
            parse_e2sat("p cnf 2 1\n1 3 0\n"),
            Err(Error::LiteralOutOfRange { var: 3, n: 2 })
        ));
    }

    #[test]
    fn comments_and_normalisation() {
        let i = parse_e2sat("c hello\np cnf 3 2\nc mid\n3 -1 0\n2 3 0\n").unwrap();
        assert_eq!(i.to_dimacs(), "p cnf 3 2\n-1 3 0\n2 3 0\n");
    }

    #[test]
    fn strictness() {
        assert!(validate_strict(&inst(2, &[(1, 2), (-1, 2)])).is_ok());
        assert!(validate_strict(&inst(3, &[(1, 2), (1, 3), (2, 3)])).is_ok());
        let bad = validate_strict(&inst(3, &[(1, 2), (-1, 3), (1, 3)])).unwrap_err();
        assert_eq!(
            bad,
            vec![StrictViolation {
                var: 2,
                occurrences: 1
            }]
        );
    }

    #[test]
    fn counting() {
        let i = inst(2, &[(1, 2), (-1, 2)]);
        assert_eq!(
            count_satisfied(&i, &Assignment::from_bits(&[1, 0])).unwrap(),
            1
        );
        let j = inst(2, &[(1, 2), (-1, -2)]);
        assert_eq!(
            count_satisfied(&j, &Assignment::from_bits(&[1, 0])).unwrap(),
            2
        );
        assert_eq!(
            count_satisfied(&j, &Assignment::from_bits(&[1])),
            Err(Error::AssignmentLength {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn brute_force() {
        let i = inst(2, &[(1, 2), (-1, 2)]);
        assert_eq!(
            max_sat_bruteforce(&i).unwrap(),
            (2, Assignment::from_bits(&[0, 1]))
        );
        let all = inst(2, &[(1, 2), (1, -2), (-1, 2), (-1, -2)]);
        assert_eq!(
            max_sat_bruteforce(&all).unwrap(),
            (3, Assignment::from_bits(&[0, 0]))
        );
        let one = inst(2, &[(1, 2)]);
        assert_eq!(
            max_sat_bruteforce(&one).unwrap(),
            (1, Assignment::from_bits(&[0, 1]))
        );
        let wide = E2SatInstance::new(21, vec![]).unwrap();
        assert_eq!(
            max_sat_bruteforce(&wide),
            Err(Error::TooManyVariables(21, 20))
        );
    }

    #[test]
    fn generator() {
        let g = gen_random(2, 4, 11).unwrap();
        let mut got: Vec<_> = g.clauses().iter().map(|c| c.literals()).collect();
        got.sort();
        assert_eq!(got.len(), 4);
        assert!(matches!(gen_random(3, 2, 1), Err(Error::Infeasible(_))));
        assert!(matches!(gen_random(2, 5, 1), Err(Error::Infeasible(_))));
        assert_eq!(gen_random(3, 3, 5).unwrap(), gen_random(3, 3, 5).unwrap());
        for seed in 0..50 {
            let g = gen_random(4, 4, seed).unwrap();
            assert!(validate_strict(&g).is_ok());
        }
        let big = gen_random(40, 40, 3).unwrap();
        assert!(validate_strict(&big).is_ok());
    }

    #[test]
    fn assignment_order() {
        let names: Vec<_> = Assignment::all(2).map(|a| a.to_string()).collect();
        assert_eq!(names, ["00", "01", "10", "11"]);
    }
}
