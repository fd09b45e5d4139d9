//! CNF formulas, DIMACS parsing, and a brute-force satisfiability oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A formula over variables `1..=num_vars`. Literals use the DIMACS
/// convention: `v` is the positive literal of variable `v`, `-v` the
/// negative one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for (i, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::Input(format!("clause {} is empty", i + 1)));
            }
            for &l in c {
                if l == 0 || l.unsigned_abs() > num_vars {
                    return Err(Error::Input(format!("clause {} has literal {l} out of range", i + 1)));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Whether the literal of `var` with the given sign occurs in a clause.
    /// Variables are 1-based, clauses 0-based.
    pub fn occurs(&self, var: u32, positive: bool, clause: usize) -> bool {
        let lit = if positive { var as i32 } else { -(var as i32) };
        self.clauses[clause].contains(&lit)
    }

    /// `assignment[i]` is the value of variable `i + 1`.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| lit_true(l, assignment)))
    }

    /// All satisfying assignments, in binary counting order with variable 1
    /// as the least significant bit. Exponential; meant for tiny formulas.
    pub fn satisfying_assignments(&self) -> Vec<Vec<bool>> {
        assert!(self.num_vars <= 24, "brute force limited to 24 variables");
        (0u64..1 << self.num_vars)
            .map(|mask| (0..self.num_vars).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
            .filter(|a| self.eval(a))
            .collect()
    }

    pub fn first_satisfying(&self) -> Option<Vec<bool>> {
        assert!(self.num_vars <= 24, "brute force limited to 24 variables");
        (0u64..1 << self.num_vars)
            .map(|mask| (0..self.num_vars).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
            .find(|a| self.eval(a))
    }

    pub fn is_satisfiable(&self) -> bool {
        self.first_satisfying().is_some()
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                s.push_str(&format!("{l} "));
            }
            s.push_str("0\n");
        }
        s
    }
}

#[inline]
pub fn lit_true(l: i32, assignment: &[bool]) -> bool {
    let v = assignment[l.unsigned_abs() as usize - 1];
    if l > 0 {
        v
    } else {
        !v
    }
}

/// Parses DIMACS CNF: `c` comment lines, one `p cnf <vars> <clauses>`
/// header, then zero-terminated clauses (which may span lines).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut last_line = 0;
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        last_line = line;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse { line, message: "duplicate header".into() });
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(Error::Parse { line, message: "expected `p cnf <vars> <clauses>`".into() });
            }
            let v = parts[2].parse().map_err(|_| Error::Parse { line, message: "bad variable count".into() })?;
            let c = parts[3].parse().map_err(|_| Error::Parse { line, message: "bad clause count".into() })?;
            header = Some((v, c));
            continue;
        }
        let (nv, _) = header.ok_or(Error::Parse { line, message: "clause before header".into() })?;
        for tok in t.split_whitespace() {
            let l: i32 = tok
                .parse()
                .map_err(|_| Error::Parse { line, message: format!("bad literal `{tok}`") })?;
            if l == 0 {
                if current.is_empty() {
                    return Err(Error::Parse { line, message: "empty clause".into() });
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if l.unsigned_abs() > nv {
                    return Err(Error::Parse { line, message: format!("variable {} out of range", l.abs()) });
                }
                current.push(l);
            }
        }
    }
    let (nv, nc) = header.ok_or(Error::Parse { line: last_line, message: "missing header".into() })?;
    if !current.is_empty() {
        return Err(Error::Parse { line: last_line, message: "last clause not terminated by 0".into() });
    }
    if clauses.len() != nc {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header announces {nc} clauses, found {}", clauses.len()),
        });
    }
    CnfFormula::new(nv, clauses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let f = parse_dimacs("p cnf 1 1\n1 0").unwrap();
        assert_eq!(f.clauses, vec![vec![1]]);
    }

    #[test]
    fn two_clauses_with_comments() {
        let f = parse_dimacs("c hello\np cnf 2 2\n1 -2 0\n-1 2 0\n").unwrap();
        assert_eq!(f.num_vars, 2);
        assert_eq!(f.clauses, vec![vec![1, -2], vec![-1, 2]]);
        assert_eq!(f.satisfying_assignments().len(), 2);
    }

    #[test]
    fn clause_count_mismatch() {
        assert!(matches!(parse_dimacs("p cnf 2 3\n1 0\n2 0\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn out_of_range_and_empty() {
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n0\n").is_err());
        assert!(parse_dimacs("1 0\n").is_err());
    }

    #[test]
    fn round_trip() {
        let f = CnfFormula::new(3, vec![vec![1, -2, 3], vec![-1, 2, -3]]).unwrap();
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn contradiction_is_unsat() {
        let f = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert!(!f.is_satisfiable());
    }
}
