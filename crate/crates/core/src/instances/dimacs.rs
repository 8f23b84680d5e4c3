//! CNF formulas and the DIMACS `cnf` text format.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A clause is a list of non-zero literals; `-v` is the negation of `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i64>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        for (i, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::Reduction(format!("clause {} is empty", i + 1)));
            }
            if let Some(&l) = clause.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > num_vars) {
                return Err(Error::Reduction(format!("clause {} has literal {l} outside 1..={num_vars}", i + 1)));
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i64>] {
        &self.clauses
    }

    /// `truth[i]` is the value of variable `i + 1`.
    pub fn evaluate(&self, truth: &[bool]) -> bool {
        self.clauses.iter().all(|clause| clause.iter().any(|&l| truth[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    /// Tries all `2^N` truth assignments.
    pub fn is_satisfiable_brute_force(&self) -> bool {
        assert!(self.num_vars < 32, "brute force is for tiny formulas");
        (0u64..1 << self.num_vars).any(|bits| {
            let truth: Vec<bool> = (0..self.num_vars).map(|i| bits >> i & 1 == 1).collect();
            self.evaluate(&truth)
        })
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for l in clause {
                write!(out, "{l} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let err = |line: usize, reason: String| Error::Dimacs { line, reason };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "second problem line".into()));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(err(line_no, "expected `p cnf <vars> <clauses>`".into()));
            }
            let parse = |s: &str| s.parse::<usize>().map_err(|_| err(line_no, format!("bad count `{s}`")));
            header = Some((parse(fields[2])?, parse(fields[3])?, line_no));
            continue;
        }
        let Some((num_vars, _, _)) = header else {
            return Err(err(line_no, "clause before problem line".into()));
        };
        for token in line.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| err(line_no, format!("bad literal `{token}`")))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(err(line_no, "empty clause".into()));
                }
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() > num_vars as u64 {
                return Err(err(line_no, format!("literal {lit} exceeds {num_vars} variables")));
            } else {
                current.push(lit);
            }
        }
    }

    let Some((num_vars, num_clauses, header_line)) = header else {
        return Err(err(last_line.max(1), "missing problem line".into()));
    };
    if !current.is_empty() {
        return Err(err(last_line, "last clause not terminated by 0".into()));
    }
    if clauses.len() != num_clauses {
        return Err(err(header_line, format!("header declares {num_clauses} clauses, found {}", clauses.len())));
    }
    CnfFormula::new(num_vars, clauses)
}
