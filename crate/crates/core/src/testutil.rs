//! Enumeration oracles shared by the unit tests.

use rand::Rng;

use crate::constraint::Constraint;
use crate::domain::DomainSet;
use crate::{Value, Var};

/// Removals a single constraint's GAC must make, found by trying every
/// assignment of its scope. Sorted.
pub fn oracle_filter(c: &Constraint, d: &DomainSet) -> Vec<(Var, Value)> {
    let scope = c.scope();
    let mut supported = vec![vec![false; d.max_value() + 1]; d.num_vars()];
    let mut values = vec![0; d.num_vars()];
    let lists: Vec<Vec<Value>> = scope.iter().map(|&v| d.values(v).collect()).collect();
    let mut idx = vec![0usize; scope.len()];
    if lists.iter().all(|l| !l.is_empty()) {
        'outer: loop {
            for (p, &var) in scope.iter().enumerate() {
                values[var] = lists[p][idx[p]];
            }
            if c.check(&values) {
                for &var in &scope {
                    supported[var][values[var]] = true;
                }
            }
            for p in (0..scope.len()).rev() {
                idx[p] += 1;
                if idx[p] < lists[p].len() {
                    continue 'outer;
                }
                idx[p] = 0;
            }
            break;
        }
    }
    let mut out = Vec::new();
    for &var in &scope {
        for v in d.values(var) {
            if !supported[var][v] {
                out.push((var, v));
            }
        }
    }
    out.sort();
    out
}

/// Non-empty random subsets of `1..=m` for `n` variables.
pub fn random_domains(rng: &mut impl Rng, n: usize, m: Value) -> DomainSet {
    let lists: Vec<Vec<Value>> = (0..n)
        .map(|_| loop {
            let l: Vec<Value> = (1..=m).filter(|_| rng.gen_bool(0.6)).collect();
            if !l.is_empty() {
                break l;
            }
        })
        .collect();
    DomainSet::from_lists(m, &lists).unwrap()
}
