#![allow(dead_code)]

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use valsym::symmetry::SymmetrySet;
use valsym::{Constraint, DomainSet, Problem, Value, ValueClassPartition, Var};

/// Non-empty random subsets of `1..=m`, each value kept with probability 0.6.
pub fn random_domains(rng: &mut ChaCha8Rng, n: usize, m: Value) -> DomainSet {
    let lists: Vec<Vec<Value>> = (0..n)
        .map(|_| {
            let mut vals: Vec<Value> = (1..=m).filter(|_| rng.gen_bool(0.6)).collect();
            if vals.is_empty() {
                vals.push(rng.gen_range(1..=m));
            }
            vals
        })
        .collect();
    DomainSet::from_lists(m, &lists).unwrap()
}

/// Random classes over a random subset of `1..=m`; every class has at
/// least two values and at least one class exists when `m ≥ 2`.
pub fn random_partition(rng: &mut ChaCha8Rng, m: Value) -> ValueClassPartition {
    let mut values: Vec<Value> = (1..=m).filter(|_| rng.gen_bool(0.8)).collect();
    if values.len() < 2 {
        values = vec![1, 2];
    }
    values.shuffle(rng);
    let mut classes: Vec<Vec<Value>> = Vec::new();
    let mut rest = values.as_slice();
    while rest.len() >= 2 {
        let take = rng.gen_range(2..=rest.len());
        let mut class = rest[..take].to_vec();
        class.sort_unstable();
        classes.push(class);
        rest = &rest[take..];
    }
    ValueClassPartition::new(classes).unwrap()
}

fn random_scope(rng: &mut ChaCha8Rng, n: usize) -> Vec<Var> {
    let mut vars: Vec<Var> = (0..n).collect();
    vars.shuffle(rng);
    vars.truncate(rng.gen_range(1..=n));
    vars.sort_unstable();
    vars
}

/// A problem over full domains whose constraint set is closed under every
/// class-respecting permutation: each random seed constraint is posted
/// together with all its images.
pub fn symmetric_problem(rng: &mut ChaCha8Rng, n: usize, m: Value, p: &ValueClassPartition) -> Problem {
    let group = SymmetrySet::full_group(p, m);
    let mut cs: Vec<Constraint> = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        if n >= 2 && rng.gen_bool(0.5) {
            let pair: Vec<Var> = (0..n).collect::<Vec<_>>().choose_multiple(rng, 2).copied().collect();
            let (z, x) = (pair[0], pair[1]);
            let index = rng.gen_range(1..=m);
            let value = rng.gen_range(1..=m);
            for g in &group.perms {
                cs.push(Constraint::ImpEqEq { z, index: g.apply(index), x, value: g.apply(value) });
            }
        } else {
            let scope = random_scope(rng, n);
            let value = rng.gen_range(1..=m);
            for g in &group.perms {
                cs.push(Constraint::DisjunctionEq { value: g.apply(value), scope: scope.clone() });
            }
        }
    }
    let cs: Vec<Constraint> = cs.into_iter().unique_by(|c| format!("{c:?}")).collect();
    Problem::new(DomainSet::full(n, m), cs, Some(p.clone())).unwrap()
}

/// Bell numbers by the triangle recurrence.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}
