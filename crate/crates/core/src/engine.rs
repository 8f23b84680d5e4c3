//! Constraint-queue propagation to a common fixpoint, with a pruning log.

use std::collections::VecDeque;

use serde::Serialize;

use crate::constraint::Constraint;
use crate::domain::DomainSet;
use crate::problem::Problem;
use crate::{Value, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "index")]
pub enum Cause {
    /// Index into the problem's constraint list.
    Constraint(usize),
    /// Removed because assigning it made arc consistency fail.
    Singleton,
    /// Removed by an enumeration oracle.
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Pruning {
    pub var: Var,
    pub value: Value,
    pub cause: Cause,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationOutcome {
    /// In the order the values were removed.
    pub prunings: Vec<Pruning>,
    pub wipeout: bool,
    pub domains: DomainSet,
}

impl PropagationOutcome {
    pub fn unchanged(domains: DomainSet) -> Self {
        PropagationOutcome { prunings: Vec::new(), wipeout: false, domains }
    }

    /// Pruned `(var, value)` pairs, sorted.
    pub fn pruned_pairs(&self) -> Vec<(Var, Value)> {
        let mut pairs: Vec<_> = self.prunings.iter().map(|p| (p.var, p.value)).collect();
        pairs.sort_unstable();
        pairs
    }

    /// Replays the log on `initial`.
    pub fn replay(&self, initial: &DomainSet) -> DomainSet {
        let mut d = initial.clone();
        for p in &self.prunings {
            d.remove(p.var, p.value);
        }
        d
    }
}

/// Runs every constraint of `problem` to a common fixpoint from `domains`.
pub fn propagate_fixpoint(problem: &Problem, domains: DomainSet) -> PropagationOutcome {
    let order: Vec<usize> = (0..problem.constraints().len()).collect();
    propagate_fixpoint_ordered(problem, domains, &order)
}

/// As [`propagate_fixpoint`], seeding the queue in `order`. Constraints
/// missing from `order` are still woken by domain changes.
pub fn propagate_fixpoint_ordered(problem: &Problem, domains: DomainSet, order: &[usize]) -> PropagationOutcome {
    let mut q = Queue::new(problem.constraints().len());
    for &c in order {
        q.push(c);
    }
    run(problem, domains, q)
}

/// Wakes only the constraints watching `changed`.
pub fn propagate_from(problem: &Problem, domains: DomainSet, changed: &[Var]) -> PropagationOutcome {
    let mut q = Queue::new(problem.constraints().len());
    for &var in changed {
        for &c in problem.watchers(var) {
            q.push(c);
        }
    }
    run(problem, domains, q)
}

/// One constraint's filtering, logged against cause index 0.
pub fn propagate_single(c: &Constraint, domains: &DomainSet) -> PropagationOutcome {
    let mut d = domains.clone();
    let mut prunings = Vec::new();
    for (var, value) in c.filter(domains) {
        if d.remove(var, value) {
            prunings.push(Pruning { var, value, cause: Cause::Constraint(0) });
        }
    }
    let wipeout = c.scope().iter().any(|&v| d.is_empty(v));
    PropagationOutcome { prunings, wipeout, domains: d }
}

struct Queue {
    items: VecDeque<usize>,
    queued: Vec<bool>,
}

impl Queue {
    fn new(len: usize) -> Self {
        Queue { items: VecDeque::new(), queued: vec![false; len] }
    }

    fn push(&mut self, c: usize) {
        if !std::mem::replace(&mut self.queued[c], true) {
            self.items.push_back(c);
        }
    }

    fn pop(&mut self) -> Option<usize> {
        let c = self.items.pop_front()?;
        self.queued[c] = false;
        Some(c)
    }
}

fn run(problem: &Problem, mut domains: DomainSet, mut q: Queue) -> PropagationOutcome {
    let mut prunings = Vec::new();
    if domains.first_empty().is_some() {
        return PropagationOutcome { prunings, wipeout: true, domains };
    }
    let mut touched: Vec<Var> = Vec::new();
    while let Some(ci) = q.pop() {
        touched.clear();
        for (var, value) in problem.constraints()[ci].filter(&domains) {
            if domains.remove(var, value) {
                prunings.push(Pruning { var, value, cause: Cause::Constraint(ci) });
                touched.push(var);
            }
        }
        touched.sort_unstable();
        touched.dedup();
        if touched.iter().any(|&var| domains.is_empty(var)) {
            return PropagationOutcome { prunings, wipeout: true, domains };
        }
        for &var in &touched {
            for &c in problem.watchers(var) {
                q.push(c);
            }
        }
    }
    PropagationOutcome { prunings, wipeout: false, domains }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::Parity;
    use crate::instances::pigeonhole_model;
    use crate::testutil::{oracle_filter, random_domains};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pigeonhole_without_last_value_wipes_out() {
        let p = pigeonhole_model(3);
        let mut d = p.domains().clone();
        for var in 0..3 {
            d.remove(var, 4);
        }
        assert!(propagate_fixpoint(&p, d).wipeout);
    }

    #[test]
    fn no_constraints_no_prunings() {
        let p = Problem::unconstrained(3, 4);
        let d = DomainSet::from_lists(4, &[vec![1], vec![2, 3], vec![4]]).unwrap();
        let out = propagate_fixpoint(&p, d.clone());
        assert!(out.prunings.is_empty());
        assert!(!out.wipeout);
        assert_eq!(out.domains, d);
    }

    fn random_binary_problem(rng: &mut ChaCha8Rng) -> Problem {
        let n = 4;
        let m = rng.gen_range(2..=5);
        let mut cs = Vec::new();
        for _ in 0..rng.gen_range(1..=6) {
            let x = rng.gen_range(0..n);
            let z = (x + rng.gen_range(1..n)) % n;
            cs.push(match rng.gen_range(0..4) {
                0 => Constraint::ImpEqLeq { x, value: rng.gen_range(1..=m), z, bound: rng.gen_range(1..=m) },
                1 => Constraint::ImpEqEq { z, index: rng.gen_range(1..=m), x, value: rng.gen_range(1..=m) },
                2 => Constraint::StrictLess { lhs: x, rhs: z },
                _ => {
                    Constraint::ParityLink { cond: x, cond_parity: Parity::Odd, target: z, target_parity: Parity::Even }
                }
            });
        }
        Problem::new(random_domains(rng, n, m), cs, None).unwrap()
    }

    /// Repeats single-constraint oracle filtering until nothing changes.
    fn oracle_fixpoint(p: &Problem) -> Option<DomainSet> {
        let mut d = p.domains().clone();
        loop {
            let mut changed = false;
            for c in p.constraints() {
                for (var, v) in oracle_filter(c, &d) {
                    changed |= d.remove(var, v);
                }
                if d.first_empty().is_some() {
                    return None;
                }
            }
            if !changed {
                return Some(d);
            }
        }
    }

    #[test]
    fn fixpoint_matches_iterated_oracle_under_any_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..300 {
            let p = random_binary_problem(&mut rng);
            let expected = oracle_fixpoint(&p);
            let mut order: Vec<usize> = (0..p.constraints().len()).collect();
            for _ in 0..3 {
                order.shuffle(&mut rng);
                let out = propagate_fixpoint_ordered(&p, p.domains().clone(), &order);
                match &expected {
                    None => assert!(out.wipeout),
                    Some(d) => {
                        assert!(!out.wipeout);
                        assert_eq!(&out.domains, d);
                    }
                }
                assert_eq!(out.replay(p.domains()), out.domains);
            }
        }
    }

    #[test]
    fn pruning_log_is_sound() {
        // Every logged removal had no support in its constraint at the time.
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..200 {
            let p = random_binary_problem(&mut rng);
            let out = propagate_fixpoint(&p, p.domains().clone());
            if out.wipeout {
                continue;
            }
            let mut d = p.domains().clone();
            for pr in &out.prunings {
                let Cause::Constraint(ci) = pr.cause else { unreachable!() };
                assert!(oracle_filter(&p.constraints()[ci], &d).contains(&(pr.var, pr.value)));
                d.remove(pr.var, pr.value);
            }
        }
    }

    #[test]
    fn monotone_in_input_domains() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let p = random_binary_problem(&mut rng);
            let big = propagate_fixpoint(&p, p.domains().clone());
            let mut small = p.domains().clone();
            for var in 0..p.num_vars() {
                let vals: Vec<_> = small.values(var).collect();
                for v in vals.into_iter().skip(1) {
                    if rng.gen_bool(0.3) {
                        small.remove(var, v);
                    }
                }
            }
            let small_out = propagate_fixpoint(&p, small);
            if !small_out.wipeout {
                assert!(!big.wipeout);
                assert!(small_out.domains.is_subset_of(&big.domains));
            }
        }
    }
}
