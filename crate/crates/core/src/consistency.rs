//! Ground-truth oracles and the consistency levels above arc consistency.
//!
//! Everything here enumerates. Each entry point takes an explicit budget
//! and refuses with [`Error::BudgetExceeded`] rather than truncating.

use serde::Serialize;

use crate::constraint::Constraint;
use crate::domain::{Assignment, DomainSet};
use crate::engine::{propagate_fixpoint, propagate_from, Cause, PropagationOutcome, Pruning};
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::{Value, Var};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// Depth-first enumeration of `vars` (ascending) over `d`, checking each
/// constraint as soon as its last scope variable is assigned, then `leaf`
/// on complete assignments. `visit` returns `false` to stop.
struct Walk<'a> {
    vars: Vec<Var>,
    d: &'a DomainSet,
    checks_at: Vec<Vec<&'a Constraint>>,
    leaf: &'a dyn Fn(&[Value]) -> bool,
}

impl<'a> Walk<'a> {
    fn new(
        vars: Vec<Var>,
        d: &'a DomainSet,
        constraints: &'a [Constraint],
        leaf: &'a dyn Fn(&[Value]) -> bool,
    ) -> Self {
        let mut checks_at = vec![Vec::new(); vars.len()];
        for c in constraints {
            let last = c.scope().into_iter().max();
            if let Some(pos) = last.and_then(|l| vars.iter().position(|&v| v == l)) {
                checks_at[pos].push(c);
            }
        }
        Walk { vars, d, checks_at, leaf }
    }

    fn run(&self, visit: &mut dyn FnMut(&[Value]) -> bool) {
        let mut values = vec![0; self.d.num_vars()];
        self.step(0, &mut values, visit);
    }

    fn step(&self, depth: usize, values: &mut Vec<Value>, visit: &mut dyn FnMut(&[Value]) -> bool) -> bool {
        if depth == self.vars.len() {
            return if (self.leaf)(values) { visit(values) } else { true };
        }
        let var = self.vars[depth];
        for v in self.d.values(var) {
            values[var] = v;
            if self.checks_at[depth].iter().all(|c| c.check(values)) && !self.step(depth + 1, values, visit) {
                return false;
            }
        }
        values[var] = 0;
        true
    }
}

fn union_scope(constraints: &[Constraint]) -> Vec<Var> {
    let mut vars: Vec<Var> = constraints.iter().flat_map(Constraint::scope).collect();
    vars.sort_unstable();
    vars.dedup();
    vars
}

/// All total assignments from `d` satisfying every constraint of `prob`,
/// in lexicographic order.
pub fn enumerate_solutions(prob: &Problem, d: &DomainSet, budget: u128) -> Result<Vec<Vec<Value>>> {
    let vars: Vec<Var> = (0..prob.num_vars()).collect();
    check_budget(d.search_space(vars.iter().copied()), budget)?;
    let mut out = Vec::new();
    Walk::new(vars, d, prob.constraints(), &|_| true).run(&mut |values| {
        out.push(values.to_vec());
        true
    });
    Ok(out)
}

/// Removes exactly the values that appear in no assignment of the joint
/// scope satisfying all `constraints` at once.
pub fn brute_force_gac(constraints: &[Constraint], d: &DomainSet, budget: u128) -> Result<PropagationOutcome> {
    let vars = union_scope(constraints);
    supports_filter(vars, constraints, d, budget, &|_| true)
}

/// As [`brute_force_gac`] for an arbitrary relation over `scope`, given as
/// a predicate on the full value vector (positions outside `scope` are 0).
pub fn brute_force_gac_by(
    scope: &[Var],
    d: &DomainSet,
    budget: u128,
    holds: &dyn Fn(&[Value]) -> bool,
) -> Result<PropagationOutcome> {
    let mut vars = scope.to_vec();
    vars.sort_unstable();
    vars.dedup();
    supports_filter(vars, &[], d, budget, holds)
}

fn supports_filter(
    vars: Vec<Var>,
    constraints: &[Constraint],
    d: &DomainSet,
    budget: u128,
    leaf: &dyn Fn(&[Value]) -> bool,
) -> Result<PropagationOutcome> {
    check_budget(d.search_space(vars.iter().copied()), budget)?;
    let mut supported = vec![vec![false; d.max_value() + 1]; d.num_vars()];
    let walk = Walk::new(vars.clone(), d, constraints, leaf);
    walk.run(&mut |values| {
        for &var in &walk.vars {
            supported[var][values[var]] = true;
        }
        true
    });
    let mut domains = d.clone();
    let mut prunings = Vec::new();
    for &var in &vars {
        for value in d.values(var) {
            if !supported[var][value] {
                domains.remove(var, value);
                prunings.push(Pruning { var, value, cause: Cause::Oracle });
            }
        }
    }
    let wipeout = vars.iter().any(|&v| domains.is_empty(v));
    Ok(PropagationOutcome { prunings, wipeout, domains })
}

/// Whether some assignment from `d` with `var = value` satisfies all
/// `constraints`.
pub fn has_support(constraints: &[Constraint], d: &DomainSet, var: Var, value: Value, budget: u128) -> Result<bool> {
    if !d.contains(var, value) {
        return Ok(false);
    }
    let mut restricted = d.clone();
    restricted.assign(var, value);
    let mut vars = union_scope(constraints);
    if !vars.contains(&var) {
        vars.push(var);
        vars.sort_unstable();
    }
    check_budget(restricted.search_space(vars.iter().copied()), budget)?;
    let mut found = false;
    Walk::new(vars, &restricted, constraints, &|_| true).run(&mut |_| {
        found = true;
        false
    });
    Ok(found)
}

/// Singleton arc consistency: a value stays iff fixing its variable to it
/// and propagating to a fixpoint leaves no domain empty. Removals are
/// followed by propagation and the probe loop repeats until stable.
pub fn enforce_sac(prob: &Problem, d: &DomainSet) -> PropagationOutcome {
    let first = propagate_fixpoint(prob, d.clone());
    if first.wipeout {
        return first;
    }
    let PropagationOutcome { mut prunings, mut domains, .. } = first;
    loop {
        let mut changed = false;
        for var in 0..prob.num_vars() {
            if domains.size(var) <= 1 {
                continue;
            }
            let candidates: Vec<Value> = domains.values(var).collect();
            for value in candidates {
                if !domains.contains(var, value) {
                    continue;
                }
                let mut probe = domains.clone();
                probe.assign(var, value);
                if !propagate_from(prob, probe, &[var]).wipeout {
                    continue;
                }
                domains.remove(var, value);
                prunings.push(Pruning { var, value, cause: Cause::Singleton });
                changed = true;
                let after = propagate_from(prob, domains, &[var]);
                prunings.extend(after.prunings);
                domains = after.domains;
                if after.wipeout {
                    return PropagationOutcome { prunings, wipeout: true, domains };
                }
            }
        }
        if !changed {
            return PropagationOutcome { prunings, wipeout: false, domains };
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Witness {
    /// A consistent assignment of `partial` that no value of `var` extends.
    Unextendable { partial: Vec<(Var, Value)>, var: Var },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub level: usize,
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Checks plain `level`-consistency: every consistent assignment to a set
/// of `level − 1` variables extends to each other variable. "Consistent"
/// means satisfying every constraint whose scope it fully assigns.
pub fn is_k_consistent(prob: &Problem, level: usize, budget: u128) -> Result<ConsistencyReport> {
    assert!(level >= 1, "consistency levels start at 1");
    let mut checker = KCheck { prob, d: prob.domains(), budget, spent: 0, a: Assignment::empty(prob.num_vars()) };
    let witness = checker.subsets(0, level - 1)?;
    Ok(ConsistencyReport { level, holds: witness.is_none(), witness })
}

/// Strong `k`-consistency: `j`-consistency for every `j ≤ k`. The report
/// names the first failing level, or `k` when all hold.
pub fn is_strongly_k_consistent(prob: &Problem, k: usize, budget: u128) -> Result<ConsistencyReport> {
    for level in 1..=k {
        let report = is_k_consistent(prob, level, budget)?;
        if !report.holds {
            return Ok(report);
        }
    }
    Ok(ConsistencyReport { level: k, holds: true, witness: None })
}

struct KCheck<'a> {
    prob: &'a Problem,
    d: &'a DomainSet,
    budget: u128,
    spent: u128,
    a: Assignment,
}

impl KCheck<'_> {
    fn consistent_with(&self, var: Var) -> bool {
        self.prob.watchers(var).iter().all(|&ci| self.prob.constraints()[ci].check_partial(&self.a) != Some(false))
    }

    /// Assign `remaining` more variables, all with index ≥ `from`; at full
    /// size, test every extension.
    fn subsets(&mut self, from: Var, remaining: usize) -> Result<Option<Witness>> {
        if remaining == 0 {
            return self.extensions();
        }
        let n = self.prob.num_vars();
        for var in from..n.saturating_sub(remaining - 1) {
            let values: Vec<Value> = self.d.values(var).collect();
            for v in values {
                self.spend()?;
                self.a.set(var, v);
                if self.consistent_with(var) {
                    if let Some(w) = self.subsets(var + 1, remaining - 1)? {
                        self.a.unset(var);
                        return Ok(Some(w));
                    }
                }
            }
            self.a.unset(var);
        }
        Ok(None)
    }

    fn extensions(&mut self) -> Result<Option<Witness>> {
        for y in 0..self.prob.num_vars() {
            if self.a.get(y).is_some() {
                continue;
            }
            let mut ok = false;
            let values: Vec<Value> = self.d.values(y).collect();
            for v in values {
                self.spend()?;
                self.a.set(y, v);
                ok = self.consistent_with(y);
                self.a.unset(y);
                if ok {
                    break;
                }
            }
            if !ok {
                return Ok(Some(Witness::Unextendable { partial: self.a.assigned().collect(), var: y }));
            }
        }
        Ok(None)
    }

    fn spend(&mut self) -> Result<()> {
        self.spent += 1;
        if self.spent > self.budget {
            return Err(Error::BudgetExceeded { needed: self.spent, budget: self.budget });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::Parity;
    use crate::instances::pigeonhole_model;
    use crate::symmetry::{build_puget, valsymbreak_full_holds, ValueClassPartition};
    use crate::testutil::random_domains;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_problem(rng: &mut ChaCha8Rng, binary_only: bool) -> Problem {
        let n = rng.gen_range(2..=4);
        let m = rng.gen_range(2..=4);
        let mut cs = Vec::new();
        for _ in 0..rng.gen_range(0..=4) {
            let x = rng.gen_range(0..n);
            let z = (x + rng.gen_range(1..n)) % n;
            let kind = rng.gen_range(0..if binary_only { 4 } else { 6 });
            cs.push(match kind {
                0 => Constraint::ImpEqLeq { x, value: rng.gen_range(1..=m), z, bound: rng.gen_range(1..=m) },
                1 => Constraint::ImpEqEq { z, index: rng.gen_range(1..=m), x, value: rng.gen_range(1..=m) },
                2 => Constraint::StrictLess { lhs: x, rhs: z },
                3 => {
                    Constraint::ParityLink { cond: x, cond_parity: Parity::Even, target: z, target_parity: Parity::Odd }
                }
                4 => Constraint::DisjunctionEq { value: rng.gen_range(1..=m), scope: (0..n).collect() },
                _ => Constraint::Precedence { class: (1..=m).collect(), scope: (0..n).collect() },
            });
        }
        Problem::new(random_domains(rng, n, m), cs, None).unwrap()
    }

    /// Different order: last variable varies slowest.
    fn count_solutions_recursive(p: &Problem, var: usize, values: &mut Vec<Value>) -> usize {
        if var == usize::MAX {
            return usize::from(p.constraints().iter().all(|c| c.check(values)));
        }
        let next = if var == 0 { usize::MAX } else { var - 1 };
        p.domains()
            .values(var)
            .map(|v| {
                values[var] = v;
                count_solutions_recursive(p, next, values)
            })
            .sum()
    }

    #[test]
    fn pigeonhole_has_no_solutions() {
        for n in 1..=6 {
            let p = pigeonhole_model(n);
            assert!(enumerate_solutions(&p, p.domains(), DEFAULT_BUDGET).unwrap().is_empty());
        }
    }

    #[test]
    fn unconstrained_two_by_two() {
        let p = Problem::unconstrained(2, 2);
        let sols = enumerate_solutions(&p, p.domains(), DEFAULT_BUDGET).unwrap();
        assert_eq!(sols, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
    }

    #[test]
    fn budget_refusal() {
        let p = Problem::unconstrained(10, 10);
        assert!(matches!(enumerate_solutions(&p, p.domains(), DEFAULT_BUDGET), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn enumeration_count_matches_second_enumerator() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let p = random_problem(&mut rng, false);
            let sols = enumerate_solutions(&p, p.domains(), DEFAULT_BUDGET).unwrap();
            let mut values = vec![0; p.num_vars()];
            assert_eq!(sols.len(), count_solutions_recursive(&p, p.num_vars() - 1, &mut values));
            assert!(sols.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn brute_force_gac_counterexample_domains() {
        let d = DomainSet::from_lists(5, &[vec![1], vec![1, 2], vec![1, 3], vec![1, 4], vec![5]]).unwrap();
        let p = ValueClassPartition::all_interchangeable(5);
        let out = brute_force_gac_by(&[0, 1, 2, 3, 4], &d, DEFAULT_BUDGET, &|a| valsymbreak_full_holds(a, &p)).unwrap();
        assert_eq!(out.pruned_pairs(), vec![(1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn brute_force_gac_is_idempotent_and_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..200 {
            let p = random_problem(&mut rng, false);
            let once = brute_force_gac(p.constraints(), p.domains(), DEFAULT_BUDGET).unwrap();
            if once.wipeout {
                continue;
            }
            let twice = brute_force_gac(p.constraints(), &once.domains, DEFAULT_BUDGET).unwrap();
            assert!(twice.prunings.is_empty());
            let mut smaller = p.domains().clone();
            for var in 0..p.num_vars() {
                if smaller.size(var) > 1 && rng.gen_bool(0.5) {
                    let v = smaller.max(var).unwrap();
                    smaller.remove(var, v);
                }
            }
            let small = brute_force_gac(p.constraints(), &smaller, DEFAULT_BUDGET).unwrap();
            if !small.wipeout {
                assert!(small.domains.is_subset_of(&once.domains));
            }
        }
    }

    #[test]
    fn single_constraint_oracle_matches_propagators() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..500 {
            let p = random_problem(&mut rng, false);
            for c in p.constraints() {
                let oracle = brute_force_gac(std::slice::from_ref(c), p.domains(), DEFAULT_BUDGET).unwrap();
                let mut direct: Vec<_> = c.filter(p.domains());
                direct.sort();
                assert_eq!(oracle.pruned_pairs(), direct, "{c:?}");
            }
        }
    }

    #[test]
    fn has_support_agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..100 {
            let p = random_problem(&mut rng, false);
            let sols = enumerate_solutions(&p, p.domains(), DEFAULT_BUDGET).unwrap();
            for var in 0..p.num_vars() {
                for v in p.domains().values(var) {
                    let expected = sols.iter().any(|s| s[var] == v);
                    let got = has_support(p.constraints(), p.domains(), var, v, DEFAULT_BUDGET).unwrap();
                    assert_eq!(got, expected);
                }
            }
        }
        // empty constraint set: support iff value present
        let d = DomainSet::from_lists(3, &[vec![1, 3]]).unwrap();
        assert!(has_support(&[], &d, 0, 3, DEFAULT_BUDGET).unwrap());
        assert!(!has_support(&[], &d, 0, 2, DEFAULT_BUDGET).unwrap());
    }

    /// SAC straight from its definition: repeatedly collect every
    /// (var, value) whose assignment makes AC fail, remove them together.
    fn sac_literal(p: &Problem, d: &DomainSet) -> Option<DomainSet> {
        let mut d = d.clone();
        loop {
            let ac = propagate_fixpoint(p, d.clone());
            if ac.wipeout {
                return None;
            }
            d = ac.domains;
            let mut doomed = Vec::new();
            for var in 0..p.num_vars() {
                for v in d.values(var) {
                    let mut probe = d.clone();
                    probe.assign(var, v);
                    if propagate_fixpoint(p, probe).wipeout {
                        doomed.push((var, v));
                    }
                }
            }
            if doomed.is_empty() {
                return Some(d);
            }
            for (var, v) in doomed {
                d.remove(var, v);
            }
            if d.first_empty().is_some() {
                return None;
            }
        }
    }

    #[test]
    fn sac_matches_literal_definition_and_contains_ac() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..300 {
            let p = random_problem(&mut rng, true);
            let sac = enforce_sac(&p, p.domains());
            match sac_literal(&p, p.domains()) {
                None => assert!(sac.wipeout),
                Some(d) => {
                    assert!(!sac.wipeout);
                    assert_eq!(sac.domains, d);
                }
            }
            let ac = propagate_fixpoint(&p, p.domains().clone());
            if !sac.wipeout {
                assert!(sac.domains.is_subset_of(&ac.domains));
            }
        }
    }

    #[test]
    fn sac_on_consistent_singletons_prunes_nothing() {
        let prob = Problem::new(
            DomainSet::from_lists(3, &[vec![1], vec![2], vec![3]]).unwrap(),
            vec![Constraint::StrictLess { lhs: 0, rhs: 1 }, Constraint::StrictLess { lhs: 1, rhs: 2 }],
            None,
        )
        .unwrap();
        assert!(enforce_sac(&prob, prob.domains()).prunings.is_empty());
    }

    #[test]
    fn one_consistency_is_nonempty_domains() {
        let p = Problem::unconstrained(3, 2);
        assert!(is_k_consistent(&p, 1, DEFAULT_BUDGET).unwrap().holds);
        let d = DomainSet::from_lists(2, &[vec![1], vec![], vec![1, 2]]).unwrap();
        let r = is_k_consistent(&p.with_domains(d).unwrap(), 1, DEFAULT_BUDGET).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness, Some(Witness::Unextendable { partial: vec![], var: 1 }));
    }

    #[test]
    fn two_consistency_matches_ac_fixpoint_on_binary_problems() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        for _ in 0..300 {
            let p = random_problem(&mut rng, true);
            // two constraints on one pair can each be AC while their conjunction is not
            let mut scopes: Vec<Vec<Var>> = p
                .constraints()
                .iter()
                .map(|c| {
                    let mut s = c.scope();
                    s.sort_unstable();
                    s
                })
                .collect();
            scopes.sort();
            if scopes.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let ac_quiet = propagate_fixpoint(&p, p.domains().clone()).prunings.is_empty();
            let two = is_k_consistent(&p, 2, DEFAULT_BUDGET).unwrap();
            assert_eq!(two.holds, ac_quiet, "{p:?}");
            assert_eq!(two.holds, two.witness.is_none());
        }
    }

    #[test]
    fn puget_sac_matches_oracle_on_small_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..50 {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(2..=4);
            let d = random_domains(&mut rng, n, m);
            let part = ValueClassPartition::all_interchangeable(m);
            let scope: Vec<Var> = (0..n).collect();
            let oracle = brute_force_gac_by(&scope, &d, DEFAULT_BUDGET, &|a| valsymbreak_full_holds(a, &part)).unwrap();
            let enc = build_puget(&Problem::new(d.clone(), vec![], None).unwrap(), &part);
            let sac = enforce_sac(&enc.problem, enc.problem.domains());
            assert_eq!(sac.wipeout, oracle.wipeout);
            if !oracle.wipeout {
                assert_eq!(enc.project_domains(&sac.domains), oracle.domains);
            }
        }
    }
}
