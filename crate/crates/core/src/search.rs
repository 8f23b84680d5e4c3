//! Depth-first search with propagation at every node.
//!
//! In [`Mode::Static`] the search explores the problem as given; symmetry
//! breaking, if any, comes from constraints the caller posted. In
//! [`Mode::GeTree`] the branching variable only receives values already
//! used by earlier decisions plus the smallest unused value of each class,
//! which leaves one representative per class of symmetric solutions.
//!
//! Counting conventions: every created node counts, the root included. A
//! branch is a root-to-leaf path ending in a wipeout, a solution or an
//! empty candidate set. A wipeout at the root counts as no branch at all.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::domain::{Assignment, DomainSet};
use crate::engine::{propagate_fixpoint, propagate_from};
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::symmetry::ValueClassPartition;
use crate::{Value, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum VarOrder {
    /// Lowest index first.
    #[default]
    Lex,
    /// Smallest domain first, ties by lowest index.
    MinDomain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Static,
    GeTree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    First,
    All,
    Count,
}

/// Values are always tried in ascending order.
#[derive(Clone, Copy, Debug, Default)]
pub struct Strategy {
    pub var_order: VarOrder,
    pub mode: Mode,
    /// Search stops and reports `aborted` once this passes.
    pub deadline: Option<Instant>,
}

impl Strategy {
    pub fn new(mode: Mode, var_order: VarOrder) -> Self {
        Strategy { var_order, mode, deadline: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub branches: u64,
    pub backtracks: u64,
    pub prunings: u64,
    pub solutions: u64,
    pub aborted: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    /// Empty for [`Goal::Count`].
    pub solutions: Vec<Vec<Value>>,
    pub stats: SearchStats,
}

pub fn solve(prob: &Problem, d: &DomainSet, strategy: Strategy, goal: Goal) -> Result<SearchResult> {
    solve_observed(prob, d, strategy, goal, &mut |_| {})
}

/// As [`solve`], calling `observer` with the decisions leading to every
/// node that is expanded.
pub fn solve_observed(
    prob: &Problem,
    d: &DomainSet,
    strategy: Strategy,
    goal: Goal,
    observer: &mut dyn FnMut(&Assignment),
) -> Result<SearchResult> {
    let partition = match strategy.mode {
        Mode::GeTree => {
            Some(prob.partition().ok_or_else(|| Error::Strategy("ge-tree mode needs a value partition".into()))?)
        }
        Mode::Static => None,
    };
    let started = Instant::now();
    let mut s = Search {
        prob,
        strategy,
        goal,
        partition,
        stats: SearchStats::default(),
        solutions: Vec::new(),
        decisions: Assignment::empty(prob.num_vars()),
        observer,
        done: false,
    };
    s.stats.nodes = 1;
    let root = propagate_fixpoint(prob, d.clone());
    s.stats.prunings += root.prunings.len() as u64;
    if !root.wipeout {
        s.expand(root.domains);
    }
    let mut stats = s.stats;
    let solutions = s.solutions;
    stats.wall_time = started.elapsed();
    Ok(SearchResult { solutions, stats })
}

struct Search<'a> {
    prob: &'a Problem,
    strategy: Strategy,
    goal: Goal,
    partition: Option<&'a ValueClassPartition>,
    stats: SearchStats,
    solutions: Vec<Vec<Value>>,
    decisions: Assignment,
    observer: &'a mut dyn FnMut(&Assignment),
    done: bool,
}

impl Search<'_> {
    fn select(&self, d: &DomainSet) -> Option<Var> {
        let open = (0..d.num_vars()).filter(|&v| d.size(v) > 1);
        match self.strategy.var_order {
            VarOrder::Lex => open.into_iter().next(),
            VarOrder::MinDomain => open.min_by_key(|&v| (d.size(v), v)),
        }
    }

    fn leaf(&mut self, solved: bool) {
        self.stats.branches += 1;
        if !solved {
            self.stats.backtracks += 1;
        }
    }

    fn expand(&mut self, d: DomainSet) {
        (self.observer)(&self.decisions);
        if let Some(deadline) = self.strategy.deadline {
            if Instant::now() > deadline {
                self.stats.aborted = true;
                self.done = true;
                return;
            }
        }
        let Some(var) = self.select(&d) else {
            let values: Vec<Value> = (0..d.num_vars()).map(|v| d.fixed_value(v).expect("all fixed")).collect();
            let solved = self.prob.satisfies(&values);
            self.leaf(solved);
            if solved {
                self.stats.solutions += 1;
                if self.goal != Goal::Count {
                    self.solutions.push(values);
                }
                self.done = self.goal == Goal::First;
            }
            return;
        };
        let candidates: Vec<Value> = match self.partition {
            Some(p) => ge_tree_candidates(&self.decisions, var, &d, p),
            None => d.values(var).collect(),
        };
        if candidates.is_empty() {
            self.leaf(false);
            return;
        }
        for v in candidates {
            let mut child = d.clone();
            child.assign(var, v);
            let out = propagate_from(self.prob, child, &[var]);
            self.stats.nodes += 1;
            self.stats.prunings += out.prunings.len() as u64;
            if out.wipeout {
                self.leaf(false);
                continue;
            }
            self.decisions.set(var, v);
            self.expand(out.domains);
            self.decisions.unset(var);
            if self.done {
                return;
            }
        }
    }
}

/// Values `var` may take under GE-tree labelling: everything outside the
/// classes, class values already used by `partial`, and the smallest
/// unused value of each class, intersected with `var`'s domain.
pub fn ge_tree_candidates(partial: &Assignment, var: Var, d: &DomainSet, p: &ValueClassPartition) -> Vec<Value> {
    let used: Vec<Value> = partial.assigned().map(|(_, v)| v).collect();
    let fresh: Vec<Value> =
        p.classes().iter().filter_map(|class| class.iter().copied().find(|v| !used.contains(v))).collect();
    d.values(var).filter(|&v| p.class_of(v).is_none() || used.contains(&v) || fresh.contains(&v)).collect()
}
