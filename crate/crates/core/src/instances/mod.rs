//! Deterministic instance generators and fixtures.

mod dimacs;

pub use dimacs::{parse_dimacs, CnfFormula};

use crate::consistency::{has_support, DEFAULT_BUDGET};
use crate::constraint::{Constraint, Parity};
use crate::domain::DomainSet;
use crate::engine::propagate_fixpoint;
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::symmetry::{build_precedence, build_puget, PugetEncoding, ValueClassPartition};
use crate::{Value, Var};

/// `n` variables over `1..=n+1`, with every value required somewhere.
/// Unsatisfiable, and all values are interchangeable.
pub fn pigeonhole_model(n: usize) -> Problem {
    assert!(n >= 1, "pigeonhole model needs n >= 1");
    let m = n + 1;
    let constraints = (1..=m).map(|value| Constraint::DisjunctionEq { value, scope: (0..n).collect() }).collect();
    Problem::new(DomainSet::full(n, m), constraints, Some(ValueClassPartition::all_interchangeable(m)))
        .expect("well-formed by construction")
}

fn unconstrained_with(lists: &[Vec<Value>], m: Value) -> (Problem, DomainSet) {
    let d = DomainSet::from_lists(m, lists).expect("fixture values in range");
    let p = Problem::new(d.clone(), Vec::new(), Some(ValueClassPartition::all_interchangeable(m)))
        .expect("fixture is well-formed");
    (p, d)
}

/// Five variables, values 1..=5 all interchangeable, with
/// `X1=1, X2∈{1,2}, X3∈{1,3}, X4∈{1,4}, X5=5`.
///
/// Lex constraints for the adjacent transpositions prune nothing here,
/// while the full symmetry breaking constraint removes 1 from X2..X4.
pub fn generator_gap_example() -> (Problem, DomainSet) {
    unconstrained_with(&[vec![1], vec![1, 2], vec![1, 3], vec![1, 4], vec![5]], 5)
}

/// Seven variables, values 1..=4 all interchangeable, with
/// `X1=1, X2∈{1,2}, X3∈{1,3}, X4∈{3,4}, X5=2, X6=3, X7=4`.
///
/// The channelled dual encoding is arc consistent on these domains but
/// the full symmetry breaking constraint removes 1 from X2.
pub fn channelling_gap_example() -> (Problem, DomainSet) {
    unconstrained_with(&[vec![1], vec![1, 2], vec![1, 3], vec![3, 4], vec![2], vec![3], vec![4]], 4)
}

/// Dual domains `Z1..Z4` at the arc consistent fixpoint of
/// [`channelling_gap_example`], as 1-based first-use positions.
pub fn channelling_gap_dual_domains() -> Vec<Vec<Value>> {
    vec![vec![1], vec![2, 5], vec![3, 4, 6], vec![4, 7]]
}

/// `2k+1` variables over `2(k+1)` values: `Xi ∈ {i, i+1}` for `i ≤ k`
/// and `X_{k+i} = k+1+i` for `i ≤ k+1`, with values `i` and `k+1+i`
/// interchangeable. Unsatisfiable by counting.
pub fn paired_pigeonhole(k: usize) -> Problem {
    assert!(k >= 1, "paired pigeonhole needs k >= 1");
    let m = 2 * (k + 1);
    let mut lists: Vec<Vec<Value>> = (1..=k).map(|i| vec![i, i + 1]).collect();
    lists.extend((1..=k + 1).map(|i| vec![k + 1 + i]));
    let pairs = (1..=k + 1).map(|i| vec![i, k + 1 + i]).collect();
    let d = DomainSet::from_lists(m, &lists).expect("values in range");
    Problem::new(d, Vec::new(), Some(ValueClassPartition::new(pairs).expect("disjoint pairs")))
        .expect("well-formed by construction")
}

/// The dual encoding of [`paired_pigeonhole`], with domains as built.
pub fn paired_pigeonhole_encoding(k: usize) -> PugetEncoding {
    let base = paired_pigeonhole(k);
    build_puget(&base, base.partition().expect("has pairs"))
}

/// Layout of the problem built by [`reduce_3sat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionLayout {
    /// Boolean variables `N`; CSP variables `0..N` hold the truth assignment.
    pub num_bool_vars: usize,
    /// Clauses `M`; CSP variables `N..N+M`.
    pub num_clauses: usize,
}

impl ReductionLayout {
    pub fn switch_var(&self) -> Var {
        self.num_bool_vars + self.num_clauses
    }

    /// The switch value under which satisfiability depends on the formula.
    pub fn odd_switch(&self) -> Value {
        4 * self.num_bool_vars + 1
    }
}

/// Builds the CSP whose symmetry breaking constraint has a support with
/// the switch at `4N+1` exactly when `f` is satisfiable.
///
/// Values `4i-3, 4i-2` mean `x_i` true and `4i-1, 4i` mean false; each
/// pair is a class. Clauses with repeated literals get deduplicated
/// domains.
pub fn reduce_3sat(f: &CnfFormula) -> Result<(Problem, ValueClassPartition)> {
    let n = f.num_vars();
    let m_clauses = f.clauses().len();
    if n == 0 {
        return Err(Error::Reduction("formula has no variables".into()));
    }
    if let Some(i) = f.clauses().iter().position(|c| c.len() > 3) {
        return Err(Error::Reduction(format!("clause {} has more than 3 literals", i + 1)));
    }
    let max = 4 * n + 2;
    let mut lists: Vec<Vec<Value>> = (1..=n).map(|i| (4 * i - 3..=4 * i).collect()).collect();
    for clause in f.clauses() {
        let mut dom: Vec<Value> = Vec::new();
        for &lit in clause {
            let j = lit.unsigned_abs() as usize;
            if lit > 0 {
                dom.extend([4 * j - 3, 4 * j - 2]);
            } else {
                dom.extend([4 * j - 1, 4 * j]);
            }
        }
        dom.sort_unstable();
        dom.dedup();
        lists.push(dom);
    }
    lists.push(vec![4 * n + 1, 4 * n + 2]);
    let switch = n + m_clauses;

    let mut constraints: Vec<Constraint> = (0..n)
        .map(|target| Constraint::ParityLink {
            cond: switch,
            cond_parity: Parity::Odd,
            target,
            target_parity: Parity::Odd,
        })
        .collect();
    constraints.extend((n..switch).map(|target| Constraint::ParityLink {
        cond: switch,
        cond_parity: Parity::Odd,
        target,
        target_parity: Parity::Even,
    }));
    constraints.push(Constraint::Conditional {
        cond: switch,
        parity: Parity::Odd,
        inner: Box::new(Constraint::AtLeastNValues { prefix: n, count: n + 1 }),
    });
    constraints.push(Constraint::Conditional {
        cond: switch,
        parity: Parity::Even,
        inner: Box::new(Constraint::AtLeastNValues { prefix: n, count: n }),
    });

    let classes = (1..=n).flat_map(|i| [vec![4 * i - 3, 4 * i - 2], vec![4 * i - 1, 4 * i]]).collect();
    let partition = ValueClassPartition::new(classes)?;
    let d = DomainSet::from_lists(max, &lists)?;
    let problem = Problem::new(d, constraints, Some(partition.clone()))?;
    Ok((problem, partition))
}

pub fn reduction_layout(f: &CnfFormula) -> ReductionLayout {
    ReductionLayout { num_bool_vars: f.num_vars(), num_clauses: f.clauses().len() }
}

/// Sets the switch to `4N+1`, makes the parity links arc consistent and
/// asks whether within-pair precedence has a support for the switch.
pub fn reduction_support_exists(f: &CnfFormula) -> Result<bool> {
    let (problem, partition) = reduce_3sat(f)?;
    let layout = reduction_layout(f);
    let mut d = problem.domains().clone();
    d.assign(layout.switch_var(), layout.odd_switch());
    let binary: Vec<Constraint> = problem.constraints().iter().filter(|c| c.is_binary()).cloned().collect();
    let links = Problem::new(d, binary, None)?;
    let out = propagate_fixpoint(&links, links.domains().clone());
    if out.wipeout {
        return Ok(false);
    }
    let precedence = build_precedence(&problem, &partition);
    has_support(&precedence, &out.domains, layout.switch_var(), layout.odd_switch(), DEFAULT_BUDGET)
}
