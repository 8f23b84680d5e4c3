use crate::constraint::Constraint;
use crate::domain::{Assignment, DomainSet};
use crate::error::{Error, Result};
use crate::symmetry::ValueClassPartition;
use crate::{Value, Var};

/// Variables with initial domains, constraints over them, and optionally
/// the classes of interchangeable values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    num_vars: usize,
    max_value: Value,
    domains: DomainSet,
    constraints: Vec<Constraint>,
    partition: Option<ValueClassPartition>,
    // constraint indices per variable
    watchers: Vec<Vec<usize>>,
}

impl Problem {
    pub fn new(
        domains: DomainSet,
        constraints: Vec<Constraint>,
        partition: Option<ValueClassPartition>,
    ) -> Result<Self> {
        let num_vars = domains.num_vars();
        let max_value = domains.max_value();
        for (index, c) in constraints.iter().enumerate() {
            c.validate(index, num_vars, max_value)?;
        }
        if let Some(p) = &partition {
            p.check_within(max_value)?;
        }
        let mut watchers = vec![Vec::new(); num_vars];
        for (index, c) in constraints.iter().enumerate() {
            for var in c.scope() {
                watchers[var].push(index);
            }
        }
        Ok(Problem { num_vars, max_value, domains, constraints, partition, watchers })
    }

    /// Every variable over `1..=m`, no constraints.
    pub fn unconstrained(n: usize, m: Value) -> Self {
        Problem::new(DomainSet::full(n, m), Vec::new(), None).expect("no constraints to validate")
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Largest value any domain may hold.
    pub fn max_value(&self) -> Value {
        self.max_value
    }

    pub fn domains(&self) -> &DomainSet {
        &self.domains
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn partition(&self) -> Option<&ValueClassPartition> {
        self.partition.as_ref()
    }

    pub fn watchers(&self, var: Var) -> &[usize] {
        &self.watchers[var]
    }

    /// Same problem with extra constraints appended.
    pub fn with_constraints(&self, extra: impl IntoIterator<Item = Constraint>) -> Result<Problem> {
        let mut constraints = self.constraints.clone();
        constraints.extend(extra);
        Problem::new(self.domains.clone(), constraints, self.partition.clone())
    }

    pub fn with_domains(&self, domains: DomainSet) -> Result<Problem> {
        if domains.num_vars() != self.num_vars {
            return Err(Error::DomainCount { expected: self.num_vars, got: domains.num_vars() });
        }
        Problem::new(domains, self.constraints.clone(), self.partition.clone())
    }

    pub fn with_partition(&self, partition: Option<ValueClassPartition>) -> Result<Problem> {
        Problem::new(self.domains.clone(), self.constraints.clone(), partition)
    }

    /// Whether a total assignment lies in the initial domains and satisfies
    /// every constraint.
    pub fn is_solution(&self, a: &Assignment) -> Result<bool> {
        if a.num_vars() != self.num_vars {
            return Err(Error::DomainCount { expected: self.num_vars, got: a.num_vars() });
        }
        let values = a.to_total().ok_or_else(|| Error::PartialAssignment(a.first_unassigned().unwrap()))?;
        Ok(self.satisfies(&values))
    }

    pub(crate) fn satisfies(&self, values: &[Value]) -> bool {
        values.iter().enumerate().all(|(var, &v)| self.domains.contains(var, v))
            && self.constraints.iter().all(|c| c.check(values))
    }
}
