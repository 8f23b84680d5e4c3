//! The JSON problem file. Variables are 1-based here and 0-based in the
//! library.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use valsym::{Constraint, DomainSet, Parity, Permutation, Problem, Value, ValueClassPartition, Var};

pub const FORMAT: u32 = 1;

fn format_one() -> u32 {
    FORMAT
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default = "format_one")]
    pub format: u32,
    pub variables: usize,
    pub values: Value,
    /// Omitted means every variable ranges over `1..=values`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domains: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<Vec<Value>>>,
    #[serde(default)]
    pub constraints: Vec<ConstraintSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintSpec {
    LexLeqPermuted { perm: Vec<Value>, scope: Vec<Var> },
    Precedence { class: Vec<Value>, scope: Vec<Var> },
    ImpEqLeq { x: Var, value: Value, z: Var, bound: Value },
    ImpEqEq { z: Var, index: Value, x: Var, value: Value },
    StrictLess { lhs: Var, rhs: Var },
    DisjunctionEq { value: Value, scope: Vec<Var> },
    ParityLink { cond: Var, cond_parity: Parity, target: Var, target_parity: Parity },
    AtLeastNValues { prefix: usize, count: usize },
    Conditional { cond: Var, parity: Parity, inner: Box<ConstraintSpec> },
}

fn var(v: Var, n: usize) -> anyhow::Result<Var> {
    if v == 0 || v > n {
        bail!("variable {v} outside 1..={n}");
    }
    Ok(v - 1)
}

fn vars(vs: &[Var], n: usize) -> anyhow::Result<Vec<Var>> {
    vs.iter().map(|&v| var(v, n)).collect()
}

impl ConstraintSpec {
    fn to_constraint(&self, n: usize) -> anyhow::Result<Constraint> {
        Ok(match self {
            ConstraintSpec::LexLeqPermuted { perm, scope } => {
                Constraint::LexLeqPermuted { perm: Permutation::from_images(perm)?, scope: vars(scope, n)? }
            }
            ConstraintSpec::Precedence { class, scope } => {
                Constraint::Precedence { class: class.clone(), scope: vars(scope, n)? }
            }
            &ConstraintSpec::ImpEqLeq { x, value, z, bound } => {
                Constraint::ImpEqLeq { x: var(x, n)?, value, z: var(z, n)?, bound }
            }
            &ConstraintSpec::ImpEqEq { z, index, x, value } => {
                Constraint::ImpEqEq { z: var(z, n)?, index, x: var(x, n)?, value }
            }
            &ConstraintSpec::StrictLess { lhs, rhs } => Constraint::StrictLess { lhs: var(lhs, n)?, rhs: var(rhs, n)? },
            ConstraintSpec::DisjunctionEq { value, scope } => {
                Constraint::DisjunctionEq { value: *value, scope: vars(scope, n)? }
            }
            &ConstraintSpec::ParityLink { cond, cond_parity, target, target_parity } => {
                Constraint::ParityLink { cond: var(cond, n)?, cond_parity, target: var(target, n)?, target_parity }
            }
            &ConstraintSpec::AtLeastNValues { prefix, count } => Constraint::AtLeastNValues { prefix, count },
            ConstraintSpec::Conditional { cond, parity, inner } => Constraint::Conditional {
                cond: var(*cond, n)?,
                parity: *parity,
                inner: Box::new(inner.to_constraint(n)?),
            },
        })
    }

    fn from_constraint(c: &Constraint) -> Self {
        let one = |vs: &[Var]| vs.iter().map(|v| v + 1).collect();
        match c {
            Constraint::LexLeqPermuted { perm, scope } => {
                ConstraintSpec::LexLeqPermuted { perm: perm.images().to_vec(), scope: one(scope) }
            }
            Constraint::Precedence { class, scope } => {
                ConstraintSpec::Precedence { class: class.clone(), scope: one(scope) }
            }
            &Constraint::ImpEqLeq { x, value, z, bound } => {
                ConstraintSpec::ImpEqLeq { x: x + 1, value, z: z + 1, bound }
            }
            &Constraint::ImpEqEq { z, index, x, value } => ConstraintSpec::ImpEqEq { z: z + 1, index, x: x + 1, value },
            &Constraint::StrictLess { lhs, rhs } => ConstraintSpec::StrictLess { lhs: lhs + 1, rhs: rhs + 1 },
            Constraint::DisjunctionEq { value, scope } => {
                ConstraintSpec::DisjunctionEq { value: *value, scope: one(scope) }
            }
            &Constraint::ParityLink { cond, cond_parity, target, target_parity } => {
                ConstraintSpec::ParityLink { cond: cond + 1, cond_parity, target: target + 1, target_parity }
            }
            &Constraint::AtLeastNValues { prefix, count } => ConstraintSpec::AtLeastNValues { prefix, count },
            Constraint::Conditional { cond, parity, inner } => ConstraintSpec::Conditional {
                cond: cond + 1,
                parity: *parity,
                inner: Box::new(ConstraintSpec::from_constraint(inner)),
            },
        }
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let file: ProblemFile = serde_json::from_str(text).context("problem file is not valid")?;
        if file.format != FORMAT {
            bail!("unsupported format {} (expected {FORMAT})", file.format);
        }
        Ok(file)
    }

    pub fn to_problem(&self) -> anyhow::Result<Problem> {
        let n = self.variables;
        let domains = match &self.domains {
            Some(lists) => DomainSet::from_lists(self.values, lists)?,
            None => DomainSet::full(n, self.values),
        };
        if domains.num_vars() != n {
            bail!("{} domains given for {n} variables", domains.num_vars());
        }
        let constraints = self
            .constraints
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_constraint(n).with_context(|| format!("constraint {}", i + 1)))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let partition = self.classes.clone().map(ValueClassPartition::new).transpose()?;
        Ok(Problem::new(domains, constraints, partition)?)
    }

    pub fn from_problem(p: &Problem) -> Self {
        ProblemFile {
            format: FORMAT,
            variables: p.num_vars(),
            values: p.max_value(),
            domains: Some(p.domains().to_lists()),
            classes: p.partition().map(|part| part.classes().to_vec()),
            constraints: p.constraints().iter().map(ConstraintSpec::from_constraint).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }
}
