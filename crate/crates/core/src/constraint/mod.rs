//! Constraint kinds, their checkers and their filtering algorithms.
//!
//! Every filter is a pure function of the current domains: it returns the
//! `(var, value)` pairs to remove and never mutates anything. When a
//! constraint has no support at all, its filter removes every value of its
//! scope, so failure always surfaces as an empty domain.

mod binary;
mod disjunction;
mod lex;
mod precedence;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::domain::{Assignment, DomainSet};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::{Value, Var};

pub use precedence::precedence_holds;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    #[inline]
    pub fn of(v: Value) -> Parity {
        if v % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    #[inline]
    pub fn matches(self, v: Value) -> bool {
        Parity::of(v) == self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// `[X₁..Xₙ] ≤lex [σ(X₁)..σ(Xₙ)]` over `scope` in order.
    LexLeqPermuted { perm: Permutation, scope: Vec<Var> },
    /// Within `class`, the first use of each value precedes the first use
    /// of the next one; unused values behave as if used after the end.
    Precedence { class: Vec<Value>, scope: Vec<Var> },
    /// `x = value → z ≤ bound`
    ImpEqLeq { x: Var, value: Value, z: Var, bound: Value },
    /// `z = index → x = value`
    ImpEqEq { z: Var, index: Value, x: Var, value: Value },
    /// `lhs < rhs`
    StrictLess { lhs: Var, rhs: Var },
    /// Some variable of `scope` takes `value`.
    DisjunctionEq { value: Value, scope: Vec<Var> },
    /// `parity(cond) = cond_parity → parity(target) = target_parity`
    ParityLink { cond: Var, cond_parity: Parity, target: Var, target_parity: Parity },
    /// The first `prefix` variables take at least `count` distinct values.
    /// Checked only once the prefix is fully assigned.
    AtLeastNValues { prefix: usize, count: usize },
    /// `parity(cond) = parity → inner`
    Conditional { cond: Var, parity: Parity, inner: Box<Constraint> },
}

impl Constraint {
    /// Stable name used in problem files and reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Constraint::LexLeqPermuted { .. } => "lex_leq_permuted",
            Constraint::Precedence { .. } => "precedence",
            Constraint::ImpEqLeq { .. } => "imp_eq_leq",
            Constraint::ImpEqEq { .. } => "imp_eq_eq",
            Constraint::StrictLess { .. } => "strict_less",
            Constraint::DisjunctionEq { .. } => "disjunction_eq",
            Constraint::ParityLink { .. } => "parity_link",
            Constraint::AtLeastNValues { .. } => "at_least_n_values",
            Constraint::Conditional { .. } => "conditional",
        }
    }

    /// Variables the constraint mentions, without repetition.
    pub fn scope(&self) -> Vec<Var> {
        match self {
            Constraint::LexLeqPermuted { scope, .. }
            | Constraint::Precedence { scope, .. }
            | Constraint::DisjunctionEq { scope, .. } => scope.clone(),
            Constraint::ImpEqLeq { x, z, .. } | Constraint::ImpEqEq { x, z, .. } => vec![*x, *z],
            Constraint::StrictLess { lhs, rhs } => vec![*lhs, *rhs],
            Constraint::ParityLink { cond, target, .. } => vec![*cond, *target],
            Constraint::AtLeastNValues { prefix, .. } => (0..*prefix).collect(),
            Constraint::Conditional { cond, inner, .. } => {
                let mut s = vec![*cond];
                s.extend(inner.scope().into_iter().filter(|v| v != cond));
                s
            }
        }
    }

    pub fn is_binary(&self) -> bool {
        matches!(
            self,
            Constraint::ImpEqLeq { .. }
                | Constraint::ImpEqEq { .. }
                | Constraint::StrictLess { .. }
                | Constraint::ParityLink { .. }
        )
    }

    /// Satisfaction on a total assignment given as a value vector.
    pub fn check(&self, values: &[Value]) -> bool {
        self.eval(&|var| values.get(var).copied()).expect("total assignment covers the scope")
    }

    /// `None` unless every scope variable is assigned.
    pub fn check_partial(&self, a: &Assignment) -> Option<bool> {
        self.eval(&|var| a.get(var))
    }

    pub(crate) fn eval(&self, get: &dyn Fn(Var) -> Option<Value>) -> Option<bool> {
        let gather = |scope: &[Var]| scope.iter().map(|&v| get(v)).collect::<Option<Vec<_>>>();
        Some(match self {
            Constraint::LexLeqPermuted { perm, scope } => {
                let xs = gather(scope)?;
                let image: Vec<Value> = xs.iter().map(|&v| perm.apply(v)).collect();
                xs <= image
            }
            Constraint::Precedence { class, scope } => precedence_holds(class, &gather(scope)?),
            Constraint::ImpEqLeq { x, value, z, bound } => {
                let (xv, zv) = (get(*x)?, get(*z)?);
                xv != *value || zv <= *bound
            }
            Constraint::ImpEqEq { z, index, x, value } => {
                let (zv, xv) = (get(*z)?, get(*x)?);
                zv != *index || xv == *value
            }
            Constraint::StrictLess { lhs, rhs } => get(*lhs)? < get(*rhs)?,
            Constraint::DisjunctionEq { value, scope } => gather(scope)?.contains(value),
            Constraint::ParityLink { cond, cond_parity, target, target_parity } => {
                let (c, t) = (get(*cond)?, get(*target)?);
                !cond_parity.matches(c) || target_parity.matches(t)
            }
            Constraint::AtLeastNValues { prefix, count } => {
                let xs = gather(&(0..*prefix).collect::<Vec<_>>())?;
                xs.iter().collect::<HashSet<_>>().len() >= *count
            }
            Constraint::Conditional { cond, parity, inner } => {
                let c = get(*cond)?;
                let inner_holds = inner.eval(get)?;
                !parity.matches(c) || inner_holds
            }
        })
    }

    /// Values to remove from `d`. GAC for every kind except
    /// [`Constraint::AtLeastNValues`] (ground check only) and
    /// [`Constraint::Conditional`] (propagates its inner constraint once the
    /// condition is entailed by the parity of the whole condition domain).
    pub fn filter(&self, d: &DomainSet) -> Vec<(Var, Value)> {
        match self {
            Constraint::LexLeqPermuted { perm, scope } => lex::filter(perm, scope, d),
            Constraint::Precedence { class, scope } => precedence::filter(class, scope, d),
            Constraint::ImpEqLeq { x, value, z, bound } => binary::imp_eq_leq(*x, *value, *z, *bound, d),
            Constraint::ImpEqEq { z, index, x, value } => binary::imp_eq_eq(*z, *index, *x, *value, d),
            Constraint::StrictLess { lhs, rhs } => binary::strict_less(*lhs, *rhs, d),
            Constraint::ParityLink { cond, cond_parity, target, target_parity } => {
                binary::parity_link(*cond, *cond_parity, *target, *target_parity, d)
            }
            Constraint::DisjunctionEq { value, scope } => disjunction::filter(*value, scope, d),
            Constraint::AtLeastNValues { prefix, count } => {
                let scope: Vec<Var> = (0..*prefix).collect();
                let fixed: Option<HashSet<Value>> = scope.iter().map(|&v| d.fixed_value(v)).collect();
                match fixed {
                    Some(vals) if vals.len() < *count => remove_all(&scope, d),
                    _ => Vec::new(),
                }
            }
            Constraint::Conditional { cond, parity, inner } => {
                if condition_entailed(*cond, *parity, d) {
                    inner.filter(d)
                } else {
                    Vec::new()
                }
            }
        }
    }

    pub(crate) fn validate(&self, index: usize, num_vars: usize, max_value: Value) -> Result<()> {
        let bad = |reason: String| Error::MalformedConstraint { index, reason };
        for var in self.scope() {
            if var >= num_vars {
                return Err(Error::VarOutOfRange { var, num_vars });
            }
        }
        let distinct = |scope: &[Var]| scope.iter().collect::<HashSet<_>>().len() == scope.len();
        match self {
            Constraint::LexLeqPermuted { scope, .. } | Constraint::DisjunctionEq { scope, .. } if !distinct(scope) => {
                Err(bad("scope repeats a variable".into()))
            }
            Constraint::LexLeqPermuted { perm, .. } if (1..=max_value).any(|v| perm.apply(v) > max_value) => {
                Err(bad(format!("permutation {perm:?} moves values outside 1..={max_value}")))
            }
            Constraint::DisjunctionEq { scope, .. } if scope.is_empty() => Err(bad("empty scope".into())),
            Constraint::Precedence { class, scope } => {
                if !distinct(scope) {
                    return Err(bad("scope repeats a variable".into()));
                }
                if class.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(bad("class values must be strictly ascending".into()));
                }
                if let Some(&v) = class.iter().find(|&&v| v == 0 || v > max_value) {
                    return Err(Error::ValueOutOfRange { value: v, max: max_value });
                }
                Ok(())
            }
            Constraint::ImpEqLeq { x, z, .. } | Constraint::ImpEqEq { x, z, .. } if x == z => {
                Err(bad("binary constraint on a single variable".into()))
            }
            Constraint::StrictLess { lhs, rhs } if lhs == rhs => {
                Err(bad("binary constraint on a single variable".into()))
            }
            Constraint::ParityLink { cond, target, .. } if cond == target => {
                Err(bad("binary constraint on a single variable".into()))
            }
            Constraint::AtLeastNValues { prefix, .. } if *prefix > num_vars => {
                Err(Error::VarOutOfRange { var: prefix - 1, num_vars })
            }
            Constraint::Conditional { inner, .. } => inner.validate(index, num_vars, max_value),
            _ => Ok(()),
        }
    }
}

/// Every value of the condition variable has the given parity.
pub fn condition_entailed(cond: Var, parity: Parity, d: &DomainSet) -> bool {
    !d.is_empty(cond) && d.values(cond).all(|v| parity.matches(v))
}

pub(crate) fn remove_all(scope: &[Var], d: &DomainSet) -> Vec<(Var, Value)> {
    scope.iter().flat_map(|&var| d.values(var).map(move |v| (var, v))).collect()
}
