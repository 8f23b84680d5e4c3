//! Static symmetry breaking for interchangeable values.
//!
//! A [`ValueClassPartition`] lists classes of interchangeable values. The
//! builders here turn it into constraint sets: lex constraints for the
//! adjacent transpositions, value precedence, and the dual-variable
//! channelling encoding. The full symmetry group is never posted as
//! constraints; its semantics is [`valsymbreak_full_holds`].

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::constraint::{precedence_holds, Constraint};
use crate::domain::DomainSet;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::problem::Problem;
use crate::{Value, Var};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Value>>", into = "Vec<Vec<Value>>")]
pub struct ValueClassPartition {
    classes: Vec<Vec<Value>>,
}

impl ValueClassPartition {
    pub fn new(classes: Vec<Vec<Value>>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for class in &classes {
            if class.is_empty() {
                return Err(Error::InvalidPartition("empty class".into()));
            }
            if class.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidPartition(format!("class {class:?} is not strictly ascending")));
            }
            for &v in class {
                if v == 0 {
                    return Err(Error::InvalidPartition("values start at 1".into()));
                }
                if !seen.insert(v) {
                    return Err(Error::InvalidPartition(format!("value {v} is in two classes")));
                }
            }
        }
        Ok(ValueClassPartition { classes })
    }

    /// One class holding `1..=m`.
    pub fn all_interchangeable(m: Value) -> Self {
        ValueClassPartition { classes: vec![(1..=m).collect()] }
    }

    pub fn classes(&self) -> &[Vec<Value>] {
        &self.classes
    }

    /// Sum of class sizes.
    pub fn total_size(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    pub fn class_of(&self, v: Value) -> Option<&[Value]> {
        self.classes.iter().find(|c| c.contains(&v)).map(Vec::as_slice)
    }

    pub(crate) fn check_within(&self, max_value: Value) -> Result<()> {
        match self.classes.iter().flatten().find(|&&v| v > max_value) {
            Some(&v) => Err(Error::ValueOutOfRange { value: v, max: max_value }),
            None => Ok(()),
        }
    }
}

impl TryFrom<Vec<Vec<Value>>> for ValueClassPartition {
    type Error = Error;
    fn try_from(classes: Vec<Vec<Value>>) -> Result<Self> {
        ValueClassPartition::new(classes)
    }
}

impl From<ValueClassPartition> for Vec<Vec<Value>> {
    fn from(p: ValueClassPartition) -> Self {
        p.classes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryKind {
    FullGroup,
    AdjacentGenerators,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetrySet {
    pub kind: SymmetryKind,
    pub perms: Vec<Permutation>,
}

impl SymmetrySet {
    pub fn custom(perms: Vec<Permutation>) -> Self {
        SymmetrySet { kind: SymmetryKind::Custom, perms }
    }

    /// Every class-respecting permutation of `1..=m`, identity included.
    /// Its size is the product of the class factorials; only meant for
    /// small partitions.
    pub fn full_group(p: &ValueClassPartition, m: Value) -> Self {
        let mut perms = vec![Permutation::identity(m)];
        for class in p.classes() {
            let mut next = Vec::new();
            for arrangement in class.iter().copied().permutations(class.len()) {
                let mut images: Vec<Value> = (1..=m).collect();
                for (&from, &to) in class.iter().zip(&arrangement) {
                    images[from - 1] = to;
                }
                let local = Permutation::from_images(&images).expect("class arrangement is a bijection");
                next.extend(perms.iter().map(|g| local.compose(g)));
            }
            perms = next;
        }
        SymmetrySet { kind: SymmetryKind::FullGroup, perms }
    }
}

/// The transpositions of neighbouring values inside each class:
/// `m − k` of them for `m` classified values in `k` classes.
pub fn adjacent_generators(p: &ValueClassPartition, m: Value) -> SymmetrySet {
    let perms = p
        .classes()
        .iter()
        .flat_map(|class| class.windows(2).map(|w| Permutation::transposition(m, w[0], w[1])))
        .collect();
    SymmetrySet { kind: SymmetryKind::AdjacentGenerators, perms }
}

/// `a ≤lex σ(a)` for every σ in `s`.
pub fn valsymbreak_holds(a: &[Value], s: &SymmetrySet) -> bool {
    s.perms.iter().all(|perm| {
        let image: Vec<Value> = a.iter().map(|&v| perm.apply(v)).collect();
        a <= image.as_slice()
    })
}

/// Symmetry breaking for the whole class group: inside every class, values
/// are first used in ascending order.
pub fn valsymbreak_full_holds(a: &[Value], p: &ValueClassPartition) -> bool {
    p.classes().iter().all(|class| precedence_holds(class, a))
}

/// One lex constraint per permutation, over `scope` in order.
pub fn build_lex(s: &SymmetrySet, scope: &[Var]) -> Vec<Constraint> {
    s.perms.iter().map(|perm| Constraint::LexLeqPermuted { perm: perm.clone(), scope: scope.to_vec() }).collect()
}

/// Lex constraints for the adjacent generators over all variables of `prob`.
pub fn build_generator_lex(prob: &Problem, p: &ValueClassPartition) -> Vec<Constraint> {
    let scope: Vec<Var> = (0..prob.num_vars()).collect();
    build_lex(&adjacent_generators(p, prob.max_value()), &scope)
}

/// One precedence constraint per class with at least two values.
pub fn build_precedence(prob: &Problem, p: &ValueClassPartition) -> Vec<Constraint> {
    let scope: Vec<Var> = (0..prob.num_vars()).collect();
    p.classes()
        .iter()
        .filter(|class| class.len() >= 2)
        .map(|class| Constraint::Precedence { class: class.clone(), scope: scope.clone() })
        .collect()
}

/// Relabels each class in order of first occurrence in `a`. Unused class
/// values follow the used ones in ascending order.
pub fn canonical_form(a: &[Value], p: &ValueClassPartition) -> Vec<Value> {
    let mut out = a.to_vec();
    for class in p.classes() {
        let mut order: Vec<Value> = Vec::with_capacity(class.len());
        for &v in a {
            if class.contains(&v) && !order.contains(&v) {
                order.push(v);
            }
        }
        for (slot, x) in out.iter_mut().enumerate() {
            if let Some(rank) = order.iter().position(|&v| v == a[slot]) {
                *x = class[rank];
            }
        }
    }
    out
}

/// How the dual encoding handles values that are never used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PugetVariant {
    /// `Z_j` may take `n + j`, meaning `j` is unused.
    #[default]
    DummyValue,
    /// `m` extra variables `X_{n+i} = i` make every value used.
    Surjection,
}

/// The original problem extended with one dual variable `Z_j` per value,
/// where `Z_j` is the first (1-based) position using `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PugetEncoding {
    pub problem: Problem,
    pub variant: PugetVariant,
    original_vars: usize,
    // positions channelled into the duals
    positions: usize,
    values: Value,
}

impl PugetEncoding {
    pub fn original_vars(&self) -> usize {
        self.original_vars
    }

    pub fn dual_var(&self, value: Value) -> Var {
        self.positions + value - 1
    }

    pub fn is_dual(&self, var: Var) -> bool {
        var >= self.positions
    }

    pub fn values(&self) -> Value {
        self.values
    }

    /// Original variables' part of an encoding solution.
    pub fn project(&self, solution: &[Value]) -> Vec<Value> {
        solution[..self.original_vars].to_vec()
    }

    /// Encoding domains with the original variables set to `x_domains`.
    pub fn lift_domains(&self, x_domains: &DomainSet) -> DomainSet {
        let mut lists = self.problem.domains().to_lists();
        for (var, list) in lists.iter_mut().enumerate().take(self.original_vars) {
            *list = x_domains.values(var).collect();
        }
        DomainSet::from_lists(self.problem.max_value(), &lists).expect("original values stay in range")
    }

    /// Restricts encoding domains to the original variables.
    pub fn project_domains(&self, d: &DomainSet) -> DomainSet {
        let lists: Vec<Vec<Value>> = (0..self.original_vars).map(|v| d.values(v).collect()).collect();
        DomainSet::from_lists(self.values, &lists).expect("original values stay in range")
    }
}

pub fn build_puget(prob: &Problem, p: &ValueClassPartition) -> PugetEncoding {
    build_puget_with(prob, p, PugetVariant::DummyValue)
}

pub fn build_puget_with(prob: &Problem, p: &ValueClassPartition, variant: PugetVariant) -> PugetEncoding {
    let n = prob.num_vars();
    let m = prob.max_value();
    let mut lists = prob.domains().to_lists();
    if variant == PugetVariant::Surjection {
        lists.extend((1..=m).map(|v| vec![v]));
    }
    let positions = lists.len();
    for j in 1..=m {
        let mut dom: Vec<Value> = (1..=positions).collect();
        if variant == PugetVariant::DummyValue {
            dom.push(positions + j);
        }
        lists.push(dom);
    }
    let max_value = match variant {
        PugetVariant::DummyValue => positions + m,
        PugetVariant::Surjection => positions.max(m),
    };
    let domains = DomainSet::from_lists(max_value, &lists).expect("encoding values in range");

    let z = |j: Value| positions + j - 1;
    let mut constraints = prob.constraints().to_vec();
    for i in 1..=positions {
        for j in 1..=m {
            let x = i - 1;
            constraints.push(Constraint::ImpEqLeq { x, value: j, z: z(j), bound: i });
            constraints.push(Constraint::ImpEqEq { z: z(j), index: i, x, value: j });
        }
    }
    for class in p.classes() {
        for w in class.windows(2) {
            constraints.push(Constraint::StrictLess { lhs: z(w[0]), rhs: z(w[1]) });
        }
    }
    let problem = Problem::new(domains, constraints, None).expect("encoding is well formed");
    PugetEncoding { problem, variant, original_vars: n, positions, values: m }
}
